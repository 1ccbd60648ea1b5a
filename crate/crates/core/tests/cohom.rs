use fracmirror::cohom::{
    align_scale, b_series, deformed_solution, frobenius_residue, i_function_mirror_map,
    i_function_untwisted, with_log_prefactor, CohomRing,
};
use fracmirror::gkz::{build_gkz, holo_solution, GkzData, KernelShape};
use fracmirror::mirror::frobenius_pair;
use fracmirror::picard_fuchs::{theta_conjugate, ThetaOperator};
use fracmirror::rational::int;
use fracmirror::series::EpsPoly;
use fracmirror::{LatticePolytope, NefPartitionData};
use num_traits::{One, Zero};

fn p3() -> LatticePolytope {
    LatticePolytope::convex_hull(&[[3, -1, -1], [-1, 3, -1], [-1, -1, 3], [-1, -1, -1]], 3).unwrap()
}

fn setup(parts: Vec<Vec<usize>>) -> (GkzData, Vec<i64>, KernelShape, ThetaOperator) {
    let data = NefPartitionData::new(p3(), parts).unwrap();
    let gkz = build_gkz(&data).unwrap();
    let ell = gkz.principal_kernel_vector().unwrap();
    let shape = gkz.shape(&ell).unwrap();
    let op = theta_conjugate(&shape).unwrap();
    (gkz, ell, shape, op)
}

fn quartic() -> (GkzData, Vec<i64>, KernelShape, ThetaOperator) {
    setup(vec![vec![3, 2, 1, 0]])
}

fn eight() -> (GkzData, Vec<i64>, KernelShape, ThetaOperator) {
    setup(vec![vec![0], vec![1], vec![2], vec![3]])
}

#[test]
fn residue_is_pure_indicial_power() {
    for (_, _, shape, op) in [quartic(), eight()] {
        let f = deformed_solution(&shape, 8, 5);
        let r = frobenius_residue(&op, &f, 5).unwrap();
        assert_eq!(r.coeff(0), {
            let e = EpsPoly::eps(5);
            e.clone() * e.clone() * e.clone() * e
        });
        for n in 1..=8 {
            assert!(r.coeff(n).is_zero(), "z^{n}");
        }
    }
}

#[test]
fn residue_reports_offenders_for_wrong_operator() {
    let (_, _, shape, op) = quartic();
    let f = deformed_solution(&shape, 4, 5);
    let bad = op.rescale_z(&int(2));
    let err = frobenius_residue(&bad, &f, 5).unwrap_err();
    assert!(err.is_assertion());
    assert!(err.to_string().contains("(1, 0)"));
}

#[test]
fn deformed_solution_specializes_to_holomorphic_period() {
    let (_, _, shape, _) = quartic();
    let f = deformed_solution(&shape, 10, 4);
    let w0 = holo_solution(&shape, 10);
    assert_eq!(f.map(|c| c.coeff(0)), w0);
}

#[test]
fn b_series_is_annihilated_and_matches_deformation() {
    for (gkz, ell, shape, op) in [quartic(), eight()] {
        let ring = CohomRing::from_kernel(&ell, 4, int(2));
        assert!(ring.relations_hold(&gkz));
        let b = b_series(&ring, &gkz, &ell, 8).unwrap();
        assert!(op.apply_log(&b).is_zero());
        assert_eq!(b, with_log_prefactor(&deformed_solution(&shape, 8, 4), 4));
    }
}

#[test]
fn i_function_mirror_map_agrees_with_frobenius() {
    let cases: [(&[u32], &[u32], _); 2] = [
        (&[8], &[1, 1, 1, 1, 4], quartic()),
        (&[2, 2, 2, 2], &[1; 8], eight()),
    ];
    for (num, den, (_, _, shape, _)) in cases {
        let n = 7;
        let i = i_function_untwisted(num, den, 4, n);
        let mm = i_function_mirror_map(&i).unwrap();
        let pair = frobenius_pair(&shape, n).unwrap();
        let s = align_scale(&mm.a, &pair.omega0).unwrap();
        assert_eq!(s, int(256));
        let ratio = pair.tau.div(&pair.omega0).unwrap().rescale(&s);
        assert_eq!(mm.b_over_a, ratio);
    }
}

#[test]
fn relabelled_i_function_is_identical() {
    let a = i_function_untwisted(&[2, 2, 2, 2], &[1; 8], 4, 5);
    let b = i_function_untwisted(&[2, 2, 2, 2], &[1, 1, 1, 1, 1, 1, 1, 1], 4, 5);
    assert_eq!(a, b);
    assert_eq!(a.part(0).coeff(0), EpsPoly::one().truncate(4));
}

#[test]
fn weighted_projective_operator_is_a_rescaling() {
    let (_, _, _, op) = quartic();
    let w = op.rescale_z(&int(256));
    let shape = KernelShape::from_blocks(vec![fracmirror::gkz::KernelBlock {
        k: 8,
        alpha0: int(-1),
        ells: vec![1, 1, 1, 1, 4],
    }]);
    let direct = i_function_untwisted(&[8], &[1, 1, 1, 1, 4], 1, 8)
        .part(0)
        .map(|c| c.coeff(0));
    assert_eq!(direct, holo_solution(&shape, 8));
    assert!(w.apply(&direct).is_zero());
}

#[test]
fn weights_follow_from_the_kernel_shape() {
    let (_, _, shape, _) = quartic();
    assert_eq!(
        fracmirror::cohom::i_function_weights(&shape).unwrap(),
        (vec![8], vec![1, 1, 1, 1, 4])
    );
    let (_, _, shape, _) = eight();
    assert_eq!(
        fracmirror::cohom::i_function_weights(&shape).unwrap(),
        (vec![2, 2, 2, 2], vec![1; 8])
    );
}
