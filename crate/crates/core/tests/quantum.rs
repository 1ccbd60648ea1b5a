use fracmirror::gkz::{build_gkz, holo_solution};
use fracmirror::mirror::{a_model_correlation, frobenius_pair, mirror_map};
use fracmirror::picard_fuchs::theta_conjugate;
use fracmirror::rational::int;
use fracmirror::{LatticePolytope, NefPartitionData};

fn p3() -> LatticePolytope {
    LatticePolytope::convex_hull(&[[3, -1, -1], [-1, 3, -1], [-1, -1, 3], [-1, -1, -1]], 3).unwrap()
}

#[test]
fn quartic_pipeline() {
    let data = NefPartitionData::new(p3(), vec![vec![3, 2, 1, 0]]).unwrap();
    let gkz = build_gkz(&data).unwrap();
    let ell = gkz.principal_kernel_vector().unwrap();
    assert_eq!(ell, vec![-4, 1, 1, 1, 1]);
    let shape = gkz.shape(&ell).unwrap();
    let op = theta_conjugate(&shape).unwrap();
    assert!(op.apply(&holo_solution(&shape, 12)).is_zero());
    let pair = frobenius_pair(&shape, 7).unwrap();
    let mm = mirror_map(&pair).unwrap();
    println!("q(z) = {:?}", mm.q_of_z);
    println!("z(q) = {:?}", mm.z_of_q);
    let y = a_model_correlation(&op, &pair, &int(2)).unwrap();
    println!("K(q) = {:?}", y.k_q);
}

#[test]
fn eight_hyperplanes_pipeline() {
    let data = NefPartitionData::new(p3(), vec![vec![0], vec![1], vec![2], vec![3]]).unwrap();
    let gkz = build_gkz(&data).unwrap();
    let ell = gkz.principal_kernel_vector().unwrap();
    println!("ℓ = {ell:?}");
    let shape = gkz.shape(&ell).unwrap();
    let op = theta_conjugate(&shape).unwrap();
    println!("{op}");
    let pair = frobenius_pair(&shape, 7).unwrap();
    let y = a_model_correlation(&op, &pair, &int(2)).unwrap();
    println!("K(q) = {:?}", y.k_q);
}
