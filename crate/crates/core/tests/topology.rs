use std::collections::{BTreeMap, BTreeSet};

use fracmirror::lattice::LatticePolytope;
use fracmirror::topology::{
    dk_intersection_euler, euler_double_cover, euler_mpcp, euler_snc_union_oracle,
};
use fracmirror::NefPartitionData;

fn hull(pts: &[&[i64]]) -> LatticePolytope {
    LatticePolytope::convex_hull(pts, pts[0].len()).unwrap()
}

fn p2() -> LatticePolytope {
    hull(&[&[2, -1], &[-1, 2], &[-1, -1]])
}

fn p3() -> LatticePolytope {
    hull(&[&[3, -1, -1], &[-1, 3, -1], &[-1, -1, 3], &[-1, -1, -1]])
}

#[test]
fn k3_from_p2() {
    let data = NefPartitionData::new(p2(), vec![vec![0, 1, 2]]).unwrap();
    let t = euler_double_cover(&data).unwrap();
    assert_eq!(
        (t.chi_x, t.chi_x_dual, t.chi_y, t.chi_y_dual),
        (3, 9, 12, 12)
    );
    assert_eq!(t.hodge.get(1, 1), Some(8));
}

#[test]
fn quartic_branch_on_p3() {
    let data = NefPartitionData::new(p3(), vec![vec![3, 2, 1, 0]]).unwrap();
    let t = euler_double_cover(&data).unwrap();
    assert_eq!((t.chi_x, t.chi_x_dual, t.vol_lambda), (4, 64, 64));
    assert_eq!((t.chi_y, t.chi_y_dual), (-60, 60));
    assert_eq!((t.hodge.get(1, 1), t.hodge.get(2, 1)), (Some(1), Some(31)));
    assert_eq!(
        (t.hodge_dual.get(1, 1), t.hodge_dual.get(2, 1)),
        (Some(31), Some(1))
    );
    for (p, q) in [(1, 0), (0, 1), (2, 0), (0, 2)] {
        assert_eq!(t.hodge.get(p, q), Some(0));
    }
}

#[test]
fn eight_hyperplanes_self_consistent() {
    let data = NefPartitionData::new(p3(), vec![vec![0], vec![1], vec![2], vec![3]]).unwrap();
    let t = euler_double_cover(&data).unwrap();
    assert_eq!(t.vol_lambda, t.chi_x_dual);
    assert_eq!(t.chi_y, 4 - t.chi_x_dual);
}

#[test]
fn dk_single_hypersurfaces() {
    let line = hull(&[&[0, 0], &[1, 0], &[0, 1]]);
    let cubic = hull(&[&[0, 0], &[3, 0], &[0, 3]]);
    let quartic = hull(&[&[0, 0, 0], &[4, 0, 0], &[0, 4, 0], &[0, 0, 4]]);
    assert_eq!(dk_intersection_euler(&[line], 2).unwrap(), -1);
    assert_eq!(dk_intersection_euler(&[cubic], 2).unwrap(), -9);
    assert_eq!(dk_intersection_euler(&[quartic], 3).unwrap(), 64);
}

#[test]
fn euler_mpcp_values() {
    let nabla = hull(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[-1, -1, -1]]);
    assert_eq!(euler_mpcp(&p3()).unwrap(), 4);
    assert_eq!(euler_mpcp(&nabla).unwrap(), 64);
    assert_eq!(
        euler_mpcp(&hull(&[&[1, 0], &[0, 1], &[-1, -1]])).unwrap(),
        9
    );
}

/// Strata of the quartic K3 `D` and the four coordinate planes of P³.
pub fn quartic_strata() -> BTreeMap<BTreeSet<String>, i64> {
    let names = ["D", "D1", "D2", "D3", "D4"];
    let mut t = BTreeMap::new();
    for mask in 1u32..32 {
        let set: BTreeSet<String> = (0..5)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| names[i].to_string())
            .collect();
        let planes = set.iter().filter(|s| *s != "D").count();
        let chi = match (set.contains("D"), planes) {
            (true, 0) => 24,
            (true, 1) => -4,
            (true, 2) => 4,
            (true, _) => 0,
            (false, 1) => 3,
            (false, 2) => 2,
            (false, 3) => 1,
            (false, _) => 0,
        };
        t.insert(set, chi);
    }
    t
}

#[test]
fn snc_oracle_reproduces_quartic_cover() {
    let r = euler_snc_union_oracle(4, &["D", "D1", "D2", "D3", "D4"], &quartic_strata()).unwrap();
    assert_eq!(r.chi_branch, 68);
    assert_eq!(r.chi_y, -60);
}
