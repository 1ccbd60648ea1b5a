//! Euler characteristics of double covers branched along nef-partitions.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::LatticePolytope;
use crate::nef::NefPartitionData;

fn small(x: BigInt, what: &'static str) -> Result<i64> {
    x.to_i64().ok_or(Error::Overflow(what))
}

/// Euler characteristic of the MPCP resolution of `P_Δ`: the normalized volume of `Δ∨`.
pub fn euler_mpcp(delta: &LatticePolytope) -> Result<i64> {
    if !delta.is_reflexive() {
        return Err(Error::NotReflexive);
    }
    small(
        delta.polar_dual()?.normalized_volume()?,
        "normalized volume",
    )
}

/// Pyramid with apex 0 over the Cayley polytope of the given polytopes.
pub fn cayley_pyramid(polytopes: &[LatticePolytope]) -> Result<LatticePolytope> {
    LatticePolytope::cayley(polytopes)?.pyramid_over()
}

/// Danilov–Khovanskii: Euler characteristic of `D₁ ∩ ⋯ ∩ D_r ∩ T` for generic
/// sections with Newton polytopes `polytopes`, living in a lattice of rank `n`.
pub fn dk_intersection_euler(polytopes: &[LatticePolytope], n: usize) -> Result<i64> {
    let r = polytopes.len();
    let terms: Vec<Result<BigInt>> = (1u64..1 << r)
        .into_par_iter()
        .map(|mask| {
            let sub: Vec<LatticePolytope> = (0..r)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| polytopes[i].clone())
                .collect();
            let vol = cayley_pyramid(&sub)?.normalized_volume()?;
            // -(-1)^{n+|I|-1} vol
            Ok(if (n + sub.len()).is_multiple_of(2) {
                vol
            } else {
                -vol
            })
        })
        .collect();
    let mut total = BigInt::from(0);
    for t in terms {
        total += t?;
    }
    small(total, "Danilov–Khovanskii sum")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverTopology {
    pub n: usize,
    pub chi_x: i64,
    pub chi_x_dual: i64,
    pub vol_lambda: i64,
    pub chi_y: i64,
    pub chi_y_dual: i64,
    pub hodge: HodgeTable,
    pub hodge_dual: HodgeTable,
}

fn sign(n: usize) -> i64 {
    if n.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Topological test for the double cover `Y → X` and its mirror `Y∨ → X∨`.
///
/// Fails with an assertion error when `vol(Λ) ≠ χ(X∨)`, which signals that the
/// smoothness hypothesis on `X∨` is violated.
pub fn euler_double_cover(data: &NefPartitionData) -> Result<CoverTopology> {
    let n = data.n();
    let chi_x = euler_mpcp(data.delta())?;
    let chi_x_dual = euler_mpcp(data.nabla())?;
    let vol_lambda = small(
        cayley_pyramid(data.parts_delta())?.normalized_volume()?,
        "normalized volume",
    )?;
    if vol_lambda != chi_x_dual {
        return Err(Error::Assertion(format!(
            "vol(Λ) ≠ χ(X∨): {vol_lambda} vs {chi_x_dual}"
        )));
    }
    let chi_y = chi_x + sign(n) * chi_x_dual;
    let dual = data.dual()?;
    let vol_lambda_dual = small(
        cayley_pyramid(dual.parts_delta())?.normalized_volume()?,
        "normalized volume",
    )?;
    if vol_lambda_dual != chi_x {
        return Err(Error::Assertion(format!(
            "vol(Λ∨) ≠ χ(X): {vol_lambda_dual} vs {chi_x}"
        )));
    }
    let chi_y_dual = chi_x_dual + sign(n) * chi_x;
    if chi_y != sign(n) * chi_y_dual {
        return Err(Error::Assertion(format!(
            "χ(Y) ≠ (-1)^n χ(Y∨): {chi_y} vs {chi_y_dual}"
        )));
    }
    Ok(CoverTopology {
        n,
        chi_x,
        chi_x_dual,
        vol_lambda,
        chi_y,
        chi_y_dual,
        hodge: hodge_numbers(data, chi_y)?,
        hodge_dual: hodge_numbers(&dual, chi_y_dual)?,
    })
}

/// Result of the inclusion–exclusion cross-check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SncUnion {
    pub chi_branch: i64,
    pub chi_y: i64,
}

/// Euler characteristic of a simple normal crossing union by inclusion–exclusion,
/// and `χ(Y) = 2χ(X) − χ(D)` for the double cover branched along it.
///
/// `strata` maps each nonempty set of divisor names to the Euler characteristic of
/// their intersection; every nonempty subset must be present.
pub fn euler_snc_union_oracle(
    chi_x: i64,
    divisors: &[&str],
    strata: &BTreeMap<BTreeSet<String>, i64>,
) -> Result<SncUnion> {
    let k = divisors.len();
    let mut missing = Vec::new();
    let mut total = 0i64;
    for mask in 1u64..1 << k {
        let key: BTreeSet<String> = (0..k)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| divisors[i].to_string())
            .collect();
        match strata.get(&key) {
            Some(&chi) => {
                if key.len() % 2 == 1 {
                    total += chi;
                } else {
                    total -= chi;
                }
            }
            None => missing.push(key.into_iter().collect()),
        }
    }
    if !missing.is_empty() {
        return Err(Error::MissingStrata(missing));
    }
    Ok(SncUnion {
        chi_branch: total,
        chi_y: 2 * chi_x - total,
    })
}

/// Hodge numbers `h^{p,q}`; entries that are not determined are absent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HodgeTable {
    pub n: usize,
    pub entries: BTreeMap<String, i64>,
}

impl HodgeTable {
    pub fn get(&self, p: usize, q: usize) -> Option<i64> {
        self.entries.get(&format!("{p}{q}")).copied()
    }

    fn set(&mut self, p: usize, q: usize, v: i64) {
        self.entries.insert(format!("{p}{q}"), v);
    }

    pub fn middle_determined(&self) -> bool {
        (0..=self.n).all(|p| self.get(p, self.n - p).is_some())
    }
}

/// Hodge numbers of `Y` from those of the toric base and `χ(Y)`.
///
/// For `p + q ≠ n` the numbers agree with the base, where `h^{1,1}` is the number
/// of boundary lattice points of `Δ∨` minus `n`. The middle row is fixed by `χ`
/// for `n ≤ 3`; for larger `n` it is left out, and [`hodge_middle_error`] reports it.
pub fn hodge_numbers(data: &NefPartitionData, chi: i64) -> Result<HodgeTable> {
    let n = data.n();
    let pts = data.delta().polar_dual()?.lattice_points()?;
    let h11 = pts.boundary.len() as i64 - n as i64;
    let mut t = HodgeTable {
        n,
        entries: BTreeMap::new(),
    };
    for p in 0..=n {
        for q in 0..=n {
            if p + q == n {
                continue;
            }
            let v = if p != q {
                Some(0)
            } else if p == 0 || p == n {
                Some(1)
            } else if p == 1 || p == n - 1 {
                Some(h11)
            } else {
                None
            };
            if let Some(v) = v {
                t.set(p, q, v);
            }
        }
    }
    match n {
        2 => {
            t.set(2, 0, 1);
            t.set(0, 2, 1);
            t.set(1, 1, chi - 4);
        }
        3 => {
            t.set(3, 0, 1);
            t.set(0, 3, 1);
            let h21 = h11 - chi / 2;
            t.set(2, 1, h21);
            t.set(1, 2, h21);
        }
        _ => {}
    }
    Ok(t)
}

/// The error to report when the middle Hodge numbers are not determined.
pub fn hodge_middle_error(t: &HodgeTable) -> Option<Error> {
    (!t.middle_determined()).then_some(Error::HodgeUndetermined(t.n))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hull(pts: &[&[i64]]) -> LatticePolytope {
        LatticePolytope::convex_hull(pts, pts[0].len()).unwrap()
    }

    #[test]
    fn two_lines_meet_in_a_point() {
        let h = hull(&[&[0, 0], &[1, 0], &[0, 1]]);
        assert_eq!(
            dk_intersection_euler(std::slice::from_ref(&h), 2).unwrap(),
            -1
        );
        assert_eq!(dk_intersection_euler(&[h.clone(), h], 2).unwrap(), 1);
    }

    #[test]
    fn snc_empty_and_single() {
        let empty = BTreeMap::new();
        assert_eq!(euler_snc_union_oracle(4, &[], &empty).unwrap().chi_y, 8);
        let mut one = BTreeMap::new();
        one.insert(BTreeSet::from(["D".to_string()]), 24);
        assert_eq!(euler_snc_union_oracle(4, &["D"], &one).unwrap().chi_y, -16);
        let err = euler_snc_union_oracle(4, &["D", "E"], &one).unwrap_err();
        assert!(matches!(err, Error::MissingStrata(m) if m.len() == 2));
    }
}
