//! Nef-partitions of reflexive polytopes and Batyrev–Borisov duality.

use crate::error::{Error, Result};
use crate::lattice::{Facet, LatticePolytope};

/// A reflexive polytope `Δ` with a partition of the vertices of `Δ∨` (the rays of its
/// normal fan), together with everything derived from it.
///
/// Parts are index lists into the lexicographically sorted vertices of `Δ∨`. The order
/// of indices inside a part is kept, since it fixes column order downstream.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NefPartitionData {
    delta: LatticePolytope,
    rays: Vec<Vec<i64>>,
    parts: Vec<Vec<usize>>,
    parts_delta: Vec<LatticePolytope>,
    nabla_parts: Vec<LatticePolytope>,
    nabla: LatticePolytope,
    nabla_dual: LatticePolytope,
}

/// Outcome of a single invariant check.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: Option<String>,
}

fn check(name: &'static str, passed: bool, detail: impl FnOnce() -> String) -> Check {
    Check {
        name,
        passed,
        detail: (!passed).then(detail),
    }
}

fn check_partition(parts: &[Vec<usize>], n_rays: usize) -> Result<()> {
    if parts.is_empty() {
        return Err(Error::InvalidPartition("no parts".into()));
    }
    let mut seen = vec![false; n_rays];
    for (i, part) in parts.iter().enumerate() {
        if part.is_empty() {
            return Err(Error::InvalidPartition(format!("part {i} is empty")));
        }
        for &k in part {
            if k >= n_rays {
                return Err(Error::InvalidPartition(format!(
                    "ray index {k} out of range (Δ∨ has {n_rays} vertices)"
                )));
            }
            if seen[k] {
                return Err(Error::InvalidPartition(format!(
                    "not a partition: ray {k} repeated"
                )));
            }
            seen[k] = true;
        }
    }
    if let Some(k) = seen.iter().position(|s| !s) {
        return Err(Error::InvalidPartition(format!(
            "not a partition: ray {k} missing"
        )));
    }
    Ok(())
}

/// `Δᵢ = {m : <m, ρ> >= -1 for ρ ∈ Iᵢ, <m, ρ> >= 0 otherwise}`.
pub fn polytope_of_part(
    delta: &LatticePolytope,
    parts: &[Vec<usize>],
    i: usize,
) -> Result<LatticePolytope> {
    let dual = delta.polar_dual()?;
    let rays = dual.vertices();
    let part = parts
        .get(i)
        .ok_or_else(|| Error::InvalidPartition(format!("part index {i} out of range")))?;
    if part.is_empty() {
        return Err(Error::InvalidPartition(format!("part {i} is empty")));
    }
    let ineqs: Vec<Facet> = rays
        .iter()
        .enumerate()
        .map(|(k, r)| Facet {
            normal: r.clone(),
            offset: i64::from(part.contains(&k)),
        })
        .collect();
    LatticePolytope::from_inequalities(&ineqs, delta.ambient_dim())
}

fn minkowski_all(polys: &[LatticePolytope]) -> Result<LatticePolytope> {
    let mut acc = polys[0].clone();
    for p in &polys[1..] {
        acc = acc.minkowski_sum(p)?;
    }
    Ok(acc)
}

impl NefPartitionData {
    /// Builds the partition data and its Batyrev–Borisov dual. Fails with an
    /// assertion error if `∇` is not reflexive or `(∇)∨ ≠ Conv(Δ₁ ∪ ⋯ ∪ Δ_r)`.
    pub fn new(delta: LatticePolytope, parts: Vec<Vec<usize>>) -> Result<Self> {
        if !delta.is_reflexive() {
            return Err(Error::InvalidPartition("delta not reflexive".into()));
        }
        let rays = delta.polar_dual()?.vertices().to_vec();
        check_partition(&parts, rays.len())?;
        let parts_delta = (0..parts.len())
            .map(|i| polytope_of_part(&delta, &parts, i))
            .collect::<Result<Vec<_>>>()?;
        let (nabla_parts, nabla, nabla_dual) =
            dual_nef_partition(&delta, &rays, &parts, &parts_delta)?;
        Ok(Self {
            delta,
            rays,
            parts,
            parts_delta,
            nabla_parts,
            nabla,
            nabla_dual,
        })
    }

    pub fn n(&self) -> usize {
        self.delta.ambient_dim()
    }

    pub fn r(&self) -> usize {
        self.parts.len()
    }

    pub fn delta(&self) -> &LatticePolytope {
        &self.delta
    }

    /// Vertices of `Δ∨`, lexicographically sorted.
    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }

    /// The rays of part `i` in the order given by the partition.
    pub fn part_rays(&self, i: usize) -> Vec<Vec<i64>> {
        self.parts[i]
            .iter()
            .map(|&k| self.rays[k].clone())
            .collect()
    }

    pub fn parts_delta(&self) -> &[LatticePolytope] {
        &self.parts_delta
    }

    pub fn nabla_parts(&self) -> &[LatticePolytope] {
        &self.nabla_parts
    }

    pub fn nabla(&self) -> &LatticePolytope {
        &self.nabla
    }

    pub fn nabla_dual(&self) -> &LatticePolytope {
        &self.nabla_dual
    }

    /// The dual nef-partition on `∇`: vertices of `∇∨` are grouped by the `Δᵢ`
    /// containing them.
    pub fn dual(&self) -> Result<NefPartitionData> {
        let verts = self.nabla_dual.vertices();
        let mut parts = vec![Vec::new(); self.r()];
        for (k, v) in verts.iter().enumerate() {
            let owners: Vec<usize> = (0..self.r())
                .filter(|&i| self.parts_delta[i].contains(v))
                .collect();
            match owners.as_slice() {
                [i] => parts[*i].push(k),
                _ => {
                    return Err(Error::Assertion(format!(
                        "vertex {v:?} of ∇∨ lies in {} of the Δᵢ",
                        owners.len()
                    )))
                }
            }
        }
        NefPartitionData::new(self.nabla.clone(), parts)
    }

    /// Runs every structural invariant and reports each outcome.
    pub fn validate(&self) -> Vec<Check> {
        validate_parts(&self.delta, &self.parts)
    }
}

/// `∇ₖ = Conv({0} ∪ Iₖ)`, `∇ = Σ ∇ₖ`, and `∇∨ = Conv(Δ₁ ∪ ⋯ ∪ Δ_r)`.
pub fn dual_nef_partition(
    delta: &LatticePolytope,
    rays: &[Vec<i64>],
    parts: &[Vec<usize>],
    parts_delta: &[LatticePolytope],
) -> Result<(Vec<LatticePolytope>, LatticePolytope, LatticePolytope)> {
    let n = delta.ambient_dim();
    let nabla_parts = parts
        .iter()
        .map(|part| {
            let mut pts: Vec<Vec<i64>> = part.iter().map(|&k| rays[k].clone()).collect();
            pts.push(vec![0; n]);
            LatticePolytope::convex_hull(&pts, n)
        })
        .collect::<Result<Vec<_>>>()?;
    let nabla = minkowski_all(&nabla_parts)?;
    let all: Vec<Vec<i64>> = parts_delta
        .iter()
        .flat_map(|p| p.vertices().iter().cloned())
        .collect();
    let nabla_dual = LatticePolytope::convex_hull(&all, n)?;
    if !nabla.is_reflexive() {
        return Err(Error::Assertion("∇ is not reflexive".into()));
    }
    if nabla.polar_dual()? != nabla_dual {
        return Err(Error::Assertion(
            "polar dual of ∇ differs from Conv(Δ₁ ∪ ⋯ ∪ Δ_r)".into(),
        ));
    }
    Ok((nabla_parts, nabla, nabla_dual))
}

/// Invariant diagnostics for raw input, usable before [`NefPartitionData::new`] succeeds.
pub fn validate_parts(delta: &LatticePolytope, parts: &[Vec<usize>]) -> Vec<Check> {
    let mut out = Vec::new();
    let reflexive = delta.is_reflexive();
    out.push(check("delta reflexive", reflexive, || {
        "delta not reflexive".into()
    }));
    if !reflexive {
        return out;
    }
    let rays = match delta.polar_dual() {
        Ok(d) => d.vertices().to_vec(),
        Err(e) => {
            out.push(check("polar dual", false, || e.to_string()));
            return out;
        }
    };
    let partition = check_partition(parts, rays.len());
    out.push(check("partition", partition.is_ok(), || {
        partition.clone().unwrap_err().to_string()
    }));
    if partition.is_err() {
        return out;
    }
    let parts_delta = match (0..parts.len())
        .map(|i| polytope_of_part(delta, parts, i))
        .collect::<Result<Vec<_>>>()
    {
        Ok(p) => p,
        Err(e) => {
            out.push(check("part polytopes", false, || e.to_string()));
            return out;
        }
    };
    let sum = minkowski_all(&parts_delta);
    out.push(check(
        "Minkowski sum of parts equals delta",
        sum.as_ref() == Ok(delta),
        || "Δ₁ + ⋯ + Δ_r ≠ Δ".into(),
    ));
    match dual_nef_partition(delta, &rays, parts, &parts_delta) {
        Ok(_) => out.push(check("dual nef-partition", true, String::new)),
        Err(e) => out.push(check("dual nef-partition", false, || e.to_string())),
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hull(pts: &[&[i64]]) -> LatticePolytope {
        LatticePolytope::convex_hull(pts, pts[0].len()).unwrap()
    }

    #[test]
    fn trivial_partition_on_p2() {
        let delta = hull(&[&[2, -1], &[-1, 2], &[-1, -1]]);
        let data = NefPartitionData::new(delta.clone(), vec![vec![0, 1, 2]]).unwrap();
        assert_eq!(data.parts_delta()[0], delta);
        assert_eq!(data.nabla(), &hull(&[&[1, 0], &[0, 1], &[-1, -1]]));
        assert!(data.validate().iter().all(|c| c.passed));
    }

    #[test]
    fn duplicated_ray_is_rejected() {
        let delta = hull(&[&[2, -1], &[-1, 2], &[-1, -1]]);
        let diag = validate_parts(&delta, &[vec![0, 1], vec![1, 2]]);
        let bad = diag.iter().find(|c| !c.passed).unwrap();
        assert!(bad.detail.as_ref().unwrap().contains("not a partition"));
    }

    #[test]
    fn non_reflexive_delta() {
        let delta = hull(&[&[2, 0], &[0, 2], &[-2, -2]]);
        let diag = validate_parts(&delta, &[vec![0, 1, 2]]);
        assert_eq!(diag[0].detail.as_deref(), Some("delta not reflexive"));
    }
}
