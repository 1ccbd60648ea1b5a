use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::Result;

use super::matrix::IntegerMatrix;
use super::polytope::{Facet, LatticePolytope};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LatticePoints {
    pub boundary: Vec<Vec<i64>>,
    pub interior: Vec<Vec<i64>>,
}

impl LatticePoints {
    pub fn len(&self) -> usize {
        self.boundary.len() + self.interior.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All points, lexicographically sorted.
    pub fn all(&self) -> Vec<Vec<i64>> {
        let mut v: Vec<Vec<i64>> = self
            .boundary
            .iter()
            .chain(&self.interior)
            .cloned()
            .collect();
        v.sort();
        v
    }
}

/// A full-dimensional system `<a, x> + c >= 0` with a bounding box.
struct Region {
    facets: Vec<(Vec<i64>, i64)>,
    lo: Vec<i64>,
    hi: Vec<i64>,
}

impl Region {
    fn new(facets: &[Facet], vertices: &[Vec<i64>], k: i64) -> Self {
        let d = vertices[0].len();
        let lo = (0..d)
            .map(|j| k * vertices.iter().map(|v| v[j]).min().unwrap())
            .collect();
        let hi = (0..d)
            .map(|j| k * vertices.iter().map(|v| v[j]).max().unwrap())
            .collect();
        Region {
            facets: facets
                .iter()
                .map(|f| (f.normal.clone(), k * f.offset))
                .collect(),
            lo,
            hi,
        }
    }

    fn dim(&self) -> usize {
        self.lo.len()
    }

    /// Largest value `<a, x>` can take over the box in coordinates `from..`.
    fn slack(&self, a: &[i64], from: usize) -> i64 {
        (from..self.dim())
            .map(|j| (a[j] * self.lo[j]).max(a[j] * self.hi[j]))
            .sum()
    }

    /// Feasible range of the last coordinate given partial sums.
    fn last_range(&self, partial: &[i64]) -> Option<(i64, i64)> {
        let last = self.dim() - 1;
        let (mut lo, mut hi) = (self.lo[last], self.hi[last]);
        for ((a, c), s) in self.facets.iter().zip(partial) {
            let rhs = -(s + c);
            let w = a[last];
            // w x >= rhs
            if w > 0 {
                lo = lo.max(rhs.div_euclid(w) + i64::from(rhs.rem_euclid(w) != 0));
            } else if w < 0 {
                hi = hi.min((-rhs).div_euclid(-w));
            } else if rhs > 0 {
                return None;
            }
        }
        (lo <= hi).then_some((lo, hi))
    }

    fn visit<F: FnMut(&[i64], &[i64])>(
        &self,
        prefix: &mut Vec<i64>,
        partial: &mut [i64],
        f: &mut F,
    ) {
        let j = prefix.len();
        if j == self.dim() {
            f(prefix, partial);
            return;
        }
        for x in self.lo[j]..=self.hi[j] {
            let mut ok = true;
            for ((a, c), s) in self.facets.iter().zip(partial.iter_mut()) {
                *s += a[j] * x;
                if *s + c + self.slack(a, j + 1) < 0 {
                    ok = false;
                }
            }
            if ok {
                prefix.push(x);
                self.visit(prefix, partial, f);
                prefix.pop();
            }
            for ((a, _), s) in self.facets.iter().zip(partial.iter_mut()) {
                *s -= a[j] * x;
            }
        }
    }

    fn count(&self) -> u64 {
        let d = self.dim();
        let m = self.facets.len();
        let count_from = |x0: i64| -> u64 {
            let mut partial: Vec<i64> = self.facets.iter().map(|(a, _)| a[0] * x0).collect();
            if self
                .facets
                .iter()
                .zip(&partial)
                .any(|((a, c), s)| s + c + self.slack(a, 1) < 0)
            {
                return 0;
            }
            if d == 1 {
                return u64::from(
                    self.facets
                        .iter()
                        .zip(&partial)
                        .all(|((_, c), s)| s + c >= 0),
                );
            }
            let mut total = 0u64;
            self.count_rec(&mut vec![x0], &mut partial, &mut total, m);
            total
        };
        (self.lo[0]..=self.hi[0])
            .into_par_iter()
            .map(count_from)
            .sum()
    }

    fn count_rec(&self, prefix: &mut Vec<i64>, partial: &mut [i64], total: &mut u64, m: usize) {
        let j = prefix.len();
        if j + 1 == self.dim() {
            if let Some((lo, hi)) = self.last_range(partial) {
                *total += (hi - lo + 1) as u64;
            }
            return;
        }
        for x in self.lo[j]..=self.hi[j] {
            let mut ok = true;
            for i in 0..m {
                let (a, c) = &self.facets[i];
                partial[i] += a[j] * x;
                if partial[i] + c + self.slack(a, j + 1) < 0 {
                    ok = false;
                }
            }
            if ok {
                prefix.push(x);
                self.count_rec(prefix, partial, total, m);
                prefix.pop();
            }
            for i in 0..m {
                partial[i] -= self.facets[i].0[j] * x;
            }
        }
    }
}

fn enumerate_full(p: &LatticePolytope) -> LatticePoints {
    let region = Region::new(p.facets(), p.vertices(), 1);
    let per_slice: Vec<LatticePoints> = (region.lo[0]..=region.hi[0])
        .into_par_iter()
        .map(|x0| {
            let mut out = LatticePoints::default();
            let mut partial: Vec<i64> = region.facets.iter().map(|(a, _)| a[0] * x0).collect();
            if region
                .facets
                .iter()
                .zip(&partial)
                .any(|((a, c), s)| s + c + region.slack(a, 1) < 0)
            {
                return out;
            }
            let mut prefix = vec![x0];
            region.visit(&mut prefix, &mut partial, &mut |x, sums| {
                let vals = region.facets.iter().zip(sums).map(|((_, c), s)| s + c);
                let mut interior = true;
                for v in vals {
                    if v < 0 {
                        return;
                    }
                    if v == 0 {
                        interior = false;
                    }
                }
                if interior {
                    out.interior.push(x.to_vec());
                } else {
                    out.boundary.push(x.to_vec());
                }
            });
            out
        })
        .collect();
    let mut out = LatticePoints::default();
    for s in per_slice {
        out.boundary.extend(s.boundary);
        out.interior.extend(s.interior);
    }
    out
}

impl LatticePolytope {
    /// All lattice points, split by relative boundary and relative interior.
    pub fn lattice_points(&self) -> Result<LatticePoints> {
        if self.affine_dim() == 0 {
            return Ok(LatticePoints {
                boundary: Vec::new(),
                interior: self.vertices().to_vec(),
            });
        }
        if self.is_full_dimensional() {
            return Ok(enumerate_full(self));
        }
        let (red, frame) = self.reduced()?;
        let pts = enumerate_full(&red);
        let lift = |v: Vec<Vec<i64>>| -> Result<Vec<Vec<i64>>> {
            let mut out: Vec<Vec<i64>> = v.iter().map(|y| frame.lift(y)).collect::<Result<_>>()?;
            out.sort();
            Ok(out)
        };
        Ok(LatticePoints {
            boundary: lift(pts.boundary)?,
            interior: lift(pts.interior)?,
        })
    }

    /// Number of lattice points in the dilate `kP`.
    pub fn count_dilate(&self, k: u32) -> Result<u64> {
        if k == 0 || self.affine_dim() == 0 {
            return Ok(1);
        }
        let (red, _) = if self.is_full_dimensional() {
            (self.clone(), None)
        } else {
            let (r, f) = self.reduced()?;
            (r, Some(f))
        };
        Ok(Region::new(red.facets(), red.vertices(), i64::from(k)).count())
    }

    /// Ehrhart polynomial coefficients, constant term first, fitted exactly
    /// through `L(0), ..., L(d)`.
    pub fn ehrhart_polynomial(&self) -> Result<Vec<BigRational>> {
        let d = self.affine_dim();
        let values: Vec<BigInt> = (0..=d as u32)
            .map(|k| self.count_dilate(k).map(BigInt::from))
            .collect::<Result<_>>()?;
        // Newton forward differences, then expand binomial(k, j) into monomials
        let mut diffs = values.clone();
        let mut newton = Vec::with_capacity(d + 1);
        for _ in 0..=d {
            newton.push(diffs[0].clone());
            diffs = diffs.windows(2).map(|w| &w[1] - &w[0]).collect();
        }
        let mut coeffs = vec![BigRational::zero(); d + 1];
        let mut basis = vec![BigRational::one()];
        for (j, nj) in newton.iter().enumerate() {
            for (c, b) in coeffs.iter_mut().zip(&basis) {
                *c += b * BigRational::from_integer(nj.clone());
            }
            // basis <- basis * (k - j) / (j + 1)
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            let jj = BigRational::from_integer(BigInt::from(j));
            let den = BigRational::from_integer(BigInt::from(j + 1));
            for (i, b) in basis.iter().enumerate() {
                next[i + 1] += b / &den;
                next[i] -= b * &jj / &den;
            }
            basis = next;
        }
        Ok(coeffs)
    }

    /// `d!` times the Euclidean volume in the affine lattice span, `d` the affine dimension.
    pub fn normalized_volume(&self) -> Result<BigInt> {
        let d = self.affine_dim();
        if d == 0 {
            return Ok(BigInt::one());
        }
        let (red, _) = self.reduced()?;
        if red.vertices().len() == d + 1 {
            let v0 = &red.vertices()[0];
            let edges: Vec<Vec<i64>> = red.vertices()[1..]
                .iter()
                .map(|v| v.iter().zip(v0).map(|(a, b)| a - b).collect())
                .collect();
            return Ok(IntegerMatrix::from_rows(&edges)?.determinant()?.abs());
        }
        ehrhart_volume(&red)
    }
}

/// d-th forward difference of the Ehrhart function at 0.
pub(crate) fn ehrhart_volume(p: &LatticePolytope) -> Result<BigInt> {
    let d = p.affine_dim();
    let mut total = BigInt::zero();
    let mut binom = BigInt::one();
    for k in 0..=d {
        let l = BigInt::from(p.count_dilate(k as u32)?);
        if (d - k).is_multiple_of(2) {
            total += &binom * l;
        } else {
            total -= &binom * l;
        }
        binom = binom * BigInt::from(d - k) / BigInt::from(k + 1);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hull(pts: &[&[i64]]) -> LatticePolytope {
        LatticePolytope::convex_hull(pts, pts[0].len()).unwrap()
    }

    #[test]
    fn p2_triangle_points() {
        let p = hull(&[&[2, -1], &[-1, 2], &[-1, -1]]);
        let pts = p.lattice_points().unwrap();
        assert_eq!(pts.len(), 10);
        assert_eq!(pts.interior, vec![vec![0, 0]]);
        assert_eq!(p.normalized_volume().unwrap(), BigInt::from(9));
    }

    #[test]
    fn square_ehrhart() {
        let p = hull(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        let e = p.ehrhart_polynomial().unwrap();
        let one = BigRational::one();
        assert_eq!(
            e,
            vec![one.clone(), BigRational::from_integer(2.into()), one]
        );
        assert_eq!(p.normalized_volume().unwrap(), BigInt::from(2));
    }

    #[test]
    fn segment_in_plane() {
        let p = hull(&[&[0, 0, 1], &[2, 4, 1]]);
        let pts = p.lattice_points().unwrap();
        assert_eq!(pts.all(), vec![vec![0, 0, 1], vec![1, 2, 1], vec![2, 4, 1]]);
        assert_eq!(pts.interior, vec![vec![1, 2, 1]]);
        assert_eq!(p.normalized_volume().unwrap(), BigInt::from(2));
    }

    #[test]
    fn point_is_interior() {
        let p = hull(&[&[0, 0]]);
        let pts = p.lattice_points().unwrap();
        assert_eq!(pts.interior, vec![vec![0, 0]]);
        assert!(pts.boundary.is_empty());
    }

    #[test]
    fn ehrhart_matches_simplex_fast_path() {
        let p = hull(&[&[0, 0, 0], &[2, 1, 0], &[0, 3, 1], &[1, 1, 4]]);
        let (red, _) = p.reduced().unwrap();
        assert_eq!(
            ehrhart_volume(&red).unwrap(),
            p.normalized_volume().unwrap()
        );
    }
}
