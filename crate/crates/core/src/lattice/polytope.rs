use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::hull;
use super::matrix::{gcd_slice, smith_normal_form, IntegerMatrix};

/// The inequality `<normal, x> >= -offset`. For affine-hull equations the same pair
/// means `<normal, x> = -offset`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Facet {
    pub normal: Vec<i64>,
    pub offset: i64,
}

impl Facet {
    /// `<normal, x> + offset`, non-negative on the polytope.
    pub fn eval(&self, x: &[i64]) -> i64 {
        self.normal.iter().zip(x).map(|(a, b)| a * b).sum::<i64>() + self.offset
    }
}

/// A lattice polytope in canonical form: deduplicated, lexicographically sorted
/// vertices and sorted facets.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticePolytope {
    ambient_dim: usize,
    vertices: Vec<Vec<i64>>,
    facets: Vec<Facet>,
    equations: Vec<Facet>,
    affine_dim: usize,
}

/// Integral affine coordinates on the affine lattice spanned by a polytope:
/// `y = (x - origin) · coords`, and `x = origin + y · basis`.
#[derive(Clone, Debug)]
pub(crate) struct AffineFrame {
    pub origin: Vec<i64>,
    /// ambient_dim × affine_dim
    pub coords: IntegerMatrix,
    /// affine_dim × ambient_dim
    pub basis: IntegerMatrix,
    /// (ambient_dim - affine_dim) × ambient_dim, rows annihilate the span
    pub complement: IntegerMatrix,
}

fn to_big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn to_small(v: &[BigInt]) -> Result<Vec<i64>> {
    v.iter()
        .map(|x| x.to_i64().ok_or(Error::Overflow("polytope coordinate")))
        .collect()
}

impl AffineFrame {
    fn of_points(points: &[Vec<i64>], dim: usize) -> Result<Self> {
        let origin = points[0].clone();
        let diffs: Vec<Vec<i64>> = points
            .iter()
            .skip(1)
            .map(|p| p.iter().zip(&origin).map(|(a, b)| a - b).collect())
            .collect();
        let (rank, right) = if diffs.is_empty() {
            (0, IntegerMatrix::identity(dim))
        } else {
            let s = smith_normal_form(&IntegerMatrix::from_rows(&diffs)?);
            (s.rank(), s.right)
        };
        let inv = super::matrix::unimodular_inverse(&right)?;
        let mut coords = IntegerMatrix::zeros(dim, rank);
        for i in 0..dim {
            for j in 0..rank {
                coords[(i, j)] = right[(i, j)].clone();
            }
        }
        let mut basis = IntegerMatrix::zeros(rank, dim);
        for i in 0..rank {
            for j in 0..dim {
                basis[(i, j)] = inv[(i, j)].clone();
            }
        }
        let mut complement = IntegerMatrix::zeros(dim - rank, dim);
        for i in rank..dim {
            for j in 0..dim {
                complement[(i - rank, j)] = right[(j, i)].clone();
            }
        }
        Ok(Self {
            origin,
            coords,
            basis,
            complement,
        })
    }

    pub fn dim(&self) -> usize {
        self.coords.cols()
    }

    pub fn reduce(&self, x: &[i64]) -> Result<Vec<i64>> {
        let d: Vec<i64> = x.iter().zip(&self.origin).map(|(a, b)| a - b).collect();
        self.coords.transpose().apply_i64(&d)
    }

    pub fn lift(&self, y: &[i64]) -> Result<Vec<i64>> {
        let d = self.basis.transpose().apply_i64(y)?;
        Ok(d.iter().zip(&self.origin).map(|(a, b)| a + b).collect())
    }
}

impl LatticePolytope {
    /// Convex hull of integer points by exact double description. The result is
    /// independent of input order and multiplicity.
    pub fn convex_hull<P: AsRef<[i64]>>(points: &[P], dim: usize) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::NoPoints);
        }
        let mut pts: Vec<Vec<i64>> = Vec::with_capacity(points.len());
        for p in points {
            let p = p.as_ref();
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: p.len(),
                });
            }
            pts.push(p.to_vec());
        }
        pts.sort();
        pts.dedup();

        let frame = AffineFrame::of_points(&pts, dim)?;
        let a = frame.dim();

        let mut equations: Vec<Facet> = (0..frame.complement.rows())
            .map(|i| {
                let n = to_small(frame.complement.row(i))?;
                let off = -n.iter().zip(&frame.origin).map(|(x, y)| x * y).sum::<i64>();
                Ok(Facet {
                    normal: n,
                    offset: off,
                })
            })
            .collect::<Result<_>>()?;
        equations.sort();

        if a == 0 {
            return Ok(Self {
                ambient_dim: dim,
                vertices: pts,
                facets: Vec::new(),
                equations,
                affine_dim: 0,
            });
        }

        let reduced: Vec<Vec<i64>> = pts.iter().map(|p| frame.reduce(p)).collect::<Result<_>>()?;
        let reduced_big: Vec<Vec<BigInt>> = reduced.iter().map(|p| to_big(p)).collect();
        let red_facets = hull::facets_of_points(&reduced_big)?;

        // vertices: points whose tight facets have full rank in the reduced space
        let mut vertices = Vec::new();
        for (p, y) in pts.iter().zip(&reduced_big) {
            let tight: Vec<Vec<i64>> = red_facets
                .iter()
                .filter(|(n, c)| {
                    (n.iter().zip(y).map(|(a, b)| a * b).sum::<BigInt>() + c).is_zero()
                })
                .map(|(n, _)| to_small(n))
                .collect::<Result<_>>()?;
            if tight.len() >= a && smith_normal_form(&IntegerMatrix::from_rows(&tight)?).rank() == a
            {
                vertices.push(p.clone());
            }
        }

        let mut facets = Vec::with_capacity(red_facets.len());
        for (n, c) in &red_facets {
            let lifted = frame.coords.apply(n)?;
            let shift: BigInt = lifted
                .iter()
                .zip(&frame.origin)
                .map(|(a, &b)| a * BigInt::from(b))
                .sum();
            let mut offset = c - shift;
            let g = gcd_slice(&lifted);
            let lifted: Vec<BigInt> = lifted.into_iter().map(|x| x / &g).collect();
            debug_assert!(offset.is_multiple_of(&g));
            offset /= &g;
            facets.push(Facet {
                normal: to_small(&lifted)?,
                offset: offset.to_i64().ok_or(Error::Overflow("facet offset"))?,
            });
        }
        facets.sort();
        facets.dedup();

        Ok(Self {
            ambient_dim: dim,
            vertices,
            facets,
            equations,
            affine_dim: a,
        })
    }

    /// The polytope `{x : <normal, x> >= -offset}`, which must be bounded and have
    /// integral vertices.
    pub fn from_inequalities(inequalities: &[Facet], dim: usize) -> Result<Self> {
        let ineqs: Vec<(Vec<BigInt>, BigInt)> = inequalities
            .iter()
            .map(|f| (to_big(&f.normal), BigInt::from(f.offset)))
            .collect();
        let verts = hull::vertices_of_halfspaces(&ineqs, dim)?;
        let mut pts = Vec::with_capacity(verts.len());
        for (num, den) in verts {
            if num.iter().any(|x| !x.is_multiple_of(&den)) {
                return Err(Error::NonLatticeVertex);
            }
            pts.push(to_small(&num.iter().map(|x| x / &den).collect::<Vec<_>>())?);
        }
        Self::convex_hull(&pts, dim)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn affine_dim(&self) -> usize {
        self.affine_dim
    }

    pub fn vertices(&self) -> &[Vec<i64>] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// Equations cutting out the affine hull; empty for full-dimensional polytopes.
    pub fn equations(&self) -> &[Facet] {
        &self.equations
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.affine_dim == self.ambient_dim
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        self.equations.iter().all(|e| e.eval(x) == 0) && self.facets.iter().all(|f| f.eval(x) >= 0)
    }

    /// True when `x` lies in the relative interior.
    pub fn contains_relative_interior(&self, x: &[i64]) -> bool {
        self.equations.iter().all(|e| e.eval(x) == 0) && self.facets.iter().all(|f| f.eval(x) > 0)
    }

    pub(crate) fn frame(&self) -> Result<AffineFrame> {
        AffineFrame::of_points(&self.vertices, self.ambient_dim)
    }

    /// The same polytope as a full-dimensional polytope in its affine lattice, with
    /// the frame relating the two coordinate systems.
    pub(crate) fn reduced(&self) -> Result<(LatticePolytope, AffineFrame)> {
        let frame = self.frame()?;
        let pts: Vec<Vec<i64>> = self
            .vertices
            .iter()
            .map(|v| frame.reduce(v))
            .collect::<Result<_>>()?;
        let red = LatticePolytope::convex_hull(&pts, frame.dim())?;
        Ok((red, frame))
    }

    fn require_full_dim(&self) -> Result<()> {
        if self.is_full_dimensional() {
            Ok(())
        } else {
            Err(Error::NotFullDimensional {
                affine_dim: self.affine_dim,
                ambient_dim: self.ambient_dim,
            })
        }
    }

    /// Polar dual `{y : <x, y> >= -1 for all x}` of a full-dimensional polytope with
    /// the origin in its interior. Fails with [`Error::NotReflexive`] when the dual
    /// has a non-integral vertex.
    pub fn polar_dual(&self) -> Result<LatticePolytope> {
        self.require_full_dim()?;
        if self.facets.iter().any(|f| f.offset <= 0) {
            return Err(Error::OriginNotInterior);
        }
        let mut pts = Vec::with_capacity(self.facets.len());
        for f in &self.facets {
            if f.normal.iter().any(|x| x % f.offset != 0) {
                return Err(Error::NotReflexive);
            }
            pts.push(f.normal.iter().map(|x| x / f.offset).collect::<Vec<i64>>());
        }
        LatticePolytope::convex_hull(&pts, self.ambient_dim)
    }

    pub fn is_reflexive(&self) -> bool {
        self.is_full_dimensional()
            && !self.facets.is_empty()
            && self.facets.iter().all(|f| f.offset == 1)
    }

    /// Hull of all pairwise vertex sums.
    pub fn minkowski_sum(&self, other: &LatticePolytope) -> Result<LatticePolytope> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                got: other.ambient_dim,
            });
        }
        let mut pts = BTreeSet::new();
        for a in &self.vertices {
            for b in &other.vertices {
                pts.insert(a.iter().zip(b).map(|(x, y)| x + y).collect::<Vec<i64>>());
            }
        }
        LatticePolytope::convex_hull(&pts.into_iter().collect::<Vec<_>>(), self.ambient_dim)
    }

    /// Hull of `{e_s} × P_s` in `R^r × R^n`.
    pub fn cayley(polytopes: &[LatticePolytope]) -> Result<LatticePolytope> {
        let r = polytopes.len();
        let Some(first) = polytopes.first() else {
            return Err(Error::NoPoints);
        };
        let n = first.ambient_dim;
        let mut pts = Vec::new();
        for (s, p) in polytopes.iter().enumerate() {
            if p.ambient_dim != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: p.ambient_dim,
                });
            }
            for v in &p.vertices {
                let mut x = vec![0i64; r];
                x[s] = 1;
                x.extend_from_slice(v);
                pts.push(x);
            }
        }
        LatticePolytope::convex_hull(&pts, r + n)
    }

    /// Pyramid with apex at the origin over this polytope.
    pub fn pyramid_over(&self) -> Result<LatticePolytope> {
        let origin = vec![0i64; self.ambient_dim];
        // origin in the affine span <=> all equations vanish there
        if self.equations.iter().all(|e| e.offset == 0) {
            return Err(Error::DegeneratePyramid);
        }
        let mut pts = self.vertices.clone();
        pts.push(origin);
        LatticePolytope::convex_hull(&pts, self.ambient_dim)
    }

    pub fn translate(&self, t: &[i64]) -> Result<LatticePolytope> {
        let pts: Vec<Vec<i64>> = self
            .vertices
            .iter()
            .map(|v| v.iter().zip(t).map(|(a, b)| a + b).collect())
            .collect();
        LatticePolytope::convex_hull(&pts, self.ambient_dim)
    }

    pub fn scale(&self, k: i64) -> Result<LatticePolytope> {
        let pts: Vec<Vec<i64>> = self
            .vertices
            .iter()
            .map(|v| v.iter().map(|a| a * k).collect())
            .collect();
        LatticePolytope::convex_hull(&pts, self.ambient_dim)
    }

    /// Image under a unimodular matrix acting on column vectors.
    pub fn transform(&self, u: &IntegerMatrix) -> Result<LatticePolytope> {
        let pts = lattice_transform(u, &self.vertices)?;
        LatticePolytope::convex_hull(&pts, self.ambient_dim)
    }
}

/// Applies a lattice automorphism `x ↦ U x` to each point.
pub fn lattice_transform(u: &IntegerMatrix, points: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    if u.rows() != u.cols() {
        return Err(Error::DimensionMismatch {
            expected: u.rows(),
            got: u.cols(),
        });
    }
    let det = u.determinant()?;
    if det.magnitude() != &num_bigint::BigUint::from(1u32) {
        return Err(Error::NotUnimodular(det.magnitude().to_string()));
    }
    points.iter().map(|p| u.apply_i64(p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hull(pts: &[&[i64]]) -> LatticePolytope {
        let dim = pts[0].len();
        LatticePolytope::convex_hull(pts, dim).unwrap()
    }

    #[test]
    fn triangle_facets_are_primitive() {
        let p = hull(&[&[1, 0], &[0, 1], &[-1, -1]]);
        assert_eq!(p.vertices(), &[vec![-1, -1], vec![0, 1], vec![1, 0]]);
        let expected = vec![
            Facet {
                normal: vec![-1, -1],
                offset: 1,
            },
            Facet {
                normal: vec![-1, 2],
                offset: 1,
            },
            Facet {
                normal: vec![2, -1],
                offset: 1,
            },
        ];
        assert_eq!(p.facets(), expected.as_slice());
        assert!(p.is_reflexive());
    }

    #[test]
    fn single_point() {
        let p = hull(&[&[0, 0, 0]]);
        assert_eq!(p.affine_dim(), 0);
        assert!(p.facets().is_empty());
        assert_eq!(p.equations().len(), 3);
    }

    #[test]
    fn empty_input() {
        let pts: [&[i64]; 0] = [];
        assert_eq!(LatticePolytope::convex_hull(&pts, 2), Err(Error::NoPoints));
    }

    #[test]
    fn square_and_interior_points_dropped() {
        let p = hull(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1], &[1, 1]]);
        assert_eq!(p.facets().len(), 4);
        assert_eq!(p.vertices().len(), 4);
        let q = hull(&[&[0, 0], &[2, 0], &[0, 2], &[2, 2], &[1, 1], &[1, 0]]);
        assert_eq!(q.vertices().len(), 4);
    }

    #[test]
    fn order_independence() {
        let a = hull(&[&[3, -1, -1], &[-1, 3, -1], &[-1, -1, 3], &[-1, -1, -1]]);
        let b = hull(&[
            &[-1, -1, -1],
            &[-1, -1, 3],
            &[-1, 3, -1],
            &[3, -1, -1],
            &[0, 0, 0],
        ]);
        assert_eq!(a, b);
    }

    #[test]
    fn lower_dimensional_hull() {
        let seg = hull(&[&[1, 0, 0], &[0, 1, 0]]);
        assert_eq!(seg.affine_dim(), 1);
        assert_eq!(seg.facets().len(), 2);
        assert_eq!(seg.equations().len(), 2);
        assert!(seg.contains(&[1, 0, 0]));
        assert!(!seg.contains(&[1, 1, 0]));
        assert!(!seg.contains(&[2, -1, 0]));
    }

    #[test]
    fn polar_dual_of_p2() {
        let delta = hull(&[&[2, -1], &[-1, 2], &[-1, -1]]);
        let dual = delta.polar_dual().unwrap();
        assert_eq!(dual, hull(&[&[1, 0], &[0, 1], &[-1, -1]]));
        assert_eq!(dual.polar_dual().unwrap(), delta);
    }

    #[test]
    fn reflexivity_checks() {
        let shifted = hull(&[&[6, 5], &[5, 6], &[4, 4]]);
        assert!(!shifted.is_reflexive());
        assert_eq!(shifted.polar_dual(), Err(Error::OriginNotInterior));
        let scaled = hull(&[&[2, 0], &[0, 2], &[-2, -2]]);
        assert!(!scaled.is_reflexive());
        assert_eq!(scaled.polar_dual(), Err(Error::NotReflexive));
    }

    #[test]
    fn minkowski_with_point_is_identity() {
        let p = hull(&[&[2, -1], &[-1, 2], &[-1, -1]]);
        let zero = hull(&[&[0, 0]]);
        assert_eq!(p.minkowski_sum(&zero).unwrap(), p);
        let sq = hull(&[&[0, 0], &[1, 0]])
            .minkowski_sum(&hull(&[&[0, 0], &[0, 1]]))
            .unwrap();
        assert_eq!(sq, hull(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]));
    }

    #[test]
    fn pyramid_requires_origin_off_span() {
        let seg = hull(&[&[1, 0], &[-1, 0]]);
        assert_eq!(seg.pyramid_over(), Err(Error::DegeneratePyramid));
        let pt = hull(&[&[1, 0]]);
        let p = pt.pyramid_over().unwrap();
        assert_eq!(p.affine_dim(), 1);
    }

    #[test]
    fn transform_rejects_non_unimodular() {
        let u = IntegerMatrix::from_rows(&[[2, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
            .unwrap();
        assert!(matches!(
            lattice_transform(&u, &[vec![1, 0, 0, 0]]),
            Err(Error::NotUnimodular(_))
        ));
        let id = IntegerMatrix::identity(2);
        assert_eq!(
            lattice_transform(&id, &[vec![3, -4]]).unwrap(),
            vec![vec![3, -4]]
        );
    }
}
