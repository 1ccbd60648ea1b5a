//! Exact double-description method over the integers.
//!
//! All routines work on homogenized data: a polytope's facets are the extreme rays
//! of the cone `{y : <y, (1, p)> >= 0}` and its vertices are the extreme rays of
//! `{(t, x) : t >= 0, c t + <a, x> >= 0}`. Rays are kept primitive so every
//! intermediate value stays small.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

use super::matrix::gcd_slice;

#[derive(Clone, Debug)]
struct BitSet(Vec<u64>);

impl BitSet {
    fn new(n: usize) -> Self {
        BitSet(vec![0; n.div_ceil(64)])
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn and(&self, other: &Self) -> Self {
        BitSet(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn is_superset(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & b == *b)
    }
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn primitive(v: Vec<BigInt>) -> Vec<BigInt> {
    let g = gcd_slice(&v);
    if g.is_zero() || g.is_one() {
        v
    } else {
        v.into_iter().map(|x| x / &g).collect()
    }
}

/// Greedy choice of linearly independent rows; returns their indices.
fn independent_rows(rows: &[Vec<BigInt>], dim: usize) -> Vec<usize> {
    let mut basis: Vec<Vec<BigRational>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    let mut chosen = Vec::new();
    for (idx, row) in rows.iter().enumerate() {
        let mut r: Vec<BigRational> = row.iter().cloned().map(BigRational::from_integer).collect();
        for (b, &p) in basis.iter().zip(&pivots) {
            if !r[p].is_zero() {
                let f = &r[p] / &b[p];
                for j in 0..dim {
                    let v = &f * &b[j];
                    r[j] -= v;
                }
            }
        }
        if let Some(p) = (0..dim).find(|&j| !r[j].is_zero()) {
            basis.push(r);
            pivots.push(p);
            chosen.push(idx);
            if chosen.len() == dim {
                break;
            }
        }
    }
    chosen
}

/// Inverse of a square rational matrix given as integer rows.
fn rational_inverse(rows: &[Vec<BigInt>]) -> Vec<Vec<BigRational>> {
    let n = rows.len();
    let mut a: Vec<Vec<BigRational>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut v: Vec<BigRational> =
                r.iter().cloned().map(BigRational::from_integer).collect();
            v.extend((0..n).map(|j| {
                if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            v
        })
        .collect();
    for k in 0..n {
        let p = (k..n)
            .find(|&i| !a[i][k].is_zero())
            .expect("rows are independent");
        a.swap(k, p);
        let piv = a[k][k].clone();
        for v in a[k].iter_mut() {
            *v /= &piv;
        }
        for i in 0..n {
            if i != k && !a[i][k].is_zero() {
                let f = a[i][k].clone();
                for j in 0..2 * n {
                    let v = &f * &a[k][j];
                    a[i][j] -= v;
                }
            }
        }
    }
    a.into_iter().map(|r| r[n..].to_vec()).collect()
}

/// Extreme rays of the pointed cone `{y : <row, y> >= 0 for every row}`.
///
/// The constraint matrix must have full column rank.
pub fn extreme_rays(constraints: &[Vec<BigInt>]) -> Result<Vec<Vec<BigInt>>> {
    let dim = constraints.first().map_or(0, Vec::len);
    let m = constraints.len();
    let basis = independent_rows(constraints, dim);
    if basis.len() < dim {
        return Err(Error::Invalid(format!(
            "constraint matrix has rank {} < {dim}",
            basis.len()
        )));
    }

    // initial simplicial cone: columns of the inverse of the basis rows
    let inv = rational_inverse(
        &basis
            .iter()
            .map(|&i| constraints[i].clone())
            .collect::<Vec<_>>(),
    );
    let mut rays: Vec<(Vec<BigInt>, BitSet)> = Vec::with_capacity(dim);
    for j in 0..dim {
        let col: Vec<BigRational> = (0..dim).map(|i| inv[i][j].clone()).collect();
        let den = col.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let ray = primitive(col.iter().map(|x| (x * &den).to_integer()).collect());
        let mut zeros = BitSet::new(m);
        for (k, &bi) in basis.iter().enumerate() {
            if k != j {
                zeros.insert(bi);
            }
        }
        rays.push((ray, zeros));
    }

    let mut processed = vec![false; m];
    for &b in &basis {
        processed[b] = true;
    }

    for (ci, row) in constraints.iter().enumerate() {
        if processed[ci] {
            continue;
        }
        processed[ci] = true;
        let values: Vec<BigInt> = rays.iter().map(|(r, _)| dot(row, r)).collect();
        if values.iter().all(|v| !v.is_negative()) {
            for ((_, z), v) in rays.iter_mut().zip(&values) {
                if v.is_zero() {
                    z.insert(ci);
                }
            }
            continue;
        }
        let pos: Vec<usize> = (0..rays.len())
            .filter(|&i| values[i].is_positive())
            .collect();
        let neg: Vec<usize> = (0..rays.len())
            .filter(|&i| values[i].is_negative())
            .collect();

        let mut next: Vec<(Vec<BigInt>, BitSet)> = Vec::new();
        for (i, (r, z)) in rays.iter().enumerate() {
            if !values[i].is_negative() {
                let mut z = z.clone();
                if values[i].is_zero() {
                    z.insert(ci);
                }
                next.push((r.clone(), z));
            }
        }
        for &p in &pos {
            for &n in &neg {
                let common = rays[p].1.and(&rays[n].1);
                if common.count() + 2 < dim {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(k, (_, z))| k == p || k == n || !z.is_superset(&common));
                if !adjacent {
                    continue;
                }
                let sp = &values[p];
                let sn = -&values[n];
                let ray: Vec<BigInt> = rays[p]
                    .0
                    .iter()
                    .zip(&rays[n].0)
                    .map(|(a, b)| &sn * a + sp * b)
                    .collect();
                let mut z = common;
                z.insert(ci);
                next.push((primitive(ray), z));
            }
        }
        rays = next;
    }
    Ok(rays.into_iter().map(|(r, _)| r).collect())
}

/// Facet inequalities `<normal, y> + offset >= 0` of the hull of a full-dimensional
/// point set; normals are primitive.
pub fn facets_of_points(points: &[Vec<BigInt>]) -> Result<Vec<(Vec<BigInt>, BigInt)>> {
    let constraints: Vec<Vec<BigInt>> = points
        .iter()
        .map(|p| {
            let mut v = Vec::with_capacity(p.len() + 1);
            v.push(BigInt::one());
            v.extend(p.iter().cloned());
            v
        })
        .collect();
    let rays = extreme_rays(&constraints)?;
    let mut out = Vec::with_capacity(rays.len());
    for r in rays {
        let normal: Vec<BigInt> = r[1..].to_vec();
        let g = gcd_slice(&normal);
        if g.is_zero() {
            // only happens for a 0-dimensional ambient space
            continue;
        }
        let offset = &r[0] / &g;
        out.push((normal.into_iter().map(|x| x / &g).collect(), offset));
    }
    Ok(out)
}

/// Vertices of the bounded polyhedron `{x : <a, x> + c >= 0}`.
///
/// Returns rational vertices as `(numerators, common denominator)`.
pub fn vertices_of_halfspaces(
    inequalities: &[(Vec<BigInt>, BigInt)],
    dim: usize,
) -> Result<Vec<(Vec<BigInt>, BigInt)>> {
    let mut constraints: Vec<Vec<BigInt>> = Vec::with_capacity(inequalities.len() + 1);
    let mut t = vec![BigInt::zero(); dim + 1];
    t[0] = BigInt::one();
    constraints.push(t);
    for (a, c) in inequalities {
        let mut v = Vec::with_capacity(dim + 1);
        v.push(c.clone());
        v.extend(a.iter().cloned());
        constraints.push(v);
    }
    let rays = extreme_rays(&constraints)?;
    rays.into_iter()
        .map(|r| {
            if !r[0].is_positive() {
                return Err(Error::Unbounded);
            }
            Ok((r[1..].to_vec(), r[0].clone()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn square_has_four_facets() {
        let pts = vec![b(&[0, 0]), b(&[1, 0]), b(&[0, 1]), b(&[1, 1])];
        let mut f = facets_of_points(&pts).unwrap();
        f.sort();
        assert_eq!(f.len(), 4);
        assert!(f.contains(&(b(&[1, 0]), BigInt::zero())));
        assert!(f.contains(&(b(&[-1, 0]), BigInt::one())));
    }

    #[test]
    fn octahedron_from_halfspaces() {
        // |x|+|y|+|z| <= 1
        let mut ineqs = Vec::new();
        for sx in [-1, 1] {
            for sy in [-1, 1] {
                for sz in [-1, 1] {
                    ineqs.push((b(&[sx, sy, sz]), BigInt::one()));
                }
            }
        }
        let v = vertices_of_halfspaces(&ineqs, 3).unwrap();
        assert_eq!(v.len(), 6);
        assert!(v.iter().all(|(_, d)| d.is_one()));
    }

    #[test]
    fn unbounded_region_is_reported() {
        let ineqs = vec![
            (b(&[1, 0]), BigInt::zero()),
            (b(&[0, 1]), BigInt::zero()),
            (b(&[-1, -1]), BigInt::from(3)),
        ];
        assert!(vertices_of_halfspaces(&ineqs, 2).is_ok());
        let ineqs = vec![
            (b(&[1, 0]), BigInt::zero()),
            (b(&[0, 1]), BigInt::zero()),
            (b(&[-1, 1]), BigInt::from(3)),
        ];
        assert_eq!(vertices_of_halfspaces(&ineqs, 2), Err(Error::Unbounded));
    }
}
