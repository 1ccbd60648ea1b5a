//! Dense integer matrices, Smith normal form and the lattice data derived from it.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A dense row-major matrix over the integers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl fmt::Debug for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.row_vecs()).finish()
    }
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows of machine integers. All rows must have equal length.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    got: r.len(),
                });
            }
            entries.extend(r.iter().map(|&x| BigInt::from(x)));
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            entries,
        })
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns<R: AsRef<[i64]>>(cols: &[R]) -> Result<Self> {
        Ok(Self::from_rows(cols)?.transpose())
    }

    pub fn from_big_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    got: r.len(),
                });
            }
            entries.extend(r);
        }
        Ok(Self {
            rows: n,
            cols,
            entries,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Rows as machine integers, failing if any entry does not fit.
    pub fn to_i64_rows(&self) -> Result<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|x| x.to_i64().ok_or(Error::Overflow("matrix entry")))
                    .collect()
            })
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product `M · v`.
    pub fn apply(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn apply_i64(&self, v: &[i64]) -> Result<Vec<i64>> {
        let big: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
        self.apply(&big)?
            .into_iter()
            .map(|x| x.to_i64().ok_or(Error::Overflow("matrix product")))
            .collect()
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                got: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.row_vecs();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                    a[i][j] = v;
                }
            }
            prev = a[k][k].clone();
        }
        Ok(sign * &a[n - 1][n - 1])
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols
            && self
                .determinant()
                .map(|d| d.abs().is_one())
                .unwrap_or(false)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += f * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, f: &BigInt) {
        for j in 0..self.cols {
            let v = &self[(src, j)] * f;
            self[(dst, j)] += v;
        }
    }

    /// col[dst] += f * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, f: &BigInt) {
        for i in 0..self.rows {
            let v = &self[(i, src)] * f;
            self[(i, dst)] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntegerMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntegerMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.entries[i * self.cols + j]
    }
}

/// `diagonal = left · M · right` with `left`, `right` unimodular and the
/// invariant factors `d_1 | d_2 | ...` on the diagonal.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub diagonal: IntegerMatrix,
    pub left: IntegerMatrix,
    pub right: IntegerMatrix,
    pub invariant_factors: Vec<BigInt>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }
}

pub fn smith_normal_form(m: &IntegerMatrix) -> SmithForm {
    let (rows, cols) = (m.rows, m.cols);
    let mut d = m.clone();
    let mut u = IntegerMatrix::identity(rows);
    let mut v = IntegerMatrix::identity(cols);
    let mut rank = 0;

    'outer: for k in 0..rows.min(cols) {
        loop {
            // smallest nonzero entry of the trailing block as pivot
            let mut best: Option<(usize, usize)> = None;
            for i in k..rows {
                for j in k..cols {
                    let x = &d[(i, j)];
                    if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < d[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                break 'outer;
            };
            d.swap_rows(k, pi);
            u.swap_rows(k, pi);
            d.swap_cols(k, pj);
            v.swap_cols(k, pj);

            let mut dirty = false;
            for i in k + 1..rows {
                if d[(i, k)].is_zero() {
                    continue;
                }
                let q = d[(i, k)].div_floor(&d[(k, k)]);
                let f = -q;
                d.add_row_multiple(i, k, &f);
                u.add_row_multiple(i, k, &f);
                dirty |= !d[(i, k)].is_zero();
            }
            for j in k + 1..cols {
                if d[(k, j)].is_zero() {
                    continue;
                }
                let q = d[(k, j)].div_floor(&d[(k, k)]);
                let f = -q;
                d.add_col_multiple(j, k, &f);
                v.add_col_multiple(j, k, &f);
                dirty |= !d[(k, j)].is_zero();
            }
            if dirty {
                continue;
            }
            // divisibility: fold a non-divisible row into row k and retry
            let p = d[(k, k)].clone();
            let bad = (k + 1..rows).find(|&i| (k + 1..cols).any(|j| !d[(i, j)].is_multiple_of(&p)));
            match bad {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row_multiple(k, i, &one);
                    u.add_row_multiple(k, i, &one);
                }
                None => break,
            }
        }
        if d[(k, k)].is_negative() {
            d.negate_row(k);
            u.negate_row(k);
        }
        rank += 1;
    }

    let invariant_factors = (0..rank).map(|i| d[(i, i)].clone()).collect();
    SmithForm {
        diagonal: d,
        left: u,
        right: v,
        invariant_factors,
    }
}

/// Kernel basis, cokernel torsion and Smith data of an integer matrix viewed as a map
/// `Z^cols -> Z^rows`.
#[derive(Clone, Debug)]
pub struct SmithRelations {
    /// Saturated basis of `{x : M x = 0}`.
    pub kernel: Vec<Vec<BigInt>>,
    /// Index of the column span in its saturation.
    pub index: BigInt,
    pub smith: SmithForm,
}

pub fn smith_relations(m: &IntegerMatrix) -> SmithRelations {
    let smith = smith_normal_form(m);
    let r = smith.rank();
    let kernel = (r..m.cols).map(|j| smith.right.column(j)).collect();
    let index = smith
        .invariant_factors
        .iter()
        .fold(BigInt::one(), |acc, d| acc * d);
    SmithRelations {
        kernel,
        index,
        smith,
    }
}

/// Inverse of a unimodular matrix (integer by Cramer's rule).
pub fn unimodular_inverse(m: &IntegerMatrix) -> Result<IntegerMatrix> {
    let det = m.determinant()?;
    if !det.abs().is_one() {
        return Err(Error::NotUnimodular(det.abs().to_string()));
    }
    // U M V = I  =>  M^{-1} = V U
    let s = smith_normal_form(m);
    s.right.mul(&s.left)
}

pub fn gcd_slice(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn check_smith(m: &IntegerMatrix) {
        let s = smith_normal_form(m);
        assert!(s.left.is_unimodular());
        assert!(s.right.is_unimodular());
        let prod = s.left.mul(m).unwrap().mul(&s.right).unwrap();
        assert_eq!(prod, s.diagonal);
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                if i != j {
                    assert!(prod[(i, j)].is_zero());
                }
            }
        }
        for w in s.invariant_factors.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
    }

    #[test]
    fn smith_identity() {
        let id = IntegerMatrix::identity(4);
        let rel = smith_relations(&id);
        assert!(rel.kernel.is_empty());
        assert_eq!(rel.index, BigInt::one());
        check_smith(&id);
    }

    #[test]
    fn smith_divisibility_chain() {
        let m = IntegerMatrix::from_rows(&[[2, 0], [0, 3]]).unwrap();
        let s = smith_normal_form(&m);
        assert_eq!(s.invariant_factors, big(&[1, 6]));
        check_smith(&m);
        let m = IntegerMatrix::from_rows(&[[2, 4, 4], [-6, 6, 12], [10, -4, -16]]).unwrap();
        assert_eq!(smith_normal_form(&m).invariant_factors, big(&[2, 6, 12]));
        check_smith(&m);
    }

    #[test]
    fn determinant_bareiss() {
        let m = IntegerMatrix::from_rows(&[[3, 0], [0, 3]]).unwrap();
        assert_eq!(m.determinant().unwrap(), BigInt::from(9));
        let m = IntegerMatrix::from_rows(&[[0, 1, 2], [1, 0, 3], [4, -3, 8]]).unwrap();
        assert_eq!(m.determinant().unwrap(), BigInt::from(-2));
        let m = IntegerMatrix::from_rows(&[[1, 2], [2, 4]]).unwrap();
        assert!(m.determinant().unwrap().is_zero());
    }

    #[test]
    fn inverse_of_unimodular() {
        let m =
            IntegerMatrix::from_rows(&[[1, 1, 0, 0], [-1, 0, 0, 1], [0, 0, 1, 1], [0, 0, 0, -1]])
                .unwrap();
        let inv = unimodular_inverse(&m).unwrap();
        assert_eq!(m.mul(&inv).unwrap(), IntegerMatrix::identity(4));
        let bad = IntegerMatrix::from_rows(&[[2, 0], [0, 1]]).unwrap();
        assert!(matches!(
            unimodular_inverse(&bad),
            Err(Error::NotUnimodular(_))
        ));
    }

    #[test]
    fn kernel_of_quartic_gkz_matrix() {
        let a = IntegerMatrix::from_rows(&[
            [1, 1, 1, 1, 1],
            [0, 1, 0, 0, -1],
            [0, 0, 1, 0, -1],
            [0, 0, 0, 1, -1],
        ])
        .unwrap();
        let rel = smith_relations(&a);
        assert_eq!(rel.kernel.len(), 1);
        let k = &rel.kernel[0];
        let k: Vec<BigInt> = if k[0].is_negative() {
            k.clone()
        } else {
            k.iter().map(|x| -x).collect()
        };
        assert_eq!(k, big(&[-4, 1, 1, 1, 1]));
        assert_eq!(rel.index, BigInt::one());
    }
}
