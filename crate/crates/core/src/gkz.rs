//! GKZ A-hypergeometric data attached to a nef-partition, and its holomorphic solution.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lattice::{smith_relations, IntegerMatrix, LatticePolytope};
use crate::nef::NefPartitionData;
use crate::rational::{fmt_q, int, q};
use crate::series::RationalSeries;

/// `A`, `β`, the lift `α` and a basis of `L = ker A`.
///
/// Rows of `A` are the `n` lattice rows followed by the `r` Kronecker rows; columns
/// are `ν_{i,0}, ν_{i,1}, …` blockwise in part order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GkzData {
    pub n: usize,
    pub r: usize,
    pub a: IntegerMatrix,
    pub beta: Vec<BigRational>,
    pub alpha: Vec<BigRational>,
    pub kernel: Vec<Vec<i64>>,
    /// `(i, j)` for each column.
    pub column_labels: Vec<(usize, usize)>,
}

pub fn build_gkz(data: &NefPartitionData) -> Result<GkzData> {
    let n = data.n();
    let r = data.r();
    let mut columns: Vec<Vec<i64>> = Vec::new();
    let mut labels = Vec::new();
    let mut alpha = Vec::new();
    for i in 0..r {
        let mut kron = vec![0i64; r];
        kron[i] = 1;
        let mut col = vec![0i64; n];
        col.extend_from_slice(&kron);
        columns.push(col);
        labels.push((i, 0));
        alpha.push(q(-1, 2));
        for (j, ray) in data.part_rays(i).into_iter().enumerate() {
            let mut col = ray;
            col.extend_from_slice(&kron);
            columns.push(col);
            labels.push((i, j + 1));
            alpha.push(BigRational::zero());
        }
    }
    let a = IntegerMatrix::from_columns(&columns)?;
    let rel = smith_relations(&a);
    let kernel = rel
        .kernel
        .iter()
        .map(|v| {
            v.iter()
                .map(|x| x.to_i64().ok_or(Error::Overflow("kernel entry")))
                .collect::<Result<Vec<i64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let mut beta = vec![BigRational::zero(); n];
    beta.extend(std::iter::repeat_n(q(-1, 2), r));
    Ok(GkzData {
        n,
        r,
        a,
        beta,
        alpha,
        kernel,
        column_labels: labels,
    })
}

impl GkzData {
    pub fn columns(&self) -> usize {
        self.a.cols()
    }

    /// `A·α`, which equals `β` by construction.
    pub fn a_alpha(&self) -> Vec<BigRational> {
        (0..self.a.rows())
            .map(|i| {
                (0..self.a.cols())
                    .map(|j| BigRational::from_integer(self.a[(i, j)].clone()) * &self.alpha[j])
                    .sum()
            })
            .collect()
    }

    /// Row order with the Kronecker rows first, as conventionally displayed.
    pub fn display_row_order(&self) -> Vec<usize> {
        (self.n..self.n + self.r).chain(0..self.n).collect()
    }

    /// `A` and `β` with rows in [`Self::display_row_order`].
    pub fn display_form(&self) -> (Vec<Vec<i64>>, Vec<BigRational>) {
        let rows = self.a.to_i64_rows().expect("GKZ entries are small");
        let order = self.display_row_order();
        (
            order.iter().map(|&i| rows[i].clone()).collect(),
            order.iter().map(|&i| self.beta[i].clone()).collect(),
        )
    }

    /// Normalized volume of the convex hull of the columns of `A`.
    pub fn volume(&self) -> Result<BigInt> {
        let cols: Vec<Vec<i64>> = (0..self.a.cols())
            .map(|j| {
                self.a
                    .column(j)
                    .iter()
                    .map(|x| x.to_i64().unwrap())
                    .collect()
            })
            .collect();
        LatticePolytope::convex_hull(&cols, self.a.rows())?.normalized_volume()
    }

    /// The generator of a rank-one `L`, signed so that every `ℓ_{i,0} ≤ 0`.
    pub fn principal_kernel_vector(&self) -> Result<Vec<i64>> {
        if self.kernel.len() != 1 {
            return Err(Error::MultiparameterUnsupported(self.kernel.len()));
        }
        let mut ell = self.kernel[0].clone();
        let heads: Vec<i64> = self
            .column_labels
            .iter()
            .zip(&ell)
            .filter(|((_, j), _)| *j == 0)
            .map(|(_, &v)| v)
            .collect();
        if heads.iter().all(|&v| v >= 0) && heads.iter().any(|&v| v > 0) {
            ell.iter_mut().for_each(|v| *v = -*v);
        } else if !heads.iter().all(|&v| v <= 0) {
            return Err(Error::UnsupportedShape(format!(
                "ℓ_{{i,0}} of mixed sign: {heads:?}"
            )));
        }
        Ok(ell)
    }

    /// Block data of a kernel vector for the one-parameter series.
    pub fn shape(&self, ell: &[i64]) -> Result<KernelShape> {
        if ell.len() != self.columns() {
            return Err(Error::DimensionMismatch {
                expected: self.columns(),
                got: ell.len(),
            });
        }
        let mut blocks: Vec<KernelBlock> = Vec::new();
        for ((&(i, j), &l), a) in self.column_labels.iter().zip(ell).zip(&self.alpha) {
            if j == 0 {
                if l > 0 {
                    return Err(Error::UnsupportedShape(format!("ℓ_{{{i},0}} = {l} > 0")));
                }
                blocks.push(KernelBlock {
                    k: l.unsigned_abs() as u32,
                    alpha0: a.clone(),
                    ells: Vec::new(),
                });
            } else {
                if l < 0 {
                    return Err(Error::UnsupportedShape(format!("ℓ_{{{i},{j}}} = {l} < 0")));
                }
                if !a.is_zero() {
                    return Err(Error::UnsupportedShape(format!("α_{{{i},{j}}} ≠ 0")));
                }
                blocks[i].ells.push(l as u32);
            }
        }
        Ok(KernelShape { blocks })
    }

    pub fn to_json(&self) -> Value {
        let qs = |v: &[BigRational]| v.iter().map(fmt_q).collect::<Vec<_>>();
        json!({
            "n": self.n,
            "r": self.r,
            "A": self.a.to_i64_rows().expect("GKZ entries are small"),
            "beta": qs(&self.beta),
            "alpha": qs(&self.alpha),
            "kernel": self.kernel,
            "column_labels": self.column_labels,
            "display_row_order": self.display_row_order(),
        })
    }
}

/// One block `i` of a rank-one kernel vector: `ℓ_{i,0} = -k`, the lift `α_{i,0}`,
/// and the positive entries `ℓ_{i,j}`, `j ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelBlock {
    pub k: u32,
    pub alpha0: BigRational,
    pub ells: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelShape {
    pub blocks: Vec<KernelBlock>,
}

/// `(a)_m = a (a+1) ⋯ (a+m-1)`.
pub fn rising(a: &BigRational, m: u64) -> BigRational {
    let mut acc = BigRational::one();
    let mut x = a.clone();
    for _ in 0..m {
        acc *= &x;
        x += BigRational::one();
    }
    acc
}

pub fn factorial(m: u64) -> BigInt {
    (1..=m).map(BigInt::from).product()
}

impl KernelShape {
    pub fn from_blocks(blocks: Vec<KernelBlock>) -> Self {
        KernelShape { blocks }
    }

    /// `Σᵢ kᵢ`, i.e. `-Σᵢ ℓ_{i,0}`.
    pub fn total_k(&self) -> u32 {
        self.blocks.iter().map(|b| b.k).sum()
    }

    /// Degree of the Picard–Fuchs operator: `Σ ℓ_{i,j}` over `j ≥ 1`.
    pub fn degree(&self) -> usize {
        self.blocks
            .iter()
            .flat_map(|b| &b.ells)
            .map(|&l| l as usize)
            .sum()
    }

    /// `(-1)^{n Σ ℓ_{i,0}}`.
    pub fn sign(&self, n: u64) -> i64 {
        if (n * u64::from(self.total_k())).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// `c_n = (-1)^{nΣℓ_{i,0}} Πᵢ Γ(kᵢn − α_{i,0}) / (Γ(−α_{i,0}) Π_j (ℓ_{i,j} n)!)`.
    pub fn coefficient(&self, n: u64) -> BigRational {
        let mut c = int(self.sign(n));
        for b in &self.blocks {
            c *= rising(&-&b.alpha0, u64::from(b.k) * n);
            for &l in &b.ells {
                c /= BigRational::from_integer(factorial(u64::from(l) * n));
            }
        }
        c
    }

    /// `c_{n+1} Π (ℓ(n+1))!/(ℓn)! = σ c_n Πᵢ (kᵢn − α_{i,0})_{kᵢ}` as
    /// `(left factor, right factor)` with `σ = (-1)^{Σkᵢ}`.
    pub fn recurrence_factors(&self, n: u64) -> (BigRational, BigRational) {
        let mut left = BigRational::one();
        let mut right = int(self.sign(1));
        for b in &self.blocks {
            let k = u64::from(b.k);
            right *= rising(&(int((k * n) as i64) - &b.alpha0), k);
            for &l in &b.ells {
                let l = u64::from(l);
                // falling factorial (l(n+1))_l
                for m in 0..l {
                    left *= int((l * (n + 1) - m) as i64);
                }
            }
        }
        (left, right)
    }
}

/// The holomorphic solution `Σ cₙ zⁿ` with `z = x^ℓ`, truncated at order `n`.
pub fn holo_solution(shape: &KernelShape, n: usize) -> RationalSeries {
    RationalSeries::from_fn(n, |k| shape.coefficient(k as u64))
}

/// Checks the two-term recurrence of the box operator `□_ℓ` on `series`.
pub fn box_annihilation_check(shape: &KernelShape, series: &RationalSeries) -> bool {
    let n = series.order();
    (0..n).all(|k| {
        let (left, right) = shape.recurrence_factors(k as u64);
        left * series.coeff(k + 1) == right * series.coeff(k)
    })
}

/// `Γ(x) = value · √π^{sqrt_pi}` for integral or half-integral `x`; `None` at poles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaValue {
    pub value: BigRational,
    pub sqrt_pi: u32,
}

pub fn gamma_exact(x: &BigRational) -> Result<Option<GammaValue>> {
    let two_x = x * int(2);
    if !two_x.is_integer() {
        return Err(Error::UnsupportedShape(format!(
            "Γ({x}) is not half-integral"
        )));
    }
    let half = !x.is_integer();
    if !half && !x.is_positive() {
        return Ok(None);
    }
    let (mut v, mut at) = if half {
        (BigRational::one(), q(1, 2))
    } else {
        (BigRational::one(), int(1))
    };
    while &at < x {
        v *= &at;
        at += BigRational::one();
    }
    while &at > x {
        at -= BigRational::one();
        v /= &at;
    }
    Ok(Some(GammaValue {
        value: v,
        sqrt_pi: u32::from(half),
    }))
}

/// A term `coefficient · π^{-sqrt_pi_power/2} · x^{ℓ+α}` of the formal GKZ series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalTerm {
    pub ell: Vec<i64>,
    pub exponent: Vec<BigRational>,
    pub coefficient: BigRational,
    pub sqrt_pi_power: u32,
}

/// Nonzero terms `Π 1/Γ(ℓ_{i,j} + α_{i,j} + 1)` of the formal solution for all
/// `ℓ ∈ L` with `max |ℓ_{i,j}| ≤ cutoff`. Works for any kernel rank.
pub fn formal_terms(gkz: &GkzData, cutoff: i64) -> Result<Vec<FormalTerm>> {
    let basis = &gkz.kernel;
    let rank = basis.len();
    let mut out = Vec::new();
    if rank == 0 {
        return Ok(out);
    }
    // ℓ is determined by its entries on `rank` independent columns, so enumerate
    // those entries in the box and solve for the basis coefficients
    let inv = pivot_inverse(basis, gkz.columns());
    let mut sub = vec![-cutoff; rank];
    loop {
        let coeffs: Vec<BigRational> = (0..rank)
            .map(|a| (0..rank).map(|b| &inv[a][b] * int(sub[b])).sum())
            .collect();
        if coeffs.iter().all(BigRational::is_integer) {
            let k: Vec<i64> = coeffs
                .iter()
                .map(|c| c.to_integer().to_i64().unwrap())
                .collect();
            let ell: Vec<i64> = (0..gkz.columns())
                .map(|c| basis.iter().zip(&k).map(|(b, x)| b[c] * x).sum())
                .collect();
            if ell.iter().all(|v| v.abs() <= cutoff) {
                if let Some(term) = formal_term(gkz, ell)? {
                    out.push(term);
                }
            }
        }
        let mut i = 0;
        loop {
            if i == rank {
                out.sort_by(|a, b| a.ell.cmp(&b.ell));
                return Ok(out);
            }
            sub[i] += 1;
            if sub[i] <= cutoff {
                break;
            }
            sub[i] = -cutoff;
            i += 1;
        }
    }
}

fn formal_term(gkz: &GkzData, ell: Vec<i64>) -> Result<Option<FormalTerm>> {
    let exponent: Vec<BigRational> = ell
        .iter()
        .zip(&gkz.alpha)
        .map(|(&l, a)| int(l) + a)
        .collect();
    let mut coefficient = BigRational::one();
    let mut sqrt_pi_power = 0;
    for e in &exponent {
        match gamma_exact(&(e + BigRational::one()))? {
            Some(g) => {
                coefficient /= g.value;
                sqrt_pi_power += g.sqrt_pi;
            }
            None => return Ok(None),
        }
    }
    Ok(Some(FormalTerm {
        ell,
        exponent,
        coefficient,
        sqrt_pi_power,
    }))
}

/// Inverse of the basis restricted to columns on which it is independent,
/// indexed `[basis vector][pivot]`.
fn pivot_inverse(basis: &[Vec<i64>], cols: usize) -> Vec<Vec<BigRational>> {
    let rank = basis.len();
    let mut pivots = Vec::new();
    let mut echelon: Vec<Vec<BigRational>> = Vec::new();
    for c in 0..cols {
        let mut v: Vec<BigRational> = basis.iter().map(|b| int(b[c])).collect();
        for e in &echelon {
            let lead = (0..rank).find(|&i| !e[i].is_zero()).unwrap();
            if !v[lead].is_zero() {
                let f = &v[lead] / &e[lead];
                for i in 0..rank {
                    let t = &f * &e[i];
                    v[i] -= t;
                }
            }
        }
        if v.iter().any(|x| !x.is_zero()) {
            echelon.push(v);
            pivots.push(c);
            if pivots.len() == rank {
                break;
            }
        }
    }
    // M[b][p] = basis[b][pivots[p]]; we need coeffs = sub · M^{-1}
    let mut m: Vec<Vec<BigRational>> = (0..rank)
        .map(|p| {
            let mut row: Vec<BigRational> = (0..rank).map(|b| int(basis[b][pivots[p]])).collect();
            row.extend((0..rank).map(|j| {
                if j == p {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            row
        })
        .collect();
    for k in 0..rank {
        let piv = (k..rank)
            .find(|&i| !m[i][k].is_zero())
            .expect("pivots are independent");
        m.swap(k, piv);
        let d = m[k][k].clone();
        for x in m[k].iter_mut() {
            *x /= &d;
        }
        for i in 0..rank {
            if i != k && !m[i][k].is_zero() {
                let f = m[i][k].clone();
                for j in 0..2 * rank {
                    let t = &f * &m[k][j];
                    m[i][j] -= t;
                }
            }
        }
    }
    m.into_iter().map(|r| r[rank..].to_vec()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quartic_shape() -> KernelShape {
        KernelShape::from_blocks(vec![KernelBlock {
            k: 4,
            alpha0: q(-1, 2),
            ells: vec![1, 1, 1, 1],
        }])
    }

    #[test]
    fn quartic_coefficients() {
        let s = holo_solution(&quartic_shape(), 3);
        assert_eq!(s.coeff(0), int(1));
        assert_eq!(s.coeff(1), q(105, 16));
        assert!(box_annihilation_check(&quartic_shape(), &s));
    }

    #[test]
    fn corrupted_series_fails_check() {
        let mut s = holo_solution(&quartic_shape(), 6);
        s.set_coeff(4, s.coeff(4) + int(1));
        assert!(!box_annihilation_check(&quartic_shape(), &s));
    }

    #[test]
    fn gamma_half_integers() {
        assert_eq!(
            gamma_exact(&q(9, 2)).unwrap(),
            Some(GammaValue {
                value: q(105, 16),
                sqrt_pi: 1
            })
        );
        assert_eq!(
            gamma_exact(&q(-1, 2)).unwrap(),
            Some(GammaValue {
                value: int(-2),
                sqrt_pi: 1
            })
        );
        assert_eq!(gamma_exact(&int(0)).unwrap(), None);
        assert_eq!(gamma_exact(&int(5)).unwrap().unwrap().value, int(24));
    }
}
