//! Cohomology-valued series: the Frobenius deformation, the B-series and the
//! untwisted I-function, with `ε` standing for the hyperplane class.

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::gkz::{GkzData, KernelShape};
use crate::picard_fuchs::ThetaOperator;
use crate::rational::{int, q};
use crate::series::{Coeff, EpsPoly, LogSeries, NilpotentSeries, RationalSeries, Series};

/// `ℚ[ε]/(ε^m)` with divisor classes `D_c = d_c ε` and the integral `∫ ε^{m-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomRing {
    pub m: usize,
    pub top_integral: BigRational,
    pub divisors: Vec<BigRational>,
}

impl CohomRing {
    /// The one-parameter ring of a rank-one GKZ system: `D_{i,j} = ℓ_{i,j} ε`.
    pub fn from_kernel(ell: &[i64], m: usize, top_integral: BigRational) -> Self {
        CohomRing {
            m,
            top_integral,
            divisors: ell.iter().map(|&l| int(l)).collect(),
        }
    }

    pub fn eps(&self) -> EpsPoly {
        EpsPoly::eps(self.m)
    }

    pub fn divisor(&self, c: usize) -> EpsPoly {
        EpsPoly::new(vec![BigRational::zero(), self.divisors[c].clone()], self.m)
    }

    /// `A · D = 0` in the lattice rows, and `Σ_j D_{i,j} = 0` in each Kronecker row.
    pub fn relations_hold(&self, gkz: &GkzData) -> bool {
        (0..gkz.a.rows()).all(|i| {
            (0..gkz.a.cols())
                .map(|j| BigRational::from_integer(gkz.a[(i, j)].clone()) * &self.divisors[j])
                .sum::<BigRational>()
                .is_zero()
        })
    }

    /// `∫ x`, the `ε^{m-1}` coefficient times the top integral.
    pub fn integrate(&self, x: &EpsPoly) -> BigRational {
        x.coeff(self.m - 1) * &self.top_integral
    }
}

/// Gram matrix `∫ bᵢ bⱼ`.
pub fn pairing_matrix(ring: &CohomRing, basis: &[EpsPoly]) -> Vec<Vec<BigRational>> {
    basis
        .iter()
        .map(|a| {
            basis
                .iter()
                .map(|b| ring.integrate(&(a.clone() * b.clone()).truncate(ring.m)))
                .collect()
        })
        .collect()
}

fn linear(a: &BigRational, b: BigRational, m: usize) -> EpsPoly {
    // a ε + b
    EpsPoly::new(vec![b, a.clone()], m)
}

/// `c_n(ρ)/c_0(ρ)` of `Σ c_n(ρ) z^{n+ρ}` in `ℚ[ρ]/(ρ^m)`, with `ρ` written as `ε`.
pub fn deformed_solution(shape: &KernelShape, n: usize, m: usize) -> NilpotentSeries {
    let one = EpsPoly::one().truncate(m);
    let mut coeffs = Vec::with_capacity(n + 1);
    for d in 0..=n as u64 {
        let mut c = one.scale(&int(shape.sign(d)));
        for b in &shape.blocks {
            let k = int(i64::from(b.k));
            let a = -&b.alpha0;
            for t in 0..u64::from(b.k) * d {
                c = c * linear(&k, &a + int(t as i64), m);
            }
            for &l in &b.ells {
                let lq = int(i64::from(l));
                for t in 1..=u64::from(l) * d {
                    let f = linear(&lq, int(t as i64), m)
                        .inverse()
                        .expect("constant term is positive");
                    c = c * f;
                }
            }
        }
        coeffs.push(c);
    }
    Series::new(coeffs, n)
}

/// `exp(εΛ) · F`, the prefactor `z^ε` written out in `Λ = log z`.
pub fn with_log_prefactor(f: &NilpotentSeries, m: usize) -> LogSeries<EpsPoly> {
    let n = f.order();
    let parts = (0..m)
        .map(|k| {
            let c = EpsPoly::exp_linear(&int(1), m);
            let mono = EpsPoly::new(
                (0..=k)
                    .map(|i| {
                        if i == k {
                            c.coeff(k)
                        } else {
                            BigRational::zero()
                        }
                    })
                    .collect(),
                m,
            );
            f.scale(&mono).truncate(n)
        })
        .collect();
    LogSeries::new(parts)
}

/// `z^{-ε} L (z^ε F)` modulo `ε^m`. Fails if a component of `ε`-degree below the
/// operator degree survives, listing the offending `(n, k)`.
pub fn frobenius_residue(
    op: &ThetaOperator,
    deformed: &NilpotentSeries,
    m: usize,
) -> Result<NilpotentSeries> {
    let r = op.apply_shifted(deformed, &EpsPoly::eps(m));
    let d = op.degree();
    let offending: Vec<(usize, usize)> = r
        .coeffs()
        .iter()
        .enumerate()
        .flat_map(|(n, c)| {
            (0..d.min(m))
                .filter(|&k| !c.coeff(k).is_zero())
                .map(move |k| (n, k))
        })
        .collect();
    if !offending.is_empty() {
        return Err(Error::Assertion(format!(
            "nonvanishing residue components (n, k): {offending:?}"
        )));
    }
    Ok(r)
}

/// `Γ(D+α+1)/Γ(ℓn+D+α+1)` as an element of `ℚ[ε]/(ε^m)`.
fn gamma_column(ell: i64, n: i64, d: &BigRational, alpha: &BigRational, m: usize) -> EpsPoly {
    let base = alpha + BigRational::one();
    let steps = ell * n;
    let mut acc = EpsPoly::one().truncate(m);
    if steps >= 0 {
        for t in 0..steps {
            let f = linear(d, &base + int(t), m)
                .inverse()
                .expect("unit by construction");
            acc = acc * f;
        }
    } else {
        for t in 1..=-steps {
            acc = acc * linear(d, &base - int(t), m);
        }
    }
    acc
}

/// `B̂ = z^{Σ...}·Σ Ôₙ zⁿ` for a rank-one system, with the `z`-independent unit
/// divided out so `Ô₀ = 1`. The prefactor is `exp(εΛ)` since `Π x^{D} = z^ε`.
pub fn b_series(
    ring: &CohomRing,
    gkz: &GkzData,
    ell: &[i64],
    n: usize,
) -> Result<LogSeries<EpsPoly>> {
    if gkz.kernel.len() != 1 {
        return Err(Error::MultiparameterUnsupported(gkz.kernel.len()));
    }
    if ring.divisors.len() != ell.len() {
        return Err(Error::DimensionMismatch {
            expected: ell.len(),
            got: ring.divisors.len(),
        });
    }
    let m = ring.m;
    let coeffs: Vec<EpsPoly> = (0..=n as i64)
        .map(|d| {
            ell.iter()
                .zip(&ring.divisors)
                .zip(&gkz.alpha)
                .fold(EpsPoly::one().truncate(m), |acc, ((&l, dc), a)| {
                    acc * gamma_column(l, d, dc, a, m)
                })
        })
        .collect();
    Ok(with_log_prefactor(&Series::new(coeffs, n), m))
}

/// The untwisted I-function
/// `exp(εΛ) Σ_d q^d Π_{w∈num} Π_{t=1}^{wd}(wε+t) / Π_{w∈den} Π_{t=1}^{wd}(wε+t)`.
pub fn i_function_untwisted(
    numerator: &[u32],
    denominator: &[u32],
    m: usize,
    n: usize,
) -> LogSeries<EpsPoly> {
    let coeffs: Vec<EpsPoly> = (0..=n as u64)
        .map(|d| {
            let mut c = EpsPoly::one().truncate(m);
            for &w in numerator {
                let wq = int(i64::from(w));
                for t in 1..=u64::from(w) * d {
                    c = c * linear(&wq, int(t as i64), m);
                }
            }
            for &w in denominator {
                let wq = int(i64::from(w));
                for t in 1..=u64::from(w) * d {
                    c = c * linear(&wq, int(t as i64), m)
                        .inverse()
                        .expect("positive constant term");
                }
            }
            c
        })
        .collect();
    with_log_prefactor(&Series::new(coeffs, n), m)
}

/// Weights of the weighted-projective model: a block with `α₀ = −1/2` contributes
/// `(1/2)_{kn} = (2kn)!/(4^{kn}(kn)!)`, so `2k` upstairs and `k` downstairs; a block
/// with `α₀ = −1` contributes `k` upstairs. The `ℓ_{i,j}` always sit downstairs.
pub fn i_function_weights(shape: &KernelShape) -> Result<(Vec<u32>, Vec<u32>)> {
    let mut num = Vec::new();
    let mut den = Vec::new();
    for b in &shape.blocks {
        if b.alpha0 == q(-1, 2) {
            num.push(2 * b.k);
            den.push(b.k);
        } else if b.alpha0 == int(-1) {
            num.push(b.k);
        } else {
            return Err(Error::ScaleNotIntegral);
        }
        den.extend(b.ells.iter().copied());
    }
    num.sort_unstable();
    den.sort_unstable();
    Ok((num, den))
}

/// `[{"log_power": k, "eps_power": j, "coeffs": [...]}]`, zero slices omitted.
pub fn eps_graded_json(s: &LogSeries<EpsPoly>, m: usize) -> Value {
    let mut out = Vec::new();
    for (k, part) in s.parts().iter().enumerate() {
        for j in 0..m {
            let slice = eps_slice(part, j);
            if !slice.is_zero() {
                out.push(json!({"log_power": k, "eps_power": j, "coeffs": slice.to_json()}));
            }
        }
    }
    Value::Array(out)
}

/// `ε⁰` and `ε¹` parts of an I-function: `I = A + ε(AΛ + B) + O(ε²)`.
#[derive(Clone, Debug, PartialEq)]
pub struct IMirrorMap {
    pub a: RationalSeries,
    pub b: RationalSeries,
    /// `t = Λ + B/A`
    pub b_over_a: RationalSeries,
    /// `exp(t) = q · exp(B/A)`
    pub exp_t: RationalSeries,
}

fn eps_slice(s: &NilpotentSeries, k: usize) -> RationalSeries {
    s.map(|c| c.coeff(k))
}

pub fn i_function_mirror_map(i: &LogSeries<EpsPoly>) -> Result<IMirrorMap> {
    let base = i.part(0);
    let a = eps_slice(&base, 0);
    let b = eps_slice(&base, 1);
    if a.coeff(0).is_zero() {
        return Err(Error::NonUnitDivision);
    }
    let b_over_a = b.div(&a)?;
    let exp_t = RationalSeries::var(a.order()).mul(&b_over_a.exp()?);
    Ok(IMirrorMap {
        a,
        b,
        b_over_a,
        exp_t,
    })
}

/// The `s` with `A(q) = ω₀(s q)`, if one exists.
pub fn align_scale(a: &RationalSeries, omega0: &RationalSeries) -> Result<BigRational> {
    let n = a.order().min(omega0.order());
    if n == 0 || omega0.coeff(1).is_zero() {
        return Err(Error::Invalid("cannot align scales".into()));
    }
    let s = a.coeff(1) / omega0.coeff(1);
    if omega0.truncate(n).rescale(&s) != a.truncate(n) {
        return Err(Error::Invalid("A(q) is not a rescaling of ω₀".into()));
    }
    Ok(s)
}
