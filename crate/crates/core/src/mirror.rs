//! Frobenius basis, mirror map, Yukawa coupling and the A-model correlation series.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::gkz::{holo_solution, KernelShape};
use crate::picard_fuchs::{yukawa_ode_rhs, ThetaOperator};
use crate::rational::{fmt_q, int, q};
use crate::series::{LogSeries, RationalSeries};

/// `ω₀` and the non-logarithmic part `τ` of `ω₁ = ω₀ log z + τ + κ₀ ω₀`, where the
/// constant `κ₀ = −log s` is recorded through the integer scale `s`.
#[derive(Clone, Debug, PartialEq)]
pub struct FrobeniusPair {
    pub omega0: RationalSeries,
    pub tau: RationalSeries,
    pub scale: BigInt,
}

impl FrobeniusPair {
    pub fn order(&self) -> usize {
        self.omega0.order().min(self.tau.order())
    }

    /// `ω₀ Λ + τ`, which the Picard–Fuchs operator annihilates together with `ω₀`.
    pub fn omega1(&self) -> LogSeries<BigRational> {
        LogSeries::new(vec![self.tau.clone(), self.omega0.clone()])
    }
}

/// `Σ_{t<m} 1/(a+t) = ψ(a+m) − ψ(a)`.
pub fn digamma_difference(a: &BigRational, m: u64) -> BigRational {
    let mut acc = BigRational::zero();
    let mut x = a.clone();
    for _ in 0..m {
        acc += x.recip();
        x += BigRational::one();
    }
    acc
}

/// The scale `s` with `κ₀ = Σᵢ kᵢ ψ(−α_{i,0}) − Σ ℓ_{i,j} ψ(1) = −log s`.
///
/// Each block with `α_{i,0} = −1/2` contributes `kᵢ(ψ(1/2) − ψ(1)) = −2kᵢ log 2`, and
/// blocks with `α_{i,0} = −1` contribute nothing. Other shapes leave a constant that
/// is not the logarithm of an integer.
pub fn frobenius_scale(shape: &KernelShape) -> Result<BigInt> {
    let mut s = BigInt::one();
    for b in &shape.blocks {
        let ell_sum: u32 = b.ells.iter().sum();
        if ell_sum != b.k {
            return Err(Error::ScaleNotIntegral);
        }
        if b.alpha0 == q(-1, 2) {
            s *= BigInt::from(4).pow(b.k);
        } else if b.alpha0 != int(-1) {
            return Err(Error::ScaleNotIntegral);
        }
    }
    Ok(s)
}

/// `ω₀` and `τ` to order `n`.
pub fn frobenius_pair(shape: &KernelShape, n: usize) -> Result<FrobeniusPair> {
    let scale = frobenius_scale(shape)?;
    let omega0 = holo_solution(shape, n);
    let tau = RationalSeries::from_fn(n, |m| {
        let m = m as u64;
        let mut d = BigRational::zero();
        for b in &shape.blocks {
            let k = u64::from(b.k);
            d += int(k as i64) * digamma_difference(&-&b.alpha0, k * m);
            for &l in &b.ells {
                let l = u64::from(l);
                d -= int(l as i64) * digamma_difference(&int(1), l * m);
            }
        }
        omega0.coeff(m as usize) * d
    });
    Ok(FrobeniusPair { omega0, tau, scale })
}

#[derive(Clone, Debug, PartialEq)]
pub struct MirrorMap {
    pub q_of_z: RationalSeries,
    pub z_of_q: RationalSeries,
}

/// `q = (z/s) exp(τ/ω₀)` and its compositional inverse.
pub fn mirror_map(pair: &FrobeniusPair) -> Result<MirrorMap> {
    let n = pair.order();
    let ratio = pair.tau.div(&pair.omega0)?;
    let e = ratio.exp()?;
    let q_of_z = RationalSeries::var(n)
        .mul(&e)
        .scale_q(&BigRational::from_integer(pair.scale.clone()).recip());
    let z_of_q = q_of_z.reversion()?;
    Ok(MirrorMap { q_of_z, z_of_q })
}

/// Solves `θY = gY`, `Y(0) = c`, to order `n`.
pub fn solve_theta_ode(g: &RationalSeries, c: &BigRational) -> Result<RationalSeries> {
    if !g.coeff(0).is_zero() {
        return Err(Error::SeriesDomain("θY = gY needs g(0) = 0"));
    }
    let n = g.order();
    let mut y: Vec<BigRational> = vec![c.clone()];
    for k in 1..=n {
        let mut acc = BigRational::zero();
        for j in 1..=k {
            acc += g.coeff(j) * &y[k - j];
        }
        y.push(acc / int(k as i64));
    }
    Ok(RationalSeries::new(y, n))
}

/// The unnormalized Yukawa coupling `⟨θ,θ,θ⟩^Ω` with value `c` at `z = 0`.
pub fn yukawa_omega(op: &ThetaOperator, c: &BigRational, n: usize) -> Result<RationalSeries> {
    let g = yukawa_ode_rhs(op)?;
    if g.den.first().is_none_or(Zero::is_zero) {
        return Err(Error::SeriesDomain("g has a pole at z = 0"));
    }
    solve_theta_ode(&g.to_series(n)?, c)
}

/// The normalized Yukawa coupling `⟨θ,θ,θ⟩^Ω / ω₀²` in `z`.
pub fn yukawa_z(
    op: &ThetaOperator,
    c: &BigRational,
    omega0: &RationalSeries,
) -> Result<RationalSeries> {
    let y = yukawa_omega(op, c, omega0.order())?;
    y.div(&omega0.mul(omega0))
}

/// `C = cover degree × triple intersection of the base hyperplane class`.
pub fn classical_normalization(cover_degree: i64, base_triple_intersection: i64) -> BigRational {
    int(cover_degree * base_triple_intersection)
}

#[derive(Clone, Debug, PartialEq)]
pub struct YukawaData {
    pub c: BigRational,
    pub y_omega: RationalSeries,
    pub y_z: RationalSeries,
    pub k_q: RationalSeries,
}

impl YukawaData {
    pub fn to_json(&self) -> Value {
        json!({
            "C": fmt_q(&self.c),
            "yukawa_omega": self.y_omega.to_json(),
            "yukawa_z": self.y_z.to_json(),
            "a_model": self.k_q.to_json(),
        })
    }
}

/// `K(q) = [Y/ω₀²](z(q)) · (θ_q log z(q))³`.
///
/// The result has order `pair.order() - 1`, one less than the mirror map, because
/// `θ_q log z` needs `z(q)` one order further.
pub fn a_model_correlation(
    op: &ThetaOperator,
    pair: &FrobeniusPair,
    c: &BigRational,
) -> Result<YukawaData> {
    let n = pair.order();
    if n < 1 {
        return Err(Error::SeriesDomain("A-model series needs order at least 1"));
    }
    let mm = mirror_map(pair)?;
    let y_omega = yukawa_omega(op, c, n)?;
    let y_z = y_omega.div(&pair.omega0.mul(&pair.omega0))?;
    // z(q)/q, then θ_q log z = 1 + θ(z/q)/(z/q)
    let zq = RationalSeries::from_fn(n - 1, |k| mm.z_of_q.coeff(k + 1));
    let dlog = RationalSeries::one(n - 1).add(&zq.theta().div(&zq)?);
    let k_q = y_z
        .truncate(n - 1)
        .compose(&mm.z_of_q.truncate(n - 1))?
        .mul(&dlog.pow(3));
    Ok(YukawaData {
        c: c.clone(),
        y_omega: y_omega.truncate(n - 1),
        y_z: y_z.truncate(n - 1),
        k_q,
    })
}

pub fn is_integral(s: &RationalSeries) -> bool {
    s.coeffs().iter().all(BigRational::is_integer)
}
