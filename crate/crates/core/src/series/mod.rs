//! Exact truncated power series in one variable `z`.
//!
//! A series of order `N` carries the coefficients of `z^0, ..., z^N`; every binary
//! operation truncates to the smaller order of its operands.

mod eps;
mod log;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::rational::{fmt_q, int};

pub use eps::EpsPoly;
pub use log::LogSeries;

/// Coefficient ring of a [`Series`].
pub trait Coeff:
    Clone
    + PartialEq
    + fmt::Debug
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_rational(q: BigRational) -> Self;
    fn scale(&self, q: &BigRational) -> Self;
    /// Multiplicative inverse if this is a unit.
    fn inverse(&self) -> Option<Self>;
    fn to_json(&self) -> Value;
}

impl Coeff for BigRational {
    fn from_rational(q: BigRational) -> Self {
        q
    }
    fn scale(&self, q: &BigRational) -> Self {
        self * q
    }
    fn inverse(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.recip())
    }
    fn to_json(&self) -> Value {
        Value::String(fmt_q(self))
    }
}

#[derive(Clone, PartialEq)]
pub struct Series<R> {
    coeffs: Vec<R>,
}

pub type RationalSeries = Series<BigRational>;
pub type NilpotentSeries = Series<EpsPoly>;

impl<R: fmt::Debug> fmt::Debug for Series<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Series(N={}, {:?})", self.coeffs.len() - 1, self.coeffs)
    }
}

impl<R: Coeff> Series<R> {
    /// Pads with zeros or truncates so the result has order `n`.
    pub fn new(mut coeffs: Vec<R>, n: usize) -> Self {
        coeffs.resize(n + 1, R::zero());
        Series { coeffs }
    }

    pub fn zero(n: usize) -> Self {
        Self::new(Vec::new(), n)
    }

    pub fn one(n: usize) -> Self {
        Self::constant(R::one(), n)
    }

    pub fn constant(c: R, n: usize) -> Self {
        Self::new(vec![c], n)
    }

    /// `c · z^k`.
    pub fn monomial(c: R, k: usize, n: usize) -> Self {
        let mut s = Self::zero(n);
        if k <= n {
            s.coeffs[k] = c;
        }
        s
    }

    /// The variable `z`.
    pub fn var(n: usize) -> Self {
        Self::monomial(R::one(), 1, n)
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize) -> R) -> Self {
        Series {
            coeffs: (0..=n).map(f).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> R {
        self.coeffs.get(k).cloned().unwrap_or_else(R::zero)
    }

    pub fn set_coeff(&mut self, k: usize, c: R) {
        if k < self.coeffs.len() {
            self.coeffs[k] = c;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn truncate(&self, n: usize) -> Self {
        Self::new(
            self.coeffs[..=n.min(self.order())].to_vec(),
            n.min(self.order()),
        )
    }

    pub fn map<S: Coeff>(&self, f: impl Fn(&R) -> S) -> Series<S> {
        Series {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&R, &R) -> R) -> Self {
        Series {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a.clone() + b.clone())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a.clone() - b.clone())
    }

    pub fn neg(&self) -> Self {
        self.map(|a| -a.clone())
    }

    pub fn scale(&self, c: &R) -> Self {
        self.map(|a| a.clone() * c.clone())
    }

    pub fn scale_q(&self, c: &BigRational) -> Self {
        self.map(|a| a.scale(c))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let a = &self.coeffs;
        let b = &other.coeffs;
        Series::from_fn(n, |k| {
            let mut acc = R::zero();
            for i in 0..=k {
                if !a[i].is_zero() && !b[k - i].is_zero() {
                    acc = acc + a[i].clone() * b[k - i].clone();
                }
            }
            acc
        })
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.order());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplicative inverse; the constant term must be a unit.
    pub fn inverse(&self) -> Result<Self> {
        let inv0 = self.coeffs[0].inverse().ok_or(Error::NonUnitDivision)?;
        let n = self.order();
        let mut out: Vec<R> = Vec::with_capacity(n + 1);
        out.push(inv0.clone());
        for k in 1..=n {
            let mut acc = R::zero();
            for i in 1..=k {
                acc = acc + self.coeffs[i].clone() * out[k - i].clone();
            }
            out.push(-(acc * inv0.clone()));
        }
        Ok(Series { coeffs: out })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inverse()?))
    }

    /// `θ = z d/dz`.
    pub fn theta(&self) -> Self {
        Series {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c.scale(&int(k as i64)))
                .collect(),
        }
    }

    /// `exp(S)` for `S(0) = 0`.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::SeriesDomain("exp needs a vanishing constant term"));
        }
        let n = self.order();
        let mut f: Vec<R> = vec![R::one()];
        for k in 1..=n {
            let mut acc = R::zero();
            for j in 1..=k {
                acc = acc + self.coeffs[j].scale(&int(j as i64)) * f[k - j].clone();
            }
            f.push(acc.scale(&BigRational::new(1.into(), (k as i64).into())));
        }
        Ok(Series { coeffs: f })
    }

    /// `log(S)` for `S(0) = 1`.
    pub fn log(&self) -> Result<Self> {
        if self.coeffs[0] != R::one() {
            return Err(Error::SeriesDomain("log needs constant term 1"));
        }
        let n = self.order();
        let mut g: Vec<R> = vec![R::zero()];
        for k in 1..=n {
            let mut acc = R::zero();
            for j in 1..k {
                acc = acc + g[j].scale(&int(j as i64)) * self.coeffs[k - j].clone();
            }
            let t =
                self.coeffs[k].clone() - acc.scale(&BigRational::new(1.into(), (k as i64).into()));
            g.push(t);
        }
        Ok(Series { coeffs: g })
    }

    /// `self(g(z))` for `g(0) = 0`.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        if !g.coeffs[0].is_zero() {
            return Err(Error::SeriesDomain(
                "composition needs a vanishing constant term",
            ));
        }
        let n = self.order().min(g.order());
        let g = g.truncate(n);
        let mut acc = Self::constant(self.coeffs[n].clone(), n);
        for k in (0..n).rev() {
            acc = acc.mul(&g);
            acc.coeffs[0] = acc.coeffs[0].clone() + self.coeffs[k].clone();
        }
        Ok(acc)
    }

    /// `S(c z)`.
    pub fn rescale(&self, c: &BigRational) -> Self {
        let mut p = BigRational::one();
        Series {
            coeffs: self
                .coeffs
                .iter()
                .map(|a| {
                    let r = a.scale(&p);
                    p *= c;
                    r
                })
                .collect(),
        }
    }

    /// `d/dz`; the order drops by one.
    pub fn derivative(&self) -> Self {
        let n = self.order();
        if n == 0 {
            return Self::zero(0);
        }
        Series::from_fn(n - 1, |k| self.coeffs[k + 1].scale(&int(k as i64 + 1)))
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.coeffs.iter().map(Coeff::to_json).collect())
    }
}

impl RationalSeries {
    pub fn from_rationals(c: &[BigRational], n: usize) -> Self {
        Self::new(c.to_vec(), n)
    }

    /// Compositional inverse of `f = a₁z + a₂z² + ⋯` with `a₁ ≠ 0`, by Lagrange
    /// inversion: `g_k = [z^{k-1}] (z/f)^k / k`.
    pub fn reversion(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::SeriesDomain(
                "reversion needs a vanishing constant term",
            ));
        }
        let n = self.order();
        if n == 0 {
            return Ok(Self::zero(0));
        }
        if self.coeffs[1].is_zero() {
            return Err(Error::SeriesDomain("reversion needs a nonzero linear term"));
        }
        // f/z to order n - 1
        let h = Self::new(self.coeffs[1..].to_vec(), n - 1).inverse()?;
        let mut g = vec![BigRational::zero(); n + 1];
        let mut p = Self::one(n - 1);
        for (k, gk) in g.iter_mut().enumerate().skip(1) {
            p = p.mul(&h);
            *gk = p.coeffs[k - 1].clone() / int(k as i64);
        }
        Ok(Series { coeffs: g })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let arr = v
            .as_array()
            .filter(|a| !a.is_empty())
            .ok_or_else(|| Error::Invalid("series must be a nonempty array".into()))?;
        let coeffs = arr
            .iter()
            .map(|x| match x {
                Value::String(s) => crate::rational::parse_q(s),
                Value::Number(n) => n
                    .as_i64()
                    .map(int)
                    .ok_or_else(|| Error::Invalid(format!("not an integer: {n}"))),
                other => Err(Error::Invalid(format!("not a rational: {other}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        let n = coeffs.len() - 1;
        Ok(Self::new(coeffs, n))
    }
}
