use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::Value;

use super::Coeff;
use crate::rational::fmt_q;

/// An element of `ℚ[ε]/(ε^m)`.
///
/// Elements built from rationals carry no truncation (`m = ∞`); binary operations
/// truncate to the smaller `m` of their operands.
#[derive(Clone, PartialEq, Eq)]
pub struct EpsPoly {
    coeffs: Vec<BigRational>,
    order: usize,
}

const EXACT: usize = usize::MAX;

impl EpsPoly {
    /// The polynomial `Σ cₖ εᵏ` modulo `ε^m`.
    pub fn new(mut coeffs: Vec<BigRational>, m: usize) -> Self {
        coeffs.truncate(m);
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        EpsPoly { coeffs, order: m }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c], EXACT)
    }

    /// `ε` in `ℚ[ε]/(ε^m)`.
    pub fn eps(m: usize) -> Self {
        Self::new(vec![BigRational::zero(), BigRational::one()], m)
    }

    /// Nilpotency order `m`, or `None` for an untruncated element.
    pub fn nilpotency(&self) -> Option<usize> {
        (self.order != EXACT).then_some(self.order)
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn truncate(&self, m: usize) -> Self {
        Self::new(self.coeffs.clone(), m.min(self.order))
    }

    /// Evaluation at `ε = 0`.
    pub fn at_zero(&self) -> BigRational {
        self.coeff(0)
    }

    /// `exp(c ε)` truncated at `ε^m`.
    pub fn exp_linear(c: &BigRational, m: usize) -> Self {
        let mut out = Vec::with_capacity(m);
        let mut t = BigRational::one();
        for k in 0..m {
            out.push(t.clone());
            t = t * c / BigRational::from_integer((k as i64 + 1).into());
        }
        Self::new(out, m)
    }
}

impl fmt::Debug for EpsPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| format!("{c}ε^{k}"))
            .collect();
        if terms.is_empty() {
            write!(f, "0")?;
        } else {
            write!(f, "{}", terms.join(" + "))?;
        }
        if let Some(m) = self.nilpotency() {
            write!(f, " mod ε^{m}")?;
        }
        Ok(())
    }
}

impl Zero for EpsPoly {
    fn zero() -> Self {
        Self::new(Vec::new(), EXACT)
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for EpsPoly {
    fn one() -> Self {
        Self::constant(BigRational::one())
    }
}

impl Add for EpsPoly {
    type Output = Self;
    fn add(self, other: Self) -> Self {
        let m = self.order.min(other.order);
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            (0..len).map(|k| self.coeff(k) + other.coeff(k)).collect(),
            m,
        )
    }
}

impl Sub for EpsPoly {
    type Output = Self;
    fn sub(self, other: Self) -> Self {
        self + (-other)
    }
}

impl Neg for EpsPoly {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(self.coeffs.into_iter().map(|c| -c).collect(), self.order)
    }
}

impl Mul for EpsPoly {
    type Output = Self;
    fn mul(self, other: Self) -> Self {
        let m = self.order.min(other.order);
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::new(Vec::new(), m);
        }
        let len = (self.coeffs.len() + other.coeffs.len() - 1).min(m);
        let mut out = vec![BigRational::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                out[i + j] += a * b;
            }
        }
        Self::new(out, m)
    }
}

impl Coeff for EpsPoly {
    fn from_rational(q: BigRational) -> Self {
        Self::constant(q)
    }
    fn scale(&self, q: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * q).collect(), self.order)
    }
    fn inverse(&self) -> Option<Self> {
        let c0 = self.coeff(0);
        if c0.is_zero() {
            return None;
        }
        if self.order == EXACT {
            return (self.coeffs.len() == 1).then(|| Self::constant(c0.recip()));
        }
        let inv0 = c0.recip();
        let mut out: Vec<BigRational> = vec![inv0.clone()];
        for k in 1..self.order {
            let mut acc = BigRational::zero();
            for i in 1..=k {
                acc += self.coeff(i) * &out[k - i];
            }
            out.push(-acc * &inv0);
        }
        Some(Self::new(out, self.order))
    }
    fn to_json(&self) -> Value {
        Value::Array(
            self.coeffs
                .iter()
                .map(|c| Value::String(fmt_q(c)))
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, q};

    #[test]
    fn nilpotency_enforced() {
        let e = EpsPoly::eps(3);
        let e2 = e.clone() * e.clone();
        assert_eq!(e2.coeffs(), &[int(0), int(0), int(1)]);
        assert!((e2 * e).is_zero());
    }

    #[test]
    fn unit_inverse() {
        let u = EpsPoly::new(vec![int(2), int(1)], 4);
        let inv = u.inverse().unwrap();
        assert_eq!(inv.coeffs(), &[q(1, 2), q(-1, 4), q(1, 8), q(-1, 16)]);
        assert_eq!(u * inv, EpsPoly::one().truncate(4));
        assert!(EpsPoly::eps(4).inverse().is_none());
    }

    #[test]
    fn exact_constants_adopt_truncation() {
        let a = EpsPoly::constant(int(3)) + EpsPoly::eps(2);
        assert_eq!(a.nilpotency(), Some(2));
    }
}
