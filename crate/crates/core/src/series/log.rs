use num_rational::BigRational;
use serde_json::{json, Value};

use super::{Coeff, Series};
use crate::rational::int;

/// `Σₖ Λᵏ Sₖ(z)` with `Λ = log z`, so `θΛ = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct LogSeries<R> {
    parts: Vec<Series<R>>,
}

impl<R: Coeff> LogSeries<R> {
    /// `parts[k]` is the coefficient of `Λᵏ`. All parts are truncated to the
    /// smallest order among them.
    pub fn new(parts: Vec<Series<R>>) -> Self {
        assert!(!parts.is_empty(), "log series needs at least one part");
        let n = parts.iter().map(Series::order).min().unwrap();
        LogSeries {
            parts: parts.into_iter().map(|p| p.truncate(n)).collect(),
        }
    }

    pub fn from_series(s: Series<R>) -> Self {
        Self::new(vec![s])
    }

    pub fn order(&self) -> usize {
        self.parts[0].order()
    }

    pub fn log_degree(&self) -> usize {
        self.parts.len() - 1
    }

    pub fn parts(&self) -> &[Series<R>] {
        &self.parts
    }

    pub fn part(&self, k: usize) -> Series<R> {
        self.parts
            .get(k)
            .cloned()
            .unwrap_or_else(|| Series::zero(self.order()))
    }

    pub fn is_zero(&self) -> bool {
        self.parts.iter().all(Series::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let k = self.parts.len().max(other.parts.len());
        Self::new((0..k).map(|i| self.part(i).add(&other.part(i))).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let k = self.parts.len().max(other.parts.len());
        Self::new((0..k).map(|i| self.part(i).sub(&other.part(i))).collect())
    }

    pub fn scale(&self, c: &R) -> Self {
        Self::new(self.parts.iter().map(|p| p.scale(c)).collect())
    }

    pub fn scale_q(&self, c: &BigRational) -> Self {
        Self::new(self.parts.iter().map(|p| p.scale_q(c)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let mut parts = vec![Series::zero(n); self.parts.len() + other.parts.len() - 1];
        for (i, a) in self.parts.iter().enumerate() {
            for (j, b) in other.parts.iter().enumerate() {
                parts[i + j] = parts[i + j].add(&a.mul(b));
            }
        }
        Self::new(parts)
    }

    /// Multiplies by a plain series.
    pub fn mul_series(&self, s: &Series<R>) -> Self {
        Self::new(self.parts.iter().map(|p| p.mul(s)).collect())
    }

    /// `θ(Λᵏ S) = k Λ^{k-1} S + Λᵏ θS`.
    pub fn theta(&self) -> Self {
        let n = self.order();
        let k = self.parts.len();
        let parts = (0..k)
            .map(|i| {
                let mut t = self.parts[i].theta();
                if i + 1 < k {
                    t = t.add(&self.parts[i + 1].scale_q(&int(i as i64 + 1)));
                }
                t
            })
            .collect::<Vec<_>>();
        let mut out = Self::new(parts);
        debug_assert_eq!(out.order(), n);
        out.trim();
        out
    }

    fn trim(&mut self) {
        while self.parts.len() > 1 && self.parts.last().is_some_and(Series::is_zero) {
            self.parts.pop();
        }
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.parts
                .iter()
                .enumerate()
                .map(|(k, p)| json!({"log_power": k, "coeffs": p.to_json()}))
                .collect(),
        )
    }
}
