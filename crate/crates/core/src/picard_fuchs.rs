//! One-parameter Picard–Fuchs operators in `θ = z d/dz`.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::gkz::KernelShape;
use crate::rational::{fmt_q, int, q};
use crate::series::{Coeff, EpsPoly, LogSeries, NilpotentSeries, RationalSeries, Series};

/// `Σⱼ Σₖ a_{j,k} zʲ θᵏ`, with `z` to the left of `θ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaOperator {
    /// `coeffs[k][j] = a_{j,k}`, trailing zeros trimmed.
    coeffs: Vec<Vec<BigRational>>,
}

fn trim(v: &mut Vec<BigRational>) {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
}

/// Multiplies a polynomial in `θ` (constant term first) by `(a θ + b)`.
fn mul_linear(p: &[BigRational], a: &BigRational, b: &BigRational) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); p.len() + 1];
    for (k, c) in p.iter().enumerate() {
        out[k] += c * b;
        out[k + 1] += c * a;
    }
    out
}

impl ThetaOperator {
    /// From `coeffs[k][j]`, the coefficient of `zʲ θᵏ`.
    pub fn new(mut coeffs: Vec<Vec<BigRational>>) -> Self {
        coeffs.iter_mut().for_each(trim);
        while coeffs.len() > 1 && coeffs.last().is_some_and(Vec::is_empty) {
            coeffs.pop();
        }
        ThetaOperator { coeffs }
    }

    /// From `Σⱼ zʲ Pⱼ(θ)` with each `Pⱼ` given by its coefficients in `θ`.
    pub fn from_z_polys(polys: &[Vec<BigRational>]) -> Self {
        let d = polys.iter().map(Vec::len).max().unwrap_or(1);
        let coeffs = (0..d)
            .map(|k| {
                polys
                    .iter()
                    .map(|p| p.get(k).cloned().unwrap_or_default())
                    .collect()
            })
            .collect();
        Self::new(coeffs)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `zʲ θᵏ`.
    pub fn coeff(&self, j: usize, k: usize) -> BigRational {
        self.coeffs
            .get(k)
            .and_then(|p| p.get(j))
            .cloned()
            .unwrap_or_default()
    }

    /// The polynomial in `z` multiplying `θᵏ`.
    pub fn theta_coeff(&self, k: usize) -> Vec<BigRational> {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn z_degree(&self) -> usize {
        self.coeffs
            .iter()
            .map(Vec::len)
            .max()
            .unwrap_or(1)
            .saturating_sub(1)
    }

    /// `Pⱼ(θ)`, the part of the operator multiplying `zʲ`.
    pub fn z_coeff(&self, j: usize) -> Vec<BigRational> {
        let mut p: Vec<BigRational> = (0..=self.degree()).map(|k| self.coeff(j, k)).collect();
        trim(&mut p);
        p
    }

    /// The indicial polynomial at `z = 0`.
    pub fn indicial(&self) -> Vec<BigRational> {
        self.z_coeff(0)
    }

    /// Divides by the `z⁰θᵈ` coefficient.
    pub fn normalized(&self) -> Result<Self> {
        let lead = self.coeff(0, self.degree());
        if lead.is_zero() {
            return Err(Error::Invalid(
                "leading θ coefficient vanishes at z = 0".into(),
            ));
        }
        Ok(Self::new(
            self.coeffs
                .iter()
                .map(|p| p.iter().map(|c| c / &lead).collect())
                .collect(),
        ))
    }

    /// Substitutes `z ↦ c z`.
    pub fn rescale_z(&self, c: &BigRational) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .map(|p| {
                    let mut pw = BigRational::one();
                    p.iter()
                        .map(|a| {
                            let r = a * &pw;
                            pw *= c;
                            r
                        })
                        .collect()
                })
                .collect(),
        )
    }

    fn apply_with<R: Coeff>(
        &self,
        s: &Series<R>,
        theta: impl Fn(&Series<R>) -> Series<R>,
    ) -> Series<R> {
        let n = s.order();
        let mut powers = vec![s.clone()];
        for _ in 0..self.degree() {
            let next = theta(powers.last().unwrap());
            powers.push(next);
        }
        let mut out = Series::zero(n);
        for (k, p) in self.coeffs.iter().enumerate() {
            for (j, a) in p.iter().enumerate() {
                if a.is_zero() || j > n {
                    continue;
                }
                let shifted = Series::monomial(R::one(), j, n).mul(&powers[k]).scale_q(a);
                out = out.add(&shifted);
            }
        }
        out
    }

    pub fn apply(&self, s: &RationalSeries) -> RationalSeries {
        self.apply_with(s, Series::theta)
    }

    /// Application to a series with log terms, via `θΛ = 1`.
    pub fn apply_log<R: Coeff>(&self, s: &LogSeries<R>) -> LogSeries<R> {
        let n = s.order();
        let mut powers = vec![s.clone()];
        for _ in 0..self.degree() {
            let next = powers.last().unwrap().theta();
            powers.push(next);
        }
        let mut out = LogSeries::from_series(Series::zero(n));
        for (k, p) in self.coeffs.iter().enumerate() {
            for (j, a) in p.iter().enumerate() {
                if a.is_zero() || j > n {
                    continue;
                }
                let zj = Series::monomial(R::one(), j, n);
                out = out.add(&powers[k].mul_series(&zj).scale_q(a));
            }
        }
        out
    }

    /// `z^{-ρ} L (z^ρ F)`, i.e. `L` with `θ ↦ θ + ρ`, for `ρ = ε` nilpotent.
    pub fn apply_shifted(&self, f: &NilpotentSeries, rho: &EpsPoly) -> NilpotentSeries {
        let rho = rho.clone();
        self.apply_with(f, move |s| s.theta().add(&s.scale(&rho)))
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, p)| json!({"theta_power": k, "z_poly": p.iter().map(fmt_q).collect::<Vec<_>>()}))
                .collect(),
        )
    }
}

fn theta_monomial(c: &BigRational, k: usize) -> String {
    let t = match k {
        0 => return fmt_q(c),
        1 => "θ".to_string(),
        _ => format!("θ^{k}"),
    };
    if c.is_one() {
        t
    } else {
        format!("{}{t}", fmt_q(c))
    }
}

/// `a θ^k + b θ^{k-1} - ...` with the leading sign returned separately.
fn signed_poly(p: &[BigRational]) -> (bool, String) {
    let nz: Vec<(usize, &BigRational)> = p
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, c)| !c.is_zero())
        .collect();
    let negative = nz.first().is_some_and(|(_, c)| c.is_negative());
    let mut out = String::new();
    for (i, (k, c)) in nz.iter().enumerate() {
        let c = if negative {
            -(*c).clone()
        } else {
            (*c).clone()
        };
        let body = theta_monomial(&c.abs(), *k);
        match (i, c.is_negative()) {
            (0, _) => out.push_str(&body),
            (_, true) => out.push_str(&format!(" - {body}")),
            (_, false) => out.push_str(&format!(" + {body}")),
        }
    }
    (negative, out)
}

impl fmt::Display for ThetaOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for j in 0..=self.z_degree() {
            let p = self.z_coeff(j);
            let nonzero = p.iter().filter(|c| !c.is_zero()).count();
            if nonzero == 0 {
                continue;
            }
            let (negative, body) = signed_poly(&p);
            let zj = match j {
                0 => String::new(),
                1 => "z".into(),
                _ => format!("z^{j}"),
            };
            let term = if zj.is_empty() && (nonzero == 1 || !negative) {
                body
            } else if zj.is_empty() {
                format!("({body})")
            } else if nonzero == 1 && !body.contains('θ') {
                format!("{body}{zj}")
            } else {
                format!("{zj}({body})")
            };
            match (out.is_empty(), negative) {
                (true, true) => out.push_str(&format!("-{term}")),
                (true, false) => out.push_str(&term),
                (false, true) => out.push_str(&format!(" - {term}")),
                (false, false) => out.push_str(&format!(" + {term}")),
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        write!(f, "{out}")
    }
}

/// `c · zʲ · Π (θ + shift)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredTerm {
    pub z_power: usize,
    pub coefficient: BigRational,
    pub shifts: Vec<BigRational>,
}

/// An operator kept as a sum of factored terms, for display.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredOperator {
    pub terms: Vec<FactoredTerm>,
}

impl FactoredOperator {
    pub fn expand(&self) -> ThetaOperator {
        let jmax = self.terms.iter().map(|t| t.z_power).max().unwrap_or(0);
        let mut polys = vec![Vec::<BigRational>::new(); jmax + 1];
        for t in &self.terms {
            let mut p = vec![t.coefficient.clone()];
            for s in &t.shifts {
                p = mul_linear(&p, &BigRational::one(), s);
            }
            let acc = &mut polys[t.z_power];
            if acc.len() < p.len() {
                acc.resize(p.len(), BigRational::zero());
            }
            for (a, b) in acc.iter_mut().zip(p) {
                *a += b;
            }
        }
        ThetaOperator::from_z_polys(&polys)
    }
}

impl fmt::Display for FactoredOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, t) in self.terms.iter().enumerate() {
            let neg = t.coefficient.is_negative();
            let mag = t.coefficient.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            if !mag.is_one() {
                write!(f, "{mag}")?;
            }
            match t.z_power {
                0 => {}
                1 => write!(f, "z")?,
                j => write!(f, "z^{j}")?,
            }
            let mut shifts = t.shifts.clone();
            shifts.sort_by(|a, b| b.cmp(a));
            let mut i = 0;
            while i < shifts.len() {
                let s = &shifts[i];
                let run = shifts[i..].iter().take_while(|x| *x == s).count();
                let base = if s.is_zero() {
                    "θ".to_string()
                } else if s.is_negative() {
                    format!("(θ-{})", -s)
                } else {
                    format!("(θ+{s})")
                };
                if run > 1 {
                    write!(f, "{base}^{run}")?;
                } else {
                    write!(f, "{base}")?;
                }
                i += run;
            }
        }
        Ok(())
    }
}

/// The conjugated box operator `x^{-α} (Π x_{i,j}^{ℓ⁺}) □_ℓ x^{α}` written in
/// `θ_z`, normalized so the `z⁰θᵈ` coefficient is 1, in factored form.
pub fn conjugate_factored(shape: &KernelShape) -> Result<FactoredOperator> {
    let mut lead = BigRational::one();
    let mut pos_shifts = Vec::new();
    for b in &shape.blocks {
        for &l in &b.ells {
            for m in 0..l {
                // ℓθ - m = ℓ(θ - m/ℓ)
                lead *= int(i64::from(l));
                pos_shifts.push(-q(i64::from(m), i64::from(l)));
            }
        }
    }
    if pos_shifts.is_empty() {
        return Err(Error::UnsupportedShape("no positive entries in ℓ".into()));
    }
    let mut neg_coeff = -BigRational::one();
    let mut neg_shifts = Vec::new();
    for b in &shape.blocks {
        let k = i64::from(b.k);
        for m in 0..k {
            // -kθ + α₀ - m = -k(θ + (m - α₀)/k)
            neg_coeff *= int(-k);
            neg_shifts.push((int(m) - &b.alpha0) / int(k));
        }
    }
    let mut terms = vec![FactoredTerm {
        z_power: 0,
        coefficient: BigRational::one(),
        shifts: pos_shifts,
    }];
    if !neg_shifts.is_empty() {
        terms.push(FactoredTerm {
            z_power: 1,
            coefficient: neg_coeff / &lead,
            shifts: neg_shifts,
        });
    }
    Ok(FactoredOperator { terms })
}

/// Picard–Fuchs operator of a rank-one GKZ system, by θ-conjugation.
pub fn theta_conjugate(shape: &KernelShape) -> Result<ThetaOperator> {
    Ok(conjugate_factored(shape)?.expand())
}

/// A rational function `num / den` in `z`, polynomial coefficients constant term first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunction {
    pub num: Vec<BigRational>,
    pub den: Vec<BigRational>,
}

impl RationalFunction {
    pub fn to_series(&self, n: usize) -> Result<RationalSeries> {
        let num = RationalSeries::new(self.num.clone(), n);
        let den = RationalSeries::new(self.den.clone(), n);
        num.div(&den)
    }

    /// Reduces a common power of `z` and normalizes the denominator's lowest term to 1.
    fn simplified(mut self) -> Self {
        trim(&mut self.num);
        trim(&mut self.den);
        while !self.num.is_empty()
            && self.num[0].is_zero()
            && self.den.first().is_some_and(Zero::is_zero)
        {
            self.num.remove(0);
            self.den.remove(0);
        }
        if let Some(c) = self.den.iter().find(|c| !c.is_zero()).cloned() {
            self.num.iter_mut().for_each(|x| *x /= &c);
            self.den.iter_mut().for_each(|x| *x /= &c);
        }
        self
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let poly = |p: &[BigRational]| -> String {
            let t: Vec<String> = p
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(j, c)| match j {
                    0 => format!("{c}"),
                    1 => format!("{c}z"),
                    _ => format!("{c}z^{j}"),
                })
                .collect();
            if t.is_empty() {
                "0".into()
            } else {
                t.join(" + ")
            }
        };
        write!(f, "({})/({})", poly(&self.num), poly(&self.den))
    }
}

/// `g` in `θY = gY` for the Yukawa coupling of a degree-4 operator: `g = -P₃/(2P₄)`.
pub fn yukawa_ode_rhs(op: &ThetaOperator) -> Result<RationalFunction> {
    if op.degree() != 4 {
        return Err(Error::YukawaDegree(op.degree()));
    }
    let num: Vec<BigRational> = op.theta_coeff(3).iter().map(|c| -c).collect();
    let den: Vec<BigRational> = op.theta_coeff(4).iter().map(|c| c * int(2)).collect();
    Ok(RationalFunction { num, den }.simplified())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gkz::KernelBlock;

    #[test]
    fn display_signs() {
        let op = ThetaOperator::from_z_polys(&[
            vec![int(0), int(0), int(0), int(0), int(1)],
            vec![q(-105, 16), int(-88), int(-344), int(-512), int(-256)],
        ]);
        assert_eq!(
            op.to_string(),
            "θ^4 - z(256θ^4 + 512θ^3 + 344θ^2 + 88θ + 105/16)"
        );
        let op = ThetaOperator::from_z_polys(&[vec![int(0), int(2), int(-1)], vec![int(3)]]);
        assert_eq!(op.to_string(), "-(θ^2 - 2θ) + 3z");
        let op = ThetaOperator::from_z_polys(&[vec![int(0), int(-2), int(1)]]);
        assert_eq!(op.to_string(), "θ^2 - 2θ");
    }

    fn quartic() -> KernelShape {
        KernelShape::from_blocks(vec![KernelBlock {
            k: 4,
            alpha0: q(-1, 2),
            ells: vec![1, 1, 1, 1],
        }])
    }

    #[test]
    fn quartic_display() {
        let f = conjugate_factored(&quartic()).unwrap();
        assert_eq!(f.to_string(), "θ^4 - 256z(θ+7/8)(θ+5/8)(θ+3/8)(θ+1/8)");
    }

    #[test]
    fn apply_theta_to_z() {
        let theta = ThetaOperator::from_z_polys(&[vec![int(0), int(1)]]);
        let z = RationalSeries::var(5);
        assert_eq!(theta.apply(&z), z);
    }

    #[test]
    fn yukawa_without_theta3_term() {
        let op = ThetaOperator::from_z_polys(&[
            vec![int(0), int(0), int(0), int(0), int(1)],
            vec![int(0), int(0), int(0), int(0), int(-1)],
        ]);
        let g = yukawa_ode_rhs(&op).unwrap();
        assert!(g.num.is_empty());
        assert_eq!(
            yukawa_ode_rhs(&ThetaOperator::from_z_polys(&[vec![int(0), int(1)]])),
            Err(Error::YukawaDegree(1))
        );
    }
}
