//! Truncated power series with rigorous tail bounds.
//!
//! Every functional in this crate is evaluated through coefficient moduli at a
//! real radius `r`, so a series is carried as a finite coefficient list plus an
//! upper bound on the suppressed remainder `Σ_{n>M} |c_n| r^n`. The remainder
//! can be known as a scalar valid up to `r_max`, or through a coefficient
//! envelope `|c_n| ≤ scale · n^power` that yields a bound at any `r`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default truncation order for verification runs.
pub const DEFAULT_ORDER: usize = 200;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SeriesError {
    #[error("parameter {name} = {value} outside {domain}")]
    ParameterDomain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("radius {0} outside [0, 1)")]
    Domain(f64),
    #[error("radius {r} exceeds the series validity radius {r_max}")]
    BeyondValidity { r: f64, r_max: f64 },
    #[error("unknown closed-form identifier `{0}`")]
    UnknownIdentifier(String),
    #[error("inner series has constant term {0}; composition needs a zero constant term")]
    SubordinationViolation(Complex64),
}

/// `|c_n| ≤ scale · n^power` for every suppressed index `n > M`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoefficientEnvelope {
    pub scale: f64,
    pub power: u32,
}

impl CoefficientEnvelope {
    pub fn new(scale: f64, power: u32) -> Self {
        Self { scale, power }
    }

    /// Bound on `Σ_{n>m} n^weight · |c_n| · r^n`.
    pub fn weighted_tail(&self, weight: u32, r: f64, m: usize) -> f64 {
        if self.scale == 0.0 {
            return 0.0;
        }
        self.scale * monomial_tail(self.power + weight, r, m, 1)
    }
}

/// Upper bound for `Σ_{n>m} n^power · r^(stride·n)`.
///
/// Uses the ratio bound: successive terms shrink at least by
/// `q = ((m+2)/(m+1))^power · r^stride`, so the tail is at most
/// `first / (1 − q)`. Returns `+∞` when `q ≥ 1`.
pub fn monomial_tail(power: u32, r: f64, m: usize, stride: u32) -> f64 {
    if r == 0.0 {
        return 0.0;
    }
    let n1 = (m + 1) as f64;
    let rs = r.powi(stride as i32);
    let first = n1.powi(power as i32) * rs.powf(n1);
    let q = ((n1 + 1.0) / n1).powi(power as i32) * rs;
    if q >= 1.0 || !first.is_finite() {
        return f64::INFINITY;
    }
    // relative slack covers rounding in the two products above
    first / (1.0 - q) * (1.0 + 1e-12)
}

/// Compensated (Neumaier) summation of nonnegative or mixed-sign terms.
pub(crate) fn compensated_sum<I: IntoIterator<Item = f64>>(terms: I) -> f64 {
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    for t in terms {
        let s = sum + t;
        if sum.abs() >= t.abs() {
            comp += (sum - s) + t;
        } else {
            comp += (t - s) + sum;
        }
        sum = s;
    }
    sum + comp
}

fn check_radius(r: f64) -> Result<(), SeriesError> {
    if !(0.0..1.0).contains(&r) {
        return Err(SeriesError::Domain(r));
    }
    Ok(())
}

/// A power series kept to order `M` with a bound on the remainder.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries {
    coeffs: Vec<Complex64>,
    tail_bound: f64,
    r_max: f64,
    envelope: Option<CoefficientEnvelope>,
}

impl TruncatedSeries {
    /// Series with an explicit scalar tail bound valid for `r ≤ r_max`.
    pub fn new(coeffs: Vec<Complex64>, r_max: f64, tail_bound: f64) -> Result<Self, SeriesError> {
        if coeffs.is_empty() {
            return Err(SeriesError::Argument("a series needs at least one coefficient".into()));
        }
        check_radius(r_max)?;
        if !(tail_bound >= 0.0) {
            return Err(SeriesError::Argument(format!("tail bound {tail_bound} must be nonnegative")));
        }
        Ok(Self {
            coeffs,
            tail_bound,
            r_max,
            envelope: None,
        })
    }

    /// Series whose suppressed coefficients obey `envelope`; the scalar tail at
    /// `r_max` is derived from it.
    pub fn with_envelope(
        coeffs: Vec<Complex64>,
        r_max: f64,
        envelope: CoefficientEnvelope,
    ) -> Result<Self, SeriesError> {
        let m = coeffs.len().saturating_sub(1);
        let tail = envelope.weighted_tail(0, r_max, m);
        let mut s = Self::new(coeffs, r_max, tail)?;
        s.envelope = Some(envelope);
        Ok(s)
    }

    /// Exact polynomial: zero tail everywhere.
    pub fn polynomial(coeffs: Vec<Complex64>, r_max: f64) -> Result<Self, SeriesError> {
        Self::with_envelope(coeffs, r_max, CoefficientEnvelope::new(0.0, 0))
    }

    pub fn from_real(coeffs: &[f64], r_max: f64, envelope: CoefficientEnvelope) -> Result<Self, SeriesError> {
        Self::with_envelope(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect(), r_max, envelope)
    }

    /// All-zero series of the given order.
    pub fn zero(order: usize, r_max: f64) -> Result<Self, SeriesError> {
        Self::polynomial(vec![Complex64::zero(); order + 1], r_max)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coeffs.get(n).copied().unwrap_or_default()
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn envelope(&self) -> Option<CoefficientEnvelope> {
        self.envelope
    }

    fn check_within(&self, r: f64) -> Result<(), SeriesError> {
        check_radius(r)?;
        if r > self.r_max {
            return Err(SeriesError::BeyondValidity { r, r_max: self.r_max });
        }
        Ok(())
    }

    /// Bound on `Σ_{n>M} n^weight |c_n| r^n`. Without an envelope only the
    /// unweighted scalar bound is known; weighted requests then return `+∞`.
    pub fn weighted_tail(&self, weight: u32, r: f64) -> Result<f64, SeriesError> {
        self.check_within(r)?;
        Ok(match self.envelope {
            Some(env) => env.weighted_tail(weight, r, self.order()),
            None if weight == 0 => self.tail_bound,
            None => f64::INFINITY,
        })
    }

    /// Bound on `Σ_{n>M} |c_n| r^n`.
    pub fn tail_at(&self, r: f64) -> Result<f64, SeriesError> {
        self.weighted_tail(0, r)
    }

    /// `Σ_{n=from}^{M} n^weight |c_n| r^(stride·n)` over the kept coefficients.
    pub fn abs_sum(&self, r: f64, from_n: usize, weight: u32, stride: u32, exponent: u32) -> f64 {
        let rs = r.powi(stride as i32);
        compensated_sum(self.coeffs.iter().enumerate().skip(from_n).map(|(n, c)| {
            let w = (n as f64).powi(weight as i32);
            w * c.norm().powi(exponent as i32) * rs.powi(n as i32)
        }))
    }

    /// Horner evaluation of the kept polynomial at a complex point.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::zero(), |acc, c| acc * z + c)
    }

    /// Term-wise derivative `Σ n c_n z^(n-1)`; the envelope gains one power.
    pub fn derivative(&self) -> TruncatedSeries {
        let coeffs: Vec<Complex64> = if self.coeffs.len() == 1 {
            vec![Complex64::zero()]
        } else {
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(n, c)| c * n as f64)
                .collect()
        };
        match self.envelope {
            // |(n+1) c_{n+1}| ≤ scale (n+1)^(p+1) ≤ scale 2^(p+1) n^(p+1)
            Some(env) => {
                let env = CoefficientEnvelope::new(env.scale * 2f64.powi(env.power as i32 + 1), env.power + 1);
                Self::with_envelope(coeffs, self.r_max, env).expect("validated radius")
            }
            None => Self {
                coeffs,
                tail_bound: f64::INFINITY,
                r_max: self.r_max,
                envelope: None,
            },
        }
    }

    /// Drop coefficients above `m`, folding them into the tail bound and the
    /// envelope.
    pub fn truncate(&self, m: usize) -> TruncatedSeries {
        if m >= self.order() {
            return self.clone();
        }
        let dropped = &self.coeffs[m + 1..];
        let extra = compensated_sum(
            dropped
                .iter()
                .enumerate()
                .map(|(i, c)| c.norm() * self.r_max.powi((m + 1 + i) as i32)),
        );
        let envelope = self.envelope.map(|env| {
            let needed = dropped
                .iter()
                .enumerate()
                .map(|(i, c)| c.norm() / ((m + 1 + i) as f64).powi(env.power as i32))
                .fold(env.scale, f64::max);
            CoefficientEnvelope::new(needed, env.power)
        });
        Self {
            coeffs: self.coeffs[..=m].to_vec(),
            tail_bound: self.tail_bound + extra * (1.0 + 1e-12),
            r_max: self.r_max,
            envelope,
        }
    }
}

/// Majorant of a kept coefficient list at `r`.
fn majorant(coeffs: &[f64], r: f64) -> f64 {
    compensated_sum(coeffs.iter().enumerate().map(|(n, c)| c * r.powi(n as i32)))
}

/// Cauchy product truncated at the smaller order.
///
/// The kept product coefficients are exact. The remainder is bounded by the
/// dropped cross terms of the two kept polynomials plus
/// `|a|·tail_b + |b|·tail_a + tail_a·tail_b`, all at the shared `r_max`.
pub fn multiply(a: &TruncatedSeries, b: &TruncatedSeries) -> Result<TruncatedSeries, SeriesError> {
    if a.r_max != b.r_max {
        return Err(SeriesError::Argument(format!(
            "r_max mismatch: {} vs {}",
            a.r_max, b.r_max
        )));
    }
    let m = a.order().min(b.order());
    let a = a.truncate(m);
    let b = b.truncate(m);
    let r = a.r_max;

    let mut coeffs = vec![Complex64::zero(); m + 1];
    for (i, ai) in a.coeffs.iter().enumerate() {
        for (j, bj) in b.coeffs[..=m - i].iter().enumerate() {
            coeffs[i + j] += ai * bj;
        }
    }

    let abs_a: Vec<f64> = a.coeffs.iter().map(|c| c.norm()).collect();
    let abs_b: Vec<f64> = b.coeffs.iter().map(|c| c.norm()).collect();
    let mut cross = 0.0;
    for (i, ai) in abs_a.iter().enumerate() {
        for (j, bj) in abs_b.iter().enumerate().skip(m + 1 - i) {
            cross += ai * bj * r.powi((i + j) as i32);
        }
    }
    let maj_a = majorant(&abs_a, r);
    let maj_b = majorant(&abs_b, r);
    let tail = cross + maj_a * b.tail_bound + maj_b * a.tail_bound + a.tail_bound * b.tail_bound;
    TruncatedSeries::new(coeffs, r, tail * (1.0 + 1e-12))
}

/// Multiply two coefficient lists and keep orders `0..=m`.
fn convolve_truncated<T>(a: &[T], b: &[T], m: usize) -> Vec<T>
where
    T: Copy + Zero + std::ops::Mul<Output = T> + std::ops::AddAssign,
{
    let mut out = vec![T::zero(); m + 1];
    for (i, &ai) in a.iter().enumerate().take(m + 1) {
        for (j, &bj) in b.iter().enumerate().take(m + 1 - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Horner composition `outer ∘ inner` truncated at the common order.
///
/// Exact for polynomial inputs whose composed degree does not exceed the
/// order. The remainder bound compares the majorant of the composition at
/// `r_max` with its kept part; it is `+∞` when the inner majorant leaves the
/// region where the outer tail is known.
pub fn compose(outer: &TruncatedSeries, inner: &TruncatedSeries) -> Result<TruncatedSeries, SeriesError> {
    let c0 = inner.coeff(0);
    if c0 != Complex64::zero() {
        return Err(SeriesError::SubordinationViolation(c0));
    }
    let m = outer.order().min(inner.order());
    let outer = outer.truncate(m);
    let inner = inner.truncate(m);
    let r = inner.r_max;

    let mut acc = vec![Complex64::zero(); m + 1];
    let mut acc_abs = vec![0.0_f64; m + 1];
    let inner_abs: Vec<f64> = inner.coeffs.iter().map(|c| c.norm()).collect();
    for (o, o_abs) in outer.coeffs.iter().rev().map(|c| (*c, c.norm())) {
        acc = convolve_truncated(&acc, &inner.coeffs, m);
        acc[0] += o;
        acc_abs = convolve_truncated(&acc_abs, &inner_abs, m);
        acc_abs[0] += o_abs;
    }

    let s = majorant(&inner_abs, r) + inner.tail_bound;
    let outer_tail = if outer.tail_bound == 0.0 && outer.envelope.is_none_or(|e| e.scale == 0.0) {
        0.0
    } else if s < 1.0 && s <= outer.r_max {
        outer.tail_at(s).unwrap_or(f64::INFINITY)
    } else {
        f64::INFINITY
    };
    let outer_abs: Vec<f64> = outer.coeffs.iter().map(|c| c.norm()).collect();
    let full = majorant(&outer_abs, s);
    let kept = majorant(&acc_abs, r);
    let slack = f64::EPSILON * (m as f64 + 2.0) * full;
    let tail = ((full - kept).max(0.0) + slack + outer_tail) * (1.0 + 1e-12);
    TruncatedSeries::new(acc, r, tail)
}

/// Coefficients `A_1..A_M` of `f_α(z) = ((1+z)/(1−z))^α − 1) / (2α)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConcaveCoefficients {
    pub alpha: f64,
    pub values: Vec<f64>,
}

impl ConcaveCoefficients {
    /// `A_n` for `1 ≤ n ≤ M`.
    pub fn get(&self, n: usize) -> f64 {
        assert!(n >= 1 && n <= self.values.len(), "A_{n} outside 1..={}", self.values.len());
        self.values[n - 1]
    }

    pub fn order(&self) -> usize {
        self.values.len()
    }
}

fn check_alpha(alpha: f64) -> Result<(), SeriesError> {
    if !(1.0..=2.0).contains(&alpha) {
        return Err(SeriesError::ParameterDomain {
            name: "alpha",
            value: alpha,
            domain: "[1, 2]",
        });
    }
    Ok(())
}

/// `A_n` from the three-term recurrence of `w = ((1+z)/(1−z))^α`:
/// `(1 − z²) w′ = 2α w`, i.e. `(n+1) w_{n+1} = 2α w_n + (n−1) w_{n−1}`,
/// with `w_0 = 1` and `A_n = w_n / (2α)`.
pub fn concave_coefficients(alpha: f64, m: usize) -> Result<ConcaveCoefficients, SeriesError> {
    check_alpha(alpha)?;
    if m < 1 {
        return Err(SeriesError::Argument("need M ≥ 1 coefficients".into()));
    }
    let two_alpha = 2.0 * alpha;
    let mut values = Vec::with_capacity(m);
    let (mut prev, mut cur) = (1.0_f64, two_alpha);
    values.push(cur / two_alpha);
    for n in 1..m {
        let nf = n as f64;
        let next = (two_alpha * cur + (nf - 1.0) * prev) / (nf + 1.0);
        prev = cur;
        cur = next;
        values.push(cur / two_alpha);
    }
    Ok(ConcaveCoefficients { alpha, values })
}

/// Exact-rational run of the same recurrence; `A_n(1) = 1` and `A_n(2) = n`
/// come out as exact integers.
pub fn concave_coefficients_exact(alpha: &BigRational, m: usize) -> Result<Vec<BigRational>, SeriesError> {
    let one = BigRational::one();
    let two = BigRational::from_integer(2.into());
    if *alpha < one || *alpha > two {
        return Err(SeriesError::ParameterDomain {
            name: "alpha",
            value: num_traits::ToPrimitive::to_f64(alpha).unwrap_or(f64::NAN),
            domain: "[1, 2]",
        });
    }
    if m < 1 {
        return Err(SeriesError::Argument("need M ≥ 1 coefficients".into()));
    }
    let two_alpha = &two * alpha;
    let mut values = Vec::with_capacity(m);
    let mut prev = one.clone();
    let mut cur = two_alpha.clone();
    values.push(&cur / &two_alpha);
    for n in 1..m {
        let nr = BigRational::from_integer(n.into());
        let next = (&two_alpha * &cur + (&nr - &one) * &prev) / (&nr + &one);
        prev = std::mem::replace(&mut cur, next);
        values.push(&cur / &two_alpha);
    }
    Ok(values)
}

/// Catalog of closed-form majorant sums used by the radius bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "id", rename_all = "snake_case")]
pub enum ClosedForm {
    /// `Σ_{n≥1} rⁿ = r/(1−r)`
    Geometric,
    /// `Σ_{n≥1} n rⁿ = r/(1−r)²`
    Linear,
    /// `Σ_{n≥2} n rⁿ = r²(2−r)/(1−r)²`
    LinearFrom2,
    /// `Σ_{n≥1} n² rⁿ⁻¹ = (1+r)/(1−r)³`
    SquareShifted,
    /// `Σ_{n≥1} r²ⁿ = r²/(1−r²)`
    EvenGeometric,
    /// `Σ_{n≥1} n r²ⁿ = r²/(1−r²)²`
    EvenLinear,
    /// `Σ_{n≥1} n² r²ⁿ = r²(1+r²)/(1−r²)³`
    EvenSquare,
    /// `Σ_{n≥1} n³ r²ⁿ = r²(r⁴+4r²+1)/(1−r²)⁴`
    EvenCube,
    /// `Σ_{n≥1} A_n rⁿ = f_α(r)`
    Concave { alpha: f64 },
}

impl ClosedForm {
    pub const POWER_FAMILY: [ClosedForm; 8] = [
        ClosedForm::Geometric,
        ClosedForm::Linear,
        ClosedForm::LinearFrom2,
        ClosedForm::SquareShifted,
        ClosedForm::EvenGeometric,
        ClosedForm::EvenLinear,
        ClosedForm::EvenSquare,
        ClosedForm::EvenCube,
    ];

    /// (first index, coefficient power, stride, exponent shift) for the
    /// `Σ n^p r^(s·n − shift)` families.
    fn shape(&self) -> Option<(usize, u32, u32, i32)> {
        Some(match self {
            ClosedForm::Geometric => (1, 0, 1, 0),
            ClosedForm::Linear => (1, 1, 1, 0),
            ClosedForm::LinearFrom2 => (2, 1, 1, 0),
            ClosedForm::SquareShifted => (1, 2, 1, 1),
            ClosedForm::EvenGeometric => (1, 0, 2, 0),
            ClosedForm::EvenLinear => (1, 1, 2, 0),
            ClosedForm::EvenSquare => (1, 2, 2, 0),
            ClosedForm::EvenCube => (1, 3, 2, 0),
            ClosedForm::Concave { .. } => return None,
        })
    }

    pub fn evaluate(&self, r: f64) -> Result<f64, SeriesError> {
        check_radius(r)?;
        let s = r * r;
        Ok(match *self {
            ClosedForm::Geometric => r / (1.0 - r),
            ClosedForm::Linear => r / ((1.0 - r) * (1.0 - r)),
            ClosedForm::LinearFrom2 => s * (2.0 - r) / ((1.0 - r) * (1.0 - r)),
            ClosedForm::SquareShifted => (1.0 + r) / (1.0 - r).powi(3),
            ClosedForm::EvenGeometric => s / (1.0 - s),
            ClosedForm::EvenLinear => s / ((1.0 - s) * (1.0 - s)),
            ClosedForm::EvenSquare => s * (1.0 + s) / (1.0 - s).powi(3),
            ClosedForm::EvenCube => s * (s * s + 4.0 * s + 1.0) / (1.0 - s).powi(4),
            ClosedForm::Concave { alpha } => {
                check_alpha(alpha)?;
                concave_closed(alpha, r)
            }
        })
    }

    /// Partial sum of the defining series through index `m`.
    pub fn partial_sum(&self, r: f64, m: usize) -> Result<f64, SeriesError> {
        check_radius(r)?;
        match (*self, self.shape()) {
            (_, Some((first, p, stride, shift))) => Ok(compensated_sum((first..=m).map(|n| {
                (n as f64).powi(p as i32) * r.powi(stride as i32 * n as i32 - shift)
            }))),
            (ClosedForm::Concave { alpha }, None) => {
                let a = concave_coefficients(alpha, m.max(1))?;
                Ok(compensated_sum(
                    a.values.iter().take(m).enumerate().map(|(i, an)| an * r.powi(i as i32 + 1)),
                ))
            }
            _ => unreachable!("every non-concave entry has a shape"),
        }
    }

    /// Bound on the remainder after index `m`.
    ///
    /// Power families use the ratio bound; `f_α` uses closed form minus the
    /// compensated partial sum with a two-ulp margin.
    pub fn tail_bound(&self, r: f64, m: usize) -> Result<f64, SeriesError> {
        check_radius(r)?;
        match self.shape() {
            Some((_, p, stride, shift)) => {
                let t = monomial_tail(p, r, m, stride);
                if shift == 0 || r == 0.0 {
                    Ok(if r == 0.0 { 0.0 } else { t })
                } else {
                    Ok(t / r.powi(shift))
                }
            }
            None => {
                let closed = self.evaluate(r)?;
                let partial = self.partial_sum(r, m)?;
                Ok((closed - partial).max(0.0) + 2.0 * ulp(closed))
            }
        }
    }

    pub fn identifier(&self) -> &'static str {
        match self {
            ClosedForm::Geometric => "geom",
            ClosedForm::Linear => "n",
            ClosedForm::LinearFrom2 => "n_from2",
            ClosedForm::SquareShifted => "n2_shift",
            ClosedForm::EvenGeometric => "geom2",
            ClosedForm::EvenLinear => "n_even",
            ClosedForm::EvenSquare => "n2_even",
            ClosedForm::EvenCube => "n3_even",
            ClosedForm::Concave { .. } => "f_alpha",
        }
    }
}

impl fmt::Display for ClosedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClosedForm::Concave { alpha } => write!(f, "f_alpha:{alpha}"),
            other => f.write_str(other.identifier()),
        }
    }
}

impl FromStr for ClosedForm {
    type Err = SeriesError;

    /// Accepts the identifiers of [`ClosedForm::identifier`]; `f_alpha` takes
    /// its exponent as `f_alpha:1.5`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some(rest) = s.strip_prefix("f_alpha:") {
            let alpha: f64 = rest
                .parse()
                .map_err(|_| SeriesError::UnknownIdentifier(s.to_string()))?;
            check_alpha(alpha)?;
            return Ok(ClosedForm::Concave { alpha });
        }
        ClosedForm::POWER_FAMILY
            .iter()
            .find(|c| c.identifier() == s)
            .copied()
            .ok_or_else(|| SeriesError::UnknownIdentifier(s.to_string()))
    }
}

/// Value of `closed_form(identifier, r)` for a textual identifier.
pub fn closed_form(identifier: &str, r: f64) -> Result<f64, SeriesError> {
    identifier.parse::<ClosedForm>()?.evaluate(r)
}

/// `f_α(r)` for real `r ∈ [0,1)`.
pub fn concave_closed(alpha: f64, r: f64) -> f64 {
    (((1.0 + r) / (1.0 - r)).powf(alpha) - 1.0) / (2.0 * alpha)
}

fn ulp(x: f64) -> f64 {
    let x = x.abs();
    if x == 0.0 {
        return f64::from_bits(1);
    }
    f64::from_bits(x.to_bits() + 1) - x
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn geometric(order: usize, r_max: f64) -> TruncatedSeries {
        TruncatedSeries::from_real(&vec![1.0; order + 1], r_max, CoefficientEnvelope::new(1.0, 0)).unwrap()
    }

    #[test]
    fn concave_coefficients_known_values() {
        assert_eq!(concave_coefficients(1.0, 3).unwrap().values, vec![1.0, 1.0, 1.0]);
        let a2 = concave_coefficients(2.0, 4).unwrap().values;
        for (got, want) in a2.iter().zip([1.0, 2.0, 3.0, 4.0]) {
            assert_relative_eq!(*got, want, epsilon = 1e-14);
        }
        let alpha = 1.37_f64;
        let a = concave_coefficients(alpha, 5).unwrap();
        let want = [
            1.0,
            alpha,
            (2.0 * alpha * alpha + 1.0) / 3.0,
            (alpha.powi(3) + 2.0 * alpha) / 3.0,
            (2.0 * alpha.powi(4) + 10.0 * alpha * alpha + 3.0) / 15.0,
        ];
        for n in 1..=5 {
            assert_relative_eq!(a.get(n), want[n - 1], epsilon = 1e-13);
        }
    }

    #[test]
    fn concave_coefficients_errors() {
        assert!(matches!(
            concave_coefficients(0.5, 3),
            Err(SeriesError::ParameterDomain { name: "alpha", .. })
        ));
        assert!(matches!(concave_coefficients(2.5, 3), Err(SeriesError::ParameterDomain { .. })));
        assert!(matches!(concave_coefficients(1.5, 0), Err(SeriesError::Argument(_))));
    }

    #[test]
    fn exact_path_gives_integers() {
        let one = BigRational::one();
        let two = BigRational::from_integer(2.into());
        for (n, a) in concave_coefficients_exact(&one, 50).unwrap().iter().enumerate() {
            assert!(a.is_integer() && *a == one, "A_{} = {a}", n + 1);
        }
        for (n, a) in concave_coefficients_exact(&two, 50).unwrap().iter().enumerate() {
            assert_eq!(*a, BigRational::from_integer((n + 1).into()));
        }
    }

    #[test]
    fn closed_form_examples() {
        assert_relative_eq!(closed_form("n3_even", 0.5).unwrap(), 44.0 / 27.0, epsilon = 1e-14);
        assert_relative_eq!(closed_form("n", 0.5).unwrap(), 2.0, epsilon = 1e-15);
        assert_relative_eq!(closed_form("f_alpha:1", 1.0 / 3.0).unwrap(), 0.5, epsilon = 1e-15);
        assert!(matches!(closed_form("n4_even", 0.5), Err(SeriesError::UnknownIdentifier(_))));
        assert!(matches!(closed_form("n", 1.0), Err(SeriesError::Domain(_))));
        assert!(matches!(closed_form("geom", -0.1), Err(SeriesError::Domain(_))));
    }

    #[test]
    fn closed_forms_start_at_zero_except_shifted() {
        for cf in ClosedForm::POWER_FAMILY.iter().chain([&ClosedForm::Concave { alpha: 1.5 }]) {
            let v = cf.evaluate(0.0).unwrap();
            if *cf == ClosedForm::SquareShifted {
                // the n = 1 term is r^0
                assert_eq!(v, 1.0);
            } else {
                assert_eq!(v, 0.0, "{cf}");
            }
        }
    }

    #[test]
    fn identifiers_round_trip() {
        for cf in ClosedForm::POWER_FAMILY {
            assert_eq!(cf.identifier().parse::<ClosedForm>().unwrap(), cf);
        }
        assert_eq!(
            "f_alpha:1.25".parse::<ClosedForm>().unwrap(),
            ClosedForm::Concave { alpha: 1.25 }
        );
        assert!("f_alpha:3".parse::<ClosedForm>().is_err());
    }

    #[test]
    fn monomial_tail_dominates_direct_sum() {
        for &(p, r, m, s) in &[(0u32, 0.3_f64, 5usize, 1u32), (1, 0.5, 10, 1), (3, 0.5, 20, 2), (2, 0.9, 50, 1)] {
            let direct: f64 = (m + 1..5000)
                .map(|n| (n as f64).powi(p as i32) * r.powi((s as usize * n) as i32))
                .sum();
            let bound = monomial_tail(p, r, m, s);
            assert!(bound >= direct, "p={p} r={r}: {bound} < {direct}");
            assert!(bound <= 10.0 * direct + 1e-300);
        }
        assert_eq!(monomial_tail(3, 0.0, 4, 1), 0.0);
        assert!(monomial_tail(5, 0.99, 1, 1).is_infinite());
    }

    #[test]
    fn multiply_geometric_series() {
        let g = geometric(5, 0.5);
        let p = multiply(&g, &g).unwrap();
        let got: Vec<f64> = p.coeffs().iter().map(|c| c.re).collect();
        assert_eq!(got, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        // true tail of 1/(1-z)^2 beyond order 5 at r = 0.5
        let true_tail: f64 = (6..2000).map(|n| (n as f64 + 1.0) * 0.5f64.powi(n)).sum();
        assert!(p.tail_bound() >= true_tail);
    }

    #[test]
    fn multiply_monomials_and_mismatch() {
        let z = TruncatedSeries::polynomial(vec![c(0.0), c(1.0), c(0.0), c(0.0)], 0.5).unwrap();
        let z2 = multiply(&z, &z).unwrap();
        assert_eq!(z2.coeffs(), &[c(0.0), c(0.0), c(1.0), c(0.0)]);
        assert_eq!(z2.tail_bound(), 0.0);
        let other = TruncatedSeries::polynomial(vec![c(1.0)], 0.25).unwrap();
        assert!(matches!(multiply(&z, &other), Err(SeriesError::Argument(_))));
    }

    #[test]
    fn multiply_half_plane_by_one_minus_z() {
        // (1 + z)/(1 - z) · (1 - z) = 1 + z
        let mut coeffs = vec![2.0; 11];
        coeffs[0] = 1.0;
        let h = TruncatedSeries::from_real(&coeffs, 0.3, CoefficientEnvelope::new(2.0, 0)).unwrap();
        let lin = TruncatedSeries::polynomial(vec![c(1.0), c(-1.0)], 0.3).unwrap();
        let p = multiply(&h, &lin).unwrap();
        assert_eq!(p.order(), 1);
        assert_eq!(p.coeffs(), &[c(1.0), c(1.0)]);
    }

    #[test]
    fn compose_examples() {
        let g = geometric(4, 0.5);
        let z = TruncatedSeries::polynomial(vec![c(0.0), c(1.0), c(0.0), c(0.0), c(0.0)], 0.5).unwrap();
        assert_eq!(compose(&g, &z).unwrap().coeffs(), g.coeffs());
        let z2 = TruncatedSeries::polynomial(vec![c(0.0), c(0.0), c(1.0), c(0.0), c(0.0)], 0.5).unwrap();
        let got: Vec<f64> = compose(&g, &z2).unwrap().coeffs().iter().map(|c| c.re).collect();
        assert_eq!(got, vec![1.0, 0.0, 1.0, 0.0, 1.0]);

        let koebe: Vec<f64> = (0..=6).map(|n| n as f64).collect();
        let koebe = TruncatedSeries::from_real(&koebe, 0.5, CoefficientEnvelope::new(1.0, 1)).unwrap();
        let half_z = TruncatedSeries::polynomial(
            (0..=6).map(|n| c(if n == 1 { 0.5 } else { 0.0 })).collect(),
            0.5,
        )
        .unwrap();
        let out = compose(&koebe, &half_z).unwrap();
        for n in 0..=6 {
            assert_relative_eq!(out.coeff(n).re, n as f64 * 0.5f64.powi(n as i32), epsilon = 1e-15);
        }
    }

    #[test]
    fn compose_rejects_nonzero_constant() {
        let g = geometric(3, 0.5);
        let shifted = TruncatedSeries::polynomial(vec![c(0.1), c(1.0)], 0.5).unwrap();
        assert!(matches!(compose(&g, &shifted), Err(SeriesError::SubordinationViolation(_))));
    }

    #[test]
    fn truncate_folds_dropped_terms() {
        let g = geometric(10, 0.5);
        let t = g.truncate(3);
        assert_eq!(t.order(), 3);
        let dropped: f64 = (4..=10).map(|n| 0.5f64.powi(n)).sum();
        assert!(t.tail_bound() >= g.tail_bound() + dropped);
    }

    #[test]
    fn derivative_shifts_envelope() {
        let k: Vec<f64> = (0..=8).map(|n| n as f64).collect();
        let s = TruncatedSeries::from_real(&k, 0.5, CoefficientEnvelope::new(1.0, 1)).unwrap();
        let d = s.derivative();
        let got: Vec<f64> = d.coeffs().iter().map(|c| c.re).collect();
        assert_eq!(got, (1..=8).map(|n| (n * n) as f64).collect::<Vec<_>>());
        assert_eq!(d.envelope().unwrap().power, 2);
    }
}
