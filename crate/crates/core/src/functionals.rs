//! Left-hand sides of the Bohr-type inequalities for explicit coefficient
//! data, each returned with a truncation bound.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::radii::{FunctionalShape, HypothesisClass, RadiusProblem, TheoremId};
use crate::series::{compensated_sum, SeriesError, TruncatedSeries};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FunctionalError {
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("hypothesis mismatch: {0}")]
    Hypothesis(String),
    #[error("{0} concerns bounded analytic functions and has no harmonic-pair check")]
    Unsupported(TheoremId),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Subordination target class of the analytic part.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum SubordinationClass {
    Convex,
    Univalent,
    Concave { alpha: f64 },
}

/// `f = h + conj(g)` with `h = Σ a_n zⁿ`, `g = Σ b_n zⁿ`.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicPair {
    pub a: TruncatedSeries,
    pub b: TruncatedSeries,
    /// bound on the dilatation `|g′/h′|`
    pub k_bound: f64,
    /// `d(φ(0), ∂φ(𝔻))`
    pub lambda: f64,
    /// `|φ(0)|`
    pub phi0_abs: f64,
    pub class: SubordinationClass,
}

impl HarmonicPair {
    pub fn new(
        a: TruncatedSeries,
        b: TruncatedSeries,
        k_bound: f64,
        lambda: f64,
        phi0_abs: f64,
        class: SubordinationClass,
    ) -> Result<Self, FunctionalError> {
        if b.coeff(0) != Complex64::new(0.0, 0.0) {
            return Err(FunctionalError::Parameter("co-analytic part must have b_0 = 0".into()));
        }
        if !(0.0..1.0).contains(&k_bound) {
            return Err(FunctionalError::Parameter(format!("k = {k_bound} outside [0, 1)")));
        }
        if !(lambda > 0.0 && lambda <= 1.0) {
            return Err(FunctionalError::Parameter(format!("λ = {lambda} outside (0, 1]")));
        }
        if !(phi0_abs >= 0.0 && phi0_abs.is_finite()) {
            return Err(FunctionalError::Parameter(format!("|φ(0)| = {phi0_abs} must be finite and ≥ 0")));
        }
        Ok(Self {
            a,
            b,
            k_bound,
            lambda,
            phi0_abs,
            class,
        })
    }

    /// Analytic function only (`g ≡ 0`).
    pub fn analytic(a: TruncatedSeries, lambda: f64, phi0_abs: f64, class: SubordinationClass) -> Result<Self, FunctionalError> {
        let b = TruncatedSeries::zero(a.order(), a.r_max())?;
        Self::new(a, b, 0.0, lambda, phi0_abs, class)
    }

    fn check_r(&self, r: f64) -> Result<(), FunctionalError> {
        // tail queries validate the radius against each series' r_max
        self.a.tail_at(r)?;
        self.b.tail_at(r)?;
        Ok(())
    }
}

/// A truncated functional: the kept sum and a bound on what was dropped.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FunctionalValue {
    pub value: f64,
    pub tail_error: f64,
}

impl FunctionalValue {
    fn new(value: f64, truncation: f64) -> Self {
        // rounding allowance on the compensated sums
        Self {
            value,
            tail_error: truncation + 8.0 * f64::EPSILON * value.abs(),
        }
    }

    pub fn upper(&self) -> f64 {
        self.value + self.tail_error
    }
}

fn plain(s: &TruncatedSeries, r: f64, from_n: usize) -> f64 {
    s.abs_sum(r, from_n, 0, 1, 1)
}

/// `Σ_{n≥from_n} (|a_n| + |b_n|) rⁿ`.
pub fn majorant_sum(p: &HarmonicPair, r: f64, from_n: usize) -> Result<FunctionalValue, FunctionalError> {
    p.check_r(r)?;
    let value = plain(&p.a, r, from_n) + plain(&p.b, r, from_n);
    Ok(FunctionalValue::new(value, p.a.tail_at(r)? + p.b.tail_at(r)?))
}

/// `Σ(|a_n|+|b_n|)rⁿ + (1/(2−λ) + r/(1−r)) (Σ|a_n|²r²ⁿ + Σ|b_n|²r²ⁿ)`.
///
/// The dropped part of a square sum is at most the square of the dropped
/// part of the plain sum.
pub fn refined_sum(p: &HarmonicPair, r: f64) -> Result<FunctionalValue, FunctionalError> {
    p.check_r(r)?;
    let lambda = p.lambda;
    let weight = 1.0 / (2.0 - lambda) + r / (1.0 - r);
    let (ta, tb) = (p.a.tail_at(r)?, p.b.tail_at(r)?);
    let squares = p.a.abs_sum(r, 1, 0, 2, 2) + p.b.abs_sum(r, 1, 0, 2, 2);
    let value = plain(&p.a, r, 1) + plain(&p.b, r, 1) + weight * squares;
    Ok(FunctionalValue::new(value, ta + tb + weight * (ta * ta + tb * tb)))
}

/// `√(S_r(h)/π) = √(Σ n|a_n|² r²ⁿ)`.
pub fn area_term(p: &HarmonicPair, r: f64) -> Result<FunctionalValue, FunctionalError> {
    p.check_r(r)?;
    let s = p.a.abs_sum(r, 1, 1, 2, 2);
    // Σ_{n>M} n|a_n|²r²ⁿ ≤ (Σ_{n>M} n|a_n|rⁿ)²
    let t = p.a.weighted_tail(1, r)?;
    let value = s.sqrt();
    let upper = (s + t * t).sqrt();
    Ok(FunctionalValue::new(value, upper - value))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RogosinskiVariant {
    /// `|h(z)| + Σ_{n≥1}(|a_n|+|b_n|)rⁿ`
    WithHAbs,
    /// `|h(z)| + |h′(z)|r + Σ_{n≥2}|a_n|rⁿ + Σ_{n≥1}|b_n|rⁿ`
    WithHAndHPrime,
    /// `|h(z)| + Σ_{n≥N}|a_n|rⁿ`
    Tail { from_n: usize },
}

/// Bohr–Rogosinski sums with `|h(z)|` replaced by `|φ(0)| + Σ|a_n|rⁿ` and
/// `|h′(z)|` by `Σ n|a_n|rⁿ⁻¹`.
pub fn rogosinski_sum(p: &HarmonicPair, r: f64, variant: RogosinskiVariant) -> Result<FunctionalValue, FunctionalError> {
    p.check_r(r)?;
    let h_abs = plain(&p.a, r, 1);
    let ta = p.a.tail_at(r)?;
    let tb = p.b.tail_at(r)?;
    let (value, tail) = match variant {
        RogosinskiVariant::WithHAbs => (
            p.phi0_abs + h_abs + plain(&p.a, r, 1) + plain(&p.b, r, 1),
            2.0 * ta + tb,
        ),
        RogosinskiVariant::WithHAndHPrime => {
            let h_prime_r = p.a.abs_sum(r, 1, 1, 1, 1);
            (
                p.phi0_abs + h_abs + h_prime_r + plain(&p.a, r, 2) + plain(&p.b, r, 1),
                2.0 * ta + p.a.weighted_tail(1, r)? + tb,
            )
        }
        RogosinskiVariant::Tail { from_n } => {
            if from_n < 1 {
                return Err(FunctionalError::Parameter("Rogosinski tail starts at N ≥ 1".into()));
            }
            (p.phi0_abs + h_abs + plain(&p.a, r, from_n), 2.0 * ta)
        }
    };
    Ok(FunctionalValue::new(value, tail))
}

/// Same functional with the true `|h|`, `|h′|` maximized over `thetas` on the
/// circle `|z| = r` (kept coefficients only). Never exceeds the surrogate up
/// to truncation.
pub fn rogosinski_pointwise(p: &HarmonicPair, r: f64, variant: RogosinskiVariant, thetas: usize) -> f64 {
    let h_prime = p.a.derivative();
    let worst = (0..thetas.max(1))
        .map(|j| {
            let z = Complex64::from_polar(r, std::f64::consts::TAU * j as f64 / thetas.max(1) as f64);
            let h = p.a.eval(z).norm();
            match variant {
                RogosinskiVariant::WithHAndHPrime => h + h_prime.eval(z).norm() * r,
                _ => h,
            }
        })
        .fold(0.0, f64::max);
    let rest = match variant {
        RogosinskiVariant::WithHAbs => plain(&p.a, r, 1) + plain(&p.b, r, 1),
        RogosinskiVariant::WithHAndHPrime => plain(&p.a, r, 2) + plain(&p.b, r, 1),
        RogosinskiVariant::Tail { from_n } => plain(&p.a, r, from_n.max(1)),
    };
    worst + rest
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Fails,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub verdict: Verdict,
    pub r: f64,
    pub value: f64,
    pub tail_error: f64,
    pub bound: f64,
}

fn class_fits(problem: &RadiusProblem, class: SubordinationClass) -> bool {
    match (problem.theorem.hypothesis(), class) {
        (HypothesisClass::Convex, SubordinationClass::Convex) => true,
        // convex and concave targets are univalent
        (HypothesisClass::Univalent, _) => true,
        (HypothesisClass::Concave, SubordinationClass::Concave { alpha }) => {
            (alpha - problem.params.alpha).abs() <= 1e-12
        }
        _ => false,
    }
}

/// Evaluates the theorem's functional on `pair` at `r` and compares it with
/// `λ` or `|φ(0)| + λ`.
///
/// `holds` needs the upper bound under the bound, `fails` needs the kept sum
/// above it; anything in between is `inconclusive`.
pub fn check_inequality(problem: &RadiusProblem, pair: &HarmonicPair, r: f64) -> Result<CheckOutcome, FunctionalError> {
    let shape = problem.theorem.functional();
    if shape == FunctionalShape::BoundedAnalytic {
        return Err(FunctionalError::Unsupported(problem.theorem));
    }
    if !class_fits(problem, pair.class) {
        return Err(FunctionalError::Hypothesis(format!(
            "{} needs a {:?} target, got {:?}",
            problem.theorem,
            problem.theorem.hypothesis(),
            pair.class
        )));
    }
    if pair.k_bound > problem.k() + 1e-15 {
        return Err(FunctionalError::Hypothesis(format!(
            "{}: pair dilatation bound {} exceeds k = {}",
            problem.theorem,
            pair.k_bound,
            problem.k()
        )));
    }
    let lambda = pair.lambda;
    let (fv, bound) = match shape {
        FunctionalShape::Majorant => (majorant_sum(pair, r, 1)?, lambda),
        FunctionalShape::MajorantWithArea => {
            let m = majorant_sum(pair, r, 1)?;
            let s = area_term(pair, r)?;
            let mu = problem.params.mu;
            (
                FunctionalValue {
                    value: m.value + mu * s.value,
                    tail_error: m.tail_error + mu * s.tail_error,
                },
                lambda,
            )
        }
        FunctionalShape::Refined => (refined_sum(pair, r)?, lambda),
        FunctionalShape::RogosinskiDerivative => (
            rogosinski_sum(pair, r, RogosinskiVariant::WithHAndHPrime)?,
            pair.phi0_abs + lambda,
        ),
        FunctionalShape::RogosinskiAbs => (
            rogosinski_sum(pair, r, RogosinskiVariant::WithHAbs)?,
            pair.phi0_abs + lambda,
        ),
        FunctionalShape::RogosinskiTail => (
            rogosinski_sum(
                pair,
                r,
                RogosinskiVariant::Tail {
                    from_n: problem.params.n as usize,
                },
            )?,
            pair.phi0_abs + lambda,
        ),
        FunctionalShape::BoundedAnalytic => unreachable!(),
    };
    let verdict = if fv.upper() <= bound {
        Verdict::Holds
    } else if fv.value > bound {
        Verdict::Fails
    } else {
        Verdict::Inconclusive
    };
    Ok(CheckOutcome {
        verdict,
        r,
        value: fv.value,
        tail_error: fv.tail_error,
        bound,
    })
}

/// `Σ_{n≥1} |c_n|^exponent r^(stride·n)` plus its tail bound, for the lemma
/// checks on sampled pairs.
pub(crate) fn series_sum_with_tail(s: &TruncatedSeries, r: f64, weight: u32, stride: u32, exponent: u32) -> (f64, f64) {
    let kept = s.abs_sum(r, 1, weight, stride, exponent);
    let tail = if exponent == 1 && stride == 1 {
        s.weighted_tail(weight, r).unwrap_or(f64::INFINITY)
    } else {
        // square sums: Σ_{n>M} n^w |c|² ρ^(2n) ≤ (Σ_{n>M} n^w |c| ρⁿ)², ρ = r^(stride/2)
        let rho = r.powf(stride as f64 / 2.0);
        let t = s.weighted_tail(weight, rho).unwrap_or(f64::INFINITY);
        t * t
    };
    (kept, tail)
}

/// Sum of non-negative terms in a stable order.
pub fn stable_sum(values: &[f64]) -> f64 {
    compensated_sum(values.iter().copied())
}
