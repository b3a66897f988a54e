//! Catalog of Bohr-type radii: defining equations, search intervals and
//! solver dispatch.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::polyroots::{
    self, bisect_monotone, isolate_all_roots, isolate_root, rational, rational_from_f64, sturm_count,
    CertificateKind, CertifiedRoot, RationalPolynomial, RootError,
};
use crate::series::{concave_closed, concave_coefficients, ClosedForm, ConcaveCoefficients, SeriesError};

/// Truncation order for the Rogosinski-type series equation.
pub const SERIES_ORDER: usize = 200;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RadiiError {
    #[error("parameter {name} = {value} outside {domain}")]
    ParameterDomain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },
    #[error("catalog inconsistency: {0}")]
    CatalogInconsistency(String),
    #[error("{0}")]
    Refused(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// `K ≥ 1` together with the exact dilatation bound `k = (K−1)/(K+1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiconformalParam {
    big_k: f64,
    k: BigRational,
}

impl QuasiconformalParam {
    pub fn from_big_k(big_k: f64) -> Result<Self, RadiiError> {
        if !big_k.is_finite() || big_k < 1.0 {
            return Err(RadiiError::ParameterDomain {
                name: "K",
                value: big_k,
                domain: "[1, ∞)",
            });
        }
        let kk = rational_from_f64(big_k)?;
        let one = BigRational::one();
        let k = (&kk - &one) / (&kk + &one);
        Ok(Self { big_k, k })
    }

    /// Inverse map `K = (1+k)/(1−k)` for `k ∈ [0, 1)`.
    pub fn from_k(k: f64) -> Result<Self, RadiiError> {
        if !(0.0..1.0).contains(&k) {
            return Err(RadiiError::ParameterDomain {
                name: "k",
                value: k,
                domain: "[0, 1)",
            });
        }
        let kq = rational_from_f64(k)?;
        let one = BigRational::one();
        let big_k = polyroots::to_f64(&((&one + &kq) / (&one - &kq)));
        Ok(Self { big_k, k: kq })
    }

    pub fn big_k(&self) -> f64 {
        self.big_k
    }

    pub fn k(&self) -> &BigRational {
        &self.k
    }

    pub fn k_f64(&self) -> f64 {
        polyroots::to_f64(&self.k)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TheoremId {
    ThmA,
    ThmB,
    ThmC,
    ThmD,
    ThmE,
    ThmF,
    ThmG,
    ThmH,
    ThmI,
    T31,
    T32,
    T41,
    T41R,
    T42,
    T43,
    T44,
    T51,
    T52,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProblemKind {
    Polynomial,
    Transcendental,
    ClosedForm,
}

/// Direction of the defining function on the search interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Monotonicity {
    Increasing,
    Decreasing,
}

/// Which functional a theorem bounds and against what.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FunctionalShape {
    /// `Σ(|a_n|+|b_n|)rⁿ ≤ λ`
    Majorant,
    /// majorant plus `μ·√(S_r(h)/π)`, against `λ`
    MajorantWithArea,
    /// majorant plus the weighted square sums, against `λ`
    Refined,
    /// `|h| + |h′|r + Σ_{n≥2}|a_n|rⁿ + Σ|b_n|rⁿ ≤ |φ(0)| + λ`
    RogosinskiDerivative,
    /// `|h| + Σ(|a_n|+|b_n|)rⁿ ≤ |φ(0)| + λ`
    RogosinskiAbs,
    /// `|h| + Σ_{n≥N}|a_n|rⁿ ≤ |φ(0)| + λ`
    RogosinskiTail,
    /// bounded analytic functions, outside the harmonic-pair machinery
    BoundedAnalytic,
}

/// Subordination class the theorem's hypothesis is stated for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HypothesisClass {
    Bounded,
    Convex,
    Univalent,
    Concave,
}

impl TheoremId {
    pub const ALL: [TheoremId; 18] = [
        TheoremId::ThmA,
        TheoremId::ThmB,
        TheoremId::ThmC,
        TheoremId::ThmD,
        TheoremId::ThmE,
        TheoremId::ThmF,
        TheoremId::ThmG,
        TheoremId::ThmH,
        TheoremId::ThmI,
        TheoremId::T31,
        TheoremId::T32,
        TheoremId::T41,
        TheoremId::T41R,
        TheoremId::T42,
        TheoremId::T43,
        TheoremId::T44,
        TheoremId::T51,
        TheoremId::T52,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            TheoremId::ThmA => "ThmA",
            TheoremId::ThmB => "ThmB",
            TheoremId::ThmC => "ThmC",
            TheoremId::ThmD => "ThmD",
            TheoremId::ThmE => "ThmE",
            TheoremId::ThmF => "ThmF",
            TheoremId::ThmG => "ThmG",
            TheoremId::ThmH => "ThmH",
            TheoremId::ThmI => "ThmI",
            TheoremId::T31 => "T31",
            TheoremId::T32 => "T32",
            TheoremId::T41 => "T41",
            TheoremId::T41R => "T41R",
            TheoremId::T42 => "T42",
            TheoremId::T43 => "T43",
            TheoremId::T44 => "T44",
            TheoremId::T51 => "T51",
            TheoremId::T52 => "T52",
        }
    }

    pub fn uses_k(&self) -> bool {
        use TheoremId::*;
        matches!(self, ThmD | ThmE | T31 | T32 | T41 | T41R | T42 | T43 | T44 | T51 | T52)
    }

    pub fn uses_alpha(&self) -> bool {
        use TheoremId::*;
        matches!(self, ThmH | ThmI | T51 | T52)
    }

    pub fn uses_mu(&self) -> bool {
        matches!(self, TheoremId::T41 | TheoremId::T41R | TheoremId::T42)
    }

    pub fn uses_n(&self) -> bool {
        matches!(self, TheoremId::ThmA | TheoremId::ThmI)
    }

    pub fn uses_a0(&self) -> bool {
        matches!(self, TheoremId::ThmB)
    }

    pub fn kind(&self) -> ProblemKind {
        use TheoremId::*;
        match self {
            ThmA | ThmF | ThmG | T31 | T32 | T43 | T44 => ProblemKind::Polynomial,
            ThmB | ThmC | ThmD | ThmH | T42 | T51 | T52 => ProblemKind::ClosedForm,
            ThmE | ThmI | T41 | T41R => ProblemKind::Transcendental,
        }
    }

    /// Whether the radius is stated as best possible.
    pub fn sharp(&self) -> bool {
        !matches!(self, TheoremId::ThmE | TheoremId::T31 | TheoremId::T32 | TheoremId::T41R)
    }

    pub fn functional(&self) -> FunctionalShape {
        use TheoremId::*;
        match self {
            ThmA | ThmB => FunctionalShape::BoundedAnalytic,
            ThmC | ThmD | ThmE | ThmH | T51 => FunctionalShape::Majorant,
            T41 | T41R | T42 => FunctionalShape::MajorantWithArea,
            ThmF | ThmG | T31 | T32 => FunctionalShape::Refined,
            T43 | T44 => FunctionalShape::RogosinskiDerivative,
            T52 => FunctionalShape::RogosinskiAbs,
            ThmI => FunctionalShape::RogosinskiTail,
        }
    }

    pub fn hypothesis(&self) -> HypothesisClass {
        use TheoremId::*;
        match self {
            ThmA | ThmB => HypothesisClass::Bounded,
            ThmD | ThmF | T31 | T42 | T43 => HypothesisClass::Convex,
            ThmC | ThmE | ThmG | T32 | T41 | T41R | T44 => HypothesisClass::Univalent,
            ThmH | ThmI | T51 | T52 => HypothesisClass::Concave,
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TheoremId {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        TheoremId::ALL
            .iter()
            .find(|t| t.name().eq_ignore_ascii_case(s.trim()))
            .copied()
            .ok_or_else(|| {
                let known: Vec<&str> = TheoremId::ALL.iter().map(|t| t.name()).collect();
                format!("unknown theorem `{s}` (known: {})", known.join(", "))
            })
    }
}

/// Raw parameter set. Entries a theorem does not use are reset to defaults by
/// [`RadiusProblem::new`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    #[serde(rename = "K")]
    pub big_k: f64,
    pub alpha: f64,
    pub mu: f64,
    #[serde(rename = "N")]
    pub n: u32,
    pub a0: f64,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            big_k: 1.0,
            alpha: 1.0,
            mu: 0.0,
            n: 1,
            a0: 0.0,
        }
    }
}

impl Params {
    pub fn with_k(big_k: f64) -> Self {
        Self { big_k, ..Self::default() }
    }

    pub fn with_k_alpha(big_k: f64, alpha: f64) -> Self {
        Self {
            big_k,
            alpha,
            ..Self::default()
        }
    }

    pub fn with_k_mu(big_k: f64, mu: f64) -> Self {
        Self {
            big_k,
            mu,
            ..Self::default()
        }
    }
}

fn domain_err(name: &'static str, value: f64, domain: &'static str) -> RadiiError {
    RadiiError::ParameterDomain { name, value, domain }
}

/// One theorem's defining equation with validated parameters.
#[derive(Debug, Clone)]
pub struct RadiusProblem {
    pub theorem: TheoremId,
    pub params: Params,
    pub qc: QuasiconformalParam,
    pub search: (BigRational, BigRational),
    pub monotone: Monotonicity,
    pub kind: ProblemKind,
    pub sharp: bool,
    mu_exact: BigRational,
    a0_exact: BigRational,
    concave: Option<ConcaveCoefficients>,
}

impl RadiusProblem {
    pub fn new(theorem: TheoremId, raw: Params) -> Result<Self, RadiiError> {
        let mut params = Params::default();
        if theorem.uses_k() {
            params.big_k = raw.big_k;
        }
        if theorem.uses_alpha() {
            if !(1.0..=2.0).contains(&raw.alpha) {
                return Err(domain_err("alpha", raw.alpha, "[1, 2]"));
            }
            params.alpha = raw.alpha;
        }
        if theorem.uses_mu() {
            if !raw.mu.is_finite() || raw.mu < 0.0 {
                return Err(domain_err("mu", raw.mu, "[0, ∞)"));
            }
            params.mu = raw.mu;
        }
        if theorem.uses_n() {
            if raw.n < 1 {
                return Err(domain_err("N", raw.n as f64, "{1, 2, …}"));
            }
            params.n = raw.n;
        }
        if theorem.uses_a0() {
            if !(0.0..=1.0).contains(&raw.a0.abs()) {
                return Err(domain_err("a0", raw.a0, "|a0| ≤ 1"));
            }
            params.a0 = raw.a0.abs();
        }
        let qc = QuasiconformalParam::from_big_k(params.big_k)?;
        let k = qc.k().clone();
        let one = BigRational::one();
        let zero = BigRational::zero();
        let third = rational(1, 3);
        use TheoremId::*;
        let search = match theorem {
            ThmA | ThmB | ThmC | ThmD | ThmE | ThmF | ThmG | ThmH | T42 | T43 => (zero, one),
            // at K = 1, α = 1 the T51 root is exactly 1/3, so 1/3 cannot be an
            // exclusive upper end there
            ThmI | T51 => (zero, rational(1, 2)),
            T31 => (zero, one / (BigRational::from_integer(3.into()) + &k * BigRational::from_integer(2.into()))),
            T32 => (zero, rational_from_f64(t32_upper(qc.k_f64()))?),
            T41 | T41R | T44 | T52 => (zero, third),
        };
        let monotone = match theorem {
            ThmA | ThmB | ThmD | ThmH | ThmI | T42 | T51 | T52 => Monotonicity::Increasing,
            _ => Monotonicity::Decreasing,
        };
        let concave = if theorem == ThmI {
            Some(concave_coefficients(params.alpha, SERIES_ORDER)?)
        } else {
            None
        };
        Ok(Self {
            theorem,
            params,
            mu_exact: rational_from_f64(params.mu)?,
            a0_exact: rational_from_f64(params.a0)?,
            qc,
            search,
            monotone,
            kind: theorem.kind(),
            sharp: theorem.sharp(),
            concave,
        })
    }

    pub fn k(&self) -> f64 {
        self.qc.k_f64()
    }

    pub fn search_f64(&self) -> (f64, f64) {
        (polyroots::to_f64(&self.search.0), polyroots::to_f64(&self.search.1))
    }

    /// Exact defining polynomial, when the equation is polynomial in `r`.
    pub fn polynomial(&self) -> Option<RationalPolynomial> {
        let k = self.qc.k();
        let x = RationalPolynomial::x();
        let c = |v: BigRational| RationalPolynomial::constant(v);
        let ci = |v: i64| RationalPolynomial::from_integers(&[v]);
        let one_minus_r = RationalPolynomial::from_integers(&[1, -1]);
        let one_plus_r = RationalPolynomial::from_integers(&[1, 1]);
        let one_plus_k = BigRational::one() + k;
        use TheoremId::*;
        Some(match self.theorem {
            ThmA => {
                let rn = x.pow(self.params.n);
                &(&ci(2) * &(&one_plus_r * &rn)) - &one_minus_r.pow(2)
            }
            ThmB => RationalPolynomial::new(vec![
                -BigRational::one(),
                BigRational::from_integer(2.into()) + &self.a0_exact,
            ]),
            ThmC => &one_minus_r.pow(2) - &(&ci(4) * &x),
            ThmD => RationalPolynomial::new(vec![-BigRational::one(), three_plus_2k(k)]),
            ThmF => g1_at_one(&BigRational::zero()),
            ThmG => thm_g_polynomial(),
            T31 => g1_at_one(k),
            T32 => t32_polynomial(T32Variant::ProofG2, k),
            T42 => RationalPolynomial::new(vec![
                -BigRational::one(),
                BigRational::from_integer(2.into()) * (&self.mu_exact + &one_plus_k),
                three_plus_2k(k),
            ]),
            T43 => {
                let inner = &(&x * &x) + &(&c(one_plus_k) * &x);
                let mid = &(&ci(2) * &inner) * &one_minus_r;
                &(&one_minus_r.pow(2) - &mid) - &(&ci(2) * &x)
            }
            T44 => {
                let two_minus_r = RationalPolynomial::from_integers(&[2, -1]);
                let inner = &(&(&x * &x) * &two_minus_r) + &(&c(one_plus_k) * &x);
                let mid = &(&ci(4) * &inner) * &one_minus_r;
                let last = &(&ci(4) * &x) * &one_plus_r;
                &(&one_minus_r.pow(3) - &mid) - &last
            }
            ThmE | ThmH | ThmI | T41 | T41R | T51 | T52 => return None,
        })
    }

    /// Value of the defining function at `r`.
    pub fn evaluate(&self, r: f64) -> f64 {
        let k = self.k();
        let mu = self.params.mu;
        let alpha = self.params.alpha;
        let ratio_pow = |r: f64| ((1.0 + r) / (1.0 - r)).powf(alpha);
        use TheoremId::*;
        match self.theorem {
            ThmE => (1.0 - r) * (1.0 - r) - 4.0 * r * (1.0 + k * (1.0 + r).sqrt()),
            ThmH => ratio_pow(r) - 2.0,
            ThmI => self.rogosinski_series_equation(r),
            T41 => {
                let s = r * r;
                (1.0 - s).powi(2)
                    - 4.0 * (1.0 + k) * r * (1.0 + r).powi(2)
                    - 4.0 * mu * r * (s * s + 4.0 * s + 1.0).sqrt()
            }
            T41R => {
                let s = r * r;
                (1.0 - s).powi(2)
                    - 4.0 * (1.0 + k * (1.0 + r).sqrt()) * r * (1.0 + r).powi(2)
                    - 4.0 * mu * r * (s * s + 4.0 * s + 1.0).sqrt()
            }
            T51 => (1.0 + k) * (ratio_pow(r) - 1.0) - 1.0,
            T52 => (2.0 + k) * (ratio_pow(r) - 1.0) - 1.0,
            _ => self
                .polynomial()
                .expect("remaining theorems are polynomial")
                .eval_f64(r),
        }
    }

    /// `Σ_{n=N}^{M} A_n xⁿ + tail + f_α(x) − 1/(2α)`, the tail being the
    /// closed form minus the kept partial sum.
    fn rogosinski_series_equation(&self, x: f64) -> f64 {
        let a = self.concave.as_ref().expect("built with the problem");
        let alpha = self.params.alpha;
        let n0 = self.params.n as usize;
        let closed = concave_closed(alpha, x);
        let kept: Vec<f64> = (1..=a.order()).map(|n| a.get(n) * x.powi(n as i32)).collect();
        let partial_all = crate::series::compensated_sum(kept.iter().copied());
        let tail = (closed - partial_all).max(0.0);
        let from_n = crate::series::compensated_sum(kept.iter().skip(n0 - 1).copied());
        from_n + tail + closed - 1.0 / (2.0 * alpha)
    }

    /// Bound on the truncation error of the series equation at `x`.
    pub fn series_tail_bound(&self, x: f64) -> Option<f64> {
        self.concave.as_ref().map(|_| {
            ClosedForm::Concave {
                alpha: self.params.alpha,
            }
            .tail_bound(x, SERIES_ORDER)
            .unwrap_or(f64::INFINITY)
        })
    }

    /// Closed-form radius, when one exists.
    pub fn closed_form_value(&self) -> Option<f64> {
        let big_k = self.params.big_k;
        let alpha = self.params.alpha;
        let from_t = |t: f64| (t - 1.0) / (t + 1.0);
        use TheoremId::*;
        Some(match self.theorem {
            ThmB => 1.0 / (2.0 + self.params.a0),
            ThmC => 3.0 - 2.0 * 2f64.sqrt(),
            ThmD => (big_k + 1.0) / (5.0 * big_k + 1.0),
            ThmH => from_t(2f64.powf(1.0 / alpha)),
            T42 => {
                let k = self.k();
                let a = 3.0 + 2.0 * k;
                let half_b = self.params.mu + 1.0 + k;
                1.0 / (half_b + (half_b * half_b + a).sqrt())
            }
            T51 => from_t(((3.0 * big_k + 1.0) / (2.0 * big_k)).powf(1.0 / alpha)),
            T52 => from_t(((4.0 * big_k + 2.0) / (3.0 * big_k + 1.0)).powf(1.0 / alpha)),
            _ => return None,
        })
    }
}

fn three_plus_2k(k: &BigRational) -> BigRational {
    BigRational::from_integer(3.into()) + k * BigRational::from_integer(2.into())
}

/// `c0 + c1 k + c2 k²` with integer `c_i`.
fn kpoly(k: &BigRational, c: [i64; 3]) -> BigRational {
    let [c0, c1, c2] = c.map(|v| BigRational::from_integer(v.into()));
    c0 + c1 * k + c2 * k * k
}

fn rpoly(k: &BigRational, coeffs: &[[i64; 3]]) -> RationalPolynomial {
    RationalPolynomial::new(coeffs.iter().map(|c| kpoly(k, *c)).collect())
}

/// `G₁(1, r) = (3+2k)r³ − (5+4k²)r² − (3+2k)r + 1`.
pub fn g1_at_one(k: &BigRational) -> RationalPolynomial {
    rpoly(k, &[[1, 0, 0], [-3, -2, 0], [-5, 0, -4], [3, 2, 0]])
}

/// `G₁(λ, r)` in floating point.
pub fn g1(lambda: f64, r: f64, k: f64) -> f64 {
    let (a, b, c) = g1_coefficients(r, k);
    a * lambda * lambda - b * lambda + c
}

/// `(a, b, c)` with `G₁(λ, r) = aλ² − bλ + c`.
fn g1_coefficients(r: f64, k: f64) -> (f64, f64, f64) {
    let (r2, r3) = (r * r, r * r * r);
    let a = 4.0 * (k * k + 1.0) * r3;
    let b = (7.0 + 2.0 * k + 4.0 * k * k) * r3 + (3.0 + 4.0 * k * k) * r2 - (3.0 + 2.0 * k) * r + 1.0;
    let c = (6.0 + 4.0 * k) * r3 - 2.0 * r2 - (6.0 + 4.0 * k) * r + 2.0;
    (a, b, c)
}

/// `(1−6r+r²)(1−r)²(1+r)³ − 16r²(1+r²)`, expanded exactly.
pub fn thm_g_polynomial() -> RationalPolynomial {
    let p = |c: &[i64]| RationalPolynomial::from_integers(c);
    let lhs = &(&p(&[1, -6, 1]) * &p(&[1, -1]).pow(2)) * &p(&[1, 1]).pow(3);
    &lhs - &p(&[0, 0, 16, 0, 16])
}

/// The competing degree-4 and degree-7 equations for the univalent refined
/// radius.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum T32Variant {
    /// quartic printed in the theorem statement
    Statement,
    /// degree-7 expansion printed at the end of the proof
    ProofExpanded,
    /// `G₂(1, r) = 16(k²+1)(r²+1)r³ − R₁(r) + R₂(r)` assembled from the
    /// printed `R₁` and `R₂`
    ProofG2,
}

impl T32Variant {
    pub const ALL: [T32Variant; 3] = [T32Variant::Statement, T32Variant::ProofExpanded, T32Variant::ProofG2];
}

pub fn t32_r1(k: &BigRational) -> RationalPolynomial {
    rpoly(
        k,
        &[
            [1, 0, 0],
            [-5, -4, 0],
            [9, -4, 16],
            [27, 8, 16],
            [27, 8, 16],
            [9, -4, 16],
            [-5, -4, 0],
            [1, 0, 0],
        ],
    )
}

pub fn t32_r2(k: &BigRational) -> RationalPolynomial {
    rpoly(
        k,
        &[
            [2, 0, 0],
            [-10, -8, 0],
            [-14, -8, 0],
            [22, 16, 0],
            [22, 16, 0],
            [-14, -8, 0],
            [-10, -8, 0],
            [2, 0, 0],
        ],
    )
}

pub fn t32_polynomial(variant: T32Variant, k: &BigRational) -> RationalPolynomial {
    match variant {
        T32Variant::Statement => rpoly(k, &[[1, 0, 0], [-5, -4, 0], [-21, -4, -16], [1, 0, 0], [-16, 0, -16]]),
        T32Variant::ProofExpanded => rpoly(
            k,
            &[
                [1, 0, 0],
                [-5, -4, 0],
                [9, -4, 16],
                [11, 8, 0],
                [27, 8, 16],
                [-7, -4, 0],
                [-5, -4, 0],
                [1, 0, 0],
            ],
        ),
        T32Variant::ProofG2 => {
            let lead = rpoly(k, &[[0, 0, 0], [0, 0, 0], [0, 0, 0], [16, 0, 16], [0, 0, 0], [16, 0, 16]]);
            &(&lead - &t32_r1(k)) + &t32_r2(k)
        }
    }
}

/// `3 + 2k − 2√(2+3k+k²)`, the upper end of the univalent refined band.
pub fn t32_upper(k: f64) -> f64 {
    // same value as 1 / (3 + 2k + 2√(2+3k+k²)), without the cancellation
    1.0 / (3.0 + 2.0 * k + 2.0 * (2.0 + 3.0 * k + k * k).sqrt())
}

/// `r₁(k) = (1+k−√(4k−3k²)) / (4k²−2k+1)`, where `∂G₁/∂λ(1,r)` changes sign.
pub fn lambda_derivative_root(k: f64) -> f64 {
    (1.0 + k - (4.0 * k - 3.0 * k * k).sqrt()) / (4.0 * k * k - 2.0 * k + 1.0)
}

/// Evaluable defining function plus its exact polynomial when available.
pub struct DefiningFunction<'a> {
    problem: &'a RadiusProblem,
    pub polynomial: Option<RationalPolynomial>,
}

impl DefiningFunction<'_> {
    pub fn eval(&self, r: f64) -> f64 {
        self.problem.evaluate(r)
    }
}

pub fn defining_function(problem: &RadiusProblem) -> DefiningFunction<'_> {
    DefiningFunction {
        problem,
        polynomial: problem.polynomial(),
    }
}

fn uniqueness_to_catalog(problem: &RadiusProblem, e: RootError) -> RadiiError {
    match e {
        RootError::UniquenessViolation { count, lo, hi } => RadiiError::CatalogInconsistency(format!(
            "{} has {count} roots on ({lo}, {hi}), expected exactly one",
            problem.theorem
        )),
        RootError::Bracketing { f_lo, f_hi } => RadiiError::CatalogInconsistency(format!(
            "{}: defining function has no sign change on the search interval (F(lo) = {f_lo}, F(hi) = {f_hi})",
            problem.theorem
        )),
        other => RadiiError::Root(other),
    }
}

fn check_tol(tol: f64) -> Result<(), RadiiError> {
    if !(tol > 0.0 && tol < 0.1) {
        return Err(domain_err("tol", tol, "(0, 0.1)"));
    }
    Ok(())
}

/// Solves by the defining equation alone: Sturm isolation for polynomials,
/// monotone bisection otherwise. Closed forms are ignored.
pub fn solve_radius_numeric(problem: &RadiusProblem, tol: f64) -> Result<CertifiedRoot, RadiiError> {
    check_tol(tol)?;
    let root = match problem.polynomial() {
        Some(p) => isolate_root(&p, &problem.search.0, &problem.search.1, tol),
        None => {
            let (lo, hi) = problem.search_f64();
            bisect_monotone(|r| problem.evaluate(r), lo, hi, tol)
        }
    };
    root.map_err(|e| uniqueness_to_catalog(problem, e))
}

/// Certified radius for `problem`.
///
/// Closed forms are evaluated directly and certified by a sign change of the
/// defining function across an interval of width at most `tol` around the
/// value (exactly, when the equation is polynomial).
pub fn solve_radius(problem: &RadiusProblem, tol: f64) -> Result<CertifiedRoot, RadiiError> {
    check_tol(tol)?;
    let root = match problem.closed_form_value() {
        Some(value) => certify_closed_form(problem, value, tol)?,
        None => solve_radius_numeric(problem, tol)?,
    };
    let (lo, hi) = problem.search_f64();
    if !(root.estimate > lo && root.estimate < hi) {
        return Err(RadiiError::CatalogInconsistency(format!(
            "{} radius {} escapes its interval ({lo}, {hi})",
            problem.theorem, root.estimate
        )));
    }
    Ok(root)
}

fn certify_closed_form(problem: &RadiusProblem, value: f64, tol: f64) -> Result<CertifiedRoot, RadiiError> {
    let poly = problem.polynomial();
    let mut half = tol / 2.0;
    for _ in 0..40 {
        let (a, b) = (value - half, value + half);
        let changes = match &poly {
            Some(p) => {
                let fa = p.eval(&rational_from_f64(a)?);
                let fb = p.eval(&rational_from_f64(b)?);
                !fa.is_zero() && !fb.is_zero() && fa.is_positive() != fb.is_positive()
            }
            None => problem.evaluate(a) * problem.evaluate(b) < 0.0,
        };
        if changes {
            return Ok(CertifiedRoot {
                lo: rational_from_f64(a)?,
                hi: rational_from_f64(b)?,
                estimate: value,
                certificate: CertificateKind::ClosedForm,
                residual: problem.evaluate(value).abs(),
                tol,
                polynomial: poly,
            });
        }
        half *= 2.0;
        if half > 1e-3 {
            break;
        }
    }
    Err(RadiiError::CatalogInconsistency(format!(
        "{}: closed form {value} is not bracketed by a sign change of its defining equation",
        problem.theorem
    )))
}

/// Point on the `λ₁(r)` branch of the convex refined inequality.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LambdaBranch {
    pub r: f64,
    pub lambda1: f64,
}

/// Solves `G₁(λ, r) = 0` for the root `λ₁(r) ∈ (0, 1]` on the band
/// `r₀(K) ≤ r < (K+1)/(5K+1)`.
pub fn lambda_branch(r: f64, big_k: f64, tol: f64) -> Result<LambdaBranch, RadiiError> {
    let problem = RadiusProblem::new(TheoremId::T31, Params::with_k(big_k))?;
    let r0 = solve_radius(&problem, tol)?.estimate;
    let hi = (big_k + 1.0) / (5.0 * big_k + 1.0);
    if !(r >= r0 - tol && r < hi) {
        return Err(RadiiError::Domain(format!("r = {r} outside the band [{r0}, {hi})")));
    }
    let k = problem.k();
    let (a, b, c) = g1_coefficients(r, k);
    let g_at_one = a - b + c;
    let slack = 64.0 * f64::EPSILON * (a.abs() + b.abs() + c.abs());
    if c < -slack || g_at_one > slack.max(tol * b.abs()) {
        return Err(RadiiError::CatalogInconsistency(format!(
            "sign pattern violated at r = {r}: G1(0,r) = {c}, G1(1,r) = {g_at_one}"
        )));
    }
    // smaller root of the convex quadratic, in the cancellation-free form
    let disc = (b * b - 4.0 * a * c).max(0.0);
    let lambda1 = if b > 0.0 {
        2.0 * c / (b + disc.sqrt())
    } else {
        (b - disc.sqrt()) / (2.0 * a)
    };
    if !(lambda1 > 0.0 && lambda1 <= 1.0 + 1e-9) {
        return Err(RadiiError::CatalogInconsistency(format!(
            "no root of G1(·, {r}) in (0, 1]: got {lambda1}"
        )));
    }
    Ok(LambdaBranch {
        r,
        lambda1: lambda1.min(1.0),
    })
}

/// Result of solving one of the competing univalent refined equations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct T32VariantReport {
    pub variant: T32Variant,
    pub poly: Vec<String>,
    pub sturm_count: usize,
    pub root: Option<f64>,
    pub root_interval: Option<[String; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct T32Comparison {
    pub a: T32Variant,
    pub b: T32Variant,
    pub identical: bool,
    pub gap: Option<f64>,
    pub gap_within_tol: Option<bool>,
    pub a_divides_b: bool,
    pub b_divides_a: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct T32Report {
    #[serde(rename = "K")]
    pub big_k: f64,
    pub k: String,
    pub interval: [String; 2],
    pub tol: f64,
    pub variants: Vec<T32VariantReport>,
    pub comparisons: Vec<T32Comparison>,
}

/// Solves every variant of the univalent refined equation on the same
/// interval and compares them pairwise, without choosing a winner.
pub fn cross_check_t32(big_k: f64, tol: f64) -> Result<T32Report, RadiiError> {
    check_tol(tol)?;
    let qc = QuasiconformalParam::from_big_k(big_k)?;
    let lo = BigRational::zero();
    let hi = rational_from_f64(t32_upper(qc.k_f64()))?;
    let polys: Vec<(T32Variant, RationalPolynomial)> = T32Variant::ALL
        .iter()
        .map(|&v| (v, t32_polynomial(v, qc.k())))
        .collect();
    let mut variants = Vec::new();
    for (v, p) in &polys {
        let count = sturm_count(p, &lo, &hi)?;
        let root = if count == 1 {
            Some(isolate_root(p, &lo, &hi, tol)?)
        } else {
            None
        };
        variants.push(T32VariantReport {
            variant: *v,
            poly: p.to_strings(),
            sturm_count: count,
            root: root.as_ref().map(|r| r.estimate),
            root_interval: root.map(|r| [r.lo.to_string(), r.hi.to_string()]),
        });
    }
    let mut comparisons = Vec::new();
    for i in 0..polys.len() {
        for j in i + 1..polys.len() {
            let gap = match (variants[i].root, variants[j].root) {
                (Some(x), Some(y)) => Some((x - y).abs()),
                _ => None,
            };
            comparisons.push(T32Comparison {
                a: polys[i].0,
                b: polys[j].0,
                identical: polys[i].1 == polys[j].1,
                gap,
                gap_within_tol: gap.map(|g| g <= tol),
                a_divides_b: polys[i].1.divides(&polys[j].1),
                b_divides_a: polys[j].1.divides(&polys[i].1),
            });
        }
    }
    Ok(T32Report {
        big_k,
        k: qc.k().to_string(),
        interval: [lo.to_string(), hi.to_string()],
        tol,
        variants,
        comparisons,
    })
}

/// Root of the squared T41 equation `P² − 16μ²r²(r⁴+4r²+1) = 0` with
/// `P = (1−r²)² − 4(1+k)r(1+r)²`, restricted to the branch `P ≥ 0`.
pub fn t41_polynomial_cross_check(problem: &RadiusProblem, tol: f64) -> Result<Option<CertifiedRoot>, RadiiError> {
    if problem.theorem != TheoremId::T41 {
        return Ok(None);
    }
    let k = problem.qc.k();
    let p = |c: &[i64]| RationalPolynomial::from_integers(c);
    let one_plus_k = RationalPolynomial::constant(BigRational::one() + k);
    let base = &p(&[1, 0, -1]).pow(2) - &(&(&p(&[0, 4]) * &one_plus_k) * &p(&[1, 1]).pow(2));
    let mu2 = &problem.mu_exact * &problem.mu_exact;
    let radical = &(&p(&[0, 0, 16]) * &RationalPolynomial::constant(mu2)) * &p(&[1, 0, 4, 0, 1]);
    let squared = &base.pow(2) - &radical;
    let roots = isolate_all_roots(&squared, &problem.search.0, &problem.search.1, tol)?;
    let mut on_branch = roots.into_iter().filter(|r| base.eval_f64(r.estimate) >= 0.0);
    let first = on_branch.next();
    if on_branch.next().is_some() {
        return Err(RadiiError::CatalogInconsistency(
            "squared T41 polynomial has several roots on the admissible branch".into(),
        ));
    }
    Ok(first)
}

/// The rejected product form `(2^{1/α}−1)(2^{1/α}+1)`; always refused.
pub fn thm_h_verbatim(alpha: f64) -> Result<f64, RadiiError> {
    let t = 2f64.powf(1.0 / alpha);
    let product = (t - 1.0) * (t + 1.0);
    Err(RadiiError::Refused(format!(
        "the printed ThmH radius (2^(1/α)−1)(2^(1/α)+1) equals {product} at α = {alpha}, which is not a radius in (0,1); \
         the quotient (2^(1/α)−1)/(2^(1/α)+1) = {} is used instead",
        (t - 1.0) / (t + 1.0)
    )))
}

/// One claim backing a figure, certified exactly where possible.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FigureCertificate {
    pub id: String,
    pub claim: String,
    pub method: String,
    pub passed: bool,
    pub sturm_count: Option<usize>,
    pub grid_points: usize,
    pub grid_failures: Vec<f64>,
    /// smallest margin seen on the grid (positive means the claim held)
    pub min_margin: Option<f64>,
    pub notes: Vec<String>,
}

/// `k = j/100` for `j = 1..=99`, exactly.
pub fn figure_grid() -> Vec<BigRational> {
    (1..=99).map(|j| rational(j, 100)).collect()
}

fn positive_on_unit(p: &RationalPolynomial) -> Result<(bool, usize), RadiiError> {
    let (lo, hi) = (BigRational::zero(), BigRational::one());
    let count = sturm_count(p, &lo, &hi)?;
    Ok((count == 0 && p.eval(&lo).is_positive() && p.eval(&hi).is_positive(), count))
}

/// `r₁(k) > 1/(3+2k)` on `[0, 1)`.
///
/// After clearing the positive denominators the claim reads
/// `L(k) > √(4k−3k²)` with `L = (2+7k−2k²)/(3+2k)`; with `L > 0` this is
/// `(2+7k−2k²)² − (4k−3k²)(3+2k)² > 0`, checked by Sturm and on the grid.
pub fn figure1_certificate() -> Result<FigureCertificate, RadiiError> {
    let p = |c: &[i64]| RationalPolynomial::from_integers(c);
    let numer = p(&[2, 7, -2]);
    let squared = &numer.pow(2) - &(&p(&[0, 4, -3]) * &p(&[3, 2]).pow(2));
    let (numer_ok, _) = positive_on_unit(&numer)?;
    let (sq_ok, count) = positive_on_unit(&squared)?;
    let mut failures = Vec::new();
    let mut min_margin = f64::INFINITY;
    for kq in figure_grid() {
        let k = polyroots::to_f64(&kq);
        let margin = lambda_derivative_root(k) - 1.0 / (3.0 + 2.0 * k);
        min_margin = min_margin.min(margin);
        let exact = squared.eval(&kq).is_positive() && numer.eval(&kq).is_positive();
        if !(margin > 0.0 && exact) {
            failures.push(k);
        }
    }
    Ok(FigureCertificate {
        id: "F1".into(),
        claim: "r1(k) = (1+k-sqrt(4k-3k^2))/(4k^2-2k+1) > 1/(3+2k) for k in [0,1)".into(),
        method: "squared polynomial positive on [0,1] by Sturm; exact and floating checks at k = j/100".into(),
        passed: numer_ok && sq_ok && failures.is_empty(),
        sturm_count: Some(count),
        grid_points: 99,
        grid_failures: failures,
        min_margin: Some(min_margin),
        notes: vec![format!("squared form: {squared}")],
    })
}

pub fn figure2_r3() -> RationalPolynomial {
    RationalPolynomial::from_integers(&[97732, 432283, 843432, 951408, 672704, 296704, 74752, 8192])
}

pub fn figure2_r4() -> RationalPolynomial {
    RationalPolynomial::from_integers(&[69107, 253840, 408176, 372928, 204032, 62464, 8192])
}

/// The printed quintic that `R₃ − R₄√(2+3k+k²) ≤ 0` is reduced to.
pub fn figure2_printed_quintic() -> RationalPolynomial {
    RationalPolynomial::from_integers(&[11074, 51555, 84720, 72272, 33600, 6656])
}

/// `R₃(k) − R₄(k)√(2+3k+k²) ≤ 0` on `[0, 1)`.
///
/// `R₃, R₄ > 0` there, so the claim is `D = R₄²(2+3k+k²) − R₃² ≥ 0`.
pub fn figure2_certificate() -> Result<FigureCertificate, RadiiError> {
    let r3 = figure2_r3();
    let r4 = figure2_r4();
    let s = RationalPolynomial::from_integers(&[2, 3, 1]);
    let d = &(&r4.pow(2) * &s) - &r3.pow(2);
    let (r3_ok, _) = positive_on_unit(&r3)?;
    let (r4_ok, _) = positive_on_unit(&r4)?;
    let (d_ok, count) = positive_on_unit(&d)?;
    let printed = figure2_printed_quintic();
    let mut failures = Vec::new();
    let mut min_margin = f64::INFINITY;
    for kq in figure_grid() {
        let k = polyroots::to_f64(&kq);
        let value = r3.eval_f64(k) - r4.eval_f64(k) * (2.0 + 3.0 * k + k * k).sqrt();
        min_margin = min_margin.min(-value);
        if !(value <= 0.0 && d.eval(&kq).is_positive()) {
            failures.push(k);
        }
    }
    let mut notes = vec![format!(
        "R4^2 (2+3k+k^2) - R3^2 {} the printed quintic 6656k^5+33600k^4+72272k^3+84720k^2+51555k+11074",
        if d == printed { "equals" } else { "differs from" }
    )];
    // the left side evaluated at r = r1(k) before simplifying
    let mut worst = 0.0_f64;
    for kq in figure_grid() {
        let k = polyroots::to_f64(&kq);
        let r1 = t32_upper(k);
        let lhs = (4.0 * k + 6.0) * r1.powi(6) + (16.0 * k * k + 4.0 * k + 23.0) * r1.powi(5)
            + (16.0 * k * k - 8.0 * k + 5.0) * r1.powi(3)
            + (4.0 * k + 5.0) * r1
            - 1.0;
        let rhs = 2.0 * (r3.eval_f64(k) - r4.eval_f64(k) * (2.0 + 3.0 * k + k * k).sqrt());
        worst = worst.max((lhs - rhs).abs());
    }
    notes.push(format!("max |lhs(r1(k)) - 2(R3 - R4 sqrt(2+3k+k^2))| on the grid: {worst:.3e}"));
    Ok(FigureCertificate {
        id: "F2".into(),
        claim: "R3(k) - R4(k) sqrt(2+3k+k^2) <= 0 for k in [0,1)".into(),
        method: "R3, R4 > 0 and R4^2(2+3k+k^2) - R3^2 > 0 on [0,1] by Sturm; exact and floating checks at k = j/100"
            .into(),
        passed: r3_ok && r4_ok && d_ok && failures.is_empty(),
        sturm_count: Some(count),
        grid_points: 99,
        grid_failures: failures,
        min_margin: Some(min_margin),
        notes,
    })
}

fn no_root_certificate(id: &str, poly: RationalPolynomial) -> Result<FigureCertificate, RadiiError> {
    let count = sturm_count(&poly, &BigRational::zero(), &BigRational::one())?;
    Ok(FigureCertificate {
        id: id.into(),
        claim: format!("{poly} has no root in (0,1)"),
        method: "Sturm count on (0,1)".into(),
        passed: count == 0,
        sturm_count: Some(count),
        grid_points: 0,
        grid_failures: Vec::new(),
        min_margin: None,
        notes: Vec::new(),
    })
}

pub fn figure3_certificate() -> Result<FigureCertificate, RadiiError> {
    no_root_certificate("F3", RationalPolynomial::from_integers(&[-5, -22, 33, 0, -35, -30, 7]))
}

pub fn figure4_certificate() -> Result<FigureCertificate, RadiiError> {
    no_root_certificate("F4", RationalPolynomial::from_integers(&[11, 6, -33, 16]))
}

pub fn figure_certificates() -> Result<Vec<FigureCertificate>, RadiiError> {
    Ok(vec![
        figure1_certificate()?,
        figure2_certificate()?,
        figure3_certificate()?,
        figure4_certificate()?,
    ])
}
