//! Extremal witness functions, randomized admissible pairs, sharpness probes
//! and falsification campaigns.

use num_complex::Complex64;
use num_traits::Zero;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::functionals::{
    check_inequality, series_sum_with_tail, CheckOutcome, FunctionalError, HarmonicPair, SubordinationClass, Verdict,
};
use crate::par::{map_indexed, Execution};
use crate::radii::{solve_radius, HypothesisClass, Params, RadiiError, RadiusProblem, TheoremId};
use crate::series::{concave_coefficients, CoefficientEnvelope, SeriesError, TruncatedSeries};

/// Truncation order for sharpness probes.
pub const PROBE_ORDER: usize = 400;
/// Largest radius a probe may evaluate at.
pub const PROBE_GUARD: f64 = 0.99;
/// Radius of validity for sampled pairs.
pub const SAMPLE_R_MAX: f64 = 0.5;
/// Largest modulus of a sampled Blaschke zero.
pub const MAX_ZERO_MODULUS: f64 = 0.95;
/// Default upper bound on sampled Blaschke degrees.
pub const MAX_DEGREE: usize = 3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WitnessError {
    #[error("no extremal witness is catalogued for {0}")]
    NotAvailable(TheoremId),
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("probe radius {r} is at or beyond the convergence guard {PROBE_GUARD}")]
    ProbeRange { r: f64 },
    #[error("sampler invariant violated: {0}")]
    SamplerBug(String),
    #[error(transparent)]
    Radii(#[from] RadiiError),
    #[error(transparent)]
    Functional(#[from] FunctionalError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Shape of a catalogued extremal function, before scaling to a given `λ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessShape {
    /// `2λ/(1−z)`, distance `λ` from `φ(0) = 2λ`
    HalfPlane,
    /// `2λ z/(1−z)`
    ShiftedHalfPlane,
    /// `4λ z/(1−z)²`
    Koebe,
    /// `2αλ f_α(z)`
    Concave,
}

impl WitnessShape {
    pub fn for_theorem(theorem: TheoremId) -> Result<Self, WitnessError> {
        use TheoremId::*;
        Ok(match theorem {
            ThmD | ThmF | T31 | T42 => WitnessShape::HalfPlane,
            T43 => WitnessShape::ShiftedHalfPlane,
            ThmC | ThmE | ThmG | T32 | T41 | T41R | T44 => WitnessShape::Koebe,
            ThmH | ThmI | T51 | T52 => WitnessShape::Concave,
            ThmA | ThmB => return Err(WitnessError::NotAvailable(theorem)),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WitnessSpec {
    pub theorem: TheoremId,
    #[serde(rename = "K")]
    pub big_k: f64,
    pub alpha: f64,
    /// unimodular factor in `g = k·phase·Σ …`
    pub phase: Complex64,
    /// overrides the class normalization of `d(φ(0), ∂φ(𝔻))`
    pub lambda: Option<f64>,
}

impl WitnessSpec {
    pub fn new(theorem: TheoremId, big_k: f64, alpha: f64) -> Self {
        Self {
            theorem,
            big_k,
            alpha,
            phase: Complex64::new(1.0, 0.0),
            lambda: None,
        }
    }

    /// `λ` used by default: the refined theorems are stated through `G(1, r)`,
    /// the others through the class extremal.
    pub fn default_lambda(&self) -> Result<f64, WitnessError> {
        use TheoremId::*;
        Ok(match (self.theorem, WitnessShape::for_theorem(self.theorem)?) {
            (ThmF | ThmG | T31 | T32, _) => 1.0,
            (_, WitnessShape::HalfPlane | WitnessShape::ShiftedHalfPlane) => 0.5,
            (_, WitnessShape::Koebe) => 0.25,
            (_, WitnessShape::Concave) => 1.0 / (2.0 * self.alpha),
        })
    }
}

/// Coefficient-explicit extremal pair for `spec.theorem`, kept to order `m`.
pub fn build_witness(spec: &WitnessSpec, m: usize) -> Result<HarmonicPair, WitnessError> {
    let shape = WitnessShape::for_theorem(spec.theorem)?;
    if (spec.phase.norm() - 1.0).abs() > 1e-15 {
        return Err(WitnessError::Parameter(format!("|phase| = {} is not 1", spec.phase.norm())));
    }
    if m < 1 {
        return Err(WitnessError::Parameter("witness order must be ≥ 1".into()));
    }
    let problem = RadiusProblem::new(
        spec.theorem,
        Params {
            big_k: spec.big_k,
            alpha: spec.alpha,
            ..Params::default()
        },
    )?;
    let k = problem.k();
    let lambda = match spec.lambda {
        Some(l) => l,
        None => spec.default_lambda()?,
    };
    let (base, envelope, phi0, class): (Vec<f64>, CoefficientEnvelope, f64, SubordinationClass) = match shape {
        WitnessShape::HalfPlane => (
            (0..=m).map(|_| 2.0 * lambda).collect(),
            CoefficientEnvelope::new(2.0 * lambda, 0),
            2.0 * lambda,
            SubordinationClass::Convex,
        ),
        WitnessShape::ShiftedHalfPlane => (
            (0..=m).map(|n| if n == 0 { 0.0 } else { 2.0 * lambda }).collect(),
            CoefficientEnvelope::new(2.0 * lambda, 0),
            0.0,
            SubordinationClass::Convex,
        ),
        WitnessShape::Koebe => (
            (0..=m).map(|n| 4.0 * lambda * n as f64).collect(),
            CoefficientEnvelope::new(4.0 * lambda, 1),
            0.0,
            SubordinationClass::Univalent,
        ),
        WitnessShape::Concave => {
            let alpha = problem.params.alpha;
            let a = concave_coefficients(alpha, m)?;
            let s = 2.0 * alpha * lambda;
            // A_n ≤ n on α ∈ [1, 2]
            (
                (0..=m).map(|n| if n == 0 { 0.0 } else { s * a.get(n) }).collect(),
                CoefficientEnvelope::new(s, 1),
                0.0,
                SubordinationClass::Concave { alpha },
            )
        }
    };
    let a = TruncatedSeries::from_real(&base, PROBE_GUARD, envelope)?;
    let b_coeffs: Vec<Complex64> = base
        .iter()
        .enumerate()
        .map(|(n, &c)| if n == 0 { Complex64::zero() } else { spec.phase * (k * c) })
        .collect();
    let b = TruncatedSeries::with_envelope(
        b_coeffs,
        PROBE_GUARD,
        CoefficientEnvelope::new(k * envelope.scale, envelope.power),
    )?;
    Ok(HarmonicPair::new(a, b, k, lambda, phi0, class)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SharpnessReport {
    pub theorem: TheoremId,
    pub params: Params,
    pub r0: f64,
    pub delta: f64,
    pub order: usize,
    pub sharp_claimed: bool,
    pub below: CheckOutcome,
    pub above: CheckOutcome,
    /// holds below and fails above
    pub transition: bool,
    /// `transition` for sharp theorems, `holds below` otherwise
    pub passed: bool,
}

/// Evaluates the witness functional at `r0(1 − δ)` and `r0(1 + δ)`.
pub fn sharpness_probe(theorem: TheoremId, params: Params, delta: f64) -> Result<SharpnessReport, WitnessError> {
    if !(delta > 0.0 && delta < 0.1) {
        return Err(WitnessError::Parameter(format!("δ = {delta} outside (0, 0.1)")));
    }
    let problem = RadiusProblem::new(theorem, params)?;
    let spec = WitnessSpec::new(theorem, problem.params.big_k, problem.params.alpha);
    let pair = build_witness(&spec, PROBE_ORDER)?;
    let r0 = solve_radius(&problem, 1e-13)?.estimate;
    let (r_lo, r_hi) = (r0 * (1.0 - delta), r0 * (1.0 + delta));
    if r_hi >= PROBE_GUARD {
        return Err(WitnessError::ProbeRange { r: r_hi });
    }
    let below = check_inequality(&problem, &pair, r_lo)?;
    let above = check_inequality(&problem, &pair, r_hi)?;
    let transition = below.verdict == Verdict::Holds && above.verdict == Verdict::Fails;
    let sharp_claimed = problem.sharp;
    Ok(SharpnessReport {
        theorem,
        params: problem.params,
        r0,
        delta,
        order: PROBE_ORDER,
        sharp_claimed,
        below,
        above,
        transition,
        passed: if sharp_claimed {
            transition
        } else {
            below.verdict == Verdict::Holds
        },
    })
}

/// `phase · Π (z − a_j)/(1 − conj(a_j) z)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlaschkeProduct {
    pub phase: Complex64,
    pub zeros: Vec<Complex64>,
}

impl BlaschkeProduct {
    pub fn new(phase: Complex64, zeros: Vec<Complex64>) -> Result<Self, WitnessError> {
        if (phase.norm() - 1.0).abs() > 1e-12 {
            return Err(WitnessError::Parameter("Blaschke phase must be unimodular".into()));
        }
        if let Some(a) = zeros.iter().find(|a| a.norm() >= 1.0) {
            return Err(WitnessError::Parameter(format!("Blaschke zero {a} outside the disk")));
        }
        Ok(Self { phase, zeros })
    }

    /// Uniform phase and `degree` zeros uniform in the disk of radius
    /// [`MAX_ZERO_MODULUS`].
    pub fn random<R: Rng>(rng: &mut R, degree: usize) -> Self {
        let tau = std::f64::consts::TAU;
        let phase = Complex64::from_polar(1.0, tau * rng.gen::<f64>());
        let zeros = (0..degree)
            .map(|_| {
                let rho = MAX_ZERO_MODULUS * rng.gen::<f64>().sqrt();
                Complex64::from_polar(rho, tau * rng.gen::<f64>())
            })
            .collect();
        Self { phase, zeros }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.zeros
            .iter()
            .fold(self.phase, |acc, a| acc * (z - a) / (1.0 - a.conj() * z))
    }

    /// Taylor coefficients `0..=m`; each factor expands as
    /// `−a + Σ_{n≥1} conj(a)^{n−1}(1 − |a|²) zⁿ`.
    pub fn coefficients(&self, m: usize) -> Vec<Complex64> {
        let mut acc = vec![Complex64::zero(); m + 1];
        acc[0] = self.phase;
        for a in &self.zeros {
            let mut factor = vec![Complex64::zero(); m + 1];
            factor[0] = -a;
            let s = 1.0 - a.norm_sqr();
            let mut pow = Complex64::new(1.0, 0.0);
            for f in factor.iter_mut().skip(1) {
                *f = pow * s;
                pow *= a.conj();
            }
            acc = convolve(&acc, &factor, m);
        }
        acc
    }
}

fn convolve(a: &[Complex64], b: &[Complex64], m: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::zero(); m + 1];
    for (i, ai) in a.iter().enumerate().take(m + 1) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(m + 1 - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// `1/(1 − ω)` from `u = 1 + ω·u`.
fn reciprocal_one_minus(omega: &[Complex64]) -> Vec<Complex64> {
    let m = omega.len() - 1;
    let mut u = vec![Complex64::zero(); m + 1];
    u[0] = Complex64::new(1.0, 0.0);
    for n in 1..=m {
        u[n] = (1..=n).map(|j| omega[j] * u[n - j]).sum();
    }
    u
}

/// `φ∘ω` for the class extremal `φ`, with `ω(0) = 0`.
pub fn compose_extremal(class: SubordinationClass, omega: &[Complex64]) -> Result<Vec<Complex64>, WitnessError> {
    if omega.is_empty() || !omega[0].is_zero() {
        return Err(WitnessError::Parameter("Schwarz function needs ω(0) = 0".into()));
    }
    let m = omega.len() - 1;
    Ok(match class {
        SubordinationClass::Convex => reciprocal_one_minus(omega),
        SubordinationClass::Univalent => {
            // w/(1−w)² = u² − u with u = 1/(1−w)
            let u = reciprocal_one_minus(omega);
            convolve(&u, &u, m).iter().zip(&u).map(|(s, x)| s - x).collect()
        }
        SubordinationClass::Concave { alpha } => {
            if !(1.0..=2.0).contains(&alpha) {
                return Err(WitnessError::Parameter(format!("α = {alpha} outside [1, 2]")));
            }
            // (1 − ω²) h′ = (1 + 2αh) ω′
            let d_omega: Vec<Complex64> = (0..m).map(|j| omega[j + 1] * (j + 1) as f64).collect();
            let omega_sq = convolve(omega, omega, m);
            let mut h = vec![Complex64::zero(); m + 1];
            for n in 0..m {
                let mut rhs = d_omega[n];
                for j in 0..=n {
                    rhs += 2.0 * alpha * h[j] * d_omega[n - j];
                }
                for j in 2..=n {
                    rhs += omega_sq[j] * h[n + 1 - j] * (n + 1 - j) as f64;
                }
                h[n + 1] = rhs / (n + 1) as f64;
            }
            h
        }
    })
}

/// Coefficients `b_n` of `g` with `g′ = ω_d h′`, `g(0) = 0`.
pub fn coanalytic_part(a: &[Complex64], omega_d: &[Complex64]) -> Vec<Complex64> {
    let m = a.len() - 1;
    let h_prime: Vec<Complex64> = (0..m).map(|j| a[j + 1] * (j + 1) as f64).collect();
    let mut b = vec![Complex64::zero(); m + 1];
    for n in 1..=m {
        let conv: Complex64 = (0..n).map(|i| omega_d[i] * h_prime[n - 1 - i]).sum();
        b[n] = conv / n as f64;
    }
    b
}

fn class_lambda(class: SubordinationClass) -> (f64, f64) {
    // (λ, |φ(0)|)
    match class {
        SubordinationClass::Convex => (0.5, 1.0),
        SubordinationClass::Univalent => (0.25, 0.0),
        SubordinationClass::Concave { alpha } => (1.0 / (2.0 * alpha), 0.0),
    }
}

/// Harmonic pair `h = φ∘ω`, `g′ = ω_d h′` from explicit Schwarz data.
/// `omega_d` must already carry the factor `k`.
pub fn pair_from_schwarz(
    class: SubordinationClass,
    omega: &[Complex64],
    omega_d: &[Complex64],
    k: f64,
) -> Result<HarmonicPair, WitnessError> {
    let m = omega.len() - 1;
    if omega_d.len() != m + 1 {
        return Err(WitnessError::Parameter("ω and ω_d orders differ".into()));
    }
    let a = compose_extremal(class, omega)?;
    let b = coanalytic_part(&a, omega_d);
    // |a_n| ≤ 1 (convex) or ≤ n; n|b_n| ≤ k Σ_{j≤n} j|a_j|
    let (env_a, env_b) = match class {
        SubordinationClass::Convex => (CoefficientEnvelope::new(1.0, 0), CoefficientEnvelope::new(k, 1)),
        _ => (CoefficientEnvelope::new(1.0, 1), CoefficientEnvelope::new(k, 2)),
    };
    let (lambda, phi0) = class_lambda(class);
    Ok(HarmonicPair::new(
        TruncatedSeries::with_envelope(a, SAMPLE_R_MAX, env_a)?,
        TruncatedSeries::with_envelope(b, SAMPLE_R_MAX, env_b)?,
        k,
        lambda,
        phi0,
        class,
    )?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleSpec {
    pub class: SubordinationClass,
    #[serde(rename = "K")]
    pub big_k: f64,
    pub schwarz_seed: u64,
    pub dilatation_seed: u64,
    /// degrees of `B₁` (in `ω = z·B₁`) and `B₂` (in `ω_d = k·B₂`)
    pub blaschke_degrees: [usize; 2],
}

/// Random admissible pair: `h = φ∘(z·B₁)`, `g′ = k·B₂·h′`. The result is
/// checked against the coefficient lemmas before it is returned.
pub fn sample_admissible(spec: &SampleSpec, m: usize) -> Result<HarmonicPair, WitnessError> {
    if m < 16 {
        return Err(WitnessError::Parameter(format!("sample order {m} < 16")));
    }
    if !(spec.big_k >= 1.0 && spec.big_k.is_finite()) {
        return Err(WitnessError::Parameter(format!("K = {} must be ≥ 1", spec.big_k)));
    }
    let k = (spec.big_k - 1.0) / (spec.big_k + 1.0);
    let b1 = BlaschkeProduct::random(&mut ChaCha8Rng::seed_from_u64(spec.schwarz_seed), spec.blaschke_degrees[0]);
    let b2 = BlaschkeProduct::random(&mut ChaCha8Rng::seed_from_u64(spec.dilatation_seed), spec.blaschke_degrees[1]);
    let mut omega = vec![Complex64::zero(); m + 1];
    omega[1..].copy_from_slice(&b1.coefficients(m - 1));
    let omega_d: Vec<Complex64> = b2.coefficients(m).into_iter().map(|c| c * k).collect();

    check_schwarz(&omega, &omega_d, k)?;
    let pair = pair_from_schwarz(spec.class, &omega, &omega_d, k)?;
    verify_sample(&pair)?;
    Ok(pair)
}

fn eval_poly(c: &[Complex64], z: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::zero(), |acc, &x| acc * z + x)
}

fn check_schwarz(omega: &[Complex64], omega_d: &[Complex64], k: f64) -> Result<(), WitnessError> {
    const GRID: usize = 256;
    for j in 0..GRID {
        let z = Complex64::from_polar(SAMPLE_R_MAX, std::f64::consts::TAU * j as f64 / GRID as f64);
        let w = eval_poly(omega, z).norm();
        if w > SAMPLE_R_MAX * (1.0 + 1e-9) {
            return Err(WitnessError::SamplerBug(format!("|ω({z})| = {w} exceeds |z|")));
        }
        let wd = eval_poly(omega_d, z).norm();
        if wd > k * (1.0 + 1e-9) + 1e-15 {
            return Err(WitnessError::SamplerBug(format!("|ω_d({z})| = {wd} exceeds k = {k}")));
        }
    }
    Ok(())
}

/// Coefficients of the class extremal `φ`, indices `0..=m`.
pub fn extremal_coefficients(class: SubordinationClass, m: usize) -> Result<Vec<f64>, WitnessError> {
    Ok(match class {
        SubordinationClass::Convex => vec![1.0; m + 1],
        SubordinationClass::Univalent => (0..=m).map(|n| n as f64).collect(),
        SubordinationClass::Concave { alpha } => {
            let a = concave_coefficients(alpha, m.max(1))?;
            (0..=m).map(|n| if n == 0 { 0.0 } else { a.get(n) }).collect()
        }
    })
}

/// Relative slack for floating-point comparisons in the lemma checks.
const SLACK: f64 = 1e-10;

/// Dilatation area bound: `Σ n|b_n|² r²ⁿ ≤ k² Σ n|a_n|² r²ⁿ`.
pub fn check_area_dilatation(pair: &HarmonicPair, r: f64) -> Result<(), WitnessError> {
    let (lhs, _) = series_sum_with_tail(&pair.b, r, 1, 2, 2);
    let (rhs, rhs_tail) = series_sum_with_tail(&pair.a, r, 1, 2, 2);
    let k2 = pair.k_bound * pair.k_bound;
    if lhs > k2 * (rhs + rhs_tail) * (1.0 + SLACK) + 1e-300 {
        return Err(WitnessError::SamplerBug(format!(
            "area bound fails at r = {r}: {lhs} > k²·{rhs}"
        )));
    }
    Ok(())
}

/// Majorant dilatation bound for `r ≤ 1/3`: `Σ|b_n|rⁿ ≤ k Σ|a_n|rⁿ`.
pub fn check_majorant_dilatation(pair: &HarmonicPair, r: f64) -> Result<(), WitnessError> {
    let (lhs, _) = series_sum_with_tail(&pair.b, r, 0, 1, 1);
    let (rhs, rhs_tail) = series_sum_with_tail(&pair.a, r, 0, 1, 1);
    if lhs > pair.k_bound * (rhs + rhs_tail) * (1.0 + SLACK) + 1e-300 {
        return Err(WitnessError::SamplerBug(format!(
            "majorant dilatation bound fails at r = {r}: {lhs} > k·{rhs}"
        )));
    }
    Ok(())
}

/// `|a_n| ≤ |c_n|` against the class extremal, `1 ≤ n ≤ M`.
pub fn check_coefficient_bounds(pair: &HarmonicPair) -> Result<(), WitnessError> {
    let c = extremal_coefficients(pair.class, pair.a.order())?;
    for (n, (a, bound)) in pair.a.coeffs().iter().zip(&c).enumerate().skip(1) {
        let an = a.norm();
        if an > bound * (1.0 + SLACK) + 1e-12 {
            return Err(WitnessError::SamplerBug(format!("|a_{n}| = {an} > {bound}")));
        }
    }
    Ok(())
}

/// Subordinate tails for `r ≤ 1/3`: `Σ_{n≥N}|a_n|rⁿ ≤ Σ_{n≥N}|c_n|rⁿ`.
pub fn check_subordinate_tail(pair: &HarmonicPair, from_n: usize, r: f64) -> Result<(), WitnessError> {
    let c = extremal_coefficients(pair.class, pair.a.order())?;
    let lhs = pair.a.abs_sum(r, from_n, 0, 1, 1);
    let rhs: f64 = crate::functionals::stable_sum(
        &c.iter()
            .enumerate()
            .skip(from_n)
            .map(|(n, cn)| cn * r.powi(n as i32))
            .collect::<Vec<_>>(),
    );
    if lhs > rhs * (1.0 + SLACK) + 1e-300 {
        return Err(WitnessError::SamplerBug(format!(
            "subordinate tail from N = {from_n} fails at r = {r}: {lhs} > {rhs}"
        )));
    }
    Ok(())
}

fn verify_sample(pair: &HarmonicPair) -> Result<(), WitnessError> {
    for r in [0.1, 0.25, 0.3] {
        check_area_dilatation(pair, r)?;
    }
    for r in [0.1, 0.25, 1.0 / 3.0] {
        check_majorant_dilatation(pair, r)?;
    }
    check_coefficient_bounds(pair)
}

/// Settings shared by every trial of a campaign.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CampaignSettings {
    pub trials: usize,
    pub r_fraction: f64,
    pub seed: u64,
    pub order: usize,
    #[serde(skip)]
    pub execution: Execution,
}

impl Default for CampaignSettings {
    fn default() -> Self {
        Self {
            trials: 1000,
            r_fraction: 0.99,
            seed: 42,
            order: crate::series::DEFAULT_ORDER,
            execution: Execution::Parallel,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub index: usize,
    pub sample: SampleSpec,
    pub verdict: Verdict,
    pub value: f64,
    pub tail_error: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub theorem: TheoremId,
    pub params: Params,
    pub seed: u64,
    pub trials: usize,
    pub order: usize,
    pub r_fraction: f64,
    pub r0: f64,
    pub r: f64,
    pub holds: usize,
    pub fails: usize,
    pub inconclusive: usize,
    /// largest `(value + tail) / bound` seen
    pub max_ratio: f64,
    pub records: Vec<TrialRecord>,
}

impl CampaignReport {
    /// Any failure contradicts the theorem.
    pub fn has_finding(&self) -> bool {
        self.fails > 0
    }
}

/// Class sampled for a theorem's hypothesis.
pub fn sample_class(problem: &RadiusProblem) -> Result<SubordinationClass, WitnessError> {
    Ok(match problem.theorem.hypothesis() {
        HypothesisClass::Convex => SubordinationClass::Convex,
        HypothesisClass::Univalent => SubordinationClass::Univalent,
        HypothesisClass::Concave => SubordinationClass::Concave {
            alpha: problem.params.alpha,
        },
        HypothesisClass::Bounded => return Err(WitnessError::NotAvailable(problem.theorem)),
    })
}

/// Trial `index` of a campaign: seeds and degrees come from stream `index` of
/// a generator keyed by the campaign seed, so trials are independent of
/// scheduling.
pub fn trial_spec(class: SubordinationClass, big_k: f64, seed: u64, index: usize) -> SampleSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    SampleSpec {
        class,
        big_k,
        schwarz_seed: rng.next_u64(),
        dilatation_seed: rng.next_u64(),
        blaschke_degrees: [rng.gen_range(0..=MAX_DEGREE), rng.gen_range(0..=MAX_DEGREE)],
    }
}

/// Runs `check_inequality` on sampled pairs at `r = r_fraction · r0`.
pub fn falsify(theorem: TheoremId, params: Params, settings: &CampaignSettings) -> Result<CampaignReport, WitnessError> {
    if !(settings.r_fraction > 0.0 && settings.r_fraction < 1.0) {
        return Err(WitnessError::Parameter(format!(
            "r_fraction = {} outside (0, 1)",
            settings.r_fraction
        )));
    }
    let problem = RadiusProblem::new(theorem, params)?;
    let class = sample_class(&problem)?;
    let r0 = solve_radius(&problem, 1e-12)?.estimate;
    let r = settings.r_fraction * r0;
    let big_k = problem.params.big_k;
    let results = map_indexed(settings.trials, settings.execution, |i| {
        let sample = trial_spec(class, big_k, settings.seed, i);
        let pair = sample_admissible(&sample, settings.order)?;
        let out = check_inequality(&problem, &pair, r)?;
        Ok::<_, WitnessError>(TrialRecord {
            index: i,
            sample,
            verdict: out.verdict,
            value: out.value,
            tail_error: out.tail_error,
            bound: out.bound,
        })
    });
    let records = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    let count = |v: Verdict| records.iter().filter(|t| t.verdict == v).count();
    let max_ratio = records
        .iter()
        .map(|t| (t.value + t.tail_error) / t.bound)
        .fold(0.0, f64::max);
    Ok(CampaignReport {
        theorem,
        params: problem.params,
        seed: settings.seed,
        trials: settings.trials,
        order: settings.order,
        r_fraction: settings.r_fraction,
        r0,
        r,
        holds: count(Verdict::Holds),
        fails: count(Verdict::Fails),
        inconclusive: count(Verdict::Inconclusive),
        max_ratio,
        records,
    })
}
