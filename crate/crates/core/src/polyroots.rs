//! Exact rational polynomials, Sturm root counting and certified bisection.
//!
//! Sturm chains are built over `BigRational` so sign evaluations are exact.
//! Transcendental equations go through [`bisect_monotone`], whose certificate
//! is a sign change of a function the caller knows to be strictly monotone.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Endpoint perturbation used when an endpoint is itself a root.
pub fn endpoint_epsilon() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(1_000_000_000u64))
}

/// Default bisection width for library calls.
pub const DEFAULT_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RootError {
    #[error("the zero polynomial has no isolated roots")]
    ZeroPolynomial,
    #[error("invalid interval: lo = {lo} must be below hi = {hi}")]
    InvalidInterval { lo: String, hi: String },
    #[error("endpoint {0} remains a root after perturbation")]
    EndpointRoot(String),
    #[error("expected exactly one root on ({lo}, {hi}), Sturm count is {count}")]
    UniquenessViolation { count: usize, lo: String, hi: String },
    #[error("no sign change: F(lo) = {f_lo}, F(hi) = {f_hi}")]
    Bracketing { f_lo: f64, f_hi: f64 },
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("cannot parse rational `{0}`")]
    Parse(String),
}

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(num.into(), den.into())
}

/// Exact conversion of a finite `f64` into a rational.
pub fn rational_from_f64(x: f64) -> Result<BigRational, RootError> {
    BigRational::from_float(x).ok_or_else(|| RootError::Argument(format!("{x} is not finite")))
}

pub fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

pub fn parse_rational(s: &str) -> Result<BigRational, RootError> {
    s.trim().parse::<BigRational>().map_err(|_| RootError::Parse(s.to_string()))
}

/// Univariate polynomial with exact rational coefficients, ascending degree.
///
/// Trailing zero coefficients are stripped, so the zero polynomial has an
/// empty coefficient list and every other polynomial a nonzero leading term.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct RationalPolynomial {
    coeffs: Vec<BigRational>,
}

impl RationalPolynomial {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `r`.
    pub fn x() -> Self {
        Self::from_integers(&[0, 1])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + to_f64(c))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(n, c)| c * BigRational::from_integer(n.into()))
                .collect(),
        )
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::constant(BigRational::one()), |acc, _| &acc * self)
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) => self.scale(&l.recip()),
            None => Self::zero(),
        }
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let d_deg = divisor.degree().expect("division by the zero polynomial");
        let d_lead = divisor.leading().unwrap();
        let mut rem = self.coeffs.clone();
        let Some(n_deg) = self.degree() else {
            return (Self::zero(), Self::zero());
        };
        if n_deg < d_deg {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); n_deg - d_deg + 1];
        for i in (0..=n_deg - d_deg).rev() {
            let q = &rem[i + d_deg] / d_lead;
            if q.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[i + j] -= &q * dc;
            }
            quot[i] = q;
        }
        rem.truncate(d_deg);
        (Self::new(quot), Self::new(rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `p / gcd(p, p′)`: same distinct roots, all simple.
    pub fn squarefree(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        if g.degree() == Some(0) {
            return self.clone();
        }
        self.div_rem(&g).0
    }

    /// Whether `self` divides `other` exactly over the rationals.
    pub fn divides(&self, other: &Self) -> bool {
        !self.is_zero() && other.rem(self).is_zero()
    }

    /// Coefficients as exact rational strings (`"p"` or `"p/q"`).
    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }

    pub fn from_strings<S: AsRef<str>>(coeffs: &[S]) -> Result<Self, RootError> {
        coeffs
            .iter()
            .map(|s| parse_rational(s.as_ref()))
            .collect::<Result<Vec<_>, _>>()
            .map(Self::new)
    }

    /// Number of sign changes in the coefficient list (Descartes bound on
    /// positive roots).
    pub fn descartes_sign_changes(&self) -> usize {
        let signs: Vec<bool> = self
            .coeffs
            .iter()
            .filter(|c| !c.is_zero())
            .map(|c| c.is_positive())
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }
}

impl fmt::Display for RationalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            let show_coeff = n == 0 || !mag.is_one();
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match n {
                0 => {}
                1 => write!(f, "{}r", if show_coeff { "*" } else { "" })?,
                _ => write!(f, "{}r^{n}", if show_coeff { "*" } else { "" })?,
            }
        }
        Ok(())
    }
}

impl Add for &RationalPolynomial {
    type Output = RationalPolynomial;
    fn add(self, rhs: Self) -> RationalPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = BigRational::zero();
        RationalPolynomial::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + rhs.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }
}

impl Sub for &RationalPolynomial {
    type Output = RationalPolynomial;
    fn sub(self, rhs: Self) -> RationalPolynomial {
        self + &(-rhs)
    }
}

impl Neg for &RationalPolynomial {
    type Output = RationalPolynomial;
    fn neg(self) -> RationalPolynomial {
        RationalPolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &RationalPolynomial {
    type Output = RationalPolynomial;
    fn mul(self, rhs: Self) -> RationalPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return RationalPolynomial::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RationalPolynomial::new(out)
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr for RationalPolynomial {
            type Output = RationalPolynomial;
            fn $m(self, rhs: Self) -> RationalPolynomial { (&self).$m(&rhs) }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul);

/// Sturm chain of the squarefree part of `p`.
pub fn sturm_chain(p: &RationalPolynomial) -> Vec<RationalPolynomial> {
    let p0 = p.squarefree();
    let mut chain = vec![p0.clone()];
    let p1 = p0.derivative();
    if p1.is_zero() {
        return chain;
    }
    chain.push(p1);
    loop {
        let n = chain.len();
        let r = chain[n - 2].rem(&chain[n - 1]);
        if r.is_zero() {
            break;
        }
        chain.push(-&r);
    }
    chain
}

fn sign_variations(chain: &[RationalPolynomial], x: &BigRational) -> usize {
    let signs: Vec<bool> = chain
        .iter()
        .map(|q| q.eval(x))
        .filter(|v| !v.is_zero())
        .map(|v| v.is_positive())
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Moves an endpoint off a root by the fixed ε, once.
fn settle_endpoints(
    p: &RationalPolynomial,
    lo: &BigRational,
    hi: &BigRational,
) -> Result<(BigRational, BigRational), RootError> {
    if p.is_zero() {
        return Err(RootError::ZeroPolynomial);
    }
    if lo >= hi {
        return Err(RootError::InvalidInterval {
            lo: lo.to_string(),
            hi: hi.to_string(),
        });
    }
    let eps = endpoint_epsilon();
    let mut lo = lo.clone();
    let mut hi = hi.clone();
    if p.eval(&lo).is_zero() {
        lo += &eps;
        if p.eval(&lo).is_zero() {
            return Err(RootError::EndpointRoot(lo.to_string()));
        }
    }
    if p.eval(&hi).is_zero() {
        hi -= &eps;
        if p.eval(&hi).is_zero() {
            return Err(RootError::EndpointRoot(hi.to_string()));
        }
    }
    if lo >= hi {
        return Err(RootError::InvalidInterval {
            lo: lo.to_string(),
            hi: hi.to_string(),
        });
    }
    Ok((lo, hi))
}

/// Exact number of distinct real roots of `p` in the open interval `(lo, hi)`.
pub fn sturm_count(p: &RationalPolynomial, lo: &BigRational, hi: &BigRational) -> Result<usize, RootError> {
    let (lo, hi) = settle_endpoints(p, lo, hi)?;
    let chain = sturm_chain(p);
    Ok(sign_variations(&chain, &lo) - sign_variations(&chain, &hi))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    /// Exact Sturm count of one on the isolating interval.
    SturmCountOne,
    /// Sign change of a function documented as strictly monotone there.
    MonotoneSignChange,
    /// Closed-form value, with the sign change of the defining function
    /// verified around it.
    ClosedForm,
}

impl fmt::Display for CertificateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CertificateKind::SturmCountOne => "sturm_count_one",
            CertificateKind::MonotoneSignChange => "monotone_sign_change",
            CertificateKind::ClosedForm => "closed_form",
        })
    }
}

/// Isolating interval plus point estimate for a root.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "CertifiedRootWire", try_from = "CertifiedRootWire")]
pub struct CertifiedRoot {
    pub lo: BigRational,
    pub hi: BigRational,
    pub estimate: f64,
    pub certificate: CertificateKind,
    pub residual: f64,
    pub tol: f64,
    /// Present for Sturm certificates.
    pub polynomial: Option<RationalPolynomial>,
}

impl CertifiedRoot {
    pub fn width(&self) -> f64 {
        to_f64(&(&self.hi - &self.lo))
    }

    pub fn lo_f64(&self) -> f64 {
        to_f64(&self.lo)
    }

    pub fn hi_f64(&self) -> f64 {
        to_f64(&self.hi)
    }

    /// Re-derives the Sturm count on the stored interval. `None` when the
    /// certificate is not polynomial.
    pub fn recheck_sturm(&self) -> Option<Result<usize, RootError>> {
        self.polynomial.as_ref().map(|p| sturm_count(p, &self.lo, &self.hi))
    }
}

#[derive(Serialize, Deserialize)]
struct CertifiedRootWire {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    poly: Option<Vec<String>>,
    interval: [String; 2],
    estimate: f64,
    certificate: CertificateKind,
    residual: f64,
    tol: f64,
}

impl From<CertifiedRoot> for CertifiedRootWire {
    fn from(c: CertifiedRoot) -> Self {
        Self {
            poly: c.polynomial.as_ref().map(RationalPolynomial::to_strings),
            interval: [c.lo.to_string(), c.hi.to_string()],
            estimate: c.estimate,
            certificate: c.certificate,
            residual: c.residual,
            tol: c.tol,
        }
    }
}

impl TryFrom<CertifiedRootWire> for CertifiedRoot {
    type Error = RootError;
    fn try_from(w: CertifiedRootWire) -> Result<Self, RootError> {
        Ok(Self {
            lo: parse_rational(&w.interval[0])?,
            hi: parse_rational(&w.interval[1])?,
            estimate: w.estimate,
            certificate: w.certificate,
            residual: w.residual,
            tol: w.tol,
            polynomial: w.poly.map(|p| RationalPolynomial::from_strings(&p)).transpose()?,
        })
    }
}

/// Self-contained Sturm certificate: the polynomial, the interval and the
/// count, all as exact rational strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SturmCertificate {
    pub poly: Vec<String>,
    pub interval: [String; 2],
    pub count: usize,
    pub tol: f64,
}

impl SturmCertificate {
    pub fn new(p: &RationalPolynomial, lo: &BigRational, hi: &BigRational, tol: f64) -> Result<Self, RootError> {
        let count = sturm_count(p, lo, hi)?;
        Ok(Self {
            poly: p.to_strings(),
            interval: [lo.to_string(), hi.to_string()],
            count,
            tol,
        })
    }

    /// Recomputes the count from the serialized data.
    pub fn verify(&self) -> Result<bool, RootError> {
        let p = RationalPolynomial::from_strings(&self.poly)?;
        let lo = parse_rational(&self.interval[0])?;
        let hi = parse_rational(&self.interval[1])?;
        Ok(sturm_count(&p, &lo, &hi)? == self.count)
    }
}

/// Bisects the unique root of `p` on `(lo, hi)` down to width `tol`.
///
/// Signs come from the squarefree part, evaluated exactly. The estimate is the
/// midpoint, replaced by one Newton step when that step stays inside the
/// final interval and does not increase the residual.
pub fn isolate_root(
    p: &RationalPolynomial,
    lo: &BigRational,
    hi: &BigRational,
    tol: f64,
) -> Result<CertifiedRoot, RootError> {
    if !(tol > 0.0) {
        return Err(RootError::Argument(format!("tolerance {tol} must be positive")));
    }
    let (mut lo, mut hi) = settle_endpoints(p, lo, hi)?;
    let chain = sturm_chain(p);
    let count = sign_variations(&chain, &lo) - sign_variations(&chain, &hi);
    if count != 1 {
        return Err(RootError::UniquenessViolation {
            count,
            lo: lo.to_string(),
            hi: hi.to_string(),
        });
    }
    let q = &chain[0];
    let tol_q = rational_from_f64(tol)?;
    let two = BigRational::from_integer(2.into());
    let lo_positive = q.eval(&lo).is_positive();
    while &hi - &lo > tol_q {
        let mid = (&lo + &hi) / &two;
        let v = q.eval(&mid);
        if v.is_zero() {
            let delta = &tol_q / BigRational::from_integer(4.into());
            lo = &mid - &delta;
            hi = &mid + &delta;
            break;
        }
        if v.is_positive() == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    debug_assert!(q.eval(&lo).is_positive() != q.eval(&hi).is_positive());

    let (lo_f, hi_f) = (to_f64(&lo), to_f64(&hi));
    let mid = to_f64(&((&lo + &hi) / &two));
    let d = p.derivative();
    let mut estimate = mid;
    let r_mid = p.eval_f64(mid).abs();
    let slope = d.eval_f64(mid);
    if slope != 0.0 && slope.is_finite() {
        let newton = mid - p.eval_f64(mid) / slope;
        if newton.is_finite() && newton >= lo_f && newton <= hi_f && p.eval_f64(newton).abs() <= r_mid {
            estimate = newton;
        }
    }
    Ok(CertifiedRoot {
        lo,
        hi,
        estimate,
        certificate: CertificateKind::SturmCountOne,
        residual: p.eval_f64(estimate).abs(),
        tol,
        polynomial: Some(p.clone()),
    })
}

/// Every distinct root of `p` on `(lo, hi)`, each isolated to width `tol`,
/// in increasing order.
pub fn isolate_all_roots(
    p: &RationalPolynomial,
    lo: &BigRational,
    hi: &BigRational,
    tol: f64,
) -> Result<Vec<CertifiedRoot>, RootError> {
    let (lo, hi) = settle_endpoints(p, lo, hi)?;
    let chain = sturm_chain(p);
    let mut out = Vec::new();
    let mut stack = vec![(lo, hi)];
    while let Some((a, b)) = stack.pop() {
        let count = sign_variations(&chain, &a) - sign_variations(&chain, &b);
        match count {
            0 => {}
            1 => out.push(isolate_root(p, &a, &b, tol)?),
            _ => {
                // split off-centre if the midpoint happens to be a root
                let mut cut = (&a + &b) / BigRational::from_integer(2.into());
                let mut shift = (&b - &a) / BigRational::from_integer(7.into());
                while chain[0].eval(&cut).is_zero() {
                    cut += &shift;
                    shift /= BigRational::from_integer(2.into());
                }
                stack.push((cut.clone(), b));
                stack.push((a, cut));
            }
        }
    }
    out.sort_by(|x, y| x.lo.cmp(&y.lo));
    Ok(out)
}

/// Bisection for a strictly monotone function with a sign change on
/// `[lo, hi]`. Monotonicity is the caller's responsibility.
pub fn bisect_monotone<F>(f: F, lo: f64, hi: f64, tol: f64) -> Result<CertifiedRoot, RootError>
where
    F: Fn(f64) -> f64,
{
    if !(tol > 0.0) {
        return Err(RootError::Argument(format!("tolerance {tol} must be positive")));
    }
    if !(lo < hi) {
        return Err(RootError::InvalidInterval {
            lo: lo.to_string(),
            hi: hi.to_string(),
        });
    }
    let (f_lo, f_hi) = (f(lo), f(hi));
    if !(f_lo * f_hi < 0.0) {
        return Err(RootError::Bracketing { f_lo, f_hi });
    }
    let lo_positive = f_lo > 0.0;
    let (mut a, mut b) = (lo, hi);
    let mut exact = None;
    while b - a > tol {
        let mid = a + (b - a) / 2.0;
        if mid <= a || mid >= b {
            break;
        }
        let v = f(mid);
        if v == 0.0 {
            exact = Some(mid);
            break;
        }
        if (v > 0.0) == lo_positive {
            a = mid;
        } else {
            b = mid;
        }
    }
    let estimate = exact.unwrap_or(a + (b - a) / 2.0);
    Ok(CertifiedRoot {
        lo: rational_from_f64(a)?,
        hi: rational_from_f64(b)?,
        estimate,
        certificate: CertificateKind::MonotoneSignChange,
        residual: f(estimate).abs(),
        tol,
        polynomial: None,
    })
}
