//! Bernoulli and Euler polynomials with exact rational coefficients, their
//! periodic splines, certified sup-norm bounds and Gamma/Beta helpers.
//!
//! Coefficients are computed once (on first use) up to [`MAX_ORDER`] and kept
//! as `BigRational`s. Public evaluators convert the argument exactly, run
//! Horner in rationals and round once. The `*_fast` variants are plain `f64`
//! and are meant for inner quadrature loops.

mod gamma;
mod isolate;

pub use gamma::{beta_fn, gamma, ln_gamma, rising_ratio};

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::sync::OnceLock;

/// Exact rational scalar used for polynomial coefficients.
pub type Q = BigRational;

/// Largest order accepted by [`bernoulli_poly`] and [`euler_poly`].
pub const MAX_ORDER: usize = 64;

// E_n needs B_{n+1}
const BERNOULLI_CACHE: usize = MAX_ORDER + 1;

/// Dense polynomial with exact rational coefficients, constant term first.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyCoeffs {
    degree: usize,
    coeffs: Vec<Q>,
}

impl PolyCoeffs {
    /// Builds a polynomial, trimming trailing zeros (the zero polynomial has degree 0).
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.len() > 1 && coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Q::zero());
        }
        PolyCoeffs {
            degree: coeffs.len() - 1,
            coeffs,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn leading(&self) -> &Q {
        &self.coeffs[self.degree]
    }

    pub fn derivative(&self) -> PolyCoeffs {
        if self.degree == 0 {
            return PolyCoeffs::new(vec![Q::zero()]);
        }
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, c)| c * Q::from_integer(BigInt::from(j)))
            .collect();
        PolyCoeffs::new(c)
    }

    /// Exact evaluation at a rational point.
    pub fn eval_exact(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Evaluates exactly at the (exactly representable) `x`, rounding once.
    pub fn eval(&self, x: f64) -> f64 {
        match Q::from_float(x) {
            Some(q) => to_f64(&self.eval_exact(&q)),
            None => f64::NAN,
        }
    }

    /// Coefficients rounded to `f64`.
    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(to_f64).collect()
    }
}

fn to_f64(q: &Q) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

fn q_int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Which periodic spline: `b_n(x) = B_n({x})` (period 1) or the Euler spline
/// `e_n` (period 2, `e_n(x + 1) = -e_n(x)`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SplineFamily {
    Bernoulli,
    Euler,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SplineKind {
    pub kind: SplineFamily,
    pub order: usize,
}

impl SplineKind {
    pub fn bernoulli(order: usize) -> Self {
        SplineKind {
            kind: SplineFamily::Bernoulli,
            order,
        }
    }

    pub fn euler(order: usize) -> Self {
        SplineKind {
            kind: SplineFamily::Euler,
            order,
        }
    }

    pub fn period(&self) -> f64 {
        match self.kind {
            SplineFamily::Bernoulli => 1.0,
            SplineFamily::Euler => 2.0,
        }
    }
}

/// Bernoulli numbers B_0..=B_{MAX_ORDER+1} with B_1 = -1/2 (Akiyama-Tanigawa).
fn bernoulli_numbers() -> &'static [Q] {
    static CACHE: OnceLock<Vec<Q>> = OnceLock::new();
    CACHE.get_or_init(|| {
        let n = BERNOULLI_CACHE;
        let mut a: Vec<Q> = vec![Q::zero(); n + 1];
        let mut out = Vec::with_capacity(n + 1);
        for m in 0..=n {
            a[m] = Q::new(BigInt::one(), BigInt::from(m + 1));
            for j in (1..=m).rev() {
                let d = &a[j - 1] - &a[j];
                a[j - 1] = d * q_int(j as i64);
            }
            out.push(a[0].clone());
        }
        // the recurrence yields B_1 = +1/2
        out[1] = -out[1].clone();
        out
    })
}

fn binomial_row(n: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::one(); n + 1];
    for k in 1..n {
        row[k] = &row[k - 1] * BigInt::from(n - k + 1) / BigInt::from(k);
    }
    row
}

fn bernoulli_table() -> &'static [PolyCoeffs] {
    static CACHE: OnceLock<Vec<PolyCoeffs>> = OnceLock::new();
    CACHE.get_or_init(|| {
        let b = bernoulli_numbers();
        (0..=BERNOULLI_CACHE)
            .map(|n| {
                let row = binomial_row(n);
                // B_n(x) = sum_j C(n, j) B_{n-j} x^j
                let c = (0..=n)
                    .map(|j| Q::from_integer(row[j].clone()) * &b[n - j])
                    .collect();
                PolyCoeffs::new(c)
            })
            .collect()
    })
}

fn euler_table() -> &'static [PolyCoeffs] {
    static CACHE: OnceLock<Vec<PolyCoeffs>> = OnceLock::new();
    CACHE.get_or_init(|| {
        let bt = bernoulli_table();
        (0..=MAX_ORDER)
            .map(|n| {
                // E_n(x) = 2/(n+1) (B_{n+1}(x) - 2^{n+1} B_{n+1}(x/2))
                let b = &bt[n + 1];
                let scale = Q::new(BigInt::from(2), BigInt::from(n + 1));
                let c = (0..=n + 1)
                    .map(|j| {
                        let cj = b.coeffs().get(j).cloned().unwrap_or_else(Q::zero);
                        let factor = Q::one() - Q::from_integer(BigInt::one() << (n + 1 - j));
                        cj * factor * &scale
                    })
                    .collect();
                PolyCoeffs::new(c)
            })
            .collect()
    })
}

fn f64_tables() -> &'static (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    static CACHE: OnceLock<(Vec<Vec<f64>>, Vec<Vec<f64>>)> = OnceLock::new();
    CACHE.get_or_init(|| {
        (
            bernoulli_table().iter().map(|p| p.to_f64_coeffs()).collect(),
            euler_table().iter().map(|p| p.to_f64_coeffs()).collect(),
        )
    })
}

fn check_order(n: usize, max: usize) -> Result<()> {
    if n > max {
        Err(Error::OrderOverflow {
            requested: n,
            max,
        })
    } else {
        Ok(())
    }
}

/// Exact Bernoulli number B_n (B_1 = -1/2).
pub fn bernoulli_number(n: usize) -> Result<Q> {
    check_order(n, MAX_ORDER)?;
    Ok(bernoulli_numbers()[n].clone())
}

/// Exact coefficients of B_n(x).
pub fn bernoulli_coeffs(n: usize) -> Result<&'static PolyCoeffs> {
    check_order(n, MAX_ORDER)?;
    Ok(&bernoulli_table()[n])
}

/// Exact coefficients of E_n(x).
pub fn euler_coeffs(n: usize) -> Result<&'static PolyCoeffs> {
    check_order(n, MAX_ORDER)?;
    Ok(&euler_table()[n])
}

/// B_n(x), evaluated exactly and rounded once.
///
/// ```
/// use mathieu_core::polyfun::bernoulli_poly;
/// assert!((bernoulli_poly(1, 0.7).unwrap() - 0.2).abs() < 1e-15);
/// ```
pub fn bernoulli_poly(n: usize, x: f64) -> Result<f64> {
    Ok(bernoulli_coeffs(n)?.eval(x))
}

/// E_n(x), evaluated exactly and rounded once.
pub fn euler_poly(n: usize, x: f64) -> Result<f64> {
    Ok(euler_coeffs(n)?.eval(x))
}

/// B_n at a rational point, exactly.
pub fn bernoulli_poly_exact(n: usize, x: &Q) -> Result<Q> {
    Ok(bernoulli_coeffs(n)?.eval_exact(x))
}

/// E_n at a rational point, exactly.
pub fn euler_poly_exact(n: usize, x: &Q) -> Result<Q> {
    Ok(euler_coeffs(n)?.eval_exact(x))
}

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ci| acc * x + ci)
}

// Above this order the monomial form loses too much to cancellation on [0,1]
// and the Fourier expansions are used instead.
const FAST_HORNER_MAX: usize = 12;

fn factorial_f64(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// `f64` evaluation of B_n on [0, 1]; outside that range the monomial form is used.
pub fn bernoulli_poly_fast(n: usize, x: f64) -> f64 {
    let (bt, _) = f64_tables();
    if n <= FAST_HORNER_MAX || !(0.0..=1.0).contains(&x) {
        return horner(&bt[n.min(BERNOULLI_CACHE)], x);
    }
    // B_n(x) = -2 n! / (2 pi)^n sum_k cos(2 pi k x - n pi / 2) / k^n
    let lead = -2.0 * factorial_f64(n) / (2.0 * PI).powi(n as i32);
    let phase = (n % 4) as f64 * PI / 2.0;
    let mut s = 0.0;
    for k in 1..64 {
        let w = (k as f64).powi(-(n as i32));
        s += w * (2.0 * PI * k as f64 * x - phase).cos();
        if w < 1e-18 {
            break;
        }
    }
    lead * s
}

/// `f64` evaluation of E_n on [0, 1]; outside that range the monomial form is used.
pub fn euler_poly_fast(n: usize, x: f64) -> f64 {
    let (_, et) = f64_tables();
    if n <= FAST_HORNER_MAX || !(0.0..=1.0).contains(&x) {
        return horner(&et[n.min(MAX_ORDER)], x);
    }
    // E_n(x) = 4 n! / pi^{n+1} sum_k sin((2k+1) pi x - n pi / 2) / (2k+1)^{n+1}
    let lead = 4.0 * factorial_f64(n) / PI.powi(n as i32 + 1);
    let phase = (n % 4) as f64 * PI / 2.0;
    let mut s = 0.0;
    for k in 0..64 {
        let m = (2 * k + 1) as f64;
        let w = m.powi(-(n as i32 + 1));
        s += w * (m * PI * x - phase).sin();
        if w < 1e-18 {
            break;
        }
    }
    lead * s
}

/// Splits `x` into an integer part and a fractional part in [0, 1).
fn floor_frac(x: f64) -> (f64, f64) {
    let fl = x.floor();
    let mut fr = x - fl;
    if fr >= 1.0 {
        fr = 0.0;
    }
    (fl, fr)
}

fn euler_sign(fl: f64) -> f64 {
    if fl.rem_euclid(2.0) == 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// Evaluates the spline `b_n(x) = B_n({x})` or `e_n(x)`, exactly then rounded.
///
/// ```
/// use mathieu_core::polyfun::{spline_eval, SplineKind};
/// assert_eq!(spline_eval(SplineKind::bernoulli(1), 2.25).unwrap(), -0.25);
/// assert_eq!(spline_eval(SplineKind::euler(0), 1.5).unwrap(), -1.0);
/// ```
pub fn spline_eval(s: SplineKind, x: f64) -> Result<f64> {
    let (fl, fr) = floor_frac(x);
    match s.kind {
        SplineFamily::Bernoulli => bernoulli_poly(s.order, fr),
        SplineFamily::Euler => Ok(euler_sign(fl) * euler_poly(s.order, fr)?),
    }
}

/// `f64` spline evaluation for quadrature loops (no order check beyond the cache).
pub fn spline_eval_fast(s: SplineKind, x: f64) -> f64 {
    let (fl, fr) = floor_frac(x);
    match s.kind {
        SplineFamily::Bernoulli => bernoulli_poly_fast(s.order, fr),
        SplineFamily::Euler => euler_sign(fl) * euler_poly_fast(s.order, fr),
    }
}

fn spline_sup_cache() -> &'static [[OnceLock<f64>; MAX_ORDER + 1]; 2] {
    static CACHE: [[OnceLock<f64>; MAX_ORDER + 1]; 2] =
        [const { [const { OnceLock::new() }; MAX_ORDER + 1] }; 2];
    &CACHE
}

/// Certified upper bound on sup |b_n| over a period ([0,1]) or sup |e_n| over [0,2].
///
/// Since `e_n(x + 1) = -e_n(x)`, the Euler case reduces to sup |E_n| on [0,1].
pub fn spline_sup(s: SplineKind) -> Result<f64> {
    check_order(s.order, MAX_ORDER)?;
    let (slot, poly) = match s.kind {
        SplineFamily::Bernoulli => (0, &bernoulli_table()[s.order]),
        SplineFamily::Euler => (1, &euler_table()[s.order]),
    };
    Ok(*spline_sup_cache()[slot][s.order]
        .get_or_init(|| isolate::certified_sup(poly, &Q::zero(), &Q::one())))
}

/// Certified upper bound on sup |B_n| or sup |E_n| over `[a, b]`.
pub fn poly_sup(n: usize, kind: SplineFamily, a: f64, b: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite()) || a > b {
        return Err(Error::Domain(format!("poly_sup needs a bounded interval, got [{a}, {b}]")));
    }
    let poly = match kind {
        SplineFamily::Bernoulli => bernoulli_coeffs(n)?,
        SplineFamily::Euler => euler_coeffs(n)?,
    };
    let qa = Q::from_float(a).expect("finite");
    let qb = Q::from_float(b).expect("finite");
    Ok(isolate::certified_sup(poly, &qa, &qb))
}

/// Exact rational from a finite `f64`.
pub fn rational_from_f64(x: f64) -> Result<Q> {
    Q::from_float(x).ok_or_else(|| Error::Domain(format!("non-finite value {x}")))
}

/// True when `x` is a nonnegative integer value.
pub(crate) fn is_nonneg_int(x: f64) -> bool {
    x >= 0.0 && x.fract() == 0.0 && x < 1e15
}

#[allow(dead_code)]
pub(crate) fn q_abs_f64(q: &Q) -> f64 {
    to_f64(&q.abs())
}
