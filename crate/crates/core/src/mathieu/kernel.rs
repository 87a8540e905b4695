//! The kernel `g(x) = x^γ (x^α + 1)^(-μ-1)`: values, jets, smoothness at 0,
//! total variation, the tail integral `F(t) = ∫_t^∞ g` and sign regions of
//! its derivatives.

use super::MathieuParams;
use crate::emsum::{default_variation, SmoothFunction};
use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::polyfun::{beta_fn, is_nonneg_int, rising_ratio, MAX_ORDER};
use serde::{Deserialize, Serialize};

/// Number of initial derivatives listed when `g` is analytic at 0.
pub const SMOOTHNESS_CAP: usize = 16;

fn factorial(n: usize) -> f64 {
    (2..=n).fold(1.0, |a, k| a * k as f64)
}

/// `g(x)`; for `x < 0` only in the integer regime.
pub fn g_eval(p: &MathieuParams, x: f64) -> f64 {
    let MathieuParams { gamma, alpha, mu, .. } = *p;
    if x < 0.0 {
        if !p.integer_regime() {
            return f64::NAN;
        }
        let base = x.powi(alpha as i32) + 1.0;
        return x.powi(gamma as i32) * base.powf(-mu - 1.0);
    }
    if x < 1e30 {
        let num = if gamma == 0.0 { 1.0 } else { x.powf(gamma) };
        let v = num * (x.powf(alpha) + 1.0).powf(-mu - 1.0);
        if v.is_finite() {
            return v;
        }
    }
    let lx = x.ln();
    (gamma * lx - (mu + 1.0) * (alpha * lx + (-alpha * lx).exp().ln_1p())).exp()
}

/// Taylor jet of `g` at `x` up to `order`.
///
/// At `x = 0` outside the integer regime only orders up to the smoothness
/// `r` are available.
pub fn g_jet(p: &MathieuParams, x: f64, order: usize) -> Result<Jet> {
    let MathieuParams { gamma, alpha, mu, .. } = *p;
    let neg_mu1 = -mu - 1.0;
    if p.integer_regime() {
        let a = alpha as i32;
        if a % 2 == 1 && x <= -1.0 {
            return Err(Error::Domain(format!("g is undefined at x = {x} for odd alpha")));
        }
        let xv = Jet::variable(x, order);
        let inner = xv.powi(a).add_scalar(1.0);
        let pw = if neg_mu1.fract() == 0.0 && neg_mu1.abs() < 1e6 {
            inner.powi(neg_mu1 as i32)
        } else {
            inner.powf(neg_mu1)
        };
        return Ok(if gamma == 0.0 { pw } else { &xv.powi(gamma as i32) * &pw });
    }
    if x < 0.0 {
        return Err(Error::Domain(format!("g is only defined for x ≥ 0 here, got {x}")));
    }
    if x == 0.0 {
        let r = match g_smoothness(p).r {
            Smoothness::Finite(r) => r,
            Smoothness::Infinite => unreachable!("handled by the integer regime"),
        };
        if order > r {
            return Err(Error::Smoothness {
                requested: order,
                smoothness: r,
            });
        }
        let mut c = vec![0.0; order + 1];
        if is_nonneg_int(gamma) && (gamma as usize) <= order {
            c[gamma as usize] = 1.0;
        }
        return Ok(Jet::from_coeffs(c));
    }
    let xv = Jet::variable(x, order);
    let num = if gamma == 0.0 {
        Jet::constant(1.0, order)
    } else if is_nonneg_int(gamma) {
        xv.powi(gamma as i32)
    } else {
        xv.powf(gamma)
    };
    Ok(&num * &xv.powf(alpha).add_scalar(1.0).powf(neg_mu1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Smoothness {
    Finite(usize),
    Infinite,
}

impl Smoothness {
    pub fn allows(&self, k: usize) -> bool {
        match self {
            Smoothness::Finite(r) => k <= *r,
            Smoothness::Infinite => true,
        }
    }
}

/// Smoothness `r` of `g` at 0 (`g^(r)` absolutely continuous) and the
/// derivatives `g^(p)(0)` for `p ≤ min(r, SMOOTHNESS_CAP)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmoothnessProfile {
    pub r: Smoothness,
    pub initial_derivs: Vec<(usize, f64)>,
}

pub fn g_smoothness(p: &MathieuParams) -> SmoothnessProfile {
    let MathieuParams { gamma, alpha, mu, .. } = *p;
    if !is_nonneg_int(gamma) {
        let r = gamma.floor() as usize;
        let cap = r.min(SMOOTHNESS_CAP);
        return SmoothnessProfile {
            r: Smoothness::Finite(r),
            initial_derivs: (0..=cap).map(|k| (k, 0.0)).collect(),
        };
    }
    let g = gamma as usize;
    if !is_nonneg_int(alpha) {
        let r = g + alpha.floor() as usize;
        let cap = r.min(SMOOTHNESS_CAP);
        let d = (0..=cap)
            .map(|k| (k, if k == g { factorial(g) } else { 0.0 }))
            .collect();
        return SmoothnessProfile {
            r: Smoothness::Finite(r),
            initial_derivs: d,
        };
    }
    let a = alpha as usize;
    let d = (0..=SMOOTHNESS_CAP)
        .map(|k| {
            let v = if k >= g && (k - g) % a == 0 {
                let j = (k - g) / a;
                let s = if j % 2 == 0 { 1.0 } else { -1.0 };
                s * rising_ratio(mu, j) * factorial(k)
            } else {
                0.0
            };
            (k, v)
        })
        .collect();
    SmoothnessProfile {
        r: Smoothness::Infinite,
        initial_derivs: d,
    }
}

/// `V_0^∞(g)`: 1 when `γ = 0`, otherwise `2 g(x0)` at the maximizer
/// `x0 = (γ/δ)^(1/α)`.
pub fn g_total_variation(p: &MathieuParams) -> Result<f64> {
    let delta = p.delta();
    if delta <= 0.0 {
        return Err(Error::Delta { bound: 0.0, delta });
    }
    if p.gamma == 0.0 {
        return Ok(1.0);
    }
    let x0 = (p.gamma / delta).powf(1.0 / p.alpha);
    Ok(2.0 * g_eval(p, x0))
}

/// `ln(1 + e^z)` without overflow.
fn softplus(z: f64) -> f64 {
    if z > 35.0 {
        z + (-z).exp()
    } else if z < -35.0 {
        z.exp()
    } else {
        z.exp().ln_1p()
    }
}

/// Modified Lentz evaluation of the incomplete beta continued fraction.
fn beta_cf(a: f64, b: f64, x: f64) -> Result<f64> {
    const TINY: f64 = 1e-300;
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..20000 {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            return Ok(h);
        }
    }
    Err(Error::Quadrature(format!(
        "incomplete beta continued fraction did not converge (a = {a}, b = {b}, x = {x})"
    )))
}

/// `B_x(a, b)` given `x`, `1 - x` and their logarithms separately so that
/// either can be tiny without cancellation.
fn inc_beta_parts(a: f64, b: f64, x: f64, y: f64, lnx: f64, lny: f64) -> Result<f64> {
    if x <= 0.0 {
        return Ok(0.0);
    }
    if y <= 0.0 {
        return beta_fn(a, b);
    }
    let front = (a * lnx + b * lny).exp();
    if x < (a + 1.0) / (a + b + 2.0) {
        Ok(front * beta_cf(a, b, x)? / a)
    } else {
        Ok(beta_fn(a, b)? - front * beta_cf(b, a, y)? / b)
    }
}

/// Lower incomplete beta integral `B_x(a, b) = ∫_0^x s^(a-1) (1-s)^(b-1) ds`.
pub fn incomplete_beta(a: f64, b: f64, x: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::Domain(format!("incomplete beta needs a, b > 0, got ({a}, {b})")));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("incomplete beta needs 0 ≤ x ≤ 1, got {x}")));
    }
    let y = 1.0 - x;
    inc_beta_parts(a, b, x, y, x.ln(), (-x).ln_1p())
}

/// `F(t) = ∫_t^∞ g(x) dx` through `s = 1/(x^α + 1)`, which turns it into
/// `(1/α) B_s(a, b)` with `a = (δ-1)/α`, `b = (γ+1)/α`.
pub fn tail_integral(p: &MathieuParams, t: f64) -> Result<f64> {
    let delta = p.delta();
    if delta <= 1.0 {
        return Err(Error::Divergence(format!(
            "∫ g diverges at infinity for delta = {delta} ≤ 1"
        )));
    }
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("tail integral needs t ≥ 0, got {t}")));
    }
    let a = (delta - 1.0) / p.alpha;
    let b = (p.gamma + 1.0) / p.alpha;
    if t == 0.0 {
        return Ok(beta_fn(a, b)? / p.alpha);
    }
    let l = p.alpha * t.ln();
    let lns = -softplus(l);
    let lny = -softplus(-l);
    Ok(inc_beta_parts(a, b, lns.exp(), lny.exp(), lns, lny)? / p.alpha)
}

/// Coefficients (in `y = x^α`) of the polynomials `P_j` with
/// `g^(j)(x) = g(x) x^(-j) (1+y)^(-j) P_j(y)`.
pub(crate) fn derivative_sign_polys(p: &MathieuParams, jmax: usize) -> Vec<Vec<f64>> {
    let (gamma, alpha, delta) = (p.gamma, p.alpha, p.delta());
    let mut out = vec![vec![1.0]];
    for j in 0..jmax {
        let pj = &out[j];
        let jf = j as f64;
        let mut next = vec![0.0; pj.len() + 1];
        for (i, &c) in pj.iter().enumerate() {
            // (γ - j - (δ + j + jα) y) P_j
            next[i] += (gamma - jf) * c;
            next[i + 1] -= (delta + jf + jf * alpha) * c;
            // α y (1 + y) P_j'
            if i > 0 {
                let d = i as f64 * c * alpha;
                next[i] += d;
                next[i + 1] += d;
            }
        }
        out.push(next);
    }
    out
}

/// Fujiwara bound on the moduli of the roots.
fn root_bound(c: &[f64]) -> f64 {
    let d = c.len() - 1;
    let lead = c[d].abs();
    let mut m: f64 = 0.0;
    for i in 0..d {
        let k = (d - i) as f64;
        let mut r = c[i].abs() / lead;
        if i == 0 {
            r *= 0.5;
        }
        m = m.max(r.powf(1.0 / k));
    }
    2.0 * m
}

/// `x*` such that `(-1)^j g^(j)(x) > 0` for all `1 ≤ j ≤ jmax` and `x > x*`.
pub(crate) fn monotone_threshold(p: &MathieuParams, jmax: usize) -> f64 {
    let polys = derivative_sign_polys(p, jmax);
    let y = polys
        .iter()
        .skip(1)
        .map(|c| root_bound(c))
        .fold(0.0, f64::max);
    if y == 0.0 {
        0.0
    } else {
        (y * (1.0 + 1e-9)).powf(1.0 / p.alpha)
    }
}

/// `g` as a summand for the summation engines; `sum_{k≥1} g((k+u)/t)`
/// equals `t^δ S / 2`.
#[derive(Debug, Clone)]
pub struct GKernel {
    params: MathieuParams,
    smoothness: Smoothness,
    thresholds: Vec<f64>,
}

impl GKernel {
    pub fn new(params: MathieuParams) -> Self {
        let polys = derivative_sign_polys(&params, MAX_ORDER + 2);
        let mut thresholds = vec![0.0];
        let mut best: f64 = 0.0;
        for c in polys.iter().skip(1) {
            best = best.max(root_bound(c));
            thresholds.push(if best == 0.0 {
                0.0
            } else {
                (best * (1.0 + 1e-9)).powf(1.0 / params.alpha)
            });
        }
        GKernel {
            smoothness: g_smoothness(&params).r,
            params,
            thresholds,
        }
    }

    pub fn params(&self) -> &MathieuParams {
        &self.params
    }
}

impl SmoothFunction for GKernel {
    fn deriv(&self, k: usize, x: f64) -> f64 {
        g_jet(&self.params, x, k)
            .map(|j| j.derivative(k))
            .unwrap_or(f64::NAN)
    }

    fn eval(&self, x: f64) -> f64 {
        g_eval(&self.params, x)
    }

    fn derivs(&self, x: f64, order: usize) -> Result<Vec<f64>> {
        Ok(g_jet(&self.params, x, order)?.derivatives())
    }

    fn max_order(&self) -> usize {
        match self.smoothness {
            Smoothness::Finite(r) => r.min(MAX_ORDER),
            Smoothness::Infinite => MAX_ORDER,
        }
    }

    fn domain_left(&self) -> f64 {
        if !self.params.integer_regime() {
            0.0
        } else if (self.params.alpha as i64) % 2 == 0 {
            f64::NEG_INFINITY
        } else {
            -1.0
        }
    }

    fn tail_integral(&self, t: f64) -> Option<f64> {
        tail_integral(&self.params, t).ok()
    }

    fn variation_tail(&self, k: usize, x: f64) -> Option<f64> {
        let thr = *self.thresholds.get(k + 1)?;
        (x >= thr).then(|| self.deriv(k, x).abs())
    }

    /// Beyond the sign threshold of `g^(k+1)` the variation is `|g^(k)(X)|`.
    fn variation(&self, k: usize, a: f64, b: f64) -> Result<f64> {
        if b <= a {
            return Ok(0.0);
        }
        if b.is_finite() {
            return default_variation(self, k, a, b);
        }
        let thr = *self
            .thresholds
            .get(k + 1)
            .ok_or(Error::OrderOverflow { requested: k, max: MAX_ORDER })?;
        let x = a.max(thr);
        Ok(default_variation(self, k, a, x)? + self.deriv(k, x).abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyfun::gamma as gamma_fn;
    use crate::quad::{integrate, integrate_to_inf, tanh_sinh};

    fn mp(gamma: f64, alpha: f64, mu: f64) -> MathieuParams {
        MathieuParams { gamma, alpha, mu, u: 0.0 }
    }

    #[test]
    fn kernel_values() {
        assert_eq!(g_eval(&mp(1.0, 2.0, 1.0), 1.0), 0.25);
        assert_eq!(g_eval(&mp(0.0, 3.7, 2.0), 0.0), 1.0);
        let p = mp(1.5, 2.5, 1.0);
        let x: f64 = 1e40;
        let expect = (1.5 * x.ln() - 2.0 * 2.5 * x.ln()).exp();
        assert!((g_eval(&p, x) / expect - 1.0).abs() < 1e-12);
    }

    #[test]
    fn jet_matches_series_at_small_x() {
        // g(x) = sum (-1)^k rr(μ,k) x^{γ+kα} for 0 ≤ x < 1
        let p = mp(1.0, 2.0, 1.0);
        let x: f64 = 0.1;
        let series: f64 = (0..40)
            .map(|k| {
                let s = if k % 2 == 0 { 1.0 } else { -1.0 };
                s * rising_ratio(1.0, k) * x.powi(1 + 2 * k as i32)
            })
            .sum();
        let j = g_jet(&p, x, 6).unwrap();
        assert!((j.value() - series).abs() < 1e-12);
        // derivative of the series term by term
        let d1: f64 = (0..40)
            .map(|k| {
                let s = if k % 2 == 0 { 1.0 } else { -1.0 };
                let e = 1 + 2 * k as i32;
                s * rising_ratio(1.0, k) * e as f64 * x.powi(e - 1)
            })
            .sum();
        assert!((j.derivative(1) - d1).abs() < 1e-12);
        // the jet at 0 carries the series coefficients in degrees 1 + 2k
        let j0 = g_jet(&p, 0.0, 9).unwrap();
        for (d, c) in j0.coeffs().iter().enumerate() {
            let expect = if d % 2 == 1 {
                let k = (d - 1) / 2;
                (if k % 2 == 0 { 1.0 } else { -1.0 }) * (k as f64 + 1.0)
            } else {
                0.0
            };
            assert!((c - expect).abs() < 1e-13, "degree {d}");
        }
    }

    #[test]
    fn large_x_expansion() {
        // g(x) = sum (-1)^k rr(μ,k) x^{-δ-kα} for x > 1
        let p = mp(0.5, 1.5, 0.7);
        let delta = p.delta();
        let x: f64 = 4.0;
        let s: f64 = (0..200)
            .map(|k| {
                let sg = if k % 2 == 0 { 1.0 } else { -1.0 };
                sg * rising_ratio(0.7, k) * x.powf(-delta - 1.5 * k as f64)
            })
            .sum();
        assert!((g_eval(&p, x) - s).abs() < 1e-13);
    }

    #[test]
    fn smoothness_cases() {
        let s = g_smoothness(&mp(0.5, 2.0, 1.0));
        assert_eq!(s.r, Smoothness::Finite(0));
        assert!(s.initial_derivs.iter().all(|(_, v)| *v == 0.0));

        let s = g_smoothness(&mp(2.0, 1.5, 2.0));
        assert_eq!(s.r, Smoothness::Finite(3));
        assert_eq!(s.initial_derivs[2], (2, 2.0));
        assert_eq!(s.initial_derivs[3], (3, 0.0));

        let s = g_smoothness(&mp(1.0, 2.0, 1.0));
        assert_eq!(s.r, Smoothness::Infinite);
        for (p, v) in &s.initial_derivs {
            assert_eq!(*v != 0.0, p % 2 == 1, "p = {p}");
        }
        // agrees with the jet
        let j = g_jet(&mp(1.0, 2.0, 1.0), 0.0, SMOOTHNESS_CAP).unwrap().derivatives();
        for (p, v) in &s.initial_derivs {
            assert!((j[*p] - v).abs() <= 1e-9 * v.abs().max(1.0));
        }
    }

    #[test]
    fn jet_at_zero_respects_smoothness() {
        let p = mp(2.0, 1.5, 2.0);
        let j = g_jet(&p, 0.0, 3).unwrap();
        assert_eq!(j.derivative(2), 2.0);
        assert_eq!(
            g_jet(&p, 0.0, 4).unwrap_err(),
            Error::Smoothness { requested: 4, smoothness: 3 }
        );
    }

    #[test]
    fn total_variation_closed_form_and_quadrature() {
        assert_eq!(g_total_variation(&mp(0.0, 2.0, 1.0)).unwrap(), 1.0);
        let v = g_total_variation(&mp(1.0, 2.0, 1.0)).unwrap();
        let expect = 2.0 * (1.0f64 / 3.0).sqrt() * (4.0f64 / 3.0).powi(-2);
        assert!((v - expect).abs() < 1e-15);
        assert!((v - 0.649519).abs() < 1e-6);
        assert!((g_total_variation(&mp(2.0, 2.0, 1.0)).unwrap() - 0.5).abs() < 1e-15);
        for p in [mp(1.0, 2.0, 1.0), mp(2.0, 2.0, 1.0), mp(0.7, 1.3, 0.9)] {
            let k = GKernel::new(p);
            let q = integrate_to_inf(&|x: f64| k.deriv(1, x).abs(), 0.0, 1e-13, 1e-11)
                .unwrap()
                .value;
            let v = g_total_variation(&p).unwrap();
            assert!((q - v).abs() < 1e-8, "{p:?}: {q} vs {v}");
        }
    }

    #[test]
    fn tail_integral_examples() {
        let p = mp(1.0, 2.0, 1.0);
        for &t in &[0.0, 0.3, 1.0, 7.0, 1e3] {
            let f = tail_integral(&p, t).unwrap();
            let e = 0.5 / (t * t + 1.0);
            assert!((f / e - 1.0).abs() < 1e-11, "t={t}");
        }
        let f0 = tail_integral(&mp(0.0, 2.0, 1.0), 0.0).unwrap();
        assert!((f0 - std::f64::consts::FRAC_PI_4).abs() < 1e-13);
        let p = mp(0.0, 1.0, 2.0);
        for &t in &[0.0, 0.5, 3.0, 1e5] {
            let f = tail_integral(&p, t).unwrap();
            let e = 0.5 / (1.0 + t).powi(2);
            assert!((f / e - 1.0).abs() < 1e-11, "t={t}");
        }
        assert!(matches!(
            tail_integral(&mp(1.0, 2.0, 0.0), 1.0),
            Err(Error::Divergence(_))
        ));
    }

    #[test]
    fn tail_integral_against_tanh_sinh() {
        for p in [mp(0.5, 1.5, 1.2), mp(2.3, 3.1, 0.8), mp(0.0, 0.7, 2.5)] {
            for &t in &[0.2, 1.0, 4.0] {
                let f = tail_integral(&p, t).unwrap();
                // x = t + z/(1-z) maps [0,1) onto [t, ∞)
                let q = tanh_sinh(
                    &|z: f64, _, dz: f64| {
                        let x = t + z / dz;
                        g_eval(&p, x) / (dz * dz)
                    },
                    0.0,
                    1.0,
                    1e-15,
                )
                .unwrap()
                .value;
                assert!((f / q - 1.0).abs() < 1e-11, "{p:?} t={t}: {f} vs {q}");
            }
        }
    }

    #[test]
    fn incomplete_beta_values() {
        // B_x(1, 1) = x, B_x(2, 1) = x^2/2, complete value
        assert!((incomplete_beta(1.0, 1.0, 0.3).unwrap() - 0.3).abs() < 1e-15);
        assert!((incomplete_beta(2.0, 1.0, 0.6).unwrap() - 0.18).abs() < 1e-15);
        let full = incomplete_beta(2.5, 1.5, 1.0).unwrap();
        let b = gamma_fn(2.5) * gamma_fn(1.5) / gamma_fn(4.0);
        assert!((full - b).abs() < 1e-13);
        let q = integrate(&|s: f64| s.powf(1.5) * (1.0 - s).sqrt(), 0.0, 0.7, 1e-15, 1e-14)
            .unwrap()
            .value;
        assert!((incomplete_beta(2.5, 1.5, 0.7).unwrap() - q).abs() < 1e-13);
    }

    #[test]
    fn sign_polynomials_match_jets() {
        for p in [mp(1.0, 2.0, 1.0), mp(0.5, 1.5, 0.3), mp(3.0, 2.5, 2.0)] {
            let polys = derivative_sign_polys(&p, 6);
            for &x in &[0.3f64, 1.1, 2.7] {
                let y = x.powf(p.alpha);
                let j = g_jet(&p, x, 6).unwrap().derivatives();
                for (k, c) in polys.iter().enumerate() {
                    let pv: f64 = c.iter().rev().fold(0.0, |a, v| a * y + v);
                    let v = g_eval(&p, x) * x.powi(-(k as i32)) * (1.0 + y).powi(-(k as i32)) * pv;
                    assert!((v - j[k]).abs() < 1e-10 * j[k].abs().max(1.0), "{p:?} k={k}");
                }
            }
            let thr = monotone_threshold(&p, 6);
            for i in 0..50 {
                let x = thr * (1.0 + 0.1 * i as f64) + 1e-9;
                let d = g_jet(&p, x, 6).unwrap().derivatives();
                for (k, v) in d.iter().enumerate().skip(1) {
                    let s = if k % 2 == 0 { 1.0 } else { -1.0 };
                    assert!(s * v > 0.0, "{p:?} k={k} x={x}");
                }
            }
        }
        // classical: g'' changes sign exactly at x = 1
        let thr2 = monotone_threshold(&mp(1.0, 2.0, 1.0), 2);
        assert!(thr2 >= 1.0);
    }

    #[test]
    fn gkernel_variation_is_sound() {
        let k = GKernel::new(mp(1.0, 2.0, 1.0));
        let v = k.variation(0, 0.0, f64::INFINITY).unwrap();
        assert!((v - g_total_variation(&mp(1.0, 2.0, 1.0)).unwrap()).abs() < 1e-9);
        let v3 = k.variation(3, 0.0, f64::INFINITY).unwrap();
        let q = integrate_to_inf(&|x: f64| k.deriv(4, x).abs(), 0.0, 1e-13, 1e-12)
            .unwrap()
            .value;
        assert!((v3 - q).abs() < 1e-7 * q);
    }
}
