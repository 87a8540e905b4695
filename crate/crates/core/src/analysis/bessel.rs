//! Normalized Bessel functions `j_λ(x) = J_λ(x) / x^λ` and the Hankel-type
//! transform `𝔉_m(h)(t) = ∫_0^∞ h(x) x^{m-1} j_{m/2-1}(tx) dx`.

use crate::error::{Error, Result};
use crate::polyfun::gamma;
use crate::quad::{gauss_legendre, tanh_sinh, KahanSum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::sync::OnceLock;

/// Power series below this argument, large-argument expansion above.
pub const BESSEL_SWITCH: f64 = 12.0;

/// Envelope level at which the automatic cutoff truncates.
const TAIL_EPS: f64 = 1e-16;

fn series(lambda: f64, x: f64) -> f64 {
    let q = -0.25 * x * x;
    let mut term = 1.0 / gamma(lambda + 1.0);
    let mut acc = KahanSum::new();
    acc.add(term);
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= q / (k * (k + lambda));
        acc.add(term);
        if k > 0.5 * x && term.abs() <= 1e-18 * acc.value().abs() {
            break;
        }
        if k > 500.0 {
            break;
        }
    }
    acc.value() * (-lambda * std::f64::consts::LN_2).exp()
}

/// Hankel's expansion of `J_λ(x)`; `None` if the terms stall above 1e-10.
fn hankel_asymptotic(lambda: f64, x: f64) -> Option<f64> {
    let m4 = 4.0 * lambda * lambda;
    let (mut p, mut q) = (1.0, 0.0);
    let mut a = 1.0;
    let mut last = f64::INFINITY;
    let mut converged = false;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        a *= (m4 - odd * odd) / (k as f64 * 8.0 * x);
        let mag = a.abs();
        if mag > last && k > 2 {
            break;
        }
        last = mag;
        match k % 4 {
            1 => q += a,
            2 => p -= a,
            3 => q -= a,
            _ => p += a,
        }
        if mag < 1e-17 {
            converged = true;
            break;
        }
    }
    if !converged && last > 1e-10 {
        return None;
    }
    let w = x - (0.5 * lambda + 0.25) * PI;
    Some((2.0 / (PI * x)).sqrt() * (p * w.cos() - q * w.sin()))
}

/// Poisson integral, valid for `λ > -1/2`.
fn poisson(lambda: f64, x: f64) -> f64 {
    let e = lambda - 0.5;
    let f = |s: f64, _d0: f64, d1: f64| (d1 * (1.0 + s)).powf(e) * (x * s).cos();
    let v = tanh_sinh(&f, 0.0, 1.0, 1e-16).map(|r| r.value).unwrap_or(f64::NAN);
    2.0 * v / ((lambda * std::f64::consts::LN_2).exp() * PI.sqrt() * gamma(lambda + 0.5))
}

/// `j_λ(x) = J_λ(x) / x^λ` for `λ > -1`, `x ≥ 0`.
pub fn bessel_j(lambda: f64, x: f64) -> f64 {
    let x = x.abs();
    if x <= BESSEL_SWITCH {
        return series(lambda, x);
    }
    match hankel_asymptotic(lambda, x) {
        Some(j) => j * (-lambda * x.ln()).exp(),
        None if lambda > -0.5 => poisson(lambda, x),
        None => series(lambda, x),
    }
}

/// Transform value with its quadrature error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HankelResult {
    pub value: f64,
    /// Panel discrepancy plus the tail envelope at the cutoff.
    pub error: f64,
    pub cutoff: f64,
    pub panels: usize,
}

fn rules() -> &'static [(Vec<f64>, Vec<f64>); 2] {
    static R: OnceLock<[(Vec<f64>, Vec<f64>); 2]> = OnceLock::new();
    R.get_or_init(|| [gauss_legendre(20), gauss_legendre(10)])
}

fn panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let [(x20, w20), (x10, w10)] = rules();
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    let hi: f64 = x20.iter().zip(w20).map(|(x, w)| w * f(c + h * x)).sum::<f64>() * h;
    let lo: f64 = x10.iter().zip(w10).map(|(x, w)| w * f(c + h * x)).sum::<f64>() * h;
    (hi, (hi - lo).abs())
}

/// First `X ≥ 1` (growing geometrically) with `tail(X) < 1e-16`.
pub fn choose_cutoff(tail: &dyn Fn(f64) -> f64) -> Result<f64> {
    let mut x = 1.0;
    while x < 1e6 {
        if tail(x) < TAIL_EPS {
            return Ok(x);
        }
        x *= 1.25;
    }
    Err(Error::Quadrature("tail envelope never drops below 1e-16".into()))
}

/// Bound `X ↦ scale · ∫_X^∞ x^k e^{-px} dx`, usable as a tail envelope for
/// exponentially decaying integrands (`scale` absorbs `sup |j|` and the
/// constant in front of `h`).
pub fn exp_power_tail(scale: f64, k: f64, p: f64) -> impl Fn(f64) -> f64 {
    move |x: f64| {
        let head = scale * (k * x.ln() - p * x).exp();
        if k <= 0.0 {
            head / p
        } else if p * x > k {
            head / (p - k / x)
        } else {
            f64::INFINITY
        }
    }
}

/// `𝔉_m(h)(t)` by Gauss-Legendre panels of width `min(π/(2t), 1)`.
///
/// `tail(X)` must bound `∫_X^∞ |h(x) x^{m-1} j_{m/2-1}(tx)| dx`; for
/// `m ≥ 1`, `|j_{m/2-1}| ≤ j_{m/2-1}(0)`. Without a cutoff one is chosen
/// where the envelope drops below 1e-16. The first panel is split
/// geometrically towards 0 to absorb algebraic endpoint behaviour.
pub fn hankel_transform<H>(
    h: H,
    m: f64,
    t: f64,
    cutoff: Option<f64>,
    tail: Option<&dyn Fn(f64) -> f64>,
) -> Result<HankelResult>
where
    H: Fn(f64) -> f64 + Sync,
{
    if !(m > 0.0) || !(t >= 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("hankel transform needs m > 0 and t ≥ 0 (m = {m}, t = {t})")));
    }
    let tail = tail.ok_or(Error::TailEnvelopeMissing)?;
    let x_max = match cutoff {
        Some(c) if c > 0.0 && c.is_finite() => c,
        Some(c) => return Err(Error::Domain(format!("cutoff must be positive, got {c}"))),
        None => choose_cutoff(tail)?,
    };
    let lambda = 0.5 * m - 1.0;
    let f = |x: f64| {
        let v = h(x) * x.powf(m - 1.0) * bessel_j(lambda, t * x);
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    let w = if t > 0.0 { (PI / (2.0 * t)).min(1.0) } else { 1.0 }.min(x_max);
    let mut edges: Vec<(f64, f64)> = (0..60)
        .rev()
        .map(|k| (w * 0.5f64.powi(k + 1), w * 0.5f64.powi(k)))
        .collect();
    let n = ((x_max - w) / w).ceil().max(0.0) as usize;
    edges.extend((0..n).map(|i| (w * (i + 1) as f64, (w * (i + 2) as f64).min(x_max))));
    let parts: Vec<(f64, f64)> = edges.par_iter().map(|&(a, b)| panel(&f, a, b)).collect();
    let mut acc = KahanSum::new();
    let mut err = 0.0;
    for (v, e) in &parts {
        acc.add(*v);
        err += e;
    }
    // the neglected sliver [0, w 2^-60]
    let eps = w * 0.5f64.powi(60);
    err += (f(eps) * eps).abs() + tail(x_max).abs() + 4.0 * f64::EPSILON * acc.abs_total();
    Ok(HankelResult {
        value: acc.value(),
        error: err,
        cutoff: x_max,
        panels: edges.len(),
    })
}
