//! Direct summation with two-sided tail brackets, the dispatcher, and a
//! few closely related series.
//!
//! Tails of `S` use the Hermite-Hadamard inequalities on the region where
//! the summand is convex; tails of `S~` use an Euler transform of order
//! [`EULER_ORDER`] on the region where the summand's derivatives alternate
//! in sign. Both regions come from the sign polynomials of `g^(j)`.

use super::asym::max_terms_for;
use super::kernel::{monotone_threshold, tail_integral, GKernel};
use super::{asym_s, asym_s_alt, EvalResult, MathieuParams, Method, SeriesKind};
use crate::emsum::{boole_sum, em_sum, AsymptoticSeries};
use crate::error::{Error, Result};
use crate::quad::KahanSum;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

pub const DEFAULT_MAX_TERMS: usize = 100_000_000;

/// Above this `t` the dispatcher tries the expansions first.
pub const AUTO_SWITCH_T: f64 = 20.0;

const EULER_ORDER: usize = 8;
const EPS: f64 = f64::EPSILON;

/// Cap on direct-summation terms, from `MATHIEU_MAX_TERMS` when set.
pub fn max_terms() -> usize {
    std::env::var("MATHIEU_MAX_TERMS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or(DEFAULT_MAX_TERMS)
}

/// `x^γ (x^α + t^α)^(-μ-1)` for `x > 0`.
fn term(p: &MathieuParams, x: f64, t: f64) -> f64 {
    let xa = x.powf(p.alpha);
    let ta = if t == 0.0 { 0.0 } else { t.powf(p.alpha) };
    let base = xa + ta;
    if base.is_finite() && base > 1e-300 {
        let num = if p.gamma == 0.0 { 1.0 } else { x.powf(p.gamma) };
        let v = num * base.powf(-p.mu - 1.0);
        if v.is_finite() && v > 0.0 {
            return v;
        }
    }
    ln_term(p, x, t).exp()
}

fn ln_term(p: &MathieuParams, x: f64, t: f64) -> f64 {
    let lx = p.alpha * x.ln();
    let lb = if t == 0.0 {
        lx
    } else {
        let lt = p.alpha * t.ln();
        let (hi, lo) = if lx > lt { (lx, lt) } else { (lt, lx) };
        hi + (lo - hi).exp().ln_1p()
    };
    p.gamma * x.ln() - (p.mu + 1.0) * lb
}

/// `e^ls` times a term; stays in log space when `ls != 0`.
fn term_scaled(p: &MathieuParams, x: f64, t: f64, ls: f64) -> f64 {
    if ls == 0.0 {
        term(p, x, t)
    } else {
        (ln_term(p, x, t) + ls).exp()
    }
}

/// Relative error of one computed term.
fn term_rel_err(p: &MathieuParams) -> f64 {
    8.0 * EPS * (2.0 + (p.mu + 1.0).abs() + p.gamma)
}

/// `e^ls ∫_X^∞ x^γ (x^α + t^α)^(-μ-1) dx` and its relative error.
fn tail_int(p: &MathieuParams, x: f64, t: f64, ls: f64) -> Result<(f64, f64)> {
    let delta = p.delta();
    if t == 0.0 {
        return Ok((((1.0 - delta) * x.ln() + ls).exp() / (delta - 1.0), 8.0 * EPS));
    }
    let f = tail_integral(p, x / t)?;
    Ok((((1.0 - delta) * t.ln() + ls).exp() * f, 1e-12))
}

fn check_args(t: f64, tol: f64) -> Result<()> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("t must be finite and nonnegative, got {t}")));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tol must be positive, got {tol}")));
    }
    Ok(())
}

/// Direct evaluation of `S(t)`; `tol` is relative to the value.
pub fn eval_s(p: &MathieuParams, t: f64, tol: f64) -> Result<EvalResult> {
    eval_s_with(p, t, tol, max_terms())
}

pub fn eval_s_with(p: &MathieuParams, t: f64, tol: f64, cap: usize) -> Result<EvalResult> {
    eval_s_impl(p, t, tol, cap, 0.0)
}

/// `e^ln_scale S(t)`, for values that would under- or overflow unscaled.
pub fn eval_s_scaled(p: &MathieuParams, t: f64, tol: f64, ln_scale: f64) -> Result<EvalResult> {
    if !ln_scale.is_finite() {
        return Err(Error::Domain(format!("ln_scale must be finite, got {ln_scale}")));
    }
    eval_s_impl(p, t, tol, max_terms(), ln_scale)
}

fn eval_s_impl(p: &MathieuParams, t: f64, tol: f64, cap: usize, ls: f64) -> Result<EvalResult> {
    p.validate(SeriesKind::Plain)?;
    check_args(t, tol)?;
    let u = p.u;
    let x_conv = if t > 0.0 { t * monotone_threshold(p, 2) } else { 0.0 };
    // convexity is needed from N + 1/2 + u on
    let n_min = (x_conv - u - 0.5).ceil().max(1.0);
    if n_min > cap as f64 {
        return Err(Error::ToleranceUnachievable { tol, cap });
    }
    let mut n = (n_min as usize).max(32).min(cap);
    let rel = term_rel_err(p);
    let mut acc = KahanSum::new();
    let mut k = 0usize;
    loop {
        while k < n {
            k += 1;
            acc.add(term_scaled(p, k as f64 + u, t, ls));
        }
        let nf = n as f64;
        let (hi, ehi) = tail_int(p, nf + 0.5 + u, t, ls)?;
        let (lo_int, elo) = tail_int(p, nf + 1.0 + u, t, ls)?;
        let lo = lo_int + 0.5 * term_scaled(p, nf + 1.0 + u, t, ls);
        let partial = acc.value();
        let tail = 0.5 * (hi + lo);
        let half = 0.5 * (hi - lo).max(0.0);
        let value = 2.0 * (partial + tail);
        let round = 2.0 * ((rel + 2.0 * EPS) * acc.abs_total() + ehi * hi + elo * lo + rel * lo);
        if 2.0 * half <= (tol * value.abs()).max(round) || n >= cap {
            if 2.0 * half > tol * value.abs() && 2.0 * half > round {
                return Err(Error::ToleranceUnachievable { tol, cap });
            }
            let err = 2.0 * half + round;
            return Ok(EvalResult {
                value,
                err_lo: err,
                err_hi: err,
                method: Method::Direct,
                terms_used: n,
                rigorous: true,
                experimental: p.experimental(),
            });
        }
        n = n.saturating_mul(2).min(cap);
    }
}

/// Direct evaluation of `S~(t)`.
pub fn eval_s_alt(p: &MathieuParams, t: f64, tol: f64) -> Result<EvalResult> {
    eval_s_alt_with(p, t, tol, max_terms())
}

pub fn eval_s_alt_with(p: &MathieuParams, t: f64, tol: f64, cap: usize) -> Result<EvalResult> {
    p.validate(SeriesKind::Alternating)?;
    check_args(t, tol)?;
    let u = p.u;
    let m = EULER_ORDER;
    let x_c = if t > 0.0 { t * monotone_threshold(p, m + 1) } else { 0.0 };
    let n_min = (x_c - u - 1.0).ceil().max(1.0);
    if n_min > cap as f64 {
        return Err(Error::ToleranceUnachievable { tol, cap });
    }
    let mut n = (n_min as usize).max(16).min(cap);
    let rel = term_rel_err(p);
    let mut acc = KahanSum::new();
    let mut k = 0usize;
    loop {
        while k < n {
            k += 1;
            let v = term(p, k as f64 + u, t);
            acc.add(if k % 2 == 1 { v } else { -v });
        }
        // a_i = h(N+1+i); Euler transform of sum (-1)^i a_i
        let mut d: Vec<f64> = (0..=m + 1).map(|i| term(p, (n + 1 + i) as f64 + u, t)).collect();
        let a0 = d[0];
        let mut diffs = Vec::with_capacity(m + 2);
        for _ in 0..=m + 1 {
            diffs.push(d[0]);
            d = d.windows(2).map(|w| w[0] - w[1]).collect();
        }
        let mut est = KahanSum::new();
        let mut scale = 0.5;
        for dj in diffs.iter().take(m) {
            est.add(dj * scale);
            scale *= 0.5;
        }
        // remaining alternating sum of Δ^m a lies in [Δ^{m+1} a_0, Δ^m a_0] / 2^m
        let top = diffs[m] * 2.0 * scale;
        let bot = diffs[m + 1] * 2.0 * scale;
        est.add(0.5 * (top + bot));
        let half = 0.5 * (top - bot).max(0.0);
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let value = 2.0 * (acc.value() + sign * est.value());
        let round = 2.0 * ((rel + 2.0 * EPS) * acc.abs_total() + 8.0 * (m as f64 + 2.0) * (EPS + rel) * a0);
        if 2.0 * half <= (tol * value.abs()).max(round) || n >= cap {
            if 2.0 * half > tol * value.abs() && 2.0 * half > round {
                return Err(Error::ToleranceUnachievable { tol, cap });
            }
            let err = 2.0 * half + round;
            return Ok(EvalResult {
                value,
                err_lo: err,
                err_hi: err,
                method: Method::Direct,
                terms_used: n,
                rigorous: true,
                experimental: p.experimental(),
            });
        }
        n = n.saturating_mul(2).min(cap);
    }
}

/// `S_μ(t, u) = sum_{k≥1, k≠-u} 2(k+u) / ((k+u)^2 + t^2)^(μ+1)` for any real `u`.
pub fn s_mu(mu: f64, t: f64, u: f64, tol: f64) -> Result<EvalResult> {
    if u > -1.0 {
        return eval_s(&MathieuParams::classical(mu, u), t, tol);
    }
    // peel off the first m terms so that the shifted offset lies in (-1, 0]
    let m = (-1.0 - u).floor() as usize + 1;
    let shifted = MathieuParams::classical(mu, u + m as f64);
    let mut r = eval_s(&shifted, t, tol)?;
    let mut head = KahanSum::new();
    for k in 1..=m {
        let x = k as f64 + u;
        if x != 0.0 {
            head.add(2.0 * x / (x * x + t * t).powf(mu + 1.0));
        }
    }
    r.value += head.value();
    let e = 8.0 * EPS * (2.0 + mu.abs()) * head.abs_total();
    r.err_lo += e;
    r.err_hi += e;
    Ok(r)
}

/// `ln φ_u(x)` with `φ_u(x) = x sum_{k≥1} 2(k+u) e^{-(k+u)^2 x}`, factoring
/// out the first term so large `x` does not underflow.
pub fn ln_phi_u(u: f64, x: f64) -> Result<f64> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::Domain(format!("phi needs x > 0, got {x}")));
    }
    if !(u > -1.0) {
        return Err(Error::Domain(format!("phi needs u > -1, got {u}")));
    }
    let x1 = 1.0 + u;
    let lead = (2.0 * x1 * x).ln() - x1 * x1 * x;
    let peak = 1.0 / (2.0 * x).sqrt();
    let mut rest = KahanSum::new();
    rest.add(1.0);
    let mut k = 2usize;
    loop {
        let y = k as f64 + u;
        let e = (y * y - x1 * x1) * x;
        let v = y / x1 * (-e).exp();
        rest.add(v);
        if y > peak {
            // tail beyond y, relative to the first term
            let tail = (-e).exp() / (2.0 * x * x1);
            if tail <= 1e-17 * rest.value() {
                break;
            }
        }
        k += 1;
        if k > 500_000_000 {
            return Err(Error::ToleranceUnachievable { tol: 1e-17, cap: k });
        }
    }
    Ok(lead + rest.value().ln())
}

pub fn phi_u(u: f64, x: f64) -> Result<f64> {
    Ok(ln_phi_u(u, x)?.exp())
}

/// `sum_{k≥1} 2/(k^2+t^2) = π/t - 1/t^2 + 2π/(t(e^{2πt}-1))`.
pub fn poisson_closed_form(t: f64) -> f64 {
    PI / t - 1.0 / (t * t) + 2.0 * PI / (t * (2.0 * PI * t).exp_m1())
}

/// `sum_{k≥1} (-1)^(k-1) 2/(k^2+t^2) = 1/t^2 - π/(t sinh(πt))`.
pub fn poisson_closed_form_alt(t: f64) -> f64 {
    1.0 / (t * t) - PI / (t * (PI * t).sinh())
}

fn is_poisson_case(p: &MathieuParams) -> bool {
    p.gamma == 0.0 && p.alpha == 2.0 && p.mu == 0.0 && p.u == 0.0
}

fn closed_form_result(p: &MathieuParams, t: f64, alternating: bool) -> EvalResult {
    let (value, mag) = if alternating {
        let b = PI / (t * (PI * t).sinh());
        (poisson_closed_form_alt(t), 1.0 / (t * t) + b)
    } else {
        let c = 2.0 * PI / (t * (2.0 * PI * t).exp_m1());
        (poisson_closed_form(t), PI / t + 1.0 / (t * t) + c)
    };
    let err = 16.0 * EPS * mag;
    EvalResult {
        value,
        err_lo: err,
        err_hi: err,
        method: Method::ClosedForm,
        terms_used: 0,
        rigorous: true,
        experimental: p.experimental(),
    }
}

/// Sums the expansion while terms shrink; stops at the first nonzero term
/// below `tol |value|`, reporting that term's size as the error.
fn asym_eval(series: &AsymptoticSeries, t: f64, tol: f64, p: &MathieuParams) -> Option<EvalResult> {
    let mut acc = KahanSum::new();
    for l in &series.leading {
        acc.add(l.coeff * t.powf(l.power));
    }
    let mut last = f64::INFINITY;
    for (i, term) in series.terms.iter().enumerate() {
        let v = term.coeff * t.powf(term.power);
        if v == 0.0 {
            continue;
        }
        if v.abs() <= tol * acc.value().abs() {
            let err = v.abs() + 4.0 * EPS * acc.abs_total();
            return Some(EvalResult {
                value: acc.value(),
                err_lo: err,
                err_hi: err,
                method: Method::Asymptotic,
                terms_used: i,
                rigorous: false,
                experimental: p.experimental(),
            });
        }
        if v.abs() > last {
            return None;
        }
        last = v.abs();
        acc.add(v);
    }
    None
}

/// `S` (or `S~`) from the summation engines applied to `g` with `eps = 1/t`.
fn em_eval(p: &MathieuParams, t: f64, tol: f64, alternating: bool) -> Option<EvalResult> {
    if t <= 0.0 {
        return None;
    }
    let g = GKernel::new(*p);
    use crate::emsum::SmoothFunction;
    let top = g.max_order();
    let scale = 2.0 * (-p.delta() * t.ln()).exp();
    for n in [1usize, 2, 4, 6, 8, 12, 16, 20] {
        if n > top {
            break;
        }
        let r = if alternating {
            boole_sum(&g, 1.0 / t, p.u, n)
        } else {
            em_sum(&g, 1.0 / t, p.u, n)
        };
        let Ok(r) = r else { continue };
        if !r.remainder_bound.is_finite() {
            continue;
        }
        let res = EvalResult {
            value: scale * r.sum_estimate,
            err_lo: scale * r.remainder_bound,
            err_hi: scale * r.remainder_bound,
            method: Method::EulerMaclaurin,
            terms_used: n,
            rigorous: true,
            experimental: p.experimental(),
        };
        if r.remainder_bound <= tol * r.sum_estimate.abs() {
            return Some(res);
        }
    }
    None
}

fn large_t_eval(p: &MathieuParams, t: f64, tol: f64, alternating: bool) -> Result<Option<EvalResult>> {
    if p.integer_regime() {
        let n = max_terms_for(p, alternating);
        let series = if alternating { asym_s_alt(p, n)? } else { asym_s(p, n)? };
        if let Some(r) = asym_eval(&series, t, tol, p) {
            return Ok(Some(r));
        }
    }
    Ok(em_eval(p, t, tol, alternating))
}

/// Regime dispatcher for `S`: closed form when available, direct summation
/// for `t ≤ AUTO_SWITCH_T`, otherwise the expansion or the summation engine,
/// falling back to direct summation.
pub fn eval_auto(p: &MathieuParams, t: f64, tol: f64) -> Result<EvalResult> {
    p.validate(SeriesKind::Plain)?;
    check_args(t, tol)?;
    if is_poisson_case(p) && t > 0.0 {
        return Ok(closed_form_result(p, t, false));
    }
    if t > AUTO_SWITCH_T {
        if let Some(r) = large_t_eval(p, t, tol, false)? {
            return Ok(r);
        }
    }
    eval_s(p, t, tol)
}

pub fn eval_auto_alt(p: &MathieuParams, t: f64, tol: f64) -> Result<EvalResult> {
    p.validate(SeriesKind::Alternating)?;
    check_args(t, tol)?;
    if is_poisson_case(p) && t > 0.0 {
        return Ok(closed_form_result(p, t, true));
    }
    if t > AUTO_SWITCH_T {
        if let Some(r) = large_t_eval(p, t, tol, true)? {
            return Ok(r);
        }
    }
    eval_s_alt(p, t, tol)
}

/// Direct summation next to the large-`t` method, for cross-validation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossCheck {
    pub direct: EvalResult,
    pub other: Option<EvalResult>,
    /// True when the brackets overlap (or there is nothing to compare).
    pub overlap: bool,
}

pub fn eval_cross(p: &MathieuParams, t: f64, tol: f64, alternating: bool) -> Result<CrossCheck> {
    let direct = if alternating {
        eval_s_alt(p, t, tol)?
    } else {
        eval_s(p, t, tol)?
    };
    let other = large_t_eval(p, t, tol, alternating)?;
    let overlap = other.map(|o| o.overlaps(&direct)).unwrap_or(true);
    Ok(CrossCheck {
        direct,
        other,
        overlap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(p: &MathieuParams, t: f64, n: usize, alt: bool) -> f64 {
        let mut acc = KahanSum::new();
        for k in 1..=n {
            let x = k as f64 + p.u;
            let v = 2.0 * x.powf(p.gamma) / (x.powf(p.alpha) + t.powf(p.alpha)).powf(p.mu + 1.0);
            acc.add(if alt && k % 2 == 0 { -v } else { v });
        }
        acc.value()
    }

    #[test]
    fn two_zeta_three() {
        let r = eval_s(&MathieuParams::classical(1.0, 0.0), 0.0, 1e-14).unwrap();
        let z3 = 1.202_056_903_159_594_3;
        assert!((r.value - 2.0 * z3).abs() < 1e-14);
        assert!((r.value - 2.0 * z3).abs() <= r.err_hi);
    }

    #[test]
    fn poisson_forms() {
        let p = MathieuParams { gamma: 0.0, alpha: 2.0, mu: 0.0, u: 0.0 };
        // 50-digit reference values
        assert!((poisson_closed_form(1.0) - 2.153_348_094_937_162_3).abs() < 1e-14);
        assert!((poisson_closed_form_alt(1.0) - 0.727_970_945_017_866_8).abs() < 1e-14);
        for &t in &[0.5, 1.0, 2.0, 5.0, 10.0] {
            let r = eval_s(&p, t, 1e-14).unwrap();
            assert!((r.value / poisson_closed_form(t) - 1.0).abs() < 1e-12, "t={t}");
            let r = eval_s_alt(&p, t, 1e-14).unwrap();
            assert!((r.value / poisson_closed_form_alt(t) - 1.0).abs() < 1e-12, "t={t}");
        }
    }

    #[test]
    fn brackets_contain_brute_force() {
        for p in [
            MathieuParams::classical(1.0, 0.0),
            MathieuParams::classical(0.5, 0.3),
            MathieuParams { gamma: 0.5, alpha: 1.5, mu: 1.2, u: -0.4 },
            MathieuParams { gamma: 2.0, alpha: 3.0, mu: 0.5, u: 1.5 },
        ] {
            for &t in &[0.0, 0.7, 3.0] {
                let r = eval_s(&p, t, 1e-13).unwrap();
                // brute force to 2e6 terms plus a crude tail: agreement to the tail size
                let b = brute(&p, t, 2_000_000, false);
                let tail = 2.0 * tail_int(&p, 2_000_000.5 + p.u, t, 0.0).unwrap().0;
                assert!((r.value - (b + tail)).abs() < 1e-12 * r.value + 1e-3 * tail, "{p:?} t={t}");
                let ra = eval_s_alt(&p, t, 1e-13).unwrap();
                // even cut: the remainder is half the next term to O(h')
                let x = 2_000_001.0 + p.u;
                let next = 2.0 * x.powf(p.gamma) / (x.powf(p.alpha) + t.powf(p.alpha)).powf(p.mu + 1.0);
                let ba = brute(&p, t, 2_000_000, true) + 0.5 * next;
                assert!((ra.value - ba).abs() < 1e-12 * ra.value.abs() + 1e-14, "{p:?} t={t}");
            }
        }
    }

    #[test]
    fn scaled_evaluation() {
        let p = MathieuParams::classical(1.0, 0.3);
        let a = eval_s(&p, 2.0, 1e-14).unwrap();
        let b = eval_s_scaled(&p, 2.0, 1e-14, 3.0).unwrap();
        assert!((b.value / (a.value * 3f64.exp()) - 1.0).abs() < 1e-13);
        // unscaled this underflows: S ~ t^{-128} / 64
        let p = MathieuParams::classical(64.0, 0.0);
        let t: f64 = 1000.0;
        let r = eval_s_scaled(&p, t, 1e-12, 64f64.ln() + 128.0 * t.ln()).unwrap();
        assert!(r.value.is_finite() && (r.value - 1.0).abs() < 1e-3, "{r:?}");
        assert!(r.value < 1.0);
    }

    #[test]
    fn alternating_identity() {
        // S~ = S(t, u) - 2^{1-δ} S(t/2, u/2)
        for &(u, t) in &[(0.3, 3.0), (0.0, 1.0), (1.2, 0.5)] {
            let p = MathieuParams::classical(1.0, u);
            let q = MathieuParams::classical(1.0, u / 2.0);
            let a = eval_s_alt(&p, t, 1e-14).unwrap().value;
            let s1 = eval_s(&p, t, 1e-14).unwrap().value;
            let s2 = eval_s(&q, t / 2.0, 1e-14).unwrap().value;
            assert!((a - (s1 - 0.25 * s2)).abs() < 1e-12);
        }
    }

    #[test]
    fn mathieu_inequality_instance() {
        let r = eval_s(&MathieuParams::classical(1.0, 0.0), 2.0, 1e-13).unwrap();
        assert!(r.upper() < 0.25);
        let r = eval_s(&MathieuParams::classical(1.0, 0.0), 1.0, 1e-13).unwrap();
        assert!((r.value - 0.794_233_542_759_318_9).abs() < 1e-13);
        assert!(r.value < 1.0);
    }

    #[test]
    fn tolerance_cap_is_reported() {
        let p = MathieuParams { gamma: 0.0, alpha: 1.0, mu: 0.05, u: 0.0 };
        let e = eval_s_with(&p, 0.0, 1e-14, 1000).unwrap_err();
        assert!(matches!(e, Error::ToleranceUnachievable { .. }));
    }

    #[test]
    fn s_mu_with_negative_offset() {
        // u = -1.5: terms k = 1 (x = -0.5) then k ≥ 2 (x = 0.5, 1.5, ...)
        let r = s_mu(1.0, 1.0, -1.5, 1e-14).unwrap();
        let mut b = 2.0 * (-0.5) / (0.25f64 + 1.0).powi(2);
        b += eval_s(&MathieuParams::classical(1.0, -0.5), 1.0, 1e-14).unwrap().value;
        assert!((r.value - b).abs() < 1e-14);
        // k = -u dropped
        let r = s_mu(1.0, 1.0, -2.0, 1e-14).unwrap();
        let b = 2.0 * (-1.0) / 4.0 + eval_s(&MathieuParams::classical(1.0, 0.0), 1.0, 1e-14).unwrap().value;
        assert!((r.value - b).abs() < 1e-14);
    }

    #[test]
    fn phi_values() {
        let direct: f64 = (1..20).map(|k| 2.0 * k as f64 * (-(k * k) as f64).exp()).sum();
        assert!((phi_u(0.0, 1.0).unwrap() - direct).abs() < 1e-15);
        assert!((phi_u(0.0, 1.0).unwrap() - 0.809_762_797_142_621_4).abs() < 1e-14);
        assert!((phi_u(0.0, 1e-6).unwrap() - 1.0).abs() < 1e-6);
        for &u in &[0.0, 0.5, 2.0] {
            for &x in &[1e-3, 0.1, 1.0, 10.0, 300.0] {
                let v = -ln_phi_u(u, x).unwrap() / x;
                assert!(u * u + u < v && v < (u + 1.0).powi(2), "u={u} x={x} v={v}");
            }
        }
    }

    #[test]
    fn dispatcher_paths() {
        let p = MathieuParams::classical(1.0, 0.0);
        assert_eq!(eval_auto(&p, 0.5, 1e-13).unwrap().method, Method::Direct);
        let far = eval_auto(&p, 1000.0, 1e-14).unwrap();
        assert_eq!(far.method, Method::Asymptotic);
        assert!(!far.rigorous);
        let d = eval_s(&p, 1000.0, 1e-14).unwrap();
        assert!((far.value / d.value - 1.0).abs() < 1e-12);
        let c = eval_cross(&p, 50.0, 1e-13, false).unwrap();
        assert!(c.overlap && c.other.is_some());
        let q = MathieuParams { gamma: 0.0, alpha: 2.0, mu: 0.0, u: 0.0 };
        assert_eq!(eval_auto(&q, 3.0, 1e-13).unwrap().method, Method::ClosedForm);
    }

    #[test]
    fn euler_maclaurin_path_brackets() {
        // a non-integer kernel forces the summation-engine path at large t
        let p = MathieuParams { gamma: 2.5, alpha: 2.0, mu: 1.5, u: 0.0 };
        let e = em_eval(&p, 60.0, 1e-3, false).expect("em path");
        let d = eval_s(&p, 60.0, 1e-13).unwrap();
        assert!(e.overlaps(&d), "{e:?} vs {d:?}");
        let p = MathieuParams::classical(1.0, 0.25);
        let e = em_eval(&p, 50.0, 1e-12, true).expect("boole path");
        let d = eval_s_alt(&p, 50.0, 1e-13).unwrap();
        assert!(e.overlaps(&d), "{e:?} vs {d:?}");
        let e = em_eval(&p, 50.0, 1e-12, false).expect("em path");
        let d = eval_s(&p, 50.0, 1e-13).unwrap();
        assert!(e.overlaps(&d), "{e:?} vs {d:?}");
    }
}
