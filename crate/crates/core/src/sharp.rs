//! Sharp constants for double inequalities
//!
//! ```text
//!   C / (t^β1 + a)^(δ1/β1)  ≤  S(t)  ≤  C / (t^β1 + b)^(δ1/β1),   t > 0
//! ```
//!
//! for series with `S(t) = C t^-δ1 - A t^-(δ1+β1) + o(...)`. The best `b` and `a`
//! are the infimum and supremum of `f(t) = (C/S(t))^(β1/δ1) - t^β1`.

use crate::error::{Error, Result};
use crate::mathieu::{
    asym_s, eval_auto, eval_s_scaled, ln_phi_u, s_mu, EvalResult, MathieuParams, SeriesKind,
};
use crate::polyfun::beta_fn;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::sync::atomic::{AtomicUsize, Ordering};

pub type SeriesFn = dyn Fn(f64) -> Result<EvalResult> + Send + Sync;
pub type RatioFn = dyn Fn(f64) -> Result<f64> + Send + Sync;

/// A positive series together with the constants of its large-`t` law.
pub struct SharpFramework {
    series: Box<SeriesFn>,
    ratio_m1: Option<Box<RatioFn>>,
    pub c: f64,
    pub delta1: f64,
    pub a: f64,
    pub beta1: f64,
}

impl std::fmt::Debug for SharpFramework {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SharpFramework")
            .field("c", &self.c)
            .field("delta1", &self.delta1)
            .field("a", &self.a)
            .field("beta1", &self.beta1)
            .finish_non_exhaustive()
    }
}

impl SharpFramework {
    pub fn new<F>(series: F, c: f64, delta1: f64, a: f64, beta1: f64) -> Result<Self>
    where
        F: Fn(f64) -> Result<EvalResult> + Send + Sync + 'static,
    {
        for (name, v) in [("C", c), ("delta1", delta1), ("A", a), ("beta1", beta1)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Domain(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(SharpFramework {
            series: Box::new(series),
            ratio_m1: None,
            c,
            delta1,
            a,
            beta1,
        })
    }

    /// Supplies an accurate `S(t) t^δ1 / C - 1` for `t ≥ 1`; without it the
    /// ratio is formed from the series value.
    pub fn with_ratio<F>(mut self, ratio_m1: F) -> Self
    where
        F: Fn(f64) -> Result<f64> + Send + Sync + 'static,
    {
        self.ratio_m1 = Some(Box::new(ratio_m1));
        self
    }

    /// `S_μ(t, u)`: `C = 1/μ`, `δ1 = 2μ`, `A = u^2+u+1/6`, `β1 = 2`.
    pub fn s_mu(mu: f64, u: f64) -> Result<Self> {
        let prof = SmuProfile::new(mu, u)?;
        let fw = SharpFramework::new(
            move |t| s_mu(mu, t, u, 1e-14),
            1.0 / mu,
            2.0 * mu,
            u * u + u + 1.0 / 6.0,
            2.0,
        )?;
        Ok(fw.with_ratio(move |t| prof.ratio_m1(t)))
    }

    /// `γ = 0`: `C = (2/α) B(1/α, μ+1-1/α)`, `δ1 = α(μ+1)-1`, `A = 1+2u`, `β1 = 1`.
    pub fn gamma_zero(alpha: f64, mu: f64, u: f64) -> Result<Self> {
        let p = MathieuParams::new(0.0, alpha, mu, u, SeriesKind::Plain)?;
        if u < 0.0 {
            return Err(Error::Domain(format!("u must be nonnegative, got {u}")));
        }
        let c = 2.0 / alpha * beta_fn(1.0 / alpha, mu + 1.0 - 1.0 / alpha)?;
        SharpFramework::new(move |t| eval_auto(&p, t, 1e-14), c, p.delta() - 1.0, 1.0 + 2.0 * u, 1.0)
    }

    pub fn series(&self, t: f64) -> Result<EvalResult> {
        (self.series)(t)
    }

    /// `f(+∞) = β1 A / (δ1 C)`.
    pub fn f_inf(&self) -> f64 {
        self.beta1 * self.a / (self.delta1 * self.c)
    }

    /// `S(t) t^δ1 / C - 1`, for `t > 0`.
    pub fn ratio_m1(&self, t: f64) -> Result<f64> {
        if t >= 1.0 {
            if let Some(r) = &self.ratio_m1 {
                return r(t);
            }
        }
        let s = self.series(t)?.value;
        if !(s > 0.0) {
            return Err(Error::Precondition(format!("S({t}) = {s} is not positive")));
        }
        Ok((s.ln() + self.delta1 * t.ln() - self.c.ln()).exp_m1())
    }

    /// Samples conditions (i) and (iii): `0 < S(t) < C t^-δ1`. Returns the
    /// offending points.
    pub fn sampled_violations(&self, ts: &[f64]) -> Result<Vec<f64>> {
        let mut bad = Vec::new();
        for &t in ts {
            let r = self.series(t)?;
            if !(r.lower() > 0.0) {
                bad.push(t);
                continue;
            }
            if t > 0.0 && self.ratio_m1(t)? >= 0.0 {
                bad.push(t);
            }
        }
        Ok(bad)
    }
}

/// Normalized forms of `S_μ(t, u)` that stay accurate for large `t` and `μ`.
#[derive(Debug, Clone, Copy)]
pub struct SmuProfile {
    pub mu: f64,
    pub u: f64,
}

impl SmuProfile {
    pub fn new(mu: f64, u: f64) -> Result<Self> {
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(Error::Domain(format!("mu must be positive, got {mu}")));
        }
        if !(u >= 0.0 && u.is_finite()) {
            return Err(Error::Domain(format!("u must be nonnegative, got {u}")));
        }
        Ok(SmuProfile { mu, u })
    }

    /// `μ t^(2μ) S_μ(t, u) - 1`.
    pub fn ratio_m1(&self, t: f64) -> Result<f64> {
        Ok(self.ratio_m1_err(t)?.0)
    }

    /// [`Self::ratio_m1`] with an error estimate: rigorous on the direct path,
    /// the size of the last term used on the asymptotic one.
    pub fn ratio_m1_err(&self, t: f64) -> Result<(f64, f64)> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::Domain(format!("t must be positive, got {t}")));
        }
        if t >= 20.0 {
            if let Some(x) = self.ratio_m1_asym(t)? {
                return Ok(x);
            }
        }
        let p = MathieuParams::classical(self.mu, self.u);
        let ls = self.mu.ln() + 2.0 * self.mu * t.ln();
        let r = eval_s_scaled(&p, t, 1e-15, ls)?;
        Ok((r.value - 1.0, r.err_lo.max(r.err_hi) + f64::EPSILON))
    }

    /// From the expansion `S_μ ~ sum_k c_k t^-2(k+μ)`; `None` when the terms
    /// do not get small enough.
    fn ratio_m1_asym(&self, t: f64) -> Result<Option<(f64, f64)>> {
        let p = MathieuParams::classical(self.mu, self.u);
        let series = asym_s(&p, 32)?;
        let inv = 1.0 / (t * t);
        let mut acc = 0.0;
        let mut w = 1.0;
        let mut prev = f64::INFINITY;
        for term in &series.terms {
            w *= inv;
            let v = self.mu * term.coeff * w;
            if v == 0.0 {
                continue;
            }
            if v.abs() > prev {
                return Ok(None);
            }
            acc += v;
            if v.abs() <= 1e-17 * acc.abs() {
                return Ok(Some((acc, v.abs() + 4.0 * f64::EPSILON * acc.abs())));
            }
            prev = v.abs();
        }
        Ok(None)
    }

    /// `(μ S_μ(t, u))^(1/μ)`.
    pub fn root(&self, t: f64) -> Result<f64> {
        if t < 1.0 {
            let s = s_mu(self.mu, t, self.u, 1e-15)?.value;
            return Ok(((self.mu * s).ln() / self.mu).exp());
        }
        let x = self.ratio_m1(t)?;
        Ok((x.ln_1p() / self.mu - 2.0 * t.ln()).exp())
    }

    /// `f_{μ,u}(t) = (μ S_μ(t,u))^(-1/μ) - t^2`.
    pub fn f(&self, t: f64) -> Result<f64> {
        if t < 1.0 {
            return Ok(1.0 / self.root(t)? - t * t);
        }
        let x = self.ratio_m1(t)?;
        Ok(t * t * (-x.ln_1p() / self.mu).exp_m1())
    }
}

/// `((ν+1) S_{ν+1})^(1/(ν+1)) - (ν S_ν)^(1/ν)` at `(t, u)`, without the
/// cancellation of subtracting the two roots at large `t`.
pub fn root_gap(nu: f64, u: f64, t: f64) -> Result<f64> {
    let lo = SmuProfile::new(nu, u)?;
    let hi = SmuProfile::new(nu + 1.0, u)?;
    if t < 1.0 {
        return Ok(hi.root(t)? - lo.root(t)?);
    }
    let l0 = lo.ratio_m1(t)?.ln_1p() / nu;
    let l1 = hi.ratio_m1(t)?.ln_1p() / (nu + 1.0);
    Ok((l0 - 2.0 * t.ln()).exp() * (l1 - l0).exp_m1())
}

/// `f(t) = (C/S(t))^(β1/δ1) - t^β1`; `t = +∞` gives the closed form.
pub fn f_profile(fw: &SharpFramework, t: f64) -> Result<f64> {
    if t == f64::INFINITY {
        return Ok(fw.f_inf());
    }
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("t must be nonnegative, got {t}")));
    }
    let e = fw.beta1 / fw.delta1;
    if t < 1.0 {
        let s = fw.series(t)?.value;
        if !(s > 0.0) {
            return Err(Error::Precondition(format!("S({t}) = {s} is not positive")));
        }
        return Ok((e * (fw.c.ln() - s.ln())).exp() - t.powf(fw.beta1));
    }
    let x = fw.ratio_m1(t)?;
    if !(x > -1.0) {
        return Err(Error::Precondition(format!("S({t}) is not positive")));
    }
    Ok(t.powf(fw.beta1) * (-e * x.ln_1p()).exp_m1())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Grid points in `s = t/(1+t) ∈ [0, 1)`.
    pub grid_points: usize,
    /// Local extrema refined per side.
    pub candidates: usize,
    /// Golden-section tolerance in `s`.
    pub tol: f64,
    pub max_evals: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            grid_points: 2048,
            candidates: 3,
            tol: 1e-10,
            max_evals: 100_000,
        }
    }
}

/// Where an extremum sits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Location {
    Finite(f64),
    Infinity,
}

impl std::fmt::Display for Location {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Location::Finite(t) => write!(f, "{t}"),
            Location::Infinity => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub evals: usize,
    /// How much refinement moved each extremum away from its grid value.
    pub refine_delta_m: f64,
    pub refine_delta_big_m: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SharpConstants {
    pub m: f64,
    #[serde(rename = "M")]
    pub big_m: f64,
    pub f_inf: f64,
    pub t_at_m: Location,
    #[serde(rename = "t_at_M")]
    pub t_at_big_m: Location,
    /// Always false: the extrema are numerical.
    pub certified: bool,
    pub report: SearchReport,
}

struct Budget {
    used: AtomicUsize,
    max: usize,
}

impl Budget {
    fn take(&self) -> Result<()> {
        let n = self.used.fetch_add(1, Ordering::Relaxed) + 1;
        if n > self.max {
            return Err(Error::SearchFailure(format!("more than {} evaluations", self.max)));
        }
        Ok(())
    }
}

/// Golden-section minimization of `f` on `[a, b]`.
pub(crate) fn golden_min<F>(f: F, mut a: f64, mut b: f64, tol: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d)?;
        }
    }
    Ok(if fc < fd { (c, fc) } else { (d, fd) })
}

fn t_of(s: f64) -> f64 {
    s / (1.0 - s)
}

/// Indices of the `k` lowest local minima of `v` (the value past the end is `right`).
fn local_minima(v: &[f64], right: f64, k: usize) -> Vec<usize> {
    let n = v.len();
    let mut idx: Vec<usize> = (0..n)
        .filter(|&i| {
            let l = if i == 0 { f64::INFINITY } else { v[i - 1] };
            let r = if i + 1 == n { right } else { v[i + 1] };
            v[i] <= l && v[i] <= r
        })
        .collect();
    idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
    idx.truncate(k);
    idx
}

/// Grid scan of `f` in `s = t/(1+t)` followed by golden-section refinement
/// around the best local extrema; `t = ∞` contributes `f_inf`.
pub fn compute_mm(fw: &SharpFramework, cfg: &SearchConfig) -> Result<SharpConstants> {
    if cfg.grid_points < 3 {
        return Err(Error::Domain("need at least 3 grid points".into()));
    }
    let budget = Budget {
        used: AtomicUsize::new(0),
        max: cfg.max_evals,
    };
    let eval = |s: f64| -> Result<f64> {
        budget.take()?;
        f_profile(fw, t_of(s))
    };
    let g = cfg.grid_points;
    let h = 1.0 / g as f64;
    let vals: Vec<f64> = (0..g)
        .into_par_iter()
        .map(|i| eval(i as f64 * h))
        .collect::<Result<_>>()?;
    let f_inf = fw.f_inf();
    let s_max = 1.0 - h;

    let refine = |sign: f64| -> Result<(f64, f64, f64)> {
        // minimizes sign * f; returns (s, value, grid value)
        let v: Vec<f64> = vals.iter().map(|x| sign * x).collect();
        let mut best = (f64::NAN, f64::INFINITY, f64::INFINITY);
        for i in local_minima(&v, sign * f_inf, cfg.candidates) {
            let lo = if i == 0 { 0.0 } else { (i - 1) as f64 * h };
            let hi = ((i + 1) as f64 * h).min(s_max);
            let (s, fs) = golden_min(|s| Ok(sign * eval(s)?), lo, hi, cfg.tol)?;
            let (s, fs) = if v[i] <= fs { (i as f64 * h, v[i]) } else { (s, fs) };
            if fs < best.1 {
                best = (s, fs, v[i]);
            }
        }
        Ok(best)
    };
    let (s_lo, v_lo, grid_lo) = refine(1.0)?;
    let (s_hi, v_hi, grid_hi) = refine(-1.0)?;
    let v_hi = -v_hi;
    let grid_hi = -grid_hi;

    let (m, t_at_m, d_m) = if f_inf <= v_lo || s_lo.is_nan() {
        (f_inf, Location::Infinity, 0.0)
    } else {
        (v_lo, Location::Finite(t_of(s_lo)), grid_lo - v_lo)
    };
    let (big_m, t_at_big_m, d_big_m) = if f_inf >= v_hi || s_hi.is_nan() {
        (f_inf, Location::Infinity, 0.0)
    } else {
        (v_hi, Location::Finite(t_of(s_hi)), v_hi - grid_hi)
    };
    Ok(SharpConstants {
        m,
        big_m,
        f_inf,
        t_at_m,
        t_at_big_m,
        certified: false,
        report: SearchReport {
            evals: budget.used.load(Ordering::Relaxed),
            refine_delta_m: d_m,
            refine_delta_big_m: d_big_m,
        },
    })
}

/// A positive convex kernel `g` whose series
/// `S(u, y) = sum_{k≥1} 2(k+u) g((k+u)^2 + y)` can be evaluated.
pub trait ConvexKernel: Sync {
    fn g(&self, x: f64) -> f64;
    /// `F(t) = ∫_t^∞ g`.
    fn tail(&self, t: f64) -> f64;
    fn series(&self, u: f64, y: f64) -> Result<f64>;
    /// `S(u, y)` with an absolute error bound.
    fn series_err(&self, u: f64, y: f64) -> Result<(f64, f64)> {
        let v = self.series(u, y)?;
        Ok((v, 1e-13 * v.abs()))
    }
}

/// `g(x) = x^(-μ-1)`, `S(u, y) = S_μ(√y, u)`.
#[derive(Debug, Clone, Copy)]
pub struct PowerKernel {
    pub mu: f64,
}

impl ConvexKernel for PowerKernel {
    fn g(&self, x: f64) -> f64 {
        x.powf(-self.mu - 1.0)
    }

    fn tail(&self, t: f64) -> f64 {
        1.0 / (self.mu * t.powf(self.mu))
    }

    fn series(&self, u: f64, y: f64) -> Result<f64> {
        Ok(self.series_err(u, y)?.0)
    }

    fn series_err(&self, u: f64, y: f64) -> Result<(f64, f64)> {
        if y < 0.0 {
            return Err(Error::Domain(format!("y must be nonnegative, got {y}")));
        }
        let r = s_mu(self.mu, y.sqrt(), u, 1e-15)?;
        Ok((r.value, r.err_lo.max(r.err_hi)))
    }
}

/// `g(x) = e^(-λx)`, `S(u, y) = e^(-λy) φ_u(λ) / λ`.
#[derive(Debug, Clone, Copy)]
pub struct ExpKernel {
    pub lambda: f64,
}

impl ConvexKernel for ExpKernel {
    fn g(&self, x: f64) -> f64 {
        (-self.lambda * x).exp()
    }

    fn tail(&self, t: f64) -> f64 {
        (-self.lambda * t).exp() / self.lambda
    }

    fn series(&self, u: f64, y: f64) -> Result<f64> {
        Ok(self.series_err(u, y)?.0)
    }

    fn series_err(&self, u: f64, y: f64) -> Result<(f64, f64)> {
        let l = self.lambda;
        let e = ln_phi_u(u, l)? - l * y - l.ln();
        let v = e.exp();
        Ok((v, 8.0 * f64::EPSILON * (1.0 + e.abs() + (l * y).abs()) * v))
    }
}

/// `F^-1(s)` by bisection on `ln F`, polished with Newton steps.
pub fn tail_inverse<K: ConvexKernel + ?Sized>(k: &K, s: f64) -> Result<f64> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::Domain(format!("F^-1 needs s > 0, got {s}")));
    }
    let ls = s.ln();
    let h = |x: f64| k.tail(x).ln() - ls;
    let mut hi = 1.0;
    let mut steps = 0;
    while h(hi) > 0.0 {
        hi *= 2.0;
        steps += 1;
        if steps > 2000 {
            return Err(Error::SearchFailure(format!("no x with F(x) = {s}")));
        }
    }
    let mut lo = 0.5 * hi;
    steps = 0;
    while h(lo) < 0.0 {
        lo *= 0.5;
        steps += 1;
        if steps > 1100 || lo == 0.0 {
            if k.tail(0.0) >= s {
                lo = 0.0;
                break;
            }
            return Err(Error::Domain(format!("s = {s} exceeds F(0+)")));
        }
    }
    for _ in 0..200 {
        let m = 0.5 * (lo + hi);
        if m <= lo || m >= hi || (hi - lo) <= 1e-12 * hi {
            break;
        }
        if h(m) > 0.0 {
            lo = m;
        } else {
            hi = m;
        }
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..3 {
        // d/dx ln F = -g / F
        let d = -k.g(x) / k.tail(x);
        let step = h(x) / d;
        let nx = x - step;
        if !(nx.is_finite() && nx > 0.0) {
            break;
        }
        x = nx;
    }
    Ok(x)
}

/// `ψ(u, y) = F^-1(S(u, y)) - y`.
pub fn psi_uy<K: ConvexKernel + ?Sized>(k: &K, u: f64, y: f64) -> Result<f64> {
    if !(u >= 0.0 && y >= 0.0) {
        return Err(Error::Domain(format!("psi needs u, y ≥ 0, got ({u}, {y})")));
    }
    Ok(tail_inverse(k, k.series(u, y)?)? - y)
}

/// `-ln φ_u(x) / x`.
pub fn phi_exponent(u: f64, x: f64) -> Result<f64> {
    Ok(-ln_phi_u(u, x)? / x)
}

/// `m_∞(u) = inf_{x>0} -ln φ_u(x)/x`, including the `x → 0+` limit `u^2+u+1/6`.
pub fn m_infinity(u: f64) -> Result<f64> {
    Ok(m_infinity_with(u, &SearchConfig { grid_points: 512, ..SearchConfig::default() })?.0)
}

/// As [`m_infinity`], also returning the minimizing `x` (`0` for the limit).
pub fn m_infinity_with(u: f64, cfg: &SearchConfig) -> Result<(f64, f64)> {
    if !(u >= 0.0 && u.is_finite()) {
        return Err(Error::Domain(format!("u must be nonnegative, got {u}")));
    }
    let g = cfg.grid_points.max(3);
    let h = 1.0 / g as f64;
    let q = |s: f64| phi_exponent(u, t_of(s));
    let vals: Vec<f64> = (1..g)
        .into_par_iter()
        .map(|i| q(i as f64 * h))
        .collect::<Result<_>>()?;
    let limit0 = u * u + u + 1.0 / 6.0;
    let i = (0..vals.len()).min_by(|&a, &b| vals[a].total_cmp(&vals[b])).expect("grid");
    let s_i = (i + 1) as f64 * h;
    let (s, v) = golden_min(q, (s_i - h).max(0.25 * h), (s_i + h).min(1.0 - h), cfg.tol)?;
    let (s, v) = if vals[i] < v { (s_i, vals[i]) } else { (s, v) };
    if limit0 <= v {
        Ok((limit0, 0.0))
    } else {
        Ok((v, t_of(s)))
    }
}

/// `M_∞(u) = (1+u)^2`.
pub fn big_m_infinity(u: f64) -> Result<f64> {
    if !(u >= 0.0 && u.is_finite()) {
        return Err(Error::Domain(format!("u must be nonnegative, got {u}")));
    }
    Ok((1.0 + u) * (1.0 + u))
}

/// Which side of the double inequality a candidate exponent is tried on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum BoundSide {
    /// `S(t) ≤ C (t^β + b)^(-δ1/β)` with `β < β1`.
    Upper { b: f64 },
    /// `S(t) ≥ C (t^β + a)^(-δ1/β)` with `β > β1`.
    Lower { a: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub t: f64,
    /// `S(t) t^δ1 / C - 1`.
    pub series_ratio_m1: f64,
    /// `(t^β + c)^(-δ1/β) t^δ1 - 1`.
    pub bound_ratio_m1: f64,
}

/// Finds a `t` where the candidate inequality with exponent `β` fails.
pub fn impossibility_demo(fw: &SharpFramework, beta: f64, side: BoundSide) -> Result<Witness> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::Domain(format!("beta must be positive, got {beta}")));
    }
    if beta == fw.beta1 {
        return Err(Error::Precondition("beta equals beta1; the inequality is attainable".into()));
    }
    let c = match side {
        BoundSide::Upper { b } if beta < fw.beta1 && b > 0.0 => b,
        BoundSide::Lower { a } if beta > fw.beta1 && a >= 0.0 => a,
        BoundSide::Upper { .. } => {
            return Err(Error::Precondition("upper side needs beta < beta1 and b > 0".into()))
        }
        BoundSide::Lower { .. } => {
            return Err(Error::Precondition("lower side needs beta > beta1 and a ≥ 0".into()))
        }
    };
    // below this the two ratios are not reliably separated
    let slack = 1e-11;
    let mut t = 0.25;
    while t < 1e7 {
        let r = fw.ratio_m1(t)?;
        let rho = (-(fw.delta1 / beta) * (c * t.powf(-beta)).ln_1p()).exp_m1();
        let fails = match side {
            BoundSide::Upper { .. } => r - rho > slack,
            BoundSide::Lower { .. } => rho - r > slack,
        };
        if fails {
            return Ok(Witness {
                t,
                series_ratio_m1: r,
                bound_ratio_m1: rho,
            });
        }
        t *= 1.25;
    }
    Err(Error::SearchFailure(format!("no failing t found up to 1e7 for beta = {beta}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zeta3() -> f64 {
        // direct sum with an Euler-Maclaurin tail
        let n = 10_000usize;
        let s: f64 = (1..=n).rev().map(|k| (k as f64).powi(-3)).sum();
        let x = n as f64;
        s + 1.0 / (2.0 * x * x) - 1.0 / (2.0 * x.powi(3)) + 1.0 / (4.0 * x.powi(4))
    }

    #[test]
    fn profile_endpoints() {
        let fw = SharpFramework::s_mu(1.0, 0.0).unwrap();
        let f0 = f_profile(&fw, 0.0).unwrap();
        assert!((f0 - 1.0 / (2.0 * zeta3())).abs() < 1e-12, "{f0}");
        assert!((fw.f_inf() - 1.0 / 6.0).abs() < 1e-15);
        assert_eq!(f_profile(&fw, f64::INFINITY).unwrap(), fw.f_inf());
        let far = f_profile(&fw, 1e4).unwrap();
        assert!((far - 1.0 / 6.0).abs() < 1e-8, "{far}");
    }

    #[test]
    fn profile_paths_agree() {
        // the asymptotic ratio and the scaled direct sum meet at t = 20
        for &(mu, u) in &[(1.0, 0.0), (0.5, 0.7), (4.0, 1.0)] {
            let p = SmuProfile::new(mu, u).unwrap();
            for &t in &[20.0, 35.0] {
                let a = p.ratio_m1_asym(t).unwrap().unwrap().0;
                let d = eval_s_scaled(&MathieuParams::classical(mu, u), t, 1e-15, mu.ln() + 2.0 * mu * t.ln())
                    .unwrap()
                    .value
                    - 1.0;
                assert!((a - d).abs() < 1e-13, "mu={mu} u={u} t={t}: {a} vs {d}");
            }
        }
    }

    #[test]
    fn classical_constants() {
        let fw = SharpFramework::s_mu(1.0, 0.0).unwrap();
        let c = compute_mm(&fw, &SearchConfig::default()).unwrap();
        assert_eq!(c.t_at_m, Location::Infinity);
        assert!((c.m - 1.0 / 6.0).abs() < 1e-12);
        assert!((c.big_m - 1.0 / (2.0 * zeta3())).abs() < 1e-10, "{c:?}");
        // f is even in t, so the maximizer is only pinned down to the flat top
        assert!(matches!(c.t_at_big_m, Location::Finite(t) if t < 1e-3), "{c:?}");
        assert!(!c.certified);
    }

    #[test]
    fn bounds_chain() {
        for &(mu, u) in &[(2.0, 0.0), (0.5, 0.5), (1.0, 1.0)] {
            let c = compute_mm(&SharpFramework::s_mu(mu, u).unwrap(), &SearchConfig::default()).unwrap();
            let b = u * u + u;
            assert!(b < c.m && c.m <= b + 1.0 / 6.0 + 1e-12, "{mu} {u} {c:?}");
            assert!(b + 0.25 < c.big_m && c.big_m < (1.0 + u) * (1.0 + u), "{mu} {u} {c:?}");
        }
    }

    #[test]
    fn gamma_zero_example() {
        // f(0) and f(∞) bracket-free checks for γ = 0, α = 2, μ = 1
        let fw = SharpFramework::gamma_zero(2.0, 1.0, 0.5).unwrap();
        let c = 2.0 / 2.0 * beta_fn(0.5, 1.5).unwrap();
        assert!((fw.c - c).abs() < 1e-15);
        let expect = (0.5 + 0.5) / ((2.0 - 0.5) * beta_fn(0.5, 1.5).unwrap());
        assert!((fw.f_inf() - expect).abs() < 1e-14);
        let k = compute_mm(&fw, &SearchConfig { grid_points: 256, ..Default::default() }).unwrap();
        let f0 = f_profile(&fw, 0.0).unwrap();
        assert!(k.m <= f0.min(fw.f_inf()) + 1e-12);
        assert!(k.big_m >= f0.max(fw.f_inf()) - 1e-12);
        assert!(k.m > 0.0 && k.m < k.big_m);
    }

    #[test]
    fn psi_power_kernel_matches_closed_inverse() {
        let k = PowerKernel { mu: 1.5 };
        for &(u, y) in &[(0.0, 0.0), (0.5, 3.0), (2.0, 10.0)] {
            let s = k.series(u, y).unwrap();
            let closed = (1.0 / (1.5 * s)).powf(1.0 / 1.5) - y;
            let psi = psi_uy(&k, u, y).unwrap();
            assert!((psi - closed).abs() < 1e-11 * (1.0 + y), "u={u} y={y}: {psi} vs {closed}");
            assert!(u * u + u <= psi && psi < (1.0 + u) * (1.0 + u));
        }
        let psi = psi_uy(&PowerKernel { mu: 1.0 }, 0.5, 3.0).unwrap();
        assert!((0.75..2.25).contains(&psi));
    }

    #[test]
    fn psi_exponential_kernel_is_constant() {
        for &lambda in &[0.3, 1.0, 4.0] {
            let k = ExpKernel { lambda };
            let u = 0.5;
            let s0: f64 = (1..200).map(|j| 2.0 * (j as f64 + u) * (-lambda * (j as f64 + u).powi(2)).exp()).sum();
            let c = -(lambda * s0).ln() / lambda;
            for &y in &[0.0, 0.7, 5.0, 20.0] {
                let psi = psi_uy(&k, u, y).unwrap();
                assert!((psi - c).abs() < 1e-10, "lambda={lambda} y={y}: {psi} vs {c}");
            }
            assert!(u * u + u < c && c < (1.0 + u) * (1.0 + u));
        }
    }

    #[test]
    fn infinity_constants() {
        assert!((big_m_infinity(0.3).unwrap() - 1.69).abs() < 1e-15);
        for &u in &[0.0, 0.5, 1.0, 2.0] {
            let m = m_infinity(u).unwrap();
            assert!(u * u + u < m && m <= u * u + u + 1.0 / 6.0, "u={u} m={m}");
            let q = phi_exponent(u, 1e-4).unwrap();
            assert!((q - (u * u + u + 1.0 / 6.0)).abs() < 1e-3);
        }
        assert!(m_infinity(-0.1).is_err());
    }

    #[test]
    fn impossibility_witnesses() {
        let fw = SharpFramework::s_mu(1.0, 0.0).unwrap();
        let w = impossibility_demo(&fw, 1.0, BoundSide::Upper { b: 0.1 }).unwrap();
        // S(t) > C (t + b)^{-2} at the witness, checked independently
        let s = s_mu(1.0, w.t, 0.0, 1e-15).unwrap().value;
        assert!(s > 1.0 / (w.t + 0.1).powi(2), "{w:?}");
        let w = impossibility_demo(&fw, 3.0, BoundSide::Lower { a: 1.0 }).unwrap();
        let s = s_mu(1.0, w.t, 0.0, 1e-15).unwrap().value;
        assert!(s < (w.t.powi(3) + 1.0).powf(-2.0 / 3.0), "{w:?}");
        assert!(matches!(
            impossibility_demo(&fw, 2.0, BoundSide::Upper { b: 0.1 }),
            Err(Error::Precondition(_))
        ));
        assert!(impossibility_demo(&fw, 3.0, BoundSide::Upper { b: 0.1 }).is_err());
    }

    #[test]
    fn root_gap_asymptotics() {
        for &u in &[0.0, 0.5, 1.0] {
            let t: f64 = 100.0;
            let g = root_gap(1.0, u, t).unwrap() * t.powi(6);
            let expect = -(60.0 * u * u + 60.0 * u + 11.0) / 360.0;
            assert!((g / expect - 1.0).abs() < 0.05, "u={u}: {g} vs {expect}");
        }
        // Wilkins instance at t = 0
        let g = root_gap(1.0, 0.0, 0.0).unwrap();
        assert!(g < 0.0);
    }
}
