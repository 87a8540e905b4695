//! Individual verifiers. Each one samples its claim on a grid and records
//! every comparison in a [`VerificationReport`].

use super::bessel::{bessel_j, exp_power_tail, hankel_transform};
use super::kernels::{g_pu, h_u_prime};
use super::{params, GridSpec, Params, VerificationReport};
use crate::error::{Error, Result};
use crate::mathieu::{eval_auto, eval_s, eval_s_scaled, s_mu, MathieuParams};
use crate::polyfun::{beta_fn, gamma};
use crate::quad::{integrate, integrate_to_inf, tanh_sinh};
use crate::sharp::{ConvexKernel, SmuProfile};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::sync::Mutex;

const EPS: f64 = f64::EPSILON;
/// `1 / (1 - e^{-1})`, bounds `1/(1 - e^{-x})` for `x ≥ 1`.
const Q1: f64 = 1.581_976_706_869_326_5;

/// `S_μ(t, u)` with its absolute error.
fn smu(mu: f64, t: f64, u: f64) -> Result<(f64, f64)> {
    let r = s_mu(mu, t, u, 1e-15)?;
    Ok((r.value, r.err_lo.max(r.err_hi)))
}

/// `√π / (2^{μ-1/2} Γ(μ+1))`, the factor in front of `𝔉_{2μ+1}`.
fn c_mu(mu: f64) -> f64 {
    PI.sqrt() / (2f64.powf(mu - 0.5) * gamma(mu + 1.0))
}

fn positive_points(grid: &GridSpec) -> Result<Vec<f64>> {
    grid.validate()?;
    if grid.t_points[0] <= 0.0 {
        return Err(Error::Precondition("this check needs t > 0 on the whole grid".into()));
    }
    Ok(grid.t_points.clone())
}

/// Records a quadrature or evaluation failure inside an integrand.
struct Failure(Mutex<Option<Error>>);

impl Failure {
    fn new() -> Self {
        Failure(Mutex::new(None))
    }

    fn value(&self, r: Result<f64>) -> f64 {
        match r {
            Ok(v) => v,
            Err(e) => {
                self.0.lock().unwrap().get_or_insert(e);
                f64::NAN
            }
        }
    }

    fn check(self) -> Result<()> {
        match self.0.into_inner().unwrap() {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }
}

/// Hermite-Hadamard: `(b-a) g((a+b)/2) ≤ ∫_a^b g ≤ (b-a)(g(a)+g(b))/2` for
/// convex `g`. With `strict` both inequalities must hold with margin.
pub fn hermite_hadamard_check(
    g: &(dyn Fn(f64) -> f64 + Sync),
    a: f64,
    b: f64,
    strict: bool,
) -> Result<VerificationReport> {
    if !(b > a) {
        return Err(Error::Precondition(format!("need a < b, got [{a}, {b}]")));
    }
    let w = b - a;
    let q = integrate(g, a, b, 1e-14, 1e-14)?;
    let mid = w * g(0.5 * (a + b));
    let trap = w * 0.5 * (g(a) + g(b));
    let round = 4.0 * EPS * (mid.abs() + trap.abs() + q.value.abs());
    let err = q.error + round;
    let p = params(&[("a", a), ("b", b)]);
    let mut r = VerificationReport::new("hermite_hadamard");
    if strict {
        r.less("midpoint", &p, a, mid, q.value, err);
        r.less("trapezoid", &p, b, q.value, trap, err);
    } else {
        r.less_eq("midpoint", &p, a, mid, q.value, err);
        r.less_eq("trapezoid", &p, b, q.value, trap, err);
    }
    Ok(r)
}

/// `F((1+u)²+y) + (1/2+u) g((1+u)²+y) ≤ S(u,y) ≤ F(u²+u+y)` for a convex
/// kernel. The left bound needs `u ≥ -3/2`, `y > -(1+u)²`; the right one
/// `u ≥ -1`, `u²+u+y > 0`. Whichever applies is checked.
pub fn fsf_bounds_check<K: ConvexKernel + ?Sized>(
    k: &K,
    u: f64,
    y: f64,
    strict: bool,
) -> Result<VerificationReport> {
    let left_ok = u >= -1.5 && y > -(1.0 + u) * (1.0 + u);
    let right_ok = u >= -1.0 && u * u + u + y > 0.0;
    if !left_ok && !right_ok {
        return Err(Error::Precondition(format!("neither bound applies at u = {u}, y = {y}")));
    }
    let (s, es) = k.series_err(u, y)?;
    let p = params(&[("u", u), ("y", y)]);
    let mut r = VerificationReport::new("fsf_bounds");
    if left_ok {
        let x = (1.0 + u) * (1.0 + u) + y;
        let lhs = k.tail(x) + (0.5 + u) * k.g(x);
        let err = es + 8.0 * EPS * (k.tail(x).abs() + ((0.5 + u) * k.g(x)).abs());
        if strict {
            r.less("lower", &p, y, lhs, s, err);
        } else {
            r.less_eq("lower", &p, y, lhs, s, err);
        }
    }
    if right_ok {
        let rhs = k.tail(u * u + u + y);
        let err = es + 8.0 * EPS * rhs.abs();
        if strict {
            r.less("upper", &p, y, s, rhs, err);
        } else {
            r.less_eq("upper", &p, y, s, rhs, err);
        }
    }
    Ok(r)
}

/// Classical inequalities for `S(t) = sum 2k/(k²+t²)²` on the grid:
/// `S(t) < 1/t²`, `1/(t²+a) < S(t) < 1/(t²+1/6)` with `a = 1/S(0)`,
/// `2 S_2(t,0) < S_1(t,0)²`, and `μ t^{2μ} S_μ(t,0) < 1` for
/// `μ ∈ {0.5, 1, 2, 4}`.
pub fn classical_inequalities_check(grid: &GridSpec) -> Result<VerificationReport> {
    let ts = positive_points(grid)?;
    let p1 = MathieuParams::classical(1.0, 0.0);
    let p2 = MathieuParams::classical(2.0, 0.0);
    let s0 = eval_s(&p1, 0.0, 1e-15)?;
    let a = 1.0 / s0.value;
    let ea = s0.err_hi.max(s0.err_lo) * a * a;
    let b = 1.0 / 6.0;
    let mus = [0.5, 1.0, 2.0, 4.0];
    let profiles: Vec<SmuProfile> = mus.iter().map(|&m| SmuProfile::new(m, 0.0)).collect::<Result<_>>()?;

    type Row = (f64, (f64, f64), (f64, f64), Vec<(f64, f64)>);
    let rows: Vec<Row> = ts
        .par_iter()
        .map(|&t| -> Result<Row> {
            let s1 = eval_auto(&p1, t, 1e-15)?;
            let s2 = eval_auto(&p2, t, 1e-15)?;
            let d = profiles.iter().map(|pr| pr.ratio_m1_err(t)).collect::<Result<Vec<_>>>()?;
            Ok((
                t,
                (s1.value, s1.err_lo.max(s1.err_hi)),
                (s2.value, s2.err_lo.max(s2.err_hi)),
                d,
            ))
        })
        .collect::<Result<_>>()?;

    let mut r = VerificationReport::new("classical_inequalities");
    let none = Params::new();
    for (t, (s, es), (s2, es2), d) in rows {
        let t2 = t * t;
        let inv = 1.0 / t2;
        r.less("mathieu", &none, t, s, inv, es + 2.0 * EPS * inv);
        let lo = 1.0 / (t2 + a);
        r.less("double_lower", &params(&[("a", a)]), t, lo, s, es + lo * lo * ea + 2.0 * EPS * lo);
        let hi = 1.0 / (t2 + b);
        r.less("double_upper", &params(&[("b", b)]), t, s, hi, es + 2.0 * EPS * hi);
        let sq = s * s;
        r.less("wilkins", &none, t, 2.0 * s2, sq, 2.0 * es2 + 2.0 * s * es + 4.0 * EPS * sq);
        for (&mu, (rm1, e)) in mus.iter().zip(d) {
            r.less("diananda", &params(&[("mu", mu)]), t, rm1, 0.0, e);
        }
    }
    Ok(r)
}

/// `|1/(μ(p²+t²)^μ) - S_μ(t,u)| < B` with `B = 1/(μp^{2μ}) - S_μ(0,u)` for
/// `p - u ≤ 1/2` and `B = S_μ(0,u) - 1/(μp^{2μ})` for `p - u ≥ 1`.
pub fn ner_check(p: f64, u: f64, mu: f64, grid: &GridSpec) -> Result<VerificationReport> {
    if !(p > 0.0 && u > -1.0 && mu > 0.0) {
        return Err(Error::Domain(format!("need p > 0, u > -1, mu > 0 (p = {p}, u = {u}, mu = {mu})")));
    }
    let a = p - u;
    if a > 0.5 && a < 1.0 {
        return Err(Error::Branch(a));
    }
    let ts = positive_points(grid)?;
    let (s0, e0) = smu(mu, 0.0, u)?;
    let lead0 = 1.0 / (mu * p.powf(2.0 * mu));
    let bound = if a <= 0.5 { lead0 - s0 } else { s0 - lead0 };
    let rows: Vec<(f64, f64, f64)> = ts
        .par_iter()
        .map(|&t| smu(mu, t, u).map(|(s, e)| (t, s, e)))
        .collect::<Result<_>>()?;
    let pm = params(&[("p", p), ("u", u), ("mu", mu)]);
    let mut r = VerificationReport::new("ner");
    for (t, s, e) in rows {
        let lead = 1.0 / (mu * (p * p + t * t).powf(mu));
        let lhs = (lead - s).abs();
        let err = e + e0 + 8.0 * EPS * (1.0 + mu) * (lead + lead0 + s + s0);
        r.less("ner", &pm, t, lhs, bound, err);
    }
    Ok(r)
}

/// Asserts `H_{ν,b}(t,u) = ν S_ν - (ν+1) S_{ν+1} (t²+b) > 0` on the grid, as
/// the ratio `(ν+1) S_{ν+1} (t²+b) / (ν S_ν) < 1`. A violation is a point
/// where `(t²+b)^ν S_ν(t,u)` decreases.
pub fn monotonicity_check(nu: f64, b: f64, u: f64, grid: &GridSpec) -> Result<VerificationReport> {
    if !(nu > 0.0) {
        return Err(Error::Domain(format!("need nu > 0, got {nu}")));
    }
    let ts = positive_points(grid)?;
    let rows: Vec<(f64, f64, f64)> = ts
        .par_iter()
        .map(|&t| -> Result<(f64, f64, f64)> {
            let (a, ea) = smu(nu, t, u)?;
            let (c, ec) = smu(nu + 1.0, t, u)?;
            let ratio = (nu + 1.0) * c * (t * t + b) / (nu * a);
            let err = ratio.abs() * (ea / a.abs() + ec / c.abs() + 8.0 * EPS);
            Ok((t, ratio, err))
        })
        .collect::<Result<_>>()?;
    let pm = params(&[("nu", nu), ("b", b), ("u", u)]);
    let mut r = VerificationReport::new("monotonicity");
    for (t, ratio, err) in rows {
        r.less("h_positive", &pm, t, ratio, 1.0, err);
    }
    Ok(r)
}

/// `((ν+1) S_{ν+1}(t,u))^{1/(ν+1)} ≤ (ν S_ν(t,u))^{1/ν}` on the grid.
pub fn wilkins_style_check(nu: f64, u: f64, grid: &GridSpec) -> Result<VerificationReport> {
    if !(nu > 0.0) {
        return Err(Error::Domain(format!("need nu > 0, got {nu}")));
    }
    grid.validate()?;
    let rows: Vec<(f64, f64, f64, f64)> = grid
        .t_points
        .par_iter()
        .map(|&t| -> Result<(f64, f64, f64, f64)> {
            let (a, ea) = smu(nu, t, u)?;
            let (c, ec) = smu(nu + 1.0, t, u)?;
            let lhs = ((nu + 1.0) * c).powf(1.0 / (nu + 1.0));
            let rhs = (nu * a).powf(1.0 / nu);
            let err = lhs * (ec / c / (nu + 1.0) + 4.0 * EPS) + rhs * (ea / a / nu + 4.0 * EPS);
            Ok((t, lhs, rhs, err))
        })
        .collect::<Result<_>>()?;
    let pm = params(&[("nu", nu), ("u", u)]);
    let mut r = VerificationReport::new("wilkins_style");
    for (t, lhs, rhs, err) in rows {
        r.less_eq("root_order", &pm, t, lhs, rhs, err);
    }
    Ok(r)
}

/// Which sign pattern a complete-monotonicity probe tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CmSide {
    /// `(-1)^k ψ^{(k)} ≥ 0`.
    Plus,
    /// `(-1)^k (-ψ)^{(k)} ≥ 0`.
    Minus,
}

/// Finite-order probe of complete monotonicity of
/// `ψ_{p,u,μ}(t) = 1/(μ(p+t)^μ) - S_μ(√t, u)`. The order shift
/// `(-1)^k ψ^{(k)}_{p,u,μ} = Γ(μ+k+1)/Γ(μ+1) ψ_{p,u,μ+k}` turns order `k`
/// into a sign check of `ψ_{p,u,μ+k}`, done on the scaled form
/// `ν (p+t)^ν S_ν(√t, u)` against 1.
pub fn cm_probe(
    p: f64,
    u: f64,
    mu: f64,
    k_max: usize,
    side: CmSide,
    grid: &GridSpec,
) -> Result<VerificationReport> {
    if !(p >= 0.0 && u >= 0.0 && mu > 0.0) {
        return Err(Error::Domain(format!("need p ≥ 0, u ≥ 0, mu > 0 (p = {p}, u = {u}, mu = {mu})")));
    }
    let ts = positive_points(grid)?;
    let jobs: Vec<(usize, f64)> = (0..=k_max).flat_map(|k| ts.iter().map(move |&t| (k, t))).collect();
    let rows: Vec<(usize, f64, f64, f64)> = jobs
        .par_iter()
        .map(|&(k, t)| -> Result<(usize, f64, f64, f64)> {
            let nu = mu + k as f64;
            let ls = nu.ln() + nu * (p + t).ln();
            let r = eval_s_scaled(&MathieuParams::classical(nu, u), t.sqrt(), 1e-15, ls)?;
            let err = r.err_lo.max(r.err_hi) + 8.0 * EPS * (1.0 + ls.abs()) * r.value;
            Ok((k, t, r.value, err))
        })
        .collect::<Result<_>>()?;
    let name = match side {
        CmSide::Plus => "cm_probe_plus",
        CmSide::Minus => "cm_probe_minus",
    };
    let mut r = VerificationReport::new(name);
    for (k, t, v, err) in rows {
        let pm = params(&[("p", p), ("u", u), ("mu", mu), ("k", k as f64)]);
        let err = err + grid.tolerance;
        match side {
            CmSide::Plus => r.less_eq("order_shift", &pm, t, v, 1.0, err),
            CmSide::Minus => r.less_eq("order_shift", &pm, t, 1.0, v, err),
        }
    }
    Ok(r)
}

/// Tail envelope of `e^{-(u+1)x} / (1 - e^{-x})` times `x^k`, for `x ≥ 1`.
fn bose_tail(scale: f64, k: f64, u: f64) -> impl Fn(f64) -> f64 {
    let e = exp_power_tail(scale * Q1, k, u + 1.0);
    move |x: f64| if x < 1.0 { f64::INFINITY } else { e(x) }
}

/// Kernels whose normalized transform `c_μ 𝔉_{2μ+1}(h)` has a closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TransformKernel {
    /// `e^{-px}/x`, transforming to `1/(μ(p²+t²)^μ)`.
    Laplace,
    /// `e^{-ux}/(e^x-1)`, transforming to `S_μ(t, u)`.
    Bose,
    /// `g_{p,u}`, the difference of the two.
    Difference,
}

impl std::str::FromStr for TransformKernel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "laplace" => Ok(TransformKernel::Laplace),
            "bose" => Ok(TransformKernel::Bose),
            "difference" => Ok(TransformKernel::Difference),
            _ => Err(Error::Domain(format!("unknown kernel '{s}' (laplace, bose, difference)"))),
        }
    }
}

/// One point of a normalized transform next to its closed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransformPoint {
    pub t: f64,
    pub transform: f64,
    /// Quadrature error estimate of `transform`.
    pub error: f64,
    pub closed_form: f64,
    /// Error of `closed_form` (from the series evaluation).
    pub closed_form_error: f64,
}

/// `c_μ 𝔉_{2μ+1}(h)(t)` for one of the [`TransformKernel`]s.
pub fn kernel_transform(kernel: TransformKernel, p: f64, u: f64, mu: f64, t: f64) -> Result<TransformPoint> {
    let uses_p = kernel != TransformKernel::Bose;
    let uses_u = kernel != TransformKernel::Laplace;
    if !(mu > 0.0) || (uses_p && !(p > 0.0)) || (uses_u && !(u > -1.0)) {
        return Err(Error::Domain(format!("need mu > 0, p > 0, u > -1 (mu = {mu}, p = {p}, u = {u})")));
    }
    let c = c_mu(mu);
    let j0 = bessel_j(mu - 0.5, 0.0);
    let m = 2.0 * mu + 1.0;
    let laplace = 1.0 / (mu * (p * p + t * t).powf(mu));
    let h = match kernel {
        TransformKernel::Laplace => {
            let tail = exp_power_tail(j0, 2.0 * mu - 1.0, p);
            hankel_transform(|x: f64| (-p * x).exp() / x, m, t, None, Some(&tail))?
        }
        TransformKernel::Bose => {
            let tail = bose_tail(j0, 2.0 * mu, u);
            let f = move |x: f64| (-(u + 1.0) * x).exp() / -(-x).exp_m1();
            hankel_transform(f, m, t, None, Some(&tail))?
        }
        TransformKernel::Difference => {
            let t1 = exp_power_tail(j0, 2.0 * mu - 1.0, p);
            let t2 = bose_tail(j0, 2.0 * mu, u);
            let tail = move |x: f64| t1(x) + t2(x);
            hankel_transform(|x: f64| g_pu(p, u, x), m, t, None, Some(&tail))?
        }
    };
    let (closed_form, closed_form_error) = match kernel {
        TransformKernel::Laplace => (laplace, EPS * laplace),
        TransformKernel::Bose => smu(mu, t, u)?,
        TransformKernel::Difference => {
            let (s, e) = smu(mu, t, u)?;
            (laplace - s, e + EPS * laplace)
        }
    };
    Ok(TransformPoint {
        t,
        transform: c * h.value,
        error: c * h.error,
        closed_form,
        closed_form_error,
    })
}

fn transform_check(
    name: &str,
    kernel: TransformKernel,
    (p, u, mu): (f64, f64, f64),
    pm: Params,
    grid: &GridSpec,
) -> Result<VerificationReport> {
    grid.validate()?;
    let rows: Vec<TransformPoint> = grid
        .t_points
        .par_iter()
        .map(|&t| kernel_transform(kernel, p, u, mu, t))
        .collect::<Result<_>>()?;
    let mut r = VerificationReport::new(name);
    for row in rows {
        r.close(name, &pm, row.t, row.transform, row.closed_form, grid.tolerance);
    }
    Ok(r)
}

/// `c_μ 𝔉_{2μ+1}(e^{-px}/x)(a) = 1/(μ(p²+a²)^μ)`.
pub fn laplace_bessel_check(p: f64, mu: f64, grid: &GridSpec) -> Result<VerificationReport> {
    let pm = params(&[("p", p), ("mu", mu)]);
    transform_check("laplace_bessel", TransformKernel::Laplace, (p, 0.0, mu), pm, grid)
}

/// `S_μ(t, u) = c_μ 𝔉_{2μ+1}(e^{-ux}/(e^x-1))(t)`.
pub fn series_transform_check(mu: f64, u: f64, grid: &GridSpec) -> Result<VerificationReport> {
    let pm = params(&[("mu", mu), ("u", u)]);
    transform_check("series_transform", TransformKernel::Bose, (1.0, u, mu), pm, grid)
}

/// `c_μ 𝔉_{2μ+1}(g_{p,u})(t) = 1/(μ(p²+t²)^μ) - S_μ(t, u)`.
pub fn difference_transform_check(p: f64, u: f64, mu: f64, grid: &GridSpec) -> Result<VerificationReport> {
    let pm = params(&[("p", p), ("u", u), ("mu", mu)]);
    transform_check("difference_transform", TransformKernel::Difference, (p, u, mu), pm, grid)
}

/// `d/dt {t^{2μ} S_μ(t,u)} = -c_μ t^{2μ-1} 𝔉_{2μ+1}(h_u')(t)`. The left side
/// is a central difference with step `1e-5 t` and one Richardson level;
/// agreement is required to the grid tolerance.
pub fn transform_derivative_check(mu: f64, u: f64, grid: &GridSpec) -> Result<VerificationReport> {
    if !(mu > 0.0 && u > -1.0) {
        return Err(Error::Domain(format!("need mu > 0, u > -1 (mu = {mu}, u = {u})")));
    }
    let ts = positive_points(grid)?;
    let c = c_mu(mu);
    let j0 = bessel_j(mu - 0.5, 0.0);
    // |h_u'(x)| ≤ Q1 e^{-(u+1)x} (1 + x (|u| + Q1)) for x ≥ 1
    let t1 = bose_tail(j0, 2.0 * mu, u);
    let t2 = bose_tail(j0 * (u.abs() + Q1), 2.0 * mu + 1.0, u);
    let tail = move |x: f64| t1(x) + t2(x);
    let big_f = |t: f64| smu(mu, t, u).map(|(s, _)| t.powf(2.0 * mu) * s);
    let rows: Vec<(f64, f64, f64)> = ts
        .par_iter()
        .map(|&t| -> Result<(f64, f64, f64)> {
            let h = 1e-5 * t;
            let d = |h: f64| -> Result<f64> { Ok((big_f(t + h)? - big_f(t - h)?) / (2.0 * h)) };
            let lhs = (4.0 * d(0.5 * h)? - d(h)?) / 3.0;
            let hk = hankel_transform(|x: f64| h_u_prime(u, x), 2.0 * mu + 1.0, t, None, Some(&tail))?;
            Ok((t, lhs, -c * t.powf(2.0 * mu - 1.0) * hk.value))
        })
        .collect::<Result<_>>()?;
    let pm = params(&[("mu", mu), ("u", u)]);
    let mut r = VerificationReport::new("transform_derivative");
    for (t, lhs, rhs) in rows {
        r.close("derivative", &pm, t, lhs, rhs, grid.tolerance);
    }
    Ok(r)
}

/// `∫_t^∞ w(y) y |y²-t²|^{ν-μ-1} dy`: tanh-sinh on `[t, t+1]` for the
/// algebraic endpoint, the mapped adaptive rule beyond.
fn weighted_tail<W: Fn(f64) -> f64 + Sync>(w: W, nu: f64, mu: f64, t: f64) -> Result<(f64, f64)> {
    let e = nu - mu - 1.0;
    let near = |y: f64, dt: f64, _db: f64| w(y) * y * (dt * (y + t)).powf(e);
    let far = |y: f64| w(y) * y * ((y - t) * (y + t)).powf(e);
    let a = tanh_sinh(&near, t, t + 1.0, 1e-14)?;
    let b = integrate_to_inf(&far, t + 1.0, 1e-14, 1e-12)?;
    Ok((a.value + b.value, a.error + b.error))
}

/// Weighted tail integral of `1/(ν(p²+y²)^ν) - S_ν(y,u)` against the
/// closed form `B(ν-μ, μ+1)/2 (1/(μ(p²+t²)^μ) - S_μ(t,u))`.
pub fn weighted_tail_check(nu: f64, mu: f64, p: f64, u: f64, t: f64, tol: f64) -> Result<VerificationReport> {
    if !(nu > mu && mu > 0.0) {
        return Err(Error::Domain(format!("need nu > mu > 0 (nu = {nu}, mu = {mu})")));
    }
    let fail = Failure::new();
    let w = |y: f64| {
        let s = fail.value(smu(nu, y, u).map(|v| v.0));
        1.0 / (nu * (p * p + y * y).powf(nu)) - s
    };
    let (lhs, _) = weighted_tail(w, nu, mu, t)?;
    fail.check()?;
    let (s, _) = smu(mu, t, u)?;
    let beta = beta_fn(nu - mu, mu + 1.0)?;
    let rhs = 0.5 * beta * (1.0 / (mu * (p * p + t * t).powf(mu)) - s);
    let mut r = VerificationReport::new("weighted_tail");
    let pm = params(&[("nu", nu), ("mu", mu), ("p", p), ("u", u)]);
    r.close("weighted_tail", &pm, t, lhs, rhs, tol);
    Ok(r)
}

/// The same transfer for `H_{ν,b}`:
/// `∫_t^∞ H_{ν,b}(y,u) y|y²-t²|^{ν-μ-1} dy = B(ν-μ, μ+1)/2 H_{μ,b}(t,u)`.
pub fn weighted_tail_h_check(nu: f64, mu: f64, b: f64, u: f64, t: f64, tol: f64) -> Result<VerificationReport> {
    if !(nu > mu && mu > 0.0) {
        return Err(Error::Domain(format!("need nu > mu > 0 (nu = {nu}, mu = {mu})")));
    }
    let h = |n: f64, y: f64| -> Result<f64> {
        let (a, _) = smu(n, y, u)?;
        let (c, _) = smu(n + 1.0, y, u)?;
        Ok(n * a - (n + 1.0) * c * (y * y + b))
    };
    let fail = Failure::new();
    let w = |y: f64| fail.value(h(nu, y));
    let (lhs, _) = weighted_tail(w, nu, mu, t)?;
    fail.check()?;
    let hm = h(mu, t)?;
    let beta = beta_fn(nu - mu, mu + 1.0)?;
    let rhs = 0.5 * beta * hm;
    let mut r = VerificationReport::new("weighted_tail_h");
    let pm = params(&[("nu", nu), ("mu", mu), ("b", b), ("u", u)]);
    r.close("weighted_tail_h", &pm, t, lhs, rhs, tol);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::log_spaced;
    use crate::sharp::{ExpKernel, PowerKernel};

    fn grid(a: f64, b: f64, n: usize) -> GridSpec {
        GridSpec::new(log_spaced(a, b, n), 1e-9).unwrap()
    }

    #[test]
    fn hermite_hadamard_examples() {
        let sq = |x: f64| x * x;
        let r = hermite_hadamard_check(&sq, 0.0, 1.0, true).unwrap();
        assert!(r.conclusive(), "{r:?}");
        let lin = |x: f64| 3.0 * x + 1.0;
        assert!(hermite_hadamard_check(&lin, 0.0, 2.0, false).unwrap().passed);
        // equality case cannot be verified strictly
        assert!(!hermite_hadamard_check(&lin, 0.0, 2.0, true).unwrap().conclusive());
        let inv = |x: f64| 1.0 / (x * x);
        let r = hermite_hadamard_check(&inv, 1.0, 2.0, true).unwrap();
        assert!(r.conclusive());
        let lhs = r.total;
        assert_eq!(lhs, 2);
        // a concave function violates it
        let cav = |x: f64| -x * x;
        assert!(!hermite_hadamard_check(&cav, 0.0, 1.0, false).unwrap().passed);
    }

    #[test]
    fn fsf_examples() {
        // g = x^-2, u = 0, y = 1: 1/2 + 1/16 ≤ S_1(1, 0) ≤ 1
        let k = PowerKernel { mu: 1.0 };
        let r = fsf_bounds_check(&k, 0.0, 1.0, true).unwrap();
        assert!(r.conclusive(), "{r:?}");
        // only the lower bound applies at u = -1.25
        let r = fsf_bounds_check(&k, -1.25, 1.0, true).unwrap();
        assert_eq!(r.total, 1);
        assert!(r.conclusive());
        let r = fsf_bounds_check(&ExpKernel { lambda: 1.0 }, 0.5, 2.0, true).unwrap();
        assert!(r.conclusive());
        assert!(fsf_bounds_check(&k, -2.0, 1.0, true).is_err());
    }

    #[test]
    fn classical_passes() {
        let r = classical_inequalities_check(&grid(0.01, 100.0, 40)).unwrap();
        assert!(r.conclusive(), "{}", r.summary());
        assert_eq!(r.total, 40 * 8);
    }

    #[test]
    fn ner_branches() {
        let g = grid(0.05, 50.0, 30);
        assert!(ner_check(0.5, 0.0, 1.0, &g).unwrap().conclusive());
        assert!(ner_check(1.5, 0.0, 1.0, &g).unwrap().conclusive());
        assert!(ner_check(2.0, 0.5, 0.7, &g).unwrap().conclusive());
        assert_eq!(ner_check(0.75, 0.0, 1.0, &g).unwrap_err(), Error::Branch(0.75));
    }

    #[test]
    fn monotonicity() {
        let g = GridSpec::new(crate::analysis::linear_spaced(0.05, 10.0, 60), 1e-9).unwrap();
        assert!(monotonicity_check(1.0, 0.0, 0.0, &g).unwrap().conclusive());
        assert!(monotonicity_check(1.0, 1.0 / 6.0, 0.0, &g).unwrap().conclusive());
        let r = monotonicity_check(1.0, 10.0, 0.0, &g).unwrap();
        assert!(!r.passed);
        assert!(r.violations[0].point < 1.0);
    }

    #[test]
    fn wilkins_style() {
        let mut pts = vec![0.0];
        pts.extend(log_spaced(0.01, 20.0, 40));
        let g = GridSpec::new(pts, 1e-9).unwrap();
        let r = wilkins_style_check(1.0, 0.0, &g).unwrap();
        assert!(r.passed, "{}", r.summary());
        let v = &r.violations;
        assert!(v.is_empty());
    }

    #[test]
    fn cm_examples() {
        let g = grid(0.01, 100.0, 25);
        assert!(cm_probe(2.0, 1.0, 1.0, 8, CmSide::Plus, &g).unwrap().passed);
        assert!(cm_probe(1.0, 0.0, 1.0, 8, CmSide::Minus, &g).unwrap().passed);
        assert!(!cm_probe(0.24, 0.0, 1.0, 8, CmSide::Plus, &g).unwrap().passed);
    }

    #[test]
    fn hankel_identities() {
        let g = GridSpec::new(vec![0.5, 1.0, 2.0, 5.0], 1e-8).unwrap();
        assert!(laplace_bessel_check(1.0, 1.0, &g).unwrap().passed);
        assert!(laplace_bessel_check(0.7, 0.3, &g).unwrap().passed);
        assert!(series_transform_check(1.0, 0.0, &g).unwrap().passed);
        assert!(series_transform_check(0.6, 0.5, &g).unwrap().passed);
        assert!(difference_transform_check(0.4, 0.0, 1.0, &g).unwrap().passed);
        assert!(difference_transform_check(1.3, 0.2, 1.5, &g).unwrap().passed);
    }

    #[test]
    fn derivative_identity() {
        let g = GridSpec::new(vec![0.5, 1.0, 2.0], 1e-8).unwrap();
        let r = transform_derivative_check(1.0, 0.0, &g).unwrap();
        assert!(r.passed, "{r:?}");
        assert!(r.violations.is_empty());
        let r = transform_derivative_check(0.6, 0.5, &g).unwrap();
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn weighted_tail_identities() {
        assert!(weighted_tail_check(2.0, 1.0, 1.0, 0.0, 1.0, 1e-6).unwrap().passed);
        assert!(weighted_tail_check(2.5, 1.0, 0.5, 0.3, 0.7, 1e-6).unwrap().passed);
        assert!(weighted_tail_h_check(2.0, 1.0, 1.0 / 6.0, 0.0, 1.0, 1e-6).unwrap().passed);
    }
}
