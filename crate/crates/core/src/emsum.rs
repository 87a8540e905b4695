//! Euler-Maclaurin and Boole summation with offset `u` and explicit
//! remainder bounds.
//!
//! For a function `F` on `[q, ∞)` (with `q ≤ 0`) the engines estimate
//!
//! ```text
//!   sum_{k≥1} F(eps k + eps u)            (em_sum)
//!   sum_{k≥1} (-1)^{k-1} G(eps k + eps u) (boole_sum)
//! ```
//!
//! from the integral of `F`, the derivatives `F^(k)(0)` and Bernoulli /
//! Euler polynomial values at `-u`. The remainder bound uses certified sup
//! norms of the periodic splines and the total variation of `F^(n)`.
//!
//! The Stieltjes integrals of the finite identities are evaluated as Riemann
//! integrals against `F^(n+1)`, one panel per spline period.

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::polyfun::{
    bernoulli_poly, bernoulli_poly_fast, euler_poly, euler_poly_fast, poly_sup, spline_sup,
    SplineFamily, SplineKind, MAX_ORDER,
};
use crate::quad::{integrate, integrate_to_inf, KahanSum};
use serde::{Deserialize, Serialize};

/// What a summation engine needs from a summand.
///
/// `deriv(k, x)` must be available for `k ≤ max_order()` everywhere on
/// `[domain_left(), ∞)` and for `k = max_order() + 1` at interior points (the
/// remainder integrals and variations use it).
pub trait SmoothFunction: Sync {
    fn deriv(&self, k: usize, x: f64) -> f64;

    fn eval(&self, x: f64) -> f64 {
        self.deriv(0, x)
    }

    /// Derivatives `0..=order` at `x`.
    fn derivs(&self, x: f64, order: usize) -> Result<Vec<f64>> {
        Ok((0..=order).map(|k| self.deriv(k, x)).collect())
    }

    /// Highest derivative order guaranteed (including at `x = 0`).
    fn max_order(&self) -> usize;

    /// Left edge `q ≤ 0` of the domain.
    fn domain_left(&self) -> f64 {
        0.0
    }

    /// `∫_t^∞ F`, when known in closed form.
    fn tail_integral(&self, _t: f64) -> Option<f64> {
        None
    }

    /// Upper bound on `∫_x^∞ |F^(k+1)|`, used to close variation integrals.
    fn variation_tail(&self, _k: usize, _x: f64) -> Option<f64> {
        None
    }

    /// Upper bound on the total variation of `F^(k)` over `[a, b]` (`b` may be `+∞`).
    fn variation(&self, k: usize, a: f64, b: f64) -> Result<f64> {
        default_variation(self, k, a, b)
    }
}

/// `∫_a^b |F^(k+1)|` plus the quadrature error estimate.
pub fn default_variation<F: SmoothFunction + ?Sized>(f: &F, k: usize, a: f64, b: f64) -> Result<f64> {
    if b <= a {
        return Ok(0.0);
    }
    let integrand = |x: f64| f.deriv(k + 1, x).abs();
    if b.is_finite() {
        let r = integrate(&integrand, a, b, 1e-14, 1e-11)?;
        return Ok(r.value + r.error);
    }
    if f.variation_tail(k, a + 1.0).is_some() {
        let mut width = 1.0;
        for _ in 0..64 {
            let x = a + width;
            let tail = f.variation_tail(k, x).unwrap_or(f64::INFINITY);
            if tail <= 1e-15 || width > 1e6 {
                let r = integrate(&integrand, a, x, 1e-14, 1e-11)?;
                return Ok(r.value + r.error + tail);
            }
            width *= 2.0;
        }
    }
    let r = integrate_to_inf(&integrand, a, 1e-14, 1e-11)?;
    Ok(r.value + r.error)
}

/// `scale * exp(-lambda x)`, with closed forms for everything.
#[derive(Debug, Clone, Copy)]
pub struct Exponential {
    pub lambda: f64,
    pub scale: f64,
}

impl Exponential {
    pub fn new(lambda: f64) -> Self {
        Exponential { lambda, scale: 1.0 }
    }
}

impl SmoothFunction for Exponential {
    fn deriv(&self, k: usize, x: f64) -> f64 {
        self.scale * (-self.lambda).powi(k as i32) * (-self.lambda * x).exp()
    }

    fn max_order(&self) -> usize {
        MAX_ORDER
    }

    fn domain_left(&self) -> f64 {
        f64::NEG_INFINITY
    }

    fn tail_integral(&self, t: f64) -> Option<f64> {
        Some(self.scale * (-self.lambda * t).exp() / self.lambda)
    }

    fn variation_tail(&self, k: usize, x: f64) -> Option<f64> {
        Some(self.scale.abs() * self.lambda.powi(k as i32) * (-self.lambda * x).exp())
    }

    fn variation(&self, k: usize, a: f64, b: f64) -> Result<f64> {
        if b <= a {
            return Ok(0.0);
        }
        let eb = if b.is_finite() { (-self.lambda * b).exp() } else { 0.0 };
        Ok(self.scale.abs() * self.lambda.powi(k as i32) * ((-self.lambda * a).exp() - eb))
    }
}

type JetMap = dyn Fn(&Jet) -> Jet + Send + Sync;
type Tail = dyn Fn(f64) -> f64 + Send + Sync;
type VarTail = dyn Fn(usize, f64) -> f64 + Send + Sync;

/// A summand given as a composition of jet operations; derivatives of any
/// order come from Taylor arithmetic.
pub struct JetFunction {
    f: Box<JetMap>,
    max_order: usize,
    domain_left: f64,
    tail: Option<Box<Tail>>,
    var_tail: Option<Box<VarTail>>,
}

impl JetFunction {
    pub fn new(max_order: usize, f: impl Fn(&Jet) -> Jet + Send + Sync + 'static) -> Self {
        JetFunction {
            f: Box::new(f),
            max_order,
            domain_left: 0.0,
            tail: None,
            var_tail: None,
        }
    }

    pub fn with_domain_left(mut self, q: f64) -> Self {
        self.domain_left = q;
        self
    }

    pub fn with_tail_integral(mut self, t: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.tail = Some(Box::new(t));
        self
    }

    /// Decay envelope: an upper bound on `∫_x^∞ |F^(k+1)|`.
    pub fn with_variation_tail(
        mut self,
        t: impl Fn(usize, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        self.var_tail = Some(Box::new(t));
        self
    }

    pub fn jet(&self, x: f64, order: usize) -> Jet {
        (self.f)(&Jet::variable(x, order))
    }
}

impl SmoothFunction for JetFunction {
    fn deriv(&self, k: usize, x: f64) -> f64 {
        self.jet(x, k).derivative(k)
    }

    fn derivs(&self, x: f64, order: usize) -> Result<Vec<f64>> {
        Ok(self.jet(x, order).derivatives())
    }

    fn max_order(&self) -> usize {
        self.max_order
    }

    fn domain_left(&self) -> f64 {
        self.domain_left
    }

    fn tail_integral(&self, t: f64) -> Option<f64> {
        self.tail.as_ref().map(|f| f(t))
    }

    fn variation_tail(&self, k: usize, x: f64) -> Option<f64> {
        self.var_tail.as_ref().map(|f| f(k, x))
    }
}

/// Outcome of an infinite summation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EMResult {
    pub sum_estimate: f64,
    /// `(1/eps) ∫_0^∞ F`; zero for the alternating engine.
    pub integral_term: f64,
    /// Boundary terms for `k = 0..=n`.
    pub boundary_terms: Vec<f64>,
    pub remainder_bound: f64,
    pub n_used: usize,
    pub epsilon: f64,
    pub u: f64,
}

/// Both sides of a finite summation identity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiniteIdentity {
    pub lhs: f64,
    pub rhs: f64,
    /// Summed quadrature error estimates on the right-hand side.
    pub quad_error: f64,
}

impl FiniteIdentity {
    pub fn residual(&self) -> f64 {
        (self.lhs - self.rhs).abs()
    }
}

fn factorial(n: usize) -> f64 {
    (2..=n).fold(1.0, |a, k| a * k as f64)
}

const PANEL_ABS: f64 = 1e-14;
const PANEL_REL: f64 = 1e-13;

fn check_common<F: SmoothFunction + ?Sized>(f: &F, eps: f64, n: usize, spline_order: usize) -> Result<()> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::Domain(format!("eps must be positive, got {eps}")));
    }
    if n > f.max_order() {
        return Err(Error::OrderOverflow {
            requested: n,
            max: f.max_order(),
        });
    }
    if spline_order > MAX_ORDER {
        return Err(Error::OrderOverflow {
            requested: spline_order,
            max: MAX_ORDER,
        });
    }
    Ok(())
}

/// ∫_0^1 P(-u + u s) F^(n+1)(s eps u) eps u ds, the offset piece of the remainder.
fn offset_integral<F: SmoothFunction + ?Sized>(
    f: &F,
    poly: impl Fn(f64) -> f64,
    n: usize,
    eps: f64,
    u: f64,
) -> Result<(f64, f64)> {
    if u == 0.0 {
        return Ok((0.0, 0.0));
    }
    let g = |s: f64| poly(-u + u * s) * f.deriv(n + 1, s * eps * u) * eps * u;
    let r = integrate(&g, 0.0, 1.0, PANEL_ABS, PANEL_REL)?;
    Ok((r.value, r.error))
}

/// Both sides of the finite Euler-Maclaurin identity with offset `u`:
///
/// ```text
/// sum_{k=1}^p F(eps k + eps u) = (1/eps) ∫_0^{eps(p+u)} F
///   + sum_{k=0}^n (-1)^{k+1} eps^k/(k+1)! (B_{k+1}(0) F^(k)(eps(p+u)) - B_{k+1}(-u) F^(k)(0))
///   + (-1)^n eps^n/(n+1)! (∫_0^{eps p} b_{n+1}(t/eps) dF^(n)(t + eps u)
///                          + ∫_0^1 B_{n+1}(-u + u t) dF^(n)(t eps u))
/// ```
pub fn em_finite_identity<F: SmoothFunction + ?Sized>(
    f: &F,
    p: usize,
    eps: f64,
    u: f64,
    n: usize,
) -> Result<FiniteIdentity> {
    check_common(f, eps, n, n + 1)?;
    if p == 0 {
        return Err(Error::Domain("p must be a positive integer".into()));
    }
    if u <= -(p as f64) {
        return Err(Error::Domain(format!("u must exceed -p = {}, got {u}", -(p as f64))));
    }
    let u_minus = u.min(0.0);
    if eps * u_minus < f.domain_left() {
        return Err(Error::Domain(format!(
            "F is defined from {} but the identity needs [{}, {}]",
            f.domain_left(),
            eps * u_minus,
            eps * (p as f64 + u)
        )));
    }

    let mut lhs = KahanSum::new();
    for k in 1..=p {
        lhs.add(f.eval(eps * (k as f64 + u)));
    }

    let top = eps * (p as f64 + u);
    let mut rhs = KahanSum::new();
    let mut qerr = 0.0;
    let int = integrate(&|x: f64| f.eval(x), 0.0, top, PANEL_ABS, PANEL_REL)?;
    rhs.add(int.value / eps);
    qerr += int.error / eps;

    let d_top = f.derivs(top, n)?;
    let d_zero = f.derivs(0.0, n)?;
    for k in 0..=n {
        let c = (-1f64).powi(k as i32 + 1) * eps.powi(k as i32) / factorial(k + 1);
        let b0 = bernoulli_poly(k + 1, 0.0)?;
        let bu = bernoulli_poly(k + 1, -u)?;
        rhs.add(c * (b0 * d_top[k] - bu * d_zero[k]));
    }

    // spline integral, one panel per period: t = j eps + s
    let mut spline_part = KahanSum::new();
    for j in 0..p {
        let base = j as f64 * eps + eps * u;
        let g = |s: f64| bernoulli_poly_fast(n + 1, s / eps) * f.deriv(n + 1, base + s);
        let r = integrate(&g, 0.0, eps, PANEL_ABS, PANEL_REL)?;
        spline_part.add(r.value);
        qerr += r.error;
    }
    let (off, off_err) = offset_integral(f, |x| bernoulli_poly_fast(n + 1, x), n, eps, u)?;
    qerr += off_err;
    let c = (-1f64).powi(n as i32) * eps.powi(n as i32) / factorial(n + 1);
    rhs.add(c * (spline_part.value() + off));
    let qerr = qerr * c.abs().max(1.0 / eps);

    Ok(FiniteIdentity {
        lhs: lhs.value(),
        rhs: rhs.value(),
        quad_error: qerr,
    })
}

/// Both sides of the finite Boole identity (alternating sum over `2p` terms).
pub fn boole_finite_identity<G: SmoothFunction + ?Sized>(
    g: &G,
    p: usize,
    eps: f64,
    u: f64,
    n: usize,
) -> Result<FiniteIdentity> {
    check_common(g, eps, n, n)?;
    if p == 0 {
        return Err(Error::Domain("p must be a positive integer".into()));
    }
    if u <= -2.0 * p as f64 {
        return Err(Error::Domain(format!("u must exceed -2p, got {u}")));
    }
    if eps * u.min(0.0) < g.domain_left() {
        return Err(Error::Domain("G is not defined on the required interval".into()));
    }
    let mut lhs = KahanSum::new();
    for k in 1..=2 * p {
        let s = if k % 2 == 1 { 1.0 } else { -1.0 };
        lhs.add(s * g.eval(eps * (k as f64 + u)));
    }

    let top = eps * (2.0 * p as f64 + u);
    let d_top = g.derivs(top, n)?;
    let d_zero = g.derivs(0.0, n)?;
    let mut rhs = KahanSum::new();
    for k in 0..=n {
        let c = (-1f64).powi(k as i32 + 1) * eps.powi(k as i32) / (2.0 * factorial(k));
        let e0 = euler_poly(k, 0.0)?;
        let eu = euler_poly(k, -u)?;
        rhs.add(c * (e0 * d_top[k] - eu * d_zero[k]));
    }
    let mut qerr = 0.0;
    let mut spline_part = KahanSum::new();
    for j in 0..2 * p {
        let base = j as f64 * eps + eps * u;
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let h = |s: f64| sign * euler_poly_fast(n, s / eps) * g.deriv(n + 1, base + s);
        let r = integrate(&h, 0.0, eps, PANEL_ABS, PANEL_REL)?;
        spline_part.add(r.value);
        qerr += r.error;
    }
    let (off, off_err) = offset_integral(g, |x| euler_poly_fast(n, x), n, eps, u)?;
    qerr += off_err;
    let c = (-1f64).powi(n as i32) * eps.powi(n as i32) / (2.0 * factorial(n));
    rhs.add(c * (spline_part.value() + off));
    Ok(FiniteIdentity {
        lhs: lhs.value(),
        rhs: rhs.value(),
        quad_error: qerr * c.abs().max(1.0),
    })
}

fn check_offset<F: SmoothFunction + ?Sized>(f: &F, eps: f64, u: f64) -> Result<()> {
    if u < 0.0 {
        let q = f.domain_left();
        if !(q < 0.0) || eps * u <= q {
            return Err(Error::Precondition(format!(
                "u = {u} < 0 requires eps < q/u with q = {q} the left edge of the domain (eps = {eps})"
            )));
        }
    }
    Ok(())
}

/// Sup of |P| between `-u` and 0 for the offset part of the bound.
fn offset_sup(n: usize, fam: SplineFamily, u: f64) -> Result<f64> {
    if u == 0.0 {
        return Ok(0.0);
    }
    let (a, b) = if u > 0.0 { (-u, 0.0) } else { (0.0, -u) };
    poly_sup(n, fam, a, b)
}

/// Generalized Euler-Maclaurin summation of `sum_{k≥1} F(eps (k + u))`.
///
/// The caller asserts `F^(k)(+∞) = 0` for `k ≤ n` and integrability of `F`.
/// For `u < 0` the function must be defined on `[q, ∞)` with `eps u > q`.
pub fn em_sum<F: SmoothFunction + ?Sized>(f: &F, eps: f64, u: f64, n: usize) -> Result<EMResult> {
    check_common(f, eps, n, n + 1)?;
    check_offset(f, eps, u)?;
    let (integral, int_err) = match f.tail_integral(0.0) {
        Some(v) => (v, 4.0 * f64::EPSILON * v.abs()),
        None => {
            let r = integrate_to_inf(&|x: f64| f.eval(x), 0.0, 1e-14, 1e-13)?;
            (r.value, r.error)
        }
    };
    let integral_term = integral / eps;
    let d0 = f.derivs(0.0, n)?;
    let mut boundary_terms = Vec::with_capacity(n + 1);
    for (k, dk) in d0.iter().enumerate() {
        let c = (-1f64).powi(k as i32) * eps.powi(k as i32) / factorial(k + 1);
        boundary_terms.push(c * bernoulli_poly(k + 1, -u)? * dk);
    }
    let mut acc = KahanSum::new();
    acc.add(integral_term);
    for b in &boundary_terms {
        acc.add(*b);
    }
    let sb = spline_sup(SplineKind::bernoulli(n + 1))?;
    let v_far = f.variation(n, eps * u, f64::INFINITY)?;
    let v_near = if u > 0.0 {
        f.variation(n, 0.0, eps * u)?
    } else {
        f.variation(n, eps * u, 0.0)?
    };
    let sp = offset_sup(n + 1, SplineFamily::Bernoulli, u)?;
    let bound = eps.powi(n as i32) / factorial(n + 1) * (sb * v_far + sp * v_near);
    let fp_slack = int_err / eps + 8.0 * f64::EPSILON * acc.abs_total();
    Ok(EMResult {
        sum_estimate: acc.value(),
        integral_term,
        boundary_terms,
        remainder_bound: bound * (1.0 + 1e-12) + fp_slack,
        n_used: n,
        epsilon: eps,
        u,
    })
}

/// Generalized Boole summation of `sum_{k≥1} (-1)^{k-1} G(eps (k + u))`.
pub fn boole_sum<G: SmoothFunction + ?Sized>(g: &G, eps: f64, u: f64, n: usize) -> Result<EMResult> {
    check_common(g, eps, n, n)?;
    check_offset(g, eps, u)?;
    let d0 = g.derivs(0.0, n)?;
    let mut boundary_terms = Vec::with_capacity(n + 1);
    for (k, dk) in d0.iter().enumerate() {
        let c = (-1f64).powi(k as i32) * eps.powi(k as i32) / (2.0 * factorial(k));
        boundary_terms.push(c * euler_poly(k, -u)? * dk);
    }
    let mut acc = KahanSum::new();
    for b in &boundary_terms {
        acc.add(*b);
    }
    let se = spline_sup(SplineKind::euler(n))?;
    let v_far = g.variation(n, eps * u, f64::INFINITY)?;
    let v_near = if u > 0.0 {
        g.variation(n, 0.0, eps * u)?
    } else {
        g.variation(n, eps * u, 0.0)?
    };
    let sp = offset_sup(n, SplineFamily::Euler, u)?;
    let bound = eps.powi(n as i32) / (2.0 * factorial(n)) * (se * v_far + sp * v_near);
    Ok(EMResult {
        sum_estimate: acc.value(),
        integral_term: 0.0,
        boundary_terms,
        remainder_bound: bound * (1.0 + 1e-12) + 8.0 * f64::EPSILON * acc.abs_total(),
        n_used: n,
        epsilon: eps,
        u,
    })
}

/// One term `coeff * x^power` of an asymptotic expansion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymTerm {
    /// Position in the coefficient stream; `None` for a leading term outside it.
    pub index: Option<usize>,
    pub power: f64,
    pub coeff: f64,
    /// Exact value when known, as a rational string.
    pub exact: Option<String>,
}

/// Coefficient stream of an asymptotic expansion in a variable `x`
/// (`eps` for the summation engines, `t` for the series).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticSeries {
    pub variable: String,
    pub leading: Vec<AsymTerm>,
    pub terms: Vec<AsymTerm>,
}

/// Partial sum together with the size of the first omitted term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Truncation {
    pub value: f64,
    /// |first omitted nonzero term|; a heuristic error proxy, not a bound.
    pub next_term: f64,
    pub terms_used: usize,
}

impl AsymptoticSeries {
    /// Leading terms plus stream terms with `index < n`.
    pub fn eval(&self, x: f64, n: usize) -> Truncation {
        let mut acc = KahanSum::new();
        for t in &self.leading {
            acc.add(t.coeff * x.powf(t.power));
        }
        let mut used = 0;
        for t in self.terms.iter().filter(|t| t.index.map(|i| i < n).unwrap_or(true)) {
            acc.add(t.coeff * x.powf(t.power));
            used += 1;
        }
        let next_term = self
            .terms
            .iter()
            .filter(|t| t.index.map(|i| i >= n).unwrap_or(false) && t.coeff != 0.0)
            .map(|t| (t.coeff * x.powf(t.power)).abs())
            .next()
            .unwrap_or(0.0);
        Truncation {
            value: acc.value(),
            next_term,
            terms_used: used,
        }
    }

    pub fn coefficients(&self) -> Vec<f64> {
        self.terms.iter().map(|t| t.coeff).collect()
    }
}

/// Asymptotic coefficients of `sum_{k≥1} F(eps (k + u))` as `eps → 0`:
/// `(1/eps) ∫F` followed by `c_k eps^k` with
/// `c_k = (-1)^k B_{k+1}(-u) F^(k)(0) / (k+1)!`.
pub fn em_asym_coeffs<F: SmoothFunction + ?Sized>(f: &F, u: f64, k_max: usize) -> Result<AsymptoticSeries> {
    if k_max > f.max_order() || k_max + 1 > MAX_ORDER {
        return Err(Error::OrderOverflow {
            requested: k_max,
            max: f.max_order().min(MAX_ORDER - 1),
        });
    }
    let integral = match f.tail_integral(0.0) {
        Some(v) => v,
        None => integrate_to_inf(&|x: f64| f.eval(x), 0.0, 1e-14, 1e-13)?.value,
    };
    let d0 = f.derivs(0.0, k_max)?;
    let mut terms = Vec::with_capacity(k_max + 1);
    for (k, dk) in d0.iter().enumerate() {
        let c = (-1f64).powi(k as i32) / factorial(k + 1) * bernoulli_poly(k + 1, -u)? * dk;
        terms.push(AsymTerm {
            index: Some(k),
            power: k as f64,
            coeff: c,
            exact: None,
        });
    }
    Ok(AsymptoticSeries {
        variable: "eps".into(),
        leading: vec![AsymTerm {
            index: None,
            power: -1.0,
            coeff: integral,
            exact: None,
        }],
        terms,
    })
}

/// Asymptotic coefficients of `sum_{k≥1} (-1)^{k-1} G(eps (k + u))`:
/// `c_k = (-1)^k E_k(-u) G^(k)(0) / (2 k!)`.
pub fn boole_asym_coeffs<G: SmoothFunction + ?Sized>(g: &G, u: f64, k_max: usize) -> Result<AsymptoticSeries> {
    if k_max > g.max_order() || k_max > MAX_ORDER {
        return Err(Error::OrderOverflow {
            requested: k_max,
            max: g.max_order().min(MAX_ORDER),
        });
    }
    let d0 = g.derivs(0.0, k_max)?;
    let mut terms = Vec::with_capacity(k_max + 1);
    for (k, dk) in d0.iter().enumerate() {
        let c = (-1f64).powi(k as i32) / (2.0 * factorial(k)) * euler_poly(k, -u)? * dk;
        terms.push(AsymTerm {
            index: Some(k),
            power: k as f64,
            coeff: c,
            exact: None,
        });
    }
    Ok(AsymptoticSeries {
        variable: "eps".into(),
        leading: Vec::new(),
        terms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geometric(eps: f64, u: f64) -> f64 {
        (-eps * u).exp() / eps.exp_m1()
    }

    fn geometric_alt(eps: f64, u: f64) -> f64 {
        (-eps * u).exp() / (eps.exp() + 1.0)
    }

    #[test]
    fn finite_identity_exponential() {
        let f = Exponential::new(1.0);
        let r = em_finite_identity(&f, 10, 0.1, 0.0, 3).unwrap();
        let direct: f64 = (1..=10).map(|k| (-0.1 * k as f64).exp()).sum();
        assert!((r.lhs - direct).abs() < 1e-14);
        assert!(r.residual() <= 1e-10, "residual {}", r.residual());
        let r = em_finite_identity(&f, 10, 0.1, -0.5, 2).unwrap();
        assert!(r.residual() <= 1e-10, "residual {}", r.residual());
    }

    #[test]
    fn finite_identity_linear_is_exact() {
        let f = JetFunction::new(8, |x: &Jet| x.clone()).with_domain_left(f64::NEG_INFINITY);
        let r = em_finite_identity(&f, 5, 1.0, 0.0, 1).unwrap();
        assert_eq!(r.lhs, 15.0);
        assert!(r.residual() < 1e-13);
    }

    #[test]
    fn finite_identity_rejects_bad_domain() {
        let f = JetFunction::new(8, |x: &Jet| x.exp());
        assert!(matches!(em_finite_identity(&f, 5, 0.1, -0.5, 1), Err(Error::Domain(_))));
        assert!(matches!(em_finite_identity(&f, 5, 0.1, -6.0, 1), Err(Error::Domain(_))));
    }

    #[test]
    fn boole_identity_matches_em_combination() {
        let g = JetFunction::new(10, |x: &Jet| (x.powi(2).add_scalar(1.0)).recip())
            .with_domain_left(-10.0);
        for &(p, eps, u, n) in &[(6usize, 0.2, 0.3, 2usize), (5, 0.3, -0.4, 3), (8, 0.1, 0.0, 1)] {
            let b = boole_finite_identity(&g, p, eps, u, n).unwrap();
            let a = em_finite_identity(&g, 2 * p, eps, u, n).unwrap();
            let c = em_finite_identity(&g, p, 2.0 * eps, u / 2.0, n).unwrap();
            assert!((b.rhs - (a.rhs - 2.0 * c.rhs)).abs() < 1e-10);
            assert!(b.residual() < 1e-10);
        }
    }

    #[test]
    fn em_sum_geometric() {
        let f = Exponential::new(1.0);
        let r = em_sum(&f, 0.01, 0.0, 5).unwrap();
        let exact = geometric(0.01, 0.0);
        assert!((r.sum_estimate - exact).abs() <= r.remainder_bound);
        // n = 0 boundary term is B_1(0) F(0) = -1/2
        let r0 = em_sum(&f, 0.3, 0.0, 0).unwrap();
        assert_eq!(r0.boundary_terms[0], -0.5);
        assert!((r0.sum_estimate - geometric(0.3, 0.0)).abs() <= r0.remainder_bound);
    }

    #[test]
    fn em_sum_negative_offset_requires_room() {
        let f = JetFunction::new(6, |x: &Jet| (-x).exp()).with_domain_left(-0.5);
        assert!(matches!(em_sum(&f, 1.0, -0.6, 2), Err(Error::Precondition(_))));
        let r = em_sum(&f, 0.5, -0.6, 2).unwrap();
        assert!((r.sum_estimate - geometric(0.5, -0.6)).abs() <= r.remainder_bound);
    }

    #[test]
    fn boole_sum_geometric() {
        let g = Exponential::new(1.0);
        let r = boole_sum(&g, 0.01, 0.0, 5).unwrap();
        assert!((r.sum_estimate - geometric_alt(0.01, 0.0)).abs() <= r.remainder_bound);
        let r0 = boole_sum(&g, 0.4, 0.0, 0).unwrap();
        assert_eq!(r0.boundary_terms[0], 0.5);
    }

    #[test]
    fn bounds_hold_across_configurations() {
        let f = Exponential::new(1.0);
        for &eps in &[0.5, 0.1, 0.02] {
            for &u in &[0.0, 0.3, 1.7] {
                for n in [0usize, 1, 2, 4, 7] {
                    let r = em_sum(&f, eps, u, n).unwrap();
                    assert!((r.sum_estimate - geometric(eps, u)).abs() <= r.remainder_bound);
                    let r = boole_sum(&f, eps, u, n).unwrap();
                    assert!((r.sum_estimate - geometric_alt(eps, u)).abs() <= r.remainder_bound);
                }
            }
        }
    }

    #[test]
    fn variation_default_matches_closed_form() {
        let e = Exponential::new(2.0);
        let j = JetFunction::new(10, |x: &Jet| x.scale(-2.0).exp())
            .with_variation_tail(|k, x| 2f64.powi(k as i32) * (-2.0 * x).exp());
        for k in 0..4 {
            let a = e.variation(k, 0.3, f64::INFINITY).unwrap();
            let b = j.variation(k, 0.3, f64::INFINITY).unwrap();
            assert!((a - b).abs() < 1e-10 * a.max(1.0));
            // superadditivity
            let v1 = j.variation(k, 0.0, 0.7).unwrap();
            let v2 = j.variation(k, 0.7, 2.0).unwrap();
            let v = j.variation(k, 0.0, 2.0).unwrap();
            assert!(v <= v1 + v2 + 1e-10);
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let f = JetFunction::new(6, |x: &Jet| &x.scale(2.0) * &(x.powi(2).scale(-1.0)).exp());
        let h = 1e-4;
        for &x in &[0.2, 0.9, 1.7] {
            assert_eq!(f.deriv(0, x), f.eval(x));
            for k in 1..=4 {
                let fd = (f.deriv(k - 1, x + h) - f.deriv(k - 1, x - h)) / (2.0 * h);
                assert!((fd - f.deriv(k, x)).abs() < 1e-6 * f.deriv(k, x).abs().max(1.0));
            }
        }
    }

    #[test]
    fn asym_coeffs_theta_series() {
        // F(x) = 2x e^{-x^2}: eps * sum F(eps k) ~ sum (-1)^k B_{2k} x^k / k!, x = eps^2
        let f = JetFunction::new(30, |x: &Jet| &x.scale(2.0) * &(x.powi(2).scale(-1.0)).exp())
            .with_tail_integral(|t| (-t * t).exp());
        let s = em_asym_coeffs(&f, 0.0, 21).unwrap();
        assert!((s.leading[0].coeff - 1.0).abs() < 1e-15);
        for (k, c) in s.coefficients().iter().enumerate() {
            if k % 2 == 0 {
                assert_eq!(*c, 0.0);
            } else {
                // eps^k * eps = x^{(k+1)/2}
                let m = (k + 1) / 2;
                let bm = bernoulli_poly(2 * m, 0.0).unwrap();
                let expect = (-1f64).powi(m as i32) * bm / factorial(m);
                assert!((c - expect).abs() < 1e-12 * expect.abs().max(1e-300), "k={k}");
            }
        }
    }

    #[test]
    fn asym_coeffs_zero_derivatives() {
        // all derivatives at 0 vanish for a function supported away from 0 in jet terms
        let f = JetFunction::new(8, |x: &Jet| x.powi(12)).with_tail_integral(|_| 0.0);
        let s = em_asym_coeffs(&f, 0.3, 8).unwrap();
        assert!(s.coefficients().iter().all(|c| *c == 0.0));
        let s = boole_asym_coeffs(&f, 0.3, 8).unwrap();
        assert!(s.coefficients().iter().all(|c| *c == 0.0));
    }

    #[test]
    fn asym_coeffs_quartic_kernel_against_direct_sums() {
        // F(t) = 2 t^3 e^{-t^4}; x^2 sum 2 k^3 e^{-k^4 x^2} ~ 1/2 + x^2/60 - x^4/120 + ...
        let f = JetFunction::new(12, |x: &Jet| &x.powi(3).scale(2.0) * &(x.powi(4).scale(-1.0)).exp())
            .with_tail_integral(|t| 0.5 * (-t.powi(4)).exp());
        let s = em_asym_coeffs(&f, 0.0, 11).unwrap();
        // eps * c_3 eps^3 = x^2 coefficient, eps * c_7 eps^7 = x^4 coefficient
        assert!((s.leading[0].coeff - 0.5).abs() < 1e-15);
        assert!((s.terms[3].coeff - 1.0 / 60.0).abs() < 1e-15);
        assert!((s.terms[7].coeff + 1.0 / 120.0).abs() < 1e-15);
        for &x in &[0.05f64, 0.02, 0.01] {
            let mut acc = KahanSum::new();
            for k in 1..20000 {
                let kk = k as f64;
                let term = 2.0 * kk.powi(3) * (-(kk.powi(4)) * x * x).exp();
                acc.add(term);
                if term < 1e-300 {
                    break;
                }
            }
            let direct = x * x * acc.value();
            let resid = direct - (0.5 + x * x / 60.0);
            let scaled = resid / x.powi(4);
            assert!((scaled + 1.0 / 120.0).abs() < 0.01 / 120.0 + 1e-6 / x.powi(4), "x={x} scaled={scaled}");
        }
    }
}
