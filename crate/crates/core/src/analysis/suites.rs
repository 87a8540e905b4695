//! Named verification suites with fixed, deterministic configurations.

use super::checks::*;
use super::kernels::sign_g_pu;
use super::{linear_spaced, log_spaced, params, GridSpec, VerificationReport};
use crate::emsum::{
    boole_finite_identity, boole_sum, em_finite_identity, em_sum, Exponential, JetFunction,
};
use crate::error::{Error, Result};
use crate::mathieu::{eval_auto, eval_s, Method, MathieuParams};
use crate::sharp::{root_gap, ConvexKernel, ExpKernel, PowerKernel, SmuProfile};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Classical,
    Em,
    Asymptotic,
    Hermite,
    Hankel,
    Cm,
    Monotone,
    All,
}

impl Suite {
    /// Every concrete suite, in the order `all` runs them.
    pub const EACH: [Suite; 7] = [
        Suite::Classical,
        Suite::Em,
        Suite::Asymptotic,
        Suite::Hermite,
        Suite::Hankel,
        Suite::Cm,
        Suite::Monotone,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Classical => "classical",
            Suite::Em => "em",
            Suite::Asymptotic => "asymptotic",
            Suite::Hermite => "hermite",
            Suite::Hankel => "hankel",
            Suite::Cm => "cm",
            Suite::Monotone => "monotone",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .iter()
            .chain(std::iter::once(&Suite::All))
            .find(|x| x.name() == s)
            .copied()
            .ok_or_else(|| {
                Error::Domain(format!(
                    "unknown suite '{s}' (expected classical, em, asymptotic, hermite, hankel, cm, monotone or all)"
                ))
            })
    }
}

/// Knobs exposed to the command line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuiteOptions {
    /// Absolute agreement tolerance for identities.
    pub tol: f64,
    /// Shift `b` in the monotonicity suite.
    pub b: f64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { tol: 1e-6, b: 1.0 / 6.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub passed: bool,
    pub reports: Vec<VerificationReport>,
}

impl SuiteReport {
    fn new(suite: Suite, reports: Vec<VerificationReport>) -> Self {
        SuiteReport {
            suite,
            passed: reports.iter().all(|r| r.passed),
            reports,
        }
    }
}

pub fn run_suite(suite: Suite, opts: &SuiteOptions) -> Result<SuiteReport> {
    if !(opts.tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {}", opts.tol)));
    }
    let reports = match suite {
        Suite::Classical => classical()?,
        Suite::Em => em()?,
        Suite::Asymptotic => asymptotic()?,
        Suite::Hermite => hermite()?,
        Suite::Hankel => hankel(opts.tol)?,
        Suite::Cm => cm()?,
        Suite::Monotone => monotone(opts.b)?,
        Suite::All => {
            let mut all = Vec::new();
            for s in Suite::EACH {
                all.extend(run_suite(s, opts)?.reports);
            }
            all
        }
    };
    Ok(SuiteReport::new(suite, reports))
}

fn classical() -> Result<Vec<VerificationReport>> {
    let grid = GridSpec::default();
    let mut w = vec![0.0];
    w.extend(log_spaced(0.01, 20.0, 100));
    Ok(vec![
        classical_inequalities_check(&grid)?,
        wilkins_style_check(1.0, 0.0, &GridSpec::new(w, grid.tolerance)?)?,
        ner_check(0.5, 0.0, 1.0, &grid)?,
        ner_check(1.5, 0.0, 1.0, &grid)?,
    ])
}

/// `1/(1+x)^2` on `(-1, ∞)`.
fn inverse_square() -> JetFunction {
    JetFunction::new(8, |x| x.add_scalar(1.0).powi(-2))
        .with_domain_left(-0.9)
        .with_tail_integral(|t| 1.0 / (1.0 + t))
}

fn em() -> Result<Vec<VerificationReport>> {
    let f = inverse_square();
    let mut ident = VerificationReport::new("finite_identities");
    for &u in &[0.3, 0.0, -0.4, 1.5] {
        for &n in &[0usize, 1, 3] {
            let id = em_finite_identity(&f, 12, 0.25, u, n)?;
            let pm = params(&[("u", u), ("n", n as f64), ("eps", 0.25), ("p", 12.0)]);
            ident.close("em1", &pm, n as f64, id.lhs, id.rhs, 1e-9);
            let id = boole_finite_identity(&f, 6, 0.25, u, n)?;
            ident.close("em2", &pm, n as f64, id.lhs, id.rhs, 1e-9);
        }
    }

    // geometric oracles: sum e^{-eps(k+u)} and its alternating version
    let g = Exponential::new(1.0);
    let mut bounds = VerificationReport::new("remainder_bounds");
    let mut decay = VerificationReport::new("remainder_decay");
    let epss = [0.1, 0.05, 0.025, 0.0125];
    for &(u, n) in &[(0.0, 1usize), (0.5, 2), (-0.3, 1)] {
        let mut bs = Vec::new();
        for &eps in &epss {
            let r = em_sum(&g, eps, u, n)?;
            let exact = (-eps * (u + 1.0)).exp() / -(-eps).exp_m1();
            let pm = params(&[("u", u), ("n", n as f64), ("eps", eps)]);
            let diff = (exact - r.sum_estimate).abs();
            bounds.less_eq("em", &pm, eps, diff, r.remainder_bound, 4.0 * f64::EPSILON * exact);
            bs.push(r.remainder_bound);
        }
        let pm = params(&[("u", u), ("n", n as f64)]);
        decay.less("em_ratio", &pm, epss[3], bs[3], 0.25 * bs[0], 0.0);
    }
    for &(u, n) in &[(0.0, 1usize), (0.7, 2)] {
        let mut bs = Vec::new();
        for &eps in &epss {
            let r = boole_sum(&g, eps, u, n)?;
            let exact = (-eps * (u + 1.0)).exp() / (1.0 + (-eps).exp());
            let pm = params(&[("u", u), ("n", n as f64), ("eps", eps)]);
            let diff = (exact - r.sum_estimate).abs();
            bounds.less_eq("boole", &pm, eps, diff, r.remainder_bound, 4.0 * f64::EPSILON * exact);
            bs.push(r.remainder_bound);
        }
        let pm = params(&[("u", u), ("n", n as f64)]);
        decay.less("boole_ratio", &pm, epss[3], bs[3], 0.25 * bs[0], 0.0);
    }
    Ok(vec![ident, bounds, decay])
}

fn asymptotic() -> Result<Vec<VerificationReport>> {
    let mut agree = VerificationReport::new("asymptotic_vs_direct");
    for &mu in &[1.0, 2.0] {
        for &u in &[0.0, 0.25, 1.0] {
            let p = MathieuParams::classical(mu, u);
            for &t in &[25.0, 40.0, 80.0] {
                let a = eval_auto(&p, t, 1e-15)?;
                if a.method != Method::Asymptotic {
                    return Err(Error::Precondition(format!("expected the asymptotic path at t = {t}")));
                }
                let d = eval_s(&p, t, 1e-15)?;
                let tol = 1e-12 * d.value.abs() + a.err_hi + d.err_hi;
                agree.close("s_mu", &params(&[("mu", mu), ("u", u)]), t, a.value, d.value, tol);
            }
        }
    }
    let mut limit = VerificationReport::new("profile_limit");
    for &u in &[0.0, 0.25, 0.5, 1.0] {
        let f = SmuProfile::new(1.0, u)?.f(1e4)?;
        limit.close("f_at_1e4", &params(&[("mu", 1.0), ("u", u)]), 1e4, f, u * u + u + 1.0 / 6.0, 1e-5);
    }
    let mut gap = VerificationReport::new("root_gap_limit");
    for &nu in &[1.0, 2.0] {
        for &u in &[0.0, 0.5] {
            let t = 100.0f64;
            let scaled = t.powi(6) * root_gap(nu, u, t)?;
            let want = -(60.0 * u * u + 60.0 * u + 11.0) / 360.0;
            gap.close("t6_gap", &params(&[("nu", nu), ("u", u)]), t, scaled, want, 0.05 * want.abs());
        }
    }
    Ok(vec![agree, limit, gap])
}

fn hermite() -> Result<Vec<VerificationReport>> {
    let mut hh = VerificationReport::new("hermite_hadamard");
    type Kernel = Box<dyn Fn(f64) -> f64 + Sync>;
    let mut kernels: Vec<(&str, f64, Kernel)> = Vec::new();
    for mu in [0.5, 1.0, 2.0] {
        kernels.push(("power", mu, Box::new(move |x: f64| x.powf(-mu - 1.0))));
    }
    for lambda in [0.5, 1.0, 2.0] {
        kernels.push(("exp", lambda, Box::new(move |x: f64| (-lambda * x).exp())));
    }
    for (_, _, g) in &kernels {
        for a in linear_spaced(0.5, 5.0, 10) {
            for w in [0.1, 1.0, 4.0] {
                hh.merge(hermite_hadamard_check(g.as_ref(), a, a + w, true)?);
            }
        }
    }

    let mut fsf = VerificationReport::new("fsf_bounds");
    let ys = [0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 50.0];
    let power: Vec<PowerKernel> = [0.5, 1.0, 2.0, 4.0].iter().map(|&mu| PowerKernel { mu }).collect();
    let expk: Vec<ExpKernel> = [0.5, 1.0, 2.0].iter().map(|&lambda| ExpKernel { lambda }).collect();
    let all: Vec<&dyn ConvexKernel> = power
        .iter()
        .map(|k| k as &dyn ConvexKernel)
        .chain(expk.iter().map(|k| k as &dyn ConvexKernel))
        .collect();
    for k in &all {
        for &u in &[0.0, 0.25, 0.5, 1.0, 2.0] {
            for &y in &ys {
                fsf.merge(fsf_bounds_check(*k, u, y, true)?);
            }
        }
    }
    // offsets below -1 only exercise the lower bound
    for k in &power {
        for &u in &[-1.25, -0.5] {
            for &y in &ys {
                fsf.merge(fsf_bounds_check(k, u, y, true)?);
            }
        }
    }
    Ok(vec![hh, fsf])
}

fn hankel(tol: f64) -> Result<Vec<VerificationReport>> {
    let g = GridSpec::new(vec![0.5, 1.0, 2.0], tol)?;
    let mut out = Vec::new();
    let mut r = VerificationReport::new("laplace_bessel");
    for &(p, mu) in &[(1.0, 1.0), (0.5, 0.5), (2.0, 2.0)] {
        r.merge(laplace_bessel_check(p, mu, &g)?);
    }
    out.push(r);
    let mut r = VerificationReport::new("series_transform");
    for &(mu, u) in &[(1.0, 0.0), (0.6, 0.5), (2.0, -0.5)] {
        r.merge(series_transform_check(mu, u, &g)?);
    }
    out.push(r);
    let mut r = VerificationReport::new("difference_transform");
    for &(p, u, mu) in &[(0.4, 0.0, 1.0), (1.5, 0.0, 1.0), (1.0, 0.5, 0.6)] {
        r.merge(difference_transform_check(p, u, mu, &g)?);
    }
    out.push(r);
    let mut r = VerificationReport::new("transform_derivative");
    for &(mu, u) in &[(1.0, 0.0), (0.6, 0.5), (2.0, 0.0)] {
        r.merge(transform_derivative_check(mu, u, &g)?);
    }
    out.push(r);
    out.push(weighted_tail_check(2.0, 1.0, 1.0, 0.0, 1.0, tol)?);
    out.push(weighted_tail_h_check(2.0, 1.0, 1.0 / 6.0, 0.0, 1.0, tol)?);

    let mut s = VerificationReport::new("sign_g_pu");
    let matrix = [
        (0.4, 0.0),
        (0.2, 0.5),
        (1.0, 0.5),
        (1.2, 0.0),
        (2.0, 1.0),
        (1.5, 0.5),
        (0.75, 0.0),
        (1.3, 0.5),
        (0.9, 0.1),
    ];
    for (p, u) in matrix {
        let rep = sign_g_pu(p, u);
        let ok = if rep.consistent { 1.0 } else { 0.0 };
        s.close("classification", &params(&[("p", p), ("u", u)]), p - u, ok, 1.0, 0.0);
    }
    out.push(s);
    Ok(out)
}

fn cm() -> Result<Vec<VerificationReport>> {
    let g = GridSpec::new(log_spaced(0.01, 100.0, 40), 1e-12)?;
    Ok(vec![
        cm_probe(2.0, 1.0, 1.0, 8, CmSide::Plus, &g)?,
        cm_probe(1.0, 0.0, 1.0, 8, CmSide::Minus, &g)?,
    ])
}

fn monotone(b: f64) -> Result<Vec<VerificationReport>> {
    let g = GridSpec::new(linear_spaced(0.05, 10.0, 200), 1e-12)?;
    Ok(vec![monotonicity_check(1.0, b, 0.0, &g)?])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for s in Suite::EACH.iter().chain([Suite::All].iter()) {
            assert_eq!(s.name().parse::<Suite>().unwrap(), *s);
            let json = serde_json::to_string(s).unwrap();
            assert_eq!(json, format!("\"{}\"", s.name()));
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn em_suite_passes() {
        let r = run_suite(Suite::Em, &SuiteOptions::default()).unwrap();
        assert!(r.passed, "{:?}", r.reports.iter().map(|x| x.summary()).collect::<Vec<_>>());
        assert_eq!(r.reports[0].total, 24);
        assert_eq!(r.reports[1].total, 20);
    }

    #[test]
    fn asymptotic_suite_passes() {
        let r = run_suite(Suite::Asymptotic, &SuiteOptions::default()).unwrap();
        for x in &r.reports {
            assert!(x.passed, "{}: {:?}", x.summary(), x.violations);
        }
    }

    #[test]
    fn hermite_suite_is_conclusive() {
        let r = run_suite(Suite::Hermite, &SuiteOptions::default()).unwrap();
        for x in &r.reports {
            assert!(x.conclusive(), "{}: {:?}", x.summary(), x.inconclusive.first());
        }
        let configs = r.reports[0].total / 2 + r.reports[1].total;
        assert!(configs >= 500, "{configs}");
    }

    #[test]
    fn monotone_suite_fails_for_large_shift() {
        let opts = SuiteOptions { b: 10.0, ..SuiteOptions::default() };
        let r = run_suite(Suite::Monotone, &opts).unwrap();
        assert!(!r.passed);
        assert!(run_suite(Suite::Monotone, &SuiteOptions::default()).unwrap().passed);
    }
}
