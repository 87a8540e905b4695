//! Grid-based verifiers for the inequalities and identities around the
//! Mathieu series, Bessel/Hankel machinery, sign analysis of `g_{p,u}` and
//! finite-order complete-monotonicity probes.
//!
//! An inequality only counts as verified when its margin exceeds the sum of
//! both sides' error brackets; near-ties land in `inconclusive`.

mod bessel;
mod checks;
mod kernels;
mod suites;

pub use bessel::{bessel_j, choose_cutoff, exp_power_tail, hankel_transform, HankelResult, BESSEL_SWITCH};
pub use checks::{
    classical_inequalities_check, cm_probe, transform_derivative_check, fsf_bounds_check,
    hermite_hadamard_check, laplace_bessel_check, series_transform_check, weighted_tail_check,
    weighted_tail_h_check, difference_transform_check, kernel_transform, monotonicity_check, ner_check,
    wilkins_style_check, CmSide, TransformKernel, TransformPoint,
};
pub use kernels::{
    big_g_pum, g_pu, g_pu_prime, h_u, h_u_prime, sign_g_pu, SignClass, SignReport,
};
pub use suites::{run_suite, Suite, SuiteOptions, SuiteReport};

use crate::error::{Error, Result};
use crate::mathieu::MathieuParams;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Sample points and tolerance for a check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub t_points: Vec<f64>,
    pub x_points: Vec<f64>,
    pub param_sets: Vec<MathieuParams>,
    pub tolerance: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            t_points: log_spaced(0.01, 100.0, 200),
            x_points: Vec::new(),
            param_sets: Vec::new(),
            tolerance: 1e-12,
        }
    }
}

impl GridSpec {
    pub fn new(t_points: Vec<f64>, tolerance: f64) -> Result<Self> {
        let g = GridSpec {
            t_points,
            tolerance,
            ..GridSpec::default()
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.t_points.is_empty() {
            return Err(Error::Domain("grid needs at least one t point".into()));
        }
        for pts in [&self.t_points, &self.x_points] {
            if pts.windows(2).any(|w| !(w[0] < w[1])) || pts.iter().any(|v| !v.is_finite()) {
                return Err(Error::Domain("grid points must be finite and strictly increasing".into()));
            }
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::Domain(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        Ok(())
    }
}

/// `n` points from `a` to `b` inclusive, equally spaced in `ln`.
pub fn log_spaced(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => {
            let (la, lb) = (a.ln(), b.ln());
            (0..n)
                .map(|i| {
                    if i == 0 {
                        a
                    } else if i + 1 == n {
                        b
                    } else {
                        (la + (lb - la) * i as f64 / (n - 1) as f64).exp()
                    }
                })
                .collect()
        }
    }
}

/// `n` points from `a` to `b` inclusive.
pub fn linear_spaced(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n)
            .map(|i| if i + 1 == n { b } else { a + (b - a) * i as f64 / (n - 1) as f64 })
            .collect(),
    }
}

pub type Params = BTreeMap<String, f64>;

/// Builds a parameter map from name/value pairs.
pub fn params(pairs: &[(&str, f64)]) -> Params {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

/// One sampled comparison that failed or could not be decided.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub label: String,
    pub params: Params,
    pub point: f64,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs` for order claims, `tol - |lhs - rhs|` for agreement claims.
    pub margin: f64,
    /// Combined error of both sides.
    pub err: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check_name: String,
    pub total: usize,
    pub violations: Vec<Violation>,
    pub inconclusive: Vec<Violation>,
    pub passed: bool,
}

impl VerificationReport {
    pub fn new(name: impl Into<String>) -> Self {
        VerificationReport {
            check_name: name.into(),
            total: 0,
            violations: Vec::new(),
            inconclusive: Vec::new(),
            passed: true,
        }
    }

    /// Passed with no undecided comparisons.
    pub fn conclusive(&self) -> bool {
        self.passed && self.inconclusive.is_empty()
    }

    fn push(&mut self, v: Violation, failed: bool, undecided: bool) {
        self.total += 1;
        if failed {
            self.violations.push(v);
            self.passed = false;
        } else if undecided {
            self.inconclusive.push(v);
        }
    }

    /// Strict `lhs < rhs`.
    pub fn less(&mut self, label: &str, p: &Params, point: f64, lhs: f64, rhs: f64, err: f64) {
        let margin = rhs - lhs;
        let v = self.violation(label, p, point, lhs, rhs, margin, err);
        self.push(v, margin < -err || margin.is_nan(), margin <= err);
    }

    /// `lhs ≤ rhs`: only a margin below `-err` is a violation.
    pub fn less_eq(&mut self, label: &str, p: &Params, point: f64, lhs: f64, rhs: f64, err: f64) {
        let margin = rhs - lhs;
        let v = self.violation(label, p, point, lhs, rhs, margin, err);
        self.push(v, margin < -err || margin.is_nan(), false);
    }

    /// `|lhs - rhs| ≤ tol`.
    pub fn close(&mut self, label: &str, p: &Params, point: f64, lhs: f64, rhs: f64, tol: f64) {
        let margin = tol - (lhs - rhs).abs();
        let v = self.violation(label, p, point, lhs, rhs, margin, 0.0);
        self.push(v, !(margin >= 0.0), false);
    }

    #[allow(clippy::too_many_arguments)]
    fn violation(&self, label: &str, p: &Params, point: f64, lhs: f64, rhs: f64, margin: f64, err: f64) -> Violation {
        Violation {
            label: label.to_string(),
            params: p.clone(),
            point,
            lhs,
            rhs,
            margin,
            err,
        }
    }

    pub fn merge(&mut self, other: VerificationReport) {
        self.total += other.total;
        self.passed &= other.passed;
        self.violations.extend(other.violations);
        self.inconclusive.extend(other.inconclusive);
    }

    /// One-line summary.
    pub fn summary(&self) -> String {
        format!(
            "{}: {} ({} checked, {} violations, {} inconclusive)",
            self.check_name,
            if self.passed { "PASS" } else { "FAIL" },
            self.total,
            self.violations.len(),
            self.inconclusive.len()
        )
    }
}
