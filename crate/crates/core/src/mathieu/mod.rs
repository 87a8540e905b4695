//! Generalized Mathieu series
//!
//! ```text
//!   S(t, u, γ, α, μ) = sum_{k≥1} 2 (k+u)^γ / ((k+u)^α + t^α)^(μ+1)
//!   S~(t, u, γ, α, μ) = sum_{k≥1} (-1)^(k-1) 2 (k+u)^γ / ((k+u)^α + t^α)^(μ+1)
//! ```
//!
//! with the kernel `g(x) = x^γ (x^α + 1)^(-μ-1)`, its tail integral, direct
//! summation with two-sided brackets, the large-`t` expansions and a
//! dispatcher choosing between them.

mod asym;
mod kernel;
mod sum;

pub use asym::{asym_s, asym_s_alt};
pub use kernel::{
    g_eval, g_jet, g_smoothness, g_total_variation, incomplete_beta, tail_integral, GKernel,
    Smoothness, SmoothnessProfile,
};
pub use sum::{
    eval_auto, eval_auto_alt, eval_cross, eval_s, eval_s_alt, eval_s_alt_with, eval_s_scaled, eval_s_with,
    ln_phi_u, max_terms, phi_u, poisson_closed_form, poisson_closed_form_alt, s_mu, CrossCheck,
    AUTO_SWITCH_T, DEFAULT_MAX_TERMS,
};

use crate::error::{Error, Result};
use crate::polyfun::is_nonneg_int;
use serde::{Deserialize, Serialize};

/// Which of the two series a parameter set is meant for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SeriesKind {
    /// `S`, needs `delta > 1`.
    Plain,
    /// `S~`, needs `delta > 0`.
    Alternating,
}

impl SeriesKind {
    pub fn delta_bound(self) -> f64 {
        match self {
            SeriesKind::Plain => 1.0,
            SeriesKind::Alternating => 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MathieuParams {
    pub gamma: f64,
    pub alpha: f64,
    pub mu: f64,
    pub u: f64,
}

impl MathieuParams {
    /// Validated parameters for the given series.
    pub fn new(gamma: f64, alpha: f64, mu: f64, u: f64, kind: SeriesKind) -> Result<Self> {
        let p = MathieuParams { gamma, alpha, mu, u };
        p.validate(kind)?;
        Ok(p)
    }

    /// The classical case `γ = 1, α = 2`.
    pub fn classical(mu: f64, u: f64) -> Self {
        MathieuParams {
            gamma: 1.0,
            alpha: 2.0,
            mu,
            u,
        }
    }

    pub fn delta(&self) -> f64 {
        self.alpha * (self.mu + 1.0) - self.gamma
    }

    pub fn validate(&self, kind: SeriesKind) -> Result<()> {
        let MathieuParams { gamma, alpha, mu, u } = *self;
        if !(gamma.is_finite() && alpha.is_finite() && mu.is_finite() && u.is_finite()) {
            return Err(Error::Domain("parameters must be finite".into()));
        }
        if gamma < 0.0 {
            return Err(Error::Domain(format!("gamma must be nonnegative, got {gamma}")));
        }
        if alpha <= 0.0 {
            return Err(Error::Domain(format!("alpha must be positive, got {alpha}")));
        }
        if u <= -1.0 {
            return Err(Error::Domain(format!("u must exceed -1, got {u}")));
        }
        let delta = self.delta();
        let bound = kind.delta_bound();
        if delta <= bound {
            return Err(Error::Delta { bound, delta });
        }
        Ok(())
    }

    /// `(γ, α) ∈ Z+ × N`: the kernel is analytic and the expansions apply.
    pub fn integer_regime(&self) -> bool {
        is_nonneg_int(self.gamma) && is_nonneg_int(self.alpha) && self.alpha >= 1.0
    }

    /// Results for `μ ≤ 0` are outside the range the theory was checked for.
    pub fn experimental(&self) -> bool {
        self.mu <= 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    Direct,
    EulerMaclaurin,
    Asymptotic,
    ClosedForm,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Method::Direct => "direct",
            Method::EulerMaclaurin => "euler-maclaurin",
            Method::Asymptotic => "asymptotic",
            Method::ClosedForm => "closed-form",
        };
        f.write_str(s)
    }
}

/// A value with a two-sided bracket `[value - err_lo, value + err_hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub value: f64,
    pub err_lo: f64,
    pub err_hi: f64,
    pub method: Method,
    pub terms_used: usize,
    /// False for the asymptotic path, whose error is the size of the next term.
    pub rigorous: bool,
    /// Set when `μ ≤ 0`.
    pub experimental: bool,
}

impl EvalResult {
    pub fn lower(&self) -> f64 {
        self.value - self.err_lo
    }

    pub fn upper(&self) -> f64 {
        self.value + self.err_hi
    }

    pub fn overlaps(&self, o: &EvalResult) -> bool {
        self.lower() <= o.upper() && o.lower() <= self.upper()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_constraints() {
        assert!(MathieuParams::new(1.0, 2.0, 1.0, 0.0, SeriesKind::Plain).is_ok());
        let e = MathieuParams::new(1.0, 2.0, 0.0, 0.0, SeriesKind::Plain).unwrap_err();
        assert_eq!(e, Error::Delta { bound: 1.0, delta: 1.0 });
        assert!(e.to_string().contains("delta must exceed 1"));
        assert!(MathieuParams::new(1.0, 2.0, 0.0, 0.0, SeriesKind::Alternating).is_ok());
        assert!(MathieuParams::new(1.0, 2.0, 1.0, -1.0, SeriesKind::Plain).is_err());
        assert!(MathieuParams::new(-0.5, 2.0, 1.0, 0.0, SeriesKind::Plain).is_err());
    }

    #[test]
    fn regime_and_flags() {
        assert!(MathieuParams::classical(1.0, 0.0).integer_regime());
        let p = MathieuParams { gamma: 3.5, alpha: 2.0, mu: 2.0, u: 0.0 };
        assert!(!p.integer_regime());
        assert!(MathieuParams::classical(-0.2, 0.0).experimental());
    }
}
