//! The auxiliary kernels `g_{p,u}`, `h_u` and `G_{p,u,μ}` and the sign
//! classification of `g_{p,u}`.

use crate::jet::Jet;
use crate::polyfun::bernoulli_number;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use std::sync::OnceLock;

const SERIES_TERMS: usize = 40;
/// Below this the `g` kernels use their Taylor series.
const G_SERIES_X: f64 = 0.5;
/// Below this `h_u'` uses its Taylor series.
const H_SERIES_X: f64 = 1e-3;

/// `B_j / j!` for `j ≤ SERIES_TERMS + 1`.
fn bernoulli_over_factorial() -> &'static [f64] {
    static T: OnceLock<Vec<f64>> = OnceLock::new();
    T.get_or_init(|| {
        let mut f = 1.0;
        (0..=SERIES_TERMS + 1)
            .map(|j| {
                if j > 1 {
                    f *= j as f64;
                }
                bernoulli_number(j).expect("cached order").to_f64().unwrap_or(f64::NAN) / f
            })
            .collect()
    })
}

/// Taylor coefficients `B_n(-u) / n!` of `h_u(x) = x e^{-ux} / (e^x - 1)`,
/// formed as the Cauchy product of `x/(e^x-1)` and `e^{-ux}`.
fn h_coeffs(u: f64) -> Vec<f64> {
    let b = bernoulli_over_factorial();
    let mut e = Vec::with_capacity(b.len());
    let mut c = 1.0;
    for n in 0..b.len() {
        if n > 0 {
            c *= -u / n as f64;
        }
        e.push(c);
    }
    (0..b.len())
        .map(|n| (0..=n).map(|j| b[j] * e[n - j]).sum())
        .collect()
}

/// Taylor coefficients of `g_{p,u}` at 0.
fn g_coeffs(p: f64, u: f64) -> Vec<f64> {
    let a = h_coeffs(u);
    let mut e = 1.0;
    (0..SERIES_TERMS)
        .map(|m| {
            e *= -p / (m + 1) as f64;
            e - a[m + 1]
        })
        .collect()
}

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &v| acc * x + v)
}

/// `e^{-ux} / (e^x - 1)` as a jet, written to avoid overflow for large `x`.
fn q_jet(u: f64, x: f64) -> Jet {
    let v = Jet::variable(x, 1);
    let num = v.scale(-(u + 1.0)).exp();
    let den = -&v.scale(-1.0).exp_m1();
    &num / &den
}

/// `g_{p,u}(x) = e^{-px}/x - e^{-ux}/(e^x - 1)`, with `g_{p,u}(0) = u + 1/2 - p`.
pub fn g_pu(p: f64, u: f64, x: f64) -> f64 {
    if x.abs() < G_SERIES_X {
        return horner(&g_coeffs(p, u), x);
    }
    (-p * x).exp() / x - (-(u + 1.0) * x).exp() / -(-x).exp_m1()
}

/// `g_{p,u}'(x)`.
pub fn g_pu_prime(p: f64, u: f64, x: f64) -> f64 {
    if x.abs() < G_SERIES_X {
        let c = g_coeffs(p, u);
        let d: Vec<f64> = (1..c.len()).map(|m| m as f64 * c[m]).collect();
        return horner(&d, x);
    }
    let v = Jet::variable(x, 1);
    let lead = &v.scale(-p).exp() / &v;
    (&lead - &q_jet(u, x)).derivative(1)
}

/// `G_{p,u,μ}(x) = x g'_{p,u}(x) + (2μ - 1) g_{p,u}(x)`.
pub fn big_g_pum(p: f64, u: f64, mu: f64, x: f64) -> f64 {
    x * g_pu_prime(p, u, x) + (2.0 * mu - 1.0) * g_pu(p, u, x)
}

/// `h_u(x) = x e^{-ux} / (e^x - 1)`, with `h_u(0) = 1`.
pub fn h_u(u: f64, x: f64) -> f64 {
    if x.abs() < G_SERIES_X {
        return horner(&h_coeffs(u), x);
    }
    x * (-(u + 1.0) * x).exp() / -(-x).exp_m1()
}

/// `h_u'(x)`.
pub fn h_u_prime(u: f64, x: f64) -> f64 {
    if x.abs() < H_SERIES_X {
        let c = h_coeffs(u);
        let d: Vec<f64> = (1..c.len()).map(|n| n as f64 * c[n]).collect();
        return horner(&d, x);
    }
    let v = Jet::variable(x, 1);
    (&v * &q_jet(u, x)).derivative(1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignClass {
    Positive,
    Negative,
    SignChanging,
}

/// Classification of `g_{p,u}` on `(0, ∞)` with sampling evidence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignReport {
    pub class: SignClass,
    /// Points with `g < 0` and `g > 0` found by the scan.
    pub negative_at: Option<f64>,
    pub positive_at: Option<f64>,
    pub samples: usize,
    /// The scan agrees with the classification.
    pub consistent: bool,
}

/// Sign of `f_a(x) = e^{-ax}(e^x - 1) - x`, which has the sign of
/// `g_{p,u}(x)` for `a = p - u`.
fn f_a_sign(a: f64, x: f64) -> f64 {
    if x < 1.0 {
        // sum_{n≥2} ((1-a)^n - (-a)^n) x^n / n!
        let (mut pa, mut pb, mut fact, mut xn) = (1.0 - a, -a, 1.0, x);
        let mut s = 0.0;
        for n in 2..60 {
            pa *= 1.0 - a;
            pb *= -a;
            fact *= n as f64;
            xn *= x;
            let term = (pa - pb) * xn / fact;
            s += term;
            if term.abs() <= 1e-300 || (n > 8 && term.abs() <= 1e-18 * s.abs()) {
                break;
            }
        }
        s
    } else {
        // ln(e^{-ax} expm1(x)) - ln x
        (1.0 - a) * x + (-(-x).exp()).ln_1p() - x.ln()
    }
}

/// Classifies the sign of `g_{p,u}` on `(0, ∞)`: positive for `p - u ≤ 1/2`,
/// negative for `p - u ≥ 1`, sign-changing in between. A log-spaced scan
/// over `[1e-8, 1e12]` supplies witnesses.
pub fn sign_g_pu(p: f64, u: f64) -> SignReport {
    let a = p - u;
    let class = if a <= 0.5 {
        SignClass::Positive
    } else if a >= 1.0 {
        SignClass::Negative
    } else {
        SignClass::SignChanging
    };
    let samples = 4000;
    let (l0, l1) = (1e-8f64.ln(), 1e12f64.ln());
    let mut neg = None;
    let mut pos = None;
    for i in 0..samples {
        let x = (l0 + (l1 - l0) * i as f64 / (samples - 1) as f64).exp();
        let s = f_a_sign(a, x);
        if s < 0.0 && neg.is_none() {
            neg = Some(x);
        }
        if s > 0.0 && pos.is_none() {
            pos = Some(x);
        }
    }
    let consistent = match class {
        SignClass::Positive => neg.is_none() && pos.is_some(),
        SignClass::Negative => pos.is_none() && neg.is_some(),
        SignClass::SignChanging => neg.is_some() && pos.is_some(),
    };
    SignReport {
        class,
        negative_at: neg,
        positive_at: pos,
        samples,
        consistent,
    }
}
