//! Large-`t` expansions of `S` and `S~` in the integer regime.

use super::{MathieuParams, SeriesKind};
use crate::emsum::{AsymTerm, AsymptoticSeries};
use crate::error::{Error, Result};
use crate::polyfun::{
    beta_fn, bernoulli_poly, bernoulli_poly_exact, euler_poly, euler_poly_exact,
    rational_from_f64, rising_ratio, Q, MAX_ORDER,
};
use num_bigint::BigInt;
use num_traits::One;

fn require_regime(p: &MathieuParams) -> Result<()> {
    if !p.integer_regime() {
        return Err(Error::Regime(format!(
            "expansions need gamma a nonnegative integer and alpha a positive integer, got ({}, {})",
            p.gamma, p.alpha
        )));
    }
    Ok(())
}

fn parity_sign(k: usize, alpha: usize, gamma: usize) -> f64 {
    if (k * (alpha + 1) + gamma) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `Γ(μ+k+1) / (Γ(μ+1) k!)` exactly, when `μ` is a nonnegative integer.
fn rising_ratio_exact(mu: f64, k: usize) -> Option<Q> {
    if !(mu >= 0.0 && mu.fract() == 0.0 && mu < 1e6) {
        return None;
    }
    let m = mu as u64;
    let mut r = Q::one();
    for j in 1..=k as u64 {
        r = r * Q::new(BigInt::from(m + j), BigInt::from(j));
    }
    Some(r)
}

/// Exact coefficient text, kept only when short enough to be useful.
fn short(q: Q) -> Option<String> {
    let s = q.to_string();
    (s.len() <= 60).then_some(s)
}

/// Expansion of `S(t)` as `t → ∞`: the Beta leading term
/// `(2/α) B((γ+1)/α, μ+1-(γ+1)/α) t^(1-δ)` and `n` further terms
///
/// ```text
///   (-1)^(k(α+1)+γ) 2 rr(μ,k) B_{kα+γ+1}(-u) / (kα+γ+1) · t^(-α(k+μ+1))
/// ```
///
/// with `rr(μ,k) = Γ(μ+k+1)/(Γ(μ+1) k!)`.
pub fn asym_s(p: &MathieuParams, n: usize) -> Result<AsymptoticSeries> {
    p.validate(SeriesKind::Plain)?;
    require_regime(p)?;
    let (g, a) = (p.gamma as usize, p.alpha as usize);
    if n > 0 && (n - 1) * a + g + 1 > MAX_ORDER {
        return Err(Error::OrderOverflow {
            requested: (n - 1) * a + g + 1,
            max: MAX_ORDER,
        });
    }
    let b1 = (p.gamma + 1.0) / p.alpha;
    let lead = 2.0 / p.alpha * beta_fn(b1, p.mu + 1.0 - b1)?;
    let neg_u = rational_from_f64(-p.u)?;
    let mut terms = Vec::with_capacity(n);
    for k in 0..n {
        let order = k * a + g + 1;
        let sign = parity_sign(k, a, g);
        let coeff =
            sign * 2.0 * rising_ratio(p.mu, k) * bernoulli_poly(order, -p.u)? / order as f64;
        let exact = match rising_ratio_exact(p.mu, k) {
            Some(rr) => {
                let b = bernoulli_poly_exact(order, &neg_u)?;
                let s = Q::from_integer(BigInt::from(2 * sign as i64));
                short(s * rr * b / Q::from_integer(BigInt::from(order)))
            }
            None => None,
        };
        terms.push(AsymTerm {
            index: Some(k),
            power: -p.alpha * (k as f64 + p.mu + 1.0),
            coeff,
            exact,
        });
    }
    Ok(AsymptoticSeries {
        variable: "t".into(),
        leading: vec![AsymTerm {
            index: None,
            power: 1.0 - p.delta(),
            coeff: lead,
            exact: None,
        }],
        terms,
    })
}

/// Expansion of `S~(t)`: terms `(-1)^(k(α+1)+γ) rr(μ,k) E_{kα+γ}(-u) t^(-α(k+μ+1))`.
pub fn asym_s_alt(p: &MathieuParams, n: usize) -> Result<AsymptoticSeries> {
    p.validate(SeriesKind::Alternating)?;
    require_regime(p)?;
    let (g, a) = (p.gamma as usize, p.alpha as usize);
    if n > 0 && (n - 1) * a + g > MAX_ORDER {
        return Err(Error::OrderOverflow {
            requested: (n - 1) * a + g,
            max: MAX_ORDER,
        });
    }
    let neg_u = rational_from_f64(-p.u)?;
    let mut terms = Vec::with_capacity(n);
    for k in 0..n {
        let order = k * a + g;
        let sign = parity_sign(k, a, g);
        let coeff = sign * rising_ratio(p.mu, k) * euler_poly(order, -p.u)?;
        let exact = match rising_ratio_exact(p.mu, k) {
            Some(rr) => {
                let e = euler_poly_exact(order, &neg_u)?;
                short(Q::from_integer(BigInt::from(sign as i64)) * rr * e)
            }
            None => None,
        };
        terms.push(AsymTerm {
            index: Some(k),
            power: -p.alpha * (k as f64 + p.mu + 1.0),
            coeff,
            exact,
        });
    }
    Ok(AsymptoticSeries {
        variable: "t".into(),
        leading: Vec::new(),
        terms,
    })
}

/// Largest `n` accepted by [`asym_s`] / [`asym_s_alt`].
pub(crate) fn max_terms_for(p: &MathieuParams, alternating: bool) -> usize {
    let (g, a) = (p.gamma as usize, p.alpha as usize);
    let top = if alternating { MAX_ORDER } else { MAX_ORDER - 1 };
    if g > top {
        0
    } else {
        (top - g) / a + 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyfun::bernoulli_number;

    #[test]
    fn classical_coefficients() {
        // 1/t^2 + sum_{k≥1} (-1)^k B_{2k} / t^{2k+2}
        let s = asym_s(&MathieuParams::classical(1.0, 0.0), 8).unwrap();
        assert!((s.leading[0].coeff - 1.0).abs() < 1e-14);
        assert_eq!(s.leading[0].power, -2.0);
        for t in &s.terms {
            let k = t.index.unwrap() + 1;
            let b: f64 = num_traits::ToPrimitive::to_f64(&bernoulli_number(2 * k).unwrap()).unwrap();
            let expect = if k % 2 == 0 { b } else { -b };
            assert!((t.coeff - expect).abs() < 1e-14 * expect.abs().max(1.0));
            assert_eq!(t.power, -(2.0 * k as f64 + 2.0));
        }
        assert_eq!(s.terms[0].exact.as_deref(), Some("-1/6"));
        assert_eq!(s.terms[1].exact.as_deref(), Some("-1/30"));
    }

    #[test]
    fn second_coefficient_is_shifted_b2() {
        for &u in &[0.0, 0.5, 0.25, 1.5] {
            for &mu in &[0.5, 1.0, 3.0] {
                let s = asym_s(&MathieuParams::classical(mu, u), 2).unwrap();
                assert!((s.leading[0].coeff - 1.0 / mu).abs() < 1e-13);
                assert!((s.terms[0].coeff + (u * u + u + 1.0 / 6.0)).abs() < 1e-14);
                let c2 = ((u * u + u).powi(2) - 1.0 / 30.0) * (mu + 1.0) / 2.0;
                assert!((s.terms[1].coeff - c2).abs() < 1e-13, "u={u} mu={mu}");
            }
        }
        let s = asym_s(&MathieuParams::classical(1.0, 0.5), 1).unwrap();
        assert_eq!(s.terms[0].exact.as_deref(), Some("-11/12"));
    }

    #[test]
    fn regime_errors() {
        let p = MathieuParams { gamma: 3.5, alpha: 2.0, mu: 3.0, u: 0.0 };
        assert!(matches!(asym_s(&p, 3), Err(Error::Regime(_))));
        assert!(matches!(asym_s_alt(&p, 3), Err(Error::Regime(_))));
        let p = MathieuParams::classical(1.0, 0.0);
        assert!(asym_s(&p, max_terms_for(&p, false)).is_ok());
        assert!(asym_s(&p, max_terms_for(&p, false) + 1).is_err());
        assert!(asym_s_alt(&p, max_terms_for(&p, true)).is_ok());
    }
}
