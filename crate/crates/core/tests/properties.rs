//! Property tests for the cross-module invariants.

use mathieu_core::analysis::{linear_spaced, log_spaced, params, GridSpec, VerificationReport};
use mathieu_core::emsum::{boole_finite_identity, boole_sum, em_finite_identity, em_sum, Exponential, JetFunction};
use mathieu_core::mathieu::{eval_s, eval_s_alt, s_mu, MathieuParams, SeriesKind};
use mathieu_core::sharp::{compute_mm, SearchConfig, SharpFramework};
use proptest::prelude::*;
use std::f64::consts::PI;

fn bracket(r: &mathieu_core::mathieu::EvalResult) -> f64 {
    r.err_lo.max(r.err_hi)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// `S~(t, u) = S(t, u) - 2^{1-δ} S(t/2, u/2)` whenever `δ > 1`.
    #[test]
    fn alternating_identity(
        gamma in 0.0f64..3.0,
        alpha in 0.8f64..3.0,
        extra in 0.2f64..2.0,
        u in -0.9f64..2.0,
        t in 0.2f64..20.0,
    ) {
        // choose μ so that δ = 1 + extra
        let mu = (gamma + 1.0 + extra) / alpha - 1.0;
        let p = MathieuParams::new(gamma, alpha, mu, u, SeriesKind::Plain).unwrap();
        let half = MathieuParams::new(gamma, alpha, mu, u / 2.0, SeriesKind::Plain).unwrap();
        let alt = eval_s_alt(&p, t, 1e-13).unwrap();
        let s = eval_s(&p, t, 1e-13).unwrap();
        let s2 = eval_s(&half, t / 2.0, 1e-13).unwrap();
        let w = 2f64.powf(1.0 - p.delta());
        let rhs = s.value - w * s2.value;
        let scale = s.value.abs().max(w * s2.value.abs()).max(alt.value.abs());
        let err = bracket(&alt) + bracket(&s) + w * bracket(&s2);
        prop_assert!((alt.value - rhs).abs() <= 1e-10 * scale + err, "lhs {} rhs {}", alt.value, rhs);
    }

    /// `sum 2k/(k²+t²)^{μ+1} < 1/(μ t^{2μ})`.
    #[test]
    fn diananda_bound(mu_i in 0usize..4, t in 0.05f64..200.0) {
        let mu = [0.5, 1.0, 2.0, 5.0][mu_i];
        let s = s_mu(mu, t, 0.0, 1e-13).unwrap();
        let bound = 1.0 / (mu * t.powf(2.0 * mu));
        prop_assert!(s.value + s.err_hi < bound, "S = {} bound = {}", s.value, bound);
    }

    #[test]
    fn poisson_closed_forms(t in 0.3f64..12.0) {
        let p = MathieuParams::new(0.0, 2.0, 0.0, 0.0, SeriesKind::Plain).unwrap();
        let plain = PI / t - 1.0 / (t * t) + 2.0 * PI / (t * ((2.0 * PI * t).exp() - 1.0));
        let alt = 1.0 / (t * t) - PI / (t * (PI * t).sinh());
        let s = eval_s(&p, t, 1e-14).unwrap().value;
        let sa = eval_s_alt(&p, t, 1e-14).unwrap().value;
        prop_assert!(((s - plain) / plain).abs() < 1e-12);
        prop_assert!(((sa - alt) / alt).abs() < 1e-12);
    }

    /// The remainder bound always covers the true error of a geometric sum.
    #[test]
    fn em_bound_is_sound(eps in 0.01f64..0.5, u in -0.5f64..1.5, n in 0usize..4, lambda in 0.3f64..2.0) {
        let g = Exponential::new(lambda);
        let r = em_sum(&g, eps, u, n).unwrap();
        let q = (-lambda * eps).exp();
        let exact = (-lambda * eps * (u + 1.0)).exp() / (1.0 - q);
        prop_assert!((exact - r.sum_estimate).abs() <= r.remainder_bound,
            "err {} bound {}", (exact - r.sum_estimate).abs(), r.remainder_bound);
    }

    #[test]
    fn boole_bound_is_sound(eps in 0.01f64..0.5, u in -0.5f64..1.5, n in 0usize..4, lambda in 0.3f64..2.0) {
        let g = Exponential::new(lambda);
        let r = boole_sum(&g, eps, u, n).unwrap();
        let q = (-lambda * eps).exp();
        let exact = (-lambda * eps * (u + 1.0)).exp() / (1.0 + q);
        prop_assert!((exact - r.sum_estimate).abs() <= r.remainder_bound,
            "err {} bound {}", (exact - r.sum_estimate).abs(), r.remainder_bound);
    }

    /// Finite identities hold for either sign of `u`.
    #[test]
    fn finite_identities(p in 1usize..20, eps in 0.05f64..0.5, u in -0.8f64..2.0, n in 0usize..5) {
        let f = JetFunction::new(8, |x| x.add_scalar(1.0).powi(-2))
            .with_domain_left(-0.9)
            .with_tail_integral(|t| 1.0 / (1.0 + t));
        let em = em_finite_identity(&f, p, eps, u, n).unwrap();
        let direct: f64 = (1..=p).map(|k| (1.0 + eps * (k as f64 + u)).powi(-2)).sum();
        prop_assert!(em.residual() <= 1e-9);
        prop_assert!((em.lhs - direct).abs() <= 1e-12 * direct.max(1.0));
        let bo = boole_finite_identity(&f, p, eps, u, n).unwrap();
        prop_assert!(bo.residual() <= 1e-9);
    }

    /// Grids from the spacing helpers are inclusive and strictly increasing.
    #[test]
    fn spaced_grids_validate(a in 1e-3f64..10.0, width in 1e-3f64..100.0, n in 2usize..300) {
        let b = a + width;
        for pts in [log_spaced(a, b, n), linear_spaced(a, b, n)] {
            prop_assert_eq!(pts.len(), n);
            prop_assert_eq!(pts[0], a);
            prop_assert_eq!(pts[n - 1], b);
            prop_assert!(GridSpec::new(pts, 1e-9).is_ok());
        }
    }

    /// A report passes exactly when it holds no violations.
    #[test]
    fn report_passes_iff_no_violations(
        rows in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0, 0.0f64..0.1, 0u8..3), 0..40),
    ) {
        let pm = params(&[("x", 1.0)]);
        let mut r = VerificationReport::new("random");
        for (i, &(a, b, e, kind)) in rows.iter().enumerate() {
            match kind {
                0 => r.less("less", &pm, i as f64, a, b, e),
                1 => r.less_eq("less_eq", &pm, i as f64, a, b, e),
                _ => r.close("close", &pm, i as f64, a, b, e),
            }
        }
        prop_assert_eq!(r.total, rows.len());
        prop_assert_eq!(r.passed, r.violations.is_empty());
        prop_assert!(r.violations.len() + r.inconclusive.len() <= r.total);
        // a strict comparison inside its error bracket is never a pass
        for v in r.inconclusive.iter() {
            prop_assert!(v.margin.abs() <= v.err);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    /// `m_μ(0)` does not increase and `M_μ(0)` does not decrease with `μ`.
    #[test]
    fn sharp_constants_monotone_in_mu(i in 0usize..4, gap in 1usize..4) {
        let mus = [0.5, 1.0, 2.0, 4.0, 8.0];
        let j = (i + gap).min(4);
        let cfg = SearchConfig::default();
        let lo = compute_mm(&SharpFramework::s_mu(mus[i], 0.0).unwrap(), &cfg).unwrap();
        let hi = compute_mm(&SharpFramework::s_mu(mus[j], 0.0).unwrap(), &cfg).unwrap();
        prop_assert!(hi.m <= lo.m + 2.0 * cfg.tol, "m({}) = {} > m({}) = {}", mus[j], hi.m, mus[i], lo.m);
        prop_assert!(hi.big_m >= lo.big_m - 2.0 * cfg.tol, "M({}) = {} < M({}) = {}", mus[j], hi.big_m, mus[i], lo.big_m);
    }
}
