//! The subcommands. Each returns whether its claims held; only `verify`
//! can report `false`.

use crate::config::{Command, RunConfig, TGrid};
use crate::output::{self, Field, Record, Sink};
use crate::CliError;
use mathieu_core::analysis::{kernel_transform, run_suite, SuiteOptions};
use mathieu_core::mathieu::{asym_s, asym_s_alt, eval_auto, eval_auto_alt, SeriesKind};
use mathieu_core::sharp::{big_m_infinity, compute_mm, m_infinity, Location, SearchConfig, SharpFramework};
use std::io::Write;

pub fn run(cfg: &RunConfig) -> Result<bool, CliError> {
    if cfg.command == Command::Verify {
        return verify(cfg);
    }
    let mut sink = Sink::new(cfg.format, output::open(cfg.output.as_deref())?);
    match cfg.command {
        Command::Eval | Command::EvalAlt => eval(cfg, &mut sink)?,
        Command::Asym => asym(cfg, &mut sink)?,
        Command::Constants => constants(cfg, &mut sink)?,
        Command::Hankel => hankel(cfg, &mut sink)?,
        Command::Verify => unreachable!(),
    }
    sink.finish()?;
    Ok(true)
}

fn eval(cfg: &RunConfig, sink: &mut Sink) -> Result<(), CliError> {
    let alt = cfg.command == Command::EvalAlt;
    let p = cfg.params(if alt { SeriesKind::Alternating } else { SeriesKind::Plain })?;
    for t in cfg.t_points() {
        let r = if alt {
            eval_auto_alt(&p, t, cfg.tol)?
        } else {
            eval_auto(&p, t, cfg.tol)?
        };
        sink.write(
            &Record::new()
                .with("t", t)
                .with("value", r.value)
                .with("err_lo", r.err_lo)
                .with("err_hi", r.err_hi)
                .with("method", r.method.to_string())
                .with("terms", r.terms_used),
        )?;
    }
    Ok(())
}

/// One row per expansion term, leading terms first. With `t` the rows also
/// carry the term's value and the running partial sum.
fn asym(cfg: &RunConfig, sink: &mut Sink) -> Result<(), CliError> {
    let p = cfg.params(if cfg.alt { SeriesKind::Alternating } else { SeriesKind::Plain })?;
    let series = if cfg.alt {
        asym_s_alt(&p, cfg.order)?
    } else {
        asym_s(&p, cfg.order)?
    };
    let t = match cfg.t {
        Some(TGrid::Point { t }) => Some(t),
        _ => None,
    };
    let mut partial = 0.0;
    for (k, term) in series.leading.iter().chain(&series.terms).enumerate() {
        let mut r = Record::new()
            .with("k", k)
            .with("exponent", term.power)
            .with("coefficient", term.coeff)
            .with("exact", term.exact.clone());
        if let Some(t) = t {
            let v = term.coeff * t.powf(term.power);
            partial += v;
            r = r.with("term", v).with("partial_sum", partial);
        }
        sink.write(&r)?;
    }
    Ok(())
}

fn location(l: Location) -> Field {
    match l {
        Location::Finite(t) => Field::Num(t),
        Location::Infinity => Field::Str("inf".into()),
    }
}

/// Sharp constants with the bounds `u²+u < m ≤ u²+u+1/6 < u²+u+1/4 < M < (1+u)²`
/// echoed next to them.
fn constants(cfg: &RunConfig, sink: &mut Sink) -> Result<(), CliError> {
    let u = cfg.u;
    if cfg.inf {
        let r = Record::new()
            .with("u", u)
            .with("m_inf", m_infinity(u)?)
            .with("M_inf", big_m_infinity(u)?);
        return sink.write(&r);
    }
    let fw = SharpFramework::s_mu(cfg.mu, u)?;
    let c = compute_mm(&fw, &SearchConfig::default())?;
    let base = u * u + u;
    let (m_hi, big_m_lo, big_m_hi) = (base + 1.0 / 6.0, base + 0.25, (1.0 + u) * (1.0 + u));
    let chain = base < c.m && c.m <= m_hi && big_m_lo < c.big_m && c.big_m < big_m_hi;
    sink.write(
        &Record::new()
            .with("mu", cfg.mu)
            .with("u", u)
            .with("m", c.m)
            .with("M", c.big_m)
            .with("f_inf", c.f_inf)
            .with("t_at_m", location(c.t_at_m))
            .with("t_at_M", location(c.t_at_big_m))
            .with("m_lower", base)
            .with("m_upper", m_hi)
            .with("M_lower", big_m_lo)
            .with("M_upper", big_m_hi)
            .with("bounds_hold", chain),
    )
}

fn hankel(cfg: &RunConfig, sink: &mut Sink) -> Result<(), CliError> {
    for t in cfg.t_points() {
        let r = kernel_transform(cfg.kernel, cfg.p, cfg.u, cfg.mu, t)?;
        sink.write(
            &Record::new()
                .with("t", t)
                .with("transform", r.transform)
                .with("error", r.error)
                .with("closed_form", r.closed_form)
                .with("closed_form_error", r.closed_form_error)
                .with("diff", r.transform - r.closed_form),
        )?;
    }
    Ok(())
}

/// Summary lines and the first violation go to stderr; the report is a
/// single JSON document.
fn verify(cfg: &RunConfig) -> Result<bool, CliError> {
    let suite = cfg.suite.expect("validated");
    let report = run_suite(suite, &SuiteOptions { tol: cfg.tol, b: cfg.b })?;
    for r in &report.reports {
        eprintln!("{}", r.summary());
    }
    if let Some(v) = report.reports.iter().flat_map(|r| &r.violations).next() {
        eprintln!(
            "witness: {} {} at {}: lhs = {}, rhs = {}, margin = {}",
            v.label,
            output::to_json(&v.params)?,
            v.point,
            v.lhs,
            v.rhs,
            v.margin
        );
    }
    eprintln!("{}: {}", suite, if report.passed { "PASS" } else { "FAIL" });
    let mut out = output::open(cfg.output.as_deref())?;
    writeln!(out, "{}", output::to_json(&report)?)?;
    out.flush()?;
    Ok(report.passed)
}
