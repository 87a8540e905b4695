//! Run configuration resolved from flags and an optional `key=value` file.
//!
//! Both sources are first collected as string [`Settings`] under the same
//! keys (flag names with `-` replaced by `_`), merged with the flags on top,
//! and then parsed and validated once.

use crate::CliError;
use mathieu_core::analysis::{linear_spaced, log_spaced, Suite, SuiteOptions, TransformKernel};
use mathieu_core::mathieu::{MathieuParams, SeriesKind};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

pub type Settings = BTreeMap<String, String>;

/// Every key a config file may contain.
pub const KEYS: &[&str] = &[
    "alpha", "alt", "b", "command", "format", "gamma", "inf", "kernel", "mu", "order", "output", "p", "spacing",
    "suite", "t", "t_count", "t_start", "t_stop", "tol", "u",
];

pub const DEFAULT_EVAL_TOL: f64 = 1e-12;
pub const DEFAULT_ORDER: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Eval,
    EvalAlt,
    Asym,
    Constants,
    Verify,
    Hankel,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Eval => "eval",
            Command::EvalAlt => "eval-alt",
            Command::Asym => "asym",
            Command::Constants => "constants",
            Command::Verify => "verify",
            Command::Hankel => "hankel",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        [
            Command::Eval,
            Command::EvalAlt,
            Command::Asym,
            Command::Constants,
            Command::Verify,
            Command::Hankel,
        ]
        .into_iter()
        .find(|c| c.name() == s)
        .ok_or_else(|| CliError::Config(format!("unknown command '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(CliError::Config(format!("format must be json or csv, got '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    Log,
}

impl FromStr for Spacing {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "linear" => Ok(Spacing::Linear),
            "log" => Ok(Spacing::Log),
            _ => Err(CliError::Config(format!("spacing must be linear or log, got '{s}'"))),
        }
    }
}

/// A single `t` or an inclusive sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum TGrid {
    Point { t: f64 },
    Range { start: f64, stop: f64, count: usize, spacing: Spacing },
}

impl TGrid {
    pub fn points(&self) -> Vec<f64> {
        match *self {
            TGrid::Point { t } => vec![t],
            TGrid::Range { start, stop, count, spacing: Spacing::Linear } => linear_spaced(start, stop, count),
            TGrid::Range { start, stop, count, spacing: Spacing::Log } => log_spaced(start, stop, count),
        }
    }

    fn validate(&self) -> Result<(), CliError> {
        match *self {
            TGrid::Point { t } if !(t >= 0.0 && t.is_finite()) => {
                Err(CliError::Config(format!("t must be finite and ≥ 0, got {t}")))
            }
            TGrid::Point { .. } => Ok(()),
            TGrid::Range { start, stop, count, spacing } => {
                if count == 0 {
                    return Err(CliError::Config("t_count must be at least 1".into()));
                }
                if !(start >= 0.0 && start.is_finite() && stop.is_finite()) {
                    return Err(CliError::Config(format!("t range must be finite and ≥ 0 ({start}..{stop})")));
                }
                if count > 1 && !(start < stop) {
                    return Err(CliError::Config(format!("t_start must be below t_stop ({start} vs {stop})")));
                }
                if spacing == Spacing::Log && start <= 0.0 {
                    return Err(CliError::Config("log spacing needs t_start > 0".into()));
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub gamma: f64,
    pub alpha: f64,
    pub mu: f64,
    pub u: f64,
    /// Exponential rate of the comparison kernel (`hankel`).
    pub p: f64,
    pub t: Option<TGrid>,
    /// Relative tolerance for `eval`, absolute agreement tolerance for `verify`.
    pub tol: f64,
    /// Number of expansion terms (`asym`).
    pub order: usize,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub suite: Option<Suite>,
    /// Shift in the monotonicity suite.
    pub b: f64,
    pub kernel: TransformKernel,
    /// `constants`: report the `μ → ∞` limits instead.
    pub inf: bool,
    /// `asym`: expand the alternating series.
    pub alt: bool,
}

/// Parses `key=value` lines; blank lines and `#` comments are skipped.
pub fn parse_kv(text: &str) -> Result<Settings, CliError> {
    let mut out = Settings::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("line {}: expected key=value", i + 1)))?;
        let key = k.trim().replace('-', "_");
        if !KEYS.contains(&key.as_str()) {
            return Err(CliError::Config(format!("line {}: unknown key '{key}'", i + 1)));
        }
        if out.insert(key.clone(), v.trim().to_string()).is_some() {
            return Err(CliError::Config(format!("line {}: duplicate key '{key}'", i + 1)));
        }
    }
    Ok(out)
}

/// `file` overlaid by `flags`.
pub fn merge(file: Settings, flags: Settings) -> Settings {
    let mut out = file;
    out.extend(flags);
    out
}

fn get<T: FromStr>(s: &Settings, key: &str) -> Result<Option<T>, CliError> {
    s.get(key)
        .map(|v| {
            v.parse::<T>()
                .map_err(|_| CliError::Config(format!("invalid value for '{key}': '{v}'")))
        })
        .transpose()
}

fn get_bool(s: &Settings, key: &str) -> Result<bool, CliError> {
    match s.get(key).map(String::as_str) {
        None | Some("false") => Ok(false),
        Some("true") => Ok(true),
        Some(v) => Err(CliError::Config(format!("invalid value for '{key}': '{v}' (true or false)"))),
    }
}

fn core<T: FromStr<Err = mathieu_core::Error>>(s: &Settings, key: &str) -> Result<Option<T>, CliError> {
    s.get(key)
        .map(|v| v.parse::<T>().map_err(|e| CliError::Config(format!("invalid value for '{key}': {e}"))))
        .transpose()
}

impl RunConfig {
    /// Typed, validated configuration for `command`. A `command` key in the
    /// settings is ignored in favour of the argument.
    pub fn from_settings(command: Command, s: &Settings) -> Result<Self, CliError> {
        let point: Option<f64> = get(s, "t")?;
        let start: Option<f64> = get(s, "t_start")?;
        let stop: Option<f64> = get(s, "t_stop")?;
        let count: Option<usize> = get(s, "t_count")?;
        let spacing: Option<Spacing> = get(s, "spacing")?;
        let t = match (point, start, stop, count) {
            (Some(t), None, None, None) if spacing.is_none() => Some(TGrid::Point { t }),
            (Some(_), ..) => {
                return Err(CliError::Config("give either t or t_start/t_stop/t_count, not both".into()))
            }
            (None, Some(start), Some(stop), Some(count)) => Some(TGrid::Range {
                start,
                stop,
                count,
                spacing: spacing.unwrap_or(Spacing::Linear),
            }),
            (None, None, None, None) if spacing.is_none() => None,
            _ => return Err(CliError::Config("a t range needs t_start, t_stop and t_count".into())),
        };
        let defaults = SuiteOptions::default();
        let cfg = RunConfig {
            command,
            gamma: get(s, "gamma")?.unwrap_or(1.0),
            alpha: get(s, "alpha")?.unwrap_or(2.0),
            mu: get(s, "mu")?.unwrap_or(1.0),
            u: get(s, "u")?.unwrap_or(0.0),
            p: get(s, "p")?.unwrap_or(1.0),
            t,
            tol: get(s, "tol")?.unwrap_or(if command == Command::Verify {
                defaults.tol
            } else {
                DEFAULT_EVAL_TOL
            }),
            order: get(s, "order")?.unwrap_or(DEFAULT_ORDER),
            format: get(s, "format")?.unwrap_or(Format::Json),
            output: s.get("output").map(PathBuf::from),
            suite: core(s, "suite")?,
            b: get(s, "b")?.unwrap_or(defaults.b),
            kernel: core(s, "kernel")?.unwrap_or(TransformKernel::Difference),
            inf: get_bool(s, "inf")?,
            alt: get_bool(s, "alt")?,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Rejects combinations the command cannot run; parameter sets go
    /// through [`MathieuParams::new`] so the messages match the library's.
    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(CliError::Config(format!("tol must be positive, got {}", self.tol)));
        }
        if let Some(t) = &self.t {
            t.validate()?;
        }
        let needs_t = || {
            if self.t.is_none() {
                Err(CliError::Config(format!("{} needs t or a t range", self.command)))
            } else {
                Ok(())
            }
        };
        match self.command {
            Command::Eval | Command::EvalAlt | Command::Asym => {
                let alt = self.command == Command::EvalAlt || (self.command == Command::Asym && self.alt);
                let kind = if alt { SeriesKind::Alternating } else { SeriesKind::Plain };
                self.params(kind)?;
                if self.command == Command::Asym {
                    if let Some(TGrid::Range { .. }) = self.t {
                        return Err(CliError::Config("asym takes a single t".into()));
                    }
                } else {
                    needs_t()?;
                }
            }
            Command::Constants => {
                if !(self.u >= 0.0 && self.u.is_finite()) || (!self.inf && !(self.mu > 0.0 && self.mu.is_finite())) {
                    return Err(CliError::Config(format!(
                        "constants need mu > 0 and u ≥ 0 (mu = {}, u = {})",
                        self.mu, self.u
                    )));
                }
            }
            Command::Verify => {
                if self.suite.is_none() {
                    return Err(CliError::Config("verify needs a suite name".into()));
                }
                if !self.b.is_finite() {
                    return Err(CliError::Config(format!("b must be finite, got {}", self.b)));
                }
            }
            Command::Hankel => needs_t()?,
        }
        Ok(())
    }

    pub fn params(&self, kind: SeriesKind) -> Result<MathieuParams, CliError> {
        Ok(MathieuParams::new(self.gamma, self.alpha, self.mu, self.u, kind)?)
    }

    pub fn t_points(&self) -> Vec<f64> {
        self.t.map(|t| t.points()).unwrap_or_default()
    }

    /// Settings that rebuild this configuration through [`Self::from_settings`].
    pub fn to_settings(&self) -> Settings {
        let mut s = Settings::new();
        let mut put = |k: &str, v: String| {
            s.insert(k.to_string(), v);
        };
        put("command", self.command.to_string());
        put("gamma", format!("{:?}", self.gamma));
        put("alpha", format!("{:?}", self.alpha));
        put("mu", format!("{:?}", self.mu));
        put("u", format!("{:?}", self.u));
        put("p", format!("{:?}", self.p));
        match self.t {
            Some(TGrid::Point { t }) => put("t", format!("{t:?}")),
            Some(TGrid::Range { start, stop, count, spacing }) => {
                put("t_start", format!("{start:?}"));
                put("t_stop", format!("{stop:?}"));
                put("t_count", count.to_string());
                put("spacing", if spacing == Spacing::Log { "log" } else { "linear" }.into());
            }
            None => {}
        }
        put("tol", format!("{:?}", self.tol));
        put("order", self.order.to_string());
        put("format", if self.format == Format::Csv { "csv" } else { "json" }.into());
        if let Some(o) = &self.output {
            put("output", o.display().to_string());
        }
        if let Some(suite) = self.suite {
            put("suite", suite.to_string());
        }
        put("b", format!("{:?}", self.b));
        let kernel = match self.kernel {
            TransformKernel::Laplace => "laplace",
            TransformKernel::Bose => "bose",
            TransformKernel::Difference => "difference",
        };
        put("kernel", kernel.into());
        put("inf", self.inf.to_string());
        put("alt", self.alt.to_string());
        s
    }

    /// The configuration as a `key=value` file, keys sorted.
    pub fn to_kv(&self) -> String {
        self.to_settings().iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn settings(pairs: &[(&str, &str)]) -> Settings {
        pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
    }

    #[test]
    fn kv_round_trip() {
        let s = settings(&[("t_start", "0.01"), ("t_stop", "100"), ("t_count", "7"), ("spacing", "log"), ("u", "0.25")]);
        let cfg = RunConfig::from_settings(Command::Eval, &s).unwrap();
        let text = cfg.to_kv();
        let back = RunConfig::from_settings(Command::Eval, &parse_kv(&text).unwrap()).unwrap();
        assert_eq!(back, cfg);
        let json = serde_json::to_string(&cfg).unwrap();
        let back: RunConfig = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn round_trip_every_command() {
        let cases = [
            (Command::EvalAlt, settings(&[("gamma", "0"), ("mu", "0"), ("t", "0.1")])),
            (Command::Asym, settings(&[("order", "4"), ("alt", "true"), ("t", "30")])),
            (Command::Constants, settings(&[("inf", "true"), ("u", "1")])),
            (Command::Verify, settings(&[("suite", "hankel"), ("tol", "1e-7"), ("output", "r.json")])),
            (Command::Hankel, settings(&[("kernel", "bose"), ("t", "2"), ("format", "csv")])),
        ];
        for (cmd, s) in cases {
            let cfg = RunConfig::from_settings(cmd, &s).unwrap();
            let back = RunConfig::from_settings(cmd, &parse_kv(&cfg.to_kv()).unwrap()).unwrap();
            assert_eq!(back, cfg, "{cmd}");
        }
    }

    #[test]
    fn flags_win_over_file() {
        let file = parse_kv("# defaults\nmu = 2\nu=0.5\n t=1 \n").unwrap();
        let flags = settings(&[("mu", "1")]);
        let cfg = RunConfig::from_settings(Command::Eval, &merge(file, flags)).unwrap();
        assert_eq!(cfg.mu, 1.0);
        assert_eq!(cfg.u, 0.5);
    }

    #[test]
    fn file_errors() {
        assert!(parse_kv("gamma 1").is_err());
        assert!(parse_kv("gama=1").is_err());
        assert!(parse_kv("mu=1\nmu=2").is_err());
        assert_eq!(parse_kv("t-start=1").unwrap()["t_start"], "1");
    }

    #[test]
    fn delta_rejection_uses_library_message() {
        let s = settings(&[("gamma", "1"), ("alpha", "2"), ("mu", "0"), ("t", "1")]);
        let err = RunConfig::from_settings(Command::Eval, &s).unwrap_err();
        assert!(err.to_string().contains("delta must exceed 1"), "{err}");
        assert_eq!(err.exit_code(), 2);
        // the alternating series only needs delta > 0
        assert!(RunConfig::from_settings(Command::EvalAlt, &s).is_ok());
    }

    #[test]
    fn grid_rules() {
        let bad = [
            settings(&[("t", "1"), ("t_count", "3")]),
            settings(&[("t_start", "1"), ("t_stop", "2")]),
            settings(&[("t_start", "0"), ("t_stop", "2"), ("t_count", "3"), ("spacing", "log")]),
            settings(&[("t_start", "2"), ("t_stop", "1"), ("t_count", "3")]),
            settings(&[("t", "-1")]),
            settings(&[]),
        ];
        for s in &bad {
            assert!(RunConfig::from_settings(Command::Eval, s).is_err(), "{s:?}");
        }
        let s = settings(&[("t_start", "1"), ("t_stop", "2"), ("t_count", "5")]);
        let pts = RunConfig::from_settings(Command::Hankel, &s).unwrap().t_points();
        assert_eq!(pts, vec![1.0, 1.25, 1.5, 1.75, 2.0]);
    }
}
