//! `mathieu`: evaluate generalized Mathieu series, dump asymptotic
//! coefficients, compute sharp constants and run the verification suites.
//!
//! Exit codes: 0 success, 1 a verification failed or a computation could
//! not meet its tolerance, 2 invalid configuration or parameters.

mod commands;
mod config;
mod output;

use clap::{Args, Parser, Subcommand};
use config::{merge, parse_kv, Command, RunConfig, Settings};
use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Core(mathieu_core::Error),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use mathieu_core::Error as E;
        match self {
            CliError::Config(_) => 2,
            CliError::Core(
                E::Domain(_)
                | E::Delta { .. }
                | E::Regime(_)
                | E::Precondition(_)
                | E::Branch(_)
                | E::OrderOverflow { .. }
                | E::Smoothness { .. }
                | E::Divergence(_),
            ) => 2,
            CliError::Core(_) | CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o: {e}"),
        }
    }
}

impl From<mathieu_core::Error> for CliError {
    fn from(e: mathieu_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

#[derive(Parser)]
#[command(name = "mathieu", version, about = "Generalized Mathieu series toolkit")]
struct Cli {
    /// key=value file merged under the flags (flags win)
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Print the resolved configuration as key=value and exit
    #[arg(long, global = true)]
    print_config: bool,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate S(t) with an error bracket
    Eval(EvalArgs),
    /// Evaluate the alternating series
    EvalAlt(EvalArgs),
    /// List large-t expansion terms
    Asym(AsymArgs),
    /// Sharp constants m, M of the double inequality
    Constants(ConstantsArgs),
    /// Run a verification suite (classical, em, asymptotic, hermite, hankel, cm, monotone, all)
    Verify(VerifyArgs),
    /// Normalized Hankel-type transform of a kernel against its closed form
    Hankel(HankelArgs),
}

fn put<T: ToString>(s: &mut Settings, key: &str, v: &Option<T>) {
    if let Some(v) = v {
        s.insert(key.to_string(), v.to_string());
    }
}

fn put_flag(s: &mut Settings, key: &str, on: bool) {
    if on {
        s.insert(key.to_string(), "true".into());
    }
}

#[derive(Args)]
struct ParamArgs {
    #[arg(long, allow_negative_numbers = true)]
    gamma: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    mu: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    u: Option<f64>,
}

impl ParamArgs {
    fn settings(&self, s: &mut Settings) {
        put(s, "gamma", &self.gamma);
        put(s, "alpha", &self.alpha);
        put(s, "mu", &self.mu);
        put(s, "u", &self.u);
    }
}

#[derive(Args)]
struct GridArgs {
    /// Single evaluation point
    #[arg(long, allow_negative_numbers = true)]
    t: Option<f64>,
    /// Sweep start (inclusive)
    #[arg(long)]
    t_start: Option<f64>,
    /// Sweep end (inclusive)
    #[arg(long)]
    t_stop: Option<f64>,
    #[arg(long)]
    t_count: Option<usize>,
    /// linear or log
    #[arg(long)]
    spacing: Option<String>,
}

impl GridArgs {
    fn settings(&self, s: &mut Settings) {
        put(s, "t", &self.t);
        put(s, "t_start", &self.t_start);
        put(s, "t_stop", &self.t_stop);
        put(s, "t_count", &self.t_count);
        put(s, "spacing", &self.spacing);
    }
}

#[derive(Args)]
struct OutArgs {
    /// json (JSON lines) or csv
    #[arg(long)]
    format: Option<String>,
    /// Write to this file instead of stdout
    #[arg(long, short)]
    output: Option<PathBuf>,
}

impl OutArgs {
    fn settings(&self, s: &mut Settings) {
        put(s, "format", &self.format);
        put(s, "output", &self.output.as_ref().map(|p| p.display().to_string()));
    }
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    grid: GridArgs,
    /// Relative tolerance
    #[arg(long)]
    tol: Option<f64>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct AsymArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Number of terms after the leading one
    #[arg(long)]
    order: Option<usize>,
    /// Expand the alternating series
    #[arg(long)]
    alt: bool,
    /// Add term values and partial sums at this t
    #[arg(long)]
    t: Option<f64>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct ConstantsArgs {
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    u: Option<f64>,
    /// Report m_inf(u) and M_inf(u) instead
    #[arg(long)]
    inf: bool,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct VerifyArgs {
    suite: Option<String>,
    /// Agreement tolerance for identities
    #[arg(long)]
    tol: Option<f64>,
    /// Shift in the monotonicity suite
    #[arg(long, allow_negative_numbers = true)]
    b: Option<f64>,
    /// Write the JSON report here instead of stdout
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct HankelArgs {
    /// laplace, bose or difference
    #[arg(long)]
    kernel: Option<String>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    u: Option<f64>,
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    out: OutArgs,
}

impl Cmd {
    fn resolve(&self) -> (Command, Settings) {
        let mut s = Settings::new();
        let cmd = match self {
            Cmd::Eval(a) | Cmd::EvalAlt(a) => {
                a.params.settings(&mut s);
                a.grid.settings(&mut s);
                put(&mut s, "tol", &a.tol);
                a.out.settings(&mut s);
                if matches!(self, Cmd::Eval(_)) {
                    Command::Eval
                } else {
                    Command::EvalAlt
                }
            }
            Cmd::Asym(a) => {
                a.params.settings(&mut s);
                put(&mut s, "order", &a.order);
                put_flag(&mut s, "alt", a.alt);
                put(&mut s, "t", &a.t);
                a.out.settings(&mut s);
                Command::Asym
            }
            Cmd::Constants(a) => {
                put(&mut s, "mu", &a.mu);
                put(&mut s, "u", &a.u);
                put_flag(&mut s, "inf", a.inf);
                a.out.settings(&mut s);
                Command::Constants
            }
            Cmd::Verify(a) => {
                put(&mut s, "suite", &a.suite);
                put(&mut s, "tol", &a.tol);
                put(&mut s, "b", &a.b);
                put(&mut s, "output", &a.output.as_ref().map(|p| p.display().to_string()));
                Command::Verify
            }
            Cmd::Hankel(a) => {
                put(&mut s, "kernel", &a.kernel);
                put(&mut s, "p", &a.p);
                put(&mut s, "mu", &a.mu);
                put(&mut s, "u", &a.u);
                a.grid.settings(&mut s);
                a.out.settings(&mut s);
                Command::Hankel
            }
        };
        (cmd, s)
    }
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let (command, flags) = cli.command.resolve();
    let file = match &cli.config {
        Some(path) => parse_kv(
            &std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?,
        )?,
        None => Settings::new(),
    };
    let cfg = RunConfig::from_settings(command, &merge(file, flags))?;
    if cli.print_config {
        print!("{}", cfg.to_kv());
        return Ok(true);
    }
    commands::run(&cfg)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
