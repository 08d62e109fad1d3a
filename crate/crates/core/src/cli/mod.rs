//! Command-line front end.
//!
//! `--tol.<name> <value>` (or `--tol.<name>=<value>`) flags are split off
//! before clap sees the rest of the arguments, because their names are open
//! ended.

mod output;
mod run;
mod svg;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

pub use output::{Check, Report, SignRow};
pub use run::run;

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "NODAL_RADIUS_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    AnalyzeTrig,
    AnalyzeSphere,
    AnalyzeMix,
    VerifyIdentity,
    Sharpness,
    Suite,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::AnalyzeTrig => "analyze-trig",
            Command::AnalyzeSphere => "analyze-sphere",
            Command::AnalyzeMix => "analyze-mix",
            Command::VerifyIdentity => "verify-identity",
            Command::Sharpness => "sharpness",
            Command::Suite => "suite",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "nodal-radius", version, about = "Sign-change radius bounds and eigenfunction identity checks")]
struct Args {
    #[arg(long, value_enum)]
    cmd: Command,
    /// JSON instance file (one object or an array of objects).
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Samples per axis; defaults depend on the domain.
    #[arg(long)]
    resolution: Option<usize>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long)]
    svg: bool,
    /// Lowest frequency A for the sharpness probe.
    #[arg(long, default_value_t = 5)]
    a: u32,
    /// Bandwidth B for the sharpness probe.
    #[arg(long, default_value_t = 1)]
    b: u32,
    /// Trials per sharpness probe, and instances per family in the suite.
    #[arg(long, default_value_t = 10)]
    trials: usize,
}

/// Named tolerances with their defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct Tolerances(BTreeMap<String, f64>);

impl Default for Tolerances {
    fn default() -> Self {
        let table = [
            ("quad", 1e-10),
            ("identity", 1e-6),
            ("identity_general", 1e-5),
            ("zero_balance", 1e-7),
            ("ode", 1e-4),
            ("wave", 1e-5),
            ("pde", 1e-4),
            ("sharpness", 1.0 / 4096.0),
        ];
        Self(table.iter().map(|&(k, v)| (k.to_string(), v)).collect())
    }
}

impl Tolerances {
    pub fn get(&self, name: &str) -> f64 {
        self.0[name]
    }

    pub fn set(&mut self, name: &str, value: f64) -> Result<(), CliError> {
        match self.0.get_mut(name) {
            None => Err(CliError::Parse(format!(
                "--tol.{name}: unknown tolerance (known: {})",
                self.0.keys().cloned().collect::<Vec<_>>().join(", ")
            ))),
            Some(_) if !(value > 0.0) || !value.is_finite() => {
                Err(CliError::Parse(format!("--tol.{name}: must be positive and finite, got {value}")))
            }
            Some(slot) => {
                *slot = value;
                Ok(())
            }
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub input: Option<PathBuf>,
    pub seed: u64,
    pub tolerances: Tolerances,
    pub resolution: Option<usize>,
    pub out: PathBuf,
    pub svg: bool,
    pub a: u32,
    pub b: u32,
    pub trials: usize,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad flags or input; the message names the offending field.
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Io(String),
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            input: None,
            seed: 0,
            tolerances: Tolerances::default(),
            resolution: None,
            out: PathBuf::from("out"),
            svg: false,
            a: 5,
            b: 1,
            trials: 10,
        }
    }

    /// Parses command-line arguments, the first being the program name.
    pub fn from_args<I, T>(args: I) -> Result<Self, ParseOutcome>
    where
        I: IntoIterator<Item = T>,
        T: Into<OsString>,
    {
        let mut rest = Vec::new();
        let mut tols = Vec::new();
        let mut it = args.into_iter().map(Into::into);
        while let Some(arg) = it.next() {
            let Some(flag) = arg.to_str().and_then(|s| s.strip_prefix("--tol.")) else {
                rest.push(arg);
                continue;
            };
            let (name, value) = match flag.split_once('=') {
                Some((n, v)) => (n.to_string(), v.to_string()),
                None => {
                    let value = it
                        .next()
                        .and_then(|v| v.into_string().ok())
                        .ok_or_else(|| ParseOutcome::Error(CliError::Parse(format!("--tol.{flag}: missing value"))))?;
                    (flag.to_string(), value)
                }
            };
            tols.push((name, value));
        }
        let args = Args::try_parse_from(rest).map_err(ParseOutcome::Clap)?;
        let mut tolerances = Tolerances::default();
        for (name, value) in tols {
            let v: f64 = value.parse().map_err(|_| {
                ParseOutcome::Error(CliError::Parse(format!("--tol.{name}: '{value}' is not a number")))
            })?;
            tolerances.set(&name, v).map_err(ParseOutcome::Error)?;
        }
        if let Some(r) = args.resolution {
            if r < 16 {
                return Err(ParseOutcome::Error(CliError::Parse(format!(
                    "--resolution: must be at least 16, got {r}"
                ))));
            }
        }
        if args.trials == 0 {
            return Err(ParseOutcome::Error(CliError::Parse("--trials: must be at least 1".into())));
        }
        Ok(Self {
            command: args.cmd,
            input: args.input,
            seed: args.seed,
            tolerances,
            resolution: args.resolution,
            out: args.out,
            svg: args.svg,
            a: args.a,
            b: args.b,
            trials: args.trials,
        })
    }
}

/// Why argument parsing stopped.
#[derive(Debug)]
pub enum ParseOutcome {
    /// Help, version or a usage error, rendered by clap.
    Clap(clap::Error),
    Error(CliError),
}

pub mod exit {
    pub const PASS: u8 = 0;
    pub const FAIL: u8 = 1;
    pub const PARSE: u8 = 2;
    pub const ACCURACY: u8 = 3;
}

/// Entry point shared by the binary: parse, run, map the outcome to an exit code.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let config = match RunConfig::from_args(args) {
        Ok(c) => c,
        Err(ParseOutcome::Clap(e)) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::PARSE } else { exit::PASS });
        }
        Err(ParseOutcome::Error(e)) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit::PARSE);
        }
    };
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    match run(&config) {
        Ok(report) => {
            for e in &report.accuracy_errors {
                eprintln!("accuracy: {e}");
            }
            let failed = report.failures();
            for f in &failed {
                eprintln!("FAIL {f}");
            }
            if !report.accuracy_errors.is_empty() {
                ExitCode::from(exit::ACCURACY)
            } else if failed.is_empty() {
                ExitCode::from(exit::PASS)
            } else {
                ExitCode::from(exit::FAIL)
            }
        }
        Err(CliError::Parse(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(exit::PARSE)
        }
        Err(CliError::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(exit::FAIL)
        }
    }
}
