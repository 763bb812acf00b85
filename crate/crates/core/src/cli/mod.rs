//! Command-line front end: named protocols and sweeps, CSV output with JSON
//! sidecars.
//!
//! Exit codes: 0 success, 1 configuration error, 2 numerical failure,
//! 3 disagreement between the coherent and Fock engines.

mod circuit_file;
mod commands;
mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::Error;
use crate::protocols::AncillaModel;

pub use circuit_file::{CircuitFile, ElementEntry, InputEntry};
pub use commands::{run, Report};
pub use output::{float, sidecar_path, Table};

/// Largest tolerated fidelity or relative density gap between engines.
pub const ENGINE_TOLERANCE: f64 = 1e-6;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Numeric(#[from] Error),
    #[error("engines disagree: {0}")]
    Disagreement(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 1,
            CliError::Numeric(e) => match e {
                Error::Convergence(_) | Error::CutoffTooSmall { .. } | Error::ZeroDensity(_) | Error::DegenerateState(_) => 2,
                _ => 1,
            },
            CliError::Disagreement(_) => 3,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum EngineChoice {
    #[default]
    Coherent,
    Fock,
    Both,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum AncillaChoice {
    #[default]
    Approximate,
    Normalized,
    Exact,
}

impl From<AncillaChoice> for AncillaModel {
    fn from(c: AncillaChoice) -> Self {
        match c {
            AncillaChoice::Approximate => AncillaModel::Approximate,
            AncillaChoice::Normalized => AncillaModel::ApproximateNormalized,
            AncillaChoice::Exact => AncillaModel::Exact,
        }
    }
}

#[derive(Debug, Parser, Serialize)]
#[command(name = "hybrid-gkp", version, about = "Hybrid GKP entanglement generation: simulations and sweeps")]
pub struct Cli {
    /// Simulation engine; `both` cross-checks and fails on disagreement.
    #[arg(long, global = true, value_enum, default_value_t = EngineChoice::Coherent)]
    pub engine: EngineChoice,
    /// CSV output path (stdout when absent); a `<path>.json` sidecar is written next to it.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// TOML file of flag defaults; explicit flags win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Run a circuit file.
    Simulate(SimulateArgs),
    /// Closed-form fidelity of the first-generation output against α.
    SweepFidelity(SweepArgs),
    /// Averaged fidelity and success probability against the acceptance window.
    Tradeoff(TradeoffArgs),
    /// Branches of a breeding generation.
    Breed(BreedArgs),
    /// Branches of the hybrid qutrit circuit.
    Qutrit(QutritArgs),
    /// Branches of the equal-amplitude variant.
    EqualAmp(EqualAmpArgs),
    /// Photon-number parity spectrum of a named state in a displaced frame.
    Parity(ParityArgs),
    /// Wigner function of an output branch on a square grid.
    Wigner(WignerArgs),
    /// Exact split cat against its one-photon approximation.
    ValidateApprox(SweepArgs),
}

pub const SUBCOMMANDS: [&str; 9] = [
    "simulate",
    "sweep-fidelity",
    "tradeoff",
    "breed",
    "qutrit",
    "equal-amp",
    "parity",
    "wigner",
    "validate-approx",
];

#[derive(Debug, Args, Serialize)]
pub struct SimulateArgs {
    #[arg(long)]
    pub circuit: PathBuf,
    /// Fock cutoff per mode (heuristic when absent).
    #[arg(long)]
    pub cutoff: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 0.05)]
    pub alpha_min: f64,
    #[arg(long, default_value_t = 1.5)]
    pub alpha_max: f64,
    #[arg(long, default_value_t = 0.005)]
    pub step: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct TradeoffArgs {
    /// Cat amplitude, or `auto` for the fidelity-optimal value.
    #[arg(long, default_value = "auto")]
    pub alpha: String,
    #[arg(long, default_value_t = 3.0)]
    pub vup_max: f64,
    #[arg(long, default_value_t = 100)]
    pub points: usize,
    /// Half-width of the outcome domain normalizing the success probability.
    #[arg(long, default_value_t = crate::analysis::DEFAULT_P_MAX)]
    pub p_max: f64,
    #[arg(long, value_enum, default_value_t = AncillaChoice::Approximate)]
    pub ancilla: AncillaChoice,
}

#[derive(Debug, Args, Serialize)]
pub struct BreedArgs {
    /// Generation: 1 starts from the odd cat, j > 1 feeds generation j − 1.
    #[arg(long, default_value_t = 2)]
    pub j: usize,
    #[arg(long, default_value_t = 0.6)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub p: f64,
    #[arg(long, value_enum, default_value_t = AncillaChoice::Approximate)]
    pub ancilla: AncillaChoice,
    #[arg(long)]
    pub cutoff: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct QutritArgs {
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub p: f64,
    #[arg(long)]
    pub cutoff: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct EqualAmpArgs {
    /// Common cat amplitude A.
    #[arg(long, default_value_t = 0.557)]
    pub a: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub p: f64,
    #[arg(long, value_enum, default_value_t = AncillaChoice::Approximate)]
    pub ancilla: AncillaChoice,
    #[arg(long)]
    pub cutoff: Option<usize>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NamedState {
    LogicalZero,
    LogicalOne,
    BredZero,
    BredOne,
    QutritOne,
    QutritTwo,
    OddCat,
}

#[derive(Debug, Args, Serialize)]
pub struct ParityArgs {
    #[arg(long, value_enum)]
    pub state: NamedState,
    /// β for the logical states, α for the others.
    #[arg(long)]
    pub amplitude: f64,
    /// Frame displacement (real part); the state's natural frame when absent.
    #[arg(long, allow_negative_numbers = true)]
    pub frame_re: Option<f64>,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub frame_im: f64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WignerProtocol {
    Hybrid,
    Breed,
    Qutrit,
    EqualAmp,
    OddCat,
}

#[derive(Debug, Args, Serialize)]
pub struct WignerArgs {
    #[arg(long, value_enum)]
    pub protocol: WignerProtocol,
    #[arg(long, default_value_t = 2)]
    pub j: usize,
    #[arg(long, default_value_t = 0.6)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub p: f64,
    #[arg(long, default_value_t = 0)]
    pub branch: usize,
    /// Grid covers [−extent, extent] in both quadratures.
    #[arg(long, default_value_t = 4.0)]
    pub extent: f64,
    #[arg(long, default_value_t = 81)]
    pub points: usize,
}

/// Fills flags missing from `args` with values from the `--config` TOML file.
/// A `command` key supplies the subcommand when none is given.
pub fn expand_config(args: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let text: Vec<String> = args.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    let path = text.iter().enumerate().find_map(|(k, a)| {
        if a == "--config" {
            text.get(k + 1).cloned()
        } else {
            a.strip_prefix("--config=").map(str::to_string)
        }
    });
    let Some(path) = path else {
        return Ok(args);
    };
    let doc = std::fs::read_to_string(&path).map_err(|e| CliError::Config(format!("cannot read config {path}: {e}")))?;
    let table: toml::Table = toml::from_str(&doc).map_err(|e| CliError::Config(format!("config {path}: {e}")))?;
    let mut args = args;
    let mut at = match text.iter().position(|a| SUBCOMMANDS.contains(&a.as_str())) {
        Some(k) => k + 1,
        None => match table.get("command").and_then(|c| c.as_str()) {
            Some(c) => {
                let k = args.len().min(1);
                args.insert(k, c.into());
                k + 1
            }
            None => return Err(CliError::Config("no subcommand given".into())),
        },
    };
    let given = |flag: &str| text.iter().any(|a| a == flag || a.starts_with(&format!("{flag}=")));
    for (key, value) in &table {
        if key == "command" || key == "config" {
            continue;
        }
        let flag = format!("--{}", key.replace('_', "-"));
        if given(&flag) {
            continue;
        }
        let value = match value {
            toml::Value::String(s) => Some(s.clone()),
            toml::Value::Integer(i) => Some(i.to_string()),
            toml::Value::Float(x) => Some(x.to_string()),
            toml::Value::Boolean(true) => None,
            toml::Value::Boolean(false) => continue,
            other => return Err(CliError::Config(format!("config key {key}: unsupported value {other}"))),
        };
        let arg = match value {
            Some(v) => format!("{flag}={v}"),
            None => flag,
        };
        args.insert(at, arg.into());
        at += 1;
    }
    Ok(args)
}

/// Parses, runs and writes outputs; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let args = match expand_config(args) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli).and_then(|report| report.emit(&cli)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
