//! Command-line flags and the top-level driver.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{parse_settings, RunConfig, Settings, Task};
use crate::error::CliError;
use crate::output::write_atomic;
use crate::run::run;

#[derive(Debug, Parser)]
#[command(
    name = "qgt",
    version,
    about = "Quantum geometric tensors of parametrized states"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// QGT, metric split and curvature at one point (--at).
    Tensor(Flags),
    /// QGT over a parameter grid (--grid), one CSV row per point.
    Sweep(Flags),
    /// Horizontal lift and per-level Berry phases along a curve (--curve).
    Transport(Flags),
    /// Surface phase θ_g over a patch (--patch).
    #[command(name = "theta-g")]
    ThetaG(Flags),
    /// Quantum volume and its relation to θ_g over a patch (--patch).
    Volume(Flags),
    /// Randomized verification suite (--suite, --seed, --draws).
    Verify(Flags),
    /// Finite distance between the states at --at and --to.
    Distance(Flags),
    /// List the available models.
    Models(Flags),
}

#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// Config file (`key = value` lines with optional [section] headers).
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub model: Option<String>,
    #[arg(long)]
    pub beta: Option<String>,
    #[arg(long)]
    pub omega: Option<String>,
    /// Fock truncation of the bosonic model.
    #[arg(long)]
    pub ncut: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
    /// Hilbert-space dimension of the random model.
    #[arg(long)]
    pub dim: Option<String>,
    /// Parameter count of the random model.
    #[arg(long)]
    pub params: Option<String>,
    /// `error` or `warn` when the Fock truncation is too small.
    #[arg(long)]
    pub truncation: Option<String>,
    /// Point `r1,r2,...`.
    #[arg(long, allow_hyphen_values = true)]
    pub at: Option<String>,
    /// Second point of a distance.
    #[arg(long, allow_hyphen_values = true)]
    pub to: Option<String>,
    /// Grid `name:lo:hi:count,...`.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    /// Curve `circle:cx,cy:r:steps`, `rect:u0,u1,v0,v1:steps` or
    /// `path:x,y;x,y;...:steps[:closed]`.
    #[arg(long, allow_hyphen_values = true)]
    pub curve: Option<String>,
    /// Patch `u:lo:hi:n,v:lo:hi:n`.
    #[arg(long, allow_hyphen_values = true)]
    pub patch: Option<String>,
    #[arg(long)]
    pub fd_step: Option<String>,
    /// central2, central4 or richardson.
    #[arg(long)]
    pub fd_scheme: Option<String>,
    /// Worker threads, or `auto`; QGT_THREADS when absent.
    #[arg(long)]
    pub threads: Option<String>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub output: Option<String>,
    /// csv or json.
    #[arg(long)]
    pub format: Option<String>,
    #[arg(long)]
    pub suite: Option<String>,
    #[arg(long)]
    pub draws: Option<String>,
}

impl Command {
    pub fn split(self) -> (Task, Flags) {
        match self {
            Command::Tensor(f) => (Task::Tensor, f),
            Command::Sweep(f) => (Task::Sweep, f),
            Command::Transport(f) => (Task::Transport, f),
            Command::ThetaG(f) => (Task::ThetaG, f),
            Command::Volume(f) => (Task::Volume, f),
            Command::Verify(f) => (Task::Verify, f),
            Command::Distance(f) => (Task::Distance, f),
            Command::Models(f) => (Task::Models, f),
        }
    }
}

/// Merges the config file (if any) with flags; flags win.
pub fn settings(task: Task, flags: &Flags) -> Result<Settings, CliError> {
    let mut s = match &flags.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Invalid(format!("reading {}: {e}", path.display())))?;
            parse_settings(&text)?
        }
        None => Settings::default(),
    };
    s.set_flag("run.task", task.name());
    let region = [
        (&flags.at, "point:"),
        (&flags.grid, "grid:"),
        (&flags.curve, ""),
        (&flags.patch, "patch:"),
    ];
    let given: Vec<String> = region
        .iter()
        .filter_map(|(v, prefix)| v.as_ref().map(|v| format!("{prefix}{v}")))
        .collect();
    match given.as_slice() {
        [] => {}
        [one] => s.set_flag("run.region", one.clone()),
        _ => {
            return Err(CliError::Invalid(
                "give at most one of --at, --grid, --curve, --patch".into(),
            ))
        }
    }
    let pairs = [
        ("model.name", &flags.model),
        ("model.beta", &flags.beta),
        ("model.omega", &flags.omega),
        ("model.ncut", &flags.ncut),
        ("model.seed", &flags.seed),
        ("model.dim", &flags.dim),
        ("model.params", &flags.params),
        ("model.truncation", &flags.truncation),
        ("run.to", &flags.to),
        ("fd.step", &flags.fd_step),
        ("fd.scheme", &flags.fd_scheme),
        ("run.threads", &flags.threads),
        ("output.path", &flags.output),
        ("output.format", &flags.format),
        ("verify.suite", &flags.suite),
        ("verify.draws", &flags.draws),
    ];
    for (key, value) in pairs {
        if let Some(v) = value {
            s.set_flag(key, v.clone());
        }
    }
    Ok(s)
}

/// Runs a parsed command line and returns the process exit code.
pub fn execute(cli: Cli) -> Result<i32, CliError> {
    let (task, flags) = cli.command.split();
    let cfg = RunConfig::from_settings(&settings(task, &flags)?)?;
    let outcome = run(&cfg)?;
    let text = outcome.report.render(cfg.format, outcome.header);
    match &cfg.output {
        Some(path) => write_atomic(std::path::Path::new(path), &text)?,
        None => print!("{text}"),
    }
    match outcome.verified {
        Some(false) => Err(CliError::VerifyFailed(format!(
            "suite {} with seed {} has failing inequalities",
            cfg.verify.suite, cfg.verify.seed
        ))),
        _ => Ok(0),
    }
}
