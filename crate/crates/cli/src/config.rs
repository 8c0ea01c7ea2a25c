//! Run configuration: a flat `key = value` file with optional `[section]`
//! headers, overridden by command-line flags.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use qgt_core::derivatives::{Scheme, StepPolicy, DEFAULT_STEP};
use qgt_core::models::{ModelConfig, TruncationPolicy};

use crate::error::CliError;
use crate::region::{Region, RegionKind};

/// Keys accepted in a config file, written as `section.key`. Keys before the
/// first header live in the `run` section.
pub const KNOWN_KEYS: &[&str] = &[
    "run.task",
    "run.region",
    "run.to",
    "run.threads",
    "model.name",
    "model.beta",
    "model.omega",
    "model.ncut",
    "model.seed",
    "model.dim",
    "model.params",
    "model.truncation",
    "fd.step",
    "fd.scheme",
    "output.path",
    "output.format",
    "verify.suite",
    "verify.draws",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Task {
    Tensor,
    Sweep,
    Transport,
    ThetaG,
    Volume,
    Verify,
    Distance,
    Models,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Task::Tensor => "tensor",
            Task::Sweep => "sweep",
            Task::Transport => "transport",
            Task::ThetaG => "theta-g",
            Task::Volume => "volume",
            Task::Verify => "verify",
            Task::Distance => "distance",
            Task::Models => "models",
        }
    }

    /// The region kind the task consumes, if any.
    pub fn region_kind(self) -> Option<RegionKind> {
        match self {
            Task::Tensor | Task::Distance => Some(RegionKind::Point),
            Task::Sweep => Some(RegionKind::Grid),
            Task::Transport => Some(RegionKind::Curve),
            Task::ThetaG | Task::Volume => Some(RegionKind::Patch),
            Task::Verify | Task::Models => None,
        }
    }

    fn needs_model(self) -> bool {
        !matches!(self, Task::Verify | Task::Models)
    }

    fn default_format(self) -> Format {
        match self {
            Task::Sweep => Format::Csv,
            _ => Format::Json,
        }
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Task {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "tensor" => Task::Tensor,
            "sweep" => Task::Sweep,
            "transport" => Task::Transport,
            "theta-g" => Task::ThetaG,
            "volume" => Task::Volume,
            "verify" => Task::Verify,
            "distance" => Task::Distance,
            "models" => Task::Models,
            _ => return Err(format!("unknown task `{s}`")),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(format!("unknown format `{s}` (expected csv or json)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelName {
    ThermalBloch,
    PureBloch,
    GroundBloch,
    BosonicCoherent,
    Random,
    DiagonalQubit,
}

impl ModelName {
    pub const ALL: [ModelName; 6] = [
        ModelName::ThermalBloch,
        ModelName::PureBloch,
        ModelName::GroundBloch,
        ModelName::BosonicCoherent,
        ModelName::Random,
        ModelName::DiagonalQubit,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModelName::ThermalBloch => "thermal-bloch",
            ModelName::PureBloch => "pure-bloch",
            ModelName::GroundBloch => "ground-bloch",
            ModelName::BosonicCoherent => "bosonic-coherent",
            ModelName::Random => "random",
            ModelName::DiagonalQubit => "diagonal-qubit",
        }
    }

    pub fn summary(self) -> &'static str {
        match self {
            ModelName::ThermalBloch => {
                "thermal state of (ω/2) n(θ,φ)·σ; params θ ∈ (0, π), φ periodic; uses beta, omega"
            }
            ModelName::PureBloch => "pure state (cos θ/2, e^{iφ} sin θ/2); params θ, φ",
            ModelName::GroundBloch => "ground state of (ω/2) n(θ,φ)·σ; params θ, φ; uses omega",
            ModelName::BosonicCoherent => {
                "displaced thermal oscillator in a truncated Fock space; params x, y; uses beta, omega, ncut"
            }
            ModelName::Random => {
                "thermal state (β = 1) of H0 + Σ R^μ V_μ with seeded random Hermitian terms; uses seed, dim, params"
            }
            ModelName::DiagonalQubit => "diag((1 + R)/2, (1 − R)/2); param R ∈ (−1, 1)",
        }
    }
}

impl FromStr for ModelName {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        ModelName::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| CliError::UnknownModel(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    pub name: ModelName,
    pub config: ModelConfig,
    pub dim: usize,
    pub params: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Threads {
    Auto,
    Fixed(usize),
}

impl FromStr for Threads {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "auto" {
            return Ok(Threads::Auto);
        }
        match s.parse::<usize>() {
            Ok(0) => Ok(Threads::Auto),
            Ok(n) => Ok(Threads::Fixed(n)),
            Err(_) => Err(format!("invalid thread count `{s}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifySpec {
    pub suite: String,
    pub seed: u64,
    pub draws: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub task: Task,
    pub model: Option<ModelSpec>,
    pub region: Option<Region>,
    /// Second point of a distance task.
    pub to: Option<Vec<f64>>,
    pub fd: StepPolicy,
    pub output: Option<String>,
    pub format: Format,
    pub threads: Threads,
    pub verify: VerifySpec,
}

/// Where a setting came from, for error messages.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Origin {
    File { line: usize, column: usize },
    Flag,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Setting {
    pub value: String,
    pub origin: Origin,
}

/// Raw settings keyed by `section.key`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    map: BTreeMap<String, Setting>,
}

impl Settings {
    pub fn get(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(|s| s.value.as_str())
    }

    /// Sets a value from a command-line flag, replacing any file value.
    pub fn set_flag(&mut self, key: &str, value: impl Into<String>) {
        debug_assert!(KNOWN_KEYS.contains(&key), "unknown key {key}");
        self.map.insert(
            key.to_string(),
            Setting {
                value: value.into(),
                origin: Origin::Flag,
            },
        );
    }

    fn invalid(&self, key: &str, msg: impl fmt::Display) -> CliError {
        match self.map.get(key).map(|s| &s.origin) {
            Some(Origin::File { line, column }) => CliError::Parse {
                line: *line,
                column: *column,
                message: format!("{key}: {msg}"),
            },
            _ => CliError::Invalid(format!("{key}: {msg}")),
        }
    }

    fn parsed<T: FromStr>(&self, key: &str, default: T) -> Result<T, CliError>
    where
        T::Err: fmt::Display,
    {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v.parse().map_err(|e| self.invalid(key, e)),
        }
    }
}

/// Parses the text of a config file into raw settings.
pub fn parse_settings(text: &str) -> Result<Settings, CliError> {
    let mut settings = Settings::default();
    let mut section = "run".to_string();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let indent = content.len() - content.trim_start().len();
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('[') {
            let name = rest.strip_suffix(']').ok_or(CliError::Parse {
                line: line_no,
                column: indent + 1,
                message: "unterminated section header".into(),
            })?;
            let name = name.trim();
            if !KNOWN_KEYS.iter().any(|k| k.split('.').next() == Some(name)) {
                return Err(CliError::Parse {
                    line: line_no,
                    column: indent + 2,
                    message: format!("unknown section `{name}`"),
                });
            }
            section = name.to_string();
            continue;
        }
        let Some(eq) = trimmed.find('=') else {
            return Err(CliError::Parse {
                line: line_no,
                column: indent + 1,
                message: "expected `key = value`".into(),
            });
        };
        let key = trimmed[..eq].trim();
        let value = trimmed[eq + 1..].trim();
        let full = format!("{section}.{key}");
        if !KNOWN_KEYS.contains(&full.as_str()) {
            return Err(CliError::Parse {
                line: line_no,
                column: indent + 1,
                message: format!("unknown key `{key}` in section [{section}]"),
            });
        }
        let value_col =
            indent + eq + 2 + (trimmed[eq + 1..].len() - trimmed[eq + 1..].trim_start().len());
        settings.map.insert(
            full,
            Setting {
                value: value.to_string(),
                origin: Origin::File {
                    line: line_no,
                    column: value_col,
                },
            },
        );
    }
    Ok(settings)
}

/// Parses a config file into a validated run configuration.
pub fn parse_config(text: &str) -> Result<RunConfig, CliError> {
    RunConfig::from_settings(&parse_settings(text)?)
}

impl RunConfig {
    pub fn from_settings(s: &Settings) -> Result<Self, CliError> {
        let task: Option<Task> = match s.get("run.task") {
            None => None,
            Some(v) => Some(v.parse().map_err(|e| s.invalid("run.task", e))?),
        };

        let model = match s.get("model.name") {
            None => None,
            Some(name) => Some(model_spec(s, name.parse()?)?),
        };
        let task = match task {
            Some(t) => t,
            None if model.is_none() => return Err(CliError::MissingModel),
            None => return Err(CliError::Invalid("no task given".into())),
        };
        if task.needs_model() && model.is_none() {
            return Err(CliError::MissingModel);
        }

        let region = match s.get("run.region") {
            None => None,
            Some(text) => {
                let kind = RegionKind::of(text).map_err(|e| s.invalid("run.region", e))?;
                if task.region_kind() != Some(kind) {
                    return Err(CliError::IncompatibleTaskRegion {
                        task: task.name().into(),
                        region: kind.name().into(),
                    });
                }
                Some(Region::parse(text).map_err(|e| s.invalid("run.region", e))?)
            }
        };
        if let (Some(kind), None) = (task.region_kind(), &region) {
            return Err(CliError::Invalid(format!(
                "task {task} needs a {} region",
                kind.name()
            )));
        }

        let to = match s.get("run.to") {
            None => None,
            Some(text) => {
                Some(crate::region::parse_point(text).map_err(|e| s.invalid("run.to", e))?)
            }
        };
        if task == Task::Distance && to.is_none() {
            return Err(CliError::Invalid(
                "task distance needs a second point (--to)".into(),
            ));
        }
        if let (Some(model), Some(region)) = (&model, &region) {
            let k = model_params(model);
            if region.n_params() != k {
                return Err(CliError::Invalid(format!(
                    "model {} takes {k} parameters but the region has {}",
                    model.name.name(),
                    region.n_params()
                )));
            }
        }

        let step: f64 = s.parsed("fd.step", DEFAULT_STEP)?;
        let scheme: Scheme = s.parsed("fd.scheme", Scheme::Central2)?;
        let fd = StepPolicy::new(step, scheme).map_err(|e| s.invalid("fd.step", e))?;

        let output = s.get("output.path").map(str::to_string);
        let format = match s.get("output.format") {
            Some(_) => s.parsed("output.format", Format::Json)?,
            None => match output.as_deref() {
                Some(p) if p.ends_with(".csv") => Format::Csv,
                Some(p) if p.ends_with(".json") => Format::Json,
                _ => task.default_format(),
            },
        };

        let threads = match s.get("run.threads") {
            Some(_) => s.parsed("run.threads", Threads::Auto)?,
            None => match std::env::var("QGT_THREADS") {
                Ok(v) => v
                    .parse()
                    .map_err(|e| CliError::Invalid(format!("QGT_THREADS: {e}")))?,
                Err(_) => Threads::Auto,
            },
        };

        let verify = VerifySpec {
            suite: s.get("verify.suite").unwrap_or("inequalities").to_string(),
            seed: s.parsed("model.seed", 0u64)?,
            draws: s.parsed("verify.draws", 500usize)?,
        };
        if task == Task::Verify && verify.suite != "inequalities" {
            return Err(s.invalid(
                "verify.suite",
                format!("unknown suite `{}` (available: inequalities)", verify.suite),
            ));
        }

        Ok(RunConfig {
            task,
            model,
            region,
            to,
            fd,
            output,
            format,
            threads,
            verify,
        })
    }
}

fn model_spec(s: &Settings, name: ModelName) -> Result<ModelSpec, CliError> {
    let defaults = ModelConfig::default();
    let truncation = match s.get("model.truncation") {
        None | Some("error") => TruncationPolicy::Error,
        Some("warn") => TruncationPolicy::Warn,
        Some(other) => {
            return Err(s.invalid(
                "model.truncation",
                format!("expected error or warn, got `{other}`"),
            ))
        }
    };
    let config = ModelConfig {
        beta: s.parsed("model.beta", defaults.beta)?,
        omega: s.parsed("model.omega", defaults.omega)?,
        n_cut: s.parsed("model.ncut", defaults.n_cut)?,
        seed: s.parsed("model.seed", defaults.seed)?,
        truncation,
    };
    config
        .validate()
        .map_err(|e| CliError::Invalid(format!("model {}: {e}", name.name())))?;
    let spec = ModelSpec {
        name,
        config,
        dim: s.parsed("model.dim", 3usize)?,
        params: s.parsed("model.params", 2usize)?,
    };
    if spec.dim < 2 || spec.params < 1 {
        return Err(CliError::Invalid(
            "model random needs dim ≥ 2 and params ≥ 1".into(),
        ));
    }
    Ok(spec)
}

pub fn model_params(spec: &ModelSpec) -> usize {
    match spec.name {
        ModelName::Random => spec.params,
        ModelName::DiagonalQubit => 1,
        _ => 2,
    }
}
