use qgt_core::QgtError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown model `{0}` (run `qgt models` for the list)")]
    UnknownModel(String),
    #[error("task {task} cannot run on a {region} region")]
    IncompatibleTaskRegion { task: String, region: String },
    #[error("no model given (use --model or `name` in [model])")]
    MissingModel,
    #[error("{0}")]
    Invalid(String),
    /// A core computation failed; `at` names the parameter point or region.
    #[error("{op} at {at}: {source}")]
    Compute {
        op: String,
        at: String,
        #[source]
        source: QgtError,
    },
    #[error("{0}")]
    Io(String),
    #[error("verification failed: {0}")]
    VerifyFailed(String),
}

impl CliError {
    pub fn compute(op: &str, at: impl Into<String>, source: QgtError) -> Self {
        CliError::Compute {
            op: op.to_string(),
            at: at.into(),
            source,
        }
    }

    /// 2 for invalid input, 3 for numerical failures, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. }
            | CliError::UnknownModel(_)
            | CliError::IncompatibleTaskRegion { .. }
            | CliError::MissingModel
            | CliError::Invalid(_) => 2,
            CliError::Compute { source, .. } if source.is_numerical() => 3,
            CliError::Compute { .. } => 2,
            CliError::Io(_) | CliError::VerifyFailed(_) => 1,
        }
    }
}
