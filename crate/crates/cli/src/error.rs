use std::path::{Path, PathBuf};
use std::process::ExitCode;

use thiserror::Error;
use vhk_core::expression::SpecError;
use vhk_core::io::DocumentError;
use vhk_core::oracle::OracleError;
use vhk_core::selection::SelectionError;
use vhk_core::semigroup::{SemigroupError, ValueSpace};

/// Every failure the driver reports, one variant per exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Exit 1: a check that should hold did not.
    #[error("verification failed: {0}")]
    Verification(String),
    /// Exit 2.
    #[error("invalid input [{code}]: {message}")]
    Input { code: &'static str, message: String },
    /// Exit 3.
    #[error("unsupported value space {space} for {operation}")]
    Unsupported { space: ValueSpace, operation: &'static str },
    /// Exit 4.
    #[error("boundedness check failed: {0}")]
    Unbounded(String),
    /// Exit 5.
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Verification(_) => 1,
            CliError::Input { .. } => 2,
            CliError::Unsupported { .. } => 3,
            CliError::Unbounded(_) => 4,
            CliError::Io { .. } => 5,
        })
    }

    pub fn input(code: &'static str, message: impl Into<String>) -> Self {
        CliError::Input {
            code,
            message: message.into(),
        }
    }

    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

impl From<DocumentError> for CliError {
    fn from(e: DocumentError) -> Self {
        CliError::input(e.code(), e.to_string())
    }
}

impl From<SpecError> for CliError {
    fn from(e: SpecError) -> Self {
        match e {
            SpecError::Document(d) => d.into(),
            SpecError::UnknownKind(_) => CliError::input("unknown_kind", e.to_string()),
            SpecError::Expression(_) => CliError::input("expression", e.to_string()),
            SpecError::Unsupported(space) => CliError::Unsupported {
                space,
                operation: "sequence specifications",
            },
        }
    }
}

impl From<SelectionError> for CliError {
    fn from(e: SelectionError) -> Self {
        if e.is_unbounded() {
            CliError::Unbounded(e.to_string())
        } else if let SelectionError::Node {
            source: SemigroupError::NoCompactness(space),
            ..
        }
        | SelectionError::Semigroup(SemigroupError::NoCompactness(space)) = e
        {
            CliError::Unsupported {
                space,
                operation: "selection",
            }
        } else {
            CliError::input("selection", e.to_string())
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::BoundExceeded { what: "n_max", value, cap } => CliError::input(
                "cap_exceeded",
                format!("dimension cap exceeded: n_max is {value}, cap is {cap}"),
            ),
            OracleError::BoundExceeded { .. } | OracleError::CapExceeded { .. } => {
                CliError::input("cap_exceeded", e.to_string())
            }
            other => CliError::Verification(other.to_string()),
        }
    }
}
