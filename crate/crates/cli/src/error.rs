use serde_json::{json, Value};
use thiserror::Error;

use crmorse_core::Error as CoreError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_MATH_DOMAIN: i32 = 3;
pub const EXIT_DATA_CONSISTENCY: i32 = 4;

/// Failures surfaced by the command-line driver.
#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed input document; `field` is a JSON-path-like location.
    #[error("{message}")]
    Parse {
        message: String,
        field: Option<String>,
        line: Option<usize>,
        column: Option<usize>,
    },

    #[error("{path}: {message}")]
    Io { path: String, message: String },

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Math(#[from] CoreError),
}

impl CliError {
    pub fn field(field: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Parse {
            message: message.into(),
            field: Some(field.into()),
            line: None,
            column: None,
        }
    }

    pub fn io(path: &std::path::Path, err: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            message: err.to_string(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } | CliError::Io { .. } | CliError::Usage(_) => EXIT_USAGE,
            CliError::Math(e) => match e {
                CoreError::MixedSignature { .. }
                | CoreError::InconsistentInput(_)
                | CoreError::DimensionMismatch(_) => EXIT_DATA_CONSISTENCY,
                CoreError::InvalidArgument(_)
                | CoreError::LengthMismatch { .. }
                | CoreError::ZeroEntry { .. }
                | CoreError::SignPatternViolation { .. }
                | CoreError::QOutOfRange { .. } => EXIT_USAGE,
                _ => EXIT_MATH_DOMAIN,
            },
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Parse { .. } => "ParseError",
            CliError::Io { .. } => "IoError",
            CliError::Usage(_) => "UsageError",
            CliError::Math(e) => e.kind(),
        }
    }

    /// Machine-readable error object written to stderr.
    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "error": self.kind(),
            "message": self.to_string(),
            "exit_code": self.exit_code(),
        });
        if let CliError::Parse {
            field,
            line,
            column,
            ..
        } = self
        {
            if let Some(f) = field {
                v["field"] = json!(f);
            }
            if let Some(l) = line {
                v["line"] = json!(l);
            }
            if let Some(c) = column {
                v["column"] = json!(c);
            }
        }
        v
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Parse {
            message: e.to_string(),
            field: None,
            line: Some(e.line()),
            column: Some(e.column()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
