use serde_json::json;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] quospec::Error),

    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{failed} of {total} criteria failed")]
    Verification { failed: usize, total: usize },
}

impl CliError {
    /// 2 for configuration and input errors, 3 for numerical failures,
    /// 4 for failed verification.
    pub fn exit_code(&self) -> i32 {
        use quospec::Error as E;
        match self {
            CliError::Config(_) => 2,
            CliError::Core(E::NoConvergence { .. } | E::NonFinite | E::Overflow(_)) => 3,
            CliError::Core(_) => 2,
            CliError::Io { .. } => 3,
            CliError::Verification { .. } => 4,
        }
    }

    pub fn kind(&self) -> String {
        match self {
            CliError::Config(_) => "ConfigError".into(),
            CliError::Core(e) => format!("{e:?}")
                .split(['(', ' ', '{'])
                .next()
                .unwrap_or("Error")
                .to_string(),
            CliError::Io { .. } => "IoError".into(),
            CliError::Verification { .. } => "VerificationFailed".into(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "error": {
                "kind": self.kind(),
                "message": self.to_string(),
                "exit_code": self.exit_code(),
            }
        })
    }
}
