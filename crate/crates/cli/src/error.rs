use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },

    #[error("invalid configuration:\n  {}", .0.join("\n  "))]
    Validation(Vec<String>),

    /// The model rejected an input the configuration checks let through.
    #[error("{context}{source}")]
    Input { context: String, source: macroqed_core::Error },

    #[error("{context}{source}")]
    Numeric { context: String, source: macroqed_core::Error },
}

impl CliError {
    /// 1 for IO, 2 for invalid input, 3 for numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => 1,
            CliError::Validation(_) | CliError::Input { .. } => 2,
            CliError::Numeric { .. } => 3,
        }
    }
}

impl CliError {
    /// Prefixes a model error with the sweep point it came from.
    pub fn at(self, variable: &str, value: f64) -> Self {
        match self {
            CliError::Input { context, source } => {
                CliError::Input { context: format!("at {variable} = {value:e}: {context}"), source }
            }
            CliError::Numeric { context, source } => {
                CliError::Numeric { context: format!("at {variable} = {value:e}: {context}"), source }
            }
            other => other,
        }
    }
}

impl From<macroqed_core::Error> for CliError {
    fn from(source: macroqed_core::Error) -> Self {
        let context = String::new();
        match source {
            macroqed_core::Error::NonConvergence { .. } | macroqed_core::Error::Truncation(_) => {
                CliError::Numeric { context, source }
            }
            _ => CliError::Input { context, source },
        }
    }
}
