use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum ScenarioError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("schema error at {pointer}: {message}")]
    Schema { pointer: String, message: String },
    #[error("unknown operation {op:?} at {pointer}")]
    UnknownOperation { pointer: String, op: String },
    #[error("unknown reference {name:?} at {pointer}")]
    UnknownReference { pointer: String, name: String },
    #[error("unknown demo {0:?}")]
    UnknownDemo(String),
    #[error("invalid system specification: {0}")]
    InvalidSpec(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Numerical(#[from] qstat_core::Error),
}

impl ScenarioError {
    pub(crate) fn schema(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        Self::Schema {
            pointer: pointer.into(),
            message: message.into(),
        }
    }

    /// Process exit code: 3 for numerical failures, 2 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Numerical(_) | Self::InvalidSpec(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T, E = ScenarioError> = std::result::Result<T, E>;
