//! JSON instance formats, verification sweeps and report emission on top of
//! [`mixedq_core`]. The `mixedq` binary is a thin wrapper around [`run`].

pub mod experiments;
pub mod formats;
pub mod report;

use std::path::PathBuf;

pub use experiments::{run, Command, ExperimentConfig};
pub use report::{emit_report, write_report, Format, Relation, Row, RunReport, SearchRecord, Summary};

/// Everything that can stop a run before a report is produced.
#[derive(Debug, thiserror::Error)]
pub enum LabError {
    /// Malformed JSON, or JSON that does not match the schema.
    #[error("{path}: line {line}, column {column}: {message}")]
    Parse { path: String, line: usize, column: usize, message: String },

    /// Well-formed JSON whose content is rejected by the library.
    #[error("{path}: {message}")]
    Input { path: String, message: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}")]
    Usage(String),

    /// A computation failed after its inputs were accepted.
    #[error(transparent)]
    Numerical(#[from] mixedq_core::Error),
}

impl LabError {
    /// Process exit status: 2 for anything wrong with the inputs, 3 for
    /// failures inside a computation.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Numerical(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, LabError>;
