//! File formats, reports and the command-line driver around `mrbad-core`.

pub mod cli;
pub mod fixtures;
pub mod format;
pub mod report;
pub mod suite;

pub use format::{parse_instance, read_instance, Instance, InstanceFile};
pub use report::{Report, Status, Witness};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] mrbad_core::Error),
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("format: {0}")]
    Format(String),
    #[error("{what}: index {index} out of range (must be below {bound})")]
    IndexOutOfRange { what: String, index: usize, bound: usize },
    #[error("{0}: {1}")]
    Io(String, std::io::Error),
    #[error("the instance has no {0} block")]
    Missing(&'static str),
}
