//! Files, corpora and batch evaluation on top of `pddleq-core`.
//!
//! * [`dataset`] generates text-to-PDDL corpora from a TOML manifest and
//!   reads and writes them as JSON lines.
//! * [`eval`] scores model outputs against a corpus on the
//!   parseable / solvable / correct ladder and renders reports.
//! * [`config`] holds run settings shared by the command line.

pub mod config;
pub mod dataset;
pub mod domains;
pub mod eval;

use std::path::PathBuf;

pub use pddleq_core as core;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}:{line}: {message}", path.display())]
    Malformed { path: PathBuf, line: usize, message: String },
    #[error("invalid manifest: {0}")]
    Manifest(String),
    #[error("unknown domain `{0}`")]
    UnknownDomain(String),
    #[error("prediction `{0}` has no dataset record")]
    MissingExample(String),
    #[error("duplicate id `{id}` in {}", path.display())]
    DuplicateId { path: PathBuf, id: String },
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    /// Process exit code: 3 for broken invariants, 2 for bad input.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Invariant(_) => 3,
            _ => 2,
        }
    }

    /// Adapter for `map_err` on file operations.
    pub fn io_error(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> Error {
        Error::io(path)
    }

    pub(crate) fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> Error {
        let path = path.into();
        move |source| Error::Io { path, source }
    }
}

/// Runs `f` on a pool of `workers` threads (all cores when `None`).
pub fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.unwrap_or(0))
        .build()
        .expect("thread pool");
    pool.install(f)
}
