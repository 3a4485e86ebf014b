//! Reading and writing chains: α-carbon traces from PDB files, plain csv and
//! json point lists, and a cached client for the public PDB archive.

mod cache;
#[cfg(feature = "fetch")]
mod fetch;
mod formats;
mod pdb;

use thiserror::Error;

use crate::geometry::GeometryError;

pub use cache::{cache_path, cached_pdb, default_cache_dir, validate_pdb_id, CACHE_ENV};
#[cfg(feature = "fetch")]
pub use fetch::{fetch_pdb, PdbFetcher, DEFAULT_BASE_URL};
pub use formats::{load_chain, parse_chain, save_chain, write_chain, ChainFormat};
pub use pdb::{parse_pdb, parse_pdb_with, split_selector, BackboneRecord, PdbOptions};

#[derive(Debug, Error)]
pub enum PdbError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("chain {0:?} not found")]
    ChainNotFound(char),
    #[error("no α-carbon atoms selected for chain {0:?}")]
    EmptySelection(char),
    #[error("{0}")]
    Format(String),
    #[error("invalid PDB id {0:?}")]
    InvalidId(String),
    #[error("PDB entry {0} not found")]
    NotFound(String),
    #[error("network error: {0}")]
    Network(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

impl PdbError {
    pub(crate) fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        PdbError::Io { path: path.display().to_string(), source }
    }
}
