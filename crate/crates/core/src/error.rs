// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: expected 2 tokens, found {found}")]
    Parse { line: usize, found: usize },

    #[error("no edges")]
    NoEdges,

    #[error("node {0} is outside the graph or filter")]
    NodeOutOfRange(usize),

    #[error("set not connected")]
    NotConnected,

    #[error("empty node set")]
    EmptySet,

    #[error("insufficient for fit: {0}")]
    InsufficientForFit(String),

    #[error("invalid fit input: {0}")]
    InvalidFitInput(String),

    #[error("invalid ensemble spec: {0}")]
    InvalidSpec(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Input {
        path: PathBuf,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for failures caused by reading or parsing user input.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. } | Error::NoEdges | Error::Io { .. } | Error::Input { .. }
        )
    }
}
