// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("site id {site} out of range for lattice with {n} sites")]
    SiteOutOfRange { site: usize, n: usize },

    #[error("coordinate vector has length {got}, lattice dimension is {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("resource guard: {0}")]
    Resource(String),

    #[error("divergent sum: {0}")]
    Divergent(String),

    #[error("empty result: {0}")]
    Empty(String),

    #[error("root finding failed: {0}")]
    NoRoot(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
