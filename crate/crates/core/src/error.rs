// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{phase}: no quiescence after {supersteps} supersteps (cap {cap})")]
    Runaway {
        phase: String,
        supersteps: u64,
        cap: u64,
    },

    #[error("{phase}: {payloads} vertices still broadcast after termination")]
    NotQuiescent { phase: String, payloads: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
