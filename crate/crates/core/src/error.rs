// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

use std::io;

use thiserror::Error;

use crate::orbit::OrbitKey;

/// Errors produced by the counting, verification and embedding pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: expected two node labels, found {found} token(s)")]
    Parse { line: usize, found: usize },

    #[error("graph has no edges after removing self-loops and duplicates")]
    EmptyGraph,

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("64-bit count overflow in {context}")]
    Overflow { context: &'static str },

    #[error("inconsistent counts in {equation} at pair ({row}, {col}): {detail}")]
    Inconsistent {
        equation: String,
        row: usize,
        col: usize,
        detail: String,
    },

    #[error("missing orbit adjacency matrix {0}")]
    MissingKey(OrbitKey),

    #[error("invalid orbit adjacency key `{0}`")]
    InvalidKey(String),

    #[error("resource limit: {0}")]
    ResourceLimit(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn inconsistent(
        equation: impl Into<String>,
        row: usize,
        col: usize,
        detail: impl Into<String>,
    ) -> Self {
        Error::Inconsistent {
            equation: equation.into(),
            row,
            col,
            detail: detail.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
