// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed circuit: {0}")]
    MalformedCircuit(String),

    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unsupported gate `{name}` on line {line}: {reason}")]
    UnsupportedGate { name: String, line: usize, reason: String },

    #[error("semantic error on line {line}: {message}")]
    Semantic { line: usize, message: String },

    #[error("malformed architecture graph: {0}")]
    MalformedGraph(String),

    #[error("architecture graph is disconnected; components: {components:?}")]
    Disconnected { components: Vec<Vec<usize>> },

    #[error("unknown architecture `{name}`; valid names: {valid}")]
    UnknownArchitecture { name: String, valid: String },

    #[error("illegal swap ({0}, {1}): not an edge of the architecture graph")]
    IllegalSwap(usize, usize),

    #[error("cannot place {logical} logical qubits on {physical} physical qubits")]
    Capacity { logical: usize, physical: usize },

    #[error("invalid mapping: {0}")]
    InvalidMapping(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("benchmark generation failed: {0}")]
    Generation(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
