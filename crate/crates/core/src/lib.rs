// SPDX-License-Identifier: Apache-2.0

//! Qubit mapping for connectivity-constrained devices.
//!
//! Circuits are routed onto a coupling graph by inserting SWAPs. Two routers
//! are provided: a SABRE-style greedy router ([`SabreRouter`]) and a
//! depth-aware variant ([`SqgmRouter`]) that defers single-qubit gates and
//! prefers SWAPs on qubits that have fallen behind. Around them sit an
//! OpenQASM 2.0 reader/writer, a forward-backward layout search, a
//! commutation-based cancellation pass, equivalence checks and a benchmark
//! harness.

pub mod arch;
pub mod bench;
pub mod circuit;
pub mod error;
pub mod layout;
pub mod mapping;
pub mod optimize;
pub mod qasm;
pub mod route;
pub mod samples;
pub mod scalar;
pub mod verify;

pub use arch::ArchGraph;
pub use circuit::{Circuit, Gate, GateKind, LayerPartition};
pub use error::{Error, Result};
pub use layout::sabre_layout;
pub use mapping::{random_mapping, Mapping};
pub use optimize::{cancel_commutative, pipeline, PipelineResult};
pub use qasm::{emit_qasm, parse_qasm};
pub use route::{HeuristicMode, RoutedCircuit, Router, Strategy, TieBreak};
pub use scalar::Scalar;
pub use verify::EquivalenceReport;

/// Default score type.
pub type Score = f64;
/// Exact score type; ties are detected without tolerance.
pub type ExactScore = num_rational::Rational64;

pub type HeuristicConfig = route::HeuristicConfig<Score>;
pub type ExactHeuristicConfig = route::HeuristicConfig<ExactScore>;
pub type SabreRouter = route::SabreRouter<Score>;
pub type SqgmRouter = route::SqgmRouter<Score>;
pub type ExactSabreRouter = route::SabreRouter<ExactScore>;
pub type ExactSqgmRouter = route::SqgmRouter<ExactScore>;
