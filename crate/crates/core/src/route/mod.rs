// SPDX-License-Identifier: Apache-2.0

//! SWAP-based routing onto a coupling graph.

pub mod heuristic;
pub mod sabre;
pub mod sqgm;
pub mod state;

use crate::arch::ArchGraph;
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::mapping::Mapping;
use crate::scalar::Scalar;

pub use heuristic::{score_swap, swap_candidates, v_score, HeuristicConfig, HeuristicMode, TieBreak};
pub use sabre::SabreRouter;
pub use sqgm::{h_sqgm, place_swap, ProgressTracker, QubitBuffer, SqgmRouter, SqgmScoring};
pub use state::RouterState;

/// Output of a routing run. The circuit is over physical vertices and keeps
/// inserted SWAPs as `Swap` gates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoutedCircuit {
    pub circuit: Circuit,
    pub initial: Mapping,
    pub final_mapping: Mapping,
    pub swaps: usize,
    /// Main-loop iterations taken.
    pub steps: usize,
}

impl RoutedCircuit {
    pub fn depth(&self) -> usize {
        self.circuit.depth()
    }
}

pub trait Router: Send + Sync {
    /// Routes `circuit` (barriers are dropped first) from `initial`, breaking
    /// ties with a generator seeded by `seed`.
    fn route_with_seed(
        &self,
        circuit: &Circuit,
        graph: &ArchGraph,
        initial: &Mapping,
        seed: u64,
    ) -> Result<RoutedCircuit>;

    /// The configured seed.
    fn seed(&self) -> u64;

    fn route(&self, circuit: &Circuit, graph: &ArchGraph, initial: &Mapping) -> Result<RoutedCircuit> {
        self.route_with_seed(circuit, graph, initial, self.seed())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Strategy {
    Sabre,
    Sqgm,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::Sabre => "sabre",
            Strategy::Sqgm => "sqgm",
        }
    }

    pub fn router<T: Scalar>(self, config: HeuristicConfig<T>) -> Box<dyn Router> {
        match self {
            Strategy::Sabre => Box::new(SabreRouter::new(config)),
            Strategy::Sqgm => Box::new(SqgmRouter::new(config)),
        }
    }
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sabre" => Ok(Strategy::Sabre),
            "sqgm" => Ok(Strategy::Sqgm),
            other => Err(Error::Config(format!("unknown strategy `{other}`"))),
        }
    }
}
