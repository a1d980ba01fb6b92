// SPDX-License-Identifier: Apache-2.0

//! SWAP scoring: total distance of a gate set, and the basic, lookahead and
//! decay-weighted scores of a candidate SWAP.

use std::collections::BTreeSet;

use crate::arch::ArchGraph;
use crate::error::{Error, Result};
use crate::mapping::Mapping;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HeuristicMode {
    Basic,
    Lookahead,
    #[default]
    Decay,
}

impl std::str::FromStr for HeuristicMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "basic" => Ok(HeuristicMode::Basic),
            "lookahead" => Ok(HeuristicMode::Lookahead),
            "decay" => Ok(HeuristicMode::Decay),
            other => Err(Error::Config(format!("unknown heuristic `{other}`"))),
        }
    }
}

/// How to pick among SWAPs whose scores tie.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum TieBreak {
    /// Uniformly from the run's seeded generator.
    #[default]
    Random,
    /// The first listed edge that is among the tied candidates; random if none is.
    Prefer(Vec<(usize, usize)>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeuristicConfig<T> {
    pub mode: HeuristicMode,
    /// Lookahead weight, in `[0, 1]`.
    pub w: T,
    /// Decay increment per SWAP.
    pub delta: T,
    pub extended_set_size: usize,
    /// Consecutive SWAPs after which decay factors reset. Zero disables the reset.
    pub decay_reset_interval: usize,
    pub seed: u64,
    pub tie_break: TieBreak,
}

impl<T: Scalar> Default for HeuristicConfig<T> {
    fn default() -> Self {
        HeuristicConfig {
            mode: HeuristicMode::Decay,
            w: T::ratio(1, 2),
            delta: T::ratio(1, 1000),
            extended_set_size: 20,
            decay_reset_interval: 5,
            seed: 0,
            tie_break: TieBreak::Random,
        }
    }
}

impl<T: Scalar> HeuristicConfig<T> {
    pub fn with_mode(mut self, mode: HeuristicMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn prefer(mut self, edges: &[(usize, usize)]) -> Self {
        self.tie_break = TieBreak::Prefer(edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect());
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.w < T::zero() || self.w > T::one() {
            return Err(Error::Config(format!("lookahead weight {:?} outside [0, 1]", self.w)));
        }
        if self.delta < T::zero() {
            return Err(Error::Config(format!("negative decay rate {:?}", self.delta)));
        }
        Ok(())
    }
}

/// Sum of distances between the endpoints of each logical pair under `phys`.
pub(crate) fn v_score_with(pairs: &[(usize, usize)], graph: &ArchGraph, phys: impl Fn(usize) -> usize) -> u64 {
    pairs
        .iter()
        .map(|&(p, q)| u64::from(graph.dist(phys(p), phys(q))))
        .sum()
}

/// Total distance of a set of 2-qubit gates (as logical pairs) under `mapping`.
pub fn v_score(mapping: &Mapping, pairs: &[(usize, usize)], graph: &ArchGraph) -> u64 {
    v_score_with(pairs, graph, |q| mapping.phys(q))
}

/// Location of logical `q` once the occupants of `a` and `b` are exchanged.
#[inline]
pub(crate) fn phys_after_swap(mapping: &Mapping, (a, b): (usize, usize), q: usize) -> usize {
    let v = mapping.phys(q);
    if v == a {
        b
    } else if v == b {
        a
    } else {
        v
    }
}

/// Score of swapping across `edge`, evaluated on the mapping after the swap.
///
/// `front` and `extended` are logical qubit pairs; `decay` is indexed by vertex.
pub fn score_swap<T: Scalar>(
    front: &[(usize, usize)],
    extended: &[(usize, usize)],
    decay: &[T],
    mapping: &Mapping,
    edge: (usize, usize),
    config: &HeuristicConfig<T>,
    graph: &ArchGraph,
) -> T {
    let after = |q| phys_after_swap(mapping, edge, q);
    let front_total = T::from_u64(v_score_with(front, graph, after)).expect("distance sum");
    if config.mode == HeuristicMode::Basic {
        return front_total;
    }
    let mut score = if front.is_empty() {
        T::zero()
    } else {
        front_total / T::from_count(front.len())
    };
    if !extended.is_empty() {
        let ext_total = T::from_u64(v_score_with(extended, graph, after)).expect("distance sum");
        score = score + config.w * ext_total / T::from_count(extended.len());
    }
    if config.mode == HeuristicMode::Decay {
        let factor = if decay[edge.0] > decay[edge.1] {
            decay[edge.0]
        } else {
            decay[edge.1]
        };
        score = factor * score;
    }
    score
}

/// Every coupling edge incident to a vertex holding an operand of a front gate,
/// as `(a, b)` with `a < b`, sorted.
pub fn swap_candidates(front: &[(usize, usize)], mapping: &Mapping, graph: &ArchGraph) -> Vec<(usize, usize)> {
    let mut out = BTreeSet::new();
    for &(p, q) in front {
        for v in [mapping.phys(p), mapping.phys(q)] {
            for &nb in graph.neighbors(v) {
                out.insert((v.min(nb), v.max(nb)));
            }
        }
    }
    out.into_iter().collect()
}
