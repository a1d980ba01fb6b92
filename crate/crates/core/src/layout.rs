// SPDX-License-Identifier: Apache-2.0

//! Initial-mapping search by alternating forward and reverse routing passes.
//!
//! Each pass starts from the final mapping of the previous one, so qubits that
//! interact early in the circuit drift towards each other.

use crate::arch::ArchGraph;
use crate::circuit::Circuit;
use crate::error::Result;
use crate::mapping::{random_mapping, Mapping};
use crate::route::Router;

pub const DEFAULT_LAYOUT_ITERATIONS: usize = 3;

/// Independent child seed number `index` of `base` (SplitMix64 finaliser).
pub fn derive_seed(base: u64, index: u64) -> u64 {
    let mut z = base ^ index.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Random start from `seed`, then `iterations` forward-backward rounds.
pub fn sabre_layout(
    circuit: &Circuit,
    graph: &ArchGraph,
    router: &dyn Router,
    iterations: usize,
    seed: u64,
) -> Result<Mapping> {
    let start = random_mapping(circuit.num_qubits(), graph, seed)?;
    layout_from(circuit, graph, router, iterations, start, seed)
}

/// Forward-backward rounds from a given start mapping.
pub fn layout_from(
    circuit: &Circuit,
    graph: &ArchGraph,
    router: &dyn Router,
    iterations: usize,
    start: Mapping,
    seed: u64,
) -> Result<Mapping> {
    let forward = circuit.strip_barriers();
    let backward = forward.reverse();
    let mut mapping = start;
    for i in 0..iterations as u64 {
        mapping = router
            .route_with_seed(&forward, graph, &mapping, derive_seed(seed, 2 * i))?
            .final_mapping;
        mapping = router
            .route_with_seed(&backward, graph, &mapping, derive_seed(seed, 2 * i + 1))?
            .final_mapping;
    }
    Ok(mapping)
}
