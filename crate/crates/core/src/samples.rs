// SPDX-License-Identifier: Apache-2.0

//! The small four-qubit circuit on the five-qubit Ourense device that makes
//! the depth cost of eager single-qubit execution visible, with its chain
//! length as a parameter.

use crate::arch::ArchGraph;
use crate::circuit::{Circuit, Gate};
use crate::mapping::Mapping;

/// CX(q0,q1), W(q0), CX(q1,q3), CX(q0,q3), CX(q1,q2), then `k` gates V1..Vk on
/// q0 and `k` gates U1..Uk on q1. Depth `k + 3`.
pub fn running_example(k: usize) -> Circuit {
    let mut gates = vec![
        Gate::cx(0, 1),
        Gate::one("W", 0),
        Gate::cx(1, 3),
        Gate::cx(0, 3),
        Gate::cx(1, 2),
    ];
    gates.extend((1..=k).map(|i| Gate::one(format!("V{i}"), 0)));
    gates.extend((1..=k).map(|i| Gate::one(format!("U{i}"), 1)));
    Circuit::with_gates(4, gates).expect("well-formed")
}

pub fn ourense() -> ArchGraph {
    ArchGraph::builtin("ourense").expect("builtin")
}

/// q0→v1, q1→v0, q2→v2, q3→v3.
pub fn running_mapping() -> Mapping {
    Mapping::from_vec(vec![1, 0, 2, 3], 5).expect("injective")
}
