// SPDX-License-Identifier: Apache-2.0

//! Commutative gate cancellation.
//!
//! Each cancellable gate is slid backwards past gates it commutes with; if it
//! meets an identical self-inverse gate the pair is removed. Sweeps repeat
//! until nothing changes.
//!
//! Commutation rules (everything else blocks, including unknown
//! single-qubit gates, SWAPs and barriers):
//! - two CX commute unless the control of one is the target of the other;
//! - CZ commutes with CZ, with Z-like gates, and with a CX whose target it
//!   does not touch;
//! - Z-like gates pass CX controls, X-like gates pass CX targets;
//! - two Z-like or two X-like gates on the same qubit commute, as do two
//!   identical gates.

use crate::arch::ArchGraph;
use crate::circuit::{Circuit, Gate, GateKind};
use crate::error::Result;
use crate::mapping::Mapping;
use crate::route::{HeuristicConfig, RoutedCircuit, Strategy};
use crate::scalar::Scalar;

pub const MAX_SWEEPS: usize = 100;

const Z_LIKE: [&str; 8] = ["z", "s", "sdg", "t", "tdg", "rz", "p", "u1"];
const X_LIKE: [&str; 4] = ["x", "sx", "sxdg", "rx"];
const SELF_INVERSE: [&str; 4] = ["x", "y", "z", "h"];

fn one_qubit_name(g: &Gate) -> Option<&str> {
    match &g.kind {
        GateKind::OneQubit { name, .. } => Some(name),
        _ => None,
    }
}

fn is_z_like(g: &Gate) -> bool {
    one_qubit_name(g).is_some_and(|n| Z_LIKE.contains(&n))
}

fn is_x_like(g: &Gate) -> bool {
    one_qubit_name(g).is_some_and(|n| X_LIKE.contains(&n))
}

/// Whether `a` and `b` (which share at least one qubit) commute under the rule set.
pub fn commutes(a: &Gate, b: &Gate) -> bool {
    use GateKind::*;
    if a.kind == b.kind && a.qubits == b.qubits {
        return true;
    }
    match (&a.kind, &b.kind) {
        (Barrier, _) | (_, Barrier) | (Swap, _) | (_, Swap) => false,
        (OneQubit { .. }, OneQubit { .. }) => (is_z_like(a) && is_z_like(b)) || (is_x_like(a) && is_x_like(b)),
        (OneQubit { .. }, Cx) => one_past_cx(a, b),
        (Cx, OneQubit { .. }) => one_past_cx(b, a),
        (OneQubit { .. }, Cz) | (Cz, OneQubit { .. }) => {
            if matches!(a.kind, Cz) {
                is_z_like(b)
            } else {
                is_z_like(a)
            }
        }
        (Cx, Cx) => a.qubits[0] != b.qubits[1] && a.qubits[1] != b.qubits[0],
        (Cz, Cz) => true,
        (Cx, Cz) => !b.qubits.contains(&a.qubits[1]),
        (Cz, Cx) => !a.qubits.contains(&b.qubits[1]),
    }
}

fn one_past_cx(one: &Gate, cx: &Gate) -> bool {
    let q = one.qubits[0];
    (q == cx.qubits[0] && is_z_like(one)) || (q == cx.qubits[1] && is_x_like(one))
}

/// Whether `a` followed by `b` is the identity.
pub fn cancels(a: &Gate, b: &Gate) -> bool {
    match (&a.kind, &b.kind) {
        (GateKind::Cx, GateKind::Cx) => a.qubits == b.qubits,
        (GateKind::Cz, GateKind::Cz) => {
            a.qubits == b.qubits || (a.qubits[0] == b.qubits[1] && a.qubits[1] == b.qubits[0])
        }
        (
            GateKind::OneQubit { name, params },
            GateKind::OneQubit {
                name: other,
                params: ps,
            },
        ) => {
            params.is_empty()
                && ps.is_empty()
                && name == other
                && a.qubits == b.qubits
                && SELF_INVERSE.contains(&name.as_str())
        }
        _ => false,
    }
}

fn shares_qubit(a: &Gate, b: &Gate) -> bool {
    a.qubits.iter().any(|q| b.qubits.contains(q))
}

/// One pass over the circuit. Returns whether anything was removed.
fn sweep(gates: &mut Vec<Gate>) -> bool {
    let mut alive = vec![true; gates.len()];
    let mut changed = false;
    for i in 0..gates.len() {
        if !alive[i] {
            continue;
        }
        let g = &gates[i];
        for j in (0..i).rev() {
            if !alive[j] || !shares_qubit(g, &gates[j]) {
                continue;
            }
            if cancels(&gates[j], g) {
                alive[i] = false;
                alive[j] = false;
                changed = true;
                break;
            }
            if !commutes(&gates[j], g) {
                break;
            }
        }
    }
    if changed {
        let mut k = 0;
        gates.retain(|_| {
            k += 1;
            alive[k - 1]
        });
    }
    changed
}

/// Cancellation to a fixpoint, also reporting the number of sweeps that
/// changed something and whether the fixpoint was reached within
/// [`MAX_SWEEPS`].
pub fn cancel_commutative_traced(circuit: &Circuit) -> (Circuit, usize, bool) {
    let mut gates = circuit.gates().to_vec();
    for sweeps in 0..MAX_SWEEPS {
        if !sweep(&mut gates) {
            let out = Circuit::from_parts(circuit.num_qubits(), gates).expect("subset of a valid circuit");
            return (out, sweeps, true);
        }
    }
    log::warn!("cancellation did not settle within {MAX_SWEEPS} sweeps");
    let out = Circuit::from_parts(circuit.num_qubits(), gates).expect("subset of a valid circuit");
    (out, MAX_SWEEPS, false)
}

pub fn cancel_commutative(circuit: &Circuit) -> Circuit {
    cancel_commutative_traced(circuit).0
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineResult {
    pub routed: RoutedCircuit,
    /// Routed output; SWAP-decomposed and cancelled when cancellation is on,
    /// otherwise the router's circuit as is.
    pub output: Circuit,
    pub depth_before: usize,
    pub depth_after: usize,
    pub gates_before: usize,
    pub gates_after: usize,
    pub cx_before: usize,
    pub cx_after: usize,
}

/// Routes with `strategy`, then optionally cancels.
pub fn pipeline<T: Scalar>(
    circuit: &Circuit,
    graph: &ArchGraph,
    initial: &Mapping,
    strategy: Strategy,
    cc: bool,
    config: HeuristicConfig<T>,
) -> Result<PipelineResult> {
    let routed = strategy.router(config).route(circuit, graph, initial)?;
    Ok(finish(routed, cc))
}

/// Post-processing half of [`pipeline`] for an already routed circuit.
pub fn finish(routed: RoutedCircuit, cc: bool) -> PipelineResult {
    let flat = routed.circuit.decompose_swaps();
    let output = if cc {
        cancel_commutative(&flat)
    } else {
        routed.circuit.clone()
    };
    let flat_out = output.decompose_swaps();
    PipelineResult {
        depth_before: flat.depth(),
        depth_after: flat_out.depth(),
        gates_before: flat.len(),
        gates_after: flat_out.len(),
        cx_before: flat.two_qubit_count(),
        cx_after: flat_out.two_qubit_count(),
        output,
        routed,
    }
}
