// SPDX-License-Identifier: Apache-2.0

mod common;

use std::collections::HashSet;

use proptest::prelude::*;

use common::{mixed_circuit, small_graph};
use sqgm::bench::random_circuit;
use sqgm::circuit::layers;
use sqgm::optimize::{cancel_commutative, cancel_commutative_traced};
use sqgm::route::{HeuristicConfig, ProgressTracker, Router, SqgmRouter, SqgmScoring};
use sqgm::verify::{check_connectivity, check_structural, check_unitary, DEFAULT_TRIAL_STATES};
use sqgm::{emit_qasm, parse_qasm, random_mapping, ArchGraph, Circuit, Gate, Strategy as RouteStrategy};

/// Longest path (in gates) ending at each gate, by direct recursion over
/// earlier gates sharing a qubit.
fn longest_paths(c: &Circuit) -> Vec<usize> {
    let gates = c.gates();
    let mut best = vec![0; gates.len()];
    for i in 0..gates.len() {
        let mut m = 0;
        for j in 0..i {
            if gates[j].qubits.iter().any(|q| gates[i].qubits.contains(q)) {
                m = m.max(best[j]);
            }
        }
        best[i] = m + 1;
    }
    best
}

/// Circuit with SWAPs and barriers sprinkled in.
fn with_extras(c: &Circuit, seed: u64) -> Circuit {
    let mut gates = Vec::new();
    for (i, g) in c.gates().iter().enumerate() {
        gates.push(g.clone());
        let roll = (seed.wrapping_mul(31) + i as u64 * 17) % 11;
        if roll == 0 && g.qubits.len() == 2 {
            gates.push(Gate::swap(g.qubits[0], g.qubits[1]));
        } else if roll == 1 && c.num_qubits() >= 2 {
            gates.push(Gate::barrier(vec![0, 1]));
        }
    }
    Circuit::with_gates(c.num_qubits(), gates).unwrap()
}

fn arb_circuit() -> impl Strategy<Value = Circuit> {
    (2usize..7, 0usize..31, any::<u64>()).prop_map(|(n, m, seed)| mixed_circuit(n, m, seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn layering_is_valid_and_front_packed(c in arb_circuit(), seed in any::<u64>()) {
        let c = with_extras(&c, seed);
        let flat = c.decompose_swaps();
        let part = layers(&c);
        let mut seen = HashSet::new();
        let mut level = vec![0; flat.len()];
        for (l, layer) in part.layers.iter().enumerate() {
            let mut used = HashSet::new();
            for &g in layer {
                prop_assert!(seen.insert(g), "gate {g} in two layers");
                for &q in &flat.gates()[g].qubits {
                    prop_assert!(used.insert(q), "layer {l} reuses qubit {q}");
                }
                level[g] = l + 1;
            }
        }
        let real: Vec<usize> = (0..flat.len()).filter(|&i| !flat.gates()[i].is_barrier()).collect();
        prop_assert_eq!(seen.len(), real.len());
        let dag = flat.dag();
        for &g in &real {
            // transitive predecessors through barriers
            let mut stack: Vec<usize> = dag.preds(g).to_vec();
            let mut floor = 0;
            while let Some(p) = stack.pop() {
                if flat.gates()[p].is_barrier() {
                    stack.extend(dag.preds(p));
                } else {
                    floor = floor.max(level[p]);
                }
            }
            prop_assert_eq!(level[g], floor + 1, "gate {} not front-packed", g);
        }
    }

    #[test]
    fn depth_is_longest_path(c in arb_circuit(), seed in any::<u64>()) {
        let c = with_extras(&c, seed).strip_barriers();
        let flat = c.decompose_swaps();
        let oracle = longest_paths(&flat).into_iter().max().unwrap_or(0);
        prop_assert_eq!(c.depth(), oracle);
        prop_assert_eq!(flat.len(), c.len() + 2 * c.swap_count());
    }

    #[test]
    fn reverse_is_an_involution(c in arb_circuit()) {
        prop_assert_eq!(c.reverse().reverse(), c.clone());
        prop_assert_eq!(c.reverse().depth(), c.depth());
    }

    #[test]
    fn qasm_round_trip(c in arb_circuit(), seed in any::<u64>()) {
        let c = with_extras(&c, seed);
        let text = emit_qasm(&c, c.num_qubits());
        let back = parse_qasm(&text).unwrap();
        prop_assert_eq!(&back, &c.decompose_swaps().renumbered());
        prop_assert_eq!(emit_qasm(&back, c.num_qubits()), text);
        prop_assert_eq!(back.per_qubit_sequences(), c.decompose_swaps().per_qubit_sequences());
    }

    #[test]
    fn routed_output_is_legal(n in 2usize..9, m in 1usize..80, seed in any::<u64>(), sqgm in any::<bool>()) {
        let c = random_circuit(n, m, &["h", "t", "x"], seed);
        let g = ArchGraph::builtin(["grid-3x3", "line-9", "ourense", "tokyo20"][seed as usize % 4])
            .ok()
            .filter(|g| g.num_vertices() >= n)
            .unwrap_or_else(|| ArchGraph::builtin("grid-3x3").unwrap());
        let init = random_mapping(n, &g, seed).unwrap();
        let s = if sqgm { RouteStrategy::Sqgm } else { RouteStrategy::Sabre };
        let r = s.router(HeuristicConfig::<f64>::default().with_seed(seed)).route(&c, &g, &init).unwrap();
        prop_assert!(check_connectivity(&r.circuit, &g).is_none());
        let st = check_structural(&c, &r.circuit, &init);
        prop_assert!(st.ok, "witness {:?}", st.witness);
        prop_assert_eq!(&st.final_mapping, &r.final_mapping);
        prop_assert!(r.final_mapping.is_consistent());
        prop_assert_eq!(r.circuit.len(), c.len() + r.swaps);
        let flat = r.circuit.decompose_swaps();
        prop_assert_eq!(3 * r.swaps, flat.two_qubit_count() - c.cx_equivalent_count());
        prop_assert!(r.steps <= 10 * c.len().max(1) * g.num_vertices());
    }

    #[test]
    fn cancellation_is_sound_and_idempotent(n in 2usize..6, m in 0usize..50, seed in any::<u64>()) {
        let c = mixed_circuit(n, m, seed);
        let (out, _, settled) = cancel_commutative_traced(&c);
        prop_assert!(settled);
        prop_assert!(out.depth() <= c.depth());
        prop_assert!(out.len() <= c.len());
        prop_assert_eq!(cancel_commutative(&out), out.clone());
        let id = sqgm::Mapping::identity(n, n).unwrap();
        let u = check_unitary(&c, &out, &id, &id, None, DEFAULT_TRIAL_STATES).unwrap();
        prop_assert!(u.ok, "deviation {}", u.max_deviation);
    }
}

/// Per-vertex layer count of the output, via the longest-path oracle.
fn vertex_depths(c: &Circuit, n: usize) -> Vec<u64> {
    let flat = c.decompose_swaps();
    let paths = longest_paths(&flat);
    let mut out = vec![0; n];
    for (g, &d) in flat.gates().iter().zip(&paths) {
        for &v in &g.qubits {
            out[v] = out[v].max(d as u64);
        }
    }
    out
}

#[test]
fn progress_matches_output_depth() {
    for seed in 0..60 {
        let n = 2 + seed as usize % 5;
        let c = mixed_circuit(n, 30, seed);
        let g = small_graph(n, seed);
        let init = random_mapping(n, &g, seed).unwrap();
        let (r, pg) = SqgmRouter::<f64>::default().route_traced(&c, &g, &init, seed).unwrap();
        let depths = vertex_depths(&r.circuit, g.num_vertices());
        for (v, &d) in depths.iter().enumerate() {
            if r.swaps == 0 {
                assert_eq!(pg.get(v), d, "seed {seed} vertex {v}");
            } else {
                assert!(pg.get(v) >= d, "seed {seed} vertex {v}");
            }
        }
    }
}

#[test]
fn progress_never_decreases() {
    let c = random_circuit(8, 120, &["h", "t"], 5);
    let g = ArchGraph::builtin("grid-3x3").unwrap();
    let r = SqgmRouter::<f64>::default()
        .route(&c, &g, &random_mapping(8, &g, 5).unwrap())
        .unwrap();
    let mut pg = ProgressTracker::new(9);
    let mut prev = pg.values().to_vec();
    for gate in r.circuit.gates() {
        pg.track(gate);
        assert!(pg.values().iter().zip(&prev).all(|(a, b)| a >= b));
        prev = pg.values().to_vec();
    }
}

#[test]
fn base_score_ablation_stays_valid() {
    for seed in 0..20 {
        let c = random_circuit(9, 100, &["h", "sx"], seed);
        let g = ArchGraph::builtin("grid-3x3").unwrap();
        let init = random_mapping(9, &g, seed).unwrap();
        let r = SqgmRouter::<f64>::default()
            .with_scoring(SqgmScoring::BaseOnly)
            .route(&c, &g, &init)
            .unwrap();
        assert!(check_connectivity(&r.circuit, &g).is_none());
        assert!(check_structural(&c, &r.circuit, &init).ok);
    }
}

#[test]
fn partial_occupancy_moves_through_free_vertices() {
    // 3 logical qubits on a 10-vertex line, far apart
    let c = Circuit::with_gates(3, [Gate::cx(0, 1), Gate::one("h", 2), Gate::cx(1, 2), Gate::cx(0, 2)]).unwrap();
    let g = ArchGraph::builtin("line-10").unwrap();
    let init = sqgm::Mapping::from_vec(vec![0, 9, 5], 10).unwrap();
    for s in [RouteStrategy::Sabre, RouteStrategy::Sqgm] {
        let r = s
            .router(HeuristicConfig::<f64>::default())
            .route(&c, &g, &init)
            .unwrap();
        assert!(check_connectivity(&r.circuit, &g).is_none());
        let st = check_structural(&c, &r.circuit, &init);
        assert!(st.ok);
        let u = check_unitary(&c, &r.circuit, &init, &st.final_mapping, None, DEFAULT_TRIAL_STATES).unwrap();
        assert!(u.ok);
    }
}

#[test]
fn source_barriers_are_dropped_before_routing() {
    let c = Circuit::with_gates(
        3,
        [
            Gate::cx(0, 1),
            Gate::barrier(vec![0, 1, 2]),
            Gate::cx(0, 2),
            Gate::one("h", 1),
        ],
    )
    .unwrap();
    let g = ArchGraph::builtin("line-3").unwrap();
    let init = sqgm::Mapping::identity(3, 3).unwrap();
    let r = SqgmRouter::<f64>::default().route(&c, &g, &init).unwrap();
    assert!(r.circuit.gates().iter().all(|g| !g.is_barrier()));
    assert!(check_structural(&c, &r.circuit, &init).ok);
}
