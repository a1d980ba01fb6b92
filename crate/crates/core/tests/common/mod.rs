// SPDX-License-Identifier: Apache-2.0

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sqgm::{ArchGraph, Circuit, Gate};

/// 1q gates the simulator knows, with parameters where needed.
const ONE: [(&str, &[&str]); 12] = [
    ("x", &[]),
    ("y", &[]),
    ("z", &[]),
    ("h", &[]),
    ("s", &[]),
    ("sdg", &[]),
    ("t", &[]),
    ("tdg", &[]),
    ("sx", &[]),
    ("rz", &["pi/3"]),
    ("rx", &["0.7"]),
    ("u3", &["0.1", "-pi/5", "2*pi/7"]),
];

/// Random circuit of CX, CZ and standard single-qubit gates. Pairs are
/// drawn from a small pool so that repeated and commuting gates are common.
pub fn mixed_circuit(n: usize, m: usize, seed: u64) -> Circuit {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool: Vec<(usize, usize)> = (0..n.max(2))
        .map(|_| {
            let a = rng.gen_range(0..n);
            let mut b = rng.gen_range(0..n - 1);
            if b >= a {
                b += 1;
            }
            (a, b)
        })
        .collect();
    let gates = (0..m).map(|_| {
        let roll: f64 = rng.gen();
        if n >= 2 && roll < 0.4 {
            let (a, b) = pool[rng.gen_range(0..pool.len())];
            Gate::cx(a, b)
        } else if n >= 2 && roll < 0.5 {
            let (a, b) = pool[rng.gen_range(0..pool.len())];
            Gate::cz(a, b)
        } else {
            let (name, params) = ONE[rng.gen_range(0..ONE.len())];
            Gate::one_with_params(
                name,
                params.iter().map(|p| p.to_string()).collect(),
                rng.gen_range(0..n),
            )
        }
    });
    Circuit::with_gates(n, gates).unwrap()
}

/// A device with at least `n` and at most 10 vertices.
pub fn small_graph(n: usize, seed: u64) -> ArchGraph {
    let names: Vec<&str> = ["line-6", "ourense", "grid-2x3", "grid-2x4", "grid-3x3", "line-10"]
        .into_iter()
        .filter(|name| ArchGraph::builtin(name).unwrap().num_vertices() >= n)
        .collect();
    ArchGraph::builtin(names[seed as usize % names.len()]).unwrap()
}
