// SPDX-License-Identifier: Apache-2.0

//! Benchmark driver and circuit generators.
//!
//! For every circuit and repeat one layout is computed and the same initial
//! mapping is handed to every strategy, so strategies differ only in routing.
//! Repeat `r` always uses the seed `derive_seed(base, r)`; a run with more
//! repeats therefore contains every seed of a run with fewer, and best-of-k
//! can only improve with k.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arch::ArchGraph;
use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::layout::{derive_seed, sabre_layout, DEFAULT_LAYOUT_ITERATIONS};
use crate::mapping::Mapping;
use crate::optimize::finish;
use crate::qasm::parse_qasm;
use crate::route::{HeuristicConfig, Router, Strategy};

pub const DEFAULT_REPEATS: usize = 5;
/// Repeat count that Δ^k is normalised against.
pub const DELTA_BASE: usize = 5;

pub const CSV_HEADER: &str = "circuit,strategy,seed,repeats,swaps,depth_in,depth_out,ratio,ms";

/// Random circuit: each gate is a CX on a random pair with probability 1/2,
/// otherwise a random gate from `one_qubit` on a random qubit.
pub fn random_circuit(num_qubits: usize, num_gates: usize, one_qubit: &[&str], seed: u64) -> Circuit {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gates = Vec::with_capacity(num_gates);
    for _ in 0..num_gates {
        if num_qubits >= 2 && (one_qubit.is_empty() || rng.gen_bool(0.5)) {
            let a = rng.gen_range(0..num_qubits);
            let mut b = rng.gen_range(0..num_qubits - 1);
            if b >= a {
                b += 1;
            }
            gates.push(Gate::cx(a, b));
        } else if let Some(name) = one_qubit.choose(&mut rng) {
            gates.push(Gate::one(*name, rng.gen_range(0..num_qubits.max(1))));
        }
    }
    Circuit::with_gates(num_qubits, gates).expect("indices in range")
}

/// Circuit with a known zero-SWAP solution.
///
/// Built over device vertices, layer by layer: a random matching of
/// `floor(density * |V| / 2)` edges (at least one) receives CX gates and every other vertex an X.
/// Vertices are then relabelled by a random bijection; its inverse is the
/// returned (planted) mapping. Every layer is full, so the depth is exactly
/// `depth`.
pub fn generate_queko(graph: &ArchGraph, depth: usize, density: f64, seed: u64) -> Result<(Circuit, Mapping)> {
    let n = graph.num_vertices();
    if depth == 0 {
        return Err(Error::Generation("depth must be at least 1".into()));
    }
    if !(density > 0.0 && density <= 1.0) {
        return Err(Error::Generation(format!("density {density} outside (0, 1]")));
    }
    if graph.edges().is_empty() {
        return Err(Error::Generation("graph has no edges".into()));
    }
    let target = ((density * n as f64 / 2.0).floor() as usize).max(1);
    if target > n / 2 {
        return Err(Error::Generation(format!(
            "{target} disjoint CX per layer cannot fit on {n} vertices"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut physical = Vec::new();
    for _ in 0..depth {
        let matching = random_matching(graph, target, &mut rng)
            .ok_or_else(|| Error::Generation(format!("no matching of {target} edges found for density {density}")))?;
        let mut busy = vec![false; n];
        for &(a, b) in &matching {
            busy[a] = true;
            busy[b] = true;
            let (c, t) = if rng.gen_bool(0.5) { (a, b) } else { (b, a) };
            physical.push(Gate::cx(c, t));
        }
        physical.extend((0..n).filter(|&v| !busy[v]).map(|v| Gate::one("x", v)));
    }
    let mut to_logical: Vec<usize> = (0..n).collect();
    to_logical.shuffle(&mut rng);
    let mut tau = vec![0; n];
    for (v, &q) in to_logical.iter().enumerate() {
        tau[q] = v;
    }
    let circuit = Circuit::with_gates(n, physical.iter().map(|g| g.relabel(|v| to_logical[v])))?;
    Ok((circuit, Mapping::from_vec(tau, n)?))
}

/// Greedy matching over shuffled edges, retried a bounded number of times.
fn random_matching(graph: &ArchGraph, size: usize, rng: &mut ChaCha8Rng) -> Option<Vec<(usize, usize)>> {
    let mut edges = graph.edges().to_vec();
    for _ in 0..64 {
        edges.shuffle(rng);
        let mut used = vec![false; graph.num_vertices()];
        let mut picked = Vec::with_capacity(size);
        for &(a, b) in &edges {
            if !used[a] && !used[b] {
                used[a] = true;
                used[b] = true;
                picked.push((a, b));
                if picked.len() == size {
                    return Some(picked);
                }
            }
        }
    }
    None
}

/// Random CX circuit where, after a `chain_prob` fraction of the CX gates, a
/// run of `chain_len` single-qubit gates is added on one of its operands.
pub fn chained_circuit(
    num_qubits: usize,
    num_cx: usize,
    chain_prob: f64,
    chain_len: std::ops::RangeInclusive<usize>,
    seed: u64,
) -> Circuit {
    const NAMES: [&str; 4] = ["h", "t", "sx", "rz"];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gates = Vec::new();
    for _ in 0..num_cx {
        let a = rng.gen_range(0..num_qubits);
        let mut b = rng.gen_range(0..num_qubits - 1);
        if b >= a {
            b += 1;
        }
        gates.push(Gate::cx(a, b));
        if rng.gen_bool(chain_prob) {
            let q = if rng.gen_bool(0.5) { a } else { b };
            for _ in 0..rng.gen_range(chain_len.clone()) {
                let name = NAMES[rng.gen_range(0..NAMES.len())];
                gates.push(if name == "rz" {
                    Gate::one_with_params(name, vec!["pi/8".into()], q)
                } else {
                    Gate::one(name, q)
                });
            }
        }
    }
    Circuit::with_gates(num_qubits, gates).expect("indices in range")
}

/// Geometric mean of the positive entries; `None` if there are none.
pub fn geomean(values: &[f64]) -> Option<f64> {
    let positive: Vec<f64> = values.iter().copied().filter(|v| *v > 0.0).collect();
    if positive.len() < values.len() {
        log::warn!(
            "geomean: ignored {} non-positive value(s)",
            values.len() - positive.len()
        );
    }
    if positive.is_empty() {
        return None;
    }
    Some((positive.iter().map(|v| v.ln()).sum::<f64>() / positive.len() as f64).exp())
}

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub heuristic: HeuristicConfig<f64>,
    pub layout_iterations: usize,
    /// Router used inside the layout search.
    pub layout_strategy: Strategy,
    pub cc: bool,
    /// Record wall-clock times; otherwise `ms` is 0 so reports are reproducible.
    pub timing: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            heuristic: HeuristicConfig::default(),
            layout_iterations: DEFAULT_LAYOUT_ITERATIONS,
            layout_strategy: Strategy::Sabre,
            cc: false,
            timing: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub circuit: String,
    pub strategy: String,
    pub seed: u64,
    pub repeat: usize,
    pub swaps: usize,
    pub depth_in: usize,
    pub depth_out: usize,
    pub ratio: f64,
    pub ms: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct StrategySummary {
    /// Geomean over circuits of the best depth ratio over all repeats.
    pub geomean_best_ratio: Option<f64>,
    /// Δ^k for each feasible k.
    pub delta: BTreeMap<usize, f64>,
    pub failures: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchReport {
    pub strategies: Vec<String>,
    pub circuits: Vec<String>,
    pub repeats: usize,
    pub records: Vec<RunRecord>,
    pub summary: BTreeMap<String, StrategySummary>,
    /// Λ^k of each other strategy against the first one.
    pub lambda: BTreeMap<String, BTreeMap<usize, f64>>,
    #[serde(skip)]
    depth_in: Vec<usize>,
    /// `outputs[strategy][circuit][repeat]`, `None` when that run failed.
    #[serde(skip)]
    outputs: Vec<Vec<Vec<Option<usize>>>>,
}

impl BenchReport {
    /// Smallest output depth over the first `k` repeats, if any succeeded.
    pub fn best_depth(&self, strategy: usize, circuit: usize, k: usize) -> Option<usize> {
        self.outputs[strategy][circuit][..k.min(self.repeats)]
            .iter()
            .flatten()
            .min()
            .copied()
    }

    /// Best-of-k depth ratio δ^k of one circuit.
    pub fn best_ratio(&self, strategy: usize, circuit: usize, k: usize) -> Option<f64> {
        let d = self.best_depth(strategy, circuit, k)?;
        Some(d as f64 / self.depth_in[circuit].max(1) as f64)
    }

    /// Geomean over circuits of δ^k.
    pub fn geomean_ratio(&self, strategy: usize, k: usize) -> Option<f64> {
        let ratios: Vec<f64> = (0..self.circuits.len())
            .filter_map(|c| self.best_ratio(strategy, c, k))
            .collect();
        geomean(&ratios)
    }

    /// Δ^k: geomean over circuits of δ^k / δ^5.
    pub fn delta_k(&self, strategy: usize, k: usize) -> Option<f64> {
        if k > self.repeats || DELTA_BASE > self.repeats {
            return None;
        }
        let ratios: Vec<f64> = (0..self.circuits.len())
            .filter_map(|c| {
                Some(self.best_depth(strategy, c, k)? as f64 / self.best_depth(strategy, c, DELTA_BASE)? as f64)
            })
            .collect();
        geomean(&ratios)
    }

    /// Λ^k: geomean over circuits of δ^k(other) / δ^k(reference).
    pub fn lambda_k(&self, reference: usize, other: usize, k: usize) -> Option<f64> {
        if k > self.repeats {
            return None;
        }
        let ratios: Vec<f64> = (0..self.circuits.len())
            .filter_map(|c| Some(self.best_depth(other, c, k)? as f64 / self.best_depth(reference, c, k)? as f64))
            .collect();
        geomean(&ratios)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.records {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{:.6},{:.3}\n",
                r.circuit, r.strategy, r.seed, self.repeats, r.swaps, r.depth_in, r.depth_out, r.ratio, r.ms
            ));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Reads every `*.qasm` file in `dir`, sorted by file name.
pub fn load_suite(dir: &Path) -> Result<Vec<(String, Circuit)>> {
    let mut paths: Vec<_> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "qasm"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let name = p.file_stem().unwrap_or_default().to_string_lossy().into_owned();
            let text = std::fs::read_to_string(&p)?;
            let circuit = parse_qasm(&text).map_err(|e| {
                log::error!("{}: {e}", p.display());
                e
            })?;
            Ok((name, circuit))
        })
        .collect()
}

struct RepeatOutcome {
    circuit: usize,
    repeat: usize,
    seed: u64,
    runs: Vec<Result<(usize, usize, f64)>>,
}

fn run_repeat(
    circuit: &Circuit,
    graph: &ArchGraph,
    routers: &[Box<dyn Router>],
    config: &SuiteConfig,
    seed: u64,
) -> Result<Vec<Result<(usize, usize, f64)>>> {
    let circuit = circuit.strip_barriers();
    let layout_router = config.layout_strategy.router(config.heuristic.clone());
    let initial = sabre_layout(&circuit, graph, layout_router.as_ref(), config.layout_iterations, seed)?;
    Ok(routers
        .iter()
        .map(|router| {
            let start = Instant::now();
            let routed = router.route_with_seed(&circuit, graph, &initial, seed)?;
            let swaps = routed.swaps;
            let result = finish(routed, config.cc);
            let ms = start.elapsed().as_secs_f64() * 1e3;
            Ok((swaps, result.depth_after, ms))
        })
        .collect())
}

/// Runs every strategy `repeats` times on every circuit.
pub fn run_suite(
    circuits: &[(String, Circuit)],
    graph: &ArchGraph,
    strategies: &[Strategy],
    repeats: usize,
    base_seed: u64,
    config: &SuiteConfig,
) -> Result<BenchReport> {
    if repeats == 0 {
        return Err(Error::Config("repeats must be at least 1".into()));
    }
    if strategies.is_empty() {
        return Err(Error::Config("no strategies given".into()));
    }
    config.heuristic.validate()?;
    let routers: Vec<Box<dyn Router>> = strategies.iter().map(|s| s.router(config.heuristic.clone())).collect();

    let jobs: Vec<(usize, usize)> = (0..circuits.len())
        .flat_map(|c| (0..repeats).map(move |r| (c, r)))
        .collect();
    let outcomes: Vec<RepeatOutcome> = jobs
        .par_iter()
        .map(|&(c, r)| {
            let seed = derive_seed(base_seed, r as u64);
            let runs = match run_repeat(&circuits[c].1, graph, &routers, config, seed) {
                Ok(runs) => runs,
                Err(e) => {
                    log::error!("{}: layout failed for seed {seed}: {e}", circuits[c].0);
                    routers.iter().map(|_| Err(Error::Config(e.to_string()))).collect()
                }
            };
            RepeatOutcome {
                circuit: c,
                repeat: r,
                seed,
                runs,
            }
        })
        .collect();

    let depth_in: Vec<usize> = circuits.iter().map(|(_, c)| c.depth()).collect();
    let mut outputs = vec![vec![vec![None; repeats]; circuits.len()]; strategies.len()];
    let mut failures = vec![0; strategies.len()];
    let mut records = Vec::new();
    for o in &outcomes {
        for (s, run) in o.runs.iter().enumerate() {
            match run {
                Ok((swaps, depth_out, ms)) => {
                    outputs[s][o.circuit][o.repeat] = Some(*depth_out);
                    records.push(RunRecord {
                        circuit: circuits[o.circuit].0.clone(),
                        strategy: strategies[s].name().to_string(),
                        seed: o.seed,
                        repeat: o.repeat,
                        swaps: *swaps,
                        depth_in: depth_in[o.circuit],
                        depth_out: *depth_out,
                        ratio: *depth_out as f64 / depth_in[o.circuit].max(1) as f64,
                        ms: if config.timing { *ms } else { 0.0 },
                    });
                }
                Err(e) => {
                    log::error!("{} / {} / seed {}: {e}", circuits[o.circuit].0, strategies[s], o.seed);
                    failures[s] += 1;
                }
            }
        }
    }
    // (circuit, strategy, seed) order regardless of completion order.
    let order: BTreeMap<&str, usize> = strategies.iter().enumerate().map(|(i, s)| (s.name(), i)).collect();
    let circuit_index: BTreeMap<&str, usize> = circuits.iter().enumerate().map(|(i, (n, _))| (n.as_str(), i)).collect();
    records.sort_by_key(|r| (circuit_index[r.circuit.as_str()], order[r.strategy.as_str()], r.repeat));

    let mut report = BenchReport {
        strategies: strategies.iter().map(|s| s.name().to_string()).collect(),
        circuits: circuits.iter().map(|(n, _)| n.clone()).collect(),
        repeats,
        records,
        summary: BTreeMap::new(),
        lambda: BTreeMap::new(),
        depth_in,
        outputs,
    };
    let ks: Vec<usize> = (1..=repeats).collect();
    for (s, strategy) in strategies.iter().enumerate() {
        let delta = ks
            .iter()
            .filter_map(|&k| report.delta_k(s, k).map(|d| (k, d)))
            .collect();
        let summary = StrategySummary {
            geomean_best_ratio: report.geomean_ratio(s, repeats),
            delta,
            failures: failures[s],
        };
        report.summary.insert(strategy.name().to_string(), summary);
        if s > 0 {
            let lambda = ks
                .iter()
                .filter_map(|&k| report.lambda_k(0, s, k).map(|l| (k, l)))
                .collect();
            report.lambda.insert(strategy.name().to_string(), lambda);
        }
    }
    Ok(report)
}
