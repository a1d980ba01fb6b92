// SPDX-License-Identifier: Apache-2.0

use std::collections::{BTreeSet, HashMap};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::heuristic::{score_swap, swap_candidates, HeuristicConfig, HeuristicMode, TieBreak};
use crate::arch::ArchGraph;
use crate::circuit::{Circuit, Dag, Gate};
use crate::error::{Error, Result};
use crate::mapping::Mapping;
use crate::scalar::Scalar;

/// Consecutive SWAPs without executing a gate, per device vertex, before the
/// router stops trusting the heuristic and walks a front gate together.
pub(crate) const STALL_FACTOR: usize = 10;

/// Mutable state of one routing run: front layer, extended set, decay
/// factors, current mapping and the physical output emitted so far.
pub struct RouterState<'a, T> {
    pub(crate) circuit: &'a Circuit,
    pub(crate) graph: &'a ArchGraph,
    dag: Dag,
    /// Unexecuted predecessors per gate.
    remaining: Vec<usize>,
    pub front: BTreeSet<usize>,
    pub extended: Vec<usize>,
    pub decay: Vec<T>,
    pub mapping: Mapping,
    pub output: Vec<Gate>,
    pub swaps: usize,
    pub steps: usize,
    swaps_since_reset: usize,
    stalled: usize,
    rng: ChaCha8Rng,
}

impl<'a, T: Scalar> RouterState<'a, T> {
    /// `circuit` must be barrier-free and sized to `initial`.
    pub fn new(circuit: &'a Circuit, graph: &'a ArchGraph, initial: &Mapping, seed: u64) -> Result<Self> {
        check_fit(circuit, graph, initial)?;
        let dag = circuit.dag();
        let remaining: Vec<usize> = (0..dag.len()).map(|i| dag.preds(i).len()).collect();
        let front = dag.roots().into_iter().collect();
        Ok(RouterState {
            circuit,
            graph,
            dag,
            remaining,
            front,
            extended: Vec::new(),
            decay: vec![T::one(); graph.num_vertices()],
            mapping: initial.clone(),
            output: Vec::new(),
            swaps: 0,
            steps: 0,
            swaps_since_reset: 0,
            stalled: 0,
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }

    pub fn gate(&self, pos: usize) -> &'a Gate {
        &self.circuit.gates()[pos]
    }

    fn is_executable(&self, pos: usize) -> bool {
        let g = self.gate(pos);
        if g.is_two_qubit() {
            self.graph
                .is_edge(self.mapping.phys(g.qubits[0]), self.mapping.phys(g.qubits[1]))
        } else {
            true
        }
    }

    /// Front gates that can run under the current mapping, in program order.
    pub fn executable(&self) -> Vec<usize> {
        self.front.iter().copied().filter(|&g| self.is_executable(g)).collect()
    }

    /// Removes `pos` from the front layer and admits successors whose
    /// predecessors have all executed.
    pub fn complete(&mut self, pos: usize) {
        self.front.remove(&pos);
        for &s in self.dag.succs(pos) {
            self.remaining[s] -= 1;
            if self.remaining[s] == 0 {
                self.front.insert(s);
            }
        }
    }

    /// Emits a source gate relabelled onto the current physical locations.
    pub fn emit(&mut self, pos: usize) {
        let g = self.gate(pos).relabel(|q| self.mapping.phys(q));
        self.output.push(g);
    }

    pub fn emit_physical(&mut self, gate: Gate) {
        self.output.push(gate);
    }

    /// Records that gates ran: decay factors and stall counters restart.
    pub fn progress_made(&mut self) {
        self.decay.fill(T::one());
        self.swaps_since_reset = 0;
        self.stalled = 0;
    }

    /// Bookkeeping after a SWAP on `(a, b)` has been applied.
    pub fn note_swap(&mut self, (a, b): (usize, usize), config: &HeuristicConfig<T>) {
        self.swaps += 1;
        self.stalled += 1;
        debug_assert!(self.mapping.is_consistent());
        if config.mode != HeuristicMode::Decay {
            return;
        }
        self.swaps_since_reset += 1;
        if config.decay_reset_interval > 0 && self.swaps_since_reset >= config.decay_reset_interval {
            self.decay.fill(T::one());
            self.swaps_since_reset = 0;
        } else {
            self.decay[a] = self.decay[a] + config.delta;
            self.decay[b] = self.decay[b] + config.delta;
        }
    }

    pub fn is_stalled(&self) -> bool {
        self.stalled >= STALL_FACTOR * self.graph.num_vertices().max(1)
    }

    fn pair(&self, pos: usize) -> (usize, usize) {
        let g = self.gate(pos);
        (g.qubits[0], g.qubits[1])
    }

    /// Logical operand pairs of the 2-qubit gates in the front layer.
    pub fn front_pairs(&self) -> Vec<(usize, usize)> {
        self.front
            .iter()
            .filter(|&&g| self.gate(g).is_two_qubit())
            .map(|&g| self.pair(g))
            .collect()
    }

    pub fn extended_pairs(&self) -> Vec<(usize, usize)> {
        self.extended.iter().map(|&g| self.pair(g)).collect()
    }

    /// Refills the extended set with the first `size` 2-qubit gates that
    /// become ready, in topological order, once the front layer has run.
    pub fn refresh_extended(&mut self, size: usize) {
        self.extended.clear();
        if size == 0 {
            return;
        }
        let mut resolved: HashMap<usize, usize> = HashMap::new();
        let mut to_visit: Vec<usize> = self.front.iter().copied().collect();
        let mut i = 0;
        'outer: while i < to_visit.len() {
            for &s in self.dag.succs(to_visit[i]) {
                let seen = resolved.entry(s).or_insert(0);
                *seen += 1;
                if *seen == self.remaining[s] {
                    if self.gate(s).is_two_qubit() {
                        self.extended.push(s);
                        if self.extended.len() >= size {
                            break 'outer;
                        }
                    }
                    to_visit.push(s);
                }
            }
            i += 1;
        }
    }

    /// Scores every candidate SWAP, adds `extra(edge)` to its base score and
    /// returns the best one.
    pub fn select_swap(
        &mut self,
        config: &HeuristicConfig<T>,
        extra: impl Fn((usize, usize)) -> T,
    ) -> Result<(usize, usize)> {
        let front = self.front_pairs();
        if config.mode == HeuristicMode::Basic {
            self.extended.clear();
        } else {
            self.refresh_extended(config.extended_set_size);
        }
        let extended = self.extended_pairs();
        let candidates = swap_candidates(&front, &self.mapping, self.graph);

        let mut best: Vec<(usize, usize)> = Vec::new();
        let mut best_score: Option<T> = None;
        for edge in candidates {
            let score =
                score_swap(&front, &extended, &self.decay, &self.mapping, edge, config, self.graph) + extra(edge);
            match best_score {
                Some(b) if score.ties(b) => best.push(edge),
                Some(b) if score > b => {}
                _ => {
                    best_score = Some(score);
                    best.clear();
                    best.push(edge);
                }
            }
        }
        if best.is_empty() {
            return Err(Error::Invariant("no SWAP candidates for a blocked front layer".into()));
        }
        if let TieBreak::Prefer(order) = &config.tie_break {
            if let Some(e) = order.iter().find(|e| best.contains(e)) {
                return Ok(*e);
            }
        }
        Ok(*best.choose(&mut self.rng).expect("nonempty"))
    }

    /// SWAPs that bring the closest blocked front gate onto an edge, walking
    /// its first operand along a shortest path.
    pub fn forced_path(&self) -> Vec<(usize, usize)> {
        let (p, q) = self
            .front_pairs()
            .into_iter()
            .min_by_key(|&(p, q)| self.graph.dist(self.mapping.phys(p), self.mapping.phys(q)))
            .expect("stalled front holds a 2-qubit gate");
        let path = self.graph.shortest_path(self.mapping.phys(p), self.mapping.phys(q));
        path.windows(2)
            .take(path.len().saturating_sub(2))
            .map(|w| (w[0].min(w[1]), w[0].max(w[1])))
            .collect()
    }

    pub fn into_output(self) -> Result<(Circuit, Mapping, usize, usize)> {
        let circuit = Circuit::with_gates(self.graph.num_vertices(), self.output)?;
        Ok((circuit, self.mapping, self.swaps, self.steps))
    }
}

pub(crate) fn check_fit(circuit: &Circuit, graph: &ArchGraph, initial: &Mapping) -> Result<()> {
    if initial.num_physical() != graph.num_vertices() {
        return Err(Error::InvalidMapping(format!(
            "mapping covers {} vertices but the device has {}",
            initial.num_physical(),
            graph.num_vertices()
        )));
    }
    if initial.num_logical() != circuit.num_qubits() {
        return Err(Error::InvalidMapping(format!(
            "mapping places {} logical qubits but the circuit has {}",
            initial.num_logical(),
            circuit.num_qubits()
        )));
    }
    if circuit.gates().iter().any(|g| g.is_barrier()) {
        return Err(Error::MalformedCircuit(
            "barriers must be stripped before routing".into(),
        ));
    }
    Ok(())
}
