// SPDX-License-Identifier: Apache-2.0

//! Depth-aware routing.
//!
//! Each vertex carries a progress counter: the number of output layers
//! already committed on it. Executable single-qubit gates are not emitted
//! right away but parked in a per-vertex buffer. A buffer is flushed when a
//! 2-qubit gate on that vertex runs, or partially when a SWAP is placed, so
//! that the SWAP lands in the idle time of the less advanced vertex rather
//! than after every pending single-qubit gate. SWAP selection adds the
//! progress of the busier endpoint (scaled by the device size) to the base
//! score, steering SWAPs towards lagging vertices.

use std::collections::VecDeque;

use super::heuristic::HeuristicConfig;
use super::state::RouterState;
use super::{RoutedCircuit, Router};
use crate::arch::ArchGraph;
use crate::circuit::{Circuit, Gate, GateKind};
use crate::error::Result;
use crate::mapping::Mapping;
use crate::scalar::Scalar;

/// Per-vertex progress, in output layers. Never decreases.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProgressTracker {
    pg: Vec<u64>,
}

impl ProgressTracker {
    pub fn new(num_vertices: usize) -> Self {
        ProgressTracker {
            pg: vec![0; num_vertices],
        }
    }

    pub fn from_values(pg: Vec<u64>) -> Self {
        ProgressTracker { pg }
    }

    pub fn get(&self, v: usize) -> u64 {
        self.pg[v]
    }

    pub fn values(&self) -> &[u64] {
        &self.pg
    }

    pub fn on_single(&mut self, v: usize) {
        self.pg[v] += 1;
    }

    pub fn on_two(&mut self, a: usize, b: usize) {
        self.realign(a, b, 1);
    }

    /// A SWAP is three CX.
    pub fn on_swap(&mut self, a: usize, b: usize) {
        self.realign(a, b, 3);
    }

    fn realign(&mut self, a: usize, b: usize, step: u64) {
        let level = self.pg[a].max(self.pg[b]) + step;
        self.pg[a] = level;
        self.pg[b] = level;
    }

    /// Progress of the busier endpoint of an edge.
    pub fn nu(&self, a: usize, b: usize) -> u64 {
        self.pg[a].max(self.pg[b])
    }

    /// Advances the counters for one already-placed physical gate.
    pub fn track(&mut self, gate: &Gate) {
        match gate.kind {
            GateKind::OneQubit { .. } => self.on_single(gate.qubits[0]),
            GateKind::Cx | GateKind::Cz => self.on_two(gate.qubits[0], gate.qubits[1]),
            GateKind::Swap => self.on_swap(gate.qubits[0], gate.qubits[1]),
            GateKind::Barrier => {}
        }
    }
}

/// Deferred single-qubit gates per vertex, in program order. Gates are kept
/// with their logical operand and relabelled when flushed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QubitBuffer {
    slots: Vec<VecDeque<Gate>>,
}

impl QubitBuffer {
    pub fn new(num_vertices: usize) -> Self {
        QubitBuffer {
            slots: vec![VecDeque::new(); num_vertices],
        }
    }

    pub fn push(&mut self, v: usize, gate: Gate) {
        self.slots[v].push_back(gate);
    }

    pub fn len(&self, v: usize) -> usize {
        self.slots[v].len()
    }

    pub fn total(&self) -> usize {
        self.slots.iter().map(VecDeque::len).sum()
    }

    pub fn get(&self, v: usize) -> impl Iterator<Item = &Gate> {
        self.slots[v].iter()
    }

    pub fn exchange(&mut self, a: usize, b: usize) {
        self.slots.swap(a, b);
    }

    /// Emits up to `count` gates from the head of `v`'s buffer onto vertex `v`.
    pub fn flush(&mut self, v: usize, count: usize, pg: &mut ProgressTracker, output: &mut Vec<Gate>) {
        for _ in 0..count {
            let Some(g) = self.slots[v].pop_front() else {
                break;
            };
            output.push(g.relabel(|_| v));
            pg.on_single(v);
        }
    }

    pub fn flush_all(&mut self, v: usize, pg: &mut ProgressTracker, output: &mut Vec<Gate>) {
        let n = self.slots[v].len();
        self.flush(v, n, pg, output);
    }
}

/// Base score plus the busier endpoint's progress divided by the vertex count.
pub fn h_sqgm<T: Scalar>(base: T, pg: &ProgressTracker, edge: (usize, usize), num_vertices: usize) -> T {
    base + T::from_u64(pg.nu(edge.0, edge.1)).expect("progress") / T::from_count(num_vertices)
}

/// Places a SWAP on `edge`.
///
/// The endpoint with less progress first catches up by emitting as many of
/// its buffered gates as fit in the gap (but no more than it holds); then
/// the SWAP is emitted, the two buffers trade places, progress realigns and
/// the mapping is updated.
pub fn place_swap(
    pg: &mut ProgressTracker,
    buffers: &mut QubitBuffer,
    mapping: &mut Mapping,
    edge: (usize, usize),
    output: &mut Vec<Gate>,
) {
    let (a, b) = edge;
    let (lo, hi) = if pg.get(a) < pg.get(b) { (a, b) } else { (b, a) };
    let gap = (pg.get(hi) - pg.get(lo)) as usize;
    let k = gap.min(buffers.len(lo));
    buffers.flush(lo, k, pg, output);
    output.push(Gate::swap(a.min(b), a.max(b)));
    buffers.exchange(lo, hi);
    pg.on_swap(lo, hi);
    mapping.swap_vertices(lo, hi);
}

/// Which score selects the SWAP.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SqgmScoring {
    /// Base score plus normalised progress.
    #[default]
    Progress,
    /// Base score only; buffering and placement unchanged.
    BaseOnly,
}

#[derive(Debug, Clone)]
pub struct SqgmRouter<T> {
    pub config: HeuristicConfig<T>,
    pub scoring: SqgmScoring,
}

impl<T: Scalar> Default for SqgmRouter<T> {
    fn default() -> Self {
        SqgmRouter::new(HeuristicConfig::default())
    }
}

impl<T: Scalar> SqgmRouter<T> {
    pub fn new(config: HeuristicConfig<T>) -> Self {
        SqgmRouter {
            config,
            scoring: SqgmScoring::Progress,
        }
    }

    pub fn with_scoring(mut self, scoring: SqgmScoring) -> Self {
        self.scoring = scoring;
        self
    }

    /// Routes and also returns the final progress counters.
    pub fn route_traced(
        &self,
        circuit: &Circuit,
        graph: &ArchGraph,
        initial: &Mapping,
        seed: u64,
    ) -> Result<(RoutedCircuit, ProgressTracker)> {
        self.config.validate()?;
        let circuit = circuit.strip_barriers();
        let n = graph.num_vertices();
        let mut st = RouterState::<T>::new(&circuit, graph, initial, seed)?;
        let mut pg = ProgressTracker::new(n);
        let mut buffers = QubitBuffer::new(n);

        while !st.front.is_empty() {
            st.steps += 1;
            let ready = st.executable();
            if !ready.is_empty() {
                for g in ready {
                    let gate = st.gate(g);
                    if gate.is_single() {
                        buffers.push(st.mapping.phys(gate.qubits[0]), gate.clone());
                    } else {
                        let (v0, v1) = (st.mapping.phys(gate.qubits[0]), st.mapping.phys(gate.qubits[1]));
                        buffers.flush_all(v0, &mut pg, &mut st.output);
                        buffers.flush_all(v1, &mut pg, &mut st.output);
                        st.emit(g);
                        pg.on_two(v0, v1);
                    }
                    st.complete(g);
                }
                st.progress_made();
                continue;
            }
            if st.is_stalled() {
                for edge in st.forced_path() {
                    place_swap(&mut pg, &mut buffers, &mut st.mapping, edge, &mut st.output);
                    st.note_swap(edge, &self.config);
                }
                continue;
            }
            let edge = match self.scoring {
                SqgmScoring::Progress => {
                    let pg_now = &pg;
                    st.select_swap(&self.config, |e| h_sqgm(T::zero(), pg_now, e, n))?
                }
                SqgmScoring::BaseOnly => st.select_swap(&self.config, |_| T::zero())?,
            };
            place_swap(&mut pg, &mut buffers, &mut st.mapping, edge, &mut st.output);
            st.note_swap(edge, &self.config);
        }
        for v in 0..n {
            buffers.flush_all(v, &mut pg, &mut st.output);
        }

        let (out, final_mapping, swaps, steps) = st.into_output()?;
        Ok((
            RoutedCircuit {
                circuit: out,
                initial: initial.clone(),
                final_mapping,
                swaps,
                steps,
            },
            pg,
        ))
    }
}

impl<T: Scalar> Router for SqgmRouter<T> {
    fn route_with_seed(
        &self,
        circuit: &Circuit,
        graph: &ArchGraph,
        initial: &Mapping,
        seed: u64,
    ) -> Result<RoutedCircuit> {
        self.route_traced(circuit, graph, initial, seed).map(|(r, _)| r)
    }

    fn seed(&self) -> u64 {
        self.config.seed
    }
}
