// SPDX-License-Identifier: Apache-2.0

//! Circuit representation: gates, the qubit dependency DAG, front-packed
//! layering and depth.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GateKind {
    /// Any single-qubit gate. The router never looks inside it, parameters are
    /// kept as source text.
    OneQubit {
        name: String,
        params: Vec<String>,
    },
    Cx,
    Cz,
    Swap,
    /// Scheduling fence over its qubits. Takes no time.
    Barrier,
}

impl GateKind {
    pub fn name(&self) -> &str {
        match self {
            GateKind::OneQubit { name, .. } => name,
            GateKind::Cx => "cx",
            GateKind::Cz => "cz",
            GateKind::Swap => "swap",
            GateKind::Barrier => "barrier",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Gate {
    pub id: usize,
    pub kind: GateKind,
    pub qubits: Vec<usize>,
}

impl Gate {
    pub fn new(kind: GateKind, qubits: Vec<usize>) -> Self {
        Gate { id: 0, kind, qubits }
    }

    pub fn one(name: impl Into<String>, qubit: usize) -> Self {
        Self::one_with_params(name, Vec::new(), qubit)
    }

    pub fn one_with_params(name: impl Into<String>, params: Vec<String>, qubit: usize) -> Self {
        Gate::new(
            GateKind::OneQubit {
                name: name.into(),
                params,
            },
            vec![qubit],
        )
    }

    pub fn cx(control: usize, target: usize) -> Self {
        Gate::new(GateKind::Cx, vec![control, target])
    }

    pub fn cz(a: usize, b: usize) -> Self {
        Gate::new(GateKind::Cz, vec![a, b])
    }

    pub fn swap(a: usize, b: usize) -> Self {
        Gate::new(GateKind::Swap, vec![a, b])
    }

    pub fn barrier(qubits: Vec<usize>) -> Self {
        Gate::new(GateKind::Barrier, qubits)
    }

    pub fn is_single(&self) -> bool {
        matches!(self.kind, GateKind::OneQubit { .. })
    }

    /// CX, CZ and SWAP.
    pub fn is_two_qubit(&self) -> bool {
        matches!(self.kind, GateKind::Cx | GateKind::Cz | GateKind::Swap)
    }

    pub fn is_barrier(&self) -> bool {
        matches!(self.kind, GateKind::Barrier)
    }

    /// Same gate with its operands relabelled through `f`.
    pub fn relabel(&self, f: impl Fn(usize) -> usize) -> Gate {
        Gate {
            id: self.id,
            kind: self.kind.clone(),
            qubits: self.qubits.iter().map(|&q| f(q)).collect(),
        }
    }

    fn validate(&self, num_qubits: usize) -> Result<()> {
        let arity_ok = match self.kind {
            GateKind::OneQubit { .. } => self.qubits.len() == 1,
            GateKind::Cx | GateKind::Cz | GateKind::Swap => self.qubits.len() == 2,
            GateKind::Barrier => !self.qubits.is_empty(),
        };
        if !arity_ok {
            return Err(Error::MalformedCircuit(format!(
                "gate {} `{}` has {} operands",
                self.id,
                self.kind.name(),
                self.qubits.len()
            )));
        }
        for (i, &q) in self.qubits.iter().enumerate() {
            if q >= num_qubits {
                return Err(Error::MalformedCircuit(format!(
                    "gate {} `{}` uses qubit {q} but the circuit has {num_qubits}",
                    self.id,
                    self.kind.name()
                )));
            }
            if self.qubits[..i].contains(&q) {
                return Err(Error::MalformedCircuit(format!(
                    "gate {} `{}` repeats qubit {q}",
                    self.id,
                    self.kind.name()
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind.name())?;
        if let GateKind::OneQubit { params, .. } = &self.kind {
            if !params.is_empty() {
                write!(f, "({})", params.join(","))?;
            }
        }
        let qs: Vec<String> = self.qubits.iter().map(|q| q.to_string()).collect();
        write!(f, " {}", qs.join(","))
    }
}

/// An ordered gate sequence over `num_qubits` qubits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
    next_id: usize,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Circuit {
            num_qubits,
            gates: Vec::new(),
            next_id: 0,
        }
    }

    /// Builds a circuit, numbering gates in sequence order.
    pub fn with_gates(num_qubits: usize, gates: impl IntoIterator<Item = Gate>) -> Result<Self> {
        let mut c = Circuit::new(num_qubits);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    /// Builds a circuit keeping the ids already on the gates.
    pub fn from_parts(num_qubits: usize, gates: Vec<Gate>) -> Result<Self> {
        for g in &gates {
            g.validate(num_qubits)?;
        }
        let next_id = gates.iter().map(|g| g.id + 1).max().unwrap_or(0);
        Ok(Circuit {
            num_qubits,
            gates,
            next_id,
        })
    }

    /// Appends a gate and returns the id assigned to it.
    pub fn push(&mut self, mut gate: Gate) -> Result<usize> {
        gate.id = self.next_id;
        gate.validate(self.num_qubits)?;
        self.next_id += 1;
        self.gates.push(gate);
        Ok(self.next_id - 1)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn two_qubit_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_two_qubit()).count()
    }

    /// Number of CX/CZ gates once every SWAP is expanded to three CX.
    pub fn cx_equivalent_count(&self) -> usize {
        self.gates
            .iter()
            .map(|g| match g.kind {
                GateKind::Cx | GateKind::Cz => 1,
                GateKind::Swap => 3,
                _ => 0,
            })
            .sum()
    }

    pub fn swap_count(&self) -> usize {
        self.gates.iter().filter(|g| matches!(g.kind, GateKind::Swap)).count()
    }

    /// The same gates over `num_qubits` qubits, which must cover every operand.
    pub fn with_width(&self, num_qubits: usize) -> Result<Circuit> {
        Circuit::from_parts(num_qubits, self.gates.clone())
    }

    /// Gate order reversed, operands untouched, ids preserved.
    pub fn reverse(&self) -> Circuit {
        Circuit {
            num_qubits: self.num_qubits,
            gates: self.gates.iter().rev().cloned().collect(),
            next_id: self.next_id,
        }
    }

    /// Every SWAP(p,q) replaced in place by CX(p,q) CX(q,p) CX(p,q).
    pub fn decompose_swaps(&self) -> Circuit {
        let mut next_id = self.next_id;
        let mut gates = Vec::with_capacity(self.gates.len() + 2 * self.swap_count());
        for g in &self.gates {
            if let GateKind::Swap = g.kind {
                let (p, q) = (g.qubits[0], g.qubits[1]);
                gates.push(Gate {
                    id: g.id,
                    ..Gate::cx(p, q)
                });
                for (c, t) in [(q, p), (p, q)] {
                    gates.push(Gate {
                        id: next_id,
                        ..Gate::cx(c, t)
                    });
                    next_id += 1;
                }
            } else {
                gates.push(g.clone());
            }
        }
        Circuit {
            num_qubits: self.num_qubits,
            gates,
            next_id,
        }
    }

    pub fn strip_barriers(&self) -> Circuit {
        Circuit {
            num_qubits: self.num_qubits,
            gates: self.gates.iter().filter(|g| !g.is_barrier()).cloned().collect(),
            next_id: self.next_id,
        }
    }

    /// The same gates with fresh sequential ids.
    pub fn renumbered(&self) -> Circuit {
        let gates: Vec<Gate> = self
            .gates
            .iter()
            .enumerate()
            .map(|(i, g)| Gate { id: i, ..g.clone() })
            .collect();
        Circuit {
            num_qubits: self.num_qubits,
            next_id: gates.len(),
            gates,
        }
    }

    /// Gates touching each qubit, in program order, as (kind, operands).
    pub fn per_qubit_sequences(&self) -> Vec<Vec<(GateKind, Vec<usize>)>> {
        let mut seqs = vec![Vec::new(); self.num_qubits];
        for g in &self.gates {
            for &q in &g.qubits {
                seqs[q].push((g.kind.clone(), g.qubits.clone()));
            }
        }
        seqs
    }

    pub fn dag(&self) -> Dag {
        Dag::build(self)
    }

    /// Number of front-packed layers, SWAPs counted as three CX.
    pub fn depth(&self) -> usize {
        layers(self).depth()
    }
}

/// Immediate dependencies between gates that share a qubit. Indices refer to
/// positions in [`Circuit::gates`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dag {
    preds: Vec<Vec<usize>>,
    succs: Vec<Vec<usize>>,
}

impl Dag {
    pub fn build(circuit: &Circuit) -> Dag {
        let n = circuit.len();
        let mut preds = vec![Vec::new(); n];
        let mut succs = vec![Vec::new(); n];
        let mut last_on: Vec<Option<usize>> = vec![None; circuit.num_qubits()];
        for (i, g) in circuit.gates().iter().enumerate() {
            for &q in &g.qubits {
                if let Some(p) = last_on[q] {
                    if !preds[i].contains(&p) {
                        preds[i].push(p);
                        succs[p].push(i);
                    }
                }
                last_on[q] = Some(i);
            }
        }
        Dag { preds, succs }
    }

    pub fn len(&self) -> usize {
        self.preds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.preds.is_empty()
    }

    pub fn preds(&self, gate: usize) -> &[usize] {
        &self.preds[gate]
    }

    pub fn succs(&self, gate: usize) -> &[usize] {
        &self.succs[gate]
    }

    /// Gates without predecessors, in program order.
    pub fn roots(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.preds[i].is_empty()).collect()
    }
}

/// Front-packed partition of a circuit into qubit-disjoint layers.
///
/// Indices refer to the gates of the SWAP-decomposed circuit. Barriers are
/// fences only and appear in no layer.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LayerPartition {
    pub layers: Vec<Vec<usize>>,
}

impl LayerPartition {
    pub fn depth(&self) -> usize {
        self.layers.len()
    }
}

/// 1-based layer of every gate (`None` for barriers). SWAPs are treated as a
/// single unit of weight 1 here; [`layers`] decomposes them first.
pub(crate) fn assign_levels(circuit: &Circuit) -> Vec<Option<usize>> {
    let mut frontier = vec![0usize; circuit.num_qubits()];
    circuit
        .gates()
        .iter()
        .map(|g| {
            let start = g.qubits.iter().map(|&q| frontier[q]).max().unwrap_or(0);
            if g.is_barrier() {
                for &q in &g.qubits {
                    frontier[q] = start;
                }
                None
            } else {
                for &q in &g.qubits {
                    frontier[q] = start + 1;
                }
                Some(start + 1)
            }
        })
        .collect()
}

pub fn layers(circuit: &Circuit) -> LayerPartition {
    let flat = circuit.decompose_swaps();
    let levels = assign_levels(&flat);
    let depth = levels.iter().flatten().copied().max().unwrap_or(0);
    let mut layers = vec![Vec::new(); depth];
    for (i, level) in levels.iter().enumerate() {
        if let Some(l) = level {
            layers[l - 1].push(i);
        }
    }
    LayerPartition { layers }
}

pub fn depth(circuit: &Circuit) -> usize {
    layers(circuit).depth()
}
