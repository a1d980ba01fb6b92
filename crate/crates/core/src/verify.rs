// SPDX-License-Identifier: Apache-2.0

//! Checks on routed circuits: every 2-qubit gate on a coupling edge, the
//! routed gates replaying the source under the evolving mapping, and (for
//! small circuits) statevector equivalence.

use std::collections::BTreeSet;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arch::ArchGraph;
use crate::circuit::{Circuit, Gate, GateKind};
use crate::error::{Error, Result};
use crate::mapping::Mapping;
use crate::qasm::eval_param;

/// Largest number of qubits the statevector check will simulate.
pub const MAX_UNITARY_QUBITS: usize = 10;
pub const UNITARY_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_TRIAL_STATES: usize = 8;

pub type Matrix2 = [[Complex64; 2]; 2];

/// Resolves a single-qubit gate (name, parameter text) to a matrix, or `None`
/// if it does not know the gate.
pub type GateBinding<'a> = &'a dyn Fn(&str, &[String]) -> Option<Matrix2>;

#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceReport {
    pub connectivity_ok: bool,
    pub structural_ok: bool,
    /// `None` when the statevector check was not run.
    pub unitary_ok: Option<bool>,
    pub max_deviation: f64,
    /// First offending gate, from whichever check failed first.
    pub witness: Option<Gate>,
    /// Mapping after replaying the routed circuit, if the replay succeeded.
    pub final_mapping: Option<Mapping>,
}

impl EquivalenceReport {
    pub fn ok(&self) -> bool {
        self.connectivity_ok && self.structural_ok && self.unitary_ok != Some(false)
    }
}

/// First 2-qubit gate whose operands are not adjacent, if any.
pub fn check_connectivity(circuit: &Circuit, graph: &ArchGraph) -> Option<Gate> {
    circuit
        .gates()
        .iter()
        .find(|g| {
            g.is_two_qubit()
                && (g.qubits.iter().any(|&v| v >= graph.num_vertices()) || !graph.is_edge(g.qubits[0], g.qubits[1]))
        })
        .cloned()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuralCheck {
    pub ok: bool,
    pub final_mapping: Mapping,
    /// The routed gate that did not match, or the first source gate never
    /// produced.
    pub witness: Option<Gate>,
}

/// Replays `routed` (with SWAPs as `Swap` gates) from `initial`, mapping each
/// non-SWAP gate back to logical qubits. The result must be a topological
/// order of the source DAG with identical gates.
pub fn check_structural(source: &Circuit, routed: &Circuit, initial: &Mapping) -> StructuralCheck {
    let source = source.strip_barriers();
    let dag = source.dag();
    let mut remaining: Vec<usize> = (0..dag.len()).map(|i| dag.preds(i).len()).collect();
    let mut front_on: Vec<Option<usize>> = vec![None; source.num_qubits()];
    for r in dag.roots() {
        for &q in &source.gates()[r].qubits {
            front_on[q] = Some(r);
        }
    }
    let mut mapping = initial.clone();
    let mut done = 0;
    let mut executed = vec![false; source.len()];
    let fail = |mapping: Mapping, g: &Gate| StructuralCheck {
        ok: false,
        final_mapping: mapping,
        witness: Some(g.clone()),
    };

    for g in routed.gates() {
        if g.qubits.iter().any(|&v| v >= mapping.num_physical()) {
            return fail(mapping, g);
        }
        match g.kind {
            GateKind::Barrier => continue,
            GateKind::Swap => {
                mapping.swap_vertices(g.qubits[0], g.qubits[1]);
                continue;
            }
            _ => {}
        }
        let logical: Option<Vec<usize>> = g.qubits.iter().map(|&v| mapping.logical(v)).collect();
        let Some(logical) = logical else {
            return fail(mapping, g);
        };
        let Some(pos) = front_on[logical[0]] else {
            return fail(mapping, g);
        };
        let expected = &source.gates()[pos];
        if expected.kind != g.kind || expected.qubits != logical {
            return fail(mapping, g);
        }
        for &q in &expected.qubits {
            front_on[q] = None;
        }
        done += 1;
        executed[pos] = true;
        for &s in dag.succs(pos) {
            remaining[s] -= 1;
            if remaining[s] == 0 {
                for &q in &source.gates()[s].qubits {
                    front_on[q] = Some(s);
                }
            }
        }
    }
    if done != source.len() {
        let missing = (0..source.len())
            .find(|&i| !executed[i])
            .map(|i| source.gates()[i].clone());
        return StructuralCheck {
            ok: false,
            final_mapping: mapping,
            witness: missing,
        };
    }
    StructuralCheck {
        ok: true,
        final_mapping: mapping,
        witness: None,
    }
}

/// Rewrites every run `CX(a,b) CX(b,a) CX(a,b)` of consecutive gates into `SWAP(a,b)`.
pub fn recover_swaps(circuit: &Circuit) -> Circuit {
    let gates = circuit.gates();
    let mut out = Vec::with_capacity(gates.len());
    let mut i = 0;
    while i < gates.len() {
        if i + 2 < gates.len() {
            let (x, y, z) = (&gates[i], &gates[i + 1], &gates[i + 2]);
            if matches!((&x.kind, &y.kind, &z.kind), (GateKind::Cx, GateKind::Cx, GateKind::Cx))
                && y.qubits == [x.qubits[1], x.qubits[0]]
                && z.qubits == x.qubits
            {
                out.push(Gate {
                    id: x.id,
                    ..Gate::swap(x.qubits[0], x.qubits[1])
                });
                i += 3;
                continue;
            }
        }
        out.push(gates[i].clone());
        i += 1;
    }
    Circuit::from_parts(circuit.num_qubits(), out).expect("same qubits as the input")
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn params_f64(params: &[String]) -> Result<Vec<f64>> {
    params.iter().map(|p| eval_param(p)).collect()
}

fn u3(theta: f64, phi: f64, lambda: f64) -> Matrix2 {
    let (cs, sn) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    [
        [c(cs, 0.0), -Complex64::from_polar(sn, lambda)],
        [Complex64::from_polar(sn, phi), Complex64::from_polar(cs, phi + lambda)],
    ]
}

fn phase(lambda: f64) -> Matrix2 {
    [
        [c(1.0, 0.0), c(0.0, 0.0)],
        [c(0.0, 0.0), Complex64::from_polar(1.0, lambda)],
    ]
}

/// Matrices of the usual `qelib1.inc` single-qubit gates. `Ok(None)` for any
/// other name.
pub fn standard_gate(name: &str, params: &[String]) -> Result<Option<Matrix2>> {
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4};
    let p = params_f64(params)?;
    let want = |n: usize| -> Result<()> {
        if p.len() == n {
            Ok(())
        } else {
            Err(Error::Config(format!(
                "`{name}` takes {n} parameter(s), {} given",
                p.len()
            )))
        }
    };
    let (o, z) = (c(1.0, 0.0), c(0.0, 0.0));
    let m = match name {
        "id" => {
            want(0)?;
            [[o, z], [z, o]]
        }
        "x" => {
            want(0)?;
            [[z, o], [o, z]]
        }
        "y" => {
            want(0)?;
            [[z, c(0.0, -1.0)], [c(0.0, 1.0), z]]
        }
        "z" => {
            want(0)?;
            phase(std::f64::consts::PI)
        }
        "h" => {
            want(0)?;
            let h = c(FRAC_1_SQRT_2, 0.0);
            [[h, h], [h, -h]]
        }
        "s" => {
            want(0)?;
            phase(FRAC_PI_2)
        }
        "sdg" => {
            want(0)?;
            phase(-FRAC_PI_2)
        }
        "t" => {
            want(0)?;
            phase(FRAC_PI_4)
        }
        "tdg" => {
            want(0)?;
            phase(-FRAC_PI_4)
        }
        "sx" | "sxdg" => {
            want(0)?;
            let s = if name == "sx" { 1.0 } else { -1.0 };
            [[c(0.5, 0.5 * s), c(0.5, -0.5 * s)], [c(0.5, -0.5 * s), c(0.5, 0.5 * s)]]
        }
        "rx" => {
            want(1)?;
            let (cs, sn) = ((p[0] / 2.0).cos(), (p[0] / 2.0).sin());
            [[c(cs, 0.0), c(0.0, -sn)], [c(0.0, -sn), c(cs, 0.0)]]
        }
        "ry" => {
            want(1)?;
            let (cs, sn) = ((p[0] / 2.0).cos(), (p[0] / 2.0).sin());
            [[c(cs, 0.0), c(-sn, 0.0)], [c(sn, 0.0), c(cs, 0.0)]]
        }
        "rz" => {
            want(1)?;
            [
                [Complex64::from_polar(1.0, -p[0] / 2.0), z],
                [z, Complex64::from_polar(1.0, p[0] / 2.0)],
            ]
        }
        "p" | "u1" => {
            want(1)?;
            phase(p[0])
        }
        "u2" => {
            want(2)?;
            u3(FRAC_PI_2, p[0], p[1])
        }
        "u3" | "u" | "U" => {
            want(3)?;
            u3(p[0], p[1], p[2])
        }
        _ => return Ok(None),
    };
    Ok(Some(m))
}

/// Dense statevector over `n` qubits; qubit `i` is bit `i` of the index.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    pub amps: Vec<Complex64>,
}

impl StateVector {
    pub fn random(n: usize, rng: &mut impl Rng) -> Self {
        let mut amps: Vec<Complex64> = (0..1usize << n)
            .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        amps.iter_mut().for_each(|a| *a /= norm);
        StateVector { amps }
    }

    pub fn apply_one(&mut self, m: &Matrix2, q: usize) {
        let bit = 1 << q;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let (a, b) = (self.amps[i], self.amps[i | bit]);
                self.amps[i] = m[0][0] * a + m[0][1] * b;
                self.amps[i | bit] = m[1][0] * a + m[1][1] * b;
            }
        }
    }

    pub fn apply_cx(&mut self, ctrl: usize, tgt: usize) {
        let (cb, tb) = (1 << ctrl, 1 << tgt);
        for i in 0..self.amps.len() {
            if i & cb != 0 && i & tb == 0 {
                self.amps.swap(i, i | tb);
            }
        }
    }

    pub fn apply_cz(&mut self, a: usize, b: usize) {
        let mask = (1 << a) | (1 << b);
        for (i, amp) in self.amps.iter_mut().enumerate() {
            if i & mask == mask {
                *amp = -*amp;
            }
        }
    }

    pub fn apply_swap(&mut self, a: usize, b: usize) {
        let (ab, bb) = (1 << a, 1 << b);
        for i in 0..self.amps.len() {
            if i & ab != 0 && i & bb == 0 {
                self.amps.swap(i, (i & !ab) | bb);
            }
        }
    }
}

/// Applies `gates`, relabelling each operand through `wire`.
fn run(
    state: &mut StateVector,
    gates: &[Gate],
    wire: &dyn Fn(usize) -> usize,
    resolve: &dyn Fn(&str, &[String]) -> Result<Matrix2>,
) -> Result<()> {
    for g in gates {
        let q: Vec<usize> = g.qubits.iter().map(|&x| wire(x)).collect();
        match &g.kind {
            GateKind::OneQubit { name, params } => state.apply_one(&resolve(name, params)?, q[0]),
            GateKind::Cx => state.apply_cx(q[0], q[1]),
            GateKind::Cz => state.apply_cz(q[0], q[1]),
            GateKind::Swap => state.apply_swap(q[0], q[1]),
            GateKind::Barrier => {}
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitaryCheck {
    pub ok: bool,
    pub max_deviation: f64,
}

/// Runs `source` and `routed` on `trials` random states and compares them up
/// to one global phase. Physical qubits that `routed` touches, plus the
/// images of both mappings, are simulated; vertices free at the start are
/// initialised to |0> and must be |0> again at the end.
///
/// `binding` is consulted before the standard gate set.
pub fn check_unitary(
    source: &Circuit,
    routed: &Circuit,
    initial: &Mapping,
    final_mapping: &Mapping,
    binding: Option<GateBinding<'_>>,
    trials: usize,
) -> Result<UnitaryCheck> {
    let mut used: BTreeSet<usize> = initial.as_slice().iter().copied().collect();
    used.extend(final_mapping.as_slice().iter().copied());
    for g in routed.gates() {
        used.extend(g.qubits.iter().copied());
    }
    if used.len() > MAX_UNITARY_QUBITS {
        return Err(Error::Config(format!(
            "statevector check limited to {MAX_UNITARY_QUBITS} qubits, {} needed",
            used.len()
        )));
    }
    let mut compact = vec![usize::MAX; used.iter().max().map_or(0, |m| m + 1)];
    for (i, &v) in used.iter().enumerate() {
        compact[v] = i;
    }
    let n = source.num_qubits();
    let width = used.len();
    let resolve = |name: &str, params: &[String]| -> Result<Matrix2> {
        if let Some(m) = binding.and_then(|b| b(name, params)) {
            return Ok(m);
        }
        standard_gate(name, params)?.ok_or_else(|| Error::Config(format!("no matrix bound for gate `{name}`")))
    };
    let embed = |state: &StateVector, mapping: &Mapping| -> StateVector {
        let mut out = vec![c(0.0, 0.0); 1 << width];
        for (x, &amp) in state.amps.iter().enumerate() {
            let y = (0..n)
                .filter(|q| x >> q & 1 == 1)
                .fold(0, |acc, q| acc | 1 << compact[mapping.phys(q)]);
            out[y] = amp;
        }
        StateVector { amps: out }
    };

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut global: Option<Complex64> = None;
    let mut max_dev: f64 = 0.0;
    for _ in 0..trials.max(1) {
        let input = StateVector::random(n, &mut rng);
        let mut expected = input.clone();
        run(&mut expected, source.gates(), &|q| q, &resolve)?;
        let expected = embed(&expected, final_mapping);
        let mut actual = embed(&input, initial);
        run(&mut actual, routed.gates(), &|v| compact[v], &resolve)?;

        let phase = *global.get_or_insert_with(|| {
            let overlap: Complex64 = expected.amps.iter().zip(&actual.amps).map(|(e, a)| e.conj() * a).sum();
            if overlap.norm() > 1e-12 {
                overlap / overlap.norm()
            } else {
                c(1.0, 0.0)
            }
        });
        let dev = expected
            .amps
            .iter()
            .zip(&actual.amps)
            .map(|(e, a)| (a - phase * e).norm())
            .fold(0.0, f64::max);
        max_dev = max_dev.max(dev);
    }
    Ok(UnitaryCheck {
        ok: max_dev < UNITARY_TOLERANCE,
        max_deviation: max_dev,
    })
}

/// Full check of one routing result.
///
/// `swap_form` is the router's circuit with SWAPs intact; it is used for the
/// structural replay. `output` is what is actually delivered (possibly
/// SWAP-decomposed and optimised) and is checked for connectivity and, when
/// `unitary` is set, simulated.
pub fn verify(
    source: &Circuit,
    swap_form: &Circuit,
    output: &Circuit,
    graph: &ArchGraph,
    initial: &Mapping,
    unitary: Option<GateBinding<'_>>,
    run_unitary: bool,
) -> Result<EquivalenceReport> {
    let bad_edge = check_connectivity(output, graph).or_else(|| check_connectivity(swap_form, graph));
    let structural = check_structural(source, swap_form, initial);
    let mut report = EquivalenceReport {
        connectivity_ok: bad_edge.is_none(),
        structural_ok: structural.ok,
        unitary_ok: None,
        max_deviation: 0.0,
        witness: bad_edge.or(structural.witness),
        final_mapping: structural.ok.then(|| structural.final_mapping.clone()),
    };
    if run_unitary {
        let u = check_unitary(
            source,
            output,
            initial,
            &structural.final_mapping,
            unitary,
            DEFAULT_TRIAL_STATES,
        )?;
        report.unitary_ok = Some(u.ok);
        report.max_deviation = u.max_deviation;
    }
    Ok(report)
}

/// Binds `W`, `Ui` and `Vi` (as used by the bundled example circuit) to
/// distinct non-commuting gates: `W` and `Vi` to powers of T, `Ui` to
/// rotations about X. Other names fall through.
pub fn sample_binding(name: &str, _params: &[String]) -> Option<Matrix2> {
    let index = |prefix: char| -> Option<f64> { name.strip_prefix(prefix)?.parse::<u32>().ok().map(f64::from) };
    if name == "W" {
        return Some(phase(std::f64::consts::FRAC_PI_4 * 3.0));
    }
    if let Some(i) = index('V') {
        return Some(phase(std::f64::consts::FRAC_PI_4 * i));
    }
    if let Some(i) = index('U') {
        return Some(u3(0.3 * i, 0.0, 0.0));
    }
    None
}
