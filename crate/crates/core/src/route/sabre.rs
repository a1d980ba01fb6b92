// SPDX-License-Identifier: Apache-2.0

//! Greedy baseline: every executable gate runs immediately; when the front
//! layer is blocked the best-scoring SWAP is inserted.

use super::heuristic::HeuristicConfig;
use super::state::RouterState;
use super::{RoutedCircuit, Router};
use crate::arch::ArchGraph;
use crate::circuit::{Circuit, Gate};
use crate::error::Result;
use crate::mapping::Mapping;
use crate::scalar::Scalar;

#[derive(Debug, Clone)]
pub struct SabreRouter<T> {
    pub config: HeuristicConfig<T>,
}

impl<T: Scalar> Default for SabreRouter<T> {
    fn default() -> Self {
        SabreRouter::new(HeuristicConfig::default())
    }
}

impl<T: Scalar> SabreRouter<T> {
    pub fn new(config: HeuristicConfig<T>) -> Self {
        SabreRouter { config }
    }
}

impl<T: Scalar> Router for SabreRouter<T> {
    fn route_with_seed(
        &self,
        circuit: &Circuit,
        graph: &ArchGraph,
        initial: &Mapping,
        seed: u64,
    ) -> Result<RoutedCircuit> {
        self.config.validate()?;
        let circuit = circuit.strip_barriers();
        let mut st = RouterState::<T>::new(&circuit, graph, initial, seed)?;

        while !st.front.is_empty() {
            st.steps += 1;
            let ready = st.executable();
            if !ready.is_empty() {
                for g in ready {
                    st.emit(g);
                    st.complete(g);
                }
                st.progress_made();
                continue;
            }
            if st.is_stalled() {
                for edge in st.forced_path() {
                    insert_swap(&mut st, edge, &self.config);
                }
                continue;
            }
            let edge = st.select_swap(&self.config, |_| T::zero())?;
            insert_swap(&mut st, edge, &self.config);
        }

        let (out, final_mapping, swaps, steps) = st.into_output()?;
        Ok(RoutedCircuit {
            circuit: out,
            initial: initial.clone(),
            final_mapping,
            swaps,
            steps,
        })
    }

    fn seed(&self) -> u64 {
        self.config.seed
    }
}

fn insert_swap<T: Scalar>(st: &mut RouterState<'_, T>, edge: (usize, usize), config: &HeuristicConfig<T>) {
    st.emit_physical(Gate::swap(edge.0, edge.1));
    st.mapping.swap_vertices(edge.0, edge.1);
    st.note_swap(edge, config);
}

#[cfg(test)]
mod tests {
    use num_rational::Rational64;

    use super::*;
    use crate::samples::{ourense, running_example, running_mapping};

    fn run(k: usize, prefer: (usize, usize)) -> RoutedCircuit {
        let cfg = HeuristicConfig::<Rational64>::default().prefer(&[prefer]);
        SabreRouter::new(cfg)
            .route(&running_example(k), &ourense(), &running_mapping())
            .unwrap()
    }

    #[test]
    fn running_example_depth_15_either_tie() {
        for edge in [(0, 1), (0, 3)] {
            let r = run(4, edge);
            assert_eq!(r.swaps, 1);
            assert_eq!(r.depth(), 15, "tie {edge:?}");
        }
    }

    #[test]
    fn sabre_gate_order_on_running_example() {
        let r = run(4, (0, 1));
        let text: Vec<String> = r.circuit.gates().iter().take(9).map(|g| g.to_string()).collect();
        assert_eq!(
            text,
            ["cx 1,0", "W 1", "cx 0,3", "cx 0,2", "U1 0", "U2 0", "U3 0", "U4 0", "swap 0,1"]
        );
        assert_eq!(r.final_mapping.as_slice(), &[0, 1, 2, 3]);
    }

    #[test]
    fn adjacent_circuit_needs_no_swaps() {
        let c = Circuit::with_gates(4, [Gate::cx(0, 1), Gate::one("h", 2), Gate::cx(1, 2), Gate::cx(1, 0)]).unwrap();
        let r = SabreRouter::<f64>::default()
            .route(&c, &ourense(), &running_mapping())
            .unwrap();
        assert_eq!(r.swaps, 0);
        assert_eq!(r.depth(), c.depth());
    }

    #[test]
    fn deterministic_for_seed() {
        let g = ArchGraph::builtin("grid-3x3").unwrap();
        let c = crate::bench::random_circuit(9, 80, &["h", "t", "x"], 11);
        let m = crate::mapping::random_mapping(9, &g, 5).unwrap();
        let router = SabreRouter::<f64>::default();
        let a = router.route_with_seed(&c, &g, &m, 7).unwrap();
        let b = router.route_with_seed(&c, &g, &m, 7).unwrap();
        assert_eq!(a, b);
    }
}
