// SPDX-License-Identifier: Apache-2.0

//! Logical-to-physical qubit assignments.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::arch::ArchGraph;
use crate::error::{Error, Result};

/// Injective map from logical qubits to physical vertices, with its inverse.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mapping {
    to_phys: Vec<usize>,
    to_logical: Vec<Option<usize>>,
}

impl Mapping {
    /// `tau[logical] = physical` over a device with `num_physical` vertices.
    pub fn from_vec(tau: Vec<usize>, num_physical: usize) -> Result<Self> {
        if tau.len() > num_physical {
            return Err(Error::Capacity {
                logical: tau.len(),
                physical: num_physical,
            });
        }
        let mut to_logical = vec![None; num_physical];
        for (q, &v) in tau.iter().enumerate() {
            if v >= num_physical {
                return Err(Error::InvalidMapping(format!(
                    "logical {q} mapped to vertex {v} outside 0..{num_physical}"
                )));
            }
            if let Some(other) = to_logical[v] {
                return Err(Error::InvalidMapping(format!(
                    "logical {other} and {q} both mapped to vertex {v}"
                )));
            }
            to_logical[v] = Some(q);
        }
        Ok(Mapping {
            to_phys: tau,
            to_logical,
        })
    }

    pub fn identity(num_logical: usize, num_physical: usize) -> Result<Self> {
        Mapping::from_vec((0..num_logical).collect(), num_physical)
    }

    pub fn num_logical(&self) -> usize {
        self.to_phys.len()
    }

    pub fn num_physical(&self) -> usize {
        self.to_logical.len()
    }

    #[inline]
    pub fn phys(&self, logical: usize) -> usize {
        self.to_phys[logical]
    }

    #[inline]
    pub fn logical(&self, phys: usize) -> Option<usize> {
        self.to_logical[phys]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.to_phys
    }

    /// Exchanges the occupants of two vertices, which must be adjacent.
    pub fn apply_swap(&mut self, graph: &ArchGraph, a: usize, b: usize) -> Result<()> {
        if !graph.is_edge(a, b) {
            return Err(Error::IllegalSwap(a, b));
        }
        self.swap_vertices(a, b);
        Ok(())
    }

    /// Exchanges the occupants of `a` and `b` without an adjacency check.
    /// Either vertex may be empty.
    pub fn swap_vertices(&mut self, a: usize, b: usize) {
        let (la, lb) = (self.to_logical[a], self.to_logical[b]);
        if let Some(q) = la {
            self.to_phys[q] = b;
        }
        if let Some(q) = lb {
            self.to_phys[q] = a;
        }
        self.to_logical[a] = lb;
        self.to_logical[b] = la;
    }

    /// Checks that the inverse agrees with the forward map.
    pub fn is_consistent(&self) -> bool {
        self.to_phys
            .iter()
            .enumerate()
            .all(|(q, &v)| self.to_logical.get(v) == Some(&Some(q)))
            && self.to_logical.iter().flatten().count() == self.to_phys.len()
    }

    /// Sidecar form: JSON array `tau[logical] = physical`.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_phys).expect("mapping serializes")
    }

    pub fn from_json(text: &str, num_physical: usize) -> Result<Self> {
        let tau: Vec<usize> = serde_json::from_str(text)?;
        Mapping::from_vec(tau, num_physical)
    }
}

/// Uniformly random injection of `num_logical` qubits into the graph's vertices.
pub fn random_mapping(num_logical: usize, graph: &ArchGraph, seed: u64) -> Result<Mapping> {
    let n = graph.num_vertices();
    if num_logical > n {
        return Err(Error::Capacity {
            logical: num_logical,
            physical: n,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut verts: Vec<usize> = (0..n).collect();
    verts.shuffle(&mut rng);
    verts.truncate(num_logical);
    Mapping::from_vec(verts, n)
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::*;
    use crate::samples::{ourense, running_mapping};

    #[test]
    fn swap_on_running_example() {
        let g = ourense();
        let mut m = running_mapping();
        m.apply_swap(&g, 0, 1).unwrap();
        assert_eq!(m.phys(0), 0);
        assert_eq!(m.phys(1), 1);
        assert!(m.is_consistent());
        m.apply_swap(&g, 1, 0).unwrap();
        assert_eq!(m, running_mapping());
        assert!(matches!(m.apply_swap(&g, 1, 3), Err(Error::IllegalSwap(1, 3))));
    }

    #[test]
    fn swap_onto_free_vertex() {
        let g = ourense();
        let mut m = running_mapping();
        m.apply_swap(&g, 3, 4).unwrap();
        assert_eq!(m.phys(3), 4);
        assert_eq!(m.logical(3), None);
        assert_eq!(m.logical(4), Some(3));
        assert!(m.is_consistent());
    }

    #[test]
    fn rejects_non_injective() {
        assert!(Mapping::from_vec(vec![0, 0], 3).is_err());
        assert!(Mapping::from_vec(vec![0, 5], 3).is_err());
        assert!(matches!(
            Mapping::from_vec(vec![0, 1, 2, 3], 3),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn random_is_seeded() {
        let g = ArchGraph::builtin("tokyo20").unwrap();
        assert_eq!(random_mapping(7, &g, 42).unwrap(), random_mapping(7, &g, 42).unwrap());
        let full = random_mapping(20, &g, 3).unwrap();
        let mut img = full.as_slice().to_vec();
        img.sort_unstable();
        assert_eq!(img, (0..20).collect::<Vec<_>>());
        assert!(matches!(random_mapping(21, &g, 0), Err(Error::Capacity { .. })));
    }

    #[test]
    fn random_covers_all_injections_on_line3() {
        let g = ArchGraph::builtin("line-3").unwrap();
        let seen: HashSet<Vec<usize>> = (0..1000)
            .map(|s| random_mapping(2, &g, s).unwrap().as_slice().to_vec())
            .collect();
        // 3 * 2 ordered pairs of distinct vertices
        assert_eq!(seen.len(), 6);
    }

    #[test]
    fn json_sidecar() {
        let m = running_mapping();
        assert_eq!(m.to_json(), "[1,0,2,3]");
        assert_eq!(Mapping::from_json("[1,0,2,3]", 5).unwrap(), m);
    }
}
