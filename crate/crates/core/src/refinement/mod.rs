//! Joint color refinement over a list of graphs, and signature-level comparisons.

mod algos;
mod compare;
mod engine;
mod spec;

use std::sync::atomic::{AtomicU64, Ordering};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::spectral::Precision;

pub use compare::{compare_partitions, compare_partitions_with, compare_runs, ComparisonReport, Relation};
pub use spec::{AlgorithmSpec, PairInit, DEFAULT_BASISNET_LAYERS, DEFAULT_GIRT_K};

static NEXT_RUN: AtomicU64 = AtomicU64::new(1);

/// Pooled stable coloring of one graph. Only meaningful next to signatures of the
/// same run.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Signature {
    run: u64,
    id: u32,
}

impl Signature {
    pub fn run_id(&self) -> u64 {
        self.run
    }

    /// Dense id within the run, in first-seen graph order.
    pub fn id(&self) -> u32 {
        self.id
    }

    pub fn try_eq(&self, other: &Signature) -> Result<bool> {
        if self.run != other.run {
            return Err(Error::usage(format!(
                "signatures from runs {} and {} are not comparable",
                self.run, other.run
            )));
        }
        Ok(self.id == other.id)
    }
}

/// Result of one joint refinement.
#[derive(Clone, Debug)]
pub struct Run {
    id: u64,
    spec: AlgorithmSpec,
    signatures: Vec<Signature>,
    node_colors: Option<Vec<Vec<u32>>>,
    pair_colors: Option<Vec<Vec<u32>>>,
    rounds: usize,
}

impl Run {
    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn spec(&self) -> &AlgorithmSpec {
        &self.spec
    }

    pub fn len(&self) -> usize {
        self.signatures.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signatures.is_empty()
    }

    pub fn signature(&self, i: usize) -> Signature {
        self.signatures[i]
    }

    pub fn signatures(&self) -> &[Signature] {
        &self.signatures
    }

    /// Number of rounds that split some color class.
    pub fn rounds(&self) -> usize {
        self.rounds
    }

    /// Stable node colors of graph `i` (node-domain algorithms and pipelines ending in WL).
    pub fn node_colors(&self, i: usize) -> Option<&[u32]> {
        self.node_colors.as_ref().map(|c| c[i].as_slice())
    }

    /// Stable pair colors of graph `i`, row-major (pair-domain algorithms).
    pub fn pair_colors(&self, i: usize) -> Option<&[u32]> {
        self.pair_colors.as_ref().map(|c| c[i].as_slice())
    }

    /// Graph indices grouped by equal signature, groups ordered by first member.
    pub fn buckets(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = Vec::new();
        for (i, s) in self.signatures.iter().enumerate() {
            let b = s.id as usize;
            if b == out.len() {
                out.push(Vec::new());
            }
            out[b].push(i);
        }
        out
    }
}

pub fn stable_coloring(spec: &AlgorithmSpec, graphs: &[Graph]) -> Result<Run> {
    stable_coloring_with(spec, graphs, &Precision::default())
}

pub fn stable_coloring_with(spec: &AlgorithmSpec, graphs: &[Graph], prec: &Precision) -> Result<Run> {
    let out = algos::run(spec, graphs, prec)?;
    let id = NEXT_RUN.fetch_add(1, Ordering::Relaxed);
    let mut table = engine::Interner::new();
    let signatures = out.signature_keys.iter().map(|k| Signature { run: id, id: table.intern(k) }).collect();
    Ok(Run {
        id,
        spec: spec.clone(),
        signatures,
        node_colors: out.node_colors,
        pair_colors: out.pair_colors,
        rounds: out.rounds,
    })
}

pub fn distinguishes(spec: &AlgorithmSpec, g: &Graph, h: &Graph) -> Result<bool> {
    distinguishes_with(spec, g, h, &Precision::default())
}

pub fn distinguishes_with(spec: &AlgorithmSpec, g: &Graph, h: &Graph, prec: &Precision) -> Result<bool> {
    let run = stable_coloring_with(spec, &[g.clone(), h.clone()], prec)?;
    Ok(!run.signature(0).try_eq(&run.signature(1))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{disjoint_union, MatrixKind};

    fn c6_2c3() -> (Graph, Graph) {
        (Graph::cycle(6), disjoint_union(&Graph::cycle(3), &Graph::cycle(3)))
    }

    #[test]
    fn wl1_is_constant_on_complete_graphs() {
        let run = stable_coloring(&AlgorithmSpec::Wl1, &[Graph::complete(5)]).unwrap();
        let c = run.node_colors(0).unwrap();
        assert!(c.iter().all(|&x| x == c[0]));
    }

    #[test]
    fn wl1_splits_star_center() {
        let run = stable_coloring(&AlgorithmSpec::Wl1, &[Graph::star(3)]).unwrap();
        let c = run.node_colors(0).unwrap();
        assert_ne!(c[0], c[1]);
        assert_eq!(c[1], c[2]);
        assert_eq!(c[2], c[3]);
        assert_eq!(run.rounds(), 1);
    }

    #[test]
    fn pswl_on_triangle_has_two_pair_classes() {
        let run = stable_coloring(&AlgorithmSpec::Pswl, &[Graph::complete(3)]).unwrap();
        let c = run.pair_colors(0).unwrap();
        let mut classes = c.to_vec();
        classes.sort_unstable();
        classes.dedup();
        assert_eq!(classes.len(), 2);
        assert_eq!(c[0], c[4]);
        assert_ne!(c[0], c[1]);
    }

    #[test]
    fn c6_versus_two_triangles() {
        let (g, h) = c6_2c3();
        assert!(!distinguishes(&AlgorithmSpec::Wl1, &g, &h).unwrap());
        assert!(distinguishes(&AlgorithmSpec::Epwl(MatrixKind::Adjacency), &g, &h).unwrap());
        let run = stable_coloring(&AlgorithmSpec::Epwl(MatrixKind::Adjacency), &[g, h]).unwrap();
        let a = run.node_colors(0).unwrap();
        let b = run.node_colors(1).unwrap();
        assert!(a.iter().all(|x| !b.contains(x)));
    }

    #[test]
    fn isomorphic_copies_share_signatures_for_every_spec() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2)]).unwrap();
        let h = g.permute(&[3, 0, 4, 1, 2]);
        for spec in AlgorithmSpec::catalogue() {
            assert!(!distinguishes(&spec, &g, &h).unwrap(), "{spec}");
        }
    }

    #[test]
    fn signatures_do_not_compare_across_runs() {
        let a = stable_coloring(&AlgorithmSpec::Wl1, &[Graph::complete(2)]).unwrap();
        let b = stable_coloring(&AlgorithmSpec::Wl1, &[Graph::complete(2)]).unwrap();
        assert!(matches!(a.signature(0).try_eq(&b.signature(0)), Err(Error::Usage(_))));
        assert!(a.signature(0).try_eq(&a.signature(0)).unwrap());
    }

    #[test]
    fn spectral_ign_domain_on_k2() {
        // K2 adjacency spectrum {-1, 1}: 2 x 4 domain elements
        let run = stable_coloring(&AlgorithmSpec::SpectralIgn(MatrixKind::Adjacency), &[Graph::complete(2)]).unwrap();
        assert_eq!(run.len(), 1);
    }

    #[test]
    fn isolated_vertices_are_rejected_for_lhat() {
        let r = stable_coloring(&AlgorithmSpec::Epwl(MatrixKind::NormalizedLaplacian), &[Graph::empty(2)]);
        assert!(matches!(r, Err(Error::Domain(_))));
    }

    #[test]
    fn buckets_group_equal_signatures() {
        let (g, h) = c6_2c3();
        let run = stable_coloring(&AlgorithmSpec::Wl1, &[g.clone(), Graph::path(3), h]).unwrap();
        assert_eq!(run.buckets(), vec![vec![0, 2], vec![1]]);
    }
}
