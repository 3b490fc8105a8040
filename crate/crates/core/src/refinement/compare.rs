use serde::Serialize;

use super::{stable_coloring_with, AlgorithmSpec, Run};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::spectral::Precision;

pub const WITNESS_CAP: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Relation {
    Equivalent,
    /// A refines B, not conversely.
    Finer,
    /// B refines A, not conversely.
    Coarser,
    Incomparable,
}

#[derive(Clone, Debug, Serialize)]
pub struct ComparisonReport {
    pub spec_a: String,
    pub spec_b: String,
    pub graphs: usize,
    pub classes_a: usize,
    pub classes_b: usize,
    pub relation: Relation,
    pub a_refines_b: bool,
    pub b_refines_a: bool,
    /// Graphs equal under A but split by B, counted per class member.
    pub violations_a_to_b: usize,
    pub violations_b_to_a: usize,
    /// (i, j) with A(i) = A(j) but B(i) != B(j), at most `WITNESS_CAP`.
    pub witnesses_a_to_b: Vec<(usize, usize)>,
    pub witnesses_b_to_a: Vec<(usize, usize)>,
}

/// Members of each `x` class whose `y` signature differs from the class's first member.
fn violations(x: &Run, y: &Run) -> (usize, Vec<(usize, usize)>) {
    let mut count = 0;
    let mut wit = Vec::new();
    for class in x.buckets() {
        let rep = class[0];
        for &i in &class[1..] {
            if y.signature(i).id() != y.signature(rep).id() {
                count += 1;
                if wit.len() < WITNESS_CAP {
                    wit.push((rep, i));
                }
            }
        }
    }
    (count, wit)
}

/// Compares two runs over the same graph list.
pub fn compare_runs(a: &Run, b: &Run) -> Result<ComparisonReport> {
    if a.len() != b.len() {
        return Err(Error::usage("runs cover different numbers of graphs"));
    }
    let (va, wa) = violations(a, b);
    let (vb, wb) = violations(b, a);
    let relation = match (va == 0, vb == 0) {
        (true, true) => Relation::Equivalent,
        (true, false) => Relation::Finer,
        (false, true) => Relation::Coarser,
        (false, false) => Relation::Incomparable,
    };
    Ok(ComparisonReport {
        spec_a: a.spec().to_string(),
        spec_b: b.spec().to_string(),
        graphs: a.len(),
        classes_a: a.buckets().len(),
        classes_b: b.buckets().len(),
        relation,
        a_refines_b: va == 0,
        b_refines_a: vb == 0,
        violations_a_to_b: va,
        violations_b_to_a: vb,
        witnesses_a_to_b: wa,
        witnesses_b_to_a: wb,
    })
}

pub fn compare_partitions(a: &AlgorithmSpec, b: &AlgorithmSpec, corpus: &[Graph]) -> Result<ComparisonReport> {
    compare_partitions_with(a, b, corpus, &Precision::default())
}

pub fn compare_partitions_with(
    a: &AlgorithmSpec,
    b: &AlgorithmSpec,
    corpus: &[Graph],
    prec: &Precision,
) -> Result<ComparisonReport> {
    if corpus.is_empty() {
        return Err(Error::usage("comparison needs a nonempty corpus"));
    }
    let (ra, rb) = rayon::join(|| stable_coloring_with(a, corpus, prec), || stable_coloring_with(b, corpus, prec));
    compare_runs(&ra?, &rb?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{disjoint_union, MatrixKind};

    fn corpus() -> Vec<Graph> {
        vec![
            Graph::cycle(6),
            disjoint_union(&Graph::cycle(3), &Graph::cycle(3)),
            Graph::path(6),
            Graph::complete(4),
            Graph::star(3),
        ]
    }

    #[test]
    fn spec_against_itself_is_equivalent() {
        let r = compare_partitions(&AlgorithmSpec::Wl1, &AlgorithmSpec::Wl1, &corpus()).unwrap();
        assert_eq!(r.relation, Relation::Equivalent);
    }

    #[test]
    fn epwl_strictly_finer_than_wl1_here() {
        let r = compare_partitions(&AlgorithmSpec::Epwl(MatrixKind::Adjacency), &AlgorithmSpec::Wl1, &corpus()).unwrap();
        assert_eq!(r.relation, Relation::Finer);
        assert_eq!(r.witnesses_b_to_a, vec![(0, 1)]);
    }

    #[test]
    fn empty_corpus_is_a_usage_error() {
        assert!(compare_partitions(&AlgorithmSpec::Wl1, &AlgorithmSpec::Swl, &[]).is_err());
    }
}
