//! k-th symmetric powers (token graphs) and their spectral tokens.

use crate::error::{Error, Result};
use crate::graph::{Graph, MatrixKind};
use crate::spectral::{decompose_graph, PairToken, Precision, SpectrumToken};

pub const MAX_TOKEN_VERTICES: usize = 5000;

#[derive(Clone, Debug)]
pub struct TokenGraph {
    base: Graph,
    k: usize,
    /// k-subsets in lexicographic order; position = product vertex id.
    subsets: Vec<Vec<usize>>,
    product: Graph,
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] != i + n - k) else { break };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
    out
}

/// Vertices are the k-subsets of V; S1 ~ S2 iff their symmetric difference is an edge.
pub fn token_graph(g: &Graph, k: usize) -> Result<TokenGraph> {
    let n = g.n();
    if k == 0 || k >= n {
        return Err(Error::domain(format!("token graph order must satisfy 1 <= k < n, got k={k}, n={n}")));
    }
    let size = binomial(n, k);
    if size > MAX_TOKEN_VERTICES {
        return Err(Error::domain(format!(
            "token graph would have {size} vertices (limit {MAX_TOKEN_VERTICES}); use a smaller k or base"
        )));
    }
    let subsets = k_subsets(n, k);
    let mut edges = Vec::new();
    // neighbors of S: replace one a in S by b outside S with ab an edge
    for (i, s) in subsets.iter().enumerate() {
        for (pos, &a) in s.iter().enumerate() {
            for b in g.neighbors(a).filter(|b| !s.contains(b)) {
                let mut t = s.clone();
                t[pos] = b;
                t.sort_unstable();
                let j = subsets.binary_search(&t).expect("k-subset");
                if i < j {
                    edges.push((i, j));
                }
            }
        }
    }
    let product = Graph::from_edges(subsets.len(), &edges)?;
    Ok(TokenGraph { base: g.clone(), k, subsets, product })
}

impl TokenGraph {
    pub fn base(&self) -> &Graph {
        &self.base
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn product(&self) -> &Graph {
        &self.product
    }

    pub fn subset(&self, id: usize) -> &[usize] {
        &self.subsets[id]
    }

    /// Product vertex of a tuple read as a set; repeated vertices are rejected.
    pub fn index_of(&self, tuple: &[usize]) -> Result<usize> {
        let mut s = tuple.to_vec();
        s.sort_unstable();
        s.dedup();
        if s.len() != tuple.len() || s.len() != self.k {
            return Err(Error::domain(format!("tuple {tuple:?} is not a set of {} distinct vertices", self.k)));
        }
        self.subsets
            .binary_search(&s)
            .map_err(|_| Error::domain(format!("tuple {tuple:?} has vertices outside the base graph")))
    }
}

pub fn token_spectrum(g: &Graph, k: usize, kind: MatrixKind) -> Result<SpectrumToken> {
    token_spectrum_with(g, k, kind, &Precision::default())
}

pub fn token_spectrum_with(g: &Graph, k: usize, kind: MatrixKind, prec: &Precision) -> Result<SpectrumToken> {
    let t = token_graph(g, k)?;
    Ok(SpectrumToken::from_decomposition(&decompose_graph(&t.product, kind, prec)?, prec))
}

/// Projection invariant of the token graph at the product vertices {u_1..u_k}, {v_1..v_k}.
pub fn token_projection_entry(g: &Graph, k: usize, kind: MatrixKind, us: &[usize], vs: &[usize]) -> Result<PairToken> {
    let prec = Precision::default();
    let t = token_graph(g, k)?;
    let (a, b) = (t.index_of(us)?, t.index_of(vs)?);
    let d = decompose_graph(&t.product, kind, &prec)?;
    Ok(PairToken::from_decomposition(&d, a, b, &prec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::disjoint_union;
    use crate::iso::is_isomorphic;
    use crate::spectral::{pair_token, spectrum_token};

    /// Adjacency by the definition: |S1 xor S2| = 2 and that pair is an edge.
    fn brute_force(g: &Graph, t: &TokenGraph) -> Graph {
        let m = t.product().n();
        let mut edges = Vec::new();
        for i in 0..m {
            for j in i + 1..m {
                let diff: Vec<usize> = (0..g.n()).filter(|x| t.subset(i).contains(x) != t.subset(j).contains(x)).collect();
                if diff.len() == 2 && g.has_edge(diff[0], diff[1]) {
                    edges.push((i, j));
                }
            }
        }
        Graph::from_edges(m, &edges).unwrap()
    }

    #[test]
    fn definitional_recount() {
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5)]).unwrap();
        for k in 1..=3 {
            let t = token_graph(&g, k).unwrap();
            assert_eq!(t.product().n(), binomial(6, k));
            assert_eq!(t.product(), &brute_force(&g, &t));
        }
    }

    #[test]
    fn small_cases() {
        let c5 = Graph::cycle(5);
        assert!(is_isomorphic(token_graph(&c5, 1).unwrap().product(), &c5).is_some());
        let k3 = token_graph(&Graph::complete(3), 2).unwrap();
        assert!(is_isomorphic(k3.product(), &Graph::complete(3)).is_some());
        let k2 = token_graph(&Graph::complete(2), 1).unwrap();
        assert_eq!(k2.product().n(), 2);
        assert!(token_graph(&Graph::complete(2), 2).is_err());
        assert!(token_graph(&Graph::empty(30), 15).is_err());
    }

    #[test]
    fn isolated_token_vertex() {
        // K2 + K1: the token {0,1} has no neighbor
        let g = disjoint_union(&Graph::complete(2), &Graph::empty(1));
        let t = token_graph(&g, 2).unwrap();
        assert!(t.product().has_isolated());
        assert!(token_spectrum(&g, 2, MatrixKind::NormalizedLaplacian).is_err());
    }

    #[test]
    fn order_one_matches_base_tokens() {
        let g = Graph::path(4);
        assert_eq!(token_spectrum(&g, 1, MatrixKind::Adjacency).unwrap(), spectrum_token(&g, MatrixKind::Adjacency).unwrap());
        assert_eq!(
            token_projection_entry(&g, 1, MatrixKind::Laplacian, &[0], &[2]).unwrap(),
            pair_token(&g, MatrixKind::Laplacian, 0, 2).unwrap()
        );
    }

    #[test]
    fn set_semantics() {
        let g = Graph::cycle(5);
        let a = token_projection_entry(&g, 2, MatrixKind::Adjacency, &[0, 2], &[1, 3]).unwrap();
        let b = token_projection_entry(&g, 2, MatrixKind::Adjacency, &[2, 0], &[3, 1]).unwrap();
        assert_eq!(a, b);
        let diag = token_projection_entry(&g, 2, MatrixKind::Adjacency, &[0, 1], &[0, 1]).unwrap();
        assert_eq!(diag.projection_sum(), 10i64.pow(Precision::default().digits));
        assert!(token_projection_entry(&g, 2, MatrixKind::Adjacency, &[0, 0], &[1, 2]).is_err());
    }

    #[test]
    fn c6_and_two_triangles_have_different_second_powers() {
        let c6 = Graph::cycle(6);
        let t = disjoint_union(&Graph::cycle(3), &Graph::cycle(3));
        assert_ne!(
            token_spectrum(&c6, 2, MatrixKind::Adjacency).unwrap(),
            token_spectrum(&t, 2, MatrixKind::Adjacency).unwrap()
        );
    }
}
