use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Simple undirected graph stored as packed adjacency bit rows.
///
/// Rows are `words` u64s wide, so graphs up to 64 vertices use one word per row and
/// larger graphs (Fürer products, token graphs) fall back to multiword rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
    edges: usize,
    has_isolated: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AtomicType {
    Equal,
    Adjacent,
    NonAdjacent,
}

impl AtomicType {
    pub fn code(self) -> u32 {
        match self {
            AtomicType::Equal => 0,
            AtomicType::Adjacent => 1,
            AtomicType::NonAdjacent => 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MatrixKind {
    Adjacency,
    Degree,
    Laplacian,
    NormalizedLaplacian,
}

impl MatrixKind {
    pub const ALL: [MatrixKind; 4] = [
        MatrixKind::Adjacency,
        MatrixKind::Degree,
        MatrixKind::Laplacian,
        MatrixKind::NormalizedLaplacian,
    ];

    /// The three kinds the hierarchy results are stated for.
    pub const MAIN: [MatrixKind; 3] =
        [MatrixKind::Adjacency, MatrixKind::Laplacian, MatrixKind::NormalizedLaplacian];

    pub fn short_name(self) -> &'static str {
        match self {
            MatrixKind::Adjacency => "A",
            MatrixKind::Degree => "D",
            MatrixKind::Laplacian => "L",
            MatrixKind::NormalizedLaplacian => "Lhat",
        }
    }

    pub fn code(self) -> u32 {
        match self {
            MatrixKind::Adjacency => 0,
            MatrixKind::Degree => 1,
            MatrixKind::Laplacian => 2,
            MatrixKind::NormalizedLaplacian => 3,
        }
    }
}

impl fmt::Display for MatrixKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for MatrixKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" | "adj" | "adjacency" => Ok(MatrixKind::Adjacency),
            "D" | "d" | "degree" => Ok(MatrixKind::Degree),
            "L" | "l" | "laplacian" => Ok(MatrixKind::Laplacian),
            "Lhat" | "lhat" | "nl" | "normalized" => Ok(MatrixKind::NormalizedLaplacian),
            _ => Err(Error::usage(format!("unknown matrix kind `{s}` (expected A, D, L or Lhat)"))),
        }
    }
}

/// Dense real symmetric matrix. Symmetry is exact, checked on construction.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricMatrix(DMatrix<f64>);

impl SymmetricMatrix {
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::domain("matrix is not square"));
        }
        let n = m.nrows();
        for i in 0..n {
            for j in 0..i {
                if m[(i, j)] != m[(j, i)] {
                    return Err(Error::domain(format!("matrix not symmetric at ({i},{j})")));
                }
            }
        }
        Ok(SymmetricMatrix(m))
    }

    pub fn identity(n: usize) -> Self {
        SymmetricMatrix(DMatrix::identity(n, n))
    }

    pub fn n(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<f64> {
        self.0
    }

    /// Induced infinity norm (max absolute row sum).
    pub fn inf_norm(&self) -> f64 {
        inf_norm(&self.0)
    }
}

pub(crate) fn inf_norm(m: &DMatrix<f64>) -> f64 {
    m.row_iter().map(|r| r.iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max)
}

pub(crate) fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

impl Graph {
    pub fn empty(n: usize) -> Graph {
        let words = n.div_ceil(64).max(1);
        Graph { n, words, rows: vec![0; n * words], edges: 0, has_isolated: n > 0 }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::domain(format!("edge ({u},{v}) out of range for n={n}")));
            }
            if u == v {
                return Err(Error::domain(format!("self-loop at {u}")));
            }
            g.set_edge(u, v);
        }
        g.finish();
        Ok(g)
    }

    pub fn complete(n: usize) -> Graph {
        let mut g = Graph::empty(n);
        for v in 0..n {
            for u in 0..v {
                g.set_edge(u, v);
            }
        }
        g.finish();
        g
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges).expect("valid cycle")
    }

    pub fn path(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges).expect("valid path")
    }

    /// Star with center 0 and `leaves` leaves.
    pub fn star(leaves: usize) -> Graph {
        let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
        Graph::from_edges(leaves + 1, &edges).expect("valid star")
    }

    // Builder helpers. `finish` must run after the last `set_edge`.
    pub(crate) fn set_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u != v);
        if !self.has_edge(u, v) {
            self.rows[u * self.words + v / 64] |= 1 << (v % 64);
            self.rows[v * self.words + u / 64] |= 1 << (u % 64);
            self.edges += 1;
        }
    }

    pub(crate) fn toggle_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u != v);
        let present = self.has_edge(u, v);
        self.rows[u * self.words + v / 64] ^= 1 << (v % 64);
        self.rows[v * self.words + u / 64] ^= 1 << (u % 64);
        if present {
            self.edges -= 1;
        } else {
            self.edges += 1;
        }
    }

    pub(crate) fn finish(&mut self) {
        self.has_isolated = (0..self.n).any(|u| self.degree(u) == 0);
        self.check_invariants();
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    pub fn has_isolated(&self) -> bool {
        self.has_isolated
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    pub fn degree(&self, u: usize) -> usize {
        self.row(u).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|u| self.degree(u)).collect()
    }

    pub(crate) fn row(&self, u: usize) -> &[u64] {
        &self.rows[u * self.words..(u + 1) * self.words]
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(u).iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }

    /// Edges as (u, v) with u < v, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edges);
        for u in 0..self.n {
            for v in self.neighbors(u) {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n).map(|u| self.degree(u)).min().unwrap_or(0)
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut comp = vec![usize::MAX; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![s];
            comp[s] = id;
            let mut i = 0;
            while i < members.len() {
                let u = members[i];
                i += 1;
                for v in self.neighbors(u) {
                    if comp[v] == usize::MAX {
                        comp[v] = id;
                        members.push(v);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().len() == 1
    }

    pub fn induced_subgraph(&self, verts: &[usize]) -> Graph {
        let mut g = Graph::empty(verts.len());
        for (i, &a) in verts.iter().enumerate() {
            for (j, &b) in verts.iter().enumerate().skip(i + 1) {
                if self.has_edge(a, b) {
                    g.set_edge(i, j);
                }
            }
        }
        g.finish();
        g
    }

    /// Relabel: vertex `u` becomes `perm[u]`.
    pub fn permute(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n);
        let mut g = Graph::empty(self.n);
        for (u, v) in self.edges() {
            g.set_edge(perm[u], perm[v]);
        }
        g.finish();
        g
    }

    pub fn adjacency_rows(&self) -> Vec<Vec<bool>> {
        (0..self.n).map(|u| (0..self.n).map(|v| self.has_edge(u, v)).collect()).collect()
    }

    fn check_invariants(&self) {
        for u in 0..self.n {
            assert!(!self.has_edge(u, u), "self-loop at {u}");
            for v in self.neighbors(u) {
                assert!(self.has_edge(v, u), "asymmetric adjacency at ({u},{v})");
            }
        }
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph({})", crate::graph6::write_graph6(self))
    }
}

pub fn atomic_type(g: &Graph, u: usize, v: usize) -> Result<AtomicType> {
    if u >= g.n() || v >= g.n() {
        return Err(Error::domain(format!("vertex pair ({u},{v}) out of range for n={}", g.n())));
    }
    Ok(if u == v {
        AtomicType::Equal
    } else if g.has_edge(u, v) {
        AtomicType::Adjacent
    } else {
        AtomicType::NonAdjacent
    })
}

pub fn build_matrix(g: &Graph, kind: MatrixKind) -> Result<SymmetricMatrix> {
    let n = g.n();
    let deg: Vec<f64> = g.degrees().into_iter().map(|d| d as f64).collect();
    let m = match kind {
        MatrixKind::Adjacency => {
            DMatrix::from_fn(n, n, |i, j| if g.has_edge(i, j) { 1.0 } else { 0.0 })
        }
        MatrixKind::Degree => DMatrix::from_fn(n, n, |i, j| if i == j { deg[i] } else { 0.0 }),
        MatrixKind::Laplacian => DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                deg[i]
            } else if g.has_edge(i, j) {
                -1.0
            } else {
                0.0
            }
        }),
        MatrixKind::NormalizedLaplacian => {
            if g.has_isolated() {
                return Err(Error::domain("normalized Laplacian undefined on a graph with isolated vertices"));
            }
            // (i,j) and (j,i) evaluate the same product, so symmetry is exact.
            DMatrix::from_fn(n, n, |i, j| {
                if i == j {
                    1.0
                } else if g.has_edge(i, j) {
                    -1.0 / (deg[i] * deg[j]).sqrt()
                } else {
                    0.0
                }
            })
        }
    };
    SymmetricMatrix::new(m)
}

pub fn disjoint_union(g: &Graph, h: &Graph) -> Graph {
    let mut out = Graph::empty(g.n() + h.n());
    for (u, v) in g.edges() {
        out.set_edge(u, v);
    }
    for (u, v) in h.edges() {
        out.set_edge(u + g.n(), v + g.n());
    }
    out.finish();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atomic_types_on_k2() {
        let k2 = Graph::complete(2);
        assert_eq!(atomic_type(&k2, 0, 0).unwrap(), AtomicType::Equal);
        assert_eq!(atomic_type(&k2, 0, 1).unwrap(), AtomicType::Adjacent);
        assert_eq!(atomic_type(&Graph::empty(2), 0, 1).unwrap(), AtomicType::NonAdjacent);
        assert!(atomic_type(&k2, 0, 2).is_err());
    }

    #[test]
    fn laplacians_of_k2() {
        let k2 = Graph::complete(2);
        let want = DMatrix::from_row_slice(2, 2, &[1.0, -1.0, -1.0, 1.0]);
        assert_eq!(build_matrix(&k2, MatrixKind::Laplacian).unwrap().matrix(), &want);
        assert_eq!(build_matrix(&k2, MatrixKind::NormalizedLaplacian).unwrap().matrix(), &want);
    }

    #[test]
    fn star_normalized_laplacian_entry() {
        let s3 = Graph::star(3);
        let m = build_matrix(&s3, MatrixKind::NormalizedLaplacian).unwrap();
        // plug degrees 3 and 1 into D^-1/2 L D^-1/2
        let want = -1.0 / 3f64.sqrt();
        for leaf in 1..=3 {
            assert!((m.matrix()[(0, leaf)] - want).abs() < 1e-15);
        }
    }

    #[test]
    fn isolated_vertex_rejects_lhat() {
        let g = Graph::from_edges(3, &[(0, 1)]).unwrap();
        assert!(g.has_isolated());
        assert!(build_matrix(&g, MatrixKind::NormalizedLaplacian).is_err());
        assert!(build_matrix(&g, MatrixKind::Adjacency).is_ok());
    }

    #[test]
    fn union_counts() {
        let k2 = Graph::complete(2);
        let u = disjoint_union(&k2, &k2);
        assert_eq!(u, Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap());
        assert_eq!(disjoint_union(&Graph::cycle(5), &Graph::empty(0)), Graph::cycle(5));
        let g = Graph::cycle(6);
        let h = Graph::complete(4);
        assert_eq!(disjoint_union(&g, &h).edge_count(), g.edge_count() + h.edge_count());
    }

    #[test]
    fn multiword_rows() {
        let g = Graph::cycle(130);
        assert_eq!(g.edge_count(), 130);
        assert!(g.has_edge(129, 0));
        assert_eq!(g.neighbors(64).collect::<Vec<_>>(), vec![63, 65]);
        assert!(g.is_connected());
    }

    #[test]
    fn components_and_induced() {
        let g = disjoint_union(&Graph::cycle(3), &Graph::path(2));
        assert_eq!(g.components(), vec![vec![0, 1, 2], vec![3, 4]]);
        assert_eq!(g.induced_subgraph(&[3, 4]), Graph::complete(2));
    }

    #[test]
    fn permute_roundtrip() {
        let g = Graph::path(4);
        let p = g.permute(&[3, 1, 0, 2]);
        assert_eq!(p.edge_count(), 3);
        assert!(p.has_edge(3, 1) && p.has_edge(1, 0) && p.has_edge(0, 2));
    }
}
