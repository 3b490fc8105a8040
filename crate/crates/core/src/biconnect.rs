//! Cut vertices, cut edges and block counts via DFS low-link.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::graph::Graph;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BiconnectivityReport {
    pub cut_vertices: BTreeSet<usize>,
    pub cut_edges: BTreeSet<(usize, usize)>,
    /// Blocks that contain at least one edge; isolated vertices are not counted.
    pub biconnected_component_count: usize,
}

struct Dfs<'a> {
    g: &'a Graph,
    disc: Vec<usize>,
    low: Vec<usize>,
    time: usize,
    edge_stack: Vec<(usize, usize)>,
    report: BiconnectivityReport,
}

impl Dfs<'_> {
    fn visit(&mut self, u: usize, parent: Option<usize>) {
        self.time += 1;
        self.disc[u] = self.time;
        self.low[u] = self.time;
        let mut children = 0;
        let nbrs: Vec<usize> = self.g.neighbors(u).collect();
        for v in nbrs {
            if self.disc[v] == 0 {
                children += 1;
                self.edge_stack.push((u, v));
                self.visit(v, Some(u));
                self.low[u] = self.low[u].min(self.low[v]);
                if self.low[v] > self.disc[u] {
                    self.report.cut_edges.insert((u.min(v), u.max(v)));
                }
                if self.low[v] >= self.disc[u] {
                    if parent.is_some() {
                        self.report.cut_vertices.insert(u);
                    }
                    // pop one block
                    while let Some(e) = self.edge_stack.pop() {
                        if e == (u, v) {
                            break;
                        }
                    }
                    self.report.biconnected_component_count += 1;
                }
            } else if Some(v) != parent && self.disc[v] < self.disc[u] {
                self.edge_stack.push((u, v));
                self.low[u] = self.low[u].min(self.disc[v]);
            }
        }
        if parent.is_none() && children > 1 {
            self.report.cut_vertices.insert(u);
        }
    }
}

pub fn biconnectivity_report(g: &Graph) -> BiconnectivityReport {
    let n = g.n();
    let mut dfs = Dfs {
        g,
        disc: vec![0; n],
        low: vec![0; n],
        time: 0,
        edge_stack: Vec::new(),
        report: BiconnectivityReport {
            cut_vertices: BTreeSet::new(),
            cut_edges: BTreeSet::new(),
            biconnected_component_count: 0,
        },
    };
    for s in 0..n {
        if dfs.disc[s] == 0 {
            dfs.visit(s, None);
        }
    }
    dfs.report
}

/// Deletion-based oracle, quadratic-ish; used to check the DFS on small graphs.
pub fn brute_force_report(g: &Graph) -> BiconnectivityReport {
    let n = g.n();
    let base = g.components().len();
    let mut cut_vertices = BTreeSet::new();
    for x in 0..n {
        let keep: Vec<usize> = (0..n).filter(|&y| y != x).collect();
        // removing x also removes its own component if it was isolated
        let before = base - usize::from(g.degree(x) == 0);
        if g.induced_subgraph(&keep).components().len() > before {
            cut_vertices.insert(x);
        }
    }
    let mut cut_edges = BTreeSet::new();
    for (a, b) in g.edges() {
        let mut h = g.clone();
        h.toggle_edge(a, b);
        h.finish();
        if h.components().len() > base {
            cut_edges.insert((a, b));
        }
    }
    // Edges sharing a vertex w are in one block iff their far ends stay connected in G - w.
    let edges = g.edges();
    let mut parent: Vec<usize> = (0..edges.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for w in 0..n {
        let keep: Vec<usize> = (0..n).filter(|&y| y != w).collect();
        let sub = g.induced_subgraph(&keep);
        let comps = sub.components();
        let mut comp_of = vec![usize::MAX; n];
        for (ci, c) in comps.iter().enumerate() {
            for &i in c {
                comp_of[keep[i]] = ci;
            }
        }
        let incident: Vec<usize> =
            (0..edges.len()).filter(|&i| edges[i].0 == w || edges[i].1 == w).collect();
        for (ai, &i) in incident.iter().enumerate() {
            for &j in &incident[ai + 1..] {
                let far = |e: (usize, usize)| if e.0 == w { e.1 } else { e.0 };
                if comp_of[far(edges[i])] == comp_of[far(edges[j])] {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    parent[ri] = rj;
                }
            }
        }
    }
    let blocks = (0..edges.len()).filter(|&i| find(&mut parent, i) == i).count();
    BiconnectivityReport { cut_vertices, cut_edges, biconnected_component_count: blocks }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_p3() {
        let r = biconnectivity_report(&Graph::path(3));
        assert_eq!(r.cut_vertices, BTreeSet::from([1]));
        assert_eq!(r.cut_edges, BTreeSet::from([(0, 1), (1, 2)]));
        assert_eq!(r.biconnected_component_count, 2);
    }

    #[test]
    fn cycle_c4() {
        let r = biconnectivity_report(&Graph::cycle(4));
        assert!(r.cut_vertices.is_empty());
        assert!(r.cut_edges.is_empty());
        assert_eq!(r.biconnected_component_count, 1);
    }

    #[test]
    fn bowtie() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]).unwrap();
        let r = biconnectivity_report(&g);
        assert_eq!(r.cut_vertices, BTreeSet::from([2]));
        assert!(r.cut_edges.is_empty());
        assert_eq!(r.biconnected_component_count, 2);
        assert_eq!(brute_force_report(&g), r);
    }
}
