//! Fürer gadget products, edge twists and a witness search over base graphs.

use rayon::prelude::*;
use serde::Serialize;

use crate::enumerate::{enumerate_graphs, random_connected_graph};
use crate::error::{Error, Result};
use crate::graph::{disjoint_union, Graph};
use crate::graph6::{write_graph6, PairRecord};
use crate::iso::is_isomorphic;
use crate::refinement::{distinguishes, AlgorithmSpec};

#[derive(Clone, Debug)]
pub struct FurerGraph {
    base: Graph,
    product: Graph,
    /// Product vertex ids of Meta(x), per base vertex x.
    meta: Vec<Vec<usize>>,
    /// For each product vertex: (base vertex, mask over the sorted neighbors of it).
    label: Vec<(usize, u32)>,
}

fn sorted_neighbors(g: &Graph, x: usize) -> Vec<usize> {
    g.neighbors(x).collect()
}

fn position(nb: &[usize], y: usize) -> u32 {
    nb.iter().position(|&z| z == y).expect("neighbor") as u32
}

/// Builds G(F): vertices (x, X) with X an even subset of N(x), ordered by x and then by
/// the binary encoding of X; (x,X) ~ (y,Y) iff xy is a base edge and (x in Y) == (y in X).
pub fn furer(base: &Graph) -> Result<FurerGraph> {
    if base.n() < 2 || !base.is_connected() {
        return Err(Error::domain("Fürer base must be connected with at least one edge"));
    }
    let n = base.n();
    let nbrs: Vec<Vec<usize>> = (0..n).map(|x| sorted_neighbors(base, x)).collect();
    let mut meta = Vec::with_capacity(n);
    let mut label = Vec::new();
    for (x, nb) in nbrs.iter().enumerate() {
        if nb.len() > 20 {
            return Err(Error::domain("base degree too large for a Fürer product"));
        }
        let mut ids = Vec::new();
        for mask in 0u32..(1 << nb.len()) {
            if mask.count_ones() % 2 == 0 {
                ids.push(label.len());
                label.push((x, mask));
            }
        }
        meta.push(ids);
    }
    let mut edges = Vec::new();
    for (x, y) in base.edges() {
        let (px, py) = (position(&nbrs[x], y), position(&nbrs[y], x));
        for &a in &meta[x] {
            for &b in &meta[y] {
                let y_in_x = label[a].1 >> px & 1 == 1;
                let x_in_y = label[b].1 >> py & 1 == 1;
                if x_in_y == y_in_x {
                    edges.push((a, b));
                }
            }
        }
    }
    let product = Graph::from_edges(label.len(), &edges)?;
    let fg = FurerGraph { base: base.clone(), product, meta, label };
    fg.check_invariants()?;
    Ok(fg)
}

impl FurerGraph {
    pub fn base(&self) -> &Graph {
        &self.base
    }

    pub fn product(&self) -> &Graph {
        &self.product
    }

    pub fn meta(&self, x: usize) -> &[usize] {
        &self.meta[x]
    }

    /// (base vertex, neighbor-subset mask) of a product vertex.
    pub fn label(&self, v: usize) -> (usize, u32) {
        self.label[v]
    }

    pub fn check_invariants(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Internal(format!("Fürer invariant: {m}")));
        let mut seen = vec![false; self.product.n()];
        for (x, ids) in self.meta.iter().enumerate() {
            if ids.len() != 1 << (self.base.degree(x) - 1) {
                return bad("meta set size");
            }
            for &v in ids {
                if std::mem::replace(&mut seen[v], true) || self.label[v].0 != x {
                    return bad("meta sets do not partition the product");
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return bad("meta sets do not cover the product");
        }
        let nbrs: Vec<Vec<usize>> = (0..self.base.n()).map(|x| sorted_neighbors(&self.base, x)).collect();
        for a in 0..self.product.n() {
            for b in 0..self.product.n() {
                let (x, xm) = self.label[a];
                let (y, ym) = self.label[b];
                let want = self.base.has_edge(x, y) && {
                    let y_in_x = xm >> position(&nbrs[x], y) & 1 == 1;
                    let x_in_y = ym >> position(&nbrs[y], x) & 1 == 1;
                    x_in_y == y_in_x
                };
                if self.product.has_edge(a, b) != want {
                    return bad("edge rule");
                }
            }
        }
        Ok(())
    }
}

/// Toggles the full Meta(x) x Meta(y) biclique for each base edge {x,y} in `set`.
pub fn twist(fg: &FurerGraph, set: &[(usize, usize)]) -> Result<Graph> {
    let mut g = fg.product.clone();
    for &(x, y) in set {
        if x >= fg.base.n() || y >= fg.base.n() || !fg.base.has_edge(x, y) {
            return Err(Error::domain(format!("({x},{y}) is not an edge of the base graph")));
        }
        for &a in &fg.meta[x] {
            for &b in &fg.meta[y] {
                g.toggle_edge(a, b);
            }
        }
    }
    g.finish();
    Ok(g)
}

/// Whether the two twisted products are isomorphic; errors if that disagrees with
/// "isomorphic iff the twist sets have equal parity".
pub fn parity_check(base: &Graph, s1: &[(usize, usize)], s2: &[(usize, usize)]) -> Result<bool> {
    let fg = furer(base)?;
    let iso = is_isomorphic(&twist(&fg, s1)?, &twist(&fg, s2)?).is_some();
    if iso != (s1.len() % 2 == s2.len() % 2) {
        return Err(Error::Internal(format!(
            "twist parity violated on base {} with |S1|={}, |S2|={}",
            write_graph6(base),
            s1.len(),
            s2.len()
        )));
    }
    Ok(iso)
}

/// G(F) and its single-edge twist.
pub fn furer_pair(base: &Graph) -> Result<(Graph, Graph)> {
    let fg = furer(base)?;
    let e = base.edges()[0];
    Ok((fg.product.clone(), twist(&fg, &[e])?))
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchOptions {
    pub max_base_n: usize,
    pub random_bases: usize,
    pub max_random_n: usize,
    /// Fürer products larger than this are skipped.
    pub max_product: usize,
    /// Candidate pairs evaluated at most.
    pub budget: usize,
    pub seed: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { max_base_n: 6, random_bases: 64, max_random_n: 8, max_product: 64, budget: 400, seed: 7 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub note: String,
    pub g: String,
    pub h: String,
    pub a_distinguishes: bool,
    pub b_distinguishes: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SearchStatus {
    Completed,
    BudgetExhausted,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchResult {
    pub spec_a: String,
    pub spec_b: String,
    pub evaluated: usize,
    /// Candidates outside the domain of either spec (e.g. isolated vertices under Lhat).
    pub skipped: usize,
    pub status: SearchStatus,
    pub witnesses: Vec<Witness>,
}

impl SearchResult {
    pub fn records(&self) -> Result<Vec<PairRecord>> {
        self.witnesses
            .iter()
            .map(|w| {
                Ok(PairRecord {
                    note: format!("{} [{}={} {}={}]", w.note, self.spec_a, w.a_distinguishes, self.spec_b, w.b_distinguishes),
                    a: crate::graph6::parse_graph6(&w.g)?,
                    b: crate::graph6::parse_graph6(&w.h)?,
                })
            })
            .collect()
    }
}

/// Candidate pairs in search order: the (C6, 2C3) pair, Fürer pairs over exhaustive
/// bases with min degree >= 2, then Fürer pairs over seeded random bases.
pub fn candidate_pairs(opts: &SearchOptions) -> Result<Vec<(String, Graph, Graph)>> {
    let mut out = vec![(
        "C6 vs 2C3".to_string(),
        Graph::cycle(6),
        disjoint_union(&Graph::cycle(3), &Graph::cycle(3)),
    )];
    let product_size = |b: &Graph| (0..b.n()).map(|x| 1usize << (b.degree(x).max(1) - 1)).sum::<usize>();
    let mut push = |note: String, base: &Graph| -> Result<()> {
        if product_size(base) <= opts.max_product {
            let (g, h) = furer_pair(base)?;
            out.push((note, g, h));
        }
        Ok(())
    };
    for n in 3..=opts.max_base_n.min(crate::enumerate::MAX_EXHAUSTIVE_N) {
        for base in enumerate_graphs(n, true)? {
            if base.min_degree() >= 2 {
                push(format!("Fürer pair over base {}", write_graph6(&base)), &base)?;
            }
        }
    }
    for i in 0..opts.random_bases {
        let n = 3 + (i % opts.max_random_n.saturating_sub(2).max(1));
        let base = random_connected_graph(n, 0.5, opts.seed.wrapping_add(i as u64));
        push(format!("Fürer pair over random base {}", write_graph6(&base)), &base)?;
    }
    Ok(out)
}

/// Every candidate pair, within budget, on which exactly one of the specs distinguishes.
pub fn search_counterexamples(a: &AlgorithmSpec, b: &AlgorithmSpec, opts: &SearchOptions) -> Result<SearchResult> {
    let all = if opts.budget == 0 { Vec::new() } else { candidate_pairs(opts)? };
    let total = all.len();
    let candidates: Vec<_> = all
        .into_iter()
        .filter(|(_, g, h)| [a, b].iter().all(|s| s.validate(g).is_ok() && s.validate(h).is_ok()))
        .collect();
    let skipped = total - candidates.len();
    let status = if candidates.len() > opts.budget { SearchStatus::BudgetExhausted } else { SearchStatus::Completed };
    let take = candidates.len().min(opts.budget);
    let verdicts: Vec<(bool, bool)> = candidates[..take]
        .par_iter()
        .map(|(_, g, h)| Ok((distinguishes(a, g, h)?, distinguishes(b, g, h)?)))
        .collect::<Result<_>>()?;
    let witnesses = candidates[..take]
        .iter()
        .zip(verdicts)
        .filter(|(_, (x, y))| x != y)
        .map(|((note, g, h), (x, y))| Witness {
            note: note.clone(),
            g: write_graph6(g),
            h: write_graph6(h),
            a_distinguishes: x,
            b_distinguishes: y,
        })
        .collect();
    Ok(SearchResult {
        spec_a: a.to_string(),
        spec_b: b.to_string(),
        evaluated: take,
        skipped,
        status: if opts.budget == 0 { SearchStatus::BudgetExhausted } else { status },
        witnesses,
    })
}
