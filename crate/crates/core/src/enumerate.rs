//! Exhaustive enumeration of isomorphism classes and seeded random graphs.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::iso::is_isomorphic;

pub const MAX_EXHAUSTIVE_N: usize = 9;

fn h64<T: Hash>(x: &T) -> u64 {
    let mut s = DefaultHasher::new();
    x.hash(&mut s);
    s.finish()
}

/// Isomorphism-invariant 64-bit bucket key: 1-WL seeded with (degree, triangles).
/// Collisions only cost extra isomorphism tests.
pub(crate) fn invariant_hash(g: &Graph) -> u64 {
    let n = g.n();
    let mut c: Vec<u64> = (0..n)
        .map(|u| {
            let nb: Vec<usize> = g.neighbors(u).collect();
            let mut tri = 0u64;
            for (i, &a) in nb.iter().enumerate() {
                for &b in &nb[i + 1..] {
                    tri += g.has_edge(a, b) as u64;
                }
            }
            h64(&(nb.len(), tri))
        })
        .collect();
    for _ in 0..n {
        c = (0..n)
            .map(|u| {
                let mut nb: Vec<u64> = g.neighbors(u).map(|v| c[v]).collect();
                nb.sort_unstable();
                h64(&(c[u], nb))
            })
            .collect();
    }
    c.sort_unstable();
    h64(&(n, g.edge_count(), c))
}

/// One representative per isomorphism class, built by vertex augmentation.
///
/// With `connected_only`, only connected graphs are augmented (every connected graph
/// has a vertex whose removal keeps it connected, so nothing is lost).
pub fn enumerate_graphs(n: usize, connected_only: bool) -> Result<Vec<Graph>> {
    if n > MAX_EXHAUSTIVE_N {
        return Err(Error::usage(format!(
            "exhaustive enumeration is limited to n <= {MAX_EXHAUSTIVE_N}; use random_graph for larger sizes"
        )));
    }
    if n == 0 {
        return Ok(vec![Graph::empty(0)]);
    }
    let mut level = vec![Graph::empty(1)];
    for k in 1..n {
        let mut buckets: HashMap<u64, Vec<usize>> = HashMap::new();
        let mut next: Vec<Graph> = Vec::new();
        for base in &level {
            let first = usize::from(connected_only);
            for mask in first..(1usize << k) {
                let mut edges = base.edges();
                edges.extend((0..k).filter(|&i| mask >> i & 1 == 1).map(|i| (i, k)));
                let g = Graph::from_edges(k + 1, &edges)?;
                let key = invariant_hash(&g);
                let bucket = buckets.entry(key).or_default();
                if bucket.iter().any(|&i| is_isomorphic(&next[i], &g).is_some()) {
                    continue;
                }
                bucket.push(next.len());
                next.push(g);
            }
        }
        level = next;
    }
    Ok(level)
}

/// Erdős–Rényi G(n, p), deterministic in `seed`.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
    let p = p.clamp(0.0, 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for v in 1..n {
        for u in 0..v {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges).expect("indices in range")
}

/// Rejection-samples G(n, p) until connected, deriving fresh seeds from `seed`.
pub fn random_connected_graph(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let g = random_graph(n, p, rng.gen());
        if g.is_connected() {
            return g;
        }
    }
}

/// The seeded random corpus used by the distance suites: connected, 2 <= n <= max_n.
pub fn random_connected_corpus(count: usize, max_n: usize, seed: u64) -> Vec<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(2..=max_n);
            let p = rng.gen_range(0.25..0.75);
            random_connected_graph(n, p, rng.gen())
        })
        .collect()
}

/// All connected graphs with lo <= n <= hi, in enumeration order.
pub fn connected_corpus(lo: usize, hi: usize) -> Result<Vec<Graph>> {
    let mut out = Vec::new();
    for n in lo..=hi {
        out.extend(enumerate_graphs(n, true)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        assert_eq!(enumerate_graphs(1, false).unwrap().len(), 1);
        assert_eq!(enumerate_graphs(3, false).unwrap().len(), 4);
        assert_eq!(enumerate_graphs(3, true).unwrap().len(), 2);
        assert_eq!(enumerate_graphs(4, true).unwrap().len(), 6);
        assert_eq!(enumerate_graphs(4, false).unwrap().len(), 11);
    }

    #[test]
    fn connected_counts_to_six() {
        let want = [1, 1, 2, 6, 21, 112];
        for (i, &w) in want.iter().enumerate() {
            let gs = enumerate_graphs(i + 1, true).unwrap();
            assert_eq!(gs.len(), w, "n={}", i + 1);
            assert!(gs.iter().all(Graph::is_connected));
        }
    }

    #[test]
    fn refuses_large_n() {
        assert!(matches!(enumerate_graphs(10, true), Err(Error::Usage(_))));
    }

    #[test]
    fn random_extremes_and_determinism() {
        assert_eq!(random_graph(6, 0.0, 1).edge_count(), 0);
        assert_eq!(random_graph(6, 1.0, 1), Graph::complete(6));
        assert_eq!(random_graph(9, 0.4, 42), random_graph(9, 0.4, 42));
        assert!(random_connected_graph(10, 0.3, 7).is_connected());
    }
}
