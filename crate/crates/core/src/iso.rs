//! Isomorphism oracle: individualization-refinement with joint 1-WL pruning.
//!
//! Both graphs are colored together so color ids stay comparable; a branch is cut as
//! soon as the two color histograms disagree. Exponential in the worst case (the
//! Fürer products are the classic bad input), fine for the sizes used here.

use std::collections::HashMap;

use crate::graph::Graph;

/// Refine `colors` over the disjoint union in place until the partition is equitable.
/// New ids are assigned in sorted key order, so they do not depend on vertex order.
fn refine(g: &Graph, h: &Graph, colors: &mut [u32]) {
    let ng = g.n();
    let total = colors.len();
    let mut classes = count_classes(colors);
    loop {
        let mut keys: Vec<(u32, Vec<u32>)> = Vec::with_capacity(total);
        for x in 0..total {
            let mut nb: Vec<u32> = if x < ng {
                g.neighbors(x).map(|y| colors[y]).collect()
            } else {
                h.neighbors(x - ng).map(|y| colors[y + ng]).collect()
            };
            nb.sort_unstable();
            keys.push((colors[x], nb));
        }
        let mut sorted: Vec<&(u32, Vec<u32>)> = keys.iter().collect();
        sorted.sort();
        sorted.dedup();
        let ids: HashMap<&(u32, Vec<u32>), u32> =
            sorted.into_iter().enumerate().map(|(i, k)| (k, i as u32)).collect();
        for x in 0..total {
            colors[x] = ids[&keys[x]];
        }
        let c = count_classes(colors);
        if c == classes {
            return;
        }
        classes = c;
    }
}

fn count_classes(colors: &[u32]) -> usize {
    let mut v = colors.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len()
}

fn histograms_match(colors: &[u32], ng: usize) -> bool {
    let mut a = colors[..ng].to_vec();
    let mut b = colors[ng..].to_vec();
    a.sort_unstable();
    b.sort_unstable();
    a == b
}

fn search(g: &Graph, h: &Graph, colors: Vec<u32>) -> Option<Vec<usize>> {
    let ng = g.n();
    if !histograms_match(&colors, ng) {
        return None;
    }
    // smallest non-singleton cell on the g side
    let mut count: HashMap<u32, usize> = HashMap::new();
    for &c in &colors[..ng] {
        *count.entry(c).or_default() += 1;
    }
    let target = count.iter().filter(|(_, &k)| k > 1).min_by_key(|(&c, &k)| (k, c)).map(|(&c, _)| c);
    let Some(cell) = target else {
        let mut pos: HashMap<u32, usize> = HashMap::new();
        for y in 0..h.n() {
            pos.insert(colors[ng + y], y);
        }
        let f: Vec<usize> = (0..ng).map(|x| pos[&colors[x]]).collect();
        return is_bijection_iso(g, h, &f).then_some(f);
    };
    let u = (0..ng).find(|&x| colors[x] == cell).expect("cell is nonempty");
    let fresh = colors.iter().max().copied().unwrap_or(0) + 1;
    for v in (0..h.n()).filter(|&y| colors[ng + y] == cell) {
        let mut next = colors.clone();
        next[u] = fresh;
        next[ng + v] = fresh;
        refine(g, h, &mut next);
        if let Some(f) = search(g, h, next) {
            return Some(f);
        }
    }
    None
}

fn is_bijection_iso(g: &Graph, h: &Graph, f: &[usize]) -> bool {
    let mut seen = vec![false; h.n()];
    for &y in f {
        if std::mem::replace(&mut seen[y], true) {
            return false;
        }
    }
    g.edges().into_iter().all(|(a, b)| h.has_edge(f[a], f[b])) && g.edge_count() == h.edge_count()
}

/// Returns a bijection `f` with `g.has_edge(a,b) == h.has_edge(f[a],f[b])`, or `None`.
///
/// Practical up to a few dozen vertices on ordinary graphs; twisted Fürer products of
/// bases beyond ~6 vertices can take much longer.
pub fn is_isomorphic(g: &Graph, h: &Graph) -> Option<Vec<usize>> {
    if g.n() != h.n() || g.edge_count() != h.edge_count() {
        return None;
    }
    let mut dg = g.degrees();
    let mut dh = h.degrees();
    dg.sort_unstable();
    dh.sort_unstable();
    if dg != dh {
        return None;
    }
    let mut colors = vec![0u32; g.n() + h.n()];
    refine(g, h, &mut colors);
    search(g, h, colors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::disjoint_union;

    #[test]
    fn relabeled_cycle() {
        let c6 = Graph::cycle(6);
        let p = c6.permute(&[3, 5, 0, 2, 1, 4]);
        let f = is_isomorphic(&c6, &p).expect("isomorphic");
        assert!(is_bijection_iso(&c6, &p, &f));
    }

    #[test]
    fn negatives() {
        let two_c3 = disjoint_union(&Graph::cycle(3), &Graph::cycle(3));
        assert!(is_isomorphic(&Graph::cycle(6), &two_c3).is_none());
        let mut k4e = Graph::complete(4);
        k4e.toggle_edge(0, 1);
        k4e.finish();
        assert!(is_isomorphic(&Graph::complete(4), &k4e).is_none());
    }

    #[test]
    fn regular_nonisomorphic_same_wl() {
        // 3-prism vs K_{3,3}: both 3-regular on 6 vertices
        let prism = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4), (2, 5)]).unwrap();
        let k33 = Graph::from_edges(
            6,
            &[(0, 3), (0, 4), (0, 5), (1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5)],
        )
        .unwrap();
        assert!(is_isomorphic(&prism, &k33).is_none());
        assert!(is_isomorphic(&prism, &prism.permute(&[5, 4, 3, 2, 1, 0])).is_some());
    }

    #[test]
    fn empty_and_trivial() {
        assert!(is_isomorphic(&Graph::empty(0), &Graph::empty(0)).is_some());
        assert!(is_isomorphic(&Graph::empty(4), &Graph::empty(4)).is_some());
    }
}
