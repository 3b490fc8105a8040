//! Initial colorings, update rules and poolings of every refinement variant.
//!
//! Layouts: nodes `u`, pairs `u*n+v`, eigenvalue-tagged pairs `l*n*n + u*n+v`,
//! eigenvalue-tagged nodes `l*n+u`.

use nalgebra::DMatrix;
use rayon::prelude::*;

use super::engine::{fixpoint, iterate, push_sorted, Fixpoint, Interner, Round, ABSENT};
use super::spec::{AlgorithmSpec, PairInit};
use crate::distances::{distance, DistanceKind};
use crate::error::Result;
use crate::graph::{atomic_type, Graph, MatrixKind};
use crate::spectral::{decompose_graph, Precision, SpectralDecomposition};

// value-table namespaces
const V_PAIR: i64 = 1;
const V_LAMBDA: i64 = 2;
const V_MULT: i64 = 3;
const V_DIST: i64 = 4;
const V_GIRT: i64 = 5;

// aux multiset namespaces
const M_SP: u32 = 1;
const M_P2: u32 = 2;
const M_POOL_ROW: u32 = 3;
const IGN_SLICE: u32 = 10;
const IGN_POOLED: u32 = 20;

pub(crate) struct Outcome {
    pub signature_keys: Vec<Vec<u32>>,
    pub node_colors: Option<Vec<Vec<u32>>>,
    pub pair_colors: Option<Vec<Vec<u32>>>,
    pub rounds: usize,
}

/// Run-level table of initial tokens, so that equal spectral or distance values get the
/// same initial color in every graph of the run.
type Values = Interner<i64>;

fn intern_all(values: &mut Values, raw: Vec<Vec<Vec<i64>>>) -> Vec<Vec<u32>> {
    raw.into_iter().map(|g| g.iter().map(|k| values.intern(k)).collect()).collect()
}

fn atp_tables(graphs: &[Graph]) -> Vec<Vec<u32>> {
    graphs
        .iter()
        .map(|g| {
            let n = g.n();
            let mut t = Vec::with_capacity(n * n);
            for u in 0..n {
                for v in 0..n {
                    t.push(atomic_type(g, u, v).expect("in range").code());
                }
            }
            t
        })
        .collect()
}

fn decompositions(graphs: &[Graph], kind: MatrixKind, prec: &Precision) -> Result<Vec<SpectralDecomposition>> {
    graphs.par_iter().map(|g| decompose_graph(g, kind, prec)).collect()
}

/// Ids of the projection invariant for every ordered pair.
fn pair_ids(graphs: &[Graph], kind: MatrixKind, prec: &Precision, values: &mut Values) -> Result<Vec<Vec<u32>>> {
    let raw: Vec<Vec<Vec<i64>>> = decompositions(graphs, kind, prec)?
        .par_iter()
        .map(|d| {
            let n = d.n();
            let mut out = Vec::with_capacity(n * n);
            for u in 0..n {
                for v in 0..n {
                    let mut items: Vec<(i64, i64)> = d
                        .eigenvalues
                        .iter()
                        .zip(&d.projections)
                        .map(|(&l, p)| (prec.quantize(l), prec.quantize(p[(u, v)])))
                        .collect();
                    items.sort_unstable();
                    let mut key = vec![V_PAIR];
                    key.extend(items.into_iter().flat_map(|(a, b)| [a, b]));
                    out.push(key);
                }
            }
            out
        })
        .collect();
    Ok(intern_all(values, raw))
}

/// (|Lambda|, initial colors over Lambda x V x V). Each element is keyed by the
/// eigenvalue, or by its multiplicity when `by_multiplicity`, and P_lambda(u,v).
fn spectral_init(
    graphs: &[Graph],
    kind: MatrixKind,
    by_multiplicity: bool,
    prec: &Precision,
    values: &mut Values,
) -> Result<(Vec<usize>, Vec<Vec<u32>>)> {
    let ds = decompositions(graphs, kind, prec)?;
    let raw: Vec<Vec<Vec<i64>>> = ds
        .par_iter()
        .map(|d| {
            let n = d.n();
            let mut out = Vec::with_capacity(d.len() * n * n);
            for (i, p) in d.projections.iter().enumerate() {
                let head = if by_multiplicity {
                    [V_MULT, d.multiplicities[i] as i64]
                } else {
                    [V_LAMBDA, prec.quantize(d.eigenvalues[i])]
                };
                for u in 0..n {
                    for v in 0..n {
                        out.push(vec![head[0], head[1], prec.quantize(p[(u, v)])]);
                    }
                }
            }
            out
        })
        .collect();
    Ok((ds.iter().map(SpectralDecomposition::len).collect(), intern_all(values, raw)))
}

fn distance_ids(graphs: &[Graph], kind: &DistanceKind, prec: &Precision, values: &mut Values) -> Result<Vec<Vec<u32>>> {
    let raw: Vec<Vec<Vec<i64>>> = graphs
        .par_iter()
        .map(|g| {
            let d = distance(g, kind)?;
            let n = g.n();
            let mut out = Vec::with_capacity(n * n);
            for u in 0..n {
                for v in 0..n {
                    let t = d.get(u, v).token(prec);
                    out.push(vec![V_DIST, t[0], t[1]]);
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok(intern_all(values, raw))
}

/// Quantized ((D^-1 A)^k (u,v)) for k = 0..=K.
fn girt_ids(graphs: &[Graph], k: usize, prec: &Precision, values: &mut Values) -> Vec<Vec<u32>> {
    let raw: Vec<Vec<Vec<i64>>> = graphs
        .par_iter()
        .map(|g| {
            let n = g.n();
            let deg = g.degrees();
            let w = DMatrix::from_fn(n, n, |i, j| if g.has_edge(i, j) { 1.0 / deg[i] as f64 } else { 0.0 });
            let mut powers = vec![DMatrix::<f64>::identity(n, n)];
            for i in 1..=k {
                let next = &powers[i - 1] * &w;
                powers.push(next);
            }
            let mut out = Vec::with_capacity(n * n);
            for u in 0..n {
                for v in 0..n {
                    let mut key = vec![V_GIRT];
                    key.extend(powers.iter().map(|p| prec.quantize(p[(u, v)])));
                    out.push(key);
                }
            }
            out
        })
        .collect();
    intern_all(values, raw)
}

fn side(len: usize) -> usize {
    let n = (len as f64).sqrt().round() as usize;
    debug_assert_eq!(n * n, len);
    n
}

// ---- node-domain updates ----

/// hash(chi(u), {{(chi(v), f(u,v)) : v in V}}); f = atomic type gives 1-WL.
fn node_step(old: &[Vec<u32>], r: &mut Round, feats: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let mut items = Vec::new();
    let mut out = Vec::with_capacity(old.len());
    for (x, f) in old.iter().zip(feats) {
        let n = x.len();
        let mut next = Vec::with_capacity(n);
        for u in 0..n {
            items.clear();
            items.extend((0..n).map(|v| [x[v], f[u * n + v]]));
            r.key.push(x[u]);
            push_sorted(&mut r.key, &mut items);
            next.push(r.commit());
        }
        out.push(next);
    }
    out
}

/// hash({{(chi(v), P(u,u), P(v,v), P(u,v)) : v}}), no self color.
fn peg_step(old: &[Vec<u32>], r: &mut Round, pair: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let mut items = Vec::new();
    let mut out = Vec::with_capacity(old.len());
    for (x, p) in old.iter().zip(pair) {
        let n = x.len();
        let mut next = Vec::with_capacity(n);
        for u in 0..n {
            items.clear();
            items.extend((0..n).map(|v| [x[v], p[u * n + u], p[v * n + v], p[u * n + v]]));
            push_sorted(&mut r.key, &mut items);
            next.push(r.commit());
        }
        out.push(next);
    }
    out
}

// ---- pair-domain updates ----

/// SWL: hash(chi(u,v), {{(chi(u,w), atp(v,w)) : w}}); PSWL also hashes chi(v,v).
fn subgraph_step(old: &[Vec<u32>], r: &mut Round, atp: &[Vec<u32>], partial: bool) -> Vec<Vec<u32>> {
    let mut items = Vec::new();
    let mut out = Vec::with_capacity(old.len());
    for (x, a) in old.iter().zip(atp) {
        let n = side(x.len());
        let mut next = Vec::with_capacity(n * n);
        for u in 0..n {
            for v in 0..n {
                items.clear();
                items.extend((0..n).map(|w| [x[u * n + w], a[v * n + w]]));
                r.key.push(x[u * n + v]);
                if partial {
                    r.key.push(x[v * n + v]);
                }
                push_sorted(&mut r.key, &mut items);
                next.push(r.commit());
            }
        }
        out.push(next);
    }
    out
}

fn fwl2_step(old: &[Vec<u32>], r: &mut Round) -> Vec<Vec<u32>> {
    let mut items = Vec::new();
    let mut out = Vec::with_capacity(old.len());
    for x in old {
        let n = side(x.len());
        let mut next = Vec::with_capacity(n * n);
        for u in 0..n {
            for v in 0..n {
                items.clear();
                items.extend((0..n).map(|w| [x[u * n + w], x[w * n + v]]));
                r.key.push(x[u * n + v]);
                push_sorted(&mut r.key, &mut items);
                next.push(r.commit());
            }
        }
        out.push(next);
    }
    out
}

struct IgnAgg {
    row: Vec<u32>,
    col: Vec<u32>,
    diag: u32,
    all: u32,
}

fn ign_agg(x: &[u32], n: usize, r: &mut Round, tag: u32) -> IgnAgg {
    let mut buf = Vec::with_capacity(n * n);
    let mut row = Vec::with_capacity(n);
    let mut col = Vec::with_capacity(n);
    for u in 0..n {
        buf.clear();
        buf.extend_from_slice(&x[u * n..(u + 1) * n]);
        row.push(r.multiset(tag, &mut buf));
        buf.clear();
        buf.extend((0..n).map(|w| x[w * n + u]));
        col.push(r.multiset(tag + 1, &mut buf));
    }
    buf.clear();
    buf.extend((0..n).map(|w| x[w * n + w]));
    let diag = r.multiset(tag + 2, &mut buf);
    buf.clear();
    buf.extend_from_slice(x);
    let all = r.multiset(tag + 3, &mut buf);
    IgnAgg { row, col, diag, all }
}

/// The fifteen aggregations of one 2-IGN layer at (u,v).
fn push_ign(key: &mut Vec<u32>, x: &[u32], n: usize, a: &IgnAgg, u: usize, v: usize) {
    let on_diag = u == v;
    let delta = |c: u32| if on_diag { c } else { ABSENT };
    key.extend_from_slice(&[
        x[u * n + v],
        x[u * n + u],
        x[v * n + v],
        x[v * n + u],
        delta(x[u * n + u]),
        a.row[u],
        a.col[u],
        a.row[v],
        a.col[v],
        a.diag,
        a.all,
        delta(a.row[u]),
        delta(a.col[u]),
        delta(a.diag),
        delta(a.all),
    ]);
}

fn ign_step(old: &[Vec<u32>], r: &mut Round) -> Vec<Vec<u32>> {
    let mut out = Vec::with_capacity(old.len());
    for x in old {
        let n = side(x.len());
        let agg = ign_agg(x, n, r, IGN_SLICE);
        let mut next = Vec::with_capacity(n * n);
        for u in 0..n {
            for v in 0..n {
                push_ign(&mut r.key, x, n, &agg, u, v);
                next.push(r.commit());
            }
        }
        out.push(next);
    }
    out
}

/// u != v: hash(chi(u,v), chi(u,u), chi(v,v)); u = v: hash(chi(u,u), {{(chi(u,v), chi(v,v)) : v}}).
fn girt_step(old: &[Vec<u32>], r: &mut Round) -> Vec<Vec<u32>> {
    let mut items = Vec::new();
    let mut out = Vec::with_capacity(old.len());
    for x in old {
        let n = side(x.len());
        let mut next = Vec::with_capacity(n * n);
        for u in 0..n {
            for v in 0..n {
                if u == v {
                    items.clear();
                    items.extend((0..n).map(|w| [x[u * n + w], x[w * n + w]]));
                    r.key.extend_from_slice(&[0, x[u * n + u]]);
                    push_sorted(&mut r.key, &mut items);
                } else {
                    r.key.extend_from_slice(&[1, x[u * n + v], x[u * n + u], x[v * n + v]]);
                }
                next.push(r.commit());
            }
        }
        out.push(next);
    }
    out
}

// ---- eigenvalue-tagged pair updates ----

/// {{chi(l,u,v) : l}} as an aux id per pair.
fn spectral_pool(x: &[u32], lams: usize, n: usize, r: &mut Round) -> Vec<u32> {
    let nn = n * n;
    let mut buf = Vec::with_capacity(lams);
    (0..nn)
        .map(|e| {
            buf.clear();
            buf.extend((0..lams).map(|l| x[l * nn + e]));
            r.multiset(M_SP, &mut buf)
        })
        .collect()
}

/// Siamese IGN applies one IGN layer per eigenvalue slice; the full spectral IGN also
/// hashes an IGN layer over the eigenvalue-pooled pair coloring.
fn spectral_step(old: &[Vec<u32>], r: &mut Round, lams: &[usize], full: bool) -> Vec<Vec<u32>> {
    let mut out = Vec::with_capacity(old.len());
    for (x, &m) in old.iter().zip(lams) {
        let nn = x.len() / m.max(1);
        let n = side(nn);
        let aggs: Vec<IgnAgg> = (0..m).map(|l| ign_agg(&x[l * nn..(l + 1) * nn], n, r, IGN_SLICE)).collect();
        let pooled = full.then(|| {
            let s = spectral_pool(x, m, n, r);
            let a = ign_agg(&s, n, r, IGN_POOLED);
            (s, a)
        });
        let mut next = Vec::with_capacity(x.len());
        for (l, agg) in aggs.iter().enumerate() {
            let slice = &x[l * nn..(l + 1) * nn];
            for u in 0..n {
                for v in 0..n {
                    push_ign(&mut r.key, slice, n, agg, u, v);
                    if let Some((s, a)) = &pooled {
                        push_ign(&mut r.key, s, n, a, u, v);
                    }
                    next.push(r.commit());
                }
            }
        }
        out.push(next);
    }
    out
}

// ---- poolings ----

fn sorted(x: &[u32]) -> Vec<u32> {
    let mut v = x.to_vec();
    v.sort_unstable();
    v
}

/// Multiset over u of the multiset over v of chi(u,v).
fn pool_rows(x: &[u32], n: usize, r: &mut Round) -> Vec<u32> {
    let mut buf = Vec::with_capacity(n);
    let mut rows: Vec<u32> = (0..n)
        .map(|u| {
            buf.clear();
            buf.extend_from_slice(&x[u * n..(u + 1) * n]);
            r.multiset(M_POOL_ROW, &mut buf)
        })
        .collect();
    rows.sort_unstable();
    rows
}

/// Node colors u -> {{chi(u,v) : v}}, interned jointly.
fn rows_to_nodes(pairs: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let mut r = Round::new();
    pairs
        .iter()
        .map(|x| {
            let n = side(x.len());
            (0..n)
                .map(|u| {
                    r.key.extend_from_slice(&x[u * n..(u + 1) * n]);
                    r.key.sort_unstable();
                    r.commit()
                })
                .collect()
        })
        .collect()
}

// ---- drivers ----

fn node_outcome(fp: Fixpoint) -> Outcome {
    Outcome {
        signature_keys: fp.colors.iter().map(|c| sorted(c)).collect(),
        node_colors: Some(fp.colors),
        pair_colors: None,
        rounds: fp.rounds,
    }
}

fn constant(graphs: &[Graph]) -> Vec<Vec<u32>> {
    graphs.iter().map(|g| vec![0; g.n()]).collect()
}

pub(crate) fn run(spec: &AlgorithmSpec, graphs: &[Graph], prec: &Precision) -> Result<Outcome> {
    for g in graphs {
        spec.validate(g)?;
    }
    let mut values = Values::new();
    use AlgorithmSpec::*;
    match spec {
        Wl1 => {
            let atp = atp_tables(graphs);
            Ok(node_outcome(fixpoint(constant(graphs), |x, r| node_step(x, r, &atp))?))
        }
        Epwl(k) => {
            let p = pair_ids(graphs, *k, prec, &mut values)?;
            Ok(node_outcome(fixpoint(constant(graphs), |x, r| node_step(x, r, &p))?))
        }
        Gdwl(d) => {
            let dist = distance_ids(graphs, d, prec, &mut values)?;
            Ok(node_outcome(fixpoint(constant(graphs), |x, r| node_step(x, r, &dist))?))
        }
        Peg(k) => {
            let p = pair_ids(graphs, *k, prec, &mut values)?;
            Ok(node_outcome(fixpoint(constant(graphs), |x, r| peg_step(x, r, &p))?))
        }
        Swl | Pswl => {
            let atp = atp_tables(graphs);
            let init: Vec<Vec<u32>> = atp.iter().map(|t| t.iter().map(|&c| u32::from(c == 0)).collect()).collect();
            let partial = matches!(spec, Pswl);
            let fp = fixpoint(init, |x, r| subgraph_step(x, r, &atp, partial))?;
            let mut pool = Round::new();
            let keys = fp.colors.iter().map(|x| pool_rows(x, side(x.len()), &mut pool)).collect();
            Ok(pair_outcome(fp, keys))
        }
        Fwl2 => {
            let fp = fixpoint(atp_tables(graphs), fwl2_step)?;
            let keys = fp.colors.iter().map(|c| sorted(c)).collect();
            Ok(pair_outcome(fp, keys))
        }
        Ign2(init) => {
            let init = match init {
                PairInit::Atomic => atp_tables(graphs),
                PairInit::Projection(k) => pair_ids(graphs, *k, prec, &mut values)?,
            };
            let fp = fixpoint(init, ign_step)?;
            let keys = fp.colors.iter().map(|c| sorted(c)).collect();
            Ok(pair_outcome(fp, keys))
        }
        Girt { k } => {
            let fp = fixpoint(girt_ids(graphs, *k, prec, &mut values), girt_step)?;
            let keys = fp
                .colors
                .iter()
                .map(|x| {
                    let n = side(x.len());
                    sorted(&(0..n).map(|u| x[u * n + u]).collect::<Vec<_>>())
                })
                .collect();
            Ok(pair_outcome(fp, keys))
        }
        SpectralIgn(k) | SiameseIgn(k) | WeakSpectralIgn(k) => {
            let (lams, init) = spectral_init(graphs, *k, false, prec, &mut values)?;
            let full = matches!(spec, SpectralIgn(_));
            let fp = fixpoint(init, |x, r| spectral_step(x, r, &lams, full))?;
            let mut pool = Round::new();
            let keys = fp
                .colors
                .iter()
                .zip(&lams)
                .map(|(x, &m)| {
                    let n = side(x.len() / m.max(1));
                    match spec {
                        SpectralIgn(_) => {
                            let s = spectral_pool(x, m, n, &mut pool);
                            let mut buf = Vec::with_capacity(n);
                            let mut nodes: Vec<u32> = (0..n)
                                .map(|u| {
                                    buf.clear();
                                    buf.extend_from_slice(&s[u * n..(u + 1) * n]);
                                    pool.multiset(M_P2, &mut buf)
                                })
                                .collect();
                            nodes.sort_unstable();
                            nodes
                        }
                        WeakSpectralIgn(_) => sorted(&spectral_pool(x, m, n, &mut pool)),
                        _ => sorted(x),
                    }
                })
                .collect();
            Ok(Outcome { signature_keys: keys, node_colors: None, pair_colors: None, rounds: fp.rounds })
        }
        BasisNet { kind, layers } => {
            let (lams, init) = spectral_init(graphs, *kind, true, prec, &mut values)?;
            let fp = fixpoint(init, |x, r| spectral_step(x, r, &lams, false))?;
            let nodes = basis_pool(&fp.colors, &lams);
            let atp = atp_tables(graphs);
            let nodes = iterate(nodes, *layers, |x, r| node_step(x, r, &atp))?;
            Ok(Outcome {
                signature_keys: nodes.iter().map(|c| sorted(c)).collect(),
                node_colors: Some(nodes),
                pair_colors: None,
                rounds: fp.rounds + layers,
            })
        }
        Spe(k) => {
            let init = pair_ids(graphs, *k, prec, &mut values)?;
            let pairs = fixpoint(init, ign_step)?;
            let atp = atp_tables(graphs);
            let nodes = fixpoint(rows_to_nodes(&pairs.colors), |x, r| node_step(x, r, &atp))?;
            let rounds = pairs.rounds + nodes.rounds;
            let mut out = node_outcome(nodes);
            out.rounds = rounds;
            out.pair_colors = Some(pairs.colors);
            Ok(out)
        }
    }
}

fn pair_outcome(fp: Fixpoint, keys: Vec<Vec<u32>>) -> Outcome {
    Outcome { signature_keys: keys, node_colors: None, pair_colors: Some(fp.colors), rounds: fp.rounds }
}

/// BP then SP1: (l,u) -> hash(chi(l,u,u), R_l(u), C_l(u), Diag_l, All_l), then
/// u -> {{BP(l,u) : l}}.
fn basis_pool(colors: &[Vec<u32>], lams: &[usize]) -> Vec<Vec<u32>> {
    let mut bp_round = Round::new();
    let bp: Vec<Vec<u32>> = colors
        .iter()
        .zip(lams)
        .map(|(x, &m)| {
            let nn = x.len() / m.max(1);
            let n = side(nn);
            let mut out = Vec::with_capacity(m * n);
            for l in 0..m {
                let slice = &x[l * nn..(l + 1) * nn];
                let a = ign_agg(slice, n, &mut bp_round, IGN_SLICE);
                for u in 0..n {
                    bp_round.key.extend_from_slice(&[slice[u * n + u], a.row[u], a.col[u], a.diag, a.all]);
                    out.push(bp_round.commit());
                }
            }
            out
        })
        .collect();
    let mut r = Round::new();
    bp.iter()
        .zip(lams)
        .map(|(b, &m)| {
            let n = b.len() / m.max(1);
            (0..n)
                .map(|u| {
                    r.key.extend((0..m).map(|l| b[l * n + u]));
                    r.key.sort_unstable();
                    r.commit()
                })
                .collect()
        })
        .collect()
}
