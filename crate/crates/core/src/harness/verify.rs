use std::collections::HashMap;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::config::RunConfig;
use crate::biconnect::biconnectivity_report;
use crate::distances::{cross_validate, distance, DistValue, DistanceKind};
use crate::error::Result;
use crate::exact::exact_pair_token_table;
use crate::graph::{build_matrix, Graph, MatrixKind};
use crate::graph6::{read_pair_corpus, PairRecord};
use crate::refinement::{compare_runs, stable_coloring_with, AlgorithmSpec, Run};
use crate::spectral::{decompose_graph, decompose_with, pair_token_table, validate_decomposition, PairToken, Precision};

/// Tolerance for "constant distance" groups (SPD is compared exactly).
pub const DISTANCE_GROUP_TOL: f64 = 1e-6;

#[derive(Clone, Debug, Serialize)]
pub struct PropertyResult {
    pub name: String,
    pub checked: usize,
    pub violations: usize,
    pub pass: bool,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub millis: Option<u128>,
}

impl PropertyResult {
    fn new(name: impl Into<String>, checked: usize, violations: usize, detail: impl Into<String>) -> Self {
        PropertyResult { name: name.into(), checked, violations, pass: violations == 0, detail: detail.into(), millis: None }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub version: String,
    pub config_hash: String,
    pub precision: Precision,
    pub graphs: usize,
    pub warnings: Vec<String>,
    pub properties: Vec<PropertyResult>,
}

impl VerifyReport {
    pub fn pass(&self) -> bool {
        self.properties.iter().all(|p| p.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn without_isolated(corpus: &[Graph]) -> Vec<Graph> {
    corpus.iter().filter(|g| !g.has_isolated() && g.n() > 0).cloned().collect()
}

pub fn check_spectral_residuals(corpus: &[Graph], prec: &Precision) -> Result<PropertyResult> {
    let rows: Vec<(usize, usize, f64)> = corpus
        .par_iter()
        .map(|g| {
            let mut checked = 0;
            let mut bad = 0;
            let mut worst = 0.0f64;
            for kind in MatrixKind::MAIN {
                if kind == MatrixKind::NormalizedLaplacian && g.has_isolated() {
                    continue;
                }
                let m = build_matrix(g, kind)?;
                let r = validate_decomposition(&decompose_with(&m, prec.eig_rel_tol)?, &m);
                checked += 1;
                bad += usize::from(!r.pass());
                worst = worst.max(r.max());
            }
            Ok((checked, bad, worst))
        })
        .collect::<Result<_>>()?;
    let worst = rows.iter().map(|r| r.2).fold(0.0, f64::max);
    Ok(PropertyResult::new(
        "spectral residuals",
        rows.iter().map(|r| r.0).sum(),
        rows.iter().map(|r| r.1).sum(),
        format!("max residual {worst:.3e}"),
    ))
}

/// Float and exact tokens must induce the same partition of all ordered pairs of all graphs.
pub fn check_exact_agreement(corpus: &[Graph], prec: &Precision) -> Result<PropertyResult> {
    let mut checked = 0;
    let mut violations = 0;
    for kind in [MatrixKind::Adjacency, MatrixKind::Laplacian] {
        let tables: Vec<(Vec<PairToken>, Vec<crate::exact::ExactPairToken>)> = corpus
            .par_iter()
            .map(|g| Ok((pair_token_table(&decompose_graph(g, kind, prec)?, prec), exact_pair_token_table(g, kind)?)))
            .collect::<Result<_>>()?;
        let mut f2e = HashMap::new();
        let mut e2f = HashMap::new();
        for (floats, exacts) in &tables {
            for (f, e) in floats.iter().zip(exacts) {
                checked += 1;
                let a = f2e.entry(f).or_insert(e);
                let b = e2f.entry(e).or_insert(f);
                if *a != e || *b != f {
                    violations += 1;
                }
            }
        }
    }
    Ok(PropertyResult::new("exact/float pair partitions (A, L)", checked, violations, ""))
}

pub fn check_distance_cross_forms(corpus: &[Graph]) -> Result<PropertyResult> {
    let graphs = without_isolated(corpus);
    let rows: Vec<Vec<(String, f64, bool)>> = graphs
        .par_iter()
        .map(|g| {
            DistanceKind::all_default()
                .iter()
                .map(|k| cross_validate(g, k).map(|c| (k.to_string(), c.max_residual, c.pass)))
                .collect::<Result<_>>()
        })
        .collect::<Result<_>>()?;
    let flat: Vec<&(String, f64, bool)> = rows.iter().flatten().collect();
    let worst = flat.iter().map(|r| r.1).fold(0.0, f64::max);
    Ok(PropertyResult::new(
        "distance cross-forms",
        flat.len(),
        flat.iter().filter(|r| !r.2).count(),
        format!("max residual {worst:.3e}"),
    ))
}

/// Ordered pairs with equal (EPWL(Lhat) color of u, of v, Lhat projection token) must
/// agree in every distance.
pub fn check_distance_bound(corpus: &[Graph], prec: &Precision) -> Result<PropertyResult> {
    let graphs = without_isolated(corpus);
    let run = stable_coloring_with(&AlgorithmSpec::Epwl(MatrixKind::NormalizedLaplacian), &graphs, prec)?;
    let kinds = DistanceKind::all_default();
    let per_graph: Vec<(Vec<PairToken>, Vec<crate::distances::DistanceMatrix>)> = graphs
        .par_iter()
        .map(|g| {
            let tokens = pair_token_table(&decompose_graph(g, MatrixKind::NormalizedLaplacian, prec)?, prec);
            let d = kinds.iter().map(|k| distance(g, k)).collect::<Result<_>>()?;
            Ok((tokens, d))
        })
        .collect::<Result<_>>()?;
    let mut first: HashMap<(u32, u32, &PairToken), (usize, usize, usize)> = HashMap::new();
    let mut checked = 0;
    let mut violations = 0;
    let mut example = String::new();
    for (gi, (tokens, dists)) in per_graph.iter().enumerate() {
        let n = graphs[gi].n();
        let c = run.node_colors(gi).expect("node colors");
        for u in 0..n {
            for v in 0..n {
                checked += 1;
                let (hg, hu, hv) = *first.entry((c[u], c[v], &tokens[u * n + v])).or_insert((gi, u, v));
                for (ki, k) in kinds.iter().enumerate() {
                    let a = dists[ki].get(u, v);
                    let b = per_graph[hg].1[ki].get(hu, hv);
                    let same = match (a, b) {
                        (DistValue::Finite(x), DistValue::Finite(y)) if *k == DistanceKind::Spd => x == y,
                        (DistValue::Finite(x), DistValue::Finite(y)) => (x - y).abs() <= DISTANCE_GROUP_TOL,
                        (x, y) => x == y,
                    };
                    if !same {
                        violations += 1;
                        if example.is_empty() {
                            example = format!("{k}: graph {gi} ({u},{v}) vs graph {hg} ({hu},{hv})");
                        }
                    }
                }
            }
        }
    }
    Ok(PropertyResult::new("distances constant on EPWL(Lhat) pair classes", checked, violations, example))
}

pub struct Direction {
    pub finer: AlgorithmSpec,
    pub coarser: AlgorithmSpec,
    pub equivalent: bool,
}

impl Direction {
    pub fn label(&self) -> String {
        let rel = if self.equivalent { "equivalent to" } else { "refines" };
        format!("{} {rel} {}", self.finer, self.coarser)
    }
}

/// The refinement directions of the hierarchy, as (finer, coarser) spec pairs.
pub fn hierarchy_directions() -> Vec<Direction> {
    use AlgorithmSpec::*;
    let refines = |a, b| Direction { finer: a, coarser: b, equivalent: false };
    let equals = |a, b| Direction { finer: a, coarser: b, equivalent: true };
    let mut v = Vec::new();
    for m in MatrixKind::MAIN {
        v.push(refines(Epwl(m), Wl1));
        v.push(refines(Pswl, Epwl(m)));
    }
    v.push(refines(Fwl2, Pswl));
    for d in DistanceKind::all_default() {
        v.push(refines(Epwl(MatrixKind::NormalizedLaplacian), Gdwl(d)));
    }
    for m in MatrixKind::MAIN {
        v.push(equals(SpectralIgn(m), Epwl(m)));
        v.push(refines(SpectralIgn(m), WeakSpectralIgn(m)));
        v.push(refines(WeakSpectralIgn(m), SiameseIgn(m)));
        v.push(refines(WeakSpectralIgn(m), BasisNet { kind: m, layers: 1 }));
        v.push(equals(Spe(m), SpectralIgn(m)));
    }
    v.push(refines(Epwl(MatrixKind::NormalizedLaplacian), Peg(MatrixKind::NormalizedLaplacian)));
    v.push(refines(Epwl(MatrixKind::NormalizedLaplacian), Girt { k: crate::refinement::DEFAULT_GIRT_K }));
    v
}

/// Runs every spec once over `graphs`, in parallel, keyed by its text form.
fn run_all(specs: &[AlgorithmSpec], graphs: &[Graph], prec: &Precision) -> Result<HashMap<String, Run>> {
    let mut uniq: Vec<&AlgorithmSpec> = Vec::new();
    for s in specs {
        if !uniq.contains(&s) {
            uniq.push(s);
        }
    }
    let runs: Vec<Run> = uniq.par_iter().map(|s| stable_coloring_with(s, graphs, prec)).collect::<Result<_>>()?;
    Ok(runs.into_iter().map(|r| (r.spec().to_string(), r)).collect())
}

pub fn check_hierarchy(corpus: &[Graph], prec: &Precision) -> Result<Vec<PropertyResult>> {
    let graphs = without_isolated(corpus);
    let dirs = hierarchy_directions();
    let specs: Vec<AlgorithmSpec> = dirs.iter().flat_map(|d| [d.finer.clone(), d.coarser.clone()]).collect();
    let runs = run_all(&specs, &graphs, prec)?;
    dirs.iter()
        .map(|d| {
            let r = compare_runs(&runs[&d.finer.to_string()], &runs[&d.coarser.to_string()])?;
            let violations = r.violations_a_to_b + if d.equivalent { r.violations_b_to_a } else { 0 };
            let strict = if d.equivalent { None } else { r.witnesses_b_to_a.first().copied() };
            let detail = format!(
                "{:?}; classes {} vs {}; violating pairs {:?}; first strict pair {:?}",
                r.relation,
                r.classes_a,
                r.classes_b,
                if d.equivalent { [r.witnesses_a_to_b, r.witnesses_b_to_a].concat() } else { r.witnesses_a_to_b },
                strict
            );
            Ok(PropertyResult::new(d.label(), graphs.len(), violations, detail))
        })
        .collect()
}

/// Equal stable PSWL pair colors imply equal projection tokens, for A, L and Lhat.
pub fn check_pswl_pair_tokens(corpus: &[Graph], prec: &Precision) -> Result<PropertyResult> {
    let graphs = without_isolated(corpus);
    let run = stable_coloring_with(&AlgorithmSpec::Pswl, &graphs, prec)?;
    let mut checked = 0;
    let mut violations = 0;
    for kind in MatrixKind::MAIN {
        let tables: Vec<Vec<PairToken>> = graphs
            .par_iter()
            .map(|g| Ok(pair_token_table(&decompose_graph(g, kind, prec)?, prec)))
            .collect::<Result<_>>()?;
        let mut seen: HashMap<u32, &PairToken> = HashMap::new();
        for (gi, t) in tables.iter().enumerate() {
            for (c, tok) in run.pair_colors(gi).expect("pair colors").iter().zip(t) {
                checked += 1;
                if *seen.entry(*c).or_insert(tok) != tok {
                    violations += 1;
                }
            }
        }
    }
    Ok(PropertyResult::new("equal PSWL pair colors imply equal projection tokens", checked, violations, ""))
}

/// Graphs with equal EPWL(Lhat) signatures must agree on cut-vertex, cut-edge and block counts.
pub fn check_biconnectivity(corpus: &[Graph], prec: &Precision) -> Result<PropertyResult> {
    let graphs = without_isolated(corpus);
    let run = stable_coloring_with(&AlgorithmSpec::Epwl(MatrixKind::NormalizedLaplacian), &graphs, prec)?;
    let mut violations = 0;
    let mut example = String::new();
    for bucket in run.buckets() {
        let key = |i: usize| {
            let r = biconnectivity_report(&graphs[i]);
            (r.cut_vertices.len(), r.cut_edges.len(), r.biconnected_component_count)
        };
        let k0 = key(bucket[0]);
        for &i in &bucket[1..] {
            if key(i) != k0 {
                violations += 1;
                if example.is_empty() {
                    example = format!("graphs {} and {i}", bucket[0]);
                }
            }
        }
    }
    Ok(PropertyResult::new("EPWL(Lhat) separates biconnectivity profiles", graphs.len(), violations, example))
}

/// Every catalogue spec gives a graph and a seeded relabeling the same signature.
pub fn check_isomorphism_invariance(corpus: &[Graph], prec: &Precision, seed: u64) -> Result<PropertyResult> {
    let graphs = without_isolated(corpus);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut joint = graphs.clone();
    for g in &graphs {
        let mut perm: Vec<usize> = (0..g.n()).collect();
        perm.shuffle(&mut rng);
        joint.push(g.permute(&perm));
    }
    let specs = AlgorithmSpec::catalogue();
    let runs = run_all(&specs, &joint, prec)?;
    let m = graphs.len();
    let mut violations = 0;
    let mut example = String::new();
    for s in &specs {
        let r = &runs[&s.to_string()];
        for i in 0..m {
            if r.signature(i).id() != r.signature(i + m).id() {
                violations += 1;
                if example.is_empty() {
                    example = format!("{s} on graph {i}");
                }
            }
        }
    }
    Ok(PropertyResult::new("isomorphism invariance", m * specs.len(), violations, example))
}

/// On a pair corpus: WL1 count <= EPWL(M) count <= FWL2 count, pairwise.
pub fn check_pair_ordering(pairs: &[PairRecord], prec: &Precision) -> Result<PropertyResult> {
    let usable: Vec<&PairRecord> = pairs.iter().filter(|p| !p.a.has_isolated() && !p.b.has_isolated()).collect();
    let flat: Vec<Graph> = usable.iter().flat_map(|p| [p.a.clone(), p.b.clone()]).collect();
    let mut specs = vec![AlgorithmSpec::Wl1, AlgorithmSpec::Fwl2];
    specs.extend(MatrixKind::MAIN.map(AlgorithmSpec::Epwl));
    let runs = run_all(&specs, &flat, prec)?;
    let split = |s: &AlgorithmSpec| -> Vec<bool> {
        let r = &runs[&s.to_string()];
        (0..usable.len()).map(|i| r.signature(2 * i).id() != r.signature(2 * i + 1).id()).collect()
    };
    let wl = split(&AlgorithmSpec::Wl1);
    let fwl = split(&AlgorithmSpec::Fwl2);
    let mut violations = 0;
    let mut counts = vec![format!("wl1={}", wl.iter().filter(|x| **x).count())];
    for m in MatrixKind::MAIN {
        let ep = split(&AlgorithmSpec::Epwl(m));
        violations += (0..usable.len()).filter(|&i| (wl[i] && !ep[i]) || (ep[i] && !fwl[i])).count();
        counts.push(format!("epwl:{m}={}", ep.iter().filter(|x| **x).count()));
    }
    counts.push(format!("fwl2={}", fwl.iter().filter(|x| **x).count()));
    Ok(PropertyResult::new("pair corpus: wl1 <= epwl <= fwl2", usable.len(), violations, counts.join(" ")))
}

pub fn cmd_verify(cfg: &RunConfig, corpus: &[Graph]) -> Result<VerifyReport> {
    let prec = cfg.precision()?;
    let mut warnings = Vec::new();
    if corpus.is_empty() {
        warnings.push("empty corpus: graph properties pass vacuously".to_string());
    }
    let isolated = corpus.iter().filter(|g| g.has_isolated()).count();
    if isolated > 0 {
        warnings.push(format!("{isolated} graphs with isolated vertices skipped by Lhat-based checks"));
    }
    let pairs = match &cfg.pairs {
        Some(p) => read_pair_corpus(&std::fs::read_to_string(p)?)?,
        None => read_pair_corpus(super::REGRESSION_CORPUS)?,
    };
    let mut props = Vec::new();
    let timed = |props: &mut Vec<PropertyResult>, f: &dyn Fn() -> Result<Vec<PropertyResult>>| -> Result<()> {
        let t = Instant::now();
        let mut out = f()?;
        if cfg.timing {
            let ms = t.elapsed().as_millis();
            for p in &mut out {
                p.millis = Some(ms);
            }
        }
        props.extend(out);
        Ok(())
    };
    cfg.install(|| -> Result<()> {
        timed(&mut props, &|| Ok(vec![check_spectral_residuals(corpus, &prec)?]))?;
        timed(&mut props, &|| Ok(vec![check_exact_agreement(corpus, &prec)?]))?;
        timed(&mut props, &|| Ok(vec![check_distance_cross_forms(corpus)?]))?;
        timed(&mut props, &|| Ok(vec![check_distance_bound(corpus, &prec)?]))?;
        timed(&mut props, &|| check_hierarchy(corpus, &prec))?;
        timed(&mut props, &|| Ok(vec![check_pswl_pair_tokens(corpus, &prec)?]))?;
        timed(&mut props, &|| Ok(vec![check_biconnectivity(corpus, &prec)?]))?;
        timed(&mut props, &|| Ok(vec![check_isomorphism_invariance(corpus, &prec, cfg.seed)?]))?;
        timed(&mut props, &|| Ok(vec![check_pair_ordering(&pairs, &prec)?]))?;
        Ok(())
    })??;
    Ok(VerifyReport {
        version: crate::VERSION.to_string(),
        config_hash: cfg.hash(),
        precision: prec,
        graphs: corpus.len(),
        warnings,
        properties: props,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::connected_corpus;

    #[test]
    fn small_corpus_passes() {
        let corpus = connected_corpus(2, 5).unwrap();
        let r = cmd_verify(&RunConfig::default(), &corpus).unwrap();
        for p in &r.properties {
            assert!(p.pass, "{} -> {}", p.name, p.detail);
        }
    }

    #[test]
    fn one_digit_breaks_exact_agreement() {
        let corpus = connected_corpus(2, 7).unwrap();
        let prec = Precision::new(1, 1e-8).unwrap();
        assert!(!check_exact_agreement(&corpus, &prec).unwrap().pass);
    }

    #[test]
    fn empty_corpus_is_vacuous() {
        let r = cmd_verify(&RunConfig::default(), &[]).unwrap();
        assert!(r.pass());
        assert!(!r.warnings.is_empty());
    }
}
