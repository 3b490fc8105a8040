//! Eigenspace decompositions, projection matrices and the canonical tokens built on them.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{build_matrix, max_abs, Graph, MatrixKind, SymmetricMatrix};

/// Tolerance for the algebraic identities of a decomposition.
pub const EPS_ALG: f64 = 1e-8;

// Values are first snapped to a 1e-9 grid shifted by an irrational offset, then rounded
// to the requested number of digits. The shift keeps "nice" numbers such as 1/1024 or
// 1/128 away from every rounding boundary, so eigensolver noise cannot flip a digit.
const SNAP: f64 = 1e9;
const SNAP_SHIFT: f64 = std::f64::consts::FRAC_1_PI;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Precision {
    /// Decimal digits kept in tokens (1..=9).
    pub digits: u32,
    /// Relative eigenvalue clustering gap, scaled by max(1, ||M||_inf).
    pub eig_rel_tol: f64,
}

impl Default for Precision {
    fn default() -> Self {
        Precision { digits: 6, eig_rel_tol: 1e-8 }
    }
}

impl Precision {
    pub fn new(digits: u32, eig_rel_tol: f64) -> Result<Self> {
        if !(1..=9).contains(&digits) {
            return Err(Error::usage(format!("quantization digits must be in 1..=9, got {digits}")));
        }
        if !(eig_rel_tol > 0.0 && eig_rel_tol < 1.0) {
            return Err(Error::usage(format!("eigenvalue tolerance must be in (0,1), got {eig_rel_tol}")));
        }
        Ok(Precision { digits, eig_rel_tol })
    }

    /// Integer `q` such that `q * 10^-digits` is the quantized value. Never yields -0.
    pub fn quantize(&self, x: f64) -> i64 {
        let s = (x * SNAP - SNAP_SHIFT).round();
        let scale = 10f64.powi(9 - self.digits as i32);
        ((s + SNAP_SHIFT) / scale).round() as i64
    }

    pub fn format(&self, q: i64) -> String {
        fmt_fixed(q, self.digits)
    }
}

fn fmt_fixed(q: i64, digits: u32) -> String {
    let sign = if q < 0 { '-' } else { '+' };
    let a = q.unsigned_abs();
    let p = 10u64.pow(digits);
    format!("{sign}{:08}.{:0width$}", a / p, a % p, width = digits as usize)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralDecomposition {
    /// Distinct eigenvalues, ascending (cluster means).
    pub eigenvalues: Vec<f64>,
    pub multiplicities: Vec<usize>,
    #[serde(serialize_with = "ser_matrices")]
    pub projections: Vec<DMatrix<f64>>,
}

fn ser_matrices<S: serde::Serializer>(ms: &[DMatrix<f64>], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(ms.len()))?;
    for m in ms {
        let rows: Vec<Vec<f64>> = m.row_iter().map(|r| r.iter().copied().collect()).collect();
        seq.serialize_element(&rows)?;
    }
    seq.end()
}

impl SpectralDecomposition {
    pub fn n(&self) -> usize {
        self.projections.first().map_or(0, |p| p.nrows())
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// JSON dump with 17 significant digits (serde_json's f64 output is round-trip exact).
    pub fn to_json(&self, kind: MatrixKind) -> String {
        #[derive(Serialize)]
        struct Dump<'a> {
            kind: &'a str,
            #[serde(flatten)]
            d: &'a SpectralDecomposition,
        }
        serde_json::to_string(&Dump { kind: kind.short_name(), d: self }).expect("serializable")
    }
}

pub fn decompose(m: &SymmetricMatrix) -> Result<SpectralDecomposition> {
    decompose_with(m, Precision::default().eig_rel_tol)
}

pub fn decompose_with(m: &SymmetricMatrix, eig_rel_tol: f64) -> Result<SpectralDecomposition> {
    let n = m.n();
    if n == 0 {
        return Ok(SpectralDecomposition { eigenvalues: vec![], multiplicities: vec![], projections: vec![] });
    }
    let eig = SymmetricEigen::try_new(m.matrix().clone(), f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Numeric(format!("symmetric eigensolver did not converge on {:?}", m.matrix())))?;
    let tol = eig_rel_tol * m.inf_norm().max(1.0);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let mut clusters: Vec<Vec<usize>> = Vec::new();
    let mut prev = f64::NEG_INFINITY;
    for &i in &order {
        let lam = eig.eigenvalues[i];
        match clusters.last_mut() {
            Some(c) if lam - prev <= tol => c.push(i),
            _ => clusters.push(vec![i]),
        }
        prev = lam;
    }

    let mut eigenvalues = Vec::with_capacity(clusters.len());
    let mut multiplicities = Vec::with_capacity(clusters.len());
    let mut projections = Vec::with_capacity(clusters.len());
    for c in clusters {
        let mean = c.iter().map(|&i| eig.eigenvalues[i]).sum::<f64>() / c.len() as f64;
        let mut p = DMatrix::<f64>::zeros(n, n);
        for &i in &c {
            let z = eig.eigenvectors.column(i);
            p += z * z.transpose();
        }
        // symmetrize away rounding asymmetry so tokens satisfy P(u,v) == P(v,u) exactly
        let p = (&p + p.transpose()) * 0.5;
        eigenvalues.push(mean);
        multiplicities.push(c.len());
        projections.push(p);
    }
    Ok(SpectralDecomposition { eigenvalues, multiplicities, projections })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualReport {
    pub idempotence: f64,
    pub orthogonality: f64,
    pub completeness: f64,
    pub reconstruction: f64,
    pub trace: f64,
}

impl ResidualReport {
    pub fn max(&self) -> f64 {
        [self.idempotence, self.orthogonality, self.completeness, self.reconstruction, self.trace]
            .into_iter()
            .fold(0.0, f64::max)
    }

    pub fn pass(&self) -> bool {
        self.max() <= EPS_ALG
    }
}

pub fn validate_decomposition(d: &SpectralDecomposition, m: &SymmetricMatrix) -> ResidualReport {
    let n = m.n();
    let mut r = ResidualReport { idempotence: 0.0, orthogonality: 0.0, completeness: 0.0, reconstruction: 0.0, trace: 0.0 };
    let mut sum = DMatrix::<f64>::zeros(n, n);
    let mut recon = DMatrix::<f64>::zeros(n, n);
    for (i, p) in d.projections.iter().enumerate() {
        r.idempotence = r.idempotence.max(max_abs(&(p * p - p)));
        for q in &d.projections[i + 1..] {
            r.orthogonality = r.orthogonality.max(max_abs(&(p * q)));
        }
        r.trace = r.trace.max((p.trace() - d.multiplicities[i] as f64).abs());
        sum += p;
        recon += p * d.eigenvalues[i];
    }
    r.completeness = max_abs(&(sum - DMatrix::<f64>::identity(n, n)));
    r.reconstruction = max_abs(&(recon - m.matrix()));
    r
}

/// Canonical encoding of the multiset {(lambda_i, P_i(u,v))}: sorted quantized pairs.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PairToken(Vec<(i64, i64)>);

impl PairToken {
    pub fn from_decomposition(d: &SpectralDecomposition, u: usize, v: usize, prec: &Precision) -> PairToken {
        let mut items: Vec<(i64, i64)> = d
            .eigenvalues
            .iter()
            .zip(&d.projections)
            .map(|(&lam, p)| (prec.quantize(lam), prec.quantize(p[(u, v)])))
            .collect();
        items.sort_unstable();
        PairToken(items)
    }

    pub fn components(&self) -> &[(i64, i64)] {
        &self.0
    }

    /// Sum of the projection components, in units of 10^-digits.
    pub fn projection_sum(&self) -> i64 {
        self.0.iter().map(|c| c.1).sum()
    }

    pub fn render(&self, prec: &Precision) -> String {
        let mut s = String::new();
        for &(l, p) in &self.0 {
            s.push_str(&prec.format(l));
            s.push(':');
            s.push_str(&prec.format(p));
            s.push(';');
        }
        s
    }

    /// Flat i64 encoding used as an interning key.
    pub fn key(&self) -> Vec<i64> {
        self.0.iter().flat_map(|&(a, b)| [a, b]).collect()
    }
}

impl fmt::Display for PairToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&Precision::default()))
    }
}

/// Canonical encoding of the eigenvalue multiset: sorted (quantized lambda, multiplicity).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SpectrumToken(Vec<(i64, usize)>);

impl SpectrumToken {
    pub fn from_decomposition(d: &SpectralDecomposition, prec: &Precision) -> SpectrumToken {
        let mut items: Vec<(i64, usize)> =
            d.eigenvalues.iter().zip(&d.multiplicities).map(|(&l, &m)| (prec.quantize(l), m)).collect();
        items.sort_unstable();
        // quantization may merge two close clusters
        let mut merged: Vec<(i64, usize)> = Vec::with_capacity(items.len());
        for (l, m) in items {
            match merged.last_mut() {
                Some(last) if last.0 == l => last.1 += m,
                _ => merged.push((l, m)),
            }
        }
        SpectrumToken(merged)
    }

    pub fn entries(&self) -> &[(i64, usize)] {
        &self.0
    }
}

pub fn decompose_graph(g: &Graph, kind: MatrixKind, prec: &Precision) -> Result<SpectralDecomposition> {
    decompose_with(&build_matrix(g, kind)?, prec.eig_rel_tol)
}

pub fn pair_token(g: &Graph, kind: MatrixKind, u: usize, v: usize) -> Result<PairToken> {
    pair_token_with(g, kind, u, v, &Precision::default())
}

pub fn pair_token_with(g: &Graph, kind: MatrixKind, u: usize, v: usize, prec: &Precision) -> Result<PairToken> {
    if u >= g.n() || v >= g.n() {
        return Err(Error::domain(format!("vertex pair ({u},{v}) out of range")));
    }
    let d = decompose_graph(g, kind, prec)?;
    Ok(PairToken::from_decomposition(&d, u, v, prec))
}

/// All n^2 tokens, row-major.
pub fn pair_token_table(d: &SpectralDecomposition, prec: &Precision) -> Vec<PairToken> {
    let n = d.n();
    let mut out = Vec::with_capacity(n * n);
    for u in 0..n {
        for v in 0..n {
            out.push(PairToken::from_decomposition(d, u, v, prec));
        }
    }
    out
}

pub fn spectrum_token(g: &Graph, kind: MatrixKind) -> Result<SpectrumToken> {
    spectrum_token_with(g, kind, &Precision::default())
}

pub fn spectrum_token_with(g: &Graph, kind: MatrixKind, prec: &Precision) -> Result<SpectrumToken> {
    Ok(SpectrumToken::from_decomposition(&decompose_graph(g, kind, prec)?, prec))
}

/// Per-(graph, kind) decomposition cache. Two threads may compute the same entry
/// concurrently; the results are identical and the second insert simply wins.
#[derive(Default)]
pub struct DecompositionCache {
    prec: Precision,
    map: Mutex<HashMap<(Graph, MatrixKind), Arc<SpectralDecomposition>>>,
}

impl DecompositionCache {
    pub fn new(prec: Precision) -> Self {
        DecompositionCache { prec, map: Mutex::new(HashMap::new()) }
    }

    pub fn get(&self, g: &Graph, kind: MatrixKind) -> Result<Arc<SpectralDecomposition>> {
        if let Some(d) = self.map.lock().expect("cache lock").get(&(g.clone(), kind)) {
            return Ok(d.clone());
        }
        let d = Arc::new(decompose_graph(g, kind, &self.prec)?);
        self.map.lock().expect("cache lock").insert((g.clone(), kind), d.clone());
        Ok(d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::disjoint_union;

    fn close(a: &DMatrix<f64>, b: &DMatrix<f64>) -> bool {
        max_abs(&(a - b)) < 1e-12
    }

    #[test]
    fn k2_adjacency() {
        let a = build_matrix(&Graph::complete(2), MatrixKind::Adjacency).unwrap();
        let d = decompose(&a).unwrap();
        assert_eq!(d.multiplicities, vec![1, 1]);
        assert!((d.eigenvalues[0] + 1.0).abs() < 1e-14 && (d.eigenvalues[1] - 1.0).abs() < 1e-14);
        let minus = DMatrix::from_row_slice(2, 2, &[0.5, -0.5, -0.5, 0.5]);
        let plus = DMatrix::from_row_slice(2, 2, &[0.5, 0.5, 0.5, 0.5]);
        assert!(close(&d.projections[0], &minus));
        assert!(close(&d.projections[1], &plus));
        let r = validate_decomposition(&d, &a);
        assert!(r.reconstruction < 1e-15, "{r:?}");
    }

    #[test]
    fn c4_normalized_laplacian() {
        let m = build_matrix(&Graph::cycle(4), MatrixKind::NormalizedLaplacian).unwrap();
        let d = decompose(&m).unwrap();
        assert_eq!(d.multiplicities, vec![1, 2, 1]);
        let want = [0.0, 1.0, 2.0];
        for (l, w) in d.eigenvalues.iter().zip(want) {
            assert!((l - w).abs() < 1e-12);
        }
        assert!(close(&d.projections[0], &DMatrix::from_element(4, 4, 0.25)));
    }

    #[test]
    fn identity_single_cluster() {
        let d = decompose(&SymmetricMatrix::identity(5)).unwrap();
        assert_eq!(d.multiplicities, vec![5]);
        assert!(close(&d.projections[0], &DMatrix::identity(5, 5)));
    }

    #[test]
    fn zeroed_projection_breaks_completeness() {
        let m = build_matrix(&Graph::cycle(5), MatrixKind::Adjacency).unwrap();
        let mut d = decompose(&m).unwrap();
        let tr = d.projections[1].trace();
        d.projections[1].fill(0.0);
        let r = validate_decomposition(&d, &m);
        assert!(r.completeness >= tr / 5.0 - 1e-12);
        assert!(!r.pass());
    }

    #[test]
    fn k2_tokens() {
        let k2 = Graph::complete(2);
        let t = pair_token(&k2, MatrixKind::Adjacency, 0, 1).unwrap();
        assert_eq!(t.components(), &[(-1_000_000, -500_000), (1_000_000, 500_000)]);
        assert_eq!(t.to_string(), "-00000001.000000:-00000000.500000;+00000001.000000:+00000000.500000;");
        let s = spectrum_token(&k2, MatrixKind::Adjacency).unwrap();
        assert_eq!(s.entries(), &[(-1_000_000, 1), (1_000_000, 1)]);
    }

    #[test]
    fn complete_graph_laplacian_spectrum() {
        for n in 2..8 {
            let s = spectrum_token(&Graph::complete(n), MatrixKind::Laplacian).unwrap();
            assert_eq!(s.entries(), &[(0, 1), (n as i64 * 1_000_000, n - 1)]);
        }
    }

    #[test]
    fn c6_vs_two_triangles() {
        let c6 = Graph::cycle(6);
        let tt = disjoint_union(&Graph::cycle(3), &Graph::cycle(3));
        let a = spectrum_token(&c6, MatrixKind::Adjacency).unwrap();
        let b = spectrum_token(&tt, MatrixKind::Adjacency).unwrap();
        assert_eq!(a.entries(), &[(-2_000_000, 1), (-1_000_000, 2), (1_000_000, 2), (2_000_000, 1)]);
        assert_eq!(b.entries(), &[(-1_000_000, 4), (2_000_000, 2)]);
        assert_ne!(pair_token(&c6, MatrixKind::Adjacency, 0, 0).unwrap(), pair_token(&tt, MatrixKind::Adjacency, 0, 0).unwrap());
    }

    #[test]
    fn quantization_edges() {
        let p = Precision::default();
        assert_eq!(p.quantize(-0.0), 0);
        assert_eq!(p.quantize(-1e-12), 0);
        assert_eq!(p.quantize(0.5), 500_000);
        // 1/128 sits exactly on a 6-digit half boundary; noise must not flip it
        let base = p.quantize(1.0 / 128.0);
        for k in -50..50 {
            assert_eq!(p.quantize(1.0 / 128.0 + k as f64 * 1e-15), base);
        }
        for k in -50..50 {
            let x = 1.0 / 1024.0 + k as f64 * 1e-15;
            assert_eq!(p.quantize(x), p.quantize(1.0 / 1024.0));
        }
        let coarse = Precision::new(1, 1e-8).unwrap();
        assert_eq!(coarse.quantize(0.26), 3);
        assert_eq!(coarse.format(-3), "-00000000.3");
        assert!(Precision::new(0, 1e-8).is_err());
    }

    #[test]
    fn diagonal_token_sums_to_one() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (1, 3)]).unwrap();
        for kind in MatrixKind::ALL {
            for u in 0..5 {
                let t = pair_token(&g, kind, u, u).unwrap();
                assert!((t.projection_sum() - 1_000_000).abs() <= t.components().len() as i64);
            }
        }
    }

    #[test]
    fn json_dump_has_fields() {
        let d = decompose_graph(&Graph::complete(2), MatrixKind::Adjacency, &Precision::default()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&d.to_json(MatrixKind::Adjacency)).unwrap();
        assert_eq!(v["kind"], "A");
        assert_eq!(v["multiplicities"], serde_json::json!([1, 1]));
        assert_eq!(v["projections"].as_array().unwrap().len(), 2);
    }

    #[test]
    fn cache_returns_same_decomposition() {
        let cache = DecompositionCache::new(Precision::default());
        let g = Graph::cycle(5);
        let a = cache.get(&g, MatrixKind::Laplacian).unwrap();
        let b = cache.get(&g, MatrixKind::Laplacian).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
    }
}
