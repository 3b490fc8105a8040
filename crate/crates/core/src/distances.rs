//! The seven graph distances, each with an independent second computation path.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{build_matrix, Graph, MatrixKind};
use crate::spectral::{decompose, Precision, SpectralDecomposition};

/// Default PageRank truncation: weights 0.5^k for k = 0..=16.
pub const DEFAULT_PRD_K: usize = 16;
pub const DEFAULT_DIFFUSION_TAU: f64 = 1.0;
pub const CROSS_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum DistanceKind {
    Spd,
    Rd,
    Htd,
    Ctd,
    Prd(Vec<f64>),
    Diffusion(f64),
    Biharmonic,
}

impl DistanceKind {
    pub fn default_prd() -> DistanceKind {
        DistanceKind::Prd((0..=DEFAULT_PRD_K).map(|k| 0.5f64.powi(k as i32)).collect())
    }

    /// One instance of every kind with default parameters.
    pub fn all_default() -> Vec<DistanceKind> {
        vec![
            DistanceKind::Spd,
            DistanceKind::Rd,
            DistanceKind::Htd,
            DistanceKind::Ctd,
            DistanceKind::default_prd(),
            DistanceKind::Diffusion(DEFAULT_DIFFUSION_TAU),
            DistanceKind::Biharmonic,
        ]
    }

    pub fn needs_no_isolated(&self) -> bool {
        matches!(self, DistanceKind::Prd(_) | DistanceKind::Diffusion(_))
    }
}

impl fmt::Display for DistanceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DistanceKind::Spd => f.write_str("spd"),
            DistanceKind::Rd => f.write_str("rd"),
            DistanceKind::Htd => f.write_str("htd"),
            DistanceKind::Ctd => f.write_str("ctd"),
            DistanceKind::Prd(w) => {
                let ws: Vec<String> = w.iter().map(|x| x.to_string()).collect();
                write!(f, "prd:w={}", ws.join(","))
            }
            DistanceKind::Diffusion(t) => write!(f, "diffusion:tau={t}"),
            DistanceKind::Biharmonic => f.write_str("biharmonic"),
        }
    }
}

impl FromStr for DistanceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (head, param) = match s.split_once(':') {
            Some((h, p)) => (h, Some(p)),
            None => (s, None),
        };
        let value = |key: &str| -> Result<Option<&str>> {
            match param {
                None => Ok(None),
                Some(p) => p
                    .strip_prefix(key)
                    .and_then(|r| r.strip_prefix('='))
                    .map(Some)
                    .ok_or_else(|| Error::usage(format!("expected `{key}=...` in distance `{s}`"))),
            }
        };
        let num = |x: &str| x.trim().parse::<f64>().map_err(|_| Error::usage(format!("bad number `{x}` in `{s}`")));
        let plain = |k: DistanceKind| match param {
            None => Ok(k),
            Some(_) => Err(Error::usage(format!("distance `{head}` takes no parameters"))),
        };
        match head {
            "spd" => plain(DistanceKind::Spd),
            "rd" => plain(DistanceKind::Rd),
            "htd" => plain(DistanceKind::Htd),
            "ctd" => plain(DistanceKind::Ctd),
            "biharmonic" => plain(DistanceKind::Biharmonic),
            "prd" => match value("w")? {
                None => Ok(DistanceKind::default_prd()),
                Some(ws) => {
                    let w = ws.split(',').map(num).collect::<Result<Vec<f64>>>()?;
                    if w.is_empty() {
                        return Err(Error::usage("prd needs at least one weight"));
                    }
                    Ok(DistanceKind::Prd(w))
                }
            },
            "diffusion" => {
                let tau = value("tau")?.map(num).transpose()?.unwrap_or(DEFAULT_DIFFUSION_TAU);
                if !(tau >= 0.0 && tau.is_finite()) {
                    return Err(Error::usage("diffusion time must be finite and >= 0"));
                }
                Ok(DistanceKind::Diffusion(tau))
            }
            _ => Err(Error::usage(format!("unknown distance `{head}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum DistValue {
    Finite(f64),
    Infinite,
}

impl DistValue {
    pub fn finite(self) -> Option<f64> {
        match self {
            DistValue::Finite(x) => Some(x),
            DistValue::Infinite => None,
        }
    }

    /// Token used by GD-WL: quantized value or a dedicated infinity marker.
    pub fn token(self, prec: &Precision) -> [i64; 2] {
        match self {
            DistValue::Finite(x) => [0, prec.quantize(x)],
            DistValue::Infinite => [1, 0],
        }
    }
}

impl fmt::Display for DistValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DistValue::Finite(x) => write!(f, "{x:.17e}"),
            DistValue::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    values: Vec<DistValue>,
    pub symmetric: bool,
}

impl DistanceMatrix {
    fn new(n: usize, symmetric: bool) -> Self {
        DistanceMatrix { n, values: vec![DistValue::Infinite; n * n], symmetric }
    }

    fn from_fn(n: usize, symmetric: bool, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut m = DistanceMatrix::new(n, symmetric);
        for u in 0..n {
            for v in 0..n {
                m.set(u, v, f(u, v));
            }
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, u: usize, v: usize) -> DistValue {
        self.values[u * self.n + v]
    }

    fn set(&mut self, u: usize, v: usize, x: f64) {
        self.values[u * self.n + v] = DistValue::Finite(x);
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("u,v,value\n");
        for u in 0..self.n {
            for v in 0..self.n {
                s.push_str(&format!("{u},{v},{}\n", self.get(u, v)));
            }
        }
        s
    }

    /// Max |a - b| over entries finite in both; `None` if the infinity patterns differ.
    pub fn max_diff(&self, other: &DistanceMatrix) -> Option<f64> {
        let mut worst = 0.0f64;
        for (a, b) in self.values.iter().zip(&other.values) {
            match (a, b) {
                (DistValue::Finite(x), DistValue::Finite(y)) => worst = worst.max((x - y).abs()),
                (DistValue::Infinite, DistValue::Infinite) => {}
                _ => return None,
            }
        }
        Some(worst)
    }

    /// Largest violation of d(u,w) <= d(u,v) + d(v,w) over finite triples (0 if none).
    pub fn triangle_violation(&self) -> f64 {
        let mut worst = 0.0f64;
        for u in 0..self.n {
            for v in 0..self.n {
                let Some(a) = self.get(u, v).finite() else { continue };
                for w in 0..self.n {
                    let (Some(b), Some(c)) = (self.get(v, w).finite(), self.get(u, w).finite()) else {
                        continue;
                    };
                    worst = worst.max(c - a - b);
                }
            }
        }
        worst
    }

    /// Relabel: entry (u,v) moves to (perm[u], perm[v]).
    pub fn permute(&self, perm: &[usize]) -> DistanceMatrix {
        let mut out = DistanceMatrix::new(self.n, self.symmetric);
        for u in 0..self.n {
            for v in 0..self.n {
                out.values[perm[u] * self.n + perm[v]] = self.get(u, v);
            }
        }
        out
    }
}

fn require_no_isolated(g: &Graph, what: &str) -> Result<()> {
    if g.has_isolated() {
        return Err(Error::domain(format!("{what} is undefined on graphs with isolated vertices")));
    }
    Ok(())
}

/// Runs `f` on every connected component (as an induced subgraph) and scatters the
/// block into an all-infinite matrix.
fn per_component(
    g: &Graph,
    symmetric: bool,
    f: impl Fn(&Graph) -> Result<DMatrix<f64>>,
) -> Result<DistanceMatrix> {
    let mut out = DistanceMatrix::new(g.n(), symmetric);
    for comp in g.components() {
        let sub = g.induced_subgraph(&comp);
        let block = f(&sub)?;
        for (i, &a) in comp.iter().enumerate() {
            for (j, &b) in comp.iter().enumerate() {
                out.set(a, b, block[(i, j)]);
            }
        }
    }
    Ok(out)
}

fn kernel_tol(d: &SpectralDecomposition) -> f64 {
    let scale = d.eigenvalues.iter().fold(1.0f64, |a, l| a.max(l.abs()));
    1e-8 * scale
}

/// Spectral pseudo-inverse of f(M): sum over non-kernel clusters of P_i / f(lambda_i).
fn spectral_pinv(d: &SpectralDecomposition, f: impl Fn(f64) -> f64) -> DMatrix<f64> {
    let n = d.n();
    let tol = kernel_tol(d);
    let mut out = DMatrix::zeros(n, n);
    for (lam, p) in d.eigenvalues.iter().zip(&d.projections) {
        if lam.abs() > tol {
            out += p / f(*lam);
        }
    }
    out
}

fn decomposition(g: &Graph, kind: MatrixKind) -> Result<SpectralDecomposition> {
    decompose(&build_matrix(g, kind)?)
}

fn laplacian_pinv(g: &Graph) -> Result<DMatrix<f64>> {
    Ok(spectral_pinv(&decomposition(g, MatrixKind::Laplacian)?, |l| l))
}

fn resistance_from_pinv(p: &DMatrix<f64>) -> DMatrix<f64> {
    let n = p.nrows();
    DMatrix::from_fn(n, n, |u, v| if u == v { 0.0 } else { p[(u, u)] + p[(v, v)] - 2.0 * p[(u, v)] })
}

pub fn spd(g: &Graph) -> DistanceMatrix {
    let n = g.n();
    let mut out = DistanceMatrix::new(n, true);
    for s in 0..n {
        let mut dist = vec![usize::MAX; n];
        dist[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            for v in g.neighbors(u) {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    q.push_back(v);
                }
            }
        }
        for (t, &d) in dist.iter().enumerate() {
            if d != usize::MAX {
                out.set(s, t, d as f64);
            }
        }
    }
    out
}

/// SPD(u,v) = min{ i : Ahat^i(u,v) > 0 } with Ahat = D^-1/2 A D^-1/2. Products of
/// nonnegative entries keep exact zeros, so the support test needs no tolerance.
pub fn spd_min_power(g: &Graph) -> DistanceMatrix {
    let n = g.n();
    let deg = g.degrees();
    let inv_sqrt: Vec<f64> = deg.iter().map(|&d| if d == 0 { 0.0 } else { 1.0 / (d as f64).sqrt() }).collect();
    let ahat = DMatrix::from_fn(n, n, |i, j| if g.has_edge(i, j) { inv_sqrt[i] * inv_sqrt[j] } else { 0.0 });
    let mut out = DistanceMatrix::new(n, true);
    let mut power = DMatrix::<f64>::identity(n, n);
    for i in 0..n.max(1) {
        for u in 0..n {
            for v in 0..n {
                if power[(u, v)] > 0.0 && out.get(u, v) == DistValue::Infinite {
                    out.set(u, v, i as f64);
                }
            }
        }
        power = &power * &ahat;
    }
    out
}

pub fn resistance(g: &Graph) -> Result<DistanceMatrix> {
    per_component(g, true, |sub| Ok(resistance_from_pinv(&laplacian_pinv(sub)?)))
}

/// RD through the normalized Laplacian pseudo-inverse with degree factors.
pub fn resistance_normalized_form(g: &Graph) -> Result<DistanceMatrix> {
    per_component(g, true, |sub| {
        let n = sub.n();
        if n == 1 {
            return Ok(DMatrix::zeros(1, 1));
        }
        let p = spectral_pinv(&decomposition(sub, MatrixKind::NormalizedLaplacian)?, |l| l);
        let d: Vec<f64> = sub.degrees().into_iter().map(|x| x as f64).collect();
        Ok(DMatrix::from_fn(n, n, |u, v| {
            if u == v {
                0.0
            } else {
                p[(u, u)] / d[u] + p[(v, v)] / d[v] - 2.0 * p[(u, v)] / (d[u] * d[v]).sqrt()
            }
        }))
    })
}

/// Expected steps of a walk from u until it first reaches v, via the closed form
/// M = L+ D J - J D L+ + 2|E| J diag(L+) - 2|E| L+ on each component.
pub fn hitting_time(g: &Graph) -> Result<DistanceMatrix> {
    per_component(g, false, |sub| {
        let n = sub.n();
        let p = laplacian_pinv(sub)?;
        let d: Vec<f64> = sub.degrees().into_iter().map(|x| x as f64).collect();
        let two_e = 2.0 * sub.edge_count() as f64;
        let row: Vec<f64> = (0..n).map(|u| (0..n).map(|w| p[(u, w)] * d[w]).sum()).collect();
        Ok(DMatrix::from_fn(n, n, |u, v| {
            if u == v {
                0.0
            } else {
                row[u] - row[v] + two_e * p[(v, v)] - two_e * p[(u, v)]
            }
        }))
    })
}

/// Hitting times from the first-step recursion h(u) = 1 + mean_{w ~ u} h(w), h(v) = 0,
/// solved as a linear system per target.
pub fn hitting_time_recursion(g: &Graph) -> Result<DistanceMatrix> {
    per_component(g, false, |sub| {
        let n = sub.n();
        let mut out = DMatrix::zeros(n, n);
        if n == 1 {
            return Ok(out);
        }
        let deg: Vec<f64> = sub.degrees().into_iter().map(|x| x as f64).collect();
        for v in 0..n {
            let others: Vec<usize> = (0..n).filter(|&x| x != v).collect();
            let k = others.len();
            let sys = DMatrix::from_fn(k, k, |i, j| {
                let (a, b) = (others[i], others[j]);
                if a == b {
                    deg[a]
                } else if sub.has_edge(a, b) {
                    -1.0
                } else {
                    0.0
                }
            });
            let rhs = nalgebra::DVector::from_fn(k, |i, _| deg[others[i]]);
            let h = sys
                .lu()
                .solve(&rhs)
                .ok_or_else(|| Error::Numeric("singular hitting-time system".into()))?;
            for (i, &u) in others.iter().enumerate() {
                out[(u, v)] = h[i];
            }
        }
        Ok(out)
    })
}

pub fn commute_time(g: &Graph) -> Result<DistanceMatrix> {
    let h = hitting_time(g)?;
    let n = g.n();
    let mut out = DistanceMatrix::new(n, true);
    for u in 0..n {
        for v in 0..n {
            if let (Some(a), Some(b)) = (h.get(u, v).finite(), h.get(v, u).finite()) {
                out.set(u, v, a + b);
            }
        }
    }
    Ok(out)
}

/// CTD through 2|E_c| RD, with |E_c| the edge count of the component.
pub fn commute_time_from_resistance(g: &Graph) -> Result<DistanceMatrix> {
    per_component(g, true, |sub| {
        let r = resistance_from_pinv(&laplacian_pinv(sub)?);
        Ok(r * (2.0 * sub.edge_count() as f64))
    })
}

/// Truncated sum_k gamma_k W^k with W = D^-1 A.
pub fn pagerank_distance(g: &Graph, weights: &[f64]) -> Result<DistanceMatrix> {
    require_no_isolated(g, "PageRank distance")?;
    let n = g.n();
    let deg = g.degrees();
    let w = DMatrix::from_fn(n, n, |i, j| if g.has_edge(i, j) { 1.0 / deg[i] as f64 } else { 0.0 });
    let mut acc = DMatrix::<f64>::zeros(n, n);
    let mut power = DMatrix::<f64>::identity(n, n);
    for (k, &gamma) in weights.iter().enumerate() {
        if k > 0 {
            power = &power * &w;
        }
        acc += &power * gamma;
    }
    Ok(DistanceMatrix::from_fn(n, false, |u, v| acc[(u, v)]))
}

/// Spectral form: sum_i (sum_k gamma_k (1 - lambda_i)^k) P_i(u,v) (deg u)^-1/2 (deg v)^1/2
/// over the normalized Laplacian decomposition.
pub fn pagerank_spectral(g: &Graph, weights: &[f64]) -> Result<DistanceMatrix> {
    require_no_isolated(g, "PageRank distance")?;
    let n = g.n();
    let d = decomposition(g, MatrixKind::NormalizedLaplacian)?;
    let deg: Vec<f64> = g.degrees().into_iter().map(|x| x as f64).collect();
    let mut acc = DMatrix::<f64>::zeros(n, n);
    for (lam, p) in d.eigenvalues.iter().zip(&d.projections) {
        let mu = 1.0 - lam;
        let coef: f64 = weights.iter().enumerate().map(|(k, g)| g * mu.powi(k as i32)).sum();
        acc += p * coef;
    }
    Ok(DistanceMatrix::from_fn(n, false, |u, v| acc[(u, v)] * (deg[v] / deg[u]).sqrt()))
}

pub fn diffusion_distance(g: &Graph, tau: f64) -> Result<DistanceMatrix> {
    require_no_isolated(g, "diffusion distance")?;
    let n = g.n();
    let d = decomposition(g, MatrixKind::NormalizedLaplacian)?;
    Ok(DistanceMatrix::from_fn(n, true, |u, v| {
        if u == v {
            return 0.0;
        }
        let sq: f64 = d
            .eigenvalues
            .iter()
            .zip(&d.projections)
            .map(|(lam, p)| (-2.0 * tau * lam).exp() * (p[(u, u)] + p[(v, v)] - 2.0 * p[(u, v)]))
            .sum();
        sq.max(0.0).sqrt()
    }))
}

/// exp(M) by scaling and squaring with a Taylor core.
pub(crate) fn expm(m: &DMatrix<f64>) -> DMatrix<f64> {
    let n = m.nrows();
    let norm = crate::graph::inf_norm(m);
    let mut s = 0;
    while norm / 2f64.powi(s) > 0.25 {
        s += 1;
    }
    let a = m / 2f64.powi(s);
    let mut term = DMatrix::<f64>::identity(n, n);
    let mut sum = term.clone();
    for k in 1..=24 {
        term = &term * &a / k as f64;
        sum += &term;
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    sum
}

/// ||exp(-tau Lhat)(e_u - e_v)|| from a series matrix exponential.
pub fn diffusion_series(g: &Graph, tau: f64) -> Result<DistanceMatrix> {
    let lhat = build_matrix(g, MatrixKind::NormalizedLaplacian)?;
    let e = expm(&(lhat.matrix() * -tau));
    let n = g.n();
    Ok(DistanceMatrix::from_fn(n, true, |u, v| {
        if u == v {
            0.0
        } else {
            (e.column(u) - e.column(v)).norm()
        }
    }))
}

/// (L^2)+(u,u) + (L^2)+(v,v) - 2 (L^2)+(u,v), per component.
pub fn biharmonic(g: &Graph) -> Result<DistanceMatrix> {
    per_component(g, true, |sub| {
        let p = spectral_pinv(&decomposition(sub, MatrixKind::Laplacian)?, |l| l * l);
        Ok(resistance_from_pinv(&p))
    })
}

/// Biharmonic distance through (L + J/n)^-1 - J/n squared, without any eigensolve.
pub fn biharmonic_inverse_form(g: &Graph) -> Result<DistanceMatrix> {
    per_component(g, true, |sub| {
        let n = sub.n();
        let l = build_matrix(sub, MatrixKind::Laplacian)?.into_inner();
        let j = DMatrix::from_element(n, n, 1.0 / n as f64);
        let inv = (l + &j).try_inverse().ok_or_else(|| Error::Numeric("L + J/n is singular".into()))?;
        let pinv = inv - j;
        Ok(resistance_from_pinv(&(&pinv * &pinv)))
    })
}

pub fn distance(g: &Graph, kind: &DistanceKind) -> Result<DistanceMatrix> {
    match kind {
        DistanceKind::Spd => Ok(spd(g)),
        DistanceKind::Rd => resistance(g),
        DistanceKind::Htd => hitting_time(g),
        DistanceKind::Ctd => commute_time(g),
        DistanceKind::Prd(w) => pagerank_distance(g, w),
        DistanceKind::Diffusion(t) => diffusion_distance(g, *t),
        DistanceKind::Biharmonic => biharmonic(g),
    }
}

/// Second computation path for each kind.
pub fn distance_alternate(g: &Graph, kind: &DistanceKind) -> Result<DistanceMatrix> {
    match kind {
        DistanceKind::Spd => Ok(spd_min_power(g)),
        DistanceKind::Rd => resistance_normalized_form(g),
        DistanceKind::Htd => hitting_time_recursion(g),
        DistanceKind::Ctd => commute_time_from_resistance(g),
        DistanceKind::Prd(w) => pagerank_spectral(g, w),
        DistanceKind::Diffusion(t) => diffusion_series(g, *t),
        DistanceKind::Biharmonic => biharmonic_inverse_form(g),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrossCheck {
    /// Max |primary - alternate|; infinite when the infinity patterns disagree.
    pub max_residual: f64,
    pub pass: bool,
}

pub fn cross_validate(g: &Graph, kind: &DistanceKind) -> Result<CrossCheck> {
    let a = distance(g, kind)?;
    let b = distance_alternate(g, kind)?;
    let r = a.max_diff(&b).unwrap_or(f64::INFINITY);
    let tol = if *kind == DistanceKind::Spd { 0.0 } else { CROSS_TOL };
    Ok(CrossCheck { max_residual: r, pass: r <= tol })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::disjoint_union;

    fn fin(m: &DistanceMatrix, u: usize, v: usize) -> f64 {
        m.get(u, v).finite().expect("finite")
    }

    fn near(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn spd_examples() {
        assert_eq!(fin(&spd(&Graph::path(3)), 0, 2), 2.0);
        assert_eq!(fin(&spd(&Graph::complete(2)), 0, 1), 1.0);
        let two = disjoint_union(&Graph::complete(2), &Graph::complete(2));
        assert_eq!(spd(&two).get(0, 2), DistValue::Infinite);
        assert_eq!(spd_min_power(&two).get(1, 3), DistValue::Infinite);
    }

    #[test]
    fn resistance_examples() {
        assert!(near(fin(&resistance(&Graph::complete(2)).unwrap(), 0, 1), 1.0));
        // 1 parallel with (1+1)
        let k3 = resistance(&Graph::complete(3)).unwrap();
        assert!(near(fin(&k3, 0, 2), 2.0 / 3.0));
        // 1 parallel with 3
        assert!(near(fin(&resistance(&Graph::cycle(4)).unwrap(), 0, 1), 0.75));
        let two = disjoint_union(&Graph::complete(2), &Graph::path(3));
        let r = resistance(&two).unwrap();
        assert_eq!(r.get(0, 3), DistValue::Infinite);
        assert!(near(fin(&r, 2, 4), 2.0));
    }

    #[test]
    fn hitting_and_commute_examples() {
        let k2 = Graph::complete(2);
        let h = hitting_time(&k2).unwrap();
        assert!(near(fin(&h, 0, 1), 1.0) && near(fin(&h, 1, 0), 1.0));
        assert!(near(fin(&commute_time(&k2).unwrap(), 0, 1), 2.0));
        // C4 adjacent pair: 2 * 4 * 3/4
        let c = commute_time(&Graph::cycle(4)).unwrap();
        assert!((fin(&c, 0, 1) - 6.0).abs() < 1e-10);
        // P3: end -> middle is one forced step; middle -> end solves h = 1 + h/2 + ... = 3
        let p3 = hitting_time_recursion(&Graph::path(3)).unwrap();
        assert!(near(fin(&p3, 0, 1), 1.0));
        assert!((fin(&p3, 1, 0) - 3.0).abs() < 1e-12);
        let closed = hitting_time(&Graph::path(3)).unwrap();
        assert!(closed.max_diff(&p3).unwrap() < 1e-12);
        for u in 0..3 {
            assert_eq!(fin(&closed, u, u), 0.0);
        }
    }

    #[test]
    fn pagerank_examples() {
        let one_step = [0.0, 1.0];
        assert!(near(fin(&pagerank_distance(&Graph::complete(2), &one_step).unwrap(), 0, 1), 1.0));
        let s3 = pagerank_distance(&Graph::star(3), &one_step).unwrap();
        assert!(near(fin(&s3, 0, 1), 1.0 / 3.0));
        assert!(near(fin(&s3, 1, 0), 1.0));
        let id = pagerank_distance(&Graph::cycle(5), &[1.0]).unwrap();
        for u in 0..5 {
            for v in 0..5 {
                assert_eq!(fin(&id, u, v), if u == v { 1.0 } else { 0.0 });
            }
        }
        assert!(pagerank_distance(&Graph::empty(2), &one_step).is_err());
    }

    #[test]
    fn diffusion_examples() {
        let g = Graph::cycle(5);
        let d0 = diffusion_distance(&g, 0.0).unwrap();
        assert!(near(fin(&d0, 0, 2), 2f64.sqrt()));
        assert_eq!(fin(&d0, 3, 3), 0.0);
        // K2: Lhat spectrum {0, 2}
        let k2 = diffusion_distance(&Graph::complete(2), 1.0).unwrap();
        assert!(near(fin(&k2, 0, 1), 2f64.sqrt() * (-2.0f64).exp()));
    }

    #[test]
    fn biharmonic_examples() {
        let k2 = biharmonic(&Graph::complete(2)).unwrap();
        assert!(near(fin(&k2, 0, 1), 0.5));
        let g = Graph::path(4);
        let b = biharmonic(&g).unwrap();
        for u in 0..4 {
            assert_eq!(fin(&b, u, u), 0.0);
            for v in 0..4 {
                assert_eq!(fin(&b, u, v), fin(&b, v, u));
            }
        }
    }

    #[test]
    fn cross_validation_small() {
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        for kind in DistanceKind::all_default() {
            let c = cross_validate(&g, &kind).unwrap();
            assert!(c.pass, "{kind}: {c:?}");
        }
    }

    #[test]
    fn parse_kinds() {
        assert_eq!("spd".parse::<DistanceKind>().unwrap(), DistanceKind::Spd);
        assert_eq!("prd:w=0,1,0.5".parse::<DistanceKind>().unwrap(), DistanceKind::Prd(vec![0.0, 1.0, 0.5]));
        assert_eq!("diffusion:tau=2".parse::<DistanceKind>().unwrap(), DistanceKind::Diffusion(2.0));
        assert_eq!("diffusion".parse::<DistanceKind>().unwrap(), DistanceKind::Diffusion(1.0));
        assert!("rd:x=1".parse::<DistanceKind>().is_err());
        assert!("prd:q=1".parse::<DistanceKind>().is_err());
        for k in DistanceKind::all_default() {
            assert_eq!(k.to_string().parse::<DistanceKind>().unwrap(), k);
        }
    }

    #[test]
    fn csv_marks_infinity() {
        let two = disjoint_union(&Graph::complete(1), &Graph::complete(1));
        let csv = spd(&two).to_csv();
        assert!(csv.contains("0,1,inf"));
    }
}
