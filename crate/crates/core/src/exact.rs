//! Exact rational certificates for projection invariants.
//!
//! For M with distinct eigenvalues lambda_1..lambda_m, M^k(u,v) = sum_i lambda_i^k P_i(u,v).
//! The squarefree part of the characteristic polynomial fixes the set of distinct
//! eigenvalues and has degree m, and the moments for k < m are an invertible
//! (Vandermonde) image of the projection entries. So for A and L the token below is
//! equal exactly when the projection invariants are equal.

use num::{BigInt, BigRational, One, Zero};

use crate::error::{Error, Result};
use crate::graph::{Graph, MatrixKind};

type Q = BigRational;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactPairToken {
    pub kind: MatrixKind,
    /// Monic squarefree part of the characteristic polynomial, lowest degree first.
    pub radical: Vec<Q>,
    /// (deg u, deg v); only set for the normalized Laplacian.
    pub degrees: Option<(usize, usize)>,
    /// M^k(u,v) for k = 0..deg(radical); for the normalized Laplacian, (D^-1 L)^k(u,v).
    pub moments: Vec<Q>,
}

#[derive(Clone, Debug)]
struct QMat {
    n: usize,
    a: Vec<Q>,
}

impl QMat {
    fn zeros(n: usize) -> QMat {
        QMat { n, a: vec![Q::zero(); n * n] }
    }

    fn identity(n: usize) -> QMat {
        let mut m = QMat::zeros(n);
        for i in 0..n {
            m.a[i * n + i] = Q::one();
        }
        m
    }

    fn at(&self, i: usize, j: usize) -> &Q {
        &self.a[i * self.n + j]
    }

    fn mul(&self, o: &QMat) -> QMat {
        let n = self.n;
        let mut out = QMat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let x = self.at(i, k);
                if x.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let y = o.at(k, j);
                    if !y.is_zero() {
                        out.a[i * n + j] += x * y;
                    }
                }
            }
        }
        out
    }

    fn trace(&self) -> Q {
        (0..self.n).fold(Q::zero(), |acc, i| acc + self.at(i, i))
    }
}

fn int(x: i64) -> Q {
    Q::from_integer(BigInt::from(x))
}

/// The integer/rational matrix whose powers enter the token.
fn token_matrix(g: &Graph, kind: MatrixKind) -> Result<QMat> {
    let n = g.n();
    let deg = g.degrees();
    let mut m = QMat::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let adj = g.has_edge(i, j);
            m.a[i * n + j] = match kind {
                MatrixKind::Adjacency => int(adj as i64),
                MatrixKind::Laplacian => {
                    if i == j {
                        int(deg[i] as i64)
                    } else {
                        int(-(adj as i64))
                    }
                }
                MatrixKind::NormalizedLaplacian => {
                    if deg[i] == 0 {
                        return Err(Error::domain("normalized Laplacian undefined on a graph with isolated vertices"));
                    }
                    if i == j {
                        Q::one()
                    } else if adj {
                        Q::new(BigInt::from(-1), BigInt::from(deg[i]))
                    } else {
                        Q::zero()
                    }
                }
                MatrixKind::Degree => {
                    return Err(Error::domain("exact tokens are provided for A, L and Lhat only"));
                }
            };
        }
    }
    Ok(m)
}

/// Faddeev-LeVerrier; coefficients lowest degree first, monic of degree n.
fn charpoly(m: &QMat) -> Vec<Q> {
    let n = m.n;
    let mut c = vec![Q::zero(); n + 1];
    c[n] = Q::one();
    let mut mk = QMat::zeros(n);
    let id = QMat::identity(n);
    for k in 1..=n {
        let mut next = m.mul(&mk);
        for i in 0..n {
            next.a[i * n + i] += &c[n - k + 1] * id.at(i, i);
        }
        mk = next;
        let t = m.mul(&mk).trace();
        c[n - k] = -t / int(k as i64);
    }
    c
}

fn trim(p: &mut Vec<Q>) {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn derivative(p: &[Q]) -> Vec<Q> {
    let mut d: Vec<Q> = p.iter().enumerate().skip(1).map(|(i, c)| c * int(i as i64)).collect();
    if d.is_empty() {
        d.push(Q::zero());
    }
    trim(&mut d);
    d
}

/// (quotient, remainder) of a / b, b nonzero and trimmed.
fn divrem(a: &[Q], b: &[Q]) -> (Vec<Q>, Vec<Q>) {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    if r.len() - 1 < db {
        return (vec![Q::zero()], r);
    }
    let lead = &b[db];
    let mut q = vec![Q::zero(); r.len() - db];
    for shift in (0..r.len() - db).rev() {
        let coef = &r[shift + db] / lead;
        if !coef.is_zero() {
            for (i, bc) in b.iter().enumerate() {
                r[shift + i] -= &coef * bc;
            }
        }
        q[shift] = coef;
    }
    r.truncate(db.max(1));
    trim(&mut r);
    trim(&mut q);
    (q, r)
}

fn monic(mut p: Vec<Q>) -> Vec<Q> {
    trim(&mut p);
    let lead = p.last().cloned().expect("nonempty");
    if !lead.is_zero() {
        for c in &mut p {
            *c /= &lead;
        }
    }
    p
}

fn gcd(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !(y.len() == 1 && y[0].is_zero()) {
        let (_, r) = divrem(&x, &y);
        x = y;
        y = r;
    }
    monic(x)
}

/// Monic squarefree part p / gcd(p, p').
fn radical(p: &[Q]) -> Vec<Q> {
    let g = gcd(p, &derivative(p));
    let (q, r) = divrem(p, &g);
    debug_assert!(r.iter().all(Zero::is_zero));
    monic(q)
}

/// Exact tokens for every ordered pair, row-major. Powers are shared across pairs.
pub fn exact_pair_token_table(g: &Graph, kind: MatrixKind) -> Result<Vec<ExactPairToken>> {
    let n = g.n();
    let m = token_matrix(g, kind)?;
    let rad = radical(&charpoly(&m));
    let count = rad.len() - 1;
    let mut powers = vec![QMat::identity(n)];
    for k in 1..count {
        powers.push(powers[k - 1].mul(&m));
    }
    let deg = g.degrees();
    let mut out = Vec::with_capacity(n * n);
    for u in 0..n {
        for v in 0..n {
            out.push(ExactPairToken {
                kind,
                radical: rad.clone(),
                degrees: (kind == MatrixKind::NormalizedLaplacian).then_some((deg[u], deg[v])),
                moments: powers.iter().map(|p| p.at(u, v).clone()).collect(),
            });
        }
    }
    Ok(out)
}

pub fn exact_pair_token(g: &Graph, kind: MatrixKind, u: usize, v: usize) -> Result<ExactPairToken> {
    if u >= g.n() || v >= g.n() {
        return Err(Error::domain(format!("vertex pair ({u},{v}) out of range")));
    }
    let table = exact_pair_token_table(g, kind)?;
    Ok(table[u * g.n() + v].clone())
}

/// Characteristic polynomial of the token matrix, exposed for tests and reports.
pub fn characteristic_polynomial(g: &Graph, kind: MatrixKind) -> Result<Vec<Q>> {
    Ok(charpoly(&token_matrix(g, kind)?))
}

pub fn squarefree_part(p: &[Q]) -> Vec<Q> {
    radical(p)
}

impl ExactPairToken {
    pub fn distinct_eigenvalue_count(&self) -> usize {
        self.radical.len() - 1
    }

    pub fn render(&self) -> String {
        let fmt = |v: &[Q]| v.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(",");
        format!(
            "{}|rad[{}]|deg{:?}|mom[{}]",
            self.kind,
            fmt(&self.radical),
            self.degrees,
            fmt(&self.moments)
        )
    }
}
