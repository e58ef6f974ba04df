//! Hermitian eigendecomposition through the real symmetric embedding
//! `[[Re A, -Im A], [Im A, Re A]]`, diagonalised by cyclic Jacobi.
//!
//! Every eigenvalue of A appears twice in the embedding. Eigenvectors
//! `(x, y)` of the embedding map to `x + i y`; within a cluster of equal
//! eigenvalues the complex vectors are picked by pivoted Gram-Schmidt.

use super::matrix::{inner, CMat, C64, ZERO};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 80;

#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    /// Non-increasing.
    pub values: Vec<f64>,
    /// Column j is the unit eigenvector for `values[j]`.
    pub vectors: CMat,
}

/// Cyclic Jacobi on a dense symmetric matrix (row-major, overwritten).
/// Returns eigenvalues in input order and, if asked, the rotation matrix
/// whose columns are the eigenvectors.
fn jacobi(a: &mut [f64], n: usize, want_vectors: bool) -> Result<(Vec<f64>, Option<Vec<f64>>)> {
    let mut v = if want_vectors {
        let mut v = vec![0.0; n * n];
        for i in 0..n {
            v[i * n + i] = 1.0;
        }
        Some(v)
    } else {
        None
    };
    let total: f64 = a.iter().map(|x| x * x).sum();
    if total == 0.0 {
        return Ok((vec![0.0; n], v));
    }
    let tol = 1e-28 * total;
    let floor = 1e-20 * total;
    let mut off = f64::INFINITY;
    for _sweep in 0..MAX_SWEEPS {
        let prev = off;
        off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += 2.0 * a[p * n + q] * a[p * n + q];
            }
        }
        // Stop at the target, or once rounding noise stalls progress.
        if off <= tol || (off <= floor && off >= 0.25 * prev) {
            let diag = (0..n).map(|i| a[i * n + i]).collect();
            return Ok((diag, v));
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq * apq <= 1e-36 * total {
                    a[p * n + q] = 0.0;
                    a[q * n + p] = 0.0;
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                if let Some(v) = v.as_mut() {
                    for k in 0..n {
                        let vkp = v[k * n + p];
                        let vkq = v[k * n + q];
                        v[k * n + p] = c * vkp - s * vkq;
                        v[k * n + q] = s * vkp + c * vkq;
                    }
                }
            }
        }
    }
    Err(Error::EigenNoConvergence { sweeps: MAX_SWEEPS, off: off.sqrt() })
}

fn embed(a: &CMat) -> Vec<f64> {
    let d = a.dim();
    let n = 2 * d;
    let mut s = vec![0.0; n * n];
    for i in 0..d {
        for j in 0..d {
            // symmetrise on the fly so tiny Hermitian residue cannot leak in
            let z = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
            s[i * n + j] = z.re;
            s[(i + d) * n + (j + d)] = z.re;
            s[i * n + (j + d)] = -z.im;
            s[(i + d) * n + j] = z.im;
        }
    }
    s
}

/// Eigenvalues of a Hermitian matrix, non-increasing.
pub fn eigvalsh(a: &CMat) -> Result<Vec<f64>> {
    let d = a.dim();
    let mut s = embed(a);
    let (mut vals, _) = jacobi(&mut s, 2 * d, false)?;
    vals.sort_by(|x, y| y.total_cmp(x));
    Ok((0..d).map(|i| 0.5 * (vals[2 * i] + vals[2 * i + 1])).collect())
}

/// Full eigendecomposition of a Hermitian matrix.
pub fn eigh(a: &CMat) -> Result<EigenDecomposition> {
    let d = a.dim();
    if d == 0 {
        return Ok(EigenDecomposition { values: vec![], vectors: CMat::zeros(0) });
    }
    let n = 2 * d;
    let mut s = embed(a);
    let (vals, vecs) = jacobi(&mut s, n, true)?;
    let vecs = vecs.expect("vectors requested");
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| vals[y].total_cmp(&vals[x]));

    let scale = vals.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(1e-300);
    let cluster_tol = 1e-9 * scale;

    let mut chosen: Vec<Vec<C64>> = Vec::with_capacity(d);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && vals[order[end - 1]] - vals[order[end]] <= cluster_tol {
            end += 1;
        }
        let want = (end - start) / 2;
        let mut cands: Vec<Vec<C64>> = order[start..end]
            .iter()
            .map(|&c| (0..d).map(|i| C64::new(vecs[i * n + c], vecs[(i + d) * n + c])).collect())
            .collect();
        // Project out vectors already chosen in earlier clusters.
        for c in cands.iter_mut() {
            for q in &chosen {
                let p = inner(q, c);
                for (ci, qi) in c.iter_mut().zip(q) {
                    *ci -= p * qi;
                }
            }
        }
        for _ in 0..want {
            let (best, nrm) = cands
                .iter()
                .enumerate()
                .map(|(i, c)| (i, c.iter().map(|z| z.norm_sqr()).sum::<f64>()))
                .fold((0, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if nrm < 1e-6 {
                break;
            }
            let nrm = nrm.sqrt();
            let q: Vec<C64> = cands[best].iter().map(|z| z / nrm).collect();
            for c in cands.iter_mut() {
                let p = inner(&q, c);
                for (ci, qi) in c.iter_mut().zip(&q) {
                    *ci -= p * qi;
                }
            }
            chosen.push(q);
        }
        start = end;
    }
    if chosen.len() != d {
        return Err(Error::EigenNoConvergence { sweeps: MAX_SWEEPS, off: f64::NAN });
    }
    // Re-orthonormalise once more and attach Rayleigh quotients.
    let mut pairs: Vec<(f64, Vec<C64>)> = Vec::with_capacity(d);
    for mut q in chosen {
        for (_, p) in &pairs {
            let c = inner(p, &q);
            for (qi, pi) in q.iter_mut().zip(p) {
                *qi -= c * pi;
            }
        }
        let nrm = q.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        q.iter_mut().for_each(|z| *z /= nrm);
        let aq = a.apply(&q);
        let lam = inner(&q, &aq).re;
        pairs.push((lam, q));
    }
    pairs.sort_by(|x, y| y.0.total_cmp(&x.0));
    let mut vectors = CMat::zeros(d);
    for (j, (_, q)) in pairs.iter().enumerate() {
        for i in 0..d {
            vectors[(i, j)] = q[i];
        }
    }
    let values = pairs.into_iter().map(|p| p.0).collect();
    Ok(EigenDecomposition { values, vectors })
}

impl EigenDecomposition {
    /// V diag(f(lambda)) V^dagger
    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> CMat {
        let d = self.values.len();
        let mut out = CMat::zeros(d);
        for (k, &lam) in self.values.iter().enumerate() {
            let w = f(lam);
            if w == 0.0 {
                continue;
            }
            for i in 0..d {
                let vi = self.vectors[(i, k)] * w;
                if vi == ZERO {
                    continue;
                }
                for j in 0..d {
                    out[(i, j)] += vi * self.vectors[(j, k)].conj();
                }
            }
        }
        out
    }

    /// Projector onto the span of the given eigenvector columns.
    pub fn projector(&self, cols: impl IntoIterator<Item = usize>) -> CMat {
        let d = self.values.len();
        let mut out = CMat::zeros(d);
        for k in cols {
            for i in 0..d {
                let vi = self.vectors[(i, k)];
                for j in 0..d {
                    out[(i, j)] += vi * self.vectors[(j, k)].conj();
                }
            }
        }
        out
    }
}
