use super::eigen::eigvalsh;
use super::matrix::CMat;
use super::types::{DensityMatrix, Hermitian};
use crate::error::{Error, Result};
use num_complex::Complex64 as C64;

/// Half the l1 distance between two vectors, the shorter one zero-padded.
pub fn tv_distance(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len().max(b.len());
    let at = |v: &[f64], i: usize| v.get(i).copied().unwrap_or(0.0);
    0.5 * (0..n).map(|i| (at(a, i) - at(b, i)).abs()).sum::<f64>()
}

/// TV distance after sorting both vectors non-increasingly.
pub fn sorted_tv_distance(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(|x, y| y.total_cmp(x));
    b.sort_by(|x, y| y.total_cmp(x));
    tv_distance(&a, &b)
}

/// (1/2) ||A - B||_1 for Hermitian A, B.
pub fn trace_distance(a: &Hermitian, b: &Hermitian) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), got: b.dim() });
    }
    let diff = Hermitian::symmetrize(&(a.matrix() - b.matrix()));
    Ok(0.5 * diff.eigenvalues()?.iter().map(|x| x.abs()).sum::<f64>())
}

/// F(A, B) = tr sqrt(sqrt(A) B sqrt(A)) for PSD A, B (not necessarily unit trace).
pub fn fidelity(a: &Hermitian, b: &Hermitian) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), got: b.dim() });
    }
    for m in [a, b] {
        let min = m.eigenvalues()?.last().copied().unwrap_or(0.0);
        if min < -1e-8 * m.matrix().max_abs().max(1.0) {
            return Err(Error::NotPsd { min_eigenvalue: min });
        }
    }
    let x = psd_sqrt(a)?.matmul(&psd_sqrt(b)?);
    trace_norm(&x)
}

/// Square root of a PSD matrix. Eigenvalues at rounding level are treated as exact zeros,
/// otherwise their square roots (~1e-8) would swamp small fidelity gaps.
fn psd_sqrt(m: &Hermitian) -> Result<CMat> {
    let e = m.eigh()?;
    let cutoff = 1e-14 * e.values.first().copied().unwrap_or(0.0).max(0.0);
    Ok(e.map_values(|x| if x > cutoff { x.sqrt() } else { 0.0 }))
}

/// Sum of singular values, read off the eigenvalues +-s_i of [[0, X], [X^dagger, 0]].
fn trace_norm(x: &CMat) -> Result<f64> {
    let n = x.dim();
    let dilation = CMat::from_fn(2 * n, |i, j| match (i < n, j < n) {
        (true, false) => x[(i, j - n)],
        (false, true) => x[(j, i - n)].conj(),
        _ => C64::new(0.0, 0.0),
    });
    Ok(0.5 * eigvalsh(&dilation)?.iter().map(|v| v.abs()).sum::<f64>())
}

pub fn state_fidelity(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    fidelity(a.hermitian(), b.hermitian())
}

/// Operator norm of a Hermitian matrix.
pub fn operator_norm(a: &CMat) -> Result<f64> {
    Hermitian::new(a.clone())?.operator_norm()
}
