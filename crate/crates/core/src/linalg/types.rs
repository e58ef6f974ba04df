use super::eigen::{eigh, eigvalsh, EigenDecomposition};
use super::matrix::{norm, CMat, C64};
use crate::error::{Error, Result};

const HERM_TOL: f64 = 1e-12;
const PSD_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-10;

/// Hermitian matrix. Construction symmetrises away residue below tolerance.
#[derive(Clone, Debug, PartialEq)]
pub struct Hermitian(CMat);

impl Hermitian {
    pub fn new(m: CMat) -> Result<Self> {
        let residual = m.hermitian_residual();
        if residual > HERM_TOL * m.max_abs().max(1.0) {
            return Err(Error::NotHermitian { residual });
        }
        Ok(Hermitian(m.hermitian_part()))
    }

    /// Hermitian part of `m`, no check.
    pub fn symmetrize(m: &CMat) -> Self {
        Hermitian(m.hermitian_part())
    }

    pub fn zeros(d: usize) -> Self {
        Hermitian(CMat::zeros(d))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &CMat {
        &self.0
    }

    pub fn into_matrix(self) -> CMat {
        self.0
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    pub fn eigh(&self) -> Result<EigenDecomposition> {
        eigh(&self.0)
    }

    /// Non-increasing.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        eigvalsh(&self.0)
    }

    pub fn operator_norm(&self) -> Result<f64> {
        let v = self.eigenvalues()?;
        Ok(v.iter().fold(0.0f64, |m, x| m.max(x.abs())))
    }

    /// P A P
    pub fn sandwich(&self, p: &CMat) -> Hermitian {
        Hermitian::symmetrize(&p.matmul(&self.0).matmul(p))
    }
}

/// Unit-trace positive semidefinite matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(Hermitian);

impl DensityMatrix {
    pub fn new(m: CMat) -> Result<Self> {
        Self::from_hermitian(Hermitian::new(m)?)
    }

    pub fn from_hermitian(h: Hermitian) -> Result<Self> {
        let tr = h.trace();
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::NotNormalized { value: tr, expected: 1.0 });
        }
        let min = h.eigenvalues()?.last().copied().unwrap_or(0.0);
        if min < -PSD_TOL {
            return Err(Error::NotPsd { min_eigenvalue: min });
        }
        Ok(DensityMatrix(h))
    }

    /// Diagonal state with the given probabilities.
    pub fn diagonal(p: &[f64]) -> Result<Self> {
        Self::new(CMat::from_real_diag(p))
    }

    /// |v><v|
    pub fn pure(v: &UnitVector) -> Self {
        DensityMatrix(Hermitian::symmetrize(&CMat::outer(v.as_slice())))
    }

    pub fn maximally_mixed(d: usize) -> Self {
        DensityMatrix(Hermitian(CMat::identity(d).scale(1.0 / d as f64)))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn hermitian(&self) -> &Hermitian {
        &self.0
    }

    pub fn matrix(&self) -> &CMat {
        self.0.matrix()
    }

    /// Non-increasing, negatives from rounding clipped to zero.
    pub fn spectrum(&self) -> Result<Spectrum> {
        Spectrum::new(self.0.eigenvalues()?)
    }

    /// tr(rho^k)
    pub fn power_trace(&self, k: u32) -> Result<f64> {
        Ok(self.0.eigenvalues()?.iter().map(|x| x.max(0.0).powi(k as i32)).sum())
    }
}

/// Unit-norm vector in C^d.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitVector(Vec<C64>);

impl UnitVector {
    pub fn new(v: Vec<C64>) -> Result<Self> {
        let n = norm(&v);
        if (n - 1.0).abs() > 1e-10 {
            return Err(Error::NotNormalized { value: n, expected: 1.0 });
        }
        Ok(UnitVector(v.into_iter().map(|z| z / n).collect()))
    }

    /// Normalises `v`; fails on the zero vector.
    pub fn normalize(v: Vec<C64>) -> Result<Self> {
        let n = norm(&v);
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::NotNormalized { value: n, expected: 1.0 });
        }
        Ok(UnitVector(v.into_iter().map(|z| z / n).collect()))
    }

    pub fn basis(d: usize, i: usize) -> Self {
        let mut v = vec![C64::new(0.0, 0.0); d];
        v[i] = C64::new(1.0, 0.0);
        UnitVector(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.0
    }
}

/// Sorted (non-increasing) vector of probabilities summing to at most one.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum(Vec<f64>);

impl Spectrum {
    /// Sorts `v`; entries in [-1e-12, 0) are clipped to zero.
    pub fn new(mut v: Vec<f64>) -> Result<Self> {
        for x in v.iter_mut() {
            if !x.is_finite() || *x < -1e-12 || *x > 1.0 + 1e-12 {
                return Err(Error::InvalidSpectrum { reason: format!("entry {x} outside [0, 1]") });
            }
            *x = x.clamp(0.0, 1.0);
        }
        let s: f64 = v.iter().sum();
        if s > 1.0 + 1e-12 {
            return Err(Error::InvalidSpectrum { reason: format!("entries sum to {s}") });
        }
        v.sort_by(|a, b| b.total_cmp(a));
        Ok(Spectrum(v))
    }

    pub fn uniform(d: usize) -> Self {
        Spectrum(vec![1.0 / d as f64; d])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    /// sum_i alpha_i^k
    pub fn power_sum(&self, k: u32) -> f64 {
        self.0.iter().map(|x| x.powi(k as i32)).sum()
    }

    /// Padded with zeros to length d (d must be at least `len`).
    pub fn padded(&self, d: usize) -> Vec<f64> {
        let mut v = self.0.clone();
        v.resize(d.max(v.len()), 0.0);
        v
    }
}
