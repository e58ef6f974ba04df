//! Uniform-POVM tomography, eigenvalue bucketing and the spectral
//! disturbance diagnostics used to audit it.

use crate::error::{Error, Result};
use crate::linalg::{fidelity, trace_distance, tv_distance, CMat, DensityMatrix, EigenDecomposition, Hermitian};
use crate::povm::{check_projector, mean_estimator, measure_batch, PovmRecord};
use crate::rng::StreamKey;

/// Average of single-copy estimators. BOTTOM records are rejected.
pub fn tomography_estimate(records: &[PovmRecord]) -> Result<Hermitian> {
    if records.is_empty() {
        return Err(Error::EmptySample);
    }
    if records.iter().any(|r| r.is_bottom()) {
        return Err(Error::BottomRecord);
    }
    mean_estimator(records)
}

/// Measures `n` copies and returns the tomography estimate.
pub fn tomography(rho: &DensityMatrix, n: usize, key: &StreamKey) -> Result<Hermitian> {
    tomography_estimate(&measure_batch(rho, n, key)?)
}

#[derive(Clone, Debug)]
pub struct BucketingOutcome {
    pub rho_hat: Hermitian,
    /// Projector onto eigenvectors of `rho_hat` with eigenvalue >= B.
    pub pi: CMat,
    pub rank: usize,
    pub threshold: f64,
    /// Eigensystem of `rho_hat`, values non-increasing.
    pub eigen: EigenDecomposition,
}

impl BucketingOutcome {
    /// Top-r eigenvalues of the estimate.
    pub fn large_values(&self) -> &[f64] {
        &self.eigen.values[..self.rank]
    }

    /// I - Pi
    pub fn complement(&self) -> CMat {
        &CMat::identity(self.pi.dim()) - &self.pi
    }
}

/// Splits the eigenvectors of `rho_hat` at threshold `b` (ties go to the
/// large bucket).
pub fn bucket(rho_hat: &Hermitian, b: f64) -> Result<BucketingOutcome> {
    if !(b > 0.0 && b <= 1.0) {
        return Err(Error::InvalidArgument(format!("threshold B = {b} outside (0, 1]")));
    }
    let eigen = rho_hat.eigh()?;
    let rank = eigen.values.iter().filter(|&&x| x >= b).count();
    let pi = eigen.projector(0..rank);
    Ok(BucketingOutcome { rho_hat: rho_hat.clone(), pi, rank, threshold: b, eigen })
}

fn pinch(rho: &DensityMatrix, pi: &CMat) -> Result<(Hermitian, Hermitian)> {
    check_projector(pi, rho.dim())?;
    let comp = &CMat::identity(rho.dim()) - pi;
    Ok((rho.hermitian().sandwich(pi), rho.hermitian().sandwich(&comp)))
}

/// TV(spec(Pi rho Pi + Pi' rho Pi'), spec(rho)).
pub fn alignment_error(rho: &DensityMatrix, pi: &CMat) -> Result<f64> {
    let (a, b) = pinch(rho, pi)?;
    let pinched = Hermitian::symmetrize(&(a.matrix() + b.matrix()));
    Ok(tv_distance(&pinched.eigenvalues()?, &rho.hermitian().eigenvalues()?))
}

/// ||Pi' rho Pi'||_inf
pub fn misclassification(rho: &DensityMatrix, pi: &CMat) -> Result<f64> {
    let (_, b) = pinch(rho, pi)?;
    b.operator_norm()
}

/// TV between the top-r eigenvalues of the estimate and of rho.
pub fn large_bucket_spectrum_error(rho: &DensityMatrix, outcome: &BucketingOutcome) -> Result<f64> {
    let r = outcome.rank;
    let truth = rho.hermitian().eigenvalues()?;
    Ok(tv_distance(outcome.large_values(), &truth[..r]))
}

/// V diag(top-r eigenvalues clipped at zero) V^dagger.
pub fn truncate_to_rank(a: &Hermitian, r: usize) -> Result<Hermitian> {
    let e = a.eigh()?;
    let mut out = CMat::zeros(a.dim());
    for k in 0..r.min(a.dim()) {
        let w = e.values[k].max(0.0);
        out = &out + &e.projector([k]).scale(w);
    }
    Ok(Hermitian::symmetrize(&out))
}

fn check_low_rank_psd(a: &Hermitian, r: usize) -> Result<Vec<f64>> {
    let vals = a.eigenvalues()?;
    let scale = vals.first().copied().unwrap_or(0.0).abs().max(1.0);
    let min = vals.last().copied().unwrap_or(0.0);
    if min < -1e-10 * scale {
        return Err(Error::NotPsd { min_eigenvalue: min });
    }
    let rank = vals.iter().filter(|&&x| x > 1e-10 * scale).count();
    if rank > r {
        return Err(Error::InvalidArgument(format!("argument has rank {rank} > {r}")));
    }
    Ok(vals)
}

/// sum_{i<=r} alpha_i + tr(A) - 2 F(rho, A) for PSD A of rank at most r.
pub fn fidelity_pca_error(rho: &DensityMatrix, a: &Hermitian, r: usize) -> Result<f64> {
    check_low_rank_psd(a, r)?;
    let alpha = rho.hermitian().eigenvalues()?;
    let top: f64 = alpha.iter().take(r).sum();
    Ok(top + a.trace() - 2.0 * fidelity(rho.hermitian(), a)?)
}

/// 2 D_tr(rho, A) - sum_{i>r} alpha_i for PSD A of rank at most r.
pub fn trace_pca_error(rho: &DensityMatrix, a: &Hermitian, r: usize) -> Result<f64> {
    check_low_rank_psd(a, r)?;
    let alpha = rho.hermitian().eigenvalues()?;
    let tail: f64 = alpha.iter().skip(r).sum();
    Ok(2.0 * trace_distance(rho.hermitian(), a)? - tail)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimpleAudit {
    pub is_simple: bool,
    /// Alignment error of the measurement.
    pub epsilon: f64,
    /// 1 - F(rho, Pi / tr Pi); `None` when Pi = 0.
    pub infidelity: Option<f64>,
}

impl SimpleAudit {
    /// For simple bucketings the infidelity is at most the alignment error.
    pub fn bound_holds(&self, slack: f64) -> bool {
        !self.is_simple || self.infidelity.is_some_and(|f| f <= self.epsilon + slack)
    }
}

/// Audit of {Pi, I - Pi} against rho = P / r.
pub fn simple_bucketing_audit(rho: &DensityMatrix, pi: &CMat) -> Result<SimpleAudit> {
    let d = rho.dim();
    let vals = rho.hermitian().eigenvalues()?;
    let r = vals.iter().filter(|&&x| x > 1e-9).count();
    if r == 0 || vals.iter().any(|&x| x > 1e-9 && (x - 1.0 / r as f64).abs() > 1e-9) {
        return Err(Error::InvalidArgument("state is not maximally mixed on a subspace".into()));
    }
    check_projector(pi, d)?;
    let half = CMat::identity(d).scale(0.5 / r as f64);
    let shifted = Hermitian::symmetrize(&(rho.matrix() - &half));
    let comp = &CMat::identity(d) - pi;
    let upper_ok = shifted.sandwich(pi).eigenvalues()?.last().copied().unwrap_or(0.0) >= -1e-10;
    let lower_ok = shifted.sandwich(&comp).eigenvalues()?.first().copied().unwrap_or(0.0) <= 1e-10;
    let epsilon = alignment_error(rho, pi)?;
    let tr = pi.trace().re;
    let infidelity = if tr > 0.5 {
        let target = Hermitian::symmetrize(&pi.scale(1.0 / tr));
        Some(1.0 - fidelity(rho.hermitian(), &target)?)
    } else {
        None
    };
    Ok(SimpleAudit { is_simple: upper_ok && lower_ok, epsilon, infidelity })
}
