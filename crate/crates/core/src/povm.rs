//! Uniform-POVM measurements and the single-copy estimators built from them.

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{haar_unitary, CMat, DensityMatrix, Hermitian, UnitVector, C64, ZERO};
use crate::par::try_map_indexed;
use crate::rng::StreamKey;

/// Classical outcome of one measured copy. `outcome` is `None` for BOTTOM.
#[derive(Clone, Debug, PartialEq)]
pub struct PovmRecord {
    dim: usize,
    outcome: Option<UnitVector>,
}

impl PovmRecord {
    pub fn outcome(u: UnitVector) -> Self {
        PovmRecord { dim: u.dim(), outcome: Some(u) }
    }

    pub fn bottom(dim: usize) -> Self {
        PovmRecord { dim, outcome: None }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vector(&self) -> Option<&UnitVector> {
        self.outcome.as_ref()
    }

    pub fn is_bottom(&self) -> bool {
        self.outcome.is_none()
    }
}

/// Measures the Haar-random basis `u` on `m` (Hermitian, trace `total`)
/// with one uniform draw.
fn measure_in_basis<R: Rng + ?Sized>(m: &CMat, u: &CMat, total: f64, rng: &mut R) -> Result<UnitVector> {
    let d = m.dim();
    let mut probs = Vec::with_capacity(d);
    for j in 0..d {
        let col = u.column(j);
        let mc = m.apply(&col);
        let p: C64 = col.iter().zip(&mc).map(|(a, b)| a.conj() * b).sum();
        probs.push(p.re.max(0.0));
    }
    let sum: f64 = probs.iter().sum();
    if (sum - total).abs() > 1e-9 {
        return Err(Error::ProbabilityMismatch { sum: sum / total });
    }
    let x = rng.random::<f64>() * sum;
    let mut acc = 0.0;
    let mut pick = d - 1;
    for (j, p) in probs.iter().enumerate() {
        acc += p;
        if x < acc {
            pick = j;
            break;
        }
    }
    UnitVector::normalize(u.column(pick))
}

/// One copy of `rho` measured with the uniform POVM.
pub fn measure_uniform_povm<R: Rng + ?Sized>(rho: &DensityMatrix, rng: &mut R) -> Result<PovmRecord> {
    let u = haar_unitary(rho.dim(), rng);
    Ok(PovmRecord::outcome(measure_in_basis(rho.matrix(), &u, 1.0, rng)?))
}

/// (d+1)|u><u| - I; BOTTOM is rejected.
pub fn single_copy_estimator(record: &PovmRecord) -> Result<Hermitian> {
    let u = record.vector().ok_or(Error::BottomRecord)?;
    Ok(unit_estimator(u))
}

fn unit_estimator(u: &UnitVector) -> Hermitian {
    let d = u.dim();
    let mut m = CMat::outer(u.as_slice()).scale((d + 1) as f64);
    for i in 0..d {
        m[(i, i)] -= 1.0;
    }
    Hermitian::symmetrize(&m)
}

/// Zero for BOTTOM, otherwise the single-copy estimator.
pub fn conditioned_estimator(record: &PovmRecord) -> Hermitian {
    match record.vector() {
        Some(u) => unit_estimator(u),
        None => Hermitian::zeros(record.dim()),
    }
}

/// Checks that `pi` is an orthogonal projector of matching dimension.
pub fn check_projector(pi: &CMat, d: usize) -> Result<()> {
    if pi.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, got: pi.dim() });
    }
    let residual = pi.matmul(pi).max_abs_diff(pi).max(pi.hermitian_residual());
    if residual > 1e-9 {
        return Err(Error::NotProjector { residual });
    }
    Ok(())
}

/// Two-outcome measurement {Pi, I - Pi} followed, on the second outcome, by
/// the uniform POVM on the collapsed state.
#[derive(Clone, Debug)]
pub struct ConditionedPovm {
    d: usize,
    p_bottom: f64,
    /// (I-Pi) rho (I-Pi) / tr, absent when that branch has zero weight.
    collapsed: Option<CMat>,
}

impl ConditionedPovm {
    pub fn new(rho: &DensityMatrix, pi: &CMat) -> Result<Self> {
        let d = rho.dim();
        check_projector(pi, d)?;
        let p_bottom = pi.trace_product(rho.matrix()).re.clamp(0.0, 1.0);
        let mut comp = CMat::identity(d);
        comp = &comp - pi;
        let sigma = rho.hermitian().sandwich(&comp);
        let w = sigma.trace();
        let collapsed = if w > 1e-14 { Some(sigma.matrix().scale(1.0 / w)) } else { None };
        Ok(ConditionedPovm { d, p_bottom, collapsed })
    }

    pub fn bottom_probability(&self) -> f64 {
        self.p_bottom
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<PovmRecord> {
        let Some(sigma) = &self.collapsed else {
            return Ok(PovmRecord::bottom(self.d));
        };
        if rng.random::<f64>() < self.p_bottom {
            return Ok(PovmRecord::bottom(self.d));
        }
        let u = haar_unitary(self.d, rng);
        Ok(PovmRecord::outcome(measure_in_basis(sigma, &u, 1.0, rng)?))
    }
}

pub fn measure_conditioned<R: Rng + ?Sized>(rho: &DensityMatrix, pi: &CMat, rng: &mut R) -> Result<PovmRecord> {
    ConditionedPovm::new(rho, pi)?.sample(rng)
}

/// `n` independent copies; copy i draws from `key.index(i)`.
pub fn measure_batch(rho: &DensityMatrix, n: usize, key: &StreamKey) -> Result<Vec<PovmRecord>> {
    try_map_indexed(n, |i| measure_uniform_povm(rho, &mut key.index(i).rng()))
}

/// `n` conditioned copies; copy i draws from `key.index(i)`.
pub fn measure_conditioned_batch(rho: &DensityMatrix, pi: &CMat, n: usize, key: &StreamKey) -> Result<Vec<PovmRecord>> {
    let m = ConditionedPovm::new(rho, pi)?;
    try_map_indexed(n, |i| m.sample(&mut key.index(i).rng()))
}

/// Sum of single-copy estimators divided by the record count (BOTTOM adds zero).
pub fn mean_estimator(records: &[PovmRecord]) -> Result<Hermitian> {
    let first = records.first().ok_or(Error::EmptySample)?;
    let d = first.dim();
    let mut acc = vec![ZERO; d * d];
    let mut kept = 0usize;
    for r in records {
        if r.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, got: r.dim() });
        }
        if let Some(u) = r.vector() {
            let v = u.as_slice();
            for i in 0..d {
                let vi = v[i] * (d + 1) as f64;
                for j in 0..d {
                    acc[i * d + j] += vi * v[j].conj();
                }
            }
            kept += 1;
        }
    }
    let n = records.len() as f64;
    let mut m = CMat::from_row_major(d, acc);
    for i in 0..d {
        m[(i, i)] -= kept as f64;
    }
    Ok(Hermitian::symmetrize(&m.scale(1.0 / n)))
}
