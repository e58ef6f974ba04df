//! End-to-end spectrum learning: bucketing, conditioned moment estimation
//! on the small bucket, then local moment matching.

use crate::bucketing::{alignment_error, bucket, tomography_estimate, BucketingOutcome};
use crate::classical::{renormalise, spectrum_from_parts};
use crate::error::{Error, Result};
use crate::linalg::{sorted_tv_distance, tv_distance, CMat, DensityMatrix, Hermitian, Spectrum};
use crate::lmm::{local_moment_matching, MomentConstraints};
use crate::moments::{moment_estimate, variance_bound};
use crate::povm::{measure_batch, measure_conditioned_batch};
use crate::rng::StreamKey;

#[derive(Clone, Debug, PartialEq)]
pub struct PipelineParams {
    pub eps: f64,
    pub c_k: f64,
    pub c_b: f64,
    pub c2: f64,
    pub v_mult: f64,
}

impl Default for PipelineParams {
    fn default() -> Self {
        PipelineParams { eps: 0.3, c_k: 0.1, c_b: 4.0, c2: 1.0, v_mult: 0.1 }
    }
}

/// Copies per stage, threshold and number of matched moments.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Schedule {
    pub n: usize,
    pub b: f64,
    pub k: usize,
}

/// K = max(1, round(c_K ln d / ln ln d)), B = min(1, c_B eps^2 K^2 / d),
/// n = ceil(C2 d / (B^2 eps^2)).
pub fn choose_parameters(d: usize, p: &PipelineParams) -> Result<Schedule> {
    if d < 4 {
        return Err(Error::InvalidArgument(format!("dimension {d} < 4")));
    }
    if !(p.eps > 0.0 && p.eps <= 1.0) {
        return Err(Error::InvalidArgument(format!("eps = {} outside (0, 1]", p.eps)));
    }
    if !(p.c_k > 0.0 && p.c_k < 2.0 / 19.0) {
        return Err(Error::InvalidArgument(format!("c_K = {} outside (0, 2/19)", p.c_k)));
    }
    if !(p.c_b > 0.0 && p.c2 > 0.0 && p.v_mult > 0.0) {
        return Err(Error::InvalidArgument("c_B, C2 and v_mult must be positive".into()));
    }
    let ln_d = (d as f64).ln();
    let k = ((p.c_k * ln_d / ln_d.ln()).round() as usize).max(1);
    let b = (p.c_b * p.eps * p.eps * (k * k) as f64 / d as f64).min(1.0);
    let n = (p.c2 * d as f64 / (b * b * p.eps * p.eps)).ceil() as usize;
    Ok(Schedule { n, b, k })
}

/// V_k = v_mult sqrt(K) sqrt(variance bound with tr(sigma^(2j)) <- d (2B)^(2j)).
pub fn moment_tolerances(n: usize, d: usize, b: f64, kk: usize, v_mult: f64) -> Result<Vec<f64>> {
    (1..=kk)
        .map(|k| {
            let traces: Vec<f64> = (1..k).map(|j| d as f64 * (2.0 * b).powi(2 * j as i32)).collect();
            Ok(v_mult * (kk as f64).sqrt() * variance_bound(n, d, k, &traces)?.sqrt())
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct PipelineRun {
    pub estimate: Spectrum,
    pub schedule: Schedule,
    pub bucketing: BucketingOutcome,
    /// Large-bucket eigenvalues as used (clamped at zero, before any final rescale).
    pub large: Vec<f64>,
    /// Small-bucket values after renormalisation.
    pub small: Vec<f64>,
    pub moments: Vec<f64>,
    pub tolerances: Vec<f64>,
    pub retried: bool,
}

pub fn learn_spectrum(rho: &DensityMatrix, p: &PipelineParams, key: &StreamKey) -> Result<PipelineRun> {
    let d = rho.dim();
    let schedule = choose_parameters(d, p)?;
    let Schedule { n, b, k: kk } = schedule;
    let records = measure_batch(rho, n, &key.child("bucketing"))?;
    let outcome = bucket(&tomography_estimate(&records)?, b)?;
    drop(records);
    let r = outcome.rank;
    let large: Vec<f64> = outcome.large_values().iter().map(|x| x.max(0.0)).collect();

    let mut small = Vec::new();
    let mut moments = Vec::new();
    let mut tolerances = Vec::new();
    let mut retried = false;
    if r < d {
        let cond = measure_conditioned_batch(rho, &outcome.pi, n, &key.child("moments"))?;
        moments = (1..=kk).map(|k| moment_estimate(&cond, k)).collect::<Result<_>>()?;
        tolerances = moment_tolerances(n, d, b, kk, p.v_mult)?;
        let mut c = MomentConstraints::new(moments.clone(), tolerances.clone(), (1.0 + p.eps) * b, (d - r) as f64, d);
        small = match local_moment_matching(&c, d - r) {
            Ok(v) => v,
            Err(Error::Infeasible { .. }) => {
                retried = true;
                c.tolerances.iter_mut().for_each(|v| *v *= 2.0);
                local_moment_matching(&c, d - r)?
            }
            Err(e) => return Err(e),
        };
        renormalise(&large, &mut small);
    }
    let estimate = spectrum_from_parts(large.clone(), small.clone())?;
    Ok(PipelineRun { estimate, schedule, bucketing: outcome, large, small, moments, tolerances, retried })
}

/// Runs `reps` independent repetitions and keeps the one whose estimate has
/// the smallest summed TV distance to the others.
pub fn learn_spectrum_amplified(
    rho: &DensityMatrix,
    p: &PipelineParams,
    reps: usize,
    key: &StreamKey,
) -> Result<PipelineRun> {
    if reps == 0 {
        return Err(Error::InvalidArgument("need at least one repetition".into()));
    }
    if reps == 1 {
        return learn_spectrum(rho, p, key);
    }
    let runs: Vec<PipelineRun> =
        (0..reps).map(|i| learn_spectrum(rho, p, &key.child("rep").index(i))).collect::<Result<_>>()?;
    let score = |i: usize| -> f64 {
        runs.iter().map(|o| tv_distance(runs[i].estimate.as_slice(), o.estimate.as_slice())).sum()
    };
    let best = (0..reps).fold(0, |b, i| if score(i) < score(b) { i } else { b });
    Ok(runs.into_iter().nth(best).expect("index in range"))
}

/// Error terms of one run.
#[derive(Clone, Debug, PartialEq)]
pub struct DecompositionAudit {
    pub total: f64,
    pub alignment: f64,
    pub large: f64,
    pub small: f64,
    /// TV between the top-r eigenvalues of Pi rho Pi and of rho.
    pub compression: f64,
}

impl DecompositionAudit {
    /// total <= alignment + large + small + compression.
    pub fn holds(&self, slack: f64) -> bool {
        self.total <= self.alignment + self.large + self.small + self.compression + slack
    }

    /// The same sum without the compression term. Not a valid bound in general.
    pub fn three_term_holds(&self, slack: f64) -> bool {
        self.total <= self.alignment + self.large + self.small + slack
    }
}

pub fn decomposition_audit(rho: &DensityMatrix, run: &PipelineRun) -> Result<DecompositionAudit> {
    let d = rho.dim();
    let r = run.bucketing.rank;
    let alpha = rho.hermitian().eigenvalues()?;
    let pi = &run.bucketing.pi;
    let comp = &CMat::identity(d) - pi;
    let top = rho.hermitian().sandwich(pi).eigenvalues()?;
    let bottom: Hermitian = rho.hermitian().sandwich(&comp);
    let bottom = bottom.eigenvalues()?;
    // The final estimate may have been rescaled; compare its own parts.
    let scale = {
        let s: f64 = run.large.iter().sum::<f64>() + run.small.iter().sum::<f64>();
        if s > 1.0 {
            1.0 / s
        } else {
            1.0
        }
    };
    let large: Vec<f64> = run.large.iter().map(|x| x * scale).collect();
    let small: Vec<f64> = run.small.iter().map(|x| x * scale).collect();
    Ok(DecompositionAudit {
        total: sorted_tv_distance(run.estimate.as_slice(), &alpha),
        alignment: alignment_error(rho, pi)?,
        large: tv_distance(&large, &alpha[..r]),
        small: sorted_tv_distance(&small, &bottom[..d - r]),
        compression: tv_distance(&top[..r], &alpha[..r]),
    })
}
