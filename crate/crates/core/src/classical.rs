//! Classical baselines: empirical sorted distribution, collision statistics
//! and the two-bucket moment-matching estimator.

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::Spectrum;
use crate::lmm::{local_moment_matching, MomentConstraints};

fn binom(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `n` iid draws from `p` (values in 0..p.len()).
pub fn sample_categorical<R: Rng + ?Sized>(p: &[f64], n: usize, rng: &mut R) -> Vec<usize> {
    let mut cdf = Vec::with_capacity(p.len());
    let mut acc = 0.0;
    for x in p {
        acc += x;
        cdf.push(acc);
    }
    (0..n)
        .map(|_| {
            let u = rng.random::<f64>() * acc;
            cdf.partition_point(|&c| c <= u).min(p.len() - 1)
        })
        .collect()
}

/// Counts h_0..h_{d-1}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Histogram {
    pub counts: Vec<usize>,
    pub n: usize,
}

impl Histogram {
    pub fn new(samples: &[usize], d: usize) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptySample);
        }
        let mut counts = vec![0usize; d];
        for &s in samples {
            *counts.get_mut(s).ok_or(Error::SampleOutOfRange { value: s, d })? += 1;
        }
        Ok(Histogram { counts, n: samples.len() })
    }
}

/// sort(h / n), length d.
pub fn empirical_sorted(samples: &[usize], d: usize) -> Result<Spectrum> {
    let h = Histogram::new(samples, d)?;
    let n = h.n as f64;
    Spectrum::new(h.counts.iter().map(|&c| c as f64 / n).collect())
}

/// sum_{i in subset} C(h_i, k) / C(n, k)
pub fn collision_stat_restricted(h: &Histogram, k: usize, subset: &[bool]) -> Result<f64> {
    if k > h.n {
        return Err(Error::OrderTooLarge { k, n: h.n });
    }
    if subset.len() != h.counts.len() {
        return Err(Error::DimensionMismatch { expected: h.counts.len(), got: subset.len() });
    }
    let num: f64 = h.counts.iter().zip(subset).filter(|(_, &s)| s).map(|(&c, _)| binom(c, k)).sum();
    Ok(num / binom(h.n, k))
}

/// sum_i C(h_i, k) / C(n, k), unbiased for p_k.
pub fn collision_stat(h: &Histogram, k: usize) -> Result<f64> {
    collision_stat_restricted(h, k, &vec![true; h.counts.len()])
}

/// Exact variance of c_2:
/// (p2 - p2^2) / C(n,2) + 2 (n-2) (p3 - p2^2) / C(n,2).
pub fn collision_variance_c2(p2: f64, p3: f64, n: usize) -> f64 {
    let c = binom(n, 2);
    (p2 - p2 * p2) / c + 2.0 * (n as f64 - 2.0) * (p3 - p2 * p2) / c
}

/// Plug-in upper bound on Var c_{k,S}: sum over overlap sizes c >= 1 of
/// C(k,c) C(n-k,k-c) / C(n,k) times p_{2k-c,S}. `power_sums[j-1]` is p_j.
pub fn collision_variance_bound(n: usize, k: usize, power_sums: &[f64]) -> f64 {
    let total = binom(n, k);
    (1..=k).map(|c| binom(k, c) * binom(n - k, k - c) / total * power_sums[2 * k - c - 1].max(0.0)).sum()
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassicalLmmParams {
    /// Number of matched moments K.
    pub order: usize,
    /// Bucketing threshold L on first-half frequencies.
    pub threshold: f64,
    /// Right end of the small-bucket support, as a multiple of L.
    pub upper_factor: f64,
    /// Tolerance V_k = z * sqrt(plug-in variance bound).
    pub z: f64,
}

impl ClassicalLmmParams {
    /// K = max(1, round(c ln d)), L = C ln d / (n eps^2) for half-sample size n.
    pub fn choose(d: usize, eps: f64, half_n: usize, c: f64, big_c: f64) -> Self {
        let ln_d = (d as f64).ln();
        ClassicalLmmParams {
            order: ((c * ln_d).round() as usize).max(1),
            threshold: (big_c * ln_d / (half_n as f64 * eps * eps)).min(1.0),
            upper_factor: 2.0,
            z: 3.0,
        }
    }
}

/// Per-half sample size C d / (ln d eps^4).
pub fn classical_sample_size(d: usize, eps: f64, big_c: f64) -> usize {
    (big_c * d as f64 / ((d as f64).ln() * eps.powi(4))).ceil() as usize
}

/// Scales `small` so that large + small sums to one (uniformly spread when
/// the small bucket carries no mass).
pub(crate) fn renormalise(large: &[f64], small: &mut [f64]) {
    let room = (1.0 - large.iter().sum::<f64>()).max(0.0);
    if small.is_empty() {
        return;
    }
    let s: f64 = small.iter().sum();
    if s > 0.0 {
        small.iter_mut().for_each(|x| *x *= room / s);
    } else {
        let each = room / small.len() as f64;
        small.iter_mut().for_each(|x| *x = each);
    }
}

pub(crate) fn spectrum_from_parts(large: Vec<f64>, small: Vec<f64>) -> Result<Spectrum> {
    let mut all = large;
    all.extend(small);
    let s: f64 = all.iter().sum();
    if s > 1.0 {
        all.iter_mut().for_each(|x| *x /= s);
    }
    Spectrum::new(all)
}

/// Two-bucket estimator. The first half of `samples` picks the buckets
/// (empirical frequency >= L is Large); the second half estimates Large by
/// frequencies and Small by matching K restricted collision moments.
pub fn classical_two_bucket_lmm(samples: &[usize], d: usize, p: &ClassicalLmmParams) -> Result<Spectrum> {
    if samples.len() < 2 {
        return Err(Error::EmptySample);
    }
    if !(p.threshold > 0.0 && p.threshold <= 1.0) || p.order == 0 {
        return Err(Error::InvalidArgument("need L in (0, 1] and K >= 1".into()));
    }
    let half = samples.len() / 2;
    let first = Histogram::new(&samples[..half], d)?;
    let second = Histogram::new(&samples[half..2 * half], d)?;
    let n = second.n;
    let is_large: Vec<bool> = first.counts.iter().map(|&c| c as f64 / first.n as f64 >= p.threshold).collect();
    let is_small: Vec<bool> = is_large.iter().map(|x| !x).collect();
    let large: Vec<f64> = (0..d).filter(|&i| is_large[i]).map(|i| second.counts[i] as f64 / n as f64).collect();
    let small_count = d - large.len();

    let mut small = Vec::new();
    if small_count > 0 {
        let kk = p.order.min(n);
        let sums: Vec<f64> = (1..=2 * kk)
            .map(|j| if j <= n { collision_stat_restricted(&second, j, &is_small) } else { Ok(0.0) })
            .collect::<Result<_>>()?;
        let estimates = sums[..kk].to_vec();
        let tol: Vec<f64> = (1..=kk).map(|k| p.z * collision_variance_bound(n, k, &sums).sqrt()).collect();
        let upper = p.upper_factor * p.threshold;
        let mut c = MomentConstraints::new(estimates, tol, upper, small_count as f64, d);
        small = match local_moment_matching(&c, small_count) {
            Ok(v) => v,
            Err(Error::Infeasible { .. }) => {
                c.tolerances.iter_mut().for_each(|v| *v *= 2.0);
                local_moment_matching(&c, small_count)?
            }
            Err(e) => return Err(e),
        };
        renormalise(&large, &mut small);
    }
    spectrum_from_parts(large, small)
}

/// Default constant in K = max(1, round(c ln d)).
pub const DEFAULT_ORDER_CONSTANT: f64 = 0.4;
/// Default constant in the sample size and in the threshold L.
pub const DEFAULT_SAMPLE_CONSTANT: f64 = 1.0;
