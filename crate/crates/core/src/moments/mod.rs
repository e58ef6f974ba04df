//! Unbiased moment estimators from uniform-POVM records.
//!
//! The statistic averages tr(A_{i1} ... A_{ik}) over ordered k-tuples of
//! distinct records, A_i = (d+1)|u_i><u_i| - I. Expanding each factor, the
//! sum over distinct tuples reduces to sums T_m of cyclic Gram products over
//! distinct m-tuples, and T_m is obtained from unrestricted sums by Moebius
//! inversion on set partitions. Unrestricted sums are traces of powers of
//! the frame operator M = sum_i |u_i><u_i| unless a block repeats around the
//! cycle, in which case the repeated indices are enumerated explicitly.

mod partition;

use rand::seq::index::sample;

use crate::error::{Error, Result};
use crate::linalg::{inner, CMat, C64, ZERO};
use crate::povm::PovmRecord;
use crate::rng::StreamKey;

use partition::partitions;
pub use partition::MAX_ORDER;

/// Largest number of explicit index assignments the engine will enumerate.
pub const ENUMERATION_CAP: f64 = 1e8;

/// Frame operator of the non-BOTTOM records plus cached powers.
struct Frame<'a> {
    vecs: Vec<&'a [C64]>,
    powers: Vec<CMat>,
}

impl<'a> Frame<'a> {
    fn new(records: &'a [PovmRecord], d: usize, max_power: usize) -> Self {
        let vecs: Vec<&[C64]> = records.iter().filter_map(|r| r.vector().map(|u| u.as_slice())).collect();
        let mut m = vec![ZERO; d * d];
        for v in &vecs {
            for i in 0..d {
                let vi = v[i];
                for j in 0..d {
                    m[i * d + j] += vi * v[j].conj();
                }
            }
        }
        let m = CMat::from_row_major(d, m);
        let mut powers = vec![CMat::identity(d)];
        for p in 1..=max_power.max(1) {
            let next = powers[p - 1].matmul(&m);
            powers.push(next);
        }
        Frame { vecs, powers }
    }

    fn n(&self) -> usize {
        self.vecs.len()
    }

    /// Unrestricted sum of the cyclic Gram product over a contracted word.
    fn cyclic_sum(&self, word: &[u8]) -> Result<C64> {
        let l = word.len();
        let mut counts = [0usize; MAX_ORDER];
        for &w in word {
            counts[w as usize] += 1;
        }
        if word.iter().all(|&w| counts[w as usize] == 1) {
            return Ok(self.powers[l].trace());
        }
        // Start the cycle at a repeated label and split into segments
        // between consecutive occurrences of repeated labels.
        let start = (0..l).find(|&i| counts[word[i] as usize] > 1).expect("a repeated label");
        let rot: Vec<u8> = (0..l).map(|i| word[(start + i) % l]).collect();
        let rep_pos: Vec<usize> = (0..l).filter(|&i| counts[rot[i] as usize] > 1).collect();
        let mut rep_labels: Vec<u8> = rep_pos.iter().map(|&i| rot[i]).collect();
        rep_labels.sort_unstable();
        rep_labels.dedup();
        let slot = |lab: u8| rep_labels.iter().position(|&x| x == lab).expect("repeated label");
        // (from slot, to slot, G-power)
        let segments: Vec<(usize, usize, usize)> = rep_pos
            .iter()
            .enumerate()
            .map(|(s, &i)| {
                let j = if s + 1 < rep_pos.len() { rep_pos[s + 1] } else { rep_pos[0] + l };
                (slot(rot[i]), slot(rot[j % l]), j - i)
            })
            .collect();
        let r = rep_labels.len();
        let n = self.n();
        let count = (n as f64).powi(r as i32);
        if count > ENUMERATION_CAP {
            return Err(Error::EnumerationCap { count });
        }
        // W[p][b] = M^(p-1) u_b for every power used.
        let mut need: Vec<usize> = segments.iter().map(|s| s.2).collect();
        need.sort_unstable();
        need.dedup();
        let w: Vec<(usize, Vec<Vec<C64>>)> =
            need.iter().map(|&p| (p, self.vecs.iter().map(|v| self.powers[p - 1].apply(v)).collect())).collect();
        let wp = |p: usize| &w.iter().find(|x| x.0 == p).expect("power cached").1;
        let seg_tables: Vec<(usize, usize, &Vec<Vec<C64>>)> = segments.iter().map(|&(a, b, p)| (a, b, wp(p))).collect();

        let per_first = crate::par::map_indexed(n, |first| {
            let mut idx = vec![0usize; r];
            idx[0] = first;
            let mut total = ZERO;
            loop {
                let mut prod = C64::new(1.0, 0.0);
                for &(a, b, tab) in &seg_tables {
                    prod *= inner(self.vecs[idx[a]], &tab[idx[b]]);
                }
                total += prod;
                // odometer over slots 1..r
                let mut s = 1;
                while s < r {
                    idx[s] += 1;
                    if idx[s] < n {
                        break;
                    }
                    idx[s] = 0;
                    s += 1;
                }
                if s >= r {
                    break;
                }
            }
            total
        });
        Ok(per_first.into_iter().sum())
    }

    /// Sum over ordered distinct m-tuples of the cyclic Gram product.
    fn distinct_cyclic_sum(&self, m: usize) -> Result<C64> {
        let mut total = ZERO;
        for term in partitions(m) {
            total += self.cyclic_sum(&term.word)? * term.mobius;
        }
        Ok(total)
    }
}

fn falling(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).map(|i| (n - i) as f64).product()
}

fn binom(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn record_dim(records: &[PovmRecord]) -> Result<usize> {
    let d = records.first().ok_or(Error::EmptySample)?.dim();
    if let Some(r) = records.iter().find(|r| r.dim() != d) {
        return Err(Error::DimensionMismatch { expected: d, got: r.dim() });
    }
    Ok(d)
}

fn check_order(k: usize, n: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidArgument("moment order must be at least 1".into()));
    }
    if k > MAX_ORDER {
        return Err(Error::EngineCap { k, cap: MAX_ORDER });
    }
    if k > n {
        return Err(Error::OrderTooLarge { k, n });
    }
    Ok(())
}

/// Sum over ordered k-tuples of distinct records of tr(A_i1 ... A_ik),
/// with BOTTOM records contributing zero.
pub fn distinct_tuple_trace_sum(records: &[PovmRecord], k: usize) -> Result<C64> {
    let d = record_dim(records)?;
    check_order(k, records.len())?;
    let frame = Frame::new(records, d, k);
    let np = frame.n();
    if np < k {
        return Ok(ZERO);
    }
    let mut total = ZERO;
    for m in 0..=k {
        let t_m = if m == 0 { C64::new(d as f64, 0.0) } else { frame.distinct_cyclic_sum(m)? };
        let sign = if (k - m).is_multiple_of(2) { 1.0 } else { -1.0 };
        let coef = sign * binom(k, m) * ((d + 1) as f64).powi(m as i32) * falling(np - m, k - m);
        total += t_m * coef;
    }
    Ok(total)
}

/// Unbiased estimate of tr(rho^k) (or tr(sigma^k) for conditioned records,
/// where BOTTOM records still count in the normalisation).
pub fn moment_estimate(records: &[PovmRecord], k: usize) -> Result<f64> {
    let s = distinct_tuple_trace_sum(records, k)?;
    let z = s / falling(records.len(), k);
    let d = records[0].dim() as f64;
    // scale of the largest expansion term, for the realness check
    let scale = (d + 1.0).powi(k as i32);
    if z.im.abs() > 1e-9 * z.re.abs() + 1e-12 * scale {
        return Err(Error::ImaginaryResidual { real: z.re, imag: z.im });
    }
    Ok(z.re)
}

/// Estimates for k = 1..=max_k from one record set.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentEstimates {
    pub values: Vec<f64>,
}

impl MomentEstimates {
    pub fn compute(records: &[PovmRecord], max_k: usize) -> Result<Self> {
        let values = (1..=max_k).map(|k| moment_estimate(records, k)).collect::<Result<_>>()?;
        Ok(MomentEstimates { values })
    }

    /// Estimate of the k-th moment, k starting at 1.
    pub fn get(&self, k: usize) -> f64 {
        self.values[k - 1]
    }

    pub fn max_order(&self) -> usize {
        self.values.len()
    }
}

/// tr(A_i1 ... A_ik) for one tuple of records, via the subset expansion.
pub fn tuple_trace(records: &[PovmRecord], idx: &[usize]) -> Result<C64> {
    let d = record_dim(records)?;
    let k = idx.len();
    if k > MAX_ORDER {
        return Err(Error::EngineCap { k, cap: MAX_ORDER });
    }
    let mut vecs = Vec::with_capacity(k);
    for &i in idx {
        match records.get(i).ok_or(Error::InvalidArgument(format!("record index {i} out of range")))?.vector() {
            Some(u) => vecs.push(u.as_slice()),
            None => return Ok(ZERO),
        }
    }
    let mut total = ZERO;
    for mask in 0u32..(1 << k) {
        let sel: Vec<usize> = (0..k).filter(|&j| mask & (1 << j) != 0).collect();
        let m = sel.len();
        let cyc = if m == 0 {
            C64::new(d as f64, 0.0)
        } else {
            (0..m).map(|t| inner(vecs[sel[t]], vecs[sel[(t + 1) % m]])).product()
        };
        let sign = if (k - m).is_multiple_of(2) { 1.0 } else { -1.0 };
        total += cyc * (sign * ((d + 1) as f64).powi(m as i32));
    }
    Ok(total)
}

/// Average of tuple traces over `tuples` uniformly random ordered tuples of
/// distinct records.
pub fn moment_estimate_incomplete(records: &[PovmRecord], k: usize, tuples: usize, key: &StreamKey) -> Result<f64> {
    record_dim(records)?;
    check_order(k, records.len())?;
    if tuples == 0 {
        return Err(Error::InvalidArgument("need at least one tuple".into()));
    }
    let n = records.len();
    let vals = crate::par::try_map_indexed(tuples, |t| {
        let mut rng = key.index(t).rng();
        let idx = sample(&mut rng, n, k).into_vec();
        tuple_trace(records, &idx)
    })?;
    let s: C64 = vals.into_iter().sum();
    Ok(s.re / tuples as f64)
}

/// (1/(1-k)) ln of the k-th moment estimate, natural log.
pub fn renyi_estimate(records: &[PovmRecord], k: usize) -> Result<f64> {
    if k < 2 {
        return Err(Error::InvalidArgument("Renyi order must be at least 2".into()));
    }
    let z = moment_estimate(records, k)?;
    if !(z > 0.0) {
        return Err(Error::NonPositiveMomentEstimate { value: z });
    }
    Ok(z.ln() / (1.0 - k as f64))
}

/// Exact Renyi entropy of a spectrum.
pub fn renyi_entropy(spectrum: &[f64], k: usize) -> f64 {
    let p: f64 = spectrum.iter().map(|x| x.powi(k as i32)).sum();
    p.ln() / (1.0 - k as f64)
}

/// Upper bound on the variance of the k-th moment estimate:
/// (24^k / d) sum_{j<k} (k d / n)^(k-j) tr(sigma^(2j)), with tr(sigma^0) = d.
///
/// `even_power_traces[j-1]` is tr(sigma^(2j)) for j = 1..k-1.
pub fn variance_bound(n: usize, d: usize, k: usize, even_power_traces: &[f64]) -> Result<f64> {
    if n < k * d {
        return Err(Error::VarianceBoundHypothesis { n, k, d });
    }
    if even_power_traces.len() + 1 < k {
        return Err(Error::InvalidArgument(format!("need {} even power traces", k - 1)));
    }
    let ratio = (k * d) as f64 / n as f64;
    let mut s = 0.0;
    for j in 0..k {
        let tr = if j == 0 { d as f64 } else { even_power_traces[j - 1] };
        s += ratio.powi((k - j) as i32) * tr;
    }
    Ok(24f64.powi(k as i32) / d as f64 * s)
}
