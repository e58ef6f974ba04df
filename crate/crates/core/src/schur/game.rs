use std::collections::BTreeMap;

use super::jt::SchurEvaluator;
use super::rsk::sample_sw;
use crate::error::{Error, Result};
use crate::linalg::tv_distance;
use crate::par::try_map_indexed;
use crate::rng::StreamKey;

/// Largest copy count the search will try.
pub const COPY_SEARCH_CAP: usize = 10_000;

/// Two spectra whose first k-1 power sums agree.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumPair {
    pub k: usize,
    pub d: usize,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
}

impl SpectrumPair {
    pub fn tv(&self) -> f64 {
        tv_distance(&self.alpha, &self.beta)
    }
}

fn blocks(d: usize, spec: &[(f64, usize, usize)]) -> Vec<f64> {
    // (value * d, numerator, denominator of d)
    let mut v = Vec::with_capacity(d);
    for &(x, num, den) in spec {
        v.extend(std::iter::repeat_n(x / d as f64, d * num / den));
    }
    v
}

/// Moment-matching spectra for k in {2, 3, 4}. d must be divisible by 2, 3, 4
/// respectively.
pub fn spectra_family(k: usize, d: usize) -> Result<SpectrumPair> {
    let divisor = match k {
        2 => 2,
        3 => 3,
        4 => 4,
        _ => return Err(Error::InvalidArgument(format!("no spectra family for k = {k}"))),
    };
    if d == 0 || !d.is_multiple_of(divisor) {
        return Err(Error::InvalidArgument(format!("d = {d} not divisible by {divisor}")));
    }
    let (alpha, beta) = match k {
        2 => (vec![1.0 / d as f64; d], blocks(d, &[(2.0, 1, 2), (0.0, 1, 2)])),
        3 => (blocks(d, &[(1.5, 2, 3), (0.0, 1, 3)]), blocks(d, &[(2.0, 1, 3), (0.5, 2, 3)])),
        _ => {
            let s = std::f64::consts::FRAC_1_SQRT_2;
            (blocks(d, &[(1.0 + s, 1, 2), (1.0 - s, 1, 2)]), blocks(d, &[(2.0, 1, 4), (1.0, 1, 2), (0.0, 1, 4)]))
        }
    };
    Ok(SpectrumPair { k, d, alpha, beta })
}

/// Fraction of 2m rounds won by the maximum-likelihood guesser. Round i of
/// the alpha half draws from `key.child("alpha").index(i)`, likewise for beta.
/// Ties (equal log-likelihood to 1e-12 relative) are scored as a beta guess.
pub fn game_success(pair: &SpectrumPair, n: usize, m: usize, key: &StreamKey) -> Result<f64> {
    if m == 0 {
        return Err(Error::InvalidArgument("need at least one round".into()));
    }
    let deg = n + pair.d + 1;
    let ea = SchurEvaluator::new(&pair.alpha, deg)?;
    let eb = SchurEvaluator::new(&pair.beta, deg)?;
    let ka = key.child("alpha");
    let kb = key.child("beta");
    let wins = try_map_indexed(2 * m, |i| -> Result<bool> {
        let from_alpha = i < m;
        let (gamma, k) = if from_alpha { (&pair.alpha, ka.index(i)) } else { (&pair.beta, kb.index(i - m)) };
        let lambda = sample_sw(gamma, n, &mut k.rng())?;
        let la = ea.log_schur(&lambda)?;
        let lb = eb.log_schur(&lambda)?;
        let tie = la == lb
            || (la.is_finite() && lb.is_finite() && (la - lb).abs() <= 1e-12 * la.abs().max(lb.abs()).max(1.0));
        let guess_alpha = !tie && la > lb;
        Ok(guess_alpha == from_alpha)
    })?;
    Ok(wins.iter().filter(|&&w| w).count() as f64 / (2 * m) as f64)
}

/// Smallest n whose game success reaches `threshold`: doubling until the
/// threshold is met, then bisection. Each n uses the stream `key.index(n)`.
pub fn min_copies(pair: &SpectrumPair, threshold: f64, m: usize, key: &StreamKey) -> Result<usize> {
    let mut cache: BTreeMap<usize, f64> = BTreeMap::new();
    let mut success = |n: usize| -> Result<f64> {
        if let Some(v) = cache.get(&n) {
            return Ok(*v);
        }
        let v = game_success(pair, n, m, &key.index(n))?;
        cache.insert(n, v);
        Ok(v)
    };
    let mut hi = 1;
    while success(hi)? < threshold {
        if hi >= COPY_SEARCH_CAP {
            return Err(Error::SearchCapExceeded { cap: COPY_SEARCH_CAP });
        }
        hi = (2 * hi).min(COPY_SEARCH_CAP);
    }
    let mut lo = hi / 2; // success(lo) < threshold, or lo == 0
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if success(mid)? >= threshold {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}
