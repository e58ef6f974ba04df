//! Schur polynomials through the Jacobi-Trudi determinant det(h_{l_i - i + j})
//! in double-double arithmetic with power-of-two row scaling. Shapes whose
//! scaled determinant is tiny lose too many digits to cancellation and are
//! redone in arbitrary precision.

use std::sync::OnceLock;

use super::dd::Dd;
use super::precise::{complete_series, jt_log_det, BigFloat};
use super::rsk::YoungDiagram;
use crate::error::{Error, Result};

/// Largest diagram size accepted by the evaluator.
pub const MAX_BOXES: usize = 20_000;

/// Largest gap between the f64 and double-double ln det that is still
/// trusted. Double-double error is about 2^-53 of the f64 error, so a gap of
/// e^4 in the f64 result leaves the double-double value good to ~1e-14.
const MAX_PRECISION_GAP: f64 = 4.0;

/// Working precisions of the fallback, tried in order until two agree.
const PRECISION_BITS: [u64; 5] = [192, 384, 768, 1536, 3072];

/// Relative agreement in ln s_lambda that ends the precision ladder.
const LADDER_AGREEMENT: f64 = 1e-13; // about 1e-16

/// Complete homogeneous symmetric polynomials of gamma / max(gamma), cached.
#[derive(Clone, Debug)]
pub struct SchurEvaluator {
    positive: Vec<f64>,
    log_scale: f64,
    h: Vec<Dd>,
    precise: [OnceLock<Vec<BigFloat>>; PRECISION_BITS.len()],
}

impl SchurEvaluator {
    /// Prepares h_0..=h_max_degree for the positive entries of gamma.
    pub fn new(gamma: &[f64], max_degree: usize) -> Result<Self> {
        if gamma.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
            return Err(Error::InvalidArgument("gamma must be finite and non-negative".into()));
        }
        if max_degree > MAX_BOXES + gamma.len() {
            return Err(Error::SizeCap { reason: format!("degree {max_degree}") });
        }
        let g = gamma.iter().copied().fold(0.0, f64::max);
        let pos: Vec<f64> = gamma.iter().copied().filter(|&x| x > 0.0).collect();
        // group equal values; each variable multiplies the series by 1/(1 - x t)
        let mut h = vec![Dd::ZERO; max_degree + 1];
        h[0] = Dd::ONE;
        for &x in &pos {
            let x = Dd::from_f64(x) / Dd::from_f64(g);
            for m in 1..=max_degree {
                h[m] = h[m] + x * h[m - 1];
            }
        }
        let log_scale = if g > 0.0 { g.ln() } else { 0.0 };
        Ok(SchurEvaluator { positive: pos, log_scale, h, precise: Default::default() })
    }

    pub fn max_degree(&self) -> usize {
        self.h.len() - 1
    }

    fn h_at(&self, idx: isize) -> Result<Dd> {
        if idx < 0 {
            return Ok(Dd::ZERO);
        }
        self.h.get(idx as usize).copied().ok_or(Error::SizeCap {
            reason: format!("needs h_{idx}, evaluator prepared to degree {}", self.max_degree()),
        })
    }

    /// ln s_lambda(gamma), or -inf when s_lambda vanishes because lambda has
    /// more rows than gamma has positive entries.
    pub fn log_schur(&self, lambda: &YoungDiagram) -> Result<f64> {
        let l = lambda.length();
        if l == 0 {
            return Ok(0.0);
        }
        if l > self.positive.len() {
            return Ok(f64::NEG_INFINITY);
        }
        if lambda.size() > MAX_BOXES {
            return Err(Error::SizeCap { reason: format!("{} boxes", lambda.size()) });
        }
        let parts = lambda.parts();
        let mut m = vec![Dd::ZERO; l * l];
        let mut log_det = 0.0;
        for i in 0..l {
            let mut emax = i32::MIN;
            for j in 0..l {
                let v = self.h_at(parts[i] as isize - i as isize + j as isize)?;
                m[i * l + j] = v;
                if v.hi != 0.0 {
                    emax = emax.max(v.exponent());
                }
            }
            if emax == i32::MIN {
                return Err(Error::LuBreakdown { reason: format!("row {i} is zero") });
            }
            for j in 0..l {
                m[i * l + j] = m[i * l + j].ldexp(-emax);
            }
            log_det += emax as f64 * std::f64::consts::LN_2;
        }
        let mut quick: Vec<f64> = m.iter().map(|v| v.hi).collect();
        let fast = lu_log_det(&mut quick, l);
        let careful = lu_log_det(&mut m, l);
        match (fast, careful) {
            (Some(f), Some(c)) if (f - c).abs() <= MAX_PRECISION_GAP => {
                Ok(log_det + c + lambda.size() as f64 * self.log_scale)
            }
            _ => self.log_schur_precise(lambda),
        }
    }

    /// ln s_lambda(gamma) in arbitrary precision, doubling the working
    /// precision until two consecutive levels agree. Slow; used when the
    /// floating-point determinant is not trustworthy.
    pub fn log_schur_precise(&self, lambda: &YoungDiagram) -> Result<f64> {
        let l = lambda.length();
        if l == 0 {
            return Ok(0.0);
        }
        if l > self.positive.len() {
            return Ok(f64::NEG_INFINITY);
        }
        let need = lambda.parts()[0] + l - 1;
        if need > self.max_degree() {
            return Err(Error::SizeCap {
                reason: format!("needs h_{need}, evaluator prepared to degree {}", self.max_degree()),
            });
        }
        let mut last: Option<f64> = None;
        for (cache, &prec) in self.precise.iter().zip(&PRECISION_BITS) {
            let h = cache.get_or_init(|| complete_series(&self.positive, self.max_degree(), prec));
            let v = jt_log_det(h, lambda.parts(), prec);
            if let (Some(a), Some(b)) = (last, v) {
                if (a - b).abs() <= LADDER_AGREEMENT * b.abs().max(1.0) {
                    return Ok(b);
                }
            }
            last = v;
        }
        Err(Error::LuBreakdown {
            reason: format!("{lambda:?} unresolved at {} bits", PRECISION_BITS[PRECISION_BITS.len() - 1]),
        })
    }
}

/// Scalar type for the partial-pivoting LU.
trait Field: Copy + std::ops::Sub<Output = Self> + std::ops::Mul<Output = Self> + std::ops::Div<Output = Self> {
    fn lead(self) -> f64;
    fn ln_abs(self) -> f64;
}

impl Field for f64 {
    fn lead(self) -> f64 {
        self
    }
    fn ln_abs(self) -> f64 {
        self.abs().ln()
    }
}

impl Field for Dd {
    fn lead(self) -> f64 {
        self.hi
    }
    fn ln_abs(self) -> f64 {
        self.abs().ln()
    }
}

/// ln det of a row-major l x l matrix, None unless the determinant is positive.
fn lu_log_det<T: Field>(m: &mut [T], l: usize) -> Option<f64> {
    let mut negative = false;
    let mut out = 0.0;
    for c in 0..l {
        let p = (c..l).max_by(|&a, &b| m[a * l + c].lead().abs().total_cmp(&m[b * l + c].lead().abs()))?;
        if m[p * l + c].lead() == 0.0 {
            return None;
        }
        if p != c {
            for j in 0..l {
                m.swap(p * l + j, c * l + j);
            }
            negative = !negative;
        }
        let piv = m[c * l + c];
        for r in c + 1..l {
            let f = m[r * l + c] / piv;
            if f.lead() == 0.0 {
                continue;
            }
            for j in c + 1..l {
                m[r * l + j] = m[r * l + j] - f * m[c * l + j];
            }
        }
        negative ^= piv.lead() < 0.0;
        out += piv.ln_abs();
    }
    (!negative).then_some(out)
}

/// ln s_lambda(gamma).
pub fn schur_log(lambda: &YoungDiagram, gamma: &[f64]) -> Result<f64> {
    SchurEvaluator::new(gamma, lambda.size() + lambda.length())?.log_schur(lambda)
}

/// s_lambda(gamma) by enumerating semistandard tableaux; small inputs only.
pub fn schur_oracle(lambda: &YoungDiagram, gamma: &[f64]) -> Result<f64> {
    if lambda.size() > 8 || gamma.len() > 5 {
        return Err(Error::SizeCap { reason: "oracle limited to 8 boxes and 5 variables".into() });
    }
    let parts = lambda.parts();
    let cells: Vec<(usize, usize)> = parts.iter().enumerate().flat_map(|(i, &p)| (0..p).map(move |j| (i, j))).collect();
    let mut fill = vec![vec![0usize; parts.first().copied().unwrap_or(0)]; parts.len()];
    fn rec(pos: usize, cells: &[(usize, usize)], fill: &mut Vec<Vec<usize>>, gamma: &[f64], acc: f64) -> f64 {
        if pos == cells.len() {
            return acc;
        }
        let (i, j) = cells[pos];
        let lo_row = if j > 0 { fill[i][j - 1] } else { 1 };
        let lo_col = if i > 0 { fill[i - 1][j] + 1 } else { 1 };
        let mut total = 0.0;
        for v in lo_row.max(lo_col)..=gamma.len() {
            fill[i][j] = v;
            total += rec(pos + 1, cells, fill, gamma, acc * gamma[v - 1]);
        }
        total
    }
    Ok(rec(0, &cells, &mut fill, gamma, 1.0))
}
