//! Arbitrary-precision fallback for Jacobi-Trudi determinants that cancel
//! beyond double-double. Values are m * 2^e with |m| held to `prec` bits.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{Float, ToPrimitive, Zero};

#[derive(Clone, Debug)]
pub(crate) struct BigFloat {
    m: BigInt,
    e: i64,
}

impl BigFloat {
    fn zero() -> Self {
        BigFloat { m: BigInt::zero(), e: 0 }
    }

    fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            return BigFloat::zero();
        }
        let (mant, exp, sign) = Float::integer_decode(x);
        let m = BigInt::from(mant);
        BigFloat { m: if sign < 0 { -m } else { m }, e: exp as i64 }
    }

    /// Rounds the mantissa to `prec` bits, half away from zero.
    fn round(m: BigInt, e: i64, prec: u64) -> Self {
        let bits = m.bits();
        if bits <= prec {
            return BigFloat { m, e };
        }
        let shift = bits - prec;
        let (sign, mag) = m.into_parts();
        let half = BigUint::from(1u8) << (shift - 1) as usize;
        let mag: BigUint = (mag + half) >> shift as usize;
        BigFloat { m: BigInt::from_biguint(sign, mag), e: e + shift as i64 }
    }

    fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    fn is_negative(&self) -> bool {
        self.m.sign() == Sign::Minus
    }

    /// log2 |x|, -inf for zero.
    fn log2_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let mag = self.m.magnitude();
        let extra = mag.bits().saturating_sub(64);
        let top = (mag >> extra as usize).to_f64().expect("64-bit value fits f64");
        top.log2() + (extra as i64 + self.e) as f64
    }

    fn mul(&self, y: &BigFloat, prec: u64) -> BigFloat {
        BigFloat::round(&self.m * &y.m, self.e + y.e, prec)
    }

    fn div(&self, y: &BigFloat, prec: u64) -> BigFloat {
        let guard = prec + 2 + y.m.bits();
        let m = (&self.m << guard as usize) / &y.m;
        BigFloat::round(m, self.e - y.e - guard as i64, prec)
    }

    fn sub(&self, y: &BigFloat, prec: u64) -> BigFloat {
        if y.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return BigFloat { m: -&y.m, e: y.e };
        }
        let top_x = self.e + self.m.bits() as i64;
        let top_y = y.e + y.m.bits() as i64;
        // an operand below the other's last kept bit cannot change the result
        if top_x - top_y > prec as i64 + 2 {
            return self.clone();
        }
        if top_y - top_x > prec as i64 + 2 {
            return BigFloat { m: -&y.m, e: y.e };
        }
        let e = self.e.min(y.e);
        let m = (&self.m << (self.e - e) as usize) - (&y.m << (y.e - e) as usize);
        BigFloat::round(m, e, prec)
    }

    fn add(&self, y: &BigFloat, prec: u64) -> BigFloat {
        self.sub(&BigFloat { m: -&y.m, e: y.e }, prec)
    }
}

/// h_0..=h_max of positive gamma, each rounded to `prec` bits. The
/// recursion only adds positive terms, so the rounding error stays relative.
pub(crate) fn complete_series(gamma: &[f64], max_degree: usize, prec: u64) -> Vec<BigFloat> {
    let mut h = vec![BigFloat::zero(); max_degree + 1];
    h[0] = BigFloat::from_f64(1.0);
    for &x in gamma {
        let x = BigFloat::from_f64(x);
        for m in 1..=max_degree {
            let t = x.mul(&h[m - 1], prec);
            h[m] = h[m].add(&t, prec);
        }
    }
    h
}

/// ln det(h_{parts_i - i + j}), None unless the determinant is positive.
/// Callers guarantee every index is in `h`.
pub(crate) fn jt_log_det(h: &[BigFloat], parts: &[usize], prec: u64) -> Option<f64> {
    let l = parts.len();
    let mut m: Vec<BigFloat> = (0..l * l)
        .map(|k| {
            let idx = parts[k / l] as isize - (k / l) as isize + (k % l) as isize;
            if idx < 0 {
                BigFloat::zero()
            } else {
                h[idx as usize].clone()
            }
        })
        .collect();
    let mut negative = false;
    let mut log2_det = 0.0;
    for c in 0..l {
        let p = (c..l).max_by(|&a, &b| m[a * l + c].log2_abs().total_cmp(&m[b * l + c].log2_abs()))?;
        if m[p * l + c].is_zero() {
            return None;
        }
        if p != c {
            for j in 0..l {
                m.swap(p * l + j, c * l + j);
            }
            negative = !negative;
        }
        let piv = m[c * l + c].clone();
        for r in c + 1..l {
            if m[r * l + c].is_zero() {
                continue;
            }
            let f = m[r * l + c].div(&piv, prec);
            for j in c + 1..l {
                let t = f.mul(&m[c * l + j], prec);
                m[r * l + j] = m[r * l + j].sub(&t, prec);
            }
        }
        negative ^= piv.is_negative();
        log2_det += piv.log2_abs();
    }
    (!negative).then_some(log2_det * std::f64::consts::LN_2)
}
