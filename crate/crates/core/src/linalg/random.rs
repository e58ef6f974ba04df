use rand::Rng;
use rand_distr::{Exp1, StandardNormal};

use super::matrix::{inner, CMat, C64};
use super::types::{DensityMatrix, Hermitian, Spectrum, UnitVector};
use crate::error::Result;

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random unit vector in C^d.
pub fn haar_vector<R: Rng + ?Sized>(d: usize, rng: &mut R) -> UnitVector {
    loop {
        let v: Vec<C64> = (0..d).map(|_| complex_gaussian(rng)).collect();
        if let Ok(u) = UnitVector::normalize(v) {
            return u;
        }
    }
}

/// Haar-random unitary.
///
/// Columns of a complex Gaussian matrix are orthonormalised by Gram-Schmidt
/// (two passes). This is the QR factor with positive real R diagonal, so no
/// further phase correction is needed.
pub fn haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMat {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(d);
    while cols.len() < d {
        let mut v: Vec<C64> = (0..d).map(|_| complex_gaussian(rng)).collect();
        let before = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for _pass in 0..2 {
            for q in &cols {
                let p = inner(q, &v);
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= p * qi;
                }
            }
        }
        let nrm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if nrm <= 1e-8 * before {
            continue;
        }
        v.iter_mut().for_each(|z| *z /= nrm);
        cols.push(v);
    }
    CMat::from_fn(d, |i, j| cols[j][i])
}

/// U diag(alpha) U^dagger with Haar U. `alpha` is padded with zeros to d.
pub fn random_density_from_spectrum<R: Rng + ?Sized>(alpha: &Spectrum, d: usize, rng: &mut R) -> Result<DensityMatrix> {
    let u = haar_unitary(d, rng);
    let diag = CMat::from_real_diag(&alpha.padded(d));
    let m = Hermitian::symmetrize(&diag.conjugate_by(&u));
    DensityMatrix::from_hermitian(m)
}

/// Uniform draw from the probability simplex, sorted.
pub fn dirichlet_spectrum<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Spectrum {
    let e: Vec<f64> = (0..d).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let s: f64 = e.iter().sum();
    let mut p: Vec<f64> = e.iter().map(|x| x / s).collect();
    // absorb the rounding excess so the sum never exceeds one
    let excess = p.iter().sum::<f64>() - 1.0;
    if excess > 0.0 {
        let i = p.iter().enumerate().fold(0, |b, (i, x)| if *x > p[b] { i } else { b });
        p[i] -= excess;
    }
    Spectrum::new(p).expect("normalised exponentials form a spectrum")
}
