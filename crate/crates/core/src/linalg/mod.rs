//! Dense complex linear algebra for small dimensions.

mod distance;
mod eigen;
mod matrix;
mod random;
mod types;

pub use distance::{fidelity, operator_norm, sorted_tv_distance, state_fidelity, trace_distance, tv_distance};
pub use eigen::{eigh, eigvalsh, EigenDecomposition};
pub use matrix::{inner, norm, CMat, C64};
pub(crate) use matrix::{ONE, ZERO};
pub use random::{dirichlet_spectrum, haar_unitary, haar_vector, random_density_from_spectrum};
pub use types::{DensityMatrix, Hermitian, Spectrum, UnitVector};

/// Swap operator on C^d (x) C^d.
pub fn swap_operator(d: usize) -> CMat {
    CMat::from_fn(d * d, |r, c| {
        let (i, j) = (r / d, r % d);
        let (k, l) = (c / d, c % d);
        if i == l && j == k {
            ONE
        } else {
            ZERO
        }
    })
}
