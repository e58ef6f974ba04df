//! Spectrum and moment estimation for quantum states from unentangled
//! single-copy measurements, plus the weak-Schur-sampling distinguishing
//! game used to measure entangled sample complexity.

// `!(x > 0.0)` is used on purpose: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bucketing;
pub mod classical;
pub mod error;
pub mod linalg;
pub mod lmm;
pub mod moments;
pub mod par;
pub mod pipeline;
pub mod povm;
pub mod rng;
pub mod schur;

pub use error::{Error, Result};
