//! Weak Schur sampling and the two-spectrum distinguishing game.

mod dd;
mod fit;
mod game;
mod jt;
mod precise;
pub mod reference;
mod rsk;

pub use dd::Dd;
pub use fit::{fixed_exponent_fit, power_law_fit, PowerLawFit};
pub use game::{game_success, min_copies, spectra_family, SpectrumPair, COPY_SEARCH_CAP};
pub use jt::{schur_log, schur_oracle, SchurEvaluator, MAX_BOXES};
pub use rsk::{sample_sw, shrsk_shape, YoungDiagram};
