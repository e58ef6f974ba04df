use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not Hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("trace or total mass is {value}, expected {expected}")]
    NotNormalized { value: f64, expected: f64 },

    #[error("matrix is not an orthogonal projector (residual {residual:.3e})")]
    NotProjector { residual: f64 },

    #[error("vector is not a valid spectrum: {reason}")]
    InvalidSpectrum { reason: String },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal {off:.3e})")]
    EigenNoConvergence { sweeps: usize, off: f64 },

    #[error("BOTTOM record has no single-copy estimator")]
    BottomRecord,

    #[error("moment order {k} exceeds the number of records {n}")]
    OrderTooLarge { k: usize, n: usize },

    #[error("moment order {k} exceeds the engine cap {cap}")]
    EngineCap { k: usize, cap: usize },

    #[error("enumeration of {count:.3e} index assignments exceeds the cap")]
    EnumerationCap { count: f64 },

    #[error("imaginary part {imag:.3e} of a real statistic exceeds tolerance (real part {real:.3e})")]
    ImaginaryResidual { real: f64, imag: f64 },

    #[error("moment estimate {value:.3e} is not positive, entropy undefined")]
    NonPositiveMomentEstimate { value: f64 },

    #[error("variance bound requires n >= k*d (n={n}, k={k}, d={d})")]
    VarianceBoundHypothesis { n: usize, k: usize, d: usize },

    #[error("moment program infeasible (optimal violation {violation:.6})")]
    Infeasible { violation: f64 },

    #[error("simplex failed: {reason}")]
    Simplex { reason: String },

    #[error("sample is empty")]
    EmptySample,

    #[error("sample value {value} outside 0..{d}")]
    SampleOutOfRange { value: usize, d: usize },

    #[error("letter {letter} outside 1..={d}")]
    LetterOutOfRange { letter: usize, d: usize },

    #[error("LU breakdown in Jacobi-Trudi determinant: {reason}")]
    LuBreakdown { reason: String },

    #[error("input exceeds size cap: {reason}")]
    SizeCap { reason: String },

    #[error("copy search exceeded {cap} copies")]
    SearchCapExceeded { cap: usize },

    #[error("power-law fit is degenerate: {reason}")]
    DegenerateFit { reason: String },

    #[error("measurement probabilities sum to {sum}, expected 1")]
    ProbabilityMismatch { sum: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
