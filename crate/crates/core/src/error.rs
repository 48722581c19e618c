use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("singular 2x2 system: |det| = {det:e} below threshold {threshold:e}")]
    SingularSystem { det: f64, threshold: f64 },

    #[error("matrix is not Hermitian: max |h - h^dagger| = {deviation:e}")]
    NotHermitian { deviation: f64 },

    #[error("state is not normalized: norm = {norm}")]
    NotNormalized { norm: f64 },

    #[error(
        "resonant recycling: cavity denominator |D| = {magnitude:e} is below {threshold:e}; \
         the intracavity fields diverge"
    )]
    ResonantRecycling { magnitude: f64, threshold: f64 },

    #[error("fiber loss exponent must be >= 0, got {0}")]
    NegativeLoss(f64),

    #[error("eta = B/J must be finite and nonzero, got {0}")]
    DegenerateEta(f64),

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("value {0} is outside [0, 1]")]
    OutOfRange(f64),

    #[error("bad grid: {0}")]
    BadGrid(String),

    #[error("atomic detuning must be nonzero")]
    ZeroDetuning,

    #[error("cavity decay rate must be > 0, got {0}")]
    NonpositiveGamma(f64),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
}

impl Error {
    /// Short machine-readable identifier, stable across releases.
    pub fn code(&self) -> &'static str {
        match self {
            Error::SingularSystem { .. } => "singular-system",
            Error::NotHermitian { .. } => "not-hermitian",
            Error::NotNormalized { .. } => "not-normalized",
            Error::ResonantRecycling { .. } => "resonant-recycling",
            Error::NegativeLoss(_) => "negative-loss",
            Error::DegenerateEta(_) => "degenerate-eta",
            Error::InvalidDensityMatrix(_) => "invalid-density-matrix",
            Error::OutOfRange(_) => "out-of-range",
            Error::BadGrid(_) => "bad-grid",
            Error::ZeroDetuning => "zero-detuning",
            Error::NonpositiveGamma(_) => "nonpositive-gamma",
            Error::InvalidParams(_) => "invalid-params",
            Error::NonFinite(_) => "non-finite",
        }
    }

    /// True for failures caused by the physics (a divergent steady state)
    /// rather than by malformed input.
    pub fn is_physical_singularity(&self) -> bool {
        matches!(self, Error::ResonantRecycling { .. } | Error::SingularSystem { .. })
    }
}
