use thiserror::Error;

/// Errors raised by the library surface.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// The spectral decomposition (or a quantity divergent at the exceptional
    /// point) is unavailable because μ² is within the EP tolerance of zero.
    #[error("exceptional point: mu^2 = {mu_sq:e} is within tolerance of zero")]
    EpDegenerate { mu_sq: f64 },

    /// The requested quantity is only defined in the oscillatory regime.
    #[error("not in the oscillatory regime: mu^2 = {mu_sq:e}")]
    NotOscillatory { mu_sq: f64 },

    /// ξ = √(ε²−κ²) vanishes, so the eigenvector parametrization breaks down.
    #[error("eigenbasis parametrization degenerates at kappa = epsilon")]
    DegenerateBasis,

    #[error("depth matrix is not Hermitian (residual {residual:e})")]
    NonHermitianInput { residual: f64 },

    /// The partially transposed covariance matrix has no real pair of
    /// symplectic eigenvalues; the coefficient set is not a physical state.
    #[error("complex symplectic eigenvalue (discriminant {discriminant:e})")]
    ComplexSymplecticEigenvalue { discriminant: f64 },

    /// The smaller symplectic eigenvalue squared came out negative.
    #[error("negative squared symplectic eigenvalue {value:e}")]
    NegativeSymplecticSquare { value: f64 },

    /// A nominally real coefficient carried an imaginary part above tolerance.
    #[error("coefficient {name} has imaginary residue {residue:e}")]
    ImaginaryResidue { name: &'static str, residue: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// True for errors caused by the dynamical regime rather than bad input.
    pub fn is_regime_error(&self) -> bool {
        matches!(
            self,
            Error::EpDegenerate { .. } | Error::NotOscillatory { .. } | Error::DegenerateBasis
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
