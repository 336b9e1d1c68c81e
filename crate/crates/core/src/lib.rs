//! Exact Gaussian-state dynamics of two bosonic modes coupled by linear
//! exchange and parametric down-conversion, with balanced damping and gain,
//! under physical, tailored (sink) and noiseless reservoirs.
//!
//! Everything is built on closed-form propagators and noise moments; the
//! [`oracle`] module holds brute-force references used for verification.

pub mod coeffs;
pub mod dynamics;
pub mod error;
pub mod hermitian;
pub mod io;
pub mod kernels;
pub mod model;
pub mod oracle;
pub mod sweep;
pub mod witnesses;

pub use coeffs::{GaussianCoeffs, Model};
pub use error::{Error, Result};
pub use model::ModelParams;
pub use witnesses::WitnessReport;
