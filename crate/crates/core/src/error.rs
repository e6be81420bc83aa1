use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian (max |M - M^dagger| = {0:e})")]
    NonHermitian(f64),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("outcome probability {p:e} vanishes while its derivative {dp:e} does not")]
    DegenerateProbability { p: f64, dp: f64 },

    #[error("divergent variance: |d<A>/dtheta| = {0:e}")]
    DivergentVariance(f64),

    #[error("reference observable does not saturate the bound (variance {variance:e}, bound {bound:e})")]
    NonSaturatingReference { variance: f64, bound: f64 },

    #[error("observable carries no Pauli coefficients")]
    MissingCoefficients,

    #[error("integration step too large: {0}")]
    StepTooLarge(String),

    #[error("invalid sweep spec: {0}")]
    InvalidSpec(String),
}
