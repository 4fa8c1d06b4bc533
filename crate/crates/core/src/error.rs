//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported Bessel order nu = {0}: need a half-integer >= -1/2")]
    BesselOrder(f64),
    #[error("Bessel argument t = {t} out of the supported range for order nu = {nu}")]
    BesselArgument { nu: f64, t: f64 },
    #[error("no sign change found while bracketing the first Bessel zero of order nu = {0}")]
    BesselZeroBracket(f64),
    #[error("this characteristic-function family has no pointwise evaluator")]
    CharFnNotEvaluable,
    #[error("product characteristic function needs at least one factor")]
    EmptyProduct,
    #[error("product factors must be one-dimensional")]
    ProductFactorDimension,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("generator matrix is singular or near-singular (|det| = {det:e})")]
    SingularGenerator { det: f64 },
    #[error("dimension {d} exceeds the exact-enumeration limit {max}")]
    DimensionLimit { d: usize, max: usize },
    #[error("vector is not a point of the lattice (residual {residual:e})")]
    NotInLattice { residual: f64 },
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("code generator has rank {rank}, expected {k}")]
    RankDeficient { rank: usize, k: usize },
    #[error("coarse lattice is not nested in the fine lattice")]
    NotNested,
    #[error("quotient group has {n} cosets, above the enumeration limit {max}")]
    QuotientTooLarge { n: usize, max: usize },
    #[error(
        "characteristic function support radius {rho} exceeds the packing radius {required} of the Fourier dual"
    )]
    SupportTooWide { rho: f64, required: f64 },
    #[error("no prime q with q^{k} inside ({lower:e}, {upper:e})")]
    EmptyPrimeRange { k: usize, lower: f64, upper: f64 },
    #[error("fine code stayed rank-deficient after {0} resampling attempts")]
    ResamplingExhausted(usize),
    #[error("convolution support too large: {pairs} point pairs exceeds the cap {cap}")]
    ConvolutionTooLarge { pairs: usize, cap: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}
