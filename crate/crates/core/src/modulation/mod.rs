//! Secure randomized modulation: pmfs over lattice cosets built from a
//! compactly supported characteristic function, samplers, and the secrecy
//! certificates.

pub mod checks;
pub mod modulator;
pub mod pmf;

pub use checks::{
    charfn_identity_check, convolution_independence_check, identity_check_on, ConvolutionReport,
    IdentityCheckReport, SecrecyCertificates,
};
pub use modulator::{binary_pmfs, demodulate_noiseless, zn_pmfs, PowerCheck, SecureModulator};
pub use pmf::DiscretePmf;
