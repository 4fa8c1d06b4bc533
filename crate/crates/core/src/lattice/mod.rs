//! Lattice algebra: generator matrices, duals, Construction A, nested pairs
//! with their quotient groups, nearest-point quantization, geometric radii,
//! second moments, and the random code ensembles.

pub mod basis;
pub mod construction_a;
pub mod cvp;
pub mod ensemble;
pub mod nested;
pub mod zq;

pub use basis::{LatticeBasis, Radii, SecondMomentEstimate};
pub use construction_a::{
    construction_a, construction_a_contains, dual_construction_a_generator, CodeLatticeDocument,
};
pub use ensemble::{
    ensemble_sample, goodlattice_params, nested_ensemble_sample, poltyrev_exponent,
    EnsembleLattice, GoodLatticeParams, NestedEnsemble,
};
pub use nested::{GroupElement, NestedPair};
pub use zq::{is_prime, LinearCodeSpec, SystematicCode};
