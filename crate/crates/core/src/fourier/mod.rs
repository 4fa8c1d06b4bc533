//! Compactly supported characteristic functions, their densities, and the
//! Bessel machinery behind the minimum-variance construction.

pub mod bessel;
pub mod charfn;
pub mod minvar;
pub mod quad;

pub use bessel::{bessel_first_zero, bessel_j, BesselContext};
pub use charfn::{
    eval_c2_charfn, eval_c2_density, eval_g, eval_triangle, eval_triangle_density, CharFnFamily,
    CharFnSpec, TailBudget,
};
pub use minvar::{minvar_density, minvar_second_moment};
pub use quad::{adaptive_simpson, integrate_chunked};
