//! The minimum-variance density: the unique radial profile attaining the
//! lower bound 4 j^2 / rho^2 on -laplacian(psi)(0) among characteristic
//! functions vanishing outside a ball of radius rho.
//!
//! The unit-support profile is
//!     f~(x) = c_d ( Omega_d(||x||/2) / (j^2 - (||x||/2)^2) )^2,
//! c_d = 4 j^2 / (4^d pi^{d/2} Gamma(d/2)), with j the first positive zero of
//! J_{(d-2)/2}; the general-support density is f(x) = rho^d f~(rho x). The
//! square and the constant are forced by nonnegativity and normalization
//! (quadrature tests check mass 1 and second moment 4 j^2 for d <= 3).

use crate::error::Result;
use crate::fourier::bessel::BesselContext;

/// Lowest attainable second moment, 4 j^2_{(d-2)/2} / rho^2.
pub fn minvar_second_moment(d: usize, rho: f64) -> Result<f64> {
    assert!(d >= 1 && rho > 0.0);
    Ok(BesselContext::for_dimension(d)?.moment_lower_bound(rho))
}

/// Minimum-variance density at `x`. Builds the Bessel context on each call;
/// construct a `CharFnSpec::min_var_radial` for repeated evaluation.
pub fn minvar_density(d: usize, rho: f64, x: &[f64]) -> Result<f64> {
    assert!(d >= 1 && rho > 0.0);
    assert_eq!(x.len(), d);
    let ctx = BesselContext::for_dimension(d)?;
    density_with(&ctx, rho, x)
}

pub(crate) fn density_with(ctx: &BesselContext, rho: f64, x: &[f64]) -> Result<f64> {
    let d = ctx.dimension as f64;
    let r = rho * x.iter().map(|v| v * v).sum::<f64>().sqrt();
    let s = 0.5 * r;
    let j = ctx.first_zero;
    // the direct quotient cancels catastrophically near s = j, where both
    // Omega and the denominator vanish; switch to the Taylor form there
    let ratio = if (s - j).abs() < 1e-4 {
        taylor_ratio(ctx, s)?
    } else {
        ctx.omega(s)? / ((j - s) * (j + s))
    };
    Ok(rho.powf(d) * ctx.density_constant() * ratio * ratio)
}

/// Quadratic expansion of Omega(s) / (j^2 - s^2) around the removable
/// singularity at s = j, using the closed-form derivatives of Omega at j
/// (where J_nu vanishes).
fn taylor_ratio(ctx: &BesselContext, s: f64) -> Result<f64> {
    let j = ctx.first_zero;
    let nu = ctx.order;
    let u = s - j;
    let op = ctx.omega_prime(j)?;
    // Omega''(j) = -((2 nu + 1)/j) Omega'(j)
    // Omega'''(j) = ((2 nu + 1)(2 nu + 2)/j^2 - 1) Omega'(j)
    let h2 = -(2.0 * nu + 1.0) / j;
    let h3 = (2.0 * nu + 1.0) * (2.0 * nu + 2.0) / (j * j) - 1.0;
    let numerator = op * (1.0 + 0.5 * h2 * u + h3 * u * u / 6.0);
    Ok(-numerator / (2.0 * j + u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::quad::integrate_chunked;
    use approx::assert_abs_diff_eq;
    use statrs::function::gamma::gamma;
    use std::f64::consts::PI;

    #[test]
    fn second_moment_closed_forms() {
        // j_{-1/2} = pi/2 makes both of these exact
        assert_abs_diff_eq!(minvar_second_moment(1, PI / 2.0).unwrap(), 4.0, epsilon = 1e-10);
        assert_abs_diff_eq!(minvar_second_moment(1, PI / 4.0).unwrap(), 16.0, epsilon = 1e-10);
        let j0 = crate::fourier::bessel::bessel_first_zero(0.0).unwrap();
        assert_abs_diff_eq!(
            minvar_second_moment(2, 1.0).unwrap(),
            4.0 * j0 * j0,
            epsilon = 1e-8
        );
    }

    #[test]
    fn removable_singularity_is_smooth() {
        let ctx = BesselContext::for_dimension(1).unwrap();
        let j = ctx.first_zero;
        // walk across s = j (the Taylor window is |s - j| < 1e-4): values stay
        // near the center and successive steps stay below the local slope
        let at = |r: f64| density_with(&ctx, 1.0, &[r]).unwrap();
        let center = at(2.0 * j);
        let mut prev = at(2.0 * j - 6e-4);
        let mut r = 2.0 * j - 6e-4;
        while r <= 2.0 * j + 6e-4 {
            r += 5e-5;
            let v = at(r);
            assert!((v - prev).abs() < 5e-6, "jump at r={r}");
            assert!((v - center).abs() < 5e-5);
            prev = v;
        }
        // d = 1 closed form: ratio -> 1/(2j), f~ = c_1/(4 j^2) = (pi/4)/pi^2
        assert_abs_diff_eq!(center, 0.25 / PI, epsilon = 1e-10);
    }

    #[test]
    fn normalization_d1_to_d3() {
        // radial quadrature: S_{d-1} \int f~(r) r^{d-1} dr = 1
        for d in 1..=3usize {
            let ctx = BesselContext::for_dimension(d).unwrap();
            let dd = d as f64;
            let surface = if d == 1 {
                2.0
            } else {
                2.0 * PI.powf(dd / 2.0) / gamma(dd / 2.0)
            };
            let f = |r: f64| {
                let x = [r, 0.0, 0.0];
                surface
                    * density_with(&ctx, 1.0, &x[..d]).unwrap()
                    * r.powf(dd - 1.0)
            };
            let (mass, _) = integrate_chunked(&f, 1e-12, 400.0, 1.0, 1e-9);
            // envelope tail beyond 400 is below 1e-7 for every d here
            assert_abs_diff_eq!(mass, 1.0, epsilon = 1e-6);
        }
    }

    #[test]
    fn second_moment_quadrature_d1() {
        let ctx = BesselContext::for_dimension(1).unwrap();
        let rho = PI / 2.0;
        let f = |x: f64| 2.0 * x * x * density_with(&ctx, rho, &[x]).unwrap();
        // moment integrand decays like 1/x^2: integrate far, budget ~ 12/L
        let (m, _) = integrate_chunked(&f, 0.0, 3.0e5, 2.0, 1e-7);
        assert_abs_diff_eq!(m, 4.0, epsilon = 1e-4);
    }

    #[test]
    fn second_moment_quadrature_d2() {
        let ctx = BesselContext::for_dimension(2).unwrap();
        let j0 = ctx.first_zero;
        let f = |r: f64| 2.0 * PI * r * r * r * density_with(&ctx, 1.0, &[r, 0.0]).unwrap();
        let (m, _) = integrate_chunked(&f, 1e-12, 2.0e4, 2.0, 1e-6);
        // documented tail budget ~ 2 pi * 9.4 / L ~ 3e-3 at L = 2e4
        assert_abs_diff_eq!(m, 4.0 * j0 * j0, epsilon = 4e-3);
    }

    #[test]
    fn density_nonnegative_everywhere() {
        let ctx = BesselContext::for_dimension(2).unwrap();
        for i in 0..2000 {
            let r = 0.05 * i as f64;
            let v = density_with(&ctx, 1.0, &[r, 0.0]).unwrap();
            assert!(v >= 0.0, "negative density at r={r}: {v}");
        }
    }
}
