//! Adaptive composite quadrature for density normalization and moment checks.

/// Adaptive Simpson on [a, b]. Returns (value, error_estimate); the estimate
/// is the usual |S_2 - S_1| / 15 Richardson residual accumulated over the
/// accepted panels.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> (f64, f64) {
    fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        ((b - a) / 6.0 * (fa + 4.0 * fm + fb), m, fm)
    }
    fn recurse<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        whole: f64,
        m: f64,
        fm: f64,
        tol: f64,
        depth: u32,
    ) -> (f64, f64) {
        let (left, lm, flm) = simpson(f, a, fa, m, fm);
        let (right, rm, frm) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            (left + right + delta / 15.0, delta.abs() / 15.0)
        } else {
            let (lv, le) = recurse(f, a, fa, m, fm, left, lm, flm, 0.5 * tol, depth - 1);
            let (rv, re) = recurse(f, m, fm, b, fb, right, rm, frm, 0.5 * tol, depth - 1);
            (lv + rv, le + re)
        }
    }
    let fa = f(a);
    let fb = f(b);
    let (whole, m, fm) = simpson(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, whole, m, fm, tol, 48)
}

/// Adaptive Simpson summed over fixed-length chunks of [a, b]. Oscillatory
/// integrands over long ranges need the pre-subdivision so no oscillation is
/// skipped by a lucky coarse panel.
pub fn integrate_chunked<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    chunk: f64,
    tol: f64,
) -> (f64, f64) {
    assert!(b >= a && chunk > 0.0);
    let n = ((b - a) / chunk).ceil().max(1.0) as usize;
    let per = tol / n as f64;
    let mut value = 0.0;
    let mut err = 0.0;
    for i in 0..n {
        let lo = a + (b - a) * i as f64 / n as f64;
        let hi = a + (b - a) * (i + 1) as f64 / n as f64;
        let (v, e) = adaptive_simpson(f, lo, hi, per);
        value += v;
        err += e;
    }
    (value, err)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_exact() {
        let (v, _) = adaptive_simpson(&|x| x * x * x - 2.0 * x + 1.0, -1.0, 3.0, 1e-12);
        assert_abs_diff_eq!(v, 16.0, epsilon = 1e-10);
    }

    #[test]
    fn gaussian_mass() {
        let f = |x: f64| (-0.5 * x * x).exp() / (2.0 * PI).sqrt();
        let (v, e) = adaptive_simpson(&f, -10.0, 10.0, 1e-12);
        assert!(e < 1e-9);
        assert_abs_diff_eq!(v, 1.0, epsilon = 1e-10);
    }

    #[test]
    fn chunked_handles_oscillation() {
        // \int_0^{400 pi} cos^2(x) dx = 200 pi; a single coarse panel would alias
        let (v, _) = integrate_chunked(&|x: f64| x.cos().powi(2), 0.0, 400.0 * PI, 2.0, 1e-10);
        assert_abs_diff_eq!(v, 200.0 * PI, epsilon = 1e-7);
    }
}
