//! The (d, k, q) random Construction-A ensemble, nested fine/coarse sampling,
//! the unconstrained-decoding error exponent, and the parameter window that
//! makes sampled lattices geometrically balanced.

use crate::error::{Error, Result};
use crate::lattice::basis::LatticeBasis;
use crate::lattice::construction_a::construction_a;
use crate::lattice::nested::NestedPair;
use crate::lattice::zq::{is_prime, LinearCodeSpec};
use rand::Rng;
use statrs::function::gamma::gamma;
use std::f64::consts::{E, PI};

/// Error exponent for lattice decoding without power constraint, as a
/// function of the volume-to-noise ratio mu = vol^{2/d} / sigma^2:
///
///   mu / (16 pi e)                     for mu >= 8 pi e
///   (1/2) ln(mu / (8 pi))              for 4 pi e <= mu <= 8 pi e
///   mu / (4 pi e) - (1/2) ln(mu/(2 pi)) for 2 pi e <= mu <= 4 pi e
///
/// Positive only above mu = 2 pi e; smaller arguments are out of domain.
pub fn poltyrev_exponent(mu: f64) -> Result<f64> {
    let tpe = 2.0 * PI * E;
    if !(mu >= tpe) {
        return Err(Error::InvalidConfig(format!(
            "volume-to-noise ratio {mu} below 2 pi e"
        )));
    }
    Ok(if mu >= 4.0 * tpe {
        mu / (8.0 * tpe)
    } else if mu >= 2.0 * tpe {
        0.5 * (mu / (8.0 * PI)).ln()
    } else {
        mu / (2.0 * tpe) - 0.5 * (mu / (2.0 * PI)).ln()
    })
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct GoodLatticeParams {
    pub r_min: f64,
    pub q_pow_k_lower: f64,
    pub q_pow_k_upper: f64,
    /// smallest prime q with q^k strictly inside the window
    pub suggested_q: u64,
}

/// Radius floor r_min = min{rho^2 / (32 E(2 pi e rho^2)), 1/4} and the window
/// Gamma(d/2+1)/(pi^{d/2} (2 r_min)^d) < q^k < Gamma(d/2+1)/(pi^{d/2} r_min^d)
/// within which a sampled sqrt(d)-scaled lattice has its effective radius in
/// (sqrt(d) r_min, 2 sqrt(d) r_min).
pub fn goodlattice_params(rho: f64, d: usize, k: usize) -> Result<GoodLatticeParams> {
    if !(rho > 1.0) {
        return Err(Error::InvalidConfig(format!("rho = {rho} must exceed 1")));
    }
    if k == 0 {
        return Err(Error::InvalidConfig("k must be at least 1".into()));
    }
    let exponent = poltyrev_exponent(2.0 * PI * E * rho * rho)?;
    let r_min = (rho * rho / (32.0 * exponent)).min(0.25);
    let dd = d as f64;
    let upper = gamma(dd / 2.0 + 1.0) / (PI.powf(dd / 2.0) * r_min.powf(dd));
    let lower = upper / 2.0f64.powf(dd);
    let mut q = 2u64;
    let suggested_q = loop {
        let qk = (q as f64).powi(k as i32);
        if qk >= upper {
            return Err(Error::EmptyPrimeRange { k, lower, upper });
        }
        if qk > lower && is_prime(q) {
            break q;
        }
        q += 1;
    };
    Ok(GoodLatticeParams {
        r_min,
        q_pow_k_lower: lower,
        q_pow_k_upper: upper,
        suggested_q,
    })
}

#[derive(Debug, Clone)]
pub struct EnsembleLattice {
    pub code: LinearCodeSpec,
    pub basis: LatticeBasis,
    pub resample_attempts: usize,
}

const RESAMPLE_LIMIT: usize = 64;

/// Draws a full-rank (d, k) code over Z_q and lifts it; rank-deficient draws
/// are resampled (bounded) and the attempt count reported. With
/// `scale_sqrt_d` the lattice is scaled by sqrt(d).
pub fn ensemble_sample<R: Rng + ?Sized>(
    d: usize,
    k: usize,
    q: u64,
    scale_sqrt_d: bool,
    rng: &mut R,
) -> Result<EnsembleLattice> {
    for attempt in 0..RESAMPLE_LIMIT {
        let code = LinearCodeSpec::random(d, k, q, rng)?;
        if code.systematic_form().is_err() {
            continue;
        }
        let mut basis = construction_a(&code)?;
        if scale_sqrt_d {
            basis = basis.scaled((d as f64).sqrt())?;
        }
        return Ok(EnsembleLattice {
            code,
            basis,
            resample_attempts: attempt,
        });
    }
    Err(Error::ResamplingExhausted(RESAMPLE_LIMIT))
}

#[derive(Debug, Clone)]
pub struct NestedEnsemble {
    pub pair: NestedPair,
    pub coarse_code: LinearCodeSpec,
    pub fine_code: LinearCodeSpec,
    /// (k1 / d) log2(q1), valid because the fine code is full rank
    pub rate: f64,
    pub resample_attempts: usize,
}

/// Samples a nested pair: the coarse lattice from a (d, k, q) ensemble and
/// the fine lattice as the coarse-generator transform of an independent
/// (d, k1, q1) Construction-A lattice, giving q1^k1 cosets.
pub fn nested_ensemble_sample<R: Rng + ?Sized>(
    d: usize,
    k: usize,
    q: u64,
    k1: usize,
    q1: u64,
    scale_sqrt_d: bool,
    rng: &mut R,
) -> Result<NestedEnsemble> {
    let coarse = ensemble_sample(d, k, q, scale_sqrt_d, rng)?;
    for attempt in 0..RESAMPLE_LIMIT {
        let fine_code = LinearCodeSpec::random(d, k1, q1, rng)?;
        if fine_code.systematic_form().is_err() {
            continue;
        }
        let inner = construction_a(&fine_code)?;
        // fine = (A_coarse)^T applied to the inner lattice: row generator
        // A_inner * A_coarse
        let fine_gen = inner.generator() * coarse.basis.generator();
        let fine = LatticeBasis::new(fine_gen)?;
        let pair = NestedPair::new(fine, coarse.basis.clone())?;
        let expect = (q1 as f64).powi(k1 as i32) as usize;
        debug_assert_eq!(pair.quotient_size(), expect);
        let rate = k1 as f64 / d as f64 * (q1 as f64).log2();
        return Ok(NestedEnsemble {
            pair,
            coarse_code: coarse.code,
            fine_code,
            rate,
            resample_attempts: coarse.resample_attempts + attempt,
        });
    }
    Err(Error::ResamplingExhausted(RESAMPLE_LIMIT))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn exponent_branch_values_and_continuity() {
        let tpe = 2.0 * PI * E;
        assert_abs_diff_eq!(poltyrev_exponent(4.0 * tpe).unwrap(), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(poltyrev_exponent(tpe).unwrap(), 0.0, epsilon = 1e-12);
        // middle branch at 4 pi e: (1/2) ln(e/2)
        assert_abs_diff_eq!(
            poltyrev_exponent(2.0 * tpe).unwrap(),
            0.5 * (E / 2.0).ln(),
            epsilon = 1e-12
        );
        for &mu in &[2.0 * tpe, 4.0 * tpe] {
            let below = poltyrev_exponent(mu * (1.0 - 1e-9)).unwrap();
            let above = poltyrev_exponent(mu * (1.0 + 1e-9)).unwrap();
            assert!((below - above).abs() < 1e-7);
        }
        assert!(poltyrev_exponent(tpe * 0.999).is_err());
    }

    #[test]
    fn params_at_rho_two() {
        let p = goodlattice_params(2.0, 8, 2).unwrap();
        // E(8 pi e) = 1/2 so rho^2/(32 E) = 1/4 ties the cap
        assert_abs_diff_eq!(p.r_min, 0.25, epsilon = 1e-12);
        assert_abs_diff_eq!(
            p.q_pow_k_upper / p.q_pow_k_lower,
            2.0f64.powi(8),
            epsilon = 1e-6
        );
        let qk = (p.suggested_q as f64).powi(2);
        assert!(p.q_pow_k_lower < qk && qk < p.q_pow_k_upper);
        // smallest prime in the window
        for q in 2..p.suggested_q {
            let qk = (q as f64).powi(2);
            assert!(!(is_prime(q) && p.q_pow_k_lower < qk && qk < p.q_pow_k_upper));
        }
    }

    #[test]
    fn sampled_lattice_effective_radius_in_window() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let d = 6;
        let k = 2;
        let p = goodlattice_params(2.0, d, k).unwrap();
        let sample = ensemble_sample(d, k, p.suggested_q, true, &mut rng).unwrap();
        let dd = d as f64;
        let r_eff = (sample.basis.determinant() * gamma(dd / 2.0 + 1.0)
            / PI.powf(dd / 2.0))
        .powf(1.0 / dd);
        assert!(dd.sqrt() * p.r_min < r_eff && r_eff < 2.0 * dd.sqrt() * p.r_min);
    }

    #[test]
    fn empty_prime_window_reported() {
        // d = 1, k = 1: window (Gamma(3/2)/(pi^{1/2} 2 r), ...) can be empty
        // of primes when it contains no integer > 1
        let err = goodlattice_params(1.0789, 1, 1);
        // either a prime exists or the error names the window; exercise the
        // error path with a window below 2
        match err {
            Ok(p) => assert!(p.suggested_q >= 2),
            Err(Error::EmptyPrimeRange { .. }) => {}
            Err(e) => panic!("unexpected error {e}"),
        }
    }

    #[test]
    fn nested_sample_counts_cosets() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let ne = nested_ensemble_sample(2, 1, 3, 1, 2, false, &mut rng).unwrap();
        assert_eq!(ne.pair.quotient_size(), 2);
        assert_abs_diff_eq!(ne.rate, 0.5, epsilon = 1e-12);
        // determinant ratio oracle
        let ratio = ne.pair.coarse().determinant() / ne.pair.fine().determinant();
        assert_abs_diff_eq!(ratio, 2.0, epsilon = 1e-9);
    }

    #[test]
    fn binary_fine_code_rate() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for d in [2usize, 4] {
            let ne = nested_ensemble_sample(d, 1, 3, 1, 2, false, &mut rng).unwrap();
            assert_eq!(ne.pair.quotient_size(), 2);
            assert_abs_diff_eq!(ne.rate, 1.0 / d as f64, epsilon = 1e-12);
        }
    }

    #[test]
    fn seeded_determinism() {
        let a = nested_ensemble_sample(3, 1, 3, 1, 2, true, &mut ChaCha8Rng::seed_from_u64(77))
            .unwrap();
        let b = nested_ensemble_sample(3, 1, 3, 1, 2, true, &mut ChaCha8Rng::seed_from_u64(77))
            .unwrap();
        assert_eq!(a.coarse_code, b.coarse_code);
        assert_eq!(a.fine_code, b.fine_code);
        assert_eq!(
            a.pair.fine().generator(),
            b.pair.fine().generator()
        );
    }
}
