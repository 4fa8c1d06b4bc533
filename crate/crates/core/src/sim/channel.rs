//! The two-user Gaussian MAC round, the relay's lattice decoder, and the
//! Monte Carlo error-rate estimator.
//!
//! Reproducibility: every trial draws from its own ChaCha stream indexed by
//! trial number, so results are bit-identical for a given seed regardless of
//! batching or worker count.

use crate::error::Result;
use crate::lattice::{GroupElement, NestedPair};
use crate::modulation::SecureModulator;
use nalgebra::DVector;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

/// Channel and experiment parameters for one configuration.
#[derive(Debug, Clone, Serialize)]
pub struct ChannelConfig {
    /// noise variance per dimension (0 = noiseless)
    pub sigma2: f64,
    pub trials: usize,
    pub seed: u64,
}

impl ChannelConfig {
    pub fn new(sigma2: f64, trials: usize, seed: u64) -> Result<Self> {
        if !(sigma2 >= 0.0) || trials == 0 {
            return Err(crate::error::Error::InvalidConfig(format!(
                "sigma2 = {sigma2}, trials = {trials}"
            )));
        }
        Ok(Self {
            sigma2,
            trials,
            seed,
        })
    }
}

/// Independent RNG substream for one trial of one seeded experiment.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial.wrapping_add(1));
    rng
}

fn gaussian_vector<R: Rng + ?Sized>(d: usize, sigma: f64, rng: &mut R) -> DVector<f64> {
    DVector::from_iterator(
        d,
        (0..d).map(|_| {
            let g: f64 = StandardNormal.sample(rng);
            sigma * g
        }),
    )
}

/// Relay decoding: the coset of the closest fine-lattice point.
pub fn decode_received(pair: &NestedPair, w: &DVector<f64>) -> Result<GroupElement> {
    let (_, z) = pair.fine().nearest_point(w)?;
    Ok(pair.label_of_coords(&z))
}

#[derive(Debug, Clone)]
pub struct MacRound {
    pub u: DVector<f64>,
    pub v: DVector<f64>,
    pub w: DVector<f64>,
    pub decoded: GroupElement,
}

/// One channel use: independent modulation of both messages, Gaussian noise,
/// and relay decoding.
pub fn mac_round<R: Rng + ?Sized>(
    m: &SecureModulator,
    x: GroupElement,
    y: GroupElement,
    sigma2: f64,
    rng: &mut R,
) -> Result<MacRound> {
    let d = m.pair().fine().dimension();
    let u = m.modulate(x, rng);
    let v = m.modulate(y, rng);
    let z = gaussian_vector(d, sigma2.sqrt(), rng);
    let w = &u + &v + z;
    let decoded = decode_received(m.pair(), &w)?;
    Ok(MacRound { u, v, w, decoded })
}

/// 95% Wilson score interval for a binomial proportion.
pub fn wilson_interval(errors: usize, trials: usize) -> (f64, f64) {
    let z = 1.959963984540054_f64;
    let n = trials as f64;
    let p = errors as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

#[derive(Debug, Clone, Serialize)]
pub struct SimResult {
    pub p_err: f64,
    pub wilson_low: f64,
    pub wilson_high: f64,
    pub errors: usize,
    pub trials_run: usize,
    /// (1/d) log2 N
    pub rate: f64,
    pub avg_power_formula: f64,
    pub avg_power_measured: f64,
    pub sigma2: f64,
    pub seed: u64,
}

/// Monte Carlo error probability with uniformly drawn messages: the fraction
/// of rounds where the relay's decoded coset differs from the group sum.
pub fn error_rate(m: &SecureModulator, cfg: &ChannelConfig) -> Result<SimResult> {
    assert!(cfg.trials >= 100, "need at least 100 trials");
    let pair = m.pair();
    let n = pair.quotient_size();
    let d = pair.fine().dimension() as f64;
    let mut errors = 0usize;
    let mut power_acc = 0.0;
    for trial in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, trial as u64);
        let x = GroupElement(rng.gen_range(0..n));
        let y = GroupElement(rng.gen_range(0..n));
        let round = mac_round(m, x, y, cfg.sigma2, &mut rng)?;
        if round.decoded != pair.add(x, y) {
            errors += 1;
        }
        power_acc += round.u.norm_squared() / d;
    }
    let (wilson_low, wilson_high) = wilson_interval(errors, cfg.trials);
    Ok(SimResult {
        p_err: errors as f64 / cfg.trials as f64,
        wilson_low,
        wilson_high,
        errors,
        trials_run: cfg.trials,
        rate: (n as f64).log2() / d,
        avg_power_formula: m.avg_power(),
        avg_power_measured: power_acc / cfg.trials as f64,
        sigma2: cfg.sigma2,
        seed: cfg.seed,
    })
}

/// Noise-only error probability: by lattice translation invariance of the
/// decoder, a round errs iff the quantized noise Q_fine(z) leaves the coarse
/// lattice, independently of messages and modulation. Exact same error law
/// as `error_rate`, usable when the coset pmfs are too large to enumerate.
pub fn error_rate_noise_only(
    pair: &NestedPair,
    sigma2: f64,
    trials: usize,
    seed: u64,
) -> Result<SimResult> {
    assert!(trials >= 100, "need at least 100 trials");
    let d = pair.fine().dimension();
    let mut errors = 0usize;
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial as u64);
        let z = gaussian_vector(d, sigma2.sqrt(), &mut rng);
        let (_, zc) = pair.fine().nearest_point(&z)?;
        if pair.label_of_coords(&zc) != pair.identity() {
            errors += 1;
        }
    }
    let (wilson_low, wilson_high) = wilson_interval(errors, trials);
    Ok(SimResult {
        p_err: errors as f64 / trials as f64,
        wilson_low,
        wilson_high,
        errors,
        trials_run: trials,
        rate: (pair.quotient_size() as f64).log2() / d as f64,
        avg_power_formula: f64::NAN,
        avg_power_measured: f64::NAN,
        sigma2,
        seed,
    })
}

/// Runs modulate / noiseless-demodulate rounds with uniform messages and
/// returns the number of decode failures (always 0 for a correct modulator:
/// the sum determines the group sum exactly).
pub fn noiseless_decode_failures(m: &SecureModulator, rounds: usize, seed: u64) -> Result<usize> {
    let pair = m.pair();
    let n = pair.quotient_size();
    let mut failures = 0usize;
    for trial in 0..rounds {
        let mut rng = trial_rng(seed, trial as u64);
        let x = GroupElement(rng.gen_range(0..n));
        let y = GroupElement(rng.gen_range(0..n));
        let u = m.modulate(x, &mut rng);
        let v = m.modulate(y, &mut rng);
        if pair.coset_label(&(u + v))? != pair.add(x, y) {
            failures += 1;
        }
    }
    Ok(failures)
}

#[derive(Debug, Clone, Serialize)]
pub struct MlanReport {
    pub rounds: usize,
    pub max_vector_residual: f64,
    pub decode_mismatches: usize,
    pub pass: bool,
}

/// Verifies the modulo-lattice chain on sampled rounds:
/// [u+v+z] mod coarse = [([u+v] mod coarse) + z] mod coarse
///                    = [([x+y] mod coarse) + z] mod coarse,
/// with x, y the coset representatives of u, v; and that decoding the folded
/// observation matches decoding the raw one.
pub fn mlan_equivalence_check(
    m: &SecureModulator,
    sigma2: f64,
    rounds: usize,
    seed: u64,
) -> Result<MlanReport> {
    let pair = m.pair();
    let coarse = pair.coarse();
    let n = pair.quotient_size();
    let mut max_residual = 0.0_f64;
    let mut mismatches = 0usize;
    for trial in 0..rounds {
        let mut rng = trial_rng(seed, trial as u64);
        let x = GroupElement(rng.gen_range(0..n));
        let y = GroupElement(rng.gen_range(0..n));
        let u = m.modulate(x, &mut rng);
        let v = m.modulate(y, &mut rng);
        let z = gaussian_vector(coarse.dimension(), sigma2.sqrt(), &mut rng);
        let w = &u + &v + &z;

        let w1 = coarse.mod_lattice(&w)?;
        let w2 = coarse.mod_lattice(&(coarse.mod_lattice(&(&u + &v))? + &z))?;
        let xy = coarse.mod_lattice(&(pair.rep(x) + pair.rep(y)))?;
        let w3 = coarse.mod_lattice(&(xy + &z))?;
        max_residual = max_residual.max((&w1 - &w2).norm()).max((&w1 - &w3).norm());

        let direct = decode_received(pair, &w)?;
        let folded = {
            let (_, zc) = pair.fine().nearest_point(&w1)?;
            pair.label_of_coords(&zc)
        };
        if direct != folded {
            mismatches += 1;
        }
    }
    Ok(MlanReport {
        rounds,
        max_vector_residual: max_residual,
        decode_mismatches: mismatches,
        pass: max_residual < 1e-9 && mismatches == 0,
    })
}
