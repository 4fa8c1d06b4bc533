//! Empirical secrecy statistics at the relay: the received sum u + v is
//! binned on exact lattice points and its conditional laws are compared
//! across message values.

use crate::error::Result;
use crate::lattice::GroupElement;
use crate::modulation::SecureModulator;
use crate::sim::channel::trial_rng;
use rand::Rng;
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};
use std::collections::HashMap;

/// Which message variable the conditional laws are split on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ConditionOn {
    /// the first user's message: independence must hold
    FirstMessage,
    /// the group sum: the relay does learn this, laws must differ
    GroupSum,
}

#[derive(Debug, Clone, Serialize)]
pub struct SecrecyEmpiricalReport {
    pub trials: usize,
    pub groups: usize,
    pub occupied_bins: usize,
    pub chi2: f64,
    pub dof: usize,
    pub p_value: f64,
    /// max over group pairs of sum_k |phat_a(k) - phat_b(k)|
    pub max_pairwise_l1: f64,
    pub significance: f64,
    pub pass: bool,
}

/// Chi-square homogeneity test plus pairwise L1 distances between the
/// empirical conditional laws of u + v. Bins with pooled expected count
/// under 5 are merged into one bucket before the test. PASS means the data
/// are consistent with identical conditionals at the given significance.
pub fn secrecy_empirical(
    m: &SecureModulator,
    trials: usize,
    seed: u64,
    condition: ConditionOn,
    significance: f64,
) -> Result<SecrecyEmpiricalReport> {
    assert!(trials >= 10_000, "need at least 1e4 trials");
    let pair = m.pair();
    let n = pair.quotient_size();
    // key: integer coordinates of u + v in the fine basis (exact)
    let mut bins: HashMap<Vec<i64>, Vec<u64>> = HashMap::new();
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial as u64);
        let x = GroupElement(rng.gen_range(0..n));
        let y = GroupElement(rng.gen_range(0..n));
        let (_, zu) = m.modulate_coords(x, &mut rng);
        let (_, zv) = m.modulate_coords(y, &mut rng);
        let key: Vec<i64> = zu.iter().zip(&zv).map(|(a, b)| a + b).collect();
        let group = match condition {
            ConditionOn::FirstMessage => x.0,
            ConditionOn::GroupSum => pair.add(x, y).0,
        };
        bins.entry(key).or_insert_with(|| vec![0; n])[group] += 1;
    }

    let group_totals: Vec<f64> = (0..n)
        .map(|g| bins.values().map(|v| v[g] as f64).sum())
        .collect();
    let grand: f64 = group_totals.iter().sum();

    // merge sparse bins so the chi-square approximation holds
    let mut kept: Vec<Vec<u64>> = Vec::new();
    let mut overflow = vec![0u64; n];
    let mut overflow_used = false;
    for counts in bins.values() {
        let pooled: u64 = counts.iter().sum();
        let min_expected = group_totals
            .iter()
            .map(|gt| gt * pooled as f64 / grand)
            .fold(f64::INFINITY, f64::min);
        if min_expected >= 5.0 {
            kept.push(counts.clone());
        } else {
            for (o, c) in overflow.iter_mut().zip(counts) {
                *o += c;
            }
            overflow_used = true;
        }
    }
    if overflow_used && overflow.iter().sum::<u64>() > 0 {
        kept.push(overflow);
    }

    let mut chi2 = 0.0;
    for counts in &kept {
        let pooled: u64 = counts.iter().sum();
        for (g, &c) in counts.iter().enumerate() {
            let expected = group_totals[g] * pooled as f64 / grand;
            if expected > 0.0 {
                let diff = c as f64 - expected;
                chi2 += diff * diff / expected;
            }
        }
    }
    let dof = (kept.len().saturating_sub(1)) * (n - 1);
    let p_value = if dof == 0 {
        1.0
    } else {
        1.0 - ChiSquared::new(dof as f64).unwrap().cdf(chi2)
    };

    let mut max_pairwise_l1 = 0.0_f64;
    for a in 0..n {
        for b in a + 1..n {
            let mut l1 = 0.0;
            for counts in bins.values() {
                let pa = counts[a] as f64 / group_totals[a].max(1.0);
                let pb = counts[b] as f64 / group_totals[b].max(1.0);
                l1 += (pa - pb).abs();
            }
            max_pairwise_l1 = max_pairwise_l1.max(l1);
        }
    }

    Ok(SecrecyEmpiricalReport {
        trials,
        groups: n,
        occupied_bins: bins.len(),
        chi2,
        dof,
        p_value,
        max_pairwise_l1,
        significance,
        pass: p_value >= significance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::CharFnSpec;
    use crate::lattice::{LatticeBasis, NestedPair};
    use crate::modulation::modulator::z_over_nz_modulator;
    use std::f64::consts::PI;

    #[test]
    fn secure_modulator_passes() {
        let m = z_over_nz_modulator(2, &CharFnSpec::triangle(PI / 2.0), Some(2000.0)).unwrap();
        let rep = secrecy_empirical(&m, 200_000, 42, ConditionOn::FirstMessage, 1e-3).unwrap();
        assert!(rep.pass, "p = {}, chi2 = {}", rep.p_value, rep.chi2);
        assert!(rep.max_pairwise_l1 < 0.05);
    }

    #[test]
    fn naive_baseline_fails_with_l1_near_one() {
        let pair = NestedPair::new(
            LatticeBasis::integer(1),
            LatticeBasis::scaled_integer(1, 2.0).unwrap(),
        )
        .unwrap();
        let b = SecureModulator::naive_baseline(pair).unwrap();
        let rep = secrecy_empirical(&b, 50_000, 7, ConditionOn::FirstMessage, 1e-3).unwrap();
        assert!(!rep.pass);
        assert!((rep.max_pairwise_l1 - 1.0).abs() < 0.02, "l1 {}", rep.max_pairwise_l1);
    }

    #[test]
    fn conditioning_on_the_sum_separates() {
        // the relay learns the group sum: conditionals have disjoint support
        let m = z_over_nz_modulator(2, &CharFnSpec::triangle(PI / 2.0), Some(2000.0)).unwrap();
        let rep = secrecy_empirical(&m, 50_000, 9, ConditionOn::GroupSum, 1e-3).unwrap();
        assert!(!rep.pass);
        assert!((rep.max_pairwise_l1 - 2.0).abs() < 1e-9);
    }
}
