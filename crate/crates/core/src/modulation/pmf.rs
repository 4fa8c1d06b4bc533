//! Truncated pmfs over lattice points with certified discarded mass.

use crate::error::{Error, Result};
use crate::lattice::GroupElement;
use nalgebra::DVector;
use rand::Rng;
use std::collections::HashMap;

/// A pmf supported on lattice points, truncated at some radius: the stored
/// masses sum to 1 - tau with 0 <= tau <= tail_bound. Sampling renormalizes;
/// the raw masses are kept for the exact secrecy arithmetic.
#[derive(Debug, Clone)]
pub struct DiscretePmf {
    support: Vec<DVector<f64>>,
    /// integer coordinates of each point in its generating (fine) basis
    coords: Vec<Vec<i64>>,
    masses: Vec<f64>,
    tail_bound: f64,
    home_coset: Option<GroupElement>,
    cdf: Vec<f64>,
    total: f64,
}

impl DiscretePmf {
    pub fn new(
        support: Vec<DVector<f64>>,
        coords: Vec<Vec<i64>>,
        masses: Vec<f64>,
        tail_bound: f64,
        home_coset: Option<GroupElement>,
    ) -> Result<Self> {
        if support.len() != masses.len() || support.len() != coords.len() {
            return Err(Error::InvalidConfig(
                "support, coords and masses must have matching lengths".into(),
            ));
        }
        if masses.iter().any(|&m| !(m >= 0.0)) {
            return Err(Error::InvalidConfig("negative or NaN mass".into()));
        }
        let total: f64 = masses.iter().sum();
        if total > 1.0 + 1e-9 {
            return Err(Error::InvalidConfig(format!(
                "masses sum to {total}, above 1"
            )));
        }
        if 1.0 - total > tail_bound + 1e-9 {
            return Err(Error::InvalidConfig(format!(
                "discarded mass {} exceeds the certified tail bound {tail_bound}",
                1.0 - total
            )));
        }
        let mut cdf = Vec::with_capacity(masses.len());
        let mut acc = 0.0;
        for &m in &masses {
            acc += m;
            cdf.push(acc);
        }
        Ok(Self {
            support,
            coords,
            masses,
            tail_bound,
            home_coset,
            cdf,
            total,
        })
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    pub fn support(&self) -> &[DVector<f64>] {
        &self.support
    }

    pub fn coords(&self) -> &[Vec<i64>] {
        &self.coords
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn total_mass(&self) -> f64 {
        self.total
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn home_coset(&self) -> Option<GroupElement> {
        self.home_coset
    }

    /// Raw mass at a given point, looked up by exact integer coordinates.
    pub fn mass_at(&self, coords: &[i64]) -> f64 {
        self.coords
            .iter()
            .position(|c| c == coords)
            .map_or(0.0, |i| self.masses[i])
    }

    /// Map keyed by integer coordinates (for convolutions and distances).
    pub fn as_map(&self) -> HashMap<Vec<i64>, f64> {
        self.coords
            .iter()
            .cloned()
            .zip(self.masses.iter().copied())
            .collect()
    }

    /// Truncated (unrenormalized) second moment sum ||k||^2 p(k).
    pub fn second_moment(&self) -> f64 {
        self.support
            .iter()
            .zip(&self.masses)
            .map(|(p, &m)| p.norm_squared() * m)
            .sum()
    }

    pub fn mean(&self) -> DVector<f64> {
        let d = self.support.first().map_or(0, |p| p.len());
        let mut acc = DVector::zeros(d);
        for (p, &m) in self.support.iter().zip(&self.masses) {
            acc += p * m;
        }
        acc / self.total
    }

    /// Inverse-CDF draw over the renormalized masses.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u = rng.gen::<f64>() * self.total;
        self.cdf.partition_point(|&c| c <= u).min(self.len() - 1)
    }

    pub fn sample_point<R: Rng + ?Sized>(&self, rng: &mut R) -> (&DVector<f64>, &[i64]) {
        let i = self.sample(rng);
        (&self.support[i], &self.coords[i])
    }
}

/// Sum of |p - q| over the union of supports (L1 variation distance; the
/// half-normalized total variation is half of this).
pub fn l1_distance(a: &HashMap<Vec<i64>, f64>, b: &HashMap<Vec<i64>, f64>) -> f64 {
    let mut acc = 0.0;
    for (k, &va) in a {
        acc += (va - b.get(k).copied().unwrap_or(0.0)).abs();
    }
    for (k, &vb) in b {
        if !a.contains_key(k) {
            acc += vb.abs();
        }
    }
    acc
}

/// Convolution of two coordinate-keyed pmfs (exact integer key addition).
pub fn convolve(a: &HashMap<Vec<i64>, f64>, b: &HashMap<Vec<i64>, f64>) -> HashMap<Vec<i64>, f64> {
    let mut out: HashMap<Vec<i64>, f64> = HashMap::with_capacity(a.len() + b.len());
    for (ka, &va) in a {
        for (kb, &vb) in b {
            let key: Vec<i64> = ka.iter().zip(kb).map(|(x, y)| x + y).collect();
            *out.entry(key).or_insert(0.0) += va * vb;
        }
    }
    out
}
