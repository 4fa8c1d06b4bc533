//! Construction A: lifting a (d, k) linear code over Z_q to the lattice
//! (1/q) C + Z^d, in exact integer arithmetic wherever the q-denominator
//! structure allows it.

use crate::error::{Error, Result};
use crate::lattice::basis::LatticeBasis;
use crate::lattice::zq::LinearCodeSpec;
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

/// q times the generator of the lifted lattice: exact integers, original
/// column order, rows forming the basis. For a systematic code [I_k | B]
/// this is [[I_k, B], [0, q I_{d-k}]] with columns permuted back.
fn scaled_generator(code: &LinearCodeSpec) -> Result<Vec<Vec<i64>>> {
    let sys = code.systematic_form()?;
    let (d, k, q) = (code.d, code.k, code.q as i64);
    let mut rows = vec![vec![0i64; d]; d];
    for r in 0..k {
        rows[r][sys.column_permutation[r]] = 1;
        for c in 0..d - k {
            rows[r][sys.column_permutation[k + c]] = sys.b[r][c] as i64;
        }
    }
    for r in k..d {
        rows[r][sys.column_permutation[r]] = q;
    }
    Ok(rows)
}

/// The Construction-A lattice of a code, |det| = q^{-k}.
pub fn construction_a(code: &LinearCodeSpec) -> Result<LatticeBasis> {
    let scaled = scaled_generator(code)?;
    let q = code.q as f64;
    let rows: Vec<Vec<f64>> = scaled
        .iter()
        .map(|r| r.iter().map(|&v| v as f64 / q).collect())
        .collect();
    LatticeBasis::from_rows(&rows)
}

/// Exact i64 generator of q times the lattice (i.e. q A), for serialization
/// and integer algebra.
pub fn construction_a_scaled_generator(code: &LinearCodeSpec) -> Result<Vec<Vec<i64>>> {
    scaled_generator(code)
}

/// Membership: x is a lattice point iff q x is an integer vector whose
/// residues mod q form a codeword.
pub fn construction_a_contains(code: &LinearCodeSpec, x: &DVector<f64>, tol: f64) -> Result<bool> {
    if x.len() != code.d {
        return Err(Error::DimensionMismatch {
            expected: code.d,
            got: x.len(),
        });
    }
    let q = code.q;
    let mut word = vec![0u64; code.d];
    for i in 0..code.d {
        let scaled = x[i] * q as f64;
        let rounded = scaled.round();
        if (scaled - rounded).abs() > tol * q as f64 {
            return Ok(false);
        }
        let m = (rounded as i64).rem_euclid(q as i64);
        word[i] = m as u64;
    }
    code.contains(&word)
}

/// Generator of the dual lattice: for systematic [I_k | B] this is
/// [[q I_k, 0], [-B^T, I_{d-k}]] (columns permuted back), satisfying
/// A (A*)^T = (A*)^T A = I exactly and generating q times the lattice of the
/// dual code.
pub fn dual_construction_a_generator(code: &LinearCodeSpec) -> Result<Vec<Vec<i64>>> {
    let sys = code.systematic_form()?;
    let (d, k, q) = (code.d, code.k, code.q as i64);
    let mut rows = vec![vec![0i64; d]; d];
    for r in 0..k {
        rows[r][sys.column_permutation[r]] = q;
    }
    for r in 0..d - k {
        for c in 0..k {
            rows[k + r][sys.column_permutation[c]] = -(sys.b[c][r] as i64);
        }
        rows[k + r][sys.column_permutation[k + r]] = 1;
    }
    Ok(rows)
}

/// Exact product check A (A*)^T in integer arithmetic; returns q * I when the
/// pair is consistent (A itself carries the 1/q).
pub fn generator_product(a_scaled: &[Vec<i64>], a_star: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let d = a_scaled.len();
    let mut out = vec![vec![0i64; d]; d];
    for i in 0..d {
        for j in 0..d {
            // (A_scaled (A*)^T)_{ij} = sum_c A_scaled[i][c] A*[j][c]
            out[i][j] = (0..d).map(|c| a_scaled[i][c] * a_star[j][c]).sum();
        }
    }
    out
}

/// JSON document for a code with its lifted lattice. Rational generator
/// entries are serialized as exact "p/q" strings (integers stay plain);
/// `scale_sq` stores the square of an overall sqrt scaling exactly, so the
/// working generator is sqrt(scale_sq) times the rational matrix.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CodeLatticeDocument {
    pub d: usize,
    pub k: usize,
    pub q: u64,
    pub g_row_major: Vec<u64>,
    pub generator_row_major: Vec<String>,
    pub scale_sq: u64,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn rational_string(num: i64, den: u64) -> String {
    if num == 0 {
        return "0".into();
    }
    let g = gcd(num.unsigned_abs(), den);
    let (n, d) = (num / g as i64, den / g);
    if d == 1 {
        format!("{n}")
    } else {
        format!("{n}/{d}")
    }
}

fn parse_rational(s: &str) -> Result<f64> {
    let bad = || Error::InvalidConfig(format!("malformed rational entry '{s}'"));
    match s.split_once('/') {
        None => s.parse::<i64>().map(|v| v as f64).map_err(|_| bad()),
        Some((n, d)) => {
            let n: i64 = n.parse().map_err(|_| bad())?;
            let d: i64 = d.parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ok(n as f64 / d as f64)
        }
    }
}

impl CodeLatticeDocument {
    pub fn new(code: &LinearCodeSpec, scale_sq: u64) -> Result<Self> {
        let scaled = scaled_generator(code)?;
        let generator_row_major = scaled
            .iter()
            .flat_map(|row| row.iter().map(|&v| rational_string(v, code.q)))
            .collect();
        Ok(Self {
            d: code.d,
            k: code.k,
            q: code.q,
            g_row_major: code.rows.iter().flatten().copied().collect(),
            generator_row_major,
            scale_sq,
        })
    }

    pub fn code(&self) -> Result<LinearCodeSpec> {
        if self.g_row_major.len() != self.k * self.d {
            return Err(Error::InvalidConfig("generator shape mismatch".into()));
        }
        let rows = self
            .g_row_major
            .chunks(self.d)
            .map(|c| c.to_vec())
            .collect();
        LinearCodeSpec::new(self.d, self.k, self.q, rows)
    }

    pub fn basis(&self) -> Result<LatticeBasis> {
        if self.generator_row_major.len() != self.d * self.d {
            return Err(Error::InvalidConfig("lattice generator shape mismatch".into()));
        }
        let scale = (self.scale_sq as f64).sqrt();
        let mut gen = DMatrix::zeros(self.d, self.d);
        for (i, s) in self.generator_row_major.iter().enumerate() {
            gen[(i / self.d, i % self.d)] = parse_rational(s)? * scale;
        }
        LatticeBasis::new(gen)
    }
}
