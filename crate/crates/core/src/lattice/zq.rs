//! Linear codes over the prime field Z_q in exact integer arithmetic.

use crate::error::{Error, Result};
use rand::Rng;
use serde::{Deserialize, Serialize};

pub fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    if q % 2 == 0 {
        return q == 2;
    }
    let mut f = 3;
    while f * f <= q {
        if q % f == 0 {
            return false;
        }
        f += 2;
    }
    true
}

fn mod_inverse(a: u64, q: u64) -> u64 {
    // Fermat: a^(q-2) mod q for prime q
    let mut base = a % q;
    let mut exp = q - 2;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % q;
        }
        base = base * base % q;
        exp >>= 1;
    }
    acc
}

/// A (d, k) linear code over Z_q given by a k x d generator matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearCodeSpec {
    pub d: usize,
    pub k: usize,
    pub q: u64,
    /// k rows of length d, entries in 0..q
    pub rows: Vec<Vec<u64>>,
}

/// Row-reduced form G P = [I_k | B] for a column permutation P.
/// `column_permutation[j]` is the original column sitting at position j.
#[derive(Debug, Clone)]
pub struct SystematicCode {
    pub d: usize,
    pub k: usize,
    pub q: u64,
    /// k x (d - k) block B
    pub b: Vec<Vec<u64>>,
    pub column_permutation: Vec<usize>,
}

impl LinearCodeSpec {
    pub fn new(d: usize, k: usize, q: u64, rows: Vec<Vec<u64>>) -> Result<Self> {
        if !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        if k > d || rows.len() != k || rows.iter().any(|r| r.len() != d) {
            return Err(Error::InvalidConfig(format!(
                "generator must be {k} x {d} with k <= d"
            )));
        }
        if rows.iter().flatten().any(|&e| e >= q) {
            return Err(Error::InvalidConfig("entries must lie in 0..q".into()));
        }
        Ok(Self { d, k, q, rows })
    }

    /// Uniformly random k x d generator.
    pub fn random<R: Rng + ?Sized>(d: usize, k: usize, q: u64, rng: &mut R) -> Result<Self> {
        if !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        let rows = (0..k)
            .map(|_| (0..d).map(|_| rng.gen_range(0..q)).collect())
            .collect();
        Self::new(d, k, q, rows)
    }

    /// Gaussian elimination to [I_k | B] with column swaps recorded; errs
    /// when the rank falls short of k.
    pub fn systematic_form(&self) -> Result<SystematicCode> {
        let (d, k, q) = (self.d, self.k, self.q);
        let mut m = self.rows.clone();
        let mut perm: Vec<usize> = (0..d).collect();
        for r in 0..k {
            // first column at or after r holding a nonzero on some row >= r
            let mut pivot = None;
            'search: for c in r..d {
                for rr in r..k {
                    if m[rr][c] != 0 {
                        pivot = Some((rr, c));
                        break 'search;
                    }
                }
            }
            let (pr, pc) = match pivot {
                Some(p) => p,
                None => return Err(Error::RankDeficient { rank: r, k }),
            };
            m.swap(r, pr);
            if pc != r {
                for row in m.iter_mut() {
                    row.swap(r, pc);
                }
                perm.swap(r, pc);
            }
            let inv = mod_inverse(m[r][r], q);
            for c in r..d {
                m[r][c] = m[r][c] * inv % q;
            }
            for rr in 0..k {
                if rr != r && m[rr][r] != 0 {
                    let factor = m[rr][r];
                    for c in r..d {
                        m[rr][c] = (m[rr][c] + (q - factor) * m[r][c]) % q;
                    }
                    m[rr][r] = 0;
                }
            }
        }
        let b = m.iter().map(|row| row[k..].to_vec()).collect();
        Ok(SystematicCode {
            d,
            k,
            q,
            b,
            column_permutation: perm,
        })
    }

    /// All q^k codewords (G^T y mod q over message vectors y). Intended for
    /// small brute-force checks.
    pub fn codewords(&self) -> Vec<Vec<u64>> {
        let total = (self.q as u128).pow(self.k as u32);
        assert!(total <= 1 << 22, "codeword enumeration too large");
        let mut out = Vec::with_capacity(total as usize);
        let mut msg = vec![0u64; self.k];
        loop {
            let mut cw = vec![0u64; self.d];
            for (i, &mi) in msg.iter().enumerate() {
                if mi != 0 {
                    for (c, &g) in self.rows[i].iter().enumerate() {
                        cw[c] = (cw[c] + mi * g) % self.q;
                    }
                }
            }
            out.push(cw);
            let mut pos = 0;
            loop {
                if pos == self.k {
                    return out;
                }
                msg[pos] += 1;
                if msg[pos] < self.q {
                    break;
                }
                msg[pos] = 0;
                pos += 1;
            }
        }
    }

    /// Membership test by systematic re-encoding.
    pub fn contains(&self, word: &[u64]) -> Result<bool> {
        if word.len() != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                got: word.len(),
            });
        }
        let sys = self.systematic_form()?;
        let permuted: Vec<u64> = sys.column_permutation.iter().map(|&c| word[c]).collect();
        let msg = &permuted[..self.k];
        for j in 0..self.d - self.k {
            let mut acc = 0u64;
            for (i, &mi) in msg.iter().enumerate() {
                acc = (acc + mi * sys.b[i][j]) % self.q;
            }
            if acc != permuted[self.k + j] % self.q {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The dual code, generated by [-B^T | I_{d-k}] in the systematic
    /// coordinates and mapped back through the column permutation.
    pub fn dual(&self) -> Result<LinearCodeSpec> {
        let sys = self.systematic_form()?;
        let (d, k, q) = (self.d, self.k, self.q);
        let mut rows = vec![vec![0u64; d]; d - k];
        for r in 0..d - k {
            for c in 0..k {
                rows[r][sys.column_permutation[c]] = (q - sys.b[c][r] % q) % q;
            }
            rows[r][sys.column_permutation[k + r]] = 1;
        }
        LinearCodeSpec::new(d, d - k, q, rows)
    }
}
