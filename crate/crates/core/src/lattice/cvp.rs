//! Exact closest-vector and ball enumeration on the QR form of the basis.
//!
//! With B = A^T = Q R (R upper triangular, positive diagonal), minimizing
//! ||x - B z|| is minimizing ||y - R z|| for y = Q^T x, which a depth-first
//! interval search solves exactly: fixing z_d .. z_{i+1} bounds the partial
//! residual from below, so every integer point inside the search radius is
//! visited and nothing closer can be pruned away.

use nalgebra::{DMatrix, DVector};

/// All integer coordinate vectors z with ||B z - center|| <= radius.
pub fn enumerate_ball(
    q_t: &DMatrix<f64>,
    r: &DMatrix<f64>,
    center: &DVector<f64>,
    radius: f64,
) -> Vec<Vec<i64>> {
    let d = r.nrows();
    let y = q_t * center;
    let mut out = Vec::new();
    let mut z = vec![0i64; d];
    // residual budget is inflated a hair so boundary points are kept
    let r2 = radius * radius * (1.0 + 1e-12) + 1e-12;
    descend(r, &y, d, r2, 0.0, &mut z, &mut |z, _| out.push(z.to_vec()));
    out
}

/// Closest z to the target (after the same QR change of coordinates), ties
/// resolved to the lexicographically smallest z.
pub fn closest(q_t: &DMatrix<f64>, r: &DMatrix<f64>, x: &DVector<f64>) -> Vec<i64> {
    let d = r.nrows();
    let y = q_t * x;
    // Babai nearest-plane point seeds the search radius
    let mut babai = vec![0i64; d];
    for i in (0..d).rev() {
        let mut acc = y[i];
        for k in i + 1..d {
            acc -= r[(i, k)] * babai[k] as f64;
        }
        babai[i] = (acc / r[(i, i)]).round() as i64;
    }
    let babai_dist2 = dist2(r, &y, &babai);
    let scale = babai_dist2.max(1.0);
    let tie = 1e-9 * scale;

    let mut best = babai.clone();
    let mut best_d2 = babai_dist2;
    let mut z = vec![0i64; d];
    descend(
        r,
        &y,
        d,
        babai_dist2 * (1.0 + 1e-12) + tie,
        0.0,
        &mut z,
        &mut |cand, d2| {
            if d2 < best_d2 - tie || (d2 <= best_d2 + tie && cand < best.as_slice()) {
                best_d2 = d2;
                best.copy_from_slice(cand);
            }
        },
    );
    best
}

fn dist2(r: &DMatrix<f64>, y: &DVector<f64>, z: &[i64]) -> f64 {
    let d = r.nrows();
    let mut acc = 0.0;
    for i in 0..d {
        let mut v = y[i];
        for k in i..d {
            v -= r[(i, k)] * z[k] as f64;
        }
        acc += v * v;
    }
    acc
}

/// Depth-first traversal of levels i = level-1 .. 0; `used` is the residual
/// already committed by levels above.
fn descend<F: FnMut(&[i64], f64)>(
    r: &DMatrix<f64>,
    y: &DVector<f64>,
    level: usize,
    budget: f64,
    used: f64,
    z: &mut Vec<i64>,
    visit: &mut F,
) {
    let i = level - 1;
    let mut target = y[i];
    for k in level..r.nrows() {
        target -= r[(i, k)] * z[k] as f64;
    }
    let rii = r[(i, i)];
    let room = ((budget - used).max(0.0)).sqrt() / rii;
    let c = target / rii;
    let lo = (c - room).ceil() as i64;
    let hi = (c + room).floor() as i64;
    for zi in lo..=hi {
        let delta = rii * (zi as f64 - c);
        let used2 = used + delta * delta;
        if used2 > budget {
            continue;
        }
        z[i] = zi;
        if i == 0 {
            visit(z, used2);
        } else {
            descend(r, y, i, budget, used2, z, visit);
        }
    }
    z[i] = 0;
}
