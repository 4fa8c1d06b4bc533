//! Nested lattice pairs and their quotient groups.
//!
//! For coarse ⊆ fine, messages live in the quotient fine/coarse of size
//! N = det(coarse)/det(fine). Cosets are indexed through the Hermite normal
//! form of the integer matrix expressing the coarse basis in fine
//! coordinates, which gives a canonical box of representatives and O(d^2)
//! label arithmetic.

use crate::error::{Error, Result};
use crate::lattice::basis::LatticeBasis;
use nalgebra::DVector;
use serde::{Deserialize, Serialize};

/// Coset index in [0, N). Only meaningful relative to the pair it came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElement(pub usize);

/// Hard cap on enumerated quotients.
pub const MAX_QUOTIENT: usize = 1 << 16;

#[derive(Debug, Clone)]
pub struct NestedPair {
    fine: LatticeBasis,
    coarse: LatticeBasis,
    index: usize,
    /// column-style upper-triangular HNF of the coarse-in-fine coordinate
    /// matrix; columns generate the coarse lattice's preimage in Z^d
    hnf: Vec<Vec<i128>>,
    /// radices: hnf[i][i]
    radices: Vec<i128>,
    /// canonical representatives, [fine point] mod coarse, indexed by label
    reps: Vec<DVector<f64>>,
    /// fine-lattice integer coordinates of the box representative per label
    rep_coords: Vec<Vec<i64>>,
}

impl NestedPair {
    /// Builds the quotient structure; errs when the coarse lattice is not a
    /// sublattice of the fine one (checked to 1e-9 relative) or when the
    /// index exceeds `MAX_QUOTIENT`.
    pub fn new(fine: LatticeBasis, coarse: LatticeBasis) -> Result<Self> {
        let d = fine.dimension();
        if coarse.dimension() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: coarse.dimension(),
            });
        }
        // coarse basis rows expressed in fine coordinates must be integers
        let mut m = vec![vec![0i128; d]; d]; // columns: coarse basis vectors in fine coords
        for jcol in 0..d {
            let row = DVector::from_iterator(d, coarse.generator().row(jcol).iter().cloned());
            let coords = fine.coords(&row);
            for i in 0..d {
                let c = coords[i];
                if (c - c.round()).abs() > 1e-9 * (1.0 + c.abs()) {
                    return Err(Error::NotNested);
                }
                m[i][jcol] = c.round() as i128;
            }
        }
        let ratio = coarse.determinant() / fine.determinant();
        let index = ratio.round();
        if (ratio - index).abs() > 1e-6 * ratio.max(1.0) || index < 1.0 {
            return Err(Error::NotNested);
        }
        let index = index as usize;
        if index > MAX_QUOTIENT {
            return Err(Error::QuotientTooLarge {
                n: index,
                max: MAX_QUOTIENT,
            });
        }
        let hnf = column_hnf(m);
        let radices: Vec<i128> = (0..d).map(|i| hnf[i][i]).collect();
        let hnf_det: i128 = radices.iter().product();
        debug_assert_eq!(hnf_det as usize, index, "HNF determinant mismatch");

        // enumerate the representative box in mixed-radix order
        let mut reps = Vec::with_capacity(index);
        let mut rep_coords = Vec::with_capacity(index);
        let mut box_z = vec![0i128; d];
        for _ in 0..index {
            let z: Vec<i64> = box_z.iter().map(|&v| v as i64).collect();
            let point = fine.point(&z);
            let rep = coarse.mod_lattice(&point)?;
            reps.push(rep);
            rep_coords.push(z);
            // increment mixed radix (first coordinate fastest)
            for (i, digit) in box_z.iter_mut().enumerate() {
                *digit += 1;
                if *digit < radices[i] {
                    break;
                }
                *digit = 0;
                debug_assert!(i + 1 <= d);
            }
        }
        Ok(Self {
            fine,
            coarse,
            index,
            hnf,
            radices,
            reps,
            rep_coords,
        })
    }

    pub fn fine(&self) -> &LatticeBasis {
        &self.fine
    }

    pub fn coarse(&self) -> &LatticeBasis {
        &self.coarse
    }

    /// Number of cosets N.
    pub fn quotient_size(&self) -> usize {
        self.index
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement(0)
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> {
        (0..self.index).map(GroupElement)
    }

    /// Canonical representative of the coset: the unique point of the coset
    /// inside the coarse Voronoi region.
    pub fn rep(&self, g: GroupElement) -> &DVector<f64> {
        &self.reps[g.0]
    }

    /// Fine-coordinate integer vector of the stored box representative.
    pub fn rep_coords(&self, g: GroupElement) -> &[i64] {
        &self.rep_coords[g.0]
    }

    /// Reduces fine-lattice integer coordinates into the HNF box and returns
    /// the mixed-radix label.
    pub fn label_of_coords(&self, z: &[i64]) -> GroupElement {
        let d = z.len();
        let mut v: Vec<i128> = z.iter().map(|&x| x as i128).collect();
        for i in (0..d).rev() {
            let k = v[i].div_euclid(self.radices[i]);
            if k != 0 {
                for r in 0..=i {
                    v[r] -= k * self.hnf[r][i];
                }
            }
        }
        let mut idx = 0usize;
        let mut stride = 1usize;
        for i in 0..d {
            idx += v[i] as usize * stride;
            stride *= self.radices[i] as usize;
        }
        GroupElement(idx)
    }

    /// Label of a fine-lattice point (membership verified to 1e-9).
    pub fn coset_label(&self, v: &DVector<f64>) -> Result<GroupElement> {
        let z = self.fine.integer_coords(v, 1e-9)?;
        Ok(self.label_of_coords(&z))
    }

    /// Group addition of cosets.
    pub fn add(&self, a: GroupElement, b: GroupElement) -> GroupElement {
        let za = &self.rep_coords[a.0];
        let zb = &self.rep_coords[b.0];
        let sum: Vec<i64> = za.iter().zip(zb).map(|(x, y)| x + y).collect();
        self.label_of_coords(&sum)
    }
}

/// Column-style Hermite normal form: unimodular column operations bring the
/// integer matrix to upper-triangular H with positive diagonal and
/// 0 <= H[i][c] < H[i][i] for c > i; columns still generate the same lattice.
fn column_hnf(mut m: Vec<Vec<i128>>) -> Vec<Vec<i128>> {
    let d = m.len();
    let col_get = |m: &Vec<Vec<i128>>, c: usize| -> Vec<i128> { (0..d).map(|r| m[r][c]).collect() };
    let col_axpy = |m: &mut Vec<Vec<i128>>, dst: usize, src: usize, k: i128| {
        for r in 0..d {
            m[r][dst] -= k * m[r][src];
        }
    };
    let col_swap = |m: &mut Vec<Vec<i128>>, a: usize, b: usize| {
        for r in 0..d {
            m[r].swap(a, b);
        }
    };
    for i in (0..d).rev() {
        // clear row i on columns 0..i, leaving the pivot at column i
        loop {
            // smallest nonzero |entry| in row i among columns 0..=i
            let mut pivot: Option<usize> = None;
            for c in 0..=i {
                if m[i][c] != 0
                    && pivot.map_or(true, |p| m[i][c].abs() < m[i][p].abs())
                {
                    pivot = Some(c);
                }
            }
            let p = pivot.expect("nonsingular matrix has a pivot in every row");
            if p != i {
                col_swap(&mut m, p, i);
            }
            let mut done = true;
            for c in 0..i {
                if m[i][c] != 0 {
                    let k = m[i][c].div_euclid(m[i][i]);
                    col_axpy(&mut m, c, i, k);
                    if m[i][c] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if m[i][i] < 0 {
            for r in 0..d {
                m[r][i] = -m[r][i];
            }
        }
        // reduce the entries to the right of the pivot into [0, pivot)
        let pivot_col = col_get(&m, i);
        for c in i + 1..d {
            let k = m[i][c].div_euclid(pivot_col[i]);
            if k != 0 {
                col_axpy(&mut m, c, i, k);
            }
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::construction_a::construction_a;
    use crate::lattice::zq::LinearCodeSpec;
    use approx::assert_abs_diff_eq;
    use nalgebra::DMatrix;

    fn z_over_nz(n: f64) -> NestedPair {
        NestedPair::new(
            LatticeBasis::integer(1),
            LatticeBasis::scaled_integer(1, n).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn binary_pair_labels() {
        let pair = z_over_nz(2.0);
        assert_eq!(pair.quotient_size(), 2);
        let odd = pair
            .coset_label(&DVector::from_row_slice(&[3.0]))
            .unwrap();
        assert_eq!(odd, GroupElement(1));
        let even = pair
            .coset_label(&DVector::from_row_slice(&[-2.0]))
            .unwrap();
        assert_eq!(even, pair.identity());
        assert!(pair
            .coset_label(&DVector::from_row_slice(&[0.5]))
            .is_err());
    }

    #[test]
    fn z4_labels_and_reps() {
        let pair = z_over_nz(4.0);
        assert_eq!(pair.quotient_size(), 4);
        let g = pair.coset_label(&DVector::from_row_slice(&[6.0])).unwrap();
        assert_eq!(g, GroupElement(2));
        // canonical reps sit in the coarse Voronoi region (-2, 2]
        for g in pair.elements() {
            let r = pair.rep(g);
            assert!(r[0].abs() <= 2.0 + 1e-9);
            assert_eq!(pair.coset_label(r).unwrap(), g);
        }
    }

    #[test]
    fn group_law_homomorphism_z_16() {
        let pair = z_over_nz(4.0);
        for a in 0..4i64 {
            for b in 0..4i64 {
                let ga = pair
                    .coset_label(&DVector::from_row_slice(&[a as f64]))
                    .unwrap();
                let gb = pair
                    .coset_label(&DVector::from_row_slice(&[b as f64]))
                    .unwrap();
                let sum = pair.add(ga, gb);
                let direct = pair
                    .coset_label(&DVector::from_row_slice(&[(a + b) as f64]))
                    .unwrap();
                assert_eq!(sum, direct, "{a}+{b}");
            }
        }
    }

    #[test]
    fn closure_unique_and_reps_distinct() {
        // 2-d pair: fine = Z^2, coarse = rows (1,2),(0,3), index 3
        let fine = LatticeBasis::integer(2);
        let coarse =
            LatticeBasis::new(DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 3.0])).unwrap();
        let pair = NestedPair::new(fine, coarse.clone()).unwrap();
        assert_eq!(pair.quotient_size(), 3);
        // pairwise rep differences never in the coarse lattice
        for a in pair.elements() {
            for b in pair.elements() {
                if a != b {
                    let diff = pair.rep(a) - pair.rep(b);
                    assert!(coarse.integer_coords(&diff, 1e-9).is_err());
                }
            }
        }
        // reps reduce to themselves
        for g in pair.elements() {
            let m = coarse.mod_lattice(pair.rep(g)).unwrap();
            assert_abs_diff_eq!((m - pair.rep(g)).norm(), 0.0, epsilon = 1e-9);
        }
        // closure: each row of the addition table is a permutation
        for a in pair.elements() {
            let mut seen = vec![false; 3];
            for b in pair.elements() {
                let s = pair.add(a, b);
                assert!(!seen[s.0]);
                seen[s.0] = true;
            }
        }
    }

    #[test]
    fn construction_a_fine_over_integer_coarse() {
        let code = LinearCodeSpec::new(2, 1, 3, vec![vec![1, 2]]).unwrap();
        let fine = construction_a(&code).unwrap();
        let pair = NestedPair::new(fine, LatticeBasis::integer(2)).unwrap();
        assert_eq!(pair.quotient_size(), 3);
        let label = pair
            .coset_label(&DVector::from_row_slice(&[1.0 / 3.0, 2.0 / 3.0]))
            .unwrap();
        assert_ne!(label, pair.identity());
    }

    #[test]
    fn rejects_non_nested() {
        let fine = LatticeBasis::integer(2);
        let coarse =
            LatticeBasis::new(DMatrix::from_row_slice(2, 2, &[1.5, 0.0, 0.0, 1.0])).unwrap();
        assert!(matches!(
            NestedPair::new(fine, coarse),
            Err(Error::NotNested)
        ));
    }

    #[test]
    fn quotient_size_matches_det_ratio_on_random_pairs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        for _ in 0..20 {
            let d = 2;
            // coarse = fine * integer matrix with det in 1..=6
            let m = loop {
                let m = vec![
                    vec![rng.gen_range(-2i64..3), rng.gen_range(-2i64..3)],
                    vec![rng.gen_range(-2i64..3), rng.gen_range(-2i64..3)],
                ];
                let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
                if det.abs() >= 1 && det.abs() <= 6 {
                    break m;
                }
            };
            let fine = LatticeBasis::integer(d);
            let coarse_gen = DMatrix::from_fn(d, d, |i, j| m[i][j] as f64);
            let coarse = LatticeBasis::new(coarse_gen).unwrap();
            let det_ratio = (coarse.determinant() / fine.determinant()).round() as usize;
            let pair = NestedPair::new(fine, coarse).unwrap();
            assert_eq!(pair.quotient_size(), det_ratio);
            let mut labels: Vec<usize> = pair.elements().map(|g| g.0).collect();
            labels.sort();
            labels.dedup();
            assert_eq!(labels.len(), det_ratio);
        }
    }
}
