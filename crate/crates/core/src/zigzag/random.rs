//! Valid zig-zags from interval multiplicities, and random ones.
//!
//! An exact zig-zag decomposes into the intervals `[E-]`, `[E- -> A]`,
//! `[A -> B]`, `[B -> E0]` and `[E0]`; any other interval breaks exactness at
//! `A` or `B`. Random zig-zags are such sums conjugated by random invertible
//! matrices.

use std::collections::BTreeMap;

use rand::Rng;
use serde::Serialize;

use super::{ZigZag, ZERO_LABEL};
use crate::linalg::{QMatrix, Rational};

/// Multiplicities of the five exact intervals.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize)]
pub struct IntervalCounts {
    pub e_minus_only: usize,
    pub e_minus_to_a: usize,
    pub a_to_b: usize,
    pub b_to_e_zero: usize,
    pub e_zero_only: usize,
}

impl IntervalCounts {
    /// `(E-, A, B, E0)`.
    pub fn dims(&self) -> [usize; 4] {
        [
            self.e_minus_only + self.e_minus_to_a,
            self.e_minus_to_a + self.a_to_b,
            self.a_to_b + self.b_to_e_zero,
            self.b_to_e_zero + self.e_zero_only,
        ]
    }

    /// Reads back multiplicities; `None` if an interval that breaks
    /// exactness occurs.
    pub fn from_intervals(m: &BTreeMap<(usize, usize), usize>) -> Option<Self> {
        let mut c = IntervalCounts::default();
        for (&k, &v) in m {
            let slot = match k {
                (0, 0) => &mut c.e_minus_only,
                (0, 1) => &mut c.e_minus_to_a,
                (1, 2) => &mut c.a_to_b,
                (2, 3) => &mut c.b_to_e_zero,
                (3, 3) => &mut c.e_zero_only,
                _ => return None,
            };
            *slot = v;
        }
        Some(c)
    }

    /// The multiplicities as `(start, end)` position pairs, matching
    /// [`interval_multiplicities`](super::interval_multiplicities).
    pub fn as_intervals(&self) -> BTreeMap<(usize, usize), usize> {
        [
            ((0, 0), self.e_minus_only),
            ((0, 1), self.e_minus_to_a),
            ((1, 2), self.a_to_b),
            ((2, 3), self.b_to_e_zero),
            ((3, 3), self.e_zero_only),
        ]
        .into_iter()
        .filter(|(_, m)| *m > 0)
        .collect()
    }
}

/// The normal form with the given multiplicities. The label must be
/// [`ZERO_LABEL`] only if the boundary is empty.
pub fn from_intervals(open_label: &str, counts: IntervalCounts) -> ZigZag {
    let [em, a, b, ez] = counts.dims();
    let one = Rational::one;
    let mut alpha = QMatrix::zeros(a, em);
    for i in 0..counts.e_minus_to_a {
        alpha.set(i, counts.e_minus_only + i, one());
    }
    let mut beta = QMatrix::zeros(b, a);
    for i in 0..counts.a_to_b {
        beta.set(i, counts.e_minus_to_a + i, one());
    }
    let mut gamma = QMatrix::zeros(ez, b);
    for i in 0..counts.b_to_e_zero {
        gamma.set(i, counts.a_to_b + i, one());
    }
    ZigZag::new(open_label, em, ez, alpha, beta, gamma).expect("normal form shapes are consistent")
}

/// Invertible `n x n` matrix with small integer entries.
pub fn random_invertible<R: Rng + ?Sized>(rng: &mut R, n: usize) -> QMatrix {
    loop {
        let m = QMatrix::from_fn(n, n, |_, _| Rational::from_integer(rng.random_range(-2..=2)));
        if !m.determinant().is_zero() {
            return m;
        }
    }
}

/// Transports `z` along invertible maps on its four spaces.
pub fn conjugate(z: &ZigZag, e_minus: &QMatrix, a: &QMatrix, b: &QMatrix, e_zero: &QMatrix) -> ZigZag {
    let inv = |m: &QMatrix| m.inverse().expect("conjugating maps are invertible");
    ZigZag::new(
        z.open_label(),
        z.e_minus(),
        z.e_zero(),
        &(a * z.alpha()) * &inv(e_minus),
        &(b * z.beta()) * &inv(a),
        &(e_zero * z.gamma()) * &inv(b),
    )
    .expect("conjugation preserves shapes")
}

/// Random interval multiplicities with every space of dimension at most
/// `max_dim`.
pub fn random_counts<R: Rng + ?Sized>(rng: &mut R, max_dim: usize) -> IntervalCounts {
    loop {
        let mut draw = || rng.random_range(0..=max_dim.min(2));
        let c = IntervalCounts {
            e_minus_only: draw(),
            e_minus_to_a: draw(),
            a_to_b: draw(),
            b_to_e_zero: draw(),
            e_zero_only: draw(),
        };
        if c.dims().iter().all(|&d| d <= max_dim) {
            return c;
        }
    }
}

/// A random valid zig-zag with all dimensions at most `max_dim`, in general
/// position (not in normal form).
pub fn random_valid<R: Rng + ?Sized>(rng: &mut R, max_dim: usize) -> ZigZag {
    let counts = random_counts(rng, max_dim);
    let [em, a, b, ez] = counts.dims();
    let label = if em == 0 && ez == 0 && rng.random_bool(0.5) {
        ZERO_LABEL
    } else {
        "Q_U[3]"
    };
    let normal = from_intervals(label, counts);
    let (pm, pa, pb, pz) = (
        random_invertible(rng, em),
        random_invertible(rng, a),
        random_invertible(rng, b),
        random_invertible(rng, ez),
    );
    conjugate(&normal, &pm, &pa, &pb, &pz)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zigzag::{interval_multiplicities, is_isomorphic};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn normal_forms_are_valid_with_expected_intervals() {
        let c = IntervalCounts {
            e_minus_only: 1,
            e_minus_to_a: 2,
            a_to_b: 1,
            b_to_e_zero: 1,
            e_zero_only: 2,
        };
        let z = from_intervals("L", c);
        assert!(z.is_valid());
        assert_eq!(z.dims(), [3, 3, 2, 3]);
        assert_eq!(interval_multiplicities(&z), c.as_intervals());
    }

    #[test]
    fn random_zigzags_are_valid_and_match_their_normal_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let z = random_valid(&mut rng, 4);
            assert!(z.is_valid());
            assert!(z.dims().iter().all(|&d| d <= 4));
            let counts = IntervalCounts::from_intervals(&interval_multiplicities(&z)).unwrap();
            let normal = from_intervals(z.open_label(), counts);
            assert!(is_isomorphic(&z, &normal).unwrap().isomorphic);
        }
    }
}
