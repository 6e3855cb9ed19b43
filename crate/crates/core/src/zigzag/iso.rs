use std::collections::BTreeMap;

use serde::Serialize;

use super::{compressed_shape, ZigZag, ZigZagError, ISO_SIZE_BOUND};
use crate::intertwine::{LinearProblem, Outcome, Term};
use crate::linalg::QMatrix;

/// Which maps an isomorphism may use on the boundary spaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum IsoMode {
    /// Arbitrary invertible maps on `E-` and `E0`.
    #[default]
    Free,
    /// The boundary is fixed pointwise.
    Strict,
}

/// Invertible maps from the spaces of one zig-zag to those of another,
/// with `a * alpha = alpha' * e_minus`, `b * beta = beta' * a` and
/// `e_zero * gamma = gamma' * b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Isomorphism {
    pub e_minus: QMatrix,
    pub a: QMatrix,
    pub b: QMatrix,
    pub e_zero: QMatrix,
}

impl Isomorphism {
    pub fn identity(z: &ZigZag) -> Self {
        Isomorphism {
            e_minus: QMatrix::identity(z.e_minus()),
            a: QMatrix::identity(z.a_dim()),
            b: QMatrix::identity(z.b_dim()),
            e_zero: QMatrix::identity(z.e_zero()),
        }
    }

    /// Exact check that `self` is an isomorphism `from -> to`.
    pub fn verify(&self, from: &ZigZag, to: &ZigZag) -> bool {
        let shapes_ok = self.e_minus.shape() == (to.e_minus(), from.e_minus())
            && self.a.shape() == (to.a_dim(), from.a_dim())
            && self.b.shape() == (to.b_dim(), from.b_dim())
            && self.e_zero.shape() == (to.e_zero(), from.e_zero());
        if !shapes_ok {
            return false;
        }
        let invertible = [&self.e_minus, &self.a, &self.b, &self.e_zero]
            .iter()
            .all(|m| !m.determinant().is_zero());
        invertible
            && &self.a * from.alpha() == to.alpha() * &self.e_minus
            && &self.b * from.beta() == to.beta() * &self.a
            && &self.e_zero * from.gamma() == to.gamma() * &self.b
    }

    pub fn is_boundary_identity(&self) -> bool {
        self.e_minus.is_identity() && self.e_zero.is_identity()
    }
}

/// Why [`is_isomorphic`] decided the way it did.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum IsoEvidence {
    /// An explicit, verified isomorphism.
    Witness(Isomorphism),
    LabelMismatch,
    /// Dimensions or ranks differ.
    ShapeMismatch,
    /// The determinant of the named space's component vanishes identically
    /// on the space of intertwiners.
    VanishingDeterminant { space: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsoVerdict {
    pub isomorphic: bool,
    pub evidence: IsoEvidence,
}

impl IsoVerdict {
    pub fn witness(&self) -> Option<&Isomorphism> {
        match &self.evidence {
            IsoEvidence::Witness(w) => Some(w),
            _ => None,
        }
    }
}

fn check_size(z: &ZigZag) -> Result<(), ZigZagError> {
    match z.dims().into_iter().find(|&d| d > ISO_SIZE_BOUND) {
        Some(dim) => Err(ZigZagError::SizeBound {
            dim,
            bound: ISO_SIZE_BOUND,
        }),
        None => Ok(()),
    }
}

/// [`is_isomorphic_with`] in [`IsoMode::Free`].
pub fn is_isomorphic(z1: &ZigZag, z2: &ZigZag) -> Result<IsoVerdict, ZigZagError> {
    is_isomorphic_with(z1, z2, IsoMode::Free)
}

pub fn is_isomorphic_with(z1: &ZigZag, z2: &ZigZag, mode: IsoMode) -> Result<IsoVerdict, ZigZagError> {
    check_size(z1)?;
    check_size(z2)?;
    let rejected = |evidence| Ok(IsoVerdict { isomorphic: false, evidence });
    if z1.open_label() != z2.open_label() {
        return rejected(IsoEvidence::LabelMismatch);
    }
    if compressed_shape(z1) != compressed_shape(z2) {
        return rejected(IsoEvidence::ShapeMismatch);
    }

    let mut p = LinearProblem::new();
    let em = p.add_block(z1.e_minus(), z1.e_minus(), true);
    let a = p.add_block(z1.a_dim(), z1.a_dim(), true);
    let b = p.add_block(z1.b_dim(), z1.b_dim(), true);
    let ez = p.add_block(z1.e_zero(), z1.e_zero(), true);
    let scalar = (mode == IsoMode::Strict).then(|| {
        let s = p.add_block(1, 1, true);
        p.tie_to_scalar(em, s);
        p.tie_to_scalar(ez, s);
        s
    });
    p.constrain(&[
        Term::new(None, a, Some(z1.alpha())),
        Term::new(Some(z2.alpha()), em, None).negated(),
    ]);
    p.constrain(&[
        Term::new(None, b, Some(z1.beta())),
        Term::new(Some(z2.beta()), a, None).negated(),
    ]);
    p.constrain(&[
        Term::new(None, ez, Some(z1.gamma())),
        Term::new(Some(z2.gamma()), b, None).negated(),
    ]);

    match p.search().outcome {
        Outcome::Found(mats) => {
            let mut it = mats.into_iter();
            let mut w = Isomorphism {
                e_minus: it.next().expect("declared block"),
                a: it.next().expect("declared block"),
                b: it.next().expect("declared block"),
                e_zero: it.next().expect("declared block"),
            };
            if scalar.is_some() {
                let s = it.next().expect("declared block").get(0, 0).clone();
                let inv = s.inv().expect("scalar block is invertible");
                w = Isomorphism {
                    e_minus: w.e_minus.scale(&inv),
                    a: w.a.scale(&inv),
                    b: w.b.scale(&inv),
                    e_zero: w.e_zero.scale(&inv),
                };
            }
            assert!(w.verify(z1, z2), "intertwiner search returned a non-isomorphism");
            Ok(IsoVerdict {
                isomorphic: true,
                evidence: IsoEvidence::Witness(w),
            })
        }
        Outcome::Impossible { vanishing_block } => {
            let names = [(em, "E-"), (a, "A"), (b, "B"), (ez, "E0")];
            let space = names
                .iter()
                .find(|(id, _)| *id == vanishing_block)
                .map_or("scalar", |(_, n)| n)
                .to_string();
            rejected(IsoEvidence::VanishingDeterminant { space })
        }
    }
}

/// Multiplicities of the interval summands `[i, j]` (positions `0..=3` for
/// `E-, A, B, E0`) in the decomposition of the underlying linear quiver
/// representation, computed from ranks of composites.
///
/// For boundary maps that may move freely this is a complete isomorphism
/// invariant, independent of the intertwiner search.
pub fn interval_multiplicities(z: &ZigZag) -> BTreeMap<(usize, usize), usize> {
    let dims = z.dims();
    let maps = [z.alpha(), z.beta(), z.gamma()];
    // r[i][j]: rank of the composite from position i to position j
    let mut r = [[0i64; 4]; 4];
    for i in 0..4 {
        r[i][i] = dims[i] as i64;
        let mut composite = QMatrix::identity(dims[i]);
        for j in i + 1..4 {
            composite = maps[j - 1] * &composite;
            r[i][j] = composite.rank() as i64;
        }
    }
    let rank = |i: i64, j: i64| -> i64 {
        if i < 0 || j > 3 {
            0
        } else {
            r[i as usize][j as usize]
        }
    };
    let mut out = BTreeMap::new();
    for i in 0..4i64 {
        for j in i..4i64 {
            let m = rank(i, j) - rank(i - 1, j) - rank(i, j + 1) + rank(i - 1, j + 1);
            debug_assert!(m >= 0);
            if m > 0 {
                out.insert((i as usize, j as usize), m as usize);
            }
        }
    }
    out
}
