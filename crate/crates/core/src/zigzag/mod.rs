//! Zig-zags at an isolated point.
//!
//! A zig-zag is an open-part label `L` together with the exact sequence
//!
//! ```text
//! E- --alpha--> A --beta--> B --gamma--> E0
//! ```
//!
//! where `E-` and `E0` are the degree -1 and degree 0 boundary cohomology of
//! the open part (dimensions supplied by the caller) and `A`, `B` are the point
//! terms. Exactness is required at `A` and `B` only.

mod iso;
mod multi;
pub mod random;
mod shape;

pub use iso::{interval_multiplicities, is_isomorphic, is_isomorphic_with, IsoEvidence, IsoMode, IsoVerdict, Isomorphism};
pub use multi::{MultiZigZag, PointTerm};
pub use shape::{compressed_shape, CompressedShape};

use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::linalg::{image_basis, kernel_basis, QMatrix};

/// Label of the zero object on the open stratum.
pub const ZERO_LABEL: &str = "0";

/// Largest space dimension accepted by the isomorphism search.
pub const ISO_SIZE_BOUND: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ZigZagError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("the zero open part has no boundary, got boundary dims ({e_minus}, {e_zero})")]
    ZeroOpenPartBoundary { e_minus: usize, e_zero: usize },
    #[error("skyscraper rank must be at least 1")]
    ZeroRank,
    #[error("dimension {dim} exceeds the isomorphism search bound {bound}")]
    SizeBound { dim: usize, bound: usize },
    #[error("duplicate node label {0:?}")]
    DuplicateNode(String),
    #[error("invalid zig-zag: {0}")]
    Invalid(ValidationReport),
}

/// The middle positions where exactness is required.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Position {
    A,
    B,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Position::A => write!(f, "A"),
            Position::B => write!(f, "B"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExactnessFailure {
    pub position: Position,
    pub image_dim: usize,
    pub kernel_dim: usize,
}

impl fmt::Display for ExactnessFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (incoming, outgoing) = match self.position {
            Position::A => ("alpha", "beta"),
            Position::B => ("beta", "gamma"),
        };
        write!(
            f,
            "not exact at {}: im {incoming} has dim {}, ker {outgoing} has dim {}",
            self.position, self.image_dim, self.kernel_dim
        )
    }
}

/// Result of [`ZigZag::validate`]; empty when both exactness conditions hold.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub failures: Vec<ExactnessFailure>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.failures.is_empty() {
            return write!(f, "exact at A and B");
        }
        let parts: Vec<String> = self.failures.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join("; "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ZigZag {
    open_label: String,
    e_minus: usize,
    e_zero: usize,
    alpha: QMatrix,
    beta: QMatrix,
    gamma: QMatrix,
}

impl ZigZag {
    /// Builds a zig-zag from its maps; `alpha` is `A x E-`, `beta` is `B x A`
    /// and `gamma` is `E0 x B`. Shapes are checked, exactness is not (see
    /// [`validate`](Self::validate)).
    pub fn new(
        open_label: impl Into<String>,
        e_minus: usize,
        e_zero: usize,
        alpha: QMatrix,
        beta: QMatrix,
        gamma: QMatrix,
    ) -> Result<Self, ZigZagError> {
        let open_label = open_label.into();
        if alpha.cols() != e_minus {
            return Err(ZigZagError::Shape(format!(
                "alpha has {} columns but E- has dimension {e_minus}",
                alpha.cols()
            )));
        }
        if beta.cols() != alpha.rows() {
            return Err(ZigZagError::Shape(format!(
                "beta has {} columns but A has dimension {}",
                beta.cols(),
                alpha.rows()
            )));
        }
        if gamma.cols() != beta.rows() {
            return Err(ZigZagError::Shape(format!(
                "gamma has {} columns but B has dimension {}",
                gamma.cols(),
                beta.rows()
            )));
        }
        if gamma.rows() != e_zero {
            return Err(ZigZagError::Shape(format!(
                "gamma has {} rows but E0 has dimension {e_zero}",
                gamma.rows()
            )));
        }
        if open_label == ZERO_LABEL && (e_minus != 0 || e_zero != 0) {
            return Err(ZigZagError::ZeroOpenPartBoundary { e_minus, e_zero });
        }
        Ok(ZigZag {
            open_label,
            e_minus,
            e_zero,
            alpha,
            beta,
            gamma,
        })
    }

    /// Like [`new`](Self::new) but also rejects zig-zags that are not exact.
    pub fn new_valid(
        open_label: impl Into<String>,
        e_minus: usize,
        e_zero: usize,
        alpha: QMatrix,
        beta: QMatrix,
        gamma: QMatrix,
    ) -> Result<Self, ZigZagError> {
        let z = ZigZag::new(open_label, e_minus, e_zero, alpha, beta, gamma)?;
        let report = z.validate();
        if !report.is_valid() {
            return Err(ZigZagError::Invalid(report));
        }
        Ok(z)
    }

    /// The zero object.
    pub fn zero() -> Self {
        std_ic(ZERO_LABEL, 0, 0)
    }

    pub fn open_label(&self) -> &str {
        &self.open_label
    }

    pub fn has_zero_open_part(&self) -> bool {
        self.open_label == ZERO_LABEL
    }

    pub fn e_minus(&self) -> usize {
        self.e_minus
    }

    pub fn e_zero(&self) -> usize {
        self.e_zero
    }

    pub fn a_dim(&self) -> usize {
        self.alpha.rows()
    }

    pub fn b_dim(&self) -> usize {
        self.beta.rows()
    }

    pub fn alpha(&self) -> &QMatrix {
        &self.alpha
    }

    pub fn beta(&self) -> &QMatrix {
        &self.beta
    }

    pub fn gamma(&self) -> &QMatrix {
        &self.gamma
    }

    /// Dimensions `(E-, A, B, E0)` in sequence order.
    pub fn dims(&self) -> [usize; 4] {
        [self.e_minus, self.a_dim(), self.b_dim(), self.e_zero]
    }

    /// Checks `im alpha = ker beta` and `im beta = ker gamma`.
    pub fn validate(&self) -> ValidationReport {
        let mut failures = Vec::new();
        for (position, incoming, outgoing) in [
            (Position::A, &self.alpha, &self.beta),
            (Position::B, &self.beta, &self.gamma),
        ] {
            let image = image_basis(incoming);
            let kernel = kernel_basis(outgoing);
            if !image.equals(&kernel).expect("shapes checked at construction") {
                failures.push(ExactnessFailure {
                    position,
                    image_dim: image.dim(),
                    kernel_dim: kernel.dim(),
                });
            }
        }
        ValidationReport { failures }
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_valid()
    }

    /// Point-term-free zig-zags: the shape of an intersection complex.
    pub fn is_ic_type(&self) -> bool {
        self.a_dim() == 0 && self.b_dim() == 0
    }
}

impl Serialize for ZigZag {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("ZigZag", 9)?;
        s.serialize_field("open", &self.open_label)?;
        s.serialize_field("eminus", &self.e_minus)?;
        s.serialize_field("ezero", &self.e_zero)?;
        s.serialize_field("A", &self.a_dim())?;
        s.serialize_field("B", &self.b_dim())?;
        s.serialize_field("alpha", &self.alpha)?;
        s.serialize_field("beta", &self.beta)?;
        s.serialize_field("gamma", &self.gamma)?;
        s.end()
    }
}

/// The six-tuple notation `(L, A, B, alpha, beta, gamma)` with spaces written
/// as `0`, `Q` or `Q^n` and maps as `0`, `id` or a matrix literal.
impl fmt::Display for ZigZag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {}, {}, {}, {})",
            self.open_label,
            space_symbol(self.a_dim()),
            space_symbol(self.b_dim()),
            map_symbol(&self.alpha),
            map_symbol(&self.beta),
            map_symbol(&self.gamma)
        )
    }
}

pub(crate) fn space_symbol(dim: usize) -> String {
    match dim {
        0 => "0".to_string(),
        1 => "Q".to_string(),
        n => format!("Q^{n}"),
    }
}

pub(crate) fn map_symbol(m: &QMatrix) -> String {
    if m.is_zero() {
        "0".to_string()
    } else if m.is_identity() {
        "id".to_string()
    } else {
        m.to_string()
    }
}

/// `(L, 0, 0, 0, 0, 0)` over the given boundary.
pub fn std_ic(open_label: &str, e_minus: usize, e_zero: usize) -> ZigZag {
    ZigZag::new(
        open_label,
        e_minus,
        e_zero,
        QMatrix::zeros(0, e_minus),
        QMatrix::zeros(0, 0),
        QMatrix::zeros(e_zero, 0),
    )
    .expect("shapes are consistent by construction")
}

/// `(0, Q^r, Q^r, 0, id, 0)`.
pub fn std_skyscraper(r: usize) -> Result<ZigZag, ZigZagError> {
    if r == 0 {
        return Err(ZigZagError::ZeroRank);
    }
    Ok(ZigZag::new(
        ZERO_LABEL,
        0,
        0,
        QMatrix::zeros(r, 0),
        QMatrix::identity(r),
        QMatrix::zeros(0, r),
    )
    .expect("shapes are consistent by construction"))
}

/// `(L, Q, Q, 0, id, 0)` over the given boundary.
pub fn std_corrected(open_label: &str, e_minus: usize, e_zero: usize) -> ZigZag {
    ZigZag::new(
        open_label,
        e_minus,
        e_zero,
        QMatrix::zeros(1, e_minus),
        QMatrix::identity(1),
        QMatrix::zeros(e_zero, 1),
    )
    .expect("shapes are consistent by construction")
}

/// Label of the direct sum of two open parts; the zero label is neutral.
pub fn sum_label(l1: &str, l2: &str) -> String {
    match (l1 == ZERO_LABEL, l2 == ZERO_LABEL) {
        (true, _) => l2.to_string(),
        (_, true) => l1.to_string(),
        _ => format!("{l1}+{l2}"),
    }
}

/// Label of the dual open part.
///
/// Labels are opaque, so duality is recorded syntactically: a trailing `^*`
/// is toggled. The zero label and shifted constant sheaves (`Q_...[n]`) are
/// fixed. Sums dualize summand by summand.
pub fn dual_label(label: &str) -> String {
    label
        .split('+')
        .map(|part| {
            if part == ZERO_LABEL || is_constant_sheaf_label(part) {
                part.to_string()
            } else if let Some(stripped) = part.strip_suffix("^*") {
                stripped.to_string()
            } else {
                format!("{part}^*")
            }
        })
        .collect::<Vec<_>>()
        .join("+")
}

fn is_constant_sheaf_label(part: &str) -> bool {
    part.starts_with("Q_") && part.ends_with(']') && part.contains('[')
}

/// Block-diagonal sum; boundary dimensions add.
pub fn direct_sum(z1: &ZigZag, z2: &ZigZag) -> ZigZag {
    ZigZag::new(
        sum_label(&z1.open_label, &z2.open_label),
        z1.e_minus + z2.e_minus,
        z1.e_zero + z2.e_zero,
        z1.alpha.block_diag(&z2.alpha),
        z1.beta.block_diag(&z2.beta),
        z1.gamma.block_diag(&z2.gamma),
    )
    .expect("block sums of consistent shapes are consistent")
}

/// `(L*, B*, A*, gamma^T, beta^T, alpha^T)` with the boundary roles exchanged.
pub fn dualize(z: &ZigZag) -> ZigZag {
    ZigZag::new(
        dual_label(&z.open_label),
        z.e_zero,
        z.e_minus,
        z.gamma.transpose(),
        z.beta.transpose(),
        z.alpha.transpose(),
    )
    .expect("transposes of consistent shapes are consistent")
}
