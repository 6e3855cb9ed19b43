//! Extensions of a point-supported quotient by a sub-object, with explicit
//! extension classes.
//!
//! The total zig-zag of `0 -> S -> E -> Q -> 0` has `A = A_S + A_Q`,
//! `B = B_S + B_Q`, `beta = [[beta_S, u], [0, beta_Q]]` and `alpha`, `gamma`
//! extended by zero on the quotient blocks. When `B_S = 0` (the ordinary
//! double point collapse) the block `u` is empty and the class is carried
//! by an explicit row of scalars, one per quotient coordinate.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::exec::Execution;
use crate::intertwine::{BlockId, LinearProblem, Outcome, Term};
use crate::linalg::{block_assemble, image_basis, QMatrix, Rational};
use crate::zigzag::{
    dualize, is_isomorphic, IsoVerdict, Isomorphism, ValidationReport, ZigZag, ISO_SIZE_BOUND,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtensionError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("regime mismatch: {0}")]
    RegimeMismatch(String),
    #[error("quotient must be point-supported (open label \"0\"), got {0:?}")]
    NotPointSupported(String),
    #[error("invalid {part}: {report}")]
    InvalidPart { part: &'static str, report: ValidationReport },
    #[error("total zig-zag is not exact: {0}")]
    InvalidTotal(ValidationReport),
    #[error("dimension {dim} exceeds the isomorphism search bound {bound}")]
    SizeBound { dim: usize, bound: usize },
    #[error("expected {expected} quotient labels, got {got}")]
    LabelCount { expected: usize, got: usize },
}

/// How the class is supplied to [`make_extension`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassInput {
    /// Collapsed regime: the same scalar on every quotient coordinate.
    /// In the block regime only `0` is accepted, meaning `u = 0`.
    Scalar(Rational),
    /// Collapsed regime: one scalar per quotient coordinate.
    Vector(Vec<Rational>),
    /// Block regime: `u: A_Q -> B_S`.
    Block(QMatrix),
}

/// The gluing datum.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub enum Gluing {
    Block(QMatrix),
    /// `1 x A_Q` row of class scalars.
    Collapsed(QMatrix),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtClass {
    pub value: Rational,
    pub normalized: Rational,
}

impl ExtClass {
    pub fn of(value: Rational) -> Self {
        let normalized = if value.is_zero() { Rational::zero() } else { Rational::one() };
        ExtClass { value, normalized }
    }

    pub fn is_split(&self) -> bool {
        self.normalized.is_zero()
    }
}

impl fmt::Display for ExtClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (normalized {})", self.value, self.normalized)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtensionPresentation {
    sub: ZigZag,
    quot: ZigZag,
    gluing: Gluing,
    /// Node label of each quotient coordinate; automorphisms may only mix
    /// coordinates with equal labels. `None` leaves them unconstrained.
    quot_labels: Option<Vec<String>>,
}

pub fn make_extension(sub: ZigZag, quot: ZigZag, class: ClassInput) -> Result<ExtensionPresentation, ExtensionError> {
    if !quot.has_zero_open_part() {
        return Err(ExtensionError::NotPointSupported(quot.open_label().to_string()));
    }
    for (part, z) in [("sub", &sub), ("quotient", &quot)] {
        let report = z.validate();
        if !report.is_valid() {
            return Err(ExtensionError::InvalidPart { part, report });
        }
    }
    let (b_s, a_q) = (sub.b_dim(), quot.a_dim());
    let collapsed = b_s == 0;
    let gluing = match (class, collapsed) {
        (ClassInput::Scalar(c), true) => Gluing::Collapsed(QMatrix::from_fn(1, a_q, |_, _| c.clone())),
        (ClassInput::Scalar(c), false) => {
            if !c.is_zero() {
                return Err(ExtensionError::RegimeMismatch(format!(
                    "sub has B of dimension {b_s}, so the class is a block u; a nonzero scalar was given"
                )));
            }
            Gluing::Block(QMatrix::zeros(b_s, a_q))
        }
        (ClassInput::Vector(v), true) => {
            if v.len() != a_q {
                return Err(ExtensionError::Shape(format!(
                    "class vector has {} entries, quotient has dimension {a_q}",
                    v.len()
                )));
            }
            Gluing::Collapsed(QMatrix::row_vector(&v))
        }
        (ClassInput::Vector(_), false) => {
            return Err(ExtensionError::RegimeMismatch(format!(
                "sub has B of dimension {b_s}, so the class is a block u; a class vector was given"
            )))
        }
        (ClassInput::Block(u), false) => {
            if u.shape() != (b_s, a_q) {
                return Err(ExtensionError::Shape(format!(
                    "u must be {b_s}x{a_q} (A_Q -> B_S), got {}x{}",
                    u.rows(),
                    u.cols()
                )));
            }
            Gluing::Block(u)
        }
        (ClassInput::Block(_), true) => {
            return Err(ExtensionError::RegimeMismatch(
                "sub has B = 0, so the class is a scalar; a block u was given".to_string(),
            ))
        }
    };
    let e = ExtensionPresentation {
        sub,
        quot,
        gluing,
        quot_labels: None,
    };
    let report = e.total().validate();
    if !report.is_valid() {
        return Err(ExtensionError::InvalidTotal(report));
    }
    Ok(e)
}

impl ExtensionPresentation {
    pub fn sub(&self) -> &ZigZag {
        &self.sub
    }

    pub fn quot(&self) -> &ZigZag {
        &self.quot
    }

    pub fn gluing(&self) -> &Gluing {
        &self.gluing
    }

    pub fn is_collapsed(&self) -> bool {
        matches!(self.gluing, Gluing::Collapsed(_))
    }

    pub fn quot_labels(&self) -> Option<&[String]> {
        self.quot_labels.as_deref()
    }

    /// Attaches node labels to the quotient coordinates.
    pub fn with_quot_labels(mut self, labels: Vec<String>) -> Result<Self, ExtensionError> {
        if labels.len() != self.quot.a_dim() {
            return Err(ExtensionError::LabelCount {
                expected: self.quot.a_dim(),
                got: labels.len(),
            });
        }
        self.quot_labels = Some(labels);
        Ok(self)
    }

    /// The `u` block (empty in the collapsed regime).
    pub fn u_block(&self) -> QMatrix {
        match &self.gluing {
            Gluing::Block(u) => u.clone(),
            Gluing::Collapsed(_) => QMatrix::zeros(0, self.quot.a_dim()),
        }
    }

    /// The class row in the collapsed regime.
    pub fn class_row(&self) -> Option<&QMatrix> {
        match &self.gluing {
            Gluing::Collapsed(c) => Some(c),
            Gluing::Block(_) => None,
        }
    }

    /// `[[beta_S, u], [0, beta_Q]]`.
    pub fn beta_block(&self) -> QMatrix {
        let (s, q) = (&self.sub, &self.quot);
        let u = self.u_block();
        block_assemble(
            [[Some(s.beta()), Some(&u)], [None, Some(q.beta())]],
            [s.b_dim(), q.b_dim()],
            [s.a_dim(), q.a_dim()],
        )
        .expect("blocks fit the partition by construction")
    }

    pub fn total(&self) -> ZigZag {
        let (s, q) = (&self.sub, &self.quot);
        let alpha = s
            .alpha()
            .vstack(&QMatrix::zeros(q.a_dim(), s.e_minus()))
            .expect("column counts agree");
        let gamma = s
            .gamma()
            .hstack(&QMatrix::zeros(s.e_zero(), q.b_dim()))
            .expect("row counts agree");
        ZigZag::new(s.open_label(), s.e_minus(), s.e_zero(), alpha, self.beta_block(), gamma)
            .expect("block shapes are consistent")
    }

    /// Same sub, quotient and labels with another gluing datum; not checked
    /// for validity.
    pub fn with_gluing_unchecked(&self, gluing: Gluing) -> Self {
        ExtensionPresentation {
            gluing,
            ..self.clone()
        }
    }
}

impl fmt::Display for ExtensionPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.gluing {
            Gluing::Block(u) => write!(f, "ext({}, {}) u = {}", self.sub, self.quot, u),
            Gluing::Collapsed(c) => write!(f, "ext({}, {}) class {}", self.sub, self.quot, c),
        }
    }
}

pub fn total_zigzag(e: &ExtensionPresentation) -> ZigZag {
    e.total()
}

/// Per-coordinate classes: in the block regime each column of `u` reduced
/// modulo `im beta_S`, in the collapsed regime each entry of the class row.
pub fn class_vector(e: &ExtensionPresentation) -> Vec<ExtClass> {
    match &e.gluing {
        Gluing::Collapsed(c) => c.row(0).iter().cloned().map(ExtClass::of).collect(),
        Gluing::Block(u) => {
            let im = image_basis(e.sub.beta());
            u.columns()
                .iter()
                .map(|col| {
                    let reduced = im.reduce(col);
                    let value = reduced.into_iter().find(|x| !x.is_zero()).unwrap_or_else(Rational::zero);
                    ExtClass::of(value)
                })
                .collect()
        }
    }
}

/// The class of the whole presentation: the first nonzero coordinate class,
/// or zero.
pub fn extension_class(e: &ExtensionPresentation) -> ExtClass {
    class_vector(e)
        .into_iter()
        .find(|c| !c.is_split())
        .unwrap_or_else(|| ExtClass::of(Rational::zero()))
}

/// The presentation with every coordinate class replaced by its normalized
/// value, together with a verified isomorphism onto it.
pub fn normalize(e: &ExtensionPresentation) -> Result<(ExtensionPresentation, ExtIsomorphism), ExtensionError> {
    let target = match &e.gluing {
        Gluing::Collapsed(_) => {
            let row: Vec<Rational> = class_vector(e).into_iter().map(|c| c.normalized).collect();
            e.with_gluing_unchecked(Gluing::Collapsed(QMatrix::row_vector(&row)))
        }
        Gluing::Block(u) => {
            // Classes vanish modulo im beta_S; the normal form is u = 0.
            e.with_gluing_unchecked(Gluing::Block(QMatrix::zeros(u.rows(), u.cols())))
        }
    };
    let verdict = ext_isomorphic(e, &target)?;
    let witness = verdict
        .witness
        .expect("normalization always admits a scaling isomorphism in the collapsed regime");
    Ok((target, witness))
}

/// An isomorphism of presentations: block upper-triangular on the total
/// zig-zag, plus the scale `sigma` on the open part acting on the class row
/// in the collapsed regime (`sigma * c = c' * P_Q`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtIsomorphism {
    pub total: Isomorphism,
    pub quot_a: QMatrix,
    pub sigma: Option<Rational>,
}

impl ExtIsomorphism {
    pub fn verify(&self, from: &ExtensionPresentation, to: &ExtensionPresentation) -> bool {
        let (s, q) = (&from.sub, &from.quot);
        if !self.total.verify(&from.total(), &to.total()) {
            return false;
        }
        let lower_zero = |m: &QMatrix, split: usize| {
            (split..m.rows()).all(|i| (0..split).all(|j| m.get(i, j).is_zero()))
        };
        if !lower_zero(&self.total.a, s.a_dim()) || !lower_zero(&self.total.b, s.b_dim()) {
            return false;
        }
        let a_split = s.a_dim();
        let p_q = self.total.a.submatrix(a_split..a_split + q.a_dim(), a_split..a_split + q.a_dim());
        if p_q != self.quot_a || !respects_labels(&p_q, from.quot_labels(), to.quot_labels()) {
            return false;
        }
        match (&from.gluing, &to.gluing, &self.sigma) {
            (Gluing::Collapsed(c1), Gluing::Collapsed(c2), Some(sigma)) => {
                !sigma.is_zero() && c1.scale(sigma) == c2 * &p_q
            }
            (Gluing::Block(_), Gluing::Block(_), None) => true,
            _ => false,
        }
    }
}

fn respects_labels(p: &QMatrix, from: Option<&[String]>, to: Option<&[String]>) -> bool {
    match (from, to) {
        (Some(l1), Some(l2)) => {
            (0..p.rows()).all(|i| (0..p.cols()).all(|j| l2[i] == l1[j] || p.get(i, j).is_zero()))
        }
        _ => true,
    }
}

/// How an [`ext_isomorphic`] verdict is certified.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum ExtCertificate {
    Witness,
    /// Sub-objects, quotients, regimes or labels differ in shape.
    ShapeMismatch(String),
    /// The named unknown can never be invertible on the space of solutions.
    VanishingDeterminant(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtIsoVerdict {
    pub isomorphic: bool,
    pub certificate: ExtCertificate,
    pub witness: Option<ExtIsomorphism>,
}

fn size_check(e: &ExtensionPresentation) -> Result<(), ExtensionError> {
    match e.total().dims().into_iter().find(|&d| d > ISO_SIZE_BOUND) {
        Some(dim) => Err(ExtensionError::SizeBound {
            dim,
            bound: ISO_SIZE_BOUND,
        }),
        None => Ok(()),
    }
}

/// Decides whether two presentations are isomorphic as extensions.
pub fn ext_isomorphic(e1: &ExtensionPresentation, e2: &ExtensionPresentation) -> Result<ExtIsoVerdict, ExtensionError> {
    size_check(e1)?;
    size_check(e2)?;
    let mismatch = |why: &str| {
        Ok(ExtIsoVerdict {
            isomorphic: false,
            certificate: ExtCertificate::ShapeMismatch(why.to_string()),
            witness: None,
        })
    };
    let (s1, q1, s2, q2) = (&e1.sub, &e1.quot, &e2.sub, &e2.quot);
    if s1.open_label() != s2.open_label() {
        return mismatch("open labels differ");
    }
    if s1.dims() != s2.dims() || q1.dims() != q2.dims() {
        return mismatch("sub or quotient dimensions differ");
    }
    if e1.is_collapsed() != e2.is_collapsed() {
        return mismatch("gluing regimes differ");
    }
    if let (Some(l1), Some(l2)) = (e1.quot_labels(), e2.quot_labels()) {
        let (mut a, mut b) = (l1.to_vec(), l2.to_vec());
        a.sort();
        b.sort();
        if a != b {
            return mismatch("quotient labels differ");
        }
    }

    let mut p = LinearProblem::new();
    let em = p.add_block(s1.e_minus(), s1.e_minus(), true);
    let ps = p.add_block(s1.a_dim(), s1.a_dim(), true);
    let h = p.add_block(s1.a_dim(), q1.a_dim(), false);
    let pq = p.add_block(q1.a_dim(), q1.a_dim(), true);
    let qs = p.add_block(s1.b_dim(), s1.b_dim(), true);
    let k = p.add_block(s1.b_dim(), q1.b_dim(), false);
    let qq = p.add_block(q1.b_dim(), q1.b_dim(), true);
    let ez = p.add_block(s1.e_zero(), s1.e_zero(), true);
    let names: [(BlockId, &str); 8] = [
        (em, "E-"),
        (ps, "A_sub"),
        (h, "A_mixed"),
        (pq, "A_quot"),
        (qs, "B_sub"),
        (k, "B_mixed"),
        (qq, "B_quot"),
        (ez, "E0"),
    ];

    let (u1, u2) = (e1.u_block(), e2.u_block());
    p.constrain(&[
        Term::new(None, ps, Some(s1.alpha())),
        Term::new(Some(s2.alpha()), em, None).negated(),
    ]);
    p.constrain(&[
        Term::new(None, qs, Some(s1.beta())),
        Term::new(Some(s2.beta()), ps, None).negated(),
    ]);
    p.constrain(&[
        Term::new(None, qs, Some(&u1)),
        Term::new(None, k, Some(q1.beta())),
        Term::new(Some(s2.beta()), h, None).negated(),
        Term::new(Some(&u2), pq, None).negated(),
    ]);
    p.constrain(&[
        Term::new(None, qq, Some(q1.beta())),
        Term::new(Some(q2.beta()), pq, None).negated(),
    ]);
    p.constrain(&[
        Term::new(None, ez, Some(s1.gamma())),
        Term::new(Some(s2.gamma()), qs, None).negated(),
    ]);
    p.constrain(&[Term::new(Some(s2.gamma()), k, None)]);
    if let (Some(l1), Some(l2)) = (e1.quot_labels(), e2.quot_labels()) {
        for (i, li) in l2.iter().enumerate() {
            for (j, lj) in l1.iter().enumerate() {
                if li != lj {
                    p.fix_zero(pq, i, j);
                }
            }
        }
    }
    let sigma = match (e1.class_row(), e2.class_row()) {
        (Some(c1), Some(c2)) => {
            let sg = p.add_block(1, 1, true);
            p.constrain(&[
                Term::new(None, sg, Some(c1)),
                Term::new(Some(c2), pq, None).negated(),
            ]);
            Some(sg)
        }
        _ => None,
    };

    match p.search().outcome {
        Outcome::Found(m) => {
            let a = block_assemble(
                [[Some(&m[1]), Some(&m[2])], [None, Some(&m[3])]],
                [s1.a_dim(), q1.a_dim()],
                [s1.a_dim(), q1.a_dim()],
            )
            .expect("unknown blocks fit the partition");
            let b = block_assemble(
                [[Some(&m[4]), Some(&m[5])], [None, Some(&m[6])]],
                [s1.b_dim(), q1.b_dim()],
                [s1.b_dim(), q1.b_dim()],
            )
            .expect("unknown blocks fit the partition");
            let witness = ExtIsomorphism {
                total: Isomorphism {
                    e_minus: m[0].clone(),
                    a,
                    b,
                    e_zero: m[7].clone(),
                },
                quot_a: m[3].clone(),
                sigma: sigma.map(|_| m[8].get(0, 0).clone()),
            };
            assert!(witness.verify(e1, e2), "extension witness failed verification");
            Ok(ExtIsoVerdict {
                isomorphic: true,
                certificate: ExtCertificate::Witness,
                witness: Some(witness),
            })
        }
        Outcome::Impossible { vanishing_block } => {
            let name = names
                .iter()
                .find(|(id, _)| *id == vanishing_block)
                .map_or("sigma", |(_, n)| n);
            Ok(ExtIsoVerdict {
                isomorphic: false,
                certificate: ExtCertificate::VanishingDeterminant(name.to_string()),
                witness: None,
            })
        }
    }
}

/// The dual presentation with sub and quotient re-identified with their
/// duals: the class row `c` becomes `c * beta_Q^-1`, read through the
/// identification `D(Q) -> Q` that is the identity on `A` and
/// `beta_Q * beta_Q^-T` on `B`. Defined in the collapsed regime only, and
/// only when the sub-object is isomorphic to its dual.
pub fn dual_presentation(e: &ExtensionPresentation) -> Result<Option<ExtensionPresentation>, ExtensionError> {
    let c = match e.class_row() {
        Some(c) => c,
        None => return Ok(None),
    };
    let sub_dual = is_isomorphic(&dualize(&e.sub), &e.sub).map_err(|err| ExtensionError::Shape(err.to_string()))?;
    if !sub_dual.isomorphic {
        return Ok(None);
    }
    let bq = e.quot.beta();
    let bq_inv = bq.inverse().expect("a valid point-supported quotient has invertible beta");
    let quot_id = Isomorphism {
        e_minus: QMatrix::identity(0),
        a: QMatrix::identity(bq.cols()),
        b: bq * &bq_inv.transpose(),
        e_zero: QMatrix::identity(0),
    };
    debug_assert!(quot_id.verify(&dualize(&e.quot), &e.quot));
    Ok(Some(e.with_gluing_unchecked(Gluing::Collapsed(c * &bq_inv))))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SelfDuality {
    /// `dualize(total)` against `total`.
    pub total: IsoVerdict,
    /// The presentation against its dual presentation; `None` where the
    /// dual presentation is not defined (block regime).
    pub class: Option<ExtIsoVerdict>,
    pub self_dual: bool,
}

pub fn self_duality(e: &ExtensionPresentation) -> Result<SelfDuality, ExtensionError> {
    let t = e.total();
    let total = is_isomorphic(&dualize(&t), &t).map_err(|err| match err {
        crate::zigzag::ZigZagError::SizeBound { dim, bound } => ExtensionError::SizeBound { dim, bound },
        other => ExtensionError::Shape(other.to_string()),
    })?;
    let class = match dual_presentation(e)? {
        Some(d) => Some(ext_isomorphic(e, &d)?),
        None => None,
    };
    let self_dual = total.isomorphic && class.as_ref().is_none_or(|v| v.isomorphic);
    Ok(SelfDuality { total, class, self_dual })
}

/// The test grid `{0, 1, -1, 2, -2, 1/2, -1/3}`.
pub fn class_grid() -> Vec<Rational> {
    vec![
        Rational::zero(),
        Rational::one(),
        Rational::from_integer(-1),
        Rational::from_integer(2),
        Rational::from_integer(-2),
        Rational::new(1, 2),
        Rational::new(-1, 3),
    ]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassRepresentative {
    pub class: ExtClass,
    pub members: Vec<Rational>,
    pub split: bool,
    pub self_dual: bool,
}

/// One pairwise comparison on the grid.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairVerdict {
    pub left: Rational,
    pub right: Rational,
    pub isomorphic: bool,
    pub certificate: ExtCertificate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    /// Self-dual classes, in order of first appearance on the grid.
    pub classes: Vec<ClassRepresentative>,
    /// Classes that failed the self-duality test.
    pub rejected: Vec<ClassRepresentative>,
    pub pairs: Vec<PairVerdict>,
}

impl Classification {
    pub fn non_split(&self) -> Vec<&ClassRepresentative> {
        self.classes.iter().filter(|c| !c.split).collect()
    }
}

/// Enumerates extensions of the rank-one skyscraper by the intersection
/// complex over `boundary` with classes from `grid`, partitions them by
/// [`ext_isomorphic`] and keeps the self-dual classes.
pub fn classify_selfdual_rank_one(
    open_label: &str,
    boundary: (usize, usize),
    grid: &[Rational],
    exec: Execution,
) -> Result<Classification, ExtensionError> {
    let sub = crate::zigzag::std_ic(open_label, boundary.0, boundary.1);
    let quot = crate::zigzag::std_skyscraper(1).expect("rank one");
    let presentations = grid
        .iter()
        .map(|c| make_extension(sub.clone(), quot.clone(), ClassInput::Scalar(c.clone())))
        .collect::<Result<Vec<_>, _>>()?;
    let n = presentations.len();
    let verdicts = exec.map_range(n * n, |idx| ext_isomorphic(&presentations[idx / n], &presentations[idx % n]));
    let verdicts = verdicts.into_iter().collect::<Result<Vec<_>, _>>()?;
    let pairs: Vec<PairVerdict> = verdicts
        .iter()
        .enumerate()
        .map(|(idx, v)| PairVerdict {
            left: grid[idx / n].clone(),
            right: grid[idx % n].clone(),
            isomorphic: v.isomorphic,
            certificate: v.certificate.clone(),
        })
        .collect();

    let mut rep_of: Vec<usize> = Vec::with_capacity(n);
    let mut reps: Vec<usize> = Vec::new();
    for i in 0..n {
        match reps.iter().find(|&&r| verdicts[i * n + r].isomorphic) {
            Some(&r) => rep_of.push(r),
            None => {
                reps.push(i);
                rep_of.push(i);
            }
        }
    }
    let duality = exec.map(&reps, |&r| self_duality(&presentations[r]));
    let mut classes = Vec::new();
    let mut rejected = Vec::new();
    for (&r, d) in reps.iter().zip(duality) {
        let class = extension_class(&presentations[r]);
        let rep = ClassRepresentative {
            split: class.is_split(),
            self_dual: d?.self_dual,
            members: (0..n).filter(|&i| rep_of[i] == r).map(|i| grid[i].clone()).collect(),
            class,
        };
        if rep.self_dual {
            classes.push(rep);
        } else {
            rejected.push(rep);
        }
    }
    Ok(Classification {
        classes,
        rejected,
        pairs,
    })
}
