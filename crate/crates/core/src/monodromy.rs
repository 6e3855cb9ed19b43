//! Monodromy-side formulas: the Picard-Lefschetz transformation, the
//! logarithm/exponential correspondence between unipotent and nilpotent
//! operators, and the monodromy weight filtration of a nilpotent operator.

use serde::Serialize;
use thiserror::Error;

use crate::linalg::{kernel_basis, image_basis, LinalgError, QMatrix, Rational, Subspace};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MonodromyError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("operator is not nilpotent: N^{0} != 0")]
    NotNilpotent(usize),
    #[error("operator is not unipotent: (T - I)^{0} != 0")]
    NotUnipotent(usize),
    #[error("weight filtration failed its own defining conditions: {0}")]
    FiltrationCheck(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A bilinear form `x . y = x^T G y`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Pairing {
    gram: QMatrix,
    skew: bool,
}

impl Pairing {
    pub fn new(gram: QMatrix) -> Result<Self, MonodromyError> {
        if !gram.is_square() {
            return Err(MonodromyError::NotSquare(gram.rows(), gram.cols()));
        }
        let skew = (&gram.transpose() + &gram).is_zero();
        Ok(Pairing { gram, skew })
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &QMatrix {
        &self.gram
    }

    /// Whether `G^T = -G`, checked at construction.
    pub fn is_skew(&self) -> bool {
        self.skew
    }

    pub fn pair(&self, x: &[Rational], y: &[Rational]) -> Result<Rational, MonodromyError> {
        self.check_len(x)?;
        self.check_len(y)?;
        let gy = self.gram.apply(y)?;
        Ok(x.iter().zip(&gy).fold(Rational::zero(), |acc, (a, b)| acc + a * b))
    }

    fn check_len(&self, v: &[Rational]) -> Result<(), MonodromyError> {
        if v.len() != self.dim() {
            return Err(MonodromyError::DimensionMismatch(format!(
                "vector of length {} for a pairing on Q^{}",
                v.len(),
                self.dim()
            )));
        }
        Ok(())
    }
}

/// A square matrix with some power (at most its size) equal to zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NilpotentOperator {
    matrix: QMatrix,
}

impl NilpotentOperator {
    pub fn new(matrix: QMatrix) -> Result<Self, MonodromyError> {
        if !matrix.is_square() {
            return Err(MonodromyError::NotSquare(matrix.rows(), matrix.cols()));
        }
        let n = matrix.rows();
        if !matrix.pow(n).is_zero() {
            return Err(MonodromyError::NotNilpotent(n));
        }
        Ok(NilpotentOperator { matrix })
    }

    pub fn zero(dim: usize) -> Self {
        NilpotentOperator {
            matrix: QMatrix::zeros(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.matrix
    }

    /// Largest `m` with `N^m != 0` (zero for the zero operator).
    pub fn index(&self) -> usize {
        let mut power = QMatrix::identity(self.dim());
        let mut m = 0;
        loop {
            power = &power * &self.matrix;
            if power.is_zero() {
                return m;
            }
            m += 1;
        }
    }

    /// Sizes of the Jordan blocks, largest first, read off from the ranks of
    /// successive powers.
    pub fn jordan_type(&self) -> Vec<usize> {
        let n = self.dim();
        let mut ranks = vec![n];
        let mut power = QMatrix::identity(n);
        while *ranks.last().expect("nonempty") > 0 {
            power = &power * &self.matrix;
            ranks.push(power.rank());
        }
        ranks.push(0);
        // blocks of size >= s: rank N^{s-1} - rank N^s
        let mut sizes = Vec::new();
        for s in (1..ranks.len() - 1).rev() {
            let at_least = ranks[s - 1] - ranks[s];
            let at_least_next = ranks[s] - ranks[s + 1];
            sizes.extend(std::iter::repeat_n(s, at_least - at_least_next));
        }
        sizes
    }
}

/// `T(alpha) = alpha + (alpha . delta) delta`.
pub fn pl_transform(alpha: &[Rational], delta: &[Rational], q: &Pairing) -> Result<Vec<Rational>, MonodromyError> {
    let c = q.pair(alpha, delta)?;
    Ok(alpha.iter().zip(delta).map(|(a, d)| a + &(&c * d)).collect())
}

/// The matrix of [`pl_transform`] for fixed `delta`: `T = I + delta (G delta)^T`.
pub fn pl_operator(delta: &[Rational], q: &Pairing) -> Result<QMatrix, MonodromyError> {
    q.check_len(delta)?;
    let g_delta = q.gram().apply(delta)?;
    let outer = &QMatrix::column_vector(delta) * &QMatrix::row_vector(&g_delta);
    Ok(&QMatrix::identity(q.dim()) + &outer)
}

/// `log T = sum_{j>=1} (-1)^{j+1} (T - I)^j / j`, a finite sum for unipotent `T`.
pub fn nilpotent_log(t: &QMatrix) -> Result<NilpotentOperator, MonodromyError> {
    if !t.is_square() {
        return Err(MonodromyError::NotSquare(t.rows(), t.cols()));
    }
    let n = t.rows();
    let d = t - &QMatrix::identity(n);
    if !d.pow(n).is_zero() {
        return Err(MonodromyError::NotUnipotent(n));
    }
    let mut sum = QMatrix::zeros(n, n);
    let mut power = QMatrix::identity(n);
    for j in 1..n.max(1) {
        power = &power * &d;
        if power.is_zero() {
            break;
        }
        let sign = if j % 2 == 1 { 1 } else { -1 };
        sum = &sum + &power.scale(&Rational::new(sign, j as i64));
    }
    NilpotentOperator::new(sum)
}

/// `exp N = sum_{j>=0} N^j / j!`.
pub fn unipotent_exp(n: &NilpotentOperator) -> QMatrix {
    let dim = n.dim();
    let mut sum = QMatrix::identity(dim);
    let mut term = QMatrix::identity(dim);
    for j in 1..dim.max(1) {
        term = (&term * n.matrix()).scale(&Rational::new(1, j as i64));
        if term.is_zero() {
            break;
        }
        sum = &sum + &term;
    }
    sum
}

/// An increasing filtration `W_l` of `Q^dim` indexed by integer weights.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightFiltration {
    center: i64,
    dim: usize,
    /// `(weight, W_weight)` for consecutive weights; the first step is zero and
    /// the last is the whole space.
    steps: Vec<(i64, Subspace)>,
}

impl WeightFiltration {
    pub fn center(&self) -> i64 {
        self.center
    }

    pub fn steps(&self) -> &[(i64, Subspace)] {
        &self.steps
    }

    pub fn lowest_weight(&self) -> i64 {
        self.steps[0].0
    }

    pub fn highest_weight(&self) -> i64 {
        self.steps[self.steps.len() - 1].0
    }

    /// `W_weight`, extended by zero below and by the whole space above.
    pub fn step(&self, weight: i64) -> Subspace {
        if weight < self.lowest_weight() {
            Subspace::zero(self.dim)
        } else if weight > self.highest_weight() {
            Subspace::full(self.dim)
        } else {
            self.steps[(weight - self.lowest_weight()) as usize].1.clone()
        }
    }

    pub fn graded_dim(&self, weight: i64) -> usize {
        self.step(weight).dim() - self.step(weight - 1).dim()
    }

    /// Graded dimensions from the lowest to the highest weight.
    pub fn graded_dims(&self) -> Vec<(i64, usize)> {
        (self.lowest_weight()..=self.highest_weight())
            .map(|w| (w, self.graded_dim(w)))
            .collect()
    }

    /// Checks `N W_l ⊆ W_{l-2}` for every `l`, and that `N^j` induces an
    /// isomorphism `Gr_{k+j} -> Gr_{k-j}` for every `j >= 0`. Returns the list
    /// of violated conditions.
    pub fn violations(&self, n: &NilpotentOperator) -> Vec<String> {
        let mut out = Vec::new();
        if n.dim() != self.dim {
            out.push(format!("operator on Q^{} against a filtration of Q^{}", n.dim(), self.dim));
            return out;
        }
        let lo = self.lowest_weight() - 2;
        let hi = self.highest_weight() + 2;
        for l in lo..=hi {
            let image = self.step(l).image_under(n.matrix()).expect("square operator");
            if !self.step(l - 2).contains(&image).expect("same ambient") {
                out.push(format!("N W_{l} is not contained in W_{}", l - 2));
            }
        }
        let k = self.center;
        let span = (hi - k).max(k - lo).max(0);
        let mut power = QMatrix::identity(self.dim);
        for j in 0..=span {
            let upper = self.graded_dim(k + j);
            let lower = self.graded_dim(k - j);
            let below = self.step(k - j - 1);
            let pushed = self.step(k + j).image_under(&power).expect("square operator");
            let rank = pushed.sum(&below).expect("same ambient").dim() - below.dim();
            if upper != lower || rank != upper {
                out.push(format!(
                    "N^{j}: Gr_{} (dim {upper}) -> Gr_{} (dim {lower}) has rank {rank}",
                    k + j,
                    k - j
                ));
            }
            power = &power * n.matrix();
        }
        out
    }
}

/// The monodromy weight filtration of `n` centered at `center`.
///
/// Centered at zero, `W_l = sum_{b >= max(0, -l-1)} ker N^{l+1+b} ∩ im N^b`;
/// a center `k` shifts every weight by `k`.
pub fn weight_filtration(n: &NilpotentOperator, center: i64) -> Result<WeightFiltration, MonodromyError> {
    let dim = n.dim();
    let m = n.index() as i64;
    let mut kernels = Vec::new();
    let mut images = Vec::new();
    let mut power = QMatrix::identity(dim);
    for _ in 0..=(2 * m + 1) {
        kernels.push(kernel_basis(&power));
        images.push(image_basis(&power));
        power = &power * n.matrix();
    }
    let ker = |a: i64| -> Subspace {
        if a as usize >= kernels.len() {
            Subspace::full(dim)
        } else {
            kernels[a as usize].clone()
        }
    };
    let mut steps = Vec::new();
    for l in (-m - 1)..=m {
        let mut w = Subspace::zero(dim);
        for b in 0.max(-l - 1)..=m {
            let piece = ker(l + 1 + b).intersection(&images[b as usize])?;
            w = w.sum(&piece)?;
        }
        steps.push((l + center, w));
    }
    let filtration = WeightFiltration { center, dim, steps };
    let violations = filtration.violations(n);
    if !violations.is_empty() {
        return Err(MonodromyError::FiltrationCheck(violations.join("; ")));
    }
    Ok(filtration)
}
