//! Exact linear algebra over the rationals.
//!
//! Every map in the crate is a [`QMatrix`] whose rows index the codomain and
//! whose columns index the domain. Zero-dimensional spaces are ordinary values
//! here: a `0 x n` matrix is the unique map to the zero space.

mod matrix;
mod rational;
mod subspace;

pub use matrix::{Echelon, QMatrix};
pub use rational::Rational;
pub use subspace::Subspace;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("subspaces live in different ambient spaces (Q^{left} vs Q^{right})")]
    AmbientMismatch { left: usize, right: usize },
    #[error("basis columns are linearly dependent")]
    DependentBasis,
    #[error("malformed rational literal {0:?}")]
    BadRational(String),
    #[error("zero denominator")]
    ZeroDenominator,
}

pub fn rank(m: &QMatrix) -> usize {
    m.rank()
}

/// Basis of `{x : m x = 0}`, one vector per free column of the echelon form.
pub fn kernel_basis(m: &QMatrix) -> Subspace {
    let ech = m.echelon();
    let n = m.cols();
    let mut vectors = Vec::new();
    let mut pivot_iter = ech.pivots.iter().peekable();
    for free in 0..n {
        if pivot_iter.peek() == Some(&&free) {
            pivot_iter.next();
            continue;
        }
        let mut x = vec![Rational::zero(); n];
        x[free] = Rational::one();
        for (row, &p) in ech.pivots.iter().enumerate() {
            x[p] = -ech.reduced.get(row, free);
        }
        vectors.push(x);
    }
    Subspace::from_basis(QMatrix::from_columns(n, &vectors)).expect("free-variable vectors are independent")
}

/// Basis of the column space, taken from the pivot columns of `m` itself.
pub fn image_basis(m: &QMatrix) -> Subspace {
    Subspace::spanned_by(m)
}

pub fn subspace_equal(s1: &Subspace, s2: &Subspace) -> Result<bool, LinalgError> {
    s1.equals(s2)
}

/// Exactness of `X --f--> Y --g--> Z` at `Y`: `im f = ker g`.
pub fn is_exact_at(f: &QMatrix, g: &QMatrix) -> Result<bool, LinalgError> {
    if f.rows() != g.cols() {
        return Err(LinalgError::DimensionMismatch(format!(
            "f lands in Q^{} but g starts at Q^{}",
            f.rows(),
            g.cols()
        )));
    }
    image_basis(f).equals(&kernel_basis(g))
}

/// Assembles a 2x2 block matrix. Absent blocks are zero; present blocks must
/// be `row_dims[i] x col_dims[j]`.
pub fn block_assemble(
    blocks: [[Option<&QMatrix>; 2]; 2],
    row_dims: [usize; 2],
    col_dims: [usize; 2],
) -> Result<QMatrix, LinalgError> {
    let mut out = QMatrix::zeros(row_dims[0] + row_dims[1], col_dims[0] + col_dims[1]);
    for (i, row) in blocks.iter().enumerate() {
        for (j, block) in row.iter().enumerate() {
            let Some(block) = block else { continue };
            if block.shape() != (row_dims[i], col_dims[j]) {
                return Err(LinalgError::ShapeMismatch(format!(
                    "block ({i},{j}) is {}x{}, partition expects {}x{}",
                    block.rows(),
                    block.cols(),
                    row_dims[i],
                    col_dims[j]
                )));
            }
            out.place(i * row_dims[0], j * col_dims[0], block);
        }
    }
    Ok(out)
}

/// Reads back quadrant `(i, j)` of a matrix partitioned by `row_dims x col_dims`.
pub fn block_quadrant(m: &QMatrix, row_dims: [usize; 2], col_dims: [usize; 2], i: usize, j: usize) -> QMatrix {
    let r0 = if i == 0 { 0 } else { row_dims[0] };
    let c0 = if j == 0 { 0 } else { col_dims[0] };
    m.submatrix(r0..r0 + row_dims[i], c0..c0 + col_dims[j])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&QMatrix::identity(3)), 3);
        assert_eq!(rank(&QMatrix::from_i64(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rank(&QMatrix::zeros(0, 5)), 0);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel_basis(&QMatrix::identity(2)).dim(), 0);
        assert_eq!(kernel_basis(&QMatrix::zeros(2, 2)).dim(), 2);
        // x + 2y = 0 by hand: (2, -1) up to scale.
        let m = QMatrix::from_i64(&[&[1, 2], &[2, 4]]);
        let k = kernel_basis(&m);
        assert_eq!(k.dim(), 1);
        let expected = Subspace::from_basis(QMatrix::from_i64(&[&[2], &[-1]])).unwrap();
        assert!(k.equals(&expected).unwrap());
        assert!(m.apply(&k.basis_vectors()[0]).unwrap().iter().all(Rational::is_zero));
    }

    #[test]
    fn image_examples() {
        assert_eq!(image_basis(&QMatrix::identity(4)).dim(), 4);
        assert_eq!(image_basis(&QMatrix::zeros(3, 2)).dim(), 0);
        let img = image_basis(&QMatrix::from_i64(&[&[1], &[2]]));
        assert_eq!(img.basis_vectors(), vec![vec![q(1), q(2)]]);
    }

    #[test]
    fn subspace_equal_examples() {
        let s = |rows: &[&[i64]]| Subspace::spanned_by(&QMatrix::from_i64(rows));
        assert!(subspace_equal(&s(&[&[1], &[0]]), &s(&[&[2], &[0]])).unwrap());
        assert!(!subspace_equal(&s(&[&[1], &[0]]), &s(&[&[0], &[1]])).unwrap());
        assert!(subspace_equal(&s(&[&[1, 1], &[1, -1]]), &Subspace::full(2)).unwrap());
    }

    #[test]
    fn exactness_examples() {
        let zero = QMatrix::zeros(1, 1);
        let id = QMatrix::identity(1);
        assert!(is_exact_at(&zero, &id).unwrap());
        assert!(is_exact_at(&id, &QMatrix::zeros(0, 1)).unwrap());
        assert!(!is_exact_at(&zero, &zero).unwrap());
        assert!(matches!(
            is_exact_at(&QMatrix::zeros(2, 1), &QMatrix::zeros(1, 3)),
            Err(LinalgError::DimensionMismatch(_))
        ));
    }

    #[test]
    fn block_assemble_examples() {
        let id1 = QMatrix::identity(1);
        let u = QMatrix::from_i64(&[&[1]]);
        let m = block_assemble([[Some(&id1), Some(&u)], [None, Some(&id1)]], [1, 1], [1, 1]).unwrap();
        assert_eq!(m, QMatrix::from_i64(&[&[1, 1], &[0, 1]]));

        let z = block_assemble([[None, None], [None, None]], [1, 1], [1, 1]).unwrap();
        assert_eq!(z, QMatrix::zeros(2, 2));

        // beta on the zero space, no u, quotient identity: collapses to [1].
        let beta = QMatrix::zeros(0, 0);
        let collapsed = block_assemble([[Some(&beta), None], [None, Some(&id1)]], [0, 1], [0, 1]).unwrap();
        assert_eq!(collapsed, QMatrix::identity(1));

        let bad = QMatrix::zeros(2, 1);
        assert!(matches!(
            block_assemble([[Some(&bad), None], [None, None]], [1, 1], [1, 1]),
            Err(LinalgError::ShapeMismatch(_))
        ));
    }
}
