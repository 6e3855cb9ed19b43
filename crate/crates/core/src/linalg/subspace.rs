use serde::{Deserialize, Serialize};

use super::{LinalgError, QMatrix, Rational};

/// A linear subspace of `Q^ambient_dim`, carried by a basis whose columns are
/// linearly independent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subspace {
    ambient_dim: usize,
    basis: QMatrix,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: QMatrix::zeros(ambient_dim, 0),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: QMatrix::identity(ambient_dim),
        }
    }

    /// Wraps an already independent basis; rejects dependent columns.
    pub fn from_basis(basis: QMatrix) -> Result<Self, LinalgError> {
        if basis.rank() != basis.cols() {
            return Err(LinalgError::DependentBasis);
        }
        Ok(Subspace {
            ambient_dim: basis.rows(),
            basis,
        })
    }

    /// Span of the columns of `generators`, keeping the pivot columns.
    pub fn spanned_by(generators: &QMatrix) -> Self {
        let pivots = generators.echelon().pivots;
        let cols: Vec<Vec<Rational>> = pivots.iter().map(|&j| generators.column(j)).collect();
        Subspace {
            ambient_dim: generators.rows(),
            basis: QMatrix::from_columns(generators.rows(), &cols),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &QMatrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<Rational>> {
        self.basis.columns()
    }

    pub fn contains_vector(&self, v: &[Rational]) -> bool {
        assert_eq!(v.len(), self.ambient_dim, "vector in the wrong ambient space");
        if v.iter().all(Rational::is_zero) {
            return true;
        }
        self.basis.solve(v).is_some()
    }

    pub fn contains(&self, other: &Subspace) -> Result<bool, LinalgError> {
        self.check_ambient(other)?;
        Ok(other.basis_vectors().iter().all(|v| self.contains_vector(v)))
    }

    pub fn equals(&self, other: &Subspace) -> Result<bool, LinalgError> {
        self.check_ambient(other)?;
        Ok(self.dim() == other.dim() && self.contains(other)?)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check_ambient(other)?;
        Ok(Subspace::spanned_by(&self.basis.hstack(&other.basis)?))
    }

    pub fn intersection(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check_ambient(other)?;
        // x = U a = W b  <=>  [U | -W] (a, b) = 0
        let stacked = self.basis.hstack(&(-&other.basis))?;
        let kernel = super::kernel_basis(&stacked);
        let k = self.dim();
        let coeffs = kernel.basis().submatrix(0..k, 0..kernel.dim());
        Ok(Subspace::spanned_by(&(&self.basis * &coeffs)))
    }

    /// Image of the subspace under `m`, which must map out of the ambient space.
    pub fn image_under(&self, m: &QMatrix) -> Result<Subspace, LinalgError> {
        if m.cols() != self.ambient_dim {
            return Err(LinalgError::DimensionMismatch(format!(
                "map with {} columns applied to a subspace of Q^{}",
                m.cols(),
                self.ambient_dim
            )));
        }
        Ok(Subspace::spanned_by(&m.checked_mul(&self.basis)?))
    }

    /// Reduces `v` modulo this subspace to a canonical representative: the
    /// result has zero in every coordinate that is a pivot of the echelonised
    /// basis.
    pub fn reduce(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.ambient_dim, "vector in the wrong ambient space");
        let ech = self.basis.transpose().echelon();
        let mut out = v.to_vec();
        for (i, &p) in ech.pivots.iter().enumerate() {
            let factor = out[p].clone();
            if factor.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                let e = ech.reduced.get(i, j);
                if !e.is_zero() {
                    *o -= &(&factor * e);
                }
            }
        }
        out
    }

    fn check_ambient(&self, other: &Subspace) -> Result<(), LinalgError> {
        if self.ambient_dim != other.ambient_dim {
            return Err(LinalgError::AmbientMismatch {
                left: self.ambient_dim,
                right: other.ambient_dim,
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| Rational::from_integer(x)).collect()
    }

    #[test]
    fn intersection_of_planes() {
        let u = Subspace::spanned_by(&QMatrix::from_i64(&[&[1, 0], &[0, 1], &[0, 0]]));
        let w = Subspace::spanned_by(&QMatrix::from_i64(&[&[0, 0], &[1, 0], &[0, 1]]));
        let both = u.intersection(&w).unwrap();
        assert_eq!(both.dim(), 1);
        assert!(both.contains_vector(&v(&[0, 5, 0])));
        assert_eq!(u.sum(&w).unwrap().dim(), 3);
    }

    #[test]
    fn reduce_kills_members() {
        let s = Subspace::spanned_by(&QMatrix::from_i64(&[&[1], &[1]]));
        assert!(s.reduce(&v(&[3, 3])).iter().all(Rational::is_zero));
        let r = s.reduce(&v(&[1, 0]));
        assert_eq!(r, vec![Rational::zero(), Rational::from_integer(-1)]);
    }

    #[test]
    fn dependent_basis_rejected() {
        let m = QMatrix::from_i64(&[&[1, 2], &[2, 4]]);
        assert!(matches!(Subspace::from_basis(m), Err(LinalgError::DependentBasis)));
    }

    #[test]
    fn ambient_mismatch_is_an_error() {
        let err = Subspace::zero(2).equals(&Subspace::zero(3)).unwrap_err();
        assert!(matches!(err, LinalgError::AmbientMismatch { left: 2, right: 3 }));
    }
}
