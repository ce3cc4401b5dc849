use nalgebra::DMatrix;

use super::linalg::isometry_error;
use super::Tolerances;
use crate::error::{ensure, Result};
use crate::C64;

/// Linear map `C^{d_in} → C^{d_out}` with `V†V = I`.
///
/// Unitaries are the square case. The matrix is stored `d_out × d_in`.
#[derive(Debug, Clone, PartialEq)]
pub struct IsometryMap {
    matrix: DMatrix<C64>,
}

impl IsometryMap {
    pub fn new(matrix: DMatrix<C64>) -> Result<Self> {
        Self::with_tolerance(matrix, Tolerances::DEFAULT.isometry)
    }

    pub fn with_tolerance(matrix: DMatrix<C64>, tol: f64) -> Result<Self> {
        ensure!(
            matrix.nrows() >= matrix.ncols() && matrix.ncols() > 0,
            Dimension,
            "{}x{} matrix cannot be an isometry",
            matrix.nrows(),
            matrix.ncols()
        );
        let err = isometry_error(&matrix);
        ensure!(err <= tol, Numerical, "V†V deviates from identity by {err:e}");
        Ok(IsometryMap { matrix })
    }

    pub(crate) fn new_unchecked(matrix: DMatrix<C64>) -> Self {
        debug_assert!(isometry_error(&matrix) < 1e-8);
        IsometryMap { matrix }
    }

    pub fn identity(d: usize) -> Self {
        IsometryMap { matrix: DMatrix::identity(d, d) }
    }

    pub fn d_in(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn d_out(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn is_unitary(&self) -> bool {
        self.d_in() == self.d_out()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.matrix
    }

    /// `e^{iθ} V`.
    pub fn with_phase(&self, theta: f64) -> Self {
        IsometryMap { matrix: &self.matrix * C64::from_polar(1.0, theta) }
    }

    /// `self ∘ other`, i.e. apply `other` first.
    pub fn compose(&self, other: &IsometryMap) -> Result<Self> {
        ensure!(
            self.d_in() == other.d_out(),
            Dimension,
            "cannot compose {}→{} after {}→{}",
            self.d_in(),
            self.d_out(),
            other.d_in(),
            other.d_out()
        );
        Ok(IsometryMap { matrix: &self.matrix * &other.matrix })
    }

    /// Kronecker product; `self` acts on the low-order factor.
    pub fn kron_low(&self, high: &IsometryMap) -> Self {
        IsometryMap { matrix: high.matrix.kronecker(&self.matrix) }
    }

    /// Largest deviation of `V†V` from the identity.
    pub fn isometry_error(&self) -> f64 {
        isometry_error(&self.matrix)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_isometries() {
        let m = DMatrix::from_element(2, 2, C64::new(1.0, 0.0));
        assert!(IsometryMap::new(m).is_err());
        let wide = DMatrix::<C64>::zeros(1, 2);
        assert!(IsometryMap::new(wide).is_err());
    }

    #[test]
    fn kron_low_places_self_on_low_bits() {
        let x = IsometryMap::new(DMatrix::from_row_slice(
            2,
            2,
            &[C64::new(0., 0.), C64::new(1., 0.), C64::new(1., 0.), C64::new(0., 0.)],
        ))
        .unwrap();
        let xi = x.kron_low(&IsometryMap::identity(2));
        // index 1 (qubit 0 set) maps to index 0
        assert_eq!(xi.matrix()[(0, 1)], C64::new(1., 0.));
        assert_eq!(xi.matrix()[(2, 3)], C64::new(1., 0.));
    }
}
