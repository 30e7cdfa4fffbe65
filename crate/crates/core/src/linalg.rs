//! Complex dense kernels shared by the geometry and scheduling code.

use nalgebra::{Cholesky, DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex matrix. Channel matrices, generators, covariances and
/// post-processors all use this representation.
pub type ComplexMatrix = DMatrix<Complex64>;

/// Relative asymmetry above which a matrix is rejected as non-Hermitian.
pub const HERMITIAN_TOLERANCE: f64 = 1e-6;

pub fn is_finite(m: &ComplexMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub(crate) fn ensure_finite(m: &ComplexMatrix) -> Result<()> {
    if is_finite(m) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

pub(crate) fn shape_str(rows: usize, cols: usize) -> String {
    format!("{rows}x{cols}")
}

/// `(B + B^H) / 2`, after checking that `B` is square and that the discarded
/// anti-Hermitian part is within [`HERMITIAN_TOLERANCE`] of `max(1, ‖B‖_F)`.
pub fn hermitian_part(b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if b.nrows() != b.ncols() {
        return Err(Error::ShapeMismatch {
            expected: "square matrix".into(),
            found: shape_str(b.nrows(), b.ncols()),
        });
    }
    ensure_finite(b)?;
    let adj = b.adjoint();
    let residual = (b - &adj).norm() / 2.0 / b.norm().max(1.0);
    if residual > HERMITIAN_TOLERANCE {
        return Err(Error::NotHermitian { residual });
    }
    Ok((b + adj).scale(0.5))
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues descending.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Column `i` is the unit eigenvector for `values[i]`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn new(b: &ComplexMatrix) -> Result<Self> {
        let sym = hermitian_part(b)?;
        let eig = SymmetricEigen::new(sym);
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]).then(i.cmp(&j)));
        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors = eig.eigenvectors.select_columns(order.iter());
        Ok(Self { values, vectors })
    }

    /// Columns for the `count` largest eigenvalues.
    pub fn leading(&self, count: usize) -> ComplexMatrix {
        self.vectors.columns(0, count).into_owned()
    }

    /// Columns for the `count` smallest eigenvalues.
    pub fn trailing(&self, count: usize) -> ComplexMatrix {
        let n = self.values.len();
        self.vectors.columns(n - count, count).into_owned()
    }
}

/// Real eigenvalues of a Hermitian matrix, sorted descending.
pub fn hermitian_eigs(b: &ComplexMatrix) -> Result<Vec<f64>> {
    let sym = hermitian_part(b)?;
    let mut values: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(|a, b| b.total_cmp(a));
    Ok(values)
}

/// `Σ A_i A_i^H` over a slice of equally tall matrices.
pub(crate) fn gram_sum<'a, I>(rows: usize, mats: I) -> ComplexMatrix
where
    I: IntoIterator<Item = &'a ComplexMatrix>,
{
    let mut acc = ComplexMatrix::zeros(rows, rows);
    for a in mats {
        acc.gemm(Complex64::new(1.0, 0.0), a, &a.adjoint(), Complex64::new(1.0, 0.0));
    }
    acc
}

/// Real part of `tr(U^H B U)`.
pub fn quadratic_trace(u: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    (u.adjoint() * b * u).trace().re
}

/// `log2 det(A)` for a Hermitian positive definite `A`, via Cholesky.
///
/// Returns `None` when the factorisation fails (A not numerically PD).
pub fn log2_det_hpd(a: &ComplexMatrix) -> Option<f64> {
    let chol = Cholesky::new(a.clone())?;
    let l = chol.l_dirty();
    Some((0..a.nrows()).map(|i| l[(i, i)].re.log2()).sum::<f64>() * 2.0)
}
