//! Small dense helpers over nalgebra shared by the crate.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::C64;

/// (m + m†)/2. The eigensolvers get fed exactly Hermitian input so roundoff in
/// an assembled product cannot leak into complex eigenvalues.
pub(crate) fn hermitian_part(m: &DMatrix<C64>) -> DMatrix<C64> {
    (m + m.adjoint()).map(|z| 0.5 * z)
}

/// Largest |entry| of (m - m†); how far a matrix is from Hermitian.
pub(crate) fn hermiticity_residue(m: &DMatrix<C64>) -> f64 {
    (m - m.adjoint()).iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues sorted descending,
/// eigenvector columns permuted to match.
pub(crate) fn herm_eigen_desc(m: &DMatrix<C64>) -> (DVector<f64>, DMatrix<C64>) {
    let n = m.nrows();
    let eig = nalgebra::SymmetricEigen::new(hermitian_part(m));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].partial_cmp(&eig.eigenvalues[i]).unwrap());
    let values = DVector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

/// Hermitian eigenvalues only, sorted descending.
pub(crate) fn herm_eigenvalues_desc(m: &DMatrix<C64>) -> Vec<f64> {
    let mut v: Vec<f64> = nalgebra::SymmetricEigen::new(hermitian_part(m))
        .eigenvalues
        .iter()
        .copied()
        .collect();
    v.sort_by(|a, b| b.partial_cmp(a).unwrap());
    v
}

/// U f(w) U† from a precomputed eigendecomposition.
pub(crate) fn herm_from_eigen(
    values: &DVector<f64>,
    vectors: &DMatrix<C64>,
    f: impl Fn(f64) -> f64,
) -> DMatrix<C64> {
    let scaled = DMatrix::from_fn(vectors.nrows(), vectors.ncols(), |i, j| {
        vectors[(i, j)] * C64::new(f(values[j]), 0.0)
    });
    &scaled * vectors.adjoint()
}

/// Eigenvalues of a general complex matrix (Schur-based), unordered.
pub(crate) fn complex_eigenvalues(m: &DMatrix<C64>) -> Result<Vec<C64>> {
    let vals = m
        .clone()
        .eigenvalues()
        .ok_or_else(|| Error::InvalidState("complex eigensolver failed to converge".into()))?;
    Ok(vals.iter().copied().collect())
}

/// Principal square root of det(m) for a complex matrix whose Hermitian part is
/// positive definite. Every eigenvalue then lies in the open right half-plane,
/// so summing principal logs eigenvalue-by-eigenvalue accumulates the phase
/// continuously; taking the naive square root of the assembled determinant
/// would pick the wrong branch once |arg det| exceeds π.
pub(crate) fn sqrt_det_right_half_plane(m: &DMatrix<C64>) -> Result<C64> {
    let mut log_det = C64::new(0.0, 0.0);
    for lambda in complex_eigenvalues(m)? {
        if lambda.re <= 0.0 || lambda.norm() == 0.0 {
            return Err(Error::DegeneratePair(format!(
                "determinant factor {lambda} left the right half-plane"
            )));
        }
        log_det += lambda.ln();
    }
    Ok((0.5 * log_det).exp())
}

/// Promote a real matrix to a complex one.
pub(crate) fn to_complex(m: &DMatrix<f64>) -> DMatrix<C64> {
    m.map(|x| C64::new(x, 0.0))
}
