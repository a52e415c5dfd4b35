//! Hermitian matrix functions on small complex matrices.

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Maximum |M − M†| entry.
pub fn hermiticity_defect(m: &DMatrix<Complex64>) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Entries below this fraction of the largest one are flushed to zero before
/// diagonalising.
const FLUSH: f64 = 1e-100;

/// Eigen-decomposition of a Hermitian matrix: ascending eigenvalues and unitary eigenvectors.
///
/// Nearly rank-deficient matrices with a wide dynamic range can make the implicit QR
/// sweep underflow; the decomposition is then redone on M + sI, s = max |M_ij|, which
/// has the same eigenvectors and no eigenvalue near zero.
pub fn hermitian_eigen(m: &DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    let scale = m.iter().map(|x| x.norm()).fold(0.0, f64::max);
    let flushed = m.map(|x| if x.norm() < FLUSH * scale { Complex64::new(0.0, 0.0) } else { x });
    let mut eig = flushed.clone().symmetric_eigen();
    let finite = |e: &nalgebra::linalg::SymmetricEigen<Complex64, nalgebra::Dyn>| {
        e.eigenvalues.iter().all(|x| x.is_finite()) && e.eigenvectors.iter().all(|z| z.is_finite())
    };
    if !finite(&eig) {
        let n = m.nrows();
        let shift = Complex64::new(scale, 0.0);
        eig = (flushed + DMatrix::from_diagonal_element(n, n, shift)).symmetric_eigen();
        eig.eigenvalues.iter_mut().for_each(|x| *x -= scale);
    }
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vecs = DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| eig.eigenvectors[(i, order[j])]);
    (vals, vecs)
}

/// f(M) = V f(Λ) V† for Hermitian M.
pub fn hermitian_apply<F>(m: &DMatrix<Complex64>, f: F) -> DMatrix<Complex64>
where
    F: Fn(f64) -> f64,
{
    let (vals, v) = hermitian_eigen(m);
    let d = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        vals.len(),
        vals.iter().map(|&x| Complex64::new(f(x), 0.0)),
    ));
    &v * d * v.adjoint()
}

/// Principal square root of a Hermitian positive-semidefinite 2×2 matrix.
///
/// Eigenvalues down to −1e-12 (relative to the matrix scale) are clipped to zero.
pub fn hermitian_sqrt(m: &Matrix2<Complex64>) -> Result<Matrix2<Complex64>> {
    let scale = m.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
    let defect = (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if defect > 1e-12 * scale {
        return Err(Error::validation(format!("hermitian_sqrt: matrix is not Hermitian (defect {defect:e})")));
    }
    let dm = DMatrix::from_fn(2, 2, |i, j| m[(i, j)]);
    let herm = (&dm + dm.adjoint()) * Complex64::new(0.5, 0.0);
    let (vals, _) = hermitian_eigen(&herm);
    if vals[0] < -1e-12 * scale {
        return Err(Error::validation(format!("hermitian_sqrt: matrix has negative eigenvalue {:e}", vals[0])));
    }
    let r = hermitian_apply(&herm, |x| x.max(0.0).sqrt());
    Ok(Matrix2::new(r[(0, 0)], r[(0, 1)], r[(1, 0)], r[(1, 1)]))
}

/// Frobenius norm of a complex matrix.
pub fn frobenius<R, C, S>(m: &nalgebra::Matrix<Complex64, R, C, S>) -> f64
where
    R: nalgebra::Dim,
    C: nalgebra::Dim,
    S: nalgebra::storage::Storage<Complex64, R, C>,
{
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
