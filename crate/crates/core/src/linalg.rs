//! Dense linear-algebra helpers shared by the phase-space modules.
//!
//! The matrix exponential is a scaling-and-squaring Taylor scheme: the input is
//! scaled by `2^-s` until its 1-norm is at most 1/2, the Taylor series is summed
//! until the next term falls below `1e-18` relative to the partial sum, and the
//! result is squared `s` times.

use nalgebra::{ComplexField, DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

const TAYLOR_TOL: f64 = 1e-18;
const MAX_TAYLOR_TERMS: usize = 60;

/// Induced 1-norm (maximum absolute column sum).
pub fn norm1<T: ComplexField<RealField = f64>>(m: &DMatrix<T>) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|x| x.clone().modulus()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Largest absolute entry.
pub fn max_abs<T: ComplexField<RealField = f64>>(m: &DMatrix<T>) -> f64 {
    m.iter().map(|x| x.clone().modulus()).fold(0.0, f64::max)
}

/// Largest absolute entrywise difference between two matrices of equal shape.
pub fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch in max_abs_diff");
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn max_abs_diff_vec(a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    assert_eq!(a.len(), b.len(), "length mismatch in max_abs_diff_vec");
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Matrix exponential by scaling and squaring.
pub fn expm<T: ComplexField<RealField = f64>>(m: &DMatrix<T>) -> Result<DMatrix<T>> {
    if !m.is_square() {
        return Err(Error::InvalidDimension(format!(
            "matrix exponential needs a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.iter().any(|x| !x.clone().is_finite()) {
        return Err(Error::Numeric("non-finite entry in matrix exponential input".into()));
    }
    let n = m.nrows();
    let norm = norm1(m);
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let scale = T::from_real(0.5f64.powi(squarings));
    let a = m * scale;

    let mut result = DMatrix::<T>::identity(n, n);
    let mut term = DMatrix::<T>::identity(n, n);
    for k in 1..=MAX_TAYLOR_TERMS {
        term = &term * &a * T::from_real(1.0 / k as f64);
        result += &term;
        if norm1(&term) <= TAYLOR_TOL * norm1(&result) {
            break;
        }
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    if result.iter().any(|x| !x.clone().is_finite()) {
        return Err(Error::Numeric("matrix exponential overflowed".into()));
    }
    Ok(result)
}

/// `exp(M)` together with `Phi(M) = sum_{k>=0} M^k / (k+1)!`.
///
/// Both come from the exponential of the augmented matrix `[[M, I], [0, 0]]`,
/// whose upper-right block is `Phi(M)`. `Phi` stays well defined when `M` is singular.
pub fn expm_and_phi(m: &DMatrix<f64>) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let n = m.nrows();
    let mut aug = DMatrix::<f64>::zeros(2 * n, 2 * n);
    aug.view_mut((0, 0), (n, n)).copy_from(m);
    aug.view_mut((0, n), (n, n)).fill_with_identity();
    let e = expm(&aug)?;
    Ok((e.view((0, 0), (n, n)).into_owned(), e.view((0, n), (n, n)).into_owned()))
}

/// Block direct sum `a ⊕ b`.
pub fn direct_sum(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let (ra, ca) = a.shape();
    let (rb, cb) = b.shape();
    let mut out = DMatrix::zeros(ra + rb, ca + cb);
    out.view_mut((0, 0), (ra, ca)).copy_from(a);
    out.view_mut((ra, ca), (rb, cb)).copy_from(b);
    out
}

/// Symmetric part `(m + mᵀ)/2`.
pub fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

/// Largest entry of `|m - mᵀ|`.
pub fn asymmetry(m: &DMatrix<f64>) -> f64 {
    max_abs_diff(m, &m.transpose())
}

/// Eigen-decomposition of a real symmetric matrix, eigenvalues ascending.
pub fn sym_eigen_sorted(m: &DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let eig = SymmetricEigen::new(m.clone());
    let n = m.nrows();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = DVector::from_iterator(n, idx.iter().map(|&i| eig.eigenvalues[i]));
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in idx.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

/// Inverse square root of a symmetric positive-definite matrix.
///
/// Returns the matrix together with `λ_min / λ_max` of the input.
pub fn spd_inv_sqrt(m: &DMatrix<f64>) -> Result<(DMatrix<f64>, f64)> {
    let (vals, vecs) = sym_eigen_sorted(m);
    let lo = vals[0];
    let hi = vals[vals.len() - 1];
    if !(lo > 0.0) {
        return Err(Error::InvalidInput(format!(
            "matrix is not positive definite (smallest eigenvalue {lo:e})"
        )));
    }
    let d = DMatrix::from_diagonal(&vals.map(|v| 1.0 / v.sqrt()));
    Ok((&vecs * d * vecs.transpose(), lo / hi))
}

/// True when a Cholesky factorization of the symmetric part succeeds.
pub fn is_positive_definite(m: &DMatrix<f64>) -> bool {
    m.iter().all(|x| x.is_finite()) && symmetrize(m).cholesky().is_some()
}
