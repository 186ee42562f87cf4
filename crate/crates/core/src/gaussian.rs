//! Gaussian states described by first and second moments.
//!
//! Quadratures are dimensionless, `q = (a† + a)/√2` and `p = i(a† - a)/√2`, and the
//! covariance matrix is `σ^{μν} = <Θ^μ Θ^ν + Θ^ν Θ^μ> - 2 <Θ^μ><Θ^ν>`, so the vacuum
//! has `σ = I`. Other conventions in the literature differ by a factor of two; no
//! attempt is made to detect them.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{asymmetry, direct_sum, symmetrize};
use crate::symplectic::{reorder_matrix, reorder_vector, Ordering, SymplecticForm};
use crate::williamson::symplectic_spectrum;

/// Largest tolerated `|σ - σᵀ|` entry; smaller asymmetries are symmetrized away.
pub const TAU_SYM: f64 = 1e-10;
/// Slack for the physicality conditions `σ + iΩ⁻¹ ≥ 0` and `ν ≥ 1`.
pub const TAU_PHYS: f64 = 1e-8;
/// Slack for declaring a state pure.
pub const TAU_PURE: f64 = 1e-9;

/// A Gaussian state: mean vector and covariance matrix in a given ordering.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    ordering: Ordering,
    mean: DVector<f64>,
    cov: DMatrix<f64>,
}

impl GaussianState {
    /// Builds a state from raw moments.
    ///
    /// The covariance is symmetrized if its asymmetry is at most [`TAU_SYM`] and
    /// rejected otherwise. Physicality is not enforced here; see [`physicality_check`].
    pub fn new(mean: DVector<f64>, cov: DMatrix<f64>, ordering: Ordering) -> Result<Self> {
        let dim = mean.len();
        if dim == 0 || dim % 2 != 0 {
            return Err(Error::InvalidDimension(format!(
                "mean vector must have even positive length, got {dim}"
            )));
        }
        if cov.shape() != (dim, dim) {
            return Err(Error::InvalidDimension(format!(
                "covariance must be {dim}x{dim}, got {}x{}",
                cov.nrows(),
                cov.ncols()
            )));
        }
        if mean.iter().chain(cov.iter()).any(|x| !x.is_finite()) {
            return Err(Error::Numeric("non-finite entry in state moments".into()));
        }
        let asym = asymmetry(&cov);
        if asym > TAU_SYM {
            return Err(Error::InvalidInput(format!(
                "covariance matrix is not symmetric (max |σ - σᵀ| = {asym:e})"
            )));
        }
        Ok(Self {
            ordering,
            mean,
            cov: symmetrize(&cov),
        })
    }

    pub fn n_modes(&self) -> usize {
        self.mean.len() / 2
    }

    pub fn ordering(&self) -> Ordering {
        self.ordering
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    pub fn symplectic_form(&self) -> SymplecticForm {
        SymplecticForm::new(self.n_modes(), self.ordering).expect("n_modes >= 1")
    }

    /// The same state with its quadratures permuted into `to` ordering.
    pub fn to_ordering(&self, to: Ordering) -> Self {
        Self {
            ordering: to,
            mean: reorder_vector(&self.mean, self.ordering, to).expect("even dimension"),
            cov: reorder_matrix(&self.cov, self.ordering, to).expect("even dimension"),
        }
    }

    /// Symplectic eigenvalues of the covariance matrix, ascending.
    pub fn symplectic_spectrum(&self) -> Result<Vec<f64>> {
        symplectic_spectrum(&self.cov, &self.symplectic_form())
    }

    /// Purity `Tr ρ² = 1/∏ν_i`.
    pub fn purity(&self) -> Result<PurityReport> {
        let nu = self.symplectic_spectrum()?;
        let purity = 1.0 / nu.iter().product::<f64>();
        Ok(PurityReport {
            purity,
            is_pure: (purity - 1.0).abs() <= TAU_PURE,
        })
    }
}

/// Purity of a Gaussian state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PurityReport {
    pub purity: f64,
    pub is_pure: bool,
}

/// Vacuum of `n_modes` modes: zero mean, identity covariance.
pub fn vacuum(n_modes: usize) -> Result<GaussianState> {
    if n_modes == 0 {
        return Err(Error::InvalidDimension("number of modes must be at least 1".into()));
    }
    let dim = 2 * n_modes;
    Ok(GaussianState {
        ordering: Ordering::Pairwise,
        mean: DVector::zeros(dim),
        cov: DMatrix::identity(dim, dim),
    })
}

/// Single-mode thermal state with symplectic eigenvalue `nu = 2 n̄ + 1`.
pub fn thermal(nu: f64) -> Result<GaussianState> {
    if !nu.is_finite() {
        return Err(Error::Numeric(format!("thermal eigenvalue must be finite, got {nu}")));
    }
    if nu < 1.0 {
        return Err(Error::Unphysical(format!("thermal state needs ν ≥ 1, got {nu}")));
    }
    Ok(GaussianState {
        ordering: Ordering::Pairwise,
        mean: DVector::zeros(2),
        cov: DMatrix::identity(2, 2) * nu,
    })
}

/// Thermal state at reduced inverse temperature `β̃ = ħω / k_B T`, i.e. `ν = coth(β̃/2)`.
pub fn thermal_from_beta(beta_tilde: f64) -> Result<GaussianState> {
    if !(beta_tilde > 0.0) {
        return Err(Error::InvalidInput(format!(
            "reduced inverse temperature must be positive, got {beta_tilde}"
        )));
    }
    thermal(1.0 / (beta_tilde / 2.0).tanh())
}

/// Coherent state, one complex amplitude per mode.
pub fn coherent(alpha: &[Complex64]) -> Result<GaussianState> {
    if alpha.is_empty() {
        return Err(Error::InvalidDimension("coherent state needs at least one mode".into()));
    }
    if alpha.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
        return Err(Error::Numeric("non-finite coherent amplitude".into()));
    }
    let mut state = vacuum(alpha.len())?;
    for (k, a) in alpha.iter().enumerate() {
        state.mean[2 * k] = std::f64::consts::SQRT_2 * a.re;
        state.mean[2 * k + 1] = std::f64::consts::SQRT_2 * a.im;
    }
    Ok(state)
}

/// Single-mode squeezed vacuum `S(r e^{iθ})|0>`.
pub fn squeezed_vacuum(r: f64, theta: f64) -> Result<GaussianState> {
    if !r.is_finite() || !theta.is_finite() {
        return Err(Error::Numeric("squeezing parameters must be finite".into()));
    }
    let (c, s) = ((2.0 * r).cosh(), (2.0 * r).sinh());
    let cov = DMatrix::from_row_slice(
        2,
        2,
        &[
            c - theta.cos() * s,
            -theta.sin() * s,
            -theta.sin() * s,
            c + theta.cos() * s,
        ],
    );
    Ok(GaussianState {
        ordering: Ordering::Pairwise,
        mean: DVector::zeros(2),
        cov,
    })
}

/// Two-mode squeezed vacuum generated by `exp[(r/2)(e^{-iθ} a1 a2 - e^{iθ} a1† a2†)]`.
///
/// Each reduced mode is thermal with `ν = cosh r`. The factor `1/2` in the generator
/// means this `r` equals twice the parameter of the Fock-basis expansion in
/// [`crate::fock::tmsv_vector`].
pub fn two_mode_squeezed_vacuum(r: f64, theta: f64) -> Result<GaussianState> {
    if !r.is_finite() || !theta.is_finite() {
        return Err(Error::Numeric("squeezing parameters must be finite".into()));
    }
    let ch = r.cosh();
    let cs = theta.cos() * r.sinh();
    let sn = theta.sin() * r.sinh();
    #[rustfmt::skip]
    let cov = DMatrix::from_row_slice(4, 4, &[
        ch,  0.0, -cs, -sn,
        0.0, ch,  -sn,  cs,
        -cs, -sn,  ch,  0.0,
        -sn,  cs,  0.0, ch,
    ]);
    Ok(GaussianState {
        ordering: Ordering::Pairwise,
        mean: DVector::zeros(4),
        cov,
    })
}

/// Tensor product: means concatenated, covariances block-summed.
pub fn tensor(a: &GaussianState, b: &GaussianState) -> Result<GaussianState> {
    if a.ordering != b.ordering {
        return Err(Error::OrderingMismatch(format!(
            "cannot combine {} and {} states",
            a.ordering, b.ordering
        )));
    }
    let pa = a.to_ordering(Ordering::Pairwise);
    let pb = b.to_ordering(Ordering::Pairwise);
    let mean = DVector::from_iterator(
        pa.mean.len() + pb.mean.len(),
        pa.mean.iter().chain(pb.mean.iter()).copied(),
    );
    let joint = GaussianState {
        ordering: Ordering::Pairwise,
        mean,
        cov: direct_sum(&pa.cov, &pb.cov),
    };
    Ok(joint.to_ordering(a.ordering))
}

/// Reduced state of the modes in `keep`, in the given order.
pub fn partial_trace(state: &GaussianState, keep: &[usize]) -> Result<GaussianState> {
    let n = state.n_modes();
    if keep.is_empty() {
        return Err(Error::Index("no modes to keep".into()));
    }
    for (i, &k) in keep.iter().enumerate() {
        if k >= n {
            return Err(Error::Index(format!("mode {k} out of range for a {n}-mode state")));
        }
        if keep[..i].contains(&k) {
            return Err(Error::Index(format!("mode {k} listed twice")));
        }
    }
    let pw = state.to_ordering(Ordering::Pairwise);
    let rows: Vec<usize> = keep.iter().flat_map(|&k| [2 * k, 2 * k + 1]).collect();
    let dim = rows.len();
    let reduced = GaussianState {
        ordering: Ordering::Pairwise,
        mean: DVector::from_iterator(dim, rows.iter().map(|&i| pw.mean[i])),
        cov: DMatrix::from_fn(dim, dim, |i, j| pw.cov[(rows[i], rows[j])]),
    };
    Ok(reduced.to_ordering(state.ordering))
}

/// Diagnostics for the uncertainty principle `σ + iΩ⁻¹ ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalityReport {
    /// Smallest eigenvalue of the Hermitian matrix `σ + iΩ⁻¹`.
    pub min_uncertainty_eigenvalue: f64,
    /// Smallest symplectic eigenvalue; `None` when `σ` is not positive definite.
    pub min_symplectic_eigenvalue: Option<f64>,
    pub passed: bool,
}

pub fn physicality_check(state: &GaussianState) -> PhysicalityReport {
    let form = state.symplectic_form();
    let dim = state.cov.nrows();
    let herm = DMatrix::from_fn(dim, dim, |i, j| {
        Complex64::new(state.cov[(i, j)], form.omega_inv()[(i, j)])
    });
    let min_uncertainty_eigenvalue = SymmetricEigen::new(herm)
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    let min_symplectic_eigenvalue = state.symplectic_spectrum().ok().map(|nu| nu[0]);
    let passed =
        min_uncertainty_eigenvalue >= -TAU_PHYS && min_symplectic_eigenvalue.is_some_and(|nu| nu >= 1.0 - TAU_PHYS);
    PhysicalityReport {
        min_uncertainty_eigenvalue,
        min_symplectic_eigenvalue,
        passed,
    }
}

/// Pieces of the Gaussian Wigner function `exp(-(ξ-ξ0)ᵀσ⁻¹(ξ-ξ0)) / (πⁿ √det σ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerParams {
    pub normalization: f64,
    pub inverse_cov: DMatrix<f64>,
}

pub fn gaussian_wigner_params(state: &GaussianState) -> Result<WignerParams> {
    let chol = state
        .cov
        .clone()
        .cholesky()
        .ok_or_else(|| Error::Singular("covariance matrix is not positive definite".into()))?;
    let sqrt_det: f64 = chol.l_dirty().diagonal().iter().product();
    let inverse_cov = chol.inverse();
    let n = state.n_modes() as i32;
    Ok(WignerParams {
        normalization: 1.0 / (std::f64::consts::PI.powi(n) * sqrt_det),
        inverse_cov,
    })
}
