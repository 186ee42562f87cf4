//! Symplectic spectra and the Williamson normal form.
//!
//! For a symmetric positive-definite `F` the decomposition finds a symplectic `Σ`
//! with `Σ F Σᵀ = ⊕ diag(νᵢ, νᵢ)`. The construction goes through the real
//! antisymmetric matrix `Y = F^{-1/2} Ω F^{-1/2}`, whose eigenvalues are `±i/νᵢ`:
//! an orthogonal `O` bringing `Y` to `⊕ (1/νᵢ) Ω₁` is read off the eigenvectors of
//! the Hermitian matrix `-iY`, and `Σ = 𝓕^{1/2} O F^{-1/2}`.
//!
//! `Σ` is unique only up to a rotation inside each block of equal `ν`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::dynamics::QuadraticHamiltonian;
use crate::error::{Error, Result};
use crate::gaussian::{GaussianState, TAU_SYM};
use crate::linalg::{asymmetry, max_abs, max_abs_diff, spd_inv_sqrt, sym_eigen_sorted, symmetrize};
use crate::symplectic::{quadrature_indices, Ordering, SymplecticForm, SymplecticMatrix, TAU_SYMPLECTIC};

/// Tolerance on the `±ν` pairing of the spectrum, relative to `max|F|`.
pub const TAU_WILL: f64 = 1e-8;
/// Largest imaginary entry allowed in `O = K U†`.
pub const TAU_REAL: f64 = 1e-8;
/// `λ_min / λ_max` of `F` below which a conditioning warning is attached.
pub const CONDITION_FLOOR: f64 = 1e-12;
/// Relative gap below which two symplectic eigenvalues are treated as equal.
pub const DEGENERACY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct WilliamsonDecomposition {
    /// Symplectic eigenvalues, ascending.
    pub nu: Vec<f64>,
    /// `Σ` with `Σ F Σᵀ = diag_form`.
    pub sigma_matrix: SymplecticMatrix,
    /// `⊕ diag(νᵢ, νᵢ)` in the input ordering.
    pub diag_form: DMatrix<f64>,
    /// `max |Σ F Σᵀ - 𝓕|`.
    pub residual: f64,
    pub warnings: Vec<String>,
}

fn validate_spd(f: &DMatrix<f64>, form: &SymplecticForm) -> Result<()> {
    let dim = form.dim();
    if f.shape() != (dim, dim) {
        return Err(Error::InvalidDimension(format!(
            "expected a {dim}x{dim} matrix, got {}x{}",
            f.nrows(),
            f.ncols()
        )));
    }
    if f.iter().any(|x| !x.is_finite()) {
        return Err(Error::Numeric("non-finite matrix entry".into()));
    }
    let asym = asymmetry(f);
    if asym > TAU_SYM * max_abs(f).max(1.0) {
        return Err(Error::InvalidInput(format!(
            "matrix is not symmetric (asymmetry {asym:e})"
        )));
    }
    if symmetrize(f).cholesky().is_none() {
        return Err(Error::InvalidInput("matrix is not positive definite".into()));
    }
    Ok(())
}

/// Square root of a symmetric positive-definite matrix.
fn spd_sqrt(f: &DMatrix<f64>) -> DMatrix<f64> {
    let (vals, vecs) = sym_eigen_sorted(f);
    let d = DMatrix::from_diagonal(&vals.map(|v| v.max(0.0).sqrt()));
    &vecs * d * vecs.transpose()
}

/// Moduli of the eigenvalues `±iνᵢ` of `FΩ⁻¹`, one per conjugate pair, ascending.
///
/// `FΩ⁻¹` is similar to the real antisymmetric `F^{1/2}Ω⁻¹F^{1/2}`, so the values are
/// read off the Hermitian matrix `i F^{1/2}Ω⁻¹F^{1/2}`, whose spectrum is `{±νᵢ}`.
/// A spectrum that does not pair up to `TAU_WILL·max|F|` is reported as degenerate.
pub fn symplectic_spectrum(f: &DMatrix<f64>, form: &SymplecticForm) -> Result<Vec<f64>> {
    validate_spd(f, form)?;
    let f = symmetrize(f);
    let root = spd_sqrt(&f);
    let m = &root * form.omega_inv() * &root;
    let herm = m.map(|v| Complex64::new(0.0, v));
    let mut eig: Vec<f64> = SymmetricEigen::new(herm).eigenvalues.iter().copied().collect();
    eig.sort_by(f64::total_cmp);
    let dim = eig.len();
    let n = dim / 2;
    let pairing = (0..n).map(|k| (eig[k] + eig[dim - 1 - k]).abs()).fold(0.0, f64::max);
    if pairing > TAU_WILL * max_abs(&f) || eig[n] <= 0.0 {
        return Err(Error::NumericDegeneracy(format!(
            "eigenvalues of FΩ⁻¹ do not come in ±iν pairs (mismatch {pairing:e})"
        )));
    }
    Ok((0..n).map(|k| 0.5 * (eig[n + k] - eig[n - 1 - k])).collect())
}

/// Rotates `u` by a unit phase so that its largest-magnitude entry becomes `+i|u_k|`.
/// Among entries of equal magnitude (to 1e-12 relative) the first one wins.
///
/// With this choice `F = I` yields `Σ = I`.
fn fix_phase(u: &mut DVector<Complex64>) {
    let biggest = u.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if let Some(pivot) = u.iter().find(|z| z.norm() >= biggest * (1.0 - 1e-12)) {
        let phase = Complex64::new(0.0, 1.0) * pivot.conj() / pivot.norm();
        *u *= phase;
    }
}

/// Orthonormal basis of the span of `vectors`, rebuilt from the projector onto it by
/// pivoted Gram-Schmidt on the unit vectors. The result depends only on the subspace,
/// not on the basis the eigensolver happened to return.
fn canonical_basis(vectors: &[DVector<Complex64>]) -> Vec<DVector<Complex64>> {
    let dim = vectors[0].len();
    let k = vectors.len();
    let mut proj = DMatrix::<Complex64>::zeros(dim, dim);
    for v in vectors {
        proj += v * v.adjoint();
    }
    let mut chosen: Vec<DVector<Complex64>> = Vec::with_capacity(k);
    for _ in 0..k {
        let mut best: Option<(f64, DVector<Complex64>)> = None;
        for j in 0..dim {
            let mut w: DVector<Complex64> = proj.column(j).into_owned();
            for q in &chosen {
                let c = q.dotc(&w);
                w -= q * c;
            }
            let norm = w.norm();
            if best.as_ref().map_or(true, |(b, _)| norm > b * (1.0 + 1e-9)) {
                best = Some((norm, w));
            }
        }
        let (norm, w) = best.expect("nonempty space");
        chosen.push(w / Complex64::new(norm, 0.0));
    }
    chosen
}

/// Symplectic diagonalization of a symmetric positive-definite matrix.
pub fn williamson_decompose(f: &DMatrix<f64>, form: &SymplecticForm) -> Result<WilliamsonDecomposition> {
    let nu_spectrum = symplectic_spectrum(f, form)?;
    let f = symmetrize(f);
    let n = form.n_modes();
    let dim = form.dim();
    let ordering = form.ordering();
    let mut warnings = Vec::new();

    let (f_inv_sqrt, ratio) = spd_inv_sqrt(&f)?;
    if ratio <= CONDITION_FLOOR {
        warnings.push(format!(
            "matrix is nearly singular (eigenvalue ratio {ratio:e}); decomposition may be inaccurate"
        ));
    }

    let y = &f_inv_sqrt * form.omega() * &f_inv_sqrt;
    let minus_i_y = y.map(|v| Complex64::new(0.0, -v));
    let eig = SymmetricEigen::new(minus_i_y);

    // positive eigenvalues are 1/νᵢ; take them largest first so ν comes out ascending
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let positive = &order[..n];
    let mu_max = eig.eigenvalues[positive[0]];
    if eig.eigenvalues[positive[n - 1]] <= 0.0 {
        return Err(Error::DiagonalizationFailure {
            residual: eig.eigenvalues[positive[n - 1]].abs(),
            reason: "spectrum of -iY is not symmetric about zero".into(),
        });
    }

    // group equal μ and replace each group's eigenvectors by a canonical basis
    let mut mus = Vec::with_capacity(n);
    let mut vectors: Vec<DVector<Complex64>> = Vec::with_capacity(n);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n
            && (eig.eigenvalues[positive[start]] - eig.eigenvalues[positive[end]]).abs() <= DEGENERACY_TOL * mu_max
        {
            end += 1;
        }
        let group: Vec<DVector<Complex64>> = positive[start..end]
            .iter()
            .map(|&c| eig.eigenvectors.column(c).into_owned())
            .collect();
        let mean_mu = positive[start..end].iter().map(|&c| eig.eigenvalues[c]).sum::<f64>() / (end - start) as f64;
        let basis = if group.len() > 1 {
            canonical_basis(&group)
        } else {
            group
        };
        for v in basis {
            mus.push(mean_mu);
            vectors.push(v);
        }
        start = end;
    }

    // U has columns (u₁, ū₁, u₂, ū₂, ...); K = ⊕ (1/√2)[[i, -i], [1, 1]]; O = K U†
    let mut o_complex = DMatrix::<Complex64>::zeros(dim, dim);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let k_top = [Complex64::new(0.0, s), Complex64::new(0.0, -s)];
    let k_bottom = [Complex64::new(s, 0.0), Complex64::new(s, 0.0)];
    for (mode, u) in vectors.iter_mut().enumerate() {
        fix_phase(u);
        let pair = [u.adjoint(), u.transpose()];
        let (qi, pi) = quadrature_indices(mode, n, ordering);
        for j in 0..dim {
            o_complex[(qi, j)] = k_top[0] * pair[0][j] + k_top[1] * pair[1][j];
            o_complex[(pi, j)] = k_bottom[0] * pair[0][j] + k_bottom[1] * pair[1][j];
        }
    }
    let imag = o_complex.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    if imag > TAU_REAL {
        return Err(Error::DiagonalizationFailure {
            residual: imag,
            reason: "orthogonal factor is not real after phase fixing".into(),
        });
    }
    let o = o_complex.map(|z| z.re);
    let nu: Vec<f64> = mus.iter().map(|m| 1.0 / m).collect();

    let worst = nu
        .iter()
        .zip(&nu_spectrum)
        .map(|(a, b)| (a - b).abs() / b)
        .fold(0.0, f64::max);
    if worst > 1e-6 {
        warnings.push(format!(
            "symplectic eigenvalues from the two eigenproblems differ by {worst:e} (relative)"
        ));
    }

    let mut diag = DVector::zeros(dim);
    let mut diag_sqrt = DVector::zeros(dim);
    for (mode, &v) in nu.iter().enumerate() {
        let (qi, pi) = quadrature_indices(mode, n, ordering);
        diag[qi] = v;
        diag[pi] = v;
        diag_sqrt[qi] = v.sqrt();
        diag_sqrt[pi] = v.sqrt();
    }
    let diag_form = DMatrix::from_diagonal(&diag);
    let sigma = DMatrix::from_diagonal(&diag_sqrt) * o * f_inv_sqrt;
    let residual = max_abs_diff(&(&sigma * &f * sigma.transpose()), &diag_form);
    let tol = TAU_SYMPLECTIC * max_abs(&sigma).powi(2).max(1.0);
    let sigma_matrix = SymplecticMatrix::new(sigma, ordering, tol).map_err(|e| Error::DiagonalizationFailure {
        residual: f64::NAN,
        reason: e.to_string(),
    })?;

    Ok(WilliamsonDecomposition {
        nu,
        sigma_matrix,
        diag_form,
        residual,
        warnings,
    })
}

/// Ground state of a stable quadratic Hamiltonian.
///
/// In the coordinates `Ξ' = Σ⁻ᵀ Ξ` the Hamiltonian is `½ Σ νᵢ (q'ᵢ² + p'ᵢ²)`, whose
/// ground state is the vacuum; mapping back gives `σ = Σᵀ Σ`. The mean sits at the
/// classical minimum `-F̄⁻¹ α`.
pub fn normal_mode_ground_state(h: &QuadraticHamiltonian) -> Result<GaussianState> {
    let form = SymplecticForm::new(h.n_modes(), h.ordering())?;
    if !crate::linalg::is_positive_definite(h.f_bar()) {
        return Err(Error::NoGroundState(
            "hamiltonian matrix is not positive definite".into(),
        ));
    }
    let dec = williamson_decompose(h.f_bar(), &form)?;
    let sigma = dec.sigma_matrix.matrix();
    let cov = symmetrize(&(sigma.transpose() * sigma));
    let chol = h.f_bar().clone().cholesky().expect("checked positive definite");
    let mean = -chol.solve(h.alpha());
    GaussianState::new(mean, cov, h.ordering())
}

/// Two equal oscillators `p²/2m + mω²q²/2` coupled by `λ(q₁ - q₂)²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoupledOscillators {
    pub mass: f64,
    pub omega: f64,
    pub lambda: f64,
}

impl CoupledOscillators {
    pub fn new(mass: f64, omega: f64, lambda: f64) -> Result<Self> {
        if !(mass > 0.0 && omega > 0.0) || !mass.is_finite() || !omega.is_finite() {
            return Err(Error::InvalidInput(format!(
                "mass and frequency must be positive, got m={mass}, omega={omega}"
            )));
        }
        if !lambda.is_finite() {
            return Err(Error::InvalidInput(format!("coupling must be finite, got {lambda}")));
        }
        Ok(Self { mass, omega, lambda })
    }

    /// `α = √(1 + 4λ/mω²)`; the relative-coordinate frequency is `ωα`.
    pub fn alpha(&self) -> Result<f64> {
        let a2 = 1.0 + 4.0 * self.lambda / (self.mass * self.omega * self.omega);
        if a2 <= 0.0 {
            return Err(Error::NoGroundState(format!(
                "coupling λ={} makes the relative mode unstable",
                self.lambda
            )));
        }
        Ok(a2.sqrt())
    }

    /// Quadratic form in pairwise order `(q₁, p₁, q₂, p₂)`.
    pub fn hamiltonian(&self) -> QuadraticHamiltonian {
        let k = self.mass * self.omega * self.omega + 2.0 * self.lambda;
        let c = -2.0 * self.lambda;
        let im = 1.0 / self.mass;
        #[rustfmt::skip]
        let f = DMatrix::from_row_slice(4, 4, &[
            k, 0.0, c, 0.0,
            0.0, im, 0.0, 0.0,
            c, 0.0, k, 0.0,
            0.0, 0.0, 0.0, im,
        ]);
        QuadraticHamiltonian::quadratic(f, Ordering::Pairwise).expect("4x4 matrix")
    }

    /// Normal-mode frequencies `{ω, ωα}`, ascending for `λ ≥ 0`.
    pub fn normal_frequencies(&self) -> Result<[f64; 2]> {
        let a = self.alpha()?;
        let mut w = [self.omega, self.omega * a];
        w.sort_by(f64::total_cmp);
        Ok(w)
    }

    /// The decoupled Hamiltonian in centre-of-mass / relative coordinates with unit
    /// mass factors kept: `diag(mω², 1/m, mω²α², 1/m)`.
    pub fn unit_normal_form(&self) -> Result<DMatrix<f64>> {
        let a = self.alpha()?;
        let mw2 = self.mass * self.omega * self.omega;
        let im = 1.0 / self.mass;
        Ok(DMatrix::from_diagonal(&DVector::from_vec(vec![
            mw2,
            im,
            mw2 * a * a,
            im,
        ])))
    }

    /// Symplectic eigenvalue of either oscillator's reduced ground state, `(1+α)/(2√α)`.
    pub fn reduced_nu(&self) -> Result<f64> {
        let a = self.alpha()?;
        Ok((1.0 + a) / (2.0 * a.sqrt()))
    }
}
