//! Truncated Fock-space states and operators.
//!
//! This module is a brute-force cross-check for the covariance-matrix code: it never
//! uses symplectic methods. Two-mode vectors are stored flattened with the first
//! mode as the major index, `|n₁, n₂⟩ ↦ n₁·N + n₂`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::dynamics::QuadraticHamiltonian;
use crate::entropy::LogBase;
use crate::error::{Error, Result};
use crate::gaussian::GaussianState;
use crate::linalg::expm;
use crate::symplectic::Ordering;

/// Largest probability mass allowed beyond the truncation for single-mode states.
pub const TAIL_TOL: f64 = 1e-12;
/// Largest `tanh^{2N} r` allowed for two-mode squeezed vectors.
pub const TMSV_TAIL_TOL: f64 = 1e-14;
/// Eigenvalues of a density matrix below `-NEG_EIG_TOL` are rejected.
pub const NEG_EIG_TOL: f64 = 1e-10;
/// Agreement required between the closed-form and exponential displacement operators.
pub const DISPLACEMENT_CHECK_TOL: f64 = 1e-9;

type C = Complex64;

fn c(re: f64) -> C {
    C::new(re, 0.0)
}

/// `ln n!` for `n = 0..len`.
fn log_factorials(len: usize) -> Vec<f64> {
    let mut out = vec![0.0; len.max(1)];
    for n in 1..len {
        out[n] = out[n - 1] + (n as f64).ln();
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ladder {
    pub a: DMatrix<C>,
    pub a_dagger: DMatrix<C>,
    pub number: DMatrix<C>,
}

/// `a|n⟩ = √n |n-1⟩` truncated to `dim` levels.
pub fn ladder(dim: usize) -> Result<Ladder> {
    if dim < 2 {
        return Err(Error::InvalidDimension(format!(
            "truncation must be at least 2, got {dim}"
        )));
    }
    let mut a = DMatrix::zeros(dim, dim);
    for n in 1..dim {
        a[(n - 1, n)] = c((n as f64).sqrt());
    }
    let a_dagger = a.adjoint();
    let number = DMatrix::from_diagonal(&DVector::from_fn(dim, |n, _| c(n as f64)));
    Ok(Ladder { a, a_dagger, number })
}

/// Pure state of one or two truncated modes.
#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    dims: Vec<usize>,
    amplitudes: DVector<C>,
    /// Probability mass dropped by the truncation before renormalizing.
    pub truncation_loss: f64,
}

impl FockState {
    pub fn new(dims: Vec<usize>, amplitudes: DVector<C>) -> Result<Self> {
        if dims.is_empty() || dims.len() > 2 || dims.iter().any(|&d| d < 1) {
            return Err(Error::InvalidDimension(format!("unsupported mode dimensions {dims:?}")));
        }
        let total: usize = dims.iter().product();
        if amplitudes.len() != total {
            return Err(Error::InvalidDimension(format!(
                "expected {total} amplitudes, got {}",
                amplitudes.len()
            )));
        }
        let norm = amplitudes.norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::InvalidInput("state vector has zero or non-finite norm".into()));
        }
        Ok(Self {
            dims,
            amplitudes: amplitudes / c(norm),
            truncation_loss: 0.0,
        })
    }

    /// `|n⟩` in a `dim`-level space.
    pub fn number(n: usize, dim: usize) -> Result<Self> {
        if n >= dim {
            return Err(Error::Index(format!("level {n} outside truncation {dim}")));
        }
        let mut v = DVector::zeros(dim);
        v[n] = c(1.0);
        Self::new(vec![dim], v)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn n_modes(&self) -> usize {
        self.dims.len()
    }

    pub fn amplitudes(&self) -> &DVector<C> {
        &self.amplitudes
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &FockState) -> Result<C> {
        if self.dims != other.dims {
            return Err(Error::InvalidDimension("states live in different truncations".into()));
        }
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// `⟨a_k† a_k⟩` for mode `k`.
    pub fn mean_number(&self, mode: usize) -> Result<f64> {
        if mode >= self.n_modes() {
            return Err(Error::Index(format!("mode {mode} out of range")));
        }
        let v = apply_ladder(&self.amplitudes, &self.dims, mode, false);
        Ok(v.norm_squared())
    }

    /// Copy with `extra` zero levels appended to every mode.
    fn padded(&self, extra: usize) -> (Vec<usize>, DVector<C>) {
        let new_dims: Vec<usize> = self.dims.iter().map(|d| d + extra).collect();
        let total: usize = new_dims.iter().product();
        let mut v = DVector::zeros(total);
        for (idx, amp) in self.amplitudes.iter().enumerate() {
            let levels = unflatten(idx, &self.dims);
            v[flatten(&levels, &new_dims)] = *amp;
        }
        (new_dims, v)
    }
}

fn unflatten(mut idx: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for k in (0..dims.len()).rev() {
        out[k] = idx % dims[k];
        idx /= dims[k];
    }
    out
}

fn flatten(levels: &[usize], dims: &[usize]) -> usize {
    levels.iter().zip(dims).fold(0, |acc, (&n, &d)| acc * d + n)
}

fn stride(dims: &[usize], mode: usize) -> usize {
    dims[mode + 1..].iter().product()
}

/// Applies `a` (or `a†` when `dagger`) on one mode; `a†` on the top level is dropped.
fn apply_ladder(v: &DVector<C>, dims: &[usize], mode: usize, dagger: bool) -> DVector<C> {
    let s = stride(dims, mode);
    let d = dims[mode];
    let mut out = DVector::zeros(v.len());
    for idx in 0..v.len() {
        let n = (idx / s) % d;
        if dagger {
            if n + 1 < d {
                out[idx + s] += v[idx] * ((n + 1) as f64).sqrt();
            }
        } else if n > 0 {
            out[idx - s] += v[idx] * (n as f64).sqrt();
        }
    }
    out
}

/// Applies quadrature `k` of the pairwise vector `(q₁, p₁, q₂, p₂, ...)`.
fn apply_quadrature(v: &DVector<C>, dims: &[usize], k: usize) -> DVector<C> {
    let mode = k / 2;
    let a = apply_ladder(v, dims, mode, false);
    let ad = apply_ladder(v, dims, mode, true);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    if k % 2 == 0 {
        (a + ad) * c(s)
    } else {
        (ad - a) * C::new(0.0, s)
    }
}

fn check_tail(lost: f64, tol: f64, what: &str) -> Result<()> {
    if lost > tol {
        return Err(Error::Truncation(format!(
            "{what}: {lost:e} of the probability lies beyond the truncation (limit {tol:e})"
        )));
    }
    Ok(())
}

/// `e^{-|α|²/2} Σ αⁿ/√n! |n⟩`, truncated and renormalized.
pub fn coherent_vector(alpha: C, dim: usize) -> Result<FockState> {
    if dim < 1 {
        return Err(Error::InvalidDimension("truncation must be at least 1".into()));
    }
    let mut v = DVector::zeros(dim);
    let mut amp = c((-alpha.norm_sqr() / 2.0).exp());
    for n in 0..dim {
        v[n] = amp;
        amp = amp * alpha / ((n + 1) as f64).sqrt();
    }
    let lost = (1.0 - v.norm_squared()).max(0.0);
    check_tail(lost, TAIL_TOL, "coherent state")?;
    let mut st = FockState::new(vec![dim], v)?;
    st.truncation_loss = lost;
    Ok(st)
}

/// `⟨n|D(η)|m⟩` for `n ≥ m` from the finite sum over `k`, in log-factorial form.
fn displacement_element(eta: C, n: usize, m: usize, lf: &[f64]) -> C {
    let l = n - m;
    let r = eta.norm();
    let pref = (-r * r / 2.0).exp();
    if r == 0.0 {
        return if l == 0 { c(1.0) } else { c(0.0) };
    }
    let phase = C::from_polar(1.0, l as f64 * eta.arg());
    let ln_r = r.ln();
    let mut sum = 0.0;
    for k in 0..=m {
        let ln_mag = 0.5 * (lf[n] + lf[m]) - lf[k + l] - lf[k] - lf[m - k] + (2 * k + l) as f64 * ln_r;
        let term = ln_mag.exp();
        sum += if k % 2 == 0 { term } else { -term };
    }
    phase * (pref * sum)
}

/// `D(η) = exp(η a† - η* a)` truncated to `dim` levels.
///
/// Elements come from the closed-form sum; the result is checked against the
/// exponential of the truncated generator on the lower half of the matrix.
pub fn displacement_matrix(eta: C, dim: usize) -> Result<DMatrix<C>> {
    // column 0 is the coherent state |η⟩, so its tail bounds the truncation error
    coherent_vector(eta, dim)?;
    let lf = log_factorials(dim);
    let mut d = DMatrix::zeros(dim, dim);
    for n in 0..dim {
        for m in 0..=n {
            d[(n, m)] = displacement_element(eta, n, m, &lf);
            if m != n {
                d[(m, n)] = displacement_element(-eta, n, m, &lf).conj();
            }
        }
    }
    let lad = ladder(dim.max(2))?;
    let gen = &lad.a_dagger * eta - &lad.a * eta.conj();
    let e = expm(&gen)?;
    let block = dim / 2;
    let mut worst: f64 = 0.0;
    for i in 0..block {
        for j in 0..block {
            worst = worst.max((e[(i, j)] - d[(i, j)]).norm());
        }
    }
    if worst > DISPLACEMENT_CHECK_TOL {
        return Err(Error::Truncation(format!(
            "closed-form and exponential displacement disagree by {worst:e}; increase the truncation"
        )));
    }
    Ok(d)
}

/// `C₂ₙ = (1/√cosh r) (√(2n)!/(2ⁿ n!)) (-e^{iθ} tanh r)ⁿ`, odd amplitudes zero.
pub fn squeezed_vacuum_vector(r: f64, theta: f64, dim: usize) -> Result<FockState> {
    if !r.is_finite() || r < 0.0 || !theta.is_finite() {
        return Err(Error::InvalidInput(format!("invalid squeezing r={r}, theta={theta}")));
    }
    let mut v = DVector::zeros(dim);
    let z = -C::from_polar(r.tanh(), theta);
    let mut amp = c(1.0 / r.cosh().sqrt());
    let mut n = 0;
    while 2 * n < dim {
        v[2 * n] = amp;
        let nf = n as f64;
        amp = amp * z * (((2.0 * nf + 2.0) * (2.0 * nf + 1.0)).sqrt() / (2.0 * (nf + 1.0)));
        n += 1;
    }
    let lost = (1.0 - v.norm_squared()).max(0.0);
    check_tail(lost, TAIL_TOL, "squeezed vacuum")?;
    let mut st = FockState::new(vec![dim], v)?;
    st.truncation_loss = lost;
    Ok(st)
}

/// `(1/cosh r) Σ (-e^{iθ} tanh r)ⁿ |n⟩|n⟩` with `dim` levels per mode.
///
/// Its reduced state is thermal with `n̄ = sinh² r`, so it is the Fock twin of the
/// covariance-matrix state `two_mode_squeezed_vacuum(2r, θ)`.
pub fn tmsv_vector(r: f64, theta: f64, dim: usize) -> Result<FockState> {
    if !r.is_finite() || r < 0.0 || !theta.is_finite() {
        return Err(Error::InvalidInput(format!("invalid squeezing r={r}, theta={theta}")));
    }
    if dim < 1 {
        return Err(Error::InvalidDimension("truncation must be at least 1".into()));
    }
    let t = r.tanh();
    let tail = t.powi(2 * dim as i32);
    check_tail(tail, TMSV_TAIL_TOL, "two-mode squeezed vacuum")?;
    let z = -C::from_polar(t, theta);
    let mut v = DVector::zeros(dim * dim);
    let mut amp = c(1.0 / r.cosh());
    for n in 0..dim {
        v[n * dim + n] = amp;
        amp *= z;
    }
    let mut st = FockState::new(vec![dim, dim], v)?;
    st.truncation_loss = tail;
    Ok(st)
}

/// Single-mode density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct FockDensity {
    matrix: DMatrix<C>,
}

impl FockDensity {
    pub fn new(matrix: DMatrix<C>) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() == 0 {
            return Err(Error::InvalidDimension("density matrix must be square".into()));
        }
        let herm = (&matrix - matrix.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if herm > 1e-10 {
            return Err(Error::InvalidInput(format!(
                "density matrix is not Hermitian ({herm:e})"
            )));
        }
        let tr = matrix.trace();
        if (tr - c(1.0)).norm() > 1e-10 {
            return Err(Error::InvalidInput(format!("density matrix has trace {tr}")));
        }
        Ok(Self { matrix })
    }

    pub fn from_pure(state: &FockState) -> Result<Self> {
        if state.n_modes() != 1 {
            return Err(Error::InvalidDimension(
                "use reduced_density for two-mode states".into(),
            ));
        }
        let v = state.amplitudes();
        Self::new(v * v.adjoint())
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C> {
        &self.matrix
    }
}

/// Geometric distribution `n̄ⁿ/(n̄+1)^{n+1}` on the diagonal.
pub fn thermal_density(nbar: f64, dim: usize) -> Result<FockDensity> {
    if !(nbar >= 0.0) || !nbar.is_finite() {
        return Err(Error::InvalidInput(format!(
            "mean occupation must be non-negative, got {nbar}"
        )));
    }
    if dim < 1 {
        return Err(Error::InvalidDimension("truncation must be at least 1".into()));
    }
    let x = nbar / (nbar + 1.0);
    let lost = x.powi(dim as i32);
    check_tail(lost, TAIL_TOL, "thermal state")?;
    let probs: Vec<f64> = (0..dim).map(|n| (1.0 - x) * x.powi(n as i32)).collect();
    let total: f64 = probs.iter().sum();
    FockDensity::new(DMatrix::from_diagonal(&DVector::from_iterator(
        dim,
        probs.iter().map(|p| c(p / total)),
    )))
}

/// Reduced density matrix of mode `keep` of a two-mode pure state.
pub fn reduced_density(state: &FockState, keep: usize) -> Result<FockDensity> {
    if state.n_modes() != 2 {
        return Err(Error::InvalidDimension("reduced_density needs a two-mode state".into()));
    }
    if keep > 1 {
        return Err(Error::Index(format!("mode {keep} out of range")));
    }
    let (d0, d1) = (state.dims[0], state.dims[1]);
    let psi = DMatrix::from_row_slice(d0, d1, state.amplitudes.as_slice());
    let rho = if keep == 0 {
        &psi * psi.adjoint()
    } else {
        psi.transpose() * psi.map(|z| z.conj())
    };
    FockDensity::new(rho)
}

/// `-Tr ρ log ρ` from the eigenvalues of `ρ`.
pub fn fock_entropy(rho: &FockDensity, log_base: LogBase) -> Result<f64> {
    let eig = SymmetricEigen::new(rho.matrix.clone());
    let mut total = 0.0;
    for &lam in eig.eigenvalues.iter() {
        if lam < -NEG_EIG_TOL {
            return Err(Error::Unphysical(format!("density matrix has eigenvalue {lam:e}")));
        }
        if lam > 0.0 {
            total -= lam * lam.ln();
        }
    }
    Ok(match log_base {
        LogBase::Natural => total,
        LogBase::Two => total / std::f64::consts::LN_2,
    })
}

/// Mean and covariance (vacuum = identity) from quadrature expectation values.
pub fn covariance_from_fock(state: &FockState) -> Result<GaussianState> {
    // one spare level so a single quadrature never falls off the truncation
    let (dims, v) = state.padded(1);
    let dim = 2 * state.n_modes();
    let applied: Vec<DVector<C>> = (0..dim).map(|k| apply_quadrature(&v, &dims, k)).collect();
    let mean = DVector::from_fn(dim, |k, _| v.dotc(&applied[k]).re);
    let cov = DMatrix::from_fn(dim, dim, |i, j| {
        2.0 * applied[i].dotc(&applied[j]).re - 2.0 * mean[i] * mean[j]
    });
    GaussianState::new(mean, cov, Ordering::Pairwise)
}

/// Same moments for a single-mode density matrix.
pub fn covariance_from_density(rho: &FockDensity) -> Result<GaussianState> {
    let dim = rho.dim() + 1;
    let lad = ladder(dim)?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let q = (&lad.a + &lad.a_dagger) * c(s);
    let p = (&lad.a_dagger - &lad.a) * C::new(0.0, s);
    let mut r = DMatrix::zeros(dim, dim);
    r.view_mut((0, 0), (dim - 1, dim - 1)).copy_from(&rho.matrix);
    let ops = [q, p];
    let ev = |m: &DMatrix<C>| (&r * m).trace().re;
    let mean = DVector::from_vec(vec![ev(&ops[0]), ev(&ops[1])]);
    let cov = DMatrix::from_fn(2, 2, |i, j| {
        ev(&(&ops[i] * &ops[j] + &ops[j] * &ops[i])) - 2.0 * mean[i] * mean[j]
    });
    GaussianState::new(mean, cov, Ordering::Pairwise)
}

/// Lowest eigenpair of a truncated quadratic Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct FockGroundState {
    pub energy: f64,
    pub state: FockState,
    /// `‖Hψ - Eψ‖`
    pub residual: f64,
    pub iterations: usize,
}

/// Ground state of `½ ΞᵀF̄Ξ + αᵀΞ` on one or two modes truncated to `dim` levels each,
/// found by Lanczos iteration with full reorthogonalization.
pub fn hamiltonian_ground_state(h: &QuadraticHamiltonian, dim: usize) -> Result<FockGroundState> {
    let n = h.n_modes();
    if n > 2 {
        return Err(Error::InvalidDimension(
            "Fock ground states support at most two modes".into(),
        ));
    }
    if dim < 2 {
        return Err(Error::InvalidDimension(format!(
            "truncation must be at least 2, got {dim}"
        )));
    }
    let h = h.to_ordering(Ordering::Pairwise);
    let dims = vec![dim; n];
    let total: usize = dims.iter().product();
    let f = h.f_bar().clone();
    let alpha = h.alpha().clone();
    let apply = |v: &DVector<C>| -> DVector<C> {
        let xs: Vec<DVector<C>> = (0..2 * n).map(|k| apply_quadrature(v, &dims, k)).collect();
        let mut out = DVector::zeros(total);
        for a in 0..2 * n {
            let mut comb = xs[0].clone() * c(f[(a, 0)]);
            for b in 1..2 * n {
                comb += &xs[b] * c(f[(a, b)]);
            }
            out += apply_quadrature(&comb, &dims, a) * c(0.5);
            out += &xs[a] * c(alpha[a]);
        }
        out
    };
    let mut start = DVector::zeros(total);
    start[0] = c(1.0);
    let (energy, vec, iterations) = lanczos_lowest(apply, start, 400, 1e-11)?;
    let hv = apply(&vec);
    let residual = (&hv - &vec * c(energy)).norm();
    Ok(FockGroundState {
        energy,
        state: FockState::new(dims.clone(), vec)?,
        residual,
        iterations,
    })
}

fn lanczos_lowest<F>(apply: F, start: DVector<C>, max_iter: usize, tol: f64) -> Result<(f64, DVector<C>, usize)>
where
    F: Fn(&DVector<C>) -> DVector<C>,
{
    let dim = start.len();
    let max_iter = max_iter.min(dim);
    let mut basis: Vec<DVector<C>> = vec![&start / c(start.norm())];
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut best = (f64::NAN, DVector::<f64>::zeros(0));
    for j in 0..max_iter {
        let mut w = apply(&basis[j]);
        let a = basis[j].dotc(&w).re;
        alphas.push(a);
        w -= &basis[j] * c(a);
        if j > 0 {
            w -= &basis[j - 1] * c(betas[j - 1]);
        }
        for _ in 0..2 {
            for v in &basis {
                let proj = v.dotc(&w);
                w -= v * proj;
            }
        }
        let b = w.norm();

        let k = alphas.len();
        let t = DMatrix::from_fn(k, k, |r, s| {
            if r == s {
                alphas[r]
            } else if r + 1 == s {
                betas[r]
            } else if s + 1 == r {
                betas[s]
            } else {
                0.0
            }
        });
        let eig = SymmetricEigen::new(t);
        let low = (0..k)
            .min_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]))
            .unwrap();
        let theta = eig.eigenvalues[low];
        let s = eig.eigenvectors.column(low).into_owned();
        let converged = b * s[k - 1].abs() <= tol * theta.abs().max(1.0);
        best = (theta, s);
        if converged || b <= f64::EPSILON * theta.abs().max(1.0) {
            let mut x = DVector::zeros(dim);
            for (v, &coef) in basis.iter().zip(best.1.iter()) {
                x += v * c(coef);
            }
            let norm = x.norm();
            return Ok((best.0, x / c(norm), j + 1));
        }
        betas.push(b);
        basis.push(w / c(b));
    }
    Err(Error::Numeric(format!(
        "Lanczos did not converge in {max_iter} iterations (current estimate {})",
        best.0
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::{mode_entropy, von_neumann_entropy};
    use crate::gaussian::{coherent, squeezed_vacuum, thermal, two_mode_squeezed_vacuum};
    use crate::linalg::{max_abs_diff, max_abs_diff_vec};
    use crate::wigner::scaled_laguerre;
    use crate::williamson::CoupledOscillators;

    #[test]
    fn ladder_basics() {
        let l = ladder(3).unwrap();
        assert_eq!(l.a[(0, 1)], c(1.0));
        assert!((l.a[(1, 2)] - c(2f64.sqrt())).norm() < 1e-15);
        assert_eq!(l.a[(0, 0)], c(0.0));
        let comm = &l.a * &l.a_dagger - &l.a_dagger * &l.a;
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j && i < 2 {
                    1.0
                } else if i == j {
                    -2.0
                } else {
                    0.0
                };
                assert!((comm[(i, j)] - c(expect)).norm() < 1e-14);
            }
        }
        assert!((&l.number - &l.a_dagger * &l.a).iter().all(|z| z.norm() < 1e-14));
        assert_eq!(l.number[(2, 2)], c(2.0));
        assert!(ladder(1).is_err());
    }

    #[test]
    fn coherent_examples() {
        let v = coherent_vector(c(0.0), 10).unwrap();
        assert_eq!(v.amplitudes()[0], c(1.0));
        let alpha = C::new(1.2, -0.7);
        let st = coherent_vector(alpha, 60).unwrap();
        assert!((st.mean_number(0).unwrap() - alpha.norm_sqr()).abs() < 1e-12);
        // a|α⟩ = α|α⟩
        let av = apply_ladder(st.amplitudes(), st.dims(), 0, false);
        assert!((av - st.amplitudes() * alpha).norm() < 1e-10);
        assert!(matches!(
            coherent_vector(C::new(4.0, 0.0), 20),
            Err(Error::Truncation(_))
        ));
    }

    #[test]
    fn coherent_inner_product() {
        let a = C::new(0.5, 1.0);
        let b = C::new(-1.3, 0.4);
        let got = coherent_vector(a, 60)
            .unwrap()
            .inner(&coherent_vector(b, 60).unwrap())
            .unwrap();
        let expect = ((-b.norm_sqr() - a.norm_sqr() + 2.0 * b * a.conj()) / 2.0).exp();
        assert!((got - expect).norm() < 1e-12);
    }

    #[test]
    fn displacement_properties() {
        let d0 = displacement_matrix(c(0.0), 12).unwrap();
        assert_eq!(d0, DMatrix::identity(12, 12));

        let eta = C::new(0.9, -0.4);
        let dim = 50;
        let d = displacement_matrix(eta, dim).unwrap();
        let col: DVector<C> = d.column(0).into_owned();
        let coh = coherent_vector(eta, dim).unwrap();
        assert!((col - coh.amplitudes()).norm() < 1e-12);

        let lf = log_factorials(dim);
        for n in 0..20 {
            let diag = displacement_element(eta, n, n, &lf);
            // e^{-|η|²/2} Lₙ(|η|²)
            assert!((diag - c(scaled_laguerre(n, eta.norm_sqr()))).norm() < 1e-12);
        }

        let dm = displacement_matrix(-eta, dim).unwrap();
        let l = ladder(dim).unwrap();
        let prod = &d * &dm;
        let shifted = d.adjoint() * &l.a * &d;
        for i in 0..dim / 2 {
            for j in 0..dim / 2 {
                let id = if i == j { 1.0 } else { 0.0 };
                assert!((prod[(i, j)] - c(id)).norm() < 1e-9);
                let expect = l.a[(i, j)] + if i == j { eta } else { c(0.0) };
                assert!((shifted[(i, j)] - expect).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn squeezed_vector() {
        let v = squeezed_vacuum_vector(0.0, 0.3, 8).unwrap();
        assert_eq!(v.amplitudes()[0], c(1.0));
        let (r, th) = (0.8, 0.6);
        let st = squeezed_vacuum_vector(r, th, 120).unwrap();
        assert!(st.amplitudes().iter().skip(1).step_by(2).all(|z| *z == c(0.0)));
        assert!((st.mean_number(0).unwrap() - r.sinh().powi(2)).abs() < 1e-10);
        let g = covariance_from_fock(&st).unwrap();
        let expect = squeezed_vacuum(r, th).unwrap();
        assert!(max_abs_diff(g.cov(), expect.cov()) < 1e-8);
    }

    #[test]
    fn squeezed_vector_strong_squeezing_needs_larger_truncation() {
        assert!(matches!(
            squeezed_vacuum_vector(1.5, 0.0, 120),
            Err(Error::Truncation(_))
        ));
        let st = squeezed_vacuum_vector(1.5, 1.0, 300).unwrap();
        let g = covariance_from_fock(&st).unwrap();
        assert!(max_abs_diff(g.cov(), squeezed_vacuum(1.5, 1.0).unwrap().cov()) < 1e-8);
    }

    #[test]
    fn tmsv_twin() {
        for &(r, th) in &[(0.0, 0.0), (0.4, 0.0), (0.7, 1.2), (0.75, -2.0)] {
            let st = tmsv_vector(r, th, 80).unwrap();
            let g = covariance_from_fock(&st).unwrap();
            let expect = two_mode_squeezed_vacuum(2.0 * r, th).unwrap();
            assert!(max_abs_diff(g.cov(), expect.cov()) < 1e-8, "r={r} th={th}");
        }
    }

    #[test]
    fn tmsv_reduced_state_is_thermal() {
        let r_gauss = 1.5;
        let st = tmsv_vector(r_gauss / 2.0, 0.4, 80).unwrap();
        let rho = reduced_density(&st, 0).unwrap();
        let t = (r_gauss / 2.0).tanh();
        for n in 0..10 {
            let expect = t.powi(2 * n as i32) / (r_gauss / 2.0).cosh().powi(2);
            assert!((rho.matrix()[(n, n)].re - expect).abs() < 1e-14);
        }
        let s_fock = fock_entropy(&rho, LogBase::Natural).unwrap();
        let s_gauss = von_neumann_entropy(&thermal(r_gauss.cosh()).unwrap(), LogBase::Natural)
            .unwrap()
            .total;
        assert!((s_fock - s_gauss).abs() < 1e-7);
        let other = fock_entropy(&reduced_density(&st, 1).unwrap(), LogBase::Natural).unwrap();
        assert!((s_fock - other).abs() < 1e-12);
    }

    #[test]
    fn covariance_of_simple_states() {
        let vac = covariance_from_fock(&FockState::number(0, 5).unwrap()).unwrap();
        assert!(max_abs_diff(vac.cov(), &DMatrix::identity(2, 2)) < 1e-15);
        assert!(vac.mean().norm() < 1e-15);

        let alpha = C::new(0.6, -1.1);
        let st = covariance_from_fock(&coherent_vector(alpha, 60).unwrap()).unwrap();
        let expect = coherent(&[alpha]).unwrap();
        assert!(max_abs_diff_vec(st.mean(), expect.mean()) < 1e-12);
        assert!(max_abs_diff(st.cov(), expect.cov()) < 1e-10);

        let th = covariance_from_density(&thermal_density(0.5, 100).unwrap()).unwrap();
        assert!(max_abs_diff(th.cov(), &(DMatrix::identity(2, 2) * 2.0)) < 1e-10);

        // |n⟩ has σ = (2n+1) I
        let f3 = covariance_from_fock(&FockState::number(3, 6).unwrap()).unwrap();
        assert!(max_abs_diff(f3.cov(), &(DMatrix::identity(2, 2) * 7.0)) < 1e-14);
    }

    #[test]
    fn entropy_examples() {
        let pure = FockDensity::from_pure(&coherent_vector(C::new(0.3, 0.3), 30).unwrap()).unwrap();
        assert!(fock_entropy(&pure, LogBase::Natural).unwrap().abs() < 1e-10);

        let th = thermal_density(0.5, 200).unwrap();
        let expect = 1.5 * 1.5f64.ln() - 0.5 * 0.5f64.ln();
        assert!((fock_entropy(&th, LogBase::Natural).unwrap() - expect).abs() < 1e-12);

        let d = 7;
        let mixed = FockDensity::new(DMatrix::identity(d, d) / c(d as f64)).unwrap();
        assert!((fock_entropy(&mixed, LogBase::Natural).unwrap() - (d as f64).ln()).abs() < 1e-12);
        assert!((fock_entropy(&mixed, LogBase::Two).unwrap() - (d as f64).log2()).abs() < 1e-12);

        let bad = FockDensity::new(DMatrix::from_diagonal(&DVector::from_vec(vec![c(1.1), c(-0.1)]))).unwrap();
        assert!(matches!(
            fock_entropy(&bad, LogBase::Natural),
            Err(Error::Unphysical(_))
        ));
        assert!(matches!(thermal_density(10.0, 50), Err(Error::Truncation(_))));
    }

    #[test]
    fn thermal_entropy_matches_gaussian() {
        for &nu in &[1.0, 1.5, 2.0, 5.0, 10.0] {
            let rho = thermal_density((nu - 1.0) / 2.0, 200).unwrap();
            let s = fock_entropy(&rho, LogBase::Natural).unwrap();
            assert!((s - mode_entropy(nu).unwrap()).abs() < 1e-6);
        }
    }

    #[test]
    fn single_mode_oscillator_ground_state() {
        let h = crate::dynamics::rotation(1.3, 1).unwrap();
        let gs = hamiltonian_ground_state(&h, 30).unwrap();
        assert!((gs.energy - 0.65).abs() < 1e-10);
        assert!((gs.state.amplitudes()[0].norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn coupled_ground_state_energy_and_entropy() {
        let sys = CoupledOscillators::new(1.0, 1.0, 0.75).unwrap();
        let gs = hamiltonian_ground_state(&sys.hamiltonian(), 40).unwrap();
        // zero-point energy of the normal modes: (ω + ωα)/2
        assert!((gs.energy - 1.5).abs() < 1e-9, "energy {}", gs.energy);
        let s = fock_entropy(&reduced_density(&gs.state, 0).unwrap(), LogBase::Natural).unwrap();
        let nu = sys.reduced_nu().unwrap();
        assert!((s - mode_entropy(nu).unwrap()).abs() < 1e-6);
    }
}
