//! Quadratic Hamiltonians and the Gaussian unitaries they generate.
//!
//! A Hamiltonian `H = ½ Ξᵀ F̄ Ξ + αᵀ Ξ` drives the moments as
//! `ξ̇ = Ω⁻¹(F̄ ξ + α)` and `σ̇ = (Ω⁻¹F̄) σ + σ (Ω⁻¹F̄)ᵀ`. For time-independent `F̄`
//! the solution is `ξ(t) = S ξ(0) + d`, `σ(t) = S σ(0) Sᵀ` with `S = exp(Ω⁻¹F̄ t)`.
//! Time is measured in generator units: `U = exp(-i H t)` with `ħ = 1`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gaussian::{GaussianState, TAU_SYM};
use crate::linalg::{expm_and_phi, max_abs, symmetrize};
use crate::symplectic::{reorder_matrix, reorder_vector, Ordering, SymplecticForm, SymplecticMatrix, TAU_SYMPLECTIC};

/// `H = ½ Ξᵀ F̄ Ξ + αᵀ Ξ` with symmetric `F̄`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticHamiltonian {
    ordering: Ordering,
    f_bar: DMatrix<f64>,
    alpha: DVector<f64>,
}

impl QuadraticHamiltonian {
    /// Builds a Hamiltonian from any real `F`; only its symmetric part `(F + Fᵀ)/2` is kept.
    pub fn new(f: DMatrix<f64>, alpha: DVector<f64>, ordering: Ordering) -> Result<Self> {
        let dim = f.nrows();
        if dim == 0 || dim % 2 != 0 || !f.is_square() {
            return Err(Error::InvalidDimension(format!(
                "hamiltonian matrix must be square with even size, got {}x{}",
                f.nrows(),
                f.ncols()
            )));
        }
        if alpha.len() != dim {
            return Err(Error::InvalidDimension(format!(
                "linear coefficients must have length {dim}, got {}",
                alpha.len()
            )));
        }
        if f.iter().chain(alpha.iter()).any(|x| !x.is_finite()) {
            return Err(Error::Numeric("non-finite hamiltonian coefficient".into()));
        }
        Ok(Self {
            ordering,
            f_bar: symmetrize(&f),
            alpha,
        })
    }

    /// Purely quadratic Hamiltonian (`α = 0`).
    pub fn quadratic(f: DMatrix<f64>, ordering: Ordering) -> Result<Self> {
        let dim = f.nrows();
        Self::new(f, DVector::zeros(dim), ordering)
    }

    /// `H = 0` on `n_modes` modes.
    pub fn zero(n_modes: usize) -> Self {
        let dim = 2 * n_modes;
        Self {
            ordering: Ordering::Pairwise,
            f_bar: DMatrix::zeros(dim, dim),
            alpha: DVector::zeros(dim),
        }
    }

    pub fn n_modes(&self) -> usize {
        self.alpha.len() / 2
    }

    pub fn ordering(&self) -> Ordering {
        self.ordering
    }

    pub fn f_bar(&self) -> &DMatrix<f64> {
        &self.f_bar
    }

    pub fn alpha(&self) -> &DVector<f64> {
        &self.alpha
    }

    pub fn to_ordering(&self, to: Ordering) -> Self {
        Self {
            ordering: to,
            f_bar: reorder_matrix(&self.f_bar, self.ordering, to).expect("even dimension"),
            alpha: reorder_vector(&self.alpha, self.ordering, to).expect("even dimension"),
        }
    }

    /// `Ω⁻¹ F̄`, the generator of the phase-space flow.
    pub fn generator(&self) -> DMatrix<f64> {
        let form = SymplecticForm::new(self.n_modes(), self.ordering).expect("n_modes >= 1");
        form.omega_inv() * &self.f_bar
    }

    fn drift(&self) -> DVector<f64> {
        let form = SymplecticForm::new(self.n_modes(), self.ordering).expect("n_modes >= 1");
        form.omega_inv() * &self.alpha
    }
}

/// `H = a†ᵀ W a + a†ᵀ G a† + aᵀ G† a` for `n` modes.
#[derive(Debug, Clone, PartialEq)]
pub struct LadderHamiltonian {
    w: DMatrix<Complex64>,
    g: DMatrix<Complex64>,
}

impl LadderHamiltonian {
    pub fn new(w: DMatrix<Complex64>, g: DMatrix<Complex64>) -> Result<Self> {
        let n = w.nrows();
        if n == 0 || !w.is_square() || g.shape() != (n, n) {
            return Err(Error::InvalidDimension(format!(
                "W and G must both be n x n, got {:?} and {:?}",
                w.shape(),
                g.shape()
            )));
        }
        let herm = w
            .iter()
            .zip(w.adjoint().iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        if herm > TAU_SYM {
            return Err(Error::InvalidInput(format!(
                "W must be Hermitian (max |W - W†| = {herm:e})"
            )));
        }
        Ok(Self { w, g })
    }

    pub fn n_modes(&self) -> usize {
        self.w.nrows()
    }

    pub fn w(&self) -> &DMatrix<Complex64> {
        &self.w
    }

    pub fn g(&self) -> &DMatrix<Complex64> {
        &self.g
    }
}

/// Converts a ladder-operator Hamiltonian to quadrature form.
///
/// `F = [[A, X], [X†, B]]` with `A = W + G + G†`, `B = W - G - G†`,
/// `X = i(W - G + G†)` is assembled in `(q1..qn, p1..pn)` order, symmetrized, and
/// returned in pairwise order. The symmetric part of `F` is real for Hermitian `W`;
/// a residual imaginary part above [`TAU_SYM`] is reported as an internal error.
pub fn ladder_to_quadrature(h: &LadderHamiltonian) -> Result<QuadraticHamiltonian> {
    let n = h.n_modes();
    let i = Complex64::new(0.0, 1.0);
    let g_dag = h.g.adjoint();
    let a = &h.w + &h.g + &g_dag;
    let b = &h.w - &h.g - &g_dag;
    let x = (&h.w - &h.g + &g_dag) * i;

    let mut f = DMatrix::<Complex64>::zeros(2 * n, 2 * n);
    f.view_mut((0, 0), (n, n)).copy_from(&a);
    f.view_mut((0, n), (n, n)).copy_from(&x);
    f.view_mut((n, 0), (n, n)).copy_from(&x.adjoint());
    f.view_mut((n, n), (n, n)).copy_from(&b);
    let f_sym = (&f + f.transpose()) * Complex64::new(0.5, 0.0);

    let imag = f_sym.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    if imag > TAU_SYM {
        return Err(Error::Internal(format!(
            "assembled quadrature matrix has imaginary residue {imag:e}"
        )));
    }
    let real = f_sym.map(|z| z.re);
    QuadraticHamiltonian::quadratic(real, Ordering::Blockwise).map(|h| h.to_ordering(Ordering::Pairwise))
}

/// Generator of the single-mode squeezer `S(r e^{iθ}) = exp[(r/2)(e^{-iθ}a² - e^{iθ}a†²)]`.
pub fn single_mode_squeezer(r: f64, theta: f64) -> LadderHamiltonian {
    let g = Complex64::new(0.0, -r / 2.0) * Complex64::from_polar(1.0, theta);
    LadderHamiltonian {
        w: DMatrix::zeros(1, 1),
        g: DMatrix::from_element(1, 1, g),
    }
}

/// Generator of the two-mode squeezer `exp[(r/2)(e^{-iθ}a1 a2 - e^{iθ}a1† a2†)]`.
pub fn two_mode_squeezer(r: f64, theta: f64) -> LadderHamiltonian {
    let g = Complex64::new(0.0, -r / 4.0) * Complex64::from_polar(1.0, theta);
    let zero = Complex64::new(0.0, 0.0);
    LadderHamiltonian {
        w: DMatrix::zeros(2, 2),
        g: DMatrix::from_row_slice(2, 2, &[zero, g, g, zero]),
    }
}

/// Free oscillators `ω Σ a_k† a_k`, i.e. `F̄ = ω I`.
pub fn rotation(omega: f64, n_modes: usize) -> Result<QuadraticHamiltonian> {
    if n_modes == 0 {
        return Err(Error::InvalidDimension("number of modes must be at least 1".into()));
    }
    QuadraticHamiltonian::quadratic(DMatrix::identity(2 * n_modes, 2 * n_modes) * omega, Ordering::Pairwise)
}

/// Gaussian unitary acting as `ξ ↦ S ξ + d`, `σ ↦ S σ Sᵀ`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianChannel {
    s: SymplecticMatrix,
    d: DVector<f64>,
}

impl GaussianChannel {
    pub fn new(s: SymplecticMatrix, d: DVector<f64>) -> Result<Self> {
        if d.len() != s.matrix().nrows() {
            return Err(Error::InvalidDimension(format!(
                "displacement has length {}, expected {}",
                d.len(),
                s.matrix().nrows()
            )));
        }
        Ok(Self { s, d })
    }

    pub fn identity(n_modes: usize) -> Self {
        Self {
            s: SymplecticMatrix::identity(n_modes, Ordering::Pairwise),
            d: DVector::zeros(2 * n_modes),
        }
    }

    pub fn symplectic(&self) -> &SymplecticMatrix {
        &self.s
    }

    pub fn displacement(&self) -> &DVector<f64> {
        &self.d
    }

    pub fn ordering(&self) -> Ordering {
        self.s.ordering()
    }

    pub fn n_modes(&self) -> usize {
        self.s.n_modes()
    }

    pub fn to_ordering(&self, to: Ordering) -> Self {
        Self {
            s: self.s.reordered(to),
            d: reorder_vector(&self.d, self.ordering(), to).expect("even dimension"),
        }
    }

    /// `other ∘ self`: apply `self` first, then `other`.
    pub fn then(&self, other: &GaussianChannel) -> Result<GaussianChannel> {
        if other.n_modes() != self.n_modes() {
            return Err(Error::InvalidDimension("channels act on different mode counts".into()));
        }
        let other = other.to_ordering(self.ordering());
        let s = other.s.matrix() * self.s.matrix();
        let d = other.s.matrix() * &self.d + &other.d;
        let tol = TAU_SYMPLECTIC * max_abs(&s).powi(2).max(1.0);
        Ok(Self {
            s: SymplecticMatrix::new(s, self.ordering(), tol)?,
            d,
        })
    }
}

/// `S = exp(Ω⁻¹F̄ t)` and `d = Φ(Ω⁻¹F̄ t) Ω⁻¹α t` with `Φ(M) = Σ Mᵏ/(k+1)!`.
pub fn generate_channel(h: &QuadraticHamiltonian, t: f64) -> Result<GaussianChannel> {
    if !t.is_finite() {
        return Err(Error::Numeric(format!("evolution time must be finite, got {t}")));
    }
    let m = h.generator() * t;
    let (s, phi) = expm_and_phi(&m)?;
    let d = phi * h.drift() * t;
    if d.iter().any(|x| !x.is_finite()) {
        return Err(Error::Numeric("displacement overflowed".into()));
    }
    // absolute residuals scale with |S|², so the tolerance does too
    let tol = TAU_SYMPLECTIC * max_abs(&s).powi(2).max(1.0);
    Ok(GaussianChannel {
        s: SymplecticMatrix::new(s, h.ordering(), tol)?,
        d,
    })
}

/// Applies a channel to a state; the result keeps the state's ordering.
pub fn apply_channel(ch: &GaussianChannel, state: &GaussianState) -> Result<GaussianState> {
    if ch.n_modes() != state.n_modes() {
        return Err(Error::InvalidDimension(format!(
            "channel acts on {} modes, state has {}",
            ch.n_modes(),
            state.n_modes()
        )));
    }
    let ch = ch.to_ordering(state.ordering());
    let s = ch.s.matrix();
    let mean = s * state.mean() + &ch.d;
    let cov = s * state.cov() * s.transpose();
    GaussianState::new(mean, symmetrize(&cov), state.ordering())
}

/// Integrates the moment equations with fixed-step RK4.
///
/// This is an independent route to [`generate_channel`] + [`apply_channel`]; the
/// step is shrunk so that an integer number of steps lands exactly on `t`.
pub fn evolve_ode(h: &QuadraticHamiltonian, state: &GaussianState, t: f64, dt: f64) -> Result<GaussianState> {
    if h.n_modes() != state.n_modes() {
        return Err(Error::InvalidDimension(format!(
            "hamiltonian acts on {} modes, state has {}",
            h.n_modes(),
            state.n_modes()
        )));
    }
    let h = h.to_ordering(state.ordering());
    evolve_ode_with(|_| h.clone(), state, t, dt)
}

/// RK4 integration for a time-dependent Hamiltonian `h(t)`.
pub fn evolve_ode_with<F>(h: F, state: &GaussianState, t: f64, dt: f64) -> Result<GaussianState>
where
    F: Fn(f64) -> QuadraticHamiltonian,
{
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::InvalidInput(format!("time step must be positive, got {dt}")));
    }
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::InvalidInput(format!(
            "evolution time must be non-negative, got {t}"
        )));
    }
    let steps = (t / dt).ceil() as usize;
    if steps == 0 {
        return Ok(state.clone());
    }
    let step = t / steps as f64;
    let ordering = state.ordering();
    let n = state.n_modes();

    let rhs = |time: f64, xi: &DVector<f64>, sigma: &DMatrix<f64>| -> Result<(DVector<f64>, DMatrix<f64>)> {
        let ht = h(time);
        if ht.n_modes() != n {
            return Err(Error::InvalidDimension(
                "hamiltonian mode count changed during evolution".into(),
            ));
        }
        let ht = ht.to_ordering(ordering);
        let a = ht.generator();
        let dxi = &a * xi + ht.drift();
        let as_ = &a * sigma;
        let dsigma = &as_ + as_.transpose();
        Ok((dxi, dsigma))
    };

    let mut xi = state.mean().clone();
    let mut sigma = state.cov().clone();
    for k in 0..steps {
        let t0 = k as f64 * step;
        let (k1x, k1s) = rhs(t0, &xi, &sigma)?;
        let (k2x, k2s) = rhs(
            t0 + step / 2.0,
            &(&xi + &k1x * (step / 2.0)),
            &(&sigma + &k1s * (step / 2.0)),
        )?;
        let (k3x, k3s) = rhs(
            t0 + step / 2.0,
            &(&xi + &k2x * (step / 2.0)),
            &(&sigma + &k2s * (step / 2.0)),
        )?;
        let (k4x, k4s) = rhs(t0 + step, &(&xi + &k3x * step), &(&sigma + &k3s * step))?;
        xi += (k1x + k2x * 2.0 + k3x * 2.0 + k4x) * (step / 6.0);
        sigma += (k1s + k2s * 2.0 + k3s * 2.0 + k4s) * (step / 6.0);
    }
    if xi.iter().chain(sigma.iter()).any(|x| !x.is_finite()) {
        return Err(Error::Numeric("ODE integration diverged".into()));
    }
    GaussianState::new(xi, symmetrize(&sigma), ordering)
}
