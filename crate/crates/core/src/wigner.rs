//! Wigner functions sampled on rectangular phase-space grids.
//!
//! Grid coordinates carry units of `√ħ`: a point `(q, p)` corresponds to the
//! dimensionless quadratures `(q, p)/√ħ`, and densities pick up a factor `1/ħ`.
//! All integrals use the composite trapezoid rule; rows are evaluated in parallel
//! and reduced in a fixed order, so results do not depend on thread scheduling.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gaussian::{gaussian_wigner_params, physicality_check, GaussianState};

/// Highest Fock number accepted by [`eval_fock`].
pub const N_MAX_LAGUERRE: usize = 200;
/// Relative size of the imaginary part tolerated by the numerical transform.
pub const TAU_IMAG: f64 = 1e-8;
/// Slack on the `1/(πħ)` bound and on positivity checks.
pub const TAU_GRID: f64 = 1e-6;
/// Boundary-to-peak ratio above which a grid is flagged as too narrow.
pub const BOUNDARY_RATIO: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSpaceGrid {
    pub q_min: f64,
    pub q_max: f64,
    pub p_min: f64,
    pub p_max: f64,
    pub n_q: usize,
    pub n_p: usize,
    pub hbar: f64,
}

impl PhaseSpaceGrid {
    pub fn new(q_range: (f64, f64), p_range: (f64, f64), n_q: usize, n_p: usize, hbar: f64) -> Result<Self> {
        let (q_min, q_max) = q_range;
        let (p_min, p_max) = p_range;
        if [q_min, q_max, p_min, p_max, hbar].iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("grid bounds must be finite".into()));
        }
        if !(q_max > q_min) || !(p_max > p_min) {
            return Err(Error::InvalidInput(format!(
                "grid ranges must be increasing, got q=[{q_min}, {q_max}], p=[{p_min}, {p_max}]"
            )));
        }
        if n_q < 2 || n_p < 2 {
            return Err(Error::InvalidInput(format!(
                "grid needs at least 2x2 points, got {n_q}x{n_p}"
            )));
        }
        if !(hbar > 0.0) {
            return Err(Error::InvalidInput(format!("hbar must be positive, got {hbar}")));
        }
        Ok(Self {
            q_min,
            q_max,
            p_min,
            p_max,
            n_q,
            n_p,
            hbar,
        })
    }

    /// Square grid `[-half_width, half_width]²` centred on `(q0, p0)`.
    pub fn centered(q0: f64, p0: f64, half_width: f64, n: usize, hbar: f64) -> Result<Self> {
        Self::new(
            (q0 - half_width, q0 + half_width),
            (p0 - half_width, p0 + half_width),
            n,
            n,
            hbar,
        )
    }

    pub fn dq(&self) -> f64 {
        (self.q_max - self.q_min) / (self.n_q - 1) as f64
    }

    pub fn dp(&self) -> f64 {
        (self.p_max - self.p_min) / (self.n_p - 1) as f64
    }

    pub fn q(&self, i: usize) -> f64 {
        self.q_min + i as f64 * self.dq()
    }

    pub fn p(&self, j: usize) -> f64 {
        self.p_min + j as f64 * self.dp()
    }

    pub fn q_values(&self) -> Vec<f64> {
        (0..self.n_q).map(|i| self.q(i)).collect()
    }

    pub fn p_values(&self) -> Vec<f64> {
        (0..self.n_p).map(|j| self.p(j)).collect()
    }
}

/// Wigner function values `values[(i, j)] = W(q_i, p_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerGrid {
    pub grid: PhaseSpaceGrid,
    pub values: DMatrix<f64>,
    pub warnings: Vec<String>,
}

impl WignerGrid {
    fn from_rows(grid: PhaseSpaceGrid, rows: Vec<Vec<f64>>) -> Result<Self> {
        let values = DMatrix::from_fn(grid.n_q, grid.n_p, |i, j| rows[i][j]);
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numeric("non-finite Wigner value".into()));
        }
        let mut out = Self {
            grid,
            values,
            warnings: Vec::new(),
        };
        out.check_boundary();
        let bound = 1.0 / (PI * grid.hbar) + TAU_GRID;
        let peak = max_abs(&out.values);
        if peak > bound {
            out.warnings
                .push(format!("max |W| = {peak:e} exceeds the bound 1/(πħ)"));
        }
        Ok(out)
    }

    fn check_boundary(&mut self) {
        let peak = max_abs(&self.values);
        if peak == 0.0 {
            return;
        }
        let (nq, np) = self.values.shape();
        let mut edge: f64 = 0.0;
        for i in 0..nq {
            edge = edge.max(self.values[(i, 0)].abs()).max(self.values[(i, np - 1)].abs());
        }
        for j in 0..np {
            edge = edge.max(self.values[(0, j)].abs()).max(self.values[(nq - 1, j)].abs());
        }
        if edge > BOUNDARY_RATIO * peak {
            self.warnings.push(format!(
                "grid may be too narrow: boundary value {edge:e} is {:.1e} of the peak",
                edge / peak
            ));
        }
    }
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |acc: f64, v| acc.max(v.abs()))
}

fn eval_rows<F>(grid: &PhaseSpaceGrid, f: F) -> Vec<Vec<f64>>
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    (0..grid.n_q)
        .into_par_iter()
        .map(|i| {
            let q = grid.q(i);
            (0..grid.n_p).map(|j| f(q, grid.p(j))).collect()
        })
        .collect()
}

/// Value of a Gaussian Wigner function at a phase-space point of any dimension.
pub fn gaussian_wigner_value(state: &GaussianState, point: &[f64], hbar: f64) -> Result<f64> {
    if point.len() != 2 * state.n_modes() {
        return Err(Error::InvalidDimension(format!(
            "point has {} coordinates, state needs {}",
            point.len(),
            2 * state.n_modes()
        )));
    }
    let params = gaussian_wigner_params(state)?;
    let s = hbar.sqrt();
    let d = DVector::from_iterator(point.len(), point.iter().map(|x| x / s)) - state.mean();
    let quad = (d.transpose() * &params.inverse_cov * &d)[(0, 0)];
    Ok(params.normalization * (-quad).exp() / hbar.powi(state.n_modes() as i32))
}

/// `W(ξ) = exp(-(ξ-ξ₀)ᵀσ⁻¹(ξ-ξ₀)) / (π √det σ)` for a single-mode state.
pub fn eval_gaussian(state: &GaussianState, grid: &PhaseSpaceGrid) -> Result<WignerGrid> {
    if state.n_modes() != 1 {
        return Err(Error::InvalidDimension(format!(
            "grid evaluation needs a single-mode state, got {} modes (reduce it with partial_trace)",
            state.n_modes()
        )));
    }
    let report = physicality_check(state);
    if !report.passed {
        return Err(Error::Unphysical(format!(
            "state violates the uncertainty principle (min eigenvalue of σ + iΩ⁻¹ = {:e})",
            report.min_uncertainty_eigenvalue
        )));
    }
    let st = state.to_ordering(crate::symplectic::Ordering::Pairwise);
    let params = gaussian_wigner_params(&st)?;
    let inv = params.inverse_cov;
    let (a, b, c) = (inv[(0, 0)], inv[(0, 1)], inv[(1, 1)]);
    let (q0, p0) = (st.mean()[0], st.mean()[1]);
    let s = grid.hbar.sqrt();
    let norm = params.normalization / grid.hbar;
    let rows = eval_rows(grid, |q, p| {
        let dq = q / s - q0;
        let dp = p / s - p0;
        norm * (-(a * dq * dq + 2.0 * b * dq * dp + c * dp * dp)).exp()
    });
    WignerGrid::from_rows(*grid, rows)
}

/// `e^{-x/2} Lₙ(x)` by the three-term recurrence, with the exponential folded into
/// the seeds so every intermediate stays bounded by one.
pub fn scaled_laguerre(n: usize, x: f64) -> f64 {
    let w = (-x / 2.0).exp();
    if n == 0 {
        return w;
    }
    let mut prev = w;
    let mut cur = (1.0 - x) * w;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 - x) * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Wigner function of `|n⟩`: `((-1)ⁿ/(πħ)) e^{-2|α|²} Lₙ(4|α|²)` with `|α|² = (q²+p²)/(2ħ)`.
pub fn fock_wigner_value(n: usize, q: f64, p: f64, hbar: f64) -> f64 {
    let x = 2.0 * (q * q + p * p) / hbar;
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    sign * scaled_laguerre(n, x) / (PI * hbar)
}

pub fn eval_fock(n: usize, grid: &PhaseSpaceGrid) -> Result<WignerGrid> {
    if n > N_MAX_LAGUERRE {
        return Err(Error::Range(format!(
            "Fock number {n} exceeds the supported maximum {N_MAX_LAGUERRE}"
        )));
    }
    let hbar = grid.hbar;
    WignerGrid::from_rows(*grid, eval_rows(grid, |q, p| fock_wigner_value(n, q, p, hbar)))
}

/// Wavefunction samples on an evenly spaced grid, normalized on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledWavefunction {
    x_min: f64,
    x_max: f64,
    psi: Vec<Complex64>,
    /// `∫|ψ|² dx` of the samples as supplied.
    input_norm: f64,
}

impl SampledWavefunction {
    pub fn new(x_min: f64, x_max: f64, psi: Vec<Complex64>) -> Result<Self> {
        if psi.len() < 2 || !(x_max > x_min) || !x_min.is_finite() || !x_max.is_finite() {
            return Err(Error::InvalidInput(
                "wavefunction needs at least two samples on an increasing finite range".into(),
            ));
        }
        if psi.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Numeric("non-finite wavefunction sample".into()));
        }
        let dx = (x_max - x_min) / (psi.len() - 1) as f64;
        let input_norm = trapezoid(psi.iter().map(|z| z.norm_sqr()), dx);
        if !(input_norm > 0.0) {
            return Err(Error::InvalidInput("wavefunction has zero norm".into()));
        }
        let scale = 1.0 / input_norm.sqrt();
        Ok(Self {
            x_min,
            x_max,
            psi: psi.into_iter().map(|z| z * scale).collect(),
            input_norm,
        })
    }

    /// Samples `f` at `n_x` evenly spaced points of `[x_min, x_max]`.
    pub fn from_fn<F: Fn(f64) -> Complex64>(x_min: f64, x_max: f64, n_x: usize, f: F) -> Result<Self> {
        if n_x < 2 {
            return Err(Error::InvalidInput("wavefunction needs at least two samples".into()));
        }
        let dx = (x_max - x_min) / (n_x - 1) as f64;
        Self::new(x_min, x_max, (0..n_x).map(|k| f(x_min + k as f64 * dx)).collect())
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn n_x(&self) -> usize {
        self.psi.len()
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.psi.len() - 1) as f64
    }

    pub fn psi(&self) -> &[Complex64] {
        &self.psi
    }

    pub fn input_norm(&self) -> f64 {
        self.input_norm
    }

    /// `|∫|ψ|² dx - 1|` of the stored samples.
    pub fn norm_deviation(&self) -> f64 {
        (trapezoid(self.psi.iter().map(|z| z.norm_sqr()), self.dx()) - 1.0).abs()
    }

    /// Linear interpolation, zero outside the sampled window.
    pub fn at(&self, x: f64) -> Complex64 {
        let t = (x - self.x_min) / self.dx();
        let last = (self.psi.len() - 1) as f64;
        if !(t >= -1e-9) || t > last + 1e-9 {
            return Complex64::new(0.0, 0.0);
        }
        let t = t.clamp(0.0, last);
        let k = (t.floor() as usize).min(self.psi.len() - 2);
        let frac = t - k as f64;
        self.psi[k] * (1.0 - frac) + self.psi[k + 1] * frac
    }
}

/// Harmonic-oscillator eigenfunction `ψₙ(x)` for `m = ω = 1`.
pub fn hermite_function(n: usize, x: f64, hbar: f64) -> f64 {
    let y = x / hbar.sqrt();
    let scale = hbar.powf(-0.25);
    let mut prev = PI.powf(-0.25) * (-y * y / 2.0).exp();
    if n == 0 {
        return scale * prev;
    }
    let mut cur = 2f64.sqrt() * y * prev;
    for k in 1..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * y * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    scale * cur
}

/// `W(q,p) = (1/2πħ) ∫ dx e^{-ipx/ħ} ψ(q+x/2) ψ*(q-x/2)`.
///
/// The `x` integral uses step `2·dx`, so `q ± x/2` falls on sample nodes whenever
/// `q` does. The imaginary part of the result must vanish to [`TAU_IMAG`] relative
/// to the largest value on the grid.
pub fn wigner_from_wavefunction(psi: &SampledWavefunction, grid: &PhaseSpaceGrid) -> Result<WignerGrid> {
    let dx = psi.dx();
    if grid.q_min < psi.x_min() - 1e-12 || grid.q_max > psi.x_max() + 1e-12 {
        return Err(Error::Range(format!(
            "grid q-range [{}, {}] leaves the wavefunction window [{}, {}]",
            grid.q_min,
            grid.q_max,
            psi.x_min(),
            psi.x_max()
        )));
    }
    let hbar = grid.hbar;
    let step = 2.0 * dx;
    let rows: Vec<Vec<Complex64>> = (0..grid.n_q)
        .into_par_iter()
        .map(|i| {
            let q = grid.q(i);
            let reach = 2.0 * (q - psi.x_min()).min(psi.x_max() - q);
            let k_max = ((reach / step) + 1e-9).floor().max(0.0) as i64;
            let samples: Vec<(f64, Complex64)> = (-k_max..=k_max)
                .map(|k| {
                    let x = k as f64 * step;
                    let weight = if k.abs() == k_max && k_max > 0 { 0.5 } else { 1.0 };
                    (x, psi.at(q + x / 2.0) * psi.at(q - x / 2.0).conj() * weight)
                })
                .collect();
            (0..grid.n_p)
                .map(|j| {
                    let p = grid.p(j);
                    let sum: Complex64 = samples
                        .iter()
                        .map(|&(x, f)| f * Complex64::from_polar(1.0, -p * x / hbar))
                        .sum();
                    sum * step / (2.0 * PI * hbar)
                })
                .collect()
        })
        .collect();

    let peak = rows.iter().flatten().map(|z| z.re.abs()).fold(0.0, f64::max);
    let imag = rows.iter().flatten().map(|z| z.im.abs()).fold(0.0, f64::max);
    if imag > TAU_IMAG * peak.max(f64::MIN_POSITIVE) {
        return Err(Error::QuadratureFailure(format!(
            "Wigner transform has imaginary part {imag:e} against peak {peak:e}"
        )));
    }
    let real = rows
        .into_iter()
        .map(|r| r.into_iter().map(|z| z.re).collect())
        .collect();
    let mut out = WignerGrid::from_rows(*grid, real)?;
    if 4.0 * dx > grid.dq().min(grid.dp()) {
        out.warnings.push(format!(
            "wavefunction spacing {dx} is coarser than a quarter of the grid spacing"
        ));
    }
    Ok(out)
}

fn trapezoid<I: Iterator<Item = f64>>(values: I, h: f64) -> f64 {
    let v: Vec<f64> = values.collect();
    let n = v.len();
    if n < 2 {
        return 0.0;
    }
    let inner: f64 = v[1..n - 1].iter().sum();
    h * (inner + 0.5 * (v[0] + v[n - 1]))
}

fn trapezoid_weight(k: usize, n: usize) -> f64 {
    if k == 0 || k == n - 1 {
        0.5
    } else {
        1.0
    }
}

fn integrate_2d<F: Fn(usize, usize) -> f64>(grid: &PhaseSpaceGrid, f: F) -> f64 {
    let mut total = 0.0;
    for i in 0..grid.n_q {
        let wi = trapezoid_weight(i, grid.n_q);
        let mut row = 0.0;
        for j in 0..grid.n_p {
            row += trapezoid_weight(j, grid.n_p) * f(i, j);
        }
        total += wi * row;
    }
    total * grid.dq() * grid.dp()
}

/// `∫∫ W dq dp`.
pub fn integrate(w: &WignerGrid) -> f64 {
    integrate_2d(&w.grid, |i, j| w.values[(i, j)])
}

/// Position distribution `∫ W(q, p) dp` at each grid `q`.
pub fn marginal_q(w: &WignerGrid) -> Vec<f64> {
    let g = &w.grid;
    (0..g.n_q)
        .map(|i| trapezoid((0..g.n_p).map(|j| w.values[(i, j)]), g.dp()))
        .collect()
}

/// Momentum distribution `∫ W(q, p) dq` at each grid `p`.
pub fn marginal_p(w: &WignerGrid) -> Vec<f64> {
    let g = &w.grid;
    (0..g.n_p)
        .map(|j| trapezoid((0..g.n_q).map(|i| w.values[(i, j)]), g.dq()))
        .collect()
}

/// `Tr(ρ₁ρ₂) = 2πħ ∫∫ W₁ W₂`.
pub fn overlap(w1: &WignerGrid, w2: &WignerGrid) -> Result<f64> {
    if w1.grid != w2.grid {
        return Err(Error::GridMismatch(
            "overlap needs both functions on the same grid".into(),
        ));
    }
    let g = &w1.grid;
    Ok(2.0 * PI * g.hbar * integrate_2d(g, |i, j| w1.values[(i, j)] * w2.values[(i, j)]))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WignerSummary {
    /// `∫∫ W`
    pub normalization: f64,
    /// `2πħ ∫∫ W²`
    pub purity_integral: f64,
    pub max_abs: f64,
    pub min_value: f64,
    /// `∫∫ max(-W, 0)`
    pub negativity_volume: f64,
}

pub fn purity_and_bounds(w: &WignerGrid) -> WignerSummary {
    let g = &w.grid;
    WignerSummary {
        normalization: integrate(w),
        purity_integral: 2.0 * PI * g.hbar * integrate_2d(g, |i, j| w.values[(i, j)].powi(2)),
        max_abs: max_abs(&w.values),
        min_value: w.values.iter().copied().fold(f64::INFINITY, f64::min),
        negativity_volume: integrate_2d(g, |i, j| (-w.values[(i, j)]).max(0.0)),
    }
}

/// Mean and covariance (vacuum = identity) of the dimensionless quadratures,
/// computed by quadrature over the grid.
pub fn grid_moments(w: &WignerGrid) -> (DVector<f64>, DMatrix<f64>) {
    let g = &w.grid;
    let s = g.hbar.sqrt();
    let m = |f: &dyn Fn(f64, f64) -> f64| integrate_2d(g, |i, j| f(g.q(i) / s, g.p(j) / s) * w.values[(i, j)]);
    let norm = integrate(w);
    let mq = m(&|q, _| q) / norm;
    let mp = m(&|_, p| p) / norm;
    let qq = m(&|q, _| q * q) / norm - mq * mq;
    let pp = m(&|_, p| p * p) / norm - mp * mp;
    let qp = m(&|q, p| q * p) / norm - mq * mp;
    (
        DVector::from_vec(vec![mq, mp]),
        DMatrix::from_row_slice(2, 2, &[2.0 * qq, 2.0 * qp, 2.0 * qp, 2.0 * pp]),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{coherent, squeezed_vacuum, thermal, vacuum};
    use crate::symplectic::Ordering;

    fn grid(half: f64, n: usize) -> PhaseSpaceGrid {
        PhaseSpaceGrid::centered(0.0, 0.0, half, n, 1.0).unwrap()
    }

    #[test]
    fn grid_validation() {
        assert!(PhaseSpaceGrid::new((1.0, 0.0), (0.0, 1.0), 3, 3, 1.0).is_err());
        assert!(PhaseSpaceGrid::new((0.0, 1.0), (0.0, 1.0), 1, 3, 1.0).is_err());
        assert!(PhaseSpaceGrid::new((0.0, 1.0), (0.0, 1.0), 3, 3, 0.0).is_err());
        let g = PhaseSpaceGrid::new((-1.0, 1.0), (0.0, 2.0), 5, 3, 1.0).unwrap();
        assert_eq!(g.q_values(), vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
        assert_eq!(g.p_values(), vec![0.0, 1.0, 2.0]);
    }

    #[test]
    fn gaussian_point_values() {
        let g = grid(1.0, 3);
        let w = eval_gaussian(&vacuum(1).unwrap(), &g).unwrap();
        assert!((w.values[(1, 1)] - 1.0 / PI).abs() < 1e-15);
        let th = eval_gaussian(&thermal(2.0).unwrap(), &g).unwrap();
        assert!((th.values[(1, 1)] - 1.0 / (2.0 * PI)).abs() < 1e-15);

        let lam = Complex64::new(0.5, -0.25);
        let (q0, p0) = (2f64.sqrt() * lam.re, 2f64.sqrt() * lam.im);
        let gc = PhaseSpaceGrid::centered(q0, p0, 1.0, 3, 1.0).unwrap();
        let w = eval_gaussian(&coherent(&[lam]).unwrap(), &gc).unwrap();
        assert!((w.values[(1, 1)] - 1.0 / PI).abs() < 1e-15);
        assert!(w.values.iter().all(|&v| v <= w.values[(1, 1)]));
    }

    #[test]
    fn gaussian_hbar_scaling() {
        let hbar = 0.3;
        let g = PhaseSpaceGrid::centered(0.0, 0.0, 1.0, 3, hbar).unwrap();
        let w = eval_gaussian(&vacuum(1).unwrap(), &g).unwrap();
        assert!((w.values[(1, 1)] - 1.0 / (PI * hbar)).abs() < 1e-14);
        // at q = 1: exp(-q²/ħ)/(πħ)
        assert!((w.values[(2, 1)] - (-1.0 / hbar).exp() / (PI * hbar)).abs() < 1e-14);
    }

    #[test]
    fn gaussian_rejects_multimode_and_unphysical() {
        let g = grid(1.0, 3);
        assert!(matches!(
            eval_gaussian(&vacuum(2).unwrap(), &g),
            Err(Error::InvalidDimension(_))
        ));
        let bad = GaussianState::new(DVector::zeros(2), DMatrix::identity(2, 2) * 0.5, Ordering::Pairwise).unwrap();
        assert!(matches!(eval_gaussian(&bad, &g), Err(Error::Unphysical(_))));
    }

    #[test]
    fn two_mode_point_value() {
        let v = gaussian_wigner_value(&vacuum(2).unwrap(), &[0.0; 4], 1.0).unwrap();
        assert!((v - 1.0 / (PI * PI)).abs() < 1e-15);
    }

    #[test]
    fn fock_zero_equals_vacuum() {
        let g = grid(5.0, 101);
        let a = eval_fock(0, &g).unwrap();
        let b = eval_gaussian(&vacuum(1).unwrap(), &g).unwrap();
        let diff = a
            .values
            .iter()
            .zip(b.values.iter())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        assert!(diff <= 1e-12);
    }

    #[test]
    fn fock_one_at_origin_and_laguerre() {
        assert!((fock_wigner_value(1, 0.0, 0.0, 1.0) + 1.0 / PI).abs() < 1e-15);
        // L₂(x) = 1 - 2x + x²/2, L₃(x) = 1 - 3x + 3x²/2 - x³/6
        for &x in &[0.0, 0.3, 2.0, 7.5] {
            let e = (-x / 2.0f64).exp();
            assert!((scaled_laguerre(2, x) - e * (1.0 - 2.0 * x + x * x / 2.0)).abs() < 1e-14);
            let l3 = 1.0 - 3.0 * x + 1.5 * x * x - x * x * x / 6.0;
            assert!((scaled_laguerre(3, x) - e * l3).abs() < 1e-13);
        }
        // the scaled values never exceed one, even far out
        for &x in &[10.0, 300.0, 800.0, 2000.0] {
            assert!(scaled_laguerre(200, x).abs() <= 1.0);
        }
        assert!(matches!(eval_fock(201, &grid(1.0, 3)), Err(Error::Range(_))));
    }

    #[test]
    fn fock_normalization_and_negativity() {
        for n in 0..=5 {
            let sd = (n as f64 + 0.5).sqrt();
            let w = eval_fock(n, &grid(6.0 * sd, 301)).unwrap();
            let s = purity_and_bounds(&w);
            assert!((s.normalization - 1.0).abs() < 1e-6, "n={n}: {}", s.normalization);
            assert!((s.purity_integral - 1.0).abs() < 1e-6);
            assert!(s.max_abs <= 1.0 / PI + TAU_GRID);
            if n >= 1 {
                assert!(s.min_value < 0.0 && s.negativity_volume > 0.0);
            } else {
                assert!(s.negativity_volume == 0.0);
            }
        }
    }

    #[test]
    fn marginals() {
        let g = grid(6.0, 241);
        let w = eval_gaussian(&vacuum(1).unwrap(), &g).unwrap();
        let mq = marginal_q(&w);
        for (i, &v) in mq.iter().enumerate() {
            let q = g.q(i);
            assert!((v - (-q * q).exp() / PI.sqrt()).abs() < 1e-10);
        }
        let f1 = eval_fock(1, &g).unwrap();
        for (i, &v) in marginal_q(&f1).iter().enumerate() {
            assert!((v - hermite_function(1, g.q(i), 1.0).powi(2)).abs() < 1e-10);
            assert!(v >= -TAU_GRID);
        }
        let total = trapezoid(marginal_p(&f1).into_iter(), g.dp());
        assert!((total - integrate(&f1)).abs() < 1e-12);
    }

    #[test]
    fn overlaps() {
        let g = grid(8.0, 301);
        let f0 = eval_fock(0, &g).unwrap();
        let f1 = eval_fock(1, &g).unwrap();
        assert!((overlap(&f0, &f0).unwrap() - 1.0).abs() < 1e-6);
        assert!(overlap(&f0, &f1).unwrap().abs() < 1e-6);

        let beta = Complex64::new(0.8, 0.6);
        let cb = eval_gaussian(&coherent(&[beta]).unwrap(), &g).unwrap();
        assert!((overlap(&f0, &cb).unwrap() - (-beta.norm_sqr()).exp()).abs() < 1e-6);

        let other = eval_fock(0, &grid(7.0, 301)).unwrap();
        assert!(matches!(overlap(&f0, &other), Err(Error::GridMismatch(_))));
    }

    #[test]
    fn squeezed_state_stays_positive_with_unit_purity() {
        let w = eval_gaussian(&squeezed_vacuum(0.5, 0.7).unwrap(), &grid(9.0, 301)).unwrap();
        let s = purity_and_bounds(&w);
        assert!(s.min_value >= -TAU_GRID);
        assert!((s.purity_integral - 1.0).abs() < 1e-6);
    }

    #[test]
    fn narrow_grid_warns() {
        let w = eval_fock(0, &grid(1.0, 21)).unwrap();
        assert!(!w.warnings.is_empty());
    }

    #[test]
    fn moments_from_grid() {
        let lam = Complex64::new(0.3, -0.4);
        let st = coherent(&[lam]).unwrap();
        let g = PhaseSpaceGrid::centered(st.mean()[0], st.mean()[1], 7.0, 281, 1.0).unwrap();
        let (mean, cov) = grid_moments(&eval_gaussian(&st, &g).unwrap());
        assert!((mean[0] - st.mean()[0]).abs() < 1e-9 && (mean[1] - st.mean()[1]).abs() < 1e-9);
        assert!((&cov - DMatrix::identity(2, 2)).abs().max() < 1e-9);
    }

    #[test]
    fn hermite_functions_orthonormal() {
        let h = 0.01;
        let xs: Vec<f64> = (0..=2000).map(|k| -10.0 + k as f64 * h).collect();
        for m in 0..4 {
            for n in 0..4 {
                let v = trapezoid(
                    xs.iter()
                        .map(|&x| hermite_function(m, x, 1.0) * hermite_function(n, x, 1.0)),
                    h,
                );
                let expect = if m == n { 1.0 } else { 0.0 };
                assert!((v - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn wavefunction_transform_ground_and_coherent() {
        let psi = SampledWavefunction::from_fn(-10.0, 10.0, 4001, |x| Complex64::new(hermite_function(0, x, 1.0), 0.0))
            .unwrap();
        assert!(psi.norm_deviation() < 1e-12);
        let g = PhaseSpaceGrid::new((-4.0, 4.0), (-4.0, 4.0), 33, 33, 1.0).unwrap();
        let num = wigner_from_wavefunction(&psi, &g).unwrap();
        let exact = eval_fock(0, &g).unwrap();
        assert!((&num.values - &exact.values).abs().max() < 1e-6);

        // displaced ground state: ψ(x) = ψ₀(x - q₀) e^{i p₀ x}
        let (q0, p0) = (0.7, -0.4);
        let psi = SampledWavefunction::from_fn(-10.0, 10.0, 4001, |x| {
            Complex64::from_polar(hermite_function(0, x - q0, 1.0), p0 * x)
        })
        .unwrap();
        let num = wigner_from_wavefunction(&psi, &g).unwrap();
        let lam = Complex64::new(q0, p0) / 2f64.sqrt();
        let exact = eval_gaussian(&coherent(&[lam]).unwrap(), &g).unwrap();
        assert!((&num.values - &exact.values).abs().max() < 1e-6);
    }

    #[test]
    fn wavefunction_window_checked() {
        let psi = SampledWavefunction::from_fn(-2.0, 2.0, 101, |x| Complex64::new((-x * x).exp(), 0.0)).unwrap();
        assert!(matches!(
            wigner_from_wavefunction(&psi, &grid(3.0, 5)),
            Err(Error::Range(_))
        ));
        assert!(SampledWavefunction::new(0.0, 1.0, vec![Complex64::new(0.0, 0.0); 4]).is_err());
    }
}
