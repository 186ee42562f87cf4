//! Python bindings for `phasespace`.
//!
//! Matrices cross the boundary as nested lists of floats; any sequence of
//! sequences (including NumPy arrays) is accepted on input. Library errors are
//! raised as `ValueError`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use phasespace::dynamics::{single_mode_squeezer as sm_squeezer, two_mode_squeezer as tm_squeezer};
use phasespace::wigner::{fock_wigner_value, purity_and_bounds};
use phasespace::williamson::CoupledOscillators;
use phasespace::{
    apply_channel, entanglement_entropy, eval_fock, eval_gaussian, generate_channel, ladder_to_quadrature,
    normal_mode_ground_state, partial_trace, physicality_check, tensor, von_neumann_entropy, williamson_decompose,
    LogBase, Ordering, PhaseSpaceGrid, QuadraticHamiltonian, SymplecticForm, WignerGrid,
};

fn err(e: phasespace::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn ordering(tag: &str) -> PyResult<Ordering> {
    tag.parse::<Ordering>().map_err(err)
}

fn base(tag: &str) -> PyResult<LogBase> {
    tag.parse::<LogBase>().map_err(err)
}

fn to_matrix(rows: Vec<Vec<f64>>) -> PyResult<DMatrix<f64>> {
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != m) {
        return Err(PyValueError::new_err("matrix rows have different lengths"));
    }
    Ok(DMatrix::from_fn(n, m, |i, j| rows[i][j]))
}

fn rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

fn grid(q_range: (f64, f64), p_range: (f64, f64), nq: usize, np: usize, hbar: f64) -> PyResult<PhaseSpaceGrid> {
    PhaseSpaceGrid::new(q_range, p_range, nq, np, hbar).map_err(err)
}

fn grid_dict<'py>(py: Python<'py>, w: &WignerGrid) -> PyResult<Bound<'py, PyDict>> {
    let s = purity_and_bounds(w);
    let d = PyDict::new(py);
    d.set_item("q", w.grid.q_values())?;
    d.set_item("p", w.grid.p_values())?;
    d.set_item("w", rows(&w.values))?;
    d.set_item("normalization", s.normalization)?;
    d.set_item("purity_integral", s.purity_integral)?;
    d.set_item("min", s.min_value)?;
    d.set_item("max_abs", s.max_abs)?;
    d.set_item("negativity_volume", s.negativity_volume)?;
    d.set_item("warnings", w.warnings.clone())?;
    Ok(d)
}

/// Gaussian state given by a mean vector and a covariance matrix (vacuum = identity).
#[pyclass(name = "GaussianState", module = "phasespace", frozen)]
struct PyGaussianState {
    inner: phasespace::GaussianState,
}

impl From<phasespace::GaussianState> for PyGaussianState {
    fn from(inner: phasespace::GaussianState) -> Self {
        Self { inner }
    }
}

#[pymethods]
impl PyGaussianState {
    #[new]
    #[pyo3(signature = (mean, cov, ordering = "qpqp"))]
    fn new(mean: Vec<f64>, cov: Vec<Vec<f64>>, ordering: &str) -> PyResult<Self> {
        let st = phasespace::GaussianState::new(DVector::from_vec(mean), to_matrix(cov)?, self::ordering(ordering)?)
            .map_err(err)?;
        Ok(st.into())
    }

    #[getter]
    fn n_modes(&self) -> usize {
        self.inner.n_modes()
    }

    #[getter]
    fn ordering(&self) -> &'static str {
        self.inner.ordering().tag()
    }

    #[getter]
    fn mean(&self) -> Vec<f64> {
        self.inner.mean().iter().copied().collect()
    }

    #[getter]
    fn cov(&self) -> Vec<Vec<f64>> {
        rows(self.inner.cov())
    }

    fn to_ordering(&self, ordering: &str) -> PyResult<Self> {
        Ok(self.inner.to_ordering(self::ordering(ordering)?).into())
    }

    fn symplectic_spectrum(&self) -> PyResult<Vec<f64>> {
        self.inner.symplectic_spectrum().map_err(err)
    }

    fn purity(&self) -> PyResult<f64> {
        Ok(self.inner.purity().map_err(err)?.purity)
    }

    fn is_physical(&self) -> bool {
        physicality_check(&self.inner).passed
    }

    fn partial_trace(&self, keep: Vec<usize>) -> PyResult<Self> {
        Ok(partial_trace(&self.inner, &keep).map_err(err)?.into())
    }

    fn tensor(&self, other: &PyGaussianState) -> PyResult<Self> {
        Ok(tensor(&self.inner, &other.inner).map_err(err)?.into())
    }

    #[pyo3(signature = (base = "e"))]
    fn entropy(&self, base: &str) -> PyResult<f64> {
        Ok(von_neumann_entropy(&self.inner, self::base(base)?).map_err(err)?.total)
    }

    #[pyo3(signature = (partition, base = "e"))]
    fn entanglement_entropy(&self, partition: Vec<usize>, base: &str) -> PyResult<f64> {
        Ok(entanglement_entropy(&self.inner, &partition, self::base(base)?)
            .map_err(err)?
            .total)
    }

    /// Evolves under `H = ξᵀF̄ξ + ξᵀα` for time `t`; `f_bar` uses this state's ordering.
    #[pyo3(signature = (f_bar, alpha = None, t = 1.0))]
    fn evolve(&self, f_bar: Vec<Vec<f64>>, alpha: Option<Vec<f64>>, t: f64) -> PyResult<Self> {
        let f = to_matrix(f_bar)?;
        let alpha = alpha.map_or_else(|| DVector::zeros(f.nrows()), DVector::from_vec);
        let h = QuadraticHamiltonian::new(f, alpha, self.inner.ordering()).map_err(err)?;
        let ch = generate_channel(&h, t).map_err(err)?;
        Ok(apply_channel(&ch, &self.inner).map_err(err)?.into())
    }

    fn williamson<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        williamson_dict(py, self.inner.cov(), &self.inner.symplectic_form())
    }

    /// Single-mode Wigner function on a grid, as a dict with `q`, `p`, `w` and summary values.
    #[pyo3(signature = (q_range = (-6.0, 6.0), p_range = (-6.0, 6.0), nq = 201, np = 201, hbar = 1.0))]
    fn wigner<'py>(
        &self,
        py: Python<'py>,
        q_range: (f64, f64),
        p_range: (f64, f64),
        nq: usize,
        np: usize,
        hbar: f64,
    ) -> PyResult<Bound<'py, PyDict>> {
        let w = eval_gaussian(&self.inner, &grid(q_range, p_range, nq, np, hbar)?).map_err(err)?;
        grid_dict(py, &w)
    }

    fn __repr__(&self) -> String {
        format!(
            "GaussianState(n_modes={}, ordering='{}')",
            self.inner.n_modes(),
            self.inner.ordering().tag()
        )
    }
}

fn williamson_dict<'py>(py: Python<'py>, f: &DMatrix<f64>, form: &SymplecticForm) -> PyResult<Bound<'py, PyDict>> {
    let dec = williamson_decompose(f, form).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("nu", dec.nu.clone())?;
    d.set_item("sigma", rows(dec.sigma_matrix.matrix()))?;
    d.set_item("diag_form", rows(&dec.diag_form))?;
    d.set_item("residual", dec.residual)?;
    d.set_item("warnings", dec.warnings.clone())?;
    Ok(d)
}

#[pyfunction]
#[pyo3(signature = (n_modes = 1))]
fn vacuum(n_modes: usize) -> PyResult<PyGaussianState> {
    Ok(phasespace::vacuum(n_modes).map_err(err)?.into())
}

#[pyfunction]
fn thermal(nu: f64) -> PyResult<PyGaussianState> {
    Ok(phasespace::thermal(nu).map_err(err)?.into())
}

#[pyfunction]
fn coherent(alpha: Vec<Complex64>) -> PyResult<PyGaussianState> {
    Ok(phasespace::coherent(&alpha).map_err(err)?.into())
}

#[pyfunction]
#[pyo3(signature = (r, theta = 0.0))]
fn squeezed_vacuum(r: f64, theta: f64) -> PyResult<PyGaussianState> {
    Ok(phasespace::squeezed_vacuum(r, theta).map_err(err)?.into())
}

#[pyfunction]
#[pyo3(signature = (r, theta = 0.0))]
fn two_mode_squeezed_vacuum(r: f64, theta: f64) -> PyResult<PyGaussianState> {
    Ok(phasespace::two_mode_squeezed_vacuum(r, theta).map_err(err)?.into())
}

/// `F̄` (pairwise order) of the single-mode squeezer; evolving for `t = 1` applies `S(r e^{iθ})`.
#[pyfunction]
#[pyo3(signature = (r, theta = 0.0))]
fn single_mode_squeezer(r: f64, theta: f64) -> PyResult<Vec<Vec<f64>>> {
    Ok(rows(ladder_to_quadrature(&sm_squeezer(r, theta)).map_err(err)?.f_bar()))
}

/// `F̄` (pairwise order) of the two-mode squeezer.
#[pyfunction]
#[pyo3(signature = (r, theta = 0.0))]
fn two_mode_squeezer(r: f64, theta: f64) -> PyResult<Vec<Vec<f64>>> {
    Ok(rows(ladder_to_quadrature(&tm_squeezer(r, theta)).map_err(err)?.f_bar()))
}

#[pyfunction]
#[pyo3(signature = (f, ordering = "qpqp"))]
fn symplectic_spectrum(f: Vec<Vec<f64>>, ordering: &str) -> PyResult<Vec<f64>> {
    let f = to_matrix(f)?;
    let form = SymplecticForm::new(f.nrows() / 2, self::ordering(ordering)?).map_err(err)?;
    phasespace::symplectic_spectrum(&f, &form).map_err(err)
}

/// Williamson decomposition of a symmetric positive-definite matrix.
#[pyfunction]
#[pyo3(signature = (f, ordering = "qpqp"))]
fn williamson<'py>(py: Python<'py>, f: Vec<Vec<f64>>, ordering: &str) -> PyResult<Bound<'py, PyDict>> {
    let f = to_matrix(f)?;
    let form = SymplecticForm::new(f.nrows() / 2, self::ordering(ordering)?).map_err(err)?;
    williamson_dict(py, &f, &form)
}

/// Wigner function of the Fock state `|n⟩` on a grid.
#[pyfunction]
#[pyo3(signature = (n, q_range = (-6.0, 6.0), p_range = (-6.0, 6.0), nq = 201, np = 201, hbar = 1.0))]
fn fock_wigner<'py>(
    py: Python<'py>,
    n: usize,
    q_range: (f64, f64),
    p_range: (f64, f64),
    nq: usize,
    np: usize,
    hbar: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let w = eval_fock(n, &grid(q_range, p_range, nq, np, hbar)?).map_err(err)?;
    grid_dict(py, &w)
}

/// `W_n(q, p)` at a single point.
#[pyfunction]
#[pyo3(signature = (n, q, p, hbar = 1.0))]
fn fock_wigner_at(n: usize, q: f64, p: f64, hbar: f64) -> f64 {
    fock_wigner_value(n, q, p, hbar)
}

/// Ground state of two oscillators coupled by `λ(q₁ - q₂)²`.
#[pyfunction]
#[pyo3(signature = (lam, m = 1.0, omega = 1.0, base = "e"))]
fn coupled_oscillators<'py>(py: Python<'py>, lam: f64, m: f64, omega: f64, base: &str) -> PyResult<Bound<'py, PyDict>> {
    let sys = CoupledOscillators::new(m, omega, lam).map_err(err)?;
    let h = sys.hamiltonian();
    let gs = normal_mode_ground_state(&h).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("alpha", sys.alpha().map_err(err)?)?;
    d.set_item("normal_frequencies", sys.normal_frequencies().map_err(err)?.to_vec())?;
    let form = SymplecticForm::new(2, Ordering::Pairwise).map_err(err)?;
    d.set_item(
        "symplectic_eigenvalues",
        phasespace::symplectic_spectrum(h.f_bar(), &form).map_err(err)?,
    )?;
    d.set_item("reduced_nu", sys.reduced_nu().map_err(err)?)?;
    d.set_item(
        "entanglement_entropy",
        entanglement_entropy(&gs, &[0], self::base(base)?).map_err(err)?.total,
    )?;
    d.set_item("ground_state", Py::new(py, PyGaussianState::from(gs))?)?;
    Ok(d)
}

#[pymodule]
#[pyo3(name = "phasespace")]
fn phasespace_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGaussianState>()?;
    m.add_function(wrap_pyfunction!(vacuum, m)?)?;
    m.add_function(wrap_pyfunction!(thermal, m)?)?;
    m.add_function(wrap_pyfunction!(coherent, m)?)?;
    m.add_function(wrap_pyfunction!(squeezed_vacuum, m)?)?;
    m.add_function(wrap_pyfunction!(two_mode_squeezed_vacuum, m)?)?;
    m.add_function(wrap_pyfunction!(single_mode_squeezer, m)?)?;
    m.add_function(wrap_pyfunction!(two_mode_squeezer, m)?)?;
    m.add_function(wrap_pyfunction!(symplectic_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(williamson, m)?)?;
    m.add_function(wrap_pyfunction!(fock_wigner, m)?)?;
    m.add_function(wrap_pyfunction!(fock_wigner_at, m)?)?;
    m.add_function(wrap_pyfunction!(coupled_oscillators, m)?)?;
    Ok(())
}
