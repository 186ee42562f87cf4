//! Phase-space orderings, the symplectic form and symplecticity checks.
//!
//! Two quadrature orderings are supported. `Pairwise` is `(q1, p1, ..., qn, pn)`
//! and is the storage default everywhere; `Blockwise` is `(q1, ..., qn, p1, ..., pn)`
//! and appears only at conversion boundaries (ladder-operator Hamiltonians).
//!
//! For one mode the symplectic form is `Ω = [[0, -1], [1, 0]]` and
//! `Ω⁻¹ = -Ω = Ωᵀ`, so that `[Θ^α, Θ^β] = i (Ω⁻¹)^{αβ}`.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::max_abs_diff;

/// Default tolerance for `S Ω⁻¹ Sᵀ = Ω⁻¹`, in units where the vacuum covariance is `I`.
pub const TAU_SYMPLECTIC: f64 = 1e-10;

/// Quadrature ordering of a phase-space vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Ordering {
    /// `(q1, p1, q2, p2, ...)`
    #[default]
    Pairwise,
    /// `(q1, q2, ..., p1, p2, ...)`
    Blockwise,
}

impl Ordering {
    /// Short tag used in state files: `qpqp` or `qqpp`.
    pub fn tag(self) -> &'static str {
        match self {
            Ordering::Pairwise => "qpqp",
            Ordering::Blockwise => "qqpp",
        }
    }
}

impl fmt::Display for Ordering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Ordering {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "qpqp" | "pairwise" => Ok(Ordering::Pairwise),
            "qqpp" | "blockwise" => Ok(Ordering::Blockwise),
            other => Err(Error::InvalidInput(format!(
                "unknown ordering {other:?} (expected \"qpqp\" or \"qqpp\")"
            ))),
        }
    }
}

/// Symplectic form `Ω` and its inverse for `n_modes` modes in a given ordering.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticForm {
    n_modes: usize,
    ordering: Ordering,
    omega: DMatrix<f64>,
    omega_inv: DMatrix<f64>,
}

impl SymplecticForm {
    pub fn new(n_modes: usize, ordering: Ordering) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::InvalidDimension("number of modes must be at least 1".into()));
        }
        let dim = 2 * n_modes;
        let mut omega = DMatrix::zeros(dim, dim);
        for k in 0..n_modes {
            let (q, p) = quadrature_indices(k, n_modes, ordering);
            omega[(q, p)] = -1.0;
            omega[(p, q)] = 1.0;
        }
        let omega_inv = -&omega;
        Ok(Self {
            n_modes,
            ordering,
            omega,
            omega_inv,
        })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn dim(&self) -> usize {
        2 * self.n_modes
    }

    pub fn ordering(&self) -> Ordering {
        self.ordering
    }

    /// `Ω`
    pub fn omega(&self) -> &DMatrix<f64> {
        &self.omega
    }

    /// `Ω⁻¹`
    pub fn omega_inv(&self) -> &DMatrix<f64> {
        &self.omega_inv
    }
}

/// Builds the symplectic form for `n_modes` modes.
pub fn make_symplectic_form(n_modes: usize, ordering: Ordering) -> Result<SymplecticForm> {
    SymplecticForm::new(n_modes, ordering)
}

/// Positions of `q_k` and `p_k` in a vector of the given ordering.
pub fn quadrature_indices(mode: usize, n_modes: usize, ordering: Ordering) -> (usize, usize) {
    match ordering {
        Ordering::Pairwise => (2 * mode, 2 * mode + 1),
        Ordering::Blockwise => (mode, n_modes + mode),
    }
}

/// Outcome of a symplecticity test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymplecticCheck {
    pub is_symplectic: bool,
    /// `max |M Ω⁻¹ Mᵀ - Ω⁻¹|`
    pub residual: f64,
}

/// Tests `M Ω⁻¹ Mᵀ = Ω⁻¹` entrywise to `tol`.
pub fn check_symplectic(m: &DMatrix<f64>, form: &SymplecticForm, tol: f64) -> Result<SymplecticCheck> {
    let dim = form.dim();
    if m.shape() != (dim, dim) {
        return Err(Error::InvalidDimension(format!(
            "expected a {dim}x{dim} matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let residual = max_abs_diff(&(m * form.omega_inv() * m.transpose()), form.omega_inv());
    Ok(SymplecticCheck {
        is_symplectic: residual <= tol,
        residual,
    })
}

/// A matrix known to preserve the symplectic form.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticMatrix {
    ordering: Ordering,
    s: DMatrix<f64>,
}

impl SymplecticMatrix {
    /// Wraps `s` after checking symplecticity at `tol`.
    pub fn new(s: DMatrix<f64>, ordering: Ordering, tol: f64) -> Result<Self> {
        if s.nrows() % 2 != 0 || !s.is_square() || s.nrows() == 0 {
            return Err(Error::InvalidDimension(format!(
                "symplectic matrix must be square with even size, got {}x{}",
                s.nrows(),
                s.ncols()
            )));
        }
        let form = SymplecticForm::new(s.nrows() / 2, ordering)?;
        let check = check_symplectic(&s, &form, tol)?;
        if !check.is_symplectic {
            return Err(Error::Numeric(format!(
                "matrix is not symplectic (residual {:e} > {tol:e})",
                check.residual
            )));
        }
        Ok(Self { ordering, s })
    }

    pub fn identity(n_modes: usize, ordering: Ordering) -> Self {
        Self {
            ordering,
            s: DMatrix::identity(2 * n_modes, 2 * n_modes),
        }
    }

    pub fn n_modes(&self) -> usize {
        self.s.nrows() / 2
    }

    pub fn ordering(&self) -> Ordering {
        self.ordering
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.s
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.s
    }

    /// Residual of `S Ω⁻¹ Sᵀ = Ω⁻¹`.
    pub fn residual(&self) -> f64 {
        let form = SymplecticForm::new(self.n_modes(), self.ordering).expect("n_modes >= 1");
        check_symplectic(&self.s, &form, 0.0)
            .expect("dimensions match")
            .residual
    }

    /// Same transformation expressed in another ordering.
    pub fn reordered(&self, to: Ordering) -> Self {
        Self {
            ordering: to,
            s: reorder_matrix(&self.s, self.ordering, to).expect("even dimension"),
        }
    }
}

/// `perm[i]` is the index in `from` ordering of entry `i` in `to` ordering.
fn permutation(n_modes: usize, from: Ordering, to: Ordering) -> Vec<usize> {
    let mut perm = vec![0; 2 * n_modes];
    for k in 0..n_modes {
        let (qf, pf) = quadrature_indices(k, n_modes, from);
        let (qt, pt) = quadrature_indices(k, n_modes, to);
        perm[qt] = qf;
        perm[pt] = pf;
    }
    perm
}

fn check_even(len: usize) -> Result<usize> {
    if len == 0 || len % 2 != 0 {
        return Err(Error::InvalidDimension(format!(
            "phase-space dimension must be even and positive, got {len}"
        )));
    }
    Ok(len / 2)
}

/// Permutes a phase-space vector between orderings.
pub fn reorder_vector(v: &DVector<f64>, from: Ordering, to: Ordering) -> Result<DVector<f64>> {
    let n = check_even(v.len())?;
    let perm = permutation(n, from, to);
    Ok(DVector::from_iterator(v.len(), perm.iter().map(|&i| v[i])))
}

/// Permutes rows and columns of a phase-space matrix between orderings.
pub fn reorder_matrix(m: &DMatrix<f64>, from: Ordering, to: Ordering) -> Result<DMatrix<f64>> {
    if !m.is_square() {
        return Err(Error::InvalidDimension(format!(
            "expected a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let n = check_even(m.nrows())?;
    let perm = permutation(n, from, to);
    let dim = m.nrows();
    Ok(DMatrix::from_fn(dim, dim, |i, j| m[(perm[i], perm[j])]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn single_mode_form() {
        let f = make_symplectic_form(1, Ordering::Pairwise).unwrap();
        assert_eq!(f.omega(), &DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]));
        assert_eq!(f.omega_inv(), &DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]));
        let b = make_symplectic_form(1, Ordering::Blockwise).unwrap();
        assert_eq!(f.omega(), b.omega());
    }

    #[test]
    fn two_mode_pairwise_is_direct_sum() {
        let f = make_symplectic_form(2, Ordering::Pairwise).unwrap();
        let block = DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        assert_eq!(f.omega(), &crate::linalg::direct_sum(&block, &block));
    }

    #[test]
    fn two_mode_blockwise_layout() {
        let f = make_symplectic_form(2, Ordering::Blockwise).unwrap();
        #[rustfmt::skip]
        let expect = DMatrix::from_row_slice(4, 4, &[
            0.0, 0.0, 1.0, 0.0,
            0.0, 0.0, 0.0, 1.0,
            -1.0, 0.0, 0.0, 0.0,
            0.0, -1.0, 0.0, 0.0,
        ]);
        assert_eq!(f.omega_inv(), &expect);
    }

    #[test]
    fn zero_modes_rejected() {
        assert!(matches!(
            make_symplectic_form(0, Ordering::Pairwise),
            Err(Error::InvalidDimension(_))
        ));
    }

    #[test]
    fn form_identities_up_to_six_modes() {
        for n in 1..=6 {
            for ord in [Ordering::Pairwise, Ordering::Blockwise] {
                let f = make_symplectic_form(n, ord).unwrap();
                let w = f.omega();
                let id = DMatrix::<f64>::identity(2 * n, 2 * n);
                assert_eq!(w.transpose(), -w.clone());
                assert_eq!(w * w, -id.clone());
                assert_eq!(f.omega_inv() * w * w, w.clone());
                assert_eq!(f.omega_inv() * w, id);
            }
        }
    }

    #[test]
    fn check_symplectic_examples() {
        let f = make_symplectic_form(1, Ordering::Pairwise).unwrap();
        let id = check_symplectic(&DMatrix::identity(2, 2), &f, TAU_SYMPLECTIC).unwrap();
        assert!(id.is_symplectic);
        assert_eq!(id.residual, 0.0);

        let r = 0.5f64;
        let sq = DMatrix::from_row_slice(2, 2, &[(-r).exp(), 0.0, 0.0, r.exp()]);
        let c = check_symplectic(&sq, &f, TAU_SYMPLECTIC).unwrap();
        assert!(c.is_symplectic, "residual {}", c.residual);

        // diag(2,1): M Ω⁻¹ Mᵀ = 2 Ω⁻¹, residual 1
        let bad = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 1.0]);
        let c = check_symplectic(&bad, &f, TAU_SYMPLECTIC).unwrap();
        assert!(!c.is_symplectic);
        assert_eq!(c.residual, 1.0);

        assert!(matches!(
            check_symplectic(&DMatrix::identity(4, 4), &f, 1e-10),
            Err(Error::InvalidDimension(_))
        ));
    }

    #[test]
    fn reorder_vector_example() {
        let v = DVector::from_vec(vec![1.0, 2.0, 3.0, 4.0]); // q1 q2 p1 p2
        let w = reorder_vector(&v, Ordering::Blockwise, Ordering::Pairwise).unwrap();
        assert_eq!(w.as_slice(), &[1.0, 3.0, 2.0, 4.0]);
        assert!(matches!(
            reorder_vector(
                &DVector::from_vec(vec![1.0, 2.0, 3.0]),
                Ordering::Blockwise,
                Ordering::Pairwise
            ),
            Err(Error::InvalidDimension(_))
        ));
    }

    #[test]
    fn reorder_identity_is_identity() {
        let id = DMatrix::<f64>::identity(6, 6);
        assert_eq!(
            reorder_matrix(&id, Ordering::Pairwise, Ordering::Blockwise).unwrap(),
            id
        );
    }

    #[test]
    fn reorder_maps_forms_onto_each_other() {
        for n in 1..=4 {
            let p = make_symplectic_form(n, Ordering::Pairwise).unwrap();
            let b = make_symplectic_form(n, Ordering::Blockwise).unwrap();
            let moved = reorder_matrix(b.omega(), Ordering::Blockwise, Ordering::Pairwise).unwrap();
            assert_eq!(&moved, p.omega());
        }
    }

    proptest! {
        #[test]
        fn reorder_round_trip_is_exact(
            n in 1usize..6,
            seed in prop::collection::vec(-1000i32..1000, 144),
        ) {
            let dim = 2 * n;
            let m = DMatrix::from_fn(dim, dim, |i, j| seed[i * 12 + j] as f64 / 8.0);
            let v = DVector::from_fn(dim, |i, _| seed[i] as f64 / 4.0);
            for (a, b) in [(Ordering::Pairwise, Ordering::Blockwise), (Ordering::Blockwise, Ordering::Pairwise)] {
                let there = reorder_matrix(&m, a, b).unwrap();
                prop_assert_eq!(reorder_matrix(&there, b, a).unwrap(), m.clone());
                let vt = reorder_vector(&v, a, b).unwrap();
                prop_assert_eq!(reorder_vector(&vt, b, a).unwrap(), v.clone());
            }
        }
    }
}
