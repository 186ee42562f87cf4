//! Gaussian continuous-variable states in the covariance-matrix formalism.
//!
//! States are described by a mean vector and a covariance matrix normalized so
//! that the vacuum has `σ = I`. Quadratures are ordered pairwise,
//! `(q₁, p₁, q₂, p₂, …)`, unless an [`Ordering`] says otherwise, and the symplectic
//! form of one mode is `Ω = [[0, -1], [1, 0]]`.
//!
//! The [`fock`] module is an independent truncated-Fock-space implementation used
//! to cross-check the Gaussian results.

pub mod dynamics;
pub mod entropy;
pub mod error;
pub mod fock;
pub mod gaussian;
pub mod linalg;
pub mod symplectic;
pub mod wigner;
pub mod williamson;

pub use dynamics::{
    apply_channel, evolve_ode, evolve_ode_with, generate_channel, ladder_to_quadrature, GaussianChannel,
    LadderHamiltonian, QuadraticHamiltonian,
};
pub use entropy::{entanglement_entropy, tmsv_temperature, von_neumann_entropy, EntropyResult, LogBase};
pub use error::{Error, Result};
pub use gaussian::{
    coherent, partial_trace, physicality_check, squeezed_vacuum, tensor, thermal, two_mode_squeezed_vacuum, vacuum,
    GaussianState,
};
pub use symplectic::{check_symplectic, make_symplectic_form, Ordering, SymplecticForm, SymplecticMatrix};
pub use wigner::{eval_fock, eval_gaussian, wigner_from_wavefunction, PhaseSpaceGrid, WignerGrid};
pub use williamson::{normal_mode_ground_state, symplectic_spectrum, williamson_decompose, WilliamsonDecomposition};
