//! Von Neumann entropy of Gaussian states from their symplectic spectrum.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gaussian::{partial_trace, GaussianState, TAU_PHYS, TAU_PURE};

/// `ν` values within this distance above 1 contribute exactly zero.
pub const NU_ONE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LogBase {
    #[default]
    Natural,
    Two,
}

impl LogBase {
    fn ln_scale(self) -> f64 {
        match self {
            LogBase::Natural => 1.0,
            LogBase::Two => std::f64::consts::LN_2,
        }
    }
}

impl fmt::Display for LogBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LogBase::Natural => "e",
            LogBase::Two => "2",
        })
    }
}

impl FromStr for LogBase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "e" | "natural" | "nats" => Ok(LogBase::Natural),
            "2" | "bits" => Ok(LogBase::Two),
            other => Err(Error::InvalidInput(format!("unknown log base '{other}' (use e or 2)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyResult {
    pub total: f64,
    pub per_mode: Vec<f64>,
    pub log_base: LogBase,
}

/// Entropy of one mode with symplectic eigenvalue `nu`, in nats.
pub fn mode_entropy(nu: f64) -> Result<f64> {
    if !nu.is_finite() {
        return Err(Error::Numeric(format!("symplectic eigenvalue {nu} is not finite")));
    }
    if nu < 1.0 - TAU_PHYS {
        return Err(Error::Unphysical(format!("symplectic eigenvalue {nu} is below 1")));
    }
    if nu <= 1.0 + NU_ONE_TOL {
        return Ok(0.0);
    }
    let up = (nu + 1.0) / 2.0;
    let down = (nu - 1.0) / 2.0;
    Ok(up * up.ln() - down * down.ln())
}

/// Entropy from a list of symplectic eigenvalues.
pub fn entropy_from_spectrum(nu: &[f64], log_base: LogBase) -> Result<EntropyResult> {
    let scale = log_base.ln_scale();
    let per_mode = nu
        .iter()
        .map(|&v| mode_entropy(v).map(|s| s / scale))
        .collect::<Result<Vec<_>>>()?;
    Ok(EntropyResult {
        total: per_mode.iter().sum(),
        per_mode,
        log_base,
    })
}

pub fn von_neumann_entropy(state: &GaussianState, log_base: LogBase) -> Result<EntropyResult> {
    let nu = state.symplectic_spectrum().map_err(|e| match e {
        Error::InvalidInput(msg) => Error::Unphysical(msg),
        other => other,
    })?;
    entropy_from_spectrum(&nu, log_base)
}

/// Entropy of the modes in `partition` for a pure global state.
pub fn entanglement_entropy(state: &GaussianState, partition: &[usize], log_base: LogBase) -> Result<EntropyResult> {
    let n = state.n_modes();
    if partition.is_empty() || partition.len() >= n {
        return Err(Error::Index(format!(
            "partition must be a proper nonempty subset of the {n} modes"
        )));
    }
    let reduced = partial_trace(state, partition)?;
    let purity = state.purity()?.purity;
    if (purity - 1.0).abs() > TAU_PURE {
        return Err(Error::NotPure { purity });
    }
    von_neumann_entropy(&reduced, log_base)
}

/// Temperature and partition function matching the reduced state of a TMSV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TmsvThermal {
    pub temperature: f64,
    pub partition_function: f64,
}

/// `T = -ω / (2 ln tanh r)` and `Z = cosh² r`, with `ħ = k_B = 1`.
///
/// Here `r` is the squeezing in the Fock expansion `Σ (-e^{iθ} tanh r)ⁿ |n⟩|n⟩ / cosh r`,
/// for which the reduced state has `n̄ = sinh² r`.
pub fn tmsv_temperature(r: f64, omega: f64) -> Result<TmsvThermal> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::InvalidInput(format!("squeezing must be non-negative, got {r}")));
    }
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::InvalidInput(format!("frequency must be positive, got {omega}")));
    }
    let partition_function = r.cosh().powi(2);
    if r == 0.0 {
        return Ok(TmsvThermal {
            temperature: 0.0,
            partition_function,
        });
    }
    Ok(TmsvThermal {
        temperature: -omega / (2.0 * r.tanh().ln()),
        partition_function,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{apply_channel, generate_channel, QuadraticHamiltonian};
    use crate::gaussian::{thermal, two_mode_squeezed_vacuum, vacuum};
    use crate::symplectic::Ordering;
    use crate::williamson::{normal_mode_ground_state, CoupledOscillators};
    use nalgebra::{DMatrix, DVector};
    use proptest::prelude::*;

    #[test]
    fn vacuum_has_zero_entropy() {
        let r = von_neumann_entropy(&vacuum(3).unwrap(), LogBase::Natural).unwrap();
        assert_eq!(r.total, 0.0);
        assert_eq!(r.per_mode, vec![0.0; 3]);
    }

    #[test]
    fn thermal_two() {
        // geometric distribution with n̄ = 1/2: pₙ = (2/3)(1/3)ⁿ
        let oracle: f64 = (0..200)
            .map(|n| {
                let p = (2.0 / 3.0) * (1.0f64 / 3.0).powi(n);
                -p * p.ln()
            })
            .sum();
        let s = von_neumann_entropy(&thermal(2.0).unwrap(), LogBase::Natural).unwrap();
        assert!((s.total - oracle).abs() < 1e-12);
        assert!((s.total - 0.954_771_252_442_219_2).abs() < 1e-12);
        let bits = von_neumann_entropy(&thermal(2.0).unwrap(), LogBase::Two).unwrap();
        assert!((bits.total - s.total / std::f64::consts::LN_2).abs() < 1e-14);
    }

    #[test]
    fn near_unit_nu_contributes_zero() {
        assert_eq!(mode_entropy(1.0 + 5e-13).unwrap(), 0.0);
        assert_eq!(mode_entropy(1.0 - 1e-10).unwrap(), 0.0);
        assert!(matches!(mode_entropy(0.9), Err(Error::Unphysical(_))));
    }

    #[test]
    fn unphysical_state_rejected() {
        let st = GaussianState::new(DVector::zeros(2), DMatrix::identity(2, 2) * 0.5, Ordering::Pairwise).unwrap();
        assert!(matches!(
            von_neumann_entropy(&st, LogBase::Natural),
            Err(Error::Unphysical(_))
        ));
    }

    #[test]
    fn tmsv_entanglement() {
        let r = 1.0;
        let st = two_mode_squeezed_vacuum(r, 0.3).unwrap();
        let s = entanglement_entropy(&st, &[0], LogBase::Natural).unwrap();
        let expect = mode_entropy(r.cosh()).unwrap();
        assert!((s.total - expect).abs() < 1e-12);
        let other = entanglement_entropy(&st, &[1], LogBase::Natural).unwrap();
        assert!((s.total - other.total).abs() < 1e-9);
    }

    #[test]
    fn entanglement_needs_pure_state_and_proper_partition() {
        let mixed = crate::gaussian::tensor(&thermal(2.0).unwrap(), &vacuum(1).unwrap()).unwrap();
        assert!(matches!(
            entanglement_entropy(&mixed, &[0], LogBase::Natural),
            Err(Error::NotPure { .. })
        ));
        let v = vacuum(2).unwrap();
        assert_eq!(entanglement_entropy(&v, &[1], LogBase::Natural).unwrap().total, 0.0);
        assert!(matches!(
            entanglement_entropy(&v, &[], LogBase::Natural),
            Err(Error::Index(_))
        ));
        assert!(matches!(
            entanglement_entropy(&v, &[0, 1], LogBase::Natural),
            Err(Error::Index(_))
        ));
        assert!(matches!(
            entanglement_entropy(&v, &[5], LogBase::Natural),
            Err(Error::Index(_))
        ));
    }

    #[test]
    fn coupled_entropy_grows_with_coupling() {
        let mut last = -1.0;
        for k in 1..=20 {
            let lambda = 0.1 * k as f64;
            let sys = CoupledOscillators::new(1.0, 1.0, lambda).unwrap();
            let gs = normal_mode_ground_state(&sys.hamiltonian()).unwrap();
            let s = entanglement_entropy(&gs, &[0], LogBase::Natural).unwrap().total;
            assert!(s > last, "entropy not increasing at λ={lambda}");
            last = s;
        }
    }

    #[test]
    fn coupled_entropy_value() {
        let sys = CoupledOscillators::new(1.0, 1.0, 0.75).unwrap();
        let gs = normal_mode_ground_state(&sys.hamiltonian()).unwrap();
        let s = entanglement_entropy(&gs, &[1], LogBase::Natural).unwrap().total;
        let nu = 3.0 / (2.0 * 2f64.sqrt());
        assert!((s - mode_entropy(nu).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn tmsv_temperature_values() {
        let t = tmsv_temperature(1.0, 1.0).unwrap();
        assert!((t.temperature + 1.0 / (2.0 * 1f64.tanh().ln())).abs() < 1e-15);
        assert!((t.partition_function - 1f64.cosh().powi(2)).abs() < 1e-15);
        // a thermal state at this temperature has n̄ = 1/(e^{ω/T} - 1) = sinh² r
        let nbar = 1.0 / ((1.0 / t.temperature).exp() - 1.0);
        assert!((nbar - 1f64.sinh().powi(2)).abs() < 1e-12);

        assert_eq!(tmsv_temperature(0.0, 1.0).unwrap().temperature, 0.0);
        assert!(tmsv_temperature(1e-6, 1.0).unwrap().temperature < 0.1);
        assert!(tmsv_temperature(-1.0, 1.0).is_err());
        assert!(tmsv_temperature(1.0, 0.0).is_err());
    }

    #[test]
    fn log_base_parsing() {
        assert_eq!("2".parse::<LogBase>().unwrap(), LogBase::Two);
        assert_eq!("e".parse::<LogBase>().unwrap(), LogBase::Natural);
        assert!("10".parse::<LogBase>().is_err());
    }

    proptest! {
        #[test]
        fn entropy_invariant_under_channels(
            nu0 in 1.0f64..6.0,
            nu1 in 1.0f64..6.0,
            gen in prop::collection::vec(-1.0f64..1.0, 16),
            alpha in prop::collection::vec(-2.0f64..2.0, 4),
        ) {
            let st = crate::gaussian::tensor(&thermal(nu0).unwrap(), &thermal(nu1).unwrap()).unwrap();
            let g = DMatrix::from_fn(4, 4, |i, j| gen[i * 4 + j]);
            let h = QuadraticHamiltonian::new(g, DVector::from_vec(alpha), Ordering::Pairwise).unwrap();
            let out = apply_channel(&generate_channel(&h, 0.8).unwrap(), &st).unwrap();
            let a = von_neumann_entropy(&st, LogBase::Natural).unwrap().total;
            let b = von_neumann_entropy(&out, LogBase::Natural).unwrap().total;
            prop_assert!((a - b).abs() < 1e-9);
        }

        #[test]
        fn pure_two_mode_complements_agree(
            r in 0.0f64..2.0,
            th in -3.0f64..3.0,
            gen in prop::collection::vec(-1.0f64..1.0, 4),
        ) {
            // local rotations/squeezers keep the state pure and the split fixed
            let tms = two_mode_squeezed_vacuum(r, th).unwrap();
            let mut g = DMatrix::zeros(4, 4);
            g[(0, 0)] = gen[0]; g[(0, 1)] = gen[1]; g[(1, 0)] = gen[1]; g[(1, 1)] = gen[2];
            g[(2, 2)] = gen[3];
            let h = QuadraticHamiltonian::quadratic(g, Ordering::Pairwise).unwrap();
            let st = apply_channel(&generate_channel(&h, 1.0).unwrap(), &tms).unwrap();
            let a = entanglement_entropy(&st, &[0], LogBase::Natural).unwrap().total;
            let b = entanglement_entropy(&st, &[1], LogBase::Natural).unwrap().total;
            prop_assert!((a - b).abs() < 1e-9);
        }
    }
}
