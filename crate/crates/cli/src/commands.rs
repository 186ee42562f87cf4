use std::path::Path;

use nalgebra::DMatrix;
use serde_json::{json, Map, Value};

use phasespace::dynamics::{rotation, single_mode_squeezer, two_mode_squeezer};
use phasespace::entropy::{entanglement_entropy, von_neumann_entropy};
use phasespace::wigner::{purity_and_bounds, TAU_GRID};
use phasespace::williamson::{symplectic_spectrum, CoupledOscillators};
use phasespace::{
    apply_channel, coherent, eval_fock, eval_gaussian, generate_channel, ladder_to_quadrature,
    normal_mode_ground_state, partial_trace, squeezed_vacuum, thermal, two_mode_squeezed_vacuum, vacuum,
    williamson_decompose, Error, GaussianState, Ordering, PhaseSpaceGrid, QuadraticHamiltonian, SymplecticForm,
};

use crate::io::{emit, fmt_f64, grid_csv, matrix_rows, to_json, HamiltonianFile, StateFile};
use crate::{CliError, CoupledArgs, EntropyArgs, EvolveArgs, Globals, MakeArgs, StateKind, WignerArgs};

fn required(value: Option<f64>, flag: &str, kind: &str) -> Result<f64, CliError> {
    value.ok_or_else(|| CliError::usage(format!("{kind} needs --{flag}")))
}

pub fn state_make(g: &Globals, args: &MakeArgs) -> Result<(), CliError> {
    let mut meta = Map::new();
    let state = match args.kind {
        StateKind::Vacuum => {
            meta.insert("kind".into(), json!("vacuum"));
            vacuum(args.modes)?
        }
        StateKind::Thermal => {
            let nu = required(args.nu, "nu", "thermal")?;
            meta.insert("kind".into(), json!("thermal"));
            meta.insert("nu".into(), json!(nu));
            thermal(nu)?
        }
        StateKind::Coherent => {
            if args.alpha.is_empty() {
                return Err(CliError::usage("coherent needs at least one --alpha"));
            }
            meta.insert("kind".into(), json!("coherent"));
            let amps: Vec<Value> = args.alpha.iter().map(|a| json!([a.re, a.im])).collect();
            meta.insert("alpha".into(), Value::Array(amps));
            coherent(&args.alpha)?
        }
        StateKind::Squeezed | StateKind::Tmsv => {
            let two = args.kind == StateKind::Tmsv;
            let name = if two { "tmsv" } else { "squeezed" };
            let r = required(args.r, "r", name)?;
            meta.insert("kind".into(), json!(name));
            meta.insert("r".into(), json!(r));
            meta.insert("theta".into(), json!(args.theta));
            if two {
                two_mode_squeezed_vacuum(r, args.theta)?
            } else {
                squeezed_vacuum(r, args.theta)?
            }
        }
    };
    let state = state.to_ordering(args.ordering);
    emit(g.out.as_deref(), &to_json(&StateFile::from_state(&state, meta))?)
}

/// Places a pairwise `2k×2k` block acting on `modes` into an `n`-mode matrix.
fn embed(block: &DMatrix<f64>, modes: &[usize], n: usize) -> Result<DMatrix<f64>, CliError> {
    for (a, &m) in modes.iter().enumerate() {
        if m >= n {
            return Err(CliError::usage(format!("mode {m} out of range for a {n}-mode state")));
        }
        if modes[..a].contains(&m) {
            return Err(CliError::usage(format!("mode {m} listed twice")));
        }
    }
    let mut f = DMatrix::zeros(2 * n, 2 * n);
    for (a, &ma) in modes.iter().enumerate() {
        for (b, &mb) in modes.iter().enumerate() {
            f.view_mut((2 * ma, 2 * mb), (2, 2))
                .copy_from(&block.view((2 * a, 2 * b), (2, 2)));
        }
    }
    Ok(f)
}

fn builtin_modes(on: &[usize], default: &[usize], what: &str) -> Result<Vec<usize>, CliError> {
    if on.is_empty() {
        return Ok(default.to_vec());
    }
    if on.len() != default.len() {
        return Err(CliError::usage(format!(
            "{what} acts on {} mode(s), got --on with {}",
            default.len(),
            on.len()
        )));
    }
    Ok(on.to_vec())
}

fn evolve_hamiltonian(args: &EvolveArgs, n: usize) -> Result<QuadraticHamiltonian, CliError> {
    if let Some(path) = &args.hamiltonian {
        let h = HamiltonianFile::load(path)?.to_hamiltonian()?;
        if h.n_modes() != n {
            return Err(CliError::usage(format!(
                "Hamiltonian acts on {} modes, state has {n}",
                h.n_modes()
            )));
        }
        return Ok(h);
    }
    if let Some(omega) = args.rotate {
        return Ok(rotation(omega, n)?);
    }
    let (ladder, modes) = match (args.squeeze, args.tms) {
        (Some(r), _) => (
            single_mode_squeezer(r, args.theta),
            builtin_modes(&args.on, &[0], "--squeeze")?,
        ),
        (_, Some(r)) => (
            two_mode_squeezer(r, args.theta),
            builtin_modes(&args.on, &[0, 1], "--tms")?,
        ),
        _ => return Err(CliError::usage("no Hamiltonian given")),
    };
    let local = ladder_to_quadrature(&ladder)?;
    let f = embed(local.f_bar(), &modes, n)?;
    Ok(QuadraticHamiltonian::quadratic(f, Ordering::Pairwise)?)
}

pub fn evolve(g: &Globals, args: &EvolveArgs) -> Result<(), CliError> {
    let file = StateFile::load(&args.state)?;
    let state = file.to_state()?;
    let h = evolve_hamiltonian(args, state.n_modes())?;
    let ch = generate_channel(&h, args.time)?;
    if g.verbose {
        eprintln!("symplectic residual: {}", fmt_f64(ch.symplectic().residual()));
    }
    let out = apply_channel(&ch, &state)?;
    emit(g.out.as_deref(), &to_json(&StateFile::from_state(&out, file.metadata))?)
}

fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).abs().max()
}

pub fn williamson(g: &Globals, path: &Path) -> Result<(), CliError> {
    let state = StateFile::load(path)?.to_state()?;
    let form = state.symplectic_form();
    let dec = williamson_decompose(state.cov(), &form).map_err(|e| match e {
        Error::InvalidInput(msg) => CliError::numeric(format!("covariance matrix: {msg}")),
        other => other.into(),
    })?;
    let s = dec.sigma_matrix.matrix();
    let round_trip = max_abs_diff(&(s * state.cov() * s.transpose()), &dec.diag_form);
    let symplectic = max_abs_diff(&(s * form.omega_inv() * s.transpose()), form.omega_inv());
    if g.verbose {
        for w in &dec.warnings {
            eprintln!("warning: {w}");
        }
    }
    let out = json!({
        "ordering": state.ordering().tag(),
        "nu": dec.nu,
        "sigma": matrix_rows(s),
        "diag_form": matrix_rows(&dec.diag_form),
        "residuals": {
            "round_trip": round_trip,
            "symplectic": symplectic,
        },
        "warnings": dec.warnings,
    });
    emit(g.out.as_deref(), &to_json(&out)?)
}

pub fn entropy(g: &Globals, args: &EntropyArgs) -> Result<(), CliError> {
    let state = StateFile::load(&args.state)?.to_state()?;
    let out = match &args.subsystem {
        Some(modes) => {
            let res = entanglement_entropy(&state, modes, args.base)?;
            let nu = partial_trace(&state, modes)?.symplectic_spectrum()?;
            json!({
                "kind": "entanglement",
                "subsystem": modes,
                "log_base": args.base.to_string(),
                "total": res.total,
                "per_mode": res.per_mode,
                "nu": nu,
            })
        }
        None => {
            let res = von_neumann_entropy(&state, args.base)?;
            let nu = state.symplectic_spectrum()?;
            json!({
                "kind": "von_neumann",
                "subsystem": Value::Null,
                "log_base": args.base.to_string(),
                "total": res.total,
                "per_mode": res.per_mode,
                "nu": nu,
            })
        }
    };
    emit(g.out.as_deref(), &to_json(&out)?)
}

fn single_mode(state: GaussianState, mode: Option<usize>) -> Result<GaussianState, CliError> {
    match (state.n_modes(), mode) {
        (1, None) | (1, Some(0)) => Ok(state),
        (1, Some(m)) => Err(CliError::usage(format!("mode {m} out of range for a 1-mode state"))),
        (n, None) => Err(CliError::usage(format!("state has {n} modes; choose one with --mode"))),
        (_, Some(m)) => Ok(partial_trace(&state, &[m])?),
    }
}

pub fn wigner(g: &Globals, args: &WignerArgs) -> Result<(), CliError> {
    let grid = PhaseSpaceGrid::new(args.qrange, args.prange, args.nq, args.np, args.hbar)?;
    let (w, descriptor) = if let Some(n) = args.fock {
        (eval_fock(n, &grid)?, format!("fock:{n}"))
    } else if let Some(a) = args.coherent {
        let st = coherent(&[a])?;
        (
            eval_gaussian(&st, &grid)?,
            format!("coherent:{}{:+.16e}i", fmt_f64(a.re), a.im),
        )
    } else if let Some(path) = &args.state {
        let st = single_mode(StateFile::load(path)?.to_state()?, args.mode)?;
        let desc = match args.mode {
            Some(m) => format!("file:{}#mode{m}", path.display()),
            None => format!("file:{}", path.display()),
        };
        (eval_gaussian(&st, &grid)?, desc)
    } else {
        return Err(CliError::usage("no Wigner source given"));
    };
    let s = purity_and_bounds(&w);
    for warning in &w.warnings {
        eprintln!("warning: {warning}");
    }
    if (s.normalization - 1.0).abs() > TAU_GRID {
        eprintln!(
            "warning: grid too coarse or narrow: W integrates to {}",
            fmt_f64(s.normalization)
        );
    }
    emit(g.out.as_deref(), &grid_csv(&w, &descriptor))?;
    if g.summary {
        let max = w.values.max();
        let text = to_json(&json!({
            "normalization": s.normalization,
            "purity_integral": s.purity_integral,
            "min": s.min_value,
            "max": max,
            "max_abs": s.max_abs,
            "negativity_volume": s.negativity_volume,
        }))?;
        // keep standard output clean when it carries the grid
        if g.out.is_some() {
            print!("{text}");
        } else {
            eprint!("{text}");
        }
    }
    Ok(())
}

pub fn coupled_example(g: &Globals, args: &CoupledArgs) -> Result<(), CliError> {
    let sys = CoupledOscillators::new(args.m, args.omega, args.lambda)?;
    let alpha = sys.alpha()?;
    let h = sys.hamiltonian();
    let spectrum = symplectic_spectrum(h.f_bar(), &SymplecticForm::new(2, Ordering::Pairwise)?)?;
    let gs = normal_mode_ground_state(&h)?;
    let reduced_nu = partial_trace(&gs, &[0])?.symplectic_spectrum()?[0];
    let s_e = entanglement_entropy(&gs, &[0], args.base)?.total;
    let out = json!({
        "m": args.m,
        "omega": args.omega,
        "lambda": args.lambda,
        "alpha": alpha,
        "normal_frequencies": sys.normal_frequencies()?,
        "symplectic_eigenvalues": spectrum,
        "ground_state": {
            "ordering": gs.ordering().tag(),
            "mean": gs.mean().iter().copied().collect::<Vec<_>>(),
            "cov": matrix_rows(gs.cov()),
        },
        "reduced_nu": reduced_nu,
        "reduced_nu_closed_form": sys.reduced_nu()?,
        "entanglement_entropy": s_e,
        "log_base": args.base.to_string(),
    });
    emit(g.out.as_deref(), &to_json(&out)?)
}
