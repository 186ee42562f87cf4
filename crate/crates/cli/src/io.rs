use std::fs;
use std::io::{self, Write};
use std::path::Path;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::{Map, Value};

use phasespace::{GaussianState, Ordering, WignerGrid};

use crate::CliError;

/// Floats are written as `{:.16e}`: 17 significant digits, dot separator.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Pretty JSON with fixed-width scientific floats.
struct FixedFloats<'a>(PrettyFormatter<'a>);

impl Formatter for FixedFloats<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(fmt_f64(value).as_bytes())
    }

    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FixedFloats(PrettyFormatter::new()));
    value
        .serialize(&mut ser)
        .map_err(|e| CliError::internal(format!("JSON serialization failed: {e}")))?;
    buf.push(b'\n');
    String::from_utf8(buf).map_err(|e| CliError::internal(e.to_string()))
}

/// Writes to `out` if given, standard output otherwise.
pub fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::internal(format!("cannot write to standard output: {e}")))
        }
    }
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))
}

pub fn matrix_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

fn square_matrix(rows: &[Vec<f64>], dim: usize, field: &str) -> Result<DMatrix<f64>, CliError> {
    if rows.len() != dim {
        return Err(CliError::usage(format!(
            "field `{field}`: expected {dim} rows, got {}",
            rows.len()
        )));
    }
    for (i, row) in rows.iter().enumerate() {
        if row.len() != dim {
            return Err(CliError::usage(format!(
                "field `{field}`: row {i} has {} entries, expected {dim}",
                row.len()
            )));
        }
    }
    Ok(DMatrix::from_fn(dim, dim, |i, j| rows[i][j]))
}

fn parse_ordering(tag: &str) -> Result<Ordering, CliError> {
    match tag {
        "qpqp" => Ok(Ordering::Pairwise),
        "qqpp" => Ok(Ordering::Blockwise),
        other => Err(CliError::usage(format!(
            "field `ordering`: unknown tag {other:?} (expected \"qpqp\" or \"qqpp\")"
        ))),
    }
}

fn default_ordering() -> String {
    Ordering::Pairwise.tag().to_string()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub n_modes: usize,
    #[serde(default = "default_ordering")]
    pub ordering: String,
    pub mean: Vec<f64>,
    pub cov: Vec<Vec<f64>>,
    #[serde(default)]
    pub metadata: Map<String, Value>,
}

impl StateFile {
    pub fn from_state(state: &GaussianState, metadata: Map<String, Value>) -> Self {
        Self {
            n_modes: state.n_modes(),
            ordering: state.ordering().tag().to_string(),
            mean: state.mean().iter().copied().collect(),
            cov: matrix_rows(state.cov()),
            metadata,
        }
    }

    pub fn parse(text: &str, source: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::usage(format!("{source}: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        Self::parse(&read_text(path)?, &path.display().to_string())
    }

    pub fn to_state(&self) -> Result<GaussianState, CliError> {
        if self.n_modes == 0 {
            return Err(CliError::usage("field `n_modes`: must be at least 1"));
        }
        let dim = 2 * self.n_modes;
        let ordering = parse_ordering(&self.ordering)?;
        if self.mean.len() != dim {
            return Err(CliError::usage(format!(
                "field `mean`: expected {dim} entries, got {}",
                self.mean.len()
            )));
        }
        let cov = square_matrix(&self.cov, dim, "cov")?;
        GaussianState::new(DVector::from_vec(self.mean.clone()), cov, ordering)
            .map_err(|e| CliError::usage(format!("invalid state: {e}")))
    }
}

/// Quadratic Hamiltonian `ξᵀF̄ξ + ξᵀα` read from JSON.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HamiltonianFile {
    pub f_bar: Vec<Vec<f64>>,
    #[serde(default)]
    pub alpha: Option<Vec<f64>>,
    #[serde(default = "default_ordering")]
    pub ordering: String,
}

impl HamiltonianFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        serde_json::from_str(&read_text(path)?).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
    }

    pub fn to_hamiltonian(&self) -> Result<phasespace::QuadraticHamiltonian, CliError> {
        let dim = self.f_bar.len();
        if dim == 0 || dim % 2 != 0 {
            return Err(CliError::usage(format!(
                "field `f_bar`: dimension must be even and positive, got {dim}"
            )));
        }
        let f = square_matrix(&self.f_bar, dim, "f_bar")?;
        let alpha = match &self.alpha {
            Some(a) if a.len() != dim => {
                return Err(CliError::usage(format!(
                    "field `alpha`: expected {dim} entries, got {}",
                    a.len()
                )))
            }
            Some(a) => DVector::from_vec(a.clone()),
            None => DVector::zeros(dim),
        };
        let ordering = parse_ordering(&self.ordering)?;
        phasespace::QuadraticHamiltonian::new(f, alpha, ordering)
            .map_err(|e| CliError::usage(format!("invalid Hamiltonian: {e}")))
    }
}

/// CSV with `# key=value` preamble, a `q,p,w` header and `n_q·n_p` rows (q outer).
pub fn grid_csv(w: &WignerGrid, descriptor: &str) -> String {
    let g = &w.grid;
    let mut s = String::with_capacity(64 * g.n_q * g.n_p + 256);
    for (k, v) in [
        ("q_min", g.q_min),
        ("q_max", g.q_max),
        ("p_min", g.p_min),
        ("p_max", g.p_max),
    ] {
        s.push_str(&format!("# {k}={}\n", fmt_f64(v)));
    }
    s.push_str(&format!("# n_q={}\n# n_p={}\n", g.n_q, g.n_p));
    s.push_str(&format!("# hbar={}\n", fmt_f64(g.hbar)));
    s.push_str(&format!("# state={descriptor}\n"));
    s.push_str("q,p,w\n");
    for i in 0..g.n_q {
        let q = fmt_f64(g.q(i));
        for j in 0..g.n_p {
            s.push_str(&format!("{q},{},{}\n", fmt_f64(g.p(j)), fmt_f64(w.values[(i, j)])));
        }
    }
    s
}
