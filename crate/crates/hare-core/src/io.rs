//! Problem and report documents.
//!
//! Problems are JSON files with matrices as row-major arrays of arrays;
//! reports are JSON on standard output. Floating-point values in reports
//! are printed with 17 significant digits so that every emitted matrix
//! round-trips through the parser bit-identically.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, SymMatrix, TolerancePolicy};
use crate::riccati::HareProblem;
use crate::spectral::SpectrumReport;

/// Parsed problem document: the triple `(A, B, R)` plus optional tolerance
/// overrides and a sampling seed. `R` defaults to the identity.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    #[serde(rename = "A")]
    pub a: Vec<Vec<f64>>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<f64>>,
    #[serde(rename = "R", default)]
    pub r: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    pub tolerances: Option<ToleranceOverrides>,
    #[serde(default)]
    pub seed: Option<u64>,
}

/// Optional per-file overrides of the default tolerance policy.
#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceOverrides {
    pub rank_tol: Option<f64>,
    pub resid_tol: Option<f64>,
    pub sym_tol: Option<f64>,
}

/// Candidate-solution document: either a bare array of arrays or an object
/// with a `Q` field.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum SolutionFile {
    Bare(Vec<Vec<f64>>),
    Tagged {
        #[serde(rename = "Q")]
        q: Vec<Vec<f64>>,
    },
}

fn parse_json<T: serde::de::DeserializeOwned>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("cannot parse {what}: {e}")))
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))
}

/// Converts a row-major array of arrays into a matrix, rejecting ragged
/// rows and non-finite entries.
pub fn matrix_from_rows(name: &str, rows: &[Vec<f64>]) -> Result<Matrix> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != ncols {
            return Err(Error::InvalidInput(format!(
                "{name} is ragged: row {i} has {} entries, expected {ncols}",
                row.len()
            )));
        }
        if row.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "{name} contains non-finite entries in row {i}"
            )));
        }
    }
    let flat: Vec<f64> = rows.iter().flatten().copied().collect();
    Ok(Matrix::from_row_slice(nrows, ncols, &flat))
}

/// Serializes a matrix as a row-major array of arrays.
pub fn matrix_rows(m: &Matrix) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

impl ProblemFile {
    pub fn from_str(text: &str) -> Result<Self> {
        parse_json(text, "problem file")
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        Self::from_str(&read_file(path)?)
    }

    /// Effective tolerance policy: defaults, then file overrides, then an
    /// optional residual-tolerance override from the command line.
    pub fn tolerance_policy(&self, resid_override: Option<f64>) -> Result<TolerancePolicy> {
        let mut tol = TolerancePolicy::default();
        if let Some(over) = &self.tolerances {
            if let Some(v) = over.rank_tol {
                tol.rank_tol = v;
            }
            if let Some(v) = over.resid_tol {
                tol.resid_tol = v;
            }
            if let Some(v) = over.sym_tol {
                tol.sym_tol = v;
            }
        }
        if let Some(v) = resid_override {
            tol.resid_tol = v;
        }
        tol.validate()?;
        Ok(tol)
    }

    /// Validates shapes and builds the problem.
    pub fn build(&self, resid_override: Option<f64>) -> Result<HareProblem> {
        let tol = self.tolerance_policy(resid_override)?;
        let a = matrix_from_rows("A", &self.a)?;
        if a.nrows() == 0 || a.nrows() != a.ncols() {
            return Err(Error::InvalidInput(format!(
                "A must be square and non-empty, got {}x{}",
                a.nrows(),
                a.ncols()
            )));
        }
        let b = matrix_from_rows("B", &self.b)?;
        if b.nrows() != a.nrows() || b.ncols() == 0 {
            return Err(Error::InvalidInput(format!(
                "B must have {} rows and at least one column, got {}x{}",
                a.nrows(),
                b.nrows(),
                b.ncols()
            )));
        }
        let m = b.ncols();
        let r = match &self.r {
            Some(rows) => {
                let r = matrix_from_rows("R", rows)?;
                if r.nrows() != m || r.ncols() != m {
                    return Err(Error::InvalidInput(format!(
                        "R must be {m}x{m}, got {}x{}",
                        r.nrows(),
                        r.ncols()
                    )));
                }
                SymMatrix::new(r, &tol)?
            }
            None => SymMatrix::identity(m),
        };
        HareProblem::new(a, b, r, tol)
    }
}

impl SolutionFile {
    pub fn from_path(path: &Path) -> Result<Self> {
        parse_json(&read_file(path)?, "solution file")
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        match self {
            SolutionFile::Bare(rows) => rows,
            SolutionFile::Tagged { q } => q,
        }
    }

    /// Builds the symmetric candidate matrix, enforcing the symmetry
    /// tolerance.
    pub fn build(&self, n: usize, tol: &TolerancePolicy) -> Result<SymMatrix> {
        let q = matrix_from_rows("Q", self.rows())?;
        if q.nrows() != n || q.ncols() != n {
            return Err(Error::InvalidInput(format!(
                "Q must be {n}x{n}, got {}x{}",
                q.nrows(),
                q.ncols()
            )));
        }
        SymMatrix::new(q, tol)
    }
}

/// Stein-equation section of a report.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SteinSection {
    pub exists: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub particular: Option<Vec<Vec<f64>>>,
    pub kernel_dim: usize,
    pub delta_basis: Vec<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual_norm: Option<f64>,
}

/// One enumerated solution in a families report.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FamilySolutionSection {
    pub q: Vec<Vec<f64>>,
    pub kernel_dim: usize,
    pub residual_norm: f64,
    pub delta_coeffs: Vec<f64>,
}

/// Families section of a report.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FamiliesSection {
    pub lattice_size: usize,
    pub lattice_complete: bool,
    pub sample_count: usize,
    pub solution_count: usize,
    pub solutions: Vec<FamilySolutionSection>,
}

/// Classification section of a report.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassificationSection {
    /// "in-family", "spurious", or "not-a-solution".
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kernel_dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extension_residual: Option<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extension_residual_norm: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hare_residual_norm: Option<f64>,
}

/// Verification section of a report.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerifySection {
    pub residual_norm: f64,
    pub is_solution: bool,
}

/// Machine-readable command report. Every command echoes the tolerance
/// policy, the spectrum analysis and the reachability flag; the remaining
/// sections are command-specific.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub tolerances: TolerancePolicy,
    pub spectrum: SpectrumReport,
    pub reachable: bool,
    pub theorem4_guarantee: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stein: Option<SteinSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub families: Option<FamiliesSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classification: Option<ClassificationSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verification: Option<VerifySection>,
}

/// JSON formatter printing every float with 17 significant digits
/// (`{:.16e}`), the shortest count that losslessly represents any IEEE 754
/// double.
struct FullPrecisionFormatter {
    pretty: serde_json::ser::PrettyFormatter<'static>,
}

impl serde_json::ser::Formatter for FullPrecisionFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + Write,
    {
        write!(writer, "{value:.16e}")
    }

    fn begin_array<W>(&mut self, writer: &mut W) -> std::io::Result<()>
    where
        W: ?Sized + Write,
    {
        self.pretty.begin_array(writer)
    }

    fn end_array<W>(&mut self, writer: &mut W) -> std::io::Result<()>
    where
        W: ?Sized + Write,
    {
        self.pretty.end_array(writer)
    }

    fn begin_array_value<W>(&mut self, writer: &mut W, first: bool) -> std::io::Result<()>
    where
        W: ?Sized + Write,
    {
        self.pretty.begin_array_value(writer, first)
    }

    fn end_array_value<W>(&mut self, writer: &mut W) -> std::io::Result<()>
    where
        W: ?Sized + Write,
    {
        self.pretty.end_array_value(writer)
    }

    fn begin_object<W>(&mut self, writer: &mut W) -> std::io::Result<()>
    where
        W: ?Sized + Write,
    {
        self.pretty.begin_object(writer)
    }

    fn end_object<W>(&mut self, writer: &mut W) -> std::io::Result<()>
    where
        W: ?Sized + Write,
    {
        self.pretty.end_object(writer)
    }

    fn begin_object_key<W>(&mut self, writer: &mut W, first: bool) -> std::io::Result<()>
    where
        W: ?Sized + Write,
    {
        self.pretty.begin_object_key(writer, first)
    }

    fn begin_object_value<W>(&mut self, writer: &mut W) -> std::io::Result<()>
    where
        W: ?Sized + Write,
    {
        self.pretty.begin_object_value(writer)
    }

    fn end_object_value<W>(&mut self, writer: &mut W) -> std::io::Result<()>
    where
        W: ?Sized + Write,
    {
        self.pretty.end_object_value(writer)
    }
}

/// Serializes a report (or any value) to pretty JSON with full-precision
/// floats.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut out = Vec::new();
    let formatter = FullPrecisionFormatter {
        pretty: serde_json::ser::PrettyFormatter::new(),
    };
    let mut ser = serde_json::Serializer::with_formatter(&mut out, formatter);
    value
        .serialize(&mut ser)
        .map_err(|e| Error::InvalidInput(format!("serialization failed: {e}")))?;
    String::from_utf8(out).map_err(|e| Error::InvalidInput(format!("invalid UTF-8: {e}")))
}
