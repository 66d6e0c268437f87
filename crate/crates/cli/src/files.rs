//! On-disk documents: gate files and probe states.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use unidisc::canonical::build_ud;
use unidisc::numerics::{is_unitary, unitarity_deviation, Mat4, C64};
use unidisc::{InteractionVector, ProbeState};

use crate::CliError;

/// Unitarity tolerance applied when a matrix file is loaded.
pub const LOAD_UNITARITY_TOL: f64 = 1e-8;

/// A gate, either as an explicit matrix or as a chamber vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum MatrixFile {
    Matrix {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
        rows: Vec<Vec<[f64; 2]>>,
    },
    Alpha {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
        alpha: [f64; 3],
    },
}

/// A loaded gate.
#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    pub label: Option<String>,
    pub matrix: Mat4,
}

impl MatrixFile {
    pub fn from_matrix(m: &Mat4, label: Option<String>) -> Self {
        let rows =
            m.0.iter()
                .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
                .collect();
        MatrixFile::Matrix { label, rows }
    }

    pub fn label(&self) -> Option<&str> {
        match self {
            MatrixFile::Matrix { label, .. } | MatrixFile::Alpha { label, .. } => label.as_deref(),
        }
    }

    /// Checks the document's invariants and builds the gate it describes.
    pub fn to_gate(&self) -> Result<Gate, CliError> {
        let matrix = match self {
            MatrixFile::Matrix { rows, .. } => {
                if rows.len() != 4 || rows.iter().any(|r| r.len() != 4) {
                    return Err(CliError::Input("matrix must have 4 rows of 4 entries".into()));
                }
                if rows.iter().flatten().flatten().any(|x| !x.is_finite()) {
                    return Err(CliError::Input("matrix entries must be finite".into()));
                }
                let m = Mat4(std::array::from_fn(|i| {
                    std::array::from_fn(|j| C64::new(rows[i][j][0], rows[i][j][1]))
                }));
                if !is_unitary(&m, LOAD_UNITARITY_TOL) {
                    return Err(CliError::Input(format!(
                        "not unitary (max |U†U - I| = {:.3e})",
                        unitarity_deviation(&m)
                    )));
                }
                m
            }
            MatrixFile::Alpha { alpha, .. } => {
                let d = InteractionVector::new(alpha[0], alpha[1], alpha[2])?;
                build_ud(&d)
            }
        };
        Ok(Gate {
            label: self.label().map(str::to_owned),
            matrix,
        })
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("malformed gate file: {e}")))
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }
}

pub fn load_gate(path: &Path) -> Result<Gate, CliError> {
    let text = read(path)?;
    MatrixFile::parse(&text)
        .and_then(|f| f.to_gate())
        .map_err(|e| e.in_file(path))
}

/// A probe state with its local factors when it is a product state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeDocument {
    pub kind: String,
    /// Amplitudes in the magic basis.
    pub magic: Vec<[f64; 2]>,
    /// Amplitudes in the computational basis `|00>, |01>, |10>, |11>`.
    pub computational: Vec<[f64; 2]>,
    pub concurrence: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub local_a: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub local_b: Option<Vec<[f64; 2]>>,
}

fn pairs(zs: &[C64]) -> Vec<[f64; 2]> {
    zs.iter().map(|z| [z.re, z.im]).collect()
}

impl From<&ProbeState> for ProbeDocument {
    fn from(p: &ProbeState) -> Self {
        Self {
            kind: "probe".into(),
            magic: pairs(&p.u),
            computational: pairs(&p.psi_computational.0),
            concurrence: p.concurrence(),
            local_a: p.local_a.map(|a| pairs(&a)),
            local_b: p.local_b.map(|b| pairs(&b)),
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents serialize");
    s.push('\n');
    s
}

pub fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}
