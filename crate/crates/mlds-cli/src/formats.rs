//! Versioned on-disk formats.
//!
//! Tensor (`mlds-tensor/1`): a JSON document
//!
//! ```json
//! {"format":"mlds-tensor/1","order":3,"dim":2,"entries":[...]}
//! ```
//!
//! with `entries` in canonical flat order (first index fastest, length
//! dim^order), or a sparse variant
//!
//! ```json
//! {"format":"mlds-tensor/1","order":3,"dim":2,
//!  "sparse":[{"idx":[1,1,2],"val":0.5}],"symmetrize":true}
//! ```
//!
//! with 1-based index tuples; later duplicates overwrite earlier ones.
//! `symmetrize` requests permutation-averaging at load instead of
//! certification against a tolerance.
//!
//! Decompositions (`mlds-odeco/1`) carry `lambda` (descending), `factors`
//! (row per factor), and `residual`. Controlled systems (`mlds-system/1`)
//! embed a tensor object plus `b_columns`. Trajectories are CSV with
//! header `t,x_1,…,x_n,norm` at 17 significant digits.
//!
//! All writers go through a temp-file-plus-rename so output paths are
//! never observed half-written.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use mlds_core::dynamics::Trajectory;
use mlds_core::reachability::ControlledSystem;
use mlds_core::spectral::OdecoDecomposition;
use mlds_core::tensor::{default_sym_tol, SymTensor};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const TENSOR_FORMAT: &str = "mlds-tensor/1";
pub const ODECO_FORMAT: &str = "mlds-odeco/1";
pub const SYSTEM_FORMAT: &str = "mlds-system/1";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SparseEntry {
    /// 1-based index tuple (j_1, …, j_k).
    pub idx: Vec<usize>,
    pub val: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TensorFile {
    pub format: String,
    pub order: usize,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entries: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sparse: Option<Vec<SparseEntry>>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub symmetrize: bool,
}

impl TensorFile {
    pub fn from_tensor(t: &SymTensor) -> Self {
        Self {
            format: TENSOR_FORMAT.to_string(),
            order: t.order(),
            dim: t.dim(),
            entries: Some(t.entries().to_vec()),
            sparse: None,
            symmetrize: false,
        }
    }

    /// Builds and certifies the tensor. `sym_tol` overrides the default
    /// tolerance (1e−9 × max entry magnitude); a `symmetrize` request
    /// averages unconditionally.
    pub fn into_tensor(self, sym_tol: Option<f64>) -> Result<SymTensor, CliError> {
        if self.format != TENSOR_FORMAT {
            return Err(CliError::Input(format!(
                "unsupported tensor format {:?} (expected {TENSOR_FORMAT:?})",
                self.format
            )));
        }
        if self.order < 1 || self.dim < 1 {
            return Err(CliError::Input("order and dim must be positive".into()));
        }
        let len = self
            .dim
            .checked_pow(self.order as u32)
            .ok_or_else(|| CliError::Input("dim^order overflows".into()))?;
        let entries = match (self.entries, self.sparse) {
            (Some(e), None) => {
                if e.len() != len {
                    return Err(CliError::Input(format!(
                        "entries has length {}, expected dim^order = {len}",
                        e.len()
                    )));
                }
                e
            }
            (None, Some(sparse)) => {
                let mut e = vec![0.0; len];
                for (pos, s) in sparse.iter().enumerate() {
                    if s.idx.len() != self.order {
                        return Err(CliError::Input(format!(
                            "sparse entry {pos}: index tuple has arity {}, expected {}",
                            s.idx.len(),
                            self.order
                        )));
                    }
                    let mut flat = 0usize;
                    for &j in s.idx.iter().rev() {
                        if j < 1 || j > self.dim {
                            return Err(CliError::Input(format!(
                                "sparse entry {pos}: index {j} outside 1..={}",
                                self.dim
                            )));
                        }
                        flat = flat * self.dim + (j - 1);
                    }
                    e[flat] = s.val;
                }
                e
            }
            (Some(_), Some(_)) => {
                return Err(CliError::Input(
                    "tensor file must not carry both entries and sparse".into(),
                ))
            }
            (None, None) => {
                return Err(CliError::Input(
                    "tensor file carries neither entries nor sparse".into(),
                ))
            }
        };
        let tol = if self.symmetrize {
            f64::INFINITY
        } else {
            sym_tol.unwrap_or_else(|| default_sym_tol(&entries))
        };
        Ok(SymTensor::certify(self.order, self.dim, entries, tol)?)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecompositionFile {
    pub format: String,
    pub order: usize,
    pub dim: usize,
    /// Eigenvalues, descending.
    pub lambda: Vec<f64>,
    /// One factor per row, aligned with `lambda`.
    pub factors: Vec<Vec<f64>>,
    pub residual: f64,
}

impl DecompositionFile {
    pub fn from_decomposition(d: &OdecoDecomposition) -> Self {
        Self {
            format: ODECO_FORMAT.to_string(),
            order: d.order(),
            dim: d.dim(),
            lambda: d.eigenvalues().to_vec(),
            factors: d.factors().to_vec(),
            residual: d.reconstruction_residual(),
        }
    }

    pub fn into_decomposition(self) -> Result<OdecoDecomposition, CliError> {
        if self.format != ODECO_FORMAT {
            return Err(CliError::Input(format!(
                "unsupported decomposition format {:?} (expected {ODECO_FORMAT:?})",
                self.format
            )));
        }
        if self.lambda.len() != self.dim
            || self.factors.len() != self.dim
            || self.factors.iter().any(|f| f.len() != self.dim)
        {
            return Err(CliError::Input(
                "lambda/factors must have length dim".into(),
            ));
        }
        let defect = mlds_core::linalg::orthonormality_defect(&self.factors);
        if defect > 1e-8 {
            return Err(CliError::Input(format!(
                "factor family is not orthonormal (defect {defect:.3e})"
            )));
        }
        Ok(OdecoDecomposition::new(
            self.order,
            self.lambda,
            self.factors,
            self.residual,
        ))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SystemFile {
    pub format: String,
    pub tensor: TensorFile,
    /// Control matrix columns b_1 … b_m.
    pub b_columns: Vec<Vec<f64>>,
}

impl SystemFile {
    pub fn into_system(self, sym_tol: Option<f64>) -> Result<ControlledSystem, CliError> {
        if self.format != SYSTEM_FORMAT {
            return Err(CliError::Input(format!(
                "unsupported system format {:?} (expected {SYSTEM_FORMAT:?})",
                self.format
            )));
        }
        let tensor = self.tensor.into_tensor(sym_tol)?;
        Ok(ControlledSystem::new(tensor, self.b_columns)?)
    }
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Serializes with serde_json's shortest-round-trip float encoding:
/// lossless for f64 and byte-deterministic for identical inputs.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Input(format!("serialization failed: {e}")))?;
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

/// Writes through a sibling temp file and renames into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let io_err = |source: std::io::Error| CliError::Io {
        path: path.display().to_string(),
        source,
    };
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir).map_err(io_err)?;
        }
    }
    let mut tmp = PathBuf::from(path);
    let mut name = tmp.file_name().unwrap_or_default().to_os_string();
    name.push(format!(".tmp-{}", std::process::id()));
    tmp.set_file_name(name);
    {
        let mut f = fs::File::create(&tmp).map_err(io_err)?;
        f.write_all(bytes).map_err(io_err)?;
        f.sync_all().map_err(io_err)?;
    }
    fs::rename(&tmp, path).map_err(io_err)
}

/// Full-precision float text: 17 significant digits round-trip any f64.
pub fn float_17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Trajectory CSV: header `t,x_1,…,x_n,norm`, one row per recorded step.
pub fn trajectory_csv(traj: &Trajectory, dim: usize) -> String {
    let mut out = String::from("t");
    for i in 1..=dim {
        out.push_str(&format!(",x_{i}"));
    }
    out.push_str(",norm\n");
    for (i, &t) in traj.steps.iter().enumerate() {
        out.push_str(&format!("{t}"));
        for x in &traj.states[i] {
            out.push(',');
            out.push_str(&float_17(*x));
        }
        out.push(',');
        out.push_str(&float_17(traj.norms[i]));
        out.push('\n');
    }
    out
}
