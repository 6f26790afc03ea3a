//! JSON input files for the `bounds` subcommand.
//!
//! Complex numbers are `[re, im]` pairs throughout.
//!
//! State file, one of:
//! ```json
//! {"amplitudes": [[1, 0], [0, 0]]}
//! {"density": [[[0.5, 0], [0, 0]], [[0, 0], [0.5, 0]]]}
//! {"bloch": {"theta": 1.047, "phi": 0}}
//! {"stokes": [1, 0, 0, 1]}
//! ```
//! Observables file: `{"observables": [...]}` where each entry is either a
//! matrix (list of rows) or one of the strings `"x"`, `"y"`, `"z"`.

use std::path::Path;

use serde::Deserialize;

use crate::bounds::ObservableSet;
use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::quantum::{DensityMatrix, Observable, PureState, QuantumState};
use crate::qubit::{bloch_to_state, pauli, stokes_to_density, Axis, BlochAngles, StokesVector};

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum StateFile {
    Amplitudes(Vec<C64>),
    Density(Vec<Vec<C64>>),
    Bloch(BlochAngles),
    Stokes(StokesVector),
}

impl StateFile {
    pub fn into_state(self) -> Result<QuantumState> {
        Ok(match self {
            StateFile::Amplitudes(a) => PureState::new(a)?.into(),
            StateFile::Density(rows) => DensityMatrix::from_rows(&rows)?.into(),
            StateFile::Bloch(a) => bloch_to_state(&BlochAngles::new(a.theta, a.phi)?).into(),
            StateFile::Stokes(s) => stokes_to_density(&s)?.into(),
        })
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum ObservableEntry {
    Pauli(Axis),
    Matrix(Vec<Vec<C64>>),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObservablesFile {
    pub observables: Vec<ObservableEntry>,
}

impl ObservablesFile {
    pub fn into_set(self) -> Result<ObservableSet> {
        let obs = self
            .observables
            .into_iter()
            .map(|e| match e {
                ObservableEntry::Pauli(a) => Ok(pauli(a)),
                ObservableEntry::Matrix(rows) => Observable::from_rows(&rows),
            })
            .collect::<Result<Vec<_>>>()?;
        ObservableSet::new(obs)
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|source| Error::Json {
        context: path.display().to_string(),
        source,
    })
}

pub fn load_state(path: &Path) -> Result<QuantumState> {
    read_json::<StateFile>(path)?.into_state()
}

pub fn load_observables(path: &Path) -> Result<ObservableSet> {
    read_json::<ObservablesFile>(path)?.into_set()
}
