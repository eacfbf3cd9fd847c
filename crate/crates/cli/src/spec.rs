//! TOML experiment files.
//!
//! ```toml
//! dimension = 2
//! weights = [0.5, 0.5]      # optional, uniform by default
//! phases = [0.0, 0.0]       # optional, zero by default
//! probe = [[0.92, 0.0], [0.38, 0.0]]   # optional, [re, im] per amplitude
//!
//! [[measurement]]
//! kind = "qubit"
//! a = 1.0
//! b = 0.0
//! phi = 0.0
//!
//! [[measurement]]
//! kind = "mub"
//! k = 0
//!
//! [[measurement]]
//! kind = "basis"            # one row per basis vector
//! vectors = [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]]
//!
//! [[measurement]]
//! kind = "computational"
//!
//! [guess]                   # optional: Bob's basis for `simulate`
//! vectors = [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]]
//! guesses = [0, 1]          # optional, identity by default
//!
//! [run]                     # all optional
//! seed = 0
//! restarts = 100
//! iters = 2000
//! rounds = 10000
//! tol = 1e-9
//! ```

use crate::CliError;
use qguess::measurements::{mub_measurement, qubit_measurement};
use qguess::{GuessBasis, MeasurementSet, ProjectiveMeasurement, QubitMeasurementParams, StateVector, C64};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub dimension: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phases: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probe: Option<Vec<[f64; 2]>>,
    #[serde(rename = "measurement")]
    pub measurements: Vec<MeasurementSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub guess: Option<GuessSpec>,
    #[serde(default)]
    pub run: RunParams,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum MeasurementSpec {
    Computational,
    Qubit { a: f64, b: f64, phi: f64 },
    Mub { k: usize },
    Basis { vectors: Vec<Vec<[f64; 2]>> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GuessSpec {
    pub vectors: Vec<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub guesses: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunParams {
    pub seed: u64,
    pub restarts: usize,
    pub iters: usize,
    pub rounds: u64,
    pub tol: f64,
}

impl Default for RunParams {
    fn default() -> Self {
        Self { seed: 0, restarts: 100, iters: 2000, rounds: 10_000, tol: 1e-9 }
    }
}

fn spec_err(e: qguess::Error) -> CliError {
    CliError::Usage(e.to_string())
}

fn to_complex(row: &[[f64; 2]]) -> Vec<C64> {
    row.iter().map(|[re, im]| C64::new(*re, *im)).collect()
}

fn from_complex(v: &StateVector) -> Vec<[f64; 2]> {
    v.amps().iter().map(|c| [c.re, c.im]).collect()
}

fn vector_of(row: &[[f64; 2]], dim: usize) -> Result<StateVector, CliError> {
    if row.len() != dim {
        return Err(CliError::Usage(format!("vector has {} entries, dimension is {dim}", row.len())));
    }
    StateVector::new(to_complex(row)).map_err(spec_err)
}

fn basis_of(rows: &[Vec<[f64; 2]>], dim: usize) -> Result<ProjectiveMeasurement, CliError> {
    if rows.len() != dim {
        return Err(CliError::Usage(format!("basis has {} vectors, dimension is {dim}", rows.len())));
    }
    let vs = rows.iter().map(|r| vector_of(r, dim)).collect::<Result<Vec<_>, _>>()?;
    ProjectiveMeasurement::new(vs).map_err(spec_err)
}

impl ExperimentSpec {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Usage(format!("spec: {e}")))
    }

    pub fn load(path: &Path) -> Result<(Self, String), CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        Ok((Self::parse(&text)?, text))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("spec types serialize")
    }

    /// Spec with every measurement written out as an explicit basis.
    pub fn from_set(set: &MeasurementSet) -> Self {
        let measurements = set
            .measurements()
            .iter()
            .map(|m| MeasurementSpec::Basis { vectors: m.basis().iter().map(from_complex).collect() })
            .collect();
        Self {
            dimension: set.dim(),
            weights: Some(set.weights().to_vec()),
            phases: Some(set.phases().to_vec()),
            probe: None,
            measurements,
            guess: None,
            run: RunParams::default(),
        }
    }

    pub fn measurement_set(&self) -> Result<MeasurementSet, CliError> {
        let d = self.dimension;
        if d == 0 {
            return Err(CliError::Usage("dimension must be positive".into()));
        }
        if self.measurements.is_empty() {
            return Err(CliError::Usage("no [[measurement]] entries".into()));
        }
        let ms = self
            .measurements
            .iter()
            .map(|m| match m {
                MeasurementSpec::Computational => ProjectiveMeasurement::computational(d).map_err(spec_err),
                MeasurementSpec::Qubit { a, b, phi } => {
                    if d != 2 {
                        return Err(CliError::Usage(format!("qubit measurement in dimension {d}")));
                    }
                    let p = QubitMeasurementParams::new(*a, *b, *phi).map_err(spec_err)?;
                    qubit_measurement(p).map_err(spec_err)
                }
                MeasurementSpec::Mub { k } => mub_measurement(d, *k).map_err(spec_err),
                MeasurementSpec::Basis { vectors } => basis_of(vectors, d),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let n = ms.len();
        let weights = self.weights.clone().unwrap_or_else(|| vec![1.0 / n as f64; n]);
        let phases = self.phases.clone().unwrap_or_else(|| vec![0.0; n]);
        MeasurementSet::new(ms, weights, phases).map_err(spec_err)
    }

    pub fn probe_state(&self) -> Result<Option<StateVector>, CliError> {
        let Some(p) = &self.probe else { return Ok(None) };
        let v = vector_of(p, self.dimension)?;
        v.normalize().map(Some).map_err(spec_err)
    }

    /// Bob's basis lives on the control register, so its dimension is the
    /// number of measurements.
    pub fn guess_basis(&self) -> Result<Option<GuessBasis>, CliError> {
        let Some(g) = &self.guess else { return Ok(None) };
        let m = basis_of(&g.vectors, self.measurements.len())?;
        let basis = match &g.guesses {
            Some(labels) => GuessBasis::new(m, labels.clone()).map_err(spec_err)?,
            None => GuessBasis::identity_labels(m),
        };
        Ok(Some(basis))
    }
}
