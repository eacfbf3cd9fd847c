//! Constructions where perfect guessing is possible beyond the qubit case.

use crate::error::{Error, Result};
use crate::game::{bob_basis, perfect_guess_check, post_selected_ensemble, GameInstance, GuessBasis};
use crate::linalg::{inner_product, tensor, StateVector, C64};
use crate::measurements::{MeasurementSet, ProjectiveMeasurement};
use crate::qubit_solver::{self, QubitSolution};
use crate::tol;

/// A basis vector of measurement 0 that is (up to `tol`) an eigenvector of
/// every measurement, with the outcome label it carries in each.
pub fn common_eigenstate(set: &MeasurementSet, tol: f64) -> Option<(StateVector, Vec<usize>)> {
    let (first, rest) = set.measurements().split_first()?;
    'candidates: for (j0, v) in first.basis().iter().enumerate() {
        let mut labels = vec![j0];
        for m in rest {
            let hit = m
                .basis()
                .iter()
                .position(|w| inner_product(v, w).map(|c| c.norm() >= 1.0 - tol).unwrap_or(false));
            match hit {
                Some(j) => labels.push(j),
                None => continue 'candidates,
            }
        }
        return Some((v.clone(), labels));
    }
    None
}

/// Whether every basis vector of every measurement lies in the span of the
/// computational-basis indices marked `false` or of those marked `true`.
pub fn block_structure_check(set: &MeasurementSet, second: &[bool]) -> Result<bool> {
    if second.len() != set.dim() {
        return Err(Error::DimensionMismatch { expected: set.dim(), found: second.len() });
    }
    if second.iter().all(|&s| s) || second.iter().all(|&s| !s) {
        return Err(Error::TrivialPartition);
    }
    let leak = |v: &StateVector, part: bool| -> f64 {
        second
            .iter()
            .enumerate()
            .filter(|(_, &s)| s != part)
            .map(|(i, _)| v[i].norm_sqr())
            .sum::<f64>()
            .sqrt()
    };
    Ok(set
        .measurements()
        .iter()
        .flat_map(|m| m.basis())
        .all(|v| leak(v, false) <= tol::CHECK || leak(v, true) <= tol::CHECK))
}

/// Direct sum of every measurement with the fixed one-dimensional block
/// `e^{i·phase}|B⟩`, so the result lives in dimension `B + 1`.
pub fn extend_with_fixed_vector(set: &MeasurementSet, phase: f64) -> Result<MeasurementSet> {
    let d = set.dim();
    let measurements = set
        .measurements()
        .iter()
        .map(|m| {
            let mut basis: Vec<StateVector> = m
                .basis()
                .iter()
                .map(|v| {
                    let mut amps = v.amps().to_vec();
                    amps.push(C64::new(0.0, 0.0));
                    StateVector::new(amps)
                })
                .collect::<Result<_>>()?;
            let mut extra = vec![C64::new(0.0, 0.0); d + 1];
            extra[d] = C64::from_polar(1.0, phase);
            basis.push(StateVector::new(extra)?);
            ProjectiveMeasurement::new(basis)
        })
        .collect::<Result<Vec<_>>>()?;
    MeasurementSet::new(measurements, set.weights().to_vec(), set.phases().to_vec())
}

/// Every pairing of a measurement of `s1` with one of `s2`, ordered with `s1`
/// as the slower index. Weights multiply and control phases add.
pub fn tensor_sets(s1: &MeasurementSet, s2: &MeasurementSet) -> Result<MeasurementSet> {
    let mut measurements = Vec::with_capacity(s1.len() * s2.len());
    let mut weights = Vec::with_capacity(measurements.capacity());
    let mut phases = Vec::with_capacity(measurements.capacity());
    for (i, m1) in s1.measurements().iter().enumerate() {
        for (k, m2) in s2.measurements().iter().enumerate() {
            let basis = m1
                .basis()
                .iter()
                .flat_map(|v| m2.basis().iter().map(move |w| tensor(v, w)))
                .collect();
            measurements.push(ProjectiveMeasurement::new(basis)?);
            weights.push(s1.weights()[i] * s2.weights()[k]);
            phases.push(s1.phases()[i] + s2.phases()[k]);
        }
    }
    let total: f64 = weights.iter().sum();
    let weights = weights.into_iter().map(|w| w / total).collect();
    MeasurementSet::new(measurements, weights, phases)
}

#[derive(Debug, Clone)]
pub struct ProductConstruction {
    /// The `2^n`-dimensional set built from the canonical per-qubit sets.
    pub set: MeasurementSet,
    pub probe: StateVector,
    pub bob_basis: GuessBasis,
    pub factors: Vec<QubitSolution>,
}

/// Solves each qubit set and combines the solutions into an `n`-qubit game
/// with perfect guessing.
pub fn product_construction(per_qubit_sets: &[MeasurementSet]) -> Result<ProductConstruction> {
    if per_qubit_sets.is_empty() {
        return Err(Error::Empty("per-qubit sets"));
    }
    let factors = per_qubit_sets.iter().map(qubit_solver::solve).collect::<Result<Vec<_>>>()?;
    let mut set = factors[0].set.clone();
    let mut probe = factors[0].probe.clone();
    for f in &factors[1..] {
        set = tensor_sets(&set, &f.set)?;
        probe = tensor(&probe, &f.probe);
    }
    let e = post_selected_ensemble(&GameInstance::new(probe.clone(), set.clone())?);
    if !perfect_guess_check(&e, tol::CHECK) {
        return Err(Error::NotOrthogonal(e.max_overlap()));
    }
    let bob_basis = bob_basis(&e, tol::CHECK)?;
    Ok(ProductConstruction { set, probe, bob_basis, factors })
}
