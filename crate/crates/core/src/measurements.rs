//! Projective measurements and measurement sets.
//!
//! A [`ProjectiveMeasurement`] is an ordered orthonormal basis; outcome `j`
//! corresponds to `basis[j]`. Alice implements it with the unitary whose
//! `j`-th column is `basis[j]`, so the phases of the basis vectors matter for
//! the coherent game even though they do not for a classical measurement.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::linalg::{gram, StateVector, UnitaryMatrix, C64};
use crate::tol;

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectiveMeasurement {
    basis: Vec<StateVector>,
}

impl ProjectiveMeasurement {
    pub fn new(basis: Vec<StateVector>) -> Result<Self> {
        let dim = basis.first().ok_or(Error::Empty("measurement basis"))?.dim();
        if basis.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: basis.len() });
        }
        let dev = gram(&basis)?.identity_deviation();
        if dev > tol::CONSTRUCTOR {
            return Err(Error::NotOrthonormal(dev));
        }
        Ok(Self { basis })
    }

    pub fn computational(dim: usize) -> Result<Self> {
        (0..dim)
            .map(|k| StateVector::basis(dim, k))
            .collect::<Result<Vec<_>>>()
            .and_then(Self::new)
    }

    /// Measurement whose outcome `j` is the `j`-th column of `u`.
    pub fn from_unitary(u: &UnitaryMatrix) -> Result<Self> {
        Self::new((0..u.dim()).map(|j| u.column(j)).collect())
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[StateVector] {
        &self.basis
    }

    pub fn vector(&self, outcome: usize) -> &StateVector {
        &self.basis[outcome]
    }

    /// The unitary `U` with `U|j⟩ = basis[j]`.
    pub fn unitary(&self) -> UnitaryMatrix {
        UnitaryMatrix::from_columns(&self.basis).expect("validated basis is unitary")
    }

    /// Reorders outcomes: outcome `j` of the result is outcome `order[j]` here.
    pub fn relabel(&self, order: &[usize]) -> Result<Self> {
        if order.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: order.len() });
        }
        let mut basis = Vec::with_capacity(order.len());
        for &j in order {
            if j >= self.dim() {
                return Err(Error::IndexOutOfRange { what: "outcome", index: j, size: self.dim() });
            }
            basis.push(self.basis[j].clone());
        }
        Self::new(basis)
    }
}

/// Real parameters `(a, b, φ)` of a qubit measurement whose first basis
/// vector is `a|0⟩ + b e^{iφ}|1⟩` with `a` real and non-negative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitMeasurementParams {
    pub a: f64,
    pub b: f64,
    pub phi: f64,
}

impl QubitMeasurementParams {
    pub fn new(a: f64, b: f64, phi: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && phi.is_finite()) {
            return Err(Error::InvalidQubitParams("non-finite parameter".into()));
        }
        if !(0.0..=1.0).contains(&a) || b < 0.0 {
            return Err(Error::InvalidQubitParams(format!("need 0 <= a <= 1 and b >= 0, got a={a} b={b}")));
        }
        if (a * a + b * b - 1.0).abs() > tol::NORMALIZED {
            return Err(Error::InvalidQubitParams(format!("a^2 + b^2 = {} != 1", a * a + b * b)));
        }
        let phi = if b == 0.0 { 0.0 } else { wrap_phase(phi) };
        Ok(Self { a, b, phi })
    }

    /// `(cos θ, sin θ, φ)` for `θ ∈ [0, π/2]`.
    pub fn from_angles(theta: f64, phi: f64) -> Result<Self> {
        Self::new(theta.cos().abs(), theta.sin().abs(), phi)
    }

    /// `β = b e^{iφ}`.
    pub fn beta(&self) -> C64 {
        C64::from_polar(self.b, self.phi)
    }
}

/// Maps an angle into `[0, 2π)`.
pub fn wrap_phase(phi: f64) -> f64 {
    let w = phi.rem_euclid(TAU);
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// Basis `{a|0⟩ + b e^{iφ}|1⟩, b e^{-iφ}|0⟩ - a|1⟩}`.
pub fn qubit_measurement(p: QubitMeasurementParams) -> Result<ProjectiveMeasurement> {
    let p = QubitMeasurementParams::new(p.a, p.b, p.phi)?;
    let beta = p.beta();
    let first = StateVector::new(vec![C64::new(p.a, 0.0), beta])?;
    let second = StateVector::new(vec![beta.conj(), C64::new(-p.a, 0.0)])?;
    ProjectiveMeasurement::new(vec![first, second])
}

/// Reads a qubit measurement back into canonical parameters.
///
/// Returns the parameters of the first basis vector (after removing its
/// global phase) and the relative phase `δ = θ₀ − θ₁` between the actual
/// basis vectors `e^{iθ₀}(a, β)` and `e^{iθ₁}(β*, −a)`. Canonical
/// measurements have `δ = 0`.
pub fn qubit_params_of(m: &ProjectiveMeasurement) -> Result<(QubitMeasurementParams, f64)> {
    if m.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: m.dim() });
    }
    let v0 = m.vector(0);
    let theta0 = if v0[0].norm() > 1e-15 { v0[0].arg() } else { v0[1].arg() };
    let rot = C64::from_polar(1.0, -theta0);
    let alpha = (v0[0] * rot).re.max(0.0);
    let beta = v0[1] * rot;
    let scale = alpha.hypot(beta.norm());
    let (a, b) = (alpha / scale, beta.norm() / scale);
    let phi = if b > 1e-14 { beta.arg() } else { 0.0 };
    let params = QubitMeasurementParams::new(a.min(1.0), b, phi)?;

    let comp = [params.beta().conj(), C64::new(-params.a, 0.0)];
    let v1 = m.vector(1);
    let overlap = comp[0].conj() * v1[0] + comp[1].conj() * v1[1];
    let theta1 = overlap.arg();
    Ok((params, wrap_phase(theta0 - theta1)))
}

/// Replaces each basis vector's phase by the canonical convention of
/// [`qubit_measurement`]. The projective measurement is unchanged.
pub fn canonical_qubit(m: &ProjectiveMeasurement) -> Result<ProjectiveMeasurement> {
    qubit_measurement(qubit_params_of(m)?.0)
}

/// Trial-division primality.
pub fn is_prime(d: usize) -> bool {
    if d < 2 {
        return false;
    }
    let mut f = 2;
    while f * f <= d {
        if d.is_multiple_of(f) {
            return false;
        }
        f += 1;
    }
    true
}

/// `ω^e` with `ω = e^{2πi/d}`; the exponent is reduced mod `d` first.
fn root_of_unity(d: usize, e: usize) -> C64 {
    C64::from_polar(1.0, TAU * ((e % d) as f64) / d as f64)
}

/// `|M_k⟩_i = d^{-1/2} Σ_j ω^{k j² + i j} |j⟩` for odd prime `d`. For `d = 2`
/// the quadratic term uses `e^{iπ k j²/d}` instead, since `ω^{k j²}` would
/// only relabel the `k = 0` basis.
pub fn mub_vector(d: usize, k: usize, i: usize) -> Result<StateVector> {
    if !is_prime(d) {
        return Err(Error::NotPrime(d));
    }
    if k >= d {
        return Err(Error::IndexOutOfRange { what: "MUB index", index: k, size: d });
    }
    if i >= d {
        return Err(Error::IndexOutOfRange { what: "outcome", index: i, size: d });
    }
    let norm = 1.0 / (d as f64).sqrt();
    let quad = if d == 2 { 1 } else { 2 };
    let amps = (0..d)
        .map(|j| root_of_unity(2 * d, (quad * k * j * j + 2 * i * j) % (2 * d)) * norm)
        .collect();
    StateVector::new(amps)
}

/// Unitary with `U_k|j⟩ = |M_k⟩_j`.
pub fn mub_unitary(d: usize, k: usize) -> Result<UnitaryMatrix> {
    let cols = (0..d).map(|j| mub_vector(d, k, j)).collect::<Result<Vec<_>>>()?;
    UnitaryMatrix::from_columns(&cols)
}

pub fn mub_measurement(d: usize, k: usize) -> Result<ProjectiveMeasurement> {
    ProjectiveMeasurement::from_unitary(&mub_unitary(d, k)?)
}

/// The first `count` bases of the prime-dimension MUB family.
pub fn mub_set(d: usize, count: usize, weights: Vec<f64>, phases: Vec<f64>) -> Result<MeasurementSet> {
    if !is_prime(d) {
        return Err(Error::NotPrime(d));
    }
    if count == 0 || count > d {
        return Err(Error::InvalidArgument(format!("MUB count must be in 1..={d}, got {count}")));
    }
    let ms = (0..count).map(|k| mub_measurement(d, k)).collect::<Result<Vec<_>>>()?;
    MeasurementSet::new(ms, weights, phases)
}

pub fn uniform_mub_set(d: usize, count: usize) -> Result<MeasurementSet> {
    mub_set(d, count, vec![1.0 / count as f64; count], vec![0.0; count])
}

/// `A` measurements of a common dimension together with the control
/// amplitudes `ζ_i = √w_i e^{i·phase_i}`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementSet {
    measurements: Vec<ProjectiveMeasurement>,
    weights: Vec<f64>,
    phases: Vec<f64>,
}

impl MeasurementSet {
    pub fn new(measurements: Vec<ProjectiveMeasurement>, weights: Vec<f64>, phases: Vec<f64>) -> Result<Self> {
        let dim = measurements.first().ok_or(Error::Empty("measurement set"))?.dim();
        for m in &measurements {
            if m.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: m.dim() });
            }
        }
        let n = measurements.len();
        if weights.len() != n {
            return Err(Error::InvalidWeights(format!("{} weights for {n} measurements", weights.len())));
        }
        if phases.len() != n {
            return Err(Error::InvalidWeights(format!("{} phases for {n} measurements", phases.len())));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::InvalidWeights(format!("weight {w} is negative or non-finite")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > tol::WEIGHT_SUM {
            return Err(Error::InvalidWeights(format!("weights sum to {total}")));
        }
        if phases.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidWeights("non-finite phase".into()));
        }
        let phases = phases.into_iter().map(wrap_phase).collect();
        Ok(Self { measurements, weights, phases })
    }

    pub fn uniform(measurements: Vec<ProjectiveMeasurement>) -> Result<Self> {
        let n = measurements.len().max(1);
        Self::new(measurements, vec![1.0 / n as f64; n], vec![0.0; n])
    }

    /// Same measurements with new weights and phases.
    pub fn with_control(&self, weights: Vec<f64>, phases: Vec<f64>) -> Result<Self> {
        Self::new(self.measurements.clone(), weights, phases)
    }

    /// Number of measurements `A`.
    pub fn len(&self) -> usize {
        self.measurements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.measurements.is_empty()
    }

    /// Measurement dimension `B`.
    pub fn dim(&self) -> usize {
        self.measurements[0].dim()
    }

    pub fn measurements(&self) -> &[ProjectiveMeasurement] {
        &self.measurements
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    /// `ζ_i = √w_i e^{i·phase_i}`.
    pub fn control_amplitudes(&self) -> Vec<C64> {
        self.weights
            .iter()
            .zip(&self.phases)
            .map(|(w, p)| C64::from_polar(w.sqrt(), *p))
            .collect()
    }
}
