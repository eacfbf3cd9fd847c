//! Closed-form perfect probe for qubit measurement sets.
//!
//! Each measurement is written as `|0⟩ → α_i|0⟩ + β_i|1⟩`,
//! `|1⟩ → β_i*|0⟩ − α_i|1⟩` with `α_i ≥ 0`, and the probe as
//! `a|0⟩ + b e^{iφ}|1⟩`. With weighted parameters `a_i = |ζ_i| α_i`,
//! `b_i = |ζ_i| |β_i|`, `φ_i = arg β_i`, orthogonality of the two
//! post-selected vectors splits into
//!
//! ```text
//! X_r b² + Y_r ab − X_r a² = 0
//! X_I b² + Y_I ab − X_I a² = 0
//! ```
//!
//! where `X_r = −Σ a_i b_i cos φ_i` and `X_I = −Σ a_i b_i sin φ_i` do not
//! depend on the probe, and `Y_r`, `Y_I` depend on it only through `φ`.
//! Eliminating the quadratic gives `tan φ = N / D`; the quadratic then fixes
//! `b / a`. Every candidate is checked against the post-selected ensemble
//! built by [`crate::game`].

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::game::{bob_basis, post_selected_ensemble, GameInstance, GuessBasis};
use crate::linalg::{inner_product, StateVector, C64};
use crate::measurements::{canonical_qubit, qubit_params_of, wrap_phase, MeasurementSet};
use crate::tol;

/// One weighted measurement `(a_i, b_i, φ_i)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverTriple {
    pub a: f64,
    pub b: f64,
    pub phi: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverInputs {
    pub triples: Vec<SolverTriple>,
}

impl SolverInputs {
    /// Multiplies every `a_i`, `b_i` by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            triples: self
                .triples
                .iter()
                .map(|t| SolverTriple { a: t.a * factor, b: t.b * factor, phi: t.phi })
                .collect(),
        }
    }
}

/// The four real coefficients at a given probe phase. `Z_r = −X_r` and
/// `Z_I = −X_I` are not stored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverCoefficients {
    pub x_r: f64,
    pub x_i: f64,
    pub y_r: f64,
    pub y_i: f64,
}

/// A probe `a|0⟩ + b e^{iφ}|1⟩` proposed by the closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeCandidate {
    pub a: f64,
    pub b: f64,
    pub phi: f64,
}

impl ProbeCandidate {
    pub fn probe(&self) -> StateVector {
        StateVector::new(vec![C64::new(self.a, 0.0), C64::from_polar(self.b, self.phi)]).expect("finite")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QubitSolution {
    pub probe: StateVector,
    pub a: f64,
    pub b: f64,
    /// Phase `φ` of the probe's second amplitude, in `[0, 2π)`.
    pub phase: f64,
    /// `|⟨u_0|u_1⟩|` of the post-selected ensemble at the returned probe.
    pub residual: f64,
    pub bob_basis: GuessBasis,
    /// The measurement set the solution refers to, in canonical phase
    /// convention.
    pub set: MeasurementSet,
    /// True if some input basis vectors had to be rephased to reach the
    /// canonical convention.
    pub rephased: bool,
}

/// Rephases every basis vector to the `|0⟩ → (α, β)`, `|1⟩ → (β*, −α)`
/// convention. Weights and control phases are kept.
pub fn canonicalize(set: &MeasurementSet) -> Result<(MeasurementSet, bool)> {
    let mut rephased = false;
    let mut out = Vec::with_capacity(set.len());
    for m in set.measurements() {
        let c = canonical_qubit(m)?;
        rephased |= c.basis().iter().zip(m.basis()).any(|(x, y)| x.max_abs_diff(y) > tol::CONSTRUCTOR);
        out.push(c);
    }
    let canon = MeasurementSet::new(out, set.weights().to_vec(), set.phases().to_vec())?;
    Ok((canon, rephased))
}

/// `a_i = |ζ_i| α_i`, `b_i = |ζ_i| |β_i|`, `φ_i = arg β_i`. Control phases
/// do not enter.
pub fn reparameterize(set: &MeasurementSet) -> Result<SolverInputs> {
    if set.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: set.dim() });
    }
    let triples = set
        .measurements()
        .iter()
        .zip(set.weights())
        .map(|(m, w)| {
            let (p, _) = qubit_params_of(m)?;
            let z = w.sqrt();
            Ok(SolverTriple { a: z * p.a, b: z * p.b, phi: p.phi })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SolverInputs { triples })
}

/// `(X_r, X_I) = (−Σ a_i b_i cos φ_i, −Σ a_i b_i sin φ_i)`.
pub fn compute_x(inputs: &SolverInputs) -> (f64, f64) {
    inputs.triples.iter().fold((0.0, 0.0), |(xr, xi), t| {
        let ab = t.a * t.b;
        (xr - ab * t.phi.cos(), xi - ab * t.phi.sin())
    })
}

/// `Y_r = Σ [−a_i² cos φ + b_i² cos(φ − 2φ_i)]`,
/// `Y_I = Σ [−a_i² sin φ − b_i² sin(φ − 2φ_i)]`.
pub fn compute_y(inputs: &SolverInputs, phi: f64) -> (f64, f64) {
    inputs.triples.iter().fold((0.0, 0.0), |(yr, yi), t| {
        let (a2, b2) = (t.a * t.a, t.b * t.b);
        let d = phi - 2.0 * t.phi;
        (yr - a2 * phi.cos() + b2 * d.cos(), yi - a2 * phi.sin() - b2 * d.sin())
    })
}

pub fn coefficients(inputs: &SolverInputs, phi: f64) -> SolverCoefficients {
    let (x_r, x_i) = compute_x(inputs);
    let (y_r, y_i) = compute_y(inputs, phi);
    SolverCoefficients { x_r, x_i, y_r, y_i }
}

/// Numerator and denominator of `tan φ = N / D`.
pub fn phase_fraction(inputs: &SolverInputs, x_r: f64, x_i: f64) -> (f64, f64) {
    let mut num = 0.0;
    let mut den = 0.0;
    for t in &inputs.triples {
        let (a2, b2) = (t.a * t.a, t.b * t.b);
        let (c, s) = (t.phi.cos(), t.phi.sin());
        num += -a2 * x_i + b2 * c * c * x_i - b2 * s * s * x_i - 2.0 * b2 * c * s * x_r;
        den += -a2 * x_r + b2 * s * s * x_r - b2 * c * c * x_r - 2.0 * b2 * c * s * x_i;
    }
    (num, den)
}

/// Both arctangent branches `{φ*, φ* + π}` in `[0, 2π)`, ascending.
///
/// A vanishing denominator gives `{π/2, 3π/2}`; if the numerator vanishes
/// too, the phase is unconstrained and `{0}` is returned.
pub fn solve_phase(inputs: &SolverInputs, x_r: f64, x_i: f64) -> Vec<f64> {
    let (num, den) = phase_fraction(inputs, x_r, x_i);
    let base = if den.abs() <= tol::DEGENERATE {
        if num.abs() <= tol::DEGENERATE {
            return vec![0.0];
        }
        PI / 2.0
    } else {
        (num / den).atan()
    };
    let mut out = vec![wrap_phase(base), wrap_phase(base + PI)];
    out.sort_by(f64::total_cmp);
    out
}

/// Root `b/a ≥ 0` of `X t² + Y t − X = 0`, then `a = 1/√(1 + t²)`.
///
/// The roots multiply to `−1`, so exactly one is positive when `X ≠ 0`:
/// `t = (−Y + sign(X)√(Y² + 4X²)) / 2X`. It is evaluated in whichever of
/// two algebraically equal forms avoids cancellation.
pub fn solve_amplitudes(x: f64, y: f64) -> Result<(f64, f64)> {
    if x.abs() <= tol::DEGENERATE {
        return Err(Error::DegenerateQuadratic(x));
    }
    let s = x.signum();
    let root = y.hypot(2.0 * x);
    let t = if y * s >= 0.0 { 2.0 * x / (y + s * root) } else { (-y + s * root) / (2.0 * x) };
    let a = 1.0 / t.hypot(1.0);
    Ok((a, t * a))
}

/// `Σ_i (a a_i + β b_i e^{−iφ_i})* (a b_i e^{iφ_i} − β a_i)` with
/// `β = b e^{iφ}`: the overlap `⟨u_0|u_1⟩` written in the solver's
/// parameters.
pub fn orthogonality_sum(inputs: &SolverInputs, c: &ProbeCandidate) -> C64 {
    let alpha = C64::new(c.a, 0.0);
    let beta = C64::from_polar(c.b, c.phi);
    inputs
        .triples
        .iter()
        .map(|t| {
            let beta_i = C64::from_polar(t.b, t.phi);
            let first = alpha * t.a + beta * beta_i.conj();
            let second = alpha * beta_i - beta * t.a;
            first.conj() * second
        })
        .sum()
}

/// Every candidate the closed form proposes, before verification: one per
/// phase branch, plus `(1, 0)` and `(0, 1)` when `X_r` and `X_I` both vanish.
pub fn closed_form_candidates(inputs: &SolverInputs) -> Vec<ProbeCandidate> {
    let (x_r, x_i) = compute_x(inputs);
    let mut out = Vec::new();
    for phi in solve_phase(inputs, x_r, x_i) {
        let (y_r, y_i) = compute_y(inputs, phi);
        // the imaginary equation is proportional to the real one once φ
        // solves the phase condition; use whichever has the larger leading
        // coefficient
        let (x, y) = if x_r.abs() >= x_i.abs() { (x_r, y_r) } else { (x_i, y_i) };
        if let Ok((a, b)) = solve_amplitudes(x, y) {
            out.push(ProbeCandidate { a, b, phi });
        }
    }
    if x_r.abs() <= tol::DEGENERATE && x_i.abs() <= tol::DEGENERATE {
        out.push(ProbeCandidate { a: 1.0, b: 0.0, phi: 0.0 });
        out.push(ProbeCandidate { a: 0.0, b: 1.0, phi: 0.0 });
    }
    out
}

/// `|⟨u_0|u_1⟩|` for a candidate probe against `set`.
pub fn ensemble_residual(set: &MeasurementSet, c: &ProbeCandidate) -> Result<f64> {
    let g = GameInstance::new(c.probe(), set.clone())?;
    let e = post_selected_ensemble(&g);
    Ok(inner_product(&e.vectors()[0], &e.vectors()[1])?.norm())
}

/// Perfect probe and Bob's basis for a qubit measurement set.
///
/// The set is first brought to the canonical phase convention. Candidates
/// are ranked by residual, residuals within `1e-12` of each other count as
/// tied, and ties go to the smaller phase.
pub fn solve(set: &MeasurementSet) -> Result<QubitSolution> {
    let (canon, rephased) = canonicalize(set)?;
    let inputs = reparameterize(&canon)?;
    let mut best: Option<(ProbeCandidate, f64)> = None;
    for c in closed_form_candidates(&inputs) {
        let r = ensemble_residual(&canon, &c)?;
        best = match best {
            None => Some((c, r)),
            Some((bc, br)) => {
                let better = if (r - br).abs() <= 1e-12 { c.phi < bc.phi } else { r < br };
                Some(if better { (c, r) } else { (bc, br) })
            }
        };
    }
    let (c, residual) = best.ok_or(Error::NoSolution(f64::INFINITY))?;
    if residual > tol::CHECK {
        return Err(Error::NoSolution(residual));
    }
    let probe = c.probe();
    let g = GameInstance::new(probe.clone(), canon.clone())?;
    let bob_basis = bob_basis(&post_selected_ensemble(&g), tol::CHECK)?;
    Ok(QubitSolution {
        probe,
        a: c.a,
        b: c.b,
        phase: c.phi,
        residual,
        bob_basis,
        set: canon,
        rephased,
    })
}
