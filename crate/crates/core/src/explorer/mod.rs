//! Experiments beyond the qubit closed form.
//!
//! A probe of dimension `B` has `2B − 2` real degrees of freedom, while
//! perfect guessing asks for `B(B − 1)` real equations (the off-diagonal
//! Gram entries). For `B > 2` the system is overdetermined, which is why a
//! generic set admits no perfect probe. The optimizer here measures how close
//! one can get.

mod qutrit;
pub mod simplex;
mod special;

pub use qutrit::{factorization_constant, factorization_identity_check, qutrit_mub_residuals};
pub use special::{
    block_structure_check, common_eigenstate, extend_with_fixed_vector, product_construction, tensor_sets,
    ProductConstruction,
};

use crate::error::{Error, Result};
use crate::game::{helstrom_success, pgm_success, post_selected_ensemble, GameInstance, PostSelectedEnsemble};
use crate::linalg::{orthonormalize, StateVector, C64};
use crate::measurements::{MeasurementSet, ProjectiveMeasurement};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use simplex::SimplexOptions;
use std::cmp::Ordering;

/// Hyperspherical chart over unit vectors of dimension `B` whose first
/// amplitude is real and non-negative.
///
/// Parameters are `B − 1` polar angles followed by `B − 1` phases:
/// `x_0 = cos θ_1`, `x_k = sin θ_1 ⋯ sin θ_k cos θ_{k+1} e^{iφ_k}`, with the
/// last amplitude dropping the cosine.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProbeParameterization {
    dim: usize,
}

impl ProbeParameterization {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Empty("probe dimension"));
        }
        Ok(Self { dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `2B − 2`.
    pub fn param_count(&self) -> usize {
        2 * self.dim - 2
    }

    pub fn decode(&self, params: &[f64]) -> Result<StateVector> {
        if params.len() != self.param_count() {
            return Err(Error::DimensionMismatch { expected: self.param_count(), found: params.len() });
        }
        let m = self.dim - 1;
        let (angles, phases) = params.split_at(m);
        let mut amps = Vec::with_capacity(self.dim);
        let mut radius = 1.0;
        for k in 0..self.dim {
            let r = if k < m { radius * angles[k].cos() } else { radius };
            if k < m {
                radius *= angles[k].sin();
            }
            let phase = if k == 0 { 0.0 } else { phases[k - 1] };
            amps.push(C64::from_polar(r, phase));
        }
        StateVector::unit(amps)
    }

    /// Inverse of [`decode`](Self::decode) after removing the global phase.
    pub fn encode(&self, probe: &StateVector) -> Result<Vec<f64>> {
        if probe.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: probe.dim() });
        }
        let n = probe.norm();
        let global = C64::from_polar(1.0 / n, -probe[0].arg());
        let x: Vec<C64> = probe.amps().iter().map(|a| a * global).collect();
        let m = self.dim - 1;
        let mut params = vec![0.0; 2 * m];
        for k in 0..m {
            let tail = x[k + 1..].iter().map(C64::norm_sqr).sum::<f64>().sqrt();
            params[k] = tail.atan2(x[k].norm());
            params[m + k] = x[k + 1].arg();
        }
        Ok(params)
    }
}

/// Number of real equations `B(B − 1)` in the off-diagonal Gram condition.
pub fn gram_constraint_count(outcomes: usize) -> usize {
    outcomes * (outcomes.saturating_sub(1))
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationResult {
    pub best_probe: StateVector,
    /// Helstrom success when `B = 2`, PGM success otherwise.
    pub best_success: f64,
    /// Largest off-diagonal `|⟨u_a|u_b⟩|` at `best_probe`.
    pub best_residual: f64,
    pub restarts_used: usize,
    pub seed: u64,
}

/// Helstrom success for two outcomes, PGM success otherwise.
pub fn guessing_success(e: &PostSelectedEnsemble) -> f64 {
    match e.outcomes() {
        2 => helstrom_success(e).expect("two outcomes"),
        _ => pgm_success(e),
    }
}

fn ensemble(set: &MeasurementSet, probe: StateVector) -> PostSelectedEnsemble {
    post_selected_ensemble(&GameInstance::new(probe, set.clone()).expect("probe dimension matches set"))
}

fn off_diagonal_sqr(e: &PostSelectedEnsemble) -> f64 {
    let g = e.gram();
    let mut s = 0.0;
    for a in 0..g.size() {
        for b in a + 1..g.size() {
            s += g.get(a, b).norm_sqr();
        }
    }
    s
}

/// Haar-random unit vector.
pub fn random_probe<R: Rng>(dim: usize, rng: &mut R) -> StateVector {
    loop {
        let amps: Vec<C64> = (0..dim)
            .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        if let Ok(v) = StateVector::normalized(amps) {
            return v;
        }
    }
}

/// Haar-random orthonormal basis, columns phase-fixed so that the first
/// nonzero entry is real positive.
pub fn random_basis<R: Rng>(d: usize, rng: &mut R) -> ProjectiveMeasurement {
    loop {
        let raw: Vec<StateVector> = (0..d)
            .map(|_| {
                let amps = (0..d)
                    .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                    .collect();
                StateVector::new(amps).expect("finite samples")
            })
            .collect();
        let Ok(q) = orthonormalize(&raw, 1e-8) else { continue };
        if q.len() != d {
            continue;
        }
        let fixed = q
            .into_iter()
            .map(|v| {
                let lead = v.amps().iter().find(|a| a.norm() > 1e-12).copied().unwrap_or(C64::new(1.0, 0.0));
                v.scale(C64::from_polar(1.0, -lead.arg()))
            })
            .collect();
        if let Ok(m) = ProjectiveMeasurement::new(fixed) {
            return m;
        }
    }
}

/// `a` Haar-random bases in dimension `d` with uniform weights and zero phases.
pub fn random_measurement_set(d: usize, a: usize, seed: u64) -> Result<MeasurementSet> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("dimension {d} < 2")));
    }
    if a == 0 {
        return Err(Error::Empty("measurement count"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    MeasurementSet::uniform((0..a).map(|_| random_basis(d, &mut rng)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Goal {
    MaxSuccess,
    MinResidual,
}

#[derive(Debug, Clone)]
struct RestartOutcome {
    probe: StateVector,
    success: f64,
    residual: f64,
    index: usize,
}

fn run_restart(set: &MeasurementSet, chart: ProbeParameterization, goal: Goal, iters: usize, seed: u64, index: usize) -> RestartOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = chart.encode(&random_probe(chart.dim(), &mut rng)).expect("dimension matches");
    let objective = |x: &[f64]| {
        let e = ensemble(set, chart.decode(x).expect("parameter count matches"));
        match goal {
            Goal::MaxSuccess => 1.0 - guessing_success(&e),
            Goal::MinResidual => off_diagonal_sqr(&e),
        }
    };
    let mut opts = SimplexOptions { max_iters: iters, ..Default::default() };
    let mut best = simplex::minimize(objective, &start, opts);
    // a fresh simplex around the incumbent guards against premature collapse
    for _ in 0..2 {
        opts.initial_step = 0.05;
        let again = simplex::minimize(objective, &best.x, opts);
        if again.value >= best.value {
            break;
        }
        best = again;
    }
    let probe = chart.decode(&best.x).expect("parameter count matches");
    let e = ensemble(set, probe.clone());
    RestartOutcome { success: guessing_success(&e), residual: e.max_overlap(), probe, index }
}

fn rank(goal: Goal, a: &RestartOutcome, b: &RestartOutcome) -> Ordering {
    let primary = match goal {
        Goal::MaxSuccess => b.success.total_cmp(&a.success).then(a.residual.total_cmp(&b.residual)),
        Goal::MinResidual => a.residual.total_cmp(&b.residual).then(b.success.total_cmp(&a.success)),
    };
    primary.then(a.index.cmp(&b.index))
}

fn multistart(set: &MeasurementSet, restarts: usize, iters: usize, seed: u64, goal: Goal) -> Result<OptimizationResult> {
    if restarts == 0 {
        return Err(Error::InvalidArgument("restarts must be at least 1".into()));
    }
    let chart = ProbeParameterization::new(set.dim())?;
    let best = (0..restarts)
        .into_par_iter()
        .map(|r| run_restart(set, chart, goal, iters, seed.wrapping_add(r as u64), r))
        .min_by(|a, b| rank(goal, a, b))
        .expect("at least one restart");
    Ok(OptimizationResult {
        best_probe: best.probe,
        best_success: best.success,
        best_residual: best.residual,
        restarts_used: restarts,
        seed,
    })
}

/// Multi-start simplex search for the probe that maximizes Bob's success.
/// Restart `r` uses seed `seed + r`.
pub fn maximize_success(set: &MeasurementSet, restarts: usize, iters: usize, seed: u64) -> Result<OptimizationResult> {
    multistart(set, restarts, iters, seed, Goal::MaxSuccess)
}

/// Same search, minimizing `Σ_{a<b} |⟨u_a|u_b⟩|²` instead. The result is ranked
/// by the largest off-diagonal overlap.
pub fn minimize_residual(set: &MeasurementSet, restarts: usize, iters: usize, seed: u64) -> Result<OptimizationResult> {
    multistart(set, restarts, iters, seed, Goal::MinResidual)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub samples: usize,
    pub min_residual: f64,
    pub best_probe: StateVector,
}

const SWEEP_CHUNK: usize = 10_000;

/// Smallest largest-overlap over `samples` Haar-random probes. Chunk `c` of
/// `10 000` probes is drawn from seed `seed + c`, so the result does not
/// depend on the thread count.
pub fn random_probe_sweep(set: &MeasurementSet, samples: usize, seed: u64) -> Result<SweepResult> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be at least 1".into()));
    }
    let chunks = samples.div_ceil(SWEEP_CHUNK);
    let (min_residual, best_probe) = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(c as u64));
            let n = SWEEP_CHUNK.min(samples - c * SWEEP_CHUNK);
            let mut best: Option<(f64, StateVector)> = None;
            for _ in 0..n {
                let p = random_probe(set.dim(), &mut rng);
                let r = ensemble(set, p.clone()).max_overlap();
                if best.as_ref().is_none_or(|(b, _)| r < *b) {
                    best = Some((r, p));
                }
            }
            best.expect("nonempty chunk")
        })
        .reduce_with(|a, b| if b.0 < a.0 { b } else { a })
        .expect("nonempty sweep");
    Ok(SweepResult { samples, min_residual, best_probe })
}
