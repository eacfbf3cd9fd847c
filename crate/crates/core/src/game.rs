//! The guessing game: joint state, post-selected ensemble, success
//! probabilities and a seeded round simulator.
//!
//! With control amplitudes `ζ_i` and measurement bases `|M_i⟩_a`, the state
//! after Alice's controlled operation is `Σ_i ζ_i |i⟩ ⊗ U_i†|ψ⟩`. Projecting
//! her register on outcome `a` leaves Bob the unnormalized vector
//! `u_a[i] = ζ_i ⟨M_i,a|ψ⟩`; its squared norm is the probability of `a`.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{self, complete_basis, gram, inner_product, GramMatrix, StateVector, C64};
use crate::measurements::{MeasurementSet, ProjectiveMeasurement};
use crate::tol;

/// Bob's probe together with Alice's measurement set.
#[derive(Debug, Clone, PartialEq)]
pub struct GameInstance {
    probe: StateVector,
    set: MeasurementSet,
}

impl GameInstance {
    pub fn new(probe: StateVector, set: MeasurementSet) -> Result<Self> {
        if probe.dim() != set.dim() {
            return Err(Error::DimensionMismatch { expected: set.dim(), found: probe.dim() });
        }
        if !probe.is_normalized() {
            return Err(Error::NotNormalized(probe.norm()));
        }
        Ok(Self { probe, set })
    }

    pub fn probe(&self) -> &StateVector {
        &self.probe
    }

    pub fn set(&self) -> &MeasurementSet {
        &self.set
    }
}

/// `Σ_i ζ_i |i⟩`.
pub fn control_state(set: &MeasurementSet) -> StateVector {
    StateVector::new(set.control_amplitudes()).expect("weights and phases are finite")
}

/// `Σ_i ζ_i |i⟩ ⊗ U_i†|ψ⟩`, control-major.
pub fn joint_state(g: &GameInstance) -> StateVector {
    let zeta = control_state(&g.set);
    let mut amps = Vec::with_capacity(g.set.len() * g.set.dim());
    for (i, m) in g.set.measurements().iter().enumerate() {
        let rotated = m.unitary().dagger().apply(&g.probe).expect("dims checked in GameInstance::new");
        amps.extend(rotated.amps().iter().map(|z| zeta[i] * z));
    }
    StateVector::new(amps).expect("finite")
}

/// The `B` unnormalized vectors Bob must tell apart. Norms carry the priors.
#[derive(Debug, Clone, PartialEq)]
pub struct PostSelectedEnsemble {
    vectors: Vec<StateVector>,
    probs: Vec<f64>,
}

impl PostSelectedEnsemble {
    /// Checks that the squared norms sum to one within `1e-10`.
    pub fn from_vectors(vectors: Vec<StateVector>) -> Result<Self> {
        let dim = vectors.first().ok_or(Error::Empty("ensemble"))?.dim();
        for v in &vectors {
            if v.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: v.dim() });
            }
        }
        let probs: Vec<f64> = vectors.iter().map(StateVector::norm_sqr).collect();
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > tol::CONSTRUCTOR {
            return Err(Error::NotNormalized(total.sqrt()));
        }
        Ok(Self { vectors, probs })
    }

    pub fn vectors(&self) -> &[StateVector] {
        &self.vectors
    }

    /// `p_a = ||u_a||²`.
    pub fn outcome_probs(&self) -> &[f64] {
        &self.probs
    }

    /// Number of Alice outcomes `B`.
    pub fn outcomes(&self) -> usize {
        self.vectors.len()
    }

    /// Control-register dimension `A`.
    pub fn dim(&self) -> usize {
        self.vectors[0].dim()
    }

    pub fn gram(&self) -> GramMatrix {
        gram(&self.vectors).expect("ensemble vectors share a dimension")
    }

    /// `max_{a≠b} |⟨u_a|u_b⟩|`.
    pub fn max_overlap(&self) -> f64 {
        self.gram().max_off_diagonal()
    }
}

/// `u_a[i] = ζ_i ⟨M_i,a|ψ⟩`.
pub fn post_selected_ensemble(g: &GameInstance) -> PostSelectedEnsemble {
    let zeta = g.set.control_amplitudes();
    let vectors = (0..g.set.dim())
        .map(|a| {
            let amps = g
                .set
                .measurements()
                .iter()
                .zip(&zeta)
                .map(|(m, z)| z * inner_product(m.vector(a), &g.probe).expect("dims checked"))
                .collect();
            StateVector::new(amps).expect("finite")
        })
        .collect::<Vec<_>>();
    let probs = vectors.iter().map(StateVector::norm_sqr).collect();
    PostSelectedEnsemble { vectors, probs }
}

/// True iff every pair of post-selected vectors overlaps by at most `tol`.
pub fn perfect_guess_check(e: &PostSelectedEnsemble, tol: f64) -> bool {
    e.max_overlap() <= tol
}

/// Optimal success for two pure states with priors folded into the norms:
/// `½(1 + √(1 − 4|⟨u_0|u_1⟩|²))`.
pub fn helstrom_success(e: &PostSelectedEnsemble) -> Result<f64> {
    if e.outcomes() != 2 {
        return Err(Error::OutcomeCount { required: 2, found: e.outcomes() });
    }
    let o = inner_product(&e.vectors[0], &e.vectors[1])?.norm_sqr();
    Ok(0.5 * (1.0 + (1.0 - 4.0 * o).max(0.0).sqrt()))
}

/// Pretty-good-measurement success `Σ_a |u_a† S^{-1/2} u_a|²` with
/// `S = Σ_a u_a u_a†` inverted on its support.
pub fn pgm_success(e: &PostSelectedEnsemble) -> f64 {
    let s = linalg::outer_sum(&e.vectors).expect("nonempty ensemble");
    let r = linalg::inverse_sqrt_psd(s, tol::EIGEN_FLOOR);
    let n = e.dim();
    e.vectors
        .iter()
        .map(|u| {
            let mut q = C64::new(0.0, 0.0);
            for i in 0..n {
                for j in 0..n {
                    q += u[i].conj() * r[(i, j)] * u[j];
                }
            }
            q.norm_sqr()
        })
        .sum()
}

/// Bob's measurement on the control register plus the outcome he announces
/// for each basis vector.
#[derive(Debug, Clone, PartialEq)]
pub struct GuessBasis {
    measurement: ProjectiveMeasurement,
    guesses: Vec<usize>,
}

impl GuessBasis {
    pub fn new(measurement: ProjectiveMeasurement, guesses: Vec<usize>) -> Result<Self> {
        if guesses.len() != measurement.dim() {
            return Err(Error::DimensionMismatch { expected: measurement.dim(), found: guesses.len() });
        }
        Ok(Self { measurement, guesses })
    }

    /// Bob announces the index of the basis vector he observed.
    pub fn identity_labels(measurement: ProjectiveMeasurement) -> Self {
        let guesses = (0..measurement.dim()).collect();
        Self { measurement, guesses }
    }

    pub fn measurement(&self) -> &ProjectiveMeasurement {
        &self.measurement
    }

    pub fn guesses(&self) -> &[usize] {
        &self.guesses
    }
}

/// Basis that distinguishes a pairwise-orthogonal ensemble perfectly.
///
/// When `B <= A`, basis vector `a` is `u_a / ||u_a||` (or a completion vector
/// if `u_a` vanishes) and Bob announces `a`. When `B > A`, at most `A` of the
/// `u_a` are nonzero; they come first, labelled by their outcome.
pub fn bob_basis(e: &PostSelectedEnsemble, tol: f64) -> Result<GuessBasis> {
    let overlap = e.max_overlap();
    if overlap > tol {
        return Err(Error::NotOrthogonal(overlap));
    }
    let dim = e.dim();
    let min_norm = tol::PROB_FLOOR.sqrt();
    let mut accepted: Vec<(usize, StateVector)> = Vec::new();
    for (a, u) in e.vectors.iter().enumerate() {
        if u.norm() <= min_norm || accepted.len() == dim {
            continue;
        }
        let mut w = u.clone();
        for _ in 0..2 {
            for (_, q) in &accepted {
                let c = inner_product(q, &w)?;
                w = w.axpy(-c, q)?;
            }
        }
        accepted.push((a, w.normalize()?));
    }
    let partial: Vec<StateVector> = accepted.iter().map(|(_, v)| v.clone()).collect();
    let full = complete_basis(&partial, dim)?;
    let mut fill = full[accepted.len()..].iter().cloned();

    let (basis, guesses) = if e.outcomes() <= dim {
        let mut basis = Vec::with_capacity(dim);
        for k in 0..dim {
            match accepted.iter().find(|(a, _)| *a == k) {
                Some((_, v)) => basis.push(v.clone()),
                None => basis.push(fill.next().expect("completion has enough vectors")),
            }
        }
        let guesses = (0..dim).map(|k| if k < e.outcomes() { k } else { 0 }).collect();
        (basis, guesses)
    } else {
        let first = accepted.first().map_or(0, |(a, _)| *a);
        let mut guesses: Vec<usize> = accepted.iter().map(|(a, _)| *a).collect();
        guesses.resize(dim, first);
        (full, guesses)
    };
    GuessBasis::new(ProjectiveMeasurement::new(basis)?, guesses)
}

fn check_basis(g: &GameInstance, basis: &GuessBasis) -> Result<()> {
    if basis.measurement.dim() != g.set.len() {
        return Err(Error::DimensionMismatch { expected: g.set.len(), found: basis.measurement.dim() });
    }
    Ok(())
}

/// `Σ_a Σ_{k: guess(k) = a} |⟨e_k|u_a⟩|²`.
pub fn exact_success(g: &GameInstance, basis: &GuessBasis) -> Result<f64> {
    check_basis(g, basis)?;
    let e = post_selected_ensemble(g);
    let mut total = 0.0;
    for (k, v) in basis.measurement.basis().iter().enumerate() {
        if let Some(u) = e.vectors.get(basis.guesses[k]) {
            total += inner_product(v, u)?.norm_sqr();
        }
    }
    Ok(total)
}

/// Per-outcome sampling tables with sub-floor probabilities snapped to zero.
struct RoundSampler {
    alice: WeightedIndex<f64>,
    bob: Vec<Option<WeightedIndex<f64>>>,
    guesses: Vec<usize>,
}

impl RoundSampler {
    fn new(g: &GameInstance, basis: &GuessBasis) -> Result<Self> {
        check_basis(g, basis)?;
        let e = post_selected_ensemble(g);
        let snap = |p: f64| if p < tol::PROB_FLOOR { 0.0 } else { p };
        let alice = WeightedIndex::new(e.probs.iter().map(|&p| snap(p)))
            .map_err(|err| Error::InvalidArgument(format!("outcome distribution: {err}")))?;
        let bob = e
            .vectors
            .iter()
            .zip(&e.probs)
            .map(|(u, &p)| {
                if snap(p) == 0.0 {
                    return Ok(None);
                }
                let weights = basis
                    .measurement
                    .basis()
                    .iter()
                    .map(|v| Ok(snap(inner_product(v, u)?.norm_sqr() / p)))
                    .collect::<Result<Vec<f64>>>()?;
                Ok(WeightedIndex::new(weights).ok())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { alice, bob, guesses: basis.guesses.clone() })
    }

    fn hits(&self, n: u64, seed: u64) -> u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut hits = 0;
        for _ in 0..n {
            let a = self.alice.sample(&mut rng);
            if let Some(dist) = &self.bob[a] {
                if self.guesses[dist.sample(&mut rng)] == a {
                    hits += 1;
                }
            }
        }
        hits
    }
}

/// Plays `n` rounds: Alice's outcome from the Born rule of the joint state,
/// then Bob's outcome from measuring the normalized `u_a` in `basis`.
/// Returns the fraction of rounds with a correct guess.
pub fn simulate_rounds(g: &GameInstance, basis: &GuessBasis, n: u64, seed: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("number of rounds must be positive".into()));
    }
    let sampler = RoundSampler::new(g, basis)?;
    Ok(sampler.hits(n, seed) as f64 / n as f64)
}

/// Same as [`simulate_rounds`] split over `shards` threads; shard `s` uses
/// seed `seed + s` and gets `n / shards` rounds (the first `n % shards`
/// shards get one more).
pub fn simulate_rounds_sharded(g: &GameInstance, basis: &GuessBasis, n: u64, seed: u64, shards: u64) -> Result<f64> {
    if n == 0 || shards == 0 {
        return Err(Error::InvalidArgument("rounds and shards must be positive".into()));
    }
    let sampler = RoundSampler::new(g, basis)?;
    let hits: u64 = (0..shards)
        .into_par_iter()
        .map(|s| {
            let share = n / shards + u64::from(s < n % shards);
            sampler.hits(share, seed.wrapping_add(s))
        })
        .sum();
    Ok(hits as f64 / n as f64)
}
