//! Experiment runners behind the `qguess` binary.
//!
//! Each runner returns the text it wants printed; CSV output goes to the
//! requested file or into the returned text. Errors carry the process exit
//! code: 1 for usage and spec problems, 2 for mathematical failures.

pub mod format;
pub mod spec;

use format::{fmt_complex, fmt_g};
use qguess::explorer::{maximize_success, random_measurement_set, OptimizationResult};
use qguess::game::{bob_basis, exact_success, post_selected_ensemble, simulate_rounds};
use qguess::measurements::mub_unitary;
use qguess::qubit_solver::solve;
use qguess::{GameInstance, GuessBasis, MeasurementSet};
use sha2::{Digest, Sha256};
use spec::{ExperimentSpec, RunParams};
use std::fmt::Write as _;
use std::fs::OpenOptions;
use std::path::Path;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Math(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Math(_) => 2,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn math(e: qguess::Error) -> CliError {
    CliError::Math(e.to_string())
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Usage(format!("{}: {e}", path.display()))
}

/// First 16 hex digits of the SHA-256 of the spec text.
pub fn spec_hash(text: &str) -> String {
    Sha256::digest(text.as_bytes()).iter().take(8).map(|b| format!("{b:02x}")).collect()
}

fn describe_basis(out: &mut String, basis: &GuessBasis) {
    for (v, guess) in basis.measurement().basis().iter().zip(basis.guesses()) {
        let entries: Vec<String> = v.amps().iter().map(|c| fmt_complex(*c)).collect();
        let _ = writeln!(out, "  guess {guess}: [{}]", entries.join(", "));
    }
}

/// Closed-form perfect probe for a qubit spec.
pub fn run_solve(spec: &ExperimentSpec, tol: f64) -> Result<String> {
    if spec.dimension != 2 {
        return Err(CliError::Usage(format!("solve needs a qubit spec, got dimension {}", spec.dimension)));
    }
    let set = spec.measurement_set()?;
    let sol = solve(&set).map_err(math)?;
    if sol.residual > tol {
        return Err(CliError::Math(format!("residual {:e} above tolerance {tol:e}", sol.residual)));
    }
    let mut out = String::new();
    let _ = writeln!(out, "a={:.6} b={:.6} phi={:.6}", sol.a, sol.b, sol.phase);
    let _ = writeln!(out, "residual={}", fmt_g(sol.residual, 12));
    if sol.rephased {
        let _ = writeln!(out, "note: basis vectors were rephased to the |0> -> (a, b), |1> -> (b*, -a) convention");
    }
    let _ = writeln!(out, "bob_basis:");
    describe_basis(&mut out, &sol.bob_basis);
    Ok(out)
}

const OPTIMIZE_HEADER: [&str; 6] = ["spec_hash", "B", "A", "best_success", "best_residual", "seed"];

/// Multi-start probe optimization; appends one CSV row to `out` when given.
pub fn run_optimize(spec: &ExperimentSpec, spec_text: &str, run: RunParams, out: Option<&Path>) -> Result<String> {
    let set = spec.measurement_set()?;
    let r = maximize_success(&set, run.restarts, run.iters, run.seed).map_err(|e| CliError::Usage(e.to_string()))?;
    let hash = spec_hash(spec_text);
    if let Some(path) = out {
        let fresh = std::fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
        let file = OpenOptions::new().create(true).append(true).open(path).map_err(|e| io_err(path, e))?;
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(file);
        if fresh {
            w.write_record(OPTIMIZE_HEADER).map_err(|e| io_err(path, e))?;
        }
        w.write_record([
            hash.clone(),
            set.dim().to_string(),
            set.len().to_string(),
            fmt_g(r.best_success, 12),
            fmt_g(r.best_residual, 12),
            r.seed.to_string(),
        ])
        .map_err(|e| io_err(path, e))?;
        w.flush().map_err(|e| io_err(path, e))?;
    }
    let mut text = String::new();
    let _ = writeln!(text, "spec={hash} B={} A={}", set.dim(), set.len());
    let _ = writeln!(text, "best_success={}", fmt_g(r.best_success, 12));
    let _ = writeln!(text, "best_residual={}", fmt_g(r.best_residual, 12));
    let _ = writeln!(text, "restarts={} seed={}", r.restarts_used, r.seed);
    let probe: Vec<String> = r.best_probe.amps().iter().map(|c| fmt_complex(*c)).collect();
    let _ = writeln!(text, "probe=[{}]", probe.join(", "));
    Ok(text)
}

/// Plays rounds for the spec's probe and guess basis. Without a probe, a
/// qubit spec is solved first; without a guess basis, Bob measures in the
/// basis built from the post-selected states.
pub fn run_simulate(spec: &ExperimentSpec, run: RunParams) -> Result<String> {
    if run.rounds == 0 {
        return Err(CliError::Usage("rounds must be positive".into()));
    }
    let mut set = spec.measurement_set()?;
    let mut note = None;
    let probe = match spec.probe_state()? {
        Some(p) => p,
        None if spec.dimension == 2 => {
            let sol = solve(&set).map_err(math)?;
            set = sol.set;
            note = Some("probe from the closed-form solver");
            sol.probe
        }
        None => return Err(CliError::Usage("spec has no probe".into())),
    };
    let g = GameInstance::new(probe, set).map_err(|e| CliError::Usage(e.to_string()))?;
    let basis = match spec.guess_basis()? {
        Some(b) => b,
        None => bob_basis(&post_selected_ensemble(&g), run.tol).map_err(math)?,
    };
    let rate = simulate_rounds(&g, &basis, run.rounds, run.seed).map_err(|e| CliError::Usage(e.to_string()))?;
    let exact = exact_success(&g, &basis).map_err(|e| CliError::Usage(e.to_string()))?;
    let sigma = (exact * (1.0 - exact) / run.rounds as f64).max(0.0).sqrt();
    let mut out = String::new();
    if let Some(n) = note {
        let _ = writeln!(out, "note: {n}");
    }
    let _ = writeln!(out, "rate={rate:.6}");
    let _ = writeln!(out, "exact={exact:.6}");
    let _ = writeln!(out, "rounds={} seed={}", run.rounds, run.seed);
    if (rate - exact).abs() > 4.0 * sigma + 1e-12 {
        return Err(CliError::Math(format!("{out}empirical rate outside 4 sigma ({sigma:e}) of the exact value")));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanParam {
    /// Weight of the first measurement; the others keep their proportions.
    Weight0,
    /// Seed of a Haar-random set with the spec's dimension and measurement count.
    Seed,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRange {
    pub from: f64,
    pub to: f64,
    pub points: usize,
}

impl ScanRange {
    pub fn values(&self) -> Result<Vec<f64>> {
        match self.points {
            0 => Err(CliError::Usage("empty scan range".into())),
            1 => Ok(vec![self.from]),
            n => Ok((0..n).map(|i| self.from + (self.to - self.from) * i as f64 / (n - 1) as f64).collect()),
        }
    }
}

fn reweighted(set: &MeasurementSet, w0: f64) -> Result<MeasurementSet> {
    if !(0.0..=1.0).contains(&w0) {
        return Err(CliError::Usage(format!("weight {w0} outside [0, 1]")));
    }
    let n = set.len();
    if n < 2 {
        return Err(CliError::Usage("weight0 scan needs at least two measurements".into()));
    }
    let rest: f64 = set.weights()[1..].iter().sum();
    let mut weights = vec![w0];
    for w in &set.weights()[1..] {
        weights.push(if rest > 0.0 { w / rest * (1.0 - w0) } else { (1.0 - w0) / (n - 1) as f64 });
    }
    set.with_control(weights, set.phases().to_vec()).map_err(|e| CliError::Usage(e.to_string()))
}

/// One optimization per sweep point. Returns the CSV text, which is also
/// written to `out` when given.
pub fn run_scan(spec: &ExperimentSpec, param: ScanParam, range: ScanRange, run: RunParams, out: Option<&Path>) -> Result<String> {
    let template = spec.measurement_set()?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["param", "best_success", "residual"]).expect("in-memory write");
    for x in range.values()? {
        let set = match param {
            ScanParam::Weight0 => reweighted(&template, x)?,
            ScanParam::Seed => {
                if x < 0.0 {
                    return Err(CliError::Usage(format!("negative seed {x}")));
                }
                random_measurement_set(template.dim(), template.len(), x.round() as u64)
                    .map_err(|e| CliError::Usage(e.to_string()))?
            }
        };
        let OptimizationResult { best_success, best_residual, .. } =
            maximize_success(&set, run.restarts, run.iters, run.seed).map_err(|e| CliError::Usage(e.to_string()))?;
        w.write_record([fmt_g(x, 12), fmt_g(best_success, 12), fmt_g(best_residual, 12)])
            .expect("in-memory write");
    }
    let text = String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 csv");
    if let Some(path) = out {
        std::fs::write(path, &text).map_err(|e| io_err(path, e))?;
    }
    Ok(text)
}

/// The matrices `U_k`, `k = 0..d`, one row per line.
pub fn run_mub(dim: usize) -> Result<String> {
    let mut out = String::new();
    for k in 0..dim {
        let u = mub_unitary(dim, k).map_err(|e| CliError::Usage(e.to_string()))?;
        let _ = writeln!(out, "U_{k}:");
        for r in 0..dim {
            let row: Vec<String> = (0..dim).map(|c| fmt_complex(u.get(r, c))).collect();
            let _ = writeln!(out, "  {}", row.join(" "));
        }
    }
    Ok(out)
}
