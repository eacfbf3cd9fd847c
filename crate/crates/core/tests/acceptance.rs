//! Acceptance suite. Prints one line per criterion and exits nonzero if any fails.

use qguess::explorer::{
    factorization_identity_check, gram_constraint_count, maximize_success, minimize_residual,
    product_construction, qutrit_mub_residuals, random_basis, random_measurement_set, random_probe,
    random_probe_sweep, simplex, ProbeParameterization,
};
use qguess::game::{
    exact_success, helstrom_success, perfect_guess_check, pgm_success, post_selected_ensemble, simulate_rounds,
};
use qguess::linalg::{inner_product, orthonormalize};
use qguess::measurements::{mub_unitary, mub_vector, qubit_measurement, uniform_mub_set};
use qguess::qubit_solver::solve;
use qguess::{GameInstance, MeasurementSet, PostSelectedEnsemble, QubitMeasurementParams, StateVector, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::process::ExitCode;
use std::time::{Duration, Instant};

const SOLVER_RESIDUAL: f64 = 1e-9;
const PROBE_MATCH: f64 = 1e-9;
const PARAM_MATCH: f64 = 1e-12;
const IMPOSSIBILITY_FLOOR: f64 = 1e-6;
const IDENTITY_TOL: f64 = 1e-12;
const MUB_OVERLAP_TOL: f64 = 1e-10;
const MUB_MATRIX_TOL: f64 = 1e-12;
const PERFECT_CHECK: f64 = 1e-9;
const PGM_SLACK: f64 = 1e-12;
const HELSTROM_ORACLE_TOL: f64 = 1e-6;

// Minimum over unit probes of max_k |LHS_k| on the β = γ and β = −γ branches,
// from a 400×400 grid refined by a local simplex search. Frozen at first run,
// where they came out as 1.80000 and 1.28571.
const BRANCH_EQ_BASELINE: f64 = 1.799;
const BRANCH_NEG_BASELINE: f64 = 1.28;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Debug>(err: E) -> String {
    format!("{err:?}")
}

fn random_qubit_set(rng: &mut ChaCha8Rng) -> MeasurementSet {
    let a = rng.random_range(2..=6);
    random_qubit_set_of_size(rng, a)
}

fn random_qubit_set_of_size(rng: &mut ChaCha8Rng, a: usize) -> MeasurementSet {
    let ms = (0..a).map(|_| random_basis(2, rng)).collect();
    let raw: Vec<f64> = (0..a).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let phases = (0..a).map(|_| rng.random_range(0.0..TAU)).collect();
    MeasurementSet::new(ms, raw.iter().map(|w| w / total).collect(), phases).unwrap()
}

fn ac1_qubit_universality() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    for k in 0..1000 {
        let set = random_qubit_set(&mut rng);
        let sol = solve(&set).map_err(|err| format!("set {k}: {err}"))?;
        worst = worst.max(sol.residual);
        ensure(sol.residual <= SOLVER_RESIDUAL, || format!("set {k}: residual {:e}", sol.residual))?;
        let g = GameInstance::new(sol.probe.clone(), sol.set.clone()).map_err(e)?;
        let rate = simulate_rounds(&g, &sol.bob_basis, 10_000, k).map_err(e)?;
        ensure(rate == 1.0, || format!("set {k}: simulated rate {rate}"))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!("1000 sets, worst residual {worst:.2e}, {elapsed:.1?}"))
}

/// `⟨u_0|u_1⟩` for the uniform {Z, X} set in canonical phase convention,
/// written out by hand.
fn zx_overlap(a: f64, phi: f64) -> f64 {
    let p0 = C64::new(a, 0.0);
    let p1 = C64::from_polar((1.0 - a * a).max(0.0).sqrt(), phi);
    (0.5 * (-p0.conj() * p1 + 0.5 * (p0 + p1).conj() * (p0 - p1))).norm()
}

fn ac2_zx_instance() -> Outcome {
    let h = 0.5f64.sqrt();
    let z = qubit_measurement(QubitMeasurementParams::new(1.0, 0.0, 0.0).unwrap()).unwrap();
    let x = qubit_measurement(QubitMeasurementParams::new(h, h, 0.0).unwrap()).unwrap();
    let set = MeasurementSet::uniform(vec![z, x]).unwrap();
    let sol = solve(&set).map_err(e)?;
    let target = StateVector::from_real(&[(PI / 8.0).cos(), (PI / 8.0).sin()]).unwrap();
    let fidelity = inner_product(&target, &sol.probe).map_err(e)?.norm();
    ensure((fidelity - 1.0).abs() <= PROBE_MATCH, || format!("probe {:?}", sol.probe.amps()))?;
    ensure(zx_overlap(sol.a, sol.phase) < 1e-12, || "oracle overlap at solution".into())?;

    // known solutions in (a, φ): ψ and ψ⊥
    let known = [((PI / 8.0).cos(), 0.0), ((PI / 8.0).sin(), PI)];
    let step = 1e-3;
    let threshold = 2e-3;
    let (na, nphi) = ((1.0 / step) as usize, (TAU / step) as usize);
    let mut near_known = [false; 2];
    let mut hits = 0usize;
    for i in 0..=na {
        let a = i as f64 * step;
        for j in 0..nphi {
            let phi = j as f64 * step;
            if zx_overlap(a, phi) >= threshold {
                continue;
            }
            hits += 1;
            let which = known.iter().position(|&(ka, kp)| {
                let dphi = (phi - kp).rem_euclid(TAU);
                (a - ka).abs() < 0.01 && dphi.min(TAU - dphi) < 0.02
            });
            match which {
                Some(w) => near_known[w] = true,
                None => return Err(format!("grid point a={a} φ={phi} is near-perfect but not ψ or ψ⊥")),
            }
        }
    }
    ensure(near_known == [true, true], || "grid missed a known solution".into())?;
    Ok(format!("probe matches (cos π/8, sin π/8); {hits} grid points below {threshold:e}, all at ψ or ψ⊥"))
}

fn ac3_phase_independence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for k in 0..100 {
        let set = random_qubit_set(&mut rng);
        let phases: Vec<f64> = set.phases().iter().map(|p| p + rng.random_range(0.3..TAU - 0.3)).collect();
        let shifted = set.with_control(set.weights().to_vec(), phases).map_err(e)?;
        let s1 = solve(&set).map_err(e)?;
        let s2 = solve(&shifted).map_err(e)?;
        let dphase = (s1.phase - s2.phase).rem_euclid(TAU);
        let same = (s1.a - s2.a).abs() <= PARAM_MATCH
            && (s1.b - s2.b).abs() <= PARAM_MATCH
            && dphase.min(TAU - dphase) <= PARAM_MATCH;
        ensure(same, || format!("set {k}: ({}, {}, {}) vs ({}, {}, {})", s1.a, s1.b, s1.phase, s2.a, s2.b, s2.phase))?;
        let moved = s1.bob_basis.measurement().unitary().max_abs_diff(&s2.bob_basis.measurement().unitary());
        ensure(moved > 1e-6, || format!("set {k}: Bob's basis unchanged"))?;
        for s in [&s1, &s2] {
            let g = GameInstance::new(s.probe.clone(), s.set.clone()).map_err(e)?;
            let p = exact_success(&g, &s.bob_basis).map_err(e)?;
            ensure((p - 1.0).abs() < 1e-12, || format!("set {k}: success {p}"))?;
            let rate = simulate_rounds(&g, &s.bob_basis, 1000, k).map_err(e)?;
            ensure(rate == 1.0, || format!("set {k}: simulated {rate}"))?;
        }
    }
    Ok("100 sets: probe parameters fixed, Bob's basis moves, success 1".into())
}

fn branch_probe(t: f64, chi: f64, sign: f64) -> StateVector {
    let be = C64::from_polar(t.sin() * 0.5f64.sqrt(), chi);
    StateVector::new(vec![C64::new(t.cos(), 0.0), be, be * sign]).unwrap()
}

fn branch_residual(x: &[f64], sign: f64) -> f64 {
    let r = qutrit_mub_residuals(&branch_probe(x[0], x[1], sign)).unwrap();
    r.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

fn branch_floor(sign: f64) -> f64 {
    let n = 400;
    let mut best = (f64::MAX, [0.0, 0.0]);
    for i in 0..=n {
        for j in 0..n {
            let x = [FRAC_PI_2 * i as f64 / n as f64, TAU * j as f64 / n as f64];
            let r = branch_residual(&x, sign);
            if r < best.0 {
                best = (r, x);
            }
        }
    }
    let opts = simplex::SimplexOptions { initial_step: 0.01, ..Default::default() };
    let refined = simplex::minimize(|x| branch_residual(x, sign), &best.1, opts);
    best.0.min(refined.value)
}

fn ac4_qutrit_impossibility() -> Outcome {
    let start = Instant::now();
    let set = uniform_mub_set(3, 3).map_err(e)?;
    let sweep = random_probe_sweep(&set, 1_000_000, 4).map_err(e)?;
    ensure(sweep.min_residual >= IMPOSSIBILITY_FLOOR, || format!("sweep reached {:e}", sweep.min_residual))?;
    let best = maximize_success(&set, 100, 2000, 4).map_err(e)?;
    ensure(best.best_residual >= IMPOSSIBILITY_FLOOR, || format!("optimizer reached {:e}", best.best_residual))?;
    ensure(best.best_success < 1.0 - 1e-3, || format!("optimizer success {}", best.best_success))?;
    let closest = minimize_residual(&set, 100, 2000, 4).map_err(e)?;
    ensure(closest.best_residual >= IMPOSSIBILITY_FLOOR, || format!("residual search reached {:e}", closest.best_residual))?;

    let eq = branch_floor(1.0);
    let neg = branch_floor(-1.0);
    ensure(eq >= BRANCH_EQ_BASELINE, || format!("β=γ floor {eq}"))?;
    ensure(neg >= BRANCH_NEG_BASELINE, || format!("β=−γ floor {neg}"))?;
    // the residuals are quadratic forms, so scaling the probe by s scales them by s²
    let shrunk = branch_probe(0.7, 1.3, 1.0).scale(C64::new(1e-4, 0.0));
    let tiny = qutrit_mub_residuals(&shrunk).unwrap().iter().map(|c| c.norm()).fold(0.0, f64::max);
    ensure(tiny > 0.0 && tiny < 1e-7, || format!("scaled residual {tiny:e}"))?;

    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(300), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "sweep floor {:.4}, max-success run {:.6} (overlap {:.4}), min-overlap run {:.4}, branch floors {eq:.4}/{neg:.4}, {elapsed:.1?}",
        sweep.min_residual, best.best_success, best.best_residual, closest.best_residual
    ))
}

fn ac5_factorization_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let p = random_probe(3, &mut rng);
        worst = worst.max(factorization_identity_check(&p).map_err(e)?);
    }
    ensure(worst <= IDENTITY_TOL, || format!("worst {worst:e}"))?;
    Ok(format!("10^4 probes, worst {worst:.2e}"))
}

fn ac6_mub_validity() -> Outcome {
    for d in [2usize, 3, 5, 7] {
        for k in 0..d {
            for l in k + 1..d {
                for i in 0..d {
                    for j in 0..d {
                        let o = inner_product(&mub_vector(d, k, i).unwrap(), &mub_vector(d, l, j).unwrap()).unwrap();
                        let dev = (o.norm_sqr() - 1.0 / d as f64).abs();
                        ensure(dev <= MUB_OVERLAP_TOL, || format!("d={d} k={k} l={l} i={i} j={j}: {dev:e}"))?;
                    }
                }
            }
        }
    }
    // U_k† rows, as powers of ω
    let printed = [
        [[0, 0, 0], [0, 2, 1], [0, 1, 2]],
        [[0, 2, 2], [0, 1, 0], [0, 0, 1]],
        [[0, 1, 1], [0, 0, 2], [0, 2, 0]],
    ];
    let w = |p: usize| C64::from_polar(1.0 / 3f64.sqrt(), TAU * p as f64 / 3.0);
    for (k, m) in printed.iter().enumerate() {
        let ud = mub_unitary(3, k).unwrap().dagger();
        for r in 0..3 {
            for c in 0..3 {
                let dev = (ud.get(r, c) - w(m[r][c])).norm();
                ensure(dev <= MUB_MATRIX_TOL, || format!("U_{k}† [{r},{c}] off by {dev:e}"))?;
            }
        }
    }
    Ok("d ∈ {2,3,5,7} unbiased; qutrit U_k† match entrywise".into())
}

fn zx_uniform() -> MeasurementSet {
    let h = 0.5f64.sqrt();
    MeasurementSet::uniform(vec![
        qubit_measurement(QubitMeasurementParams::new(1.0, 0.0, 0.0).unwrap()).unwrap(),
        qubit_measurement(QubitMeasurementParams::new(h, h, 0.0).unwrap()).unwrap(),
    ])
    .unwrap()
}

fn ac7_product_construction() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut report = Vec::new();
    for n in [2usize, 3] {
        let mut sets = vec![zx_uniform(); n];
        // last factor: a random two-measurement qubit set
        sets[n - 1] = random_qubit_set_of_size(&mut rng, 2);
        let pc = product_construction(&sets).map_err(e)?;
        let g = GameInstance::new(pc.probe.clone(), pc.set.clone()).map_err(e)?;
        let ens = post_selected_ensemble(&g);
        ensure(perfect_guess_check(&ens, PERFECT_CHECK), || format!("n={n}: overlap {:e}", ens.max_overlap()))?;
        let rate = simulate_rounds(&g, &pc.bob_basis, 10_000, n as u64).map_err(e)?;
        ensure(rate == 1.0, || format!("n={n}: simulated {rate}"))?;
        report.push(format!("n={n}: B={} A={}", pc.set.dim(), pc.set.len()));
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(10), || format!("took {elapsed:?}"))?;
    Ok(format!("{}, {elapsed:.1?}", report.join("; ")))
}

fn ac8_measure_zero() -> Outcome {
    let mut floor = f64::MAX;
    for seed in 0..100 {
        let set = random_measurement_set(3, 3, seed).map_err(e)?;
        let r = minimize_residual(&set, 10, 2000, seed).map_err(e)?;
        ensure(r.best_residual > IMPOSSIBILITY_FLOOR, || format!("seed {seed}: residual {:e}", r.best_residual))?;
        floor = floor.min(r.best_residual);
    }
    for b in 3..=8 {
        let params = ProbeParameterization::new(b).map_err(e)?.param_count();
        ensure(params == 2 * b - 2, || format!("B={b}: {params} parameters"))?;
        ensure(gram_constraint_count(b) > params, || format!("B={b}: not overdetermined"))?;
    }
    Ok(format!("100 Haar sets, smallest residual {floor:.3e}; B(B−1) > 2B−2 for B ∈ 3..=8"))
}

/// Best projective two-outcome measurement on span{u_0, u_1}, found by a
/// grid over (t, χ) followed by a local pattern search.
fn helstrom_sweep(ens: &PostSelectedEnsemble) -> f64 {
    let frame = orthonormalize(ens.vectors(), 1e-12).unwrap();
    if frame.len() < 2 {
        // collinear vectors: Bob can only pick the likelier outcome
        return ens.outcome_probs().iter().copied().fold(0.0, f64::max);
    }
    let coords: Vec<[C64; 2]> = ens
        .vectors()
        .iter()
        .map(|u| [inner_product(&frame[0], u).unwrap(), inner_product(&frame[1], u).unwrap()])
        .collect();
    let success = |t: f64, chi: f64| {
        let m0 = [C64::new(t.cos(), 0.0), C64::from_polar(t.sin(), chi)];
        let m1 = [-m0[1].conj(), m0[0]];
        let amp = |m: &[C64; 2], u: &[C64; 2]| (m[0].conj() * u[0] + m[1].conj() * u[1]).norm_sqr();
        amp(&m0, &coords[0]) + amp(&m1, &coords[1])
    };
    let (nt, nc) = (64, 128);
    let mut best = (f64::MIN, 0.0, 0.0);
    for i in 0..=nt {
        for j in 0..nc {
            let (t, c) = (FRAC_PI_2 * i as f64 / nt as f64, TAU * j as f64 / nc as f64);
            let s = success(t, c);
            if s > best.0 {
                best = (s, t, c);
            }
        }
    }
    // pattern search: shrink only when the centre is still the best point
    let (mut ht, mut hc) = (FRAC_PI_2 / nt as f64, TAU / nc as f64);
    for _ in 0..100_000 {
        if ht < 1e-12 && hc < 1e-12 {
            break;
        }
        let (_, t0, c0) = best;
        let mut moved = false;
        for i in -5..=5 {
            for j in -5..=5 {
                let (t, c) = (t0 + ht * i as f64 / 5.0, c0 + hc * j as f64 / 5.0);
                let s = success(t, c);
                if s > best.0 {
                    best = (s, t, c);
                    moved = true;
                }
            }
        }
        if !moved {
            ht *= 0.5;
            hc *= 0.5;
        }
    }
    best.0
}

fn ac9_discrimination() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst_gap = f64::MIN;
    let mut worst_oracle = 0.0f64;
    for k in 0..1000 {
        let set = random_qubit_set(&mut rng);
        let probe = random_probe(2, &mut rng);
        let ens = post_selected_ensemble(&GameInstance::new(probe, set).map_err(e)?);
        let h = helstrom_success(&ens).map_err(e)?;
        let p = pgm_success(&ens);
        worst_gap = worst_gap.max(p - h);
        ensure(p <= h + PGM_SLACK, || format!("ensemble {k}: PGM {p} > Helstrom {h}"))?;
        let oracle = helstrom_sweep(&ens);
        worst_oracle = worst_oracle.max((oracle - h).abs());
        ensure((oracle - h).abs() <= HELSTROM_ORACLE_TOL, || format!("ensemble {k}: Helstrom {h} vs sweep {oracle}"))?;
    }
    Ok(format!("1000 ensembles, max PGM−Helstrom {worst_gap:.2e}, max |sweep−Helstrom| {worst_oracle:.2e}"))
}


fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("AC1 qubit universality", ac1_qubit_universality),
        ("AC2 Z/X worked instance", ac2_zx_instance),
        ("AC3 control-phase independence", ac3_phase_independence),
        ("AC4 qutrit three-MUB impossibility", ac4_qutrit_impossibility),
        ("AC5 factorization identity", ac5_factorization_identity),
        ("AC6 MUB validity", ac6_mub_validity),
        ("AC7 product construction", ac7_product_construction),
        ("AC8 measure-zero sweep", ac8_measure_zero),
        ("AC9 discrimination consistency", ac9_discrimination),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("[PASS] {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {name}: {why}");
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
