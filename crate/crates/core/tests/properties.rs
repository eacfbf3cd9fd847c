use proptest::prelude::*;
use qguess::explorer::{
    factorization_identity_check, maximize_success, product_construction, qutrit_mub_residuals, random_basis,
    random_probe,
};
use qguess::game::{
    exact_success, helstrom_success, pgm_success, post_selected_ensemble, simulate_rounds_sharded,
};
use qguess::measurements::uniform_mub_set;
use qguess::qubit_solver::solve;
use qguess::{GameInstance, MeasurementSet, StateVector, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;

fn qubit_set(seed: u64, a: usize) -> MeasurementSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ms = (0..a).map(|_| random_basis(2, &mut rng)).collect();
    let raw: Vec<f64> = (0..a).map(|_| rng.random_range(0.01..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let phases = (0..a).map(|_| rng.random_range(0.0..TAU)).collect();
    MeasurementSet::new(ms, raw.iter().map(|w| w / total).collect(), phases).unwrap()
}

fn real_cross(x: [f64; 3], y: [f64; 3]) -> [f64; 3] {
    [x[1] * y[2] - x[2] * y[1], x[2] * y[0] - x[0] * y[2], x[0] * y[1] - x[1] * y[0]]
}

/// Pauli coordinates `h` of a traceless Hermitian 2×2 matrix `H = h·σ`.
fn pauli_coords(h: [[C64; 2]; 2]) -> [f64; 3] {
    [h[0][1].re, -h[0][1].im, h[0][0].re]
}

fn bloch(p: &StateVector) -> [f64; 3] {
    let c = p[0].conj() * p[1];
    [2.0 * c.re, 2.0 * c.im, p[0].norm_sqr() - p[1].norm_sqr()]
}

/// Writes `⟨u_0|u_1⟩ = ⟨ψ|K|ψ⟩` with `K = Σ w_i |m_i0⟩⟨m_i1|` and splits
/// `K = H_1 + i H_2`. A perfect probe has a Bloch vector orthogonal to both
/// Pauli coordinate vectors, so it lies along `h_1 × h_2`.
fn bloch_direction(set: &MeasurementSet) -> Option<[f64; 3]> {
    let mut k = [[C64::new(0.0, 0.0); 2]; 2];
    for (m, w) in set.measurements().iter().zip(set.weights()) {
        let (m0, m1) = (m.vector(0), m.vector(1));
        for r in 0..2 {
            for c in 0..2 {
                k[r][c] += *w * m0[r] * m1[c].conj();
            }
        }
    }
    let i = C64::new(0.0, 1.0);
    let mut h1 = [[C64::new(0.0, 0.0); 2]; 2];
    let mut h2 = h1;
    for r in 0..2 {
        for c in 0..2 {
            h1[r][c] = (k[r][c] + k[c][r].conj()) * 0.5;
            h2[r][c] = (k[r][c] - k[c][r].conj()) / (2.0 * i);
        }
    }
    let n = real_cross(pauli_coords(h1), pauli_coords(h2));
    let len = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
    (len > 1e-6).then(|| n.map(|x| x / len))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn solver_probe_lies_along_bloch_oracle(seed in any::<u64>(), a in 2usize..7) {
        let set = qubit_set(seed, a);
        let sol = solve(&set).unwrap();
        prop_assert!(sol.residual <= 1e-9);
        if let Some(n) = bloch_direction(&sol.set) {
            let b = bloch(&sol.probe);
            let c = real_cross(b, n);
            prop_assert!(c.iter().all(|x| x.abs() < 1e-7), "bloch {b:?} vs oracle {n:?}");
        }
    }

    #[test]
    fn solved_games_are_won_every_round(seed in any::<u64>(), a in 2usize..7) {
        let sol = solve(&qubit_set(seed, a)).unwrap();
        let g = GameInstance::new(sol.probe.clone(), sol.set.clone()).unwrap();
        prop_assert!((exact_success(&g, &sol.bob_basis).unwrap() - 1.0).abs() < 1e-12);
        prop_assert_eq!(simulate_rounds_sharded(&g, &sol.bob_basis, 2000, seed, 4).unwrap(), 1.0);
    }

    #[test]
    fn ensemble_is_normalized_and_pgm_below_helstrom(seed in any::<u64>(), a in 1usize..7) {
        let set = qubit_set(seed, a);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let e = post_selected_ensemble(&GameInstance::new(random_probe(2, &mut rng), set).unwrap());
        prop_assert!((e.outcome_probs().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let h = helstrom_success(&e).unwrap();
        let p = pgm_success(&e);
        prop_assert!(p <= h + 1e-12);
        prop_assert!((0.5 - 1e-12..=1.0 + 1e-12).contains(&h));
    }

    #[test]
    fn qutrit_residuals_track_gram(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_probe(3, &mut rng);
        let r = qutrit_mub_residuals(&p).unwrap();
        let g = post_selected_ensemble(&GameInstance::new(p.clone(), uniform_mub_set(3, 3).unwrap()).unwrap()).gram();
        for (k, (x, y)) in [(0, 1), (0, 2), (1, 2)].into_iter().enumerate() {
            prop_assert!((r[k] - 9.0 * g.get(x, y)).norm() < 1e-12);
        }
        prop_assert!(factorization_identity_check(&p).unwrap() <= 1e-12);
    }

    #[test]
    fn branch_residuals_never_vanish_on_the_sphere(t in 0.0..std::f64::consts::FRAC_PI_2, chi in 0.0..TAU, neg in any::<bool>()) {
        let be = C64::from_polar(t.sin() * 0.5f64.sqrt(), chi);
        let ga = if neg { -be } else { be };
        let p = StateVector::new(vec![C64::new(t.cos(), 0.0), be, ga]).unwrap();
        let worst = qutrit_mub_residuals(&p).unwrap().iter().map(|c| c.norm()).fold(0.0, f64::max);
        prop_assert!(worst > 1.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn optimizer_agrees_with_closed_form_on_qubits(seed in any::<u64>(), a in 2usize..5) {
        let set = qubit_set(seed, a);
        let best = maximize_success(&set, 6, 2000, seed).unwrap();
        prop_assert!(best.best_success >= 1.0 - 1e-6, "{}", best.best_success);
        prop_assert!(solve(&set).unwrap().residual <= 1e-9);
    }

    #[test]
    fn products_of_random_qubit_sets_are_perfect(s1 in any::<u64>(), s2 in any::<u64>(), a1 in 1usize..4, a2 in 1usize..4) {
        let pc = product_construction(&[qubit_set(s1, a1), qubit_set(s2, a2)]).unwrap();
        prop_assert_eq!(pc.set.len(), a1 * a2);
        let g = GameInstance::new(pc.probe.clone(), pc.set.clone()).unwrap();
        prop_assert!(post_selected_ensemble(&g).max_overlap() <= 1e-9);
        prop_assert!((exact_success(&g, &pc.bob_basis).unwrap() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn solver_probe_is_perfect_for_canonical_set_only() {
    // the raw computational basis has |1⟩ rather than −|1⟩; the solver works on
    // the rephased set and reports it
    let z = qguess::ProjectiveMeasurement::computational(2).unwrap();
    let x = qguess::measurements::mub_measurement(2, 0).unwrap();
    let raw = MeasurementSet::uniform(vec![z, x]).unwrap();
    let sol = solve(&raw).unwrap();
    assert!(sol.rephased);
    let on_raw = post_selected_ensemble(&GameInstance::new(sol.probe.clone(), raw).unwrap());
    let on_canon = post_selected_ensemble(&GameInstance::new(sol.probe.clone(), sol.set.clone()).unwrap());
    assert!(on_canon.max_overlap() < 1e-12);
    assert!(on_raw.max_overlap() > 0.1);
}
