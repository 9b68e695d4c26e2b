mod common;

use common::*;
use spin_witness::sm_curves::{
    build_fs_table, fs_eval, fs_small_x_coefficient, perturbative_moments, xi2_min,
};
use spin_witness::spin_core::{
    build_hamiltonian, build_sx, ground_state, moments, qfi_pure, state_xi2, SpinLength, SpinState,
};
use spin_witness::split_model::{
    extract_pair_correlations, propagate_mode_moments, Axis, SplitConfig,
};
use spin_witness::witnesses::{
    depth_bound_state_independent, global_local_identity, local_xi2_from_global, sm_xi2_bound, xi2,
    CollectiveMoments,
};

fn spin(two_s: u32) -> SpinLength {
    SpinLength::new(two_s).unwrap()
}

fn ground_of(two_s: u32, lambda: f64) -> SpinState {
    ground_state(&build_hamiltonian(lambda, spin(two_s)).unwrap())
        .unwrap()
        .1
}

#[test]
fn sx_spectrum_matches_dense_oracle() {
    for two_s in 1..=40u32 {
        let vals = eigenvalues(&build_sx(spin(two_s)).to_dense());
        let s = two_s as f64 / 2.0;
        for (k, v) in vals.iter().enumerate() {
            assert!((v - (k as f64 - s)).abs() < 1e-10, "2S = {two_s}: {v}");
        }
    }
}

#[test]
fn tridiagonal_builder_matches_dense_construction() {
    for two_s in [1u32, 2, 5, 12] {
        let h = build_hamiltonian(0.7, spin(two_s)).unwrap().to_dense();
        let d = hamiltonian(two_s, 0.7);
        for (r, s) in h.iter().zip(&d) {
            for (a, b) in r.iter().zip(s) {
                assert!((a - b).abs() < 1e-13);
            }
        }
    }
}

#[test]
fn ground_energy_and_state_match_oracle() {
    for two_s in [1u32, 2, 3, 6, 11, 20, 40] {
        for &lambda in &[1e-4, 0.01, 0.3, 1.0, 4.0, 25.0] {
            let (e, st) = ground_state(&build_hamiltonian(lambda, spin(two_s)).unwrap()).unwrap();
            let (e0, psi) = ground(&hamiltonian(two_s, lambda));
            assert!(
                (e - e0).abs() < 1e-12 * e0.abs().max(1.0),
                "2S={two_s} λ={lambda}: {e} vs {e0}"
            );
            let overlap: f64 = st.amplitudes().iter().zip(&psi).map(|(a, b)| a * b).sum();
            assert!((overlap.abs() - 1.0).abs() < 1e-9, "overlap {overlap}");
        }
    }
}

#[test]
fn spin_one_closed_form_energy() {
    for &lambda in &[0.0, 0.2, 1.0, 7.5] {
        let (e, _) = ground_state(&build_hamiltonian(lambda, spin(2)).unwrap()).unwrap();
        let exact = 0.5 * (1.0 - (1.0 + 4.0 * lambda * lambda).sqrt());
        assert!((e - exact).abs() < 1e-12);
    }
}

#[test]
fn moments_match_dense_matrices() {
    for two_s in [1u32, 2, 4, 7, 15] {
        for seed in 0..5 {
            let psi = random_unit(two_s as usize + 1, seed * 31 + two_s as u64);
            let st = SpinState::new(spin(two_s), psi.clone()).unwrap();
            let mo = moments(&st);
            let (sx, var_z, sy2) = dense_moments(two_s, &psi);
            assert!((mo.mean_sx - sx).abs() < 1e-12);
            assert!((mo.var_sz - var_z).abs() < 1e-12);
            assert!((mo.mean_sy2 - sy2).abs() < 1e-12);
        }
    }
}

#[test]
fn spin_one_mixing_angle() {
    // ground state cos θ (|1⟩+|−1⟩)/√2 + sin θ |0⟩ form: ⟨S_x⟩ = sin 2θ, Var = sin²θ
    let st = ground_of(2, 0.8);
    let mo = moments(&st);
    let theta = (st.amplitudes()[1].abs()).acos();
    assert!((mo.mean_sx.abs() - (2.0 * theta).sin()).abs() < 1e-12);
    assert!((mo.var_sz - theta.sin().powi(2)).abs() < 1e-12);
}

#[test]
fn small_lambda_ground_state_is_unbiased() {
    let mo = moments(&ground_of(20, 1e-4));
    assert!(mo.mean_sz.abs() < 1e-10);
}

#[test]
fn twin_fock_qfi() {
    for p in 1..=40u32 {
        if p % 2 == 1 {
            continue;
        }
        let tf = SpinState::dicke(spin(p), 0).unwrap();
        let pf = p as f64;
        assert!((qfi_pure(&tf) - pf * (1.0 + pf / 2.0)).abs() < 1e-12 * pf * pf);
    }
}

#[test]
fn qfi_exceeds_squeezing_bound() {
    let st = ground_of(20, 1e-3);
    let xi = state_xi2(&st).unwrap();
    assert!(qfi_pure(&st) >= 20.0 / xi * (1.0 - 1e-12));
}

/// `|S,0⟩ − (λ/2)√(S(S+1)) (|S,−1⟩ + |S,1⟩)`, normalised.
fn first_order_state(two_s: u32, lambda: f64) -> SpinState {
    let s = two_s as f64 / 2.0;
    let mut amps = vec![0.0; two_s as usize + 1];
    let mid = two_s as usize / 2;
    let c = -0.5 * lambda * (s * (s + 1.0)).sqrt();
    amps[mid] = 1.0;
    amps[mid - 1] = c;
    amps[mid + 1] = c;
    SpinState::normalized(spin(two_s), amps).unwrap()
}

#[test]
fn perturbative_formulas_describe_first_order_state() {
    for two_s in [2u32, 4, 10, 20] {
        for &lambda in &[1e-3, 1e-2, 0.1] {
            let p = perturbative_moments(spin(two_s), lambda).unwrap();
            let st = first_order_state(two_s, lambda);
            let mo = moments(&st);
            assert!(rel_close(mo.mean_sx, p.mean_sx, 1e-12));
            assert!(rel_close(mo.mean_sz2, p.mean_sz2, 1e-12));
            assert!(rel_close(state_xi2(&st).unwrap(), p.xi2, 1e-12));
        }
    }
}

#[test]
fn perturbative_squeezing_versus_exact_ground_state() {
    let lambda = 1e-3;
    // S = 1: the first-order state is exact up to normalisation
    let exact = state_xi2(&ground_of(2, lambda)).unwrap();
    let approx = perturbative_moments(spin(2), lambda).unwrap().xi2;
    assert!((exact - approx).abs() < 1e-11);
    // larger S: the constant term is exact, the λ² term is not
    for two_s in [4u32, 10, 20] {
        let s = two_s as f64 / 2.0;
        let exact = state_xi2(&ground_of(two_s, lambda)).unwrap();
        let approx = perturbative_moments(spin(two_s), lambda).unwrap().xi2;
        assert!(exact >= xi2_min(spin(two_s)));
        assert!((exact - approx).abs() <= s * lambda * lambda);
    }
}

#[test]
fn fs_is_below_random_state_variances() {
    // F_S is a minimum over all states at fixed polarisation
    for two_s in [2u32, 3, 4, 5] {
        let s = two_s as f64 / 2.0;
        for seed in 0..300 {
            let psi = random_unit(two_s as usize + 1, 1000 + seed);
            let (mx, var, _) = dense_moments(two_s, &psi);
            let x = (mx.abs() / s).min(1.0);
            let f = fs_eval(spin(two_s), x).unwrap();
            assert!(f <= var / s + 1e-9, "2S={two_s}: F={f}, Var/S={}", var / s);
        }
    }
}

#[test]
fn half_integer_fs_is_attained() {
    // values are realised by explicit states, hence tight from above as well
    let two_s = 3;
    let table = build_fs_table(spin(two_s), 16).unwrap();
    for w in table.samples().windows(2) {
        assert!(w[1].x > w[0].x && w[1].f >= w[0].f - 1e-12);
    }
    let best_random = (0..4000u64)
        .filter_map(|seed| {
            let psi = random_unit(4, 77 + seed);
            let (mx, var, _) = dense_moments(two_s, &psi);
            let x = mx.abs() / 1.5;
            ((x - 0.5).abs() < 0.02).then_some((x, var / 1.5))
        })
        .map(|(x, f)| f - fs_eval(spin(two_s), x).unwrap())
        .fold(f64::INFINITY, f64::min);
    assert!(best_random >= -1e-9);
}

#[test]
fn small_x_limit() {
    for two_s in [2u32, 4, 10] {
        let ratio = fs_eval(spin(two_s), 1e-3).unwrap() / 1e-6;
        let c = fs_small_x_coefficient(spin(two_s)).unwrap();
        assert!((ratio - c).abs() < 0.01 * c);
    }
}

#[test]
fn minimum_of_sm_ratio_is_ultimate_limit() {
    let two_s = 4;
    let min = (1..=2000)
        .map(|i| i as f64 * 5e-4)
        .map(|x| 2.0 * fs_eval(spin(two_s), x).unwrap() / (x * x))
        .fold(f64::INFINITY, f64::min);
    assert!((min - xi2_min(spin(two_s))).abs() < 1e-4, "{min}");
}

#[test]
fn sm_ratio_matches_tight_bound_at_small_x() {
    for p in [2u64, 4, 6] {
        for q in [1u64, 3, 7] {
            let sm = sm_xi2_bound(p, 1e-3).unwrap();
            let tight = depth_bound_state_independent(p * q, p).unwrap();
            assert!((sm - tight).abs() <= 0.01 * tight);
        }
    }
}

#[test]
fn split_moments_reproduce_parent() {
    for two_s in [2u32, 4, 10, 20, 50] {
        for &lambda in &[0.01, 0.3, 2.0] {
            let st = ground_of(two_s, lambda);
            let mo = moments(&st);
            let pc = extract_pair_correlations(&st).unwrap();
            for pi in [vec![0.5, 0.5], vec![0.3, 0.7], vec![0.1, 0.2, 0.3, 0.4]] {
                let cfg = SplitConfig::new(pi.clone()).unwrap();
                let mm = propagate_mode_moments(&pc, &cfg).unwrap();
                let ones = vec![1.0; pi.len()];
                let sum_sx: f64 = mm.mean_sx().iter().sum();
                assert!((sum_sx - mo.mean_sx).abs() < 1e-12 * mo.mean_sx.abs().max(1.0));
                let var = mm.cov_sz().quadratic_form(&ones);
                assert!((var - mo.var_sz).abs() < 1e-12 * mo.var_sz.max(1e-300));
            }
            // Var[S_y^A − S_y^B] = N/4 irrespective of the state
            let mm = propagate_mode_moments(&pc, &SplitConfig::symmetric(2).unwrap()).unwrap();
            let vy = mm.cov_sy().unwrap().quadratic_form(&[1.0, -1.0]);
            assert!((vy - two_s as f64 / 4.0).abs() < 1e-12 * two_s as f64);
            let sum = mm.mean_sx()[0].abs() + mm.mean_sx()[1].abs();
            assert!((sum * sum - mo.mean_sx * mo.mean_sx).abs() < 1e-12 * sum * sum);
            assert!(pc.pair(Axis::Z, Axis::Z).abs() <= 0.25);
        }
    }
}

#[test]
fn asymmetric_split_local_identity() {
    let st = ground_of(40, 0.05);
    let mo = moments(&st);
    let n = 40u64;
    let global = xi2(&CollectiveMoments::new(n, mo.var_sz, mo.mean_sx).unwrap()).unwrap();
    let pi = [0.3, 0.7];
    let cfg = SplitConfig::new(pi.to_vec()).unwrap();
    let mm = propagate_mode_moments(&extract_pair_correlations(&st).unwrap(), &cfg).unwrap();
    for (i, &p) in pi.iter().enumerate() {
        // local coefficient from the propagated moments of mode i
        let ni = p * n as f64;
        let direct = ni * mm.cov_sz().get(i, i) / mm.mean_sx()[i].powi(2);
        let formula = local_xi2_from_global(global, p, n, mo.mean_sx).unwrap();
        assert!(rel_close(direct, formula, 1e-10), "{direct} {formula}");
    }
    let locals: Vec<f64> = pi
        .iter()
        .map(|&p| local_xi2_from_global(global, p, n, mo.mean_sx).unwrap())
        .collect();
    let back = global_local_identity(&locals, n, 2, mo.mean_sx).unwrap();
    assert!(rel_close(back, global, 1e-12));
}
