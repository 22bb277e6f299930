use zfcov::analytic::coverage_probability;
use zfcov::montecarlo::stats::{gamma_cdf, ks_test, mean_and_std_error};
use zfcov::montecarlo::{
    sample_gains_exact_zf, sample_gains_gamma, simulate_coverage, simulate_energy, trial_rng,
    GainModel, SimConfig,
};
use zfcov::{derive_scenario, energy_report, NetworkParams, Scenario};

const SEED: u64 = 3;

fn scenario(m: u32, k: f64) -> Scenario {
    Scenario {
        m_antennas: m,
        k_users: k,
        ..derive_scenario(&NetworkParams::default()).unwrap()
    }
}

fn within_3_sigma(values: &[f64], want: f64) -> bool {
    let (mean, se) = mean_and_std_error(values);
    (mean - want).abs() < 3.0 * se
}

#[test]
fn gamma_gain_moments() {
    for (m, k) in [(1, 1.0), (8, 4.0), (8, 8.0), (16, 3.0)] {
        let sc = scenario(m, k);
        let draws: Vec<(f64, Vec<f64>)> = (0..100_000u64)
            .map(|i| sample_gains_gamma(&sc, 1, &mut trial_rng(SEED, i)).unwrap())
            .collect();
        let s: Vec<f64> = draws.iter().map(|d| d.0).collect();
        let g: Vec<f64> = draws.iter().map(|d| d.1[0]).collect();
        assert!(within_3_sigma(&s, f64::from(m) - k + 1.0), "S mean, M={m} K={k}");
        assert!(within_3_sigma(&g, k), "g mean, M={m} K={k}");
        // variance of a Gamma(K, 1) is K; squared deviations have mean K
        let sq: Vec<f64> = g.iter().map(|x| (x - k).powi(2)).collect();
        assert!(within_3_sigma(&sq, k), "g variance, M={m} K={k}");
    }
}

#[test]
fn exact_zf_interferer_gain_mean() {
    for (m, k) in [(8, 4.0), (4, 2.0), (8, 8.0)] {
        let sc = scenario(m, k);
        let g: Vec<f64> = (0..10_000u64)
            .map(|i| sample_gains_exact_zf(&sc, 1, &mut trial_rng(SEED, i)).unwrap().1[0])
            .collect();
        assert!(within_3_sigma(&g, k), "M={m} K={k}");
        // The Gamma(K, 1) law for g ignores correlations between
        // beamformers; the fit is reported, not required.
        let ks = ks_test(&g, |x| gamma_cdf(k, x), 0.01);
        println!(
            "interferer gain (M,K)=({m},{k}) vs Gamma(K,1): D={:.4}, critical {:.4}",
            ks.statistic, ks.critical_value
        );
    }
}

#[test]
fn exact_zf_desired_gain_is_gamma() {
    let sc = scenario(8, 4.0);
    let s: Vec<f64> = (0..10_000u64)
        .map(|i| sample_gains_exact_zf(&sc, 0, &mut trial_rng(SEED, i)).unwrap().0)
        .collect();
    assert!(ks_test(&s, |x| gamma_cdf(5.0, x), 0.01).passed);
}

#[test]
fn gain_models_agree_on_coverage() {
    for (lambda_bs, lambda_ue) in [(4.0, 32.0), (8.0, 32.0), (2.0, 8.0)] {
        let p = NetworkParams {
            lambda_bs,
            lambda_ue,
            sinr_threshold_db: 0.0,
            ..Default::default()
        };
        let run = |gain_model| {
            simulate_coverage(
                &p,
                &SimConfig {
                    trials: 5_000,
                    seed: SEED,
                    gain_model,
                    ..Default::default()
                },
            )
            .unwrap()
        };
        let (a, b) = (run(GainModel::GammaSampled), run(GainModel::ExactZF));
        let tol = 3.0 * (a.half_width.powi(2) + b.half_width.powi(2)).sqrt();
        assert!(
            (a.estimate - b.estimate).abs() < tol,
            "λ={lambda_bs}: gamma {} vs zf {} (tol {tol})",
            a.estimate,
            b.estimate
        );
    }
}

#[test]
fn rayleigh_baseline_by_simulation() {
    let p = NetworkParams {
        lambda_ue: 4.0,
        sinr_threshold_db: 0.0,
        interference_limited: true,
        ..Default::default()
    };
    let sim = SimConfig {
        trials: 100_000,
        seed: SEED,
        ..Default::default()
    };
    let out = simulate_coverage(&p, &sim).unwrap();
    let want = 1.0 / (1.0 + std::f64::consts::PI / 4.0);
    assert!((out.estimate - want).abs() < out.half_width, "{out:?}");
    assert_eq!(out.trials_used, 100_000);
}

#[test]
fn table_defaults_match_analytic() {
    let p = NetworkParams::default();
    let sim = SimConfig {
        trials: 50_000,
        seed: SEED,
        ..Default::default()
    };
    let mc = simulate_coverage(&p, &sim).unwrap();
    let analytic = coverage_probability(&p).unwrap().value;
    assert!((mc.estimate - analytic).abs() < mc.half_width + 1e-4, "{mc:?} vs {analytic}");
}

#[test]
fn doubling_the_window_does_not_move_the_estimate() {
    let p = NetworkParams {
        pathloss_alpha: 3.0,
        ..Default::default()
    };
    let sim = SimConfig {
        trials: 20_000,
        seed: SEED,
        ..Default::default()
    };
    let auto = simulate_coverage(&p, &sim).unwrap();
    let wide = simulate_coverage(
        &p,
        &SimConfig {
            window_radius: Some(2.0 * auto.window_radius),
            ..sim
        },
    )
    .unwrap();
    assert!((auto.estimate - wide.estimate).abs() < auto.half_width, "{auto:?} vs {wide:?}");
}

#[test]
fn simulated_energy_uses_analytic_consumption() {
    let p = NetworkParams::default();
    let sim = SimConfig {
        trials: 2_000,
        seed: SEED,
        ..Default::default()
    };
    let mc = simulate_energy(&p, &sim).unwrap();
    let analytic = energy_report(&p).unwrap();
    assert_eq!(mc.aec, analytic.aec);
    assert!((mc.ee - mc.ase / mc.aec).abs() < 1e-15);
    assert_eq!(mc.coverage, simulate_coverage(&p, &sim).unwrap().estimate);
}
