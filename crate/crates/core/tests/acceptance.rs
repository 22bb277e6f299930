//! Acceptance suite. Each test prints one `PASS`/`FAIL` line and then
//! asserts it, so `cargo test --test acceptance -- --nocapture` gives a
//! readable report.
//!
//! Run in release-like mode (the workspace test profile is optimized); the
//! runtime limits below assume that.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::Rng;
use zfcov::analytic::{coverage_probability, energy_report, TARGET_ABS_ERROR};
use zfcov::experiments::{run_sweep, write_csv, SweepSpec};
use zfcov::montecarlo::stats::{gamma_cdf, ks_test};
use zfcov::montecarlo::{
    sample_gains_exact_zf, sample_ppp_disk, simulate_coverage, simulate_sinr, trial_rng, SimConfig,
};
use zfcov::specfun::{
    association_distance_cdf, hyp2f1, laplace_interference, laplace_interference_quadrature_oracle,
    Hyp2F1Params,
};
use zfcov::{derive_scenario, NetworkParams, Scenario};

/// Fixed before any run; never tuned.
const SEED: u64 = 1;
const KS_LEVEL: f64 = 0.01;
const DENSITIES: [f64; 5] = [1.0, 2.0, 4.0, 8.0, 16.0];

fn report(n: u32, passed: bool, elapsed: Duration, detail: String) {
    let tag = if passed { "PASS" } else { "FAIL" };
    println!("{tag} criterion {n} ({:.1} s): {detail}", elapsed.as_secs_f64());
    assert!(passed, "criterion {n} failed: {detail}");
}

fn defaults() -> NetworkParams {
    NetworkParams::default()
}

fn rayleigh() -> NetworkParams {
    NetworkParams {
        lambda_bs: 4.0,
        lambda_ue: 4.0,
        pathloss_alpha: 4.0,
        sinr_threshold_db: 0.0,
        interference_limited: true,
        ..Default::default()
    }
}

fn with_density(l: u32, lambda_bs: f64) -> NetworkParams {
    NetworkParams {
        lambda_bs,
        num_subbands: l,
        ..defaults()
    }
}

#[test]
fn criterion_1_closed_form_baseline() {
    let start = Instant::now();
    let want = 1.0 / (1.0 + PI / 4.0);
    let p = rayleigh();
    let sc = derive_scenario(&p).unwrap();
    assert_eq!((sc.m_antennas, sc.k_users), (1, 1.0));

    let analytic = coverage_probability(&p).unwrap().value;
    let sim = SimConfig {
        trials: 100_000,
        seed: SEED,
        confidence_level: 0.99,
        ..Default::default()
    };
    let mc = simulate_coverage(&p, &sim).unwrap();
    let elapsed = start.elapsed();
    let passed = (analytic - want).abs() < 1e-4
        && (mc.estimate - want).abs() < mc.half_width
        && elapsed < Duration::from_secs(30);
    report(
        1,
        passed,
        elapsed,
        format!(
            "analytic {analytic:.7}, MC {:.5} ± {:.5}, exact {want:.7}",
            mc.estimate, mc.half_width
        ),
    );
}

#[test]
fn criterion_2_analytic_matches_simulation() {
    let start = Instant::now();
    let thresholds = [-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0];
    let sim = SimConfig {
        trials: 20_000,
        seed: SEED,
        confidence_level: 0.99,
        ..Default::default()
    };
    let mut worst = (f64::NEG_INFINITY, String::new());
    let mut failures = Vec::new();
    for alpha in [3.0, 4.0, 5.0] {
        let base = NetworkParams {
            pathloss_alpha: alpha,
            ..defaults()
        };
        // The SINR draws do not depend on the threshold, so one run serves
        // the whole threshold grid.
        let samples = simulate_sinr(&base, &sim).unwrap();
        for t in thresholds {
            let p = NetworkParams {
                sinr_threshold_db: t,
                ..base.clone()
            };
            let analytic = coverage_probability(&p).unwrap().value;
            let mc = samples.coverage(10f64.powf(t / 10.0), sim.confidence_level);
            let slack = (analytic - mc.estimate).abs() - (mc.half_width + 1e-3);
            let line = format!(
                "α={alpha} T={t} dB: analytic {analytic:.4}, MC {:.4} ± {:.4}",
                mc.estimate, mc.half_width
            );
            if slack >= 0.0 {
                failures.push(line.clone());
            }
            if slack > worst.0 {
                worst = (slack, line);
            }
        }
    }
    let elapsed = start.elapsed();
    let passed = failures.is_empty() && elapsed < Duration::from_secs(600);
    let detail = if failures.is_empty() {
        format!("21 points agree; tightest {}", worst.1)
    } else {
        format!("disagree at {}", failures.join("; "))
    };
    report(2, passed, elapsed, detail);
}

#[test]
fn criterion_3_pathloss_ordering() {
    let start = Instant::now();
    let r: Vec<_> = [3.0, 4.0, 5.0]
        .iter()
        .map(|&alpha| {
            coverage_probability(&NetworkParams {
                pathloss_alpha: alpha,
                sinr_threshold_db: 0.0,
                ..defaults()
            })
            .unwrap()
        })
        .collect();
    let passed = r.windows(2).all(|w| {
        w[1].value - w[0].value > w[0].abs_error_estimate + w[1].abs_error_estimate
    });
    report(
        3,
        passed,
        start.elapsed(),
        format!(
            "coverage α=3 {:.5}, α=4 {:.5}, α=5 {:.5}",
            r[0].value, r[1].value, r[2].value
        ),
    );
}

#[test]
fn criterion_4_densification_ordering() {
    let start = Instant::now();
    let mut passed = true;
    let mut lines = Vec::new();
    for l in [1, 2, 4] {
        let r: Vec<_> = DENSITIES
            .iter()
            .map(|&d| coverage_probability(&with_density(l, d)).unwrap())
            .collect();
        let min_step = r
            .windows(2)
            .map(|w| w[1].value - w[0].value)
            .fold(f64::INFINITY, f64::min);
        let ok = r.windows(2).all(|w| {
            let step = w[1].value - w[0].value;
            step > TARGET_ABS_ERROR && step > w[0].abs_error_estimate + w[1].abs_error_estimate
        });
        passed &= ok;
        let values: Vec<String> = r.iter().map(|c| format!("{:.4}", c.value)).collect();
        lines.push(format!("L={l} [{}] min step {min_step:.2e}", values.join(", ")));
    }
    report(4, passed, start.elapsed(), lines.join("; "));
}

#[test]
fn criterion_5_subband_ordering_and_saturation() {
    let start = Instant::now();
    let mut passed = true;
    let mut lines = Vec::new();
    for d in [1.0, 4.0] {
        let cov: Vec<f64> = [1, 2, 4, 8]
            .iter()
            .map(|&l| coverage_probability(&with_density(l, d)).unwrap().value)
            .collect();
        let gaps: Vec<f64> = cov.windows(2).map(|w| w[1] - w[0]).collect();
        passed &= gaps.iter().all(|&g| g >= 0.0);
        passed &= gaps.windows(2).all(|w| w[1] < w[0]);
        let gaps: Vec<String> = gaps.iter().map(|g| format!("{g:.4}")).collect();
        lines.push(format!("λ={d} gaps [{}]", gaps.join(", ")));
    }
    report(5, passed, start.elapsed(), lines.join("; "));
}

#[test]
fn criterion_6_energy_efficiency() {
    let start = Instant::now();
    let mut passed = true;
    let mut lines = Vec::new();
    let mut at_densest = Vec::new();
    for l in [1, 4, 8] {
        let ee: Vec<f64> = DENSITIES
            .iter()
            .map(|&d| energy_report(&with_density(l, d)).unwrap().ee)
            .collect();
        passed &= ee.windows(2).all(|w| w[1] >= w[0]);
        at_densest.push(*ee.last().unwrap());
        let ee: Vec<String> = ee.iter().map(|e| format!("{e:.4}")).collect();
        lines.push(format!("L={l} [{}]", ee.join(", ")));
    }
    passed &= at_densest[0] > at_densest[1] && at_densest[1] > at_densest[2];
    report(6, passed, start.elapsed(), lines.join("; "));
}

#[test]
fn criterion_7_special_functions() {
    let start = Instant::now();
    let rel = |a: Complex64, b: Complex64| (a - b).norm() / b.norm();
    let mut worst_hyp = 0.0f64;
    for i in 0..50 {
        let f = i as f64 / 49.0;
        // -ln(1-z)/z around the plane, including |z| > 1 away from the cut
        let z = Complex64::from_polar(0.05 + 30.0 * f * f, 0.3 + 5.6 * f);
        let got = hyp2f1(Hyp2F1Params::new(1.0, 1.0, 2.0, z)).unwrap();
        worst_hyp = worst_hyp.max(rel(got, -(1.0 - z).ln() / z));
        // 1 + t·atan(t) along the negative real axis
        let t = 10f64.powf(-2.0 + 6.0 * f);
        let got = hyp2f1(Hyp2F1Params::new(1.0, -0.5, 0.5, Complex64::new(-t * t, 0.0))).unwrap();
        worst_hyp = worst_hyp.max(rel(got, Complex64::new(1.0 + t * t.atan(), 0.0)));
    }

    let base = derive_scenario(&defaults()).unwrap();
    let mut rng = trial_rng(SEED, 7);
    let mut worst_lt = 0.0f64;
    for _ in 0..200 {
        let sc = Scenario {
            k_users: [1.0, 2.0, 4.0, 8.0][rng.random_range(0..4)],
            pathloss_alpha: [3.0, 4.0, 5.0][rng.random_range(0..3)],
            m_antennas: 8,
            ..base
        };
        let modulus = 10f64.powf(rng.random_range(-3.0..=3.0));
        let s = Complex64::from_polar(modulus, rng.random_range(-PI / 2.0..=PI / 2.0));
        let r0 = rng.random_range(0.05..2.0);
        let lambda = rng.random_range(0.5..16.0);
        let got = laplace_interference(s, r0, &sc, lambda).unwrap();
        let want = laplace_interference_quadrature_oracle(s, r0, &sc, lambda).unwrap();
        worst_lt = worst_lt.max(rel(got, want));
    }
    let elapsed = start.elapsed();
    let passed = worst_hyp < 1e-9 && worst_lt < 1e-8 && elapsed < Duration::from_secs(60);
    report(
        7,
        passed,
        elapsed,
        format!("₂F₁ identities worst rel {worst_hyp:.2e}; interference transform worst rel {worst_lt:.2e}"),
    );
}

#[test]
fn criterion_8_distributions() {
    let start = Instant::now();
    let base = derive_scenario(&defaults()).unwrap();
    let mut passed = true;
    let mut lines = Vec::new();
    for (m, k) in [(8u32, 8.0), (8, 4.0), (4, 2.0)] {
        let sc = Scenario {
            m_antennas: m,
            k_users: k,
            ..base
        };
        let s: Vec<f64> = (0..10_000u64)
            .map(|i| sample_gains_exact_zf(&sc, 0, &mut trial_rng(SEED, i)).unwrap().0)
            .collect();
        let shape = f64::from(m) - k + 1.0;
        let ks = ks_test(&s, |x| gamma_cdf(shape, x), KS_LEVEL);
        passed &= ks.passed;
        lines.push(format!("ZF ({m},{k}) D={:.4}/{:.4}", ks.statistic, ks.critical_value));
    }

    let lambda = 4.0;
    // P(no BS within the window) = e^{-50}; the cdf is capped at the radius
    let radius = (50.0 / (PI * lambda)).sqrt();
    let r0: Vec<f64> = (0..10_000u64)
        .map(|i| {
            sample_ppp_disk(lambda, radius, &mut trial_rng(SEED, i))
                .into_iter()
                .map(|(x, y)| x.hypot(y))
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    let ks = ks_test(&r0, |r| association_distance_cdf(r, lambda), KS_LEVEL);
    passed &= ks.passed;
    lines.push(format!("nearest distance D={:.4}/{:.4}", ks.statistic, ks.critical_value));

    let (lambda, radius, n) = (4.0, 10.0, 10_000usize);
    let counts: Vec<f64> = (0..n as u64)
        .map(|i| sample_ppp_disk(lambda, radius, &mut trial_rng(SEED, i)).len() as f64)
        .collect();
    let mean = counts.iter().sum::<f64>() / n as f64;
    let var = counts.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    let want = lambda * PI * radius * radius;
    passed &= (mean - want).abs() < 3.0 * (want / n as f64).sqrt();
    passed &= (var / mean - 1.0).abs() < 0.05;
    lines.push(format!("PPP count mean {mean:.1} (λπR² {want:.1}), var/mean {:.3}", var / mean));

    let elapsed = start.elapsed();
    passed &= elapsed < Duration::from_secs(120);
    report(8, passed, elapsed, lines.join("; "));
}

#[test]
fn criterion_9_sweep_is_deterministic() {
    let start = Instant::now();
    let spec = SweepSpec::from_toml_str(
        r#"
axis = "threshold_db"
values = [-5, 0, 5]
metrics = ["coverage_analytic", "coverage_mc", "ee_mc"]

[series]
field = "pathloss_alpha"
values = [3, 4]

[sim]
trials = 3000
seed = 11
"#,
    )
    .unwrap();
    let csv = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        let table = pool.install(|| run_sweep(&spec)).unwrap();
        let mut bytes = Vec::new();
        write_csv(&table, &mut bytes).unwrap();
        bytes
    };
    let first = csv(1);
    let second = csv(1);
    let third = csv(3);
    let passed = !first.is_empty() && first == second && first == third;
    report(
        9,
        passed,
        start.elapsed(),
        format!("{} CSV bytes, identical across repeated and differently threaded runs", first.len()),
    );
}
