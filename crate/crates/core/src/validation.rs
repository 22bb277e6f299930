//! Self-checks run by `zfcov validate`: closed forms, cross-checks between
//! independent evaluators, and goodness-of-fit tests of the samplers.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;

use crate::analytic::{coverage_probability, coverage_probability_gamma_oracle};
use crate::error::Result;
use crate::montecarlo::stats::{gamma_cdf, ks_test};
use crate::montecarlo::{sample_gains_exact_zf, sample_ppp_disk, simulate_coverage, trial_rng, SimConfig};
use crate::scenario::{derive_scenario, NetworkParams};
use crate::specfun::{
    association_distance_cdf, hyp2f1, laplace_interference, laplace_interference_quadrature_oracle,
    Hyp2F1Params,
};

const SEED: u64 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, passed: bool, detail: String) -> Check {
    Check { name, passed, detail }
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

pub fn rayleigh_baseline() -> Result<Check> {
    let p = NetworkParams {
        lambda_ue: 4.0,
        pathloss_alpha: 4.0,
        sinr_threshold_db: 0.0,
        interference_limited: true,
        ..Default::default()
    };
    let got = coverage_probability(&p)?.value;
    let want = 1.0 / (1.0 + PI / 4.0);
    Ok(check(
        "closed-form Rayleigh baseline",
        (got - want).abs() < 1e-4,
        format!("analytic {got:.9} vs 1/(1+π/4) = {want:.9}"),
    ))
}

pub fn hypergeometric_identities() -> Result<Check> {
    let mut worst = 0.0f64;
    for i in 0..50 {
        // ₂F₁(1,1;2;z) = -ln(1-z)/z on a spiral avoiding the cut
        let r = 0.05 + 30.0 * (i as f64 / 49.0).powi(2);
        let z = Complex64::from_polar(r, 0.3 + 5.6 * i as f64 / 49.0);
        let v = hyp2f1(Hyp2F1Params::new(1.0, 1.0, 2.0, z))?;
        worst = worst.max(rel(v, -(1.0 - z).ln() / z));
        // ₂F₁(1,-½;½;-t²) = 1 + t atan t
        let t = 10f64.powf(-2.0 + 6.0 * i as f64 / 49.0);
        let v = hyp2f1(Hyp2F1Params::new(1.0, -0.5, 0.5, Complex64::new(-t * t, 0.0)))?;
        worst = worst.max(rel(v, Complex64::new(1.0 + t * t.atan(), 0.0)));
    }
    Ok(check(
        "hypergeometric identities",
        worst < 1e-9,
        format!("worst relative error {worst:.2e}"),
    ))
}

pub fn interference_transform_oracle() -> Result<Check> {
    let base = derive_scenario(&NetworkParams::default())?;
    let mut rng = trial_rng(SEED, 0);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let k = [1.0, 2.0, 4.0, 8.0][rng.random_range(0..4)];
        let alpha = [3.0, 4.0, 5.0][rng.random_range(0..3)];
        let sc = crate::scenario::Scenario {
            k_users: k,
            pathloss_alpha: alpha,
            m_antennas: 8,
            ..base
        };
        let modulus = 10f64.powf(rng.random_range(-3.0..3.0));
        let s = Complex64::from_polar(modulus, rng.random_range(-PI / 2.0..=PI / 2.0));
        let a = laplace_interference(s, 0.5, &sc, 1.0)?;
        let b = laplace_interference_quadrature_oracle(s, 0.5, &sc, 1.0)?;
        worst = worst.max(rel(a, b));
    }
    Ok(check(
        "interference transform vs quadrature",
        worst < 1e-8,
        format!("worst relative error {worst:.2e}"),
    ))
}

pub fn erlang_oracle_agreement() -> Result<Check> {
    let p = NetworkParams::default();
    let analytic = coverage_probability(&p)?.value;
    let oracle = coverage_probability_gamma_oracle(&p)?.value;
    Ok(check(
        "analytic vs Erlang oracle",
        (analytic - oracle).abs() < 2e-3,
        format!("analytic {analytic:.9}, oracle {oracle:.9}"),
    ))
}

pub fn simulation_agreement() -> Result<Check> {
    let p = NetworkParams::default();
    let analytic = coverage_probability(&p)?.value;
    let sim = SimConfig {
        trials: 20_000,
        seed: SEED,
        ..Default::default()
    };
    let mc = simulate_coverage(&p, &sim)?;
    let diff = (analytic - mc.estimate).abs();
    Ok(check(
        "analytic vs Monte Carlo",
        diff < mc.half_width + 1e-3,
        format!("analytic {analytic:.6}, simulated {:.6} ± {:.1e}", mc.estimate, mc.half_width),
    ))
}

pub fn zf_gain_distribution() -> Result<Check> {
    let base = derive_scenario(&NetworkParams::default())?;
    let mut details = Vec::new();
    let mut passed = true;
    for (m, k) in [(8u32, 8.0), (8, 4.0), (4, 2.0)] {
        let sc = crate::scenario::Scenario {
            m_antennas: m,
            k_users: k,
            ..base
        };
        let samples = (0..10_000u64)
            .map(|i| sample_gains_exact_zf(&sc, 0, &mut trial_rng(SEED, i)).map(|(s, _)| s))
            .collect::<Result<Vec<_>>>()?;
        let shape = sc.desired_shape();
        let ks = ks_test(&samples, |x| gamma_cdf(shape, x), 0.01);
        passed &= ks.passed;
        details.push(format!("(M,K)=({m},{k}) D={:.4} crit {:.4}", ks.statistic, ks.critical_value));
    }
    Ok(check("exact ZF desired gain ~ Gamma(M-K+1)", passed, details.join("; ")))
}

pub fn nearest_distance_distribution() -> Check {
    let lambda = 4.0;
    let radius = (50.0 / (PI * lambda)).sqrt();
    let samples: Vec<f64> = (0..10_000u64)
        .map(|i| {
            let mut rng = trial_rng(SEED, i);
            sample_ppp_disk(lambda, radius, &mut rng)
                .into_iter()
                .map(|(x, y)| x.hypot(y))
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    let ks = ks_test(&samples, |r| association_distance_cdf(r.min(radius), lambda), 0.01);
    check(
        "nearest BS distance",
        ks.passed,
        format!("D={:.4} crit {:.4}", ks.statistic, ks.critical_value),
    )
}

pub fn ppp_counts() -> Check {
    let (lambda, radius) = (4.0, 10.0);
    let n = 10_000;
    let counts: Vec<f64> = (0..n as u64)
        .map(|i| sample_ppp_disk(lambda, radius, &mut trial_rng(SEED, i)).len() as f64)
        .collect();
    let mean = counts.iter().sum::<f64>() / n as f64;
    let var = counts.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    let want = lambda * PI * radius * radius;
    let ok = (mean - want).abs() < 3.0 * (want / n as f64).sqrt() && (var / mean - 1.0).abs() < 0.05;
    check("PPP counts", ok, format!("mean {mean:.2} (expect {want:.2}), variance/mean {:.4}", var / mean))
}

/// Runs every check; numerical errors are reported as failed checks.
pub fn run_all() -> Vec<Check> {
    type Fallible = fn() -> Result<Check>;
    let fallible: [(&'static str, Fallible); 6] = [
        ("closed-form Rayleigh baseline", rayleigh_baseline),
        ("hypergeometric identities", hypergeometric_identities),
        ("interference transform vs quadrature", interference_transform_oracle),
        ("analytic vs Erlang oracle", erlang_oracle_agreement),
        ("analytic vs Monte Carlo", simulation_agreement),
        ("exact ZF desired gain ~ Gamma(M-K+1)", zf_gain_distribution),
    ];
    let mut out: Vec<Check> = fallible
        .iter()
        .map(|(name, f)| f().unwrap_or_else(|e| check(name, false, e.to_string())))
        .collect();
    out.push(nearest_distance_distribution());
    out.push(ppp_counts());
    out
}
