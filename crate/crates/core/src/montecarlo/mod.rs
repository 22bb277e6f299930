//! End-to-end simulation of the network seen by a typical user at the
//! origin: PPP base stations in a disk, nearest-BS association, ZF gains.
//!
//! Every trial owns an RNG stream derived from `(seed, trial index)`, so the
//! result does not depend on how trials are scheduled across threads.

pub mod gains;
pub mod ppp;
pub mod stats;
pub mod window;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::analytic::{energy_from_coverage, EnergyReport};
use crate::error::{Error, Result};
use crate::scenario::{derive_scenario, NetworkParams, Scenario};

pub use gains::{
    gain_model_names, gain_sampler, sample_gains_exact_zf, sample_gains_gamma, GainModel,
    GainSampler,
};
pub use ppp::sample_ppp_disk;
pub use window::{auto_window_radius, check_window, tail_interference_mean};

pub type SimRng = ChaCha8Rng;

/// Consecutive empty windows tolerated in one trial.
const MAX_EMPTY_RESAMPLES: u64 = 1000;

pub fn trial_rng(seed: u64, trial: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub trials: usize,
    /// Simulation disk radius, km; chosen automatically when `None`.
    pub window_radius: Option<f64>,
    pub seed: u64,
    pub gain_model: GainModel,
    pub confidence_level: f64,
    /// Add the mean interference from beyond the window.
    pub tail_compensation: bool,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            trials: 10_000,
            window_radius: None,
            seed: 0,
            gain_model: GainModel::GammaSampled,
            confidence_level: 0.99,
            tail_compensation: true,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        if !(self.confidence_level > 0.0 && self.confidence_level < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "confidence level must lie in (0, 1), got {}",
                self.confidence_level
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimOutcome {
    pub estimate: f64,
    pub half_width: f64,
    pub trials_used: usize,
    /// Windows that held no BS and were redrawn.
    pub empty_resamples: u64,
    pub window_radius: f64,
}

/// Per-trial SINR values, reusable across thresholds.
#[derive(Debug, Clone, PartialEq)]
pub struct SinrSamples {
    pub values: Vec<f64>,
    pub empty_resamples: u64,
    pub window_radius: f64,
}

impl SinrSamples {
    /// Fraction of trials with SINR above `t_linear`.
    pub fn coverage(&self, t_linear: f64, confidence_level: f64) -> SimOutcome {
        let n = self.values.len();
        let hits = self.values.iter().filter(|&&v| v > t_linear).count();
        let estimate = hits as f64 / n as f64;
        SimOutcome {
            estimate,
            half_width: stats::proportion_half_width(estimate, n, confidence_level),
            trials_used: n,
            empty_resamples: self.empty_resamples,
            window_radius: self.window_radius,
        }
    }
}

fn resolve_window(params: &NetworkParams, scenario: &Scenario, sim: &SimConfig) -> Result<f64> {
    match sim.window_radius {
        Some(r) => {
            check_window(params, scenario, r, sim.tail_compensation, sim.seed)?;
            Ok(r)
        }
        None if sim.tail_compensation => {
            auto_window_radius(params, scenario, sim.gain_model, sim.seed)
        }
        None => window::auto_window_radius_with(params, scenario, false, sim.seed),
    }
}

fn one_trial(
    scenario: &Scenario,
    sampler: &dyn GainSampler,
    radius: f64,
    noise: f64,
    tail: f64,
    rng: &mut SimRng,
) -> Result<(f64, u64)> {
    let alpha = scenario.pathloss_alpha;
    let mut empty = 0;
    let points = loop {
        let pts = sample_ppp_disk(scenario.lambda_bs, radius, rng);
        if !pts.is_empty() {
            break pts;
        }
        empty += 1;
        if empty >= MAX_EMPTY_RESAMPLES {
            return Err(Error::WindowTooSmall(format!(
                "{empty} consecutive empty windows of radius {radius} km"
            )));
        }
    };
    let r2: Vec<f64> = points.iter().map(|(x, y)| x * x + y * y).collect();
    let serving = r2
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .expect("non-empty");
    let signal = sampler.desired(rng)? * r2[serving].powf(-alpha / 2.0);
    let mut interference = tail;
    for (i, &d) in r2.iter().enumerate() {
        if i != serving {
            interference += sampler.interferer(rng)? * d.powf(-alpha / 2.0);
        }
    }
    Ok((signal / (interference + noise), empty))
}

/// Draws `sim.trials` SINR realizations of the typical user.
pub fn simulate_sinr(params: &NetworkParams, sim: &SimConfig) -> Result<SinrSamples> {
    sim.validate()?;
    let scenario = derive_scenario(params)?;
    let sampler = gain_sampler(sim.gain_model, &scenario)?;
    let radius = resolve_window(params, &scenario, sim)?;
    let noise = scenario.effective_noise(params);
    let tail = if sim.tail_compensation {
        tail_interference_mean(&scenario, radius)
    } else {
        0.0
    };
    let draws: Vec<(f64, u64)> = (0..sim.trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(sim.seed, i as u64);
            one_trial(&scenario, sampler.as_ref(), radius, noise, tail, &mut rng)
        })
        .collect::<Result<_>>()?;
    Ok(SinrSamples {
        empty_resamples: draws.iter().map(|d| d.1).sum(),
        values: draws.into_iter().map(|d| d.0).collect(),
        window_radius: radius,
    })
}

pub fn simulate_coverage(params: &NetworkParams, sim: &SimConfig) -> Result<SimOutcome> {
    let scenario = derive_scenario(params)?;
    Ok(simulate_sinr(params, sim)?.coverage(scenario.t_linear, sim.confidence_level))
}

pub fn simulate_energy(params: &NetworkParams, sim: &SimConfig) -> Result<EnergyReport> {
    let scenario = derive_scenario(params)?;
    let outcome = simulate_coverage(params, sim)?;
    Ok(energy_from_coverage(params, &scenario, outcome.estimate))
}
