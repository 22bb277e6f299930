//! Choice of the finite simulation window.
//!
//! Interferers beyond radius `R` are not drawn; their aggregate is replaced
//! by its mean `2πλK R^{2-α}/(α-2)`. What remains is the fluctuation of
//! that tail around its mean, with standard deviation
//! `sqrt(2πλK(K+1) R^{2-2α}/(2α-2))`. The window is adequate when this is
//! below `1e-3` of a pilot median of interference plus noise (or, with
//! compensation off, when the tail mean itself is).

use std::f64::consts::PI;

use rand_distr::{Distribution, Gamma};

use crate::error::{Error, Result};
use crate::scenario::{NetworkParams, Scenario};

use super::ppp::sample_ppp_disk;
use super::{trial_rng, GainModel};

/// Tolerated tail error relative to the pilot interference level.
pub const TAIL_FRACTION: f64 = 1e-3;
const PILOT_TRIALS: usize = 512;
const PILOT_POINTS: f64 = 256.0;
/// Largest expected number of BSs per trial the automatic search will try.
const MAX_POINTS: f64 = 4_194_304.0;

pub fn tail_interference_mean(scenario: &Scenario, radius: f64) -> f64 {
    let alpha = scenario.pathloss_alpha;
    2.0 * PI * scenario.lambda_bs * scenario.k_users * radius.powf(2.0 - alpha) / (alpha - 2.0)
}

pub fn tail_interference_sd(scenario: &Scenario, radius: f64) -> f64 {
    let alpha = scenario.pathloss_alpha;
    let k = scenario.k_users;
    (2.0 * PI * scenario.lambda_bs * k * (k + 1.0) * radius.powf(2.0 - 2.0 * alpha)
        / (2.0 * alpha - 2.0))
        .sqrt()
}

/// Median over pilot trials of the in-window interference plus noise at
/// the pilot radius. Interference only grows with the window, so this is a
/// conservative reference for larger windows.
pub fn pilot_interference_level(params: &NetworkParams, scenario: &Scenario, seed: u64) -> f64 {
    let radius = pilot_radius(scenario);
    let noise = scenario.effective_noise(params);
    let alpha = scenario.pathloss_alpha;
    let gain = Gamma::new(scenario.k_users, 1.0).expect("K > 0");
    let mut levels: Vec<f64> = (0..PILOT_TRIALS)
        .map(|i| {
            let mut rng = trial_rng(seed ^ 0x9E37_79B9_7F4A_7C15, i as u64);
            let r2: Vec<f64> = sample_ppp_disk(scenario.lambda_bs, radius, &mut rng)
                .into_iter()
                .map(|(x, y)| x * x + y * y)
                .collect();
            let nearest = r2.iter().copied().fold(f64::INFINITY, f64::min);
            let interference: f64 = r2
                .iter()
                .filter(|&&d| d != nearest)
                .map(|&d| gain.sample(&mut rng) * d.powf(-alpha / 2.0))
                .sum();
            interference + noise
        })
        .collect();
    levels.sort_by(f64::total_cmp);
    levels[PILOT_TRIALS / 2]
}

fn pilot_radius(scenario: &Scenario) -> f64 {
    (PILOT_POINTS / (PI * scenario.lambda_bs)).sqrt()
}

fn tail_error(scenario: &Scenario, radius: f64, compensated: bool) -> f64 {
    if compensated {
        tail_interference_sd(scenario, radius)
    } else {
        tail_interference_mean(scenario, radius)
    }
}

/// Checks a user-supplied radius against the tail criterion.
pub fn check_window(
    params: &NetworkParams,
    scenario: &Scenario,
    radius: f64,
    compensated: bool,
    seed: u64,
) -> Result<()> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidConfig(format!("window radius must be positive, got {radius}")));
    }
    let level = pilot_interference_level(params, scenario, seed);
    let err = tail_error(scenario, radius, compensated);
    if err > TAIL_FRACTION * level {
        return Err(Error::WindowTooSmall(format!(
            "radius {radius} km leaves tail error {err:.3e} against interference level {level:.3e}"
        )));
    }
    Ok(())
}

/// Smallest radius of the form `R₀·2ᵏ` meeting the tail criterion, with
/// `R₀` the pilot radius.
pub fn auto_window_radius_with(
    params: &NetworkParams,
    scenario: &Scenario,
    compensated: bool,
    seed: u64,
) -> Result<f64> {
    let level = pilot_interference_level(params, scenario, seed);
    let mut radius = pilot_radius(scenario);
    loop {
        if tail_error(scenario, radius, compensated) <= TAIL_FRACTION * level {
            return Ok(radius);
        }
        radius *= 2.0;
        if PI * scenario.lambda_bs * radius * radius > MAX_POINTS {
            return Err(Error::WindowTooSmall(format!(
                "no window with fewer than {MAX_POINTS} expected BSs meets the tail criterion"
            )));
        }
    }
}

/// Automatic radius with tail compensation. The gain model does not enter:
/// both models give interferers the same mean and second moment to within
/// the accuracy the criterion needs.
pub fn auto_window_radius(
    params: &NetworkParams,
    scenario: &Scenario,
    _model: GainModel,
    seed: u64,
) -> Result<f64> {
    auto_window_radius_with(params, scenario, true, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{geometric_breaks, integrate_real, QuadOptions};
    use crate::scenario::derive_scenario;

    #[test]
    fn tail_moments_match_quadrature() {
        let sc = derive_scenario(&NetworkParams {
            pathloss_alpha: 3.0,
            ..Default::default()
        })
        .unwrap();
        let r = 2.0;
        let breaks = geometric_breaks(r, 1e11, 60, false);
        let mean = integrate_real(
            |v| Ok(2.0 * PI * sc.lambda_bs * sc.k_users * v.powf(1.0 - 3.0)),
            &breaks,
            QuadOptions::new(0.0, 1e-12),
        )
        .unwrap();
        assert!((mean.value.re - tail_interference_mean(&sc, r)).abs() < 1e-5);
        let var = integrate_real(
            |v| Ok(2.0 * PI * sc.lambda_bs * 72.0 * v.powf(1.0 - 6.0)),
            &breaks,
            QuadOptions::new(0.0, 1e-12),
        )
        .unwrap();
        assert!((var.value.re.sqrt() - tail_interference_sd(&sc, r)).abs() < 1e-9);
    }

    #[test]
    fn automatic_radius_meets_criterion_and_grows_with_alpha_decrease() {
        let p4 = NetworkParams::default();
        let p3 = NetworkParams {
            pathloss_alpha: 3.0,
            ..Default::default()
        };
        let s4 = derive_scenario(&p4).unwrap();
        let s3 = derive_scenario(&p3).unwrap();
        let r4 = auto_window_radius(&p4, &s4, GainModel::GammaSampled, 1).unwrap();
        let r3 = auto_window_radius(&p3, &s3, GainModel::GammaSampled, 1).unwrap();
        assert!(r3 > r4);
        check_window(&p4, &s4, r4, true, 1).unwrap();
        assert!(matches!(
            check_window(&p4, &s4, r4 / 8.0, true, 1),
            Err(Error::WindowTooSmall(_))
        ));
    }

    #[test]
    fn uncompensated_tail_at_low_alpha_is_rejected() {
        let p = NetworkParams {
            pathloss_alpha: 2.2,
            ..Default::default()
        };
        let sc = derive_scenario(&p).unwrap();
        assert!(matches!(
            auto_window_radius_with(&p, &sc, false, 1),
            Err(Error::WindowTooSmall(_))
        ));
    }
}
