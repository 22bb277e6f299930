use rayon::prelude::*;

use crate::analytic::energy_report;
use crate::error::{Error, Result};
use crate::scenario::NetworkParams;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerdictOptions {
    /// Coverage values this close to the best count as tied.
    pub tie_tolerance: f64,
}

impl Default for VerdictOptions {
    fn default() -> Self {
        VerdictOptions {
            tie_tolerance: 1e-2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub densities: Vec<f64>,
    /// `None` where the density is infeasible (`K > M`).
    pub coverage: Vec<Option<f64>>,
    pub ee: Vec<Option<f64>>,
    pub coverage_argmax: f64,
    pub ee_argmax: f64,
    pub densest_feasible: f64,
    /// Both maxima sit at the densest feasible point: small cells win.
    pub densest_wins: bool,
    /// Every feasible coverage is within the tie tolerance of the best.
    pub saturated: bool,
}

fn argmax(densities: &[f64], values: &[Option<f64>]) -> f64 {
    densities
        .iter()
        .zip(values)
        .filter_map(|(&d, v)| v.map(|v| (d, v)))
        .fold((f64::NAN, f64::NEG_INFINITY), |best, (d, v)| if v > best.1 { (d, v) } else { best })
        .0
}

pub fn verdict(params: &NetworkParams, densities: &[f64]) -> Result<Verdict> {
    verdict_with(params, densities, VerdictOptions::default())
}

/// Coverage and EE over `densities` with `λ_UE` (hence `λ_BS·M`) fixed.
pub fn verdict_with(
    params: &NetworkParams,
    densities: &[f64],
    opts: VerdictOptions,
) -> Result<Verdict> {
    if densities.is_empty() {
        return Err(Error::InvalidConfig("densities must not be empty".into()));
    }
    let reports: Vec<Option<(f64, f64)>> = densities
        .par_iter()
        .map(|&d| {
            let p = NetworkParams {
                lambda_bs: d,
                ..params.clone()
            };
            match energy_report(&p) {
                Ok(r) => Ok(Some((r.coverage, r.ee))),
                Err(e) if e.is_config() => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_>>()?;
    let coverage: Vec<Option<f64>> = reports.iter().map(|r| r.map(|r| r.0)).collect();
    let ee: Vec<Option<f64>> = reports.iter().map(|r| r.map(|r| r.1)).collect();
    let densest_feasible = densities
        .iter()
        .zip(&coverage)
        .filter(|(_, c)| c.is_some())
        .map(|(&d, _)| d)
        .fold(f64::NAN, f64::max);
    if densest_feasible.is_nan() {
        return Err(Error::InvalidConfig("no feasible density".into()));
    }
    let coverage_argmax = argmax(densities, &coverage);
    let ee_argmax = argmax(densities, &ee);
    let best = coverage.iter().flatten().copied().fold(f64::NEG_INFINITY, f64::max);
    let saturated = coverage
        .iter()
        .flatten()
        .all(|&c| best - c <= opts.tie_tolerance);
    Ok(Verdict {
        densities: densities.to_vec(),
        coverage,
        ee,
        coverage_argmax,
        ee_argmax,
        densest_feasible,
        densest_wins: coverage_argmax == densest_feasible && ee_argmax == densest_feasible,
        saturated,
    })
}
