//! Parameter sweeps rendered as CSV tables, plus the densification verdict.

mod format;
mod verdict;

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Deserialize;

use crate::analytic::{average_energy_consumption, coverage_for_scenario};
use crate::error::{Error, Result};
use crate::montecarlo::{simulate_coverage, GainModel, SimConfig};
use crate::scenario::{derive_scenario, NetworkParams};

pub use format::{format_g9, write_csv, CSV_HEADER};
pub use verdict::{verdict, verdict_with, Verdict, VerdictOptions};

/// A network parameter that a sweep can vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Field {
    ThresholdDb,
    BsDensity,
    NumSubbands,
    PathlossAlpha,
}

impl Field {
    pub fn name(self) -> &'static str {
        match self {
            Field::ThresholdDb => "threshold_db",
            Field::BsDensity => "bs_density",
            Field::NumSubbands => "num_subbands",
            Field::PathlossAlpha => "pathloss_alpha",
        }
    }

    /// Copy of `base` with this field set to `value`.
    pub fn apply(self, base: &NetworkParams, value: f64) -> Result<NetworkParams> {
        let mut p = base.clone();
        match self {
            Field::ThresholdDb => p.sinr_threshold_db = value,
            Field::BsDensity => p.lambda_bs = value,
            Field::PathlossAlpha => p.pathloss_alpha = value,
            Field::NumSubbands => {
                if !(value >= 1.0 && value.fract() == 0.0 && value <= f64::from(u32::MAX)) {
                    return Err(Error::InvalidConfig(format!(
                        "num_subbands must be a positive integer, got {value}"
                    )));
                }
                p.num_subbands = value as u32;
            }
        }
        Ok(p)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub enum Metric {
    #[serde(rename = "coverage_analytic")]
    CoverageAnalytic,
    #[serde(rename = "coverage_mc")]
    CoverageMC,
    #[serde(rename = "ee_analytic")]
    EeAnalytic,
    #[serde(rename = "ee_mc")]
    EeMC,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::CoverageAnalytic => "coverage_analytic",
            Metric::CoverageMC => "coverage_mc",
            Metric::EeAnalytic => "ee_analytic",
            Metric::EeMC => "ee_mc",
        }
    }

    fn is_mc(self) -> bool {
        matches!(self, Metric::CoverageMC | Metric::EeMC)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    Infeasible,
    Failed,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Infeasible => "infeasible",
            Status::Failed => "failed",
        }
    }
}

/// One curve family member: the sweep is repeated for each value of
/// `field`, and metric names are suffixed `@field=value`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Series {
    pub field: Field,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimSection {
    pub trials: usize,
    pub seed: u64,
    pub gain_model: String,
    pub confidence_level: f64,
    pub window_radius: Option<f64>,
    pub tail_compensation: bool,
}

impl Default for SimSection {
    fn default() -> Self {
        let d = SimConfig::default();
        SimSection {
            trials: d.trials,
            seed: d.seed,
            gain_model: d.gain_model.name().to_string(),
            confidence_level: d.confidence_level,
            window_radius: d.window_radius,
            tail_compensation: d.tail_compensation,
        }
    }
}

impl SimSection {
    pub fn to_config(&self) -> Result<SimConfig> {
        let sim = SimConfig {
            trials: self.trials,
            window_radius: self.window_radius,
            seed: self.seed,
            gain_model: GainModel::from_str(&self.gain_model)?,
            confidence_level: self.confidence_level,
            tail_compensation: self.tail_compensation,
        };
        sim.validate()?;
        Ok(sim)
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    #[serde(default)]
    pub base: NetworkParams,
    pub axis: Field,
    pub values: Vec<f64>,
    pub metrics: Vec<Metric>,
    pub sim: Option<SimSection>,
    pub series: Option<Series>,
}

fn check_increasing(what: &str, values: &[f64]) -> Result<()> {
    if values.is_empty() {
        return Err(Error::InvalidConfig(format!("{what} must not be empty")));
    }
    if values.iter().any(|v| !v.is_finite()) || values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidConfig(format!(
            "{what} must be finite and strictly increasing"
        )));
    }
    Ok(())
}

impl SweepSpec {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let spec: SweepSpec =
            toml::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.axis == Field::PathlossAlpha {
            return Err(Error::InvalidConfig(
                "axis must be threshold_db, bs_density or num_subbands".into(),
            ));
        }
        check_increasing("values", &self.values)?;
        if self.metrics.is_empty() {
            return Err(Error::InvalidConfig("metrics must not be empty".into()));
        }
        if let Some(series) = &self.series {
            if series.field == self.axis {
                return Err(Error::InvalidConfig("series field must differ from the axis".into()));
            }
            check_increasing("series values", &series.values)?;
        }
        if self.metrics.iter().any(|m| m.is_mc()) && self.sim.is_none() {
            return Err(Error::InvalidConfig("Monte Carlo metrics need a [sim] section".into()));
        }
        if let Some(sim) = &self.sim {
            sim.to_config()?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub metric: String,
    pub result: f64,
    pub err: f64,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub axis: String,
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    /// Rows of one metric, in axis order.
    pub fn metric_rows<'a>(&'a self, metric: &'a str) -> impl Iterator<Item = &'a SweepRow> + 'a {
        self.rows.iter().filter(move |r| r.metric == metric)
    }
}

/// Per-point seed; distinct points get unrelated streams.
pub fn point_seed(seed: u64, index: u64) -> u64 {
    // splitmix64 finalizer over the combined words
    let mut z = seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

struct Point {
    params: Result<NetworkParams>,
    axis_value: f64,
    suffix: String,
    seed: u64,
}

fn status_of(e: &Error) -> Status {
    if e.is_config() {
        Status::Infeasible
    } else {
        Status::Failed
    }
}

fn failed_rows(point: &Point, metrics: &[Metric], status: Status) -> Vec<SweepRow> {
    metrics
        .iter()
        .map(|m| SweepRow {
            value: point.axis_value,
            metric: format!("{}{}", m.name(), point.suffix),
            result: f64::NAN,
            err: f64::NAN,
            status,
        })
        .collect()
}

fn evaluate_point(point: &Point, spec: &SweepSpec, sim: Option<SimConfig>) -> Vec<SweepRow> {
    let params = match &point.params {
        Ok(p) => p,
        Err(e) => return failed_rows(point, &spec.metrics, status_of(e)),
    };
    let scenario = match derive_scenario(params) {
        Ok(s) => s,
        Err(e) => return failed_rows(point, &spec.metrics, status_of(&e)),
    };
    // EE = factor × coverage
    let factor = scenario.lambda_bs
        * scenario.k_users
        * params.rate_log.apply(1.0 + scenario.t_linear)
        / average_energy_consumption(params, &scenario);

    let wants = |pred: fn(Metric) -> bool| spec.metrics.iter().any(|&m| pred(m));
    let analytic = wants(|m| !m.is_mc()).then(|| {
        coverage_for_scenario(&scenario, scenario.effective_noise(params))
            .map(|c| (c.value, c.abs_error_estimate))
    });
    let mc = wants(Metric::is_mc).then(|| {
        let sim = SimConfig {
            seed: point.seed,
            ..sim.expect("validated: MC metrics come with a sim section")
        };
        simulate_coverage(params, &sim).map(|o| (o.estimate, o.half_width))
    });

    spec.metrics
        .iter()
        .map(|&m| {
            let source = if m.is_mc() { &mc } else { &analytic };
            let scale = match m {
                Metric::CoverageAnalytic | Metric::CoverageMC => 1.0,
                Metric::EeAnalytic | Metric::EeMC => factor,
            };
            let (result, err, status) = match source.as_ref().expect("computed when requested") {
                Ok((v, e)) => (scale * v, scale * e, Status::Ok),
                Err(e) => (f64::NAN, f64::NAN, status_of(e)),
            };
            SweepRow {
                value: point.axis_value,
                metric: format!("{}{}", m.name(), point.suffix),
                result,
                err,
                status,
            }
        })
        .collect()
}

/// Evaluates every requested metric at every axis value (and series value).
/// Point failures are recorded in the row status; only an invalid spec is
/// an error.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepTable> {
    spec.validate()?;
    let sim = spec.sim.as_ref().map(SimSection::to_config).transpose()?;
    let base_seed = sim.map_or(0, |s| s.seed);

    let series: Vec<(Option<Field>, f64)> = match &spec.series {
        Some(s) => s.values.iter().map(|&v| (Some(s.field), v)).collect(),
        None => vec![(None, f64::NAN)],
    };
    let mut points = Vec::with_capacity(series.len() * spec.values.len());
    for &(field, series_value) in &series {
        let (base, suffix) = match field {
            Some(f) => (
                f.apply(&spec.base, series_value),
                format!("@{}={}", f.name(), format_g9(series_value)),
            ),
            None => (Ok(spec.base.clone()), String::new()),
        };
        for &v in &spec.values {
            let index = points.len() as u64;
            points.push(Point {
                params: base.clone().and_then(|b| spec.axis.apply(&b, v)),
                axis_value: v,
                suffix: suffix.clone(),
                seed: point_seed(base_seed, index),
            });
        }
    }

    let rows: Vec<Vec<SweepRow>> = points
        .par_iter()
        .map(|p| evaluate_point(p, spec, sim))
        .collect();
    Ok(SweepTable {
        axis: spec.axis.name().to_string(),
        rows: rows.into_iter().flatten().collect(),
    })
}
