//! Channel power gains for the desired link and for each interferer.
//!
//! Two strategies share the [`GainSampler`] interface: drawing directly from
//! the Gamma laws (`"gamma"`), or building zero-forcing precoders from
//! Gaussian channel matrices (`"zf"`).

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};

use crate::error::{Error, Result};
use crate::scenario::Scenario;

use super::SimRng;

/// How many times a singular channel draw is retried before giving up.
const SINGULAR_RETRIES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum GainModel {
    #[default]
    GammaSampled,
    ExactZF,
}

impl GainModel {
    pub fn name(self) -> &'static str {
        match self {
            GainModel::GammaSampled => "gamma",
            GainModel::ExactZF => "zf",
        }
    }
}

impl fmt::Display for GainModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GainModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GAIN_MODELS
            .iter()
            .find(|entry| entry.name == s)
            .map(|entry| entry.model)
            .ok_or_else(|| Error::UnknownName {
                kind: "gain model",
                name: s.to_string(),
                known: gain_model_names().join(", "),
            })
    }
}

pub trait GainSampler: Send + Sync {
    fn name(&self) -> &'static str;
    /// Desired-link power gain `S`.
    fn desired(&self, rng: &mut SimRng) -> Result<f64>;
    /// Power gain `gᵢ` of one interfering BS towards the typical user.
    fn interferer(&self, rng: &mut SimRng) -> Result<f64>;
}

pub struct GainModelEntry {
    pub name: &'static str,
    pub model: GainModel,
    pub build: fn(&Scenario) -> Result<Box<dyn GainSampler>>,
}

pub static GAIN_MODELS: &[GainModelEntry] = &[
    GainModelEntry {
        name: "gamma",
        model: GainModel::GammaSampled,
        build: |sc| Ok(Box::new(GammaGains::new(sc)?)),
    },
    GainModelEntry {
        name: "zf",
        model: GainModel::ExactZF,
        build: |sc| Ok(Box::new(ExactZfGains::new(sc)?)),
    },
];

pub fn gain_model_names() -> Vec<&'static str> {
    GAIN_MODELS.iter().map(|e| e.name).collect()
}

pub fn gain_sampler(model: GainModel, scenario: &Scenario) -> Result<Box<dyn GainSampler>> {
    let entry = GAIN_MODELS
        .iter()
        .find(|e| e.model == model)
        .expect("every gain model is registered");
    (entry.build)(scenario)
}

/// `S ~ Γ(M-K+1, 1)`, `gᵢ ~ Γ(K, 1)`.
pub struct GammaGains {
    desired: Gamma<f64>,
    interferer: Gamma<f64>,
}

impl GammaGains {
    pub fn new(scenario: &Scenario) -> Result<Self> {
        let shape = |k: f64| {
            Gamma::new(k, 1.0).map_err(|e| Error::InvalidConfig(format!("gamma shape {k}: {e}")))
        };
        Ok(GammaGains {
            desired: shape(scenario.desired_shape())?,
            interferer: shape(scenario.k_users)?,
        })
    }
}

impl GainSampler for GammaGains {
    fn name(&self) -> &'static str {
        "gamma"
    }

    fn desired(&self, rng: &mut SimRng) -> Result<f64> {
        Ok(self.desired.sample(rng))
    }

    fn interferer(&self, rng: &mut SimRng) -> Result<f64> {
        Ok(self.interferer.sample(rng))
    }
}

/// Gains from explicit ZF precoders of i.i.d. `CN(0, 1)` channels.
pub struct ExactZfGains {
    m: usize,
    k: usize,
}

impl ExactZfGains {
    pub fn new(scenario: &Scenario) -> Result<Self> {
        let k = scenario
            .k_integral()
            .ok_or(Error::NonIntegralUsers(scenario.k_users))?;
        if k > scenario.m_antennas {
            return Err(Error::InvalidConfig(format!(
                "K = {k} exceeds M = {}",
                scenario.m_antennas
            )));
        }
        Ok(ExactZfGains {
            m: scenario.m_antennas as usize,
            k: k as usize,
        })
    }

    /// Unit-norm ZF beamformers (columns) for the `K×M` channel `h`, whose
    /// rows are the users' conjugated channels.
    pub fn beamformers(h: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
        let hh = h.adjoint();
        let gram_inv = (h * &hh).try_inverse().ok_or(Error::SingularChannel)?;
        let mut w = hh * gram_inv;
        for mut col in w.column_iter_mut() {
            let norm = col.norm();
            if !(norm.is_finite() && norm > 0.0) {
                return Err(Error::SingularChannel);
            }
            col /= Complex64::new(norm, 0.0);
        }
        Ok(w)
    }

    fn precoders(&self, rng: &mut SimRng) -> Result<(DMatrix<Complex64>, DMatrix<Complex64>)> {
        for _ in 0..SINGULAR_RETRIES {
            let h = complex_gaussian(self.k, self.m, rng);
            match Self::beamformers(&h) {
                Ok(w) => return Ok((h, w)),
                Err(Error::SingularChannel) => continue,
                Err(e) => return Err(e),
            }
        }
        Err(Error::SingularChannel)
    }
}

impl GainSampler for ExactZfGains {
    fn name(&self) -> &'static str {
        "zf"
    }

    fn desired(&self, rng: &mut SimRng) -> Result<f64> {
        let (h, w) = self.precoders(rng)?;
        Ok((h.row(0) * w.column(0))[(0, 0)].norm_sqr())
    }

    fn interferer(&self, rng: &mut SimRng) -> Result<f64> {
        let (_, w) = self.precoders(rng)?;
        let cross = complex_gaussian(1, self.m, rng);
        Ok((cross * w).iter().map(|v| v.norm_sqr()).sum())
    }
}

/// `rows×cols` matrix of i.i.d. circularly-symmetric `CN(0, 1)` entries.
pub fn complex_gaussian(rows: usize, cols: usize, rng: &mut impl Rng) -> DMatrix<Complex64> {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    DMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex64::new(scale * re, scale * im)
    })
}

fn draw(
    sampler: &dyn GainSampler,
    n_interferers: usize,
    rng: &mut SimRng,
) -> Result<(f64, Vec<f64>)> {
    let s = sampler.desired(rng)?;
    let g = (0..n_interferers)
        .map(|_| sampler.interferer(rng))
        .collect::<Result<Vec<_>>>()?;
    Ok((s, g))
}

pub fn sample_gains_gamma(
    scenario: &Scenario,
    n_interferers: usize,
    rng: &mut SimRng,
) -> Result<(f64, Vec<f64>)> {
    draw(&GammaGains::new(scenario)?, n_interferers, rng)
}

pub fn sample_gains_exact_zf(
    scenario: &Scenario,
    n_interferers: usize,
    rng: &mut SimRng,
) -> Result<(f64, Vec<f64>)> {
    draw(&ExactZfGains::new(scenario)?, n_interferers, rng)
}
