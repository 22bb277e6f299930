//! Coverage evaluators addressable by name.
//!
//! ```
//! use zfcov::registry::CoverageRegistry;
//! use zfcov::NetworkParams;
//!
//! let registry = CoverageRegistry::with_defaults(Default::default());
//! let analytic = registry.get("analytic").unwrap();
//! let est = analytic.evaluate(&NetworkParams::default()).unwrap();
//! assert!(est.value > 0.0 && est.value < 1.0);
//! ```

use crate::analytic::{coverage_probability, coverage_probability_gamma_oracle_with, OracleOptions};
use crate::error::{Error, Result};
use crate::montecarlo::{simulate_coverage, GainModel, SimConfig};
use crate::scenario::NetworkParams;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    /// Integration error bound or confidence half-width.
    pub error: f64,
}

pub trait CoverageMethod: Send + Sync {
    fn name(&self) -> &str;
    fn description(&self) -> &str;
    fn evaluate(&self, params: &NetworkParams) -> Result<Estimate>;
}

pub struct Analytic;

impl CoverageMethod for Analytic {
    fn name(&self) -> &str {
        "analytic"
    }

    fn description(&self) -> &str {
        "numerical inversion of the SINR Laplace transform"
    }

    fn evaluate(&self, params: &NetworkParams) -> Result<Estimate> {
        let r = coverage_probability(params)?;
        Ok(Estimate {
            value: r.value,
            error: r.abs_error_estimate,
        })
    }
}

pub struct ErlangOracle(pub OracleOptions);

impl CoverageMethod for ErlangOracle {
    fn name(&self) -> &str {
        "erlang-oracle"
    }

    fn description(&self) -> &str {
        "conditional Gamma survival integrated against the interference transform"
    }

    fn evaluate(&self, params: &NetworkParams) -> Result<Estimate> {
        let r = coverage_probability_gamma_oracle_with(params, self.0)?;
        Ok(Estimate {
            value: r.value,
            error: r.abs_error_estimate,
        })
    }
}

pub struct Simulation {
    name: String,
    pub sim: SimConfig,
}

impl Simulation {
    pub fn new(sim: SimConfig) -> Self {
        Simulation {
            name: format!("mc-{}", sim.gain_model),
            sim,
        }
    }
}

impl CoverageMethod for Simulation {
    fn name(&self) -> &str {
        &self.name
    }

    fn description(&self) -> &str {
        match self.sim.gain_model {
            GainModel::GammaSampled => "Monte Carlo with Gamma-distributed gains",
            GainModel::ExactZF => "Monte Carlo with explicit zero-forcing precoders",
        }
    }

    fn evaluate(&self, params: &NetworkParams) -> Result<Estimate> {
        let r = simulate_coverage(params, &self.sim)?;
        Ok(Estimate {
            value: r.estimate,
            error: r.half_width,
        })
    }
}

#[derive(Default)]
pub struct CoverageRegistry {
    methods: Vec<Box<dyn CoverageMethod>>,
}

impl CoverageRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Analytic, Erlang oracle, and one simulator per gain model, all
    /// simulations sharing `sim` apart from the gain model.
    pub fn with_defaults(sim: SimConfig) -> Self {
        let mut r = Self::new();
        r.register(Box::new(Analytic));
        r.register(Box::new(ErlangOracle(OracleOptions {
            seed: sim.seed,
            window_radius: sim.window_radius,
            ..OracleOptions::default()
        })));
        for model in [GainModel::GammaSampled, GainModel::ExactZF] {
            r.register(Box::new(Simulation::new(SimConfig {
                gain_model: model,
                ..sim
            })));
        }
        r
    }

    /// Adds `method`, replacing any method of the same name.
    pub fn register(&mut self, method: Box<dyn CoverageMethod>) {
        self.methods.retain(|m| m.name() != method.name());
        self.methods.push(method);
    }

    pub fn names(&self) -> Vec<&str> {
        self.methods.iter().map(|m| m.name()).collect()
    }

    pub fn get(&self, name: &str) -> Result<&dyn CoverageMethod> {
        self.methods
            .iter()
            .find(|m| m.name() == name)
            .map(|m| m.as_ref())
            .ok_or_else(|| Error::UnknownName {
                kind: "coverage method",
                name: name.to_string(),
                known: self.names().join(", "),
            })
    }
}
