//! Downlink coverage probability and energy efficiency of cellular networks
//! whose base stations form a Poisson point process and serve several users
//! per sub-band with zero-forcing precoding.
//!
//! The analytic path inverts the Laplace transforms of interference and
//! desired signal numerically; the Monte Carlo path simulates the network
//! directly. Both are reachable by name through [`registry`].

pub mod analytic;
pub mod error;
pub mod experiments;
pub mod montecarlo;
pub mod quadrature;
pub mod registry;
pub mod scenario;
pub mod specfun;
pub mod validation;

pub use analytic::{coverage_probability, energy_report, CoverageResult, EnergyReport};
pub use error::{Error, Result};
pub use montecarlo::{simulate_coverage, simulate_energy, GainModel, SimConfig, SimOutcome};
pub use scenario::{derive_scenario, NetworkParams, RateLog, Scenario, UserLoad};
