//! Network parameters and the per-configuration quantities derived from them.
//!
//! All densities are per km², distances in km, powers in W unless the field
//! name says otherwise.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How the per-sub-band user load `K = (λ_UE/λ_BS)/L` is turned into a number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UserLoad {
    /// `K = λ_UE / (λ_BS L)` kept as a real number. Average load per
    /// sub-band; may drop below one user in dense small-cell layouts.
    #[default]
    Fractional,
    /// `K = max(1, floor(λ_UE / (λ_BS L)))`, an integral user count.
    Floor,
}

impl FromStr for UserLoad {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fractional" => Ok(UserLoad::Fractional),
            "floor" => Ok(UserLoad::Floor),
            other => Err(Error::UnknownName {
                kind: "user-load policy",
                name: other.to_string(),
                known: "fractional, floor".into(),
            }),
        }
    }
}

/// Logarithm used for the fixed-rate `log(1 + T)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RateLog {
    #[default]
    Log2,
    Ln,
}

impl RateLog {
    pub fn apply(self, x: f64) -> f64 {
        match self {
            RateLog::Log2 => x.log2(),
            RateLog::Ln => x.ln(),
        }
    }
}

/// Raw network inputs, as read from a configuration file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NetworkParams {
    /// BS density, BS/km².
    pub lambda_bs: f64,
    /// User density, UE/km².
    pub lambda_ue: f64,
    /// Number of sub-bands `L`.
    pub num_subbands: u32,
    /// Path-loss exponent, strictly greater than 2.
    pub pathloss_alpha: f64,
    /// Aggregate average power budget, dBm.
    pub p_max_dbm: f64,
    /// SINR target, dB.
    pub sinr_threshold_db: f64,
    /// Power-amplifier efficiency in (0, 1].
    pub eta: f64,
    /// Circuit power per antenna, W.
    pub p_c: f64,
    /// Precoding energy coefficient, W.
    pub p_pre: f64,
    /// Non-transmission power, W.
    pub p_0: f64,
    /// Drop the thermal-noise term (interference-limited network).
    pub interference_limited: bool,
    pub rate_log: RateLog,
    pub user_load: UserLoad,
    /// Total bandwidth. Informational only, enters no formula.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bandwidth_hz: Option<f64>,
}

// η = 0.318 is a measured amplifier efficiency, not 1/π
#[allow(clippy::approx_constant)]
impl Default for NetworkParams {
    fn default() -> Self {
        NetworkParams {
            lambda_bs: 4.0,
            lambda_ue: 32.0,
            num_subbands: 1,
            pathloss_alpha: 4.0,
            p_max_dbm: 40.0,
            sinr_threshold_db: 1.0,
            eta: 0.318,
            p_c: 14.8,
            p_pre: 1.74,
            p_0: 65.8,
            interference_limited: false,
            rate_log: RateLog::Log2,
            user_load: UserLoad::Fractional,
            bandwidth_hz: None,
        }
    }
}

impl NetworkParams {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let params: NetworkParams =
            toml::from_str(text).map_err(|e| Error::InvalidConfig(e.message().to_string()))?;
        params.validate()?;
        Ok(params)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("NetworkParams always serializes")
    }

    pub fn validate(&self) -> Result<()> {
        fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<()> {
            if ok {
                Ok(())
            } else {
                Err(Error::InvalidConfig(msg()))
            }
        }
        let finite = [
            ("lambda_bs", self.lambda_bs),
            ("lambda_ue", self.lambda_ue),
            ("pathloss_alpha", self.pathloss_alpha),
            ("p_max_dbm", self.p_max_dbm),
            ("sinr_threshold_db", self.sinr_threshold_db),
            ("eta", self.eta),
            ("p_c", self.p_c),
            ("p_pre", self.p_pre),
            ("p_0", self.p_0),
        ];
        for (name, v) in finite {
            check(v.is_finite(), || format!("{name} must be finite, got {v}"))?;
        }
        check(self.lambda_bs > 0.0, || {
            format!("lambda_bs must be positive, got {}", self.lambda_bs)
        })?;
        check(self.lambda_ue > 0.0, || {
            format!("lambda_ue must be positive, got {}", self.lambda_ue)
        })?;
        check(self.num_subbands >= 1, || "num_subbands must be at least 1".into())?;
        // alpha = 2 makes the interference integral diverge.
        check(self.pathloss_alpha > 2.0, || {
            format!("pathloss_alpha must exceed 2, got {}", self.pathloss_alpha)
        })?;
        check(self.eta > 0.0 && self.eta <= 1.0, || {
            format!("eta must lie in (0, 1], got {}", self.eta)
        })?;
        check(self.p_c >= 0.0, || format!("p_c must be non-negative, got {}", self.p_c))?;
        check(self.p_pre >= 0.0, || {
            format!("p_pre must be non-negative, got {}", self.p_pre)
        })?;
        check(self.p_0 >= 0.0, || format!("p_0 must be non-negative, got {}", self.p_0))?;
        if let Some(w) = self.bandwidth_hz {
            check(w.is_finite() && w > 0.0, || {
                format!("bandwidth_hz must be positive, got {w}")
            })?;
        }
        Ok(())
    }

    /// Linear power budget in W.
    pub fn p_max_watts(&self) -> f64 {
        10f64.powf((self.p_max_dbm - 30.0) / 10.0)
    }
}

/// Quantities every downstream formula consumes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    /// `M`, antennas per BS.
    pub m_antennas: u32,
    /// Average number of users per BS, `λ_UE/λ_BS`.
    pub k_mean_users: f64,
    /// `K`, users served simultaneously per sub-band.
    pub k_users: f64,
    /// Average transmit power per BS, W.
    pub p_bs: f64,
    /// `K/P`, the noise power in the normalized SINR.
    pub noise_term: f64,
    /// Linear SINR threshold.
    pub t_linear: f64,
    pub pathloss_alpha: f64,
    pub lambda_bs: f64,
}

impl Scenario {
    /// Shape of the Gamma-distributed desired gain, `M - K + 1`.
    pub fn desired_shape(&self) -> f64 {
        f64::from(self.m_antennas) - self.k_users + 1.0
    }

    /// `2/α`.
    pub fn delta(&self) -> f64 {
        2.0 / self.pathloss_alpha
    }

    /// `K` as an integer, when it is one.
    pub fn k_integral(&self) -> Option<u32> {
        let k = self.k_users;
        (k >= 1.0 && k.fract() == 0.0 && k <= f64::from(u32::MAX)).then_some(k as u32)
    }

    /// Noise power that actually enters the SINR.
    pub fn effective_noise(&self, params: &NetworkParams) -> f64 {
        if params.interference_limited {
            0.0
        } else {
            self.noise_term
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "M={} K={} P={:.6} W K/P={:.6} T={:.6}",
            self.m_antennas, self.k_users, self.p_bs, self.noise_term, self.t_linear
        )
    }
}

/// Validates `params` and derives antennas per BS, users per sub-band, per-BS
/// power and noise level.
pub fn derive_scenario(params: &NetworkParams) -> Result<Scenario> {
    params.validate()?;
    let k_mean = params.lambda_ue / params.lambda_bs;
    let m = k_mean.round().max(1.0);
    if m > f64::from(u32::MAX) {
        return Err(Error::InvalidConfig(format!("M = {m} antennas is out of range")));
    }
    let m_antennas = m as u32;
    let per_band = k_mean / f64::from(params.num_subbands);
    let k_users = match params.user_load {
        UserLoad::Fractional => per_band,
        UserLoad::Floor => per_band.floor().max(1.0),
    };
    if k_users > m {
        return Err(Error::InvalidConfig(format!(
            "K = {k_users} users per sub-band exceeds M = {m_antennas} antennas"
        )));
    }
    let p_bs = params.p_max_watts() / params.lambda_bs;
    Ok(Scenario {
        m_antennas,
        k_mean_users: k_mean,
        k_users,
        p_bs,
        noise_term: k_users / p_bs,
        t_linear: 10f64.powf(params.sinr_threshold_db / 10.0),
        pathloss_alpha: params.pathloss_alpha,
        lambda_bs: params.lambda_bs,
    })
}
