//! Coverage probability, average rate and energy efficiency from the
//! Laplace-transform characterization of SINR.
//!
//! With `X = T r₀^α (I + K/P)` and `S ~ Γ(M-K+1, 1)`, coverage given `r₀`
//! is `P(S > X)`, which Parseval's identity turns into
//!
//! ```text
//! ∫ L_I(i2π r₀^α T s) e^{-i2π r₀^α T (K/P) s} (L_S(-i2πs) - 1)/(i2πs) ds.
//! ```
//!
//! The integrand is conjugate-symmetric in `s`. Because `X > 0` almost
//! surely, the part carrying `-1` integrates to exactly one half, leaving
//!
//! ```text
//! P(S > X | r₀) = 1/2 + 1/π ∫₀^∞ Im[L_S(-i2πs) ψ(s)] / s ds,   ψ(s) = E[e^{-i2πsX}],
//! ```
//!
//! whose integrand decays like `s^{-1-(M-K+1)}` instead of `s^{-1-2/α}`.
//! Substituting `u = πλr₀²` makes the interference transform
//! `exp(-u (F(s) - 1))` with `F(s) = ₂F₁(K, -2/α; 1-2/α; -i2πTs)` free of
//! `r₀`, so the `u` integral (weight `e^{-u}`, truncated at `u = 40`) is done
//! first for each `s` and `F` is evaluated once per `s` node.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Gamma, Poisson};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::montecarlo::stats::gamma_survival;
use crate::montecarlo::window::{auto_window_radius, tail_interference_mean};
use crate::montecarlo::{trial_rng, GainModel};
use crate::quadrature::{geometric_breaks, integrate_real, integrate_with_breaks, QuadOptions};
use crate::scenario::{derive_scenario, NetworkParams, Scenario};
use crate::specfun::{
    association_distance_pdf, interference_shape, laplace_desired, laplace_interference,
};

/// Upper limit of `u = πλ_BS r₀²`; the neglected mass is `e^{-40}`.
pub const OUTER_TRUNCATION: f64 = 40.0;
/// Error budget for the final probability.
pub const TARGET_ABS_ERROR: f64 = 1e-4;
/// Bound on the neglected tail of the `s` integral.
const TAIL_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverageResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    /// Upper limit of the `s` integral (km for the Monte Carlo oracle: the
    /// simulation window radius).
    pub inner_truncation: f64,
    /// Upper limit of the `u = πλr₀²` integral.
    pub outer_truncation: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyReport {
    pub coverage: f64,
    /// bit/symbol (or nat/symbol with `RateLog::Ln`)
    pub avg_rate: f64,
    /// Area spectral efficiency, per km².
    pub ase: f64,
    /// Average energy consumption per BS, W.
    pub aec: f64,
    pub ee: f64,
}

/// Analytic coverage probability for `params`.
pub fn coverage_probability(params: &NetworkParams) -> Result<CoverageResult> {
    let scenario = derive_scenario(params)?;
    coverage_for_scenario(&scenario, scenario.effective_noise(params))
}

/// Coverage for an already derived scenario with an explicit noise power
/// (`0` for an interference-limited network).
pub fn coverage_for_scenario(scenario: &Scenario, noise: f64) -> Result<CoverageResult> {
    if !(noise >= 0.0 && noise.is_finite()) {
        return Err(Error::InvalidConfig(format!("noise power must be >= 0, got {noise}")));
    }
    let t = scenario.t_linear;
    let shape = scenario.desired_shape();
    let alpha = scenario.pathloss_alpha;
    let u_max = OUTER_TRUNCATION;
    // phase of the noise factor is noise_phase · u^{α/2} · s
    let noise_phase = 2.0 * PI * t * noise / (PI * scenario.lambda_bs).powf(alpha / 2.0);

    let u_opts = QuadOptions {
        abs_tol: 1e-13,
        rel_tol: 1e-11,
        max_intervals: 2000,
    };
    let mut evaluations = 0usize;

    // G(s) = ∫ e^{-uF} e^{-i c s u^{α/2}} du with c = noise_phase. Without
    // noise this is elementary (over [0, U]). With noise the integrand is a
    // chirp, so the integral over [0, ∞) is taken along the ray
    // u = ρ e^{-iθ}: at θ = π/α the noise factor becomes a pure decay
    // e^{-c s ρ^{α/2}}. θ is pulled towards arg F when needed so that
    // Re(F e^{-iθ}) stays bounded away from 0; for any θ in [0, π/α] with
    // |arg F - θ| < π/2 the integrand decays on the closing arc, so the
    // rotation does not change the value.
    let mut averaged_transform = |s: f64| -> Result<Complex64> {
        let f = 1.0 + interference_shape(Complex64::new(0.0, 2.0 * PI * t * s), scenario)?;
        evaluations += 1;
        if noise == 0.0 {
            return Ok((1.0 - (-u_max * f).exp()) / f);
        }
        let theta = (f.arg() + PI / 3.0).clamp(0.0, PI / alpha);
        let dir = Complex64::from_polar(1.0, -theta);
        let w = f * dir;
        let chirp = Complex64::new(0.0, noise_phase * s) * Complex64::from_polar(1.0, -theta * alpha / 2.0);
        let rho_max = 45.0 / w.re;
        let breaks = geometric_breaks(1e-9 * rho_max, rho_max, 24, true);
        let r = integrate_with_breaks(
            |rho| Ok((-rho * w - chirp * rho.powf(alpha / 2.0)).exp()),
            &breaks,
            u_opts,
        )?;
        evaluations += r.evaluations;
        Ok(r.value * dir)
    };
    // mass of e^{-u} covered by the u range above
    let u_mass = if noise == 0.0 { 1.0 - (-u_max).exp() } else { 1.0 };

    // The s → 0 limit is finite; quadrature nodes never hit 0, but keep the
    // integrand total.
    let mean_x = 2.0 * scenario.k_users * t / (alpha - 2.0)
        + noise_phase / (2.0 * PI) * statrs::function::gamma::gamma(1.0 + alpha / 2.0);
    let integrand = |s: f64| -> Result<Complex64> {
        if s == 0.0 {
            return Ok(Complex64::new(2.0 * PI * (shape - mean_x), 0.0));
        }
        let ls = laplace_desired(Complex64::new(0.0, -2.0 * PI * s), scenario)?;
        let g = averaged_transform(s)?;
        Ok(Complex64::new((ls * g).im / s, 0.0))
    };

    // |L_S(-i2πs)| ≤ (2πs)^{-N}, |G| ≤ 1, so the tail past S is at most
    // (2πS)^{-N} / (πN).
    let s_max = (1.0 / (PI * shape * TAIL_TOLERANCE)).powf(1.0 / shape) / (2.0 * PI);
    let tail_bound = (2.0 * PI * s_max).powf(-shape) / (PI * shape);
    let scale = 1.0 / (2.0 * PI * (1.0 + t));
    let s_lo = (1e-4 * scale).min(1e-2 * s_max);
    let pieces = ((s_max / s_lo).log2() / 2.0).ceil().max(1.0) as usize;
    let s_breaks = geometric_breaks(s_lo, s_max, pieces, true);
    let s_opts = QuadOptions {
        abs_tol: 1e-9,
        rel_tol: 0.0,
        max_intervals: 8000,
    };
    let r = integrate_with_breaks(integrand, &s_breaks, s_opts)
        .map_err(|e| Error::IntegrationFailure(format!("s integral: {e}")))?;

    let raw = 0.5 * u_mass + r.value.re / PI;
    let abs_error_estimate = r.abs_error / PI + tail_bound + (-u_max).exp() + 1e-9;
    let value = clamp_probability(raw, abs_error_estimate)?;
    Ok(CoverageResult {
        value,
        abs_error_estimate,
        inner_truncation: s_max,
        outer_truncation: u_max,
        evaluations: r.evaluations + evaluations,
    })
}

fn clamp_probability(raw: f64, tolerance: f64) -> Result<f64> {
    if !raw.is_finite() || raw < -tolerance || raw > 1.0 + tolerance {
        return Err(Error::IntegrationFailure(format!(
            "coverage {raw} outside [0, 1] beyond error estimate {tolerance:.2e}"
        )));
    }
    Ok(raw.clamp(0.0, 1.0))
}

/// The coverage integrand in its original form, before symmetrization:
///
/// `L_I(i2π r₀^α T s) · e^{-i2π r₀^α T N s} · (L_S(-i2πs) - 1)/(i2πs) · f(r₀)`
///
/// with `N` the noise power. At `s = 0` the removable singularity takes its
/// limit `(L_S(-i2πs) - 1)/(i2πs) → M - K + 1`.
pub fn coverage_integrand(scenario: &Scenario, noise: f64, r0: f64, s: f64) -> Result<Complex64> {
    let t = scenario.t_linear;
    let scaled = r0.powf(scenario.pathloss_alpha) * t;
    let li = laplace_interference(
        Complex64::new(0.0, 2.0 * PI * scaled * s),
        r0,
        scenario,
        scenario.lambda_bs,
    )?;
    let noise_factor = Complex64::new(0.0, -2.0 * PI * scaled * noise * s).exp();
    let ratio = if s == 0.0 {
        Complex64::new(scenario.desired_shape(), 0.0)
    } else {
        let ls = laplace_desired(Complex64::new(0.0, -2.0 * PI * s), scenario)?;
        (ls - 1.0) / Complex64::new(0.0, 2.0 * PI * s)
    };
    Ok(li * noise_factor * ratio * association_distance_pdf(r0, scenario.lambda_bs))
}

/// `P(SINR > T | r₀)` by the one-sided inversion integral, without the
/// `u`-averaging. Slower than [`coverage_for_scenario`]; used to check it.
pub fn conditional_coverage(scenario: &Scenario, noise: f64, r0: f64) -> Result<f64> {
    let t = scenario.t_linear;
    let shape = scenario.desired_shape();
    let scaled = r0.powf(scenario.pathloss_alpha) * t;
    let integrand = |s: f64| -> Result<Complex64> {
        let arg = 2.0 * PI * scaled * s;
        let li = laplace_interference(Complex64::new(0.0, arg), r0, scenario, scenario.lambda_bs)?;
        let psi = li * Complex64::new(0.0, -arg * noise).exp();
        let ls = laplace_desired(Complex64::new(0.0, -2.0 * PI * s), scenario)?;
        Ok(Complex64::new((ls * psi).im / s, 0.0))
    };
    let s_max = (1.0 / (PI * shape * TAIL_TOLERANCE)).powf(1.0 / shape) / (2.0 * PI);
    let s_lo = 1e-6 / (2.0 * PI * (1.0 + t));
    let pieces = ((s_max / s_lo).log2() / 2.0).ceil() as usize;
    let breaks = geometric_breaks(s_lo, s_max, pieces, true);
    let r = integrate_with_breaks(integrand, &breaks, QuadOptions::new(1e-10, 0.0))?;
    Ok(0.5 + r.value.re / PI)
}

/// Tuning for the sampled variant of the Erlang oracle.
#[derive(Debug, Clone, Copy)]
pub struct OracleOptions {
    pub draws: usize,
    pub seed: u64,
    /// Interferer window radius, km. Chosen automatically when `None`.
    pub window_radius: Option<f64>,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            draws: 100_000,
            seed: 0x0E71_A46C,
            window_radius: None,
        }
    }
}

/// Coverage as `E[Q(N, x)]`, the exact conditional survival of the
/// `Γ(N, 1)` desired gain (`N = M-K+1`) averaged over interference and
/// association distance, `x = T r₀^α (I + K/P)`.
///
/// For integer `N`, `Q(N, x) = e^{-x} Σ_{n<N} xⁿ/n!` and, with `Y = I + K/P`
/// and `a = T r₀^α`, `E[e^{-aY} (aY)ⁿ/n!]` is the `n`-th Taylor coefficient
/// of `τ ↦ E[e^{-aY(1-τ)}] = exp(ψ(τ))`. The coefficients of `ψ` come from the
/// probability generating functional by direct quadrature,
///
/// ```text
/// ψ_k = 2πλ C(K+k-1, k) ∫_{r₀}^∞ (a v^{-α})^k (1 + a v^{-α})^{-K-k} v dv,   k ≥ 1
/// ψ_0 = -2πλ ∫_{r₀}^∞ (1 - (1 + a v^{-α})^{-K}) v dv - a K/P,
/// ```
///
/// plus `a K/P` in `ψ_1`; all of them are `u = πλr₀²` times a constant, so
/// only `N` one-dimensional integrals are needed. The exponential's
/// coefficients follow from a recurrence of non-negative terms. Nothing here
/// touches the hypergeometric function or the Fourier inversion.
///
/// Fractional `N` falls back to [`coverage_probability_gamma_oracle_mc`].
pub fn coverage_probability_gamma_oracle(params: &NetworkParams) -> Result<CoverageResult> {
    coverage_probability_gamma_oracle_with(params, OracleOptions::default())
}

pub fn coverage_probability_gamma_oracle_with(
    params: &NetworkParams,
    opts: OracleOptions,
) -> Result<CoverageResult> {
    let scenario = derive_scenario(params)?;
    let shape = scenario.desired_shape();
    if shape.fract() != 0.0 {
        return coverage_probability_gamma_oracle_mc(params, opts);
    }
    erlang_quadrature(&scenario, scenario.effective_noise(params), shape as usize)
}

/// `∫₁^∞ h(y) y dy` for an integrand decaying at least like `y^{1-α}`.
fn radial_integral(alpha: f64, tail_scale: f64, h: impl Fn(f64) -> f64) -> Result<(f64, f64)> {
    // y = e^t; the tail beyond Y is below tail_scale · Y^{2-α}/(α-2)
    let y_max = (tail_scale / ((alpha - 2.0) * 1e-15)).powf(1.0 / (alpha - 2.0)).max(10.0);
    let t_max = y_max.ln();
    let pieces = t_max.ceil() as usize;
    let breaks: Vec<f64> = (0..=pieces).map(|i| t_max * i as f64 / pieces as f64).collect();
    let r = integrate_real(
        |t| {
            let y = t.exp();
            Ok(h(y) * y * y)
        },
        &breaks,
        QuadOptions::new(1e-15, 1e-13),
    )?;
    Ok((r.value.re, r.abs_error))
}

fn erlang_quadrature(scenario: &Scenario, noise: f64, n_terms: usize) -> Result<CoverageResult> {
    let t = scenario.t_linear;
    let k = scenario.k_users;
    let alpha = scenario.pathloss_alpha;
    let lambda = scenario.lambda_bs;
    let mut evaluations = 0;

    // per-unit-u coefficients: ψ_k = u·beta[k] (+ noise terms)
    let mut beta = vec![0.0; n_terms.max(2)];
    let mut coef_err = 0.0;
    let (b0, e0) = radial_integral(alpha, k * t, |y| {
        -(-k * (t * y.powf(-alpha)).ln_1p()).exp_m1()
    })?;
    beta[0] = 2.0 * b0;
    coef_err += 2.0 * e0;
    let mut binom = 1.0;
    #[allow(clippy::needless_range_loop)]
    for j in 1..n_terms {
        binom *= (k + j as f64 - 1.0) / j as f64;
        let (bj, ej) = radial_integral(alpha, t.powi(j as i32), |y| {
            let x = t * y.powf(-alpha);
            (j as f64 * x.ln() - (k + j as f64) * x.ln_1p()).exp()
        })?;
        beta[j] = 2.0 * binom * bj;
        coef_err += 2.0 * binom * ej;
        evaluations += 1;
    }

    let noise_scale = t * noise / (PI * lambda).powf(alpha / 2.0);
    let mut g = vec![0.0; n_terms];
    let mut psi = vec![0.0; n_terms];
    let integrand = |u: f64| -> Result<f64> {
        let ac = noise_scale * u.powf(alpha / 2.0);
        for (j, p) in psi.iter_mut().enumerate() {
            *p = u * beta[j];
        }
        if n_terms > 1 {
            psi[1] += ac;
        }
        g[0] = (-u - u * beta[0] - ac).exp();
        for n in 1..n_terms {
            let acc: f64 = (1..=n).map(|j| j as f64 * psi[j] * g[n - j]).sum();
            g[n] = acc / n as f64;
        }
        Ok(g.iter().sum())
    };
    let mut integrand = integrand;
    let breaks = geometric_breaks(1e-6, OUTER_TRUNCATION, 16, true);
    let r = integrate_real(&mut integrand, &breaks, QuadOptions::new(1e-12, 1e-12))?;
    let raw = r.value.re;
    // each coefficient error moves the result by at most u·err over e^{-u}
    let abs_error_estimate = r.abs_error + coef_err * n_terms as f64 + (-OUTER_TRUNCATION).exp();
    Ok(CoverageResult {
        value: clamp_probability(raw, abs_error_estimate)?,
        abs_error_estimate,
        inner_truncation: f64::INFINITY,
        outer_truncation: OUTER_TRUNCATION,
        evaluations: r.evaluations + evaluations,
    })
}

/// Sampled variant: interference drawn from a simulated PPP with `Γ(K, 1)`
/// gains, association distances stratified in their CDF, and `Q` the
/// regularized upper incomplete gamma function, so fractional `N` works too.
/// The error estimate is the 99% normal half-width.
pub fn coverage_probability_gamma_oracle_mc(
    params: &NetworkParams,
    opts: OracleOptions,
) -> Result<CoverageResult> {
    let scenario = derive_scenario(params)?;
    if opts.draws < 2 {
        return Err(Error::InvalidConfig("oracle needs at least two draws".into()));
    }
    let radius = match opts.window_radius {
        Some(r) => r,
        None => auto_window_radius(params, &scenario, GainModel::GammaSampled, opts.seed)?,
    };
    let noise = scenario.effective_noise(params);
    let alpha = scenario.pathloss_alpha;
    let lambda = scenario.lambda_bs;
    let shape = scenario.desired_shape();
    let gain = Gamma::new(scenario.k_users, 1.0)
        .map_err(|e| Error::InvalidConfig(format!("interferer gain shape: {e}")))?;
    let n = opts.draws;

    let values: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|j| {
            let mut rng = trial_rng(opts.seed, j as u64);
            let u = (j as f64 + rng.random::<f64>()) / n as f64;
            let r0 = (-(-u).ln_1p() / (PI * lambda)).sqrt();
            let mut interference = tail_interference_mean(&scenario, radius.max(r0));
            if radius > r0 {
                let mean_count = PI * lambda * (radius * radius - r0 * r0);
                let count = Poisson::new(mean_count).map(|p| p.sample(&mut rng)).unwrap_or(0.0);
                for _ in 0..count as u64 {
                    let r2 = r0 * r0 + rng.random::<f64>() * (radius * radius - r0 * r0);
                    interference += gain.sample(&mut rng) * r2.powf(-alpha / 2.0);
                }
            }
            let x = scenario.t_linear * r0.powf(alpha) * (interference + noise);
            gamma_survival(shape, x)
        })
        .collect();

    let mean = values.iter().sum::<f64>() / n as f64;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    // 99% normal half-width
    let half_width = 2.575_829_303_548_901 * (var / n as f64).sqrt();
    Ok(CoverageResult {
        value: mean,
        abs_error_estimate: half_width,
        inner_truncation: radius,
        outer_truncation: f64::INFINITY,
        evaluations: n,
    })
}

/// Expected rate `log(1 + T) · P_cov(T)`.
pub fn average_rate(params: &NetworkParams) -> Result<f64> {
    let scenario = derive_scenario(params)?;
    let cov = coverage_for_scenario(&scenario, scenario.effective_noise(params))?;
    Ok(params.rate_log.apply(1.0 + scenario.t_linear) * cov.value)
}

/// `P/η + M P_c + K³ P_pre + P_0`.
pub fn average_energy_consumption(params: &NetworkParams, scenario: &Scenario) -> f64 {
    scenario.p_bs / params.eta
        + f64::from(scenario.m_antennas) * params.p_c
        + scenario.k_users.powi(3) * params.p_pre
        + params.p_0
}

/// Rate, area spectral efficiency, consumption and efficiency for a given
/// coverage probability.
pub fn energy_from_coverage(
    params: &NetworkParams,
    scenario: &Scenario,
    coverage: f64,
) -> EnergyReport {
    let avg_rate = params.rate_log.apply(1.0 + scenario.t_linear) * coverage;
    let ase = scenario.lambda_bs * scenario.k_users * avg_rate;
    let aec = average_energy_consumption(params, scenario);
    EnergyReport {
        coverage,
        avg_rate,
        ase,
        aec,
        ee: ase / aec,
    }
}

pub fn energy_report(params: &NetworkParams) -> Result<EnergyReport> {
    let scenario = derive_scenario(params)?;
    let cov = coverage_for_scenario(&scenario, scenario.effective_noise(params))?;
    Ok(energy_from_coverage(params, &scenario, cov.value))
}
