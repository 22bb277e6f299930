use statrs::distribution::{ContinuousCDF, Normal};
use statrs::function::gamma::{gamma_lr, gamma_ur};

/// Two-sided standard normal quantile for `confidence`.
pub fn z_value(confidence: f64) -> f64 {
    Normal::standard().inverse_cdf(0.5 + 0.5 * confidence)
}

/// Normal-approximation half-width for a proportion estimated from `n` trials.
pub fn proportion_half_width(p: f64, n: usize, confidence: f64) -> f64 {
    z_value(confidence) * (p * (1.0 - p) / n as f64).sqrt()
}

pub fn mean_and_std_error(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn erlang_terms(shape: f64) -> Option<u32> {
    (shape.fract() == 0.0 && (1.0..=170.0).contains(&shape)).then_some(shape as u32)
}

/// `P(X > x)` for `X ~ Γ(shape, 1)`; a finite Erlang sum for integer shapes.
pub fn gamma_survival(shape: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    match erlang_terms(shape) {
        Some(n) => {
            let mut term = (-x).exp();
            let mut sum = term;
            for k in 1..n {
                term *= x / f64::from(k);
                sum += term;
            }
            sum.min(1.0)
        }
        None => gamma_ur(shape, x),
    }
}

pub fn gamma_cdf(shape: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    match erlang_terms(shape) {
        Some(_) => 1.0 - gamma_survival(shape, x),
        None => gamma_lr(shape, x),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsOutcome {
    pub statistic: f64,
    pub critical_value: f64,
    pub passed: bool,
}

/// Kolmogorov–Smirnov distance between the empirical distribution of
/// `samples` and `cdf`.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

/// Asymptotic critical value with Stephens' small-sample correction.
pub fn ks_critical_value(n: usize, significance: f64) -> f64 {
    let c = (-(0.5 * significance).ln() / 2.0).sqrt();
    let rn = (n as f64).sqrt();
    c / (rn + 0.12 + 0.11 / rn)
}

pub fn ks_test(samples: &[f64], cdf: impl Fn(f64) -> f64, significance: f64) -> KsOutcome {
    let statistic = ks_statistic(samples, cdf);
    let critical_value = ks_critical_value(samples.len(), significance);
    KsOutcome {
        statistic,
        critical_value,
        passed: statistic <= critical_value,
    }
}
