use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::{integrate_with_breaks, QuadOptions};
use crate::scenario::Scenario;
use crate::specfun::hyp2f1::{hyp2f1, Hyp2F1Params};
use crate::specfun::{expm1, ln1p};

fn check_finite(s: Complex64) -> Result<()> {
    if s.re.is_finite() && s.im.is_finite() {
        Ok(())
    } else {
        Err(Error::UnsupportedArgument(format!("non-finite transform argument {s}")))
    }
}

/// `₂F₁(K, -2/α; 1 - 2/α; -x) - 1`.
///
/// The interference transform only depends on `s` and `r₀` through
/// `x = s r₀^{-α}`, and on `r₀` otherwise through the prefactor `πλr₀²`:
/// `L_I(s) = exp(-πλr₀² · interference_shape(s r₀^{-α}))`.
pub fn interference_shape(x: Complex64, scenario: &Scenario) -> Result<Complex64> {
    check_finite(x)?;
    if x == Complex64::new(0.0, 0.0) {
        return Ok(x);
    }
    let delta = scenario.delta();
    let f = hyp2f1(Hyp2F1Params::new(scenario.k_users, -delta, 1.0 - delta, -x))?;
    Ok(f - 1.0)
}

/// Laplace transform of the aggregate interference seen by a user whose
/// serving BS is at distance `r0`, with interferers forming a PPP of density
/// `lambda_bs` outside `r0` and `Γ(K, 1)` channel gains.
pub fn laplace_interference(
    s: Complex64,
    r0: f64,
    scenario: &Scenario,
    lambda_bs: f64,
) -> Result<Complex64> {
    check_finite(s)?;
    if !(r0 > 0.0 && r0.is_finite()) {
        return Err(Error::UnsupportedArgument(format!("r0 must be positive, got {r0}")));
    }
    if s.re < 0.0 {
        return Err(Error::UnsupportedArgument(format!(
            "interference transform needs Re(s) >= 0, got {s}"
        )));
    }
    if s == Complex64::new(0.0, 0.0) {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let x = s * r0.powf(-scenario.pathloss_alpha);
    let shape = interference_shape(x, scenario)?;
    Ok((-PI * lambda_bs * r0 * r0 * shape).exp())
}

/// Same transform as [`laplace_interference`], computed from the
/// probability-generating-functional exponent
/// `2πλ ∫_{r0}^{R} (1 - (1 + s v^{-α})^{-K}) v dv` by adaptive quadrature.
///
/// `R` is the radius beyond which the neglected exponent, bounded by
/// `K|s|R^{2-α}/(α-2)`, falls below `1e-12`. Independent of the
/// hypergeometric machinery; used only for cross-checking.
pub fn laplace_interference_quadrature_oracle(
    s: Complex64,
    r0: f64,
    scenario: &Scenario,
    lambda_bs: f64,
) -> Result<Complex64> {
    check_finite(s)?;
    if !(r0 > 0.0 && r0.is_finite()) {
        return Err(Error::UnsupportedArgument(format!("r0 must be positive, got {r0}")));
    }
    if s == Complex64::new(0.0, 0.0) {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let alpha = scenario.pathloss_alpha;
    let k = scenario.k_users;
    let tail_tol = 1e-12;
    let radius = (k * s.norm() / ((alpha - 2.0) * tail_tol))
        .powf(1.0 / (alpha - 2.0))
        .max(2.0 * r0);
    let span = (radius / r0).ln();

    // v = r0 e^t, v dv = v² dt
    let integrand = |t: f64| -> Result<Complex64> {
        let v = r0 * t.exp();
        let x = s * v.powf(-alpha);
        Ok(-expm1(-k * ln1p(x)) * (v * v))
    };
    let pieces = span.ceil().max(1.0) as usize;
    let breaks: Vec<f64> = (0..=pieces).map(|i| span * i as f64 / pieces as f64).collect();
    let opts = QuadOptions {
        abs_tol: 1e-300,
        rel_tol: 1e-13,
        max_intervals: 20_000,
    };
    let r = integrate_with_breaks(integrand, &breaks, opts)?;
    Ok((-2.0 * PI * lambda_bs * r.value).exp())
}

/// Laplace transform of the `Γ(M-K+1, 1)` desired-signal gain,
/// `(1 + s)^{-(M-K+1)}` on the principal branch.
pub fn laplace_desired(s: Complex64, scenario: &Scenario) -> Result<Complex64> {
    check_finite(s)?;
    let base = 1.0 + s;
    if base == Complex64::new(0.0, 0.0) {
        return Err(Error::PoleAtMinusOne);
    }
    let shape = scenario.desired_shape();
    if shape.fract() == 0.0 && shape <= f64::from(i32::MAX) {
        Ok(base.inv().powi(shape as i32))
    } else {
        Ok(base.powf(-shape))
    }
}
