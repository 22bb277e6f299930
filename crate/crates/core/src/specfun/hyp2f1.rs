//! Gauss hypergeometric function `₂F₁(a, b; c; z)` for complex `z`.
//!
//! Coverage is tailored to the family `c = b + 1` that the interference
//! transform produces (`a = K`, `b = -2/α`), plus whatever the plain series
//! and the Pfaff transformation reach for other parameters:
//!
//! * `|z| ≤ 0.8`: the defining power series.
//! * `|z/(z-1)| ≤ 0.8`: Pfaff, `(1-z)^{-a} ₂F₁(a, c-b; c; z/(z-1))`.
//! * `|z| ≥ 1.25`, `c = b + 1`: the `1/z` connection formula, which for this
//!   family collapses to one closed-form power plus one convergent series.
//! * `c = b + 1` with `a - b` an integer (the connection formula is
//!   singular there), or whenever a series above cancels badly (large `a`):
//!   an Euler-type integral evaluated by quadrature.

use num_complex::Complex64;
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::quadrature::{geometric_breaks, integrate_with_breaks, QuadOptions};
use crate::specfun::{expm1, ln1p};

pub const MAX_TERMS: usize = 1_000_000;
pub const SERIES_RADIUS: f64 = 0.8;
/// Largest tolerated ratio of the biggest series term to the sum (about
/// five of sixteen digits lost).
pub const MAX_CANCELLATION: f64 = 1e5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hyp2F1Params {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub z: Complex64,
}

impl Hyp2F1Params {
    pub fn new(a: f64, b: f64, c: f64, z: Complex64) -> Self {
        Hyp2F1Params { a, b, c, z }
    }

    fn validate(&self) -> Result<()> {
        let finite = self.a.is_finite()
            && self.b.is_finite()
            && self.c.is_finite()
            && self.z.re.is_finite()
            && self.z.im.is_finite();
        if !finite {
            return Err(Error::UnsupportedArgument(format!("non-finite input {self:?}")));
        }
        if self.c <= 0.0 && self.c.fract() == 0.0 {
            return Err(Error::UnsupportedArgument(format!(
                "c = {} is a non-positive integer",
                self.c
            )));
        }
        Ok(())
    }

    /// `c = b + 1`, where `(b)_n / (c)_n` telescopes to `b / (b + n)`.
    pub fn is_shifted_family(&self) -> bool {
        (self.c - self.b - 1.0).abs() <= 1e-14 * (1.0 + self.b.abs())
    }
}

/// Which evaluation path [`hyp2f1`] took.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    Series,
    Pfaff,
    Inversion,
    Integral,
}

pub fn hyp2f1(p: Hyp2F1Params) -> Result<Complex64> {
    hyp2f1_routed(p).map(|(v, _)| v)
}

pub fn hyp2f1_routed(p: Hyp2F1Params) -> Result<(Complex64, Route)> {
    p.validate()?;
    let z = p.z;
    let w = z / (z - 1.0);
    let mut routes = Vec::with_capacity(4);
    if z.norm() <= SERIES_RADIUS {
        routes.push(Route::Series);
    }
    if w.norm() <= SERIES_RADIUS {
        routes.push(Route::Pfaff);
    }
    if p.is_shifted_family() {
        if z.norm() >= 1.0 / SERIES_RADIUS && !near_integer(p.a - p.b) {
            routes.push(Route::Inversion);
        }
        if p.b > -1.0 && p.b != 0.0 {
            routes.push(Route::Integral);
        }
    }
    if routes.is_empty() {
        // Outside the tuned regions: take whichever series argument is
        // smaller and let the term cap report failure.
        if z.norm() < 1.0 && z.norm() <= w.norm() {
            routes.push(Route::Series);
        } else if w.norm() < 1.0 {
            routes.push(Route::Pfaff);
        } else {
            return Err(Error::UnsupportedArgument(format!(
                "no convergent representation for z = {z} with a = {}, b = {}, c = {}",
                p.a, p.b, p.c
            )));
        }
    }
    // Large `a` makes the series lose digits well inside the unit disk;
    // fall through to the next representation when that happens.
    let mut last = None;
    for route in routes {
        let value = match route {
            Route::Series => series(p.a, p.b, p.c, z),
            Route::Pfaff => pfaff(p),
            Route::Inversion => inversion(p),
            Route::Integral => integral(p),
        };
        match value {
            Ok(v) => return Ok((v, route)),
            Err(e @ (Error::Cancellation { .. } | Error::NoConvergence { .. })) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one route was tried"))
}

fn near_integer(x: f64) -> bool {
    (x - x.round()).abs() < 1e-4
}

/// `Σ (a)_n (b)_n / (c)_n zⁿ / n!`, summed to full double precision.
pub fn series(a: f64, b: f64, c: f64, z: Complex64) -> Result<Complex64> {
    if z.norm() >= 1.0 {
        return Err(Error::UnsupportedArgument(format!(
            "power series diverges at |z| = {}",
            z.norm()
        )));
    }
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut largest = 1.0f64;
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        term *= z * ((a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)));
        sum += term;
        largest = largest.max(term.norm());
        if term.norm() <= 1e-17 * sum.norm() || term == Complex64::new(0.0, 0.0) {
            if largest > MAX_CANCELLATION * sum.norm() {
                return Err(Error::Cancellation {
                    largest_term: largest,
                    sum: sum.norm(),
                });
            }
            return Ok(sum);
        }
    }
    Err(Error::NoConvergence {
        terms: MAX_TERMS,
        z: z.to_string(),
    })
}

/// Pfaff transformation `(1-z)^{-a} ₂F₁(a, c-b; c; z/(z-1))`.
pub fn pfaff(p: Hyp2F1Params) -> Result<Complex64> {
    let z = p.z;
    let w = z / (z - 1.0);
    let prefactor = (-p.a * (1.0 - z).ln()).exp();
    Ok(prefactor * series(p.a, p.c - p.b, p.c, w)?)
}

/// `1/z` connection formula specialised to `c = b + 1`:
///
/// `₂F₁(a, b; b+1; z) = Γ(b+1)Γ(a-b)/Γ(a) (-z)^{-b}
///                    + b/(b-a) (-z)^{-a} ₂F₁(a, a-b; a-b+1; 1/z)`.
pub fn inversion(p: Hyp2F1Params) -> Result<Complex64> {
    let Hyp2F1Params { a, b, z, .. } = p;
    if !p.is_shifted_family() {
        return Err(Error::UnsupportedArgument(format!(
            "1/z formula implemented for c = b + 1 only (b = {b}, c = {})",
            p.c
        )));
    }
    if near_integer(a - b) {
        return Err(Error::UnsupportedArgument(format!(
            "a - b = {} is (nearly) an integer; connection formula is singular",
            a - b
        )));
    }
    let ln_mz = (-z).ln();
    let coef = gamma(b + 1.0) * gamma(a - b) / gamma(a);
    let first = coef * (-b * ln_mz).exp();
    let tail = series(a, a - b, a - b + 1.0, z.inv())?;
    let second = (b / (b - a)) * (-a * ln_mz).exp() * tail;
    Ok(first + second)
}

/// Euler-type integral for `c = b + 1`, `b > -1`, `b ≠ 0`:
///
/// * `b > 0`: `₂F₁ = ∫₀¹ (1 - z τ^{1/b})^{-a} dτ`
/// * `-1 < b < 0`: `₂F₁ = 1 + b/(1+b) ∫₀¹ [(1 - z t)^{-a} - 1] / t dτ`, `t = τ^{1/(1+b)}`
pub fn integral(p: Hyp2F1Params) -> Result<Complex64> {
    let Hyp2F1Params { a, b, z, .. } = p;
    if !p.is_shifted_family() || b <= -1.0 || b == 0.0 {
        return Err(Error::UnsupportedArgument(format!(
            "integral representation needs c = b + 1 with b in (-1, 0) ∪ (0, ∞), got b = {b}, c = {}",
            p.c
        )));
    }
    if z.im == 0.0 && z.re >= 1.0 {
        return Err(Error::UnsupportedArgument(format!("z = {z} lies on the branch cut")));
    }
    let opts = QuadOptions {
        abs_tol: 1e-15,
        rel_tol: 1e-13,
        max_intervals: 20_000,
    };
    let breaks = geometric_breaks(1e-16, 1.0, 32, true);
    let breaks_ref = &breaks;
    if b > 0.0 {
        let r = integrate_with_breaks(
            |tau| {
                let t = tau.powf(1.0 / b);
                Ok((-a * ln1p(-z * t)).exp())
            },
            breaks_ref,
            opts,
        )?;
        Ok(r.value)
    } else {
        let exponent = 1.0 / (1.0 + b);
        let r = integrate_with_breaks(
            |tau| {
                let t = tau.powf(exponent);
                if t == 0.0 {
                    return Ok(a * z);
                }
                Ok(expm1(-a * ln1p(-z * t)) / t)
            },
            breaks_ref,
            opts,
        )?;
        Ok(1.0 + r.value * (b / (1.0 + b)))
    }
}
