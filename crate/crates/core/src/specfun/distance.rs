use std::f64::consts::PI;

use rand::Rng;

/// Density of the distance from the typical user to its nearest BS,
/// `2πλ r exp(-λπr²)`.
pub fn association_distance_pdf(r: f64, lambda_bs: f64) -> f64 {
    assert!(r >= 0.0, "distance must be non-negative, got {r}");
    assert!(lambda_bs > 0.0, "density must be positive, got {lambda_bs}");
    2.0 * PI * lambda_bs * r * (-lambda_bs * PI * r * r).exp()
}

/// `P(r₀ ≤ r) = 1 - exp(-λπr²)`.
pub fn association_distance_cdf(r: f64, lambda_bs: f64) -> f64 {
    assert!(lambda_bs > 0.0, "density must be positive, got {lambda_bs}");
    if r <= 0.0 {
        return 0.0;
    }
    -(-lambda_bs * PI * r * r).exp_m1()
}

/// Inverse-CDF draw of the association distance.
pub fn sample_association_distance<R: Rng + ?Sized>(lambda_bs: f64, rng: &mut R) -> f64 {
    assert!(lambda_bs > 0.0, "density must be positive, got {lambda_bs}");
    // U on (0, 1]
    let u = 1.0 - rng.random::<f64>();
    (-u.ln() / (PI * lambda_bs)).sqrt()
}
