use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Poisson};

/// Homogeneous PPP of intensity `lambda` (per km²) restricted to the disk of
/// `radius` km centred at the origin.
pub fn sample_ppp_disk<R: Rng + ?Sized>(lambda: f64, radius: f64, rng: &mut R) -> Vec<(f64, f64)> {
    assert!(lambda > 0.0 && lambda.is_finite(), "lambda must be positive");
    assert!(radius > 0.0 && radius.is_finite(), "radius must be positive");
    let mean = lambda * PI * radius * radius;
    let count = Poisson::new(mean)
        .expect("positive finite Poisson mean")
        .sample(rng) as usize;
    (0..count)
        .map(|_| {
            let r = radius * rng.random::<f64>().sqrt();
            let theta = 2.0 * PI * rng.random::<f64>();
            (r * theta.cos(), r * theta.sin())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn points_stay_in_disk() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            for (x, y) in sample_ppp_disk(2.0, 3.0, &mut rng) {
                assert!(x.hypot(y) <= 3.0);
            }
        }
    }

    #[test]
    fn radial_distribution_is_uniform_in_area() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let pts = sample_ppp_disk(50.0, 4.0, &mut rng);
        let inner = pts.iter().filter(|(x, y)| x.hypot(*y) < 2.0).count() as f64;
        let frac = inner / pts.len() as f64;
        let sd = (0.25 * 0.75 / pts.len() as f64).sqrt();
        assert!((frac - 0.25).abs() < 4.0 * sd, "{frac}");
    }
}
