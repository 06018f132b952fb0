use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use serde::Serialize;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub mean: f64,
    pub std_err: f64,
    pub samples: usize,
}

impl McEstimate {
    /// Number of standard errors separating the estimate from `value`.
    pub fn sigmas_from(&self, value: f64) -> f64 {
        (self.mean - value).abs() / self.std_err
    }
}

/// Estimates ∫_{R^n} h_k(m) e^{-π|m|²} dm for every h_k at once.
///
/// The Gaussian weight has unit mass, so each integral is E[h_k(X)] with
/// X ~ N(0, I/(2π)). Seeded ChaCha20 keeps the result reproducible.
pub fn monte_carlo_gaussian(
    hs: &[&dyn Fn(&[f64]) -> f64],
    n: usize,
    samples: usize,
    seed: u64,
) -> Vec<McEstimate> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let sigma = (2.0 * PI).sqrt().recip();
    let mut sum = vec![0.0; hs.len()];
    let mut sum2 = vec![0.0; hs.len()];
    let mut m = vec![0.0; n];
    for _ in 0..samples {
        for x in m.iter_mut() {
            let z: f64 = rng.sample(StandardNormal);
            *x = sigma * z;
        }
        for (k, h) in hs.iter().enumerate() {
            let v = h(&m);
            sum[k] += v;
            sum2[k] += v * v;
        }
    }
    let nf = samples as f64;
    sum.iter()
        .zip(&sum2)
        .map(|(s, s2)| {
            let mean = s / nf;
            let var = (s2 / nf - mean * mean).max(0.0) * nf / (nf - 1.0).max(1.0);
            McEstimate {
                mean,
                std_err: (var / nf).sqrt(),
                samples,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_and_unbiased() {
        let one = |_: &[f64]| 1.0;
        let r2 = |m: &[f64]| m.iter().map(|x| x * x).sum::<f64>();
        let a = monte_carlo_gaussian(&[&one, &r2], 3, 20_000, 7);
        let b = monte_carlo_gaussian(&[&one, &r2], 3, 20_000, 7);
        assert_eq!(a, b);
        assert_eq!(a[0].mean, 1.0);
        // E|X|² = 3/(2π)
        assert!(a[1].sigmas_from(3.0 / (2.0 * PI)) < 4.0);
    }
}
