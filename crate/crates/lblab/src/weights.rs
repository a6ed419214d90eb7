//! Reproducible synthetic per-box work weights drawn from a normal
//! distribution.
//!
//! Generator contract: a ChaCha8 stream seeded from the 64-bit seed feeds a
//! standard normal sampler; each sample is scaled to (mean, std_dev),
//! rounded to the nearest integer and clamped to a minimum of 1. Identical
//! (seed, count, mean, std_dev) gives bit-identical output across runs.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

/// Identifier of the generator contract, recorded in output files so results
/// can be tied to the sampling scheme that produced them.
pub const GENERATOR_ID: &str = "chacha8/normal-ziggurat/round-clamp1";

pub const STUDY_MEAN: f64 = 100_000.0;
pub const SMALL_STD_DEV: f64 = 250.0;
pub const MEDIUM_STD_DEV: f64 = 4_523.0;
pub const LARGE_STD_DEV: f64 = 25_231.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightDistribution {
    pub mean: f64,
    pub std_dev: f64,
    pub seed: u64,
}

/// Draws `count` integer weights from Normal(mean, std_dev), rounded and
/// clamped to at least 1.
pub fn generate_weights(dist: &WeightDistribution, count: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(dist.seed);
    if dist.std_dev == 0.0 {
        let w = dist.mean.round().max(1.0) as u64;
        return vec![w; count];
    }
    let normal = Normal::new(dist.mean, dist.std_dev).expect("finite mean, positive std dev");
    (0..count)
        .map(|_| {
            let x = normal.sample(&mut rng).round();
            if x < 1.0 {
                1
            } else {
                x as u64
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_std_dev_is_constant() {
        let dist = WeightDistribution {
            mean: 100_000.0,
            std_dev: 0.0,
            seed: 1,
        };
        assert_eq!(generate_weights(&dist, 5), vec![100_000; 5]);
    }

    #[test]
    fn sample_statistics_match_distribution() {
        let dist = WeightDistribution {
            mean: 100_000.0,
            std_dev: 250.0,
            seed: 7,
        };
        let w = generate_weights(&dist, 10_000);
        let n = w.len() as f64;
        let mean = w.iter().map(|&x| x as f64).sum::<f64>() / n;
        let var = w.iter().map(|&x| (x as f64 - mean).powi(2)).sum::<f64>() / (n - 1.0);
        let std = var.sqrt();
        // 3-sigma bounds on the estimators: se(mean) = 250/100 = 2.5,
        // se(std) ~ 250/sqrt(2n) ~ 1.77
        assert!((mean - 100_000.0).abs() < 10.0, "sample mean {mean}");
        assert!((std - 250.0).abs() < 10.0, "sample std {std}");
    }

    #[test]
    fn deterministic_under_seed() {
        let dist = WeightDistribution {
            mean: 100_000.0,
            std_dev: 4_523.0,
            seed: 42,
        };
        let a = generate_weights(&dist, 100);
        let b = generate_weights(&dist, 100);
        assert_eq!(a, b);
        let other = WeightDistribution { seed: 43, ..dist };
        assert_ne!(a, generate_weights(&other, 100));
    }

    #[test]
    fn golden_vector_pinned() {
        // frozen at first release; a change here means the generator contract
        // changed and GENERATOR_ID must be bumped
        let dist = WeightDistribution {
            mean: 100_000.0,
            std_dev: 25_231.0,
            seed: 123_456_789,
        };
        let w = generate_weights(&dist, 8);
        assert_eq!(
            w,
            vec![
                105903, 106764, 86886, 83093, 124022, 147864, 102045, 121312
            ]
        );
    }

    #[test]
    fn clamps_to_minimum_one() {
        let dist = WeightDistribution {
            mean: 1.0,
            std_dev: 100.0,
            seed: 3,
        };
        let w = generate_weights(&dist, 1_000);
        assert_eq!(w.len(), 1_000);
        assert!(w.iter().all(|&x| x >= 1));
        // with mean 1 and std 100 roughly half the raw samples are < 1
        assert!(w.iter().filter(|&&x| x == 1).count() > 300);
    }
}
