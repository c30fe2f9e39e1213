//! Published reference figures used to calibrate and check the applied analyses.

use alloc::string::String;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::fit::lognormal_from_moments;
use crate::models::QuantileModel;
use crate::prefs::SchedulingPreferences;

/// One route of the six-path comparison: coefficient of variation and the
/// published trip costs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PublishedRoute {
    pub name: &'static str,
    pub cov: f64,
    pub certainty: f64,
    pub reliability: f64,
    pub unreliability: f64,
    pub total_ttb: f64,
    pub total_mett: f64,
}

pub const SIX_PATHS: [PublishedRoute; 6] = [
    PublishedRoute { name: "Path 1", cov: 0.20, certainty: 19.94, reliability: 2.41, unreliability: 0.39, total_ttb: 22.35, total_mett: 22.74 },
    PublishedRoute { name: "Path 2", cov: 0.41, certainty: 15.93, reliability: 4.01, unreliability: 0.80, total_ttb: 19.94, total_mett: 20.74 },
    PublishedRoute { name: "Path 3", cov: 0.64, certainty: 13.93, reliability: 5.58, unreliability: 1.32, total_ttb: 19.51, total_mett: 20.84 },
    PublishedRoute { name: "Path 4", cov: 0.79, certainty: 12.65, reliability: 6.15, unreliability: 1.60, total_ttb: 18.80, total_mett: 20.41 },
    PublishedRoute { name: "Path 5", cov: 0.94, certainty: 12.36, reliability: 7.01, unreliability: 1.98, total_ttb: 19.37, total_mett: 21.35 },
    PublishedRoute { name: "Path 6", cov: 1.10, certainty: 12.80, reliability: 8.21, unreliability: 2.51, total_ttb: 21.01, total_mett: 23.53 },
];

/// Preferences inferred for the six-path comparison: `β/α = 0.4` at `τ = 0.8`.
pub fn six_path_preferences() -> SchedulingPreferences {
    SchedulingPreferences::from_penalties(2.0, 0.8, 3.2).expect("constant preferences are valid")
}

/// Lognormal routes with mean `certainty/α` and the published CoV.
pub fn six_path_routes() -> Result<Vec<(String, QuantileModel)>> {
    let alpha = six_path_preferences().alpha();
    SIX_PATHS
        .iter()
        .map(|r| {
            let mean = r.certainty / alpha;
            Ok((String::from(r.name), lognormal_from_moments(mean, r.cov * mean)?))
        })
        .collect()
}

/// Summary statistics of one observed travel-time dataset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DatasetMoments {
    pub name: &'static str,
    pub mean: f64,
    pub std: f64,
    pub skewness: f64,
    pub kurtosis: f64,
}

pub const THIRTEEN_DATASETS: [DatasetMoments; 13] = [
    DatasetMoments { name: "Campus1", mean: 59.90, std: 7.76, skewness: 1.09, kurtosis: 3.09 },
    DatasetMoments { name: "Campus2", mean: 57.80, std: 7.16, skewness: 1.47, kurtosis: 2.70 },
    DatasetMoments { name: "Campus3", mean: 51.97, std: 7.56, skewness: 2.44, kurtosis: 8.57 },
    DatasetMoments { name: "Campus4", mean: 65.71, std: 11.13, skewness: 1.21, kurtosis: 2.78 },
    DatasetMoments { name: "Campus5", mean: 80.79, std: 17.09, skewness: 0.66, kurtosis: -0.49 },
    DatasetMoments { name: "Link1", mean: 36.57, std: 25.23, skewness: 0.37, kurtosis: -0.78 },
    DatasetMoments { name: "Link2", mean: 15.24, std: 9.93, skewness: 2.80, kurtosis: 10.86 },
    DatasetMoments { name: "Link3", mean: 15.85, std: 13.45, skewness: 1.67, kurtosis: 1.76 },
    DatasetMoments { name: "Path", mean: 84.60, std: 28.11, skewness: 0.30, kurtosis: 0.04 },
    DatasetMoments { name: "101_1", mean: 52.60, std: 13.51, skewness: 0.94, kurtosis: 1.35 },
    DatasetMoments { name: "101_2", mean: 68.42, std: 21.79, skewness: 0.40, kurtosis: -0.89 },
    DatasetMoments { name: "101_3", mean: 80.84, std: 18.88, skewness: -0.26, kurtosis: 0.50 },
    DatasetMoments { name: "101_4", mean: 65.23, std: 21.38, skewness: 0.52, kurtosis: -0.52 },
];

impl DatasetMoments {
    pub fn lognormal(&self) -> Result<QuantileModel> {
        lognormal_from_moments(self.mean, self.std)
    }

    /// Seeded draws from the moment-matched lognormal, standing in for the
    /// raw observations.
    pub fn synthetic_sample(&self, n: usize, seed: u64) -> Result<Vec<f64>> {
        let model = self.lognormal()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Ok((0..n).map(|_| model.sample(&mut rng)).collect())
    }
}

pub fn dataset(name: &str) -> Option<&'static DatasetMoments> {
    THIRTEEN_DATASETS.iter().find(|d| d.name == name)
}

/// Punctuality trade-off for dataset `101_1` with `α = 2`, `β = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PublishedTradeoff {
    pub tau: f64,
    pub ett: f64,
    pub ttvr: f64,
}

pub const TRADEOFF_101_1: [PublishedTradeoff; 7] = [
    PublishedTradeoff { tau: 0.60, ett: 12.35, ttvr: 0.6889 },
    PublishedTradeoff { tau: 0.65, ett: 14.07, ttvr: 0.6642 },
    PublishedTradeoff { tau: 0.70, ett: 15.80, ttvr: 0.6457 },
    PublishedTradeoff { tau: 0.75, ett: 18.10, ttvr: 0.6256 },
    PublishedTradeoff { tau: 0.80, ett: 20.99, ttvr: 0.6061 },
    PublishedTradeoff { tau: 0.85, ett: 24.40, ttvr: 0.5884 },
    PublishedTradeoff { tau: 0.90, ett: 29.14, ttvr: 0.5613 },
];

/// `0.50, 0.55, …, 0.95, 0.99`.
pub fn condition_grid() -> Vec<f64> {
    let mut g: Vec<f64> = (0..10).map(|i| (50 + 5 * i) as f64 / 100.0).collect();
    g.push(0.99);
    g
}
