//! Deterministic point sampling over chart domains.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::chart::Chart;
use crate::scalar::Scalar;

/// Sampling strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplingMode {
    /// Uniform lattice with `ceil(count^(1/n))` nodes per axis (endpoints
    /// included); the total may exceed `count`.
    Grid,
    /// Seeded uniform draws, coordinate-major, reproducible bit-for-bit.
    Random,
}

impl SamplingMode {
    pub fn label(self) -> &'static str {
        match self {
            SamplingMode::Grid => "grid",
            SamplingMode::Random => "random",
        }
    }

    pub fn parse(s: &str) -> Option<SamplingMode> {
        match s {
            "grid" => Some(SamplingMode::Grid),
            "random" => Some(SamplingMode::Random),
            _ => None,
        }
    }
}

/// Sampling plan: mode, requested point count, RNG seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sampling {
    pub mode: SamplingMode,
    pub count: usize,
    pub seed: u64,
}

impl Default for Sampling {
    fn default() -> Self {
        Sampling { mode: SamplingMode::Random, count: 50, seed: 42 }
    }
}

/// Generate the sample points for a chart, ordered by sample index.
pub fn sample_points<T: Scalar>(chart: &Chart, sampling: &Sampling) -> Vec<Vec<T>> {
    let n = chart.dimension();
    match sampling.mode {
        SamplingMode::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(sampling.seed);
            (0..sampling.count)
                .map(|_| {
                    (0..n)
                        .map(|i| {
                            let (lo, hi) = chart.interval(i);
                            let u: f64 = rng.gen();
                            T::from_f64_lossy(lo + (hi - lo) * u)
                        })
                        .collect()
                })
                .collect()
        }
        SamplingMode::Grid => {
            let per_axis = (sampling.count.max(1) as f64)
                .powf(1.0 / n as f64)
                .ceil() as usize;
            let per_axis = per_axis.max(1);
            let axis_values: Vec<Vec<f64>> = (0..n)
                .map(|i| {
                    let (lo, hi) = chart.interval(i);
                    if per_axis == 1 {
                        vec![(lo + hi) / 2.0]
                    } else {
                        (0..per_axis)
                            .map(|k| lo + (hi - lo) * k as f64 / (per_axis - 1) as f64)
                            .collect()
                    }
                })
                .collect();
            let total = per_axis.pow(n as u32);
            (0..total)
                .map(|mut idx| {
                    let mut p = vec![T::zero(); n];
                    for i in (0..n).rev() {
                        p[i] = T::from_f64_lossy(axis_values[i][idx % per_axis]);
                        idx /= per_axis;
                    }
                    p
                })
                .collect()
        }
    }
}
