use crate::deformation::{witness, DeformationParams};
use crate::error::{Error, Result};
use crate::metric::Metric;
use crate::rng::SplitMix64;

use super::config::SuiteConfig;

/// Candidates drawn per requested point before giving up.
pub const MAX_OVERSAMPLING: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub points: Vec<Vec<f64>>,
    pub attempted: usize,
}

impl Sample {
    pub fn rejection_rate(&self) -> f64 {
        if self.attempted == 0 {
            0.0
        } else {
            1.0 - self.points.len() as f64 / self.attempted as f64
        }
    }
}

/// Uniform points in `[-half_width, half_width)^n` on which the map is defined.
///
/// Components are drawn in index order from one SplitMix64 stream, so the
/// result depends only on the arguments.
pub fn sample_in_box(
    metric: &Metric,
    params: &DeformationParams,
    half_width: f64,
    count: usize,
    seed: u64,
) -> Result<Sample> {
    let n = metric.dim();
    let mut rng = SplitMix64::new(seed);
    let budget = count.saturating_mul(MAX_OVERSAMPLING);
    let mut points = Vec::with_capacity(count);
    let mut attempted = 0;
    while points.len() < count {
        if attempted == budget {
            return Err(Error::DomainTooTight { accepted: points.len(), attempted });
        }
        attempted += 1;
        let p: Vec<f64> = (0..n).map(|_| rng.symmetric(half_width)).collect();
        if witness(&p, params, metric).is_ok() {
            points.push(p);
        }
    }
    Ok(Sample { points, attempted })
}

pub fn sample_momenta(cfg: &SuiteConfig, metric: &Metric, params: &DeformationParams) -> Result<Sample> {
    sample_in_box(metric, params, cfg.momentum_box, cfg.samples, cfg.seed)
}
