//! Seeded sampling, the verification suites and their reports.
//!
//! A run draws one in-domain sample (SplitMix64, seed from the config) shared
//! by the sampling suites, evaluates each check per point, and reduces with a
//! plain max, so serial and parallel runs produce identical reports.

pub mod config;
pub mod limits;
pub mod report;
pub mod sampling;
mod suites;

use std::time::Instant;

use crate::error::Result;

pub use config::{MetricSpec, Plan, Suite, SuiteConfig};
pub use limits::{limit_scan, LimitSeries, LIMIT_KAPPAS};
pub use report::{CheckKind, CheckReport, SamplingStats, VerificationReport};
pub use sampling::{sample_in_box, sample_momenta, Sample};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExecutionMode {
    Serial,
    /// Per-point work on the global rayon pool.
    #[default]
    Parallel,
}

pub fn run_suites(cfg: &SuiteConfig) -> Result<VerificationReport> {
    run_suites_with(cfg, ExecutionMode::default())
}

/// Configuration errors surface before any suite runs.
pub fn run_suites_with(cfg: &SuiteConfig, mode: ExecutionMode) -> Result<VerificationReport> {
    let started = Instant::now();
    let plan = cfg.plan()?;
    let sample = if plan.suites.iter().any(|s| s.uses_sample()) {
        Some(sample_momenta(cfg, &plan.metric, &plan.params)?)
    } else {
        None
    };
    let ctx = suites::Context { cfg, plan: &plan, sample: sample.as_ref(), mode };
    let mut checks = Vec::new();
    for &suite in &plan.suites {
        checks.extend(ctx.run(suite)?);
    }
    let sampling = sample.as_ref().map(|s| SamplingStats {
        attempted: s.attempted,
        accepted: s.points.len(),
        rejection_rate: s.rejection_rate(),
    });
    let echo = SuiteConfig { suites: Some(plan.suites.clone()), ..cfg.clone() };
    let elapsed = started.elapsed().as_secs_f64() * 1e3;
    Ok(VerificationReport::new(echo, sampling, checks, elapsed))
}
