use std::fmt;

use serde::{Deserialize, Serialize};

use super::config::SuiteConfig;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    /// Passes when the residual stays at or below `tolerance`.
    Identity,
    /// Passes when the residual reaches `floor` (or, with `min_fraction`,
    /// when enough points do).
    NegativeControl,
}

/// One line of a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub kind: CheckKind,
    /// Candidates drawn (including rejected ones).
    pub samples: usize,
    /// Points actually evaluated.
    pub accepted: usize,
    pub max_residual: f64,
    pub worst_point: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub floor: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fraction_above: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_fraction: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    pub pass: bool,
}

/// Largest residual and the first index attaining it. A NaN wins outright.
pub fn worst(residuals: &[f64]) -> (f64, usize) {
    let mut best = (f64::NEG_INFINITY, 0);
    for (i, &r) in residuals.iter().enumerate() {
        if r.is_nan() {
            return (r, i);
        }
        if r > best.0 {
            best = (r, i);
        }
    }
    if residuals.is_empty() {
        (0.0, 0)
    } else {
        best
    }
}

impl CheckReport {
    fn base(name: &str, kind: CheckKind, samples: usize, accepted: usize, max_residual: f64, worst_point: Vec<f64>) -> Self {
        CheckReport {
            name: name.to_string(),
            kind,
            samples,
            accepted,
            max_residual,
            worst_point,
            tolerance: None,
            floor: None,
            fraction_above: None,
            min_fraction: None,
            detail: None,
            pass: false,
        }
    }

    /// `residuals[i]` belongs to `points[i]`.
    pub fn identity(name: &str, samples: usize, residuals: &[f64], points: &[Vec<f64>], tolerance: f64) -> Self {
        let (max, at) = worst(residuals);
        let point = points.get(at).cloned().unwrap_or_default();
        let mut r = CheckReport::base(name, CheckKind::Identity, samples, residuals.len(), max, point);
        r.tolerance = Some(tolerance);
        r.pass = max <= tolerance;
        r
    }

    /// A single probe whose residual must reach `floor`.
    pub fn probe_control(name: &str, residual: f64, point: Vec<f64>, floor: f64) -> Self {
        let mut r = CheckReport::base(name, CheckKind::NegativeControl, 1, 1, residual, point);
        r.floor = Some(floor);
        r.pass = residual >= floor;
        r
    }

    /// At least `min_fraction` of the residuals must exceed `floor`.
    pub fn fraction_control(
        name: &str,
        samples: usize,
        residuals: &[f64],
        points: &[Vec<f64>],
        floor: f64,
        min_fraction: f64,
    ) -> Self {
        let (max, at) = worst(residuals);
        let point = points.get(at).cloned().unwrap_or_default();
        let above = residuals.iter().filter(|&&r| r > floor).count();
        let fraction = if residuals.is_empty() { 0.0 } else { above as f64 / residuals.len() as f64 };
        let mut r = CheckReport::base(name, CheckKind::NegativeControl, samples, residuals.len(), max, point);
        r.floor = Some(floor);
        r.fraction_above = Some(fraction);
        r.min_fraction = Some(min_fraction);
        r.pass = fraction >= min_fraction;
        r
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplingStats {
    pub attempted: usize,
    pub accepted: usize,
    pub rejection_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    /// The configuration as run, with the suite list resolved.
    pub config: SuiteConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sampling: Option<SamplingStats>,
    pub suites: Vec<CheckReport>,
    pub pass: bool,
    pub failed: Vec<String>,
    pub wall_time_ms: f64,
}

impl VerificationReport {
    pub fn new(config: SuiteConfig, sampling: Option<SamplingStats>, suites: Vec<CheckReport>, wall_time_ms: f64) -> Self {
        let failed: Vec<String> = suites.iter().filter(|c| !c.pass).map(|c| c.name.clone()).collect();
        VerificationReport {
            schema_version: SCHEMA_VERSION,
            config,
            sampling,
            pass: failed.is_empty(),
            suites,
            failed,
            wall_time_ms,
        }
    }

    pub fn check(&self, name: &str) -> Option<&CheckReport> {
        self.suites.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// The JSON document without the wall-time field, for reproducibility checks.
    pub fn stable_json(&self) -> String {
        let mut value = serde_json::to_value(self).expect("report serializes");
        if let Some(obj) = value.as_object_mut() {
            obj.remove("wall_time_ms");
        }
        serde_json::to_string(&value).expect("report serializes")
    }
}

fn point_text(p: &[f64]) -> String {
    p.iter().map(|x| format!("{x:.6}")).collect::<Vec<_>>().join(", ")
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(s) = &self.sampling {
            writeln!(f, "sampling: {} accepted of {} drawn ({:.1}% rejected)", s.accepted, s.attempted, 100.0 * s.rejection_rate)?;
        }
        for c in &self.suites {
            let status = if c.pass { "PASS" } else { "FAIL" };
            let bound = match (c.tolerance, c.floor, c.fraction_above) {
                (Some(t), _, _) => format!("<= {t:e}"),
                (_, Some(fl), Some(frac)) => {
                    format!("{:.1}% > {fl:e} (need {:.0}%)", 100.0 * frac, 100.0 * c.min_fraction.unwrap_or(0.0))
                }
                (_, Some(fl), None) => format!(">= {fl:e}"),
                _ => String::new(),
            };
            write!(f, "[{status}] {:<34} max {:<12.4e} {bound:<24} n={}", c.name, c.max_residual, c.accepted)?;
            if let Some(d) = &c.detail {
                write!(f, "  {d}")?;
            }
            if !c.pass && !c.worst_point.is_empty() {
                write!(f, "  at ({})", point_text(&c.worst_point))?;
            }
            writeln!(f)?;
        }
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "{verdict}: {} checks, {} failed, {:.0} ms", self.suites.len(), self.failed.len(), self.wall_time_ms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worst_takes_first_max_and_nan() {
        assert_eq!(worst(&[1.0, 3.0, 3.0, 2.0]), (3.0, 1));
        let (v, i) = worst(&[1.0, f64::NAN, 5.0]);
        assert!(v.is_nan());
        assert_eq!(i, 1);
        assert_eq!(worst(&[]), (0.0, 0));
    }

    #[test]
    fn pass_rules() {
        let pts = vec![vec![0.0], vec![1.0]];
        assert!(CheckReport::identity("a", 2, &[1e-12, 1e-10], &pts, 1e-9).pass);
        assert!(!CheckReport::identity("a", 2, &[1e-12, f64::NAN], &pts, 1e-9).pass);
        assert!(!CheckReport::probe_control("b", 1e-7, vec![], 1e-6).pass);
        let frac = CheckReport::fraction_control("c", 2, &[1e-2, 1e-4], &pts, 1e-3, 0.9);
        assert_eq!(frac.fraction_above, Some(0.5));
        assert!(!frac.pass);
        let report = VerificationReport::new(SuiteConfig::default(), None, vec![frac], 3.0);
        assert_eq!(report.failed, vec!["c".to_string()]);
        assert!(!report.stable_json().contains("wall_time_ms"));
    }
}
