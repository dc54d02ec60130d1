use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::deformation::{CFamily, DeformationParams};
use crate::error::{Error, Result};
use crate::metric::Metric;

/// A named preset or explicit covariant components.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MetricSpec {
    Preset(String),
    Explicit { n: usize, rows: Vec<Vec<f64>> },
}

impl MetricSpec {
    pub fn build(&self) -> Result<Metric> {
        match self {
            MetricSpec::Preset(name) => Metric::preset(name),
            MetricSpec::Explicit { n, rows } => {
                if rows.len() != *n {
                    return Err(Error::Config(format!("metric declares n = {n} but has {} rows", rows.len())));
                }
                Metric::new(rows)
            }
        }
    }
}

impl Default for MetricSpec {
    fn default() -> Self {
        MetricSpec::Preset("minkowski4".into())
    }
}

impl FromStr for MetricSpec {
    type Err = Error;

    /// A preset name, or inline JSON `{"n": .., "rows": [[..], ..]}`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with('{') {
            serde_json::from_str(s).map_err(|e| Error::Config(format!("bad metric JSON: {e}")))
        } else {
            Ok(MetricSpec::Preset(s.to_string()))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Closure,
    Ode,
    Intertwine,
    Roundtrip,
    Casimir,
    Coproduct,
    Limit,
    Weyl,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Closure,
        Suite::Ode,
        Suite::Intertwine,
        Suite::Roundtrip,
        Suite::Casimir,
        Suite::Coproduct,
        Suite::Limit,
        Suite::Weyl,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Closure => "closure",
            Suite::Ode => "ode",
            Suite::Intertwine => "intertwine",
            Suite::Roundtrip => "roundtrip",
            Suite::Casimir => "casimir",
            Suite::Coproduct => "coproduct",
            Suite::Limit => "limit",
            Suite::Weyl => "weyl",
        }
    }

    /// Whether the suite draws from the shared momentum sample.
    pub fn uses_sample(self) -> bool {
        !matches!(self, Suite::Coproduct | Suite::Limit)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s.trim())
            .ok_or_else(|| Error::Config(format!("unknown suite `{s}`")))
    }
}

fn default_kappa() -> f64 {
    1.0
}
fn default_tolerance() -> f64 {
    1e-9
}
fn default_samples() -> usize {
    500
}
fn default_seed() -> u64 {
    42
}
fn default_box() -> f64 {
    1.0
}

/// Everything a verification run depends on. Field names double as the JSON
/// config keys.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    #[serde(default)]
    pub metric: MetricSpec,
    #[serde(default = "default_kappa")]
    pub kappa: f64,
    #[serde(default)]
    pub c_family: CFamily,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Half-width of the uniform sampling box, per component.
    #[serde(default = "default_box")]
    pub momentum_box: f64,
    /// `None` runs every suite that applies to the metric.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub suites: Option<Vec<Suite>>,
    /// Relative perturbation of κ in one deformed boost (fault injection
    /// for the closure suite).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perturb_kappa: Option<f64>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            metric: MetricSpec::default(),
            kappa: default_kappa(),
            c_family: CFamily::Kappa,
            tolerance: default_tolerance(),
            samples: default_samples(),
            seed: default_seed(),
            momentum_box: default_box(),
            suites: None,
            perturb_kappa: None,
        }
    }
}

/// A validated configuration.
#[derive(Debug, Clone)]
pub struct Plan {
    pub metric: Metric,
    pub params: DeformationParams,
    /// Deduplicated, in canonical order.
    pub suites: Vec<Suite>,
}

impl SuiteConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// Checks every precondition that can be checked without computing.
    pub fn plan(&self) -> Result<Plan> {
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(Error::Config(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        if self.samples == 0 {
            return Err(Error::Config("samples must be positive".into()));
        }
        if !(self.momentum_box > 0.0 && self.momentum_box.is_finite()) {
            return Err(Error::Config(format!("momentum_box must be positive, got {}", self.momentum_box)));
        }
        if let Some(d) = self.perturb_kappa {
            if !d.is_finite() || d <= -1.0 {
                return Err(Error::Config(format!("perturb_kappa must be finite and above -1, got {d}")));
            }
        }
        let metric = self.metric.build()?;
        let params = DeformationParams::new(self.kappa, self.c_family)?;

        let suites = match &self.suites {
            None => Suite::ALL.into_iter().filter(|&s| s != Suite::Weyl || metric.is_null_time()).collect(),
            Some(list) => {
                if list.is_empty() {
                    return Err(Error::Config("suite list is empty".into()));
                }
                let mut list = list.clone();
                list.sort();
                list.dedup();
                list
            }
        };
        if suites.contains(&Suite::Weyl) {
            if !metric.is_null_time() {
                return Err(Error::WeylRequiresNullTime(metric.g00()));
            }
            if !self.c_family.is_constant() {
                return Err(Error::Config(format!("the weyl suite needs a constant C, got {}", self.c_family)));
            }
        }
        Ok(Plan { metric, params, suites })
    }
}
