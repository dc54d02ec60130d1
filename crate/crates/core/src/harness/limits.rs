//! Classical-limit scans: the gap between a deformed object and its classical
//! counterpart at fixed inputs, for a doubling sequence of κ.

use serde::{Deserialize, Serialize};

use crate::casimir::deformed_mass_squared;
use crate::coproduct::deformed_add;
use crate::deformation::{forward, DeformationParams};
use crate::error::Result;
use crate::metric::Metric;
use crate::realization::{classical_field, deformed_field, lorentz_basis, Generator};

pub const LIMIT_KAPPAS: [f64; 4] = [10.0, 20.0, 40.0, 80.0];
/// Accepted range of `gap(κ) / gap(2κ)`.
pub const RATIO_BAND: (f64, f64) = (1.8, 2.2);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitSeries {
    pub name: String,
    pub kappas: Vec<f64>,
    pub gaps: Vec<f64>,
    /// `gaps[i] / gaps[i + 1]`
    pub ratios: Vec<f64>,
}

impl LimitSeries {
    fn new(name: &str, kappas: &[f64], gaps: Vec<f64>) -> Self {
        let ratios = gaps.windows(2).map(|w| w[0] / w[1]).collect();
        LimitSeries { name: name.to_string(), kappas: kappas.to_vec(), gaps, ratios }
    }

    /// Largest distance of a ratio from 2 (NaN if any ratio is undefined).
    pub fn max_deviation(&self) -> f64 {
        self.ratios.iter().map(|r| (r - 2.0).abs()).fold(0.0, |a: f64, d| if d.is_nan() { d } else { a.max(d) })
    }

    pub fn within_band(&self) -> bool {
        self.ratios.iter().all(|&r| r >= RATIO_BAND.0 && r <= RATIO_BAND.1)
    }
}

/// `p_0 = 0.3`, `p_k = 0.2 (−0.6)^{k−1}`.
pub fn limit_probe(n: usize) -> Vec<f64> {
    let mut p = vec![0.3];
    p.extend((1..n).map(|k| 0.2 * (-0.6f64).powi(k as i32 - 1)));
    p
}

/// Second composition argument: `q_0 = −0.4`, `q_k = 0.15 (0.5)^{k−1}`.
pub fn limit_partner(n: usize) -> Vec<f64> {
    let mut q = vec![-0.4];
    q.extend((1..n).map(|k| 0.15 * 0.5f64.powi(k as i32 - 1)));
    q
}

fn sup_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn generators(metric: &Metric) -> Vec<Generator> {
    let mut gens = lorentz_basis(metric.dim());
    if metric.is_null_time() {
        gens.push(Generator::Dilatation);
    }
    gens
}

/// Gap series for the map, the action, `M̃²` and `⊕` at the probe points.
/// The map uses `C = κ`.
pub fn limit_scan(metric: &Metric, kappas: &[f64]) -> Result<Vec<LimitSeries>> {
    let n = metric.dim();
    let p = limit_probe(n);
    let q = limit_partner(n);
    let classical_m2 = metric.mass_squared(&p)?;
    let classical_sum: Vec<f64> = p.iter().zip(&q).map(|(a, b)| a + b).collect();
    let gens = generators(metric);
    let classical: Vec<Vec<f64>> =
        gens.iter().map(|&g| classical_field(g, metric)?.eval(&p)).collect::<Result<_>>()?;

    let mut map_gaps = Vec::new();
    let mut action_gaps = Vec::new();
    let mut casimir_gaps = Vec::new();
    let mut sum_gaps = Vec::new();
    for &kappa in kappas {
        let params = DeformationParams::kappa_family(kappa)?;
        map_gaps.push(sup_distance(&forward(&p, &params, metric)?, &p));
        let mut action: f64 = 0.0;
        for (g, x) in gens.iter().zip(&classical) {
            action = action.max(sup_distance(&deformed_field(*g, metric, kappa)?.eval(&p)?, x));
        }
        action_gaps.push(action);
        casimir_gaps.push((deformed_mass_squared(&p, metric, kappa)? - classical_m2).abs());
        sum_gaps.push(sup_distance(&deformed_add(&p, &q, kappa)?, &classical_sum));
    }
    Ok(vec![
        LimitSeries::new("map", kappas, map_gaps),
        LimitSeries::new("action", kappas, action_gaps),
        LimitSeries::new("casimir", kappas, casimir_gaps),
        LimitSeries::new("composition", kappas, sum_gaps),
    ])
}
