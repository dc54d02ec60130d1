//! The deformed mass-squared Casimir and its relation to the classical one.

use crate::deformation::{solve_a, witness, DeformationParams};
use crate::error::{Error, Result};
use crate::jet::{jet_eval, Scalar};
use crate::metric::Metric;
use crate::realization::{deformed_field, Generator};

/// Below this `|M̃²|` the relation through `4κ²/M̃²` is not evaluated.
pub const DEGENERATE_CUTOFF: f64 = 1e-12;

const RECOVER_RANGE: f64 = 10.0;
const RECOVER_MAX_RANGE: f64 = 1e7;
const RECOVER_GRID: usize = 2000;
const RECOVER_TOL: f64 = 1e-12;

/// `M̃² = g^{00}(2κ sinh(P̃_0/2κ))² + 4κ g^{0l} P̃_l e^{P̃_0/2κ} sinh(P̃_0/2κ)
///       + g^{rs} P̃_r P̃_s e^{P̃_0/κ}`
pub fn deformed_mass_squared<S: Scalar>(pt: &[S], metric: &Metric, kappa: f64) -> Result<S> {
    metric.check_dim(pt.len())?;
    let half = pt[0].clone() / (2.0 * kappa);
    let sh = half.sinh();
    let grow = half.exp();
    let mut acc = sh.square() * (4.0 * kappa * kappa * metric.upper(0, 0));
    acc = acc + metric.time_space(pt) * grow.clone() * sh * (4.0 * kappa);
    acc = acc + metric.spatial_form(pt) * grow.square();
    Ok(acc)
}

/// Both sides of the Casimir relations at a classical point and its image.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CasimirRelation {
    pub m2: f64,
    pub m2_tilde: f64,
    /// `2A/(C − g00 A) − M̃²/κ²`
    pub r9: f64,
    /// `A²(4κ²/M̃² + g00) − M²`; `None` when `M̃²` is degenerate.
    pub r11: Option<f64>,
}

impl CasimirRelation {
    pub fn degenerate(&self) -> bool {
        self.r11.is_none()
    }
}

pub fn casimir_relation_residual(p: &[f64], params: &DeformationParams, metric: &Metric) -> Result<CasimirRelation> {
    let kappa = params.kappa();
    let w = witness(p, params, metric)?;
    let pt = crate::deformation::forward(p, params, metric)?;
    let m2_tilde = deformed_mass_squared(&pt, metric, kappa)?;
    let r9 = 2.0 * w.a / w.denominator - m2_tilde / (kappa * kappa);
    let r11 = (m2_tilde.abs() >= DEGENERATE_CUTOFF)
        .then(|| w.a * w.a * (4.0 * kappa * kappa / m2_tilde + metric.g00()) - w.m2);
    Ok(CasimirRelation { m2: w.m2, m2_tilde, r9, r11 })
}

/// `|X̃(M̃²)|` at a deformed point.
pub fn casimir_invariance_residual(generator: Generator, pt: &[f64], metric: &Metric, kappa: f64) -> Result<f64> {
    let casimir = jet_eval(|p| deformed_mass_squared(p, metric, kappa), pt)?;
    let x = deformed_field(generator, metric, kappa)?;
    Ok(x.directional_derivative(&casimir, pt)?.abs())
}

/// `2A/(C − g00 A)` as a function of the classical `M²`, or `None` off the
/// map's domain.
fn ratio_at(m2: f64, params: &DeformationParams, g00: f64) -> Option<f64> {
    let c = params.c_of(&m2);
    let a = solve_a(m2, c, g00).ok()?;
    let denominator = c - g00 * a;
    (denominator > 0.0 && a.is_finite()).then(|| 2.0 * a / denominator)
}

/// Classical `M²` of the preimage of a deformed point.
///
/// Solves `2A(M²)/(C(M²) − g00 A(M²)) = M̃²/κ²` by bisection over
/// `|M²| ≤ 10κ²`, widening the range fourfold (up to `10⁷κ²`) while no root
/// is bracketed. When several roots are bracketed the one of smallest
/// magnitude is returned.
pub fn recover_m2(pt: &[f64], params: &DeformationParams, metric: &Metric) -> Result<f64> {
    let kappa = params.kappa();
    let m2_tilde = deformed_mass_squared(pt, metric, kappa)?;
    if m2_tilde.abs() < DEGENERATE_CUTOFF {
        return Ok(0.0);
    }
    let target = m2_tilde / (kappa * kappa);
    let g00 = metric.g00();
    let residual = |m2: f64| ratio_at(m2, params, g00).map(|r| r - target);

    let mut range = RECOVER_RANGE * kappa * kappa;
    while range <= RECOVER_MAX_RANGE * kappa * kappa {
        if let Some(root) = scan(&residual, range) {
            return Ok(root);
        }
        range *= 4.0;
    }
    Err(Error::NoSolution(m2_tilde))
}

fn scan<F>(residual: &F, range: f64) -> Option<f64>
where
    F: Fn(f64) -> Option<f64>,
{
    let grid: Vec<(f64, Option<f64>)> = (0..=RECOVER_GRID)
        .map(|k| {
            let m2 = -range + 2.0 * range * k as f64 / RECOVER_GRID as f64;
            (m2, residual(m2))
        })
        .collect();

    let mut best: Option<f64> = None;
    for pair in grid.windows(2) {
        let bracket = match (pair[0], pair[1]) {
            ((lo, Some(r_lo)), (hi, Some(r_hi))) => Some((lo, r_lo, hi, r_hi)),
            // Roots close to where the map stops being defined sit in cells
            // with one undefined end; walk towards that end.
            ((lo, Some(r_lo)), (hi, None)) => edge_bracket(residual, lo, r_lo, hi),
            ((lo, None), (hi, Some(r_hi))) => edge_bracket(residual, hi, r_hi, lo),
            _ => None,
        };
        if let Some(root) = bracket.and_then(|b| bisect(residual, b)) {
            best = pick(best, root);
        }
    }
    best
}

/// Orders a bracket `(lo, r(lo), hi, r(hi))` found between a defined point and an
/// undefined one, by stepping to `defined + (undefined − defined)(1 − 2^{−k})`.
fn edge_bracket<F>(residual: &F, defined: f64, r_defined: f64, undefined: f64) -> Option<(f64, f64, f64, f64)>
where
    F: Fn(f64) -> Option<f64>,
{
    let (mut x, mut r) = (defined, r_defined);
    for k in 1..=60 {
        let next = defined + (undefined - defined) * (1.0 - 0.5f64.powi(k));
        let Some(r_next) = residual(next) else {
            return None;
        };
        if r_next.signum() != r.signum() || r_next == 0.0 {
            return Some(if x < next { (x, r, next, r_next) } else { (next, r_next, x, r) });
        }
        (x, r) = (next, r_next);
    }
    None
}

/// Bisection on a sign-changing bracket; `None` if the residual stops being
/// defined inside it.
fn bisect<F>(residual: &F, (mut lo, mut r_lo, mut hi, r_hi): (f64, f64, f64, f64)) -> Option<f64>
where
    F: Fn(f64) -> Option<f64>,
{
    if r_lo == 0.0 {
        return Some(lo);
    }
    if r_hi == 0.0 {
        return Some(hi);
    }
    if r_lo.signum() == r_hi.signum() {
        return None;
    }
    for _ in 0..200 {
        if hi - lo <= RECOVER_TOL * 1f64.max(lo.abs()).max(hi.abs()) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let r_mid = residual(mid)?;
        if r_mid == 0.0 {
            return Some(mid);
        }
        if r_mid.signum() == r_lo.signum() {
            lo = mid;
            r_lo = r_mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

fn pick(best: Option<f64>, candidate: f64) -> Option<f64> {
    match best {
        Some(b) if b.abs() <= candidate.abs() => Some(b),
        _ => Some(candidate),
    }
}
