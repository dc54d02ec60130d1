//! The momentum composition law induced by the deformed coproduct
//! `ΔP̃_0 = P̃_0 ⊗ 1 + 1 ⊗ P̃_0`, `ΔP̃_k = P̃_k ⊗ e^{−P̃_0/κ} + 1 ⊗ P̃_k`.
//!
//! The first tensor leg is evaluated on the left argument:
//! `(p ⊕ q)_0 = p_0 + q_0`, `(p ⊕ q)_k = p_k e^{−q_0/κ} + q_k`.

use crate::deformation::{forward, DeformationParams};
use crate::error::{Error, Result};
use crate::metric::Metric;

/// Largest `p_0/κ` for which the antipode's `e^{p_0/κ}` is evaluated.
pub const MAX_EXPONENT: f64 = 700.0;

fn same_dim(p: &[f64], q: &[f64]) -> Result<()> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch { expected: p.len(), found: q.len() });
    }
    if p.is_empty() {
        return Err(Error::DimensionTooSmall(0));
    }
    Ok(())
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn deformed_add(p: &[f64], q: &[f64], kappa: f64) -> Result<Vec<f64>> {
    same_dim(p, q)?;
    let damp = (-q[0] / kappa).exp();
    let mut out = Vec::with_capacity(p.len());
    out.push(p[0] + q[0]);
    out.extend(p[1..].iter().zip(&q[1..]).map(|(pk, qk)| pk * damp + qk));
    Ok(out)
}

/// Two-sided inverse for `⊕`: `S(p)_0 = −p_0`, `S(p)_k = −p_k e^{p_0/κ}`.
///
/// Not part of the published structure; derived here from the composition law.
pub fn antipode(p: &[f64], kappa: f64) -> Result<Vec<f64>> {
    if p.is_empty() {
        return Err(Error::DimensionTooSmall(0));
    }
    let x = p[0] / kappa;
    if x > MAX_EXPONENT {
        return Err(Error::Range(x));
    }
    let grow = x.exp();
    let mut out = Vec::with_capacity(p.len());
    out.push(-p[0]);
    out.extend(p[1..].iter().map(|pk| -pk * grow));
    Ok(out)
}

/// `‖(p ⊕ q) ⊕ r − p ⊕ (q ⊕ r)‖_∞`
pub fn coassociativity_gap(p: &[f64], q: &[f64], r: &[f64], kappa: f64) -> Result<f64> {
    let left = deformed_add(&deformed_add(p, q, kappa)?, r, kappa)?;
    let right = deformed_add(p, &deformed_add(q, r, kappa)?, kappa)?;
    Ok(max_abs_diff(&left, &right))
}

/// `‖p ⊕ q − q ⊕ p‖_∞`
pub fn cocommutativity_gap(p: &[f64], q: &[f64], kappa: f64) -> Result<f64> {
    Ok(max_abs_diff(&deformed_add(p, q, kappa)?, &deformed_add(q, p, kappa)?))
}

/// `‖Φ(p + q) − Φ(p) ⊕ Φ(q)‖_∞`: how far the deformation map is from
/// carrying classical addition to the deformed composition.
pub fn coproduct_nonintertwining_gap(
    p: &[f64],
    q: &[f64],
    params: &DeformationParams,
    metric: &Metric,
) -> Result<f64> {
    same_dim(p, q)?;
    let sum: Vec<f64> = p.iter().zip(q).map(|(a, b)| a + b).collect();
    let lhs = forward(&sum, params, metric)?;
    let rhs = deformed_add(&forward(p, params, metric)?, &forward(q, params, metric)?, params.kappa())?;
    Ok(max_abs_diff(&lhs, &rhs))
}
