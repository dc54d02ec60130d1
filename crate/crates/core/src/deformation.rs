//! The deformation map between classical momenta `P` and deformed momenta `P̃`.
//!
//! ```text
//! P̃_0 = κ ln((P_0 + C) / (C − g00 A))
//! P̃_i = κ (P_i + g_{i0} A) / (P_0 + C)
//! ```
//!
//! with `C = C(M²)` a free function and `A` the root of
//! `g00 A² − 2 A C + M² = 0` that stays finite as `g00 → 0`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{DomainCondition, Error, Result};
use crate::jet::{jacobian, Jet, Scalar};
use crate::metric::Metric;
use crate::realization::{classical_field, deformed_field, Generator};

/// How `C` depends on the classical mass squared.
///
/// Serialized as its display string: `kappa`, `constant:<c>` or `affine:<lambda>`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum CFamily {
    /// `C = κ`
    #[default]
    Kappa,
    /// `C = c`
    Constant(f64),
    /// `C = κ + λ M² / κ`
    Affine(f64),
}

impl CFamily {
    /// Whether `C` does not depend on `M²`, as the Weyl extension requires.
    pub fn is_constant(self) -> bool {
        !matches!(self, CFamily::Affine(_))
    }
}

impl fmt::Display for CFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CFamily::Kappa => write!(f, "kappa"),
            CFamily::Constant(c) => write!(f, "constant:{c}"),
            CFamily::Affine(l) => write!(f, "affine:{l}"),
        }
    }
}

impl FromStr for CFamily {
    type Err = Error;

    /// `kappa`, `constant:<c>` or `affine:<lambda>`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("unrecognized C family `{s}` (expected kappa, constant:<c> or affine:<lambda>)"));
        let number = |v: &str| v.trim().parse::<f64>().map_err(|_| bad());
        match s.trim().split_once(':') {
            None if s.trim() == "kappa" => Ok(CFamily::Kappa),
            Some(("constant", v)) => Ok(CFamily::Constant(number(v)?)),
            Some(("affine", v)) => Ok(CFamily::Affine(number(v)?)),
            _ => Err(bad()),
        }
    }
}

impl TryFrom<String> for CFamily {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<CFamily> for String {
    fn from(family: CFamily) -> String {
        family.to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeformationParams {
    kappa: f64,
    c_family: CFamily,
}

impl DeformationParams {
    pub fn new(kappa: f64, c_family: CFamily) -> Result<Self> {
        if !(kappa > 0.0 && kappa.is_finite()) {
            return Err(Error::InvalidKappa(kappa));
        }
        Ok(DeformationParams { kappa, c_family })
    }

    /// `C = κ`
    pub fn kappa_family(kappa: f64) -> Result<Self> {
        DeformationParams::new(kappa, CFamily::Kappa)
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn c_family(&self) -> CFamily {
        self.c_family
    }

    pub fn c_of<S: Scalar>(&self, m2: &S) -> S {
        match self.c_family {
            CFamily::Kappa => m2.constant_like(self.kappa),
            CFamily::Constant(c) => m2.constant_like(c),
            CFamily::Affine(lambda) => m2.clone() * (lambda / self.kappa) + self.kappa,
        }
    }
}

/// The quantities that decide whether the map is defined at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapDomainWitness {
    pub m2: f64,
    pub c: f64,
    pub a: f64,
    /// `C − g00 A`
    pub denominator: f64,
    /// `P_0 + C`
    pub shifted_energy: f64,
}

struct Coefficients<S> {
    a: S,
    c: S,
    denominator: S,
    shifted_energy: S,
}

/// Rationalized root of the constraint, generic over the scalar type.
fn root_a<S: Scalar>(m2: &S, c: &S, g00: f64) -> Result<S> {
    let disc = c.square() - m2.clone() * g00;
    if !(disc.value() >= 0.0) {
        return Err(Error::NoRealRoot(disc.value()));
    }
    let root = if disc.value() == 0.0 { disc.zero_like() } else { disc.try_sqrt()? };
    Ok(m2.clone() / (c.clone() + root))
}

fn coefficients<S: Scalar>(p0: &S, m2: &S, params: &DeformationParams, g00: f64) -> Result<Coefficients<S>> {
    let c = params.c_of(m2);
    let shifted_energy = p0.clone() + c.clone();
    if !(shifted_energy.value() > 0.0) {
        return Err(Error::MapDomain(DomainCondition::ShiftedEnergy));
    }
    let a = root_a(m2, &c, g00).map_err(|_| Error::MapDomain(DomainCondition::Discriminant))?;
    let denominator = c.clone() - a.clone() * g00;
    if !(denominator.value() > 0.0) || !a.value().is_finite() {
        return Err(Error::MapDomain(DomainCondition::Denominator));
    }
    Ok(Coefficients { a, c, denominator, shifted_energy })
}

/// `A = M² / (C + √(C² − g00 M²))`, the root of `g00 A² − 2AC + M² = 0`
/// continuous at `g00 = 0`.
pub fn solve_a(m2: f64, c: f64, g00: f64) -> Result<f64> {
    root_a(&m2, &c, g00)
}

pub fn witness(p: &[f64], params: &DeformationParams, metric: &Metric) -> Result<MapDomainWitness> {
    let m2 = metric.mass_squared(p)?;
    let k = coefficients(&p[0], &m2, params, metric.g00())?;
    Ok(MapDomainWitness {
        m2,
        c: k.c,
        a: k.a,
        denominator: k.denominator,
        shifted_energy: k.shifted_energy,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fgh {
    pub f: f64,
    pub g: f64,
    pub h: f64,
}

fn fgh_generic<S: Scalar>(p0: &S, m2: &S, params: &DeformationParams, g00: f64) -> Result<[S; 3]> {
    let kappa = params.kappa;
    let k = coefficients(p0, m2, params, g00)?;
    let f = kappa_over(k.shifted_energy.clone(), kappa);
    let h = f.clone() * k.a;
    let g = (k.shifted_energy / k.denominator).try_ln()? * kappa;
    Ok([f, g, h])
}

/// `κ / x`
fn kappa_over<S: Scalar>(x: S, kappa: f64) -> S {
    x.constant_like(kappa) / x
}

/// `f = κ/(P_0 + C)`, `h = κA/(P_0 + C)`, `g = κ ln((P_0 + C)/(C − g00 A))`.
pub fn fgh(p0: f64, m2: f64, params: &DeformationParams, metric: &Metric) -> Result<Fgh> {
    let [f, g, h] = fgh_generic(&p0, &m2, params, metric.g00())?;
    Ok(Fgh { f, g, h })
}

/// `P ↦ P̃`, generic over the scalar type so it can be differentiated.
pub fn forward<S: Scalar>(p: &[S], params: &DeformationParams, metric: &Metric) -> Result<Vec<S>> {
    let m2 = metric.mass_squared(p)?;
    let kappa = params.kappa;
    let k = coefficients(&p[0], &m2, params, metric.g00())?;
    let mut out = Vec::with_capacity(p.len());
    out.push((k.shifted_energy.clone() / k.denominator).try_ln()? * kappa);
    let scale = kappa_over(k.shifted_energy, kappa);
    for (i, pi) in p.iter().enumerate().skip(1) {
        let gi0 = metric.lower(i, 0);
        let numerator = if gi0 == 0.0 { pi.clone() } else { pi.clone() + k.a.clone() * gi0 };
        out.push(numerator * scale.clone());
    }
    Ok(out)
}

/// `P̃ ↦ P`, with `A` and `C` evaluated at the supplied classical `M²`.
pub fn inverse(pt: &[f64], params: &DeformationParams, metric: &Metric, m2: f64) -> Result<Vec<f64>> {
    metric.check_dim(pt.len())?;
    let kappa = params.kappa;
    let c = params.c_of(&m2);
    let a = solve_a(m2, c, metric.g00())?;
    let grown = (c - metric.g00() * a) * (pt[0] / kappa).exp();
    let mut out = Vec::with_capacity(pt.len());
    out.push(grown - c);
    for (i, &q) in pt.iter().enumerate().skip(1) {
        out.push(grown / kappa * q - metric.lower(i, 0) * a);
    }
    Ok(out)
}

/// The `g00 = 0`, `C = κ` specialization:
/// `P̃_0 = κ ln((P_0 + κ)/κ)`, `P̃_i = κ P_i/(P_0 + κ) + M² g_{i0}/(2(P_0 + κ))`.
pub fn weyl_forward(p: &[f64], kappa: f64, metric: &Metric) -> Result<Vec<f64>> {
    if !metric.is_null_time() {
        return Err(Error::WeylRequiresNullTime(metric.g00()));
    }
    if !(kappa > 0.0 && kappa.is_finite()) {
        return Err(Error::InvalidKappa(kappa));
    }
    let m2 = metric.mass_squared(p)?;
    let shifted = p[0] + kappa;
    if !(shifted > 0.0) {
        return Err(Error::MapDomain(DomainCondition::ShiftedEnergy));
    }
    let mut out = Vec::with_capacity(p.len());
    out.push((shifted / kappa).ln() * kappa);
    // Evaluated as κ(P_i + g_{i0} M²/2κ)/(P_0 + κ), in the same operation order as
    // the general map, so the two agree to the last bit.
    let scale = kappa / shifted;
    let a = m2 / (kappa + kappa);
    for (i, &pi) in p.iter().enumerate().skip(1) {
        let gi0 = metric.lower(i, 0);
        let numerator = if gi0 == 0.0 { pi } else { pi + a * gi0 };
        out.push(numerator * scale);
    }
    Ok(out)
}

/// `DΦ(p)` with rows indexed by the deformed component.
pub fn forward_jacobian(p: &[f64], params: &DeformationParams, metric: &Metric) -> Result<Vec<Vec<f64>>> {
    jacobian(|jets| forward(jets, params, metric), p)
}

/// `‖DΦ(p) X_classical(p) − X_deformed(Φ(p))‖_∞`.
pub fn intertwining_residual(
    generator: Generator,
    p: &[f64],
    params: &DeformationParams,
    metric: &Metric,
) -> Result<f64> {
    let mapped = forward(&Jet::variables(p), params, metric)?;
    let image: Vec<f64> = mapped.iter().map(Scalar::value).collect();
    let classical = classical_field(generator, metric)?.eval(p)?;
    let deformed = deformed_field(generator, metric, params.kappa)?.eval(&image)?;
    Ok(mapped
        .iter()
        .zip(&deformed)
        .map(|(row, d)| {
            let pushed: f64 = classical.iter().enumerate().map(|(s, x)| row.grad(s) * x).sum();
            (pushed - d).abs()
        })
        .fold(0.0, f64::max))
}

/// `f, g, h` as jets in the single variable `P_0` at fixed `M²`.
pub fn fgh_jets(p0: f64, m2: f64, params: &DeformationParams, g00: f64) -> Result<[Jet; 3]> {
    let p0_jet = Jet::variable(1, 0, p0);
    let m2_jet = Jet::constant(1, m2);
    fgh_generic(&p0_jet, &m2_jet, params, g00)
}

/// LHS − RHS of the ten first-order equations for `f, g, h` (primes are
/// `∂/∂P_0`), in their printed order.
pub fn ode_residuals_of(fgh: &[Jet; 3], p0: f64, m2: f64, kappa: f64, g00: f64) -> [f64; 10] {
    let (f, g, h) = (fgh[0].value(), fgh[1].value(), fgh[2].value());
    let (df, dg, dh) = (fgh[0].grad(0), fgh[1].grad(0), fgh[2].grad(0));
    let e = (-g / kappa).exp();
    let k = kappa;
    [
        dg * p0 - (k * (1.0 - e) - g00 * h),
        dg - f,
        f * p0 - (k * (1.0 - e) - g00 * h),
        df * p0 - (f * h * g00 / k + (e - 1.0) * f),
        df + f * f / k,
        f * h / k + dh,
        f * p0
            - (0.5 * k * (1.0 - e * e) - g00 * h * e - g00 * h * h / (2.0 * k)
                + p0 * p0 * f * f / (2.0 * k)),
        f - (e * f + g00 * f * h / k + p0 * f * f / k),
        dh * p0 - (h * (e - 1.0) + g00 * h * h / k),
        h * e - (m2 * f * f / (2.0 * k) - g00 * h * h / (2.0 * k)),
    ]
}

pub fn ode_residuals(p0: f64, m2: f64, params: &DeformationParams, metric: &Metric) -> Result<[f64; 10]> {
    let g00 = metric.g00();
    let jets = fgh_jets(p0, m2, params, g00)?;
    Ok(ode_residuals_of(&jets, p0, m2, params.kappa, g00))
}
