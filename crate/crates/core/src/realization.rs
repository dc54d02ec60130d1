//! Lorentz, boost and dilatation generators realized as vector fields on
//! momentum space, in the classical and in the κ-deformed basis.
//!
//! A quantum generator is `i` times a real vector field `X = X_ρ ∂/∂p_ρ`, so a
//! commutator `[M_A, M_B] = i f_AB^C M_C` becomes the real bracket
//! `[X_A, X_B] = f_AB^C X_C`, and `[M, P_μ] = i R` becomes `X(p_μ) = R`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::{linear_combination, Jet, Scalar};
use crate::metric::Metric;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Generator {
    /// `M^{ij}` with spatial `i, j`.
    Rotation(usize, usize),
    /// `M^{i0}`
    Boost(usize),
    Dilatation,
}

impl Generator {
    /// The contravariant index pair `(μ, ν)` of `M^{μν}`, `None` for `D`.
    pub fn lorentz_indices(self) -> Option<(usize, usize)> {
        match self {
            Generator::Rotation(i, j) => Some((i, j)),
            Generator::Boost(i) => Some((i, 0)),
            Generator::Dilatation => None,
        }
    }

    pub fn is_lorentz(self) -> bool {
        !matches!(self, Generator::Dilatation)
    }

    fn validate(self, n: usize) -> Result<()> {
        let check = |index: usize| {
            if (1..n).contains(&index) {
                Ok(())
            } else {
                Err(Error::IndexOutOfRange { index, max: n - 1 })
            }
        };
        match self {
            Generator::Rotation(i, j) => check(i).and(check(j)),
            Generator::Boost(i) => check(i),
            Generator::Dilatation => Ok(()),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Rotation(i, j) => write!(f, "M{i}{j}"),
            Generator::Boost(i) => write!(f, "M{i}0"),
            Generator::Dilatation => write!(f, "D"),
        }
    }
}

/// Rotations `(i, j)` with `i < j`, then boosts.
pub fn lorentz_basis(n: usize) -> Vec<Generator> {
    let mut basis = Vec::new();
    for i in 1..n {
        for j in i + 1..n {
            basis.push(Generator::Rotation(i, j));
        }
    }
    basis.extend((1..n).map(Generator::Boost));
    basis
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Basis {
    Classical,
    Deformed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    generator: Generator,
    /// `None` for the classical basis.
    kappa: Option<f64>,
    metric: Metric,
}

/// The undeformed action: `X^{μν}_ρ = δ^ν_ρ p^μ − δ^μ_ρ p^ν`, `D_ρ = p_ρ`.
pub fn classical_field(generator: Generator, metric: &Metric) -> Result<VectorField> {
    generator.validate(metric.dim())?;
    Ok(VectorField { generator, kappa: None, metric: metric.clone() })
}

/// The κ-deformed action on momenta.
pub fn deformed_field(generator: Generator, metric: &Metric, kappa: f64) -> Result<VectorField> {
    generator.validate(metric.dim())?;
    if !(kappa > 0.0 && kappa.is_finite()) {
        return Err(Error::InvalidKappa(kappa));
    }
    if generator == Generator::Dilatation && !metric.is_null_time() {
        return Err(Error::WeylRequiresNullTime(metric.g00()));
    }
    Ok(VectorField { generator, kappa: Some(kappa), metric: metric.clone() })
}

pub fn field(generator: Generator, basis: Basis, metric: &Metric, kappa: f64) -> Result<VectorField> {
    match basis {
        Basis::Classical => classical_field(generator, metric),
        Basis::Deformed => deformed_field(generator, metric, kappa),
    }
}

impl VectorField {
    pub fn generator(&self) -> Generator {
        self.generator
    }

    pub fn basis(&self) -> Basis {
        match self.kappa {
            None => Basis::Classical,
            Some(_) => Basis::Deformed,
        }
    }

    pub fn kappa(&self) -> Option<f64> {
        self.kappa
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    /// Components `X_ρ(p)`.
    pub fn eval<S: Scalar>(&self, p: &[S]) -> Result<Vec<S>> {
        self.metric.check_dim(p.len())?;
        Ok(match (self.generator, self.kappa) {
            (Generator::Dilatation, None) => p.to_vec(),
            (Generator::Dilatation, Some(kappa)) => self.deformed_dilatation(p, kappa),
            (Generator::Rotation(i, j), Some(kappa)) => self.deformed_rotation(i, j, p, kappa),
            (Generator::Boost(i), Some(kappa)) => self.deformed_boost(i, p, kappa),
            (generator, None) => {
                let (mu, nu) = generator.lorentz_indices().expect("lorentz generator");
                self.classical_lorentz(mu, nu, p)
            }
        })
    }

    /// Values and first two derivatives of every component at `at`.
    pub fn jets(&self, at: &[f64]) -> Result<Vec<Jet>> {
        self.eval(&Jet::variables(at))
    }

    /// `X(f) = X_ρ ∂_ρ f` at the jet's base point `at`.
    pub fn directional_derivative(&self, f: &Jet, at: &[f64]) -> Result<f64> {
        let x = self.eval(at)?;
        Ok(x.iter().enumerate().map(|(rho, xr)| xr * f.grad(rho)).sum())
    }

    fn classical_lorentz<S: Scalar>(&self, mu: usize, nu: usize, p: &[S]) -> Vec<S> {
        let mut out = vec![p[0].zero_like(); p.len()];
        if mu == nu {
            return out;
        }
        let up = self.metric.raise(p);
        out[nu] = up[mu].clone();
        out[mu] = -up[nu].clone();
        out
    }

    fn deformed_rotation<S: Scalar>(&self, i: usize, j: usize, p: &[S], kappa: f64) -> Vec<S> {
        let n = p.len();
        let g = &self.metric;
        let mut out = vec![p[0].zero_like(); n];
        if i == j {
            return out;
        }
        let one_minus = -exp_minus(&p[0], kappa) + 1.0;
        let delta = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
        for (k, slot) in out.iter_mut().enumerate().skip(1) {
            let c = kappa * (delta(j, k) * g.upper(0, i) - delta(i, k) * g.upper(0, j));
            let mut v = linear_combination(
                spatial(n).map(|s| delta(j, k) * g.upper(i, s) - delta(i, k) * g.upper(j, s)),
                &p[1..],
            );
            if c != 0.0 {
                v = v + one_minus.clone() * c;
            }
            *slot = v;
        }
        out
    }

    fn deformed_boost<S: Scalar>(&self, i: usize, p: &[S], kappa: f64) -> Vec<S> {
        let n = p.len();
        let g = &self.metric;
        let spatial_p = &p[1..];
        let em = exp_minus(&p[0], kappa);
        let one_minus = -em.clone() + 1.0;
        let one_minus_2 = -em.square() + 1.0;
        let g0s_p = g.time_space(p);
        let gis_p = linear_combination(spatial(n).map(|s| g.upper(i, s)), spatial_p);
        let grs_pp = g.spatial_form(p);

        let mut out = Vec::with_capacity(n);
        out.push(one_minus.clone() * (kappa * g.upper(i, 0)) + gis_p.clone());
        for k in 1..n {
            // g^{0i} p_k (e^{-p0/κ} - 1) - (1/κ) g^{is} p_s p_k
            let mut v = -(one_minus.clone() * g.upper(0, i) + gis_p.clone() / kappa) * p[k].clone();
            if k == i {
                v = v - one_minus_2.clone() * (0.5 * kappa * g.upper(0, 0)) - g0s_p.clone() * em.clone()
                    + grs_pp.clone() / (2.0 * kappa);
            }
            out.push(v);
        }
        out
    }

    fn deformed_dilatation<S: Scalar>(&self, p: &[S], kappa: f64) -> Vec<S> {
        let n = p.len();
        let g = &self.metric;
        let em = exp_minus(&p[0], kappa);
        let one_minus = -em.clone() + 1.0;
        let g0s_p = g.time_space(p);
        let grs_pp = g.spatial_form(p);

        let mut out = Vec::with_capacity(n);
        out.push(one_minus.clone() * kappa);
        for i in 1..n {
            let g0i = g.lower(0, i);
            let v = p[i].clone() * em.clone()
                + g0s_p.clone() * one_minus.clone() * g0i
                + grs_pp.clone() * (g0i / (2.0 * kappa))
                + one_minus.square() * (0.5 * kappa * g.upper(0, 0) * g0i);
            out.push(v);
        }
        out
    }
}

fn spatial(n: usize) -> impl Iterator<Item = usize> {
    1..n
}

fn exp_minus<S: Scalar>(p0: &S, kappa: f64) -> S {
    (p0.clone() * (-1.0 / kappa)).exp()
}


/// Bracket `[X, Y]_ρ = X_σ ∂_σ Y_ρ − Y_σ ∂_σ X_ρ` of fields given as jets.
///
/// The result is exact through first order; its Hessian is not meaningful.
pub fn bracket_jets(x: &[Jet], y: &[Jet]) -> Vec<Jet> {
    let n = x.len();
    (0..n)
        .map(|rho| {
            let mut acc = Jet::constant(n, 0.0);
            for sigma in 0..n {
                acc = acc + x[sigma].clone() * y[rho].derivative(sigma)
                    - y[sigma].clone() * x[rho].derivative(sigma);
            }
            acc
        })
        .collect()
}

fn bracket_values(x: &[Jet], y: &[Jet]) -> Vec<f64> {
    let n = x.len();
    (0..n)
        .map(|rho| {
            (0..n)
                .map(|s| x[s].value() * y[rho].grad(s) - y[s].value() * x[rho].grad(s))
                .sum()
        })
        .collect()
}

pub fn lie_bracket(x: &VectorField, y: &VectorField, at: &[f64]) -> Result<Vec<f64>> {
    y.metric.check_dim(x.metric.dim())?;
    Ok(bracket_values(&x.jets(at)?, &y.jets(at)?))
}

/// Max-norm of `[[A,B],C] + [[B,C],A] + [[C,A],B]` for fields given as jets.
pub fn jacobi_residual_from_jets(a: &[Jet], b: &[Jet], c: &[Jet]) -> f64 {
    let ab = bracket_jets(a, b);
    let bc = bracket_jets(b, c);
    let ca = bracket_jets(c, a);
    let t1 = bracket_values(&ab, c);
    let t2 = bracket_values(&bc, a);
    let t3 = bracket_values(&ca, b);
    (0..a.len()).map(|r| (t1[r] + t2[r] + t3[r]).abs()).fold(0.0, f64::max)
}

pub fn jacobi_residual(a: &VectorField, b: &VectorField, c: &VectorField, at: &[f64]) -> Result<f64> {
    Ok(jacobi_residual_from_jets(&a.jets(at)?, &b.jets(at)?, &c.jets(at)?))
}

/// Dense structure constants `[X_A, X_B] = f_AB^C X_C` over a generator basis.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureTable {
    basis: Vec<Generator>,
    coeffs: Vec<f64>,
}

impl StructureTable {
    /// Constants of the Lorentz algebra for `metric`, read off
    /// `[M^{μν}, M^{αβ}] = i(g^{μβ} M^{να} − g^{νβ} M^{μα} + g^{να} M^{μβ} − g^{μα} M^{νβ})`.
    /// With `include_dilatation`, `D` is appended and commutes with everything.
    pub fn new(metric: &Metric, include_dilatation: bool) -> Self {
        let mut basis = lorentz_basis(metric.dim());
        if include_dilatation {
            basis.push(Generator::Dilatation);
        }
        let d = basis.len();
        let mut coeffs = vec![0.0; d * d * d];
        let locate = |a: usize, b: usize| -> Option<(usize, f64)> {
            let (generator, sign) = match (a, b) {
                _ if a == b => return None,
                (0, b) => (Generator::Boost(b), -1.0),
                (a, 0) => (Generator::Boost(a), 1.0),
                (a, b) if a < b => (Generator::Rotation(a, b), 1.0),
                (a, b) => (Generator::Rotation(b, a), -1.0),
            };
            Some((basis.iter().position(|&g| g == generator)?, sign))
        };
        for (ia, ga) in basis.iter().enumerate() {
            for (ib, gb) in basis.iter().enumerate() {
                let (Some((mu, nu)), Some((al, be))) = (ga.lorentz_indices(), gb.lorentz_indices()) else {
                    continue;
                };
                let terms = [
                    (metric.upper(mu, be), nu, al),
                    (-metric.upper(nu, be), mu, al),
                    (metric.upper(nu, al), mu, be),
                    (-metric.upper(mu, al), nu, be),
                ];
                for (g, x, y) in terms {
                    if g == 0.0 {
                        continue;
                    }
                    if let Some((ic, sign)) = locate(x, y) {
                        coeffs[(ia * d + ib) * d + ic] += sign * g;
                    }
                }
            }
        }
        StructureTable { basis, coeffs }
    }

    pub fn basis(&self) -> &[Generator] {
        &self.basis
    }

    pub fn coefficient(&self, a: usize, b: usize, c: usize) -> f64 {
        let d = self.basis.len();
        self.coeffs[(a * d + b) * d + c]
    }
}

/// A full set of realized generators together with their structure constants.
#[derive(Debug, Clone)]
pub struct GeneratorSet {
    table: StructureTable,
    fields: Vec<VectorField>,
}

/// Worst structure-constant residual found at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairResidual {
    pub residual: f64,
    pub pair: (Generator, Generator),
}

impl GeneratorSet {
    /// Lorentz generators, plus `D` when the metric has `g00 = 0`.
    pub fn new(basis: Basis, metric: &Metric, kappa: f64) -> Result<Self> {
        let table = StructureTable::new(metric, metric.is_null_time());
        let fields = table
            .basis()
            .iter()
            .map(|&g| field(g, basis, metric, kappa))
            .collect::<Result<Vec<_>>>()?;
        Ok(GeneratorSet { table, fields })
    }

    /// Replaces the field realizing `replacement.generator()`.
    pub fn with_field(mut self, replacement: VectorField) -> Self {
        if let Some(slot) = self.fields.iter_mut().find(|f| f.generator == replacement.generator) {
            *slot = replacement;
        }
        self
    }

    pub fn table(&self) -> &StructureTable {
        &self.table
    }

    pub fn fields(&self) -> &[VectorField] {
        &self.fields
    }

    /// Max over ordered pairs of `|[X_A, X_B](p) − f_AB^C X_C(p)|_∞`.
    pub fn closure_residual(&self, p: &[f64]) -> Result<PairResidual> {
        let jets = self.fields.iter().map(|f| f.jets(p)).collect::<Result<Vec<_>>>()?;
        let values: Vec<Vec<f64>> = jets.iter().map(|j| j.iter().map(Scalar::value).collect()).collect();
        let basis = self.table.basis();
        let d = basis.len();
        let mut worst = PairResidual { residual: 0.0, pair: (basis[0], basis[0]) };
        for a in 0..d {
            for b in 0..d {
                let lhs = bracket_values(&jets[a], &jets[b]);
                let mut residual: f64 = 0.0;
                for (rho, l) in lhs.iter().enumerate() {
                    let rhs: f64 = (0..d).map(|c| self.table.coefficient(a, b, c) * values[c][rho]).sum();
                    residual = residual.max((l - rhs).abs());
                }
                if residual > worst.residual || residual.is_nan() {
                    worst = PairResidual { residual, pair: (basis[a], basis[b]) };
                }
            }
        }
        Ok(worst)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClosureReport {
    pub max_residual: f64,
    pub worst_pair: Option<(Generator, Generator)>,
    pub worst_point: Option<Vec<f64>>,
}

pub fn check_closure(basis: Basis, metric: &Metric, kappa: f64, points: &[Vec<f64>]) -> Result<ClosureReport> {
    closure_over(&GeneratorSet::new(basis, metric, kappa)?, points)
}

pub fn closure_over(set: &GeneratorSet, points: &[Vec<f64>]) -> Result<ClosureReport> {
    let mut report = ClosureReport { max_residual: 0.0, worst_pair: None, worst_point: None };
    for p in points {
        let r = set.closure_residual(p)?;
        if report.worst_point.is_none() || r.residual > report.max_residual || r.residual.is_nan() {
            report = ClosureReport {
                max_residual: r.residual,
                worst_pair: Some(r.pair),
                worst_point: Some(p.clone()),
            };
        }
    }
    Ok(report)
}
