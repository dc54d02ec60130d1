use rayon::prelude::*;

use crate::casimir::{casimir_invariance_residual, casimir_relation_residual, recover_m2};
use crate::coproduct::{antipode, coassociativity_gap, cocommutativity_gap, coproduct_nonintertwining_gap, deformed_add};
use crate::deformation::{forward, intertwining_residual, inverse, ode_residuals, weyl_forward, witness, CFamily, DeformationParams};
use crate::error::Result;
use crate::metric::Metric;
use crate::realization::{deformed_field, lorentz_basis, Basis, Generator, GeneratorSet};
use crate::rng::SplitMix64;

use super::config::{Plan, Suite, SuiteConfig};
use super::limits::{limit_scan, LIMIT_KAPPAS, RATIO_BAND};
use super::report::CheckReport;
use super::sampling::{sample_in_box, Sample};
use super::ExecutionMode;

const ODE_TOL: f64 = 1e-10;
const ROUNDTRIP_TOL: f64 = 1e-10;
const COALGEBRA_TOL: f64 = 1e-12;
const WEYL_AGREEMENT_TOL: f64 = 1e-14;
const NONINTERTWINING_FLOOR: f64 = 1e-6;

/// The dilatation control runs at fixed reference parameters: κ = 1,
/// `C = κ + 0.5 M²/κ`, unit box.
const AFFINE_CONTROL_LAMBDA: f64 = 0.5;
const AFFINE_CONTROL_FLOOR: f64 = 1e-3;
const AFFINE_CONTROL_FRACTION: f64 = 0.9;

const COPRODUCT_STREAM: u64 = 0x636f_7072_6f64_7563;
const CONTROL_STREAM: u64 = 0x6166_6669_6e65_6374;

pub(super) struct Context<'a> {
    pub cfg: &'a SuiteConfig,
    pub plan: &'a Plan,
    pub sample: Option<&'a Sample>,
    pub mode: ExecutionMode,
}

/// Evaluates `f` at every point; the first error in point order wins,
/// whatever the schedule.
fn per_point<T, F>(mode: ExecutionMode, points: &[Vec<f64>], f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&[f64]) -> Result<T> + Sync,
{
    let results: Vec<Result<T>> = match mode {
        ExecutionMode::Serial => points.iter().map(|p| f(p)).collect(),
        ExecutionMode::Parallel => points.par_iter().map(|p| f(p)).collect(),
    };
    results.into_iter().collect()
}

fn sup(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, |a: f64, v| if v.is_nan() || a.is_nan() { f64::NAN } else { a.max(v.abs()) })
}

fn sup_distance(a: &[f64], b: &[f64]) -> f64 {
    sup(a.iter().zip(b).map(|(x, y)| x - y))
}

/// `max_i |a_i − b_i| / max(1, |b_i|)`
fn relative_distance(a: &[f64], b: &[f64]) -> f64 {
    sup(a.iter().zip(b).map(|(x, y)| (x - y) / y.abs().max(1.0)))
}

impl Context<'_> {
    fn metric(&self) -> &Metric {
        &self.plan.metric
    }

    fn params(&self) -> &DeformationParams {
        &self.plan.params
    }

    fn kappa(&self) -> f64 {
        self.plan.params.kappa()
    }

    fn tol(&self, pinned: f64) -> f64 {
        self.cfg.tolerance.min(pinned)
    }

    fn sample(&self) -> &Sample {
        self.sample.expect("sample drawn for sampling suites")
    }

    fn identity<F>(&self, name: &str, f: F, tolerance: f64) -> Result<CheckReport>
    where
        F: Fn(&[f64]) -> Result<f64> + Sync,
    {
        let s = self.sample();
        let residuals = per_point(self.mode, &s.points, f)?;
        Ok(CheckReport::identity(name, s.attempted, &residuals, &s.points, tolerance))
    }

    /// Appends the distance of the worst point from the singular edges of the
    /// map, where `P̃` and the fields grow without bound.
    fn with_edge_distance(&self, report: CheckReport) -> CheckReport {
        let Ok(w) = witness(&report.worst_point, self.params(), self.metric()) else {
            return report;
        };
        let edge = format!("worst point has P0 + C = {:.3e}, C - g00*A = {:.3e}", w.shifted_energy, w.denominator);
        let detail = match &report.detail {
            Some(d) => format!("{d}; {edge}"),
            None => edge,
        };
        report.with_detail(detail)
    }

    pub fn run(&self, suite: Suite) -> Result<Vec<CheckReport>> {
        match suite {
            Suite::Closure => self.closure(),
            Suite::Ode => self.ode(),
            Suite::Intertwine => self.intertwine(),
            Suite::Roundtrip => self.roundtrip(),
            Suite::Casimir => self.casimir(),
            Suite::Coproduct => self.coproduct(),
            Suite::Limit => self.limit(),
            Suite::Weyl => self.weyl(),
        }
    }

    fn closure(&self) -> Result<Vec<CheckReport>> {
        let mut out = Vec::new();
        for (name, basis) in [("closure.classical", Basis::Classical), ("closure.deformed", Basis::Deformed)] {
            let mut set = GeneratorSet::new(basis, self.metric(), self.kappa())?;
            let mut detail = None;
            if let (Basis::Deformed, Some(delta)) = (basis, self.cfg.perturb_kappa) {
                let kappa = self.kappa() * (1.0 + delta);
                set = set.with_field(deformed_field(Generator::Boost(1), self.metric(), kappa)?);
                detail = Some(format!("M10 realized with kappa = {kappa}"));
            }
            let s = self.sample();
            let residuals = per_point(self.mode, &s.points, |p| set.closure_residual(p))?;
            let values: Vec<f64> = residuals.iter().map(|r| r.residual).collect();
            let mut report = CheckReport::identity(name, s.attempted, &values, &s.points, self.cfg.tolerance);
            let (_, at) = super::report::worst(&values);
            if let Some(r) = residuals.get(at) {
                let pair = format!("worst pair [{}, {}]", r.pair.0, r.pair.1);
                detail = Some(match detail {
                    Some(d) => format!("{d}; {pair}"),
                    None => pair,
                });
            }
            if let Some(d) = detail {
                report = report.with_detail(d);
            }
            out.push(report);
        }
        Ok(out)
    }

    fn ode(&self) -> Result<Vec<CheckReport>> {
        let report = self.identity(
            "ode",
            |p| {
                let m2 = self.metric().mass_squared(p)?;
                Ok(sup(ode_residuals(p[0], m2, self.params(), self.metric())?))
            },
            self.tol(ODE_TOL),
        )?;
        Ok(vec![self.with_edge_distance(report)])
    }

    fn intertwine(&self) -> Result<Vec<CheckReport>> {
        let gens = lorentz_basis(self.metric().dim());
        let report = self.identity(
            "intertwine.lorentz",
            |p| {
                let mut worst: f64 = 0.0;
                for &g in &gens {
                    worst = sup([worst, intertwining_residual(g, p, self.params(), self.metric())?]);
                }
                Ok(worst)
            },
            self.cfg.tolerance,
        )?;
        Ok(vec![self.with_edge_distance(report.with_detail(format!("C family {}", self.params().c_family())))])
    }

    fn roundtrip(&self) -> Result<Vec<CheckReport>> {
        let (params, metric) = (self.params(), self.metric());
        let tol = self.tol(ROUNDTRIP_TOL);
        let back = self.identity(
            "roundtrip.inverse_forward",
            |p| {
                let m2 = metric.mass_squared(p)?;
                Ok(relative_distance(&inverse(&forward(p, params, metric)?, params, metric, m2)?, p))
            },
            tol,
        )?;
        // The recovered M² can fail to exist; that is a failed point, not an aborted run.
        let there = self.identity(
            "roundtrip.forward_inverse",
            |p| {
                let pt = forward(p, params, metric)?;
                let again = recover_m2(&pt, params, metric)
                    .and_then(|m2| inverse(&pt, params, metric, m2))
                    .and_then(|q| forward(&q, params, metric));
                Ok(again.map_or(f64::INFINITY, |x| relative_distance(&x, &pt)))
            },
            tol,
        )?;
        Ok(vec![back, there])
    }

    fn casimir(&self) -> Result<Vec<CheckReport>> {
        let (params, metric, kappa) = (self.params(), self.metric(), self.kappa());
        let s = self.sample();
        let relations = per_point(self.mode, &s.points, |p| casimir_relation_residual(p, params, metric))?;
        let r9: Vec<f64> = relations.iter().map(|r| r.r9.abs()).collect();
        let mut r11 = Vec::new();
        let mut r11_points = Vec::new();
        for (r, p) in relations.iter().zip(&s.points) {
            if let Some(v) = r.r11 {
                r11.push(v.abs());
                r11_points.push(p.clone());
            }
        }
        let skipped = s.points.len() - r11.len();
        let gens = lorentz_basis(metric.dim());
        let invariance = self.identity(
            "casimir.invariance",
            |p| {
                let pt = forward(p, params, metric)?;
                let mut worst: f64 = 0.0;
                for &g in &gens {
                    worst = sup([worst, casimir_invariance_residual(g, &pt, metric, kappa)?]);
                }
                Ok(worst)
            },
            self.cfg.tolerance,
        )?;
        Ok(vec![
            CheckReport::identity("casimir.r9", s.attempted, &r9, &s.points, self.cfg.tolerance),
            CheckReport::identity("casimir.r11", s.attempted, &r11, &r11_points, self.cfg.tolerance)
                .with_detail(format!("{skipped} degenerate points skipped")),
            self.with_edge_distance(invariance),
        ])
    }

    fn coproduct(&self) -> Result<Vec<CheckReport>> {
        let n = self.metric().dim();
        let kappa = self.kappa();
        let tol = self.tol(COALGEBRA_TOL);
        let mut rng = SplitMix64::new(self.cfg.seed ^ COPRODUCT_STREAM);
        let mut draw = || -> Vec<f64> { (0..n).map(|_| rng.symmetric(self.cfg.momentum_box)).collect() };
        let triples: Vec<Vec<f64>> = (0..self.cfg.samples).map(|_| [draw(), draw(), draw()].concat()).collect();

        let assoc = per_point(self.mode, &triples, |t| coassociativity_gap(&t[..n], &t[n..2 * n], &t[2 * n..], kappa))?;
        let anti = per_point(self.mode, &triples, |t| {
            let p = &t[..n];
            let s = antipode(p, kappa)?;
            let zero = vec![0.0; n];
            Ok(sup([
                sup_distance(&deformed_add(p, &s, kappa)?, &zero),
                sup_distance(&deformed_add(&s, p, kappa)?, &zero),
                sup_distance(&antipode(&s, kappa)?, p),
            ]))
        })?;

        let mut p = vec![0.0; n];
        p[1] = 1.0;
        let mut q = vec![0.0; n];
        q[0] = 1.0;
        let expected = 1.0 - (-1.0f64).exp();
        let cocommutative = (cocommutativity_gap(&p, &q, 1.0)? - expected).abs();

        // The canonical probe at κ = 1, scaled with κ so that it stays inside
        // the domain (the map is homogeneous of degree one in (P, κ)).
        let mut p = vec![0.0; n];
        let mut q = vec![0.0; n];
        (p[0], p[1], q[0], q[1]) = (0.5 * kappa, 0.2 * kappa, 0.5 * kappa, -0.1 * kappa);
        let gap = coproduct_nonintertwining_gap(&p, &q, self.params(), self.metric())?;

        Ok(vec![
            CheckReport::identity("coproduct.coassociativity", triples.len(), &assoc, &triples, tol),
            CheckReport::identity("coproduct.antipode", triples.len(), &anti, &triples, tol),
            CheckReport::identity("coproduct.cocommutativity_probe", 1, &[cocommutative], &[[p.clone(), q.clone()].concat()], tol)
                .with_detail(format!("gap - (1 - 1/e) at kappa = 1, expected gap {expected}")),
            CheckReport::probe_control("coproduct.nonintertwining_probe", gap, [p, q].concat(), NONINTERTWINING_FLOOR),
        ])
    }

    fn limit(&self) -> Result<Vec<CheckReport>> {
        let probe = super::limits::limit_probe(self.metric().dim());
        let band = RATIO_BAND.1 - 2.0;
        Ok(limit_scan(self.metric(), &LIMIT_KAPPAS)?
            .into_iter()
            .map(|series| {
                let ratios = series.ratios.iter().map(|r| format!("{r:.4}")).collect::<Vec<_>>().join(", ");
                let mut report = CheckReport::identity(
                    &format!("limit.{}", series.name),
                    1,
                    &[series.max_deviation()],
                    &[probe.clone()],
                    band,
                );
                report.pass = series.within_band();
                report.with_detail(format!("|ratio - 2|; ratios {ratios}"))
            })
            .collect())
    }

    fn weyl(&self) -> Result<Vec<CheckReport>> {
        let metric = self.metric();
        let kappa = self.kappa();
        let kappa_params = DeformationParams::kappa_family(kappa)?;
        let s = sample_in_box(metric, &kappa_params, self.cfg.momentum_box, self.cfg.samples, self.cfg.seed)?;
        let agreement = per_point(self.mode, &s.points, |p| {
            Ok(sup_distance(&weyl_forward(p, kappa, metric)?, &forward(p, &kappa_params, metric)?))
        })?;

        let dilatation = self.identity(
            "weyl.dilatation_intertwine",
            |p| intertwining_residual(Generator::Dilatation, p, self.params(), metric),
            self.cfg.tolerance,
        )?;

        let control_params = DeformationParams::new(1.0, CFamily::Affine(AFFINE_CONTROL_LAMBDA))?;
        let c = sample_in_box(metric, &control_params, 1.0, self.cfg.samples, self.cfg.seed ^ CONTROL_STREAM)?;
        let control = per_point(self.mode, &c.points, |p| {
            intertwining_residual(Generator::Dilatation, p, &control_params, metric)
        })?;

        Ok(vec![
            CheckReport::identity("weyl.agreement", s.attempted, &agreement, &s.points, self.tol(WEYL_AGREEMENT_TOL)),
            dilatation.with_detail(format!("C family {}", self.params().c_family())),
            CheckReport::fraction_control(
                "weyl.affine_control",
                c.attempted,
                &control,
                &c.points,
                AFFINE_CONTROL_FLOOR,
                AFFINE_CONTROL_FRACTION,
            )
            .with_detail(format!("dilatation with C family affine:{AFFINE_CONTROL_LAMBDA}, kappa = 1")),
        ])
    }
}
