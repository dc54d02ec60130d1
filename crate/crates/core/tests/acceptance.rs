//! Acceptance gate: one line per criterion, non-zero exit if any fails.
//!
//! Runs under `cargo test` as a plain binary so the lines are always shown.

use std::process::ExitCode;
use std::time::Instant;

use kappa_core::casimir::{casimir_relation_residual, deformed_mass_squared};
use kappa_core::deformation::{ode_residuals, solve_a, weyl_forward, CFamily, DeformationParams};
use kappa_core::harness::{
    run_suites, run_suites_with, sample_in_box, CheckReport, ExecutionMode, MetricSpec, Suite, SuiteConfig,
    VerificationReport,
};
use kappa_core::realization::{deformed_field, lie_bracket, lorentz_basis, Generator};
use kappa_core::rng::SplitMix64;
use kappa_core::{jet_eval, Jet, Metric, Scalar};

const PRESETS: [&str; 3] = ["minkowski4", "lightcone2", "offdiag5"];
const KAPPAS: [f64; 3] = [0.5, 1.0, 5.0];
const SEED: u64 = 42;

/// Outcome of one criterion: a verdict plus the lines explaining it.
struct Verdict {
    pass: bool,
    notes: Vec<String>,
}

impl Verdict {
    fn new() -> Self {
        Verdict { pass: true, notes: Vec::new() }
    }

    fn require(&mut self, ok: bool, note: String) {
        if !ok {
            self.pass = false;
        }
        let mark = if ok { "ok  " } else { "FAIL" };
        self.notes.push(format!("{mark} {note}"));
    }

    fn check(&mut self, label: &str, c: &CheckReport) {
        let bound = match (c.tolerance, c.floor, c.fraction_above) {
            (Some(t), _, _) => format!("max {:.3e}, tolerance {t:e}", c.max_residual),
            (_, Some(f), Some(frac)) => format!("{:.1}% above {f:e}", 100.0 * frac),
            (_, Some(f), None) => format!("{:.3e} >= {f:e}", c.max_residual),
            _ => String::new(),
        };
        let mut note = format!("{label} {}: {bound} (n={})", c.name, c.accepted);
        if !c.pass {
            if let Some(d) = &c.detail {
                note.push_str(&format!("; {d}"));
            }
            note.push_str(&format!("; at {:?}", c.worst_point));
        }
        self.require(c.pass, note);
    }

    fn report(&mut self, label: &str, report: &VerificationReport) {
        for c in &report.suites {
            self.check(label, c);
        }
    }

    fn error(&mut self, label: &str, e: impl std::fmt::Display) {
        self.require(false, format!("{label}: error {e}"));
    }
}

fn config(metric: &str, kappa: f64, family: CFamily, suites: &[Suite]) -> SuiteConfig {
    SuiteConfig {
        metric: MetricSpec::Preset(metric.into()),
        kappa,
        c_family: family,
        seed: SEED,
        suites: Some(suites.to_vec()),
        ..Default::default()
    }
}

fn run_into(v: &mut Verdict, label: &str, cfg: &SuiteConfig) -> Option<VerificationReport> {
    match run_suites(cfg) {
        Ok(report) => {
            v.report(label, &report);
            Some(report)
        }
        Err(e) => {
            v.error(label, e);
            None
        }
    }
}

fn closure() -> Verdict {
    let mut v = Verdict::new();
    for metric in PRESETS {
        for kappa in KAPPAS {
            let label = format!("{metric} kappa={kappa}");
            run_into(&mut v, &label, &config(metric, kappa, CFamily::Kappa, &[Suite::Closure]));
        }
    }
    // Dilatation against every Lorentz field, deformed basis, spelled out.
    let lc = Metric::preset("lightcone2").unwrap();
    for kappa in KAPPAS {
        let params = DeformationParams::kappa_family(kappa).unwrap();
        let points = sample_in_box(&lc, &params, 1.0, 500, SEED).unwrap().points;
        let d = deformed_field(Generator::Dilatation, &lc, kappa).unwrap();
        let mut worst: f64 = 0.0;
        for g in lorentz_basis(2) {
            let x = deformed_field(g, &lc, kappa).unwrap();
            for p in &points {
                let b = lie_bracket(&d, &x, p).unwrap();
                worst = b.iter().fold(worst, |a, c| a.max(c.abs()));
            }
        }
        v.require(worst < 1e-9, format!("lightcone2 kappa={kappa} max |[D, M]| = {worst:.3e} < 1e-9"));
    }
    v
}

fn ode() -> Verdict {
    let mut v = Verdict::new();
    for metric in PRESETS {
        run_into(&mut v, metric, &config(metric, 1.0, CFamily::Kappa, &[Suite::Ode]));
    }
    let params = DeformationParams::kappa_family(1.0).unwrap();
    let r = ode_residuals(1.0, 0.64, &params, &Metric::minkowski(4).unwrap()).unwrap();
    let worst = r.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    v.require(worst < 1e-12, format!("hand point (P0=1, M2=0.64) max residual {worst:.3e} < 1e-12"));
    v
}

fn intertwining() -> Verdict {
    let mut v = Verdict::new();
    for metric in PRESETS {
        for family in [CFamily::Kappa, CFamily::Affine(0.5)] {
            let label = format!("{metric} C={family}");
            run_into(&mut v, &label, &config(metric, 1.0, family, &[Suite::Intertwine]));
        }
    }
    // Dilatation with C = κ and the affine negative control.
    if let Some(report) = run_into(&mut v, "lightcone2 weyl", &config("lightcone2", 1.0, CFamily::Kappa, &[Suite::Weyl])) {
        let needed = ["weyl.dilatation_intertwine", "weyl.affine_control"];
        let present = needed.iter().all(|n| report.check(n).is_some());
        v.require(present, "dilatation identity and affine control both evaluated".into());
    }
    v
}

fn inversion() -> Verdict {
    let mut v = Verdict::new();
    for metric in PRESETS {
        run_into(&mut v, metric, &config(metric, 1.0, CFamily::Kappa, &[Suite::Roundtrip]));
    }
    v
}

fn casimir() -> Verdict {
    let mut v = Verdict::new();
    for metric in PRESETS {
        for kappa in KAPPAS {
            let label = format!("{metric} kappa={kappa}");
            run_into(&mut v, &label, &config(metric, kappa, CFamily::Kappa, &[Suite::Casimir]));
        }
    }
    let m = Metric::minkowski(4).unwrap();
    let pt = [(10.0f64 / 3.0).ln(), 0.3, 0.0, 0.0];
    let m2t = deformed_mass_squared(&pt, &m, 1.0).unwrap();
    v.require((m2t - 4.0 / 3.0).abs() < 1e-12, format!("worked point M2~ = {m2t} (expect 4/3)"));
    let a = solve_a(0.64, 1.0, 1.0).unwrap();
    let lhs = a * a * (4.0 / m2t + 1.0);
    v.require((lhs - 0.64).abs() < 1e-12, format!("worked point A^2 (4 kappa^2/M2~ + g00) = {lhs} (expect 0.64)"));
    let params = DeformationParams::kappa_family(1.0).unwrap();
    let rel = casimir_relation_residual(&[1.0, 0.6, 0.0, 0.0], &params, &m).unwrap();
    v.require(rel.r9.abs() < 1e-12, format!("worked point r9 = {:.3e}", rel.r9));
    v
}

fn weyl() -> Verdict {
    let mut v = Verdict::new();
    for metric in ["lightcone2", "lightcone3"] {
        let cfg = SuiteConfig { samples: 200, ..config(metric, 1.0, CFamily::Kappa, &[Suite::Weyl]) };
        match run_suites(&cfg) {
            Ok(report) => v.check(metric, report.check("weyl.agreement").unwrap()),
            Err(e) => v.error(metric, e),
        }
    }
    let pt = weyl_forward(&[1.0, 0.5], 1.0, &Metric::preset("lightcone2").unwrap()).unwrap();
    let ok = (pt[0] - 2f64.ln()).abs() < 1e-12 && (pt[1] - 0.5).abs() < 1e-12;
    v.require(ok, format!("worked point P = (1, 0.5) -> {pt:?} (expect (ln 2, 0.5))"));
    v
}

fn coalgebra() -> Verdict {
    let mut v = Verdict::new();
    for kappa in KAPPAS {
        let label = format!("minkowski4 kappa={kappa}");
        run_into(&mut v, &label, &config("minkowski4", kappa, CFamily::Kappa, &[Suite::Coproduct]));
    }
    v
}

fn limits() -> Verdict {
    let mut v = Verdict::new();
    for metric in PRESETS {
        if let Some(report) = run_into(&mut v, metric, &config(metric, 1.0, CFamily::Kappa, &[Suite::Limit])) {
            let names: Vec<&str> = report.suites.iter().map(|c| c.name.as_str()).collect();
            let all = ["limit.map", "limit.action", "limit.casimir", "limit.composition"];
            v.require(all.iter().all(|n| names.contains(n)), format!("{metric} covers map, action, casimir and composition"));
        }
    }
    v
}

/// Small expression trees over three variables, written once against `Scalar`.
#[derive(Debug, Clone)]
enum Expr {
    Var(usize),
    Const(f64),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    /// `a / (1.5 + b²)`
    Div(Box<Expr>, Box<Expr>),
    /// `exp(a / 2)`
    Exp(Box<Expr>),
    /// `sinh(a / 2)`
    Sinh(Box<Expr>),
    /// `ln(2 + a²)`
    Ln(Box<Expr>),
    /// `sqrt(1 + a²)`
    Sqrt(Box<Expr>),
}

impl Expr {
    fn random(rng: &mut SplitMix64, depth: u32) -> Expr {
        let pick = (rng.next_u64() % 10) as u32;
        if depth == 0 || pick < 2 {
            return if rng.next_f64() < 0.75 {
                Expr::Var((rng.next_u64() % 3) as usize)
            } else {
                Expr::Const(rng.symmetric(1.5))
            };
        }
        let mut sub = || Box::new(Expr::random(rng, depth - 1));
        match pick {
            2 => Expr::Add(sub(), sub()),
            3 => Expr::Sub(sub(), sub()),
            4 => Expr::Mul(sub(), sub()),
            5 => Expr::Div(sub(), sub()),
            6 => Expr::Exp(sub()),
            7 => Expr::Sinh(sub()),
            8 => Expr::Ln(sub()),
            _ => Expr::Sqrt(sub()),
        }
    }

    fn eval<S: Scalar>(&self, x: &[S]) -> S {
        match self {
            Expr::Var(i) => x[*i].clone(),
            Expr::Const(c) => x[0].constant_like(*c),
            Expr::Add(a, b) => a.eval(x) + b.eval(x),
            Expr::Sub(a, b) => a.eval(x) - b.eval(x),
            Expr::Mul(a, b) => a.eval(x) * b.eval(x),
            Expr::Div(a, b) => a.eval(x) / (b.eval(x).square() + 1.5),
            Expr::Exp(a) => (a.eval(x) * 0.5).exp(),
            Expr::Sinh(a) => (a.eval(x) * 0.5).sinh(),
            Expr::Ln(a) => (a.eval(x).square() + 2.0).try_ln().expect("argument >= 2"),
            Expr::Sqrt(a) => (a.eval(x).square() + 1.0).try_sqrt().expect("argument >= 1"),
        }
    }
}

/// Worst relative gap between jet derivatives and central differences.
fn jet_vs_differences(f: &Expr, x: &[f64]) -> f64 {
    let jet: Jet = jet_eval(|v| Ok(f.eval(v)), x).unwrap();
    let at = |dx: &[(usize, f64)]| {
        let mut y = x.to_vec();
        for &(i, d) in dx {
            y[i] += d;
        }
        f.eval(&y)
    };
    let scale = |exact: f64| 1f64.max(exact.abs()).max(jet.value().abs());
    let (h1, h2) = (1e-5, 1e-4);
    let mut worst: f64 = 0.0;
    for i in 0..3 {
        let fd = (at(&[(i, h1)]) - at(&[(i, -h1)])) / (2.0 * h1);
        worst = worst.max((fd - jet.grad(i)).abs() / scale(jet.grad(i)));
        for j in 0..3 {
            let fd = if i == j {
                (at(&[(i, h2)]) - 2.0 * at(&[]) + at(&[(i, -h2)])) / (h2 * h2)
            } else {
                (at(&[(i, h2), (j, h2)]) - at(&[(i, h2), (j, -h2)]) - at(&[(i, -h2), (j, h2)])
                    + at(&[(i, -h2), (j, -h2)]))
                    / (4.0 * h2 * h2)
            };
            worst = worst.max((fd - jet.hess(i, j)).abs() / scale(jet.hess(i, j)));
        }
    }
    worst
}

fn infrastructure() -> Verdict {
    let mut v = Verdict::new();
    for metric in PRESETS {
        let cfg = SuiteConfig {
            metric: MetricSpec::Preset(metric.into()),
            seed: SEED,
            ..Default::default()
        };
        let runs = [
            run_suites_with(&cfg, ExecutionMode::Parallel),
            run_suites_with(&cfg, ExecutionMode::Parallel),
            run_suites_with(&cfg, ExecutionMode::Serial),
        ];
        match runs {
            [Ok(a), Ok(b), Ok(c)] => {
                v.require(a.stable_json() == b.stable_json(), format!("{metric}: repeated run is bitwise identical"));
                v.require(a.stable_json() == c.stable_json(), format!("{metric}: serial and parallel reports agree"));
            }
            _ => v.error(metric, "run failed"),
        }
    }
    let mut rng = SplitMix64::new(SEED);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let f = Expr::random(&mut rng, 4);
        let x: Vec<f64> = (0..3).map(|_| rng.symmetric(0.7)).collect();
        worst = worst.max(jet_vs_differences(&f, &x));
    }
    v.require(worst < 1e-6, format!("jets vs finite differences on 100 random functions: {worst:.3e} < 1e-6"));
    v
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdict); 9] = [
        ("closure of the Lorentz algebra and [D, M] = 0", closure),
        ("ten ODE residuals", ode),
        ("intertwining of classical and deformed actions", intertwining),
        ("inverse map round trips", inversion),
        ("Casimir relations and invariance", casimir),
        ("Weyl specialization", weyl),
        ("coalgebra sector", coalgebra),
        ("classical limits", limits),
        ("determinism, schedule independence, jet accuracy", infrastructure),
    ];
    let mut failed = Vec::new();
    for (i, (title, run)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let verdict = run();
        let secs = started.elapsed().as_secs_f64();
        let status = if verdict.pass { "PASS" } else { "FAIL" };
        println!("[{status}] criterion {}: {title} ({secs:.1} s)", i + 1);
        for note in &verdict.notes {
            if !verdict.pass || std::env::var_os("ACCEPTANCE_VERBOSE").is_some() {
                println!("         {note}");
            }
        }
        if !verdict.pass {
            failed.push(i + 1);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 9 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: criteria {failed:?} failed");
        ExitCode::FAILURE
    }
}
