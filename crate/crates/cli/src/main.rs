mod args;

use std::fmt::Write as _;
use std::process::ExitCode;

use clap::Parser;
use kappa_core::casimir::{casimir_relation_residual, deformed_mass_squared, recover_m2};
use kappa_core::coproduct::{cocommutativity_gap, deformed_add};
use kappa_core::deformation::{forward, inverse, DeformationParams};
use kappa_core::harness::{limit_scan, run_suites_with, ExecutionMode, SuiteConfig, LIMIT_KAPPAS};
use kappa_core::metric::PRESETS;
use kappa_core::{Error, Metric};
use serde_json::json;

use args::{AddArgs, CasimirArgs, Cli, Command, LimitsArgs, MapArgs, ModelArgs, OutputArgs, VerifyArgs};

const EXIT_FAIL: u8 = 1;
const EXIT_ERROR: u8 = 2;
const WORKERS_VAR: &str = "KAPPA_WORKERS";

enum Outcome {
    Pass,
    Fail,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_ERROR } else { 0 });
        }
    };
    if let Err(msg) = configure_pool() {
        eprintln!("error: {msg}");
        return ExitCode::from(EXIT_ERROR);
    }
    match run(cli.command) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(EXIT_FAIL),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn configure_pool() -> Result<(), String> {
    let Ok(raw) = std::env::var(WORKERS_VAR) else {
        return Ok(());
    };
    let workers: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&w| w > 0)
        .ok_or_else(|| format!("{WORKERS_VAR} must be a positive integer, got `{raw}`"))?;
    rayon::ThreadPoolBuilder::new().num_threads(workers).build_global().map_err(|e| e.to_string())
}

fn run(command: Command) -> Result<Outcome, Error> {
    match command {
        Command::Verify(a) => verify(a),
        Command::Map(a) => map(a),
        Command::Add(a) => add(a),
        Command::Casimir(a) => casimir(a),
        Command::Limits(a) => limits(a),
        Command::ListMetrics(a) => list_metrics(a),
    }
}

/// Shortest text that parses back to the same `f64`.
fn fmt_point(p: &[f64]) -> String {
    p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn print_json(value: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("JSON value serializes"));
}

fn model(m: &ModelArgs) -> Result<(Metric, DeformationParams), Error> {
    Ok((m.metric.build()?, DeformationParams::new(m.kappa, m.c_family)?))
}

fn load_config(a: &VerifyArgs) -> Result<SuiteConfig, Error> {
    let mut cfg = match &a.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
            SuiteConfig::from_json(&text)?
        }
        None => SuiteConfig::default(),
    };
    if let Some(m) = &a.metric {
        cfg.metric = m.clone();
    }
    if let Some(k) = a.kappa {
        cfg.kappa = k;
    }
    if let Some(c) = a.c_family {
        cfg.c_family = c;
    }
    if let Some(s) = &a.suites {
        cfg.suites = Some(s.clone());
    }
    if let Some(n) = a.samples {
        cfg.samples = n;
    }
    if let Some(s) = a.seed {
        cfg.seed = s;
    }
    if let Some(t) = a.tolerance {
        cfg.tolerance = t;
    }
    if let Some(b) = a.momentum_box {
        cfg.momentum_box = b;
    }
    if let Some(d) = a.perturb_kappa {
        cfg.perturb_kappa = Some(d);
    }
    Ok(cfg)
}

fn verify(a: VerifyArgs) -> Result<Outcome, Error> {
    let cfg = load_config(&a)?;
    let mode = if a.serial { ExecutionMode::Serial } else { ExecutionMode::Parallel };
    let report = run_suites_with(&cfg, mode)?;
    if a.output.json {
        println!("{}", report.to_json());
    } else {
        println!("{report}");
    }
    Ok(if report.pass { Outcome::Pass } else { Outcome::Fail })
}

fn map(a: MapArgs) -> Result<Outcome, Error> {
    let (metric, params) = model(&a.model)?;
    let out = match a.m2 {
        Some(m2) if a.inverse => inverse(&a.point, &params, &metric, m2)?,
        _ => forward(&a.point, &params, &metric)?,
    };
    if a.output.json {
        let direction = if a.inverse { "inverse" } else { "forward" };
        print_json(&json!({ "direction": direction, "input": a.point, "output": out }));
    } else {
        println!("{}", fmt_point(&out));
    }
    Ok(Outcome::Pass)
}

fn add(a: AddArgs) -> Result<Outcome, Error> {
    DeformationParams::kappa_family(a.kappa)?;
    let sum = deformed_add(&a.left, &a.right, a.kappa)?;
    let reversed = if a.both_orders { Some(deformed_add(&a.right, &a.left, a.kappa)?) } else { None };
    let gap = if a.both_orders { Some(cocommutativity_gap(&a.left, &a.right, a.kappa)?) } else { None };
    if a.output.json {
        let mut doc = json!({ "left": a.left, "right": a.right, "sum": sum });
        if let (Some(r), Some(g)) = (&reversed, gap) {
            doc["reversed"] = json!(r);
            doc["gap"] = json!(g);
        }
        print_json(&doc);
    } else {
        println!("{}", fmt_point(&sum));
        if let (Some(r), Some(g)) = (&reversed, gap) {
            println!("{}", fmt_point(r));
            println!("gap {g}");
        }
    }
    Ok(Outcome::Pass)
}

fn casimir(a: CasimirArgs) -> Result<Outcome, Error> {
    let (metric, params) = model(&a.model)?;
    let doc = if a.deformed {
        let m2_tilde = deformed_mass_squared(&a.point, &metric, params.kappa())?;
        let m2 = recover_m2(&a.point, &params, &metric)?;
        json!({ "deformed_point": a.point, "m2_tilde": m2_tilde, "recovered_m2": m2 })
    } else {
        let image = forward(&a.point, &params, &metric)?;
        let rel = casimir_relation_residual(&a.point, &params, &metric)?;
        json!({
            "point": a.point,
            "image": image,
            "m2": rel.m2,
            "m2_tilde": rel.m2_tilde,
            "r9": rel.r9,
            "r11": rel.r11,
        })
    };
    if a.output.json {
        print_json(&doc);
    } else {
        let mut text = String::new();
        for (key, value) in doc.as_object().expect("object literal") {
            let shown = match value {
                serde_json::Value::Array(items) => {
                    items.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
                }
                serde_json::Value::Null => "(degenerate, skipped)".to_string(),
                other => other.to_string(),
            };
            let _ = writeln!(text, "{key:<14} {shown}");
        }
        print!("{text}");
    }
    Ok(Outcome::Pass)
}

fn limits(a: LimitsArgs) -> Result<Outcome, Error> {
    let metric = a.metric.build()?;
    let series = limit_scan(&metric, &LIMIT_KAPPAS)?;
    let pass = series.iter().all(|s| s.within_band());
    if a.output.json {
        print_json(&json!({ "kappas": LIMIT_KAPPAS, "series": series, "pass": pass }));
    } else {
        println!("{:<12} {}", "kappa", LIMIT_KAPPAS.map(|k| format!("{k:>12}")).join(" "));
        for s in &series {
            println!("{:<12} {}", s.name, s.gaps.iter().map(|g| format!("{g:>12.4e}")).collect::<Vec<_>>().join(" "));
            let ratios = s.ratios.iter().map(|r| format!("{r:.4}")).collect::<Vec<_>>().join(", ");
            let status = if s.within_band() { "ok" } else { "OUT OF BAND" };
            println!("{:<12} ratios {ratios} {status}", "");
        }
    }
    Ok(if pass { Outcome::Pass } else { Outcome::Fail })
}

fn list_metrics(a: OutputArgs) -> Result<Outcome, Error> {
    let metrics = PRESETS.iter().map(|&name| Metric::preset(name).map(|m| (name, m))).collect::<Result<Vec<_>, _>>()?;
    if a.json {
        let doc: Vec<_> = metrics
            .iter()
            .map(|(name, m)| json!({ "name": name, "n": m.dim(), "g00": m.g00(), "rows": m.lower_rows() }))
            .collect();
        print_json(&json!(doc));
    } else {
        for (name, m) in &metrics {
            let weyl = if m.is_null_time() { "  (g00 = 0, weyl suite available)" } else { "" };
            println!("{name}{weyl}");
            for row in m.lower_rows() {
                println!("  [{}]", row.iter().map(|x| format!("{x:>5}")).collect::<Vec<_>>().join(" "));
            }
        }
    }
    Ok(Outcome::Pass)
}
