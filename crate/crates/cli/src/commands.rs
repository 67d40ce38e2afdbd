use std::fmt::Write as _;

use serde_json::{json, Value};
use warpdens::eval::bench::REPLICATE_CSV_HEADER;
use warpdens::eval::{find_benchmark, oracle_density, registry, run_benchmark, RunOptions, ORACLE_DENSITIES};
use warpdens::templates::floorless_template;
use warpdens::{
    fit, fit_conditional, group_action, oracle_reconstruct_warp, Bandwidth, ConditionalFitConfig, DensityEstimate,
    FitConfig, GridDensity, ShapeKind, ShapeSpec, Support, UnitFunction,
};

use crate::args::{BenchArgs, CfitArgs, FitArgs, OracleArgs, OutputArgs, ShapeArgs, TuningArgs};
use crate::failure::Failure;
use crate::io::{emit, read_columns, write_atomic};

const SCHEMA: u32 = 1;
const FULL_REPLICATES: usize = 100;

fn shape_spec(args: &ShapeArgs) -> Result<Option<ShapeSpec>, Failure> {
    let spec = match (args.modes, &args.shape) {
        (Some(_), Some(_)) => return Err(Failure::usage("--modes and --shape are mutually exclusive")),
        (Some(m), None) => ShapeSpec::new(ShapeKind::Modes(m), args.free_boundaries),
        (None, Some(s)) => ShapeSpec::parse_sequence(s, args.free_boundaries),
        (None, None) => return Ok(None),
    };
    spec.map(Some).map_err(|e| Failure::usage(e.to_string()))
}

fn required_shape(args: &ShapeArgs) -> Result<ShapeSpec, Failure> {
    shape_spec(args)?.ok_or_else(|| Failure::usage("one of --modes or --shape is required"))
}

fn parse_support(text: &str) -> Result<Support<f64>, Failure> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let bad = || Failure::usage(format!("--support expects \"A,B\" with A < B, got \"{text}\""));
    if parts.len() != 2 {
        return Err(bad());
    }
    let a: f64 = parts[0].parse().map_err(|_| bad())?;
    let b: f64 = parts[1].parse().map_err(|_| bad())?;
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(bad());
    }
    Ok(Support::Known(a, b))
}

fn fit_config(shape: ShapeSpec, t: &TuningArgs) -> Result<FitConfig<f64>, Failure> {
    let mut cfg = FitConfig::new(shape);
    cfg.omega = t.omega;
    cfg.j_min = t.jmin;
    cfg.j_max = t.jmax;
    cfg.restarts = t.restarts;
    cfg.seed = t.seed;
    cfg.grid = t.grid;
    cfg.parallel = !t.serial;
    if let Some(s) = &t.support {
        cfg.support = parse_support(s)?;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn curve_points(out: &OutputArgs, grid: usize) -> Result<usize, Failure> {
    match out.points {
        Some(p) if p < 2 => Err(Failure::usage("--points must be at least 2")),
        Some(p) => Ok(p),
        None => Ok(grid + 1),
    }
}

fn estimate_json(est: &DensityEstimate<f64>, curve: &[(f64, f64)]) -> Value {
    json!({
        "schema": SCHEMA,
        "shape": est.shape.to_string(),
        "support": [est.support.0, est.support.1],
        "J": est.j,
        "aic": est.aic,
        "loglik": est.loglik,
        "omega": est.omega,
        "lambda_hat": est.lambda_hat.values(),
        "c_hat": est.c_hat.values(),
        "modes": est.mode_count(),
        "sweep": est.sweep.iter().map(|s| json!({"J": s.j, "loglik": s.loglik, "aic": s.aic})).collect::<Vec<_>>(),
        "curve": curve.iter().map(|&(x, p)| json!({"x": x, "p": p})).collect::<Vec<_>>(),
    })
}

fn curve_csv(curve: &[(f64, f64)]) -> String {
    let mut out = String::from("x,p\n");
    for (x, p) in curve {
        let _ = writeln!(out, "{x},{p}");
    }
    out
}

fn write_outputs(json: &Value, curve: &[(f64, f64)], out: &OutputArgs) -> Result<(), Failure> {
    if let Some(path) = &out.curve {
        write_atomic(path, &curve_csv(curve))?;
    }
    let text = serde_json::to_string_pretty(json).expect("JSON values serialize") + "\n";
    emit(out.output.as_deref(), &text)
}

pub fn fit_cmd(args: &FitArgs) -> Result<(), Failure> {
    let cfg = fit_config(required_shape(&args.shape)?, &args.tuning)?;
    let points = curve_points(&args.output, cfg.grid)?;
    let x = read_columns(&args.input, 1)?.remove(0);
    let est = fit(&x, &cfg)?;
    let curve = est.curve(points);
    write_outputs(&estimate_json(&est, &curve), &curve, &args.output)
}

fn median(x: &[f64]) -> f64 {
    let mut s = x.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len();
    if n % 2 == 1 {
        s[n / 2]
    } else {
        0.5 * (s[n / 2 - 1] + s[n / 2])
    }
}

pub fn cfit_cmd(args: &CfitArgs) -> Result<(), Failure> {
    let base = fit_config(required_shape(&args.shape)?, &args.tuning)?;
    let points = curve_points(&args.output, base.grid)?;
    if !(args.frac > 0.0 && args.frac <= 1.0) {
        return Err(Failure::usage(format!("--frac {} must lie in (0, 1]", args.frac)));
    }
    let bandwidth = match args.bandwidth {
        Some(h) if h > 0.0 && h.is_finite() => Bandwidth::Fixed(h),
        Some(h) => return Err(Failure::usage(format!("--bandwidth {h} must be positive"))),
        None => Bandwidth::Adaptive,
    };
    let mut cols = read_columns(&args.input, 2)?;
    let y = cols.pop().unwrap();
    let x = cols.pop().unwrap();
    let x0 = args.x0.unwrap_or_else(|| median(&x));
    let cfg = ConditionalFitConfig {
        base,
        x0,
        neighbor_fraction: args.frac,
        bandwidth,
    };
    let c = fit_conditional(&x, &y, &cfg)?;
    let curve = c.estimate.curve(points);
    let mut json = estimate_json(&c.estimate, &curve);
    let obj = json.as_object_mut().unwrap();
    obj.insert("x0".into(), json!(c.x0));
    obj.insert("bandwidth".into(), json!(c.bandwidth));
    obj.insert("n_eff".into(), json!(c.n_eff));
    obj.insert("retained".into(), json!(c.retained));
    write_outputs(&json, &curve, &args.output)
}

fn unknown_name(kind: &str, name: &str, valid: &[String]) -> Failure {
    Failure::usage(format!("unknown {kind} \"{name}\"; valid names: {}", valid.join(", ")))
}

pub fn bench_cmd(args: &BenchArgs) -> Result<(), Failure> {
    if args.name == "list" {
        let mut out = String::new();
        for spec in registry() {
            let sizes: Vec<String> = spec.sample_sizes.iter().map(usize::to_string).collect();
            let _ = writeln!(out, "{}\t{}\tn={}\t{}", spec.name, spec.shape, sizes.join(","), spec.description);
        }
        print!("{out}");
        return Ok(());
    }
    let spec = find_benchmark(&args.name).ok_or_else(|| {
        let names: Vec<String> = registry().into_iter().map(|s| s.name).collect();
        unknown_name("benchmark", &args.name, &names)
    })?;
    let opts = RunOptions {
        replicates: if args.full { FULL_REPLICATES } else { args.reps },
        seed: args.seed,
        parallel: !args.serial,
        timing: args.timing,
        restarts: args.restarts,
        grid: args.grid,
        ..RunOptions::default()
    };
    if opts.replicates == 0 {
        return Err(Failure::usage("--reps must be positive"));
    }
    let sizes = match args.n {
        Some(n) => vec![n],
        None => spec.sample_sizes.clone(),
    };
    let mut csv = String::from(REPLICATE_CSV_HEADER);
    csv.push('\n');
    let mut summaries = Vec::new();
    for n in sizes {
        let run = run_benchmark(&spec, n, &opts)?;
        csv.extend(run.replicate_csv().lines().skip(1).map(|l| format!("{l}\n")));
        summaries.push(run.summary_json());
    }
    if let Some(path) = &args.csv {
        write_atomic(path, &csv)?;
    }
    let json = json!({ "schema": SCHEMA, "benchmark": spec.name, "runs": summaries });
    let text = serde_json::to_string_pretty(&json).expect("JSON values serialize") + "\n";
    emit(args.summary.as_deref(), &text)
}

pub fn oracle_cmd(args: &OracleArgs) -> Result<(), Failure> {
    let override_shape = shape_spec(&args.shape)?;
    if args.grid < 2 {
        return Err(Failure::usage("--grid must be at least 2"));
    }
    let (pdf, own_shape) = oracle_density(&args.name).ok_or_else(|| {
        let names: Vec<String> = ORACLE_DENSITIES.iter().map(|s| s.to_string()).collect();
        unknown_name("density", &args.name, &names)
    })?;
    let shape = override_shape.unwrap_or(own_shape);
    let p0 = GridDensity::from_fn(args.grid, &|t| pdf(t))?;
    let (gamma, lambda) = oracle_reconstruct_warp(&p0, &shape)?;
    let template = floorless_template(&shape, &lambda)?;
    let rebuilt = group_action(&template, &gamma)?;
    let nodes = p0.nodes();
    let linf = rebuilt
        .values()
        .iter()
        .zip(&nodes)
        .map(|(r, &t)| (r - pdf(t)).abs())
        .fold(0.0, f64::max);
    let identity = gamma.values().iter().zip(&nodes).map(|(g, t)| (g - t).abs()).fold(0.0, f64::max);
    let json = json!({
        "schema": SCHEMA,
        "density": args.name,
        "shape": shape.to_string(),
        "grid": args.grid,
        "lambda": lambda.values(),
        "reconstruction_linf": linf,
        "identity_distance": identity,
        "gamma": nodes.iter().zip(gamma.values()).map(|(t, g)| json!({"t": t, "gamma": g})).collect::<Vec<_>>(),
        "template": nodes.iter().map(|&t| json!({"t": t, "p": template.eval(t)})).collect::<Vec<_>>(),
        "reconstructed": nodes.iter().zip(rebuilt.values()).map(|(t, p)| json!({"t": t, "p": p})).collect::<Vec<_>>(),
    });
    let text = serde_json::to_string_pretty(&json).expect("JSON values serialize") + "\n";
    emit(args.output.as_deref(), &text)
}
