//! Named simulation scenarios and the replicated benchmark runner.

use std::fmt::Write as _;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::conditional::{fit_conditional, Bandwidth, ConditionalFitConfig};
use crate::estimator::{fit, DensityEstimate, FitConfig, Support};
use crate::eval::density::AnalyticDensity;
use crate::eval::norms::{error_norms, ErrorNorms};
use crate::shape::{Piece, ShapeSpec};
use crate::{Error, Result};

/// Response models whose conditional density is known in closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConditionalModel {
    /// `Y | X ~ ½ N(X − 1.5, 0.5²) + ½ N(X + 1.5, 0.5²)`.
    ShiftedBimodal,
    /// `Y | X ~ Laplace((2X − 1)², 1)`.
    LaplaceQuadratic,
}

impl ConditionalModel {
    pub fn truth(self, x: f64) -> AnalyticDensity {
        match self {
            Self::ShiftedBimodal => AnalyticDensity::Mixture {
                components: vec![
                    (0.5, AnalyticDensity::normal(x - 1.5, 0.5)),
                    (0.5, AnalyticDensity::normal(x + 1.5, 0.5)),
                ],
            },
            Self::LaplaceQuadratic => AnalyticDensity::laplace((2.0 * x - 1.0).powi(2), 1.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Scenario {
    Unconditional(AnalyticDensity),
    /// Standard normal covariate; estimate at an empirical covariate quantile.
    Conditional {
        model: ConditionalModel,
        quantile: f64,
        neighbor_fraction: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkSpec {
    pub name: String,
    pub description: String,
    pub scenario: Scenario,
    pub shape: ShapeSpec,
    pub support: Support<f64>,
    pub sample_sizes: Vec<usize>,
    pub replicates: usize,
    pub seed: u64,
}

pub const DEFAULT_REPLICATES: usize = 20;

fn mixture(parts: &[(f64, f64, f64)]) -> AnalyticDensity {
    AnalyticDensity::Mixture {
        components: parts.iter().map(|&(w, m, var)| (w, AnalyticDensity::normal(m, var.sqrt()))).collect(),
    }
}

fn spec(
    name: &str,
    description: &str,
    scenario: Scenario,
    shape: ShapeSpec,
    support: Support<f64>,
    sample_sizes: &[usize],
) -> BenchmarkSpec {
    BenchmarkSpec {
        name: name.into(),
        description: description.into(),
        scenario,
        shape,
        support,
        sample_sizes: sample_sizes.to_vec(),
        replicates: DEFAULT_REPLICATES,
        seed: 0,
    }
}

/// Built-in scenarios. Normal parameters are (mean, variance).
pub fn registry() -> Vec<BenchmarkSpec> {
    let modes = |m| ShapeSpec::modes(m).expect("positive mode count");
    let unit = Support::Known(0.0, 1.0);
    let decreasing = ShapeSpec::sequence(vec![Piece::Decreasing], true).expect("valid sequence");
    let plateau = ShapeSpec::sequence(vec![Piece::Increasing, Piece::Flat, Piece::Decreasing], true).expect("valid sequence");
    let truncated = |sd: f64| {
        AnalyticDensity::truncated(AnalyticDensity::normal(0.0, sd), 0.0, 1.0).expect("mass on [0, 1]")
    };
    vec![
        spec(
            "symmetric-unimodal",
            "4/5 N(0, 4) + 1/5 N(0, 0.5), one mode",
            Scenario::Unconditional(mixture(&[(0.8, 0.0, 4.0), (0.2, 0.0, 0.5)])),
            modes(1),
            Support::Estimate,
            &[100, 500, 1000],
        ),
        spec(
            "skewed-unimodal",
            "Beta(9, 3) on the known support [0, 1], one mode",
            Scenario::Unconditional(AnalyticDensity::beta(9.0, 3.0)),
            modes(1),
            unit,
            &[100, 500, 1000],
        ),
        spec(
            "contaminated-unimodal",
            "0.95 N(0, 0.5) + 0.05 N(3, 1), one mode",
            Scenario::Unconditional(mixture(&[(0.95, 0.0, 0.5), (0.05, 3.0, 1.0)])),
            modes(1),
            Support::Estimate,
            &[100, 500, 1000],
        ),
        spec(
            "bimodal",
            "1/3 N(-1, 1) + 2/3 N(1, 0.3), two modes",
            Scenario::Unconditional(mixture(&[(1.0 / 3.0, -1.0, 1.0), (2.0 / 3.0, 1.0, 0.3)])),
            modes(2),
            Support::Estimate,
            &[100, 500, 1000],
        ),
        spec(
            "trimodal",
            "1/3 N(-1, 0.25) + 1/3 N(0, 0.25) + 1/3 N(2, 0.3), three modes",
            Scenario::Unconditional(mixture(&[(1.0 / 3.0, -1.0, 0.25), (1.0 / 3.0, 0.0, 0.25), (1.0 / 3.0, 2.0, 0.3)])),
            modes(3),
            Support::Estimate,
            &[100, 500, 1000],
        ),
        spec(
            "monotone-n01",
            "N(0, 1) truncated to [0, 1], decreasing with a free right end",
            Scenario::Unconditional(truncated(1.0)),
            decreasing.clone(),
            unit,
            &[500],
        ),
        spec(
            "monotone-n04",
            "N(0, 0.4) truncated to [0, 1], decreasing with a free right end",
            Scenario::Unconditional(truncated(0.4f64.sqrt())),
            decreasing,
            unit,
            &[500],
        ),
        spec(
            "flat-mode",
            "density proportional to x, 1/3, 1 - x on thirds of [0, 1]",
            Scenario::Unconditional(
                AnalyticDensity::piecewise_linear(vec![0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0], vec![0.0, 1.0 / 3.0, 1.0 / 3.0, 0.0])
                    .expect("valid trapezoid"),
            ),
            plateau,
            unit,
            &[500],
        ),
        spec(
            "truncated-bimodal",
            "3/4 N(0.3, 0.04) + 1/4 N(0.75, 4) truncated to [0, 1], two modes with free ends",
            Scenario::Unconditional(
                AnalyticDensity::truncated(mixture(&[(0.75, 0.3, 0.04), (0.25, 0.75, 4.0)]), 0.0, 1.0).expect("mass on [0, 1]"),
            ),
            ShapeSpec::new(crate::shape::ShapeKind::Modes(2), true).expect("valid shape"),
            unit,
            &[1000],
        ),
        spec(
            "cde-bimodal",
            "X ~ N(0, 1), Y | X ~ 1/2 N(X - 1.5, 0.25) + 1/2 N(X + 1.5, 0.25) at the median of X",
            Scenario::Conditional {
                model: ConditionalModel::ShiftedBimodal,
                quantile: 0.5,
                neighbor_fraction: 0.5,
            },
            modes(2),
            Support::Estimate,
            &[100, 1000],
        ),
        spec(
            "cde-unimodal",
            "X ~ N(0, 1), Y | X ~ Laplace((2X - 1)^2, 1) at the median of X",
            Scenario::Conditional {
                model: ConditionalModel::LaplaceQuadratic,
                quantile: 0.5,
                neighbor_fraction: 0.5,
            },
            modes(1),
            Support::Estimate,
            &[100, 1000],
        ),
    ]
}

pub fn find_benchmark(name: &str) -> Option<BenchmarkSpec> {
    registry().into_iter().find(|s| s.name == name)
}

/// Overrides applied on top of a benchmark's defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    pub replicates: usize,
    pub seed: u64,
    pub parallel: bool,
    /// Record wall-clock times; off keeps outputs byte-for-byte reproducible.
    pub timing: bool,
    pub restarts: Option<usize>,
    pub grid: Option<usize>,
    pub j_range: Option<(usize, usize)>,
    pub omega: Option<f64>,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            replicates: DEFAULT_REPLICATES,
            seed: 0,
            parallel: true,
            timing: false,
            restarts: None,
            grid: None,
            j_range: None,
            omega: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReplicateRecord {
    pub replicate: usize,
    pub n: usize,
    #[serde(flatten)]
    pub errors: ErrorNorms,
    pub j: usize,
    pub loglik: f64,
    pub aic: f64,
    pub modes: usize,
    pub wall_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReplicateFailure {
    pub replicate: usize,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Stats {
    pub mean: f64,
    pub sd: f64,
    pub median: f64,
}

impl Stats {
    /// Mean, sample standard deviation (zero for one value) and median.
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let sd = if values.len() > 1 {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let mid = sorted.len() / 2;
        let median = if sorted.len() % 2 == 1 {
            sorted[mid]
        } else {
            0.5 * (sorted[mid - 1] + sorted[mid])
        };
        Some(Self { mean, sd, median })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorSummary {
    pub benchmark: String,
    pub n: usize,
    pub replicates: usize,
    pub failures: usize,
    pub l1: Option<Stats>,
    pub l2: Option<Stats>,
    pub linf: Option<Stats>,
    pub wall_ms: Option<Stats>,
    /// Successful replicates whose estimate has the requested number of modes.
    pub shape_matches: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkRun {
    pub spec: BenchmarkSpec,
    pub n: usize,
    pub records: Vec<ReplicateRecord>,
    pub failures: Vec<ReplicateFailure>,
    pub summary: ErrorSummary,
}

fn empirical_quantile(x: &[f64], q: f64) -> f64 {
    let mut s = x.to_vec();
    s.sort_by(f64::total_cmp);
    let pos = q * (s.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    s[lo] + (pos - lo as f64) * (s[hi] - s[lo])
}

impl BenchmarkSpec {
    pub fn fit_config(&self, opts: &RunOptions) -> FitConfig<f64> {
        let mut cfg = FitConfig::new(self.shape.clone());
        cfg.support = self.support;
        cfg.parallel = opts.parallel;
        if let Some(r) = opts.restarts {
            cfg.restarts = r;
        }
        if let Some(g) = opts.grid {
            cfg.grid = g;
        }
        if let Some((a, b)) = opts.j_range {
            cfg.j_min = a;
            cfg.j_max = b;
        }
        if let Some(w) = opts.omega {
            cfg.omega = w;
        }
        cfg
    }

    /// Draws the data for one replicate and fits it, returning the estimate
    /// and the density it should be compared against.
    pub fn replicate(&self, n: usize, index: usize, opts: &RunOptions) -> Result<(DensityEstimate<f64>, AnalyticDensity)> {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        rng.set_stream(index as u64);
        let mut cfg = self.fit_config(opts);
        cfg.seed = opts.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(index as u64);
        match &self.scenario {
            Scenario::Unconditional(truth) => {
                let x = truth.sample_n(n, &mut rng);
                Ok((fit(&x, &cfg)?, truth.clone()))
            }
            Scenario::Conditional {
                model,
                quantile,
                neighbor_fraction,
            } => {
                let x = AnalyticDensity::normal(0.0, 1.0).sample_n(n, &mut rng);
                let y: Vec<f64> = x.iter().map(|&xi| model.truth(xi).sample(&mut rng)).collect();
                let x0 = empirical_quantile(&x, *quantile);
                let ccfg = ConditionalFitConfig {
                    base: cfg,
                    x0,
                    neighbor_fraction: *neighbor_fraction,
                    bandwidth: Bandwidth::Adaptive,
                };
                Ok((fit_conditional(&x, &y, &ccfg)?.estimate, model.truth(x0)))
            }
        }
    }
}

/// Replicated fits at sample size `n`; failures are recorded and excluded from the summary.
pub fn run_benchmark(spec: &BenchmarkSpec, n: usize, opts: &RunOptions) -> Result<BenchmarkRun> {
    if opts.replicates < 1 {
        return Err(Error::Config("at least one replicate is required".into()));
    }
    spec.fit_config(opts).validate()?;
    let one = |index: usize| {
        let start = Instant::now();
        let outcome = spec.replicate(n, index, opts);
        let wall = start.elapsed().as_secs_f64() * 1e3;
        match outcome {
            Ok((est, truth)) => Ok(ReplicateRecord {
                replicate: index,
                n,
                errors: error_norms(&est, &truth),
                j: est.j,
                loglik: est.loglik,
                aic: est.aic,
                modes: est.mode_count(),
                wall_ms: opts.timing.then_some(wall),
            }),
            Err(e) => Err(ReplicateFailure {
                replicate: index,
                message: e.to_string(),
            }),
        }
    };
    let outcomes: Vec<_> = if opts.parallel {
        (0..opts.replicates).into_par_iter().map(one).collect()
    } else {
        (0..opts.replicates).map(one).collect()
    };
    let (mut records, mut failures) = (Vec::new(), Vec::new());
    for o in outcomes {
        match o {
            Ok(r) => records.push(r),
            Err(f) => failures.push(f),
        }
    }
    let column = |f: fn(&ReplicateRecord) -> f64| Stats::of(&records.iter().map(f).collect::<Vec<_>>());
    let walls: Vec<f64> = records.iter().filter_map(|r| r.wall_ms).collect();
    let summary = ErrorSummary {
        benchmark: spec.name.clone(),
        n,
        replicates: opts.replicates,
        failures: failures.len(),
        l1: column(|r| r.errors.l1),
        l2: column(|r| r.errors.l2),
        linf: column(|r| r.errors.linf),
        wall_ms: Stats::of(&walls),
        shape_matches: records.iter().filter(|r| r.modes == spec.shape.mode_count()).count(),
    };
    Ok(BenchmarkRun {
        spec: spec.clone(),
        n,
        records,
        failures,
        summary,
    })
}

pub const REPLICATE_CSV_HEADER: &str = "replicate,n,L1,L2,Linf,J,loglik,aic,wall_ms";

impl BenchmarkRun {
    /// Per-replicate CSV; `wall_ms` is `NA` when timing is off.
    pub fn replicate_csv(&self) -> String {
        let mut out = String::from(REPLICATE_CSV_HEADER);
        out.push('\n');
        for r in &self.records {
            let wall = r.wall_ms.map_or_else(|| "NA".to_string(), |w| format!("{w:.3}"));
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                r.replicate, r.n, r.errors.l1, r.errors.l2, r.errors.linf, r.j, r.loglik, r.aic, wall
            );
        }
        out
    }

    pub fn summary_json(&self) -> serde_json::Value {
        json!({
            "schema": 1,
            "benchmark": self.spec.name,
            "description": self.spec.description,
            "shape": self.spec.shape.to_string(),
            "summary": self.summary,
            "failures": self.failures,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_names_are_unique() {
        let names: Vec<String> = registry().into_iter().map(|s| s.name).collect();
        let mut sorted = names.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(names.len(), sorted.len());
        assert!(find_benchmark("bimodal").is_some() && find_benchmark("nope").is_none());
    }

    #[test]
    fn stats() {
        let s = Stats::of(&[1.0, 2.0, 4.0]).unwrap();
        assert!((s.mean - 7.0 / 3.0).abs() < 1e-15 && s.median == 2.0);
        let one = Stats::of(&[0.3]).unwrap();
        assert_eq!((one.sd, one.median), (0.0, 0.3));
        assert!(Stats::of(&[]).is_none());
    }

    #[test]
    fn quantile() {
        assert_eq!(empirical_quantile(&[3.0, 1.0, 2.0], 0.5), 2.0);
        assert_eq!(empirical_quantile(&[4.0, 1.0, 2.0, 3.0], 0.5), 2.5);
    }

    #[test]
    fn small_run_is_reproducible() {
        let spec = find_benchmark("skewed-unimodal").unwrap();
        let opts = RunOptions {
            replicates: 2,
            restarts: Some(2),
            j_range: Some((2, 2)),
            ..Default::default()
        };
        let a = run_benchmark(&spec, 50, &opts).unwrap();
        let b = run_benchmark(&spec, 50, &RunOptions { parallel: false, ..opts.clone() }).unwrap();
        assert_eq!(a.replicate_csv(), b.replicate_csv());
        assert_eq!(a.records.len(), 2);
        let mean = a.records.iter().map(|r| r.errors.l2).sum::<f64>() / 2.0;
        assert_eq!(a.summary.l2.unwrap().mean, mean);
        assert!(a.replicate_csv().starts_with(REPLICATE_CSV_HEADER));
    }
}
