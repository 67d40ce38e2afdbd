//! Reference densities, error norms and the benchmark harness.

pub mod bench;
pub mod density;
pub mod norms;

pub use bench::{find_benchmark, registry, run_benchmark, BenchmarkRun, BenchmarkSpec, ErrorSummary, RunOptions};
pub use density::AnalyticDensity;
pub use norms::{error_norms, error_norms_fn, ErrorNorms};

use crate::shape::{HeightRatioVector, Piece, ShapeSpec};
use crate::templates::{floorless_template, UnitFunction};

/// Densities on `[0, 1]` for inspecting the constructive warp, each with the shape it has.
pub fn oracle_density(name: &str) -> Option<(Box<dyn Fn(f64) -> f64 + Send + Sync>, ShapeSpec)> {
    let modes = |m| ShapeSpec::modes(m).expect("positive mode count");
    match name {
        "beta-bimodal" => {
            let d = AnalyticDensity::mixture(vec![(0.4, AnalyticDensity::beta(4.0, 10.0)), (0.6, AnalyticDensity::beta(10.0, 4.0))])
                .expect("valid weights");
            Some((Box::new(move |x| d.pdf(x)), modes(2)))
        }
        "beta22" => {
            let d = AnalyticDensity::beta(2.0, 2.0);
            Some((Box::new(move |x| d.pdf(x)), modes(1)))
        }
        "template-m1" => {
            let s = modes(1);
            let g = floorless_template(&s, &HeightRatioVector::<f64>::empty()).expect("feasible");
            Some((Box::new(move |x| g.eval(x)), s))
        }
        "template-m2" => {
            let s = modes(2);
            let g = floorless_template(&s, &HeightRatioVector::new(vec![0.3, 0.8])).expect("feasible");
            Some((Box::new(move |x| g.eval(x)), s))
        }
        "flat-mode" => {
            let s = ShapeSpec::sequence(vec![Piece::Increasing, Piece::Flat, Piece::Decreasing], false).expect("valid sequence");
            Some((Box::new(|x: f64| x.min(1.0 / 3.0).min(1.0 - x) * 4.5), s))
        }
        _ => None,
    }
}

pub const ORACLE_DENSITIES: [&str; 5] = ["beta-bimodal", "beta22", "template-m1", "template-m2", "flat-mode"];
