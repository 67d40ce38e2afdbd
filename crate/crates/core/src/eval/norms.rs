use serde::Serialize;

use crate::estimator::DensityEstimate;
use crate::eval::density::AnalyticDensity;

/// Evaluation points across the support.
pub const NORM_POINTS: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorNorms {
    pub l1: f64,
    pub l2: f64,
    pub linf: f64,
}

/// L¹, L² and L∞ distances of `f` and `g` on `[a, b]`, trapezoid rule over
/// `points` equally spaced points; L∞ is the largest sampled gap.
pub fn error_norms_fn(f: impl Fn(f64) -> f64, g: impl Fn(f64) -> f64, a: f64, b: f64, points: usize) -> ErrorNorms {
    let n = points.max(2) - 1;
    let h = (b - a) / n as f64;
    let (mut l1, mut l2, mut linf) = (0.0, 0.0, 0.0f64);
    for i in 0..=n {
        let x = if i == n { b } else { a + h * i as f64 };
        let d = (f(x) - g(x)).abs();
        let w = if i == 0 || i == n { 0.5 } else { 1.0 };
        l1 += w * d;
        l2 += w * d * d;
        linf = linf.max(d);
    }
    ErrorNorms {
        l1: l1 * h,
        l2: (l2 * h).sqrt(),
        linf,
    }
}

/// Distances between an estimate and the true density in data units over the estimate's support.
pub fn error_norms(estimate: &DensityEstimate<f64>, truth: &AnalyticDensity) -> ErrorNorms {
    let (a, b) = estimate.support;
    error_norms_fn(|x| estimate.pdf(x), |x| truth.pdf(x), a, b, NORM_POINTS)
}
