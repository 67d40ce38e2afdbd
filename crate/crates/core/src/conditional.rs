//! Conditional density at a covariate location by locally weighted likelihood.

use crate::estimator::{fit_sample, sample_sd, DensityEstimate, FitConfig, SampleWeights};
use crate::{Error, Result, Scalar};

/// Pilot densities below this are treated as outside the covariate support.
pub const KDE_FLOOR: f64 = 1e-12;
pub const MIN_CONDITIONAL_SAMPLES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bandwidth<T> {
    /// Pilot rule stretched by the pilot density at the query point.
    Adaptive,
    Fixed(T),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalFitConfig<T> {
    pub base: FitConfig<T>,
    pub x0: T,
    pub neighbor_fraction: T,
    pub bandwidth: Bandwidth<T>,
}

impl<T: Scalar> ConditionalFitConfig<T> {
    pub fn new(base: FitConfig<T>, x0: T) -> Self {
        Self {
            base,
            x0,
            neighbor_fraction: T::lit(0.5),
            bandwidth: Bandwidth::Adaptive,
        }
    }
}

/// Kernel weights, zero outside the retained neighbourhood, summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector<T> {
    w: Vec<T>,
}

impl<T: Scalar> WeightVector<T> {
    pub fn values(&self) -> &[T] {
        &self.w
    }

    pub fn retained(&self) -> usize {
        self.w.iter().filter(|&&w| w > T::zero()).count()
    }

    /// `1 / Σ w²`.
    pub fn effective_size(&self) -> T {
        T::one() / self.w.iter().map(|&w| w * w).sum::<T>()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalEstimate<T> {
    pub estimate: DensityEstimate<T>,
    pub x0: T,
    pub bandwidth: T,
    pub n_eff: T,
    pub retained: usize,
}

/// Normal-reference rule `1.06 · sd · n^(-1/5)`.
pub fn pilot_bandwidth<T: Scalar>(x: &[T]) -> Result<T> {
    if x.len() < 10 {
        return Err(Error::DegenerateSample(format!("{} covariates; at least 10 are required", x.len())));
    }
    let sd = sample_sd(x);
    if !(sd > T::zero()) || !sd.is_finite() {
        return Err(Error::DegenerateSample("covariates are constant".into()));
    }
    let n = T::from_usize(x.len()).unwrap();
    Ok(T::lit(1.06) * sd * n.powf(T::lit(-0.2)))
}

fn std_normal_pdf<T: Scalar>(u: T) -> T {
    (-(u * u) / T::lit(2.0)).exp() / (T::TAU()).sqrt()
}

/// Gaussian kernel density estimate at `x0`.
pub fn kde<T: Scalar>(x: &[T], x0: T, h: T) -> T {
    let n = T::from_usize(x.len()).unwrap();
    x.iter().map(|&xi| std_normal_pdf((x0 - xi) / h)).sum::<T>() / (n * h)
}

/// `h / √K̂(x0)` with `K̂` the pilot kernel estimate at bandwidth `h`.
pub fn adaptive_bandwidth<T: Scalar>(x: &[T], x0: T, h: T) -> Result<T> {
    let k = kde(x, x0, h);
    if !(k >= T::lit(KDE_FLOOR)) {
        return Err(Error::OutsideSupport(format!("pilot density at {x0} is {k}")));
    }
    Ok(h / k.sqrt())
}

/// Gaussian weights on the `⌈frac · n⌉` covariates nearest `x0` (ties by
/// index), renormalized; all others get zero.
pub fn compute_weights<T: Scalar>(x: &[T], x0: T, h: T, frac: T) -> WeightVector<T> {
    let n = x.len();
    let keep = (frac * T::from_usize(n).unwrap())
        .ceil()
        .to_usize()
        .unwrap_or(n)
        .clamp(1, n.max(1));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        (x[a] - x0)
            .abs()
            .partial_cmp(&(x[b] - x0).abs())
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    let mut w = vec![T::zero(); n];
    if n == 0 {
        return WeightVector { w };
    }
    // Exponents relative to the nearest point so far neighbourhoods cannot underflow.
    let exponent = |i: usize| {
        let u = (x[i] - x0) / h;
        u * u / T::lit(2.0)
    };
    let base = exponent(order[0]);
    for &i in &order[..keep] {
        w[i] = (base - exponent(i)).exp();
    }
    let total: T = w.iter().copied().sum();
    w.iter_mut().for_each(|v| *v = *v / total);
    WeightVector { w }
}

/// Shape-constrained estimate of the density of `y` given covariate `cfg.x0`.
pub fn fit_conditional<T: Scalar>(x: &[T], y: &[T], cfg: &ConditionalFitConfig<T>) -> Result<ConditionalEstimate<T>> {
    if x.len() != y.len() {
        return Err(Error::Shape(format!("{} covariates but {} responses", x.len(), y.len())));
    }
    if x.len() < MIN_CONDITIONAL_SAMPLES {
        return Err(Error::DegenerateSample(format!(
            "{} observations; at least {MIN_CONDITIONAL_SAMPLES} are required",
            x.len()
        )));
    }
    let frac = cfg.neighbor_fraction;
    if !(frac > T::zero() && frac <= T::one()) {
        return Err(Error::Config(format!("neighbour fraction {frac} must lie in (0, 1]")));
    }
    let lo = x.iter().copied().fold(T::infinity(), T::min);
    let hi = x.iter().copied().fold(T::neg_infinity(), T::max);
    if !(cfg.x0 >= lo && cfg.x0 <= hi) {
        return Err(Error::OutsideSupport(format!("x0 = {} lies outside the covariates [{lo}, {hi}]", cfg.x0)));
    }
    let bandwidth = match cfg.bandwidth {
        Bandwidth::Fixed(h) if h > T::zero() && h.is_finite() => h,
        Bandwidth::Fixed(h) => return Err(Error::Config(format!("bandwidth {h} must be positive"))),
        Bandwidth::Adaptive => adaptive_bandwidth(x, cfg.x0, pilot_bandwidth(x)?)?,
    };
    let weights = compute_weights(x, cfg.x0, bandwidth, frac);
    let (ys, ws): (Vec<T>, Vec<T>) = y
        .iter()
        .zip(weights.values())
        .filter(|(_, &w)| w > T::zero())
        .map(|(&y, &w)| (y, w))
        .unzip();
    let sample_weights = SampleWeights::from_probabilities(&ws);
    let estimate = fit_sample(&ys, &cfg.base, sample_weights.as_ref())?;
    Ok(ConditionalEstimate {
        estimate,
        x0: cfg.x0,
        bandwidth,
        n_eff: weights.effective_size(),
        retained: ys.len(),
    })
}
