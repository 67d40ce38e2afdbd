//! Closed-form reference densities and their samplers.

use rand::Rng;
use rand_distr::{Beta as BetaSampler, Distribution, Normal as NormalSampler};
use serde::Serialize;
use statrs::distribution::{Beta, Continuous, ContinuousCDF, Laplace, Normal};

use crate::{Error, Result};

/// Analytic density on the real line (or a sub-interval).
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AnalyticDensity {
    Normal { mean: f64, sd: f64 },
    Laplace { location: f64, scale: f64 },
    Beta { a: f64, b: f64 },
    Mixture { components: Vec<(f64, AnalyticDensity)> },
    Truncated { base: Box<AnalyticDensity>, lo: f64, hi: f64 },
    /// Linear interpolation of `(xs, ys)`, zero outside, normalized to unit mass.
    PiecewiseLinear { xs: Vec<f64>, ys: Vec<f64> },
}

impl AnalyticDensity {
    pub fn normal(mean: f64, sd: f64) -> Self {
        Self::Normal { mean, sd }
    }

    pub fn laplace(location: f64, scale: f64) -> Self {
        Self::Laplace { location, scale }
    }

    pub fn beta(a: f64, b: f64) -> Self {
        Self::Beta { a, b }
    }

    pub fn mixture(components: Vec<(f64, AnalyticDensity)>) -> Result<Self> {
        let total: f64 = components.iter().map(|c| c.0).sum();
        if components.is_empty() || components.iter().any(|c| !(c.0 >= 0.0)) || (total - 1.0).abs() > 1e-12 {
            return Err(Error::Domain("mixture weights must be non-negative and sum to one".into()));
        }
        Ok(Self::Mixture { components })
    }

    pub fn truncated(base: AnalyticDensity, lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi) {
            return Err(Error::Domain(format!("empty truncation interval [{lo}, {hi}]")));
        }
        if !(base.cdf(hi) - base.cdf(lo) > 0.0) {
            return Err(Error::Domain("truncation interval carries no mass".into()));
        }
        Ok(Self::Truncated {
            base: Box::new(base),
            lo,
            hi,
        })
    }

    pub fn piecewise_linear(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() < 2 || xs.len() != ys.len() || xs.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::Domain("piecewise-linear density needs increasing abscissae".into()));
        }
        if ys.iter().any(|&y| !(y >= 0.0)) {
            return Err(Error::Domain("piecewise-linear density must be non-negative".into()));
        }
        let mass: f64 = xs.windows(2).zip(ys.windows(2)).map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1])).sum();
        if !(mass > 0.0) {
            return Err(Error::Domain("piecewise-linear density has no mass".into()));
        }
        Ok(Self::PiecewiseLinear {
            xs,
            ys: ys.into_iter().map(|y| y / mass).collect(),
        })
    }

    pub fn pdf(&self, x: f64) -> f64 {
        match self {
            Self::Normal { mean, sd } => Normal::new(*mean, *sd).map(|d| d.pdf(x)).unwrap_or(f64::NAN),
            Self::Laplace { location, scale } => Laplace::new(*location, *scale).map(|d| d.pdf(x)).unwrap_or(f64::NAN),
            Self::Beta { a, b } => {
                if !(0.0..=1.0).contains(&x) {
                    0.0
                } else {
                    Beta::new(*a, *b).map(|d| d.pdf(x)).unwrap_or(f64::NAN)
                }
            }
            Self::Mixture { components } => components.iter().map(|(w, d)| w * d.pdf(x)).sum(),
            Self::Truncated { base, lo, hi } => {
                if x < *lo || x > *hi {
                    0.0
                } else {
                    base.pdf(x) / (base.cdf(*hi) - base.cdf(*lo))
                }
            }
            Self::PiecewiseLinear { xs, ys } => {
                if x < xs[0] || x > xs[xs.len() - 1] {
                    0.0
                } else {
                    crate::quad::lerp_sorted(xs, ys, x)
                }
            }
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match self {
            Self::Normal { mean, sd } => Normal::new(*mean, *sd).map(|d| d.cdf(x)).unwrap_or(f64::NAN),
            Self::Laplace { location, scale } => Laplace::new(*location, *scale).map(|d| d.cdf(x)).unwrap_or(f64::NAN),
            Self::Beta { a, b } => Beta::new(*a, *b).map(|d| d.cdf(x.clamp(0.0, 1.0))).unwrap_or(f64::NAN),
            Self::Mixture { components } => components.iter().map(|(w, d)| w * d.cdf(x)).sum(),
            Self::Truncated { base, lo, hi } => {
                let (clo, chi) = (base.cdf(*lo), base.cdf(*hi));
                ((base.cdf(x.clamp(*lo, *hi)) - clo) / (chi - clo)).clamp(0.0, 1.0)
            }
            Self::PiecewiseLinear { xs, ys } => {
                let mut acc = 0.0;
                for (xw, yw) in xs.windows(2).zip(ys.windows(2)) {
                    if x <= xw[0] {
                        break;
                    }
                    let right = x.min(xw[1]);
                    let y_right = yw[0] + (yw[1] - yw[0]) * (right - xw[0]) / (xw[1] - xw[0]);
                    acc += 0.5 * (right - xw[0]) * (yw[0] + y_right);
                }
                acc.min(1.0)
            }
        }
    }

    pub fn mean(&self) -> f64 {
        match self {
            Self::Normal { mean, .. } => *mean,
            Self::Laplace { location, .. } => *location,
            Self::Beta { a, b } => a / (a + b),
            Self::Mixture { components } => components.iter().map(|(w, d)| w * d.mean()).sum(),
            Self::Truncated { .. } | Self::PiecewiseLinear { .. } => {
                let (a, b) = self.bounds().expect("truncated densities are bounded");
                let n = 20_000;
                let h = (b - a) / n as f64;
                (0..=n)
                    .map(|i| {
                        let x = a + h * i as f64;
                        let w = if i == 0 || i == n { 0.5 } else { 1.0 };
                        w * x * self.pdf(x)
                    })
                    .sum::<f64>()
                    * h
            }
        }
    }

    /// Interval outside which the density vanishes, if any.
    pub fn bounds(&self) -> Option<(f64, f64)> {
        match self {
            Self::Beta { .. } => Some((0.0, 1.0)),
            Self::Truncated { lo, hi, .. } => Some((*lo, *hi)),
            Self::PiecewiseLinear { xs, .. } => Some((xs[0], xs[xs.len() - 1])),
            Self::Mixture { components } => components.iter().try_fold((f64::INFINITY, f64::NEG_INFINITY), |acc, (_, d)| {
                d.bounds().map(|(a, b)| (acc.0.min(a), acc.1.max(b)))
            }),
            _ => None,
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            Self::Normal { mean, sd } => NormalSampler::new(*mean, *sd).expect("valid normal").sample(rng),
            Self::Laplace { location, scale } => {
                let u: f64 = rng.random::<f64>() - 0.5;
                location - scale * u.signum() * (1.0 - 2.0 * u.abs()).ln()
            }
            Self::Beta { a, b } => BetaSampler::new(*a, *b).expect("valid beta").sample(rng),
            Self::Mixture { components } => {
                let mut u: f64 = rng.random();
                for (w, d) in components {
                    if u < *w {
                        return d.sample(rng);
                    }
                    u -= w;
                }
                components[components.len() - 1].1.sample(rng)
            }
            Self::Truncated { base, lo, hi } => loop {
                let x = base.sample(rng);
                if x >= *lo && x <= *hi {
                    return x;
                }
            },
            Self::PiecewiseLinear { xs, ys } => {
                let (a, b) = (xs[0], xs[xs.len() - 1]);
                let top = ys.iter().copied().fold(0.0, f64::max);
                loop {
                    let x = rng.random_range(a..=b);
                    if rng.random::<f64>() * top <= self.pdf(x) {
                        return x;
                    }
                }
            }
        }
    }

    pub fn sample_n<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<f64> {
        (0..n).map(|_| self.sample(rng)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn integral(d: &AnalyticDensity, a: f64, b: f64) -> f64 {
        let n = 200_000;
        let h = (b - a) / n as f64;
        (0..=n)
            .map(|i| {
                let w = if i == 0 || i == n { 0.5 } else { 1.0 };
                w * d.pdf(a + h * i as f64)
            })
            .sum::<f64>()
            * h
    }

    #[test]
    fn densities_integrate_to_one() {
        let cases = [
            AnalyticDensity::mixture(vec![(0.8, AnalyticDensity::normal(0.0, 2.0)), (0.2, AnalyticDensity::normal(0.0, 0.5f64.sqrt()))]).unwrap(),
            AnalyticDensity::beta(9.0, 3.0),
            AnalyticDensity::laplace(1.0, 1.0),
            AnalyticDensity::truncated(AnalyticDensity::normal(0.0, 1.0), 0.0, 1.0).unwrap(),
            AnalyticDensity::piecewise_linear(vec![0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0], vec![0.0, 1.0, 1.0, 0.0]).unwrap(),
        ];
        for d in &cases {
            let (a, b) = d.bounds().unwrap_or((-30.0, 30.0));
            assert!((integral(d, a, b) - 1.0).abs() < 1e-6, "{d:?}");
        }
        let trap = &cases[4];
        assert!((trap.pdf(0.5) - 1.5).abs() < 1e-12);
        assert!((trap.cdf(1.0) - 1.0).abs() < 1e-12 && (trap.cdf(0.5) - 0.5).abs() < 1e-12);
        assert!((trap.mean() - 0.5).abs() < 1e-6);
    }

    #[test]
    fn single_component_mixture_matches_component() {
        let m = AnalyticDensity::mixture(vec![(1.0, AnalyticDensity::normal(2.0, 0.5)), (0.0, AnalyticDensity::normal(9.0, 1.0))]).unwrap();
        let (mut r1, mut r2) = (ChaCha8Rng::seed_from_u64(1), ChaCha8Rng::seed_from_u64(1));
        let a = m.sample_n(100, &mut r1);
        assert!(a.iter().all(|x| (x - 2.0).abs() < 4.0));
        let _ = AnalyticDensity::normal(2.0, 0.5).sample_n(100, &mut r2);
        assert_eq!(m.pdf(2.1), AnalyticDensity::normal(2.0, 0.5).pdf(2.1));
    }

    #[test]
    fn bimodal_mixture_mean() {
        let d = AnalyticDensity::mixture(vec![
            (1.0 / 3.0, AnalyticDensity::normal(-1.0, 1.0)),
            (2.0 / 3.0, AnalyticDensity::normal(1.0, 0.3f64.sqrt())),
        ])
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let x = d.sample_n(100_000, &mut rng);
        let mean = x.iter().sum::<f64>() / x.len() as f64;
        let var: f64 = 1.0 / 3.0 * (1.0 + 16.0 / 9.0) + 2.0 / 3.0 * (0.3 + 4.0 / 9.0);
        assert!((mean - 1.0 / 3.0).abs() < 3.0 * (var / 1e5).sqrt(), "{mean}");
        assert!((d.mean() - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn bounded_samplers_stay_in_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert!(AnalyticDensity::beta(9.0, 3.0).sample_n(10_000, &mut rng).iter().all(|&x| x > 0.0 && x < 1.0));
        let t = AnalyticDensity::truncated(AnalyticDensity::normal(0.0, 0.4f64.sqrt()), 0.0, 1.0).unwrap();
        assert!(t.sample_n(10_000, &mut rng).iter().all(|&x| (0.0..=1.0).contains(&x)));
    }

    #[test]
    fn laplace_sampler_has_the_right_spread() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let x = AnalyticDensity::laplace(1.0, 2.0).sample_n(200_000, &mut rng);
        let mean = x.iter().sum::<f64>() / x.len() as f64;
        let mad = x.iter().map(|v| (v - 1.0).abs()).sum::<f64>() / x.len() as f64;
        assert!((mean - 1.0).abs() < 0.03 && (mad - 2.0).abs() < 0.03);
    }
}
