//! Maximum-likelihood fitting of warped templates: support handling, the
//! likelihood itself, multi-start search at a fixed basis size, and AIC
//! selection over basis sizes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::geometry::{coeffs_to_warp, coefficient_radius, fourier_basis, BasisSet, CoefficientVector, SLOPE_FLOOR};
use crate::optimize::{nelder_mead, NelderMeadOptions};
use crate::quad::{cell_norm, locate, trapezoid};
use crate::shape::{CriticalKind, HeightRatioVector, ShapeSpec};
use crate::templates::{build_template, eval_knots, group_action, has_critical_kinds, GridDensity, UnitFunction};
use crate::{Error, Result, Scalar};

/// Fits need at least this many observations.
pub const MIN_SAMPLES: usize = 10;
/// Coefficients beyond this norm are pulled back radially.
pub const PROJECTION_MARGIN: f64 = 1e-6;
/// AIC values closer than this count as tied; the smaller basis wins.
pub const AIC_TIE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Support<T> {
    Known(T, T),
    Estimate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitConfig<T> {
    pub shape: ShapeSpec,
    pub j_min: usize,
    pub j_max: usize,
    pub j_step: usize,
    pub omega: T,
    /// Random starts per basis size, on top of the deterministic and warm starts.
    pub restarts: usize,
    /// Grid intervals used for warps and densities.
    pub grid: usize,
    pub seed: u64,
    pub support: Support<T>,
    pub parallel: bool,
    /// Nelder–Mead evaluation budget per free parameter.
    pub evals_per_param: usize,
}

impl<T: Scalar> FitConfig<T> {
    pub fn new(shape: ShapeSpec) -> Self {
        Self {
            shape,
            j_min: 2,
            j_max: 10,
            j_step: 2,
            omega: T::lit(1e-3),
            restarts: 16,
            grid: 1024,
            seed: 0,
            support: Support::Estimate,
            parallel: true,
            evals_per_param: 300,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.j_min < 1 || self.j_min > self.j_max {
            return Err(Error::Config(format!(
                "basis sweep {}..{} must satisfy 1 <= min <= max",
                self.j_min, self.j_max
            )));
        }
        if self.j_step < 1 {
            return Err(Error::Config("basis sweep step must be positive".into()));
        }
        if self.restarts < 1 {
            return Err(Error::Config("at least one restart is required".into()));
        }
        if !(self.omega > T::zero()) || !self.omega.is_finite() {
            return Err(Error::Config(format!("template floor {} must be positive", self.omega)));
        }
        if let Support::Known(a, b) = self.support {
            if !(a < b) || !a.is_finite() || !b.is_finite() {
                return Err(Error::Config(format!("support [{a}, {b}] is empty")));
            }
        }
        // The basis constructor checks the grid against the largest dimension.
        fourier_basis::<T>(self.j_max, self.grid).map(|_| ())
    }

    pub fn dimensions(&self) -> Vec<usize> {
        (self.j_min..=self.j_max).step_by(self.j_step).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRecord<T> {
    pub j: usize,
    pub loglik: T,
    pub aic: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityEstimate<T> {
    /// Estimate on the unit interval.
    pub density: GridDensity<T>,
    pub c_hat: CoefficientVector<T>,
    pub lambda_hat: HeightRatioVector<T>,
    pub j: usize,
    pub loglik: T,
    pub aic: T,
    /// `(A, B)` in data units.
    pub support: (T, T),
    pub shape: ShapeSpec,
    pub omega: T,
    pub sweep: Vec<SweepRecord<T>>,
}

impl<T: Scalar> DensityEstimate<T> {
    /// Density in data units; zero outside the support.
    pub fn pdf(&self, x: T) -> T {
        let (a, b) = self.support;
        if x < a || x > b {
            return T::zero();
        }
        self.density.eval((x - a) / (b - a)) / (b - a)
    }

    /// `points` equally spaced `(x, p(x))` pairs across the support.
    pub fn curve(&self, points: usize) -> Vec<(T, T)> {
        let (a, b) = self.support;
        let last = T::from_usize(points.max(2) - 1).unwrap();
        (0..points.max(2))
            .map(|i| {
                // Evaluate at the unit coordinate so the endpoints cannot round outside the support.
                let t = T::from_usize(i).unwrap() / last;
                (a + (b - a) * t, self.density.eval(t) / (b - a))
            })
            .collect()
    }

    pub fn mode_count(&self) -> usize {
        crate::templates::count_modes(&self.density)
    }
}

fn mean_sd<T: Scalar>(x: &[T]) -> (T, T) {
    let n = T::from_usize(x.len()).unwrap();
    let mean = x.iter().copied().sum::<T>() / n;
    let ss: T = x.iter().map(|&v| (v - mean) * (v - mean)).sum();
    (mean, (ss / (n - T::one())).sqrt())
}

pub(crate) fn sample_sd<T: Scalar>(x: &[T]) -> T {
    mean_sd(x).1
}

/// `A = min − sd/√n`, `B = max + sd/√n` with the sample standard deviation.
pub fn estimate_support<T: Scalar>(x: &[T]) -> Result<(T, T)> {
    if x.len() < 2 {
        return Err(Error::DegenerateSample("support needs at least two observations".into()));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::DegenerateSample("sample contains non-finite values".into()));
    }
    let sd = sample_sd(x);
    if !(sd > T::zero()) {
        return Err(Error::DegenerateSample("sample is constant".into()));
    }
    let pad = sd / T::from_usize(x.len()).unwrap().sqrt();
    let lo = x.iter().copied().fold(T::infinity(), T::min);
    let hi = x.iter().copied().fold(T::neg_infinity(), T::max);
    Ok((lo - pad, hi + pad))
}

pub fn rescale_to_unit<T: Scalar>(x: &[T], a: T, b: T) -> Result<Vec<T>> {
    if !(a < b) {
        return Err(Error::Range(format!("empty interval [{a}, {b}]")));
    }
    x.iter()
        .map(|&v| {
            if v >= a && v <= b {
                Ok(((v - a) / (b - a)).min(T::one()))
            } else {
                Err(Error::Range(format!("{v} lies outside [{a}, {b}]")))
            }
        })
        .collect()
}

pub fn rescale_from_unit<T: Scalar>(z: &[T], a: T, b: T) -> Vec<T> {
    z.iter().map(|&v| a + v * (b - a)).collect()
}

/// `Σ log p(z_i)` for `p = (g_λ^ω, γ_c)` sampled on `cfg.grid` intervals.
pub fn log_likelihood<T: Scalar>(
    z: &[T],
    c: &CoefficientVector<T>,
    lambda: &HeightRatioVector<T>,
    cfg: &FitConfig<T>,
) -> Result<T> {
    if c.norm() > coefficient_radius::<T>() {
        return Err(Error::Constraint(format!("coefficient norm {} exceeds 2π", c.norm())));
    }
    if z.iter().any(|&v| !(v >= T::zero() && v <= T::one())) {
        return Err(Error::Range("samples must lie in [0, 1]".into()));
    }
    let basis = fourier_basis(c.dim(), cfg.grid)?;
    let warp = coeffs_to_warp(c, &basis)?;
    let template = build_template(&cfg.shape, lambda, cfg.omega)?;
    let p = group_action(&template, &warp)?;
    Ok(z.iter().map(|&v| p.eval(v).ln()).sum())
}

/// Result of the multi-start search at one basis size.
#[derive(Debug, Clone, PartialEq)]
pub struct FixedFit<T> {
    pub c: CoefficientVector<T>,
    pub lambda: HeightRatioVector<T>,
    pub loglik: T,
    pub(crate) theta: Vec<T>,
    pub(crate) density: GridDensity<T>,
}

/// Per-sample weights for the localized likelihood. Weights are scaled to
/// average one over the samples, so the weighted log-likelihood is on the
/// same scale as the plain one.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct SampleWeights<T> {
    w: Vec<T>,
}

impl<T: Scalar> SampleWeights<T> {
    /// `None` when the weights are all equal, which makes the fit identical to the unweighted one.
    pub(crate) fn from_probabilities(p: &[T]) -> Option<Self> {
        if p.windows(2).all(|w| w[0] == w[1]) {
            return None;
        }
        let m = T::from_usize(p.len()).unwrap();
        let total: T = p.iter().copied().sum();
        Some(Self {
            w: p.iter().map(|&x| x * m / total).collect(),
        })
    }
}

struct Problem<'a, T> {
    basis: &'a BasisSet<T>,
    shape: &'a ShapeSpec,
    kinds: Vec<CriticalKind>,
    omega: T,
    located: Vec<(usize, T)>,
    weights: Option<&'a [T]>,
    radius: T,
}

struct Workspace<T> {
    v: Vec<T>,
    gamma: Vec<T>,
    p: Vec<T>,
}

impl<'a, T: Scalar> Problem<'a, T> {
    fn new(z: &[T], basis: &'a BasisSet<T>, cfg: &'a FitConfig<T>, weights: Option<&'a SampleWeights<T>>) -> Self {
        let n = basis.cells();
        Self {
            basis,
            shape: &cfg.shape,
            kinds: cfg.shape.critical_kinds(),
            omega: cfg.omega,
            located: z.iter().map(|&v| locate(v, n)).collect(),
            weights: weights.map(|w| w.w.as_slice()),
            radius: coefficient_radius::<T>() - T::lit(PROJECTION_MARGIN),
        }
    }

    fn workspace(&self) -> Workspace<T> {
        let n = self.basis.cells();
        Workspace {
            v: vec![T::zero(); n],
            gamma: vec![T::zero(); n + 1],
            p: vec![T::zero(); n + 1],
        }
    }

    fn j(&self) -> usize {
        self.basis.dim()
    }

    fn project(&self, c: &[T]) -> Vec<T> {
        let norm = c.iter().map(|&x| x * x).sum::<T>().sqrt();
        if norm > self.radius {
            c.iter().map(|&x| x * self.radius / norm).collect()
        } else {
            c.to_vec()
        }
    }

    /// Fills `ws.p` with unnormalized node values and returns their mass, or
    /// `None` when the parameter leaves the feasible shape class.
    fn raw_density(&self, theta: &[T], ws: &mut Workspace<T>) -> Option<T> {
        let (c, u) = theta.split_at(self.j());
        let c = self.project(c);
        self.basis.combine_into(&c, &mut ws.v);
        let norm = cell_norm(&ws.v);
        let (cos, sinc) = if norm < T::lit(crate::geometry::SERIES_LIMIT) {
            (T::one(), T::zero())
        } else {
            (norm.cos(), norm.sin() / norm)
        };
        let floor = T::lit(SLOPE_FLOOR);
        let mut acc = T::zero();
        ws.gamma[0] = T::zero();
        for (g, &x) in ws.gamma[1..].iter_mut().zip(&ws.v) {
            let q = cos + sinc * x;
            acc = acc + (q * q).max(floor);
            *g = acc;
        }
        let heights = self.shape.heights_from_unconstrained(u, self.omega);
        if heights.iter().any(|h| !(h.is_finite() && *h > T::zero())) {
            return None;
        }
        let knots = self.shape.knot_heights(&heights);
        for (p, &g) in ws.p.iter_mut().zip(&ws.gamma) {
            *p = eval_knots(&knots, g / acc);
        }
        if !has_critical_kinds(&ws.p, &self.kinds) {
            return None;
        }
        let mass = trapezoid(&ws.p);
        (mass > T::zero() && mass.is_finite()).then_some(mass)
    }

    /// Log-likelihood of `theta`, `-∞` when infeasible.
    fn loglik(&self, theta: &[T], ws: &mut Workspace<T>) -> T {
        let Some(mass) = self.raw_density(theta, ws) else {
            return T::neg_infinity();
        };
        let p = &ws.p;
        let at = |&(k, f): &(usize, T)| (T::one() - f) * p[k] + f * p[k + 1];
        let sum: T = match self.weights {
            // One logarithm per block of products unless a product leaves the normal range.
            None => self
                .located
                .chunks(8)
                .map(|block| {
                    let prod = block.iter().fold(T::one(), |acc, s| acc * at(s));
                    if prod.is_normal() {
                        prod.ln()
                    } else {
                        block.iter().map(|s| at(s).ln()).sum()
                    }
                })
                .sum(),
            Some(w) => self.located.iter().zip(w).map(|(s, &wi)| wi * at(s).ln()).sum(),
        };
        let n = T::from_usize(self.located.len()).unwrap();
        let ll = sum - n * mass.ln();
        if ll.is_finite() {
            ll
        } else {
            T::neg_infinity()
        }
    }
}

fn start_rng(seed: u64, j: usize, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((j as u64) << 32) | index as u64);
    rng
}

fn random_start<T: Scalar>(j: usize, lambda_dim: usize, rng: &mut ChaCha8Rng) -> Vec<T> {
    let dir: Vec<f64> = (0..j).map(|_| rng.sample(StandardNormal)).collect();
    let len = dir.iter().map(|x| x * x).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
    let radius = std::f64::consts::FRAC_PI_2 * rng.random::<f64>().powf(1.0 / j as f64);
    let mut theta: Vec<T> = dir.iter().map(|x| T::lit(x / len * radius)).collect();
    // Log-height increments drawn log-uniformly from [0.1, 1].
    theta.extend((0..lambda_dim).map(|_| T::lit(rng.random_range(0.1f64.ln()..0.0))));
    theta
}

fn fit_fixed_j_inner<T: Scalar>(
    z: &[T],
    j: usize,
    cfg: &FitConfig<T>,
    seed: u64,
    weights: Option<&SampleWeights<T>>,
    warm: Option<&[T]>,
) -> Result<FixedFit<T>> {
    let basis = fourier_basis(j, cfg.grid)?;
    let problem = Problem::new(z, &basis, cfg, weights);
    let lambda_dim = cfg.shape.lambda_dim();
    let mut deterministic = vec![T::zero(); j];
    deterministic.extend(cfg.shape.midpoint_unconstrained::<T>());
    let mut starts = vec![deterministic];
    if let Some(w) = warm {
        let mut s = w[..w.len() - lambda_dim].to_vec();
        s.resize(j, T::zero());
        s.extend_from_slice(&w[w.len() - lambda_dim..]);
        starts.push(s);
    }
    let offset = starts.len();
    starts.extend((0..cfg.restarts).map(|i| random_start::<T>(j, lambda_dim, &mut start_rng(seed, j, i + offset))));

    let dim = j + lambda_dim;
    let opts = NelderMeadOptions {
        max_evals: cfg.evals_per_param * dim,
        f_tol: T::lit(1e-10),
        x_tol: T::lit(1e-7),
        initial_step: T::lit(0.25),
    };
    let n = T::from_usize(z.len()).unwrap();
    let run = |start: &Vec<T>| {
        let mut ws = problem.workspace();
        let m = nelder_mead(|theta| -problem.loglik(theta, &mut ws) / n, start, &opts);
        let mut theta = m.x;
        let projected = problem.project(&theta[..j]);
        theta[..j].copy_from_slice(&projected);
        let ll = problem.loglik(&theta, &mut ws);
        (theta, ll)
    };
    let results: Vec<(Vec<T>, T)> = if cfg.parallel {
        starts.par_iter().map(run).collect()
    } else {
        starts.iter().map(run).collect()
    };
    let mut best: Option<(Vec<T>, T)> = None;
    for (theta, ll) in results {
        if !ll.is_finite() {
            continue;
        }
        if best.as_ref().is_none_or(|(_, b)| ll > *b) {
            best = Some((theta, ll));
        }
    }
    let (theta, loglik) =
        best.ok_or_else(|| Error::OptimizationFailed(format!("no start produced a finite likelihood at J = {j}")))?;
    let mut ws = problem.workspace();
    problem.raw_density(&theta, &mut ws);
    let density = GridDensity::from_values(ws.p)?;
    let heights = cfg.shape.heights_from_unconstrained(&theta[j..], cfg.omega);
    Ok(FixedFit {
        c: CoefficientVector::new(theta[..j].to_vec()),
        lambda: cfg.shape.lambda_from_heights(&heights),
        loglik,
        theta,
        density,
    })
}

/// Best of the deterministic start (`c = 0`, midpoint heights) and
/// `cfg.restarts` random starts at basis size `j`.
pub fn fit_fixed_j<T: Scalar>(z: &[T], j: usize, cfg: &FitConfig<T>, seed: u64) -> Result<FixedFit<T>> {
    cfg.validate()?;
    if z.iter().any(|&v| !(v >= T::zero() && v <= T::one())) {
        return Err(Error::Range("samples must lie in [0, 1]".into()));
    }
    fit_fixed_j_inner(z, j, cfg, seed, None, None)
}

pub(crate) fn resolve_support<T: Scalar>(x: &[T], support: Support<T>) -> Result<(T, T)> {
    match support {
        Support::Known(a, b) => Ok((a, b)),
        Support::Estimate => estimate_support(x),
    }
}

pub(crate) fn fit_sample<T: Scalar>(
    x: &[T],
    cfg: &FitConfig<T>,
    weights: Option<&SampleWeights<T>>,
) -> Result<DensityEstimate<T>> {
    cfg.validate()?;
    if x.len() < MIN_SAMPLES {
        return Err(Error::DegenerateSample(format!(
            "{} observations; at least {MIN_SAMPLES} are required",
            x.len()
        )));
    }
    let (a, b) = resolve_support(x, cfg.support)?;
    let z = rescale_to_unit(x, a, b)?;
    let k_lambda = cfg.shape.lambda_dim();
    let mut sweep = Vec::new();
    let mut chosen: Option<(FixedFit<T>, T)> = None;
    let mut warm: Option<Vec<T>> = None;
    for j in cfg.dimensions() {
        let fit = fit_fixed_j_inner(&z, j, cfg, cfg.seed, weights, warm.as_deref())?;
        let k = T::from_usize(j + k_lambda).unwrap();
        let aic = k + k - (fit.loglik + fit.loglik);
        sweep.push(SweepRecord {
            j,
            loglik: fit.loglik,
            aic,
        });
        warm = Some(fit.theta.clone());
        if chosen.as_ref().is_none_or(|(_, best)| aic < *best - T::lit(AIC_TIE)) {
            chosen = Some((fit, aic));
        }
    }
    let (fit, aic) = chosen.expect("sweep has at least one dimension");
    Ok(DensityEstimate {
        density: fit.density,
        j: fit.c.dim(),
        c_hat: fit.c,
        lambda_hat: fit.lambda,
        loglik: fit.loglik,
        aic,
        support: (a, b),
        shape: cfg.shape.clone(),
        omega: cfg.omega,
        sweep,
    })
}

/// Shape-constrained maximum-likelihood density estimate of raw samples `x`.
pub fn fit<T: Scalar>(x: &[T], cfg: &FitConfig<T>) -> Result<DensityEstimate<T>> {
    fit_sample(x, cfg, None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unimodal() -> FitConfig<f64> {
        FitConfig::new(ShapeSpec::modes(1).unwrap())
    }

    #[test]
    fn support_of_two_points() {
        let (a, b) = estimate_support(&[0.0f64, 1.0]).unwrap();
        assert!((a + 0.5).abs() < 1e-15 && (b - 1.5).abs() < 1e-15);
        assert!(matches!(estimate_support(&[2.0f64; 5]), Err(Error::DegenerateSample(_))));
    }

    #[test]
    fn rescaling() {
        let z = rescale_to_unit(&[1.0f64, 2.0, 3.0], 1.0, 3.0).unwrap();
        assert_eq!(z, vec![0.0, 0.5, 1.0]);
        assert!(matches!(rescale_to_unit(&[4.0f64], 1.0, 3.0), Err(Error::Range(_))));
        let back = rescale_from_unit(&z, 1.0, 3.0);
        assert_eq!(back, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn triangle_likelihood_at_identity() {
        let cfg = unimodal();
        let z: Vec<f64> = (0..50).map(|i| (i as f64 + 0.5) / 50.0).collect();
        let ll = log_likelihood(&z, &CoefficientVector::zeros(2), &HeightRatioVector::empty(), &cfg).unwrap();
        // Normalized floored triangle: (ω + (1 − ω)(1 − |2t − 1|)) / ((1 + ω) / 2).
        let w = 1e-3;
        let expected: f64 = z
            .iter()
            .map(|&t| ((w + (1.0 - w) * (1.0 - (2.0 * t - 1.0f64).abs())) * 2.0 / (1.0 + w)).ln())
            .sum();
        assert!((ll - expected).abs() < 1e-9, "{ll} vs {expected}");
    }

    #[test]
    fn fast_objective_matches_reference() {
        let cfg = FitConfig::new(ShapeSpec::modes(2).unwrap());
        let z: Vec<f64> = (0..200).map(|i| ((i * 37) % 200) as f64 / 199.0).collect();
        let c = CoefficientVector::new(vec![0.3, -0.2, 0.1, 0.4]);
        let lambda = HeightRatioVector::new(vec![0.4, 0.7]);
        let reference = log_likelihood(&z, &c, &lambda, &cfg).unwrap();
        let basis = fourier_basis(4, cfg.grid).unwrap();
        let problem = Problem::new(&z, &basis, &cfg, None);
        let mut theta = c.values().to_vec();
        theta.extend(cfg.shape.unconstrained_from_lambda(&lambda).unwrap());
        let fast = problem.loglik(&theta, &mut problem.workspace());
        assert!((fast - reference).abs() < 1e-8 * reference.abs(), "{fast} vs {reference}");
    }

    #[test]
    fn constraint_violations_are_reported() {
        let cfg = FitConfig::new(ShapeSpec::modes(2).unwrap());
        let z = [0.5f64];
        let big = CoefficientVector::new(vec![7.0, 0.0]);
        assert!(matches!(
            log_likelihood(&z, &big, &HeightRatioVector::new(vec![0.4, 0.7]), &cfg),
            Err(Error::Constraint(_))
        ));
        assert!(matches!(
            log_likelihood(&z, &CoefficientVector::zeros(2), &HeightRatioVector::new(vec![0.4, 0.2]), &cfg),
            Err(Error::Constraint(_))
        ));
    }

    #[test]
    fn config_validation() {
        let mut cfg = unimodal();
        cfg.j_min = 0;
        assert!(cfg.validate().is_err());
        cfg.j_min = 4;
        cfg.j_max = 2;
        assert!(cfg.validate().is_err());
        let mut cfg = unimodal();
        cfg.restarts = 0;
        assert!(cfg.validate().is_err());
        assert_eq!(unimodal().dimensions(), vec![2, 4, 6, 8, 10]);
    }

    #[test]
    fn small_samples_are_rejected() {
        let cfg = unimodal();
        assert!(matches!(fit(&[1.0f64, 2.0, 3.0], &cfg), Err(Error::DegenerateSample(_))));
    }

    #[test]
    fn seeded_fits_are_reproducible_and_parallel_invariant() {
        let mut cfg = unimodal();
        cfg.j_max = 4;
        cfg.restarts = 4;
        let x: Vec<f64> = (0..200).map(|i| ((i as f64) * 0.618_034).fract().powi(2)).collect();
        let a = fit(&x, &cfg).unwrap();
        let b = fit(&x, &cfg).unwrap();
        cfg.parallel = false;
        let c = fit(&x, &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert_eq!(a.mode_count(), 1);
        assert!((a.density.integral() - 1.0).abs() < 1e-12);
        let start = log_likelihood(
            &rescale_to_unit(&x, a.support.0, a.support.1).unwrap(),
            &CoefficientVector::zeros(a.j),
            &cfg.shape.lambda_from_heights(&cfg.shape.heights_from_unconstrained(&[], cfg.omega)),
            &cfg,
        )
        .unwrap();
        assert!(a.loglik >= start);
    }

    #[test]
    fn weights_that_are_all_equal_are_dropped() {
        assert!(SampleWeights::from_probabilities(&[0.25f64; 4]).is_none());
        let w = SampleWeights::from_probabilities(&[0.5f64, 0.25, 0.25]).unwrap();
        assert_eq!(w.w, vec![1.5, 0.75, 0.75]);
    }
}
