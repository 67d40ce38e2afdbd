//! Shape templates, the normalizing action of warps on densities, critical
//! point detection, and the constructive warp that carries a template onto a
//! known density.

use crate::geometry::WarpingGrid;
use crate::quad::{lerp_nodes, node_points, trapezoid};
use crate::shape::{CriticalKind, HeightRatioVector, HeightRole, Piece, ShapeSpec};
use crate::{Error, Result, Scalar};

/// Relative tolerance below which height fluctuations are not critical points.
pub const MODE_TOLERANCE: f64 = 1e-6;

/// Function on `[0, 1]` that can be evaluated anywhere.
pub trait UnitFunction<T> {
    fn eval(&self, t: T) -> T;
}

impl<T, F: Fn(T) -> T> UnitFunction<T> for F {
    fn eval(&self, t: T) -> T {
        self(t)
    }
}

/// Piecewise-linear template with equal-width pieces, first mode at height 1.
#[derive(Debug, Clone, PartialEq)]
pub struct TemplateFunction<T> {
    shape: ShapeSpec,
    lambda: HeightRatioVector<T>,
    omega: T,
    knots: Vec<T>,
}

/// Builds `g_λ^ω`: knots at `k / K` for `K` pieces with the critical heights
/// implied by `lambda`; pinned boundaries sit at `omega`.
pub fn build_template<T: Scalar>(
    shape: &ShapeSpec,
    lambda: &HeightRatioVector<T>,
    omega: T,
) -> Result<TemplateFunction<T>> {
    if !(omega >= T::zero()) || !omega.is_finite() {
        return Err(Error::Domain(format!("template floor {omega} must be non-negative")));
    }
    let heights = shape.critical_heights(lambda, omega)?;
    Ok(TemplateFunction {
        shape: shape.clone(),
        lambda: lambda.clone(),
        omega,
        knots: shape.knot_heights(&heights),
    })
}

impl<T: Scalar> TemplateFunction<T> {
    pub(crate) fn from_knots(shape: &ShapeSpec, lambda: HeightRatioVector<T>, omega: T, knots: Vec<T>) -> Self {
        Self {
            shape: shape.clone(),
            lambda,
            omega,
            knots,
        }
    }

    pub fn shape(&self) -> &ShapeSpec {
        &self.shape
    }

    pub fn lambda(&self) -> &HeightRatioVector<T> {
        &self.lambda
    }

    pub fn omega(&self) -> T {
        self.omega
    }

    pub fn knot_heights(&self) -> &[T] {
        &self.knots
    }

    /// Knot locations `a_j = j / K`.
    pub fn critical_locations(&self) -> Vec<T> {
        node_points(self.knots.len() - 1)
    }

    pub fn sample(&self, intervals: usize) -> Vec<T> {
        node_points(intervals).into_iter().map(|t| self.eval(t)).collect()
    }
}

#[inline]
pub(crate) fn eval_knots<T: Scalar>(knots: &[T], x: T) -> T {
    lerp_nodes(knots, x)
}

impl<T: Scalar> UnitFunction<T> for TemplateFunction<T> {
    fn eval(&self, t: T) -> T {
        eval_knots(&self.knots, t)
    }
}

/// Probability density on `[0, 1]` sampled on a uniform node grid and
/// normalized by the trapezoid rule.
#[derive(Debug, Clone, PartialEq)]
pub struct GridDensity<T> {
    p: Vec<T>,
}

impl<T: Scalar> GridDensity<T> {
    pub fn from_values(mut values: Vec<T>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::Domain("density grid needs at least two nodes".into()));
        }
        if values.iter().any(|&x| !(x >= T::zero()) || !x.is_finite()) {
            return Err(Error::Domain("density values must be finite and non-negative".into()));
        }
        let mass = trapezoid(&values);
        if !(mass > T::zero()) {
            return Err(Error::Domain("density has zero mass".into()));
        }
        values.iter_mut().for_each(|x| *x = *x / mass);
        Ok(Self { p: values })
    }

    pub fn from_fn(intervals: usize, f: &impl UnitFunction<T>) -> Result<Self> {
        Self::from_values(node_points(intervals).into_iter().map(|t| f.eval(t)).collect())
    }


    pub fn values(&self) -> &[T] {
        &self.p
    }

    pub fn intervals(&self) -> usize {
        self.p.len() - 1
    }

    pub fn nodes(&self) -> Vec<T> {
        node_points(self.intervals())
    }

    pub fn integral(&self) -> T {
        trapezoid(&self.p)
    }

    pub fn sup_distance(&self, other: &GridDensity<T>) -> T {
        self.p
            .iter()
            .zip(&other.p)
            .map(|(&a, &b)| (a - b).abs())
            .fold(T::zero(), T::max)
    }
}

impl<T: Scalar> UnitFunction<T> for GridDensity<T> {
    fn eval(&self, t: T) -> T {
        lerp_nodes(&self.p, t)
    }
}

/// `t ↦ f(γ(t)) / ∫ f∘γ` as a continuous function, without resampling `f`.
#[derive(Debug, Clone, Copy)]
pub struct Warped<'a, F, T> {
    base: &'a F,
    warp: &'a WarpingGrid<T>,
    scale: T,
}

pub fn warp_function<'a, T: Scalar, F: UnitFunction<T>>(
    base: &'a F,
    warp: &'a WarpingGrid<T>,
) -> Result<Warped<'a, F, T>> {
    let raw: Vec<T> = warp.values().iter().map(|&g| base.eval(g)).collect();
    let scale = trapezoid(&raw);
    if !(scale > T::zero()) || !scale.is_finite() {
        return Err(Error::Domain("warped function has no mass".into()));
    }
    Ok(Warped { base, warp, scale })
}

impl<T: Scalar, F: UnitFunction<T>> UnitFunction<T> for Warped<'_, F, T> {
    fn eval(&self, t: T) -> T {
        self.base.eval(self.warp.eval(t)) / self.scale
    }
}

/// Group action `(p, γ) = p∘γ / ∫ p∘γ`, sampled on the grid of `w`.
pub fn group_action<T: Scalar>(p: &impl UnitFunction<T>, w: &WarpingGrid<T>) -> Result<GridDensity<T>> {
    GridDensity::from_values(w.values().iter().map(|&g| p.eval(g)).collect())
}

/// A detected critical point of sampled values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremum<T> {
    pub kind: CriticalKind,
    pub index: usize,
    pub value: T,
    /// Node range whose values stay within the tolerance of `value`.
    pub plateau: (usize, usize),
}

/// Walks the samples with hysteresis `delta`, reporting each extremum (the
/// boundary ones included) in order. Stops early when `emit` returns false.
fn scan_extrema<T: Scalar>(values: &[T], delta: T, mut emit: impl FnMut(CriticalKind, usize) -> bool) {
    let n = values.len();
    let (mut lo, mut hi) = (0usize, 0usize);
    let mut i = 1;
    // Direction is unknown until the samples leave a band of width delta.
    let mut rising = loop {
        if i == n {
            // Everything within tolerance: a single plateau maximum.
            emit(CriticalKind::Max, 0);
            return;
        }
        let x = values[i];
        if x < values[lo] {
            lo = i;
        }
        if x > values[hi] {
            hi = i;
        }
        if x > values[lo] + delta {
            if !emit(CriticalKind::Min, lo) {
                return;
            }
            break true;
        }
        if x < values[hi] - delta {
            if !emit(CriticalKind::Max, hi) {
                return;
            }
            break false;
        }
        i += 1;
    };
    let mut ext = i;
    for (j, &x) in values.iter().enumerate().skip(i + 1) {
        if rising {
            if x > values[ext] {
                ext = j;
            } else if x < values[ext] - delta {
                if !emit(CriticalKind::Max, ext) {
                    return;
                }
                rising = false;
                ext = j;
            }
        } else if x < values[ext] {
            ext = j;
        } else if x > values[ext] + delta {
            if !emit(CriticalKind::Min, ext) {
                return;
            }
            rising = true;
            ext = j;
        }
    }
    emit(if rising { CriticalKind::Max } else { CriticalKind::Min }, ext);
}

fn tolerance_band<T: Scalar>(values: &[T]) -> T {
    let top = values.iter().copied().fold(T::zero(), T::max);
    T::lit(MODE_TOLERANCE) * top
}

/// Critical points of sampled values after plateau merging, left to right.
pub fn critical_structure<T: Scalar>(values: &[T]) -> Vec<Extremum<T>> {
    let delta = tolerance_band(values);
    let mut found: Vec<(CriticalKind, usize)> = Vec::new();
    scan_extrema(values, delta, |k, i| {
        found.push((k, i));
        true
    });
    let last = values.len() - 1;
    (0..found.len())
        .map(|e| {
            let (kind, index) = found[e];
            let value = values[index];
            let left_limit = if e == 0 { 0 } else { found[e - 1].1 + 1 };
            let right_limit = if e + 1 == found.len() { last } else { found[e + 1].1 - 1 };
            let mut s = index;
            while s > left_limit && (values[s - 1] - value).abs() <= delta {
                s -= 1;
            }
            let mut t = index;
            while t < right_limit && (values[t + 1] - value).abs() <= delta {
                t += 1;
            }
            Extremum {
                kind,
                index,
                value,
                plateau: (s, t),
            }
        })
        .collect()
}

/// Whether the samples have exactly the given sequence of critical kinds.
pub(crate) fn has_critical_kinds<T: Scalar>(values: &[T], expected: &[CriticalKind]) -> bool {
    let delta = tolerance_band(values);
    let mut seen = 0usize;
    let mut ok = true;
    scan_extrema(values, delta, |k, _| {
        if seen < expected.len() && expected[seen] == k {
            seen += 1;
            true
        } else {
            ok = false;
            false
        }
    });
    ok && seen == expected.len()
}

pub fn count_modes_of_values<T: Scalar>(values: &[T]) -> usize {
    let mut modes = 0;
    scan_extrema(values, tolerance_band(values), |k, _| {
        if k == CriticalKind::Max {
            modes += 1;
        }
        true
    });
    modes
}

/// Number of local maxima (boundary maxima and plateaus count once).
pub fn count_modes<T: Scalar>(p: &GridDensity<T>) -> usize {
    count_modes_of_values(p.values())
}

fn matched_structure<T: Scalar>(values: &[T], shape: &ShapeSpec) -> Result<Vec<Extremum<T>>> {
    let found = critical_structure(values);
    let kinds: Vec<CriticalKind> = found.iter().map(|e| e.kind).collect();
    if kinds != shape.critical_kinds() {
        return Err(Error::Shape(format!(
            "expected critical points {:?} for {}, found {:?}",
            shape.critical_kinds(),
            shape,
            kinds
        )));
    }
    Ok(found)
}

/// Height-ratio vector of a sampled density, using node values as heights.
pub fn height_ratios_of<T: Scalar>(p: &GridDensity<T>, shape: &ShapeSpec) -> Result<HeightRatioVector<T>> {
    let found = matched_structure(p.values(), shape)?;
    let heights: Vec<T> = found.iter().map(|e| e.value).collect();
    Ok(shape.lambda_from_heights(&heights))
}

/// Height-ratio vector of a continuous function. Critical points are located
/// on an `intervals`-node sampling and their heights refined by golden-section
/// search between the neighbouring nodes.
pub fn height_ratios_of_fn<T: Scalar>(
    f: &impl UnitFunction<T>,
    intervals: usize,
    shape: &ShapeSpec,
) -> Result<HeightRatioVector<T>> {
    let t = node_points::<T>(intervals);
    let values: Vec<T> = t.iter().map(|&x| f.eval(x)).collect();
    let found = matched_structure(&values, shape)?;
    let heights: Vec<T> = found
        .iter()
        .map(|e| {
            let lo = t[e.index.saturating_sub(1)];
            let hi = t[(e.index + 1).min(intervals)];
            let refined = refine_extremum(f, lo, hi, e.kind);
            match e.kind {
                CriticalKind::Max => refined.max(e.value),
                CriticalKind::Min => refined.min(e.value),
            }
        })
        .collect();
    Ok(shape.lambda_from_heights(&heights))
}

fn refine_extremum<T: Scalar>(f: &impl UnitFunction<T>, mut a: T, mut b: T, kind: CriticalKind) -> T {
    let sign = if kind == CriticalKind::Max { T::one() } else { -T::one() };
    let g = |x: T| sign * f.eval(x);
    let ratio = T::lit(0.618_033_988_749_894_8);
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (g(c), g(d));
    let mut best = g(a).max(g(b)).max(fc).max(fd);
    for _ in 0..120 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = g(c);
            best = best.max(fc);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = g(d);
            best = best.max(fd);
        }
        if b - a <= T::epsilon() * (T::one() + a.abs()) {
            break;
        }
    }
    sign * best
}

/// Constructive warp carrying the floor-free template onto `p0`: on each
/// monotone piece the warp is the template's piece inverse applied to
/// `p0 / h1`, and flat pieces are mapped linearly across the matching plateau.
///
/// Returns the warp together with the height ratios of `p0`;
/// `group_action(build_template(shape, λ0, 0), γ0)` reproduces `p0`.
pub fn oracle_reconstruct_warp<T: Scalar>(
    p0: &GridDensity<T>,
    shape: &ShapeSpec,
) -> Result<(WarpingGrid<T>, HeightRatioVector<T>)> {
    let values = p0.values();
    let n = p0.intervals();
    let found = matched_structure(values, shape)?;
    let critical = shape.critical_points();
    let first_mode = found[shape.first_mode()].value;
    let mut heights: Vec<T> = found.iter().map(|e| e.value / first_mode).collect();
    for (h, c) in heights.iter_mut().zip(critical) {
        if c.role == HeightRole::Pinned {
            *h = T::zero();
        }
    }
    let lambda = shape.lambda_from_heights(&heights);
    let knots = shape.knot_heights(&heights);
    let pieces = shape.pieces();
    let k_total = pieces.len();

    // Grid node carried by each template knot.
    let mut knot_node = vec![0usize; k_total + 1];
    for (c, e) in critical.iter().zip(&found) {
        let span = c.last_knot - c.first_knot;
        if span == 0 {
            knot_node[c.first_knot] = e.index;
        } else {
            let (s, t) = e.plateau;
            for (step, k) in (c.first_knot..=c.last_knot).enumerate() {
                knot_node[k] = s + (t - s) * step / span;
            }
        }
    }
    knot_node[0] = 0;
    knot_node[k_total] = n;

    let kf = T::from_usize(k_total).unwrap();
    let mut gamma = vec![T::zero(); n + 1];
    for (k, piece) in pieces.iter().enumerate() {
        let (b0, b1) = (knot_node[k], knot_node[k + 1]);
        let base = T::from_usize(k).unwrap();
        for i in b0..=b1 {
            let frac = if *piece == Piece::Flat || knots[k + 1] == knots[k] {
                if b1 == b0 {
                    T::zero()
                } else {
                    T::from_usize(i - b0).unwrap() / T::from_usize(b1 - b0).unwrap()
                }
            } else {
                let y = values[i] / first_mode;
                ((y - knots[k]) / (knots[k + 1] - knots[k])).max(T::zero()).min(T::one())
            };
            gamma[i] = (base + frac) / kf;
        }
    }
    gamma[0] = T::zero();
    gamma[n] = T::one();
    Ok((WarpingGrid::new(gamma)?, lambda))
}

/// Template with floor zero used by [`oracle_reconstruct_warp`].
pub fn floorless_template<T: Scalar>(shape: &ShapeSpec, lambda: &HeightRatioVector<T>) -> Result<TemplateFunction<T>> {
    let mut heights = shape.critical_heights(lambda, T::zero())?;
    for (h, c) in heights.iter_mut().zip(shape.critical_points()) {
        if c.role == HeightRole::Pinned {
            *h = T::zero();
        }
    }
    Ok(TemplateFunction::from_knots(
        shape,
        lambda.clone(),
        T::zero(),
        shape.knot_heights(&heights),
    ))
}
