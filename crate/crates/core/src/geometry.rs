//! Warping functions of `[0, 1]` and their representation on the unit
//! Hilbert sphere.
//!
//! A warp is stored by its values on a uniform node grid and treated as the
//! piecewise-linear interpolant of those values. Its square-root slope
//! function is therefore piecewise constant and is stored per cell; the
//! tangent space at the constant function `1` and the Fourier basis live on
//! the same cell grid, so every inner product is the exact integral of a
//! piecewise-constant function. With that choice `srsf` and `srsf_inverse`
//! are exact inverses of each other, not merely inverses up to quadrature
//! error.

use crate::quad::{cell_inner, cell_integral, cell_midpoints, cell_norm, lerp_nodes, lerp_sorted};
use crate::{Error, Result, Scalar};

/// Squared-slope floor used when integrating sphere points back to warps.
pub(crate) const SLOPE_FLOOR: f64 = 1e-10;
/// Floor applied to finite-difference slopes before taking square roots.
const SRSF_FLOOR: f64 = 1e-12;
/// Below this arc length the exp / inverse-exp maps use their series limits.
pub(crate) const SERIES_LIMIT: f64 = 1e-9;

fn norm_tolerance<T: Scalar>() -> T {
    T::epsilon().sqrt() * T::lit(10.0)
}

/// Radius of the feasible coefficient ball `{c : |sum c_j B_j| <= 2 pi}`.
pub fn coefficient_radius<T: Scalar>() -> T {
    T::lit(2.0) * T::PI()
}

/// Orientation-preserving diffeomorphism of `[0, 1]` sampled on `n + 1` uniform nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct WarpingGrid<T> {
    gamma: Vec<T>,
}

impl<T: Scalar> WarpingGrid<T> {
    /// Validates pinned endpoints and strict monotonicity.
    pub fn new(gamma: Vec<T>) -> Result<Self> {
        if gamma.len() < 2 {
            return Err(Error::InvalidWarp("need at least two nodes".into()));
        }
        if gamma[0] != T::zero() || gamma[gamma.len() - 1] != T::one() {
            return Err(Error::InvalidWarp("endpoints must be pinned at 0 and 1".into()));
        }
        if let Some(i) = gamma.windows(2).position(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidWarp(format!(
                "not strictly increasing at node {i}"
            )));
        }
        Ok(Self { gamma })
    }

    pub fn identity(intervals: usize) -> Self {
        Self {
            gamma: crate::quad::node_points(intervals),
        }
    }

    pub fn from_fn(intervals: usize, f: impl Fn(T) -> T) -> Result<Self> {
        Self::new(crate::quad::node_points(intervals).into_iter().map(f).collect())
    }

    /// Number of grid intervals `n`.
    pub fn intervals(&self) -> usize {
        self.gamma.len() - 1
    }

    pub fn values(&self) -> &[T] {
        &self.gamma
    }

    pub fn nodes(&self) -> Vec<T> {
        crate::quad::node_points(self.intervals())
    }

    /// Piecewise-linear evaluation; arguments outside `[0, 1]` are clamped.
    pub fn eval(&self, x: T) -> T {
        lerp_nodes(&self.gamma, x)
    }

    /// `self ∘ inner`, sampled on the grid of `inner`.
    pub fn compose(&self, inner: &WarpingGrid<T>) -> Result<WarpingGrid<T>> {
        let n = inner.gamma.len();
        let mut out: Vec<T> = inner.gamma.iter().map(|&x| self.eval(x)).collect();
        out[0] = T::zero();
        out[n - 1] = T::one();
        WarpingGrid::new(out)
    }

    /// Inverse warp sampled on the same grid.
    pub fn inverse(&self) -> WarpingGrid<T> {
        let t = self.nodes();
        let n = t.len();
        let mut out: Vec<T> = t.iter().map(|&y| lerp_sorted(&self.gamma, &t, y)).collect();
        out[0] = T::zero();
        out[n - 1] = T::one();
        WarpingGrid { gamma: out }
    }

    pub fn sup_distance(&self, other: &WarpingGrid<T>) -> T {
        self.gamma
            .iter()
            .zip(&other.gamma)
            .map(|(&a, &b)| (a - b).abs())
            .fold(T::zero(), T::max)
    }
}

/// Square-root slope function of a warp: a point of the nonnegative orthant
/// of the unit sphere, one value per grid cell.
#[derive(Debug, Clone, PartialEq)]
pub struct SrsfGrid<T> {
    q: Vec<T>,
}

impl<T: Scalar> SrsfGrid<T> {
    pub fn new(q: Vec<T>) -> Result<Self> {
        if q.is_empty() {
            return Err(Error::InvalidSrsf("empty".into()));
        }
        if q.iter().any(|&x| !(x >= T::zero())) {
            return Err(Error::InvalidSrsf("negative or non-finite value".into()));
        }
        let norm = cell_norm(&q);
        if norm == T::zero() {
            return Err(Error::InvalidSrsf("zero norm".into()));
        }
        if (norm - T::one()).abs() > norm_tolerance() {
            return Err(Error::InvalidSrsf(format!("norm {norm} is not 1")));
        }
        Ok(Self { q })
    }

    pub fn values(&self) -> &[T] {
        &self.q
    }

    pub fn cells(&self) -> usize {
        self.q.len()
    }
}

/// Point of the unit sphere, not necessarily in the nonnegative orthant.
#[derive(Debug, Clone, PartialEq)]
pub struct SpherePoint<T> {
    q: Vec<T>,
}

impl<T: Scalar> SpherePoint<T> {
    pub fn values(&self) -> &[T] {
        &self.q
    }

    pub fn is_nonnegative(&self) -> bool {
        self.q.iter().all(|&x| x >= T::zero())
    }

    pub fn into_srsf(self) -> Result<SrsfGrid<T>> {
        SrsfGrid::new(self.q)
    }

    /// Warp whose squared slope is `q²`. Defined for any sphere point since
    /// the sign of `q` is lost in the square.
    pub fn to_warp(&self) -> Result<WarpingGrid<T>> {
        integrate_squared(&self.q, T::lit(SLOPE_FLOOR))
    }
}

/// Element of the tangent space at `1`: zero-mean, one value per cell.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentVector<T> {
    v: Vec<T>,
}

impl<T: Scalar> TangentVector<T> {
    pub fn new(v: Vec<T>) -> Result<Self> {
        if v.is_empty() {
            return Err(Error::Domain("empty tangent vector".into()));
        }
        let mean = cell_integral(&v);
        if mean.abs() > norm_tolerance::<T>() * (T::one() + cell_norm(&v)) {
            return Err(Error::Domain(format!(
                "tangent vector must be orthogonal to 1 (mean {mean})"
            )));
        }
        Ok(Self { v })
    }

    pub fn zeros(cells: usize) -> Self {
        Self {
            v: vec![T::zero(); cells],
        }
    }

    pub fn values(&self) -> &[T] {
        &self.v
    }

    pub fn norm(&self) -> T {
        cell_norm(&self.v)
    }
}

/// Tangent-space coordinates with respect to a [`BasisSet`].
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientVector<T> {
    c: Vec<T>,
}

impl<T: Scalar> CoefficientVector<T> {
    pub fn new(c: Vec<T>) -> Self {
        Self { c }
    }

    pub fn zeros(j: usize) -> Self {
        Self {
            c: vec![T::zero(); j],
        }
    }

    pub fn values(&self) -> &[T] {
        &self.c
    }

    pub fn dim(&self) -> usize {
        self.c.len()
    }

    /// Euclidean norm; equals the function norm for an orthonormal basis.
    pub fn norm(&self) -> T {
        self.c.iter().map(|&x| x * x).sum::<T>().sqrt()
    }
}

/// Orthonormal basis of (a subspace of) the tangent space, sampled per cell.
#[derive(Debug, Clone)]
pub struct BasisSet<T> {
    dim: usize,
    cells: usize,
    /// Row-major `dim x cells`.
    values: Vec<T>,
}

impl<T: Scalar> BasisSet<T> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn element(&self, j: usize) -> &[T] {
        &self.values[j * self.cells..(j + 1) * self.cells]
    }

    pub(crate) fn combine_into(&self, c: &[T], out: &mut [T]) {
        debug_assert_eq!(c.len(), self.dim);
        out.iter_mut().for_each(|x| *x = T::zero());
        for (j, &cj) in c.iter().enumerate() {
            if cj == T::zero() {
                continue;
            }
            for (o, &b) in out.iter_mut().zip(self.element(j)) {
                *o = *o + cj * b;
            }
        }
    }

    /// `sum_j c_j B_j` as a tangent vector.
    pub fn combine(&self, c: &CoefficientVector<T>) -> Result<TangentVector<T>> {
        if c.dim() != self.dim {
            return Err(Error::Domain(format!(
                "expected {} coefficients, got {}",
                self.dim,
                c.dim()
            )));
        }
        let mut v = vec![T::zero(); self.cells];
        self.combine_into(c.values(), &mut v);
        Ok(TangentVector { v })
    }

    pub fn project(&self, v: &TangentVector<T>) -> CoefficientVector<T> {
        CoefficientVector::new(
            (0..self.dim)
                .map(|j| cell_inner(v.values(), self.element(j)))
                .collect(),
        )
    }

    pub fn gram(&self) -> Vec<Vec<T>> {
        (0..self.dim)
            .map(|a| {
                (0..self.dim)
                    .map(|b| cell_inner(self.element(a), self.element(b)))
                    .collect()
            })
            .collect()
    }
}

/// Fourier basis of the zero-mean functions on `[0, 1]`, interleaved as
/// `√2 sin 2πt, √2 cos 2πt, √2 sin 4πt, ...`, sampled on `n` cells.
pub fn fourier_basis<T: Scalar>(j: usize, n: usize) -> Result<BasisSet<T>> {
    if j < 1 {
        return Err(Error::Domain("basis dimension must be at least 1".into()));
    }
    if n < 64 {
        return Err(Error::Domain(format!("grid of {n} cells is too coarse")));
    }
    let top_frequency = j.div_ceil(2);
    if 2 * top_frequency >= n {
        return Err(Error::Domain(format!(
            "{j} basis elements need a grid finer than {n} cells"
        )));
    }
    let mids = cell_midpoints::<T>(n);
    let root2 = T::SQRT_2();
    let two_pi = T::lit(2.0) * T::PI();
    let mut values = Vec::with_capacity(j * n);
    for idx in 0..j {
        let k = T::from_usize(idx / 2 + 1).unwrap();
        let is_sin = idx % 2 == 0;
        values.extend(mids.iter().map(|&t| {
            let a = two_pi * k * t;
            root2 * if is_sin { a.sin() } else { a.cos() }
        }));
    }
    Ok(BasisSet {
        dim: j,
        cells: n,
        values,
    })
}

/// `q = √γ̇`, with the slope of each linear piece floored before the root.
pub fn srsf<T: Scalar>(w: &WarpingGrid<T>) -> SrsfGrid<T> {
    let n = w.intervals();
    let nf = T::from_usize(n).unwrap();
    let floor = T::lit(SRSF_FLOOR);
    let q = w
        .gamma
        .windows(2)
        .map(|p| ((p[1] - p[0]) * nf).max(floor).sqrt())
        .collect();
    SrsfGrid { q }
}

pub(crate) fn integrate_squared<T: Scalar>(q: &[T], floor: T) -> Result<WarpingGrid<T>> {
    let n = q.len();
    let mut gamma = Vec::with_capacity(n + 1);
    gamma.push(T::zero());
    let mut acc = T::zero();
    for &x in q {
        acc = acc + (x * x).max(floor);
        gamma.push(acc);
    }
    if !(acc > T::zero()) || !acc.is_finite() {
        return Err(Error::InvalidSrsf("zero or non-finite norm".into()));
    }
    for g in gamma.iter_mut() {
        *g = *g / acc;
    }
    gamma[n] = T::one();
    WarpingGrid::new(gamma)
}

/// `γ(t) = ∫₀ᵗ q²`, renormalized so `γ(1) = 1` exactly.
pub fn srsf_inverse<T: Scalar>(q: &SrsfGrid<T>) -> Result<WarpingGrid<T>> {
    integrate_squared(&q.q, T::lit(SRSF_FLOOR))
}

/// Inverse exponential map at `1`: `v = θ / sin θ · (q - cos θ)`, `θ = acos⟨1, q⟩`.
pub fn inv_exp_map<T: Scalar>(q: &SrsfGrid<T>) -> TangentVector<T> {
    log_at_one(&q.q)
}

/// Inverse exponential map for any sphere point, SRSF or not.
pub fn inv_exp_map_point<T: Scalar>(q: &SpherePoint<T>) -> TangentVector<T> {
    log_at_one(&q.q)
}

fn log_at_one<T: Scalar>(q: &[T]) -> TangentVector<T> {
    let inner = cell_integral(q).max(-T::one()).min(T::one());
    let theta = inner.acos();
    if theta < T::lit(SERIES_LIMIT) {
        return TangentVector::zeros(q.len());
    }
    let scale = theta / theta.sin();
    let cos = theta.cos();
    TangentVector {
        v: q.iter().map(|&x| scale * (x - cos)).collect(),
    }
}

pub(crate) fn exp_map_into<T: Scalar>(v: &[T], out: &mut [T]) {
    let norm = cell_norm(v);
    if norm < T::lit(SERIES_LIMIT) {
        out.iter_mut().for_each(|x| *x = T::one());
        return;
    }
    let cos = norm.cos();
    let s = norm.sin() / norm;
    for (o, &x) in out.iter_mut().zip(v) {
        *o = cos + s * x;
    }
}

/// Exponential map at `1`: `cos|v| · 1 + sin|v| / |v| · v`.
pub fn exp_map<T: Scalar>(v: &TangentVector<T>) -> SpherePoint<T> {
    let mut q = vec![T::zero(); v.v.len()];
    exp_map_into(&v.v, &mut q);
    SpherePoint { q }
}

/// Coefficients to warp: basis expansion, exponential map, squared integration.
pub fn coeffs_to_warp<T: Scalar>(
    c: &CoefficientVector<T>,
    basis: &BasisSet<T>,
) -> Result<WarpingGrid<T>> {
    let v = basis.combine(c)?;
    let radius = coefficient_radius::<T>();
    if v.norm() > radius * (T::one() + norm_tolerance::<T>()) {
        return Err(Error::Domain(format!(
            "tangent norm {} exceeds 2π",
            v.norm()
        )));
    }
    exp_map(&v).to_warp()
}

/// Warp to coefficients: `c_j = ⟨exp⁻¹(srsf(w)), B_j⟩`.
pub fn warp_to_coeffs<T: Scalar>(
    w: &WarpingGrid<T>,
    basis: &BasisSet<T>,
) -> Result<CoefficientVector<T>> {
    if w.intervals() != basis.cells() {
        return Err(Error::Domain(format!(
            "warp has {} cells but basis has {}",
            w.intervals(),
            basis.cells()
        )));
    }
    Ok(basis.project(&inv_exp_map(&srsf(w))))
}
