//! Uniform-grid quadrature and interpolation shared by the geometric and
//! density code. Node grids have `n + 1` points `i / n`; cell grids have `n`
//! midpoints `(i + 1/2) / n`.

use crate::Scalar;

/// Trapezoid integral of node samples over `[0, 1]`.
pub fn trapezoid<T: Scalar>(values: &[T]) -> T {
    let n = values.len() - 1;
    let h = T::one() / T::from_usize(n).unwrap();
    let half = T::lit(0.5);
    let inner: T = values[1..n].iter().copied().sum();
    h * (inner + half * (values[0] + values[n]))
}

/// Midpoint integral of cell samples over `[0, 1]`; exact for piecewise-constant functions.
pub fn cell_integral<T: Scalar>(cells: &[T]) -> T {
    let h = T::one() / T::from_usize(cells.len()).unwrap();
    h * cells.iter().copied().sum::<T>()
}

pub fn cell_inner<T: Scalar>(a: &[T], b: &[T]) -> T {
    debug_assert_eq!(a.len(), b.len());
    let h = T::one() / T::from_usize(a.len()).unwrap();
    h * a.iter().zip(b).map(|(&x, &y)| x * y).sum::<T>()
}

pub fn cell_norm<T: Scalar>(a: &[T]) -> T {
    cell_inner(a, a).sqrt()
}

pub fn node_points<T: Scalar>(n: usize) -> Vec<T> {
    let nf = T::from_usize(n).unwrap();
    (0..=n).map(|i| T::from_usize(i).unwrap() / nf).collect()
}

pub fn cell_midpoints<T: Scalar>(n: usize) -> Vec<T> {
    let nf = T::from_usize(n).unwrap();
    let half = T::lit(0.5);
    (0..n).map(|i| (T::from_usize(i).unwrap() + half) / nf).collect()
}

/// Locates `x` in a uniform node grid with `n` intervals: cell index and fractional offset.
pub fn locate<T: Scalar>(x: T, n: usize) -> (usize, T) {
    let nf = T::from_usize(n).unwrap();
    let s = (x * nf).max(T::zero()).min(nf);
    let k = s.floor().to_usize().unwrap_or(0).min(n - 1);
    (k, s - T::from_usize(k).unwrap())
}

/// Linear interpolation of node samples at `x` in `[0, 1]` (clamped).
pub fn lerp_nodes<T: Scalar>(values: &[T], x: T) -> T {
    let (k, f) = locate(x, values.len() - 1);
    (T::one() - f) * values[k] + f * values[k + 1]
}

/// Linear interpolation on a strictly increasing, not necessarily uniform, abscissa.
pub fn lerp_sorted<T: Scalar>(xs: &[T], ys: &[T], x: T) -> T {
    let last = xs.len() - 1;
    if x <= xs[0] {
        return ys[0];
    }
    if x >= xs[last] {
        return ys[last];
    }
    let k = xs.partition_point(|&v| v <= x).clamp(1, last);
    let (x0, x1) = (xs[k - 1], xs[k]);
    let f = (x - x0) / (x1 - x0);
    (T::one() - f) * ys[k - 1] + f * ys[k]
}
