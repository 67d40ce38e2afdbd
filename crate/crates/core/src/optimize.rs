//! Derivative-free minimization with the adaptive Nelder–Mead simplex.

use crate::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMeadOptions<T> {
    pub max_evals: usize,
    /// Stop when the spread of simplex values falls below this.
    pub f_tol: T,
    /// Stop when every vertex is within this of the best one.
    pub x_tol: T,
    pub initial_step: T,
}

impl<T: Scalar> Default for NelderMeadOptions<T> {
    fn default() -> Self {
        Self {
            max_evals: 4000,
            f_tol: T::lit(1e-10),
            x_tol: T::lit(1e-8),
            initial_step: T::lit(0.25),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum<T> {
    pub x: Vec<T>,
    pub value: T,
    pub evals: usize,
    pub converged: bool,
}

/// Minimizes `f` from `x0`. Non-finite values are treated as `+∞`, so an
/// objective can reject infeasible points this way.
pub fn nelder_mead<T: Scalar>(mut f: impl FnMut(&[T]) -> T, x0: &[T], opts: &NelderMeadOptions<T>) -> Minimum<T> {
    let n = x0.len();
    let mut evals = 0usize;
    let mut eval = |x: &[T], evals: &mut usize| {
        *evals += 1;
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            T::infinity()
        }
    };
    if n == 0 {
        let value = eval(x0, &mut evals);
        return Minimum {
            x: Vec::new(),
            value,
            evals,
            converged: true,
        };
    }
    let nf = T::from_usize(n).unwrap();
    let one = T::one();
    let two = one + one;
    let half = one / two;
    // Dimension-adaptive coefficients.
    let alpha = one;
    let beta = one + two / nf;
    let gamma = T::lit(0.75) - half / nf;
    let delta = one - one / nf;

    let mut simplex: Vec<Vec<T>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] = v[i] + opts.initial_step;
        simplex.push(v);
    }
    let mut values: Vec<T> = simplex.iter().map(|v| eval(v, &mut evals)).collect();
    let mut order: Vec<usize> = (0..=n).collect();
    let mut centroid = vec![T::zero(); n];
    let mut trial = vec![T::zero(); n];
    let mut trial2 = vec![T::zero(); n];
    let mut converged = false;

    while evals < opts.max_evals {
        order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap_or(std::cmp::Ordering::Equal));
        let best = order[0];
        let worst = order[n];
        let second = order[n - 1];
        let f_spread = values[worst] - values[best];
        let x_spread = simplex
            .iter()
            .flat_map(|v| v.iter().zip(&simplex[best]).map(|(&a, &b)| (a - b).abs()))
            .fold(T::zero(), T::max);
        if values[best].is_finite() && f_spread <= opts.f_tol && x_spread <= opts.x_tol {
            converged = true;
            break;
        }
        if values[best].is_finite() && values[worst].is_finite() && f_spread <= opts.f_tol * T::lit(1e-2) {
            converged = true;
            break;
        }

        centroid.iter_mut().for_each(|c| *c = T::zero());
        for &i in &order[..n] {
            for (c, &x) in centroid.iter_mut().zip(&simplex[i]) {
                *c = *c + x;
            }
        }
        centroid.iter_mut().for_each(|c| *c = *c / nf);

        let along = |coef: T, out: &mut Vec<T>, w: &[T]| {
            for ((o, &c), &x) in out.iter_mut().zip(&centroid).zip(w) {
                *o = c + coef * (c - x);
            }
        };
        along(alpha, &mut trial, &simplex[worst]);
        let fr = eval(&trial, &mut evals);
        if fr < values[best] {
            along(beta, &mut trial2, &simplex[worst]);
            let fe = eval(&trial2, &mut evals);
            if fe < fr {
                simplex[worst].copy_from_slice(&trial2);
                values[worst] = fe;
            } else {
                simplex[worst].copy_from_slice(&trial);
                values[worst] = fr;
            }
            continue;
        }
        if fr < values[second] {
            simplex[worst].copy_from_slice(&trial);
            values[worst] = fr;
            continue;
        }
        let (coef, bound) = if fr < values[worst] { (gamma, fr) } else { (-gamma, values[worst]) };
        along(coef, &mut trial2, &simplex[worst]);
        let fc = eval(&trial2, &mut evals);
        if fc <= bound && fc.is_finite() {
            simplex[worst].copy_from_slice(&trial2);
            values[worst] = fc;
            continue;
        }
        // Shrink towards the best vertex.
        let anchor = simplex[best].clone();
        for &i in &order[1..] {
            for (x, &a) in simplex[i].iter_mut().zip(&anchor) {
                *x = a + delta * (*x - a);
            }
            values[i] = eval(&simplex[i], &mut evals);
        }
    }
    let best = (0..=n)
        .min_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap_or(std::cmp::Ordering::Equal))
        .unwrap();
    Minimum {
        x: simplex[best].clone(),
        value: values[best],
        evals,
        converged,
    }
}
