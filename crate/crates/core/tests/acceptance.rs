//! Acceptance gate: one PASS/FAIL line per criterion, non-zero exit if any fails.

use std::cell::Cell;
use std::time::Instant;

use proptest::prelude::*;
use proptest::test_runner::{Config as ProptestConfig, RngAlgorithm, TestCaseError, TestRng, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use warpdens::eval::{find_benchmark, oracle_density, run_benchmark, BenchmarkRun, RunOptions};
use warpdens::templates::{floorless_template, warp_function};
use warpdens::{
    build_template, coeffs_to_warp, count_modes, exp_map, fit, fourier_basis, group_action, height_ratios_of_fn,
    inv_exp_map, inv_exp_map_point, oracle_reconstruct_warp, srsf, srsf_inverse, CoefficientVector, FitConfig,
    GridDensity, HeightRatioVector, ShapeSpec, UnitFunction,
};

const ROUND_TRIP_TOL: f64 = 1e-6;
const ROUND_TRIP_SECONDS: f64 = 10.0;
const RATIO_TOL: f64 = 1e-6;
const COMPAT_TOL: f64 = 1e-4;
const ACTION_SECONDS: f64 = 30.0;
/// Refining the grid 4x must cut materialization error by at least this (16 for exact second order).
const SECOND_ORDER_RATIO: f64 = 8.0;
const ORACLE_TOL: f64 = 1e-3;
const UNIMODAL_L2: [(usize, f64); 2] = [(100, 0.30), (1000, 0.17)];
const UNIMODAL_SECONDS: f64 = 600.0;
const BIMODAL_L2: [(usize, f64); 2] = [(100, 1.0), (1000, 0.55)];
const CONDITIONAL_L2: f64 = 0.9;
const LIPSCHITZ_DRIFT: f64 = 0.10;
const NORMALIZATION_TOL: f64 = 1e-6;
const REPLICATES: usize = 20;

struct Gate {
    failed: Vec<usize>,
}

impl Gate {
    fn report(&mut self, id: usize, ok: bool, detail: String) {
        println!("{} criterion {id:>2}: {detail}", if ok { "PASS" } else { "FAIL" });
        if !ok {
            self.failed.push(id);
        }
    }
}

fn ball(j: usize, radius: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let dir: Vec<f64> = (0..j).map(|_| rng.sample(StandardNormal)).collect();
    let len = dir.iter().map(|x| x * x).sum::<f64>().sqrt();
    let r = radius * rng.random::<f64>().powf(1.0 / j as f64);
    dir.iter().map(|x| x / len * r).collect()
}

fn sup(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn random_lambda(shape: &ShapeSpec, rng: &mut ChaCha8Rng) -> HeightRatioVector<f64> {
    let u: Vec<f64> = (0..shape.lambda_dim()).map(|_| rng.random_range(0.1f64.ln()..0.0)).collect();
    shape.lambda_from_heights(&shape.heights_from_unconstrained(&u, 1e-3))
}

fn geometry_round_trips(gate: &mut Gate) {
    let start = Instant::now();
    let n = 4096;
    let bases: Vec<_> = (1..=8).map(|j| fourier_basis::<f64>(j, n).unwrap()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut warp_err, mut sphere_err) = (0.0f64, 0.0f64);
    for _ in 0..1000 {
        let j = rng.random_range(1..=8);
        let c = CoefficientVector::new(ball(j, std::f64::consts::FRAC_PI_2 * (1.0 - 1e-9), &mut rng));
        let basis = &bases[j - 1];
        let w = coeffs_to_warp(&c, basis).unwrap();
        let back = srsf_inverse(&srsf(&w)).unwrap();
        warp_err = warp_err.max(w.sup_distance(&back));
        let v = basis.combine(&c).unwrap();
        let v_back = inv_exp_map_point(&exp_map(&v));
        sphere_err = sphere_err.max(sup(v.values(), v_back.values()));
        let q = srsf(&w);
        let q_back = exp_map(&inv_exp_map(&q));
        sphere_err = sphere_err.max(sup(q.values(), q_back.values()));
    }
    let secs = start.elapsed().as_secs_f64();
    gate.report(
        1,
        warp_err <= ROUND_TRIP_TOL && sphere_err <= ROUND_TRIP_TOL && secs < ROUND_TRIP_SECONDS,
        format!("geometry round trips over 1000 warps: srsf {warp_err:.2e}, exp/inv-exp {sphere_err:.2e} (tol {ROUND_TRIP_TOL:.0e}), {secs:.2} s"),
    );
}

/// Well-separated Beta mixture with `m` modes.
fn smooth_density(m: usize, rng: &mut ChaCha8Rng) -> impl Fn(f64) -> f64 + Clone {
    let kappa = 80.0 * (m * m) as f64;
    let parts: Vec<(f64, statrs::distribution::Beta)> = (0..m)
        .map(|k| {
            let mean = (k as f64 + 0.5) / m as f64;
            let w = rng.random_range(0.3..1.0);
            (w, statrs::distribution::Beta::new(mean * kappa, (1.0 - mean) * kappa).unwrap())
        })
        .collect();
    move |x: f64| {
        use statrs::distribution::Continuous;
        parts.iter().map(|(w, b)| w * b.pdf(x.clamp(0.0, 1.0))).sum()
    }
}

fn relative_gap(a: &HeightRatioVector<f64>, b: &HeightRatioVector<f64>) -> f64 {
    a.values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| (x - y).abs() / x.abs().max(1e-300))
        .fold(0.0, f64::max)
}

fn action_properties(gate: &mut Gate) {
    let start = Instant::now();
    let n = 4096;
    let fine = 4 * n;
    let js = [2, 4, 6, 8];
    let bases: Vec<_> = js.iter().map(|&j| fourier_basis::<f64>(j, n).unwrap()).collect();
    let fine_bases: Vec<_> = js.iter().map(|&j| fourier_basis::<f64>(j, fine).unwrap()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut mode_failures, mut ratio_err, mut compat_err) = (0usize, 0.0f64, 0.0f64);
    let (mut grid_compat_err, mut fine_compat_err) = (0.0f64, 0.0f64);
    let random_coeffs = |rng: &mut ChaCha8Rng| {
        let k = rng.random_range(0..js.len());
        (k, CoefficientVector::new(ball(bases[k].dim(), std::f64::consts::PI, rng)))
    };
    for pair in 0..200 {
        let m = rng.random_range(1..=4);
        let shape = ShapeSpec::modes(m).unwrap();
        let (c1, c2) = (random_coeffs(&mut rng), random_coeffs(&mut rng));
        let (g1, g2) = (
            coeffs_to_warp(&c1.1, &bases[c1.0]).unwrap(),
            coeffs_to_warp(&c2.1, &bases[c2.0]).unwrap(),
        );
        let composed = g1.compose(&g2).unwrap();
        let mut check = |p: &dyn Fn(f64) -> f64, lambda: HeightRatioVector<f64>, smooth: bool| {
            let acted = group_action(&p, &g1).unwrap();
            if count_modes(&acted) != m {
                mode_failures += 1;
            }
            let warped = warp_function(&p, &g1).unwrap();
            match height_ratios_of_fn(&warped, n, &shape) {
                Ok(r) => ratio_err = ratio_err.max(relative_gap(&lambda, &r)),
                Err(_) => mode_failures += 1,
            }
            // ((p, γ₁), γ₂) against (p, γ₁∘γ₂), with the inner action kept continuous.
            let twice = group_action(&warped, &g2).unwrap();
            let direct = group_action(&p, &composed).unwrap();
            compat_err = compat_err.max(twice.sup_distance(&direct));
            if smooth {
                // Materializing the inner action on the grid adds interpolation error,
                // measured here at two resolutions to confirm it is second order.
                let twice_grid = group_action(&acted, &g2).unwrap();
                grid_compat_err = grid_compat_err.max(twice_grid.sup_distance(&direct));
                let (f1, f2) = (
                    coeffs_to_warp(&c1.1, &fine_bases[c1.0]).unwrap(),
                    coeffs_to_warp(&c2.1, &fine_bases[c2.0]).unwrap(),
                );
                // Against the continuous inner action, which matches the direct one to rounding.
                let fine_grid = group_action(&group_action(&p, &f1).unwrap(), &f2).unwrap();
                let fine_exact = group_action(&warp_function(&p, &f1).unwrap(), &f2).unwrap();
                fine_compat_err = fine_compat_err.max(fine_grid.sup_distance(&fine_exact));
            }
        };
        if pair % 2 == 0 {
            let lambda = random_lambda(&shape, &mut rng);
            let g = build_template(&shape, &lambda, 1e-3).unwrap();
            check(&|x| g.eval(x), lambda, false);
        } else {
            let f = smooth_density(m, &mut rng);
            let lambda = height_ratios_of_fn(&f, n, &shape).unwrap();
            check(&f, lambda, true);
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let grid_order = grid_compat_err / fine_compat_err;
    gate.report(
        2,
        mode_failures == 0
            && ratio_err <= RATIO_TOL
            && compat_err <= COMPAT_TOL
            && grid_order >= SECOND_ORDER_RATIO
            && secs < ACTION_SECONDS,
        format!(
            "group action over 200 pairs: {mode_failures} mode-count changes, ratio drift {ratio_err:.2e} (tol {RATIO_TOL:.0e}), \
             compatibility {compat_err:.2e} (tol {COMPAT_TOL:.0e}); grid-materialized {grid_compat_err:.2e} at N={n}, \
             {fine_compat_err:.2e} at N={fine}, ratio {grid_order:.1} (>= {SECOND_ORDER_RATIO}), {secs:.2} s"
        ),
    );
}

fn oracle_reconstruction(gate: &mut Gate) {
    let n = 4096;
    let mut worst = Vec::new();
    let mut ok = true;
    for name in ["beta-bimodal", "beta22"] {
        let (pdf, shape) = oracle_density(name).unwrap();
        let p0 = GridDensity::from_fn(n, &|x| pdf(x)).unwrap();
        let err = oracle_reconstruct_warp(&p0, &shape)
            .and_then(|(gamma, lambda)| group_action(&floorless_template(&shape, &lambda)?, &gamma))
            .map(|rec| {
                rec.values()
                    .iter()
                    .zip(p0.nodes())
                    .map(|(r, t)| (r - pdf(t)).abs())
                    .fold(0.0, f64::max)
            })
            .unwrap_or(f64::INFINITY);
        ok &= err <= ORACLE_TOL;
        worst.push(format!("{name} {err:.2e}"));
    }
    gate.report(3, ok, format!("constructive warp reconstruction L∞: {} (tol {ORACLE_TOL:.0e})", worst.join(", ")));
}

fn bench(name: &str, n: usize) -> (BenchmarkRun, f64) {
    let spec = find_benchmark(name).unwrap();
    let start = Instant::now();
    let opts = RunOptions {
        replicates: REPLICATES,
        seed: 2024,
        ..Default::default()
    };
    let run = run_benchmark(&spec, n, &opts).unwrap();
    (run, start.elapsed().as_secs_f64())
}

fn median_l2(run: &BenchmarkRun) -> f64 {
    if run.summary.failures > 0 {
        return f64::INFINITY;
    }
    run.summary.l2.map_or(f64::INFINITY, |s| s.median)
}

fn table_reproductions(gate: &mut Gate) {
    let mut unimodal = Vec::new();
    let mut bimodal = Vec::new();
    let mut unimodal_secs = 0.0;
    for n in [100, 500, 1000] {
        let (run, secs) = bench("symmetric-unimodal", n);
        if n != 500 {
            unimodal_secs += secs;
        }
        println!("     symmetric-unimodal n={n}: median L2 {:.4}, {secs:.1} s", median_l2(&run));
        unimodal.push((n, run));
    }
    for n in [100, 500, 1000] {
        let (run, secs) = bench("bimodal", n);
        println!("     bimodal n={n}: median L2 {:.4}, {secs:.1} s", median_l2(&run));
        bimodal.push((n, run));
    }
    let lookup = |runs: &[(usize, BenchmarkRun)], n: usize| median_l2(&runs.iter().find(|r| r.0 == n).unwrap().1);

    let ok4 = UNIMODAL_L2.iter().all(|&(n, tol)| lookup(&unimodal, n) <= tol) && unimodal_secs < UNIMODAL_SECONDS;
    gate.report(
        4,
        ok4,
        format!(
            "symmetric unimodal median L2: n=100 {:.4} (≤ {}), n=1000 {:.4} (≤ {}), {unimodal_secs:.0} s",
            lookup(&unimodal, 100),
            UNIMODAL_L2[0].1,
            lookup(&unimodal, 1000),
            UNIMODAL_L2[1].1
        ),
    );

    let all_bimodal = bimodal
        .iter()
        .filter(|(n, _)| *n != 500)
        .all(|(_, r)| r.summary.failures == 0 && r.records.iter().all(|rec| rec.modes == 2));
    let ok5 = BIMODAL_L2.iter().all(|&(n, tol)| lookup(&bimodal, n) <= tol) && all_bimodal;
    gate.report(
        5,
        ok5,
        format!(
            "bimodal median L2: n=100 {:.4} (≤ {}), n=1000 {:.4} (≤ {}), every estimate two modes: {all_bimodal}",
            lookup(&bimodal, 100),
            BIMODAL_L2[0].1,
            lookup(&bimodal, 1000),
            BIMODAL_L2[1].1
        ),
    );

    let (cde, secs) = bench("cde-bimodal", 1000);
    let all_two = cde.summary.failures == 0 && cde.records.iter().all(|r| r.modes == 2);
    gate.report(
        6,
        median_l2(&cde) <= CONDITIONAL_L2 && all_two,
        format!(
            "bimodal conditional at the covariate median, n=1000: median L2 {:.4} (≤ {CONDITIONAL_L2}), every estimate two modes: {all_two}, {secs:.0} s",
            median_l2(&cde)
        ),
    );

    let decreasing = |runs: &[(usize, BenchmarkRun)]| {
        let m: Vec<f64> = runs.iter().map(|(_, r)| median_l2(r)).collect();
        (m.windows(2).all(|w| w[1] < w[0]), m)
    };
    let (a, ma) = decreasing(&unimodal);
    let (b, mb) = decreasing(&bimodal);
    gate.report(
        7,
        a && b,
        format!("median L2 over n = 100, 500, 1000: symmetric unimodal {ma:.4?}, bimodal {mb:.4?}"),
    );
}

fn lipschitz_ratio(gate: &mut Gate) {
    let shape = ShapeSpec::modes(2).unwrap();
    let j = 6;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut pairs = Vec::new();
    while pairs.len() < 500 {
        let c1 = ball(j, std::f64::consts::FRAC_PI_2, &mut rng);
        let u1: Vec<f64> = (0..shape.lambda_dim()).map(|_| rng.random_range(0.1f64.ln()..0.0)).collect();
        let scale = 10f64.powf(rng.random_range(-3.0..0.0));
        let c2: Vec<f64> = c1.iter().map(|&c| c + scale * rng.sample::<f64, _>(StandardNormal)).collect();
        let u2: Vec<f64> = u1.iter().map(|&u| u + scale * rng.sample::<f64, _>(StandardNormal)).collect();
        if c2.iter().map(|x| x * x).sum::<f64>().sqrt() >= 2.0 * std::f64::consts::PI {
            continue;
        }
        let lambda = |u: &[f64]| shape.lambda_from_heights(&shape.heights_from_unconstrained(u, 1e-3));
        pairs.push((c1, lambda(&u1), c2, lambda(&u2)));
    }
    let max_ratio = |n: usize| {
        let basis = fourier_basis::<f64>(j, n).unwrap();
        let density = |c: &[f64], l: &HeightRatioVector<f64>| {
            let w = coeffs_to_warp(&CoefficientVector::new(c.to_vec()), &basis).unwrap();
            group_action(&build_template(&shape, l, 1e-3).unwrap(), &w).unwrap()
        };
        pairs
            .iter()
            .map(|(c1, l1, c2, l2)| {
                let gap = density(c1, l1).sup_distance(&density(c2, l2));
                let dist: f64 = c1.iter().zip(c2).map(|(a, b)| (a - b).abs()).sum::<f64>()
                    + l1.values().iter().zip(l2.values()).map(|(a, b)| (a - b).abs()).sum::<f64>();
                gap / dist
            })
            .fold(0.0, f64::max)
    };
    let (a, b) = (max_ratio(1024), max_ratio(2048));
    let drift = (b - a).abs() / a;
    gate.report(
        8,
        a.is_finite() && b.is_finite() && drift < LIPSCHITZ_DRIFT,
        format!("parameter-to-density ratio max over 500 pairs: N=1024 {a:.4}, N=2048 {b:.4}, change {:.2}% (< 10%)", drift * 100.0),
    );
}

#[derive(Debug, Clone)]
enum Adversary {
    Uniform,
    ManyBumps(usize),
    PointMass,
    Ties,
}

fn adversarial_sample(kind: &Adversary, n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match kind {
        Adversary::Uniform => (0..n).map(|_| rng.random_range(-1.0..1.0)).collect(),
        Adversary::ManyBumps(k) => (0..n)
            .map(|_| rng.random_range(0..*k) as f64 + 0.02 * rng.sample::<f64, _>(StandardNormal))
            .collect(),
        Adversary::PointMass => (0..n)
            .map(|i| if i % 20 == 0 { rng.random_range(-5.0..5.0) } else { 1.0 + 1e-9 * rng.random::<f64>() })
            .collect(),
        Adversary::Ties => (0..n).map(|_| rng.random_range(0..4) as f64).collect(),
    }
}

fn shape_guarantee(gate: &mut Gate) {
    let start = Instant::now();
    let strategy = (
        prop_oneof![
            Just(Adversary::Uniform),
            (3usize..12).prop_map(Adversary::ManyBumps),
            Just(Adversary::PointMass),
            Just(Adversary::Ties),
        ],
        1usize..=4,
        40usize..300,
        any::<u64>(),
    );
    let config = ProptestConfig {
        cases: 50,
        failure_persistence: None,
        max_shrink_iters: 0,
        ..ProptestConfig::default()
    };
    let mut runner = TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    let worst_mass = Cell::new(0.0f64);
    let cases = Cell::new(0usize);
    let result = runner.run(&strategy, |(kind, m, n, seed)| {
        let x = adversarial_sample(&kind, n, seed);
        let mut cfg = FitConfig::new(ShapeSpec::modes(m).unwrap());
        cfg.j_max = 6;
        cfg.restarts = 6;
        cfg.seed = seed;
        let est = fit(&x, &cfg).map_err(|e| TestCaseError::fail(format!("{kind:?} m={m}: {e}")))?;
        let unit_mass = est.density.integral();
        let (a, b) = est.support;
        let curve: Vec<f64> = est.curve(4097).iter().map(|p| p.1).collect();
        let data_mass = warpdens::quad::trapezoid(&curve) * (b - a);
        worst_mass.set(worst_mass.get().max((unit_mass - 1.0).abs()).max((data_mass - 1.0).abs()));
        cases.set(cases.get() + 1);
        prop_assert_eq!(est.mode_count(), m, "{:?} with {} modes", kind, m);
        prop_assert!((unit_mass - 1.0).abs() <= NORMALIZATION_TOL);
        prop_assert!((data_mass - 1.0).abs() <= NORMALIZATION_TOL);
        Ok(())
    });
    let secs = start.elapsed().as_secs_f64();
    let (cases, worst_mass) = (cases.get(), worst_mass.get());
    let detail = match &result {
        Ok(()) => format!("{cases} adversarial fits keep the requested mode count, worst mass error {worst_mass:.1e}, {secs:.0} s"),
        Err(e) => format!("after {cases} fits: {e}"),
    };
    gate.report(9, result.is_ok() && cases == 50, detail);
}

fn determinism(gate: &mut Gate) {
    let spec = find_benchmark("bimodal").unwrap();
    let opts = RunOptions {
        replicates: 4,
        seed: 31,
        restarts: Some(6),
        ..Default::default()
    };
    let parallel = run_benchmark(&spec, 150, &opts).unwrap().replicate_csv();
    let again = run_benchmark(&spec, 150, &opts).unwrap().replicate_csv();
    let serial = run_benchmark(&spec, 150, &RunOptions { parallel: false, ..opts.clone() })
        .unwrap()
        .replicate_csv();
    let threads = rayon::ThreadPoolBuilder::new()
        .num_threads(4)
        .build()
        .unwrap()
        .install(|| run_benchmark(&spec, 150, &opts).unwrap().replicate_csv());
    gate.report(
        10,
        parallel == again && parallel == serial && parallel == threads,
        format!(
            "per-replicate CSV identical across reruns, serial, and a 4-thread pool ({} bytes)",
            parallel.len()
        ),
    );
}

fn main() {
    let mut gate = Gate { failed: Vec::new() };
    geometry_round_trips(&mut gate);
    action_properties(&mut gate);
    oracle_reconstruction(&mut gate);
    lipschitz_ratio(&mut gate);
    determinism(&mut gate);
    shape_guarantee(&mut gate);
    table_reproductions(&mut gate);
    if gate.failed.is_empty() {
        println!("acceptance: all criteria passed");
    } else {
        gate.failed.sort();
        println!("acceptance: failed criteria {:?}", gate.failed);
        std::process::exit(1);
    }
}
