//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the measured numbers (run with `--nocapture` to see them).
//!
//! The heavy ensembles (three distributions at n = 64/128/256 with 50,000
//! samples each) are computed once and shared across criteria.

#![allow(clippy::needless_range_loop)]

use std::sync::OnceLock;
use std::time::Instant;

use num_rational::Ratio;
use trigroots::coefficients::CoefficientDistribution;
use trigroots::covariance::{
    gaussian_mean_density, gaussian_variance_constant, sigma_limit, sigma_n, QuadratureParams,
};
use trigroots::edgeworth::{
    assemble_constants, edgeworth_residual, enumerate_survivors, survivor_patterns, MixingFamily,
    ResidualParams, TestFunction,
};
use trigroots::ergodic::{
    mixed_average, quartic_average, weighted_average, ErgodicQuery, MixedAverageKind,
    PeriodicFunction,
};
use trigroots::montecarlo::{compare_to_theory, run_ensemble, ExperimentConfig, ExperimentSummary};
use trigroots::polynomial::TrigPolynomialSample;
use trigroots::roots::{
    cluster_statistic, count_roots, kac_rice_count, kac_rice_upper_bound, min_modulus,
    SmoothedCountParams,
};
use trigroots::stream::{rng_for, StreamDomain};

const HEADLINE_M: usize = 50_000;
const HEADLINE_DEGREES: [usize; 3] = [64, 128, 256];
const SEED_GAUSSIAN: u64 = 1001;
const SEED_UNIFORM: u64 = 1002;
const SEED_MIXTURE: u64 = 1003;

struct HeadlineRuns {
    gaussian: ExperimentSummary,
    uniform: ExperimentSummary,
    mixture: ExperimentSummary,
}

fn headline_runs() -> &'static HeadlineRuns {
    static RUNS: OnceLock<HeadlineRuns> = OnceLock::new();
    RUNS.get_or_init(|| {
        let run = |dist: CoefficientDistribution, seed: u64| {
            let config = ExperimentConfig::new(dist, HEADLINE_DEGREES.to_vec(), HEADLINE_M, seed);
            run_ensemble(&config).expect("headline ensemble")
        };
        HeadlineRuns {
            gaussian: run(CoefficientDistribution::Gaussian, SEED_GAUSSIAN),
            uniform: run(CoefficientDistribution::Uniform, SEED_UNIFORM),
            mixture: run(mixture_dist(), SEED_MIXTURE),
        }
    })
}

fn mixture_dist() -> CoefficientDistribution {
    CoefficientDistribution::mixture(0.5, 0.5, 1.5).expect("valid mixture")
}

#[test]
fn criterion_01_exact_constants() {
    let start = Instant::now();
    let report = assemble_constants();
    let r = |n: i64, d: i64| Ratio::new(n, d);
    assert_eq!(report.inner_sum, r(9, 5), "inner sum");
    assert_eq!(report.gamma_prime_coefficient, r(1, 120), "off-diagonal coefficient");
    assert_eq!(report.theorem_coefficient, r(1, 60), "theorem coefficient");
    assert_eq!(report.iid_kurtosis_divisor, r(30, 1), "i.i.d. kurtosis divisor");
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "constants took {elapsed:?}");
    println!(
        "PASS criterion 1 (exact constants): 9/5 -> 1/120 -> 1/60, shift = (E Y^4 - 3)/30, in {:?}",
        elapsed
    );
}

#[test]
fn criterion_02_mean_universality() {
    let n = 256;
    let m = 5000;
    let gaussian = run_ensemble(&ExperimentConfig::new(
        CoefficientDistribution::Gaussian,
        vec![n],
        m,
        2101,
    ))
    .unwrap();
    let uniform = run_ensemble(&ExperimentConfig::new(
        CoefficientDistribution::Uniform,
        vec![n],
        m,
        2102,
    ))
    .unwrap();
    let (rg, ru) = (&gaussian.rows[0], &uniform.rows[0]);
    // the one-point Kac-Rice oracle at finite n; 1/sqrt(3) is its n->inf value
    let oracle = gaussian_mean_density(n) / n as f64;
    let asymptote = (1.0f64 / 3.0).sqrt();
    let combined_se = (rg.stderr_mean.powi(2) + ru.stderr_mean.powi(2)).sqrt();
    for (name, row) in [("gaussian", rg), ("uniform", ru)] {
        assert!(
            (row.mean_over_n - oracle).abs() <= 3.0 * combined_se,
            "{name}: mean/n = {} vs Kac-Rice oracle {oracle} (3 se = {})",
            row.mean_over_n,
            3.0 * combined_se
        );
    }
    println!(
        "PASS criterion 2 (mean universality): gaussian {:.5}, uniform {:.5} vs Kac-Rice {:.5} \
         (3 combined se = {:.5}; n->inf value 1/sqrt(3) = {:.5} sits {:+.1e} below the finite-n oracle)",
        rg.mean_over_n,
        ru.mean_over_n,
        oracle,
        3.0 * combined_se,
        asymptote,
        asymptote - oracle
    );
}

#[test]
fn criterion_03_nonuniversal_variance_shift() {
    let runs = headline_runs();
    let check = |name: &str, summary: &ExperimentSummary, dist: CoefficientDistribution, predicted: f64| {
        let table = dist.moment_table();
        assert!((table.y_star() / 60.0 - predicted).abs() < 1e-12);
        let report = compare_to_theory(summary, &runs.gaussian, &table).unwrap();
        assert_eq!(report.rows.len(), 3, "{name}: shifts at n = 64, 128, 256");
        for row in &report.rows {
            println!(
                "  {name} n={}: shift {:+.5} +- {:.5} (z vs prediction {:+.2})",
                row.n, row.observed_shift, row.stderr, row.z
            );
        }
        let last = report.rows.last().unwrap();
        assert_eq!(last.n, 256);
        assert!(
            (last.observed_shift - predicted).abs() <= 0.012,
            "{name}: shift at n=256 is {:+.5}, outside {predicted} +- 0.012",
            last.observed_shift
        );
        let ex = report.extrapolation.as_ref().expect("trend row");
        assert!(
            ex.z.abs() <= 3.0,
            "{name}: 1/n extrapolation {:+.5} +- {:.5} not consistent with {predicted}",
            ex.intercept,
            ex.intercept_se
        );
        println!(
            "  {name} 1/n extrapolation: {:+.5} +- {:.5} (z {:+.2})",
            ex.intercept, ex.intercept_se, ex.z
        );
        (last.observed_shift, ex.intercept)
    };
    let (shift_u, _) = check("uniform", &runs.uniform, CoefficientDistribution::Uniform, -0.04);
    let (shift_x, _) = check("mixture", &runs.mixture, mixture_dist(), 0.025);
    println!(
        "PASS criterion 3 (non-universal variance shift): uniform {shift_u:+.5} (predicted -0.040), \
         mixture {shift_x:+.5} (predicted +0.025), both within +-0.012; \
         the theoretical values are n->inf limits and are not reproducible beyond \
         this tolerance at desk scale"
    );
}

#[test]
fn criterion_04_gaussian_variance_constant() {
    let base = gaussian_variance_constant(&QuadratureParams::default());
    let doubled = gaussian_variance_constant(&QuadratureParams {
        panels_per_unit: 8,
        ..QuadratureParams::default()
    });
    let self_convergence = (doubled.value - base.value).abs();
    assert!(self_convergence < 1e-3, "resolution doubling moved C(G) by {self_convergence:e}");

    let runs = headline_runs();
    let mc = runs.gaussian.rows.iter().find(|r| r.n == 256).unwrap();
    let gap = (base.value - mc.var_over_n).abs();
    assert!(
        gap <= 0.02,
        "quadrature C(G) = {} vs Monte Carlo var/n = {} at n=256 (gap {gap})",
        base.value,
        mc.var_over_n
    );
    // the cited 0.56 concerns the [0, 2pi] normalization
    assert!(
        (base.two_pi_normalized - 0.56).abs() <= 0.03,
        "2 C(G) = {} not within 0.03 of 0.56",
        base.two_pi_normalized
    );
    println!(
        "PASS criterion 4 (variance constant): C(G) = {:.5} (MC {:.5}, gap {:.4}), \
         2 C(G) = {:.4} vs cited 0.56, doubling moves {:.1e}",
        base.value, mc.var_over_n, gap, base.two_pi_normalized, self_convergence
    );
}

#[test]
fn criterion_05_kac_rice_identity() {
    let start = Instant::now();
    let n = 64;
    let mut matches = 0usize;
    let mut flagged = 0usize;
    for j in 0..100u64 {
        let mut rng = rng_for(3001, StreamDomain::Generic, n as u64, j);
        let sample =
            TrigPolynomialSample::from_distribution(&CoefficientDistribution::Gaussian, n, &mut rng);
        let counted = count_roots(&sample);
        let (_, delta_ab) = min_modulus(&sample);
        let kr = kac_rice_count(&sample, &SmoothedCountParams::new(0.5 * delta_ab));
        let bound = kac_rice_upper_bound(&sample) as f64;
        assert!(kr.value <= bound + 1e-8, "sample {j}: 1 + N(p') bound violated: {} > {bound}", kr.value);
        if counted.is_suspicious() {
            flagged += 1;
            continue;
        }
        let rounded = kr.value.round() as usize;
        assert!(
            rounded == counted.count && (kr.value - counted.count as f64).abs() < 1e-6,
            "sample {j}: I(delta) = {} vs count {}",
            kr.value,
            counted.count
        );
        matches += 1;
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "criterion 5 took {elapsed:?}");
    println!(
        "PASS criterion 5 (Kac-Rice identity): {matches}/100 integer matches, {flagged} flagged, \
         1 + N(p') bound held on all samples, in {elapsed:?}"
    );
}

#[test]
fn criterion_06_ergodic_limits() {
    let start = Instant::now();
    let n = 1_000_000;
    let sqrt2 = std::f64::consts::SQRT_2;
    let (t, s) = (1.0, sqrt2);

    let cases = [(1u8, 1u8, 0.25), (1, 2, 1.0 / 12.0), (2, 2, 1.0 / 20.0)];
    for (i, j, limit) in cases {
        let value = quartic_average(i, j, 1, 2, t, s, n);
        assert!((value - limit).abs() < 1e-2, "quartic ({i},{j}): {value} vs {limit}");
    }
    let m1 = mixed_average(MixedAverageKind::ProductTimesSquare { i: 1, j: 1, l: 1 }, t, s, n);
    let m2 = mixed_average(MixedAverageKind::ProductTimesProduct { i: 2, j: 1 }, t, s, n);
    let m3 = mixed_average(MixedAverageKind::TripleProduct { i: [1, 2, 2], l: [1, 1, 1] }, t, s, n);
    for (name, v) in [("product-times-square", m1), ("product-times-product", m2), ("triple-product", m3)] {
        assert!(v.abs() < 1e-2, "{name}: {v}");
    }
    let w_cos2 = weighted_average(&ErgodicQuery::new(sqrt2, 2, n, PeriodicFunction::CosSquared));
    assert!((w_cos2 - 1.0 / 6.0).abs() < 5e-3, "weighted cos^2: {w_cos2}");
    let w_cos = weighted_average(&ErgodicQuery::new(sqrt2, 0, n, PeriodicFunction::Cos));
    assert!(w_cos.abs() < 5e-3, "weighted cos: {w_cos}");
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "criterion 6 took {elapsed:?}");
    println!(
        "PASS criterion 6 (ergodic limits): quartic -> 1/4, 1/12, 1/20 within 1e-2; \
         mixed within 1e-2 of 0; weighted within 5e-3, in {elapsed:?}"
    );
}

#[test]
fn criterion_07_covariance() {
    // entrywise convergence at rate <= C u / n over a (n, u) grid
    let c = 4.0;
    let mut max_rate = 0.0f64;
    for &n in &[16usize, 64, 256, 1024] {
        for &u in &[0.5, 1.0, 2.0, 5.0, (n as f64).sqrt()] {
            let fin = sigma_n(n, u + 1.0, 1.0);
            let lim = sigma_limit(u);
            for i in 1..=4 {
                for j in 1..=4 {
                    let diff = (fin.entry(i, j) - lim.entry(i, j)).abs();
                    assert!(diff <= c * u / n as f64, "n={n} u={u} ({i},{j}): {diff:e}");
                    max_rate = max_rate.max(diff * n as f64 / u);
                }
            }
        }
    }

    let far = sigma_limit(1e6);
    assert!((far.det() - 1.0 / 9.0).abs() <= 1e-4, "det at u=1e6: {}", far.det());

    let mut min_eig = f64::INFINITY;
    for k in 0..100 {
        let u = 0.15 * k as f64;
        min_eig = min_eig.min(sigma_limit(u).min_eigenvalue());
        min_eig = min_eig.min(sigma_n(64, u + 0.3, 0.3).min_eigenvalue());
    }
    assert!(min_eig >= -1e-10, "minimum eigenvalue {min_eig}");

    // empirical covariance of the pair statistic against sigma_n, 4 SE
    let n = 32;
    let (t, s) = (5.0, 1.5);
    let expect = sigma_n(n, t, s);
    let m = 100_000;
    let mut sums = [[0.0f64; 4]; 4];
    for idx in 0..m {
        let mut rng = rng_for(4001, StreamDomain::CovarianceCheck, n as u64, idx as u64);
        let sample =
            TrigPolynomialSample::from_distribution(&CoefficientDistribution::Gaussian, n, &mut rng);
        let v = sample.pair_statistic(t, s);
        for i in 0..4 {
            for j in 0..4 {
                sums[i][j] += v[i] * v[j];
            }
        }
    }
    let mut max_z = 0.0f64;
    for i in 0..4 {
        for j in 0..4 {
            let emp = sums[i][j] / m as f64;
            let want = expect.entry(i + 1, j + 1);
            let var_bound =
                expect.entry(i + 1, i + 1) * expect.entry(j + 1, j + 1) + want * want;
            let se = (var_bound / m as f64).sqrt();
            let z = (emp - want).abs() / se;
            assert!(z < 4.0, "entry ({},{}): z = {z}", i + 1, j + 1);
            max_z = max_z.max(z);
        }
    }
    println!(
        "PASS criterion 7 (covariance): rate constant {:.2} (<= {c}), det(1e6) -> 1/9, \
         eigenvalues >= 0, empirical covariance max |z| = {:.2} over {m} samples",
        max_rate, max_z
    );
}

#[test]
fn criterion_08_edgeworth() {
    // survivor classification over all 4^6 index pairs
    let survivors = enumerate_survivors();
    let patterns = survivor_patterns();
    assert_eq!(survivors, patterns, "cancellation survivors equal the three patterns");

    // residual trend for the shipped even test function
    let params = ResidualParams {
        mc_samples: 200_000,
        gamma1_mc_samples: 100_000,
        gh_order: 40,
        base_seed: 4101,
    };
    let rows = edgeworth_residual(
        TestFunction::FirstCoordFourth,
        &mixture_dist(),
        &MixingFamily::Identity,
        &[64, 128, 256],
        &params,
    )
    .unwrap();
    for pair in rows.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        let se = ((a.stderr * a.n as f64).powi(2) + (b.stderr * b.n as f64).powi(2)).sqrt();
        assert!(
            b.residual_times_n <= a.residual_times_n + 2.0 * se,
            "residual*n grew from {} (n={}) to {} (n={}) beyond 2 se = {}",
            a.residual_times_n,
            a.n,
            b.residual_times_n,
            b.n,
            2.0 * se
        );
    }
    for row in &rows {
        assert!(
            row.gamma1_term.abs() <= 4.0 * row.gamma1_se.max(1e-12),
            "n={}: first-order term {} exceeds MC error {}",
            row.n,
            row.gamma1_term,
            row.gamma1_se
        );
    }
    println!(
        "PASS criterion 8 (Edgeworth): {} survivor pairs match the three patterns; \
         residual*n = {:.3}/{:.3}/{:.3} at n = 64/128/256 (non-increasing within 2 se); \
         first-order term 0 within MC error",
        survivors.len(),
        rows[0].residual_times_n,
        rows[1].residual_times_n,
        rows[2].residual_times_n
    );
}

#[test]
fn criterion_09_clustering_slope() {
    let n = 128;
    let m = 6000;
    let samples: Vec<TrigPolynomialSample> = (0..m as u64)
        .map(|j| {
            let mut rng = rng_for(4201, StreamDomain::Cluster, n as u64, j);
            TrigPolynomialSample::from_distribution(&CoefficientDistribution::Gaussian, n, &mut rng)
        })
        .collect();
    let epsilons = [0.4, 0.2, 0.1, 0.05];
    let mut points = Vec::new();
    for &eps in &epsilons {
        let row = cluster_statistic(&samples, eps);
        assert!(row.estimate > 0.0, "no clustering events at eps = {eps}; enlarge the batch");
        points.push((eps.ln(), row.estimate.ln(), row));
    }
    // least-squares slope of log E vs log eps
    let k = points.len() as f64;
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1).sum();
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    let slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    assert!(slope >= 1.0, "log-log slope {slope} below 1.0");
    for (_, _, row) in &points {
        println!(
            "  eps = {:.2}: E(N^2 1(N>=2)) = {:.3e} +- {:.1e} over {} windows",
            row.epsilon, row.estimate, row.stderr, row.n_windows
        );
    }
    println!(
        "PASS criterion 9 (clustering): log-log slope {slope:.2} >= 1.0 over eps in {{0.4, 0.2, 0.1, 0.05}} \
         (consistent with the eps^(4/3) bound)"
    );
}

#[test]
fn criterion_10_determinism() {
    let mut config = ExperimentConfig::new(CoefficientDistribution::Uniform, vec![32, 64], 500, 77);
    config.workers = 1;
    let a = run_ensemble(&config).unwrap();
    config.workers = 4;
    let b = run_ensemble(&config).unwrap();
    config.workers = 2;
    let c = run_ensemble(&config).unwrap();
    let csv_a = a.to_csv(true);
    assert_eq!(csv_a, b.to_csv(true), "workers 1 vs 4");
    assert_eq!(csv_a, c.to_csv(true), "workers 1 vs 2");
    // and bit-level equality of every statistic
    for (ra, rb) in a.rows.iter().zip(b.rows.iter()) {
        assert_eq!(ra.mean_count.to_bits(), rb.mean_count.to_bits());
        assert_eq!(ra.var_count.to_bits(), rb.var_count.to_bits());
        assert_eq!(ra.stderr_mean.to_bits(), rb.stderr_mean.to_bits());
        assert_eq!(ra.stderr_var.to_bits(), rb.stderr_var.to_bits());
    }
    println!(
        "PASS criterion 10 (determinism): byte-identical summaries across worker counts 1/2/4 \
         (volatile wall-time column excluded via stable output)"
    );
}
