//! Reproducible ensemble experiments over the root counts.
//!
//! Sample `j` of the run for degree `n` always draws its coefficients from
//! the stream keyed by `(base_seed, n, j)`, and aggregation reduces the
//! ordered vector of per-sample counts with exact integer sums, so a summary
//! is a pure function of `(base_seed, dist, n, m)` — worker count and
//! scheduling cannot change a single output byte.
//!
//! Samples whose root count stays ambiguous at maximum refinement are
//! excluded and reported; a run where exclusions exceed 0.1% of `m` is
//! marked unreliable.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coefficients::{CoefficientDistribution, DistributionError, MomentTable};
use crate::polynomial::TrigPolynomialSample;
use crate::roots::RootCounter;
use crate::stream::{rng_for, StreamDomain};

/// Fraction of excluded samples above which a run is flagged unreliable.
const UNRELIABLE_EXCLUSION_FRACTION: f64 = 1e-3;

fn default_workers() -> usize {
    1
}

fn default_epsilon() -> f64 {
    0.1
}

/// One `(distribution, n_list, m)` experiment description. The JSON form
/// carries the distribution inline:
/// `{"dist":"mixture","p":0.5,"v1":0.5,"v2":1.5,"n":[64,256],"m":1000,"seed":7}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentConfig {
    #[serde(flatten)]
    pub dist: CoefficientDistribution,
    #[serde(alias = "n_list", alias = "n")]
    pub n: OneOrMany<usize>,
    pub m: usize,
    #[serde(alias = "base_seed")]
    pub seed: u64,
    #[serde(default = "default_workers")]
    pub workers: usize,
    /// Diagnostic band width (cluster diagnostics only).
    #[serde(default = "default_epsilon", alias = "epsilon_band")]
    pub epsilon: f64,
    #[serde(default)]
    pub output: Option<String>,
}

/// Accepts `"n": 64` and `"n": [64, 128]` alike.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Clone> OneOrMany<T> {
    pub fn to_vec(&self) -> Vec<T> {
        match self {
            OneOrMany::One(x) => vec![x.clone()],
            OneOrMany::Many(xs) => xs.clone(),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("m = {0} is below the minimum of 2")]
    TooFewSamples(usize),
    #[error("n list is empty")]
    EmptyDegrees,
    #[error("workers = 0")]
    NoWorkers,
    #[error(transparent)]
    Distribution(#[from] DistributionError),
}

impl ExperimentConfig {
    pub fn new(dist: CoefficientDistribution, n_list: Vec<usize>, m: usize, seed: u64) -> Self {
        ExperimentConfig {
            dist,
            n: OneOrMany::Many(n_list),
            m,
            seed,
            workers: 1,
            epsilon: default_epsilon(),
            output: None,
        }
    }

    pub fn n_list(&self) -> Vec<usize> {
        self.n.to_vec()
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.m < 2 {
            return Err(ConfigError::TooFewSamples(self.m));
        }
        if self.n_list().is_empty() {
            return Err(ConfigError::EmptyDegrees);
        }
        if self.workers == 0 {
            return Err(ConfigError::NoWorkers);
        }
        self.dist.validate()?;
        Ok(())
    }
}

/// Per-(distribution, n) Monte Carlo statistics.
#[derive(Clone, Debug, Serialize)]
pub struct SummaryRow {
    pub dist: String,
    pub n: usize,
    pub m: usize,
    pub mean_count: f64,
    pub var_count: f64,
    pub mean_over_n: f64,
    pub var_over_n: f64,
    pub stderr_mean: f64,
    pub stderr_var: f64,
    /// Samples retained after excluding unresolved ambiguities.
    pub m_effective: usize,
    pub suspicious: usize,
    #[serde(rename = "seconds")]
    pub wall_time: f64,
    pub seed: u64,
    /// False when the law violates the smoothing hypothesis of the theorem.
    pub theorem_covered: bool,
}

/// The result of one ensemble run over all requested degrees.
#[derive(Clone, Debug, Serialize)]
pub struct ExperimentSummary {
    pub rows: Vec<SummaryRow>,
    /// Set when any row excluded more than 0.1% of its samples.
    pub unreliable: bool,
}

pub const SUMMARY_CSV_HEADER: &str = "dist,n,m,mean_count,var_count,mean_over_n,var_over_n,stderr_mean,stderr_var,suspicious,seconds,seed";

impl ExperimentSummary {
    /// CSV in the fixed column schema. `redact_timing` zeroes the wall-time
    /// column so reruns are byte-identical.
    pub fn to_csv(&self, redact_timing: bool) -> String {
        let mut out = String::from(SUMMARY_CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let seconds = if redact_timing { 0.0 } else { r.wall_time };
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{}\n",
                r.dist,
                r.n,
                r.m,
                r.mean_count,
                r.var_count,
                r.mean_over_n,
                r.var_over_n,
                r.stderr_mean,
                r.stderr_var,
                r.suspicious,
                seconds,
                r.seed
            ));
        }
        out
    }
}

/// Count roots of `m` independent samples at every degree in the config.
pub fn run_ensemble(config: &ExperimentConfig) -> Result<ExperimentSummary, ConfigError> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .expect("thread pool");
    let mut rows = Vec::new();
    let mut unreliable = false;
    for n in config.n_list() {
        let start = Instant::now();
        let dist = config.dist;
        let seed = config.seed;
        // ordered per-sample counts; None marks an unresolved sample
        let counts: Vec<Option<u32>> = pool.install(|| {
            (0..config.m)
                .into_par_iter()
                .map_init(
                    || RootCounter::new(n),
                    |counter, j| {
                        let mut rng = rng_for(seed, StreamDomain::Ensemble, n as u64, j as u64);
                        let sample = TrigPolynomialSample::from_distribution(&dist, n, &mut rng);
                        let result = counter.count(&sample, false);
                        assert!(result.count <= 2 * n, "count {} exceeds 2n at n = {n}", result.count);
                        if result.is_suspicious() {
                            None
                        } else {
                            Some(result.count as u32)
                        }
                    },
                )
                .collect()
        });
        let row = summarize_counts(&counts, &config.dist, n, config.m, seed, start.elapsed().as_secs_f64());
        unreliable |= row.suspicious as f64 > UNRELIABLE_EXCLUSION_FRACTION * config.m as f64;
        rows.push(row);
    }
    Ok(ExperimentSummary { rows, unreliable })
}

fn summarize_counts(
    counts: &[Option<u32>],
    dist: &CoefficientDistribution,
    n: usize,
    m: usize,
    seed: u64,
    wall_time: f64,
) -> SummaryRow {
    let suspicious = counts.iter().filter(|c| c.is_none()).count();
    let kept: Vec<u32> = counts.iter().flatten().copied().collect();
    let m_eff = kept.len();
    assert!(m_eff >= 2, "fewer than two usable samples");
    // exact integer sums make the aggregation order-free
    let sum: u64 = kept.iter().map(|&c| c as u64).sum();
    let sum_sq: u128 = kept.iter().map(|&c| (c as u128) * (c as u128)).sum();
    let mf = m_eff as f64;
    let mean = sum as f64 / mf;
    let var = (sum_sq as f64 - (sum as f64) * (sum as f64) / mf) / (mf - 1.0);
    let m4: f64 = kept
        .iter()
        .map(|&c| {
            let d = c as f64 - mean;
            d * d * d * d
        })
        .sum::<f64>()
        / mf;
    let var_of_var = ((m4 - var * var * (mf - 3.0) / (mf - 1.0)) / mf).max(0.0);
    let nf = n as f64;
    SummaryRow {
        dist: dist.name(),
        n,
        m,
        mean_count: mean,
        var_count: var,
        mean_over_n: mean / nf,
        var_over_n: var / nf,
        stderr_mean: (var / mf).sqrt() / nf,
        stderr_var: var_of_var.sqrt() / nf,
        m_effective: m_eff,
        suspicious,
        wall_time,
        seed,
        theorem_covered: dist.theorem_covered(),
    }
}

/// Standard error of the sample variance by the fourth-moment formula
/// `sqrt( (m4 - s^4 (m-3)/(m-1)) / m )`.
pub fn variance_of_variance(xs: &[f64]) -> f64 {
    assert!(xs.len() >= 4, "need at least 4 samples");
    let m = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / m;
    let s2 = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (m - 1.0);
    let m4 = xs.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / m;
    ((m4 - s2 * s2 * (m - 3.0) / (m - 1.0)) / m).max(0.0).sqrt()
}

/// Jackknife standard error of the sample variance (leave-one-out
/// pseudo-values), the resampling cross-check for [`variance_of_variance`].
pub fn jackknife_variance_se(xs: &[f64]) -> f64 {
    let m = xs.len();
    assert!(m >= 4);
    let mf = m as f64;
    let sum: f64 = xs.iter().sum();
    let sum_sq: f64 = xs.iter().map(|x| x * x).sum();
    let mut pseudo = Vec::with_capacity(m);
    for &x in xs {
        let s = sum - x;
        let sq = sum_sq - x * x;
        // sample variance of the remaining m-1 points
        let v = (sq - s * s / (mf - 1.0)) / (mf - 2.0);
        pseudo.push(v);
    }
    let mean = pseudo.iter().sum::<f64>() / mf;
    let sum_sq: f64 = pseudo.iter().map(|v| (v - mean) * (v - mean)).sum();
    // jackknife variance of the estimator: (m-1)/m * sum of squared deviations
    ((mf - 1.0) / mf * sum_sq).sqrt()
}

#[derive(Debug, thiserror::Error)]
pub enum CompareError {
    #[error("summaries disagree on the degree list: {0:?} vs {1:?}")]
    MismatchedDegrees(Vec<usize>, Vec<usize>),
}

/// One per-degree line of the comparison report.
#[derive(Clone, Debug, Serialize)]
pub struct CompareRow {
    pub n: usize,
    pub var_over_n: f64,
    pub var_over_n_baseline: f64,
    pub observed_shift: f64,
    pub predicted_shift: f64,
    pub stderr: f64,
    pub z: f64,
}

/// Weighted least-squares extrapolation of the shift in `1/n`.
#[derive(Clone, Debug, Serialize)]
pub struct ShiftExtrapolation {
    /// Degrees used for the fit (the largest three).
    pub degrees: Vec<usize>,
    pub intercept: f64,
    pub intercept_se: f64,
    pub slope: f64,
    pub predicted_shift: f64,
    pub z: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CompareReport {
    pub predicted_shift: f64,
    pub y_star: f64,
    pub rows: Vec<CompareRow>,
    pub extrapolation: Option<ShiftExtrapolation>,
    /// The theorem is a limit statement; finite-n shifts carry an O(1/n)
    /// bias, which is why the report always shows the trend row.
    pub theorem_covered: bool,
}

/// Compare an ensemble against the Gaussian baseline: observed variance
/// shift per degree versus the predicted `y*/60`, plus a `1/n` trend row
/// over the three largest degrees.
pub fn compare_to_theory(
    summary: &ExperimentSummary,
    baseline: &ExperimentSummary,
    table: &MomentTable,
) -> Result<CompareReport, CompareError> {
    let degrees: Vec<usize> = summary.rows.iter().map(|r| r.n).collect();
    let base_degrees: Vec<usize> = baseline.rows.iter().map(|r| r.n).collect();
    if degrees != base_degrees {
        return Err(CompareError::MismatchedDegrees(degrees, base_degrees));
    }
    let y_star = table.y_star();
    let predicted = y_star / 60.0;
    let mut rows = Vec::new();
    for (r, b) in summary.rows.iter().zip(baseline.rows.iter()) {
        let shift = r.var_over_n - b.var_over_n;
        let se = (r.stderr_var * r.stderr_var + b.stderr_var * b.stderr_var).sqrt();
        rows.push(CompareRow {
            n: r.n,
            var_over_n: r.var_over_n,
            var_over_n_baseline: b.var_over_n,
            observed_shift: shift,
            predicted_shift: predicted,
            stderr: se,
            z: if se > 0.0 { (shift - predicted) / se } else { f64::NAN },
        });
    }

    // weighted fit shift ~ a + b/n over the three largest degrees
    let extrapolation = {
        let mut fit_rows: Vec<&CompareRow> = rows.iter().collect();
        fit_rows.sort_by_key(|r| r.n);
        let tail: Vec<&CompareRow> = fit_rows.iter().rev().take(3).rev().copied().collect();
        if tail.len() >= 2 && tail.iter().all(|r| r.stderr > 0.0) {
            let (mut s, mut sx, mut sxx, mut sy, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
            for r in &tail {
                let w = 1.0 / (r.stderr * r.stderr);
                let x = 1.0 / r.n as f64;
                s += w;
                sx += w * x;
                sxx += w * x * x;
                sy += w * r.observed_shift;
                sxy += w * x * r.observed_shift;
            }
            let delta = s * sxx - sx * sx;
            if delta > 0.0 {
                let intercept = (sxx * sy - sx * sxy) / delta;
                let slope = (s * sxy - sx * sy) / delta;
                let intercept_se = (sxx / delta).sqrt();
                Some(ShiftExtrapolation {
                    degrees: tail.iter().map(|r| r.n).collect(),
                    intercept,
                    intercept_se,
                    slope,
                    predicted_shift: predicted,
                    z: (intercept - predicted) / intercept_se,
                })
            } else {
                None
            }
        } else {
            None
        }
    };

    Ok(CompareReport {
        predicted_shift: predicted,
        y_star,
        rows,
        extrapolation,
        theorem_covered: summary.rows.iter().all(|r| r.theorem_covered),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covariance::gaussian_mean_density;
    use rand_distr::{Distribution, StandardNormal};

    fn quick_config(dist: CoefficientDistribution, n: usize, m: usize, seed: u64) -> ExperimentConfig {
        ExperimentConfig::new(dist, vec![n], m, seed)
    }

    #[test]
    fn summaries_are_identical_across_worker_counts() {
        let mut one = quick_config(CoefficientDistribution::Gaussian, 32, 300, 7);
        let mut four = one.clone();
        one.workers = 1;
        four.workers = 4;
        let a = run_ensemble(&one).unwrap();
        let b = run_ensemble(&four).unwrap();
        assert_eq!(a.to_csv(true), b.to_csv(true));
        let (ra, rb) = (&a.rows[0], &b.rows[0]);
        assert_eq!(ra.mean_count.to_bits(), rb.mean_count.to_bits());
        assert_eq!(ra.var_count.to_bits(), rb.var_count.to_bits());
        assert_eq!(ra.stderr_var.to_bits(), rb.stderr_var.to_bits());
    }

    #[test]
    fn two_sample_variance_matches_the_definition() {
        let config = quick_config(CoefficientDistribution::Uniform, 16, 2, 3);
        let summary = run_ensemble(&config).unwrap();
        let row = &summary.rows[0];
        // reproduce the two counts from the same streams
        let counts: Vec<f64> = (0..2)
            .map(|j| {
                let mut rng = rng_for(3, StreamDomain::Ensemble, 16, j);
                let sample = TrigPolynomialSample::from_distribution(
                    &CoefficientDistribution::Uniform,
                    16,
                    &mut rng,
                );
                crate::roots::count_roots(&sample).count as f64
            })
            .collect();
        let expect = (counts[0] - counts[1]).powi(2) / 2.0;
        assert_eq!(row.var_count, expect);
        assert_eq!(row.m_effective, 2);
    }

    #[test]
    fn counts_stay_below_twice_the_degree_and_mean_tracks_kac_rice() {
        let config = quick_config(CoefficientDistribution::Gaussian, 64, 600, 11);
        let summary = run_ensemble(&config).unwrap();
        let row = &summary.rows[0];
        assert!(row.mean_count <= 128.0);
        let oracle = gaussian_mean_density(64) / 64.0;
        assert!(
            (row.mean_over_n - oracle).abs() < 4.0 * row.stderr_mean,
            "mean/n {} vs oracle {oracle} (se {})",
            row.mean_over_n,
            row.stderr_mean
        );
        assert!(!summary.unreliable);
    }

    #[test]
    fn null_consistency_between_disjoint_seeds() {
        // two independent Gaussian runs agree within 4 combined stderr in
        // >= 19 of 20 trials
        let mut hits = 0;
        for trial in 0..20u64 {
            let a = run_ensemble(&quick_config(CoefficientDistribution::Gaussian, 32, 400, 100 + trial))
                .unwrap();
            let b = run_ensemble(&quick_config(
                CoefficientDistribution::Gaussian,
                32,
                400,
                5000 + trial,
            ))
            .unwrap();
            let (ra, rb) = (&a.rows[0], &b.rows[0]);
            let se = (ra.stderr_var.powi(2) + rb.stderr_var.powi(2)).sqrt();
            if (ra.var_over_n - rb.var_over_n).abs() <= 4.0 * se {
                hits += 1;
            }
        }
        assert!(hits >= 19, "only {hits}/20 trials within 4 SE");
    }

    #[test]
    fn variance_of_variance_formulas() {
        assert_eq!(variance_of_variance(&[3.0; 100]), 0.0);

        let mut rng = rng_for(21, StreamDomain::Generic, 0, 0);
        let xs: Vec<f64> = (0..100_000).map(|_| StandardNormal.sample(&mut rng)).collect();
        let m = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / m;
        let s2 = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (m - 1.0);
        let gaussian_theory = s2 * (2.0 / (m - 1.0)).sqrt();
        let est = variance_of_variance(&xs);
        assert!((est - gaussian_theory).abs() < 0.1 * gaussian_theory, "{est} vs {gaussian_theory}");

        let jk = jackknife_variance_se(&xs);
        let ratio = jk / est;
        assert!((0.8..=1.25).contains(&ratio), "jackknife ratio {ratio}");
    }

    #[test]
    fn jackknife_agrees_on_real_count_data() {
        let config = quick_config(CoefficientDistribution::Gaussian, 32, 2000, 13);
        let counts: Vec<f64> = (0..2000u64)
            .map(|j| {
                let mut rng = rng_for(13, StreamDomain::Ensemble, 32, j);
                let sample = TrigPolynomialSample::from_distribution(
                    &CoefficientDistribution::Gaussian,
                    32,
                    &mut rng,
                );
                crate::roots::count_roots(&sample).count as f64
            })
            .collect();
        let _ = config;
        let closed = variance_of_variance(&counts);
        let jk = jackknife_variance_se(&counts);
        let ratio = jk / closed;
        assert!((0.8..=1.25).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn compare_report_reproduces_predicted_shifts() {
        let uniform = run_ensemble(&ExperimentConfig::new(
            CoefficientDistribution::Uniform,
            vec![16, 32],
            200,
            5,
        ))
        .unwrap();
        let gaussian = run_ensemble(&ExperimentConfig::new(
            CoefficientDistribution::Gaussian,
            vec![16, 32],
            200,
            6,
        ))
        .unwrap();
        let table = CoefficientDistribution::Uniform.moment_table();
        let report = compare_to_theory(&uniform, &gaussian, &table).unwrap();
        assert!((report.predicted_shift + 0.04).abs() < 1e-15);
        assert_eq!(report.rows.len(), 2);
        assert!(report.extrapolation.is_some());

        let mix_table = CoefficientDistribution::mixture(0.5, 0.5, 1.5).unwrap().moment_table();
        assert!((mix_table.y_star() / 60.0 - 0.025).abs() < 1e-15);

        // same-law comparison: prediction zero, |z| small
        let g2 = run_ensemble(&ExperimentConfig::new(
            CoefficientDistribution::Gaussian,
            vec![16, 32],
            200,
            7,
        ))
        .unwrap();
        let null = compare_to_theory(&g2, &gaussian, &CoefficientDistribution::Gaussian.moment_table())
            .unwrap();
        assert_eq!(null.predicted_shift, 0.0);
        for row in &null.rows {
            assert!(row.z.abs() <= 4.0, "null z = {}", row.z);
        }

        // mismatched degree lists are rejected
        let short = run_ensemble(&quick_config(CoefficientDistribution::Gaussian, 16, 50, 8)).unwrap();
        assert!(compare_to_theory(&short, &gaussian, &table).is_err());
    }

    #[test]
    fn config_json_round_trip_and_validation() {
        let config: ExperimentConfig = serde_json::from_str(
            r#"{"dist":"mixture","p":0.5,"v1":0.5,"v2":1.5,"n":[64,128],"m":100,"seed":9}"#,
        )
        .unwrap();
        assert_eq!(config.n_list(), vec![64, 128]);
        assert_eq!(config.workers, 1);
        config.validate().unwrap();

        let scalar: ExperimentConfig =
            serde_json::from_str(r#"{"dist":"gaussian","n":64,"m":10,"seed":1}"#).unwrap();
        assert_eq!(scalar.n_list(), vec![64]);

        let bad: ExperimentConfig =
            serde_json::from_str(r#"{"dist":"gaussian","n":[],"m":10,"seed":1}"#).unwrap();
        assert!(bad.validate().is_err());

        let bad_m: ExperimentConfig =
            serde_json::from_str(r#"{"dist":"gaussian","n":8,"m":1,"seed":1}"#).unwrap();
        assert!(bad_m.validate().is_err());
    }
}
