use std::time::Instant;
use trigroots::coefficients::CoefficientDistribution;
use trigroots::montecarlo::{run_ensemble, ExperimentConfig};

fn main() {
    for (n, m) in [(64usize, 2000usize), (128, 1000), (256, 1000)] {
        let config = ExperimentConfig::new(CoefficientDistribution::Gaussian, vec![n], m, 42);
        let start = Instant::now();
        let summary = run_ensemble(&config).unwrap();
        let el = start.elapsed().as_secs_f64();
        let row = &summary.rows[0];
        println!(
            "n={n} m={m}: {:.1} us/sample  mean/n={:.5} var/n={:.5} suspicious={}",
            el / m as f64 * 1e6,
            row.mean_over_n,
            row.var_over_n,
            row.suspicious
        );
    }
}
