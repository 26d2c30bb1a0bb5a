//! Gaussian quadrature rules (Legendre and Hermite) and deterministic
//! summation helpers.
//!
//! Nodes are eigenvalues of the Jacobi matrix of the orthogonal family
//! (Golub-Welsch), computed by Sturm bisection on the symmetric tridiagonal
//! matrix; weights are the Christoffel numbers `1 / sum_k ptilde_k(x)^2`
//! built from the orthonormal three-term recurrence. This is self-contained,
//! deterministic, and accurate to machine precision for the orders used here
//! (<= 128).

/// Pairwise summation over a slice: a fixed reduction tree on an ordered
/// input, so the result never depends on thread count or chunking.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        2 => xs[0] + xs[1],
        n => {
            let mid = n / 2;
            pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
        }
    }
}

/// Symmetric tridiagonal eigenvalues by Sturm-sequence bisection.
/// `diag` has length n, `off` length n-1. Returns eigenvalues in
/// ascending order.
fn tridiag_eigenvalues(diag: &[f64], off: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { off[i - 1].abs() } else { 0.0 }
            + if i + 1 < n { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    // count of eigenvalues below x via the signs of the LDL^T pivots of
    // T - xI; a zero pivot is counted as negative (0^- convention)
    let count_below = |x: f64| -> usize {
        let tiny = 1e-300_f64;
        let mut count = 0usize;
        let mut q = diag[0] - x;
        for i in 0..n {
            if q <= 0.0 {
                count += 1;
            }
            if i + 1 == n {
                break;
            }
            if q.abs() < tiny {
                q = -tiny;
            }
            q = diag[i + 1] - x - off[i] * off[i] / q;
        }
        count
    };
    (0..n)
        .map(|k| {
            let (mut a, mut b) = (lo, hi);
            for _ in 0..80 {
                let mid = 0.5 * (a + b);
                if count_below(mid) <= k {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            0.5 * (a + b)
        })
        .collect()
}

/// Nodes and weights from the orthonormal recurrence
/// `beta_{k+1} p_{k+1} = (x - alpha_k) p_k - beta_k p_{k-1}`, `p_0 = 1/sqrt(mu0)`.
fn golub_welsch(alpha: &[f64], beta: &[f64], mu0: f64) -> Vec<(f64, f64)> {
    let nodes = tridiag_eigenvalues(alpha, beta);
    nodes
        .into_iter()
        .map(|x| {
            let mut prev = 0.0f64;
            let mut cur = 1.0 / mu0.sqrt();
            let mut sum_sq = cur * cur;
            for k in 0..alpha.len() - 1 {
                let next = ((x - alpha[k]) * cur - if k > 0 { beta[k - 1] * prev } else { 0.0 })
                    / beta[k];
                prev = cur;
                cur = next;
                sum_sq += cur * cur;
            }
            (x, 1.0 / sum_sq)
        })
        .collect()
}

/// Gauss-Legendre rule of order `n` on `[-1, 1]` (weight 1).
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    assert!(n >= 1);
    let alpha = vec![0.0; n];
    let beta: Vec<f64> = (1..n)
        .map(|k| {
            let k = k as f64;
            k / (4.0 * k * k - 1.0).sqrt()
        })
        .collect();
    golub_welsch(&alpha, &beta, 2.0)
}

/// Gauss-Hermite rule of order `n` for the weight `exp(-x^2)`.
pub fn gauss_hermite(n: usize) -> Vec<(f64, f64)> {
    assert!(n >= 1);
    let alpha = vec![0.0; n];
    let beta: Vec<f64> = (1..n).map(|k| (k as f64 / 2.0).sqrt()).collect();
    golub_welsch(&alpha, &beta, core::f64::consts::PI.sqrt())
}

/// Rule `(x_i, w_i)` such that `E f(W) = sum_i w_i f(x_i)` for a standard
/// normal `W`: Gauss-Hermite rescaled by `sqrt(2)` and normalized.
pub fn standard_normal_rule(n: usize) -> Vec<(f64, f64)> {
    let inv_sqrt_pi = 1.0 / core::f64::consts::PI.sqrt();
    gauss_hermite(n)
        .into_iter()
        .map(|(x, w)| (core::f64::consts::SQRT_2 * x, w * inv_sqrt_pi))
        .collect()
}

/// Integrate `f` over `[a, b]` with an `order`-point Gauss-Legendre rule.
pub fn integrate_gl<F: FnMut(f64) -> f64>(rule: &[(f64, f64)], a: f64, b: f64, mut f: F) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let terms: Vec<f64> = rule.iter().map(|&(x, w)| w * f(mid + half * x)).collect();
    half * pairwise_sum(&terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn legendre_exact_on_polynomials() {
        let rule = gauss_legendre(8);
        // degree 15 is integrated exactly by an 8-point rule
        let got = integrate_gl(&rule, -1.0, 1.0, |x| x.powi(14) + 3.0 * x.powi(7));
        assert!((got - 2.0 / 15.0).abs() < 1e-14, "got {got}");
        let cos_int = integrate_gl(&rule, 0.0, PI / 2.0, f64::cos);
        assert!((cos_int - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hermite_low_order_reference_values() {
        // order 1: node 0, weight sqrt(pi); order 3: nodes 0, +-sqrt(3/2)
        let r1 = gauss_hermite(1);
        assert!((r1[0].0).abs() < 1e-15 && (r1[0].1 - PI.sqrt()).abs() < 1e-14);
        let r3 = gauss_hermite(3);
        assert!((r3[0].0 + (1.5f64).sqrt()).abs() < 1e-13);
        assert!((r3[2].0 - (1.5f64).sqrt()).abs() < 1e-13);
        assert!((r3[1].1 - 2.0 * PI.sqrt() / 3.0).abs() < 1e-13);
    }

    #[test]
    fn normal_rule_reproduces_gaussian_moments() {
        let rule = standard_normal_rule(40);
        let moment = |p: i32| -> f64 {
            let terms: Vec<f64> = rule.iter().map(|&(x, w)| w * x.powi(p)).collect();
            pairwise_sum(&terms)
        };
        assert!((moment(0) - 1.0).abs() < 1e-14);
        assert!(moment(1).abs() < 1e-14);
        assert!((moment(2) - 1.0).abs() < 1e-13);
        assert!((moment(4) - 3.0).abs() < 1e-12);
        assert!((moment(8) - 105.0).abs() < 1e-9);
    }

    #[test]
    fn pairwise_sum_matches_naive_on_small_inputs() {
        let xs: Vec<f64> = (0..1000).map(|i| (i as f64).sin()).collect();
        let naive: f64 = xs.iter().sum();
        assert!((pairwise_sum(&xs) - naive).abs() < 1e-9);
    }
}
