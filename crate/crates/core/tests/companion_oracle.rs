//! Algebraic cross-check for the grid-scan root counter.
//!
//! Substituting `z = e^{it}` turns `p_n(t) = sum a_k cos(kt) + b_k sin(kt)`
//! into the degree-`2n` complex polynomial
//! `Q(z) = sum_k c_k z^{n+k} + conj(c_k) z^{n-k}` with `c_k = (a_k - i b_k)/2`;
//! real roots of `p_n` in `[0, pi)` are the unit-circle roots of `Q` with
//! argument in `[0, pi)`. The test solves for all roots of `Q` with the
//! Durand-Kerner (Weierstrass) simultaneous iteration --- an O(n^3)-ish
//! route that shares nothing with the production grid scan --- and compares
//! the counts. Test-suite only: at ensemble scale this costs hours where the
//! transform path costs seconds.

use num_complex::Complex64;
use trigroots::coefficients::CoefficientDistribution;
use trigroots::polynomial::TrigPolynomialSample;
use trigroots::roots::count_roots;
use trigroots::stream::{rng_for, StreamDomain};

/// All complex roots of the polynomial with coefficients `coeffs`
/// (low order first) by Durand-Kerner iteration.
fn durand_kerner(coeffs: &[Complex64]) -> Vec<Complex64> {
    let degree = coeffs.len() - 1;
    assert!(degree >= 1);
    let lead = coeffs[degree];
    assert!(lead.norm() > 0.0, "leading coefficient vanishes");
    let monic: Vec<Complex64> = coeffs.iter().map(|c| c / lead).collect();
    let eval = |z: Complex64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in monic.iter().rev() {
            acc = acc * z + c;
        }
        acc
    };

    // Cauchy bound: every root satisfies |z| <= 1 + max |monic coefficient|
    let radius = 1.0 + monic.iter().map(|c| c.norm()).fold(0.0f64, f64::max);

    // staggered initialization, non-real and non-unit modulus; steps are
    // damped and iterates clamped to the Cauchy disc so the early transient
    // cannot overflow
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..degree).map(|i| seed.powu(i as u32 + 1)).collect();
    for _ in 0..2000 {
        let mut max_step = 0.0f64;
        for i in 0..degree {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..degree {
                if j != i {
                    denom *= roots[i] - roots[j];
                }
            }
            if denom.norm() == 0.0 {
                continue;
            }
            let mut step = eval(roots[i]) / denom;
            if !step.re.is_finite() || !step.im.is_finite() {
                // rescue a diverged iterate with a fresh interior point
                roots[i] = seed.powu(i as u32 + 7) * 0.8;
                max_step = f64::INFINITY.min(1.0);
                continue;
            }
            let cap = 0.5 * (1.0 + roots[i].norm());
            if step.norm() > cap {
                step *= cap / step.norm();
            }
            roots[i] -= step;
            let norm = roots[i].norm();
            if norm > radius {
                roots[i] *= radius / norm;
            }
            max_step = max_step.max(step.norm());
        }
        if max_step < 1e-12 {
            break;
        }
    }
    roots
}

fn companion_style_count(sample: &TrigPolynomialSample) -> usize {
    let n = sample.n();
    let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * n + 1];
    for k in 1..=n {
        let c = Complex64::new(sample.coeff_a()[k - 1] / 2.0, -sample.coeff_b()[k - 1] / 2.0);
        coeffs[n + k] += c;
        coeffs[n - k] += c.conj();
    }
    let roots = durand_kerner(&coeffs);
    roots
        .into_iter()
        .filter(|z| {
            (z.norm() - 1.0).abs() < 1e-6 && {
                let arg = z.arg();
                // [0, pi): the upper half circle plus z = 1
                (1e-9..std::f64::consts::PI - 1e-9).contains(&arg) || (z.re - 1.0).abs() < 1e-9
            }
        })
        .count()
}

#[test]
fn grid_scan_matches_polynomial_root_solver() {
    for seed in 0..10u64 {
        let mut rng = rng_for(6100 + seed, StreamDomain::Generic, 48, 0);
        let sample =
            TrigPolynomialSample::from_distribution(&CoefficientDistribution::Gaussian, 48, &mut rng);
        let grid = count_roots(&sample);
        assert!(!grid.is_suspicious(), "seed {seed} flagged");
        let algebraic = companion_style_count(&sample);
        assert_eq!(grid.count, algebraic, "seed {seed}");
    }
}

#[test]
fn solver_agrees_on_structured_samples() {
    // cos(n t): n roots
    for n in [4usize, 9] {
        let mut a = vec![0.0; n];
        a[n - 1] = 1.0;
        let sample = TrigPolynomialSample::new(a, vec![0.0; n]);
        assert_eq!(companion_style_count(&sample), n);
    }
    // sin(t) + 0.5 cos(2t): compare with the counter
    let sample = TrigPolynomialSample::new(vec![0.0, 0.5], vec![1.0, 0.0]);
    assert_eq!(companion_style_count(&sample), count_roots(&sample).count);
}

