//! Covariance structure of `(P_n(t), P_n'(t), P_n(s), P_n'(s))` and the
//! Gaussian reference quantities derived from it.
//!
//! For the rescaled process with standard Gaussian coefficients the finite-n
//! covariance depends only on `u = t - s`:
//!
//! ```text
//! sigma_11 = sigma_33 = 1          sigma_12 = sigma_34 = 0
//! sigma_22 = sigma_44 = (1/n) sum (k/n)^2
//! sigma_13 = (1/n) sum cos(k u / n)
//! sigma_24 = (1/n) sum (k/n)^2 cos(k u / n)
//! sigma_14 = -sigma_23 = (1/n) sum (k/n) sin(k u / n)
//! ```
//!
//! and the `n -> infinity` limit replaces the averages by
//! `int_0^1 x^i cos(u x) dx` (`i = 0, 2`) and `int_0^1 x sin(u x) dx`. This
//! is the covariance of the stationary Gaussian process with correlation
//! `sin(u)/u`, whose zero set drives the limiting constants: the one-point
//! zero intensity is `sqrt(1/3)/pi` per unit length (mean `n/sqrt(3)` roots
//! on `[0, n pi]`), and the variance-per-unit constant is obtained by
//! integrating the two-point zero intensity against that baseline.
//!
//! Near `u = 0` the closed antiderivatives lose all significant digits to
//! cancellation, so each kernel switches to its Taylor series below
//! `|u| = 1e-2`; both branches agree to better than `1e-11` at the seam.

use std::f64::consts::PI;

use crate::quadrature::{gauss_legendre, integrate_gl, pairwise_sum};

/// Series/closed-form crossover for the integral kernels.
const KERNEL_SEAM: f64 = 1e-2;

/// `int_0^1 cos(u x) dx = sin(u)/u`.
pub fn kernel_c0(u: f64) -> f64 {
    if u.abs() < KERNEL_SEAM {
        // sum (-1)^m u^(2m) / (2m+1)!
        let u2 = u * u;
        let mut term = 1.0;
        let mut acc = 1.0;
        for m in 1..=6 {
            term *= -u2 / ((2 * m) as f64 * (2 * m + 1) as f64);
            acc += term;
        }
        acc
    } else {
        u.sin() / u
    }
}

/// `int_0^1 x cos(u x) dx = (cos u + u sin u - 1)/u^2`.
pub fn kernel_c1(u: f64) -> f64 {
    if u.abs() < KERNEL_SEAM {
        // sum (-1)^m u^(2m) / ((2m)! (2m+2))
        let u2 = u * u;
        let mut fact = 1.0; // (2m)!
        let mut pow = 1.0;
        let mut acc = 0.5;
        for m in 1..=6 {
            fact *= (2 * m - 1) as f64 * (2 * m) as f64;
            pow *= -u2;
            acc += pow / (fact * (2 * m + 2) as f64);
        }
        acc
    } else {
        (u.cos() + u * u.sin() - 1.0) / (u * u)
    }
}

/// `int_0^1 x^2 cos(u x) dx = (2u cos u + (u^2 - 2) sin u)/u^3`.
pub fn kernel_c2(u: f64) -> f64 {
    if u.abs() < KERNEL_SEAM {
        // sum (-1)^m u^(2m) / ((2m)! (2m+3))
        let u2 = u * u;
        let mut fact = 1.0;
        let mut pow = 1.0;
        let mut acc = 1.0 / 3.0;
        for m in 1..=6 {
            fact *= (2 * m - 1) as f64 * (2 * m) as f64;
            pow *= -u2;
            acc += pow / (fact * (2 * m + 3) as f64);
        }
        acc
    } else {
        (2.0 * u * u.cos() + (u * u - 2.0) * u.sin()) / (u * u * u)
    }
}

/// `int_0^1 x sin(u x) dx = (sin u - u cos u)/u^2`.
pub fn kernel_s1(u: f64) -> f64 {
    if u.abs() < KERNEL_SEAM {
        // sum (-1)^m u^(2m+1) / ((2m+1)! (2m+3))
        let u2 = u * u;
        let mut fact = 1.0; // (2m+1)!
        let mut pow = u;
        let mut acc = u / 3.0;
        for m in 1..=6 {
            fact *= (2 * m) as f64 * (2 * m + 1) as f64;
            pow *= -u2;
            acc += pow / (fact * (2 * m + 3) as f64);
        }
        acc
    } else {
        (u.sin() - u * u.cos()) / (u * u)
    }
}

/// `1 - kernel_c0(u)^2`, safe against cancellation at small `u`.
fn one_minus_c0_sq(u: f64) -> f64 {
    let c0 = kernel_c0(u);
    if u.abs() < KERNEL_SEAM {
        // 1 - c0 = u^2/6 - u^4/120 + ...; multiply by (1 + c0)
        let u2 = u * u;
        let mut term = u2 / 6.0;
        let mut acc = term;
        // next terms of 1 - sin(u)/u
        let mut fact = 6.0; // 3!
        let mut pow = u2;
        for m in 2..=6 {
            fact *= (2 * m) as f64 * (2 * m + 1) as f64;
            pow *= u2;
            term = pow / fact;
            if m % 2 == 0 {
                acc -= term;
            } else {
                acc += term;
            }
        }
        acc * (1.0 + c0)
    } else {
        (1.0 - c0) * (1.0 + c0)
    }
}

/// Whether a matrix is the finite-n covariance or its stationary limit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CovarianceKind {
    FiniteN(usize),
    Limit,
}

/// The 4x4 covariance of `(P_n(t), P_n'(t), P_n(s), P_n'(s))`, or its limit.
#[derive(Clone, Debug)]
pub struct Covariance4 {
    entries: [[f64; 4]; 4],
    pub kind: CovarianceKind,
    pub t: f64,
    pub s: f64,
}

impl Covariance4 {
    /// Entry with 1-based indices matching the process component order.
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        assert!((1..=4).contains(&i) && (1..=4).contains(&j));
        self.entries[i - 1][j - 1]
    }

    pub fn matrix(&self) -> &[[f64; 4]; 4] {
        &self.entries
    }

    pub fn det(&self) -> f64 {
        det4(&self.entries)
    }

    /// Smallest eigenvalue (the non-degeneracy level of the matrix).
    pub fn min_eigenvalue(&self) -> f64 {
        sym_eigenvalues4(self.entries).into_iter().fold(f64::INFINITY, f64::min)
    }

    /// Symmetric positive semi-definiteness up to `tol` on the eigenvalues.
    pub fn is_psd(&self, tol: f64) -> bool {
        for i in 0..4 {
            for j in 0..4 {
                if (self.entries[i][j] - self.entries[j][i]).abs() > tol {
                    return false;
                }
            }
        }
        self.min_eigenvalue() >= -tol
    }

    fn from_parts(kind: CovarianceKind, t: f64, s: f64, diag2: f64, c0: f64, c2: f64, s1: f64) -> Self {
        let e = [
            [1.0, 0.0, c0, s1],
            [0.0, diag2, -s1, c2],
            [c0, -s1, 1.0, 0.0],
            [s1, c2, 0.0, diag2],
        ];
        Covariance4 { entries: e, kind, t, s }
    }
}

/// Finite-n covariance at rescaled arguments `t, s` (both in `[0, n pi]`).
pub fn sigma_n(n: usize, t: f64, s: f64) -> Covariance4 {
    assert!(n >= 1);
    let nf = n as f64;
    let u = t - s;
    let (mut sum_c0, mut sum_c2, mut sum_s1, mut sum_d) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for k in 1..=n {
        let x = k as f64 / nf;
        let (sin_ku, cos_ku) = (k as f64 * u / nf).sin_cos();
        sum_c0.push(cos_ku);
        sum_c2.push(x * x * cos_ku);
        sum_s1.push(x * sin_ku);
        sum_d.push(x * x);
    }
    let c0 = pairwise_sum(&sum_c0) / nf;
    let c2 = pairwise_sum(&sum_c2) / nf;
    let s1 = pairwise_sum(&sum_s1) / nf;
    let diag2 = pairwise_sum(&sum_d) / nf;
    Covariance4::from_parts(CovarianceKind::FiniteN(n), t, s, diag2, c0, c2, s1)
}

/// Stationary limit covariance as a function of `u = t - s`.
pub fn sigma_limit(u: f64) -> Covariance4 {
    Covariance4::from_parts(
        CovarianceKind::Limit,
        u,
        0.0,
        1.0 / 3.0,
        kernel_c0(u),
        kernel_c2(u),
        kernel_s1(u),
    )
}

/// Numerical infimum of `det sigma_limit(u)` over `u in [epsilon, u_max]`:
/// a grid scan with two rounds of local refinement. The result is an upper
/// bound on the true infimum (every value is attained at an evaluated point).
pub fn det_floor(epsilon: f64, u_max: f64, grid: usize) -> f64 {
    assert!(epsilon > 0.0 && u_max > epsilon && grid >= 2);
    let det_at = |u: f64| sigma_limit(u).det();
    let mut best = f64::INFINITY;
    let mut best_u = epsilon;
    for i in 0..=grid {
        let u = epsilon + (u_max - epsilon) * i as f64 / grid as f64;
        let d = det_at(u);
        if d < best {
            best = d;
            best_u = u;
        }
    }
    let mut width = (u_max - epsilon) / grid as f64;
    for _ in 0..2 {
        let lo = (best_u - width).max(epsilon);
        let hi = (best_u + width).min(u_max);
        for i in 0..=64 {
            let u = lo + (hi - lo) * i as f64 / 64.0;
            let d = det_at(u);
            if d < best {
                best = d;
                best_u = u;
            }
        }
        width /= 16.0;
    }
    best
}

/// Expected number of roots of `p_n` on `[0, pi)` under Gaussian
/// coefficients: the one-point Kac-Rice intensity for a centered stationary
/// Gaussian process integrates to `n sqrt(sigma_22(n))`, with
/// `sigma_22(n) = (n+1)(2n+1)/(6n^2)`. Tends to `n/sqrt(3)`.
pub fn gaussian_mean_density(n: usize) -> f64 {
    assert!(n >= 1);
    let nf = n as f64;
    let sigma22 = (nf + 1.0) * (2.0 * nf + 1.0) / (6.0 * nf * nf);
    nf * sigma22.sqrt()
}

/// One-point zero intensity of the limit process per unit of rescaled time.
fn limit_intensity() -> f64 {
    (1.0f64 / 3.0).sqrt() / PI
}

/// Two-point zero intensity `rho_2(u)` of the `sin(u)/u`-correlation
/// stationary process: density of `(X(0), X(u))` at `(0,0)` times the
/// conditional expectation `E(|X'(0) X'(u)| | X(0)=X(u)=0)`.
///
/// The conditional pair is centered bivariate normal with common variance
/// `sigma^2 = 1/3 - r'^2/(1-r^2)` and correlation
/// `rho = (-r'' - r r'^2/(1-r^2)) / sigma^2`, and
/// `E|Z_1 Z_2| = (2 sigma^2/pi)(sqrt(1-rho^2) + rho asin rho)` exactly.
pub fn two_point_intensity(u: f64) -> f64 {
    let u = u.abs();
    if u < 1e-3 {
        // rho -> -1 and sigma^2 ~ u^2/45 as the points merge; the intensity
        // vanishes linearly with slope sqrt(3)/(90 pi). Below the seam the
        // closed form loses sigma^2 to cancellation; at the seam the two
        // branches agree to ~1e-7 relative.
        return 3.0f64.sqrt() * u / (90.0 * PI);
    }
    let r = kernel_c0(u);
    let rp = -kernel_s1(u); // r'(u)
    let rpp = -kernel_c2(u); // r''(u)
    let omr2 = one_minus_c0_sq(u);
    let sigma2 = 1.0 / 3.0 - rp * rp / omr2;
    let cov = -rpp - r * rp * rp / omr2;
    let rho = (cov / sigma2).clamp(-1.0, 1.0);
    let e_abs = 2.0 * sigma2 / PI * ((1.0 - rho * rho).sqrt() + rho * rho.asin());
    e_abs / (2.0 * PI * omr2.sqrt())
}

/// Dual-route evaluation of the conditional expectation in
/// [`two_point_intensity`] by 2D Gauss-Hermite quadrature; kept as an
/// independent cross-check of the closed form (the `|z1 z2|` kink limits it
/// to ~1e-3 accuracy at order 40).
pub fn two_point_intensity_gh(u: f64, order: usize) -> f64 {
    let u = u.abs();
    if u < 1e-3 {
        return 3.0f64.sqrt() * u / (90.0 * PI);
    }
    let r = kernel_c0(u);
    let rp = -kernel_s1(u);
    let rpp = -kernel_c2(u);
    let omr2 = one_minus_c0_sq(u);
    let sigma2 = 1.0 / 3.0 - rp * rp / omr2;
    let cov = -rpp - r * rp * rp / omr2;
    let rho = (cov / sigma2).clamp(-1.0, 1.0);
    // Z = L W with L the Cholesky factor of sigma2 [[1, rho], [rho, 1]]
    let l11 = sigma2.sqrt();
    let l21 = rho * l11;
    let l22 = (sigma2 * (1.0 - rho * rho)).max(0.0).sqrt();
    let rule = crate::quadrature::standard_normal_rule(order);
    let mut acc = 0.0;
    for &(x1, w1) in &rule {
        for &(x2, w2) in &rule {
            let z1 = l11 * x1;
            let z2 = l21 * x1 + l22 * x2;
            acc += w1 * w2 * (z1 * z2).abs();
        }
    }
    acc / (2.0 * PI * omr2.sqrt())
}

/// Quadrature controls for [`gaussian_variance_constant`].
#[derive(Clone, Copy, Debug)]
pub struct QuadratureParams {
    /// Truncation point of the correlation integral.
    pub u_max: f64,
    /// Gauss-Legendre panels per unit of `u` (the resolution knob).
    pub panels_per_unit: usize,
    /// Points per panel.
    pub gl_order: usize,
    /// Estimate the `O(1/u_max)` tail from the last quarter of the range and
    /// add it.
    pub tail_correction: bool,
}

impl Default for QuadratureParams {
    fn default() -> Self {
        QuadratureParams { u_max: 400.0, panels_per_unit: 4, gl_order: 16, tail_correction: true }
    }
}

/// Result of the variance-constant quadrature.
#[derive(Clone, Copy, Debug)]
pub struct VarianceConstant {
    /// Limit of `Var(N_n)/n` for the root count on `(0, n pi)`.
    pub value: f64,
    /// The same constant in the `[0, 2 pi]` normalization (twice the value).
    pub two_pi_normalized: f64,
    /// Tail estimate that was added (0 when disabled).
    pub tail: f64,
}

/// Limiting variance-per-degree constant of the Gaussian root count,
/// computed from the stationary two-point intensity:
///
/// `C = pi * rho_1 + 2 pi * int_0^inf (rho_2(u) - rho_1^2) du`
///
/// where `rho_1 = sqrt(1/3)/pi`. The diagonal term `pi rho_1 = 1/sqrt(3)`
/// comes from the counting measure itself; the integral is truncated at
/// `u_max` with an `O(1/u_max)` tail correction estimated from the average
/// of `u^2 (rho_2 - rho_1^2)` over the last quarter of the range.
pub fn gaussian_variance_constant(quad: &QuadratureParams) -> VarianceConstant {
    assert!(quad.u_max > 1.0 && quad.panels_per_unit >= 1 && quad.gl_order >= 2);
    let rho1 = limit_intensity();
    let rho1_sq = rho1 * rho1;
    let rule = gauss_legendre(quad.gl_order);
    let panels = (quad.u_max * quad.panels_per_unit as f64).ceil() as usize;
    let width = quad.u_max / panels as f64;
    let parts: Vec<f64> = (0..panels)
        .map(|i| {
            let a = i as f64 * width;
            let b = a + width;
            integrate_gl(&rule, a, b, |u| two_point_intensity(u) - rho1_sq)
        })
        .collect();
    let integral = pairwise_sum(&parts);

    let tail = if quad.tail_correction {
        // rho_2 - rho_1^2 ~ c/u^2 for large u; estimate c on [3/4 u_max, u_max]
        let a = 0.75 * quad.u_max;
        let b = quad.u_max;
        let c_parts: Vec<f64> = (0..(quad.panels_per_unit as f64 * (b - a)).ceil() as usize)
            .map(|i| {
                let lo = a + i as f64 * width;
                let hi = (lo + width).min(b);
                integrate_gl(&rule, lo, hi, |u| u * u * (two_point_intensity(u) - rho1_sq))
            })
            .collect();
        let c_bar = pairwise_sum(&c_parts) / (b - a);
        c_bar / quad.u_max
    } else {
        0.0
    };

    let value = PI * rho1 + 2.0 * PI * (integral + tail);
    VarianceConstant { value, two_pi_normalized: 2.0 * value, tail: 2.0 * PI * tail }
}

/// Determinant of a 4x4 matrix by LU with partial pivoting.
#[allow(clippy::needless_range_loop)]
fn det4(m: &[[f64; 4]; 4]) -> f64 {
    let mut a = *m;
    let mut det = 1.0;
    for col in 0..4 {
        let mut pivot = col;
        for row in col + 1..4 {
            if a[row][col].abs() > a[pivot][col].abs() {
                pivot = row;
            }
        }
        if a[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        det *= a[col][col];
        for row in col + 1..4 {
            let f = a[row][col] / a[col][col];
            for k in col..4 {
                a[row][k] -= f * a[col][k];
            }
        }
    }
    det
}

/// Eigenvalues of a symmetric 4x4 matrix by cyclic Jacobi rotations.
#[allow(clippy::needless_range_loop)]
fn sym_eigenvalues4(mut a: [[f64; 4]; 4]) -> [f64; 4] {
    for _ in 0..64 {
        let mut off = 0.0;
        for i in 0..4 {
            for j in i + 1..4 {
                off += a[i][j] * a[i][j];
            }
        }
        if off < 1e-30 {
            break;
        }
        for p in 0..4 {
            for q in p + 1..4 {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..4 {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..4 {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    [a[0][0], a[1][1], a[2][2], a[3][3]]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::CoefficientDistribution;
    use crate::polynomial::TrigPolynomialSample;
    use crate::stream::{rng_for, StreamDomain};

    /// Adaptive Simpson quadrature of the defining integrals, used as an
    /// oracle for the closed-form kernels.
    fn simpson<F: Fn(f64) -> f64 + Copy>(f: F, a: f64, b: f64, depth: usize) -> f64 {
        let m = 0.5 * (a + b);
        let coarse = (b - a) / 6.0 * (f(a) + 4.0 * f(m) + f(b));
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let fine = (b - a) / 12.0
            * (f(a) + 4.0 * f(lm) + 2.0 * f(m) + 4.0 * f(rm) + f(b));
        if depth == 0 || (fine - coarse).abs() < 1e-13 {
            fine + (fine - coarse) / 15.0
        } else {
            simpson(f, a, m, depth - 1) + simpson(f, m, b, depth - 1)
        }
    }

    #[test]
    fn kernels_match_quadrature_oracle() {
        for &u in &[0.003, 0.05, 0.7, 3.0, 17.5, 111.0] {
            let c0 = simpson(|x| (u * x).cos(), 0.0, 1.0, 20);
            let c1 = simpson(|x| x * (u * x).cos(), 0.0, 1.0, 20);
            let c2 = simpson(|x| x * x * (u * x).cos(), 0.0, 1.0, 20);
            let s1 = simpson(|x| x * (u * x).sin(), 0.0, 1.0, 20);
            assert!((kernel_c0(u) - c0).abs() < 1e-10, "c0 at {u}");
            assert!((kernel_c1(u) - c1).abs() < 1e-10, "c1 at {u}");
            assert!((kernel_c2(u) - c2).abs() < 1e-10, "c2 at {u}");
            assert!((kernel_s1(u) - s1).abs() < 1e-10, "s1 at {u}");
        }
    }

    #[test]
    fn kernel_series_and_closed_forms_agree_at_the_seam() {
        for &u in &[KERNEL_SEAM * 0.999, KERNEL_SEAM * 1.001] {
            let closed_c2 = (2.0 * u * u.cos() + (u * u - 2.0) * u.sin()) / (u * u * u);
            let closed_s1 = (u.sin() - u * u.cos()) / (u * u);
            let closed_c1 = (u.cos() + u * u.sin() - 1.0) / (u * u);
            assert!((kernel_c2(u) - closed_c2).abs() < 1e-11);
            assert!((kernel_s1(u) - closed_s1).abs() < 1e-11);
            assert!((kernel_c1(u) - closed_c1).abs() < 1e-11);
            assert!((kernel_c0(u) - u.sin() / u).abs() < 1e-14);
        }
    }

    #[test]
    fn sigma_n_fixed_entries_and_small_cases() {
        for &(n, t, s) in &[(1usize, 0.5, 0.1), (7, 3.0, 1.0), (64, 40.0, 2.5)] {
            let m = sigma_n(n, t, s);
            assert_eq!(m.entry(1, 1), 1.0);
            assert_eq!(m.entry(3, 3), 1.0);
            assert_eq!(m.entry(1, 2), 0.0);
            assert_eq!(m.entry(3, 4), 0.0);
            assert!(m.is_psd(1e-10), "n={n}");
        }
        // n = 2: sigma_22 = (1/2)(1/4 + 1) = 5/8
        assert!((sigma_n(2, 1.0, 0.3).entry(2, 2) - 5.0 / 8.0).abs() < 1e-15);
        // t = s: perfect correlation between the two points
        let diag = sigma_n(16, 2.0, 2.0);
        assert!((diag.entry(1, 3) - 1.0).abs() < 1e-14);
        assert!(diag.det().abs() < 1e-12);
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn sigma_n_matches_empirical_covariance() {
        let n = 32;
        let (t, s) = (5.0, 1.5);
        let expect = sigma_n(n, t, s);
        let m = 30_000usize;
        let mut sums = [[0.0f64; 4]; 4];
        for idx in 0..m {
            let mut rng = rng_for(99, StreamDomain::CovarianceCheck, n as u64, idx as u64);
            let sample = TrigPolynomialSample::from_distribution(
                &CoefficientDistribution::Gaussian,
                n,
                &mut rng,
            );
            let v = sample.pair_statistic(t, s);
            for i in 0..4 {
                for j in 0..4 {
                    sums[i][j] += v[i] * v[j];
                }
            }
        }
        for i in 0..4 {
            for j in 0..4 {
                let emp = sums[i][j] / m as f64;
                let want = expect.entry(i + 1, j + 1);
                let var_bound = expect.entry(i + 1, i + 1) * expect.entry(j + 1, j + 1)
                    + want * want;
                let se = (var_bound / m as f64).sqrt();
                assert!(
                    (emp - want).abs() < 4.0 * se,
                    "entry ({},{}): emp {emp} vs {want} (se {se})",
                    i + 1,
                    j + 1
                );
            }
        }
    }

    #[test]
    fn sigma_limit_values_and_large_u() {
        let at0 = sigma_limit(0.0);
        assert_eq!(at0.entry(1, 3), 1.0);
        assert!((at0.entry(2, 4) - 1.0 / 3.0).abs() < 1e-15);
        assert!(at0.det().abs() < 1e-12, "singular at u = 0");

        let far = sigma_limit(1e6);
        for (i, j) in [(1, 3), (1, 4), (2, 3), (2, 4)] {
            assert!(far.entry(i, j).abs() < 1e-5, "entry ({i},{j}) = {}", far.entry(i, j));
        }
        assert!((far.det() - 1.0 / 9.0).abs() < 1e-4);
    }

    #[test]
    fn sigma_n_converges_to_sigma_limit_at_rate_u_over_n() {
        // |sigma_n - sigma_limit| <= C u / n entrywise for u in [1/2, sqrt n]
        let c = 4.0;
        for &n in &[16usize, 64, 256, 1024] {
            for &u in &[0.5, 1.0, 2.0, 5.0, (n as f64).sqrt()] {
                let fin = sigma_n(n, u + 1.0, 1.0);
                let lim = sigma_limit(u);
                for i in 1..=4 {
                    for j in 1..=4 {
                        let diff = (fin.entry(i, j) - lim.entry(i, j)).abs();
                        assert!(
                            diff <= c * u / n as f64,
                            "n={n} u={u} entry ({i},{j}): diff {diff:e}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn min_eigenvalues_nonnegative_on_grid() {
        for &n in &[8usize, 64] {
            for i in 0..40 {
                let u = 0.25 * i as f64;
                let m = sigma_n(n, u + 0.7, 0.7);
                assert!(m.min_eigenvalue() >= -1e-10, "n={n} u={u}");
            }
        }
        for i in 0..60 {
            let u = 0.2 * i as f64;
            assert!(sigma_limit(u).min_eigenvalue() >= -1e-10, "u={u}");
        }
    }

    #[test]
    fn det_floor_behaviour() {
        let floor_half = det_floor(0.5, 100.0, 400);
        assert!(floor_half > 0.0);
        // a larger epsilon shrinks the search set, so the floor cannot drop
        let floor_two = det_floor(2.0, 100.0, 400);
        assert!(floor_two >= floor_half - 1e-12);
        // far tail: everything close to the product of the diagonals
        let tail_floor = det_floor(50.0, 100.0, 400);
        assert!((tail_floor - 1.0 / 9.0).abs() < 0.1 / 9.0, "tail floor {tail_floor}");
    }

    #[test]
    fn eigen_and_det_helpers_agree_with_hand_values() {
        let m = [
            [2.0, 1.0, 0.0, 0.0],
            [1.0, 2.0, 0.0, 0.0],
            [0.0, 0.0, 3.0, 0.0],
            [0.0, 0.0, 0.0, 5.0],
        ];
        let mut eig = sym_eigenvalues4(m);
        eig.sort_by(f64::total_cmp);
        for (got, want) in eig.iter().zip([1.0, 3.0, 3.0, 5.0]) {
            assert!((got - want).abs() < 1e-12);
        }
        assert!((det4(&m) - 45.0).abs() < 1e-12);
    }

    #[test]
    fn mean_density_formula() {
        assert!((gaussian_mean_density(1) - 1.0).abs() < 1e-15);
        let n = 1_000_000;
        let normalized = gaussian_mean_density(n) / n as f64;
        assert!((normalized - 1.0 / 3.0f64.sqrt()).abs() < 1e-6);
    }

    #[test]
    fn two_point_intensity_properties() {
        // vanishes at the diagonal (repulsion), positive away from it
        assert_eq!(two_point_intensity(0.0), 0.0);
        for &u in &[0.5, 1.0, 3.0, 10.0, 50.0] {
            assert!(two_point_intensity(u) > 0.0);
        }
        // decorrelation: rho_2 -> rho_1^2 at large separation
        let rho1_sq = limit_intensity().powi(2);
        assert!((two_point_intensity(5000.0) - rho1_sq).abs() < 1e-4);
        // seam continuity: the linear model evaluated just above the seam
        // matches the closed-form branch there
        let u = 1.001e-3;
        let closed = two_point_intensity(u);
        let linear = 3.0f64.sqrt() * u / (90.0 * PI);
        assert!((closed - linear).abs() < 1e-6 * closed, "{closed} vs {linear}");
    }

    #[test]
    fn gauss_hermite_route_agrees_with_closed_form() {
        for &u in &[0.3, 1.0, 2.5, 8.0] {
            let exact = two_point_intensity(u);
            let gh = two_point_intensity_gh(u, 40);
            assert!(
                (exact - gh).abs() < 3e-2 * exact.max(1e-3),
                "u={u}: exact {exact} vs gh {gh}"
            );
        }
    }

    #[test]
    fn variance_constant_is_stable_and_in_range() {
        let base = gaussian_variance_constant(&QuadratureParams::default());
        assert!(base.value.is_finite() && base.value > 0.0);
        // the [0, 2pi]-normalized value brackets the literature ballpark
        assert!((base.two_pi_normalized - 0.56).abs() < 0.03, "{}", base.two_pi_normalized);

        let doubled = gaussian_variance_constant(&QuadratureParams {
            panels_per_unit: 8,
            ..QuadratureParams::default()
        });
        assert!(
            (doubled.value - base.value).abs() < 1e-3,
            "resolution doubling moved the value by {}",
            (doubled.value - base.value).abs()
        );
    }
}
