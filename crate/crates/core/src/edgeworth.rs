//! Edgeworth correctors for sums `S_n = (1/sqrt n) sum_k C_n(k) Y_k` and the
//! exact rational assembly of the limiting variance constants.
//!
//! The expansion to order `1/n` against the Gaussian baseline reads
//!
//! ```text
//! E f(S_n(Y)) = E f(S_n(G)) + (1/n) E( f(I^{1/2} W) Gamma_2(I^{-1/2} X, W) ) + o(1/n)
//! ```
//!
//! with correctors built from multi-index Hermite polynomials `H_alpha` and
//! the cumulant-difference coefficients
//! `c_n(alpha) = (1/n) sum_k [ E(X_{n,k}^alpha) - E(G_{n,k}^alpha) ]`:
//!
//! ```text
//! Gamma_1(x) = (1/6)  sum_{|beta|=3} c_n(beta) H_beta(x)
//! Gamma_2(x) = (1/24) sum_{|beta|=4} c_n(beta) H_beta(x)
//!            + (1/72) sum_{|rho|=3, |beta|=3} c_n(beta) c_n(rho) H_{(beta,rho)}(x)
//! ```
//!
//! For the two-point mixing family only a handful of degree-6 index pairs
//! survive the block and parity cancellations; `enumerate_survivors` and
//! `survivor_patterns` reproduce that classification by brute force, and
//! [`assemble_constants`] chains the surviving contributions into the exact
//! rationals `9/5 -> 1/120 -> 1/60` without any floating point.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Ratio;
use rand_distr::{Distribution, StandardNormal};

use crate::coefficients::CoefficientDistribution;
use crate::quadrature::{pairwise_sum, standard_normal_rule};
use crate::stream::{rng_for, StreamDomain};

/// Probabilists' Hermite polynomial `h_k(x)` by the three-term recurrence
/// `h_{k+1} = x h_k - k h_{k-1}`.
pub fn hermite_uni(k: usize, x: f64) -> f64 {
    match k {
        0 => 1.0,
        1 => x,
        _ => {
            let (mut prev, mut cur) = (1.0, x);
            for j in 1..k {
                let next = x * cur - j as f64 * prev;
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum EdgeworthError {
    #[error("multi-index entry {entry} outside 1..={d}")]
    IndexOutOfRange { entry: u8, d: usize },
    #[error("multi-index length {0} unsupported here (expected 3 or 4)")]
    UnsupportedLength(usize),
    #[error("mixing family is degenerate: min eigenvalue of Sigma_n is {min_eig:e}")]
    DegenerateMixing { min_eig: f64 },
}

/// Ordered multi-index over `{1, ..., d}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct MultiIndex {
    entries: Vec<u8>,
    d: usize,
}

impl MultiIndex {
    pub fn new(entries: Vec<u8>, d: usize) -> Result<Self, EdgeworthError> {
        for &e in &entries {
            if e == 0 || e as usize > d {
                return Err(EdgeworthError::IndexOutOfRange { entry: e, d });
            }
        }
        Ok(MultiIndex { entries, d })
    }

    pub fn entries(&self) -> &[u8] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    /// Component counts `i_j(alpha) = #\{i : alpha_i = j\}` for `j = 1..=d`.
    pub fn counts(&self) -> Vec<usize> {
        let mut c = vec![0usize; self.d];
        for &e in &self.entries {
            c[e as usize - 1] += 1;
        }
        c
    }

    /// Concatenation `(self, other)` over the same dimension.
    pub fn concat(&self, other: &MultiIndex) -> MultiIndex {
        assert_eq!(self.d, other.d);
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        MultiIndex { entries, d: self.d }
    }

    /// Number of distinct orderings of this multi-index (multinomial
    /// coefficient of its counts).
    pub fn multiplicity(&self) -> f64 {
        let mut num = 1.0;
        for i in 2..=self.len() {
            num *= i as f64;
        }
        for c in self.counts() {
            for i in 2..=c {
                num /= i as f64;
            }
        }
        num
    }
}

/// `H_alpha(x) = prod_j h_{i_j(alpha)}(x_j)`.
pub fn hermite_multi(alpha: &MultiIndex, x: &[f64]) -> f64 {
    assert_eq!(x.len(), alpha.dim(), "point dimension must match the multi-index dimension");
    alpha
        .counts()
        .iter()
        .zip(x.iter())
        .map(|(&k, &xi)| hermite_uni(k, xi))
        .product()
}

/// The matrix families `C_n(k)` that mix the coefficient pairs into the
/// observed vector, together with the diagonal limit `I_d(lambda)` of their
/// covariance.
#[derive(Clone, Copy, Debug)]
pub enum MixingFamily {
    /// `C_n(k) = I_2`: the plain CLT for the coefficient pairs.
    Identity,
    /// `C_n(k, nt)`: the single-point family `(P_n(t), P_n'(t))`;
    /// `lambda = (1, 1/3)`.
    TrigSingle { t: f64 },
    /// Stacked `[C_n(k, nt); C_n(k, ns)]`: the two-point family;
    /// `lambda = (1, 1/3, 1, 1/3)`.
    TrigPair { t: f64, s: f64 },
}

impl MixingFamily {
    pub fn dim(&self) -> usize {
        match self {
            MixingFamily::Identity | MixingFamily::TrigSingle { .. } => 2,
            MixingFamily::TrigPair { .. } => 4,
        }
    }

    /// Diagonal of `I_d(lambda)`, the limit covariance of `S_n(G)`.
    pub fn lambda(&self) -> Vec<f64> {
        match self {
            MixingFamily::Identity => vec![1.0, 1.0],
            MixingFamily::TrigSingle { .. } => vec![1.0, 1.0 / 3.0],
            MixingFamily::TrigPair { .. } => vec![1.0, 1.0 / 3.0, 1.0, 1.0 / 3.0],
        }
    }

    /// Raw `d x 2` mixing matrix for index `k` (rows beyond `dim()` unused).
    fn raw_rows(&self, k: usize, n: usize) -> [[f64; 2]; 4] {
        let mut rows = [[0.0; 2]; 4];
        match *self {
            MixingFamily::Identity => {
                rows[0] = [1.0, 0.0];
                rows[1] = [0.0, 1.0];
            }
            MixingFamily::TrigSingle { t } => {
                let block = trig_block(k, n, t);
                rows[0] = block[0];
                rows[1] = block[1];
            }
            MixingFamily::TrigPair { t, s } => {
                let bt = trig_block(k, n, t);
                let bs = trig_block(k, n, s);
                rows[0] = bt[0];
                rows[1] = bt[1];
                rows[2] = bs[0];
                rows[3] = bs[1];
            }
        }
        rows
    }

    /// `I_d(lambda)^{-1/2} C_n(k)`, the matrix entering the corrector
    /// coefficients.
    fn scaled_rows(&self, k: usize, n: usize) -> [[f64; 2]; 4] {
        let mut rows = self.raw_rows(k, n);
        for (row, lam) in rows.iter_mut().zip(self.lambda()) {
            let f = 1.0 / lam.sqrt();
            row[0] *= f;
            row[1] *= f;
        }
        rows
    }
}

/// `C_n(k, n t)` evaluated at the rescaled argument: angle `k t`.
fn trig_block(k: usize, n: usize, t: f64) -> [[f64; 2]; 2] {
    let (sin_kt, cos_kt) = (k as f64 * t).sin_cos();
    let ratio = k as f64 / n as f64;
    [[cos_kt, sin_kt], [-ratio * sin_kt, ratio * cos_kt]]
}

/// Cumulant-difference coefficients `c_n(alpha)` for `|alpha| in {3, 4}`,
/// keyed by the sorted multi-index over `{1..d}`.
#[derive(Clone, Debug)]
pub struct CorrectorCoefficients {
    d: usize,
    c3: BTreeMap<Vec<u8>, f64>,
    c4: BTreeMap<Vec<u8>, f64>,
}

impl CorrectorCoefficients {
    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn c3(&self, alpha: &[u8]) -> Option<f64> {
        let mut key = alpha.to_vec();
        key.sort_unstable();
        self.c3.get(&key).copied()
    }

    pub fn c4(&self, alpha: &[u8]) -> Option<f64> {
        let mut key = alpha.to_vec();
        key.sort_unstable();
        self.c4.get(&key).copied()
    }

    pub fn c3_entries(&self) -> impl Iterator<Item = (&[u8], f64)> {
        self.c3.iter().map(|(k, &v)| (k.as_slice(), v))
    }

    pub fn c4_entries(&self) -> impl Iterator<Item = (&[u8], f64)> {
        self.c4.iter().map(|(k, &v)| (k.as_slice(), v))
    }

    pub fn all_zero(&self, tol: f64) -> bool {
        self.c3.values().chain(self.c4.values()).all(|v| v.abs() <= tol)
    }
}

fn sorted_multisets(d: usize, len: usize) -> Vec<Vec<u8>> {
    fn rec(d: u8, len: usize, start: u8, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for v in start..=d {
            cur.push(v);
            rec(d, len, v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(d as u8, len, 1, &mut Vec::new(), &mut out);
    out
}

/// Mixed moment `E(prod Y^{l_i})` for independent components with marginal
/// moments `m = (m1, m2, m3, m4)` (`m[j-1]` the j-th moment).
fn mixed_moment(l: &[u8], m: &[f64; 4]) -> f64 {
    let ones = l.iter().filter(|&&x| x == 1).count();
    let twos = l.len() - ones;
    let comp = |c: usize| -> f64 {
        match c {
            0 => 1.0,
            1 => m[0],
            2 => m[1],
            3 => m[2],
            4 => m[3],
            _ => unreachable!(),
        }
    };
    comp(ones) * comp(twos)
}

/// `c_n(alpha, I^{-1/2} X)` for all `|alpha| in {3, 4}` computed from the
/// analytic moments of `dist` pushed through the scaled mixing matrices and
/// averaged over `k = 1..=n`. Fails when the averaged covariance
/// `Sigma_n = (1/n) sum C C^T` of the scaled family is degenerate.
pub fn corrector_coefficients(
    dist: &CoefficientDistribution,
    mixing: &MixingFamily,
    n: usize,
) -> Result<CorrectorCoefficients, EdgeworthError> {
    assert!(n >= 1);
    let d = mixing.dim();
    let m_y = [
        dist.moment(1).expect("order 1"),
        dist.moment(2).expect("order 2"),
        dist.moment(3).expect("order 3"),
        dist.moment(4).expect("order 4"),
    ];
    let m_g = [0.0, 1.0, 0.0, 3.0];

    // non-degeneracy of the scaled family's average covariance
    let mut sigma = vec![vec![0.0f64; d]; d];
    for k in 1..=n {
        let rows = mixing.scaled_rows(k, n);
        for i in 0..d {
            for j in 0..d {
                sigma[i][j] += (rows[i][0] * rows[j][0] + rows[i][1] * rows[j][1]) / n as f64;
            }
        }
    }
    let min_eig = sym_min_eigenvalue(&sigma);
    if min_eig < 1e-8 {
        return Err(EdgeworthError::DegenerateMixing { min_eig });
    }

    let l_vectors = |m: usize| -> Vec<Vec<u8>> {
        let mut out = Vec::with_capacity(1 << m);
        for mask in 0..(1usize << m) {
            out.push((0..m).map(|i| if mask >> i & 1 == 0 { 1u8 } else { 2u8 }).collect());
        }
        out
    };

    let mut result = CorrectorCoefficients { d, c3: BTreeMap::new(), c4: BTreeMap::new() };
    for len in [3usize, 4] {
        let multisets = sorted_multisets(d, len);
        let ls = l_vectors(len);
        // moment deviations per l-pattern; zero patterns are skipped entirely
        let deltas: Vec<f64> = ls.iter().map(|l| mixed_moment(l, &m_y) - mixed_moment(l, &m_g)).collect();
        let active: Vec<usize> = (0..ls.len()).filter(|&i| deltas[i] != 0.0).collect();
        let mut acc = vec![0.0f64; multisets.len()];
        if !active.is_empty() {
            for k in 1..=n {
                let rows = mixing.scaled_rows(k, n);
                for (mi, alpha) in multisets.iter().enumerate() {
                    let mut total = 0.0;
                    for &ai in &active {
                        let l = &ls[ai];
                        let mut prod = deltas[ai];
                        for (pos, &a) in alpha.iter().enumerate() {
                            prod *= rows[a as usize - 1][l[pos] as usize - 1];
                        }
                        total += prod;
                    }
                    acc[mi] += total;
                }
            }
        }
        for (mi, alpha) in multisets.into_iter().enumerate() {
            let value = acc[mi] / n as f64;
            if len == 3 {
                result.c3.insert(alpha, value);
            } else {
                result.c4.insert(alpha, value);
            }
        }
    }
    Ok(result)
}

#[allow(clippy::needless_range_loop)]
fn sym_min_eigenvalue(a: &[Vec<f64>]) -> f64 {
    // cyclic Jacobi on a small dense symmetric matrix
    let d = a.len();
    let mut m: Vec<Vec<f64>> = a.to_vec();
    for _ in 0..64 {
        let mut off = 0.0;
        for i in 0..d {
            for j in i + 1..d {
                off += m[i][j] * m[i][j];
            }
        }
        if off < 1e-28 {
            break;
        }
        for p in 0..d {
            for q in p + 1..d {
                if m[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..d {
                    let (mkp, mkq) = (m[k][p], m[k][q]);
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..d {
                    let (mpk, mqk) = (m[p][k], m[q][k]);
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
            }
        }
    }
    (0..d).map(|i| m[i][i]).fold(f64::INFINITY, f64::min)
}

/// First-order corrector `Gamma_1(x) = (1/6) sum_{|beta|=3} c(beta) H_beta(x)`
/// (the sum runs over ordered indices; multiplicities are folded in).
pub fn gamma1(coeffs: &CorrectorCoefficients, x: &[f64]) -> f64 {
    assert_eq!(x.len(), coeffs.d);
    let mut acc = 0.0;
    for (alpha, c) in coeffs.c3_entries() {
        if c == 0.0 {
            continue;
        }
        let mi = MultiIndex::new(alpha.to_vec(), coeffs.d).expect("stored keys are valid");
        acc += mi.multiplicity() * c * hermite_multi(&mi, x);
    }
    acc / 6.0
}

/// Second-order corrector
/// `Gamma_2(x) = (1/24) sum_{|beta|=4} c(beta) H_beta(x)
///  + (1/72) sum_{|rho|=3,|beta|=3} c(beta) c(rho) H_{(beta,rho)}(x)`.
pub fn gamma2(coeffs: &CorrectorCoefficients, x: &[f64]) -> f64 {
    assert_eq!(x.len(), coeffs.d);
    let mut quartic = 0.0;
    for (alpha, c) in coeffs.c4_entries() {
        if c == 0.0 {
            continue;
        }
        let mi = MultiIndex::new(alpha.to_vec(), coeffs.d).expect("stored keys are valid");
        quartic += mi.multiplicity() * c * hermite_multi(&mi, x);
    }
    let mut cubic_sq = 0.0;
    for (beta, cb) in coeffs.c3_entries() {
        if cb == 0.0 {
            continue;
        }
        let bi = MultiIndex::new(beta.to_vec(), coeffs.d).expect("valid");
        for (rho, cr) in coeffs.c3_entries() {
            if cr == 0.0 {
                continue;
            }
            let ri = MultiIndex::new(rho.to_vec(), coeffs.d).expect("valid");
            let joint = bi.concat(&ri);
            cubic_sq += bi.multiplicity() * ri.multiplicity() * cb * cr * hermite_multi(&joint, x);
        }
    }
    quartic / 24.0 + cubic_sq / 72.0
}

/// Smooth test functions for the expansion residual.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TestFunction {
    /// `f(x) = x_1^4`
    FirstCoordFourth,
    /// `f(x) = x_1^2`
    FirstCoordSquare,
}

impl TestFunction {
    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            TestFunction::FirstCoordFourth => x[0].powi(4),
            TestFunction::FirstCoordSquare => x[0] * x[0],
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            TestFunction::FirstCoordFourth => "x1^4",
            TestFunction::FirstCoordSquare => "x1^2",
        }
    }
}

/// `E( f(I^{1/2} W) g(W) )` by tensorized Gauss-Hermite quadrature over the
/// standard normal `W` in `d = lambda.len()` dimensions.
fn normal_expectation<F: FnMut(&[f64], &[f64]) -> f64>(
    lambda: &[f64],
    order: usize,
    mut integrand: F,
) -> f64 {
    let rule = standard_normal_rule(order);
    let d = lambda.len();
    let mut idx = vec![0usize; d];
    let mut w = vec![0.0f64; d];
    let mut scaled = vec![0.0f64; d];
    let mut terms = Vec::new();
    loop {
        let mut weight = 1.0;
        for (j, &i) in idx.iter().enumerate() {
            let (x, wt) = rule[i];
            w[j] = x;
            scaled[j] = lambda[j].sqrt() * x;
            weight *= wt;
        }
        terms.push(weight * integrand(&scaled, &w));
        // odometer
        let mut j = 0;
        loop {
            if j == d {
                return pairwise_sum(&terms);
            }
            idx[j] += 1;
            if idx[j] < rule.len() {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
}

/// One row of the expansion-residual table.
#[derive(Clone, Copy, Debug)]
pub struct ResidualRow {
    pub n: usize,
    /// Monte Carlo `E f(S_n(Y))` and its standard error.
    pub e_f_y: f64,
    pub se_y: f64,
    /// Monte Carlo `E f(S_n(G))` and its standard error.
    pub e_f_g: f64,
    pub se_g: f64,
    /// `(1/n) E( f(I^{1/2}W) Gamma_2(I^{-1/2}X, W) )`, by quadrature.
    pub corrector_over_n: f64,
    /// Monte Carlo measurement of `E( f(I^{1/2}W) Gamma_1(I^{-1/2}X, W) )`
    /// (vanishes for even `f`), with its standard error.
    pub gamma1_term: f64,
    pub gamma1_se: f64,
    /// `|E f(S_n(Y)) - E f(S_n(G)) - corrector|` and the same scaled by `n`.
    pub residual: f64,
    pub residual_times_n: f64,
    /// Standard error of the residual (from the two Monte Carlo terms).
    pub stderr: f64,
}

/// Controls for [`edgeworth_residual`].
#[derive(Clone, Copy, Debug)]
pub struct ResidualParams {
    pub mc_samples: usize,
    pub gamma1_mc_samples: usize,
    pub gh_order: usize,
    pub base_seed: u64,
}

impl Default for ResidualParams {
    fn default() -> Self {
        ResidualParams { mc_samples: 200_000, gamma1_mc_samples: 100_000, gh_order: 40, base_seed: 17 }
    }
}

/// Measure the order-`1/n` expansion against Monte Carlo for each `n` in
/// `n_list`: the left-hand side by simulation, the corrector by quadrature,
/// and the residual scaled by `n` for trend inspection.
pub fn edgeworth_residual(
    f: TestFunction,
    dist: &CoefficientDistribution,
    mixing: &MixingFamily,
    n_list: &[usize],
    params: &ResidualParams,
) -> Result<Vec<ResidualRow>, EdgeworthError> {
    let d = mixing.dim();
    let gaussian = CoefficientDistribution::Gaussian;
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let coeffs = corrector_coefficients(dist, mixing, n)?;
        let lambda = mixing.lambda();
        let corrector = normal_expectation(&lambda, params.gh_order, |scaled, w| {
            f.eval(scaled) * gamma2(&coeffs, w)
        });

        // Monte Carlo estimate of E f(S_n(.)) for Y and for G
        let mc = |which_gaussian: bool| -> (f64, f64) {
            let m = params.mc_samples;
            let mut vals = Vec::with_capacity(m);
            let use_dist = if which_gaussian { &gaussian } else { dist };
            for j in 0..m {
                let tag = if which_gaussian { 2 * j + 1 } else { 2 * j } as u64;
                let mut rng = rng_for(params.base_seed, StreamDomain::EdgeworthResidual, n as u64, tag);
                let mut s = vec![0.0f64; d];
                for k in 1..=n {
                    let (y1, y2) = use_dist.sample_pair(&mut rng);
                    let rows_k = mixing.raw_rows(k, n);
                    for (i, si) in s.iter_mut().enumerate().take(d) {
                        *si += rows_k[i][0] * y1 + rows_k[i][1] * y2;
                    }
                }
                let scale = 1.0 / (n as f64).sqrt();
                for si in &mut s {
                    *si *= scale;
                }
                vals.push(f.eval(&s));
            }
            let mean = pairwise_sum(&vals) / m as f64;
            let var_terms: Vec<f64> = vals.iter().map(|v| (v - mean) * (v - mean)).collect();
            let se = (pairwise_sum(&var_terms) / (m as f64 - 1.0) / m as f64).sqrt();
            (mean, se)
        };
        let (e_f_y, se_y) = mc(false);
        let (e_f_g, se_g) = mc(true);

        // Gamma_1 term measured by Monte Carlo over W
        let (gamma1_term, gamma1_se) = {
            let m = params.gamma1_mc_samples;
            let mut rng = rng_for(params.base_seed, StreamDomain::EdgeworthResidual, n as u64, u64::MAX);
            let mut vals = Vec::with_capacity(m);
            let mut w = vec![0.0f64; d];
            let mut scaled = vec![0.0f64; d];
            for _ in 0..m {
                for (j, wj) in w.iter_mut().enumerate() {
                    *wj = StandardNormal.sample(&mut rng);
                    scaled[j] = lambda[j].sqrt() * *wj;
                }
                vals.push(f.eval(&scaled) * gamma1(&coeffs, &w));
            }
            let mean = pairwise_sum(&vals) / m as f64;
            let var_terms: Vec<f64> = vals.iter().map(|v| (v - mean) * (v - mean)).collect();
            let se = (pairwise_sum(&var_terms) / (m as f64 - 1.0) / m as f64).sqrt();
            (mean, se)
        };

        let corrector_over_n = corrector / n as f64;
        let residual = (e_f_y - e_f_g - corrector_over_n).abs();
        let stderr = (se_y * se_y + se_g * se_g).sqrt();
        rows.push(ResidualRow {
            n,
            e_f_y,
            se_y,
            e_f_g,
            se_g,
            corrector_over_n,
            gamma1_term,
            gamma1_se,
            residual,
            residual_times_n: residual * n as f64,
            stderr,
        });
    }
    Ok(rows)
}

// ---------------------------------------------------------------------------
// Cancellation classification for the two-point corrector
// ---------------------------------------------------------------------------

/// Rule 1 (block cancellation): a degree-(3,3) pair contributes only when the
/// combined entries touch both the `{1,2}` block (the `t` point) and the
/// `{3,4}` block (the `s` point). Rule 2 (parity): each symbol must appear an
/// even number of times overall, or the Hermite expectation vanishes by
/// symmetry.
pub fn survives_cancellations(rho: &[u8; 3], beta: &[u8; 3]) -> bool {
    let mut counts = [0usize; 4];
    for &e in rho.iter().chain(beta.iter()) {
        counts[e as usize - 1] += 1;
    }
    let first_block = counts[0] + counts[1];
    let second_block = counts[2] + counts[3];
    let mixed = first_block > 0 && second_block > 0;
    let even = counts.iter().all(|c| c % 2 == 0);
    mixed && even
}

fn canonical_pair(rho: &[u8; 3], beta: &[u8; 3]) -> ([u8; 3], [u8; 3]) {
    let mut r = *rho;
    let mut b = *beta;
    r.sort_unstable();
    b.sort_unstable();
    if r <= b {
        (r, b)
    } else {
        (b, r)
    }
}

/// All ordered pairs `(rho, beta)` over `{1,2,3,4}^3` that survive both
/// cancellation rules, reduced to canonical (sorted, unordered) form.
pub fn enumerate_survivors() -> BTreeSet<([u8; 3], [u8; 3])> {
    let mut out = BTreeSet::new();
    let all: Vec<[u8; 3]> = {
        let mut v = Vec::new();
        for a in 1..=4u8 {
            for b in 1..=4u8 {
                for c in 1..=4u8 {
                    v.push([a, b, c]);
                }
            }
        }
        v
    };
    for rho in &all {
        for beta in &all {
            if survives_cancellations(rho, beta) {
                out.insert(canonical_pair(rho, beta));
            }
        }
    }
    out
}

/// The three survivor patterns, instantiated over `i` in one block and
/// `j, p` in the other (both block assignments), in canonical form:
///
/// ```text
/// case 1: rho = (i, j, j), beta = (i, p, p)
/// case 2: rho = (i, i, j), beta = (j, p, p)
/// case 3: rho = (i, j, p), beta = (i, j, p)
/// ```
pub fn survivor_patterns() -> BTreeSet<([u8; 3], [u8; 3])> {
    let mut out = BTreeSet::new();
    let blocks: [([u8; 2], [u8; 2]); 2] = [([1, 2], [3, 4]), ([3, 4], [1, 2])];
    for (first, second) in blocks {
        for &i in &first {
            for &j in &second {
                for &p in &second {
                    out.insert(canonical_pair(&[i, j, j], &[i, p, p]));
                    out.insert(canonical_pair(&[i, i, j], &[j, p, p]));
                    out.insert(canonical_pair(&[i, j, p], &[i, j, p]));
                }
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Exact rational assembly of the limiting constants
// ---------------------------------------------------------------------------

/// The exact rational chain from the surviving two-point contributions to
/// the theorem's constant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstantsReport {
    /// Per-(i,j) inner terms `(-3)^(i+j) / (4 (1 + 2 (i + j - 2)))`.
    pub inner_terms: Vec<((u8, u8), Ratio<i64>)>,
    /// Their sum (9/5).
    pub inner_sum: Ratio<i64>,
    /// Coefficient of `y*` in the off-diagonal variance contribution (1/120):
    /// multiplicity 6, triangle-to-square factor 1/2, corrector prefactor
    /// 1/24, Hermite limit factor 1/3, and the pi^2 of the angular average
    /// cancelling against `rho_{i,j} = (-1)^(i+j)/pi^2`.
    pub gamma_prime_coefficient: Ratio<i64>,
    /// The theorem coefficient 1/60 (factor 2 between the half-plane and the
    /// full square of pairs).
    pub theorem_coefficient: Ratio<i64>,
    /// Denominator of the i.i.d. specialization `(E Y^4 - 3)/30`.
    pub iid_kurtosis_divisor: Ratio<i64>,
}

/// Assemble the constants exactly; no floating point on this path.
pub fn assemble_constants() -> ConstantsReport {
    let r = |n: i64, d: i64| Ratio::new(n, d);
    let mut inner_terms = Vec::new();
    let mut inner_sum = r(0, 1);
    for i in 1..=2u8 {
        for j in 1..=2u8 {
            let e = (i + j) as u32;
            let sign_pow3 = (-3i64).pow(e);
            let denom = 4 * (1 + 2 * (i as i64 + j as i64 - 2));
            let term = r(sign_pow3, denom);
            inner_terms.push(((i, j), term));
            inner_sum += term;
        }
    }
    // 6 * (1/2) * (1/24) * (1/3) * (1/9): multiplicity, triangle factor,
    // corrector prefactor, Hermite limit, and 3^(i+j-2)/(-3)^(i+j) = 1/9
    let prefactor = r(6, 1) * r(1, 2) * r(1, 24) * r(1, 3) * r(1, 9);
    let gamma_prime = prefactor * inner_sum;
    let theorem = r(2, 1) * gamma_prime;
    // y* = 2 (E Y^4 - 3) for i.i.d. independent components, so the shift is
    // (E Y^4 - 3) divided by:
    let divisor = (r(1, 1) / theorem) / r(2, 1);
    ConstantsReport {
        inner_terms,
        inner_sum,
        gamma_prime_coefficient: gamma_prime,
        theorem_coefficient: theorem,
        iid_kurtosis_divisor: divisor,
    }
}
