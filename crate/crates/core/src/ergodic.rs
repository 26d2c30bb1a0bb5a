//! Deterministic trigonometric averages over irrational rotations.
//!
//! These are the number-theoretic inputs behind the limit computation: the
//! weighted ergodic averages `(1/n) sum (k/n)^q f(k alpha)` converging to
//! `(1/(q+1)) * mean(f)`, the quartic averages of entries of the mixing
//! matrix `C_n(k, t)` with limit `1/(4(1 + 2(i+j-2)))`, the mixed averages
//! that vanish in the limit, and the uniform trigonometric-sum bound
//! `|S_{b,i}| <= C / (n b-bar)`.
//!
//! Irrational angles are passed as floating-point values; since every float
//! is rational, convergence statements are only meaningful up to the `n`
//! where the rational period exceeds `n`. The shipped tolerances (1e-2 at
//! n = 1e6) are chosen accordingly.

use std::f64::consts::PI;

use crate::quadrature::pairwise_sum;

/// Periodic test functions with known means for the ergodic averages.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PeriodicFunction {
    One,
    Cos,
    Sin,
    CosSquared,
    SinSquared,
}

impl PeriodicFunction {
    pub fn eval(self, x: f64) -> f64 {
        match self {
            PeriodicFunction::One => 1.0,
            PeriodicFunction::Cos => x.cos(),
            PeriodicFunction::Sin => x.sin(),
            PeriodicFunction::CosSquared => x.cos().powi(2),
            PeriodicFunction::SinSquared => x.sin().powi(2),
        }
    }

    /// `(1/2pi) int_0^{2pi} f`.
    pub fn mean(self) -> f64 {
        match self {
            PeriodicFunction::One => 1.0,
            PeriodicFunction::Cos | PeriodicFunction::Sin => 0.0,
            PeriodicFunction::CosSquared | PeriodicFunction::SinSquared => 0.5,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PeriodicFunction::One => "one",
            PeriodicFunction::Cos => "cos",
            PeriodicFunction::Sin => "sin",
            PeriodicFunction::CosSquared => "cos2",
            PeriodicFunction::SinSquared => "sin2",
        }
    }
}

/// A weighted ergodic average query: rotation angle `alpha` (irrational
/// `alpha/pi` intended), weight exponent `q in {0, 1, 2}`, length `n`, and
/// the test function.
#[derive(Clone, Copy, Debug)]
pub struct ErgodicQuery {
    pub alpha: f64,
    pub q: u32,
    pub n: usize,
    pub f: PeriodicFunction,
}

impl ErgodicQuery {
    pub fn new(alpha: f64, q: u32, n: usize, f: PeriodicFunction) -> Self {
        assert!(q <= 2, "weight exponent limited to q in {{0, 1, 2}}");
        assert!(n >= 1);
        ErgodicQuery { alpha, q, n, f }
    }

    /// The limiting value `mean(f) / (q + 1)`.
    pub fn limit(&self) -> f64 {
        self.f.mean() / (self.q + 1) as f64
    }
}

/// Deterministic chunked summation of `f(k)` for `k = 1..=n`: fixed-size
/// chunks summed in order, then pairwise-reduced — independent of any
/// parallel schedule and cheap on memory for `n` in the millions.
fn sum_indexed<F: Fn(usize) -> f64>(n: usize, f: F) -> f64 {
    const CHUNK: usize = 8192;
    let mut partials = Vec::with_capacity(n / CHUNK + 1);
    let mut k = 1usize;
    while k <= n {
        let end = (k + CHUNK - 1).min(n);
        let mut acc = 0.0;
        for j in k..=end {
            acc += f(j);
        }
        partials.push(acc);
        k = end + 1;
    }
    pairwise_sum(&partials)
}

/// `(1/n) sum_{k=1}^n (k/n)^q f(k alpha)`.
pub fn weighted_average(query: &ErgodicQuery) -> f64 {
    let n = query.n;
    let nf = n as f64;
    let q = query.q;
    let f = query.f;
    let alpha = query.alpha;
    sum_indexed(n, |k| {
        let w = match q {
            0 => 1.0,
            1 => k as f64 / nf,
            _ => (k as f64 / nf).powi(2),
        };
        w * f.eval(k as f64 * alpha)
    }) / nf
}

/// Entry `(i, l)` (1-based) of the mixing matrix
/// `C_n(k, t) = [[cos(kt/n), sin(kt/n)], [-(k/n) sin(kt/n), (k/n) cos(kt/n)]]`.
pub fn c_matrix_entry(i: u8, l: u8, k: usize, n: usize, t: f64) -> f64 {
    assert!((1..=2).contains(&i) && (1..=2).contains(&l));
    assert!(k >= 1 && k <= n);
    let angle = k as f64 * t / n as f64;
    let (sin_a, cos_a) = angle.sin_cos();
    let ratio = k as f64 / n as f64;
    match (i, l) {
        (1, 1) => cos_a,
        (1, 2) => sin_a,
        (2, 1) => -ratio * sin_a,
        (2, 2) => ratio * cos_a,
        _ => unreachable!(),
    }
}

/// All four entries of `C_n(k, n*t)` (angle `k t`) with one `sin_cos` call.
fn c_row(k: usize, n: usize, t: f64) -> [[f64; 2]; 2] {
    let (sin_kt, cos_kt) = (k as f64 * t).sin_cos();
    let ratio = k as f64 / n as f64;
    [[cos_kt, sin_kt], [-ratio * sin_kt, ratio * cos_kt]]
}

/// `(1/n) sum_k C_n^{i,l}(k, nt)^2 C_n^{j,l'}(k, ns)^2`, converging to
/// `1/(4 (1 + 2(i + j - 2)))` for generic `t, s`.
pub fn quartic_average(i: u8, j: u8, l: u8, lp: u8, t: f64, s: f64, n: usize) -> f64 {
    assert!([i, j, l, lp].iter().all(|&x| (1..=2).contains(&x)));
    let (iu, ju, lu, lpu) = (i as usize - 1, j as usize - 1, l as usize - 1, lp as usize - 1);
    sum_indexed(n, |k| {
        let ct = c_row(k, n, t)[iu][lu];
        let cs = c_row(k, n, s)[ju][lpu];
        ct * ct * cs * cs
    }) / n as f64
}

/// The limiting value of [`quartic_average`].
pub fn quartic_limit(i: u8, j: u8) -> f64 {
    assert!((1..=2).contains(&i) && (1..=2).contains(&j));
    1.0 / (4.0 * (1.0 + 2.0 * (i as f64 + j as f64 - 2.0)))
}

/// The mixed averages that vanish in the limit.
#[derive(Clone, Copy, Debug)]
pub enum MixedAverageKind {
    /// `(1/n) sum C^{i,1}(k,nt) C^{i,2}(k,nt) C^{j,l}(k,ns)^2`.
    ProductTimesSquare { i: u8, j: u8, l: u8 },
    /// `(1/n) sum C^{i,1}(k,nt) C^{i,2}(k,nt) C^{j,1}(k,ns) C^{j,2}(k,ns)`.
    ProductTimesProduct { i: u8, j: u8 },
    /// `(1/n) sum C^{i1,l1}(k,nt) C^{i2,l2}(k,nt) C^{i3,l3}(k,ns)`.
    TripleProduct { i: [u8; 3], l: [u8; 3] },
}

/// Finite-n value of the selected mixed average (limit 0 for generic `t, s`).
pub fn mixed_average(kind: MixedAverageKind, t: f64, s: f64, n: usize) -> f64 {
    let nf = n as f64;
    match kind {
        MixedAverageKind::ProductTimesSquare { i, j, l } => {
            let (iu, ju, lu) = (i as usize - 1, j as usize - 1, l as usize - 1);
            sum_indexed(n, |k| {
                let rt = c_row(k, n, t);
                let cs = c_row(k, n, s)[ju][lu];
                rt[iu][0] * rt[iu][1] * cs * cs
            }) / nf
        }
        MixedAverageKind::ProductTimesProduct { i, j } => {
            let (iu, ju) = (i as usize - 1, j as usize - 1);
            sum_indexed(n, |k| {
                let rt = c_row(k, n, t);
                let rs = c_row(k, n, s);
                rt[iu][0] * rt[iu][1] * rs[ju][0] * rs[ju][1]
            }) / nf
        }
        MixedAverageKind::TripleProduct { i, l } => {
            let iu = [i[0] as usize - 1, i[1] as usize - 1, i[2] as usize - 1];
            let lu = [l[0] as usize - 1, l[1] as usize - 1, l[2] as usize - 1];
            sum_indexed(n, |k| {
                let rt = c_row(k, n, t);
                let rs = c_row(k, n, s);
                rt[iu[0]][lu[0]] * rt[iu[1]][lu[1]] * rs[iu[2]][lu[2]]
            }) / nf
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ErgodicError {
    #[error("b = {0} is a multiple of 2*pi: the discrepancy b-bar vanishes")]
    BbarZero(f64),
}

/// The trigonometric sums `S_{b,i} = (1/n) sum (k/n)^i cos(bk)` (and the
/// sine variant), the discrepancy `b-bar = inf_p |2 pi p - b| / max(p, 1)`,
/// and the bound shape `1/(n b-bar)` (the universal constant is left to the
/// empirical envelope in the tests).
#[derive(Clone, Copy, Debug)]
pub struct TrigSum {
    pub cosine: f64,
    pub sine: f64,
    pub b_bar: f64,
    pub bound: f64,
}

pub fn trig_sum(b: f64, i: u8, n: usize) -> Result<TrigSum, ErgodicError> {
    assert!(i <= 2, "weight exponent limited to i in {{0, 1, 2}}");
    assert!(n >= 1 && b > 0.0);
    let p_max = (b / (2.0 * PI)).ceil() as usize + 1;
    let mut b_bar = b; // p = 0 term: |0 - b| / max(0, 1)
    for p in 1..=p_max {
        b_bar = b_bar.min((2.0 * PI * p as f64 - b).abs() / p as f64);
    }
    if b_bar == 0.0 {
        return Err(ErgodicError::BbarZero(b));
    }
    let nf = n as f64;
    let weight = |k: usize| -> f64 {
        match i {
            0 => 1.0,
            1 => k as f64 / nf,
            _ => (k as f64 / nf).powi(2),
        }
    };
    let cosine = sum_indexed(n, |k| weight(k) * (b * k as f64).cos()) / nf;
    let sine = sum_indexed(n, |k| weight(k) * (b * k as f64).sin()) / nf;
    Ok(TrigSum { cosine, sine, b_bar, bound: 1.0 / (nf * b_bar) })
}
