//! Evaluation of random trigonometric polynomials.
//!
//! A sample is `p_n(t) = sum_{k=1}^n a_k cos(kt) + b_k sin(kt)`. The
//! rescaled process used in the limit theorems is
//! `P_n(t) = p_n(t/n) / sqrt(n)` on `[0, n*pi]`; it has the same roots as
//! `p_n` on `[0, pi]` up to the change of variables, so all root counting
//! happens in the `p_n` parametrization.
//!
//! Pointwise evaluation uses the angle-addition recurrence (one `sin_cos`
//! call per evaluation point, four multiplies per term). Grid evaluation
//! treats the coefficients as a complex spectrum and runs one inverse FFT on
//! a `2M`-point circle, packing the value and derivative spectra into the
//! real and imaginary channels of a single transform.

use std::f64::consts::PI;
use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

/// One realization of the random polynomial: degree `n` plus the `2n`
/// sampled coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct TrigPolynomialSample {
    n: usize,
    a: Vec<f64>,
    b: Vec<f64>,
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum GridError {
    #[error("grid size {m} is below the bandwidth requirement 2n+1 = {min} for degree n = {n}")]
    BelowBandwidth { m: usize, n: usize, min: usize },
}

impl TrigPolynomialSample {
    /// Build from cosine coefficients `a` and sine coefficients `b`
    /// (`a[k-1]` multiplies `cos(kt)`). Panics if the arrays differ in
    /// length or are empty.
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Self {
        assert_eq!(a.len(), b.len(), "coefficient arrays must have equal length");
        assert!(!a.is_empty(), "degree must be at least 1");
        TrigPolynomialSample { n: a.len(), a, b }
    }

    /// Draw the `2n` coefficients of a degree-`n` sample from `dist`.
    pub fn from_distribution<R: rand::Rng + ?Sized>(
        dist: &crate::coefficients::CoefficientDistribution,
        n: usize,
        rng: &mut R,
    ) -> Self {
        let mut a = Vec::with_capacity(n);
        let mut b = Vec::with_capacity(n);
        for _ in 0..n {
            let (x, y) = dist.sample_pair(rng);
            a.push(x);
            b.push(y);
        }
        TrigPolynomialSample::new(a, b)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeff_a(&self) -> &[f64] {
        &self.a
    }

    pub fn coeff_b(&self) -> &[f64] {
        &self.b
    }

    /// `sum_k (|a_k| + |b_k|)`, an upper bound for `|p_n|`; used as the
    /// scale in relative-error checks.
    pub fn coefficient_amplitude(&self) -> f64 {
        self.a.iter().map(|x| x.abs()).sum::<f64>() + self.b.iter().map(|x| x.abs()).sum::<f64>()
    }

    /// `p_n(t)`.
    pub fn eval(&self, t: f64) -> f64 {
        let (sin_t, cos_t) = t.sin_cos();
        let (mut c, mut s) = (cos_t, sin_t);
        let mut acc = 0.0;
        for k in 0..self.n {
            acc += self.a[k] * c + self.b[k] * s;
            let c_next = c * cos_t - s * sin_t;
            s = s * cos_t + c * sin_t;
            c = c_next;
        }
        acc
    }

    /// `p_n'(t) = sum_k k (b_k cos(kt) - a_k sin(kt))`.
    pub fn eval_derivative(&self, t: f64) -> f64 {
        let (sin_t, cos_t) = t.sin_cos();
        let (mut c, mut s) = (cos_t, sin_t);
        let mut acc = 0.0;
        for k in 0..self.n {
            let kf = (k + 1) as f64;
            acc += kf * (self.b[k] * c - self.a[k] * s);
            let c_next = c * cos_t - s * sin_t;
            s = s * cos_t + c * sin_t;
            c = c_next;
        }
        acc
    }

    /// `(p_n, p_n', p_n'')` at `t` in one pass; the refinement loops in root
    /// counting need all three.
    pub fn eval_with_derivatives(&self, t: f64) -> (f64, f64, f64) {
        let (sin_t, cos_t) = t.sin_cos();
        let (mut c, mut s) = (cos_t, sin_t);
        let (mut p, mut dp, mut ddp) = (0.0, 0.0, 0.0);
        for k in 0..self.n {
            let kf = (k + 1) as f64;
            let even = self.a[k] * c + self.b[k] * s;
            p += even;
            dp += kf * (self.b[k] * c - self.a[k] * s);
            ddp -= kf * kf * even;
            let c_next = c * cos_t - s * sin_t;
            s = s * cos_t + c * sin_t;
            c = c_next;
        }
        (p, dp, ddp)
    }

    /// `p_n(pi) = sum_k (-1)^k a_k`, exact.
    pub fn eval_at_pi(&self) -> f64 {
        self.a
            .iter()
            .enumerate()
            .map(|(i, &a)| if i % 2 == 0 { -a } else { a })
            .sum()
    }

    /// The derivative as a trigonometric polynomial of the same degree:
    /// cosine coefficients `k b_k`, sine coefficients `-k a_k`.
    pub fn derivative_sample(&self) -> TrigPolynomialSample {
        let a: Vec<f64> = self.b.iter().enumerate().map(|(i, &b)| (i + 1) as f64 * b).collect();
        let b: Vec<f64> = self.a.iter().enumerate().map(|(i, &a)| -((i + 1) as f64) * a).collect();
        TrigPolynomialSample::new(a, b)
    }

    /// Rescaled process `P_n(t) = p_n(t/n)/sqrt(n)`, argument in `[0, n*pi]`.
    pub fn rescaled(&self, t: f64) -> f64 {
        self.eval(t / self.n as f64) / (self.n as f64).sqrt()
    }

    /// Derivative of the rescaled process,
    /// `P_n'(t) = p_n'(t/n) / (n sqrt(n))`.
    pub fn rescaled_derivative(&self, t: f64) -> f64 {
        let nf = self.n as f64;
        self.eval_derivative(t / nf) / (nf * nf.sqrt())
    }

    /// `(P_n(t), P_n'(t), P_n(s), P_n'(s))` in the rescaled variables.
    pub fn pair_statistic(&self, t: f64, s: f64) -> [f64; 4] {
        [
            self.rescaled(t),
            self.rescaled_derivative(t),
            self.rescaled(s),
            self.rescaled_derivative(s),
        ]
    }
}

/// Values and derivatives of `p_n` on the uniform grid `t_j = j*pi/M`.
#[derive(Clone, Debug)]
pub struct GridEvaluation {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub derivative_values: Vec<f64>,
}

/// Reusable FFT plan for a fixed `(n, M)` shape. One inverse transform of
/// size `2M` yields both `p_n` (real channel) and `p_n'` (imaginary channel)
/// on the grid.
pub struct GridEvaluator {
    n: usize,
    m: usize,
    fft: Arc<dyn Fft<f64>>,
    buf: Vec<Complex<f64>>,
    scratch: Vec<Complex<f64>>,
}

impl GridEvaluator {
    pub fn new(n: usize, m: usize) -> Result<Self, GridError> {
        if m < 2 * n + 1 {
            return Err(GridError::BelowBandwidth { m, n, min: 2 * n + 1 });
        }
        let len = 2 * m;
        let fft = FftPlanner::new().plan_fft_inverse(len);
        let scratch = vec![Complex::default(); fft.get_inplace_scratch_len()];
        Ok(GridEvaluator { n, m, fft, buf: vec![Complex::default(); len], scratch })
    }

    pub fn grid_points(&self) -> usize {
        self.m
    }

    /// Fill `values[j] = p_n(j*pi/M)` and `derivs[j] = p_n'(j*pi/M)` for
    /// `j = 0..M`. The vectors are resized as needed.
    pub fn evaluate_into(
        &mut self,
        sample: &TrigPolynomialSample,
        values: &mut Vec<f64>,
        derivs: &mut Vec<f64>,
    ) {
        assert_eq!(sample.n(), self.n, "evaluator planned for a different degree");
        let len = 2 * self.m;
        self.buf.iter_mut().for_each(|z| *z = Complex::default());
        // p spectrum: Z[k] = (a - i b)/2 with Hermitian mirror; p' spectrum:
        // i k Z[k]. Packing Zp + i Zp' keeps both channels real after the
        // inverse transform.
        for k in 1..=self.n {
            let (a, b) = (sample.a[k - 1], sample.b[k - 1]);
            let kf = k as f64;
            let i = Complex::<f64>::i();
            let zp = Complex::new(0.5 * a, -0.5 * b);
            let zd = Complex::new(0.5 * kf * b, 0.5 * kf * a);
            let packed = zp + i * zd;
            let packed_mirror = zp.conj() + i * zd.conj();
            self.buf[k] = packed;
            self.buf[len - k] = packed_mirror;
        }
        self.fft.process_with_scratch(&mut self.buf, &mut self.scratch);
        values.clear();
        derivs.clear();
        values.extend(self.buf[..self.m].iter().map(|z| z.re));
        derivs.extend(self.buf[..self.m].iter().map(|z| z.im));
    }

    pub fn evaluate(&mut self, sample: &TrigPolynomialSample) -> GridEvaluation {
        let mut values = Vec::with_capacity(self.m);
        let mut derivs = Vec::with_capacity(self.m);
        self.evaluate_into(sample, &mut values, &mut derivs);
        let grid = (0..self.m).map(|j| j as f64 * PI / self.m as f64).collect();
        GridEvaluation { grid, values, derivative_values: derivs }
    }
}

/// Transform-based evaluation of `p_n` and `p_n'` on `t_j = j*pi/M`,
/// `j = 0..M`. Requires `M >= 2n+1` so the grid samples above the
/// polynomial's bandwidth.
pub fn eval_grid(sample: &TrigPolynomialSample, m: usize) -> Result<GridEvaluation, GridError> {
    let mut evaluator = GridEvaluator::new(sample.n(), m)?;
    Ok(evaluator.evaluate(sample))
}
