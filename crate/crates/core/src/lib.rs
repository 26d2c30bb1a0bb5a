//! Numerical engine for the root statistics of random trigonometric
//! polynomials `p_n(t) = sum_k a_k cos(kt) + b_k sin(kt)` with random
//! centered, standardized coefficients.
//!
//! The crate provides the building blocks for studying the count `N_n` of
//! real roots of `p_n` on `[0, pi)` (equivalently of its rescaled version
//! `P_n` on `[0, n*pi)`):
//!
//! * [`coefficients`] — coefficient laws, analytic moments, and the
//!   fourth-moment aggregate `y*` that drives the non-universal variance.
//! * [`polynomial`] — fast evaluation of `p_n`, `p_n'` pointwise and on
//!   grids via an inverse FFT.
//! * [`roots`] — sign-change root counting, the delta-smoothed Kac-Rice
//!   counting functional, and clustering / small-ball diagnostics.
//! * [`covariance`] — covariance matrices of `(P_n(t), P_n'(t), P_n(s),
//!   P_n'(s))`, their stationary limit, non-degeneracy floors, and the
//!   Gaussian mean/variance reference constants.
//! * [`edgeworth`] — multi-index Hermite polynomials, cumulant-difference
//!   correctors, expansion residual measurement, and the exact rational
//!   assembly of the limiting variance constants.
//! * [`ergodic`] — deterministic trigonometric averages over irrational
//!   rotations and the trigonometric-sum bounds they rest on.
//! * [`montecarlo`] — reproducible ensemble experiments comparing observed
//!   variance shifts against the predicted `y*/60`.

pub mod coefficients;
pub mod covariance;
pub mod edgeworth;
pub mod ergodic;
pub mod montecarlo;
pub mod polynomial;
pub mod quadrature;
pub mod roots;
pub mod stream;

pub use coefficients::{CoefficientDistribution, MomentTable};
pub use covariance::Covariance4;
pub use montecarlo::{ExperimentConfig, ExperimentSummary};
pub use polynomial::TrigPolynomialSample;
pub use roots::RootCountResult;
