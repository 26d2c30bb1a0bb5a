//! Coefficient laws for the random pairs `Y_k = (Y_k^1, Y_k^2)`.
//!
//! Every shipped law is centered with unit variance and independent
//! components, so the covariance normalization `E(Y^i Y^j) = delta_ij` holds
//! exactly. The laws with an absolutely continuous component (Gaussian,
//! scaled uniform, Gaussian scale mixtures) satisfy the smoothing hypothesis
//! required by the variance theorem; the discrete sign-flip law is available
//! for exploration but is flagged as not theorem-covered.
//!
//! The module also exposes the analytic mixed moments `y(alpha)` for
//! `|alpha| in {3, 4}` and the fourth-moment aggregate
//! `y* = (y(1122)-1) + (y(2211)-1) + (y(1111)-3) + (y(2222)-3)`,
//! which for i.i.d. independent components reduces to twice the excess
//! kurtosis of one component.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

const SQRT3: f64 = 1.732050807568877293527446341505872367_f64;

/// A centered, unit-variance law for one coefficient pair.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "dist", rename_all = "kebab-case")]
pub enum CoefficientDistribution {
    /// Standard normal components.
    #[serde(alias = "standard-gaussian")]
    Gaussian,
    /// Uniform on `[-sqrt(3), sqrt(3)]` (variance 1).
    #[serde(alias = "scaled-uniform")]
    Uniform,
    /// `N(0, v1)` with probability `p`, else `N(0, v2)`; requires
    /// `p*v1 + (1-p)*v2 = 1`.
    #[serde(alias = "gaussian-scale-mixture")]
    Mixture { p: f64, v1: f64, v2: f64 },
    /// Fair sign flips (+-1). Discrete, so the smoothing hypothesis fails;
    /// kept for exploration only.
    SignFlip,
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum DistributionError {
    #[error("mixture parameters invalid: need p in [0,1], v1,v2 > 0, got p={p}, v1={v1}, v2={v2}")]
    MixtureParams { p: f64, v1: f64, v2: f64 },
    #[error("mixture is not unit-variance: p*v1 + (1-p)*v2 = {var}, expected 1")]
    MixtureVariance { var: f64 },
    #[error("unsupported moment order {0}; supported orders are 1..=4")]
    UnsupportedOrder(u32),
}

impl CoefficientDistribution {
    /// Unit-variance Gaussian scale mixture, validated.
    pub fn mixture(p: f64, v1: f64, v2: f64) -> Result<Self, DistributionError> {
        let d = CoefficientDistribution::Mixture { p, v1, v2 };
        d.validate()?;
        Ok(d)
    }

    /// Check the invariants of the law's parameters (used after
    /// deserializing configs, where no constructor runs).
    pub fn validate(&self) -> Result<(), DistributionError> {
        if let CoefficientDistribution::Mixture { p, v1, v2 } = *self {
            if !(0.0..=1.0).contains(&p) || v1 <= 0.0 || v2 <= 0.0 {
                return Err(DistributionError::MixtureParams { p, v1, v2 });
            }
            let var = p * v1 + (1.0 - p) * v2;
            if (var - 1.0).abs() > 1e-12 {
                return Err(DistributionError::MixtureVariance { var });
            }
        }
        Ok(())
    }

    /// Whether the law has an absolutely continuous component with a density
    /// bounded below on some ball (the smoothing hypothesis of the theorem).
    pub fn doeblin_ok(&self) -> bool {
        !matches!(self, CoefficientDistribution::SignFlip)
    }

    /// Laws without the smoothing hypothesis produce results outside the
    /// theorem's scope; reports mark them accordingly.
    pub fn theorem_covered(&self) -> bool {
        self.doeblin_ok()
    }

    /// One draw of `(Y^1, Y^2)`, components independent.
    pub fn sample_pair<R: Rng + ?Sized>(&self, rng: &mut R) -> (f64, f64) {
        let one = |rng: &mut R| -> f64 {
            match *self {
                CoefficientDistribution::Gaussian => StandardNormal.sample(rng),
                CoefficientDistribution::Uniform => rng.random_range(-SQRT3..=SQRT3),
                CoefficientDistribution::Mixture { p, v1, v2 } => {
                    let v = if rng.random::<f64>() < p { v1 } else { v2 };
                    let z: f64 = StandardNormal.sample(rng);
                    z * v.sqrt()
                }
                CoefficientDistribution::SignFlip => {
                    if rng.random::<bool>() {
                        1.0
                    } else {
                        -1.0
                    }
                }
            }
        };
        let a = one(rng);
        let b = one(rng);
        (a, b)
    }

    /// Exact analytic moment `E((Y^1)^order)` of one component.
    pub fn moment(&self, order: u32) -> Result<f64, DistributionError> {
        match order {
            1 | 3 => Ok(0.0), // all shipped laws are symmetric
            2 => Ok(1.0),
            4 => Ok(match *self {
                CoefficientDistribution::Gaussian => 3.0,
                CoefficientDistribution::Uniform => 9.0 / 5.0,
                CoefficientDistribution::Mixture { p, v1, v2 } => {
                    3.0 * (p * v1 * v1 + (1.0 - p) * v2 * v2)
                }
                CoefficientDistribution::SignFlip => 1.0,
            }),
            other => Err(DistributionError::UnsupportedOrder(other)),
        }
    }

    /// All mixed moments `y(alpha) = E(prod_i Y^{alpha_i})` with
    /// `|alpha| in {3, 4}`. For independent identical components these are
    /// exact, not asymptotic.
    pub fn moment_table(&self) -> MomentTable {
        let m = |k: usize| -> f64 {
            match k {
                0 => 1.0,
                1 | 3 => 0.0,
                2 => 1.0,
                4 => self.moment(4).expect("order 4 supported"),
                _ => unreachable!(),
            }
        };
        let mut third = BTreeMap::new();
        for ones in 0..=3usize {
            let key = multi_index_key(ones, 3 - ones);
            third.insert(key, m(ones) * m(3 - ones));
        }
        let mut fourth = BTreeMap::new();
        for ones in 0..=4usize {
            let key = multi_index_key(ones, 4 - ones);
            fourth.insert(key, m(ones) * m(4 - ones));
        }
        MomentTable { third, fourth }
    }

    /// Stable name used in CSV output and config files.
    pub fn name(&self) -> String {
        match self {
            CoefficientDistribution::Gaussian => "gaussian".into(),
            CoefficientDistribution::Uniform => "uniform".into(),
            CoefficientDistribution::Mixture { p, v1, v2 } => {
                format!("mixture(p={p},v1={v1},v2={v2})")
            }
            CoefficientDistribution::SignFlip => "sign-flip".into(),
        }
    }
}

impl fmt::Display for CoefficientDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

fn multi_index_key(ones: usize, twos: usize) -> Vec<u8> {
    let mut key = vec![1u8; ones];
    key.resize(ones + twos, 2u8);
    key
}

/// Mixed moments `y(alpha)` of one coefficient pair, keyed by the sorted
/// multi-index over `{1, 2}`. Entries are invariant under permutation of the
/// index, so the sorted form is canonical.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentTable {
    third: BTreeMap<Vec<u8>, f64>,
    fourth: BTreeMap<Vec<u8>, f64>,
}

impl MomentTable {
    /// Look up `y(alpha)`; `alpha` entries must lie in `{1, 2}` and
    /// `|alpha|` must be 3 or 4.
    pub fn get(&self, alpha: &[u8]) -> Option<f64> {
        if alpha.iter().any(|&a| a != 1 && a != 2) {
            return None;
        }
        let mut key = alpha.to_vec();
        key.sort_unstable();
        match alpha.len() {
            3 => self.third.get(&key).copied(),
            4 => self.fourth.get(&key).copied(),
            _ => None,
        }
    }

    pub fn third_entries(&self) -> impl Iterator<Item = (&[u8], f64)> {
        self.third.iter().map(|(k, &v)| (k.as_slice(), v))
    }

    pub fn fourth_entries(&self) -> impl Iterator<Item = (&[u8], f64)> {
        self.fourth.iter().map(|(k, &v)| (k.as_slice(), v))
    }

    /// The theorem's fourth-moment aggregate
    /// `y* = (y(1,1,2,2)-1) + (y(2,2,1,1)-1) + (y(1,1,1,1)-3) + (y(2,2,2,2)-3)`.
    pub fn y_star(&self) -> f64 {
        let g = |alpha: &[u8]| self.get(alpha).expect("table is complete");
        (g(&[1, 1, 2, 2]) - 1.0)
            + (g(&[2, 2, 1, 1]) - 1.0)
            + (g(&[1, 1, 1, 1]) - 3.0)
            + (g(&[2, 2, 2, 2]) - 3.0)
    }
}

/// Free-function form of [`MomentTable::y_star`].
pub fn y_star(table: &MomentTable) -> f64 {
    table.y_star()
}
