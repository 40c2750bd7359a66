//! Cost-probability landscapes and the analysis of neighbourhood search on them.
//!
//! A landscape is a [`CostDistribution`] `p(k)` together with a
//! [`NeighbourKernel`] `pn(k1,k2)`. From the pair the crate derives
//! neighbourhood weights, per-level conditions under which local search beats
//! blind search, one-step improvement rates and expected step counts of local
//! blind descent. Models for several problem families and a Monte Carlo
//! simulator that cross-checks the expectations are included.
//!
//! Every analytic routine is generic over [`Scalar`]; the aliases at the root
//! fix the common choices.

pub mod audit;
pub mod descent;
pub mod error;
pub mod io;
pub mod landscape;
pub mod models;
pub mod rate;
pub mod scalar;
pub mod simulate;

use num_rational::BigRational;

pub use error::{Error, Result};
pub use landscape::{
    analyse, check_conditions, check_unbiased, compute_nweights, ConditionReport, CostDistribution, CostRange,
    LevelConditions, NWeightTable, NeighbourKernel, NeighbourhoodSize,
};
pub use scalar::Scalar;

pub type Distribution = CostDistribution<f64>;
pub type Kernel = NeighbourKernel<f64>;
pub type NWeights = NWeightTable<f64>;
pub type Report = ConditionReport<f64>;

pub type ExactDistribution = CostDistribution<BigRational>;
pub type ExactKernel = NeighbourKernel<BigRational>;
pub type ExactNWeights = NWeightTable<BigRational>;
