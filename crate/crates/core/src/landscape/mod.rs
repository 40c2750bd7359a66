//! Probability model of a search landscape and the conditions derived from it.

mod conditions;
mod distribution;
mod kernel;
mod nweight;
mod range;

pub use conditions::{
    analyse, check_conditions, check_unbiased, full_nsc_levels, good_enough, weights_nonincreasing,
    BiasCheck, ConditionReport, LevelConditions, LevelQuantities,
};
pub use distribution::CostDistribution;
pub use kernel::{NeighbourKernel, NeighbourhoodSize};
pub use nweight::{compute_nweights, NWeightTable};
pub use range::CostRange;
