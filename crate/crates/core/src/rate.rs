//! Expected one-step improvement of blind and neighbourhood search.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::landscape::{CostDistribution, NeighbourKernel};
use crate::scalar::Scalar;

/// Expected cost decrease of one blind step (`e_imp`) and one neighbour step
/// (`en_imp`), both measured below the target `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct ImprovementReport<T> {
    pub k: i64,
    pub t: i64,
    pub e_imp: T,
    pub en_imp: T,
}

fn gain<T: Scalar>(t: i64, i: i64) -> T {
    T::from_count((t - i) as u64)
}

/// `e_imp(t) = Σ_{i<t} p(i) (t-i)`.
pub fn blind_improvement<T: Scalar>(dist: &CostDistribution<T>, t: i64) -> T {
    (dist.k_opt()..t).fold(T::zero(), |a, i| a + dist.p(i) * gain(t, i))
}

/// `en_imp(k,t) = Σ_{i<t} pn(k,i) (t-i)`.
pub fn neighbour_improvement<T: Scalar>(kernel: &NeighbourKernel<T>, k: i64, t: i64) -> Result<T> {
    let row = kernel.row(k)?;
    let r = kernel.range();
    Ok(r.costs()
        .take_while(|&i| i < t)
        .fold(T::zero(), |a, i| a + row[r.index(i).expect("in range")].clone() * gain(t, i)))
}

pub fn expected_improvement<T: Scalar>(
    dist: &CostDistribution<T>,
    kernel: &NeighbourKernel<T>,
    k: i64,
) -> Result<ImprovementReport<T>> {
    expected_improvement_to_target(dist, kernel, k, k)
}

pub fn expected_improvement_to_target<T: Scalar>(
    dist: &CostDistribution<T>,
    kernel: &NeighbourKernel<T>,
    k: i64,
    t: i64,
) -> Result<ImprovementReport<T>> {
    if t > k {
        return Err(Error::BadTarget { start: k, target: t });
    }
    Ok(ImprovementReport {
        k,
        t,
        e_imp: blind_improvement(dist, t),
        en_imp: neighbour_improvement(kernel, k, t)?,
    })
}

/// One row of a rate curve; `en_imp` is `None` where the kernel has no row.
#[derive(Debug, Clone, PartialEq)]
pub struct RatePoint<T> {
    pub k: i64,
    pub e_imp: T,
    pub en_imp: Option<T>,
}

/// Rates at every cost in `from..=to`.
pub fn rate_curve<T: Scalar>(
    dist: &CostDistribution<T>,
    kernel: &NeighbourKernel<T>,
    from: i64,
    to: i64,
) -> Vec<RatePoint<T>> {
    (from..=to)
        .into_par_iter()
        .map(|k| RatePoint {
            k,
            e_imp: blind_improvement(dist, k),
            en_imp: neighbour_improvement(kernel, k, k).ok(),
        })
        .collect()
}

/// Lowest cost in `k_opt+1 ..= k_mod` where a blind step is expected to gain
/// more than a neighbour step. Levels without improving neighbours are
/// skipped: descent has already stalled there.
pub fn blind_crossover<T: Scalar>(dist: &CostDistribution<T>, kernel: &NeighbourKernel<T>) -> Option<i64> {
    rate_curve(dist, kernel, dist.k_opt() + 1, dist.k_mod())
        .into_iter()
        .find(|pt| match &pt.en_imp {
            Some(en) => *en > T::zero() && pt.e_imp > *en,
            None => false,
        })
        .map(|pt| pt.k)
}
