//! Benchmark class with binomially shaped cost counts.
//!
//! `ct(4j) = C(50, j)` over costs `0..=200`, filled in linearly between the
//! anchor points, with a Lipschitz-bounded neighbourhood on top.

use num_integer::binomial;

use crate::error::Result;
use crate::landscape::{CostDistribution, CostRange, NeighbourKernel, NeighbourhoodSize};
use crate::models::lipschitz::{lipschitz_kernel, LipschitzSpaceSpec, Window};
use crate::scalar::Scalar;

pub const BENCHMARK_K_MAX: i64 = 200;
const STRIDE: u64 = 4;
const ANCHORS: u64 = 50;

/// Fill rule for the costs between anchor points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Interpolation {
    /// `ct(4j+i)` runs linearly from `C(50,j)` to `C(50,j+1)`.
    #[default]
    Next,
    /// `ct(4j+i)` runs linearly from `C(50,j)` to `C(50,j) + 1`.
    PlusOne,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BenchmarkClassSpec {
    pub interpolation: Interpolation,
}

impl BenchmarkClassSpec {
    /// `4 ct(k)` for `k = 0..=200`; scaling by the stride keeps every count integral.
    pub fn scaled_counts(&self) -> Vec<u64> {
        let anchor = |j: u64| binomial(ANCHORS, j.min(ANCHORS));
        (0..=BENCHMARK_K_MAX as u64)
            .map(|k| {
                let (j, i) = (k / STRIDE, k % STRIDE);
                let lo = anchor(j);
                let hi = match self.interpolation {
                    Interpolation::Next => anchor(j + 1),
                    Interpolation::PlusOne => lo + 1,
                };
                // (STRIDE - i) lo + i hi, never negative
                (STRIDE - i) * lo + i * hi
            })
            .collect()
    }

    pub fn range(&self) -> CostRange {
        CostRange::new(0, BENCHMARK_K_MAX).expect("fixed range")
    }
}

pub fn benchmark_distribution<T: Scalar>(spec: &BenchmarkClassSpec) -> Result<CostDistribution<T>> {
    CostDistribution::from_counts(spec.range(), &spec.scaled_counts())
}

pub fn benchmark_kernel<T: Scalar>(
    dist: &CostDistribution<T>,
    bound: u64,
    size: NeighbourhoodSize,
) -> Result<NeighbourKernel<T>> {
    lipschitz_kernel(&LipschitzSpaceSpec {
        base: dist.clone(),
        bound,
        window: Window::ZeroExtended,
        size,
    })
}

pub fn benchmark_space<T: Scalar>(
    spec: &BenchmarkClassSpec,
    bound: u64,
    size: NeighbourhoodSize,
) -> Result<(CostDistribution<T>, NeighbourKernel<T>)> {
    let dist = benchmark_distribution(spec)?;
    let kernel = benchmark_kernel(&dist, bound, size)?;
    Ok((dist, kernel))
}
