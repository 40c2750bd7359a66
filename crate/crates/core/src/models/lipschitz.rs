//! Landscapes where every neighbour lies within a cost bound `b`.
//!
//! A neighbour of a cost-`k` point has a cost drawn from the base
//! distribution restricted to the window `k-b ..= k+b`.

use crate::error::{Error, Result};
use crate::landscape::{CostDistribution, CostRange, NeighbourKernel, NeighbourhoodSize};
use crate::scalar::Scalar;

/// How the window is treated where it crosses the ends of the cost range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Window {
    /// `p` is zero outside the range, so the window shrinks at the ends.
    #[default]
    ZeroExtended,
    /// The window always covers `2b+1` cells, padding past the ends with the
    /// boundary probability. Mass that falls outside the range stays at the
    /// current cost, so improving probabilities are those of the full window.
    Padded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LipschitzSpaceSpec<T> {
    pub base: CostDistribution<T>,
    pub bound: u64,
    pub window: Window,
    pub size: NeighbourhoodSize,
}

impl<T: Scalar> LipschitzSpaceSpec<T> {
    /// Uniform base over `0..=k_max`.
    pub fn uniform(k_max: i64, bound: u64) -> Result<Self> {
        Ok(Self {
            base: CostDistribution::uniform(CostRange::new(0, k_max)?),
            bound,
            window: Window::ZeroExtended,
            size: NeighbourhoodSize::Infinite,
        })
    }
}

pub fn lipschitz_kernel<T: Scalar>(spec: &LipschitzSpaceSpec<T>) -> Result<NeighbourKernel<T>> {
    if spec.bound == 0 {
        return Err(Error::InvalidSpec("bound must be at least 1".into()));
    }
    let dist = &spec.base;
    let range = dist.range();
    let b = spec.bound.min(range.len() as u64) as i64;
    NeighbourKernel::from_row_fn(range, spec.size, |k| {
        if spec.window == Window::ZeroExtended && k - b <= range.k_opt() && k + b >= range.k_max() {
            // the window covers the whole range: the row is the base itself
            return Some(dist.probabilities().to_vec());
        }
        let inside = (k - b..=k + b).fold(T::zero(), |a, i| a + dist.p(i));
        let total = match spec.window {
            Window::ZeroExtended => inside,
            Window::Padded => {
                let below = (range.k_opt() - (k - b)).max(0);
                let above = ((k + b) - range.k_max()).max(0);
                inside
                    + dist.p(range.k_opt()) * T::from_count(below as u64)
                    + dist.p(range.k_max()) * T::from_count(above as u64)
            }
        };
        if total <= T::zero() {
            return None;
        }
        let mut row: Vec<T> = range
            .costs()
            .map(|i| {
                if (i - k).abs() <= b {
                    dist.p(i) / total.clone()
                } else {
                    T::zero()
                }
            })
            .collect();
        if spec.window == Window::Padded {
            let kept = row.iter().fold(T::zero(), |a, v| a + v.clone());
            row[range.index(k).expect("row cost in range")] += T::one() - kept;
        }
        Some(row)
    })
}

pub fn lipschitz_space<T: Scalar>(spec: &LipschitzSpaceSpec<T>) -> Result<(CostDistribution<T>, NeighbourKernel<T>)> {
    Ok((spec.base.clone(), lipschitz_kernel(spec)?))
}
