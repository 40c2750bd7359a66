use crate::error::{Error, Result};
use crate::landscape::{CostDistribution, CostRange, NeighbourKernel};
use crate::scalar::{positive, Scalar};

/// Neighbourhood weights `r(k, δ)`: how much more likely a neighbour of a
/// cost-`k` point is to sit at distance `δ` than an arbitrary point.
///
/// `r(k,δ) = pn(k, k±δ) / p(k±δ)`; entries where `p(k±δ) = 0` are absent.
#[derive(Debug, Clone)]
pub struct NWeightTable<T> {
    range: CostRange,
    /// Per level: `r(k, δ)` for `δ = 0 ..= max_delta`.
    rows: Vec<Option<Vec<Option<T>>>>,
    /// Per level: `prefix[d] = Σ_{δ=1}^{d} r(k,δ)`, absent entries counted as zero.
    prefix: Vec<Option<Vec<T>>>,
}

pub fn compute_nweights<T: Scalar>(
    dist: &CostDistribution<T>,
    kernel: &NeighbourKernel<T>,
) -> Result<NWeightTable<T>> {
    let range = dist.range();
    if range != kernel.range() {
        return Err(Error::RangeMismatch {
            dist: range.as_pair(),
            kernel: kernel.range().as_pair(),
        });
    }
    let max_delta = range.k_max() - range.k_opt();
    let mut rows = Vec::with_capacity(range.len());
    let mut prefix = Vec::with_capacity(range.len());
    for k in range.costs() {
        if !positive(&dist.p(k)) || !kernel.has_row(k) {
            rows.push(None);
            prefix.push(None);
            continue;
        }
        let row: Vec<Option<T>> = (0..=max_delta)
            .map(|d| {
                let den = dist.p_pm(k, d);
                positive(&den).then(|| kernel.pn_pm(k, d) / den)
            })
            .collect();
        let mut sums = Vec::with_capacity(row.len());
        let mut acc = T::zero();
        sums.push(acc.clone());
        for r in row.iter().skip(1) {
            if let Some(r) = r {
                acc += r.clone();
            }
            sums.push(acc.clone());
        }
        rows.push(Some(row));
        prefix.push(Some(sums));
    }
    Ok(NWeightTable {
        range,
        rows,
        prefix,
    })
}

impl<T: Scalar> NWeightTable<T> {
    pub fn range(&self) -> CostRange {
        self.range
    }

    pub fn has_level(&self, k: i64) -> bool {
        self.range.index(k).is_some_and(|i| self.rows[i].is_some())
    }

    /// `r(k, δ)`, or `None` where undefined.
    pub fn r(&self, k: i64, delta: i64) -> Option<T> {
        let row = self.rows[self.range.index(k)?].as_ref()?;
        row.get(usize::try_from(delta).ok()?)?.clone()
    }

    /// `r(k, δ)` with undefined entries read as zero, matching how they enter sums.
    pub fn r_or_zero(&self, k: i64, delta: i64) -> T {
        self.r(k, delta).unwrap_or_else(T::zero)
    }

    /// Defined `(δ, r(k,δ))` pairs with `δ ≥ 1`, in increasing `δ`.
    pub fn defined(&self, k: i64) -> Vec<(i64, T)> {
        let Some(Some(row)) = self.range.index(k).map(|i| &self.rows[i]) else {
            return Vec::new();
        };
        row.iter()
            .enumerate()
            .skip(1)
            .filter_map(|(d, r)| r.clone().map(|r| (d as i64, r)))
            .collect()
    }

    /// Largest `δ` stored for each level.
    pub fn max_delta(&self) -> i64 {
        self.range.k_max() - self.range.k_opt()
    }

    /// Average NWeight down to the optimum; `None` at `k_opt` or without a row.
    pub fn rbar(&self, k: i64) -> Option<T> {
        self.rbar_to(k, self.range.k_opt())
    }

    /// Average NWeight of `k` down to target `t`: `Σ_{δ=1}^{k-t} r(k,δ) / (k-t)`.
    pub fn rbar_to(&self, k: i64, t: i64) -> Option<T> {
        if t >= k {
            return None;
        }
        let sums = self.prefix[self.range.index(k)?].as_ref()?;
        let span = k - t;
        let idx = (span as usize).min(sums.len() - 1);
        Some(sums[idx].clone() / T::from_count(span as u64))
    }

    /// Mean of the defined `r(k,δ)` with `1 ≤ δ ≤ k-k_opt`. On sampled
    /// landscapes many low costs are never observed, and this average ignores
    /// them instead of counting them as zero.
    pub fn rbar_defined(&self, k: i64) -> Option<T> {
        let reach = k - self.range.k_opt();
        let vals: Vec<T> = self.defined(k).into_iter().take_while(|(d, _)| *d <= reach).map(|(_, r)| r).collect();
        if vals.is_empty() {
            return None;
        }
        let n = T::from_count(vals.len() as u64);
        Some(vals.into_iter().fold(T::zero(), |a, v| a + v) / n)
    }

    /// `Σ_{δ=1}^{k-k_opt} p(k-δ) r(k,δ)`: the improving mass an unbiased
    /// neighbourhood is guaranteed.
    pub fn pbr_less(&self, dist: &CostDistribution<T>, k: i64) -> T {
        let reach = k - self.range.k_opt();
        (1..=reach).fold(T::zero(), |a, d| a + dist.p(k - d) * self.r_or_zero(k, d))
    }

    /// `Σ_{δ=1}^{k-k_opt} p(k+δ) r(k,δ)`.
    pub fn pbr_greater(&self, dist: &CostDistribution<T>, k: i64) -> T {
        let reach = k - self.range.k_opt();
        (1..=reach).fold(T::zero(), |a, d| a + dist.p(k + d) * self.r_or_zero(k, d))
    }

    /// `Σ_{δ>k-k_opt} p(k+δ) r(k,δ)`.
    pub fn pbr_much_greater(&self, dist: &CostDistribution<T>, k: i64) -> T {
        let reach = k - self.range.k_opt();
        (reach + 1..=self.max_delta()).fold(T::zero(), |a, d| a + dist.p(k + d) * self.r_or_zero(k, d))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::landscape::NeighbourhoodSize;

    fn blind_pair() -> (CostDistribution<f64>, NeighbourKernel<f64>) {
        let range = CostRange::new(3, 9).unwrap();
        let d = CostDistribution::from_counts(range, &[1, 2, 4, 8, 4, 2, 1]).unwrap();
        let row = d.probabilities().to_vec();
        let k = NeighbourKernel::from_row_fn(range, NeighbourhoodSize::Finite(10), |_| Some(row.clone())).unwrap();
        (d, k)
    }

    #[test]
    fn blind_kernel_has_unit_weight() {
        let (d, k) = blind_pair();
        let w = compute_nweights(&d, &k).unwrap();
        for level in d.range().costs() {
            for delta in 0..=w.max_delta() {
                if let Some(r) = w.r(level, delta) {
                    assert!((r - 1.0).abs() < 1e-12, "r({level},{delta}) = {r}");
                }
            }
        }
        assert!((w.rbar(6).unwrap() - 1.0).abs() < 1e-12);
        assert!(w.rbar(3).is_none());
        // δ = 7 reaches past both ends of 3..=9
        assert!(w.r(6, 7).is_none());
    }

    #[test]
    fn range_mismatch() {
        let (d, _) = blind_pair();
        let other = CostRange::new(0, 6).unwrap();
        let k = NeighbourKernel::from_row_fn(other, NeighbourhoodSize::Finite(1), |_| {
            Some(vec![1.0 / 7.0; 7])
        })
        .unwrap();
        assert!(matches!(compute_nweights(&d, &k), Err(Error::RangeMismatch { .. })));
    }

    #[test]
    fn absent_entries_count_in_divisor() {
        // p(1) = p(5) = 0 leaves r(3, 2) undefined; it adds nothing to the
        // numerator of rbar(3) but the divisor stays 3
        let range = CostRange::new(0, 6).unwrap();
        let d = CostDistribution::<f64>::from_counts(range, &[1, 0, 2, 4, 2, 0, 1]).unwrap();
        let row = d.probabilities().to_vec();
        let k = NeighbourKernel::from_row_fn(range, NeighbourhoodSize::Finite(1), |_| Some(row.clone())).unwrap();
        let w = compute_nweights(&d, &k).unwrap();
        assert!(w.r(3, 2).is_none());
        assert!(!w.has_level(1));
        assert!((w.rbar(3).unwrap() - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(w.defined(3).iter().map(|(d, _)| *d).collect::<Vec<_>>(), vec![1, 3]);
    }
}
