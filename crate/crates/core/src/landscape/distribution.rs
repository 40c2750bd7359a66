use crate::error::{Error, Result};
use crate::landscape::CostRange;
use crate::scalar::{negative, positive, Scalar};

/// Probability `p(k)` that a uniformly random point has cost `k`.
///
/// Queries outside the range return zero, so sums over windows that cross
/// either end of the range need no special casing.
#[derive(Debug, Clone, PartialEq)]
pub struct CostDistribution<T> {
    range: CostRange,
    p: Vec<T>,
    /// `below[i] = p(k_opt) + ... + p(k_opt + i - 1)`, summed from the optimum
    /// upwards so the thin tail near `k_opt` keeps full relative precision.
    below: Vec<T>,
    k_mod: i64,
}

impl<T: Scalar> CostDistribution<T> {
    pub fn new(range: CostRange, p: Vec<T>) -> Result<Self> {
        if p.len() != range.len() {
            return Err(Error::InvalidDistribution(format!(
                "expected {} probabilities, got {}",
                range.len(),
                p.len()
            )));
        }
        if let Some(i) = p.iter().position(negative) {
            return Err(Error::InvalidDistribution(format!(
                "p({}) = {} is negative",
                range.cost(i),
                p[i]
            )));
        }
        let total = p.iter().fold(T::zero(), |acc, v| acc + v.clone());
        // normalisation is held tighter than the condition tolerance
        let slack = T::tolerance() / T::from_count(100);
        if (total.clone() - T::one()).abs() > slack {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {total}"
            )));
        }
        let mut below = Vec::with_capacity(p.len() + 1);
        let mut acc = T::zero();
        below.push(acc.clone());
        for v in &p {
            acc += v.clone();
            below.push(acc.clone());
        }
        let k_mod = range.cost(mode_index(&p));
        Ok(Self {
            range,
            p,
            below,
            k_mod,
        })
    }

    /// Normalises nonnegative weights into a distribution.
    pub fn from_weights(range: CostRange, weights: Vec<T>) -> Result<Self> {
        let total = weights.iter().fold(T::zero(), |acc, v| acc + v.clone());
        if !positive(&total) {
            return Err(Error::InvalidDistribution("weights sum to zero".into()));
        }
        let p = weights.into_iter().map(|w| w / total.clone()).collect();
        Self::new(range, p)
    }

    /// Exact `count / total` probabilities from a histogram.
    pub fn from_counts(range: CostRange, counts: &[u64]) -> Result<Self> {
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return Err(Error::InvalidDistribution("empty histogram".into()));
        }
        let p = counts.iter().map(|&c| T::from_ratio(c, total)).collect();
        Self::new(range, p)
    }

    /// Uniform probability over the whole range.
    pub fn uniform(range: CostRange) -> Self {
        let n = range.len() as u64;
        let p = vec![T::from_ratio(1, n); range.len()];
        Self::new(range, p).expect("uniform distribution is normalised")
    }

    pub fn range(&self) -> CostRange {
        self.range
    }

    pub fn k_opt(&self) -> i64 {
        self.range.k_opt()
    }

    pub fn k_max(&self) -> i64 {
        self.range.k_max()
    }

    pub fn probabilities(&self) -> &[T] {
        &self.p
    }

    pub fn p(&self, k: i64) -> T {
        self.range
            .index(k)
            .map_or_else(T::zero, |i| self.p[i].clone())
    }

    /// `p(k+δ) + p(k-δ)` for `δ > 0`, `p(k)` for `δ = 0`.
    pub fn p_pm(&self, k: i64, delta: i64) -> T {
        if delta == 0 {
            self.p(k)
        } else {
            self.p(k + delta) + self.p(k - delta)
        }
    }

    /// Probability blind search draws a cost strictly below `k`.
    pub fn p_less(&self, k: i64) -> T {
        let idx = (k - self.k_opt()).clamp(0, self.range.len() as i64) as usize;
        self.below[idx].clone()
    }

    /// Probability of a cost in `k+1 ..= k + (k - k_opt)`.
    pub fn p_greater(&self, k: i64) -> T {
        let reach = k - self.k_opt();
        (1..=reach).fold(T::zero(), |acc, d| acc + self.p(k + d))
    }

    /// Probability of a cost above `k + (k - k_opt)`.
    pub fn p_much_greater(&self, k: i64) -> T {
        let from = (k + (k - self.k_opt()) + 1).max(self.k_opt());
        (from..=self.k_max()).fold(T::zero(), |acc, i| acc + self.p(i))
    }

    /// Modal cost: the largest cost among those of maximal probability.
    pub fn k_mod(&self) -> i64 {
        self.k_mod
    }

    /// Largest `k` with `p` nondecreasing on `k_opt..=k`. Equals
    /// [`k_mod`](Self::k_mod) for smooth unimodal families; on noisy
    /// histograms it can stop well short of the mode.
    pub fn monotone_end(&self) -> i64 {
        let mut end = 0;
        while end + 1 < self.p.len() && self.p[end + 1] >= self.p[end] {
            end += 1;
        }
        self.range.cost(end)
    }

    /// Largest cost whose good-enough window `k ± (k - k_opt)` fits under `k_mod`.
    pub fn k_ge(&self) -> i64 {
        self.k_opt() + (self.k_mod - self.k_opt()) / 2
    }

    /// Costs with positive probability.
    pub fn support(&self) -> impl Iterator<Item = i64> + '_ {
        self.range
            .costs()
            .zip(self.p.iter())
            .filter(|(_, v)| positive(*v))
            .map(|(k, _)| k)
    }

    pub fn map_scalar<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Result<CostDistribution<U>> {
        CostDistribution::new(self.range, self.p.iter().map(f).collect())
    }
}

fn mode_index<T: Scalar>(p: &[T]) -> usize {
    let mut best = 0;
    for (i, v) in p.iter().enumerate() {
        if *v >= p[best] {
            best = i;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn range(a: i64, b: i64) -> CostRange {
        CostRange::new(a, b).unwrap()
    }

    #[test]
    fn uniform_p_less_matches_count() {
        let d = CostDistribution::<f64>::uniform(range(0, 200));
        assert!((d.p_less(30) - 30.0 / 201.0).abs() < 1e-15);
        assert_eq!(d.p_less(0), 0.0);
        assert_eq!(d.p_less(-5), 0.0);
        assert!((d.p_less(201) - 1.0).abs() < 1e-12);
        assert_eq!(d.p(-1), 0.0);
        assert_eq!(d.p(201), 0.0);
    }

    #[test]
    fn uniform_mode_is_top_of_range() {
        let d = CostDistribution::<f64>::uniform(range(0, 200));
        assert_eq!(d.k_mod(), 200);
        assert_eq!(d.monotone_end(), 200);
    }

    #[test]
    fn partition_of_unity_exact() {
        let counts = [1u64, 3, 7, 12, 9, 4, 2, 1];
        let d = CostDistribution::<BigRational>::from_counts(range(10, 17), &counts).unwrap();
        for k in d.range().costs() {
            let total = d.p_less(k) + d.p(k) + d.p_greater(k) + d.p_much_greater(k);
            assert_eq!(total, BigRational::from_integer(1.into()), "k={k}");
        }
        assert_eq!(d.k_mod(), 13);
        assert_eq!(d.k_ge(), 11);
    }

    #[test]
    fn mode_prefers_largest_tie_and_monotone_end_can_stop_early() {
        let d = CostDistribution::<f64>::from_counts(range(0, 5), &[1, 0, 2, 5, 5, 1]).unwrap();
        assert_eq!(d.k_mod(), 4);
        assert_eq!(d.monotone_end(), 0);
    }

    #[test]
    fn rejects_unnormalised() {
        assert!(CostDistribution::new(range(0, 1), vec![0.5, 0.6]).is_err());
        assert!(CostDistribution::new(range(0, 1), vec![1.5, -0.5]).is_err());
        assert!(CostDistribution::new(range(0, 2), vec![0.5, 0.5]).is_err());
    }
}
