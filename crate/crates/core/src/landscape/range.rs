use crate::error::{Error, Result};

/// Inclusive integer cost range `k_opt..=k_max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CostRange {
    k_opt: i64,
    k_max: i64,
}

impl CostRange {
    pub fn new(k_opt: i64, k_max: i64) -> Result<Self> {
        if k_opt > k_max {
            return Err(Error::InvalidRange { k_opt, k_max });
        }
        Ok(Self { k_opt, k_max })
    }

    pub fn k_opt(&self) -> i64 {
        self.k_opt
    }

    pub fn k_max(&self) -> i64 {
        self.k_max
    }

    pub fn len(&self) -> usize {
        (self.k_max - self.k_opt + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, k: i64) -> bool {
        k >= self.k_opt && k <= self.k_max
    }

    /// Dense index of `k`, or `None` outside the range.
    pub fn index(&self, k: i64) -> Option<usize> {
        self.contains(k).then(|| (k - self.k_opt) as usize)
    }

    pub fn cost(&self, index: usize) -> i64 {
        self.k_opt + index as i64
    }

    pub fn costs(&self) -> impl DoubleEndedIterator<Item = i64> + Clone {
        self.k_opt..=self.k_max
    }

    pub(crate) fn as_pair(&self) -> (i64, i64) {
        (self.k_opt, self.k_max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_inverted_range() {
        assert!(CostRange::new(5, 4).is_err());
        assert_eq!(CostRange::new(4, 4).unwrap().len(), 1);
    }

    #[test]
    fn index_and_cost_are_inverse() {
        let r = CostRange::new(85, 250).unwrap();
        assert_eq!(r.index(84), None);
        assert_eq!(r.index(251), None);
        for k in r.costs() {
            assert_eq!(r.cost(r.index(k).unwrap()), k);
        }
    }
}
