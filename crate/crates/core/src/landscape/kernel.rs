use std::fmt;

use crate::error::{Error, Result};
use crate::landscape::CostRange;
use crate::scalar::{negative, Scalar};

/// Number of neighbours probed before local descent gives up at a level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NeighbourhoodSize {
    Finite(u64),
    Infinite,
}

impl fmt::Display for NeighbourhoodSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NeighbourhoodSize::Finite(n) => write!(f, "{n}"),
            NeighbourhoodSize::Infinite => f.write_str("inf"),
        }
    }
}

impl std::str::FromStr for NeighbourhoodSize {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "inf" | "infinite" | "INFINITE" => Ok(NeighbourhoodSize::Infinite),
            _ => match s.parse::<u64>() {
                Ok(0) => Err("neighbourhood size must be positive".into()),
                Ok(n) => Ok(NeighbourhoodSize::Finite(n)),
                Err(e) => Err(format!("bad neighbourhood size {s:?}: {e}")),
            },
        }
    }
}

/// Conditional cost probabilities `pn(k1, k2)` of a neighbour of a cost-`k1`
/// point, stored densely over `K × K`. Rows may be absent (no points at `k1`).
#[derive(Debug, Clone, PartialEq)]
pub struct NeighbourKernel<T> {
    range: CostRange,
    size: NeighbourhoodSize,
    pn: Vec<T>,
    present: Vec<bool>,
}

impl<T: Scalar> NeighbourKernel<T> {
    /// Builds a kernel from per-row probability vectors; each present row must
    /// be nonnegative and sum to one.
    pub fn new(range: CostRange, size: NeighbourhoodSize, rows: Vec<Option<Vec<T>>>) -> Result<Self> {
        let n = range.len();
        if rows.len() != n {
            return Err(Error::InvalidKernel(format!(
                "expected {n} rows, got {}",
                rows.len()
            )));
        }
        let slack = T::tolerance() / T::from_count(100);
        let mut pn = vec![T::zero(); n * n];
        let mut present = vec![false; n];
        for (i, row) in rows.into_iter().enumerate() {
            let Some(row) = row else { continue };
            let k1 = range.cost(i);
            if row.len() != n {
                return Err(Error::InvalidKernel(format!(
                    "row {k1} has {} entries, expected {n}",
                    row.len()
                )));
            }
            if row.iter().any(negative) {
                return Err(Error::InvalidKernel(format!("row {k1} has a negative entry")));
            }
            let total = row.iter().fold(T::zero(), |a, v| a + v.clone());
            if (total.clone() - T::one()).abs() > slack {
                return Err(Error::InvalidKernel(format!("row {k1} sums to {total}")));
            }
            pn[i * n..(i + 1) * n].clone_from_slice(&row);
            present[i] = true;
        }
        Ok(Self {
            range,
            size,
            pn,
            present,
        })
    }

    /// Row-normalises neighbour counts; rows with no neighbours are absent.
    pub fn from_counts(range: CostRange, size: NeighbourhoodSize, counts: &[u64]) -> Result<Self> {
        let n = range.len();
        if counts.len() != n * n {
            return Err(Error::InvalidKernel("count matrix has the wrong shape".into()));
        }
        let rows = counts
            .chunks(n)
            .map(|row| {
                let total: u64 = row.iter().sum();
                (total > 0).then(|| row.iter().map(|&c| T::from_ratio(c, total)).collect())
            })
            .collect();
        Self::new(range, size, rows)
    }

    /// Builds every row with `f(k1)`; `None` marks an absent row.
    pub fn from_row_fn(
        range: CostRange,
        size: NeighbourhoodSize,
        mut f: impl FnMut(i64) -> Option<Vec<T>>,
    ) -> Result<Self> {
        let rows = range.costs().map(&mut f).collect();
        Self::new(range, size, rows)
    }

    pub fn range(&self) -> CostRange {
        self.range
    }

    pub fn size(&self) -> NeighbourhoodSize {
        self.size
    }

    pub fn with_size(mut self, size: NeighbourhoodSize) -> Self {
        self.size = size;
        self
    }

    pub fn has_row(&self, k1: i64) -> bool {
        self.range.index(k1).is_some_and(|i| self.present[i])
    }

    pub fn row(&self, k1: i64) -> Result<&[T]> {
        let n = self.range.len();
        match self.range.index(k1) {
            Some(i) if self.present[i] => Ok(&self.pn[i * n..(i + 1) * n]),
            _ => Err(Error::MissingRow(k1)),
        }
    }

    /// `pn(k1, k2)`; zero when either cost is outside the range or the row is absent.
    pub fn pn(&self, k1: i64, k2: i64) -> T {
        match (self.range.index(k1), self.range.index(k2)) {
            (Some(i), Some(j)) => self.pn[i * self.range.len() + j].clone(),
            _ => T::zero(),
        }
    }

    /// `pn(k, k+δ) + pn(k, k-δ)` for `δ > 0`, `pn(k, k)` for `δ = 0`.
    pub fn pn_pm(&self, k: i64, delta: i64) -> T {
        if delta == 0 {
            self.pn(k, k)
        } else {
            self.pn(k, k + delta) + self.pn(k, k - delta)
        }
    }

    /// Probability a neighbour of `k` is strictly better than `k`.
    pub fn pn_less(&self, k: i64) -> Result<T> {
        self.pn_at_most(k, k - 1)
    }

    /// Probability a neighbour of `k` has cost at most `t`.
    pub fn pn_at_most(&self, k: i64, t: i64) -> Result<T> {
        let row = self.row(k)?;
        let upto = (t - self.range.k_opt() + 1).clamp(0, row.len() as i64) as usize;
        Ok(row[..upto].iter().fold(T::zero(), |a, v| a + v.clone()))
    }

    /// Probability of a neighbour in `k+1 ..= k + (k - k_opt)`.
    pub fn pn_greater(&self, k: i64) -> Result<T> {
        self.row(k)?;
        let reach = k - self.range.k_opt();
        Ok((1..=reach).fold(T::zero(), |a, d| a + self.pn(k, k + d)))
    }

    /// Probability of a neighbour above `k + (k - k_opt)`.
    pub fn pn_much_greater(&self, k: i64) -> Result<T> {
        self.row(k)?;
        let from = k + (k - self.range.k_opt()) + 1;
        Ok((from.max(self.range.k_opt())..=self.range.k_max()).fold(T::zero(), |a, i| a + self.pn(k, i)))
    }

    pub fn present_rows(&self) -> impl Iterator<Item = i64> + '_ {
        self.range
            .costs()
            .zip(self.present.iter())
            .filter(|(_, p)| **p)
            .map(|(k, _)| k)
    }

    pub fn map_scalar<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Result<NeighbourKernel<U>> {
        let n = self.range.len();
        let rows = (0..n)
            .map(|i| self.present[i].then(|| self.pn[i * n..(i + 1) * n].iter().map(&f).collect()))
            .collect();
        NeighbourKernel::new(self.range, self.size, rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn range() -> CostRange {
        CostRange::new(2, 5).unwrap()
    }

    #[test]
    fn parses_sizes() {
        assert_eq!("50".parse::<NeighbourhoodSize>().unwrap(), NeighbourhoodSize::Finite(50));
        assert_eq!("inf".parse::<NeighbourhoodSize>().unwrap(), NeighbourhoodSize::Infinite);
        assert!("0".parse::<NeighbourhoodSize>().is_err());
        assert!("x".parse::<NeighbourhoodSize>().is_err());
    }

    #[test]
    fn rows_must_be_stochastic() {
        let bad = vec![Some(vec![0.5, 0.4, 0.0, 0.0]), None, None, None];
        assert!(NeighbourKernel::new(range(), NeighbourhoodSize::Finite(1), bad).is_err());
        let neg = vec![Some(vec![1.5, -0.5, 0.0, 0.0]), None, None, None];
        assert!(NeighbourKernel::new(range(), NeighbourhoodSize::Finite(1), neg).is_err());
    }

    #[test]
    fn missing_row_is_reported() {
        let k = NeighbourKernel::new(
            range(),
            NeighbourhoodSize::Finite(2),
            vec![Some(vec![0.0, 1.0, 0.0, 0.0]), None, Some(vec![0.25, 0.25, 0.25, 0.25]), None],
        )
        .unwrap();
        assert!(matches!(k.pn_less(3), Err(Error::MissingRow(3))));
        assert_eq!(k.pn_less(4).unwrap(), 0.5);
        assert_eq!(k.pn_at_most(4, 2).unwrap(), 0.25);
        assert_eq!(k.pn(2, 1), 0.0);
        assert_eq!(k.pn(3, 2), 0.0);
        assert_eq!(k.present_rows().collect::<Vec<_>>(), vec![2, 4]);
    }

    #[test]
    fn from_counts_normalises_rows() {
        let counts = [1, 3, 0, 0, 0, 0, 0, 0, 2, 2, 0, 4, 0, 0, 0, 5];
        let k = NeighbourKernel::<f64>::from_counts(range(), NeighbourhoodSize::Finite(4), &counts).unwrap();
        assert_eq!(k.pn(2, 3), 0.75);
        assert!(!k.has_row(3));
        assert_eq!(k.pn(4, 5), 0.5);
        assert_eq!(k.pn_greater(2).unwrap(), 0.0);
        assert_eq!(k.pn_much_greater(4).unwrap(), 0.0);
        assert_eq!(k.pn_greater(4).unwrap(), 0.5);
    }
}
