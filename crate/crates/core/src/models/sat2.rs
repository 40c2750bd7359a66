//! Analytic model of a structured MAX-2-SAT class.
//!
//! Each of `num_clauses` two-literal clauses is false with probability 1/4
//! independently of the others. Flipping one variable touches the
//! `occurrences_per_var` clauses it appears in: the false ones among them
//! (a hypergeometric draw) all become true and each true one becomes false
//! with probability 1/3.

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::landscape::{CostDistribution, CostRange, NeighbourKernel, NeighbourhoodSize};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sat2ClassSpec {
    pub num_vars: u64,
    pub num_clauses: u64,
    pub occurrences_per_var: u64,
}

impl Default for Sat2ClassSpec {
    fn default() -> Self {
        Self {
            num_vars: 50,
            num_clauses: 100,
            occurrences_per_var: 4,
        }
    }
}

impl Sat2ClassSpec {
    pub fn validate(&self) -> Result<()> {
        if self.num_vars == 0 || self.occurrences_per_var == 0 {
            return Err(Error::InvalidSpec("empty MAX-2-SAT class".into()));
        }
        if self.num_vars * self.occurrences_per_var != 2 * self.num_clauses {
            return Err(Error::InvalidSpec(format!(
                "{} variables x {} occurrences must equal 2 x {} clauses",
                self.num_vars, self.occurrences_per_var, self.num_clauses
            )));
        }
        if self.occurrences_per_var > self.num_clauses {
            return Err(Error::InvalidSpec("more occurrences than clauses".into()));
        }
        Ok(())
    }

    pub fn range(&self) -> CostRange {
        CostRange::new(0, self.num_clauses as i64).expect("nonnegative clause count")
    }
}

fn ratio(num: u64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn choose(n: u64, k: u64) -> BigInt {
    if k > n {
        BigInt::from(0)
    } else {
        binomial(BigInt::from(n), BigInt::from(k))
    }
}

/// Exact binomial cost distribution `C(m,C) (1/4)^C (3/4)^(m-C)`.
pub fn sat2_distribution_exact(spec: &Sat2ClassSpec) -> Result<CostDistribution<BigRational>> {
    spec.validate()?;
    let m = spec.num_clauses;
    let denom = BigInt::from(4).pow(m as u32);
    let p = (0..=m)
        .map(|c| {
            let num = choose(m, c) * BigInt::from(3).pow((m - c) as u32);
            BigRational::new(num, denom.clone())
        })
        .collect();
    CostDistribution::new(spec.range(), p)
}

/// Exact one-flip kernel; the neighbourhood is one flip per variable.
pub fn sat2_kernel_exact(spec: &Sat2ClassSpec) -> Result<NeighbourKernel<BigRational>> {
    spec.validate()?;
    let m = spec.num_clauses;
    let occ = spec.occurrences_per_var;
    let draws = BigRational::from_integer(choose(m, occ));
    let third = ratio(1, 3);
    let two_thirds = ratio(2, 3);
    NeighbourKernel::from_row_fn(spec.range(), NeighbourhoodSize::Finite(spec.num_vars), |c| {
        let c = c as u64;
        let mut row = vec![BigRational::from_integer(0.into()); (m + 1) as usize];
        for f in 0..=occ.min(c) {
            let hyper = BigRational::from_integer(choose(c, f) * choose(m - c, occ - f)) / draws.clone();
            if hyper == BigRational::from_integer(0.into()) {
                continue;
            }
            let rest = occ - f;
            for g in 0..=rest {
                let flip = BigRational::from_integer(choose(rest, g))
                    * num_traits::pow(third.clone(), g as usize)
                    * num_traits::pow(two_thirds.clone(), (rest - g) as usize);
                row[(c - f + g) as usize] += hyper.clone() * flip;
            }
        }
        Some(row)
    })
}

pub fn sat2_distribution<T: Scalar>(spec: &Sat2ClassSpec) -> Result<CostDistribution<T>> {
    sat2_distribution_exact(spec)?.map_scalar(T::from_rational)
}

pub fn sat2_kernel<T: Scalar>(spec: &Sat2ClassSpec) -> Result<NeighbourKernel<T>> {
    sat2_kernel_exact(spec)?.map_scalar(T::from_rational)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, ToPrimitive, Zero};

    #[test]
    fn distribution_is_exact_binomial() {
        let d = sat2_distribution_exact(&Sat2ClassSpec::default()).unwrap();
        assert_eq!(d.k_mod(), 25);
        let total = d.probabilities().iter().fold(BigRational::zero(), |a, v| a + v);
        assert!(total.is_one());
        assert_eq!(d.p(0), num_traits::pow(ratio(3, 4), 100));
        assert!((d.p(25).to_f64().unwrap() - 0.092).abs() < 1e-3);
    }

    #[test]
    fn all_four_false_formula() {
        let k = sat2_kernel_exact(&Sat2ClassSpec::default()).unwrap();
        for c in 4..=100u64 {
            let expect = ratio(c * (c - 1) * (c - 2) * (c - 3), 100 * 99 * 98 * 97);
            assert_eq!(k.pn(c as i64, c as i64 - 4), expect, "C={c}");
        }
        assert!(k.pn(0, -1).is_zero());
    }

    #[test]
    fn support_is_within_four() {
        let k = sat2_kernel::<f64>(&Sat2ClassSpec::default()).unwrap();
        for c in 0..=100i64 {
            for c2 in 0..=100 {
                if (c - c2).abs() > 4 {
                    assert_eq!(k.pn(c, c2), 0.0);
                }
            }
        }
    }

    #[test]
    fn rejects_inconsistent_spec() {
        let spec = Sat2ClassSpec {
            num_vars: 10,
            num_clauses: 100,
            occurrences_per_var: 4,
        };
        assert!(spec.validate().is_err());
    }
}
