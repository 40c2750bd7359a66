//! Per-level checks of the properties under which neighbourhood search beats
//! blind search: good-enough cost (GE), unbiased neighbourhoods, neighbours'
//! similar cost (NSC) and its cross-level form (Full NSC), and the hypotheses
//! and conclusions of the improvement theorems.

use rayon::prelude::*;

use crate::error::Result;
use crate::landscape::{compute_nweights, CostDistribution, NWeightTable, NeighbourKernel};
use crate::scalar::{at_least, Scalar};

/// Outcome of the unbiasedness test at one level.
#[derive(Debug, Clone)]
pub struct BiasCheck<T> {
    pub unbiased: bool,
    pub positively_biased: bool,
    /// `posr(k,δ) = pn(k,k-δ) - p(k-δ) r(k,δ)` for every defined `δ ≥ 1`.
    pub posr: Vec<(i64, T)>,
}

pub fn check_unbiased<T: Scalar>(
    dist: &CostDistribution<T>,
    kernel: &NeighbourKernel<T>,
    nweights: &NWeightTable<T>,
    k: i64,
) -> BiasCheck<T> {
    let tol = T::tolerance();
    let posr: Vec<(i64, T)> = (1..=nweights.max_delta())
        .filter_map(|d| {
            let r = nweights.r(k, d)?;
            Some((d, kernel.pn(k, k - d) - dist.p(k - d) * r))
        })
        .collect();
    let unbiased = posr.iter().all(|(_, v)| *v >= -tol.clone());
    let positively_biased = unbiased && posr.iter().any(|(_, v)| *v > tol);
    BiasCheck {
        unbiased,
        positively_biased,
        posr,
    }
}

/// The probability sums that every theorem at a level is phrased in.
#[derive(Debug, Clone)]
pub struct LevelQuantities<T> {
    pub k: i64,
    pub p: T,
    pub p_less: T,
    pub p_greater: T,
    pub p_much_greater: T,
    pub pn_same: T,
    pub pn_less: T,
    pub pn_greater: T,
    pub pn_much_greater: T,
    pub pbr_less: T,
    pub pbr_greater: T,
    pub rbar: Option<T>,
}

impl<T: Scalar> LevelQuantities<T> {
    pub fn compute(
        dist: &CostDistribution<T>,
        kernel: &NeighbourKernel<T>,
        nweights: &NWeightTable<T>,
        k: i64,
    ) -> Result<Self> {
        Ok(Self {
            k,
            p: dist.p(k),
            p_less: dist.p_less(k),
            p_greater: dist.p_greater(k),
            p_much_greater: dist.p_much_greater(k),
            pn_same: kernel.pn(k, k),
            pn_less: kernel.pn_less(k)?,
            pn_greater: kernel.pn_greater(k)?,
            pn_much_greater: kernel.pn_much_greater(k)?,
            pbr_less: nweights.pbr_less(dist, k),
            pbr_greater: nweights.pbr_greater(dist, k),
            rbar: nweights.rbar(k),
        })
    }

    /// `t(k) = pn(k,k) - p(k)`: excess of same-cost neighbours.
    pub fn same_cost_excess(&self) -> T {
        self.pn_same.clone() - self.p.clone()
    }

    /// `a(k) = (p^>(k) - pn^>(k)) + (p^>>(k) - pn^>>(k))`.
    pub fn worse_deficit(&self) -> T {
        (self.p_greater.clone() - self.pn_greater.clone())
            + (self.p_much_greater.clone() - self.pn_much_greater.clone())
    }
}

#[derive(Debug, Clone)]
pub struct LevelConditions<T> {
    pub quantities: LevelQuantities<T>,
    pub ge: bool,
    /// `p` nondecreasing over the whole window `k_opt ..= 2k - k_opt`, which is
    /// what the lemmas need. Same as `ge` when `p` rises monotonically to its mode.
    pub ge_window: bool,
    pub unbiased: bool,
    pub positively_biased: bool,
    /// Unbiased and `r(k,δ)` nonincreasing in `δ`.
    pub nsc: bool,
    pub full_nsc: bool,
    /// `pn^<(k) ≥ r̄(k) p^<(k)`.
    pub pbr_low: bool,
    /// `r(k,δ) ≤ r̄(k)` for every defined `δ > k - k_opt`.
    pub r_high: bool,
    /// `pbr^>(k) ≤ r̄(k) p^>(k)`.
    pub pbr_high: bool,
    /// `pn^>(k) ≤ pbr^>(k)`.
    pub unbiased_high: bool,
    /// `r(k, k - k_opt) ≥ 1`, which with NSC already forces `pn^< ≥ p^<`.
    pub rkk_at_least_one: bool,
    /// `r̄(k) ≥ 1` with `pn^< ≥ r̄ p^<` on the improving side.
    pub high_average_holds: bool,
    /// `r̄(k) ≤ 1` with the worse side and same-cost mass both bounded.
    pub low_average_holds: bool,
    /// The direct outcome `pn^<(k) ≥ p^<(k)`.
    pub improves: bool,
    /// `a(k) - t(k)`; nonnegative means the weak same-cost condition holds.
    pub weak_cond_slack: T,
}

impl<T: Scalar> LevelConditions<T> {
    pub fn k(&self) -> i64 {
        self.quantities.k
    }

    pub fn improving_mass_hypotheses(&self) -> bool {
        self.ge_window && self.nsc
    }

    pub fn worse_mass_hypotheses(&self) -> bool {
        self.ge_window && self.nsc
    }

    /// Neighbourhood search provably improves at `k`, through either
    /// `r(k,k-k_opt) ≥ 1` or the average-weight theorem.
    pub fn improvement_certified(&self) -> bool {
        self.rkk_at_least_one || self.high_average_holds
    }

    pub fn weak_beneficial(&self) -> bool {
        at_least(&self.weak_cond_slack, &T::zero())
    }
}

#[derive(Debug, Clone)]
pub struct ConditionReport<T> {
    pub k_opt: i64,
    pub k_mod: i64,
    pub k_ge: i64,
    pub levels: Vec<LevelConditions<T>>,
}

impl<T: Scalar> ConditionReport<T> {
    pub fn level(&self, k: i64) -> Option<&LevelConditions<T>> {
        self.levels
            .binary_search_by_key(&k, |l| l.k())
            .ok()
            .map(|i| &self.levels[i])
    }

    /// Levels in `k_opt+1 ..= k_ge` without a certificate of improvement.
    /// Costs that no point attains have nothing to certify and are skipped.
    pub fn uncertified_levels(&self) -> Vec<i64> {
        self.levels
            .iter()
            .filter(|l| l.k() > self.k_opt && l.k() <= self.k_ge && !l.improvement_certified())
            .map(|l| l.k())
            .collect()
    }
}

/// `GE(k)` in its sufficient form `2(k - k_opt) ≤ k_mod - k_opt`.
pub fn good_enough<T: Scalar>(dist: &CostDistribution<T>, k: i64) -> bool {
    2 * (k - dist.k_opt()) <= dist.k_mod() - dist.k_opt()
}

/// `r(k,δ)` nonincreasing in `δ` over defined entries; ties count as decreasing.
pub fn weights_nonincreasing<T: Scalar>(nweights: &NWeightTable<T>, k: i64) -> bool {
    nweights
        .defined(k)
        .windows(2)
        .all(|w| at_least(&w[0].1, &w[1].1))
}

/// `r(upper, δ) ≤ r(lower, δ)` for every `δ ≤ lower - k_opt` where both are defined.
fn weights_grow_downwards<T: Scalar>(nweights: &NWeightTable<T>, upper: i64, lower: i64) -> bool {
    let reach = lower - nweights.range().k_opt();
    (1..=reach).all(|d| match (nweights.r(upper, d), nweights.r(lower, d)) {
        (Some(hi), Some(lo)) => at_least(&lo, &hi),
        _ => true,
    })
}

/// Full NSC for every level that has weights, in increasing cost order.
///
/// `full_nsc(k)` needs NSC at every populated level in `k_opt+1 ..= k` and
/// `r(k1,δ) ≤ r(k2,δ)` for populated `k2 < k1 ≤ k`.
pub fn full_nsc_levels<T: Scalar>(
    dist: &CostDistribution<T>,
    kernel: &NeighbourKernel<T>,
    nweights: &NWeightTable<T>,
) -> Vec<(i64, bool)> {
    let levels: Vec<i64> = dist.range().costs().filter(|&k| nweights.has_level(k)).collect();
    let local: Vec<bool> = levels
        .par_iter()
        .map(|&k| {
            if k == dist.k_opt() {
                return true;
            }
            let nsc = check_unbiased(dist, kernel, nweights, k).unbiased && weights_nonincreasing(nweights, k);
            nsc && levels
                .iter()
                .take_while(|&&k2| k2 < k)
                .filter(|&&k2| k2 > dist.k_opt())
                .all(|&k2| weights_grow_downwards(nweights, k, k2))
        })
        .collect();
    let mut running = true;
    levels
        .into_iter()
        .zip(local)
        .map(|(k, ok)| {
            running &= ok;
            (k, running)
        })
        .collect()
}

pub fn check_conditions<T: Scalar>(
    dist: &CostDistribution<T>,
    kernel: &NeighbourKernel<T>,
    nweights: &NWeightTable<T>,
) -> Result<ConditionReport<T>> {
    let full = full_nsc_levels(dist, kernel, nweights);
    let levels = full
        .par_iter()
        .map(|&(k, full_nsc)| level_conditions(dist, kernel, nweights, k, full_nsc))
        .collect::<Result<Vec<_>>>()?;
    Ok(ConditionReport {
        k_opt: dist.k_opt(),
        k_mod: dist.k_mod(),
        k_ge: dist.k_ge(),
        levels,
    })
}

/// Convenience wrapper computing the NWeights on the way.
pub fn analyse<T: Scalar>(
    dist: &CostDistribution<T>,
    kernel: &NeighbourKernel<T>,
) -> Result<(NWeightTable<T>, ConditionReport<T>)> {
    let w = compute_nweights(dist, kernel)?;
    let report = check_conditions(dist, kernel, &w)?;
    Ok((w, report))
}

fn level_conditions<T: Scalar>(
    dist: &CostDistribution<T>,
    kernel: &NeighbourKernel<T>,
    nweights: &NWeightTable<T>,
    k: i64,
    full_nsc: bool,
) -> Result<LevelConditions<T>> {
    let q = LevelQuantities::compute(dist, kernel, nweights, k)?;
    let bias = check_unbiased(dist, kernel, nweights, k);
    let nsc = bias.unbiased && weights_nonincreasing(nweights, k);
    let reach = k - dist.k_opt();

    let (pbr_low, r_high, pbr_high) = match &q.rbar {
        Some(rbar) => (
            at_least(&q.pn_less, &(rbar.clone() * q.p_less.clone())),
            nweights
                .defined(k)
                .iter()
                .filter(|(d, _)| *d > reach)
                .all(|(_, r)| at_least(rbar, r)),
            at_least(&(rbar.clone() * q.p_greater.clone()), &q.pbr_greater),
        ),
        None => (false, false, false),
    };
    let unbiased_high = at_least(&q.pbr_greater, &q.pn_greater);
    let rkk_at_least_one = nweights.r(k, reach).is_some_and(|r| at_least(&r, &T::one()));
    let high_average_holds = pbr_low && q.rbar.as_ref().is_some_and(|r| at_least(r, &T::one()));
    let low_average_holds = r_high
        && pbr_high
        && unbiased_high
        && at_least(&q.p, &q.pn_same)
        && q.rbar.as_ref().is_some_and(|r| at_least(&T::one(), r));
    let improves = at_least(&q.pn_less, &q.p_less);
    let weak_cond_slack = q.worse_deficit() - q.same_cost_excess();

    Ok(LevelConditions {
        ge: good_enough(dist, k),
        ge_window: 2 * k - dist.k_opt() <= dist.monotone_end(),
        unbiased: bias.unbiased,
        positively_biased: bias.positively_biased,
        nsc,
        full_nsc,
        pbr_low,
        r_high,
        pbr_high,
        unbiased_high,
        rkk_at_least_one,
        high_average_holds,
        low_average_holds,
        improves,
        weak_cond_slack,
        quantities: q,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::landscape::{CostRange, NeighbourhoodSize};

    #[test]
    fn blind_kernel_is_boundary_case() {
        let range = CostRange::new(0, 12).unwrap();
        let d = CostDistribution::<f64>::from_counts(range, &[1, 2, 3, 5, 8, 9, 10, 9, 8, 5, 3, 2, 1]).unwrap();
        let row = d.probabilities().to_vec();
        let k = NeighbourKernel::from_row_fn(range, NeighbourhoodSize::Finite(4), |_| Some(row.clone())).unwrap();
        let (_, rep) = analyse(&d, &k).unwrap();
        for l in &rep.levels {
            assert!(l.unbiased && !l.positively_biased, "k={}", l.k());
            assert!(l.nsc, "k={}", l.k());
            assert!(l.improves, "k={}", l.k());
            assert!((l.quantities.pn_less - l.quantities.p_less).abs() < 1e-12);
            if l.k() > 0 {
                assert!(l.high_average_holds, "k={}", l.k());
            }
        }
        assert_eq!(rep.k_mod, 6);
        assert_eq!(rep.k_ge, 3);
        assert!(rep.level(3).unwrap().ge);
        assert!(!rep.level(4).unwrap().ge);
    }

    #[test]
    fn negatively_biased_level_detected() {
        // cost 2 neighbours only ever land on 3 or 1, with 1 under-represented
        let range = CostRange::new(0, 4).unwrap();
        let d = CostDistribution::<f64>::from_counts(range, &[1, 1, 1, 1, 1]).unwrap();
        let k = NeighbourKernel::from_row_fn(range, NeighbourhoodSize::Finite(2), |k1| {
            Some(if k1 == 2 {
                vec![0.0, 0.1, 0.0, 0.9, 0.0]
            } else {
                vec![0.2; 5]
            })
        })
        .unwrap();
        let w = compute_nweights(&d, &k).unwrap();
        let b = check_unbiased(&d, &k, &w, 2);
        assert!(!b.unbiased);
        // r(2,1) = 1.0 / 0.4 = 2.5, posr = 0.1 - 0.2 * 2.5 = -0.4
        assert!((b.posr[0].1 + 0.4).abs() < 1e-12);
        let full = full_nsc_levels(&d, &k, &w);
        assert!(full.iter().all(|&(lvl, ok)| ok == (lvl < 2)));
    }
}
