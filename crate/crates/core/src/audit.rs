//! Exhaustive checks that each proved inequality holds wherever its hypotheses do.
//!
//! Comparisons are made in `f64` with tolerance `tol` scaled by
//! `max(1, |rhs|)`, so probabilities are compared absolutely and step counts
//! relatively.

use crate::descent::{blind_steps, DescentBoundContext, UniformBound};
use crate::error::{Error, Result};
use crate::landscape::{ConditionReport, CostDistribution, NWeightTable, NeighbourKernel};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Check {
    /// `pn^<(k) ≥ r̄(k) p^<(k)` under GE and NSC.
    ImprovingMass,
    /// `pbr^>(k) ≤ r̄(k) p^>(k)` under GE and NSC.
    WorseMass,
    /// `r(k,δ) ≤ r̄(k)` for `δ > k - k_opt` under GE and NSC.
    FarWeights,
    /// `pn^>(k) ≤ pbr^>(k)` for unbiased `k`.
    UnbiasedWorse,
    /// `pn^<(k) ≥ p^<(k)` when `r̄(k) ≥ 1` and the improving mass bound holds.
    AverageWeightAtLeastOne,
    /// `pn^<(k) ≥ p^<(k)` under the same-cost hypotheses with `r̄(k) ≤ 1`.
    AverageWeightBelowOne,
    /// `steps(j,t) ≤ steps^u(j,t)` under Full NSC while `p` is still rising.
    ReducedSteps,
    /// `steps^u(j-1,t) ≤ steps^u(j,t)` under Full NSC.
    StepsMonotone,
    /// `steps^u(k,t) ≤ imp^u(k) (k-t)` under Full NSC.
    FixedCountSteps,
    /// `imp^u(k) (k-t) ≤ blind(t)` under Full NSC and `r̄(k,t) p(t) ≥ p^<(t+1)`.
    StepsUpperBound,
    /// `steps(k,t) ≤ blind(t)` under all descent-bound hypotheses.
    DescentBeatsBlind,
}

pub const LEVEL_CHECKS: [Check; 6] = [
    Check::ImprovingMass,
    Check::WorseMass,
    Check::FarWeights,
    Check::UnbiasedWorse,
    Check::AverageWeightAtLeastOne,
    Check::AverageWeightBelowOne,
];

pub const DESCENT_CHECKS: [Check; 5] = [
    Check::ReducedSteps,
    Check::StepsMonotone,
    Check::FixedCountSteps,
    Check::StepsUpperBound,
    Check::DescentBeatsBlind,
];

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub check: Check,
    pub k: i64,
    pub t: Option<i64>,
    /// Amount by which the inequality fails, before tolerance.
    pub excess: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Audit {
    /// Instances where the hypotheses held, per check.
    pub applicable: Vec<(Check, u64)>,
    pub violations: Vec<Violation>,
}

impl Audit {
    fn record(&mut self, check: Check, k: i64, t: Option<i64>, lhs: f64, rhs: f64, tol: f64) {
        match self.applicable.iter_mut().find(|(c, _)| *c == check) {
            Some((_, n)) => *n += 1,
            None => self.applicable.push((check, 1)),
        }
        if lhs > rhs + tol * rhs.abs().max(1.0) || lhs.is_nan() || rhs.is_nan() {
            self.violations.push(Violation {
                check,
                k,
                t,
                excess: lhs - rhs,
            });
        }
    }

    pub fn applicable(&self, check: Check) -> u64 {
        self.applicable.iter().find(|(c, _)| *c == check).map_or(0, |(_, n)| *n)
    }

    pub fn merge(&mut self, other: Audit) {
        for (c, n) in other.applicable {
            match self.applicable.iter_mut().find(|(c2, _)| *c2 == c) {
                Some((_, m)) => *m += n,
                None => self.applicable.push((c, n)),
            }
        }
        self.violations.extend(other.violations);
    }
}

/// Per-level inequalities of the improvement lemmas and theorems.
pub fn audit_levels<T: Scalar>(nweights: &NWeightTable<T>, report: &ConditionReport<T>, tol: f64) -> Audit {
    let mut a = Audit::default();
    for lvl in report.levels.iter().filter(|l| l.k() > report.k_opt) {
        let q = &lvl.quantities;
        let k = lvl.k();
        let f = |x: &T| x.as_f64();
        if let (true, Some(rbar)) = (lvl.improving_mass_hypotheses(), q.rbar.as_ref()) {
            let rbar = f(rbar);
            a.record(Check::ImprovingMass, k, None, rbar * f(&q.p_less), f(&q.pn_less), tol);
            a.record(Check::WorseMass, k, None, f(&q.pbr_greater), rbar * f(&q.p_greater), tol);
            let far = nweights
                .defined(k)
                .into_iter()
                .filter(|(d, _)| *d > k - report.k_opt)
                .map(|(_, r)| r.as_f64())
                .fold(f64::NEG_INFINITY, f64::max);
            if far.is_finite() {
                a.record(Check::FarWeights, k, None, far, rbar, tol);
            }
        }
        if lvl.unbiased {
            a.record(Check::UnbiasedWorse, k, None, f(&q.pn_greater), f(&q.pbr_greater), tol);
        }
        if lvl.high_average_holds {
            a.record(Check::AverageWeightAtLeastOne, k, None, f(&q.p_less), f(&q.pn_less), tol);
        }
        if lvl.low_average_holds {
            a.record(Check::AverageWeightBelowOne, k, None, f(&q.p_less), f(&q.pn_less), tol);
        }
    }
    a
}

/// Descent-step inequalities for every target in `targets` and every starting
/// cost with Full NSC. Targets with `p(t) = 0` or no mass below are skipped.
pub fn audit_descent<T: Scalar>(
    dist: &CostDistribution<T>,
    kernel: &NeighbourKernel<T>,
    nweights: &NWeightTable<T>,
    targets: impl IntoIterator<Item = i64>,
    tol: f64,
) -> Result<Audit> {
    let ctx = DescentBoundContext::new(dist, kernel, nweights);
    let mut a = Audit::default();
    // Full NSC is a running conjunction, so its levels form a prefix
    let Some(k_full) = dist.range().costs().rev().find(|&k| ctx.full_nsc(k)) else {
        return Ok(a);
    };
    for t in targets {
        if t >= k_full || dist.p(t).as_f64() <= 0.0 {
            continue;
        }
        let blind = match blind_steps(dist, t) {
            Ok(b) => b.as_f64(),
            Err(Error::UnreachableTarget(_)) => continue,
            Err(e) => return Err(e),
        };
        let ub = match UniformBound::compute(dist, nweights, k_full, t) {
            Ok(ub) => ub,
            Err(Error::DeadEnd(_)) => continue,
            Err(e) => return Err(e),
        };
        let su = |j: i64| ub.steps(j).expect("within bound").as_f64();
        for k in t + 1..=k_full {
            let imp = ub.imp(k).expect("above target").as_f64();
            let span = (k - t) as f64;
            a.record(Check::StepsMonotone, k, Some(t), su(k - 1), su(k), tol);
            a.record(Check::FixedCountSteps, k, Some(t), su(k), imp * span, tol);
            let rbar_ok = nweights
                .rbar_to(k, t)
                .is_some_and(|r| r.as_f64() * dist.p(t).as_f64() >= dist.p_less(t + 1).as_f64());
            if rbar_ok {
                a.record(Check::StepsUpperBound, k, Some(t), imp * span, blind, tol);
            }
        }
        let k_top = k_full.min(dist.monotone_end());
        if k_top <= t {
            continue;
        }
        for chk in ctx.scan(t, k_top)? {
            if chk.k <= t {
                continue;
            }
            if let Some(s) = &chk.steps {
                a.record(Check::ReducedSteps, chk.k, Some(t), s.as_f64(), su(chk.k), tol);
            }
            if chk.hypotheses() {
                let s = chk.steps.as_ref().map_or(f64::INFINITY, Scalar::as_f64);
                a.record(Check::DescentBeatsBlind, chk.k, Some(t), s, chk.blind.as_f64(), tol);
            }
        }
    }
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::landscape::analyse;
    use crate::models::{lipschitz_space, LipschitzSpaceSpec};

    #[test]
    fn toy_space_is_clean() {
        let (d, k) = lipschitz_space(&LipschitzSpaceSpec::<f64>::uniform(60, 4).unwrap()).unwrap();
        let (w, report) = analyse(&d, &k).unwrap();
        let mut a = audit_levels(&w, &report, 1e-9);
        a.merge(audit_descent(&d, &k, &w, 0..60, 1e-9).unwrap());
        assert!(a.violations.is_empty(), "{:?}", a.violations);
        assert!(a.applicable(Check::FixedCountSteps) > 0);
    }

    #[test]
    fn violation_is_reported() {
        let mut a = Audit::default();
        a.record(Check::ImprovingMass, 3, None, 0.5, 0.4, 1e-9);
        a.record(Check::ImprovingMass, 4, None, 0.4, 0.4, 1e-9);
        assert_eq!(a.applicable(Check::ImprovingMass), 2);
        assert_eq!(a.violations.len(), 1);
    }
}
