//! Expected step counts of blind search and local blind descent.
//!
//! Local blind descent samples blindly until it holds a point of cost at most
//! `k`, then probes up to `n` random neighbours per level, moving to the first
//! improving one. A level where all `n` probes fail sends it back to blind
//! search. The expected step counts satisfy a linear recursion in which the
//! total `lbd(k,t,n)` appears on both sides; it is solved in closed form.

use crate::error::{Error, Result};
use crate::landscape::{full_nsc_levels, CostDistribution, NWeightTable, NeighbourKernel, NeighbourhoodSize};
use crate::scalar::{at_least, geometric_sum, positive, powu, Scalar};

/// Which expectation `imp(k,n)` denotes for a finite neighbourhood.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ImpForm {
    /// Expected probes to the first improvement given that one occurs within `n`.
    #[default]
    Normalized,
    /// `Σ_{m=1}^{n} m (1-q)^{m-1} q`, without conditioning on success.
    Truncated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DescentSpec {
    pub start: i64,
    pub target: i64,
    pub size: NeighbourhoodSize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DescentResult<T> {
    pub spec: DescentSpec,
    pub blind_steps: T,
    pub lbd_steps: T,
    /// `steps(j)` for `j = k_opt ..= start`.
    pub steps: Vec<(i64, T)>,
    pub savings: T,
    pub beneficial: bool,
}

/// `blind(t) = 1 / p^<(t+1)`.
pub fn blind_steps<T: Scalar>(dist: &CostDistribution<T>, t: i64) -> Result<T> {
    let below = dist.p_less(t + 1);
    if !positive(&below) {
        return Err(Error::UnreachableTarget(t));
    }
    Ok(T::one() / below)
}

/// `(imp(k,n), nop(k,n))` for improvement probability `q = pn^<(k)`.
///
/// A finite neighbourhood with `q = 0` never improves: `imp` is reported as 0
/// and `nop` as 1.
pub fn imp_and_nop_from<T: Scalar>(q: &T, size: NeighbourhoodSize, form: ImpForm) -> Result<(T, T)> {
    match size {
        NeighbourhoodSize::Infinite => {
            if !positive(q) {
                return Err(Error::DeadEnd(0));
            }
            Ok((T::one() / q.clone(), T::zero()))
        }
        NeighbourhoodSize::Finite(n) => {
            if !positive(q) {
                return Ok((T::zero(), T::one()));
            }
            let miss = T::one() - q.clone();
            let nop = powu(&miss, n);
            let truncated = q.clone() * weighted_geometric_sum(&miss, n);
            let imp = match form {
                ImpForm::Truncated => truncated,
                ImpForm::Normalized => truncated / (q.clone() * geometric_sum(&miss, n)),
            };
            Ok((imp, nop))
        }
    }
}

pub fn imp_and_nop<T: Scalar>(
    kernel: &NeighbourKernel<T>,
    k: i64,
    size: NeighbourhoodSize,
    form: ImpForm,
) -> Result<(T, T)> {
    let q = kernel.pn_less(k)?;
    imp_and_nop_from(&q, size, form).map_err(|e| match e {
        Error::DeadEnd(_) => Error::DeadEnd(k),
        e => e,
    })
}

/// `Σ_{m=1}^{n} m x^{m-1}`.
fn weighted_geometric_sum<T: Scalar>(x: &T, n: u64) -> T {
    const DIRECT: u64 = 1 << 16;
    if n <= DIRECT {
        let mut acc = T::zero();
        let mut pw = T::one();
        for m in 1..=n {
            acc += T::from_count(m) * pw.clone();
            pw *= x.clone();
        }
        acc
    } else {
        // (S_n(x) - n x^n) / (1 - x)
        (geometric_sum(x, n) - T::from_count(n) * powu(x, n)) / (T::one() - x.clone())
    }
}

/// Per-level coefficients of `steps(j) = A(j) + (1 - D(j)) lbd` for one target
/// and neighbourhood size. They do not depend on the starting cost.
#[derive(Debug, Clone)]
pub struct DescentCoefficients<T> {
    k_opt: i64,
    target: i64,
    /// `A(j)`: expected steps spent before any restart.
    a: Vec<T>,
    /// `D(j)`: probability of reaching the target without restarting.
    d: Vec<T>,
}

impl<T: Scalar> DescentCoefficients<T> {
    /// Ascending recursion over `j = k_opt ..= upto`.
    pub fn compute(
        kernel: &NeighbourKernel<T>,
        target: i64,
        upto: i64,
        size: NeighbourhoodSize,
        form: ImpForm,
    ) -> Result<Self> {
        let range = kernel.range();
        let k_opt = range.k_opt();
        let upto = upto.min(range.k_max());
        let len = (upto - k_opt + 1).max(0) as usize;
        let mut a: Vec<T> = Vec::with_capacity(len);
        let mut d: Vec<T> = Vec::with_capacity(len);
        for j in k_opt..=upto {
            let (aj, dj) = if j <= target {
                (T::zero(), T::one())
            } else if !kernel.has_row(j) {
                // no points at this level: never started from, never reached
                (T::zero(), T::zero())
            } else {
                let q = kernel.pn_less(j)?;
                if !positive(&q) {
                    match size {
                        NeighbourhoodSize::Infinite => return Err(Error::DeadEnd(j)),
                        NeighbourhoodSize::Finite(n) => (T::from_count(n), T::zero()),
                    }
                } else {
                    let (imp, nop) = imp_and_nop_from(&q, size, form)?;
                    let succ = match size {
                        NeighbourhoodSize::Infinite => T::one(),
                        NeighbourhoodSize::Finite(n) => q.clone() * geometric_sum(&(T::one() - q.clone()), n),
                    };
                    let mut sum_a = T::zero();
                    let mut sum_d = kernel.pn(j, k_opt) / q.clone();
                    for i in k_opt + 1..j {
                        let w = kernel.pn(j, i);
                        if positive(&w) {
                            let idx = (i - k_opt) as usize;
                            let w = w / q.clone();
                            sum_a += w.clone() * a[idx].clone();
                            sum_d += w * d[idx].clone();
                        }
                    }
                    let fail = match size {
                        NeighbourhoodSize::Infinite => T::zero(),
                        NeighbourhoodSize::Finite(n) => nop * T::from_count(n),
                    };
                    (fail + succ.clone() * (imp + sum_a), succ * sum_d)
                }
            };
            a.push(aj);
            d.push(dj);
        }
        Ok(Self {
            k_opt,
            target,
            a,
            d,
        })
    }

    fn idx(&self, j: i64) -> usize {
        (j - self.k_opt) as usize
    }

    /// Highest level covered.
    pub fn upto(&self) -> i64 {
        self.k_opt + self.a.len() as i64 - 1
    }

    /// `lbd(k,t,n)` from the closed-form solution of the restart equation.
    pub fn lbd(&self, dist: &CostDistribution<T>, start: i64) -> Result<T> {
        if start < self.target {
            return Err(Error::BadTarget {
                start,
                target: self.target,
            });
        }
        if start > self.upto() {
            return Err(Error::InvalidSpec(format!(
                "coefficients cover costs up to {}, not {start}",
                self.upto()
            )));
        }
        // multiplied through by p^<(k+1): lbd = (1 + Σ p(j) A(j)) / Σ p(j) D(j)
        blind_steps(dist, start)?;
        let mut num = T::one();
        let mut den = T::zero();
        for j in self.k_opt..=start {
            let pj = dist.p(j);
            if !positive(&pj) {
                continue;
            }
            num += pj.clone() * self.a[self.idx(j)].clone();
            den += pj * self.d[self.idx(j)].clone();
        }
        if !positive(&den) {
            return Err(Error::Divergent {
                start,
                target: self.target,
                restart: (T::one() - den / dist.p_less(start + 1)).as_f64(),
            });
        }
        Ok(num / den)
    }

    /// `steps(j) = A(j) + (1 - D(j)) lbd`.
    pub fn steps(&self, j: i64, lbd: &T) -> T {
        let i = self.idx(j);
        self.a[i].clone() + (T::one() - self.d[i].clone()) * lbd.clone()
    }
}

pub fn lbd_steps<T: Scalar>(
    dist: &CostDistribution<T>,
    kernel: &NeighbourKernel<T>,
    spec: DescentSpec,
    form: ImpForm,
) -> Result<DescentResult<T>> {
    check_pair(dist, kernel)?;
    if spec.target > spec.start {
        return Err(Error::BadTarget {
            start: spec.start,
            target: spec.target,
        });
    }
    let blind = blind_steps(dist, spec.target)?;
    let coef = DescentCoefficients::compute(kernel, spec.target, spec.start, spec.size, form)?;
    let lbd = coef.lbd(dist, spec.start)?;
    let steps = (dist.k_opt()..=spec.start).map(|j| (j, coef.steps(j, &lbd))).collect();
    Ok(DescentResult {
        spec,
        savings: (blind.clone() - lbd.clone()) / blind.clone(),
        beneficial: at_least(&blind, &lbd),
        blind_steps: blind,
        lbd_steps: lbd,
        steps,
    })
}

fn check_pair<T: Scalar>(dist: &CostDistribution<T>, kernel: &NeighbourKernel<T>) -> Result<()> {
    if dist.range() != kernel.range() {
        return Err(Error::RangeMismatch {
            dist: (dist.k_opt(), dist.k_max()),
            kernel: (kernel.range().k_opt(), kernel.range().k_max()),
        });
    }
    Ok(())
}

/// Savings of local blind descent over blind search for each starting cost.
#[derive(Debug, Clone, PartialEq)]
pub struct SavingsScan<T> {
    pub target: i64,
    /// `None` where descent from that start diverges.
    pub curve: Vec<(i64, Option<T>)>,
    pub best_k: Option<i64>,
    pub best_savings: Option<T>,
}

/// Evaluates `lbd(k,t,n)` for every `k` in `t+1 ..= k_mod`.
pub fn savings_scan<T: Scalar>(
    dist: &CostDistribution<T>,
    kernel: &NeighbourKernel<T>,
    t: i64,
    size: NeighbourhoodSize,
    form: ImpForm,
) -> Result<SavingsScan<T>> {
    check_pair(dist, kernel)?;
    if !dist.range().contains(t) {
        return Err(Error::InvalidSpec(format!(
            "target {t} outside {}..={}",
            dist.k_opt(),
            dist.k_max()
        )));
    }
    let blind = blind_steps(dist, t)?;
    let top = dist.k_mod().max(t + 1).min(dist.k_max());
    let coef = DescentCoefficients::compute(kernel, t, top, size, form)?;
    let mut curve = Vec::new();
    let mut best: Option<(i64, T)> = None;
    for k in t + 1..=top {
        let saving = match coef.lbd(dist, k) {
            Ok(l) => Some((blind.clone() - l) / blind.clone()),
            Err(Error::Divergent { .. }) => None,
            Err(e) => return Err(e),
        };
        if let Some(s) = &saving {
            if best.as_ref().is_none_or(|(_, b)| s > b) {
                best = Some((k, s.clone()));
            }
        }
        curve.push((k, saving));
    }
    let (best_k, best_savings) = best.map_or((None, None), |(k, s)| (Some(k), Some(s)));
    Ok(SavingsScan {
        target: t,
        curve,
        best_k,
        best_savings,
    })
}

/// `steps(j,t)` for `j = k_opt ..= k` with an unbounded neighbourhood;
/// `None` for levels that cannot be reached from `k`.
pub fn steps_infinite_table<T: Scalar>(
    dist: &CostDistribution<T>,
    kernel: &NeighbourKernel<T>,
    k: i64,
    t: i64,
) -> Result<Vec<Option<T>>> {
    check_pair(dist, kernel)?;
    let k_opt = dist.k_opt();
    let len = (k - k_opt + 1).max(0) as usize;
    // levels a descent from k can visit
    let mut reach = vec![false; len];
    if len > 0 {
        reach[len - 1] = true;
    }
    for j in (k_opt..=k).rev() {
        if j <= t || !reach[(j - k_opt) as usize] || !kernel.has_row(j) {
            continue;
        }
        for i in k_opt..j {
            if positive(&kernel.pn(j, i)) {
                reach[(i - k_opt) as usize] = true;
            }
        }
    }
    let mut steps: Vec<Option<T>> = Vec::with_capacity(len);
    for j in k_opt..=k {
        let idx = (j - k_opt) as usize;
        if j <= t {
            steps.push(Some(T::zero()));
            continue;
        }
        if !reach[idx] || !kernel.has_row(j) {
            steps.push(None);
            continue;
        }
        let q = kernel.pn_less(j)?;
        if !positive(&q) {
            return Err(Error::DeadEnd(j));
        }
        let mut acc = T::one();
        for i in k_opt..j {
            let w = kernel.pn(j, i);
            if positive(&w) {
                let s = steps[(i - k_opt) as usize].clone().expect("reachable from a reachable level");
                acc += w * s;
            }
        }
        steps.push(Some(acc / q));
    }
    Ok(steps)
}

/// `steps(k,t)` with an unbounded neighbourhood:
/// `(1 + Σ_{k_opt ≤ i < k} pn(k,i) steps(i,t)) / pn^<(k)`.
pub fn steps_infinite<T: Scalar>(
    dist: &CostDistribution<T>,
    kernel: &NeighbourKernel<T>,
    k: i64,
    t: i64,
) -> Result<T> {
    if k <= t {
        return Ok(T::zero());
    }
    let table = steps_infinite_table(dist, kernel, k, t)?;
    Ok(table.last().cloned().flatten().expect("start level is reachable"))
}

/// Comparison landscape with probabilities flattened to `p(t)` above the target
/// and an exactly unbiased kernel `pn^u(j,i) = p^u(i) r(j, j-i)`.
#[derive(Debug, Clone)]
pub struct UniformBound<T> {
    k_opt: i64,
    t: i64,
    /// `imp^u(j)` for `j = t+1 ..= k`.
    imp: Vec<T>,
    /// `steps^u(j,t)` for `j = k_opt ..= k`.
    steps: Vec<T>,
}

impl<T: Scalar> UniformBound<T> {
    pub fn compute(dist: &CostDistribution<T>, nweights: &NWeightTable<T>, k: i64, t: i64) -> Result<Self> {
        if t > k {
            return Err(Error::BadTarget { start: k, target: t });
        }
        let k_opt = dist.k_opt();
        let pt = dist.p(t);
        let pu = |i: i64| if i <= t { dist.p(i) } else { pt.clone() };
        let mut imp = Vec::new();
        let mut steps: Vec<T> = Vec::new();
        for j in k_opt..=k {
            if j <= t {
                steps.push(T::zero());
                continue;
            }
            let mut mass = T::zero();
            let mut acc = T::one();
            for i in k_opt..j {
                let w = pu(i) * nweights.r_or_zero(j, j - i);
                mass += w.clone();
                acc += w * steps[(i - k_opt) as usize].clone();
            }
            if !positive(&mass) {
                return Err(Error::DeadEnd(j));
            }
            let imp_j = T::one() / mass;
            steps.push(imp_j.clone() * acc);
            imp.push(imp_j);
        }
        Ok(Self { k_opt, t, imp, steps })
    }

    pub fn imp(&self, j: i64) -> Option<T> {
        usize::try_from(j - self.t - 1).ok().and_then(|i| self.imp.get(i).cloned())
    }

    pub fn steps(&self, j: i64) -> Option<T> {
        usize::try_from(j - self.k_opt).ok().and_then(|i| self.steps.get(i).cloned())
    }
}

/// `steps^u(k,t)`.
pub fn steps_u<T: Scalar>(dist: &CostDistribution<T>, nweights: &NWeightTable<T>, k: i64, t: i64) -> Result<T> {
    Ok(UniformBound::compute(dist, nweights, k, t)?
        .steps(k)
        .unwrap_or_else(T::zero))
}

/// Hypotheses and outcome of the unbounded-neighbourhood descent bound at one `(k, t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DescentBoundCheck<T> {
    pub k: i64,
    pub t: i64,
    /// `r̄(k,t) ≥ p^<(t+1) / p(t)`.
    pub rbar_condition: bool,
    /// `p` nondecreasing on `k_opt ..= k`.
    pub below_mode: bool,
    pub full_nsc: bool,
    pub steps: Option<T>,
    pub blind: T,
    /// `steps(k,t) ≤ blind(t)`, evaluated directly.
    pub conclusion: bool,
}

impl<T> DescentBoundCheck<T> {
    pub fn hypotheses(&self) -> bool {
        self.rbar_condition && self.below_mode && self.full_nsc
    }
}

/// Shares the Full NSC table across many `(k, t)` checks.
pub struct DescentBoundContext<'a, T> {
    dist: &'a CostDistribution<T>,
    kernel: &'a NeighbourKernel<T>,
    nweights: &'a NWeightTable<T>,
    full_nsc: Vec<(i64, bool)>,
}

impl<'a, T: Scalar> DescentBoundContext<'a, T> {
    pub fn new(dist: &'a CostDistribution<T>, kernel: &'a NeighbourKernel<T>, nweights: &'a NWeightTable<T>) -> Self {
        Self {
            dist,
            kernel,
            nweights,
            full_nsc: full_nsc_levels(dist, kernel, nweights),
        }
    }

    pub fn full_nsc(&self, k: i64) -> bool {
        self.full_nsc
            .iter()
            .take_while(|(lvl, _)| *lvl <= k)
            .last()
            .is_some_and(|(_, ok)| *ok)
    }

    /// Checks every `k` in `t ..= k_top` against a single steps table.
    pub fn scan(&self, t: i64, k_top: i64) -> Result<Vec<DescentBoundCheck<T>>> {
        let blind = blind_steps(self.dist, t)?;
        let table = match steps_infinite_table(self.dist, self.kernel, k_top, t) {
            Ok(tab) => Some(tab),
            Err(Error::DeadEnd(_)) => None,
            Err(e) => return Err(e),
        };
        (t..=k_top)
            .map(|k| {
                let steps = match &table {
                    // reachability from k_top covers every level below it only
                    // when the table is complete, so fall back to a direct solve
                    Some(tab) => match tab[(k - self.dist.k_opt()) as usize].clone() {
                        Some(s) => Some(s),
                        None => self.direct(k, t)?,
                    },
                    None => self.direct(k, t)?,
                };
                Ok(self.assemble(k, t, steps, blind.clone()))
            })
            .collect()
    }

    pub fn check(&self, k: i64, t: i64) -> Result<DescentBoundCheck<T>> {
        let blind = blind_steps(self.dist, t)?;
        let steps = self.direct(k, t)?;
        Ok(self.assemble(k, t, steps, blind))
    }

    fn direct(&self, k: i64, t: i64) -> Result<Option<T>> {
        match steps_infinite(self.dist, self.kernel, k, t) {
            Ok(s) => Ok(Some(s)),
            Err(Error::DeadEnd(_)) => Ok(None),
            Err(e) => Err(e),
        }
    }

    fn assemble(&self, k: i64, t: i64, steps: Option<T>, blind: T) -> DescentBoundCheck<T> {
        let rbar_condition = if k <= t {
            true
        } else {
            let pt = self.dist.p(t);
            positive(&pt)
                && self
                    .nweights
                    .rbar_to(k, t)
                    .is_some_and(|r| at_least(&(r * pt), &self.dist.p_less(t + 1)))
        };
        let conclusion = steps.as_ref().is_some_and(|s| at_least(&blind, s));
        DescentBoundCheck {
            k,
            t,
            rbar_condition,
            below_mode: k <= self.dist.monotone_end(),
            full_nsc: self.full_nsc(k),
            steps,
            blind,
            conclusion,
        }
    }
}

pub fn descent_bound_check<T: Scalar>(
    dist: &CostDistribution<T>,
    kernel: &NeighbourKernel<T>,
    nweights: &NWeightTable<T>,
    k: i64,
    t: i64,
) -> Result<DescentBoundCheck<T>> {
    DescentBoundContext::new(dist, kernel, nweights).check(k, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::landscape::{compute_nweights, CostRange};
    use crate::models::{benchmark_space, lipschitz_space, BenchmarkClassSpec, LipschitzSpaceSpec};
    use num_rational::BigRational;

    const N50: NeighbourhoodSize = NeighbourhoodSize::Finite(50);

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn blind_on_uniform() {
        let d = CostDistribution::<BigRational>::uniform(CostRange::new(0, 200).unwrap());
        assert_eq!(blind_steps(&d, 10).unwrap(), q(201, 11));
        assert_eq!(blind_steps(&d, 199).unwrap(), q(201, 200));
        assert!(matches!(blind_steps(&d, -1), Err(Error::UnreachableTarget(-1))));
    }

    #[test]
    fn imp_nop_small_cases() {
        let two = NeighbourhoodSize::Finite(2);
        let (imp, nop) = imp_and_nop_from(&q(1, 2), two, ImpForm::Truncated).unwrap();
        assert_eq!((imp, nop), (q(1, 1), q(1, 4)));
        let (imp, _) = imp_and_nop_from(&q(1, 2), two, ImpForm::Normalized).unwrap();
        assert_eq!(imp, q(4, 3));
        for form in [ImpForm::Truncated, ImpForm::Normalized] {
            let (imp, nop) = imp_and_nop_from(&q(1, 1), NeighbourhoodSize::Finite(7), form).unwrap();
            assert_eq!((imp, nop), (q(1, 1), q(0, 1)));
        }
        let (imp, nop) = imp_and_nop_from(&q(1, 4), NeighbourhoodSize::Infinite, ImpForm::Truncated).unwrap();
        assert_eq!((imp, nop), (q(4, 1), q(0, 1)));
        assert!(imp_and_nop_from(&q(0, 1), NeighbourhoodSize::Infinite, ImpForm::Normalized).is_err());
    }

    #[test]
    fn imp_matches_term_by_term_sum() {
        let (d, k) = benchmark_space::<f64>(&BenchmarkClassSpec::default(), 7, N50).unwrap();
        let _ = d;
        let qq = k.pn_less(23).unwrap();
        let mut expect = 0.0;
        for m in 1..=50 {
            expect += m as f64 * (1.0 - qq).powi(m - 1) * qq;
        }
        let (imp, nop) = imp_and_nop(&k, 23, N50, ImpForm::Truncated).unwrap();
        assert!((imp - expect).abs() < 1e-12 * expect);
        assert!((nop - (1.0 - qq).powi(50)).abs() < 1e-15);
        let huge = NeighbourhoodSize::Finite(1 << 20);
        let (imp, _) = imp_and_nop_from(&0.001f64, huge, ImpForm::Normalized).unwrap();
        assert!((imp - 1000.0).abs() < 1e-6);
    }

    #[test]
    fn start_at_target_is_blind() {
        let (d, k) = benchmark_space::<f64>(&BenchmarkClassSpec::default(), 7, N50).unwrap();
        let spec = DescentSpec {
            start: 10,
            target: 10,
            size: N50,
        };
        let r = lbd_steps(&d, &k, spec, ImpForm::Normalized).unwrap();
        assert_eq!(r.lbd_steps, r.blind_steps);
        assert_eq!(r.savings, 0.0);
    }

    /// Substitutes the solved total back into the recursion as written.
    #[test]
    fn solved_total_satisfies_recursion() {
        let (d, k) = benchmark_space::<f64>(&BenchmarkClassSpec::default(), 9, N50).unwrap();
        for form in [ImpForm::Normalized, ImpForm::Truncated] {
            let spec = DescentSpec {
                start: 40,
                target: 10,
                size: N50,
            };
            let r = lbd_steps(&d, &k, spec, form).unwrap();
            let s = |j: i64| r.steps[j as usize].1;
            for j in 11..=40 {
                let qj = k.pn_less(j).unwrap();
                let (imp, nop) = imp_and_nop(&k, j, N50, form).unwrap();
                let inner: f64 = (1..j).map(|i| k.pn(j, i) / qj * s(i)).sum();
                let expect = nop * (50.0 + r.lbd_steps) + (1.0 - nop) * (imp + inner);
                assert!((s(j) - expect).abs() <= 1e-9 * expect, "j={j}");
            }
            let total: f64 = 1.0 / d.p_less(41)
                + (0..=40).map(|j| d.p(j) / d.p_less(41) * s(j)).sum::<f64>();
            assert!((total - r.lbd_steps).abs() <= 1e-9 * total);
        }
    }

    #[test]
    fn exact_and_float_agree() {
        let (de, ke) = benchmark_space::<BigRational>(&BenchmarkClassSpec::default(), 5, N50).unwrap();
        let (df, kf) = benchmark_space::<f64>(&BenchmarkClassSpec::default(), 5, N50).unwrap();
        let spec = DescentSpec {
            start: 30,
            target: 12,
            size: N50,
        };
        let e = lbd_steps(&de, &ke, spec, ImpForm::Normalized).unwrap();
        let f = lbd_steps(&df, &kf, spec, ImpForm::Normalized).unwrap();
        let ev = e.lbd_steps.as_f64();
        assert!((ev - f.lbd_steps).abs() < 1e-10 * ev);
    }

    #[test]
    fn stuck_levels_restart_or_dead_end() {
        // cost 2 has no improving neighbours
        let range = CostRange::new(0, 3).unwrap();
        let d = CostDistribution::<f64>::from_counts(range, &[1, 1, 1, 1]).unwrap();
        let k = NeighbourKernel::new(
            range,
            NeighbourhoodSize::Finite(3),
            vec![
                Some(vec![1.0, 0.0, 0.0, 0.0]),
                Some(vec![0.5, 0.5, 0.0, 0.0]),
                Some(vec![0.0, 0.0, 0.5, 0.5]),
                Some(vec![0.0, 0.0, 1.0, 0.0]),
            ],
        )
        .unwrap();
        assert!(matches!(steps_infinite(&d, &k, 3, 0), Err(Error::DeadEnd(2))));
        // from 1 the stuck level is never visited
        assert!((steps_infinite(&d, &k, 1, 0).unwrap() - 2.0).abs() < 1e-12);
        let spec = DescentSpec {
            start: 3,
            target: 0,
            size: NeighbourhoodSize::Finite(3),
        };
        let r = lbd_steps(&d, &k, spec, ImpForm::Normalized).unwrap();
        assert!(r.lbd_steps > r.blind_steps);
    }

    #[test]
    fn divergent_when_no_start_reaches_target() {
        let range = CostRange::new(0, 2).unwrap();
        let d = CostDistribution::<f64>::from_counts(range, &[1, 1, 1]).unwrap();
        let k = NeighbourKernel::new(
            range,
            NeighbourhoodSize::Finite(2),
            vec![
                Some(vec![1.0, 0.0, 0.0]),
                Some(vec![0.0, 1.0, 0.0]),
                Some(vec![0.0, 1.0, 0.0]),
            ],
        )
        .unwrap();
        let spec = DescentSpec {
            start: 2,
            target: 0,
            size: NeighbourhoodSize::Finite(2),
        };
        // a level nothing can leave except by restart
        let r = lbd_steps(&d, &k, spec, ImpForm::Normalized).unwrap();
        assert!(r.steps[1].1 > r.lbd_steps);
        let coef = DescentCoefficients::compute(&k, 0, 2, spec.size, ImpForm::Normalized).unwrap();
        let no_target = CostDistribution::<f64>::new(range, vec![0.0, 0.5, 0.5]).unwrap();
        assert!(matches!(coef.lbd(&no_target, 2), Err(Error::Divergent { .. })));
    }

    #[test]
    fn infinite_steps_base_case() {
        let (d, k) = lipschitz_space(&LipschitzSpaceSpec::<f64>::uniform(200, 10).unwrap()).unwrap();
        assert_eq!(steps_infinite(&d, &k, 5, 5).unwrap(), 0.0);
        let one = steps_infinite(&d, &k, 6, 5).unwrap();
        assert!((one - 1.0 / k.pn_less(6).unwrap()).abs() < 1e-12);
        let w = compute_nweights(&d, &k).unwrap();
        let u = UniformBound::compute(&d, &w, 6, 5).unwrap();
        assert_eq!(u.steps(6), u.imp(6));
        assert_eq!(steps_u(&d, &w, 5, 5).unwrap(), 0.0);
    }

    #[test]
    fn savings_scan_covers_starts_to_mode() {
        let (d, k) = benchmark_space::<f64>(&BenchmarkClassSpec::default(), 7, N50).unwrap();
        let s = savings_scan(&d, &k, 10, N50, ImpForm::Normalized).unwrap();
        assert_eq!(s.curve.first().unwrap().0, 11);
        assert_eq!(s.curve.last().unwrap().0, 100);
        let best = s.best_savings.unwrap();
        assert!(s.curve.iter().all(|(_, v)| v.unwrap() <= best));
    }

    #[test]
    fn descent_bound_trivial_at_target() {
        let (d, k) = benchmark_space::<f64>(&BenchmarkClassSpec::default(), 7, NeighbourhoodSize::Infinite).unwrap();
        let w = compute_nweights(&d, &k).unwrap();
        let c = descent_bound_check(&d, &k, &w, 20, 20).unwrap();
        assert!(c.conclusion);
        assert_eq!(c.steps, Some(0.0));
    }
}
