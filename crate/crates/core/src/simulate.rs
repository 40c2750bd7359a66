//! Monte Carlo runs of blind search and local blind descent.
//!
//! Every run draws from its own ChaCha8 stream (stream index = run index) and
//! per-run step counts are reduced as exact integers, so results do not
//! depend on the number of threads.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use rand::distr::weighted::WeightedIndex;
use rand_distr::Geometric;
use rand::distr::Distribution;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::descent::DescentSpec;
use crate::error::{Error, Result};
use crate::landscape::{CostDistribution, NeighbourKernel, NeighbourhoodSize};
use crate::models::tsp::{two_opt_moves, TspInstance};
use crate::scalar::Scalar;

pub const DEFAULT_STEP_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimConfig {
    pub runs: u64,
    pub seed: u64,
    pub spec: DescentSpec,
    pub step_cap: u64,
}

impl SimConfig {
    pub fn new(runs: u64, seed: u64, spec: DescentSpec) -> Self {
        Self {
            runs,
            seed,
            spec,
            step_cap: DEFAULT_STEP_CAP,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.runs == 0 || self.step_cap == 0 {
            return Err(Error::InvalidSpec("runs and step cap must be positive".into()));
        }
        if self.spec.target > self.spec.start {
            return Err(Error::BadTarget {
                start: self.spec.start,
                target: self.spec.target,
            });
        }
        Ok(())
    }

    fn rng(&self, run: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(run);
        rng
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimResult {
    pub runs: u64,
    /// Mean over runs that finished under the cap.
    pub mean_steps: f64,
    /// Sample standard deviation over the square root of finished runs.
    pub std_error: f64,
    pub capped_runs: u64,
    /// Share of descent phases that reached the target without a restart;
    /// for blind search, the share of runs that finished.
    pub empirical_success_rate: f64,
}

impl SimResult {
    /// `|mean - expected| ≤ 3σ`.
    pub fn agrees_with(&self, expected: f64) -> bool {
        (self.mean_steps - expected).abs() <= 3.0 * self.std_error
    }
}

/// Phase of a step in a run trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    Blind,
    Descent,
}

impl Phase {
    pub fn as_str(&self) -> &'static str {
        match self {
            Phase::Blind => "blind",
            Phase::Descent => "descent",
        }
    }
}

/// One row of a run log. A descent row is a single probe; a blind row stands
/// for every draw since the previous row and carries the landing cost, so
/// `step` is always the running total of evaluations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TraceRow {
    pub run: u64,
    pub phase: Phase,
    pub step: u64,
    pub cost: i64,
}

#[derive(Debug, Clone, Copy, Default)]
struct RunOutcome {
    steps: u64,
    capped: bool,
    descents: u64,
    successes: u64,
}

/// Exact integer moments, merged in any order with the same result.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    count: u64,
    sum: u128,
    sum_sq: u128,
    capped: u64,
    descents: u64,
    successes: u64,
}

impl Moments {
    fn add(mut self, o: RunOutcome) -> Self {
        if o.capped {
            self.capped += 1;
        } else {
            self.count += 1;
            self.sum += u128::from(o.steps);
            self.sum_sq += u128::from(o.steps) * u128::from(o.steps);
        }
        self.descents += o.descents;
        self.successes += o.successes;
        self
    }

    fn merge(self, o: Self) -> Self {
        Self {
            count: self.count + o.count,
            sum: self.sum + o.sum,
            sum_sq: self.sum_sq + o.sum_sq,
            capped: self.capped + o.capped,
            descents: self.descents + o.descents,
            successes: self.successes + o.successes,
        }
    }

    fn finish(self, runs: u64, blind_only: bool) -> SimResult {
        let n = self.count;
        let mean = if n > 0 { self.sum as f64 / n as f64 } else { f64::NAN };
        let std_error = if n > 1 {
            let n128 = u128::from(n);
            // n Σx² - (Σx)² is exact in u128
            let spread = (n128 * self.sum_sq - self.sum * self.sum) as f64;
            (spread / (n as f64 * (n - 1) as f64) / n as f64).sqrt()
        } else {
            0.0
        };
        let empirical_success_rate = if blind_only {
            n as f64 / runs as f64
        } else if self.descents > 0 {
            self.successes as f64 / self.descents as f64
        } else {
            f64::NAN
        };
        SimResult {
            runs,
            mean_steps: mean,
            std_error,
            capped_runs: self.capped,
            empirical_success_rate,
        }
    }
}

/// Sampler over the costs of a distribution or of one kernel row.
struct CostSampler {
    base: i64,
    index: WeightedIndex<f64>,
}

impl CostSampler {
    fn new<T: Scalar>(k_opt: i64, weights: &[T]) -> Option<Self> {
        let w: Vec<f64> = weights.iter().map(Scalar::as_f64).collect();
        WeightedIndex::new(&w).ok().map(|index| Self { base: k_opt, index })
    }

    #[inline]
    fn draw(&self, rng: &mut impl Rng) -> i64 {
        self.base + self.index.sample(rng) as i64
    }
}

struct Sink<'a> {
    run: u64,
    rows: Option<&'a mut Vec<TraceRow>>,
}

impl Sink<'_> {
    #[inline]
    fn record(&mut self, phase: Phase, step: u64, cost: i64) {
        if let Some(rows) = self.rows.as_deref_mut() {
            rows.push(TraceRow {
                run: self.run,
                phase,
                step,
                cost,
            });
        }
    }
}

/// Blind search down to `bound`. The number of draws until one lands at or
/// below `bound` is geometric, so it is sampled in one go, followed by the
/// landing cost from `p` restricted to `..= bound`. This has the same joint
/// law as drawing one point at a time.
struct BlindPhase {
    draws: Geometric,
    landing: CostSampler,
}

impl BlindPhase {
    fn new<T: Scalar>(dist: &CostDistribution<T>, bound: i64) -> Result<Self> {
        let q = dist.p_less(bound + 1).as_f64().min(1.0);
        let upto = ((bound.min(dist.k_max()) - dist.k_opt()) + 1).max(0) as usize;
        let landing = CostSampler::new(dist.k_opt(), &dist.probabilities()[..upto]);
        match (Geometric::new(q), landing) {
            (Ok(draws), Some(landing)) if q > 0.0 => Ok(Self { draws, landing }),
            _ => Err(Error::UnreachableTarget(bound)),
        }
    }

    /// Adds the draws to `steps`; `None` if they would take it past `cap`.
    fn run(&self, steps: &mut u64, cap: u64, rng: &mut impl Rng, sink: &mut Sink<'_>) -> Option<i64> {
        let draws = self.draws.sample(rng).saturating_add(1);
        if draws > cap - *steps {
            *steps = cap;
            return None;
        }
        *steps += draws;
        let c = self.landing.draw(rng);
        sink.record(Phase::Blind, *steps, c);
        Some(c)
    }
}

fn blind_run(blind: &BlindPhase, cfg: &SimConfig, run: u64, trace: Option<&mut Vec<TraceRow>>) -> RunOutcome {
    let mut rng = cfg.rng(run);
    let mut sink = Sink { run, rows: trace };
    let mut steps = 0;
    let done = blind.run(&mut steps, cfg.step_cap, &mut rng, &mut sink);
    RunOutcome {
        steps,
        capped: done.is_none(),
        ..Default::default()
    }
}

pub fn simulate_blind<T: Scalar>(dist: &CostDistribution<T>, cfg: &SimConfig) -> Result<SimResult> {
    cfg.validate()?;
    let blind = BlindPhase::new(dist, cfg.spec.target)?;
    let m = (0..cfg.runs)
        .into_par_iter()
        .map(|run| blind_run(&blind, cfg, run, None))
        .fold(Moments::default, Moments::add)
        .reduce(Moments::default, Moments::merge);
    Ok(m.finish(cfg.runs, true))
}

struct DescentSamplers {
    blind: BlindPhase,
    k_opt: i64,
    rows: Vec<Option<CostSampler>>,
}

impl DescentSamplers {
    fn new<T: Scalar>(dist: &CostDistribution<T>, kernel: &NeighbourKernel<T>, start: i64) -> Result<Self> {
        if dist.range() != kernel.range() {
            return Err(Error::RangeMismatch {
                dist: (dist.k_opt(), dist.k_max()),
                kernel: (kernel.range().k_opt(), kernel.range().k_max()),
            });
        }
        let blind = BlindPhase::new(dist, start)?;
        let rows = (dist.k_opt()..=start.min(dist.k_max()))
            .map(|j| kernel.row(j).ok().and_then(|row| CostSampler::new(dist.k_opt(), row)))
            .collect();
        Ok(Self {
            blind,
            k_opt: dist.k_opt(),
            rows,
        })
    }

    fn row(&self, j: i64) -> Option<&CostSampler> {
        self.rows.get((j - self.k_opt) as usize)?.as_ref()
    }
}

fn lbd_run(s: &DescentSamplers, cfg: &SimConfig, run: u64, trace: Option<&mut Vec<TraceRow>>) -> RunOutcome {
    let mut rng = cfg.rng(run);
    let mut sink = Sink { run, rows: trace };
    let DescentSpec { target, size, .. } = cfg.spec;
    let cap = cfg.step_cap;
    let mut out = RunOutcome::default();
    'restart: loop {
        let Some(mut cur) = s.blind.run(&mut out.steps, cap, &mut rng, &mut sink) else {
            out.capped = true;
            return out;
        };
        if cur <= target {
            return out;
        }
        out.descents += 1;
        while cur > target {
            let Some(row) = s.row(cur) else { continue 'restart };
            let mut probes = 0u64;
            loop {
                if out.steps >= cap {
                    out.capped = true;
                    return out;
                }
                if let NeighbourhoodSize::Finite(n) = size {
                    if probes == n {
                        continue 'restart;
                    }
                }
                let c = row.draw(&mut rng);
                probes += 1;
                out.steps += 1;
                sink.record(Phase::Descent, out.steps, c);
                if c < cur {
                    cur = c;
                    break;
                }
            }
        }
        out.successes += 1;
        return out;
    }
}

pub fn simulate_lbd<T: Scalar>(
    dist: &CostDistribution<T>,
    kernel: &NeighbourKernel<T>,
    cfg: &SimConfig,
) -> Result<SimResult> {
    cfg.validate()?;
    let s = DescentSamplers::new(dist, kernel, cfg.spec.start)?;
    let m = (0..cfg.runs)
        .into_par_iter()
        .map(|run| lbd_run(&s, cfg, run, None))
        .fold(Moments::default, Moments::add)
        .reduce(Moments::default, Moments::merge);
    Ok(m.finish(cfg.runs, false))
}

/// Step-by-step log of the first `runs` runs of [`simulate_lbd`] with the same
/// configuration; with `start == target` it logs blind search.
pub fn trace_lbd<T: Scalar>(
    dist: &CostDistribution<T>,
    kernel: &NeighbourKernel<T>,
    cfg: &SimConfig,
    runs: u64,
) -> Result<Vec<TraceRow>> {
    cfg.validate()?;
    let s = DescentSamplers::new(dist, kernel, cfg.spec.start)?;
    let mut rows = Vec::new();
    for run in 0..runs.min(cfg.runs) {
        lbd_run(&s, cfg, run, Some(&mut rows));
    }
    Ok(rows)
}

/// Empirical improvement frequency and mean improvement of single probes at `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeStats {
    pub probes: u64,
    pub improve_rate: f64,
    pub improve_rate_se: f64,
    pub mean_gain: f64,
    pub mean_gain_se: f64,
}

pub fn simulate_probes<T: Scalar>(kernel: &NeighbourKernel<T>, k: i64, probes: u64, seed: u64) -> Result<ProbeStats> {
    const CHUNK: u64 = 4096;
    let row = CostSampler::new(kernel.range().k_opt(), kernel.row(k)?)
        .ok_or_else(|| Error::InvalidKernel(format!("row {k} cannot be sampled")))?;
    let (hits, gain, gain_sq) = (0..probes.div_ceil(CHUNK))
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(chunk);
            let todo = CHUNK.min(probes - chunk * CHUNK);
            let mut acc = (0u64, 0u128, 0u128);
            for _ in 0..todo {
                let c = row.draw(&mut rng);
                if c < k {
                    let g = (k - c) as u128;
                    acc.0 += 1;
                    acc.1 += g;
                    acc.2 += g * g;
                }
            }
            acc
        })
        .reduce(|| (0, 0, 0), |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2));
    let n = probes as f64;
    let rate = hits as f64 / n;
    let mean_gain = gain as f64 / n;
    let var_gain = (gain_sq as f64 / n - mean_gain * mean_gain).max(0.0);
    Ok(ProbeStats {
        probes,
        improve_rate: rate,
        improve_rate_se: (rate * (1.0 - rate) / n).sqrt(),
        mean_gain,
        mean_gain_se: (var_gain / n).sqrt(),
    })
}

/// Neighbour probing order on a concrete tour.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Probing {
    /// Independent uniform moves, as in the analytic model.
    #[default]
    WithReplacement,
    /// A random permutation of the moves, so each is tried at most once per level.
    WithoutReplacement,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TspSimResult {
    pub sim: SimResult,
    /// Hash over every run's sequence of evaluated costs, in run order.
    pub trace_hash: u64,
}

/// Local blind descent with real 2-opt moves on `inst`. `cfg.spec.start` and
/// `cfg.spec.target` are absolute tour costs; a level is abandoned after
/// `cfg.spec.size` probes without improvement.
pub fn simulate_tsp_descent(inst: &TspInstance, cfg: &SimConfig, probing: Probing) -> Result<TspSimResult> {
    cfg.validate()?;
    let n = inst.num_cities();
    let moves: Vec<(usize, usize)> = two_opt_moves(n).collect();
    let outcomes: Vec<(RunOutcome, u64)> = (0..cfg.runs)
        .into_par_iter()
        .map(|run| tsp_run(inst, &moves, cfg, probing, run))
        .collect();
    let mut hasher = DefaultHasher::new();
    let mut m = Moments::default();
    for (o, h) in outcomes {
        h.hash(&mut hasher);
        m = m.add(o);
    }
    Ok(TspSimResult {
        sim: m.finish(cfg.runs, false),
        trace_hash: hasher.finish(),
    })
}

fn tsp_run(inst: &TspInstance, moves: &[(usize, usize)], cfg: &SimConfig, probing: Probing, run: u64) -> (RunOutcome, u64) {
    let mut rng = cfg.rng(run);
    let mut hasher = DefaultHasher::new();
    let DescentSpec { start, target, size } = cfg.spec;
    let limit = match size {
        NeighbourhoodSize::Finite(k) => k,
        NeighbourhoodSize::Infinite => u64::MAX,
    };
    let mut out = RunOutcome::default();
    let mut tour: Vec<usize> = (0..inst.num_cities()).collect();
    let mut order: Vec<usize> = (0..moves.len()).collect();
    'restart: loop {
        let mut cost = loop {
            if out.steps >= cfg.step_cap {
                out.capped = true;
                return (out, hasher.finish());
            }
            tour.shuffle(&mut rng);
            let c = inst.tour_cost(&tour);
            out.steps += 1;
            c.hash(&mut hasher);
            if c <= start {
                break c;
            }
        };
        if cost <= target {
            return (out, hasher.finish());
        }
        out.descents += 1;
        while cost > target {
            if probing == Probing::WithoutReplacement {
                order.shuffle(&mut rng);
            }
            let mut probes = 0u64;
            loop {
                let exhausted = probing == Probing::WithoutReplacement && probes as usize == moves.len();
                if probes == limit || exhausted {
                    continue 'restart;
                }
                if out.steps >= cfg.step_cap {
                    out.capped = true;
                    return (out, hasher.finish());
                }
                let (i, j) = match probing {
                    Probing::WithReplacement => moves[rng.random_range(0..moves.len())],
                    Probing::WithoutReplacement => moves[order[probes as usize]],
                };
                probes += 1;
                out.steps += 1;
                let delta = inst.two_opt_delta(&tour, i, j);
                (cost + delta).hash(&mut hasher);
                if delta < 0 {
                    tour[i + 1..=j].reverse();
                    cost += delta;
                    break;
                }
            }
        }
        out.successes += 1;
        return (out, hasher.finish());
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::descent::blind_steps;
    use crate::landscape::CostRange;
    use crate::models::{lipschitz_space, LipschitzSpaceSpec};

    fn spec(start: i64, target: i64, n: u64) -> DescentSpec {
        DescentSpec {
            start,
            target,
            size: NeighbourhoodSize::Finite(n),
        }
    }

    #[test]
    fn blind_mean_matches_geometric() {
        let d = CostDistribution::<f64>::uniform(CostRange::new(0, 200).unwrap());
        let cfg = SimConfig::new(20_000, 3, spec(10, 10, 1));
        let r = simulate_blind(&d, &cfg).unwrap();
        assert!(r.agrees_with(blind_steps(&d, 10).unwrap()), "{r:?}");
        assert_eq!(r.capped_runs, 0);
        assert_eq!(r, simulate_blind(&d, &cfg).unwrap());
    }

    #[test]
    fn caps_are_excluded() {
        let d = CostDistribution::<f64>::uniform(CostRange::new(0, 200).unwrap());
        let mut cfg = SimConfig::new(500, 1, spec(0, 0, 1));
        cfg.step_cap = 5;
        let r = simulate_blind(&d, &cfg).unwrap();
        assert!(r.capped_runs > 400);
        assert!(r.mean_steps <= 5.0);
    }

    #[test]
    fn trace_accounts_for_every_step() {
        let (d, k) = lipschitz_space(&LipschitzSpaceSpec::<f64>::uniform(60, 5).unwrap()).unwrap();
        let cfg = SimConfig::new(50, 9, spec(30, 3, 4));
        let rows = trace_lbd(&d, &k, &cfg, 50).unwrap();
        let s = DescentSamplers::new(&d, &k, 30).unwrap();
        for run in 0..50 {
            let mine: Vec<_> = rows.iter().filter(|r| r.run == run).collect();
            let out = lbd_run(&s, &cfg, run, None);
            assert_eq!(mine.last().unwrap().step, out.steps);
            assert_eq!(mine[0].phase, Phase::Blind);
            for w in mine.windows(2) {
                match w[1].phase {
                    Phase::Descent => assert_eq!(w[1].step, w[0].step + 1),
                    Phase::Blind => assert!(w[1].step > w[0].step && w[1].cost <= 30),
                }
            }
            assert!(mine.last().unwrap().cost <= 3);
        }
    }

    #[test]
    fn probes_estimate_improvement_rate() {
        let (_, k) = lipschitz_space(&LipschitzSpaceSpec::<f64>::uniform(200, 10).unwrap()).unwrap();
        let s = simulate_probes(&k, 30, 200_000, 4).unwrap();
        assert!((s.improve_rate - 10.0 / 21.0).abs() <= 3.0 * s.improve_rate_se);
        assert!((s.mean_gain - 55.0 / 21.0).abs() <= 3.0 * s.mean_gain_se);
    }

    #[test]
    fn tsp_descent_is_reproducible() {
        let inst = TspInstance::generate(10, 2).unwrap();
        let size = NeighbourhoodSize::Finite(inst.neighbourhood_size());
        let cfg = SimConfig::new(200, 5, DescentSpec { start: 140, target: 110, size });
        let a = simulate_tsp_descent(&inst, &cfg, Probing::WithReplacement).unwrap();
        let b = simulate_tsp_descent(&inst, &cfg, Probing::WithReplacement).unwrap();
        assert_eq!(a, b);
        assert!(a.sim.mean_steps.is_finite());
        let c = simulate_tsp_descent(&inst, &cfg, Probing::WithoutReplacement).unwrap();
        assert_ne!(a.trace_hash, c.trace_hash);
    }
}
