//! Symmetric TSP instances with the 2-opt neighbourhood.
//!
//! Landscapes are built either by visiting every tour (small instances) or by
//! sampling uniform random tours; in both cases every 2-opt neighbour of a
//! visited tour contributes to the kernel row of that tour's cost.

use std::io::{BufRead, Write};

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_xoshiro::SplitMix64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::landscape::{CostDistribution, CostRange, NeighbourKernel, NeighbourhoodSize};
use crate::scalar::Scalar;

pub const MIN_EDGE: u32 = 1;
pub const MAX_EDGE: u32 = 25;
pub const MAX_ENUMERATION_CITIES: usize = 12;

/// Largest change in tour cost a single 2-opt move can make.
const MAX_DELTA: i64 = 2 * (MAX_EDGE - MIN_EDGE) as i64;
const DELTA_SLOTS: usize = 2 * MAX_DELTA as usize + 1;
const SAMPLE_CHUNK: usize = 1024;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TspInstance {
    num_cities: usize,
    seed: u64,
    /// Full symmetric matrix, row-major.
    edges: Vec<u32>,
}

impl TspInstance {
    /// Random instance with edge lengths `1..=25`, filled row by row over the
    /// strict lower triangle from a SplitMix64 stream (`1 + x mod 25`).
    pub fn generate(num_cities: usize, seed: u64) -> Result<Self> {
        let mut rng = SplitMix64::seed_from_u64(seed);
        let lower = (0..num_cities * num_cities.saturating_sub(1) / 2)
            .map(|_| MIN_EDGE + (rng.next_u64() % u64::from(MAX_EDGE)) as u32)
            .collect();
        Self::from_lower_triangle(num_cities, seed, lower)
    }

    /// Builds an instance from the strict lower triangle `d(1,0), d(2,0), d(2,1), ...`.
    pub fn from_lower_triangle(num_cities: usize, seed: u64, lower: Vec<u32>) -> Result<Self> {
        if num_cities < 4 {
            return Err(Error::InvalidSpec(format!("need at least 4 cities, got {num_cities}")));
        }
        let expect = num_cities * (num_cities - 1) / 2;
        if lower.len() != expect {
            return Err(Error::InvalidSpec(format!(
                "expected {expect} edge lengths, got {}",
                lower.len()
            )));
        }
        if let Some(bad) = lower.iter().find(|&&e| !(MIN_EDGE..=MAX_EDGE).contains(&e)) {
            return Err(Error::InvalidSpec(format!(
                "edge length {bad} outside {MIN_EDGE}..={MAX_EDGE}"
            )));
        }
        let mut edges = vec![0; num_cities * num_cities];
        let mut it = lower.into_iter();
        for i in 1..num_cities {
            for j in 0..i {
                let e = it.next().expect("length checked");
                edges[i * num_cities + j] = e;
                edges[j * num_cities + i] = e;
            }
        }
        Ok(Self {
            num_cities,
            seed,
            edges,
        })
    }

    pub fn num_cities(&self) -> usize {
        self.num_cities
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    #[inline]
    pub fn distance(&self, a: usize, b: usize) -> u32 {
        self.edges[a * self.num_cities + b]
    }

    pub fn lower_triangle(&self) -> impl Iterator<Item = u32> + '_ {
        (1..self.num_cities).flat_map(move |i| (0..i).map(move |j| self.distance(i, j)))
    }

    /// `n(n-3)/2`: distinct 2-opt moves from any tour.
    pub fn neighbourhood_size(&self) -> u64 {
        (self.num_cities * (self.num_cities - 3) / 2) as u64
    }

    pub fn tour_cost(&self, tour: &[usize]) -> i64 {
        let n = tour.len();
        (0..n)
            .map(|i| i64::from(self.distance(tour[i], tour[(i + 1) % n])))
            .sum()
    }

    /// Cost change of the 2-opt move that reverses `tour[i+1..=j]`.
    #[inline]
    pub fn two_opt_delta(&self, tour: &[usize], i: usize, j: usize) -> i64 {
        let n = tour.len();
        let (a, b) = (tour[i], tour[i + 1]);
        let (c, d) = (tour[j], tour[(j + 1) % n]);
        i64::from(self.distance(a, c)) + i64::from(self.distance(b, d))
            - i64::from(self.distance(a, b))
            - i64::from(self.distance(c, d))
    }

    /// Writes `tsp <n> <seed>` then one line per row of the strict lower triangle.
    pub fn write_to(&self, mut w: impl Write) -> Result<()> {
        writeln!(w, "tsp {} {}", self.num_cities, self.seed)?;
        for i in 1..self.num_cities {
            let row = (0..i).map(|j| self.distance(i, j)).join(" ");
            writeln!(w, "{row}")?;
        }
        Ok(())
    }

    pub fn read_from(r: impl BufRead) -> Result<Self> {
        let mut lines = r.lines().enumerate();
        let (_, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "empty instance file".into(),
        })?;
        let header = header?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let parse_err = |line: usize, msg: String| Error::Parse { line, msg };
        let (n, seed) = match fields.as_slice() {
            ["tsp", n, seed] => (
                n.parse::<usize>().map_err(|e| parse_err(1, format!("city count: {e}")))?,
                seed.parse::<u64>().map_err(|e| parse_err(1, format!("seed: {e}")))?,
            ),
            _ => return Err(parse_err(1, "expected `tsp <num_cities> <seed>`".into())),
        };
        let mut lower = Vec::new();
        for (idx, line) in lines {
            for tok in line?.split_whitespace() {
                lower.push(
                    tok.parse::<u32>()
                        .map_err(|e| parse_err(idx + 1, format!("{tok:?}: {e}")))?,
                );
            }
        }
        Self::from_lower_triangle(n, seed, lower)
    }
}

/// Every 2-opt move `(i, j)` on an `n`-city tour, as position pairs.
pub fn two_opt_moves(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n - 2).flat_map(move |i| {
        let last = if i == 0 { n - 2 } else { n - 1 };
        (i + 2..=last).map(move |j| (i, j))
    })
}

/// Raw histogram of visited tours and of the costs of their 2-opt neighbours.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TourCounts {
    range: CostRange,
    neighbourhood: u64,
    tours: Vec<u64>,
    /// `pairs[i * len + j]`: neighbours of cost `range.cost(j)` around tours of cost `range.cost(i)`.
    pairs: Vec<u64>,
}

impl TourCounts {
    pub fn range(&self) -> CostRange {
        self.range
    }

    pub fn tour_counts(&self) -> &[u64] {
        &self.tours
    }

    pub fn total_tours(&self) -> u64 {
        self.tours.iter().sum()
    }

    pub fn total_neighbours(&self) -> u64 {
        self.pairs.iter().sum()
    }

    pub fn distribution<T: Scalar>(&self) -> Result<CostDistribution<T>> {
        CostDistribution::from_counts(self.range, &self.tours)
    }

    pub fn kernel<T: Scalar>(&self) -> Result<NeighbourKernel<T>> {
        NeighbourKernel::from_counts(self.range, NeighbourhoodSize::Finite(self.neighbourhood), &self.pairs)
    }

    pub fn landscape<T: Scalar>(&self) -> Result<(CostDistribution<T>, NeighbourKernel<T>)> {
        Ok((self.distribution()?, self.kernel()?))
    }
}

/// Per-worker tallies keyed by absolute cost and move delta.
struct Tally {
    tours: Vec<u64>,
    moves: Vec<[u64; DELTA_SLOTS]>,
}

impl Tally {
    fn new(width: usize) -> Self {
        Self {
            tours: vec![0; width],
            moves: vec![[0; DELTA_SLOTS]; width],
        }
    }

    fn merge(mut self, other: Self) -> Self {
        for (a, b) in self.tours.iter_mut().zip(&other.tours) {
            *a += b;
        }
        for (row, other) in self.moves.iter_mut().zip(&other.moves) {
            for (a, b) in row.iter_mut().zip(other) {
                *a += b;
            }
        }
        self
    }

    fn visit(&mut self, inst: &TspInstance, tour: &[usize], lo: i64) {
        let cost = inst.tour_cost(tour);
        let slot = (cost - lo) as usize;
        self.tours[slot] += 1;
        let row = &mut self.moves[slot];
        for (i, j) in two_opt_moves(tour.len()) {
            row[(inst.two_opt_delta(tour, i, j) + MAX_DELTA) as usize] += 1;
        }
    }

    fn into_counts(self, lo: i64, neighbourhood: u64) -> Result<TourCounts> {
        let mut min = i64::MAX;
        let mut max = i64::MIN;
        for (slot, row) in self.moves.iter().enumerate() {
            if self.tours[slot] == 0 {
                continue;
            }
            let cost = lo + slot as i64;
            for (d, &c) in row.iter().enumerate() {
                if c > 0 {
                    let k2 = cost + d as i64 - MAX_DELTA;
                    min = min.min(cost.min(k2));
                    max = max.max(cost.max(k2));
                }
            }
        }
        let range = CostRange::new(min, max)?;
        let len = range.len();
        let mut tours = vec![0; len];
        let mut pairs = vec![0; len * len];
        for (slot, row) in self.moves.iter().enumerate() {
            let cost = lo + slot as i64;
            let Some(i) = range.index(cost) else { continue };
            tours[i] = self.tours[slot];
            for (d, &c) in row.iter().enumerate() {
                if c > 0 {
                    let j = range.index(cost + d as i64 - MAX_DELTA).expect("inside observed range");
                    pairs[i * len + j] += c;
                }
            }
        }
        Ok(TourCounts {
            range,
            neighbourhood,
            tours,
            pairs,
        })
    }
}

fn cost_bounds(inst: &TspInstance) -> (i64, usize) {
    let n = inst.num_cities as i64;
    let lo = n * i64::from(MIN_EDGE);
    let hi = n * i64::from(MAX_EDGE);
    (lo, (hi - lo + 1) as usize)
}

/// Visits each of the `(n-1)!/2` distinct tours once: city 0 first, and the
/// second city numbered below the last.
pub fn tsp_enumerate_counts(inst: &TspInstance) -> Result<TourCounts> {
    let n = inst.num_cities;
    if n > MAX_ENUMERATION_CITIES {
        return Err(Error::TooLarge(n));
    }
    let (lo, width) = cost_bounds(inst);
    let ends: Vec<(usize, usize)> = (1..n).tuple_combinations().collect();
    let tally = ends
        .par_iter()
        .fold(
            || Tally::new(width),
            |mut acc, &(first, last)| {
                let middle: Vec<usize> = (1..n).filter(|&c| c != first && c != last).collect();
                let mut tour = vec![0; n];
                tour[1] = first;
                tour[n - 1] = last;
                for perm in middle.iter().copied().permutations(middle.len()) {
                    tour[2..n - 1].copy_from_slice(&perm);
                    acc.visit(inst, &tour, lo);
                }
                acc
            },
        )
        .reduce(|| Tally::new(width), Tally::merge);
    tally.into_counts(lo, inst.neighbourhood_size())
}

pub fn tsp_enumerate<T: Scalar>(inst: &TspInstance) -> Result<(CostDistribution<T>, NeighbourKernel<T>)> {
    tsp_enumerate_counts(inst)?.landscape()
}

/// Uniform random tours by Fisher-Yates shuffle; chunk `c` of 1024 samples
/// draws from ChaCha8 stream `c`, so the counts do not depend on scheduling.
pub fn tsp_sample_counts(inst: &TspInstance, num_samples: usize, seed: u64) -> Result<TourCounts> {
    if num_samples == 0 {
        return Err(Error::InvalidSpec("need at least one sample".into()));
    }
    let n = inst.num_cities;
    let (lo, width) = cost_bounds(inst);
    let chunks = num_samples.div_ceil(SAMPLE_CHUNK);
    let tally = (0..chunks)
        .into_par_iter()
        .fold(
            || Tally::new(width),
            |mut acc, chunk| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(chunk as u64);
                let mut tour: Vec<usize> = (0..n).collect();
                let todo = SAMPLE_CHUNK.min(num_samples - chunk * SAMPLE_CHUNK);
                for _ in 0..todo {
                    tour.shuffle(&mut rng);
                    acc.visit(inst, &tour, lo);
                }
                acc
            },
        )
        .reduce(|| Tally::new(width), Tally::merge);
    tally.into_counts(lo, inst.neighbourhood_size())
}

pub fn tsp_sample<T: Scalar>(
    inst: &TspInstance,
    num_samples: usize,
    seed: u64,
) -> Result<(CostDistribution<T>, NeighbourKernel<T>)> {
    tsp_sample_counts(inst, num_samples, seed)?.landscape()
}

/// Fit of a nonincreasing step function to a noisy series.
#[derive(Debug, Clone, PartialEq)]
pub struct TrendCheck {
    /// Least-squares nonincreasing fit (pool adjacent violators).
    pub fitted: Vec<f64>,
    /// Share of the series' variance the fit explains.
    pub explained: f64,
    pub nonincreasing: bool,
}

/// Flags a series as trending down when a nonincreasing fit explains at
/// least 90% of its variance and its ends differ.
pub fn nonincreasing_trend(values: &[f64]) -> TrendCheck {
    let fitted = isotonic_nonincreasing(values);
    let n = values.len().max(1) as f64;
    let mean = values.iter().sum::<f64>() / n;
    let total: f64 = values.iter().map(|v| (v - mean).powi(2)).sum();
    let resid: f64 = values.iter().zip(&fitted).map(|(v, f)| (v - f).powi(2)).sum();
    let explained = if total > 0.0 { 1.0 - resid / total } else { 1.0 };
    let drops = fitted.first().zip(fitted.last()).is_some_and(|(a, b)| a > b);
    TrendCheck {
        nonincreasing: explained >= 0.9 && drops,
        explained,
        fitted,
    }
}

fn isotonic_nonincreasing(values: &[f64]) -> Vec<f64> {
    // blocks of (mean, weight); merge while a later block exceeds an earlier one
    let mut blocks: Vec<(f64, usize)> = Vec::with_capacity(values.len());
    for &v in values {
        blocks.push((v, 1));
        while blocks.len() > 1 {
            let (m2, w2) = blocks[blocks.len() - 1];
            let (m1, w1) = blocks[blocks.len() - 2];
            if m2 <= m1 {
                break;
            }
            blocks.pop();
            let w = w1 + w2;
            *blocks.last_mut().expect("two blocks") = ((m1 * w1 as f64 + m2 * w2 as f64) / w as f64, w);
        }
    }
    blocks
        .into_iter()
        .flat_map(|(m, w)| std::iter::repeat_n(m, w))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    #[test]
    fn splitmix_reference_output() {
        let mut rng = SplitMix64::seed_from_u64(0);
        assert_eq!(rng.next_u64(), 0xe220a8397b1dcdaf);
    }

    #[test]
    fn generation_is_deterministic_and_in_range() {
        let a = TspInstance::generate(10, 7).unwrap();
        assert_eq!(a, TspInstance::generate(10, 7).unwrap());
        assert_ne!(a, TspInstance::generate(10, 8).unwrap());
        assert_eq!(a.lower_triangle().count(), 45);
        let big = TspInstance::generate(46, 3).unwrap();
        assert!(big.lower_triangle().count() >= 1000);
        assert!(big.lower_triangle().all(|e| (1..=25).contains(&e)));
        for i in 0..10 {
            assert_eq!(a.distance(i, i), 0);
        }
    }

    #[test]
    fn file_round_trip() {
        let inst = TspInstance::generate(6, 42).unwrap();
        let mut buf = Vec::new();
        inst.write_to(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("tsp 6 42\n"));
        assert_eq!(TspInstance::read_from(&buf[..]).unwrap(), inst);
        assert!(TspInstance::read_from("tsp 4 1\n1 2 3\n".as_bytes()).is_err());
        assert!(TspInstance::read_from("tsp 4 1\n1\n2 3\n4 5 99\n".as_bytes()).is_err());
    }

    #[test]
    fn move_count_and_delta() {
        assert_eq!(two_opt_moves(10).count(), 35);
        assert_eq!(two_opt_moves(4).count(), 2);
        let inst = TspInstance::generate(9, 5).unwrap();
        let tour = vec![0, 3, 1, 7, 2, 8, 4, 6, 5];
        let base = inst.tour_cost(&tour);
        for (i, j) in two_opt_moves(9) {
            let mut t = tour.clone();
            t[i + 1..=j].reverse();
            assert_eq!(inst.tour_cost(&t) - base, inst.two_opt_delta(&tour, i, j), "({i},{j})");
        }
    }

    fn canonical(tour: &[usize]) -> Vec<usize> {
        let n = tour.len();
        let at = tour.iter().position(|&c| c == 0).unwrap();
        let fwd: Vec<usize> = (0..n).map(|i| tour[(at + i) % n]).collect();
        let back: Vec<usize> = (0..n).map(|i| tour[(at + n - i) % n]).collect();
        fwd.min(back)
    }

    /// Brute force over every ordering, deduplicated by rotation and reflection.
    fn oracle(inst: &TspInstance) -> (BTreeMap<i64, u64>, BTreeMap<(i64, i64), u64>) {
        let n = inst.num_cities();
        let mut seen = std::collections::BTreeSet::new();
        let mut tours = BTreeMap::new();
        let mut pairs = BTreeMap::new();
        for perm in (0..n).permutations(n) {
            let c = canonical(&perm);
            if !seen.insert(c.clone()) {
                continue;
            }
            let k = inst.tour_cost(&c);
            *tours.entry(k).or_default() += 1;
            let mut nbrs = std::collections::BTreeSet::new();
            for (i, j) in two_opt_moves(n) {
                let mut t = c.clone();
                t[i + 1..=j].reverse();
                nbrs.insert(canonical(&t));
            }
            assert_eq!(nbrs.len() as u64, inst.neighbourhood_size());
            for t in nbrs {
                *pairs.entry((k, inst.tour_cost(&t))).or_default() += 1;
            }
        }
        (tours, pairs)
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for (n, seed) in [(4, 1), (5, 2), (6, 3), (7, 11)] {
            let inst = TspInstance::generate(n, seed).unwrap();
            let counts = tsp_enumerate_counts(&inst).unwrap();
            let (tours, pairs) = oracle(&inst);
            let r = counts.range();
            for k in r.costs() {
                assert_eq!(counts.tour_counts()[r.index(k).unwrap()], tours.get(&k).copied().unwrap_or(0));
                for k2 in r.costs() {
                    let got = counts.pairs[r.index(k).unwrap() * r.len() + r.index(k2).unwrap()];
                    assert_eq!(got, pairs.get(&(k, k2)).copied().unwrap_or(0), "n={n} ({k},{k2})");
                }
            }
        }
    }

    #[test]
    fn ten_cities_counts() {
        let counts = tsp_enumerate_counts(&TspInstance::generate(10, 0).unwrap()).unwrap();
        assert_eq!(counts.total_tours(), 181_440);
        assert_eq!(counts.total_neighbours(), 181_440 * 35);
        let (d, k) = counts.landscape::<f64>().unwrap();
        for row in k.present_rows() {
            assert!(d.p(row) > 0.0);
        }
    }

    #[test]
    fn refuses_large_enumeration() {
        let inst = TspInstance::generate(13, 0).unwrap();
        assert!(matches!(tsp_enumerate_counts(&inst), Err(Error::TooLarge(13))));
    }

    #[test]
    fn sampling_is_seeded() {
        let inst = TspInstance::generate(12, 9).unwrap();
        let a = tsp_sample_counts(&inst, 3000, 1).unwrap();
        assert_eq!(a, tsp_sample_counts(&inst, 3000, 1).unwrap());
        assert_ne!(a, tsp_sample_counts(&inst, 3000, 2).unwrap());
        assert_eq!(a.total_tours(), 3000);
        assert_eq!(a.total_neighbours(), 3000 * 54);
        assert!(tsp_sample_counts(&inst, 0, 1).is_err());
    }

    #[test]
    fn isotonic_fit() {
        let t = nonincreasing_trend(&[5.0, 4.0, 4.5, 3.0, 1.0]);
        assert_eq!(t.fitted, vec![5.0, 4.25, 4.25, 3.0, 1.0]);
        assert!(t.nonincreasing);
        assert!(!nonincreasing_trend(&[1.0, 2.0, 3.0]).nonincreasing);
    }
}
