use landscape_core::io::{rates_table, real, Table};
use landscape_core::models::{
    benchmark_space, lipschitz_space, sat2_distribution, sat2_kernel, tsp_enumerate, BenchmarkClassSpec,
    LipschitzSpaceSpec, Sat2ClassSpec, TspInstance,
};
use landscape_core::rate::{blind_crossover, expected_improvement_to_target, rate_curve};
use landscape_core::{Distribution, Kernel, NeighbourhoodSize};

use crate::args::{Family, RatesArgs};
use crate::error::{CliError, CliResult};
use crate::output::Output;

pub fn family_space(family: Family, bound: u64, cities: usize, seed: u64) -> CliResult<(Distribution, Kernel)> {
    Ok(match family {
        Family::Toy => lipschitz_space(&LipschitzSpaceSpec::uniform(200, bound)?)?,
        Family::Benchmark => benchmark_space(&BenchmarkClassSpec::default(), bound, NeighbourhoodSize::Finite(50))?,
        Family::Sat2 => {
            let s = Sat2ClassSpec::default();
            (sat2_distribution(&s)?, sat2_kernel(&s)?)
        }
        Family::Tsp => tsp_enumerate(&TspInstance::generate(cities, seed)?)?,
    })
}

fn name(family: Family) -> &'static str {
    match family {
        Family::Toy => "toy",
        Family::Benchmark => "benchmark",
        Family::Sat2 => "sat2",
        Family::Tsp => "tsp",
    }
}

pub fn run(args: &RatesArgs, seed: u64, out: &mut Output) -> CliResult<()> {
    if args.family == Family::Tsp {
        out.seed(seed);
    }
    let (dist, kernel) = family_space(args.family, args.bound, args.cities, seed)?;
    let stem = format!("rates_{}", name(args.family));
    let curve = rate_curve(&dist, &kernel, dist.k_opt(), dist.k_max());
    out.table(&stem, &rates_table(&curve))?;
    match blind_crossover(&dist, &kernel) {
        Some(c) => println!("blind search first gains more per step at k={c} ({} above optimum)", c - dist.k_opt()),
        None => println!("neighbour search gains at least as much per step at every level below the mode"),
    }
    if let Some(t) = args.target {
        if !dist.range().contains(t) {
            return Err(CliError::Usage(format!(
                "target {t} outside {}..={}",
                dist.k_opt(),
                dist.k_max()
            )));
        }
        let mut table = Table::new(&["k", "e_imp", "en_imp"]);
        for k in (t..=dist.k_max()).filter(|&k| kernel.has_row(k)) {
            let r = expected_improvement_to_target(&dist, &kernel, k, t)?;
            table.push(vec![k.to_string(), real(r.e_imp), real(r.en_imp)]);
        }
        out.table(&format!("{stem}_t{t}"), &table)?;
    }
    Ok(())
}
