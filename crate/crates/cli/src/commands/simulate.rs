use landscape_core::descent::{blind_steps, lbd_steps, DescentSpec, ImpForm};
use landscape_core::io::{real, trace_table, Table};
use landscape_core::models::{benchmark_space, lipschitz_space, tsp_enumerate, BenchmarkClassSpec, LipschitzSpaceSpec, TspInstance};
use landscape_core::simulate::{simulate_blind, simulate_lbd, simulate_tsp_descent, trace_lbd, SimConfig, SimResult};
use landscape_core::{Distribution, Kernel, NeighbourhoodSize};

use crate::args::{Family, SimulateArgs};
use crate::commands::descent::size;
use crate::error::{CliError, CliResult};
use crate::output::Output;

const COLUMNS: [&str; 10] = [
    "method",
    "start",
    "target",
    "runs",
    "mean_steps",
    "std_error",
    "capped_runs",
    "success_rate",
    "analytic",
    "agrees",
];

fn row(method: &str, spec: &DescentSpec, r: &SimResult, analytic: Option<f64>) -> Vec<String> {
    vec![
        method.to_string(),
        spec.start.to_string(),
        spec.target.to_string(),
        r.runs.to_string(),
        real(r.mean_steps),
        real(r.std_error),
        r.capped_runs.to_string(),
        real(r.empirical_success_rate),
        analytic.map(real).unwrap_or_default(),
        analytic.map(|a| u8::from(r.agrees_with(a)).to_string()).unwrap_or_default(),
    ]
}

fn report(method: &str, r: &SimResult, analytic: Option<f64>) {
    let verdict = match analytic {
        Some(a) if r.agrees_with(a) => format!("analytic {a:.6e}, within 3 sigma"),
        Some(a) => format!("analytic {a:.6e}, OUTSIDE 3 sigma"),
        None => "no analytic value".to_string(),
    };
    println!(
        "{method}: mean {:.6e} +- {:.3e} over {} runs ({} capped); {verdict}",
        r.mean_steps, r.std_error, r.runs, r.capped_runs
    );
}

pub fn run(args: &SimulateArgs, seed: u64, out: &mut Output) -> CliResult<()> {
    out.seed(seed);
    match args.family {
        Family::Toy | Family::Benchmark => landscape(args, seed, out),
        Family::Tsp => tsp(args, seed, out),
        Family::Sat2 => Err(CliError::Usage("simulate supports the toy, benchmark and tsp families".into())),
    }
}

fn config(args: &SimulateArgs, seed: u64, spec: DescentSpec) -> SimConfig {
    SimConfig {
        runs: args.runs,
        seed,
        spec,
        step_cap: args.step_cap,
    }
}

fn landscape(args: &SimulateArgs, seed: u64, out: &mut Output) -> CliResult<()> {
    let n = size(args.size);
    let (dist, kernel): (Distribution, Kernel) = match args.family {
        Family::Toy => {
            let mut spec = LipschitzSpaceSpec::uniform(200, args.bound)?;
            spec.size = n;
            lipschitz_space(&spec)?
        }
        _ => {
            let spec = BenchmarkClassSpec {
                interpolation: args.interpolation.into(),
            };
            benchmark_space(&spec, args.bound, n)?
        }
    };
    let target = args.target.unwrap_or(10);
    let start = args.start.unwrap_or(23);
    let spec = DescentSpec { start, target, size: n };
    let blind_spec = DescentSpec { start: target, ..spec };
    let lbd = lbd_steps(&dist, &kernel, spec, ImpForm::Normalized)?;
    let blind = blind_steps(&dist, target)?;

    let sb = simulate_blind(&dist, &config(args, seed, blind_spec))?;
    let sl = simulate_lbd(&dist, &kernel, &config(args, seed, spec))?;
    report("blind", &sb, Some(blind));
    report("lbd", &sl, Some(lbd.lbd_steps));
    let mut t = Table::new(&COLUMNS);
    t.push(row("blind", &blind_spec, &sb, Some(blind)));
    t.push(row("lbd", &spec, &sl, Some(lbd.lbd_steps)));
    out.table("simulate", &t)?;
    if args.trace > 0 {
        let rows = trace_lbd(&dist, &kernel, &config(args, seed, spec), args.trace)?;
        out.table("simulate_trace", &trace_table(&rows))?;
    }
    Ok(())
}

fn tsp(args: &SimulateArgs, seed: u64, out: &mut Output) -> CliResult<()> {
    let inst = TspInstance::generate(args.cities, seed)?;
    let (dist, kernel) = tsp_enumerate::<f64>(&inst)?;
    let n = NeighbourhoodSize::Finite(inst.neighbourhood_size());
    let spec = DescentSpec {
        start: args.start.unwrap_or(dist.k_ge()),
        target: args.target.unwrap_or(dist.k_opt() + 10),
        size: n,
    };
    let cfg = config(args, seed, spec);
    let analytic = match lbd_steps(&dist, &kernel, spec, ImpForm::Normalized) {
        Ok(r) => Some(r.lbd_steps),
        Err(e) if e.is_analysis() => None,
        Err(e) => return Err(e.into()),
    };
    let real_tours = simulate_tsp_descent(&inst, &cfg, args.probing.into())?;
    let model = simulate_lbd(&dist, &kernel, &cfg)?;
    report("tours", &real_tours.sim, analytic);
    report("kernel", &model, analytic);
    println!(
        "kernel model vs real tours: {:+.2}% mean steps; trace hash {:016x}",
        100.0 * (model.mean_steps - real_tours.sim.mean_steps) / real_tours.sim.mean_steps,
        real_tours.trace_hash
    );
    let mut columns = COLUMNS.to_vec();
    columns.push("trace_hash");
    let mut t = Table::new(&columns);
    let mut r = row("tours", &spec, &real_tours.sim, analytic);
    r.push(format!("{:016x}", real_tours.trace_hash));
    t.push(r);
    let mut r = row("kernel", &spec, &model, analytic);
    r.push(String::new());
    t.push(r);
    out.table(&format!("simulate_tsp{}", args.cities), &t)?;
    if args.trace > 0 {
        let rows = trace_lbd(&dist, &kernel, &cfg, args.trace)?;
        out.table("simulate_trace", &trace_table(&rows))?;
    }
    Ok(())
}
