//! Savings of local blind descent on the benchmark class, swept over bounds or targets.

use landscape_core::descent::{blind_steps, lbd_steps, savings_scan, DescentSpec, SavingsScan};
use landscape_core::io::{opt_scalar, real, Table};
use landscape_core::models::{benchmark_space, BenchmarkClassSpec};
use landscape_core::{Distribution, Kernel, NeighbourhoodSize};

use crate::args::{BenchmarkArgs, BenchmarkClass, DescentArgs};
use crate::error::CliResult;
use crate::output::Output;

fn space(class: &BenchmarkClass, bound: u64) -> CliResult<(Distribution, Kernel)> {
    let spec = BenchmarkClassSpec {
        interpolation: class.interpolation.into(),
    };
    Ok(benchmark_space(&spec, bound, size(class.size))?)
}

pub fn size(n: u64) -> NeighbourhoodSize {
    if n == 0 {
        NeighbourhoodSize::Infinite
    } else {
        NeighbourhoodSize::Finite(n)
    }
}

fn scan(class: &BenchmarkClass, bound: u64, target: i64) -> CliResult<SavingsScan<f64>> {
    let (d, k) = space(class, bound)?;
    Ok(savings_scan(&d, &k, target, size(class.size), class.imp_form.into())?)
}

fn curve_table(s: &SavingsScan<f64>) -> Table {
    let mut t = Table::new(&["k", "savings"]);
    for (k, v) in &s.curve {
        t.push(vec![k.to_string(), opt_scalar(v.as_ref())]);
    }
    t
}

fn best_row(s: &SavingsScan<f64>) -> (String, String) {
    (
        s.best_k.map(|k| k.to_string()).unwrap_or_default(),
        opt_scalar(s.best_savings.as_ref()),
    )
}

pub fn run_benchmark(args: &BenchmarkArgs, out: &mut Output) -> CliResult<()> {
    let mut table = Table::new(&["lipschitz_bound", "starting_cost", "savings"]);
    println!("b  best start  savings");
    for &b in &args.bounds {
        let s = scan(&args.class, b, args.target)?;
        let (k, v) = best_row(&s);
        println!("{b}  {k}  {:.2}", s.best_savings.unwrap_or(f64::NAN));
        table.push(vec![b.to_string(), k, v]);
        out.table(&format!("benchmark_savings_b{b}"), &curve_table(&s))?;
    }
    out.table("benchmark_best", &table)?;
    Ok(())
}

pub fn run_descent(args: &DescentArgs, out: &mut Output) -> CliResult<()> {
    if let Some(start) = args.start {
        return fixed_start(args, start, out);
    }
    let mut table = Table::new(&["target_cost", "starting_cost", "savings"]);
    println!("t  best start  savings");
    for &t in &args.targets {
        let s = scan(&args.class, args.bound, t)?;
        let (k, v) = best_row(&s);
        println!("{t}  {k}  {:.2}", s.best_savings.unwrap_or(f64::NAN));
        table.push(vec![t.to_string(), k, v]);
        out.table(&format!("descent_savings_t{t}"), &curve_table(&s))?;
    }
    out.table("descent_best", &table)?;
    Ok(())
}

fn fixed_start(args: &DescentArgs, start: i64, out: &mut Output) -> CliResult<()> {
    let (d, k) = space(&args.class, args.bound)?;
    let mut table = Table::new(&["target_cost", "starting_cost", "blind", "lbd", "savings"]);
    for &t in &args.targets {
        let spec = DescentSpec {
            start,
            target: t,
            size: size(args.class.size),
        };
        let r = lbd_steps(&d, &k, spec, args.class.imp_form.into())?;
        println!("t={t} k={start}: blind {:.6e}, lbd {:.6e}, savings {:.4}", r.blind_steps, r.lbd_steps, r.savings);
        let mut steps = Table::new(&["k", "steps"]);
        for (j, s) in &r.steps {
            steps.push(vec![j.to_string(), real(*s)]);
        }
        out.table(&format!("descent_steps_t{t}"), &steps)?;
        table.push(vec![
            t.to_string(),
            start.to_string(),
            real(blind_steps(&d, t)?),
            real(r.lbd_steps),
            real(r.savings),
        ]);
    }
    out.table("descent_lbd", &table)?;
    Ok(())
}
