use landscape_core::io::{distribution_table, opt_scalar, real, Table};
use landscape_core::models::{sat2_distribution, sat2_kernel, Sat2ClassSpec};
use landscape_core::{analyse, check_unbiased};

use crate::args::Sat2Args;
use crate::error::CliResult;
use crate::output::Output;
use crate::report::condition_table;

pub fn run(args: &Sat2Args, out: &mut Output) -> CliResult<()> {
    let spec = Sat2ClassSpec {
        num_vars: args.vars,
        num_clauses: args.clauses,
        occurrences_per_var: args.occurrences,
    };
    let dist = sat2_distribution::<f64>(&spec)?;
    let kernel = sat2_kernel::<f64>(&spec)?;
    let (w, report) = analyse(&dist, &kernel)?;
    out.table("sat2_p", &distribution_table(&dist))?;

    let k = args.level;
    let bias = check_unbiased(&dist, &kernel, &w, k);
    let mut t = Table::new(&["delta", "r", "posr"]);
    println!("k={k}: delta  r  posr");
    for d in 1..=args.occurrences as i64 {
        let posr = bias.posr.iter().find(|(d2, _)| *d2 == d).map(|(_, v)| *v);
        let r = w.r(k, d);
        println!("  {d}  {}  {}", fmt2(r), fmt3(posr));
        t.push(vec![d.to_string(), opt_scalar(r.as_ref()), opt_scalar(posr.as_ref())]);
    }
    out.table(&format!("sat2_r{k}"), &t)?;

    let mut t = Table::new(&["k", "rbar"]);
    for k in dist.range().costs().skip(1) {
        if let Some(r) = w.rbar(k) {
            t.push(vec![k.to_string(), real(r)]);
        }
    }
    out.table("sat2_rbar", &t)?;

    let mut t = Table::new(&["k", "t", "a", "beneficial"]);
    println!("k  t(k)  a(k)  beneficial");
    for l in report.levels.iter().filter(|l| l.k() > dist.k_opt()) {
        let q = &l.quantities;
        let (tk, ak) = (q.same_cost_excess(), q.worse_deficit());
        if l.k() <= dist.k_mod() + 1 {
            println!("{}  {tk:.2}  {ak:.2}  {}", l.k(), tk < ak);
        }
        t.push(vec![l.k().to_string(), real(tk), real(ak), u8::from(tk < ak).to_string()]);
    }
    out.table("sat2_ta", &t)?;
    out.table("sat2_conditions", &condition_table(&report))?;
    println!("k_opt={} k_mod={} k_ge={}", dist.k_opt(), dist.k_mod(), dist.k_ge());
    Ok(())
}

fn fmt2(x: Option<f64>) -> String {
    x.map_or("-".into(), |v| format!("{v:.2}"))
}

fn fmt3(x: Option<f64>) -> String {
    x.map_or("-".into(), |v| format!("{v:.3}"))
}
