use landscape_core::io::{rates_table, real, Table};
use landscape_core::models::{lipschitz_space, LipschitzSpaceSpec};
use landscape_core::rate::{expected_improvement_to_target, rate_curve};

use crate::args::ToyArgs;
use crate::error::{CliError, CliResult};
use crate::output::Output;

pub fn run(args: &ToyArgs, out: &mut Output) -> CliResult<()> {
    if !(0..=args.kmax).contains(&args.k) || !(0..=args.k).contains(&args.target) {
        return Err(CliError::Usage(format!(
            "need 0 <= target <= k <= kmax, got target={} k={} kmax={}",
            args.target, args.k, args.kmax
        )));
    }
    let (k, t) = (args.k, args.target);
    let mut probs = Table::new(&["b", "p_less", "pn_less"]);
    let mut rates = Table::new(&["b", "e_imp", "en_imp"]);
    let mut below = Table::new(&["b", "e_imp", "en_imp"]);
    println!("b  p<({k})  pn<({k})  e_imp({k})  en_imp({k})  e_imp({t})  en_imp({k},{t})");
    for &b in &args.bounds {
        let mut spec = LipschitzSpaceSpec::<f64>::uniform(args.kmax, b)?;
        spec.window = args.window.into();
        let (dist, kernel) = lipschitz_space(&spec)?;
        let (pl, pnl) = (dist.p_less(k), kernel.pn_less(k)?);
        let own = expected_improvement_to_target(&dist, &kernel, k, k)?;
        let to = expected_improvement_to_target(&dist, &kernel, k, t)?;
        println!(
            "{b}  {pl:.3}  {pnl:.3}  {:.2}  {:.2}  {:.2}  {:.2}",
            own.e_imp, own.en_imp, to.e_imp, to.en_imp
        );
        probs.push(vec![b.to_string(), real(pl), real(pnl)]);
        rates.push(vec![b.to_string(), real(own.e_imp), real(own.en_imp)]);
        below.push(vec![b.to_string(), real(to.e_imp), real(to.en_imp)]);
        let curve = rate_curve(&dist, &kernel, dist.k_opt(), dist.k_max());
        out.table(&format!("toy_rates_b{b}"), &rates_table(&curve))?;
    }
    out.table("toy_pn_less", &probs)?;
    out.table("toy_rates", &rates)?;
    out.table("toy_rates_target", &below)?;
    Ok(())
}
