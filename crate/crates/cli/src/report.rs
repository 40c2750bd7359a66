//! Tables shared by several commands.

use landscape_core::io::{opt_scalar, real, Table};
use landscape_core::{NWeights, Report};

fn flag(b: bool) -> String {
    u8::from(b).to_string()
}

/// One row per populated level with every condition and the slack of the weak one.
pub fn condition_table(report: &Report) -> Table {
    let mut t = Table::new(&[
        "k",
        "p",
        "p_less",
        "pn_less",
        "rbar",
        "ge",
        "ge_window",
        "unbiased",
        "positively_biased",
        "nsc",
        "full_nsc",
        "r_kk_at_least_one",
        "high_average",
        "low_average",
        "improves",
        "t",
        "a",
        "weak_slack",
    ]);
    for l in &report.levels {
        let q = &l.quantities;
        t.push(vec![
            l.k().to_string(),
            real(q.p),
            real(q.p_less),
            real(q.pn_less),
            opt_scalar(q.rbar.as_ref()),
            flag(l.ge),
            flag(l.ge_window),
            flag(l.unbiased),
            flag(l.positively_biased),
            flag(l.nsc),
            flag(l.full_nsc),
            flag(l.rkk_at_least_one),
            flag(l.high_average_holds),
            flag(l.low_average_holds),
            flag(l.improves),
            real(q.same_cost_excess()),
            real(q.worse_deficit()),
            real(l.weak_cond_slack),
        ]);
    }
    t
}

/// `k,rbar,rbar_defined` for every level above the optimum with weights.
pub fn rbar_table(w: &NWeights) -> Table {
    let mut t = Table::new(&["k", "rbar", "rbar_defined"]);
    for k in w.range().costs().skip(1).filter(|&k| w.has_level(k)) {
        t.push(vec![
            k.to_string(),
            opt_scalar(w.rbar(k).as_ref()),
            opt_scalar(w.rbar_defined(k).as_ref()),
        ]);
    }
    t
}
