use clap::Args;
use num_bigint::BigInt;
use serde::Serialize;

use heatlab_core::io::{write_association_csv, MartingaleDump};
use heatlab_core::martingale::{
    build_association, build_process, extend_process, mass_check, verify_distribution_equality,
    verify_reverse_martingale, Rational, DEFAULT_MARTINGALE_BUDGET,
};

use super::{budget, parse_list, require};
use crate::error::CliError;
use crate::report::{OutputArgs, Run, RunReport};

#[derive(Debug, Clone, Args, Serialize)]
pub struct MartingaleArgs {
    #[arg(long)]
    pub eta: usize,

    #[arg(long)]
    pub nu: usize,

    /// Comma-separated nonnegative masses such as `1,0` or `1/3,2/3`; defaults to a point mass at 0
    #[arg(long)]
    pub initial: Option<String>,
}

pub fn martingale(args: &MartingaleArgs, out: &OutputArgs) -> Result<RunReport, CliError> {
    let mut run = Run::new("martingale", out, args);
    let initial: Vec<Rational> = match &args.initial {
        Some(s) => parse_list("--initial", s)?,
        None => (0..args.eta)
            .map(|i| Rational::from_integer(BigInt::from(u8::from(i == 0))))
            .collect(),
    };
    require(initial.len() == args.eta, || {
        format!(
            "--initial has {} entries, --eta is {}",
            initial.len(),
            args.eta
        )
    })?;
    let assoc = build_association(args.eta, args.nu, budget(DEFAULT_MARTINGALE_BUDGET)?)?;
    let process = build_process(&initial, args.nu)?;
    let ext = extend_process(&process, &assoc)?;

    let counting = assoc.counting_check();
    run.check(
        "counting: 3^r special points per state",
        counting.passed(),
        counting
            .failures
            .first()
            .cloned()
            .unwrap_or_else(|| format!("{} rows", counting.rows)),
    );
    let rep = verify_reverse_martingale(&ext);
    run.check(
        "one-step conditional expectations",
        rep.one_step_violations.is_empty(),
        format!(
            "{} level pairs, {} violations",
            rep.one_step_checked,
            rep.one_step_violations.len()
        ),
    );
    run.check(
        "all-pairs conditional expectations",
        rep.all_pairs_violations.is_empty(),
        format!(
            "{} level pairs, {} violations",
            rep.pairs_checked,
            rep.all_pairs_violations.len()
        ),
    );
    let mut bad_times = Vec::new();
    for t in 0..=args.nu {
        if !verify_distribution_equality(&process, &ext, t)?.passed() {
            bad_times.push(t);
        }
    }
    run.check(
        "distribution equality at every time index",
        bad_times.is_empty(),
        format!("mismatches at {bad_times:?}"),
    );
    let mass_ok = mass_check(&process, &ext).iter().all(|(l, r)| l == r);
    run.check(
        "integral of the extension matches the state average",
        mass_ok,
        "",
    );

    run.result("finest_cells", ext.row(args.nu).len());
    run.result(
        "terminal_deviation",
        process.terminal_deviation().to_string(),
    );
    let dump = MartingaleDump::from(&ext);
    run.json("martingale.json", &dump)?;
    run.csv("association.csv", |w| write_association_csv(w, &assoc))?;
    run.finish()
}
