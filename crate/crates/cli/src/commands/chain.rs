use clap::Args;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Pow, ToPrimitive};
use serde::Serialize;

use heatlab_core::chain::{
    coupling_tail_exact, simulate_meeting_time, steps_to_equilibrium, BoundVariant, CyclicChain,
    MixingBound,
};
use heatlab_core::io::write_csv;

use crate::error::CliError;
use crate::report::{OutputArgs, Run, RunReport};

/// Largest n* for which the exact gap at n* is recomputed.
const MAX_EXACT_CHECK_STEPS: u64 = 10_000;

#[derive(Debug, Clone, Args, Serialize)]
pub struct MixArgs {
    /// Number of chain states
    #[arg(long = "N")]
    pub n_states: usize,

    #[arg(long, default_value_t = 200)]
    pub n_max: usize,

    /// Also report steps_to_equilibrium for this accuracy
    #[arg(long)]
    pub eps: Option<f64>,
}

#[derive(Serialize)]
struct MixRow {
    n: usize,
    tv_gap: f64,
    eps_n: f64,
    delta_n: Option<f64>,
}

pub fn mix(args: &MixArgs, out: &OutputArgs) -> Result<RunReport, CliError> {
    let mut run = Run::new("mix", out, args);
    let chain = CyclicChain::new(args.n_states)?;
    let general = MixingBound::new(args.n_states, BoundVariant::General)?;
    let odd = (args.n_states % 2 == 1)
        .then(|| MixingBound::new(args.n_states, BoundVariant::Odd))
        .transpose()?;
    let gaps = chain.tv_gaps_exact(args.n_max);

    let mut rows = Vec::with_capacity(args.n_max);
    let (mut eps_fail, mut delta_fail) = (Vec::new(), Vec::new());
    for (n, gap) in gaps.iter().enumerate().skip(1) {
        if !general.holds_exact(gap, n) {
            eps_fail.push(n);
        }
        if let Some(b) = &odd {
            if !b.holds_exact(gap, n) {
                delta_fail.push(n);
            }
        }
        rows.push(MixRow {
            n,
            tv_gap: gap.to_f64().unwrap_or(0.0),
            eps_n: general.value(n)?,
            delta_n: odd.as_ref().map(|b| b.value(n)).transpose()?,
        });
    }
    run.check(
        "gap <= eps_n (exact)",
        eps_fail.is_empty(),
        failures_detail(&eps_fail, args.n_max),
    );
    if odd.is_some() {
        run.check(
            "gap <= delta_n (exact)",
            delta_fail.is_empty(),
            failures_detail(&delta_fail, args.n_max),
        );
    }
    run.result("eps_bound", general);
    run.result("delta_bound", odd);

    if let Some(eps) = args.eps {
        let mut variants = vec![BoundVariant::General];
        if odd.is_some() {
            variants.push(BoundVariant::Odd);
        }
        for v in variants {
            let steps = steps_to_equilibrium(args.n_states, eps, v)?;
            let key = match v {
                BoundVariant::General => "steps_to_equilibrium_general",
                BoundVariant::Odd => "steps_to_equilibrium_odd",
            };
            run.result(key, steps);
            if steps <= MAX_EXACT_CHECK_STEPS {
                let gap = chain.tv_gap_exact(steps as usize);
                let target = BigRational::from_float(eps)
                    .ok_or_else(|| CliError::Usage(format!("--eps must be finite, got {eps}")))?;
                run.check(
                    format!("{key}: gap at n* <= eps (exact)"),
                    gap <= target,
                    format!("n* = {steps}"),
                );
            }
        }
    }
    run.csv("mix.csv", |w| write_csv(w, rows))?;
    run.finish()
}

fn failures_detail(fails: &[usize], n_max: usize) -> String {
    match fails.first() {
        None => format!("all n up to {n_max}"),
        Some(first) => format!("{} violations, first at n = {first}", fails.len()),
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CoupleArgs {
    /// Number of chain states
    #[arg(long = "N")]
    pub n_states: usize,

    /// Last step of the tail; defaults to 20 (N - 1)
    #[arg(long)]
    pub n_max: Option<usize>,

    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Start state of the first chain; the second starts uniform
    #[arg(long, default_value_t = 0)]
    pub start: usize,
}

#[derive(Serialize)]
struct CoupleRow {
    n: usize,
    exact_tail: f64,
    mc_tail: f64,
    std_err: f64,
    bound: f64,
}

pub fn couple(args: &CoupleArgs, out: &OutputArgs) -> Result<RunReport, CliError> {
    let mut run = Run::new("couple", out, args);
    CyclicChain::new(args.n_states)?;
    let m = args.n_states - 1;
    let n_max = args.n_max.unwrap_or(20 * m);
    let exact = coupling_tail_exact(args.n_states, args.start, n_max)?;
    let mc = simulate_meeting_time(args.n_states, args.start, args.trials, n_max, args.seed)?;

    let pow = Pow::pow(BigInt::from(3), m as u32);
    let a = BigRational::new(&pow - 1, pow);
    let a_f64 = a.to_f64().unwrap_or(1.0);
    let mut bound_fail = Vec::new();
    let mut mc_fail = Vec::new();
    let mut rows = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let k = (n / m) as u32;
        if exact.tail[n] > Pow::pow(&a, k) {
            bound_fail.push(n);
        }
        let p = exact.tail[n].to_f64().unwrap_or(0.0);
        let std_err = (p * (1.0 - p) / args.trials as f64).sqrt();
        if (mc.tail[n] - p).abs() > 4.0 * std_err {
            mc_fail.push(n);
        }
        rows.push(CoupleRow {
            n,
            exact_tail: p,
            mc_tail: mc.tail[n],
            std_err,
            bound: a_f64.powi(k as i32),
        });
    }
    run.check(
        "exact tail <= (1 - rho)^floor(n/m)",
        bound_fail.is_empty(),
        failures_detail(&bound_fail, n_max),
    );
    run.check(
        "monte carlo within 4 standard errors",
        mc_fail.is_empty(),
        failures_detail(&mc_fail, n_max),
    );
    run.result("block_m", m);
    run.result("rho", 3f64.powi(-(m as i32)));
    run.csv("couple.csv", |w| write_csv(w, rows))?;
    run.finish()
}
