use clap::Args;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use heatlab_core::grid::{CircleGrid, GridFunction};
use heatlab_core::heat::{
    classical_solution, compare_to_classical, equilibrium_gap, markov_equivalence_check,
    solve_spectral, solve_streaming, ComparisonReport, SchemeParams,
};
use heatlab_core::io::{write_csv, write_snapshots_csv};
use heatlab_core::presets::Preset;
use heatlab_core::DEFAULT_BUDGET_CELLS;

use super::{budget, parse_list, require};
use crate::error::CliError;
use crate::report::{OutputArgs, Run, RunReport};

#[derive(Debug, Clone, Args, Serialize)]
pub struct HeatArgs {
    /// Smooth initial condition preset
    #[arg(long, default_value = "cos")]
    pub g: Preset,

    #[arg(long, default_value_t = 64)]
    pub eta: usize,

    #[arg(long, default_value_t = 256)]
    pub nu: usize,

    #[arg(long, default_value_t = 1.0)]
    pub t: f64,

    /// Comma-separated snapshot times; defaults to 0 and t
    #[arg(long)]
    pub snapshots: Option<String>,

    #[arg(long, default_value_t = 5e-3)]
    pub tol: f64,
}

pub fn heat(args: &HeatArgs, out: &OutputArgs) -> Result<RunReport, CliError> {
    let mut run = Run::new("heat", out, args);
    let g = args
        .g
        .smooth()
        .ok_or_else(|| CliError::Usage(format!("--g {} has no classical solution", args.g)))?;
    let params = SchemeParams::new(args.eta, args.nu)?;
    let sup_error = compare_to_classical(g, &params, args.t)?;

    let times = match &args.snapshots {
        Some(s) => parse_list::<f64>("--snapshots", s)?,
        None => vec![0.0, args.t],
    };
    let steps: Vec<usize> = times
        .iter()
        .map(|&t| params.steps_for(t).map(|k| k as usize))
        .collect::<Result<_, _>>()?;
    let cells = steps.len().saturating_mul(2 * args.eta);
    let limit = budget(DEFAULT_BUDGET_CELLS)?;
    if cells > limit {
        return Err(CliError::Resource(format!(
            "{cells} snapshot cells exceed the budget of {limit}"
        )));
    }
    let final_step = params.steps_for(args.t)? as usize;
    let horizon = steps.iter().copied().max().unwrap_or(0).max(final_step);
    let f = GridFunction::sample(g, args.eta)?;
    let mut wanted = steps.clone();
    wanted.push(final_step);
    let streamed = solve_streaming(&f, &params, horizon, &wanted)?;
    let stepped = &streamed
        .snapshots
        .iter()
        .find(|(k, _)| *k == final_step)
        .expect("final step recorded")
        .1;
    let spectral = solve_spectral(&f, &params, args.t)?;
    let agreement = spectral.max_abs_diff(stepped);
    let scale = f.sup_norm().max(1.0);

    run.check(
        "sup error against classical solution",
        sup_error < args.tol,
        format!("{sup_error:e}"),
    );
    run.check(
        "time stepping matches spectral solve",
        agreement <= 1e-9 * scale,
        format!("{agreement:e}"),
    );
    let classical = classical_solution(g, args.eta)?;
    run.result("steps", final_step);
    run.result("stencil_weight", params.weight);
    run.result("sup_error", sup_error);
    run.result("classical_tail_bound", classical.tail_bound);
    run.result("periodicity_warning", classical.periodicity_warning);

    let snapshots: Vec<_> = streamed
        .snapshots
        .into_iter()
        .filter(|(k, _)| steps.contains(k))
        .collect();
    run.csv("heat.csv", |w| write_snapshots_csv(w, args.nu, &snapshots))?;
    let comparison = ComparisonReport {
        eta: args.eta,
        nu: args.nu,
        t: args.t,
        sup_error,
        stable: params.is_stable(),
        runtime_ms: run.runtime_ms(),
    };
    run.json("comparison.json", &comparison)?;
    run.finish()
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EquilibriumArgs {
    #[arg(long, default_value = "cos")]
    pub g: Preset,

    #[arg(long, default_value_t = 64)]
    pub eta: usize,

    #[arg(long, default_value_t = 256)]
    pub nu: usize,

    #[arg(long, default_value_t = 20.0)]
    pub t: f64,

    /// Points of the gap curve between 0 and t
    #[arg(long, default_value_t = 21)]
    pub samples: usize,

    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
}

#[derive(Serialize)]
struct GapRow {
    t: f64,
    gap: f64,
}

pub fn equilibrium(args: &EquilibriumArgs, out: &OutputArgs) -> Result<RunReport, CliError> {
    let mut run = Run::new("equilibrium", out, args);
    require(args.samples >= 2, || {
        format!("--samples must be >= 2, got {}", args.samples)
    })?;
    let params = SchemeParams::new(args.eta, args.nu)?;
    let f = args.g.grid_function(args.eta)?;
    let rows = (0..args.samples)
        .map(|i| {
            let t = args.t * i as f64 / (args.samples - 1) as f64;
            equilibrium_gap(&f, &params, t).map(|gap| GapRow { t, gap })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let gap = rows.last().expect("samples >= 2").gap;
    run.check(
        "gap to the normalised mean",
        gap <= args.tol,
        format!("{gap:e}"),
    );

    let half = |skip| {
        f.values()
            .iter()
            .skip(skip)
            .step_by(2)
            .map(|v| v.re)
            .sum::<f64>()
            / args.eta as f64
    };
    run.result("mean", f.mean().re);
    run.result("gap", gap);
    run.result("sublattice_limit", (half(0) - half(1)).abs() / 2.0);
    run.csv("equilibrium.csv", |w| write_csv(w, rows))?;
    run.finish()
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EquivalenceArgs {
    #[arg(long, default_value_t = 16)]
    pub eta: usize,

    #[arg(long, default_value_t = 50)]
    pub steps: usize,

    /// Initial condition: a preset name, or `random` for uniform draws in [0, 1)
    #[arg(long, default_value = "delta")]
    pub g: String,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
}

pub fn equivalence(args: &EquivalenceArgs, out: &OutputArgs) -> Result<RunReport, CliError> {
    let mut run = Run::new("equivalence", out, args);
    let f = if args.g == "random" {
        let grid = CircleGrid::new(args.eta)?;
        let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
        let values: Vec<f64> = (0..grid.len())
            .map(|_| rng.random_range(0.0..1.0))
            .collect();
        GridFunction::from_real(grid, &values)?
    } else {
        args.g.parse::<Preset>()?.grid_function(args.eta)?
    };
    let rep = markov_equivalence_check(&f, args.steps)?;
    run.check(
        "even-sublattice stepping equals chain evolution",
        rep.max_deviation <= args.tol,
        format!("{:e}", rep.max_deviation),
    );
    run.result("equivalence", rep);
    run.finish()
}
