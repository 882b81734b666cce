use std::collections::BTreeMap;

use clap::Args;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use heatlab_core::calculus::{calculus_identity_check, space_time_identity_check};
use heatlab_core::fourier::{
    decay_report, derivative_coeff_identity_check, fourier_coeffs, inverse,
    restricted_coeff_identity_check, symbols,
};
use heatlab_core::grid::{CircleGrid, GridFunction, SpaceTimeField, TimeGrid};
use heatlab_core::io::{write_coeffs_csv, write_csv};
use heatlab_core::presets::Preset;

use crate::error::CliError;
use crate::report::{OutputArgs, Run, RunReport};

#[derive(Debug, Clone, Args, Serialize)]
pub struct CalculusArgs {
    #[arg(long, default_value_t = 64)]
    pub eta: usize,

    /// Random function pairs per identity
    #[arg(long, default_value_t = 100)]
    pub trials: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
}

#[derive(Serialize)]
struct ResidualRow<'a> {
    scope: &'a str,
    identity: &'a str,
    max_residual: f64,
}

fn random_function(rng: &mut ChaCha8Rng, grid: CircleGrid) -> GridFunction {
    let values = (0..grid.len())
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    GridFunction::new(grid, values).expect("length matches")
}

pub fn calculus(args: &CalculusArgs, out: &OutputArgs) -> Result<RunReport, CliError> {
    let mut run = Run::new("calculus", out, args);
    let grid = CircleGrid::new(args.eta)?;
    let tgrid = TimeGrid::new(8, 8)?;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut worst: BTreeMap<(&str, &str), f64> = BTreeMap::new();
    let mut record = |scope, rep: heatlab_core::calculus::CalculusReport| {
        for r in rep.residuals {
            let w = worst.entry((scope, r.identity)).or_insert(0.0);
            *w = w.max(r.residual);
        }
    };
    for _ in 0..args.trials {
        let g = random_function(&mut rng, grid);
        let h = random_function(&mut rng, grid);
        record("space", calculus_identity_check(&g, &h)?);
    }
    for _ in 0..args.trials.div_ceil(10) {
        let mut field = || {
            let rows = (0..=tgrid.n_steps())
                .map(|_| random_function(&mut rng, grid))
                .collect();
            SpaceTimeField::new(tgrid, rows)
        };
        let (g, h) = (field()?, field()?);
        record("space-time", space_time_identity_check(&g, &h)?);
    }
    let rows: Vec<ResidualRow> = worst
        .iter()
        .map(|(&(scope, identity), &max_residual)| ResidualRow {
            scope,
            identity,
            max_residual,
        })
        .collect();
    for r in &rows {
        run.check(
            format!("{} ({})", r.identity, r.scope),
            r.max_residual <= args.tol,
            format!("max residual {:e}", r.max_residual),
        );
    }
    run.csv("calculus.csv", |w| write_csv(w, &rows))?;
    run.finish()
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FourierArgs {
    #[arg(long, default_value_t = 64)]
    pub eta: usize,

    /// Initial condition preset
    #[arg(long, default_value = "expcos")]
    pub g: Preset,

    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

pub fn fourier(args: &FourierArgs, out: &OutputArgs) -> Result<RunReport, CliError> {
    let mut run = Run::new("fourier", out, args);
    let f = args.g.grid_function(args.eta)?;
    let coeffs = fourier_coeffs(&f);
    let round_trip = inverse(&coeffs).max_abs_diff(&f);
    run.check(
        "inversion round trip",
        round_trip <= args.tol,
        format!("{round_trip:e}"),
    );
    let d = derivative_coeff_identity_check(&f);
    run.check(
        "derivative coefficient identities",
        d.max_residual() <= args.tol,
        format!("{:e}", d.max_residual()),
    );
    let r = restricted_coeff_identity_check(&f)?;
    run.check(
        "restricted coefficient identities",
        r.max_residual() <= args.tol,
        format!("{:e}", r.max_residual()),
    );
    let decay = decay_report(&f)?;
    run.check(
        "coefficient decay bound",
        decay.passed(),
        format!(
            "F = {:e}, {} violations",
            decay.f_const,
            decay.violations.len()
        ),
    );
    run.result("derivative_residuals", d);
    run.result("restricted_residuals", r);
    run.result("decay", &decay);
    if args.eta >= 2 {
        run.result("symbols_m1", symbols(args.eta, 1)?);
    }
    run.csv("fourier.csv", |w| write_coeffs_csv(w, &coeffs))?;
    run.finish()
}
