//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Run with `cargo test -p heatlab-core --test acceptance`.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Pow;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use heatlab_core::calculus::{calculus_identity_check, space_time_identity_check};
use heatlab_core::chain::{
    coupling_tail_exact, simulate_meeting_time, steps_to_equilibrium, BoundVariant, CyclicChain,
    MixingBound,
};
use heatlab_core::fourier::{
    decay_report, derivative_coeff_identity_check, fourier_coeffs, inverse,
    restricted_coeff_identity_check, symbols,
};
use heatlab_core::grid::{CircleGrid, GridFunction, SpaceTimeField, TimeGrid};
use heatlab_core::heat::{
    compare_to_classical, equilibrium_gap, markov_equivalence_check, solve_spectral, HeatStepper,
    SchemeParams,
};
use heatlab_core::martingale::{
    build_association, build_process, extend_process, mass_check, verify_distribution_equality,
    verify_reverse_martingale, Rational, DEFAULT_MARTINGALE_BUDGET,
};
use heatlab_core::presets::Preset;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn random_complex(rng: &mut ChaCha8Rng, eta: usize) -> GridFunction {
    let values = (0..2 * eta)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    GridFunction::new(CircleGrid::new(eta).unwrap(), values).unwrap()
}

fn random_field(rng: &mut ChaCha8Rng, eta: usize, tg: TimeGrid) -> SpaceTimeField {
    let rows = (0..=tg.n_steps())
        .map(|_| random_complex(rng, eta))
        .collect();
    SpaceTimeField::new(tg, rows).unwrap()
}

fn mixing_bound() -> Outcome {
    let mut checked = 0;
    for n_states in 2..=9 {
        let gaps = CyclicChain::new(n_states).unwrap().tv_gaps_exact(200);
        let general = MixingBound::new(n_states, BoundVariant::General).unwrap();
        let odd =
            (n_states % 2 == 1).then(|| MixingBound::new(n_states, BoundVariant::Odd).unwrap());
        for (n, gap) in gaps.iter().enumerate().skip(1) {
            ensure(general.holds_exact(gap, n), || {
                format!("N={n_states}, n={n}: gap above eps_n")
            })?;
            if let Some(b) = &odd {
                ensure(b.holds_exact(gap, n), || {
                    format!("N={n_states}, n={n}: gap above delta_n")
                })?;
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} exact comparisons"))
}

fn coupling_tail() -> Outcome {
    let trials = 100_000u64;
    let mut worst_z: f64 = 0.0;
    for n_states in [3usize, 5, 7] {
        let m = n_states - 1;
        let n_max = 20 * m;
        let exact = coupling_tail_exact(n_states, 0, n_max).map_err(|e| e.to_string())?;
        let pow = Pow::pow(BigInt::from(3), m as u32);
        let a = BigRational::new(&pow - 1, pow);
        for k in 0..=20usize {
            let bound = Pow::pow(&a, k as u32);
            ensure(exact.tail[k * m] <= bound, || {
                format!("N={n_states}: P(T > {}) above (1-rho)^{k}", k * m)
            })?;
        }
        let mc = simulate_meeting_time(n_states, 0, trials, n_max, 7).map_err(|e| e.to_string())?;
        let exact = exact.to_f64();
        for n in 0..=n_max {
            let p = exact.tail[n];
            let se = (p * (1.0 - p) / trials as f64).sqrt();
            let dev = (mc.tail[n] - p).abs();
            ensure(dev <= 4.0 * se, || {
                format!(
                    "N={n_states}, n={n}: |{} - {p}| > 4 se = {}",
                    mc.tail[n],
                    4.0 * se
                )
            })?;
            if se > 0.0 {
                worst_z = worst_z.max(dev / se);
            }
        }
    }
    Ok(format!("largest deviation {worst_z:.2} standard errors"))
}

fn threshold_formula() -> Outcome {
    let n = steps_to_equilibrium(5, 1e-3, BoundVariant::General).map_err(|e| e.to_string())?;
    ensure(n == 2229, || format!("steps_to_equilibrium(5, 1e-3) = {n}"))?;
    let gap = CyclicChain::new(5).unwrap().tv_gap_exact(n as usize);
    ensure(gap <= BigRational::new(1.into(), 1000.into()), || {
        "gap at n* above 1e-3".into()
    })?;
    let eps: Vec<f64> = (0..=200)
        .map(|i| 10f64.powf(-12.0 + 11.99 * i as f64 / 200.0))
        .collect();
    for eta in 3..=12 {
        let mut variants = vec![BoundVariant::General];
        if eta % 2 == 1 {
            variants.push(BoundVariant::Odd);
        }
        for v in variants {
            let steps: Vec<u64> = eps
                .iter()
                .map(|&e| steps_to_equilibrium(eta, e, v).unwrap())
                .collect();
            ensure(steps.windows(2).all(|w| w[1] <= w[0]), || {
                format!("eta={eta}: not monotone in eps")
            })?;
        }
    }
    let log10 = (gap.numer().bits() as f64 - gap.denom().bits() as f64) * 2f64.log10();
    Ok(format!("n* = {n}, gap(n*) about 1e{log10:.0}"))
}

fn calculus_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    for eta in [4, 16, 64] {
        for _ in 0..100 {
            let g = random_complex(&mut rng, eta);
            let h = random_complex(&mut rng, eta);
            worst = worst.max(
                calculus_identity_check(&g, &h)
                    .map_err(|e| e.to_string())?
                    .max_residual(),
            );
        }
        let tg = TimeGrid::new(8, 16).unwrap();
        for _ in 0..10 {
            let g = random_field(&mut rng, eta, tg);
            let h = random_field(&mut rng, eta, tg);
            worst = worst.max(
                space_time_identity_check(&g, &h)
                    .map_err(|e| e.to_string())?
                    .max_residual(),
            );
        }
    }
    ensure(worst <= 1e-12, || format!("max residual {worst:e}"))?;
    Ok(format!("max residual {worst:.2e}"))
}

fn fourier_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut round_trip, mut identities): (f64, f64) = (0.0, 0.0);
    for eta in [4, 16, 32, 64] {
        for _ in 0..25 {
            let f = random_complex(&mut rng, eta);
            round_trip = round_trip.max(inverse(&fourier_coeffs(&f)).max_abs_diff(&f));
            identities = identities.max(derivative_coeff_identity_check(&f).max_residual());
            let r = restricted_coeff_identity_check(&f).map_err(|e| e.to_string())?;
            identities = identities.max(r.max_residual());
        }
    }
    ensure(round_trip <= 1e-10, || format!("round trip {round_trip:e}"))?;
    ensure(identities <= 1e-10, || {
        format!("coefficient identities {identities:e}")
    })?;
    for eta in [16usize, 64, 256] {
        let theta = symbols(eta, 1).map_err(|e| e.to_string())?.theta.re;
        let bound = PI * PI / (3.0 * (eta * eta) as f64);
        ensure((theta + 1.0).abs() <= bound, || {
            format!("eta={eta}: |theta+1| = {:e}", (theta + 1.0).abs())
        })?;
    }
    Ok(format!(
        "round trip {round_trip:.2e}, identities {identities:.2e}"
    ))
}

fn decay() -> Outcome {
    let mut detail = Vec::new();
    for preset in [Preset::ExpCos, Preset::CosHalfCos2] {
        let rep = decay_report(&preset.grid_function(64).unwrap()).map_err(|e| e.to_string())?;
        ensure(rep.passed(), || {
            format!("{preset}: {} violations", rep.violations.len())
        })?;
        detail.push(format!("{preset} F = {:.4}", rep.f_const));
    }
    Ok(detail.join(", "))
}

fn heat_vs_classical() -> Outcome {
    let p1 = SchemeParams::new(64, 256).unwrap();
    let p2 = SchemeParams::new(128, 1024).unwrap();
    let e1 = compare_to_classical(f64::cos, &p1, 1.0).map_err(|e| e.to_string())?;
    let e2 = compare_to_classical(f64::cos, &p2, 1.0).map_err(|e| e.to_string())?;
    ensure(e1 < 5e-3, || format!("sup error {e1:e}"))?;
    ensure(e1 / e2 >= 3.0, || format!("refinement ratio {}", e1 / e2))?;
    let g = Preset::CosHalfCos2.grid_function(64).unwrap();
    let sol = solve_spectral(&g, &p1, 1.0).map_err(|e| e.to_string())?;
    let at_zero = sol.values()[64].re;
    ensure((at_zero - 0.377036).abs() <= 5e-3, || {
        format!("value at 0: {at_zero}")
    })?;
    Ok(format!(
        "errors {e1:.3e} -> {e2:.3e} (ratio {:.2}), value at 0 {at_zero:.6}",
        e1 / e2
    ))
}

fn max_principle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let params = SchemeParams::new(32, 64).unwrap();
    ensure(params.is_stable(), || "params unstable".into())?;
    let grid = CircleGrid::new(32).unwrap();
    let (mut worst_excess, mut worst_drift): (f64, f64) = (0.0, 0.0);
    for _ in 0..20 {
        let values: Vec<f64> = (0..64).map(|_| rng.random_range(-3.0..5.0)).collect();
        let f = GridFunction::from_real(grid, &values).unwrap();
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mass = f.integrate();
        for row in HeatStepper::new(f, params).unwrap().take(10_001) {
            for v in row.values() {
                worst_excess = worst_excess.max(lo - v.re).max(v.re - hi);
            }
            worst_drift = worst_drift.max((row.integrate() - mass).norm());
        }
    }
    ensure(worst_excess <= 0.0, || {
        format!("row left [min f, max f] by {worst_excess:e}")
    })?;
    ensure(worst_drift <= 1e-10, || {
        format!("mass drift {worst_drift:e}")
    })?;
    Ok(format!("mass drift {worst_drift:.2e}"))
}

fn equilibrium() -> Outcome {
    let f = Preset::Cos.grid_function(64).unwrap();
    let gap = equilibrium_gap(&f, &SchemeParams::new(64, 256).unwrap(), 20.0)
        .map_err(|e| e.to_string())?;
    ensure(gap <= 1e-8, || format!("gap {gap:e}"))?;
    Ok(format!("gap {gap:.3e}"))
}

fn markov_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let grid = CircleGrid::new(16).unwrap();
    let mut worst: f64 = 0.0;
    let mut inputs = vec![GridFunction::indicator(grid, 0).unwrap()];
    for _ in 0..10 {
        let values: Vec<f64> = (0..32).map(|_| rng.random_range(0.0..1.0)).collect();
        inputs.push(GridFunction::from_real(grid, &values).unwrap());
    }
    for f in &inputs {
        worst = worst.max(
            markov_equivalence_check(f, 50)
                .map_err(|e| e.to_string())?
                .max_deviation,
        );
    }
    ensure(worst <= 1e-12, || format!("max deviation {worst:e}"))?;
    Ok(format!("max deviation {worst:.2e}"))
}

fn reverse_martingale() -> Outcome {
    let int = |n: u32| Rational::from_integer(BigInt::from(BigUint::from(n)));
    let mut runs = 0;
    for (eta, nu) in [(2usize, 1usize), (3, 2), (5, 3)] {
        let delta: Vec<Rational> = (0..eta).map(|i| int(u32::from(i == 0))).collect();
        let uniform: Vec<Rational> = (0..eta).map(|_| int(1)).collect();
        let ramp: Vec<Rational> = (0..eta)
            .map(|i| int(2u32.saturating_sub(i as u32)))
            .collect();
        for initial in [delta, uniform, ramp] {
            let p = build_process(&initial, nu).map_err(|e| e.to_string())?;
            let a =
                build_association(eta, nu, DEFAULT_MARTINGALE_BUDGET).map_err(|e| e.to_string())?;
            let counting = a.counting_check();
            ensure(counting.passed(), || {
                format!("({eta},{nu}) counting: {:?}", counting.failures)
            })?;
            let e = extend_process(&p, &a).map_err(|e| e.to_string())?;
            let rep = verify_reverse_martingale(&e);
            ensure(rep.passed(), || {
                format!("({eta},{nu}) martingale violations")
            })?;
            for t in 0..=nu {
                let d = verify_distribution_equality(&p, &e, t).map_err(|e| e.to_string())?;
                ensure(d.passed(), || {
                    format!("({eta},{nu}) distribution differs at t_index {t}")
                })?;
            }
            ensure(mass_check(&p, &e).iter().all(|(l, r)| l == r), || {
                format!("({eta},{nu}) mass")
            })?;
            runs += 1;
        }
    }
    Ok(format!("{runs} constructions verified exactly"))
}

type Criterion = (&'static str, fn() -> Outcome, Option<Duration>);

fn main() {
    let criteria: [Criterion; 11] = [
        ("mixing bound", mixing_bound, Some(Duration::from_secs(5))),
        (
            "coupling tail",
            coupling_tail,
            Some(Duration::from_secs(10)),
        ),
        ("threshold formula", threshold_formula, None),
        (
            "discrete calculus identities",
            calculus_suite,
            Some(Duration::from_secs(2)),
        ),
        ("fourier identities", fourier_suite, None),
        ("coefficient decay", decay, None),
        (
            "heat vs classical",
            heat_vs_classical,
            Some(Duration::from_secs(5)),
        ),
        ("maximum principle and conservation", max_principle, None),
        ("equilibrium", equilibrium, None),
        ("markov-heat equivalence", markov_equivalence, None),
        (
            "reverse martingale",
            reverse_martingale,
            Some(Duration::from_secs(10)),
        ),
    ];
    let mut failures = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut outcome = run();
        let elapsed = start.elapsed();
        if let (Ok(_), Some(limit)) = (&outcome, limit) {
            if elapsed > *limit {
                outcome = Err(format!("took {elapsed:.2?}, limit {limit:?}"));
            }
        }
        let (status, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        if outcome.is_err() {
            failures += 1;
        }
        println!(
            "criterion {:>2} {status} {name}: {detail} [{elapsed:.2?}]",
            i + 1
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
