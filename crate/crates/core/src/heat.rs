//! Explicit heat stepping on the circle grid and its spectral counterpart.
//!
//! One step of the scheme is `F ← F + (1/ν) ∂²F/∂x²` with the ±2 stencil
//! from [`GridFunction::d2_dx2`], i.e. the three-point convex combination
//!
//! ```text
//! out_j = w f_{j+2} + (1 - 2w) f_j + w f_{j-2},   w = η²/(4π²ν)
//! ```
//!
//! which is stable (all weights nonnegative) iff `η² <= 2π²ν`. Each grid
//! exponential `e^{ixm}` is an eigenfunction with multiplier
//! `1 + θ_η(m)/ν = 1 - 4w sin²(πm/η)`, so `k` steps can be taken in closed
//! form on the Fourier side.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

use crate::chain::{CyclicChain, Distribution};
use crate::fourier::{fourier_coeffs, inverse};
use crate::grid::{GridFunction, SpaceTimeField, TimeGrid};
use crate::{Error, Result};

/// Grid sizes and stencil weight of one explicit scheme.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SchemeParams {
    pub eta: usize,
    pub nu: usize,
    pub weight: f64,
    /// Weight was fixed directly rather than derived from (η, ν).
    pub pinned: bool,
}

impl SchemeParams {
    /// `w = η²/(4π²ν)`.
    pub fn new(eta: usize, nu: usize) -> Result<Self> {
        Self::check_sizes(eta, nu)?;
        let weight = (eta * eta) as f64 / (4.0 * PI * PI * nu as f64);
        Ok(Self {
            eta,
            nu,
            weight,
            pinned: false,
        })
    }

    /// Stencil weight fixed to `weight`; ν only sets the time unit.
    pub fn with_weight(eta: usize, nu: usize, weight: f64) -> Result<Self> {
        Self::check_sizes(eta, nu)?;
        if !(weight.is_finite() && weight >= 0.0) {
            return Err(Error::Domain(format!(
                "stencil weight must be >= 0, got {weight}"
            )));
        }
        Ok(Self {
            eta,
            nu,
            weight,
            pinned: true,
        })
    }

    /// The regime where the stencil is the cyclic chain kernel: `w = 1/3`.
    pub fn markov(eta: usize, nu: usize) -> Result<Self> {
        Self::with_weight(eta, nu, 1.0 / 3.0)
    }

    fn check_sizes(eta: usize, nu: usize) -> Result<()> {
        if eta == 0 || nu == 0 {
            return Err(Error::Domain(format!(
                "need eta, nu >= 1, got ({eta}, {nu})"
            )));
        }
        Ok(())
    }

    /// `η² <= 2π²ν` for derived weights, `w <= 1/2` for pinned ones.
    pub fn is_stable(&self) -> bool {
        if self.pinned {
            self.weight <= 0.5
        } else {
            ((self.eta * self.eta) as f64) <= 2.0 * PI * PI * self.nu as f64
        }
    }

    pub fn require_stable(&self) -> Result<()> {
        if self.is_stable() {
            Ok(())
        } else {
            Err(Error::Unstable(format!(
                "eta = {}, nu = {}: stencil weight {} > 1/2",
                self.eta, self.nu, self.weight
            )))
        }
    }

    /// Per-step Fourier multiplier of mode m.
    pub fn multiplier(&self, m: i64) -> f64 {
        let s = (PI * m as f64 / self.eta as f64).sin();
        1.0 - 4.0 * self.weight * s * s
    }

    /// `⌊νt⌋`, with `t` snapped onto the time grid before flooring.
    pub fn steps_for(&self, t: f64) -> Result<u64> {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::Domain(format!(
                "time must be finite and >= 0, got {t}"
            )));
        }
        Ok((self.nu as f64 * t + 1e-9).floor() as u64)
    }
}

/// One explicit step.
pub fn ftcs_step(f: &GridFunction, params: &SchemeParams) -> GridFunction {
    let w = params.weight;
    let centre = 1.0 - 2.0 * w;
    let n = f.len();
    let v = f.values();
    let values = (0..n)
        .map(|j| v[(j + 2) % n] * w + v[j] * centre + v[(j + n - 2) % n] * w)
        .collect();
    GridFunction::new(f.grid(), values).expect("same grid")
}

/// Yields the rows `F_0 = f, F_1, F_2, ...` of the explicit scheme.
#[derive(Debug, Clone)]
pub struct HeatStepper {
    params: SchemeParams,
    next: GridFunction,
}

impl HeatStepper {
    pub fn new(initial: GridFunction, params: SchemeParams) -> Result<Self> {
        check_grid(&initial, &params)?;
        Ok(Self {
            params,
            next: initial,
        })
    }
}

impl Iterator for HeatStepper {
    type Item = GridFunction;

    fn next(&mut self) -> Option<GridFunction> {
        let following = ftcs_step(&self.next, &self.params);
        Some(std::mem::replace(&mut self.next, following))
    }
}

fn check_grid(f: &GridFunction, params: &SchemeParams) -> Result<()> {
    if f.grid().eta() != params.eta {
        return Err(Error::Dimension {
            expected: 2 * params.eta,
            got: f.len(),
        });
    }
    Ok(())
}

/// Stored space-time solution of the explicit scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct HeatSolution {
    pub params: SchemeParams,
    pub field: SpaceTimeField,
    pub initial: GridFunction,
}

/// Runs `n_steps` explicit steps and keeps every row. Refused when
/// `(n_steps + 1) · 2η` exceeds `budget_cells`; use [`solve_streaming`]
/// for long horizons.
pub fn solve_time_domain(
    f: &GridFunction,
    params: &SchemeParams,
    n_steps: usize,
    budget_cells: usize,
) -> Result<HeatSolution> {
    let cells = n_steps
        .checked_add(1)
        .and_then(|rows| rows.checked_mul(f.len()))
        .unwrap_or(usize::MAX);
    if cells > budget_cells {
        return Err(Error::Resource(format!(
            "{cells} space-time cells requested, budget is {budget_cells}"
        )));
    }
    let rows: Vec<GridFunction> = HeatStepper::new(f.clone(), *params)?
        .take(n_steps + 1)
        .collect();
    let field = SpaceTimeField::new(TimeGrid::extended(params.nu, n_steps)?, rows)?;
    Ok(HeatSolution {
        params: *params,
        field,
        initial: f.clone(),
    })
}

/// Final row plus requested snapshots of a streamed run.
#[derive(Debug, Clone, PartialEq)]
pub struct StreamedSolution {
    pub last: GridFunction,
    pub snapshots: Vec<(usize, GridFunction)>,
}

/// Runs `n_steps` steps keeping only the last row and the rows whose
/// indices appear in `snapshots`.
pub fn solve_streaming(
    f: &GridFunction,
    params: &SchemeParams,
    n_steps: usize,
    snapshots: &[usize],
) -> Result<StreamedSolution> {
    let mut kept = Vec::new();
    let mut last = f.clone();
    for (k, row) in HeatStepper::new(f.clone(), *params)?
        .take(n_steps + 1)
        .enumerate()
    {
        if snapshots.contains(&k) {
            kept.push((k, row.clone()));
        }
        last = row;
    }
    Ok(StreamedSolution {
        last,
        snapshots: kept,
    })
}

fn pow_u64(mut base: f64, mut exp: u64) -> f64 {
    let mut acc = 1.0;
    while exp > 0 {
        if exp & 1 == 1 {
            acc *= base;
        }
        base *= base;
        exp >>= 1;
    }
    acc
}

/// `⌊νt⌋` explicit steps taken in closed form: each coefficient `f̂(m)` is
/// scaled by `(1 + θ_η(m)/ν)^⌊νt⌋` and the result inverted.
pub fn solve_spectral(f: &GridFunction, params: &SchemeParams, t: f64) -> Result<GridFunction> {
    check_grid(f, params)?;
    let steps = params.steps_for(t)?;
    let coeffs =
        fourier_coeffs(f).map_modes(|m| Complex64::new(pow_u64(params.multiplier(m), steps), 0.0));
    Ok(inverse(&coeffs))
}

/// Truncated Fourier-series solution of `G_t = G_xx` on the circle.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalSolution {
    /// `F(g)(m)` for `m = -m_max..=m_max`.
    pub coeffs: Vec<Complex64>,
    pub m_max: usize,
    /// `max_{1<=|m|<=m_max} m² |F(g)(m)|`.
    pub decay_const: f64,
    /// `Σ_{|m|>m_max} C/m² <= 2C/m_max`.
    pub tail_bound: f64,
    /// `|g(-π) - g(π)| > 1e-8`: the data is not periodic.
    pub periodicity_warning: bool,
}

impl ClassicalSolution {
    pub fn coeff(&self, m: i64) -> Option<Complex64> {
        let idx = m + self.m_max as i64;
        (0..self.coeffs.len() as i64)
            .contains(&idx)
            .then(|| self.coeffs[idx as usize])
    }

    /// `G(x, t) = Σ_{|m|<=m_max} e^{-m²t} F(g)(m) e^{imx}`.
    pub fn evaluate(&self, x: f64, t: f64) -> Complex64 {
        let mm = self.m_max as i64;
        (-mm..=mm)
            .zip(&self.coeffs)
            .map(|(m, c)| {
                c * (-(m * m) as f64 * t).exp() * Complex64::from_polar(1.0, m as f64 * x)
            })
            .sum()
    }
}

/// Fourier coefficients of a smooth periodic `g` by the trapezoid rule on
/// `max(16 m_max, 64)` points, which is spectrally accurate for periodic data.
pub fn classical_solution(g: impl Fn(f64) -> f64, m_max: usize) -> Result<ClassicalSolution> {
    if m_max == 0 {
        return Err(Error::Domain("need m_max >= 1".into()));
    }
    let q = (16 * m_max).max(64);
    let samples: Vec<f64> = (0..q)
        .map(|k| g(-PI + 2.0 * PI * k as f64 / q as f64))
        .collect();
    let mm = m_max as i64;
    let coeffs: Vec<Complex64> = (-mm..=mm)
        .map(|m| {
            samples
                .iter()
                .enumerate()
                .map(|(k, &v)| {
                    let y = -PI + 2.0 * PI * k as f64 / q as f64;
                    Complex64::from_polar(v, -(m as f64) * y)
                })
                .sum::<Complex64>()
                / q as f64
        })
        .collect();
    let decay_const = (-mm..=mm)
        .zip(&coeffs)
        .filter(|(m, _)| *m != 0)
        .map(|(m, c)| (m * m) as f64 * c.norm())
        .fold(0.0, f64::max);
    Ok(ClassicalSolution {
        coeffs,
        m_max,
        decay_const,
        tail_bound: 2.0 * decay_const / m_max as f64,
        periodicity_warning: (g(-PI) - g(PI)).abs() > 1e-8,
    })
}

/// Machine-readable result of [`compare_to_classical`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub eta: usize,
    pub nu: usize,
    pub t: f64,
    pub sup_error: f64,
    pub stable: bool,
    pub runtime_ms: u64,
}

/// `sup_j |solve_spectral(sample(g), t)(x_j) - G(x_j, t)|`.
pub fn compare_to_classical(g: impl Fn(f64) -> f64, params: &SchemeParams, t: f64) -> Result<f64> {
    params.require_stable()?;
    let f = GridFunction::sample(&g, params.eta)?;
    let discrete = solve_spectral(&f, params, t)?;
    let classical = classical_solution(&g, params.eta)?;
    Ok(f.grid()
        .points()
        .zip(discrete.values())
        .map(|(x, v)| (v - classical.evaluate(x, t)).norm())
        .fold(0.0, f64::max))
}

/// `sup_x |F(x, t) - (1/2π) ∫ f dμ_η|`.
///
/// The ±2 stencil conserves the even and odd sublattice means separately,
/// so this tends to zero only when those two means agree.
pub fn equilibrium_gap(f: &GridFunction, params: &SchemeParams, t: f64) -> Result<f64> {
    params.require_stable()?;
    let mean = f.mean();
    let sol = solve_spectral(f, params, t)?;
    Ok(sol
        .values()
        .iter()
        .map(|v| (v - mean).norm())
        .fold(0.0, f64::max))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EquivalenceReport {
    pub eta: usize,
    pub steps: usize,
    pub max_deviation: f64,
}

/// Compares heat stepping at `w = 1/3` on the even sublattice with the
/// η-state cyclic chain evolving the sublattice values, for every step
/// `k <= n_steps`. The even-sublattice values must be real and nonnegative.
pub fn markov_equivalence_check(f: &GridFunction, n_steps: usize) -> Result<EquivalenceReport> {
    let eta = f.grid().eta();
    if !eta.is_multiple_of(2) {
        return Err(Error::Parity(format!(
            "equivalence check needs even eta, got {eta}"
        )));
    }
    let sub: Vec<f64> = f.values().iter().step_by(2).map(|v| v.re).collect();
    if f.values().iter().step_by(2).any(|v| v.im != 0.0) {
        return Err(Error::Domain("sublattice values must be real".into()));
    }
    let chain = CyclicChain::new(eta)?;
    let params = SchemeParams::markov(eta, 1)?;
    let mut max_deviation: f64 = 0.0;
    let heat = HeatStepper::new(f.clone(), params)?;
    let walk = chain.trajectory(Distribution::new(sub)?)?;
    for (row, dist) in heat.zip(walk).take(n_steps + 1) {
        for (i, w) in dist.weights().iter().enumerate() {
            max_deviation = max_deviation.max((row.values()[2 * i] - w).norm());
        }
    }
    Ok(EquivalenceReport {
        eta,
        steps: n_steps,
        max_deviation,
    })
}
