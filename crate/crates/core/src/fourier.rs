//! Discrete Fourier coefficients on the circle grid and the multiplier
//! symbols of the discrete derivative operators.
//!
//! Coefficients are indexed by `m ∈ Z_η = {-η, …, η-1}` and computed by the
//! direct sum `f̂(m) = (1/2η) Σ_j f(x_j) e^{-i x_j m}`. The exponential is the
//! ordinary one sampled at the grid points; since `x_j m` is a rational
//! multiple of π, phases are looked up in a table of the 2η-th roots of
//! unity after exact integer reduction.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

use crate::grid::{CircleGrid, GridFunction, Shift};
use crate::{Error, Result};

/// `e^{iπk/η}` for `k = 0..2η`.
fn roots_of_unity(eta: usize) -> Vec<Complex64> {
    let n = 2 * eta;
    (0..n)
        .map(|k| Complex64::from_polar(1.0, PI * k as f64 / eta as f64))
        .collect()
}

/// Index into [`roots_of_unity`] for `e^{i x_j m}`: `x_j m = π m (j - η)/η`.
fn phase_index(eta: usize, j: usize, m: i64) -> usize {
    let n = 2 * eta as i64;
    (m * (j as i64 - eta as i64)).rem_euclid(n) as usize
}

fn check_mode(eta: usize, m: i64) -> Result<()> {
    let e = eta as i64;
    if m < -e || m >= e {
        return Err(Error::Range(format!("mode {m} not in [-{eta}, {eta})")));
    }
    Ok(())
}

/// Samples of `x ↦ e^{ixm}` on the η grid.
pub fn exp_grid(eta: usize, m: i64) -> Result<GridFunction> {
    let grid = CircleGrid::new(eta)?;
    check_mode(eta, m)?;
    let table = roots_of_unity(eta);
    let values = (0..grid.len())
        .map(|j| table[phase_index(eta, j, m)])
        .collect();
    GridFunction::new(grid, values)
}

/// Discrete Fourier coefficients, `m = -η..η-1`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierCoeffs {
    eta: usize,
    coeffs: Vec<Complex64>,
}

impl FourierCoeffs {
    pub fn new(eta: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != 2 * eta {
            return Err(Error::Dimension {
                expected: 2 * eta,
                got: coeffs.len(),
            });
        }
        Ok(Self { eta, coeffs })
    }

    /// Coefficient vector with a single nonzero mode.
    pub fn delta(eta: usize, m: i64, value: Complex64) -> Result<Self> {
        check_mode(eta, m)?;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * eta];
        coeffs[(m + eta as i64) as usize] = value;
        Ok(Self { eta, coeffs })
    }

    pub fn eta(&self) -> usize {
        self.eta
    }

    pub fn modes(&self) -> std::ops::Range<i64> {
        -(self.eta as i64)..self.eta as i64
    }

    pub fn get(&self, m: i64) -> Option<Complex64> {
        let idx = m + self.eta as i64;
        (0..self.coeffs.len() as i64)
            .contains(&idx)
            .then(|| self.coeffs[idx as usize])
    }

    pub fn set(&mut self, m: i64, value: Complex64) -> Result<()> {
        check_mode(self.eta, m)?;
        self.coeffs[(m + self.eta as i64) as usize] = value;
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.modes().zip(self.coeffs.iter().copied())
    }

    /// Multiplies each coefficient by `f(m)`.
    pub fn map_modes(&self, f: impl Fn(i64) -> Complex64) -> Self {
        let coeffs = self.iter().map(|(m, c)| c * f(m)).collect();
        Self {
            eta: self.eta,
            coeffs,
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// `f̂(m) = (1/2π) ∫ f(y) e^{-iym} dμ_η(y)`.
pub fn fourier_coeffs(f: &GridFunction) -> FourierCoeffs {
    let eta = f.grid().eta();
    let table = roots_of_unity(eta);
    let n = 2 * eta;
    let norm = 1.0 / n as f64;
    let coeffs = (-(eta as i64)..eta as i64)
        .map(|m| {
            f.values()
                .iter()
                .enumerate()
                .map(|(j, v)| v * table[(n - phase_index(eta, j, m)) % n])
                .sum::<Complex64>()
                * norm
        })
        .collect();
    FourierCoeffs { eta, coeffs }
}

/// `f(x_j) = Σ_m c(m) e^{i x_j m}`.
pub fn inverse(c: &FourierCoeffs) -> GridFunction {
    let eta = c.eta;
    let grid = CircleGrid::new(eta).expect("coefficients carry eta >= 1");
    let table = roots_of_unity(eta);
    let values = (0..grid.len())
        .map(|j| {
            c.iter()
                .map(|(m, cm)| cm * table[phase_index(eta, j, m)])
                .sum()
        })
        .collect();
    GridFunction::new(grid, values).expect("length 2 eta")
}

/// Multiplier of the central difference: `φ_η(m) = -(iη/π) sin(πm/η)`.
///
/// `d_dx` acts on `e^{ixm}` as multiplication by `φ_η(-m)`.
pub fn phi(eta: usize, m: i64) -> Result<Complex64> {
    if m.unsigned_abs() as usize > eta {
        return Err(Error::Range(format!("phi needs |m| <= {eta}, got {m}")));
    }
    let e = eta as f64;
    let z = Complex64::from_polar(1.0, -PI * m as f64 / e)
        - Complex64::from_polar(1.0, PI * m as f64 / e);
    Ok(z * (e / (2.0 * PI)))
}

/// Closed form `-(η/π)² sin²(πm/η)`; valid for every integer m.
pub fn theta_closed_form(eta: usize, m: i64) -> f64 {
    let e = eta as f64;
    let s = (PI * m as f64 / e).sin();
    -(e / PI).powi(2) * s * s
}

/// Symbols of the restricted derivative operators at one mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymbolValues {
    pub eta: usize,
    pub m: i64,
    pub phi: Complex64,
    pub psi: Complex64,
    pub u: Complex64,
    pub theta: Complex64,
}

/// `φ_η`, `ψ_η(m) = (η/2π)(1 - e^{2πim/η})`, `U_η(m) = e^{-2πim/η}` and
/// `θ_η = ψ_η² U_η` for `|m| <= η/2`.
pub fn symbols(eta: usize, m: i64) -> Result<SymbolValues> {
    if 2 * m.unsigned_abs() as usize > eta {
        return Err(Error::Range(format!(
            "restricted symbols need |m| <= {eta}/2, got {m}"
        )));
    }
    let e = eta as f64;
    let angle = 2.0 * PI * m as f64 / e;
    let psi = (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, angle)) * (e / (2.0 * PI));
    let u = Complex64::from_polar(1.0, -angle);
    Ok(SymbolValues {
        eta,
        m,
        phi: phi(eta, m)?,
        psi,
        u,
        theta: psi * psi * u,
    })
}

/// Worst-case residuals of a coefficient identity check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityReport {
    pub first_order: f64,
    pub second_order: f64,
}

impl IdentityReport {
    pub fn max_residual(&self) -> f64 {
        self.first_order.max(self.second_order)
    }
}

/// Checks `(f')^(m) = -φ(m) f̂(m)` and `(f'')^(m) = φ(m)² f̂(m)` on `Z_η`.
pub fn derivative_coeff_identity_check(f: &GridFunction) -> IdentityReport {
    let eta = f.grid().eta();
    let fh = fourier_coeffs(f);
    let d1 = fourier_coeffs(&f.d_dx());
    let d2 = fourier_coeffs(&f.d2_dx2());
    let mut first: f64 = 0.0;
    let mut second: f64 = 0.0;
    for (m, c) in fh.iter() {
        let p = phi(eta, m).expect("m in Z_eta");
        first = first.max((d1.get(m).unwrap() + p * c).norm());
        second = second.max((d2.get(m).unwrap() - p * p * c).norm());
    }
    IdentityReport {
        first_order: first,
        second_order: second,
    }
}

/// Checks, on the η/2 grid, `(restrict f')^(m) = -ψ(m) (restrict f^rsh)^(m)`
/// and `(restrict f'')^(m) = ψ(m)² U(m) (restrict f)^(m)` for `m ∈ Z_{η/2}`.
pub fn restricted_coeff_identity_check(f: &GridFunction) -> Result<IdentityReport> {
    let eta = f.grid().eta();
    let fbar = fourier_coeffs(&f.restrict()?);
    let rsh_bar = fourier_coeffs(&f.shift(Shift::Right).restrict()?);
    let d1_bar = fourier_coeffs(&f.d_dx().restrict()?);
    let d2_bar = fourier_coeffs(&f.d2_dx2().restrict()?);
    let mut first: f64 = 0.0;
    let mut second: f64 = 0.0;
    for (m, c) in fbar.iter() {
        let s = symbols(eta, m)?;
        first = first.max((d1_bar.get(m).unwrap() + s.psi * rsh_bar.get(m).unwrap()).norm());
        second = second.max((d2_bar.get(m).unwrap() - s.theta * c).norm());
    }
    Ok(IdentityReport {
        first_order: first,
        second_order: second,
    })
}

/// A mode whose restricted coefficient exceeds the decay bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayViolation {
    pub m: i64,
    pub coeff_abs: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayReport {
    /// `max_m |(restrict f'')^(m)|`.
    pub f_const: f64,
    pub violations: Vec<DecayViolation>,
}

impl DecayReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Relative slack for the decay comparison. At `m = -η/2` the bound is
/// attained with equality, so plain `<=` would flip on the last ulp.
const DECAY_SLACK: f64 = 1e-12;

/// Checks `|(restrict f)^(m)| <= (π²/4) F / m²` for `m ≠ 0`, where F bounds
/// the restricted second-derivative coefficients. The constant π²/4 comes
/// from `|ψ_η(m)| >= 2|m|/π` on `|m| <= η/2`.
pub fn decay_report(f: &GridFunction) -> Result<DecayReport> {
    let fbar = fourier_coeffs(&f.restrict()?);
    let d2_bar = fourier_coeffs(&f.d2_dx2().restrict()?);
    let f_const = d2_bar.iter().map(|(_, c)| c.norm()).fold(0.0, f64::max);
    let violations = fbar
        .iter()
        .filter(|&(m, _)| m != 0)
        .filter_map(|(m, c)| {
            let bound = PI * PI / 4.0 * f_const / (m * m) as f64;
            let coeff_abs = c.norm();
            (coeff_abs > bound * (1.0 + DECAY_SLACK) + f64::EPSILON * f_const).then_some(
                DecayViolation {
                    m,
                    coeff_abs,
                    bound,
                },
            )
        })
        .collect();
    Ok(DecayReport {
        f_const,
        violations,
    })
}
