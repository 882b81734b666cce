//! Circle and time grids, central differences, shifts and restriction.
//!
//! The circle grid of half-size η has the 2η points `x_j = -π + πj/η`,
//! each carrying weight π/η, so the total measure is 2π. All index
//! arithmetic is taken mod 2η; the boundary clauses of a finite-interval
//! central difference coincide with this cyclic wraparound.

use num_complex::Complex64;
use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CircleGrid {
    eta: usize,
}

impl CircleGrid {
    /// Grid with `2 * eta` points. `eta = 1` is allowed so that the even
    /// sublattice of the η = 2 grid is itself a grid.
    pub fn new(eta: usize) -> Result<Self> {
        if eta == 0 {
            return Err(Error::Domain("circle grid needs eta >= 1".into()));
        }
        Ok(Self { eta })
    }

    pub fn eta(&self) -> usize {
        self.eta
    }

    pub fn len(&self) -> usize {
        2 * self.eta
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Cell width and counting-measure weight, π/η.
    pub fn weight(&self) -> f64 {
        PI / self.eta as f64
    }

    pub fn point(&self, j: usize) -> f64 {
        -PI + PI * j as f64 / self.eta as f64
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(|j| self.point(j))
    }

    pub fn total_measure(&self) -> f64 {
        self.weight() * self.len() as f64
    }

    /// Index of the cell containing `x`, after reducing `x` into [-π, π).
    pub fn cell_of(&self, x: f64) -> usize {
        let u = (x + PI).rem_euclid(2.0 * PI);
        ((u / self.weight() + 1e-9).floor() as usize) % self.len()
    }
}

/// Direction of a cyclic shift.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shift {
    /// `f^lsh(x_j) = f(x_{j+1})`
    Left,
    /// `f^rsh(x_j) = f(x_{j-1})`
    Right,
}

/// Complex function on a [`CircleGrid`], one value per cell.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: CircleGrid,
    values: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(grid: CircleGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Dimension {
                expected: grid.len(),
                got: values.len(),
            });
        }
        Ok(Self { grid, values })
    }

    pub fn from_real(grid: CircleGrid, values: &[f64]) -> Result<Self> {
        Self::new(
            grid,
            values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        )
    }

    pub fn from_fn(grid: CircleGrid, f: impl Fn(f64) -> Complex64) -> Self {
        let values = grid.points().map(f).collect();
        Self { grid, values }
    }

    /// Samples a real function at the grid points.
    pub fn sample(g: impl Fn(f64) -> f64, eta: usize) -> Result<Self> {
        let grid = CircleGrid::new(eta)?;
        Ok(Self::from_fn(grid, |x| Complex64::new(g(x), 0.0)))
    }

    pub fn constant(grid: CircleGrid, c: Complex64) -> Self {
        Self {
            grid,
            values: vec![c; grid.len()],
        }
    }

    pub fn indicator(grid: CircleGrid, cell: usize) -> Result<Self> {
        if cell >= grid.len() {
            return Err(Error::Range(format!(
                "cell {cell} not in [0, {})",
                grid.len()
            )));
        }
        let mut values = vec![Complex64::new(0.0, 0.0); grid.len()];
        values[cell] = Complex64::new(1.0, 0.0);
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> CircleGrid {
        self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, j: isize) -> Complex64 {
        let n = self.values.len() as isize;
        self.values[j.rem_euclid(n) as usize]
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map(|v| v * c)
    }

    pub fn conj(&self) -> Self {
        self.map(|v| v.conj())
    }

    /// `(η/2π)(f(x_{j+1}) - f(x_{j-1}))`, cyclic.
    pub fn d_dx(&self) -> Self {
        let n = self.values.len();
        let c = self.grid.eta as f64 / (2.0 * PI);
        let values = (0..n)
            .map(|j| (self.values[(j + 1) % n] - self.values[(j + n - 1) % n]) * c)
            .collect();
        Self {
            grid: self.grid,
            values,
        }
    }

    /// Second discrete derivative, the ±2 stencil `(η/2π)² (f_{j+2} - 2f_j + f_{j-2})`.
    pub fn d2_dx2(&self) -> Self {
        self.d_dx().d_dx()
    }

    pub fn shift(&self, dir: Shift) -> Self {
        let n = self.values.len();
        let values = match dir {
            Shift::Left => (0..n).map(|j| self.values[(j + 1) % n]).collect(),
            Shift::Right => (0..n).map(|j| self.values[(j + n - 1) % n]).collect(),
        };
        Self {
            grid: self.grid,
            values,
        }
    }

    /// Integral against the counting measure: `(π/η) Σ_j f(x_j)`.
    pub fn integrate(&self) -> Complex64 {
        self.values.iter().sum::<Complex64>() * self.grid.weight()
    }

    /// Normalised mean `(1/2π) ∫ f`.
    pub fn mean(&self) -> Complex64 {
        self.integrate() / (2.0 * PI)
    }

    /// Keeps the even-index points, giving a function on the η/2 grid.
    pub fn restrict(&self) -> Result<Self> {
        let eta = self.grid.eta;
        if !eta.is_multiple_of(2) {
            return Err(Error::Parity(format!(
                "restriction needs even eta, got {eta}"
            )));
        }
        let grid = CircleGrid::new(eta / 2)?;
        let values = self.values.iter().step_by(2).copied().collect();
        Ok(Self { grid, values })
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        assert_eq!(
            self.grid, other.grid,
            "grid functions live on different grids"
        );
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Self {
            grid: self.grid,
            values,
        }
    }
}

impl Add for &GridFunction {
    type Output = GridFunction;
    fn add(self, rhs: Self) -> GridFunction {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &GridFunction {
    type Output = GridFunction;
    fn sub(self, rhs: Self) -> GridFunction {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Mul for &GridFunction {
    type Output = GridFunction;
    fn mul(self, rhs: Self) -> GridFunction {
        self.zip_with(rhs, |a, b| a * b)
    }
}

/// Uniform time grid `t_k = k/ν`, `k = 0..=n_steps`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TimeGrid {
    nu: usize,
    n_steps: usize,
}

impl TimeGrid {
    /// Horizon limited to ν² steps.
    pub fn new(nu: usize, n_steps: usize) -> Result<Self> {
        let g = Self::extended(nu, n_steps)?;
        if n_steps > nu.saturating_mul(nu) {
            return Err(Error::Domain(format!(
                "{n_steps} steps exceed the nu^2 = {} horizon",
                nu.saturating_mul(nu)
            )));
        }
        Ok(g)
    }

    /// Any horizon.
    pub fn extended(nu: usize, n_steps: usize) -> Result<Self> {
        if nu == 0 {
            return Err(Error::Domain("time grid needs nu >= 1".into()));
        }
        Ok(Self { nu, n_steps })
    }

    pub fn nu(&self) -> usize {
        self.nu
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn dt(&self) -> f64 {
        1.0 / self.nu as f64
    }

    pub fn time(&self, k: usize) -> f64 {
        k as f64 / self.nu as f64
    }
}

/// Space-time data: row `k` is the slice at `t_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceTimeField {
    tgrid: TimeGrid,
    rows: Vec<GridFunction>,
}

impl SpaceTimeField {
    pub fn new(tgrid: TimeGrid, rows: Vec<GridFunction>) -> Result<Self> {
        if rows.len() != tgrid.n_steps + 1 {
            return Err(Error::Dimension {
                expected: tgrid.n_steps + 1,
                got: rows.len(),
            });
        }
        if let Some(first) = rows.first() {
            let g = first.grid();
            if rows.iter().any(|r| r.grid() != g) {
                return Err(Error::Domain("rows live on different circle grids".into()));
            }
        }
        Ok(Self { tgrid, rows })
    }

    pub fn from_fn(grid: CircleGrid, tgrid: TimeGrid, f: impl Fn(f64, f64) -> Complex64) -> Self {
        let rows = (0..=tgrid.n_steps)
            .map(|k| {
                let t = tgrid.time(k);
                GridFunction::from_fn(grid, |x| f(x, t))
            })
            .collect();
        Self { tgrid, rows }
    }

    pub fn grid(&self) -> CircleGrid {
        self.rows[0].grid()
    }

    pub fn tgrid(&self) -> TimeGrid {
        self.tgrid
    }

    pub fn rows(&self) -> &[GridFunction] {
        &self.rows
    }

    pub fn row(&self, k: usize) -> &GridFunction {
        &self.rows[k]
    }

    fn map_rows(&self, f: impl Fn(&GridFunction) -> GridFunction) -> Self {
        Self {
            tgrid: self.tgrid,
            rows: self.rows.iter().map(f).collect(),
        }
    }

    pub fn d_dx(&self) -> Self {
        self.map_rows(GridFunction::d_dx)
    }

    pub fn d2_dx2(&self) -> Self {
        self.map_rows(GridFunction::d2_dx2)
    }

    pub fn shift_x(&self, dir: Shift) -> Self {
        self.map_rows(|r| r.shift(dir))
    }

    /// Cyclic shift in time: left takes row `k+1` into row `k`.
    pub fn shift_t(&self, dir: Shift) -> Self {
        let n = self.rows.len();
        let rows = (0..n)
            .map(|k| match dir {
                Shift::Left => self.rows[(k + 1) % n].clone(),
                Shift::Right => self.rows[(k + n - 1) % n].clone(),
            })
            .collect();
        Self {
            tgrid: self.tgrid,
            rows,
        }
    }

    /// Forward difference `ν (F_{k+1} - F_k)`; the last row is zero.
    pub fn d_dt(&self) -> Result<Self> {
        if self.tgrid.n_steps == 0 {
            return Err(Error::Domain(
                "time derivative needs at least one step".into(),
            ));
        }
        let nu = Complex64::new(self.tgrid.nu as f64, 0.0);
        let last = self.rows.len() - 1;
        let rows = (0..self.rows.len())
            .map(|k| {
                if k == last {
                    GridFunction::constant(self.grid(), Complex64::new(0.0, 0.0))
                } else {
                    (&self.rows[k + 1] - &self.rows[k]).scale(nu)
                }
            })
            .collect();
        Ok(Self {
            tgrid: self.tgrid,
            rows,
        })
    }

    /// Integral against `μ_η × λ_ν` (time weight 1/ν per row).
    pub fn integrate(&self) -> Complex64 {
        self.rows
            .iter()
            .map(GridFunction::integrate)
            .sum::<Complex64>()
            * self.tgrid.dt()
    }

    pub fn pointwise(
        &self,
        other: &Self,
        f: impl Fn(&GridFunction, &GridFunction) -> GridFunction,
    ) -> Self {
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| f(a, b))
            .collect();
        Self {
            tgrid: self.tgrid,
            rows,
        }
    }
}
