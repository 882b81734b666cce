//! Exact construction of a reverse martingale driven by the cyclic chain.
//!
//! The process `F(i/η, j/ν) = (π K^j)(i)` lives on η states and ν+1 time
//! levels. Going backwards in time every cell is split in three: a cell at
//! position `k'` with associated state `s` has children `3k'` (first kind,
//! state `s`), `3k'+1` and `3k'+2` (second kind, states `s-1` and `s+1`
//! mod η). Row `r` of the extension holds `F(state, ν-r)` on `3^r η` cells
//! and is constant on the cells of the algebra at filtration level `ν-r`.
//!
//! Rows are indexed by `r`; filtration levels by `i = ν - r`. Everything is
//! exact.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;

use crate::chain::{CyclicChain, Distribution};
use crate::{Error, Result};

pub type Rational = BigRational;

/// Cells allowed in the finest row of an association table.
pub const DEFAULT_MARTINGALE_BUDGET: usize = 1_000_000;

/// `F[i][j]` for states `i < η` and time indices `j <= ν`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProcessGrid {
    eta: usize,
    nu: usize,
    columns: Vec<Vec<Rational>>,
}

impl ProcessGrid {
    pub fn eta(&self) -> usize {
        self.eta
    }

    pub fn nu(&self) -> usize {
        self.nu
    }

    pub fn get(&self, state: usize, j: usize) -> &Rational {
        &self.columns[j][state]
    }

    /// `F(·, j/ν)`.
    pub fn column(&self, j: usize) -> &[Rational] {
        &self.columns[j]
    }

    /// Total mass `λ` of the initial vector.
    pub fn mass(&self) -> Rational {
        self.columns[0].iter().sum()
    }

    /// `max_i |F(i, 1) - λ/η|`.
    pub fn terminal_deviation(&self) -> Rational {
        let target = self.mass() / Rational::from_integer(BigInt::from(self.eta));
        self.columns[self.nu]
            .iter()
            .map(|v| (v - &target).abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }
}

/// Evolves `initial` through ν exact chain steps.
pub fn build_process(initial: &[Rational], nu: usize) -> Result<ProcessGrid> {
    let chain = CyclicChain::new(initial.len())?;
    let start = Distribution::new(initial.to_vec())?;
    let columns = chain
        .trajectory(start)?
        .take(nu + 1)
        .map(Distribution::into_weights)
        .collect();
    Ok(ProcessGrid {
        eta: initial.len(),
        nu,
        columns,
    })
}

/// Algebra `E_{η,i}` generated by the intervals `[k/(3^{ν-i}η), (k+1)/(3^{ν-i}η))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReverseFiltration {
    pub eta: usize,
    pub nu: usize,
}

impl ReverseFiltration {
    pub fn new(eta: usize, nu: usize) -> Self {
        Self { eta, nu }
    }

    /// Number of cells at filtration level `i`.
    pub fn cells(&self, level: usize) -> usize {
        pow3(self.nu - level) * self.eta
    }

    /// `γ` measure of one level-`i` cell.
    pub fn cell_measure(&self, level: usize) -> Rational {
        Rational::new(BigInt::one(), BigInt::from(self.cells(level)))
    }

    /// Index of the level-`i` cell containing the level-`l` cell `k`, `l <= i`.
    pub fn parent(&self, from: usize, k: usize, to: usize) -> usize {
        k / pow3(to - from)
    }
}

fn pow3(e: usize) -> usize {
    3usize.pow(e as u32)
}

fn checked_cells(eta: usize, r: usize) -> Option<usize> {
    3usize.checked_pow(u32::try_from(r).ok()?)?.checked_mul(eta)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    First,
    Second,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::First => "first",
            Kind::Second => "second",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SpecialPoint {
    pub kind: Kind,
    pub state: usize,
}

/// Special points of every row; row `r` has one point per cell, the point
/// `k` sitting at position `k/(3^r η)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AssociationTable {
    eta: usize,
    nu: usize,
    rows: Vec<Vec<SpecialPoint>>,
}

impl AssociationTable {
    pub fn eta(&self) -> usize {
        self.eta
    }

    pub fn nu(&self) -> usize {
        self.nu
    }

    pub fn row(&self, r: usize) -> &[SpecialPoint] {
        &self.rows[r]
    }

    pub fn rows(&self) -> &[Vec<SpecialPoint>] {
        &self.rows
    }

    /// Number of special points of row `r` associated to each state.
    pub fn state_counts(&self, r: usize) -> Vec<usize> {
        let mut counts = vec![0; self.eta];
        for p in &self.rows[r] {
            counts[p.state] += 1;
        }
        counts
    }

    /// Structural checks of the induction: row sizes `3^r η`, each state
    /// associated to exactly `3^r` points, first-kind points exactly at the
    /// parent positions with the parent state, second-kind offsets carrying
    /// the neighbouring states.
    pub fn counting_check(&self) -> CountingReport {
        let mut failures = Vec::new();
        for (r, row) in self.rows.iter().enumerate() {
            if row.len() != pow3(r) * self.eta {
                failures.push(format!("row {r}: {} cells", row.len()));
            }
            let counts = self.state_counts(r);
            if let Some(s) = counts.iter().position(|&c| c != pow3(r)) {
                failures.push(format!("row {r}: state {s} has {} points", counts[s]));
            }
            if r == 0 {
                if row
                    .iter()
                    .enumerate()
                    .any(|(k, p)| p.kind != Kind::First || p.state != k)
                {
                    failures.push("base row is not the identity".into());
                }
                continue;
            }
            for (k, p) in row.iter().enumerate() {
                let parent = self.rows[r - 1][k / 3].state;
                let expected = match k % 3 {
                    0 => SpecialPoint {
                        kind: Kind::First,
                        state: parent,
                    },
                    1 => SpecialPoint {
                        kind: Kind::Second,
                        state: (parent + self.eta - 1) % self.eta,
                    },
                    _ => SpecialPoint {
                        kind: Kind::Second,
                        state: (parent + 1) % self.eta,
                    },
                };
                if *p != expected {
                    failures.push(format!("row {r}, cell {k}: {p:?}, expected {expected:?}"));
                }
            }
        }
        CountingReport {
            rows: self.rows.len(),
            failures,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountingReport {
    pub rows: usize,
    pub failures: Vec<String>,
}

impl CountingReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Builds the association rows `r = 0..=ν`. Refused when the finest row
/// would exceed `budget_cells`.
pub fn build_association(eta: usize, nu: usize, budget_cells: usize) -> Result<AssociationTable> {
    if eta < 2 || nu < 1 {
        return Err(Error::Domain(format!(
            "need eta >= 2 and nu >= 1, got ({eta}, {nu})"
        )));
    }
    match checked_cells(eta, nu) {
        Some(c) if c <= budget_cells => {}
        _ => {
            return Err(Error::Resource(format!(
                "3^{nu} * {eta} cells exceed the budget of {budget_cells}"
            )))
        }
    }
    let mut rows = Vec::with_capacity(nu + 1);
    rows.push(
        (0..eta)
            .map(|s| SpecialPoint {
                kind: Kind::First,
                state: s,
            })
            .collect::<Vec<_>>(),
    );
    for _ in 0..nu {
        let prev: &Vec<SpecialPoint> = rows.last().expect("base row");
        let next = prev
            .iter()
            .flat_map(|p| {
                [
                    SpecialPoint {
                        kind: Kind::First,
                        state: p.state,
                    },
                    SpecialPoint {
                        kind: Kind::Second,
                        state: (p.state + eta - 1) % eta,
                    },
                    SpecialPoint {
                        kind: Kind::Second,
                        state: (p.state + 1) % eta,
                    },
                ]
            })
            .collect();
        rows.push(next);
    }
    Ok(AssociationTable { eta, nu, rows })
}

/// `F̄` on every row; row `r` holds time index `ν - r`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtendedProcess {
    eta: usize,
    nu: usize,
    rows: Vec<Vec<Rational>>,
}

impl ExtendedProcess {
    pub fn eta(&self) -> usize {
        self.eta
    }

    pub fn nu(&self) -> usize {
        self.nu
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.rows[r]
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    /// Row at time index `j`.
    pub fn at_time(&self, j: usize) -> &[Rational] {
        &self.rows[self.nu - j]
    }

    pub fn filtration(&self) -> ReverseFiltration {
        ReverseFiltration::new(self.eta, self.nu)
    }

    /// `F̄(x, y)` for `x ∈ [0, 1)`, `y ∈ [0, 1]`: the row of time index
    /// `⌊νy⌋`, read on the cell containing `x`.
    pub fn value_at(&self, x: &Rational, y: &Rational) -> Result<&Rational> {
        let zero = Rational::zero();
        let one = Rational::one();
        if *x < zero || *x >= one || *y < zero || *y > one {
            return Err(Error::Domain(format!("({x}, {y}) outside [0,1) x [0,1]")));
        }
        let j = (y * Rational::from_integer(BigInt::from(self.nu)))
            .floor()
            .to_integer()
            .to_usize()
            .expect("in range");
        let row = &self.rows[self.nu - j];
        let k = (x * Rational::from_integer(BigInt::from(row.len())))
            .floor()
            .to_integer()
            .to_usize()
            .expect("in range");
        Ok(&row[k])
    }
}

/// `F̄ = F ∘ Γ` on every row.
pub fn extend_process(p: &ProcessGrid, a: &AssociationTable) -> Result<ExtendedProcess> {
    if (p.eta, p.nu) != (a.eta, a.nu) {
        return Err(Error::Dimension {
            expected: p.eta * (p.nu + 1),
            got: a.eta * (a.nu + 1),
        });
    }
    let rows = a
        .rows
        .iter()
        .enumerate()
        .map(|(r, pts)| {
            pts.iter()
                .map(|pt| p.get(pt.state, p.nu - r).clone())
                .collect()
        })
        .collect();
    Ok(ExtendedProcess {
        eta: p.eta,
        nu: p.nu,
        rows,
    })
}

fn block_average(row: &[Rational], block: usize) -> Vec<Rational> {
    let size = Rational::from_integer(BigInt::from(block));
    row.chunks(block)
        .map(|c| c.iter().sum::<Rational>() / &size)
        .collect()
}

/// `E(F̄_{i/ν} | E_{η,i+1})` as a row on the level-`(i+1)` cells.
pub fn conditional_expectation(e: &ExtendedProcess, from_level: usize) -> Result<Vec<Rational>> {
    if from_level >= e.nu {
        return Err(Error::Range(format!(
            "level {from_level} has no coarser level (nu = {})",
            e.nu
        )));
    }
    Ok(block_average(e.at_time(from_level), 3))
}

/// `E(F̄_{j/ν} | E_{η,i})` for `j <= i`.
pub fn conditional_expectation_between(
    e: &ExtendedProcess,
    j: usize,
    i: usize,
) -> Result<Vec<Rational>> {
    if j > i || i > e.nu {
        return Err(Error::Range(format!("need j <= i <= nu, got ({j}, {i})")));
    }
    Ok(block_average(e.at_time(j), pow3(i - j)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct MartingaleViolation {
    pub fine_level: usize,
    pub coarse_level: usize,
    pub cell: usize,
    pub expected: Rational,
    pub got: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MartingaleReport {
    pub one_step_checked: usize,
    pub pairs_checked: usize,
    pub one_step_violations: Vec<MartingaleViolation>,
    pub all_pairs_violations: Vec<MartingaleViolation>,
}

impl MartingaleReport {
    pub fn passed(&self) -> bool {
        self.one_step_violations.is_empty() && self.all_pairs_violations.is_empty()
    }
}

fn compare_rows(
    avg: Vec<Rational>,
    target: &[Rational],
    fine_level: usize,
    coarse_level: usize,
) -> Vec<MartingaleViolation> {
    avg.into_iter()
        .zip(target)
        .enumerate()
        .filter(|(_, (got, expected))| got != *expected)
        .map(|(cell, (got, expected))| MartingaleViolation {
            fine_level,
            coarse_level,
            cell,
            expected: expected.clone(),
            got,
        })
        .collect()
}

/// Checks `E(F̄_{j/ν} | E_{η,i}) = F̄_{i/ν}` exactly: once for adjacent
/// levels and once, directly, for every pair `j < i`.
pub fn verify_reverse_martingale(e: &ExtendedProcess) -> MartingaleReport {
    let nu = e.nu;
    let one_step_violations: Vec<MartingaleViolation> = (0..nu)
        .into_par_iter()
        .flat_map_iter(|i| {
            let avg = conditional_expectation(e, i).expect("level in range");
            compare_rows(avg, e.at_time(i + 1), i, i + 1)
        })
        .collect();
    let pairs: Vec<(usize, usize)> = (0..=nu).flat_map(|i| (0..i).map(move |j| (j, i))).collect();
    let all_pairs_violations = pairs
        .par_iter()
        .flat_map_iter(|&(j, i)| {
            let avg = conditional_expectation_between(e, j, i).expect("levels in range");
            compare_rows(avg, e.at_time(i), j, i)
        })
        .collect();
    MartingaleReport {
        one_step_checked: nu,
        pairs_checked: pairs.len(),
        one_step_violations,
        all_pairs_violations,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistributionEntry {
    pub value: Rational,
    pub state_count: usize,
    pub cell_count: usize,
    pub state_mass: Rational,
    pub cell_mass: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistributionReport {
    pub t_index: usize,
    pub entries: Vec<DistributionEntry>,
    /// `3^r · #{F = α} = #{F̄ = α}` for every α.
    pub scaling_holds: bool,
}

impl DistributionReport {
    pub fn passed(&self) -> bool {
        self.scaling_holds && self.entries.iter().all(|e| e.state_mass == e.cell_mass)
    }
}

fn value_counts(values: &[Rational]) -> BTreeMap<&Rational, usize> {
    let mut m = BTreeMap::new();
    for v in values {
        *m.entry(v).or_insert(0) += 1;
    }
    m
}

/// Compares `γ(F_t = α)` on η states with `γ(F̄_t = α)` on `3^r η` cells.
pub fn verify_distribution_equality(
    p: &ProcessGrid,
    e: &ExtendedProcess,
    t_index: usize,
) -> Result<DistributionReport> {
    if t_index > p.nu || (p.eta, p.nu) != (e.eta, e.nu) {
        return Err(Error::Range(format!(
            "time index {t_index} outside [0, {}]",
            p.nu
        )));
    }
    let column = p.column(t_index);
    let row = e.at_time(t_index);
    let states = value_counts(column);
    let cells = value_counts(row);
    let scale = row.len() / column.len();
    let mut values: Vec<&Rational> = states.keys().chain(cells.keys()).copied().collect();
    values.sort();
    values.dedup();
    let mut scaling_holds = true;
    let entries = values
        .into_iter()
        .map(|v| {
            let state_count = states.get(v).copied().unwrap_or(0);
            let cell_count = cells.get(v).copied().unwrap_or(0);
            scaling_holds &= scale * state_count == cell_count;
            DistributionEntry {
                value: v.clone(),
                state_count,
                cell_count,
                state_mass: ratio(state_count, column.len()),
                cell_mass: ratio(cell_count, row.len()),
            }
        })
        .collect();
    Ok(DistributionReport {
        t_index,
        entries,
        scaling_holds,
    })
}

fn ratio(a: usize, b: usize) -> Rational {
    Rational::new(BigInt::from(a), BigInt::from(b))
}

/// `γ(F_t <= x)` for a row of equal-measure cells.
pub fn cdf(row: &[Rational], x: &Rational) -> Rational {
    if row.is_empty() {
        return Rational::zero();
    }
    ratio(row.iter().filter(|v| *v <= x).count(), row.len())
}

/// `∫ F̄_t dγ` for every time index, next to `(1/η) Σ_i F(i, t)`.
pub fn mass_check(p: &ProcessGrid, e: &ExtendedProcess) -> Vec<(Rational, Rational)> {
    let eta = Rational::from_integer(BigInt::from(p.eta));
    (0..=p.nu)
        .map(|j| {
            let row = e.at_time(j);
            let integral =
                row.iter().sum::<Rational>() / Rational::from_integer(BigInt::from(row.len()));
            let average = p.column(j).iter().sum::<Rational>() / &eta;
            (integral, average)
        })
        .collect()
}
