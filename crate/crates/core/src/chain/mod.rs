//! The N-state cyclic random walk.
//!
//! From state `i` the walk moves to `i-1`, `i` or `i+1` (mod N), each with
//! probability 1/3. For N = 2 the two off-diagonal moves land on the same
//! state, so the kernel row is (1/3, 2/3). The kernel is symmetric and
//! circulant, its invariant law is uniform, and every quantity here can be
//! computed either in `f64` or exactly in [`BigRational`].

mod bounds;
mod coupling;

pub use bounds::{steps_to_equilibrium, threshold_steps, BoundVariant, MixingBound};
pub use coupling::{
    coupling_tail_exact, coupling_tail_exact_from, simulate_meeting_time, CouplingTail,
    MAX_EXACT_COUPLING_STATES,
};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Pow, Signed, Zero};
use std::ops::Add;

use crate::{Error, Result};

/// Scalar type a distribution can carry: plain floats or exact rationals.
pub trait Weight: Clone + Zero + PartialOrd + Add<Output = Self> {
    fn third(&self) -> Self;
    fn from_usize(n: usize) -> Self;
}

impl Weight for f64 {
    fn third(&self) -> Self {
        self / 3.0
    }

    fn from_usize(n: usize) -> Self {
        n as f64
    }
}

impl Weight for BigRational {
    fn third(&self) -> Self {
        self / BigRational::from_integer(BigInt::from(3))
    }

    fn from_usize(n: usize) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
}

/// Nonnegative mass vector over the chain states.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution<T> {
    weights: Vec<T>,
    mass: T,
}

impl<T: Weight> Distribution<T> {
    pub fn new(weights: Vec<T>) -> Result<Self> {
        if let Some(i) = weights.iter().position(|w| *w < T::zero()) {
            return Err(Error::Domain(format!("negative weight at state {i}")));
        }
        let mass = weights.iter().cloned().fold(T::zero(), |a, b| a + b);
        Ok(Self { weights, mass })
    }

    /// Point mass 1 at `state`.
    pub fn delta(n_states: usize, state: usize) -> Result<Self> {
        if state >= n_states {
            return Err(Error::Range(format!(
                "state {state} not in [0, {n_states})"
            )));
        }
        let mut w = vec![T::zero(); n_states];
        w[state] = T::from_usize(1);
        Self::new(w)
    }

    /// Weight 1 on every state (total mass N).
    pub fn uniform(n_states: usize) -> Self {
        Self::new(vec![T::from_usize(1); n_states]).expect("ones are nonnegative")
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn mass(&self) -> &T {
        &self.mass
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn into_weights(self) -> Vec<T> {
        self.weights
    }
}

/// Random walk on Z/NZ with stay/left/right probability 1/3 each.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CyclicChain {
    n_states: usize,
}

impl CyclicChain {
    pub fn new(n_states: usize) -> Result<Self> {
        if n_states < 2 {
            return Err(Error::Domain(format!(
                "a cyclic chain needs N >= 2, got {n_states}"
            )));
        }
        Ok(Self { n_states })
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }

    /// Kernel entry p(i, j) as an integer numerator over 3.
    pub fn kernel_numerator(&self, i: usize, j: usize) -> u32 {
        let n = self.n_states;
        let (i, j) = (i % n, j % n);
        let moves = [(i + n - 1) % n, i, (i + 1) % n];
        moves.iter().filter(|&&k| k == j).count() as u32
    }

    /// Exact one-step kernel.
    pub fn kernel_exact(&self) -> Vec<Vec<BigRational>> {
        let n = self.n_states;
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        BigRational::new(BigInt::from(self.kernel_numerator(i, j)), BigInt::from(3))
                    })
                    .collect()
            })
            .collect()
    }

    /// One step of `d · P`.
    pub fn step<T: Weight>(&self, d: &Distribution<T>) -> Result<Distribution<T>> {
        self.check_len(d.len())?;
        Ok(self.step_unchecked(d))
    }

    fn step_unchecked<T: Weight>(&self, d: &Distribution<T>) -> Distribution<T> {
        let n = self.n_states;
        let mut out = vec![T::zero(); n];
        for (i, w) in d.weights.iter().enumerate() {
            let share = w.third();
            for k in [(i + n - 1) % n, i, (i + 1) % n] {
                out[k] = out[k].clone() + share.clone();
            }
        }
        let mass = out.iter().cloned().fold(T::zero(), |a, b| a + b);
        Distribution { weights: out, mass }
    }

    /// `d · P^n`.
    pub fn evolve<T: Weight>(&self, d: &Distribution<T>, n: usize) -> Result<Distribution<T>> {
        self.check_len(d.len())?;
        let mut cur = d.clone();
        for _ in 0..n {
            cur = self.step_unchecked(&cur);
        }
        Ok(cur)
    }

    /// Successive distributions `d, dP, dP², ...` (unbounded).
    pub fn trajectory<T: Weight>(&self, d: Distribution<T>) -> Result<Trajectory<T>> {
        self.check_len(d.len())?;
        Ok(Trajectory {
            chain: *self,
            current: Some(d),
        })
    }

    /// Row 0 of `P^n`; every other row is a rotation of it.
    pub fn n_step_row<T: Weight>(&self, n: usize) -> Vec<T> {
        let d = Distribution::<T>::delta(self.n_states, 0).expect("state 0 exists");
        self.evolve(&d, n).expect("lengths match").into_weights()
    }

    /// `P^n` in floating point.
    pub fn n_step_matrix(&self, n: usize) -> Vec<Vec<f64>> {
        circulant(&self.n_step_row::<f64>(n))
    }

    /// Row 0 of `3^n P^n`: the number of length-`n` paths from 0 to each state.
    pub fn n_step_counts(&self, n: usize) -> Vec<BigUint> {
        PathCounts::new(self.n_states).nth(n).expect("unbounded")
    }

    /// `P^n` exactly.
    pub fn n_step_matrix_exact(&self, n: usize) -> Vec<Vec<BigRational>> {
        let denom = BigInt::from(3).pow(n as u32);
        let row: Vec<BigRational> = self
            .n_step_counts(n)
            .into_iter()
            .map(|c| BigRational::new(BigInt::from(c), denom.clone()))
            .collect();
        circulant(&row)
    }

    /// `max_{i,j} |p^(n)_ij - 1/N|`.
    pub fn tv_gap(&self, n: usize) -> f64 {
        let target = 1.0 / self.n_states as f64;
        self.n_step_row::<f64>(n)
            .iter()
            .map(|p| (p - target).abs())
            .fold(0.0, f64::max)
    }

    /// Exact `max_{i,j} |p^(n)_ij - 1/N|`.
    pub fn tv_gap_exact(&self, n: usize) -> BigRational {
        gap_from_counts(&self.n_step_counts(n), n)
    }

    /// Exact gaps for `n = 0..=n_max`, computed incrementally.
    pub fn tv_gaps_exact(&self, n_max: usize) -> Vec<BigRational> {
        PathCounts::new(self.n_states)
            .take(n_max + 1)
            .enumerate()
            .map(|(n, c)| gap_from_counts(&c, n))
            .collect()
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.n_states {
            return Err(Error::Dimension {
                expected: self.n_states,
                got: len,
            });
        }
        Ok(())
    }
}

/// `max_j |c_j / 3^n - 1/N|` for path counts `c` over `3^n`.
fn gap_from_counts(counts: &[BigUint], n: usize) -> BigRational {
    let n_states = BigInt::from(counts.len());
    let total = BigInt::from(3).pow(n as u32);
    let worst = counts
        .iter()
        .map(|c| (BigInt::from(c.clone()) * &n_states - &total).abs())
        .max()
        .unwrap_or_else(BigInt::zero);
    BigRational::new(worst, n_states * total)
}

/// Successive path-count rows `3^n P^n e_0`.
struct PathCounts {
    current: Vec<BigUint>,
}

impl PathCounts {
    fn new(n_states: usize) -> Self {
        let mut current = vec![BigUint::zero(); n_states];
        current[0] = BigUint::from(1u32);
        Self { current }
    }
}

impl Iterator for PathCounts {
    type Item = Vec<BigUint>;

    fn next(&mut self) -> Option<Vec<BigUint>> {
        let n = self.current.len();
        let next = (0..n)
            .map(|k| &self.current[(k + n - 1) % n] + &self.current[k] + &self.current[(k + 1) % n])
            .collect();
        Some(std::mem::replace(&mut self.current, next))
    }
}

fn circulant<T: Clone>(row: &[T]) -> Vec<Vec<T>> {
    let n = row.len();
    (0..n)
        .map(|r| (0..n).map(|j| row[(j + n - r) % n].clone()).collect())
        .collect()
}

/// Iterator over `d P^k`, starting at `k = 0`.
#[derive(Debug, Clone)]
pub struct Trajectory<T> {
    chain: CyclicChain,
    current: Option<Distribution<T>>,
}

impl<T: Weight> Iterator for Trajectory<T> {
    type Item = Distribution<T>;

    fn next(&mut self) -> Option<Self::Item> {
        let cur = self.current.take()?;
        self.current = Some(self.chain.step_unchecked(&cur));
        Some(cur)
    }
}
