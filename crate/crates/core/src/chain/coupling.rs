use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::CyclicChain;
use crate::{Error, Result};

/// Largest N for which the N²-state product chain is built exactly.
pub const MAX_EXACT_COUPLING_STATES: usize = 40;

/// Number of independent RNG streams Monte Carlo trials are split across.
/// Fixed so the estimate does not depend on the thread count.
const PARTITIONS: u64 = 64;

/// Survival function `P(T > n)`, `n = 0, 1, ...`, of the meeting time
/// `T = inf{n >= 1 : X_n = Y_n}` of two independent copies of the chain.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CouplingTail<T = f64> {
    pub n_states: usize,
    pub tail: Vec<T>,
}

impl CouplingTail<BigRational> {
    pub fn to_f64(&self) -> CouplingTail<f64> {
        CouplingTail {
            n_states: self.n_states,
            tail: self
                .tail
                .iter()
                .map(|p| p.to_f64().unwrap_or(f64::NAN))
                .collect(),
        }
    }
}

/// Exact tail with `X_0 = start`, `Y_0` uniform.
pub fn coupling_tail_exact(
    n_states: usize,
    start: usize,
    n_max: usize,
) -> Result<CouplingTail<BigRational>> {
    if start >= n_states {
        return Err(Error::Range(format!(
            "start state {start} not in [0, {n_states})"
        )));
    }
    let mut x_law = vec![BigUint::zero(); n_states];
    x_law[start] = BigUint::from(1u32);
    let y_law = vec![BigUint::from(1u32); n_states];
    coupling_tail_exact_from(n_states, &x_law, &y_law, n_max)
}

/// Exact tail for arbitrary initial laws, given as unnormalised integer
/// weights (each law is divided by its own total).
///
/// The product chain on `I x I` is run with the diagonal made absorbing
/// from step 1 on. Mass is tracked as integer numerators over the common
/// denominator `|x| |y| 9^n`, since every product-kernel entry is a
/// multiple of 1/9.
pub fn coupling_tail_exact_from(
    n_states: usize,
    x_law: &[BigUint],
    y_law: &[BigUint],
    n_max: usize,
) -> Result<CouplingTail<BigRational>> {
    let chain = CyclicChain::new(n_states)?;
    if n_states > MAX_EXACT_COUPLING_STATES {
        return Err(Error::Resource(format!(
            "exact coupling limited to N <= {MAX_EXACT_COUPLING_STATES}, got {n_states}"
        )));
    }
    for law in [x_law, y_law] {
        if law.len() != n_states {
            return Err(Error::Dimension {
                expected: n_states,
                got: law.len(),
            });
        }
    }
    let x_total: BigUint = x_law.iter().sum();
    let y_total: BigUint = y_law.iter().sum();
    if x_total.is_zero() || y_total.is_zero() {
        return Err(Error::Domain("initial laws must have positive mass".into()));
    }

    let n = n_states;
    // moves[i] = [(target, numerator over 3)], duplicates merged (N = 2).
    let moves: Vec<Vec<(usize, u32)>> = (0..n)
        .map(|i| {
            let mut m: Vec<(usize, u32)> = Vec::with_capacity(3);
            for k in [(i + n - 1) % n, i, (i + 1) % n] {
                if !m.iter().any(|&(t, _)| t == k) {
                    m.push((k, chain.kernel_numerator(i, k)));
                }
            }
            m
        })
        .collect();

    let mut mass: Vec<BigUint> = (0..n * n).map(|s| &x_law[s / n] * &y_law[s % n]).collect();
    let mut denom = &x_total * &y_total;
    let mut tail = Vec::with_capacity(n_max + 1);
    tail.push(BigRational::from_integer(1.into()));

    for _ in 1..=n_max {
        let mut next = vec![BigUint::zero(); n * n];
        for (s, w) in mass.iter().enumerate() {
            if w.is_zero() {
                continue;
            }
            let (i, j) = (s / n, s % n);
            for &(k, pk) in &moves[i] {
                for &(l, pl) in &moves[j] {
                    next[k * n + l] += w * (pk * pl);
                }
            }
        }
        for d in 0..n {
            next[d * n + d] = BigUint::zero();
        }
        denom *= 9u32;
        mass = next;
        let alive: BigUint = mass.iter().sum();
        tail.push(BigRational::new(alive.into(), denom.clone().into()));
    }
    Ok(CouplingTail { n_states, tail })
}

/// Monte Carlo estimate of `P(T > n)` for `n = 0..=n_max`.
///
/// Trials are split into a fixed number of partitions; partition `p` draws
/// from `ChaCha8Rng` seeded with `seed` on stream `p`, so the result is a
/// pure function of the arguments regardless of how many worker threads run.
pub fn simulate_meeting_time(
    n_states: usize,
    start: usize,
    trials: u64,
    n_max: usize,
    seed: u64,
) -> Result<CouplingTail<f64>> {
    CyclicChain::new(n_states)?;
    if trials == 0 {
        return Err(Error::Domain("need at least one trial".into()));
    }
    if start >= n_states {
        return Err(Error::Range(format!(
            "start state {start} not in [0, {n_states})"
        )));
    }
    let parts = PARTITIONS.min(trials);
    // survivors[n] = #{trials with T > n}, accumulated per partition.
    let survivors = (0..parts)
        .into_par_iter()
        .map(|p| {
            let lo = trials * p / parts;
            let hi = trials * (p + 1) / parts;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(p);
            let mut meet_hist = vec![0u64; n_max + 2];
            for _ in lo..hi {
                let t = meeting_time(&mut rng, n_states, start, n_max);
                meet_hist[t.unwrap_or(n_max + 1)] += 1;
            }
            meet_hist
        })
        .reduce(
            || vec![0u64; n_max + 2],
            |mut a, b| {
                a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
                a
            },
        );

    let mut alive = trials;
    let mut tail = Vec::with_capacity(n_max + 1);
    tail.push(1.0);
    for count in survivors.iter().take(n_max + 1).skip(1) {
        alive -= count;
        tail.push(alive as f64 / trials as f64);
    }
    Ok(CouplingTail { n_states, tail })
}

fn meeting_time(rng: &mut ChaCha8Rng, n: usize, start: usize, n_max: usize) -> Option<usize> {
    let mut x = start;
    let mut y = rng.random_range(0..n);
    for step in 1..=n_max {
        x = (x + n - 1 + rng.random_range(0..3usize)) % n;
        y = (y + n - 1 + rng.random_range(0..3usize)) % n;
        if x == y {
            return Some(step);
        }
    }
    None
}
