use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Which block length / minorisation pair to use for the geometric bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundVariant {
    /// `m = N - 1`, `rho = 3^-(N-1)`; valid for every N.
    General,
    /// `m = (N - 1)/2`, `rho = 3^-((N-1)/2)`; odd N only.
    Odd,
}

impl BoundVariant {
    fn block(self, n_states: usize) -> Result<usize> {
        match self {
            BoundVariant::General => Ok(n_states - 1),
            BoundVariant::Odd if n_states % 2 == 1 => Ok((n_states - 1) / 2),
            BoundVariant::Odd => Err(Error::InvalidVariant(format!(
                "odd-N bound requested for N = {n_states}"
            ))),
        }
    }
}

/// `|p^(n)_ij - 1/N| <= (1 - rho)^(n/m - 1)` for the cyclic chain.
///
/// With the general variant this is `eps_n`, with the odd variant `delta_n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MixingBound {
    pub n_states: usize,
    pub block_m: usize,
    pub rho: f64,
    pub variant: BoundVariant,
}

impl MixingBound {
    pub fn new(n_states: usize, variant: BoundVariant) -> Result<Self> {
        if n_states < 2 {
            return Err(Error::Domain(format!("N must be >= 2, got {n_states}")));
        }
        let block_m = variant.block(n_states)?;
        let rho = 3f64.powi(-(block_m as i32));
        Ok(Self {
            n_states,
            block_m,
            rho,
            variant,
        })
    }

    /// `(1 - rho)^(n/m - 1)` with a real exponent.
    pub fn value(&self, n: usize) -> Result<f64> {
        if n == 0 {
            return Err(Error::Domain("mixing bound needs n >= 1".into()));
        }
        let exponent = n as f64 / self.block_m as f64 - 1.0;
        Ok((exponent * (-self.rho).ln_1p()).exp())
    }

    /// `1 - rho` as an exact fraction `(3^m - 1)/3^m`.
    pub fn contraction_exact(&self) -> BigRational {
        let pow = Pow::pow(BigInt::from(3), self.block_m as u32);
        BigRational::new(&pow - 1, pow)
    }

    /// Exact test of `gap <= (1 - rho)^((n - m)/m)`.
    ///
    /// Raising both sides to the power `m` keeps everything rational:
    /// `gap^m <= a^(n-m)`, or `gap^m * a^(m-n) <= 1` when `n < m`.
    pub fn holds_exact(&self, gap: &BigRational, n: usize) -> bool {
        if *gap < BigRational::zero() {
            return true;
        }
        let a = self.contraction_exact();
        let lhs = Pow::pow(gap, self.block_m as u32);
        if n >= self.block_m {
            lhs <= Pow::pow(&a, (n - self.block_m) as u32)
        } else {
            lhs * Pow::pow(&a, (self.block_m - n) as u32) <= BigRational::one()
        }
    }
}

/// Real-valued threshold `m (1 + ln eps / ln(1 - 3^-m))` for the number of
/// steps after which every state is within `eps` of uniform.
///
/// `ln(3^m - 1) - ln(3^m)` is evaluated as `ln_1p(-3^-m)`, which stays finite
/// where `3^m` itself would overflow.
pub fn threshold_steps(eta: usize, eps: f64, variant: BoundVariant) -> Result<f64> {
    if eta < 2 {
        return Err(Error::Domain(format!("eta must be >= 2, got {eta}")));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Domain(format!("eps must lie in (0, 1), got {eps}")));
    }
    let m = variant.block(eta)? as f64;
    let log_contraction = (-(-m * 3f64.ln()).exp()).ln_1p();
    if log_contraction == 0.0 {
        return Err(Error::Resource(format!(
            "3^-{m} underflows; threshold is astronomically large"
        )));
    }
    Ok(m * (1.0 + eps.ln() / log_contraction))
}

/// Smallest integer `n` meeting [`threshold_steps`].
pub fn steps_to_equilibrium(eta: usize, eps: f64, variant: BoundVariant) -> Result<u64> {
    let x = threshold_steps(eta, eps, variant)?;
    let n = x.ceil();
    if !n.is_finite() || n >= u64::MAX as f64 {
        return Err(Error::Resource(format!(
            "step count {x:e} does not fit in u64"
        )));
    }
    Ok(n as u64)
}
