//! Named initial conditions.

use num_complex::Complex64;
use serde::{Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

use crate::grid::{CircleGrid, GridFunction};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    Cos,
    CosHalfCos2,
    ExpCos,
    Delta,
    Uniform,
}

impl Preset {
    pub const ALL: [Preset; 5] = [
        Preset::Cos,
        Preset::CosHalfCos2,
        Preset::ExpCos,
        Preset::Delta,
        Preset::Uniform,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Cos => "cos",
            Preset::CosHalfCos2 => "cos+halfcos2",
            Preset::ExpCos => "expcos",
            Preset::Delta => "delta",
            Preset::Uniform => "uniform",
        }
    }

    /// The underlying smooth periodic function, if there is one. `delta`
    /// exists only on a grid.
    pub fn smooth(self) -> Option<fn(f64) -> f64> {
        match self {
            Preset::Cos => Some(f64::cos),
            Preset::CosHalfCos2 => Some(|x| x.cos() + 0.5 * (2.0 * x).cos()),
            Preset::ExpCos => Some(|x| x.cos().exp()),
            Preset::Uniform => Some(|_| 1.0),
            Preset::Delta => None,
        }
    }

    /// Grid realisation; `delta` is the indicator of cell 0.
    pub fn grid_function(self, eta: usize) -> Result<GridFunction> {
        match self.smooth() {
            Some(g) => GridFunction::sample(g, eta),
            None => GridFunction::indicator(CircleGrid::new(eta)?, 0),
        }
    }

    /// Masses on `n` chain states: point mass at 0, all ones, or the
    /// sampled preset at `n` equispaced points of [-π, π).
    pub fn chain_masses(self, n: usize) -> Vec<f64> {
        match self {
            Preset::Delta => (0..n).map(|i| if i == 0 { 1.0 } else { 0.0 }).collect(),
            Preset::Uniform => vec![1.0; n],
            other => {
                let g = other.smooth().expect("smooth preset");
                (0..n)
                    .map(|i| {
                        g(
                            -std::f64::consts::PI
                                + 2.0 * std::f64::consts::PI * i as f64 / n as f64,
                        )
                    })
                    .collect()
            }
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for Preset {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown preset {s:?}")))
    }
}

/// Names of every preset, in a fixed order.
pub fn presets() -> Vec<&'static str> {
    Preset::ALL.iter().map(|p| p.name()).collect()
}

/// Convenience for tests and reports.
pub fn real(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{CyclicChain, Distribution};
    use crate::fourier::decay_report;

    #[test]
    fn names_round_trip() {
        for p in Preset::ALL {
            assert_eq!(p.name().parse::<Preset>().unwrap(), p);
        }
        assert!("sin".parse::<Preset>().is_err());
        assert!(presets().contains(&"cos"));
    }

    #[test]
    fn cos_preset_samples_cos() {
        let f = Preset::Cos.grid_function(16).unwrap();
        for (j, x) in f.grid().points().enumerate() {
            assert_eq!(f.values()[j].re, x.cos());
        }
    }

    #[test]
    fn uniform_masses_are_invariant() {
        let c = CyclicChain::new(9).unwrap();
        let d = Distribution::new(Preset::Uniform.chain_masses(9)).unwrap();
        let e = c.evolve(&d, 13).unwrap();
        assert!(e.weights().iter().all(|w| (w - 1.0).abs() < 1e-15));
    }

    #[test]
    fn expcos_decays() {
        let f = Preset::ExpCos.grid_function(64).unwrap();
        assert!(decay_report(&f).unwrap().passed());
    }
}
