//! Numerical laboratory for the cyclic random walk and the discrete heat
//! equation on the circle.
//!
//! The crate is organised around five areas:
//!
//! * [`chain`]: the N-state cyclic chain (stay/left/right with probability
//!   1/3 each), exact and floating evolution, geometric mixing bounds and
//!   the coupling meeting time.
//! * [`grid`]: the 2η-point circle grid with its counting measure, central
//!   differences, shifts, restriction to the even sublattice and the
//!   summation-by-parts identities.
//! * [`fourier`]: discrete Fourier coefficients on the grid, the
//!   derivative symbols and coefficient-decay checks.
//! * [`heat`]: the explicit FTCS heat scheme, its closed-form spectral
//!   propagator, the classical Fourier-series solution and the equivalence
//!   with the cyclic chain at stencil weight 1/3.
//! * [`martingale`]: an exact-rational reverse martingale built from the
//!   chain on a ternary refinement of the unit interval.
//!
//! [`presets`] holds the named initial conditions shared by tests and the
//! experiment runner, and [`io`] the CSV/JSON artifact writers.

pub mod calculus;
pub mod chain;
pub mod error;
pub mod fourier;
pub mod grid;
pub mod heat;
pub mod io;
pub mod martingale;
pub mod presets;

pub use error::{Error, Result};

/// Default cap on stored grid cells (space × time, or ternary cells) for
/// operations that materialise large arrays.
pub const DEFAULT_BUDGET_CELLS: usize = 1 << 26;
