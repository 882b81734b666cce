//! Residuals of the discrete calculus identities on the circle grid.
//!
//! Each check rearranges the same floating-point sums two ways, so the
//! residuals sit at rounding level for any input.

use num_complex::Complex64;
use serde::Serialize;

use crate::grid::{GridFunction, Shift, SpaceTimeField};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Residual {
    pub identity: &'static str,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CalculusReport {
    pub residuals: Vec<Residual>,
}

impl CalculusReport {
    pub fn max_residual(&self) -> f64 {
        self.residuals
            .iter()
            .map(|r| r.residual)
            .fold(0.0, f64::max)
    }

    pub fn worst(&self) -> Option<&Residual> {
        self.residuals
            .iter()
            .max_by(|a, b| a.residual.total_cmp(&b.residual))
    }

    /// Every residual is at most `tol`.
    pub fn passed(&self, tol: f64) -> bool {
        self.max_residual() <= tol
    }
}

fn diff(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm()
}

fn push(out: &mut Vec<Residual>, identity: &'static str, residual: f64) {
    out.push(Residual { identity, residual });
}

fn check_same_grid(g: &GridFunction, h: &GridFunction) -> Result<()> {
    if g.grid() != h.grid() {
        return Err(Error::Dimension {
            expected: g.len(),
            got: h.len(),
        });
    }
    Ok(())
}

/// Items (i)–(vi) for a pair of grid functions, plus the restricted
/// summation by parts `∫_{η/2} restrict(g'h) = -∫_{η/2} restrict(g^rsh (h')^rsh)`
/// when η is even.
pub fn calculus_identity_check(g: &GridFunction, h: &GridFunction) -> Result<CalculusReport> {
    check_same_grid(g, h)?;
    let mut out = Vec::new();
    let (dg, dh) = (g.d_dx(), h.d_dx());
    let (lsh, rsh) = (Shift::Left, Shift::Right);

    push(&mut out, "integral of derivative", dg.integrate().norm());

    let product = (g * h).d_dx();
    let expanded = &(&dg * &h.shift(lsh)) + &(&g.shift(rsh) * &dh);
    push(&mut out, "product rule", product.max_abs_diff(&expanded));

    push(
        &mut out,
        "summation by parts",
        diff((&dg * h).integrate(), -(g * &dh).integrate()),
    );

    let total = g.integrate();
    let shifted = diff(total, g.shift(lsh).integrate()).max(diff(total, g.shift(rsh).integrate()));
    push(&mut out, "shift invariance of the integral", shifted);

    let commute = dg
        .shift(rsh)
        .max_abs_diff(&g.shift(rsh).d_dx())
        .max(dg.shift(lsh).max_abs_diff(&g.shift(lsh).d_dx()));
    push(&mut out, "shift commutes with derivative", commute);

    let second = diff((&g.d2_dx2() * h).integrate(), (g * &h.d2_dx2()).integrate());
    push(&mut out, "second-order summation by parts", second);

    if g.grid().eta().is_multiple_of(2) {
        let lhs = (&dg * h).restrict()?.integrate();
        let rhs = (&g.shift(rsh) * &dh.shift(rsh)).restrict()?.integrate();
        push(&mut out, "restricted summation by parts", diff(lhs, -rhs));
    }
    Ok(CalculusReport { residuals: out })
}

/// Space-time analogues of items (i)–(vi) with `∂/∂x` and `sh_x`, using
/// the product measure `μ_η × λ_ν`.
pub fn space_time_identity_check(g: &SpaceTimeField, h: &SpaceTimeField) -> Result<CalculusReport> {
    if g.grid() != h.grid() || g.tgrid() != h.tgrid() {
        return Err(Error::Dimension {
            expected: g.rows().len(),
            got: h.rows().len(),
        });
    }
    let mut out = Vec::new();
    let (lsh, rsh) = (Shift::Left, Shift::Right);
    let mul = |a: &SpaceTimeField, b: &SpaceTimeField| a.pointwise(b, |x, y| x * y);
    let max_diff = |a: &SpaceTimeField, b: &SpaceTimeField| {
        a.rows()
            .iter()
            .zip(b.rows())
            .map(|(x, y)| x.max_abs_diff(y))
            .fold(0.0, f64::max)
    };
    let (dg, dh) = (g.d_dx(), h.d_dx());

    push(&mut out, "integral of derivative", dg.integrate().norm());

    let product = mul(g, h).d_dx();
    let expanded = mul(&dg, &h.shift_x(lsh)).pointwise(&mul(&g.shift_x(rsh), &dh), |x, y| x + y);
    push(&mut out, "product rule", max_diff(&product, &expanded));

    push(
        &mut out,
        "summation by parts",
        diff(mul(&dg, h).integrate(), -mul(g, &dh).integrate()),
    );

    let total = g.integrate();
    let shifted =
        diff(total, g.shift_x(lsh).integrate()).max(diff(total, g.shift_x(rsh).integrate()));
    push(&mut out, "shift invariance of the integral", shifted);

    let commute = max_diff(&dg.shift_x(rsh), &g.shift_x(rsh).d_dx())
        .max(max_diff(&dg.shift_x(lsh), &g.shift_x(lsh).d_dx()));
    push(&mut out, "shift commutes with derivative", commute);

    let second = diff(
        mul(&g.d2_dx2(), h).integrate(),
        mul(g, &h.d2_dx2()).integrate(),
    );
    push(&mut out, "second-order summation by parts", second);
    Ok(CalculusReport { residuals: out })
}
