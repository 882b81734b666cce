use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use heatlab_core::calculus::{calculus_identity_check, space_time_identity_check};
use heatlab_core::fourier::{
    derivative_coeff_identity_check, fourier_coeffs, inverse, restricted_coeff_identity_check,
};
use heatlab_core::grid::{CircleGrid, GridFunction, Shift, SpaceTimeField, TimeGrid};

fn grid_fn(eta: usize) -> impl Strategy<Value = GridFunction> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 2 * eta).prop_map(move |v| {
        let values = v
            .into_iter()
            .map(|(re, im)| Complex64::new(re, im))
            .collect();
        GridFunction::new(CircleGrid::new(eta).unwrap(), values).unwrap()
    })
}

fn eta_and_pair() -> impl Strategy<Value = (GridFunction, GridFunction)> {
    (1usize..33).prop_flat_map(|eta| (grid_fn(eta), grid_fn(eta)))
}

fn even_eta_fn() -> impl Strategy<Value = GridFunction> {
    (1usize..17).prop_flat_map(|h| grid_fn(2 * h))
}

proptest! {
    #[test]
    fn calculus_identities((g, h) in eta_and_pair()) {
        let rep = calculus_identity_check(&g, &h).unwrap();
        prop_assert!(rep.passed(1e-12), "{:?}", rep.worst());
    }

    #[test]
    fn space_time_identities(
        rows in prop::collection::vec((grid_fn(6), grid_fn(6)), 1..6),
    ) {
        let tg = TimeGrid::new(4, rows.len() - 1).unwrap();
        let (g, h): (Vec<_>, Vec<_>) = rows.into_iter().unzip();
        let g = SpaceTimeField::new(tg, g).unwrap();
        let h = SpaceTimeField::new(tg, h).unwrap();
        let rep = space_time_identity_check(&g, &h).unwrap();
        prop_assert!(rep.passed(1e-12), "{:?}", rep.worst());
    }

    #[test]
    fn shifts_are_inverse_rotations(f in even_eta_fn()) {
        prop_assert_eq!(f.shift(Shift::Left).shift(Shift::Right), f.clone());
        let n = f.len() as isize;
        let l = f.shift(Shift::Left);
        for j in 0..n {
            prop_assert_eq!(l.get(j), f.get(j + 1));
        }
    }

    #[test]
    fn second_derivative_is_repeated_first(f in even_eta_fn()) {
        prop_assert!(f.d2_dx2().max_abs_diff(&f.d_dx().d_dx()) < 1e-12);
    }

    #[test]
    fn restriction_keeps_even_cells(f in even_eta_fn()) {
        let r = f.restrict().unwrap();
        prop_assert_eq!(r.grid().eta(), f.grid().eta() / 2);
        for (k, v) in r.values().iter().enumerate() {
            prop_assert_eq!(*v, f.values()[2 * k]);
        }
        let even: Vec<Complex64> = f
            .values()
            .iter()
            .enumerate()
            .map(|(j, v)| if j % 2 == 0 { *v } else { Complex64::new(0.0, 0.0) })
            .collect();
        let even = GridFunction::new(f.grid(), even).unwrap();
        prop_assert!((r.integrate() - even.integrate() * 2.0).norm() < 1e-12);
    }

    #[test]
    fn fourier_round_trip_and_parseval(f in even_eta_fn()) {
        let c = fourier_coeffs(&f);
        prop_assert!(inverse(&c).max_abs_diff(&f) < 1e-12);
        let energy = f.map(|v| Complex64::new(v.norm_sqr(), 0.0)).integrate().re / (2.0 * PI);
        let spectral: f64 = c.iter().map(|(_, v)| v.norm_sqr()).sum();
        prop_assert!((energy - spectral).abs() < 1e-10);
    }

    #[test]
    fn fourier_is_linear((g, h) in eta_and_pair(), a in -2.0f64..2.0) {
        let combo = &g.scale(Complex64::new(a, 0.0)) + &h;
        let lhs = fourier_coeffs(&combo);
        let (cg, ch) = (fourier_coeffs(&g), fourier_coeffs(&h));
        let rhs = cg.map_modes(|_| Complex64::new(a, 0.0));
        for (m, v) in lhs.iter() {
            prop_assert!((v - rhs.get(m).unwrap() - ch.get(m).unwrap()).norm() < 1e-12);
        }
    }

    #[test]
    fn coefficient_identities(f in even_eta_fn()) {
        prop_assert!(derivative_coeff_identity_check(&f).max_residual() < 1e-10);
        prop_assert!(restricted_coeff_identity_check(&f).unwrap().max_residual() < 1e-10);
    }
}
