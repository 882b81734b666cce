use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

use heatlab_core::martingale::{
    build_association, build_process, cdf, extend_process, mass_check,
    verify_distribution_equality, verify_reverse_martingale, Rational, DEFAULT_MARTINGALE_BUDGET,
};

fn setup() -> impl Strategy<Value = (Vec<Rational>, usize)> {
    (2usize..6, 1usize..4).prop_flat_map(|(eta, nu)| {
        (
            prop::collection::vec((0i64..20, 1i64..6), eta).prop_map(|v| {
                v.into_iter()
                    .map(|(n, d)| Rational::new(BigInt::from(n), BigInt::from(d)))
                    .collect()
            }),
            Just(nu),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn construction_is_an_exact_reverse_martingale((initial, nu) in setup()) {
        let eta = initial.len();
        let p = build_process(&initial, nu).unwrap();
        let a = build_association(eta, nu, DEFAULT_MARTINGALE_BUDGET).unwrap();
        prop_assert!(a.counting_check().passed());
        let e = extend_process(&p, &a).unwrap();
        prop_assert!(verify_reverse_martingale(&e).passed());
        for t in 0..=nu {
            prop_assert!(verify_distribution_equality(&p, &e, t).unwrap().passed());
        }
        for (lhs, rhs) in mass_check(&p, &e) {
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn column_mass_is_constant((initial, nu) in setup()) {
        let p = build_process(&initial, nu).unwrap();
        for j in 0..=nu {
            prop_assert_eq!(p.column(j).iter().sum::<Rational>(), p.mass());
        }
    }

    #[test]
    fn cdf_is_a_distribution_function(
        row in prop::collection::vec(-10i64..10, 1..20),
        xs in prop::collection::vec(-12i64..12, 2),
    ) {
        let row: Vec<Rational> = row.into_iter().map(|v| Rational::from_integer(v.into())).collect();
        let (a, b) = (xs[0].min(xs[1]), xs[0].max(xs[1]));
        let fa = cdf(&row, &Rational::from_integer(a.into()));
        let fb = cdf(&row, &Rational::from_integer(b.into()));
        prop_assert!(fa <= fb);
        let max = row.iter().max().unwrap().clone();
        let min = row.iter().min().unwrap().clone();
        prop_assert!(cdf(&row, &max).is_one());
        prop_assert!(cdf(&row, &(min - Rational::one())).is_zero());
    }
}
