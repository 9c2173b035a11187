//! Randomized checks of harmonic reduction, Berezin integration and analyticity.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use superbrst::sampling::random_superpoly;
use superbrst::scalar::Scalar;
use superbrst::superspace::{
    apply_operator, berezin_integrate, is_analytic, theta_mm, Basis, Measure, Mono, OperatorTag, SuperPolynomial, UM2, UP1,
};

fn poly(seed: u64, max_x: u8) -> SuperPolynomial {
    random_superpoly(&mut ChaCha8Rng::seed_from_u64(seed), Basis::Analytic, max_x, 2, 4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn harmonic_reduction_is_confluent(a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let (f, g, h) = (poly(a, 1), poly(b, 1), poly(c, 1));
        let left = f.multiply(&g).unwrap().multiply(&h).unwrap();
        let right = f.multiply(&g.multiply(&h).unwrap()).unwrap();
        prop_assert_eq!(&left, &right);
    }

    #[test]
    fn reduction_ignores_insertion_order(terms in prop::collection::vec((prop::array::uniform4(0u8..3), -3i64..=3), 1..6)) {
        let monos: Vec<(Mono, Scalar)> = terms
            .iter()
            .map(|(u, k)| (Mono { u: *u, ..Mono::ONE }, Scalar::from_int(*k)))
            .collect();
        let mut fwd = SuperPolynomial::zero(Basis::Analytic);
        for (m, k) in &monos {
            fwd.add_term(*m, k);
        }
        let mut rev = SuperPolynomial::zero(Basis::Analytic);
        for (m, k) in monos.iter().rev() {
            rev.add_term(*m, k);
        }
        prop_assert!(fwd.terms().all(|(m, _)| m.u[UP1] == 0 || m.u[UM2] == 0));
        prop_assert_eq!(fwd, rev);
    }

    #[test]
    fn integral_of_spinor_derivative_vanishes(seed in any::<u64>(), a in 1usize..=2) {
        let f = poly(seed, 0);
        let df = apply_operator(&f, OperatorTag::DppA(a));
        prop_assert!(berezin_integrate(&df, Measure::Full).is_zero());
    }

    #[test]
    fn analytic_functions_closed_under_dpp_and_d0(seed in any::<u64>()) {
        let mask = (1u16 << theta_mm(1)) | (1u16 << theta_mm(2));
        let f = poly(seed, 2).drop_odd(mask);
        prop_assert!(is_analytic(&f).unwrap());
        prop_assert!(is_analytic(&apply_operator(&f, OperatorTag::DPP)).unwrap());
        prop_assert!(is_analytic(&apply_operator(&f, OperatorTag::D0)).unwrap());
    }
}
