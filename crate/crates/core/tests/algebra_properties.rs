//! Randomized checks of the graded Leibniz extension and ghost bookkeeping.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use superbrst::algebra::{Alphabet, Element};
use superbrst::derivation::{Convention, Gauge, OpExpr, SuiteOptions};
use superbrst::sampling::random_element;
use superbrst::scalar::Scalar;

const DERIVATIONS: [&str; 5] = ["s", "sbar", "d1", "d2", "dFP"];

fn sample(seed: u64, len: usize) -> (Element, Element) {
    let opts = SuiteOptions::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = random_element(&mut rng, &opts.alphabet, &Alphabet::FIELDS, len, 3, 0);
    let b = random_element(&mut rng, &opts.alphabet, &Alphabet::FIELDS, len, 3, 0);
    (a, b)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn graded_leibniz_rule(seed in any::<u64>(), which in 0usize..5, leibniz in any::<bool>()) {
        let conv = if leibniz { Convention::Leibniz } else { Convention::Verbatim };
        let (set, _, _) = SuiteOptions::with_convention(conv).rule_set(Gauge::Linear).unwrap();
        let d = set.get(DERIVATIONS[which]).unwrap();
        let (a, b) = sample(seed, 2);
        let lhs = d.apply(&a.multiply(&b).unwrap()).unwrap();
        let sign = if d.grading.is_odd() && a.parity().unwrap() == 1 { -1 } else { 1 };
        let rhs = d.apply(&a).unwrap().multiply(&b).unwrap()
            .add(&a.multiply(&d.apply(&b).unwrap()).unwrap().scale(&Scalar::from_int(sign)))
            .unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn derivation_equality_principle(seed in any::<u64>()) {
        // [s, dFP] and -2 s agree on generators, hence on every element.
        let (set, _, _) = SuiteOptions::with_convention(Convention::Leibniz).rule_set(Gauge::CurciFerrari).unwrap();
        let lhs = OpExpr::bracket(&OpExpr::op("s"), &OpExpr::op("dFP"), &set).unwrap();
        let rhs = OpExpr::op("s").scaled(&Scalar::from_int(-2));
        let (a, _) = sample(seed, 3);
        prop_assert_eq!(lhs.apply(&set, &a).unwrap(), rhs.apply(&set, &a).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn ghost_number_shifts_by_derivation_ghost(seed in any::<u64>(), which in 0usize..5, cf in any::<bool>()) {
        let gauge = if cf { Gauge::CurciFerrari } else { Gauge::Linear };
        let (set, _, _) = SuiteOptions::with_convention(Convention::Leibniz).rule_set(gauge).unwrap();
        let d = set.get(DERIVATIONS[which]).unwrap();
        let (a, _) = sample(seed, 3);
        let alphabet = a.alphabet().clone();
        for (w, c) in a.terms() {
            let single = Element::word(&alphabet, w.clone(), c.clone());
            let want = w.grading(&alphabet).ghost + d.grading.ghost;
            for (img, _) in d.apply(&single).unwrap().terms() {
                prop_assert_eq!(img.grading(&alphabet).ghost, want);
            }
        }
    }
}
