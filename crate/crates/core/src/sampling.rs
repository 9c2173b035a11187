//! Seeded random inputs for property suites.

use std::sync::Arc;

use rand::Rng;

use crate::algebra::{Alphabet, Element, Sym, Word};
use crate::scalar::{GaussRational, Scalar};
use crate::superspace::{Basis, Mono, SuperPolynomial, THETA_COUNT};

/// A small nonzero Gaussian rational.
pub fn random_coefficient(rng: &mut impl Rng) -> Scalar {
    let re = GaussRational::from_ratio(rng.gen_range(-3..=3), rng.gen_range(1..=3));
    let im = if rng.gen_bool(0.3) {
        GaussRational::from_ratio(rng.gen_range(-2..=2), rng.gen_range(1..=2))
    } else {
        GaussRational::zero()
    };
    let c = &re + &(&im * &GaussRational::i());
    if c.is_zero() {
        Scalar::one()
    } else {
        Scalar::constant(c)
    }
}

/// A polynomial with up to `terms` terms, `x`-degree ≤ `max_x`, harmonic degree
/// ≤ `max_u`, and any subset of the six `θ`s.
pub fn random_superpoly(rng: &mut impl Rng, basis: Basis, max_x: u8, max_u: u8, terms: usize) -> SuperPolynomial {
    let mut out = SuperPolynomial::zero(basis);
    for _ in 0..rng.gen_range(1..=terms) {
        let mut m = Mono::ONE;
        let dx = rng.gen_range(0..=max_x);
        for _ in 0..dx {
            m.x[rng.gen_range(0..3)] += 1;
        }
        m.odd = rng.gen_range(0..(1u16 << THETA_COUNT));
        let du = rng.gen_range(0..=max_u);
        for _ in 0..du {
            m.u[rng.gen_range(0..4)] += 1;
        }
        out = out
            .add(&SuperPolynomial::monomial(basis, m, random_coefficient(rng)))
            .expect("same basis");
    }
    out
}

/// A random homogeneous-parity element: a combination of words over `gens`
/// of length ≤ `max_len` sharing one parity.
pub fn random_element(rng: &mut impl Rng, alphabet: &Arc<Alphabet>, gens: &[&str], max_len: usize, terms: usize, depth: u8) -> Element {
    let idx: Vec<u16> = gens.iter().map(|g| alphabet.index_of(g).expect("known generator")).collect();
    let mut out = Element::zero(alphabet);
    let mut parity: Option<u8> = None;
    let mut attempts = 0;
    while out.len() < terms && attempts < 50 * terms {
        attempts += 1;
        let len = rng.gen_range(1..=max_len);
        let syms: Vec<Sym> = (0..len)
            .map(|_| Sym::new(idx[rng.gen_range(0..idx.len())], rng.gen_range(0..=depth)))
            .collect();
        let w = Word::plain(syms);
        let p = w.parity(alphabet);
        if *parity.get_or_insert(p) != p {
            continue;
        }
        out.add_term(w, &random_coefficient(rng));
    }
    out
}
