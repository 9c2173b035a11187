use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Number of Grassmann coordinates `θ`.
pub const THETA_COUNT: usize = 6;
/// Odd deformation constants occupy mask bits `THETA_COUNT..THETA_COUNT + 6`.
pub const ETA_COUNT: usize = 6;

/// Mask bit of `θ^{++a}` (a = 1, 2).
pub const fn theta_pp(a: usize) -> usize {
    a - 1
}

/// Mask bit of `θ^{--a}`.
pub const fn theta_mm(a: usize) -> usize {
    2 + a - 1
}

/// Mask bit of `θ^{0a}`.
pub const fn theta_0(a: usize) -> usize {
    4 + a - 1
}

/// Mask bit of the odd constant paired with `A^{aμ}`.
pub const fn eta(a: usize, mu: usize) -> usize {
    THETA_COUNT + 3 * (a - 1) + mu
}

const THETA_NAMES: [&str; THETA_COUNT] = ["th++1", "th++2", "th--1", "th--2", "th01", "th02"];
const U_NAMES: [&str; 4] = ["u+1", "u+2", "u-1", "u-2"];

/// Harmonic exponent slots.
pub const UP1: usize = 0;
pub const UP2: usize = 1;
pub const UM1: usize = 2;
pub const UM2: usize = 3;

/// Which spacetime coordinates `x^{ab}` a polynomial is written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Basis {
    Central,
    Analytic,
}

/// `x^{11}`, `x^{12}`, `x^{22}` exponents, an ordered set of odd factors, and a
/// harmonic monomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mono {
    pub x: [u8; 3],
    /// Odd factors in increasing bit order.
    pub odd: u16,
    pub u: [u8; 4],
}

impl Mono {
    pub const ONE: Mono = Mono {
        x: [0; 3],
        odd: 0,
        u: [0; 4],
    };

    pub fn parity(&self) -> u8 {
        (self.odd.count_ones() % 2) as u8
    }

    pub fn x_degree(&self) -> u32 {
        self.x.iter().map(|&e| e as u32).sum()
    }

    pub fn u_degree(&self) -> u32 {
        self.u.iter().map(|&e| e as u32).sum()
    }

    /// `u⁺` count minus `u⁻` count.
    pub fn u_charge(&self) -> i32 {
        self.u[UP1] as i32 + self.u[UP2] as i32 - self.u[UM1] as i32 - self.u[UM2] as i32
    }

    fn is_harmonic_canonical(&self) -> bool {
        self.u[UP1] == 0 || self.u[UM2] == 0
    }
}

/// Sign of moving odd factor `bit` to the front of `mask`.
pub fn front_sign(mask: u16, bit: usize) -> i64 {
    if (mask & ((1u16 << bit) - 1)).count_ones() % 2 == 1 {
        -1
    } else {
        1
    }
}

/// Sign and mask of the ordered product `a · b` of odd factors, or `None` if a factor repeats.
pub fn odd_product(a: u16, b: u16) -> Option<(i64, u16)> {
    if a & b != 0 {
        return None;
    }
    // Each factor of b passes every factor of a with a larger bit.
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let bit = rest.trailing_zeros();
        swaps += (a >> (bit + 1)).count_ones();
        rest &= rest - 1;
    }
    Some((if swaps % 2 == 1 { -1 } else { 1 }, a | b))
}

fn binomial(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, j| acc * (n - j) as i64 / (j + 1) as i64)
}

/// A polynomial in `x`, odd coordinates and harmonics, canonical modulo
/// `u⁺_1 u⁻_2 = u⁺_2 u⁻_1 − 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperPolynomial {
    pub basis: Basis,
    terms: BTreeMap<Mono, Scalar>,
}

impl SuperPolynomial {
    pub fn zero(basis: Basis) -> Self {
        SuperPolynomial {
            basis,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(basis: Basis, c: Scalar) -> Self {
        Self::monomial(basis, Mono::ONE, c)
    }

    pub fn one(basis: Basis) -> Self {
        Self::constant(basis, Scalar::one())
    }

    /// A single term, reduced to harmonic canonical form.
    pub fn monomial(basis: Basis, m: Mono, c: Scalar) -> Self {
        let mut p = Self::zero(basis);
        p.add_term(m, &c);
        p
    }

    pub fn x(basis: Basis, m: usize) -> Self {
        let mut mono = Mono::ONE;
        mono.x[m] = 1;
        Self::monomial(basis, mono, Scalar::one())
    }

    /// A single odd factor by mask bit.
    pub fn odd(basis: Basis, bit: usize) -> Self {
        let mut mono = Mono::ONE;
        mono.odd = 1 << bit;
        Self::monomial(basis, mono, Scalar::one())
    }

    pub fn u(basis: Basis, slot: usize) -> Self {
        let mut mono = Mono::ONE;
        mono.u[slot] = 1;
        Self::monomial(basis, mono, Scalar::one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Scalar)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn insert(&mut self, m: Mono, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let remove = match self.terms.get_mut(&m) {
            Some(e) => {
                *e += c;
                e.is_zero()
            }
            None => {
                self.terms.insert(m, c.clone());
                false
            }
        };
        if remove {
            self.terms.remove(&m);
        }
    }

    /// Adds `c · m`, rewriting `u⁺_1 u⁻_2` factors into the canonical basis.
    pub fn add_term(&mut self, m: Mono, c: &Scalar) {
        if m.is_harmonic_canonical() {
            self.insert(m, c);
            return;
        }
        let t = m.u[UP1].min(m.u[UM2]) as u32;
        let mut rest = m;
        rest.u[UP1] -= t as u8;
        rest.u[UM2] -= t as u8;
        for j in 0..=t {
            let mut mono = rest;
            mono.u[UP2] += j as u8;
            mono.u[UM1] += j as u8;
            let sign = if (t - j) % 2 == 1 { -1 } else { 1 };
            self.insert(mono, &(c * &Scalar::from_int(sign * binomial(t, j))));
        }
    }

    fn check_basis(&self, o: &SuperPolynomial) -> Result<()> {
        if self.basis == o.basis {
            Ok(())
        } else {
            Err(Error::Basis(format!(
                "cannot combine {:?} and {:?} coordinates",
                self.basis, o.basis
            )))
        }
    }

    pub fn add(&self, o: &SuperPolynomial) -> Result<SuperPolynomial> {
        self.check_basis(o)?;
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.insert(*m, c);
        }
        Ok(out)
    }

    pub fn sub(&self, o: &SuperPolynomial) -> Result<SuperPolynomial> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> SuperPolynomial {
        self.scale(&Scalar::from_int(-1))
    }

    pub fn scale(&self, s: &Scalar) -> SuperPolynomial {
        let mut out = SuperPolynomial::zero(self.basis);
        for (m, c) in &self.terms {
            out.insert(*m, &(c * s));
        }
        out
    }

    /// Ordered product with Grassmann signs.
    pub fn multiply(&self, o: &SuperPolynomial) -> Result<SuperPolynomial> {
        self.check_basis(o)?;
        let mut out = SuperPolynomial::zero(self.basis);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let Some((sign, odd)) = odd_product(m1.odd, m2.odd) else {
                    continue;
                };
                let mut m = Mono {
                    x: [0; 3],
                    odd,
                    u: [0; 4],
                };
                for k in 0..3 {
                    m.x[k] = m1.x[k] + m2.x[k];
                }
                for k in 0..4 {
                    m.u[k] = m1.u[k] + m2.u[k];
                }
                out.add_term(m, &(&(c1 * c2) * &Scalar::from_int(sign)));
            }
        }
        Ok(out)
    }

    /// Maps each term through `f`, summing the results.
    pub fn map_terms(&self, f: impl Fn(&Mono, &Scalar) -> SuperPolynomial) -> SuperPolynomial {
        let mut out = SuperPolynomial::zero(self.basis);
        for (m, c) in &self.terms {
            for (m2, c2) in f(m, c).terms {
                out.insert(m2, &c2);
            }
        }
        out
    }

    pub fn map_scalars(&self, f: impl Fn(&Scalar) -> Scalar) -> SuperPolynomial {
        let mut out = SuperPolynomial::zero(self.basis);
        for (m, c) in &self.terms {
            out.insert(*m, &f(c));
        }
        out
    }

    /// Same terms, relabelled as the other basis (no substitution).
    pub fn with_basis(mut self, basis: Basis) -> SuperPolynomial {
        self.basis = basis;
        self
    }

    /// Common Grassmann parity of every term; zero counts as even.
    pub fn parity(&self) -> Result<u8> {
        let mut seen = None;
        for m in self.terms.keys() {
            match seen {
                None => seen = Some(m.parity()),
                Some(p) if p != m.parity() => {
                    return Err(Error::Inhomogeneous {
                        words: self
                            .terms
                            .keys()
                            .map(|m| (mono_text(m), format!("parity {}", m.parity())))
                            .collect(),
                    })
                }
                _ => {}
            }
        }
        Ok(seen.unwrap_or(0))
    }

    pub fn x_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.x_degree()).max().unwrap_or(0)
    }

    /// Largest number of odd factors drawn from `bits` in any term.
    pub fn odd_count(&self, bits: u16) -> u32 {
        self.terms
            .keys()
            .map(|m| (m.odd & bits).count_ones())
            .max()
            .unwrap_or(0)
    }

    /// Keeps only terms without any of the given odd factors.
    pub fn drop_odd(&self, bits: u16) -> SuperPolynomial {
        let mut out = SuperPolynomial::zero(self.basis);
        for (m, c) in &self.terms {
            if m.odd & bits == 0 {
                out.insert(*m, c);
            }
        }
        out
    }

    /// The coefficient of one canonical monomial.
    pub fn coefficient(&self, m: &Mono) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }
}

fn mono_text(m: &Mono) -> String {
    let mut parts = Vec::new();
    for (k, &e) in m.x.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(format!("x{k}")),
            _ => parts.push(format!("x{k}^{e}")),
        }
    }
    for bit in 0..THETA_COUNT + ETA_COUNT {
        if m.odd & (1 << bit) != 0 {
            if bit < THETA_COUNT {
                parts.push(THETA_NAMES[bit].to_string());
            } else {
                let k = bit - THETA_COUNT;
                parts.push(format!("eta{}{}", k / 3 + 1, k % 3));
            }
        }
    }
    for (k, &e) in m.u.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(U_NAMES[k].to_string()),
            _ => parts.push(format!("{}^{e}", U_NAMES[k])),
        }
    }
    parts.join("*")
}

/// Canonical text: terms in monomial order, coefficient first.
impl fmt::Display for SuperPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let body = mono_text(m);
            let coeff = c.to_string();
            let (neg, coeff) = match coeff.strip_prefix('-') {
                Some(rest) if c.is_simple() => (true, rest.to_string()),
                _ => (false, coeff),
            };
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            match (body.is_empty(), coeff.as_str()) {
                (true, _) => write!(f, "{coeff}")?,
                (false, "1") => write!(f, "{body}")?,
                (false, _) => write!(f, "{coeff}*{body}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn up(k: usize) -> SuperPolynomial {
        SuperPolynomial::u(Basis::Analytic, k)
    }

    #[test]
    fn harmonic_rule() {
        let p = up(UP1).multiply(&up(UM2)).unwrap();
        let want = up(UP2)
            .multiply(&up(UM1))
            .unwrap()
            .sub(&SuperPolynomial::one(Basis::Analytic))
            .unwrap();
        assert_eq!(p, want);
    }

    #[test]
    fn constraints_reduce_to_zero() {
        // u^{+i} = ε^{ij} u⁺_j with ε^{12} = 1: u^{+1} = u⁺_2, u^{+2} = −u⁺_1.
        let upper_p = [up(UP2), up(UP1).neg()];
        let upper_m = [up(UM2), up(UM1).neg()];
        let lower_p = [up(UP1), up(UP2)];
        let lower_m = [up(UM1), up(UM2)];
        let contract = |a: &[SuperPolynomial; 2], b: &[SuperPolynomial; 2]| {
            a[0].multiply(&b[0]).unwrap().add(&a[1].multiply(&b[1]).unwrap()).unwrap()
        };
        let one = SuperPolynomial::one(Basis::Analytic);
        assert_eq!(contract(&upper_p, &lower_m), one);
        assert!(contract(&upper_p, &lower_p).is_zero());
        assert!(contract(&upper_m, &lower_m).is_zero());
    }

    #[test]
    fn grassmann_signs() {
        let a = SuperPolynomial::odd(Basis::Analytic, theta_mm(2));
        let b = SuperPolynomial::odd(Basis::Analytic, theta_pp(1));
        let ab = a.multiply(&b).unwrap();
        let ba = b.multiply(&a).unwrap();
        assert_eq!(ab, ba.neg());
        assert!(a.multiply(&a).unwrap().is_zero());
        assert_eq!(ba.to_string(), "th++1*th--2");
        assert_eq!(ab.to_string(), "-th++1*th--2");
    }

    #[test]
    fn mixed_bases_rejected() {
        let a = SuperPolynomial::one(Basis::Analytic);
        let c = SuperPolynomial::one(Basis::Central);
        assert!(matches!(a.add(&c), Err(Error::Basis(_))));
    }
}
