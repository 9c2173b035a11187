//! Exact scalars: polynomials in the formal parameters with Gaussian-rational
//! coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Formal parameters a scalar may depend on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Param {
    Alpha,
    K,
    M2,
    /// Entry `A^{aμ}` of the deformation tensor, `a ∈ {1,2}`, `μ ∈ {0,1,2}`.
    A(u8, u8),
}

pub const PARAM_COUNT: usize = 9;

impl Param {
    pub const ALL: [Param; PARAM_COUNT] = [
        Param::Alpha,
        Param::K,
        Param::M2,
        Param::A(1, 0),
        Param::A(1, 1),
        Param::A(1, 2),
        Param::A(2, 0),
        Param::A(2, 1),
        Param::A(2, 2),
    ];

    pub fn slot(self) -> usize {
        match self {
            Param::Alpha => 0,
            Param::K => 1,
            Param::M2 => 2,
            Param::A(a, mu) => 3 + 3 * (a as usize - 1) + mu as usize,
        }
    }

    pub fn name(self) -> String {
        match self {
            Param::Alpha => "alpha".into(),
            Param::K => "k".into(),
            Param::M2 => "m2".into(),
            Param::A(a, mu) => format!("A{a}{mu}"),
        }
    }

    pub fn from_name(name: &str) -> Option<Param> {
        Param::ALL.iter().copied().find(|p| p.name() == name)
    }
}

/// Exponent vector over [`Param::ALL`].
pub type ParamMonomial = [u16; PARAM_COUNT];

const ONE_MONO: ParamMonomial = [0; PARAM_COUNT];

/// A number `re + i·im` with exact rational parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaussRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRational { re, im }
    }

    pub fn from_int(n: i64) -> Self {
        GaussRational::new(BigRational::from_integer(n.into()), BigRational::zero())
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        GaussRational::new(
            BigRational::new(BigInt::from(n), BigInt::from(d)),
            BigRational::zero(),
        )
    }

    pub fn real(re: BigRational) -> Self {
        GaussRational::new(re, BigRational::zero())
    }

    pub fn i() -> Self {
        GaussRational::new(BigRational::zero(), BigRational::one())
    }

    pub fn zero() -> Self {
        GaussRational::from_int(0)
    }

    pub fn one() -> Self {
        GaussRational::from_int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussRational::new(self.re.clone(), -self.im.clone())
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let norm = &self.re * &self.re + &self.im * &self.im;
        Some(GaussRational::new(&self.re / &norm, -&self.im / &norm))
    }

    fn fmt_rational(r: &BigRational) -> String {
        if r.is_integer() {
            r.numer().to_string()
        } else {
            format!("{}/{}", r.numer(), r.denom())
        }
    }

    /// Whether the printed form needs parentheses when used as a factor.
    fn is_compound(&self) -> bool {
        !self.re.is_zero() && !self.im.is_zero()
    }
}

impl fmt::Display for GaussRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let im_str = |im: &BigRational| -> String {
            if im.is_one() {
                "i".to_string()
            } else if (-im.clone()).is_one() {
                "-i".to_string()
            } else {
                format!("{}*i", GaussRational::fmt_rational(im))
            }
        };
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", GaussRational::fmt_rational(&self.re)),
            (true, false) => write!(f, "{}", im_str(&self.im)),
            (false, false) => {
                let re = GaussRational::fmt_rational(&self.re);
                if self.im.is_negative() {
                    write!(f, "({} - {})", re, im_str(&-self.im.clone()))
                } else {
                    write!(f, "({} + {})", re, im_str(&self.im))
                }
            }
        }
    }
}

impl Add for &GaussRational {
    type Output = GaussRational;
    fn add(self, o: &GaussRational) -> GaussRational {
        GaussRational::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl Sub for &GaussRational {
    type Output = GaussRational;
    fn sub(self, o: &GaussRational) -> GaussRational {
        GaussRational::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl Mul for &GaussRational {
    type Output = GaussRational;
    fn mul(self, o: &GaussRational) -> GaussRational {
        GaussRational::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl Neg for &GaussRational {
    type Output = GaussRational;
    fn neg(self) -> GaussRational {
        GaussRational::new(-self.re.clone(), -self.im.clone())
    }
}

/// Polynomial in the formal parameters over the Gaussian rationals.
///
/// Zero is the empty map; no stored coefficient is ever zero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Scalar {
    terms: BTreeMap<ParamMonomial, GaussRational>,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::default()
    }

    pub fn one() -> Self {
        Scalar::constant(GaussRational::one())
    }

    pub fn i() -> Self {
        Scalar::constant(GaussRational::i())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::constant(GaussRational::from_int(n))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Scalar::constant(GaussRational::from_ratio(n, d))
    }

    pub fn constant(c: GaussRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(ONE_MONO, c);
        }
        Scalar { terms }
    }

    pub fn param(p: Param) -> Self {
        let mut mono = ONE_MONO;
        mono[p.slot()] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(mono, GaussRational::one());
        Scalar { terms }
    }

    pub fn from_terms(iter: impl IntoIterator<Item = (ParamMonomial, GaussRational)>) -> Self {
        let mut s = Scalar::zero();
        for (m, c) in iter {
            s.add_term(m, &c);
        }
        s
    }

    fn add_term(&mut self, mono: ParamMonomial, c: &GaussRational) {
        if c.is_zero() {
            return;
        }
        let remove = match self.terms.get_mut(&mono) {
            Some(existing) => {
                *existing = &*existing + c;
                existing.is_zero()
            }
            None => {
                self.terms.insert(mono, c.clone());
                false
            }
        };
        if remove {
            self.terms.remove(&mono);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ParamMonomial, &GaussRational)> {
        self.terms.iter()
    }

    /// The value if this scalar has no parameter dependence.
    pub fn as_constant(&self) -> Option<GaussRational> {
        match self.terms.len() {
            0 => Some(GaussRational::zero()),
            1 => self.terms.get(&ONE_MONO).cloned(),
            _ => None,
        }
    }

    pub fn conj(&self) -> Scalar {
        Scalar {
            terms: self.terms.iter().map(|(m, c)| (*m, c.conj())).collect(),
        }
    }

    pub fn scale(&self, c: &GaussRational) -> Scalar {
        if c.is_zero() {
            return Scalar::zero();
        }
        Scalar {
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
        }
    }

    /// Every term carries at least one factor of `p`.
    pub fn divisible_by(&self, p: Param) -> bool {
        self.terms.keys().all(|m| m[p.slot()] > 0)
    }

    /// Replaces `p` by `value` everywhere.
    pub fn substitute(&self, p: Param, value: &Scalar) -> Scalar {
        let slot = p.slot();
        let mut out = Scalar::zero();
        for (mono, c) in &self.terms {
            let mut rest = *mono;
            let power = rest[slot];
            rest[slot] = 0;
            let mut factor = Scalar::constant(c.clone());
            factor.terms = factor.terms.into_values().map(|v| (rest, v)).collect();
            for _ in 0..power {
                factor = &factor * value;
            }
            out = &out + &factor;
        }
        out
    }

    /// Splits the scalar by parameter monomial.
    pub fn by_monomial(&self) -> &BTreeMap<ParamMonomial, GaussRational> {
        &self.terms
    }

    pub fn monomial_scalar(mono: ParamMonomial, c: GaussRational) -> Scalar {
        Scalar::from_terms([(mono, c)])
    }

    fn fmt_monomial(mono: &ParamMonomial) -> String {
        let mut parts = Vec::new();
        for p in Param::ALL {
            for _ in 0..mono[p.slot()] {
                parts.push(p.name());
            }
        }
        parts.join("*")
    }

    fn fmt_term(mono: &ParamMonomial, c: &GaussRational) -> String {
        if *mono == ONE_MONO {
            return c.to_string();
        }
        let m = Scalar::fmt_monomial(mono);
        if c.is_one() {
            m
        } else if (-c).is_one() {
            format!("-{m}")
        } else {
            format!("{c}*{m}")
        }
    }

    /// True when the printed form is a single signed factor chain.
    pub fn is_simple(&self) -> bool {
        match self.terms.len() {
            0 => true,
            1 => !self.terms.values().next().unwrap().is_compound(),
            _ => false,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            return write!(f, "{}", Scalar::fmt_term(m, c));
        }
        write!(f, "(")?;
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let t = Scalar::fmt_term(m, c);
            if idx == 0 {
                write!(f, "{t}")?;
            } else if let Some(stripped) = t.strip_prefix('-') {
                write!(f, " - {stripped}")?;
            } else {
                write!(f, " + {t}")?;
            }
        }
        write!(f, ")")
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, c);
        }
        out
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, o: &Scalar) {
        for (m, c) in &o.terms {
            self.add_term(*m, c);
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        self + &(-o)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        let mut out = Scalar::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let mut m = *m1;
                for (slot, e) in m.iter_mut().enumerate() {
                    *e += m2[slot];
                }
                out.add_term(m, &(c1 * c2));
            }
        }
        out
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn small_scalar() -> impl Strategy<Value = Scalar> {
        prop::collection::vec((0u16..2, 0u16..2, -3i64..4, -3i64..4, 1i64..3), 0..4).prop_map(
            |terms| {
                Scalar::from_terms(terms.into_iter().map(|(a, m, re, im, d)| {
                    let mut mono = [0u16; PARAM_COUNT];
                    mono[Param::Alpha.slot()] = a;
                    mono[Param::M2.slot()] = m;
                    let c = GaussRational::new(
                        BigRational::new(re.into(), d.into()),
                        BigRational::from_integer(im.into()),
                    );
                    (mono, c)
                }))
            },
        )
    }

    #[test]
    fn i_squared_is_minus_one() {
        assert_eq!(&Scalar::i() * &Scalar::i(), Scalar::from_int(-1));
    }

    #[test]
    fn zero_is_empty() {
        let a = Scalar::param(Param::Alpha);
        assert!((&a - &a).is_zero());
        assert_eq!(Scalar::from_int(0), Scalar::zero());
    }

    #[test]
    fn display_forms() {
        assert_eq!(Scalar::from_ratio(-1, 2).to_string(), "-1/2");
        assert_eq!(Scalar::i().to_string(), "i");
        let s = &Scalar::i() * &Scalar::param(Param::M2);
        assert_eq!(s.to_string(), "i*m2");
        let t = &Scalar::one() + &Scalar::param(Param::Alpha);
        assert_eq!(t.to_string(), "(1 + alpha)");
    }

    #[test]
    fn substitute_m2_zero() {
        let s = &Scalar::from_int(3) + &(&Scalar::i() * &Scalar::param(Param::M2));
        assert_eq!(s.substitute(Param::M2, &Scalar::zero()), Scalar::from_int(3));
        assert!(!s.divisible_by(Param::M2));
    }

    proptest! {
        #[test]
        fn ring_laws(a in small_scalar(), b in small_scalar(), c in small_scalar()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(a.conj().conj(), a.clone());
            prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        }
    }
}
