use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::alphabet::{Alphabet, Grading, DPP_HCHARGE};
use crate::error::{Error, Result};
use crate::scalar::{Param, Scalar};

/// A generator, possibly under `depth` formal `D⁺⁺` derivatives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sym {
    pub gen: u16,
    pub depth: u8,
}

impl Sym {
    pub fn new(gen: u16, depth: u8) -> Self {
        Sym { gen, depth }
    }

    pub fn grading(&self, alphabet: &Alphabet) -> Grading {
        let g = alphabet.get(self.gen).grading;
        Grading::new(g.parity, g.ghost, g.hcharge + DPP_HCHARGE * self.depth as i32)
    }

    pub fn parity(&self, alphabet: &Alphabet) -> u8 {
        alphabet.get(self.gen).grading.parity
    }

    pub fn display(&self, alphabet: &Alphabet) -> String {
        let mut s = alphabet.get(self.gen).name.clone();
        for _ in 0..self.depth {
            s = format!("Dpp({s})");
        }
        s
    }
}

/// An ordered product of symbols, optionally wrapped in a graded cyclic trace.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    pub traced: bool,
    pub syms: Vec<Sym>,
}

impl Word {
    pub fn plain(syms: Vec<Sym>) -> Self {
        Word {
            traced: false,
            syms,
        }
    }

    pub fn empty() -> Self {
        Word::plain(Vec::new())
    }

    pub fn grading(&self, alphabet: &Alphabet) -> Grading {
        self.syms
            .iter()
            .fold(Grading::default(), |acc, s| acc + s.grading(alphabet))
    }

    pub fn parity(&self, alphabet: &Alphabet) -> u8 {
        self.syms.iter().map(|s| s.parity(alphabet)).sum::<u8>() % 2
    }

    pub fn display(&self, alphabet: &Alphabet) -> String {
        let body = if self.syms.is_empty() {
            "1".to_string()
        } else {
            self.syms
                .iter()
                .map(|s| s.display(alphabet))
                .collect::<Vec<_>>()
                .join("*")
        };
        if self.traced {
            format!("tr({body})")
        } else {
            body
        }
    }
}

fn parity_of(syms: &[Sym], alphabet: &Alphabet) -> u8 {
    syms.iter().map(|s| s.parity(alphabet)).sum::<u8>() % 2
}

/// Canonical representative of `tr(syms)` under graded cyclic rotation:
/// the lexicographically minimal rotation and the sign picked up reaching it.
/// `None` when two rotations reach the minimum with opposite signs, i.e. the
/// trace vanishes identically.
pub fn canonical_trace(syms: &[Sym], alphabet: &Alphabet) -> Option<(Vec<Sym>, i8)> {
    let n = syms.len();
    if n == 0 {
        return Some((Vec::new(), 1));
    }
    let mut best: Option<(Vec<Sym>, i8)> = None;
    let mut conflict = false;
    for k in 0..n {
        // tr(P S) = (-1)^{ε(P)ε(S)} tr(S P)
        let prefix = parity_of(&syms[..k], alphabet);
        let suffix = parity_of(&syms[k..], alphabet);
        let sign: i8 = if prefix * suffix == 1 { -1 } else { 1 };
        let mut rot = syms[k..].to_vec();
        rot.extend_from_slice(&syms[..k]);
        match &best {
            None => best = Some((rot, sign)),
            Some((b, bs)) => {
                if rot < *b {
                    best = Some((rot, sign));
                    conflict = false;
                } else if rot == *b && sign != *bs {
                    conflict = true;
                }
            }
        }
    }
    if conflict {
        None
    } else {
        best
    }
}

/// Finite linear combination of words with exact scalar coefficients.
#[derive(Clone, Debug)]
pub struct Element {
    alphabet: Arc<Alphabet>,
    terms: BTreeMap<Word, Scalar>,
}

impl PartialEq for Element {
    fn eq(&self, o: &Element) -> bool {
        (Arc::ptr_eq(&self.alphabet, &o.alphabet) || self.alphabet == o.alphabet)
            && self.terms == o.terms
    }
}

impl Eq for Element {}

impl Element {
    pub fn zero(alphabet: &Arc<Alphabet>) -> Self {
        Element {
            alphabet: alphabet.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(alphabet: &Arc<Alphabet>, s: Scalar) -> Self {
        let mut e = Element::zero(alphabet);
        e.add_term(Word::empty(), &s);
        e
    }

    pub fn one(alphabet: &Arc<Alphabet>) -> Self {
        Element::scalar(alphabet, Scalar::one())
    }

    pub fn sym(alphabet: &Arc<Alphabet>, sym: Sym) -> Self {
        Element::word(alphabet, Word::plain(vec![sym]), Scalar::one())
    }

    pub fn generator(alphabet: &Arc<Alphabet>, name: &str) -> Result<Self> {
        let idx = alphabet.require(name)?;
        Ok(Element::sym(alphabet, Sym::new(idx, 0)))
    }

    /// Product of named generators, e.g. `["c_L", "b_L"]`.
    pub fn monomial(alphabet: &Arc<Alphabet>, names: &[&str]) -> Result<Self> {
        let syms = names
            .iter()
            .map(|n| alphabet.require(n).map(|g| Sym::new(g, 0)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Element::word(alphabet, Word::plain(syms), Scalar::one()))
    }

    pub fn word(alphabet: &Arc<Alphabet>, word: Word, coeff: Scalar) -> Self {
        let mut e = Element::zero(alphabet);
        e.add_term(word, &coeff);
        e
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `coeff · word`, canonicalizing traced words.
    pub fn add_term(&mut self, word: Word, coeff: &Scalar) {
        if coeff.is_zero() {
            return;
        }
        let (word, coeff) = if word.traced {
            match canonical_trace(&word.syms, &self.alphabet) {
                None => return,
                Some((syms, sign)) => {
                    let c = if sign < 0 { -coeff } else { coeff.clone() };
                    (Word { traced: true, syms }, c)
                }
            }
        } else {
            (word, coeff.clone())
        };
        let remove = match self.terms.get_mut(&word) {
            Some(existing) => {
                *existing += &coeff;
                existing.is_zero()
            }
            None => {
                self.terms.insert(word.clone(), coeff);
                false
            }
        };
        if remove {
            self.terms.remove(&word);
        }
    }

    fn check_same(&self, o: &Element) -> Result<()> {
        if Arc::ptr_eq(&self.alphabet, &o.alphabet) || self.alphabet == o.alphabet {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch)
        }
    }

    pub fn add(&self, o: &Element) -> Result<Element> {
        self.check_same(o)?;
        let mut out = self.clone();
        for (w, c) in &o.terms {
            out.add_term(w.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, o: &Element) -> Result<Element> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Element {
        self.scale(&Scalar::from_int(-1))
    }

    pub fn scale(&self, s: &Scalar) -> Element {
        let mut out = Element::zero(&self.alphabet);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), &(c * s));
        }
        out
    }

    /// Bilinear extension of word concatenation.
    pub fn multiply(&self, o: &Element) -> Result<Element> {
        self.check_same(o)?;
        let mut out = Element::zero(&self.alphabet);
        for (w1, c1) in &self.terms {
            for (w2, c2) in &o.terms {
                let traced_scalar = |w: &Word| w.traced || !w.syms.is_empty();
                if (w1.traced && traced_scalar(w2)) || (w2.traced && traced_scalar(w1)) {
                    return Err(Error::TraceProduct);
                }
                let mut syms = w1.syms.clone();
                syms.extend_from_slice(&w2.syms);
                let traced = w1.traced || w2.traced;
                out.add_term(Word { traced, syms }, &(c1 * c2));
            }
        }
        Ok(out)
    }

    /// Common parity of all words; zero counts as even.
    pub fn parity(&self) -> Result<u8> {
        let mut seen: Option<u8> = None;
        for w in self.terms.keys() {
            let p = w.parity(&self.alphabet);
            match seen {
                None => seen = Some(p),
                Some(q) if q != p => {
                    return Err(Error::Inhomogeneous {
                        words: self
                            .terms
                            .keys()
                            .map(|w| {
                                (
                                    w.display(&self.alphabet),
                                    format!("parity {}", w.parity(&self.alphabet)),
                                )
                            })
                            .collect(),
                    })
                }
                _ => {}
            }
        }
        Ok(seen.unwrap_or(0))
    }

    /// `AB − (−1)^{ε(A)ε(B)} BA`.
    pub fn graded_commutator(&self, o: &Element) -> Result<Element> {
        let pa = self.parity()?;
        let pb = o.parity()?;
        let ab = self.multiply(o)?;
        let ba = o.multiply(self)?;
        if pa * pb == 1 {
            ab.add(&ba)
        } else {
            ab.sub(&ba)
        }
    }

    /// Common grading of every word.
    pub fn grading_of(&self) -> Result<Grading> {
        let mut iter = self.terms.keys();
        let first = iter.next().ok_or(Error::ZeroGrading)?;
        let g = first.grading(&self.alphabet);
        if self.terms.keys().all(|w| w.grading(&self.alphabet) == g) {
            Ok(g)
        } else {
            Err(Error::Inhomogeneous {
                words: self
                    .terms
                    .keys()
                    .map(|w| {
                        (
                            w.display(&self.alphabet),
                            w.grading(&self.alphabet).to_string(),
                        )
                    })
                    .collect(),
            })
        }
    }

    /// Antilinear anti-automorphism induced by the generators' conjugate images.
    pub fn conjugate(&self) -> Result<Element> {
        let mut out = Element::zero(&self.alphabet);
        for (w, c) in &self.terms {
            let mut syms = Vec::with_capacity(w.syms.len());
            for s in w.syms.iter().rev() {
                let g = self.alphabet.get(s.gen);
                let image = g
                    .conj_image
                    .as_deref()
                    .ok_or_else(|| Error::MissingConjugate(g.name.clone()))?;
                syms.push(Sym::new(self.alphabet.require(image)?, s.depth));
            }
            out.add_term(
                Word {
                    traced: w.traced,
                    syms,
                },
                &c.conj(),
            );
        }
        Ok(out)
    }

    /// Wraps every word in a trace.
    pub fn trace(&self) -> Result<Element> {
        let mut out = Element::zero(&self.alphabet);
        for (w, c) in &self.terms {
            if w.traced {
                return Err(Error::Unsupported("nested trace".into()));
            }
            out.add_term(
                Word {
                    traced: true,
                    syms: w.syms.clone(),
                },
                c,
            );
        }
        Ok(out)
    }

    /// The formal even derivation `D⁺⁺`, raising the depth of one symbol per term.
    pub fn formal_d(&self, bound: u8) -> Result<Element> {
        let mut out = Element::zero(&self.alphabet);
        for (w, c) in &self.terms {
            for i in 0..w.syms.len() {
                let mut syms = w.syms.clone();
                syms[i].depth += 1;
                if syms[i].depth > bound {
                    return Err(Error::DepthExceeded {
                        generator: self.alphabet.get(syms[i].gen).name.clone(),
                        depth: syms[i].depth,
                        bound,
                    });
                }
                out.add_term(
                    Word {
                        traced: w.traced,
                        syms,
                    },
                    c,
                );
            }
        }
        Ok(out)
    }

    pub fn substitute(&self, p: Param, value: &Scalar) -> Element {
        let mut out = Element::zero(&self.alphabet);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), &c.substitute(p, value));
        }
        out
    }

    pub fn map_scalars(&self, f: impl Fn(&Scalar) -> Scalar) -> Element {
        let mut out = Element::zero(&self.alphabet);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), &f(c));
        }
        out
    }

    pub fn coefficient(&self, w: &Word) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    /// Keeps only the terms whose word satisfies `keep`.
    pub fn filter(&self, keep: impl Fn(&Word) -> bool) -> Element {
        Element {
            alphabet: self.alphabet.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| keep(w))
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (w, c)) in self.terms.iter().enumerate() {
            let word = w.display(&self.alphabet);
            let empty = w.syms.is_empty() && !w.traced;
            let mut term = if empty {
                c.to_string()
            } else if c.is_one() {
                word
            } else if (-c).is_one() {
                format!("-{word}")
            } else {
                format!("{c}*{word}")
            };
            if idx > 0 {
                if let Some(rest) = term.strip_prefix('-') {
                    term = format!(" - {rest}");
                } else {
                    term = format!(" + {term}");
                }
            }
            write!(f, "{term}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alpha() -> Arc<Alphabet> {
        Arc::new(Alphabet::standard())
    }

    fn g(a: &Arc<Alphabet>, n: &str) -> Element {
        Element::generator(a, n).unwrap()
    }

    #[test]
    fn concatenation() {
        let a = alpha();
        let cc = g(&a, "c_L").multiply(&g(&a, "c_L")).unwrap();
        assert_eq!(cc.to_string(), "c_L*c_L");
    }

    #[test]
    fn bilinear() {
        let a = alpha();
        let x = g(&a, "V_L").add(&g(&a, "b_L")).unwrap();
        let p = x.multiply(&g(&a, "q")).unwrap();
        let expect = Element::monomial(&a, &["V_L", "q"])
            .unwrap()
            .add(&Element::monomial(&a, &["b_L", "q"]).unwrap())
            .unwrap();
        assert_eq!(p, expect);
    }

    #[test]
    fn scalar_arithmetic_is_exact() {
        let a = alpha();
        let x = g(&a, "c_L").scale(&Scalar::from_int(2).scale(&crate::scalar::GaussRational::i()));
        let y = g(&a, "b_L").scale(&Scalar::from_ratio(1, 2));
        let p = x.multiply(&y).unwrap();
        assert_eq!(p.to_string(), "i*c_L*b_L");
    }

    #[test]
    fn commutator_signs() {
        let a = alpha();
        let c = g(&a, "c_L");
        assert_eq!(c.graded_commutator(&c).unwrap().to_string(), "2*c_L*c_L");
        let v = g(&a, "V_L");
        assert_eq!(
            v.graded_commutator(&c).unwrap().to_string(),
            "V_L*c_L - c_L*V_L"
        );
        let b = g(&a, "b_L");
        assert!(b.graded_commutator(&b).unwrap().is_zero());
    }

    #[test]
    fn commutator_rejects_mixed_parity() {
        let a = alpha();
        let mixed = g(&a, "b_L").add(&g(&a, "c_L")).unwrap();
        assert!(matches!(
            mixed.graded_commutator(&g(&a, "c_L")),
            Err(Error::Inhomogeneous { .. })
        ));
    }

    #[test]
    fn gradings() {
        let a = alpha();
        let cc = Element::monomial(&a, &["c_L", "c_R"]).unwrap();
        assert_eq!(cc.grading_of().unwrap(), Grading::new(0, 2, 0));
        let x = g(&a, "b_L")
            .add(&Element::monomial(&a, &["c_L", "cbar_L"]).unwrap())
            .unwrap();
        assert_eq!(x.grading_of().unwrap(), Grading::new(0, 0, 0));
        let bad = g(&a, "b_L").add(&g(&a, "c_L")).unwrap();
        match bad.grading_of() {
            Err(Error::Inhomogeneous { words }) => assert_eq!(words.len(), 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn conjugation() {
        let a = alpha();
        let e = Element::monomial(&a, &["c_L", "c_R"])
            .unwrap()
            .scale(&Scalar::i());
        assert_eq!(e.conjugate().unwrap().to_string(), "-i*c_R*c_L");
        assert_eq!(g(&a, "V_L").conjugate().unwrap(), g(&a, "V_L"));
        assert_eq!(g(&a, "q").conjugate().unwrap(), g(&a, "qbar"));
    }

    #[test]
    fn missing_conjugate() {
        let a = Arc::new(
            Alphabet::standard()
                .with_generator(crate::algebra::Generator::new(
                    "c_L",
                    crate::algebra::Sector::L,
                    Grading::new(1, 1, 0),
                    None,
                ))
                .unwrap(),
        );
        assert!(matches!(
            g(&a, "c_L").conjugate(),
            Err(Error::MissingConjugate(_))
        ));
    }

    #[test]
    fn odd_square_trace_vanishes() {
        let a = alpha();
        let t = Element::monomial(&a, &["c_L", "c_L"]).unwrap().trace().unwrap();
        assert!(t.is_zero());
        let bb = Element::monomial(&a, &["b_L", "b_L"]).unwrap().trace().unwrap();
        assert_eq!(bb.to_string(), "tr(b_L*b_L)");
    }

    #[test]
    fn trace_rotation_sign() {
        let a = alpha();
        // tr(c̄ c) = −tr(c c̄); c_L precedes cbar_L in the alphabet
        let t = Element::monomial(&a, &["cbar_L", "c_L"]).unwrap().trace().unwrap();
        assert_eq!(t.to_string(), "-tr(c_L*cbar_L)");
    }

    #[test]
    fn alphabet_mismatch() {
        let a = alpha();
        let b = Arc::new(
            Alphabet::standard()
                .with_generator(crate::algebra::Generator::new(
                    "extra",
                    crate::algebra::Sector::L,
                    Grading::default(),
                    None,
                ))
                .unwrap(),
        );
        assert_eq!(
            g(&a, "c_L").multiply(&g(&b, "c_L")),
            Err(Error::AlphabetMismatch)
        );
    }

    #[test]
    fn formal_d_depth_bound() {
        let a = alpha();
        let c = g(&a, "c_L");
        let d2 = c.formal_d(2).unwrap().formal_d(2).unwrap();
        assert_eq!(d2.to_string(), "Dpp(Dpp(c_L))");
        assert!(matches!(d2.formal_d(2), Err(Error::DepthExceeded { .. })));
    }
}
