//! Graded derivations defined on generators and extended by the graded
//! Leibniz rule, plus relation checking between operator expressions.

mod calibrate;
mod tables;
mod suites;

pub use calibrate::{calibrate, default_grid, CalibrationResult, Candidate, FailingCheck, ParametrizedRuleSet, Unknown};
pub use suites::{calibration_problem, grid, no_relations, verify_suite, SuiteOptions, CALIBRATION_PROBLEMS, SUITES};
pub use tables::{builtin_corpus, builtin_rules, builtin_table, load_rules, rules_with_fp, scan_rules, Convention, Gauge, MIRRORED_LINEAR_RULES};

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::algebra::{Alphabet, Element, Grading, Sym, Word};
use crate::dsl::DerivationLookup;
use crate::error::{Error, Result};
use crate::report::{RelationReport, Status};
use crate::scalar::Scalar;

/// A graded derivation given by its images on generators.
#[derive(Clone, Debug)]
pub struct Derivation {
    pub name: String,
    pub grading: Grading,
    rules: BTreeMap<u16, Element>,
    /// Passes through formal `D⁺⁺` symbols.
    pub commutes_with_d: bool,
    pub depth_bound: u8,
}

impl Derivation {
    pub fn new(name: &str, grading: Grading, depth_bound: u8) -> Self {
        Derivation {
            name: name.to_string(),
            grading,
            rules: BTreeMap::new(),
            commutes_with_d: true,
            depth_bound,
        }
    }

    /// Sets the image of a generator without checking its grading.
    pub fn set_rule(&mut self, gen: u16, image: Element) {
        self.rules.insert(gen, image);
    }

    /// Sets the image of a generator, rejecting images of the wrong grading.
    pub fn with_rule(mut self, name: &str, image: Element) -> Result<Self> {
        let gen = image.alphabet().require(name)?;
        if let Some(msg) = self.grading_defect(image.alphabet(), gen, &image) {
            return Err(Error::GradingMismatch(msg));
        }
        self.set_rule(gen, image);
        Ok(self)
    }

    pub fn rule(&self, gen: u16) -> Option<&Element> {
        self.rules.get(&gen)
    }

    pub fn rules(&self) -> impl Iterator<Item = (u16, &Element)> {
        self.rules.iter().map(|(g, e)| (*g, e))
    }

    /// Multiplication by `lambda` times the ghost number, on every generator.
    pub fn ghost_counting(name: &str, alphabet: &Arc<Alphabet>, lambda: &Scalar, bound: u8) -> Self {
        let mut d = Derivation::new(name, Grading::new(0, 0, 0), bound);
        for (idx, g) in alphabet.generators().iter().enumerate() {
            let sym = Element::sym(alphabet, Sym::new(idx as u16, 0));
            d.set_rule(idx as u16, sym.scale(&(lambda * &Scalar::from_int(g.grading.ghost as i64))));
        }
        d
    }

    fn grading_defect(&self, alphabet: &Alphabet, gen: u16, image: &Element) -> Option<String> {
        if image.is_zero() {
            return None;
        }
        let want = alphabet.get(gen).grading + self.grading;
        let want = Grading::new(want.parity % 2, want.ghost, want.hcharge);
        match image.grading_of() {
            Ok(g) if g == want => None,
            Ok(g) => Some(format!(
                "{}({}) has {g}, expected {want}",
                self.name,
                alphabet.get(gen).name
            )),
            Err(e) => Some(format!("{}({}): {e}", self.name, alphabet.get(gen).name)),
        }
    }

    /// Generators whose image has the wrong or no single grading.
    pub fn grading_defects(&self, alphabet: &Alphabet) -> Vec<(String, String)> {
        self.rules
            .iter()
            .filter_map(|(g, img)| {
                self.grading_defect(alphabet, *g, img)
                    .map(|m| (alphabet.get(*g).name.clone(), m))
            })
            .collect()
    }

    fn image_of(&self, alphabet: &Alphabet, sym: Sym) -> Result<Element> {
        let name = || alphabet.get(sym.gen).name.clone();
        let base = self.rules.get(&sym.gen).ok_or_else(|| Error::UndefinedAction {
            derivation: self.name.clone(),
            generator: name(),
        })?;
        if sym.depth > 0 && !self.commutes_with_d {
            return Err(Error::UndefinedAction {
                derivation: self.name.clone(),
                generator: sym.display(alphabet),
            });
        }
        let mut out = base.clone();
        for _ in 0..sym.depth {
            out = out.formal_d(self.depth_bound)?;
        }
        Ok(out)
    }

    /// Graded Leibniz extension to an arbitrary element.
    pub fn apply(&self, e: &Element) -> Result<Element> {
        let alphabet = e.alphabet().clone();
        let mut out = Element::zero(&alphabet);
        let odd = self.grading.is_odd();
        for (w, c) in e.terms() {
            let mut prefix_parity = 0u8;
            for (i, sym) in w.syms.iter().enumerate() {
                let image = self.image_of(&alphabet, *sym)?;
                if !image.is_zero() {
                    let prefix = Element::word(&alphabet, Word::plain(w.syms[..i].to_vec()), Scalar::one());
                    let suffix =
                        Element::word(&alphabet, Word::plain(w.syms[i + 1..].to_vec()), Scalar::one());
                    let mut term = prefix.multiply(&image)?.multiply(&suffix)?;
                    if w.traced {
                        term = term.trace()?;
                    }
                    let sign = if odd && prefix_parity == 1 { -1 } else { 1 };
                    out = out.add(&term.scale(&(c * &Scalar::from_int(sign))))?;
                }
                prefix_parity ^= sym.parity(&alphabet);
            }
        }
        Ok(out)
    }
}

/// A collection of derivations sharing an alphabet.
#[derive(Clone, Debug)]
pub struct DerivationSet {
    alphabet: Arc<Alphabet>,
    derivations: Vec<Derivation>,
}

impl DerivationSet {
    pub fn new(alphabet: Arc<Alphabet>) -> Self {
        DerivationSet {
            alphabet,
            derivations: Vec::new(),
        }
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    /// Adds a derivation, replacing one of the same name.
    pub fn insert(&mut self, d: Derivation) {
        match self.derivations.iter_mut().find(|x| x.name == d.name) {
            Some(slot) => *slot = d,
            None => self.derivations.push(d),
        }
    }

    pub fn get(&self, name: &str) -> Result<&Derivation> {
        self.derivations
            .iter()
            .find(|d| d.name == name)
            .ok_or_else(|| Error::Unsupported(format!("no derivation named '{name}'")))
    }

    pub fn get_mut(&mut self, name: &str) -> Option<&mut Derivation> {
        self.derivations.iter_mut().find(|d| d.name == name)
    }

    pub fn names(&self) -> Vec<&str> {
        self.derivations.iter().map(|d| d.name.as_str()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Derivation> {
        self.derivations.iter()
    }

    /// Applies a scalar substitution to every rule image.
    pub fn map_images(&mut self, f: impl Fn(&Element) -> Element) {
        for d in &mut self.derivations {
            for img in d.rules.values_mut() {
                *img = f(img);
            }
        }
    }

    /// Graded commutator of two derivations evaluated on one generator.
    pub fn commutator_on(&self, a: &str, b: &str, generator: &str) -> Result<Element> {
        let e = Element::generator(&self.alphabet, generator)?;
        OpExpr::bracket(&OpExpr::op(a), &OpExpr::op(b), self)?.apply(self, &e)
    }
}

impl DerivationLookup for DerivationSet {
    fn apply_named(&self, name: &str, e: &Element) -> Result<Element> {
        self.get(name)?.apply(e)
    }
}

/// A scalar combination of compositions of named derivations.
///
/// Each composition lists operators outermost first, so `["s", "d1"]` is
/// `s ∘ δ₁`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OpExpr {
    terms: Vec<(Scalar, Vec<String>)>,
}

impl OpExpr {
    pub fn zero() -> Self {
        OpExpr::default()
    }

    pub fn op(name: &str) -> Self {
        OpExpr {
            terms: vec![(Scalar::one(), vec![name.to_string()])],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scaled(&self, s: &Scalar) -> Self {
        OpExpr {
            terms: self
                .terms
                .iter()
                .map(|(c, ops)| (c * s, ops.clone()))
                .filter(|(c, _)| !c.is_zero())
                .collect(),
        }
    }

    pub fn plus(&self, o: &OpExpr) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(o.terms.iter().cloned());
        OpExpr { terms }
    }

    pub fn compose(&self, o: &OpExpr) -> Self {
        let mut terms = Vec::new();
        for (c1, a) in &self.terms {
            for (c2, b) in &o.terms {
                let mut ops = a.clone();
                ops.extend(b.iter().cloned());
                terms.push((c1 * c2, ops));
            }
        }
        OpExpr { terms }
    }

    /// `A∘B − (−1)^{ε(A)ε(B)} B∘A`.
    pub fn bracket(a: &OpExpr, b: &OpExpr, set: &DerivationSet) -> Result<Self> {
        let pa = a.grading(set)?.map_or(0, |g| g.parity);
        let pb = b.grading(set)?.map_or(0, |g| g.parity);
        let sign = if pa * pb == 1 { 1 } else { -1 };
        Ok(a.compose(b).plus(&b.compose(a).scaled(&Scalar::from_int(sign))))
    }

    /// Common grading of every composition, `None` for the zero operator.
    pub fn grading(&self, set: &DerivationSet) -> Result<Option<Grading>> {
        let mut seen: Option<Grading> = None;
        for (_, ops) in &self.terms {
            let mut g = Grading::new(0, 0, 0);
            for op in ops {
                g = g + set.get(op)?.grading;
            }
            g = Grading::new(g.parity % 2, g.ghost, g.hcharge);
            match seen {
                None => seen = Some(g),
                Some(s) if s != g => {
                    return Err(Error::GradingMismatch(format!(
                        "operator terms of {s} and {g} in {self}"
                    )))
                }
                _ => {}
            }
        }
        Ok(seen)
    }

    pub fn apply(&self, set: &DerivationSet, e: &Element) -> Result<Element> {
        let mut out = Element::zero(e.alphabet());
        for (c, ops) in &self.terms {
            let mut v = e.clone();
            for op in ops.iter().rev() {
                v = set.get(op)?.apply(&v)?;
            }
            out = out.add(&v.scale(c))?;
        }
        Ok(out)
    }
}

impl fmt::Display for OpExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(c, ops)| format!("({c})*{}", ops.join("∘")))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// A claimed identity `lhs = rhs` between operator expressions.
#[derive(Clone, Debug)]
pub struct Relation {
    pub name: String,
    pub lhs: OpExpr,
    pub rhs: OpExpr,
}

impl Relation {
    pub fn new(name: &str, lhs: OpExpr, rhs: OpExpr) -> Self {
        Relation {
            name: name.to_string(),
            lhs,
            rhs,
        }
    }

    /// `[a, b] = rhs`, named after its printed form.
    pub fn bracket(set: &DerivationSet, a: &str, b: &str, rhs: OpExpr, rhs_text: &str) -> Result<Self> {
        let lhs = OpExpr::bracket(&OpExpr::op(a), &OpExpr::op(b), set)?;
        Ok(Relation::new(&format!("[{a},{b}] = {rhs_text}"), lhs, rhs))
    }
}

/// Per-generator residuals `lhs(g) − rhs(g)` of a relation.
#[derive(Clone, Debug)]
pub struct RelationCheck {
    pub name: String,
    pub residuals: Vec<(String, Element)>,
}

impl RelationCheck {
    pub fn passes(&self) -> bool {
        self.residuals.iter().all(|(_, r)| r.is_zero())
    }

    /// Residual on a named generator.
    pub fn residual(&self, generator: &str) -> Option<&Element> {
        self.residuals
            .iter()
            .find(|(g, _)| g == generator)
            .map(|(_, r)| r)
    }

    pub fn failing_generators(&self) -> Vec<&str> {
        self.residuals
            .iter()
            .filter(|(_, r)| !r.is_zero())
            .map(|(g, _)| g.as_str())
            .collect()
    }

    pub fn report(&self) -> RelationReport {
        let failures: Vec<(String, String)> = self
            .residuals
            .iter()
            .filter(|(_, r)| !r.is_zero())
            .map(|(g, r)| (g.clone(), r.to_string()))
            .collect();
        RelationReport {
            name: self.name.clone(),
            status: if failures.is_empty() {
                Status::Pass
            } else {
                Status::Fail
            },
            failures,
            note: None,
        }
    }
}

/// Evaluates both sides of a relation on each target generator.
pub fn check_relation(rel: &Relation, set: &DerivationSet, targets: &[&str]) -> Result<RelationCheck> {
    let gl = rel.lhs.grading(set)?;
    let gr = rel.rhs.grading(set)?;
    if let (Some(a), Some(b)) = (gl, gr) {
        if a != b {
            return Err(Error::GradingMismatch(format!(
                "{}: left side has {a}, right side has {b}",
                rel.name
            )));
        }
    }
    let diff = rel.lhs.plus(&rel.rhs.scaled(&Scalar::from_int(-1)));
    let mut residuals = Vec::with_capacity(targets.len());
    for t in targets {
        let e = Element::generator(set.alphabet(), t)?;
        residuals.push((t.to_string(), diff.apply(set, &e)?));
    }
    Ok(RelationCheck {
        name: rel.name.clone(),
        residuals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_element;

    fn linear(conv: Convention) -> DerivationSet {
        builtin_rules(Gauge::Linear, conv, &Scalar::from_int(2), 2).unwrap()
    }

    fn el(set: &DerivationSet, text: &str) -> Element {
        parse_element(text, set.alphabet(), 2).unwrap()
    }

    #[test]
    fn apply_on_generators() {
        let set = linear(Convention::Verbatim);
        let s = set.get("s").unwrap();
        assert_eq!(s.apply(&el(&set, "cbar_L")).unwrap(), el(&set, "b_L"));
        assert!(s.apply(&el(&set, "b_L")).unwrap().is_zero());
        assert_eq!(
            s.apply(&el(&set, "cbar_L*cbar_L")).unwrap(),
            el(&set, "b_L*cbar_L - cbar_L*b_L")
        );
    }

    #[test]
    fn bracket_examples() {
        let set = linear(Convention::Verbatim);
        assert!(set.commutator_on("s", "s", "cbar_L").unwrap().is_zero());
        assert!(set.commutator_on("d1", "d2", "b_L").unwrap().is_zero());
        let lhs = set.commutator_on("s", "dFP", "c_L").unwrap();
        let sc = set.get("s").unwrap().apply(&el(&set, "c_L")).unwrap();
        assert_eq!(lhs, sc.scale(&Scalar::from_int(-2)));
        let lhs = set.commutator_on("d1", "dFP", "cbar_L").unwrap();
        assert_eq!(lhs, el(&set, "-4*c_L"));
    }

    #[test]
    fn odd_self_bracket_is_twice_square() {
        let set = linear(Convention::Verbatim);
        let s = set.get("s").unwrap();
        let v = el(&set, "V_L");
        let twice = s.apply(&s.apply(&v).unwrap()).unwrap().scale(&Scalar::from_int(2));
        assert_eq!(set.commutator_on("s", "s", "V_L").unwrap(), twice);
    }

    #[test]
    fn grading_mismatch_rejected() {
        let set = linear(Convention::Leibniz);
        let rel = Relation::new("[s,s] = s", OpExpr::bracket(&OpExpr::op("s"), &OpExpr::op("s"), &set).unwrap(), OpExpr::op("s"));
        assert!(matches!(
            check_relation(&rel, &set, &["c_L"]),
            Err(Error::GradingMismatch(_))
        ));
    }

    #[test]
    fn with_rule_checks_grading() {
        let a = Arc::new(Alphabet::standard());
        let d = Derivation::new("s", Grading::new(1, 1, 0), 2);
        let ok = parse_element("b_L", &a, 2).unwrap();
        assert!(d.clone().with_rule("cbar_L", ok).is_ok());
        let bad = parse_element("[b_L, cbar_L]", &a, 2).unwrap();
        assert!(d.with_rule("b_L", bad).is_err());
    }

    #[test]
    fn missing_rule_names_generator() {
        let set = linear(Convention::Leibniz);
        let err = set.get("s").unwrap().apply(&el(&set, "Lambda_L")).unwrap_err();
        assert_eq!(
            err,
            Error::UndefinedAction {
                derivation: "s".into(),
                generator: "Lambda_L".into()
            }
        );
    }

    #[test]
    fn depth_bound_enforced() {
        let set = linear(Convention::Leibniz);
        let e = el(&set, "Dpp(Dpp(V_L))");
        assert!(matches!(
            set.get("s").unwrap().apply(&e),
            Err(Error::DepthExceeded { .. })
        ));
    }
}
