use std::sync::Arc;

use num_rational::BigRational;

use super::ast::{Expr, ExprKind};
use crate::algebra::{Alphabet, Element};
use crate::error::{Error, Result};
use crate::scalar::{GaussRational, Scalar};

/// Applies named derivations during evaluation.
pub trait DerivationLookup {
    fn apply_named(&self, name: &str, e: &Element) -> Result<Element>;
}

/// Lookup for contexts without derivations (rule-table images).
pub struct NoDerivations;

impl DerivationLookup for NoDerivations {
    fn apply_named(&self, name: &str, _e: &Element) -> Result<Element> {
        Err(Error::Unsupported(format!(
            "derivation '{name}' is not available here"
        )))
    }
}

pub fn evaluate(
    expr: &Expr,
    alphabet: &Arc<Alphabet>,
    derivations: &dyn DerivationLookup,
    depth_bound: u8,
) -> Result<Element> {
    let ev = |e: &Expr| evaluate(e, alphabet, derivations, depth_bound);
    match &expr.kind {
        ExprKind::Generator(n) => Element::generator(alphabet, n),
        ExprKind::Param(p) => Ok(Element::scalar(alphabet, Scalar::param(*p))),
        ExprKind::Imag => Ok(Element::scalar(alphabet, Scalar::i())),
        ExprKind::Number(n) => Ok(Element::scalar(
            alphabet,
            Scalar::constant(GaussRational::real(BigRational::from_integer(n.clone()))),
        )),
        ExprKind::Neg(a) => Ok(ev(a)?.neg()),
        ExprKind::Add(a, b) => ev(a)?.add(&ev(b)?),
        ExprKind::Sub(a, b) => ev(a)?.sub(&ev(b)?),
        ExprKind::Mul(a, b) => ev(a)?.multiply(&ev(b)?),
        ExprKind::Div(a, b) => {
            let den = ev(b)?;
            let inv = constant_of(&den)
                .and_then(|c| c.inv())
                .ok_or(Error::Division)?;
            Ok(ev(a)?.scale(&Scalar::constant(inv)))
        }
        ExprKind::Bracket(a, b) => ev(a)?.graded_commutator(&ev(b)?),
        ExprKind::Trace(a) => ev(a)?.trace(),
        ExprKind::Apply(d, a) => derivations.apply_named(d, &ev(a)?),
        ExprKind::Dpp(a) => ev(a)?.formal_d(depth_bound),
    }
}

/// The value of an element that is a pure numeric constant.
fn constant_of(e: &Element) -> Option<GaussRational> {
    if e.is_zero() {
        return Some(GaussRational::zero());
    }
    if e.len() != 1 {
        return None;
    }
    let (w, c) = e.terms().next()?;
    if w.traced || !w.syms.is_empty() {
        return None;
    }
    c.as_constant()
}
