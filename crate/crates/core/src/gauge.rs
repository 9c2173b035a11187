//! Gauge-fixing apparatus: matter covariant derivatives, gauge covariance,
//! the gauge-fixing bundle, BRST exactness and the double-variation identities.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::algebra::{Alphabet, Element, Grading, Sym, Word};
use crate::derivation::{Convention, Derivation, DerivationSet, Gauge, SuiteOptions};
use crate::dsl::parse_element;
use crate::error::{Error, Result};
use crate::linsolve::solve;
use crate::report::{RelationReport, VerificationReport};
use crate::scalar::{GaussRational, Param, Scalar};

/// Default longest trace word for the total-derivative solve.
pub const WITNESS_MAX_LEN: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaugeConfig {
    pub gauge: Gauge,
    pub alpha: Scalar,
    pub m2: Scalar,
    pub convention: Convention,
    /// Longest trace word considered by the total-derivative solve.
    pub max_trace_len: usize,
}

impl GaugeConfig {
    pub fn new(gauge: Gauge, alpha: Scalar, m2: Scalar, convention: Convention) -> Result<Self> {
        if gauge == Gauge::Landau && !alpha.is_zero() {
            return Err(Error::Config("the landau gauge fixes alpha = 0".into()));
        }
        if gauge != Gauge::MassiveCf && !m2.is_zero() {
            return Err(Error::Config(format!("m2 must be 0 in the {gauge} gauge")));
        }
        Ok(GaugeConfig {
            gauge,
            alpha,
            m2,
            convention,
            max_trace_len: WITNESS_MAX_LEN,
        })
    }

    /// Symbolic `alpha` (zero for landau) and symbolic `m2` for massive-cf.
    pub fn symbolic(gauge: Gauge, convention: Convention) -> Self {
        let alpha = if gauge == Gauge::Landau {
            Scalar::zero()
        } else {
            Scalar::param(Param::Alpha)
        };
        let m2 = if gauge == Gauge::MassiveCf {
            Scalar::param(Param::M2)
        } else {
            Scalar::zero()
        };
        GaugeConfig {
            gauge,
            alpha,
            m2,
            convention,
            max_trace_len: WITNESS_MAX_LEN,
        }
    }

    /// Rule set for this gauge and convention with `m2` substituted.
    pub fn rule_set(&self, opts: &SuiteOptions) -> Result<(DerivationSet, String, String)> {
        let opts = SuiteOptions {
            convention: self.convention,
            m2: Some(self.m2.clone()),
            ..opts.clone()
        };
        opts.rule_set(self.gauge)
    }
}

/// The six gauge-fixing elements, each wrapped in a trace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaugeFixingBundle {
    pub phi: Element,
    pub phibar: Element,
    pub l_gf: Element,
    pub l_gh: Element,
    pub z: Element,
    pub y: Element,
}

impl GaugeFixingBundle {
    pub fn members(&self) -> [(&'static str, &Element); 6] {
        [
            ("Phi", &self.phi),
            ("Phibar", &self.phibar),
            ("L_gf", &self.l_gf),
            ("L_gh", &self.l_gh),
            ("Z", &self.z),
            ("Y", &self.y),
        ]
    }
}

fn el(text: &str, alphabet: &Arc<Alphabet>) -> Result<Element> {
    parse_element(text, alphabet, 2)
}

/// `∇⁺⁺` on `q` or `qbar`: `Dpp(q) + V_L q - q V_R` and its mirror.
pub fn matter_covariant_derivative(field: &str, alphabet: &Arc<Alphabet>) -> Result<Element> {
    match field {
        "q" => el("Dpp(q) + V_L*q - q*V_R", alphabet),
        "qbar" => el("Dpp(qbar) - qbar*V_L + V_R*qbar", alphabet),
        other => Err(Error::UnknownGenerator(format!("{other} (expected q or qbar)"))),
    }
}

fn sign_of(conv: Convention) -> i64 {
    match conv {
        Convention::Verbatim => 1,
        Convention::Leibniz => -1,
    }
}

fn matter_variation(conv: Convention, field: &str, x: &Element, lam_l: &Element, lam_r: &Element) -> Result<Element> {
    let (left, right) = if field == "q" { (lam_l, lam_r) } else { (lam_r, lam_l) };
    let v = left.multiply(x)?.sub(&x.multiply(right)?)?;
    Ok(v.scale(&Scalar::from_int(sign_of(conv))))
}

/// First-order gauge variation of a field with parameters `Λ_L`, `Λ_R`.
///
/// Verbatim: `δV = -DΛ - [V,Λ]`, `δq = Λ_L q - q Λ_R`. Leibniz: both signs flipped.
pub fn gauge_variation(
    conv: Convention,
    field: &str,
    lam_l: &Element,
    lam_r: &Element,
) -> Result<Element> {
    let alphabet = lam_l.alphabet().clone();
    match field {
        "V_L" | "V_R" => {
            let lam = if field == "V_L" { lam_l } else { lam_r };
            let v = Element::generator(&alphabet, field)?;
            let d = lam.formal_d(2)?.add(&v.graded_commutator(lam)?)?;
            Ok(d.scale(&Scalar::from_int(-sign_of(conv))))
        }
        "q" | "qbar" => {
            let x = Element::generator(&alphabet, field)?;
            matter_variation(conv, field, &x, lam_l, lam_r)
        }
        _ => Ok(Element::zero(&alphabet)),
    }
}

/// Sign laws used for a covariance check: `field` governs `δV`, `matter` governs `δq`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GaugeLaw {
    pub field: Convention,
    pub matter: Convention,
}

impl GaugeLaw {
    pub fn consistent(conv: Convention) -> Self {
        GaugeLaw {
            field: conv,
            matter: conv,
        }
    }
}

fn variation_derivation(law: GaugeLaw, lam_l: &Element, lam_r: &Element) -> Result<Derivation> {
    let alphabet = lam_l.alphabet().clone();
    let mut d = Derivation::new("delta", Grading::new(0, 0, 0), 2);
    for f in ["V_L", "V_R"] {
        d.set_rule(alphabet.require(f)?, gauge_variation(law.field, f, lam_l, lam_r)?);
    }
    for f in ["q", "qbar"] {
        d.set_rule(alphabet.require(f)?, gauge_variation(law.matter, f, lam_l, lam_r)?);
    }
    for name in Alphabet::FIELDS.iter().chain(&["Lambda_L", "Lambda_R"]) {
        let g = alphabet.require(name)?;
        if d.rule(g).is_none() {
            d.set_rule(g, Element::zero(&alphabet));
        }
    }
    Ok(d)
}

/// Checks `δ(∇q) = δq|_{q→∇q}` and the barred mirror at first order.
pub fn check_covariance(law: GaugeLaw, lam_l: &Element, lam_r: &Element) -> Result<RelationReport> {
    let alphabet = lam_l.alphabet().clone();
    let delta = variation_derivation(law, lam_l, lam_r)?;
    let name = format!(
        "covariance of matter derivatives (field law {}, matter law {})",
        law.field, law.matter
    );
    let mut report = RelationReport::pass(&name);
    for f in ["q", "qbar"] {
        let nabla = matter_covariant_derivative(f, &alphabet)?;
        let lhs = delta.apply(&nabla)?;
        let rhs = matter_variation(law.matter, f, &nabla, lam_l, lam_r)?;
        let residual = lhs.sub(&rhs)?;
        if !residual.is_zero() {
            let r = RelationReport::fail(&name, &format!("nabla({f})"), residual.to_string());
            report.status = r.status;
            report.failures.extend(r.failures);
        }
    }
    Ok(report)
}

/// Builds the bundle exactly as printed for the configured gauge.
/// The leibniz convention drops the `i` from the alpha terms of `Phi`.
pub fn build_gauge_fixing(cfg: &GaugeConfig, alphabet: &Arc<Alphabet>) -> Result<GaugeFixingBundle> {
    let phi_alpha = match cfg.convention {
        Convention::Verbatim => "i*alpha/2",
        Convention::Leibniz => "alpha/2",
    };
    let nabla = |x: &str, v: &str| match cfg.convention {
        Convention::Verbatim => format!("-Dpp({x}) - [{v},{x}]"),
        Convention::Leibniz => format!("Dpp({x}) + [{v},{x}]"),
    };
    let texts = [
        format!("tr(c_L*Dpp(V_L) - {phi_alpha}*c_L*b_L - c_R*Dpp(V_R) + {phi_alpha}*c_R*b_R)"),
        "tr(cbar_L*(Dpp(V_L) - alpha/2*b_L) - cbar_R*(Dpp(V_R) - alpha/2*b_R))".to_string(),
        "tr(b_L*Dpp(V_L) + alpha/2*b_L*b_L - b_R*Dpp(V_R) + alpha/2*b_R*b_R)".to_string(),
        format!(
            "tr(cbar_L*Dpp({}) - cbar_R*Dpp({}))",
            nabla("c_L", "V_L"),
            nabla("c_R", "V_R")
        ),
        "tr(V_L*V_L - V_R*V_R)".to_string(),
        "tr(alpha*cbar_R*c_R - alpha*cbar_L*c_L)".to_string(),
    ];
    let mut els = Vec::with_capacity(6);
    for t in &texts {
        els.push(el(t, alphabet)?.substitute(Param::Alpha, &cfg.alpha));
    }
    let mut it = els.into_iter();
    let mut next = || it.next().expect("six members");
    Ok(GaugeFixingBundle {
        phi: next(),
        phibar: next(),
        l_gf: next(),
        l_gh: next(),
        z: next(),
        y: next(),
    })
}

/// Ghost numbers of every word, or an error message for the first mismatch.
fn ghost_defect(e: &Element, expected: i32) -> Option<String> {
    let alphabet = e.alphabet().clone();
    e.terms()
        .find(|(w, _)| w.grading(&alphabet).ghost != expected)
        .map(|(w, _)| format!("{} has ghost number {}", w.display(&alphabet), w.grading(&alphabet).ghost))
}

/// `gh(Phi) = 1`, `gh(Phibar) = -1`, all others 0. Harmonic charge is not
/// checked: `L_gf` mixes charges 0 and 2 as printed.
pub fn check_bundle_gradings(b: &GaugeFixingBundle) -> RelationReport {
    let name = "bundle ghost numbers";
    let mut report = RelationReport::pass(name);
    let expected = [1, -1, 0, 0, 0, 0];
    for ((label, e), g) in b.members().into_iter().zip(expected) {
        if let Some(msg) = ghost_defect(e, g) {
            report.status = crate::report::Status::Fail;
            report.failures.push((label.to_string(), msg));
        }
    }
    report
}

/// Outcome of the total-derivative solve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Exactness {
    /// `Δ = Dpp(witness)`.
    Exact(Element),
    /// No combination of candidate words matches; carries the unmatched part of `Δ`.
    NotExact(Element),
    /// A word of `Δ` is longer than the candidate bound.
    TooLong(usize),
}

type GroupKey = (Vec<u16>, u32);

fn group_key(w: &Word) -> GroupKey {
    let mut gens: Vec<u16> = w.syms.iter().map(|s| s.gen).collect();
    gens.sort_unstable();
    (gens, w.syms.iter().map(|s| s.depth as u32).sum())
}

fn unique_permutations(items: &[u16]) -> Vec<Vec<u16>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(items.len());
    let mut used = vec![false; items.len()];
    fn rec(items: &[u16], used: &mut [bool], cur: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        if cur.len() == items.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..items.len() {
            if used[i] || (i > 0 && items[i] == items[i - 1] && !used[i - 1]) {
                continue;
            }
            used[i] = true;
            cur.push(items[i]);
            rec(items, used, cur, out);
            cur.pop();
            used[i] = false;
        }
    }
    rec(items, &mut used, &mut cur, &mut out);
    out
}

fn compositions(total: u32, parts: usize, cap: u8) -> Vec<Vec<u8>> {
    if parts == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 0..=cap.min(total as u8) {
        for mut rest in compositions(total - first as u32, parts - 1, cap) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Canonical trace words over a generator multiset with a given total depth.
fn candidates(alphabet: &Arc<Alphabet>, gens: &[u16], depth: u32, cap: u8) -> Vec<Word> {
    let mut out = BTreeSet::new();
    for perm in unique_permutations(gens) {
        for depths in compositions(depth, perm.len(), cap) {
            let syms = perm.iter().zip(&depths).map(|(&g, &d)| Sym::new(g, d)).collect();
            let e = Element::word(alphabet, Word { traced: true, syms }, Scalar::one());
            let first = e.terms().next().map(|(w, _)| w.clone());
            out.extend(first);
        }
    }
    out.into_iter().collect()
}

/// Decides whether `delta` is a total `D⁺⁺` derivative of traced words of
/// length at most `max_len` with per-letter depth at most `cap`.
pub fn total_derivative(delta: &Element, max_len: usize, cap: u8) -> Result<Exactness> {
    let alphabet = delta.alphabet().clone();
    if let Some((w, _)) = delta.terms().find(|(w, _)| w.syms.len() > max_len) {
        return Ok(Exactness::TooLong(w.syms.len()));
    }
    let mut groups: BTreeMap<GroupKey, Vec<(Word, Scalar)>> = BTreeMap::new();
    for (w, c) in delta.terms() {
        groups.entry(group_key(w)).or_default().push((w.clone(), c.clone()));
    }
    let mut witness = Element::zero(&alphabet);
    let mut unmatched = Element::zero(&alphabet);
    for ((gens, depth), words) in groups {
        let part = words
            .iter()
            .fold(Element::zero(&alphabet), |mut acc, (w, c)| {
                acc.add_term(w.clone(), c);
                acc
            });
        let traced = words.iter().all(|(w, _)| w.traced);
        if !traced || depth == 0 {
            unmatched = unmatched.add(&part)?;
            continue;
        }
        let cands = candidates(&alphabet, &gens, depth - 1, cap);
        let images: Vec<Element> = cands
            .iter()
            .map(|w| Element::word(&alphabet, w.clone(), Scalar::one()).formal_d(cap + 1))
            .collect::<Result<_>>()?;
        let mut rows: BTreeSet<Word> = words.iter().map(|(w, _)| w.clone()).collect();
        for im in &images {
            rows.extend(im.terms().map(|(w, _)| w.clone()));
        }
        let rows: Vec<Word> = rows.into_iter().collect();
        let matrix: Vec<Vec<GaussRational>> = rows
            .iter()
            .map(|r| {
                images
                    .iter()
                    .map(|im| im.coefficient(r).as_constant().expect("derivative images have constant coefficients"))
                    .collect()
            })
            .collect();
        let monomials: BTreeSet<_> = words
            .iter()
            .flat_map(|(_, c)| c.by_monomial().keys().cloned().collect::<Vec<_>>())
            .collect();
        let mut group_witness = Element::zero(&alphabet);
        let mut solved = true;
        for mono in monomials {
            let rhs: Vec<GaussRational> = rows
                .iter()
                .map(|r| {
                    part.coefficient(r)
                        .by_monomial()
                        .get(&mono)
                        .cloned()
                        .unwrap_or_else(GaussRational::zero)
                })
                .collect();
            match solve(matrix.clone(), rhs) {
                Some(x) => {
                    for (w, k) in cands.iter().zip(x) {
                        if !k.is_zero() {
                            group_witness.add_term(w.clone(), &Scalar::monomial_scalar(mono, k));
                        }
                    }
                }
                None => {
                    solved = false;
                    break;
                }
            }
        }
        if solved {
            witness = witness.add(&group_witness)?;
        } else {
            unmatched = unmatched.add(&part)?;
        }
    }
    if unmatched.is_zero() {
        Ok(Exactness::Exact(witness))
    } else {
        Ok(Exactness::NotExact(unmatched))
    }
}

/// The exactness defect `Δ` for the configured convention.
///
/// Verbatim pairs `s` with `Phi` and `sbar` with `Phibar` as printed; the
/// leibniz convention pairs `s` with the antighost functional `Phibar`.
pub fn exactness_defect(cfg: &GaugeConfig, b: &GaugeFixingBundle, set: &DerivationSet) -> Result<Element> {
    let s = set.get("s")?;
    let sbar = set.get("sbar")?;
    match cfg.convention {
        Convention::Verbatim => s.apply(&b.phi)?.add(&sbar.apply(&b.phibar)?),
        Convention::Leibniz => s.apply(&b.phibar)?.add(&sbar.apply(&b.phi)?),
    }
}

pub fn check_exactness(cfg: &GaugeConfig, b: &GaugeFixingBundle, set: &DerivationSet) -> Result<RelationReport> {
    let name = match cfg.convention {
        Convention::Verbatim => "s tr(Phi) + sbar tr(Phibar) is a total derivative",
        Convention::Leibniz => "s tr(Phibar) + sbar tr(Phi) is a total derivative",
    };
    let delta = exactness_defect(cfg, b, set)?;
    Ok(match total_derivative(&delta, cfg.max_trace_len, 2)? {
        Exactness::Exact(w) if w.is_zero() => RelationReport::pass(name),
        Exactness::Exact(w) => RelationReport::pass(name).with_note(format!("witness: Dpp({w})")),
        Exactness::NotExact(rest) => RelationReport::fail(name, "trace", rest.to_string()),
        Exactness::TooLong(n) => RelationReport::inconclusive(
            name,
            &format!("word of length {n} exceeds the candidate bound {}", cfg.max_trace_len),
        ),
    })
}

/// Compares the two printed orderings of the double variation.
pub fn check_double_variation(cfg: &GaugeConfig, b: &GaugeFixingBundle, set: &DerivationSet) -> Result<RelationReport> {
    let s = set.get("s")?;
    let sbar = set.get("sbar")?;
    let half = Scalar::from_ratio(1, 2);
    let x = match cfg.gauge {
        Gauge::Landau => b.z.clone(),
        Gauge::CurciFerrari | Gauge::MassiveCf => b.z.add(&b.y)?,
        Gauge::Linear => {
            return Err(Error::Unsupported(
                "the linear gauge has no double-variation form".into(),
            ))
        }
    };
    let ssbar = s.apply(&sbar.apply(&x)?)?;
    let sbars = sbar.apply(&s.apply(&x)?)?;
    let im2x = x.scale(&(&Scalar::i() * &cfg.m2));
    let (name, lhs, rhs) = match cfg.gauge {
        Gauge::Landau => (
            "-1/2 s sbar tr(Z) = 1/2 sbar s tr(Z)",
            ssbar.scale(&-&half),
            sbars.scale(&half),
        ),
        Gauge::CurciFerrari => (
            "1/2 s sbar tr(Z+Y) = -1/2 sbar s tr(Z+Y)",
            ssbar.scale(&half),
            sbars.scale(&-&half),
        ),
        _ => (
            "-1/2 (sbar s + i m2) tr(Z+Y) = 1/2 (s sbar - i m2) tr(Z+Y)",
            sbars.add(&im2x)?.scale(&-&half),
            ssbar.sub(&im2x)?.scale(&half),
        ),
    };
    let residual = lhs.sub(&rhs)?;
    Ok(if residual.is_zero() {
        RelationReport::pass(name)
    } else {
        RelationReport::fail(name, "trace", residual.to_string())
    })
}

/// Runs the gauge-fixing checks that apply to the configured gauge.
pub fn verify_gauge_fixing(cfg: &GaugeConfig, opts: &SuiteOptions) -> Result<VerificationReport> {
    let alphabet = opts.alphabet.clone();
    let (set, label, text) = cfg.rule_set(opts)?;
    let mut report = VerificationReport::new("gauge-fixing", cfg.convention.as_str(), cfg.gauge.as_str());
    report.add_input(&label, text.as_bytes());
    report.settings.push(("alpha".into(), cfg.alpha.to_string()));
    report.settings.push(("param.m2".into(), cfg.m2.to_string()));
    let bundle = build_gauge_fixing(cfg, &alphabet)?;
    report.relations.push(check_bundle_gradings(&bundle));
    let lam_l = Element::generator(&alphabet, "Lambda_L")?;
    let lam_r = Element::generator(&alphabet, "Lambda_R")?;
    report
        .relations
        .push(check_covariance(GaugeLaw::consistent(cfg.convention), &lam_l, &lam_r)?);
    if matches!(cfg.gauge, Gauge::Landau | Gauge::Linear) {
        report.relations.push(check_exactness(cfg, &bundle, &set)?);
    }
    if cfg.gauge != Gauge::Linear {
        report.relations.push(check_double_variation(cfg, &bundle, &set)?);
    }
    Ok(report)
}
