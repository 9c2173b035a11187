//! Named relation suites over the built-in (or overridden) rule tables.

use std::sync::Arc;

use super::calibrate::{default_grid, ParametrizedRuleSet, Unknown};
use super::tables::{builtin_table, rules_with_fp};
use super::{check_relation, Convention, Derivation, DerivationSet, Gauge, OpExpr, Relation};
use crate::algebra::{Alphabet, Element, Sector, Sym};
use crate::error::{Error, Result};
use crate::report::{RelationReport, Status, VerificationReport};
use crate::scalar::{Param, Scalar};

pub const SUITES: [&str; 6] = [
    "landau",
    "linear",
    "curci-ferrari",
    "massive-cf",
    "no-algebra",
    "no-algebra-massive",
];

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub convention: Convention,
    /// Gauge for the algebra suites (landau, linear or cf).
    pub gauge: Option<Gauge>,
    pub fp_lambda: Scalar,
    pub depth_bound: u8,
    /// Value substituted for `m2` in every rule image.
    pub m2: Option<Scalar>,
    /// `(label, text)` replacing the built-in table.
    pub rules: Option<(String, String)>,
    pub alphabet: Arc<Alphabet>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            convention: Convention::Verbatim,
            gauge: None,
            fp_lambda: Scalar::from_int(2),
            depth_bound: 2,
            m2: None,
            rules: None,
            alphabet: Arc::new(Alphabet::standard()),
        }
    }
}

impl SuiteOptions {
    pub fn with_convention(convention: Convention) -> Self {
        SuiteOptions {
            convention,
            ..Default::default()
        }
    }

    /// The rule set for a gauge, with its source label and text.
    pub fn rule_set(&self, gauge: Gauge) -> Result<(DerivationSet, String, String)> {
        let (label, text) = match &self.rules {
            Some((l, t)) => (l.clone(), t.clone()),
            None => {
                let (l, t) = builtin_table(gauge, self.convention);
                (l.to_string(), t.to_string())
            }
        };
        let mut set = rules_with_fp(&text, &self.alphabet, &self.fp_lambda, self.depth_bound)?;
        if let Some(m2) = &self.m2 {
            set.map_images(|e| e.substitute(Param::M2, m2));
        }
        Ok((set, label, text))
    }
}

fn op_sum(terms: &[(Scalar, &str)]) -> OpExpr {
    terms
        .iter()
        .fold(OpExpr::zero(), |acc, (c, op)| acc.plus(&OpExpr::op(op).scaled(c)))
}

fn im2(n: i64) -> Scalar {
    &Scalar::i() * &(&Scalar::param(Param::M2) * &Scalar::from_int(n))
}

fn nilpotency(set: &DerivationSet) -> Result<Vec<Relation>> {
    Ok(vec![
        Relation::bracket(set, "s", "s", OpExpr::zero(), "0")?,
        Relation::bracket(set, "sbar", "sbar", OpExpr::zero(), "0")?,
        Relation::bracket(set, "s", "sbar", OpExpr::zero(), "0")?,
    ])
}

/// The twelve Nakanishi-Ojima relations; `massive` selects the mass-deformed right sides.
pub fn no_relations(set: &DerivationSet, massive: bool) -> Result<Vec<Relation>> {
    let n = Scalar::from_int;
    let mut rels = if massive {
        vec![
            Relation::bracket(set, "s", "s", op_sum(&[(im2(-2), "d1")]), "-2*i*m2*d1")?,
            Relation::bracket(set, "sbar", "sbar", op_sum(&[(im2(2), "d2")]), "2*i*m2*d2")?,
            Relation::bracket(set, "s", "sbar", op_sum(&[(im2(2), "dFP")]), "2*i*m2*dFP")?,
        ]
    } else {
        nilpotency(set)?
    };
    rels.extend([
        Relation::bracket(set, "d1", "d2", op_sum(&[(n(-2), "dFP")]), "-2*dFP")?,
        Relation::bracket(set, "d1", "dFP", op_sum(&[(n(-4), "d1")]), "-4*d1")?,
        Relation::bracket(set, "d2", "dFP", op_sum(&[(n(4), "d2")]), "4*d2")?,
        Relation::bracket(set, "s", "dFP", op_sum(&[(n(-2), "s")]), "-2*s")?,
        Relation::bracket(set, "sbar", "dFP", op_sum(&[(n(2), "sbar")]), "2*sbar")?,
        Relation::bracket(set, "s", "d1", OpExpr::zero(), "0")?,
        Relation::bracket(set, "sbar", "d1", op_sum(&[(n(-2), "s")]), "-2*s")?,
        Relation::bracket(set, "s", "d2", op_sum(&[(n(2), "sbar")]), "2*sbar")?,
        Relation::bracket(set, "sbar", "d2", OpExpr::zero(), "0")?,
    ]);
    Ok(rels)
}

/// One report line per derivation listing images whose grading is off.
fn grading_reports(set: &DerivationSet, names: &[&str]) -> Result<Vec<RelationReport>> {
    let mut out = Vec::new();
    for n in names {
        let d = set.get(n)?;
        let defects = d.grading_defects(set.alphabet());
        let name = format!("grading of {n}");
        out.push(if defects.is_empty() {
            RelationReport::pass(&name)
        } else {
            RelationReport {
                name,
                status: Status::Fail,
                failures: defects
                    .into_iter()
                    .map(|(g, msg)| (g.clone(), msg))
                    .collect(),
                note: None,
            }
        });
    }
    Ok(out)
}

pub fn verify_suite(name: &str, opts: &SuiteOptions) -> Result<VerificationReport> {
    let (gauge, relations_of): (Gauge, fn(&DerivationSet) -> Result<Vec<Relation>>) = match name {
        "landau" => (Gauge::Landau, nilpotency),
        "linear" => (Gauge::Linear, nilpotency),
        "curci-ferrari" => (Gauge::CurciFerrari, nilpotency),
        "massive-cf" => (Gauge::MassiveCf, nilpotency),
        "no-algebra" => {
            let g = opts.gauge.unwrap_or(Gauge::CurciFerrari);
            if g == Gauge::MassiveCf {
                return Err(Error::Config(
                    "the massless algebra suite takes landau, linear or cf; use no-algebra-massive".into(),
                ));
            }
            (g, |s| no_relations(s, false))
        }
        "no-algebra-massive" => (Gauge::MassiveCf, |s| no_relations(s, true)),
        other => return Err(Error::UnknownSuite(other.to_string())),
    };
    let (set, label, text) = opts.rule_set(gauge)?;
    let mut report = VerificationReport::new(name, opts.convention.as_str(), gauge.as_str());
    report.add_input(&label, text.as_bytes());
    report.settings.push(("fp.lambda".into(), opts.fp_lambda.to_string()));
    if let Some(m2) = &opts.m2 {
        report.settings.push(("param.m2".into(), m2.to_string()));
    }
    let mut gradable: Vec<&str> = vec!["s", "sbar"];
    if name.starts_with("no-algebra") {
        gradable.extend(["d1", "d2"]);
    }
    report.relations.extend(grading_reports(&set, &gradable)?);
    for rel in relations_of(&set)? {
        report
            .relations
            .push(check_relation(&rel, &set, &Alphabet::FIELDS)?.report());
    }
    Ok(report)
}

/// Built-in calibration problems: `(name, description)`.
pub const CALIBRATION_PROBLEMS: [(&str, &str); 3] = [
    ("ghost-kappa", "coefficient of c_L*c_L in s(c_L) from [s,s] = 0 on V_L"),
    ("fp-lambda", "scale of dFP = lambda*ghost from the four dFP filtration relations"),
    ("fp-lambda-tension", "as fp-lambda, adding [d1,d2] = -2*dFP"),
];

/// A parametrized rule set and its relations for a built-in problem.
pub fn calibration_problem(
    name: &str,
    opts: &SuiteOptions,
) -> Result<(ParametrizedRuleSet, Vec<(Relation, Vec<String>)>)> {
    let all: Vec<String> = Alphabet::FIELDS.iter().map(|s| s.to_string()).collect();
    match name {
        "ghost-kappa" => {
            let mut o = opts.clone();
            o.convention = Convention::Leibniz;
            let (mut base, _, _) = o.rule_set(Gauge::Linear)?;
            let a = base.alphabet().clone();
            let cl = a.require("c_L")?;
            let s = base
                .get_mut("s")
                .ok_or_else(|| Error::Unsupported("table lacks s".into()))?;
            s.set_rule(cl, Element::zero(&a));
            let term = Element::monomial(&a, &["c_L", "c_L"])?;
            let rel = Relation::bracket(&base, "s", "s", OpExpr::zero(), "0")?;
            Ok((
                ParametrizedRuleSet {
                    base,
                    unknowns: vec![Unknown {
                        name: "kappa".into(),
                        sector: Sector::L,
                        slots: vec![("s".into(), "c_L".into(), term)],
                    }],
                },
                vec![(rel, vec!["V_L".into()])],
            ))
        }
        "fp-lambda" | "fp-lambda-tension" => {
            let (mut base, _, _) = opts.rule_set(opts.gauge.unwrap_or(Gauge::CurciFerrari))?;
            let a = base.alphabet().clone();
            base.insert(Derivation::ghost_counting("dFP", &a, &Scalar::zero(), opts.depth_bound));
            let slots = a
                .generators()
                .iter()
                .enumerate()
                .filter(|(_, g)| g.grading.ghost != 0)
                .map(|(i, g)| {
                    let term = Element::sym(&a, Sym::new(i as u16, 0))
                        .scale(&Scalar::from_int(g.grading.ghost as i64));
                    ("dFP".to_string(), g.name.clone(), term)
                })
                .collect();
            let n = Scalar::from_int;
            let mut rels = vec![
                Relation::bracket(&base, "s", "dFP", op_sum(&[(n(-2), "s")]), "-2*s")?,
                Relation::bracket(&base, "sbar", "dFP", op_sum(&[(n(2), "sbar")]), "2*sbar")?,
                Relation::bracket(&base, "d1", "dFP", op_sum(&[(n(-4), "d1")]), "-4*d1")?,
                Relation::bracket(&base, "d2", "dFP", op_sum(&[(n(4), "d2")]), "4*d2")?,
            ];
            if name == "fp-lambda-tension" {
                rels.push(Relation::bracket(&base, "d1", "d2", op_sum(&[(n(-2), "dFP")]), "-2*dFP")?);
            }
            Ok((
                ParametrizedRuleSet {
                    base,
                    unknowns: vec![Unknown {
                        name: "lambda".into(),
                        sector: Sector::Derived,
                        slots,
                    }],
                },
                rels.into_iter().map(|r| (r, all.clone())).collect(),
            ))
        }
        other => Err(Error::Config(format!(
            "unknown calibration problem '{other}' (expected one of {})",
            CALIBRATION_PROBLEMS
                .iter()
                .map(|(n, _)| *n)
                .collect::<Vec<_>>()
                .join(", ")
        ))),
    }
}

/// The default candidate grid, re-exported for callers of [`calibration_problem`].
pub fn grid() -> Vec<Scalar> {
    default_grid()
}
