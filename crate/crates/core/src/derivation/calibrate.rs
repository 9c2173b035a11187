//! Grid search over unknown rule coefficients.

use std::collections::BTreeSet;

use super::{check_relation, DerivationSet, Relation};
use crate::algebra::{Element, Sector};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A coefficient to be found, entering one or more rule images linearly.
#[derive(Clone, Debug)]
pub struct Unknown {
    pub name: String,
    pub sector: Sector,
    /// `(derivation, generator, term)`: the image of the generator gains `value · term`.
    pub slots: Vec<(String, String, Element)>,
}

/// A rule set in which some coefficients are unknowns.
#[derive(Clone, Debug)]
pub struct ParametrizedRuleSet {
    /// Rules with every unknown term removed.
    pub base: DerivationSet,
    pub unknowns: Vec<Unknown>,
}

impl ParametrizedRuleSet {
    /// The concrete rule set for one assignment (in `unknowns` order).
    pub fn instantiate(&self, values: &[Scalar]) -> Result<DerivationSet> {
        let mut set = self.base.clone();
        for (u, v) in self.unknowns.iter().zip(values) {
            for (d, g, term) in &u.slots {
                let gen = set.alphabet().require(g)?;
                let deriv = set
                    .get_mut(d)
                    .ok_or_else(|| Error::Unsupported(format!("no derivation named '{d}'")))?;
                let old = deriv
                    .rule(gen)
                    .cloned()
                    .unwrap_or_else(|| Element::zero(term.alphabet()));
                deriv.set_rule(gen, old.add(&term.scale(v))?);
            }
        }
        Ok(set)
    }
}

/// One relation evaluated on one generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FailingCheck {
    pub relation: String,
    pub generator: String,
}

/// A grid point together with the unknown names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub values: Vec<(String, Scalar)>,
}

#[derive(Clone, Debug)]
pub struct CalibrationResult {
    pub solutions: Vec<Candidate>,
    /// Irreducible set of checks with no common solution; empty when solutions exist.
    pub core: Vec<FailingCheck>,
    pub evaluated: usize,
}

/// `{−2, −1, −½, 0, ½, 1, 2}`.
pub fn default_grid() -> Vec<Scalar> {
    vec![
        Scalar::from_int(-2),
        Scalar::from_int(-1),
        Scalar::from_ratio(-1, 2),
        Scalar::zero(),
        Scalar::from_ratio(1, 2),
        Scalar::from_int(1),
        Scalar::from_int(2),
    ]
}

struct Check<'a> {
    relation: &'a Relation,
    generator: String,
    /// Index (in search order) of the last unknown the check depends on.
    stage: Option<usize>,
}

fn sector_rank(s: Sector) -> u8 {
    match s {
        Sector::L => 0,
        Sector::R => 1,
        Sector::Matter | Sector::Derived => 2,
    }
}

/// Generators reachable from `start` in `steps` applications of `ops`.
fn reachable(set: &DerivationSet, unknowns: &[Unknown], ops: &BTreeSet<String>, start: &str, steps: usize) -> Vec<BTreeSet<String>> {
    let alphabet = set.alphabet();
    let mut levels = vec![BTreeSet::from([start.to_string()])];
    for _ in 0..steps {
        let cur = levels.last().unwrap().clone();
        let mut next = cur.clone();
        for g in &cur {
            let Some(idx) = alphabet.index_of(g) else { continue };
            for op in ops {
                let Ok(d) = set.get(op) else { continue };
                let mut images: Vec<&Element> = d.rule(idx).into_iter().collect();
                for u in unknowns {
                    for (sd, sg, term) in &u.slots {
                        if sd == op && sg == g {
                            images.push(term);
                        }
                    }
                }
                for img in images {
                    for (w, _) in img.terms() {
                        for s in &w.syms {
                            next.insert(alphabet.get(s.gen).name.clone());
                        }
                    }
                }
            }
        }
        levels.push(next);
    }
    levels
}

fn relation_ops(rel: &Relation) -> (BTreeSet<String>, usize) {
    let mut ops = BTreeSet::new();
    let mut longest = 0;
    for expr in [&rel.lhs, &rel.rhs] {
        for (_, comp) in &expr.terms {
            longest = longest.max(comp.len());
            ops.extend(comp.iter().cloned());
        }
    }
    (ops, longest)
}

/// Finds every grid assignment under which all relations hold on their targets.
pub fn calibrate(
    params: &ParametrizedRuleSet,
    relations: &[(Relation, Vec<String>)],
    grid: &[Scalar],
    max_unknowns: usize,
) -> Result<CalibrationResult> {
    if params.unknowns.len() > max_unknowns {
        return Err(Error::SearchSpace(format!(
            "{} unknowns exceed the bound of {max_unknowns}; split the problem by sector",
            params.unknowns.len()
        )));
    }
    let mut order: Vec<usize> = (0..params.unknowns.len()).collect();
    order.sort_by_key(|&i| (sector_rank(params.unknowns[i].sector), i));
    let ordered: Vec<Unknown> = order.iter().map(|&i| params.unknowns[i].clone()).collect();
    let ps = ParametrizedRuleSet {
        base: params.base.clone(),
        unknowns: ordered,
    };

    let mut checks = Vec::new();
    for (rel, targets) in relations {
        let (ops, steps) = relation_ops(rel);
        for t in targets {
            let levels = reachable(&ps.base, &ps.unknowns, &ops, t, steps);
            let inner = &levels[steps.saturating_sub(1)];
            let stage = ps
                .unknowns
                .iter()
                .enumerate()
                .filter(|(_, u)| u.slots.iter().any(|(d, g, _)| ops.contains(d) && inner.contains(g)))
                .map(|(k, _)| k)
                .max();
            checks.push(Check {
                relation: rel,
                generator: t.clone(),
                stage,
            });
        }
    }

    let all: Vec<usize> = (0..checks.len()).collect();
    let mut evaluated = 0;
    let solutions = search(&ps, &checks, &all, grid, &mut evaluated, false)?;
    let mut core = Vec::new();
    if solutions.is_empty() {
        let mut keep = all.clone();
        let mut i = 0;
        while i < keep.len() {
            let mut trial = keep.clone();
            trial.remove(i);
            if search(&ps, &checks, &trial, grid, &mut evaluated, true)?.is_empty() {
                keep = trial;
            } else {
                i += 1;
            }
        }
        core = keep
            .iter()
            .map(|&c| FailingCheck {
                relation: checks[c].relation.name.clone(),
                generator: checks[c].generator.clone(),
            })
            .collect();
    }
    let mut out: Vec<Candidate> = solutions
        .into_iter()
        .map(|vals| {
            let mut values: Vec<(String, Scalar)> = ps
                .unknowns
                .iter()
                .zip(vals)
                .map(|(u, v)| (u.name.clone(), v))
                .collect();
            values.sort_by_key(|(n, _)| params.unknowns.iter().position(|u| &u.name == n));
            Candidate { values }
        })
        .collect();
    out.sort_by_key(|c| {
        c.values
            .iter()
            .map(|(_, v)| grid.iter().position(|g| g == v))
            .collect::<Vec<_>>()
    });
    Ok(CalibrationResult {
        solutions: out,
        core,
        evaluated,
    })
}

fn passes(ps: &ParametrizedRuleSet, check: &Check<'_>, values: &[Scalar], evaluated: &mut usize) -> Result<bool> {
    let mut full = values.to_vec();
    full.resize(ps.unknowns.len(), Scalar::zero());
    let set = ps.instantiate(&full)?;
    *evaluated += 1;
    Ok(check_relation(check.relation, &set, &[check.generator.as_str()])?.passes())
}

fn search(
    ps: &ParametrizedRuleSet,
    checks: &[Check<'_>],
    active: &[usize],
    grid: &[Scalar],
    evaluated: &mut usize,
    first_only: bool,
) -> Result<Vec<Vec<Scalar>>> {
    let n = ps.unknowns.len();
    let at_stage = |k: Option<usize>| -> Vec<usize> {
        active
            .iter()
            .copied()
            .filter(|&c| checks[c].stage == k)
            .collect()
    };
    for c in at_stage(None) {
        if !passes(ps, &checks[c], &[], evaluated)? {
            return Ok(Vec::new());
        }
    }
    let mut found = Vec::new();
    let mut values: Vec<Scalar> = Vec::with_capacity(n);
    descend(ps, checks, grid, &at_stage, &mut values, &mut found, evaluated, first_only)?;
    Ok(found)
}

#[allow(clippy::too_many_arguments)]
fn descend(
    ps: &ParametrizedRuleSet,
    checks: &[Check<'_>],
    grid: &[Scalar],
    at_stage: &dyn Fn(Option<usize>) -> Vec<usize>,
    values: &mut Vec<Scalar>,
    found: &mut Vec<Vec<Scalar>>,
    evaluated: &mut usize,
    first_only: bool,
) -> Result<()> {
    let k = values.len();
    if k == ps.unknowns.len() {
        found.push(values.clone());
        return Ok(());
    }
    let stage_checks = at_stage(Some(k));
    for v in grid {
        values.push(v.clone());
        let mut ok = true;
        for &c in &stage_checks {
            if !passes(ps, &checks[c], values, evaluated)? {
                ok = false;
                break;
            }
        }
        if ok {
            descend(ps, checks, grid, at_stage, values, found, evaluated, first_only)?;
        }
        values.pop();
        if first_only && !found.is_empty() {
            return Ok(());
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derivation::{builtin_rules, Convention, Gauge, OpExpr};
    use crate::dsl::parse_element;

    #[test]
    fn kappa_recovered_uniquely() {
        let mut base = builtin_rules(Gauge::Linear, Convention::Leibniz, &Scalar::from_int(2), 2).unwrap();
        let a = base.alphabet().clone();
        let cl = a.index_of("c_L").unwrap();
        base.get_mut("s").unwrap().set_rule(cl, Element::zero(&a));
        let ps = ParametrizedRuleSet {
            base: base.clone(),
            unknowns: vec![Unknown {
                name: "kappa".into(),
                sector: Sector::L,
                slots: vec![("s".into(), "c_L".into(), parse_element("c_L*c_L", &a, 2).unwrap())],
            }],
        };
        let rel = Relation::bracket(&base, "s", "s", OpExpr::zero(), "0").unwrap();
        let res = calibrate(&ps, &[(rel, vec!["V_L".into()])], &default_grid(), 12).unwrap();
        assert_eq!(res.solutions.len(), 1);
        assert_eq!(res.solutions[0].values[0].1, Scalar::from_int(-1));
    }

    #[test]
    fn too_many_unknowns() {
        let base = builtin_rules(Gauge::Linear, Convention::Leibniz, &Scalar::from_int(2), 2).unwrap();
        let u = Unknown {
            name: "u".into(),
            sector: Sector::L,
            slots: Vec::new(),
        };
        let ps = ParametrizedRuleSet {
            base,
            unknowns: vec![u; 13],
        };
        assert!(matches!(
            calibrate(&ps, &[], &default_grid(), 12),
            Err(Error::SearchSpace(_))
        ));
    }
}
