//! Declarative rule tables: one `[name]` section per derivation with its
//! grading followed by `generator = image` lines.

use std::fmt;
use std::sync::Arc;

use super::{Derivation, DerivationSet};
use crate::algebra::{Alphabet, Grading};
use crate::dsl::{evaluate, parse_expression, Names, NoDerivations};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Sign and bracket normalization of the built-in tables.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Convention {
    /// Tables exactly as printed.
    Verbatim,
    /// `s V = D⁺⁺c + [V, c]`, `s c = −c c`, anti-BRST mirrored.
    Leibniz,
}

impl Convention {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "verbatim" => Some(Convention::Verbatim),
            "leibniz" | "leibniz-consistent" => Some(Convention::Leibniz),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Convention::Verbatim => "verbatim",
            Convention::Leibniz => "leibniz",
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gauge {
    Landau,
    Linear,
    CurciFerrari,
    MassiveCf,
}

impl Gauge {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "landau" => Some(Gauge::Landau),
            "linear" => Some(Gauge::Linear),
            "cf" | "curci-ferrari" => Some(Gauge::CurciFerrari),
            "massive-cf" => Some(Gauge::MassiveCf),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Gauge::Landau => "landau",
            Gauge::Linear => "linear",
            Gauge::CurciFerrari => "cf",
            Gauge::MassiveCf => "massive-cf",
        }
    }
}

impl fmt::Display for Gauge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

const LINEAR_VERBATIM: &str = include_str!("../../data/rules/linear-verbatim.rules");
const LINEAR_LEIBNIZ: &str = include_str!("../../data/rules/linear-leibniz.rules");
const CF_VERBATIM: &str = include_str!("../../data/rules/cf-verbatim.rules");
const CF_LEIBNIZ: &str = include_str!("../../data/rules/cf-leibniz.rules");
const MASSIVE_VERBATIM: &str = include_str!("../../data/rules/massive-cf-verbatim.rules");
const MASSIVE_LEIBNIZ: &str = include_str!("../../data/rules/massive-cf-leibniz.rules");

/// Linear-gauge verbatim tables with the right sector following the left-sector pattern.
pub const MIRRORED_LINEAR_RULES: &str = include_str!("../../data/rules/linear-verbatim-mirrored.rules");

/// File label and text of a built-in table.
pub fn builtin_table(gauge: Gauge, conv: Convention) -> (&'static str, &'static str) {
    match (gauge, conv) {
        (Gauge::Landau | Gauge::Linear, Convention::Verbatim) => ("linear-verbatim.rules", LINEAR_VERBATIM),
        (Gauge::Landau | Gauge::Linear, Convention::Leibniz) => ("linear-leibniz.rules", LINEAR_LEIBNIZ),
        (Gauge::CurciFerrari, Convention::Verbatim) => ("cf-verbatim.rules", CF_VERBATIM),
        (Gauge::CurciFerrari, Convention::Leibniz) => ("cf-leibniz.rules", CF_LEIBNIZ),
        (Gauge::MassiveCf, Convention::Verbatim) => ("massive-cf-verbatim.rules", MASSIVE_VERBATIM),
        (Gauge::MassiveCf, Convention::Leibniz) => ("massive-cf-leibniz.rules", MASSIVE_LEIBNIZ),
    }
}

/// Every built-in table text, for corpus-wide tests.
pub fn builtin_corpus() -> Vec<(&'static str, &'static str)> {
    vec![
        ("linear-verbatim.rules", LINEAR_VERBATIM),
        ("linear-verbatim-mirrored.rules", MIRRORED_LINEAR_RULES),
        ("linear-leibniz.rules", LINEAR_LEIBNIZ),
        ("cf-verbatim.rules", CF_VERBATIM),
        ("cf-leibniz.rules", CF_LEIBNIZ),
        ("massive-cf-verbatim.rules", MASSIVE_VERBATIM),
        ("massive-cf-leibniz.rules", MASSIVE_LEIBNIZ),
    ]
}

/// One parsed `generator = image` line, kept with its source text.
#[derive(Clone, Debug)]
pub struct RuleLine {
    pub derivation: String,
    pub generator: String,
    pub image: String,
    pub line: usize,
}

/// Splits a rule file into sections and rule lines without evaluating images.
pub fn scan_rules(text: &str) -> Result<Vec<(String, Grading, Vec<RuleLine>)>> {
    let mut out: Vec<(String, Grading, Vec<RuleLine>)> = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            out.push((name.trim().to_string(), Grading::new(0, 0, 0), Vec::new()));
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {line_no}: expected 'name = value'")))?;
        let (key, value) = (key.trim(), value.trim());
        let section = out
            .last_mut()
            .ok_or_else(|| Error::Config(format!("line {line_no}: rule outside a [section]")))?;
        let int = |v: &str| {
            v.parse::<i32>()
                .map_err(|_| Error::Config(format!("line {line_no}: '{v}' is not an integer")))
        };
        match key {
            "parity" => section.1.parity = (int(value)?.rem_euclid(2)) as u8,
            "ghost" => section.1.ghost = int(value)?,
            "hcharge" => section.1.hcharge = int(value)?,
            _ => section.2.push(RuleLine {
                derivation: section.0.clone(),
                generator: key.to_string(),
                image: value.to_string(),
                line: line_no,
            }),
        }
    }
    Ok(out)
}

/// Parses a rule file into derivations over `alphabet`. Image gradings are not
/// checked here; see [`Derivation::grading_defects`].
pub fn load_rules(text: &str, alphabet: &Arc<Alphabet>, depth_bound: u8) -> Result<Vec<Derivation>> {
    let names = Names {
        generators: alphabet.names().collect(),
        derivations: Vec::new(),
    };
    let mut out = Vec::new();
    for (name, grading, lines) in scan_rules(text)? {
        let mut d = Derivation::new(&name, grading, depth_bound);
        for rl in lines {
            let gen = alphabet.index_of(&rl.generator).ok_or_else(|| {
                Error::Config(format!("line {}: unknown generator '{}'", rl.line, rl.generator))
            })?;
            let located = |e: Error| Error::Config(format!("line {}: {e}", rl.line));
            let expr = parse_expression(&rl.image, &names).map_err(located)?;
            let image = evaluate(&expr, alphabet, &NoDerivations, depth_bound).map_err(located)?;
            d.set_rule(gen, image);
        }
        out.push(d);
    }
    Ok(out)
}

/// Loads rule text and adds `dFP` as `lambda` times ghost-number multiplication.
pub fn rules_with_fp(text: &str, alphabet: &Arc<Alphabet>, lambda: &Scalar, depth_bound: u8) -> Result<DerivationSet> {
    let mut set = DerivationSet::new(alphabet.clone());
    for d in load_rules(text, alphabet, depth_bound)? {
        set.insert(d);
    }
    if set.get("dFP").is_err() {
        set.insert(Derivation::ghost_counting("dFP", alphabet, lambda, depth_bound));
    }
    Ok(set)
}

/// The built-in tables for a gauge and convention over the standard alphabet.
pub fn builtin_rules(gauge: Gauge, conv: Convention, lambda: &Scalar, depth_bound: u8) -> Result<DerivationSet> {
    let alphabet = Arc::new(Alphabet::standard());
    rules_with_fp(builtin_table(gauge, conv).1, &alphabet, lambda, depth_bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::ExprKind;

    #[test]
    fn corpus_loads() {
        let a = Arc::new(Alphabet::standard());
        for (label, text) in builtin_corpus() {
            let ds = load_rules(text, &a, 2).unwrap_or_else(|e| panic!("{label}: {e}"));
            assert!(ds.len() >= 4, "{label}");
            for d in &ds {
                for f in Alphabet::FIELDS {
                    assert!(d.rule(a.index_of(f).unwrap()).is_some(), "{label} {} {f}", d.name);
                }
            }
        }
    }

    #[test]
    fn corpus_print_parse_round_trip() {
        let a = Alphabet::standard();
        let names = Names {
            generators: a.names().collect(),
            derivations: vec!["s", "sbar", "d1", "d2", "dFP"],
        };
        for (label, text) in builtin_corpus() {
            for (_, _, lines) in scan_rules(text).unwrap() {
                for rl in lines {
                    let ast = parse_expression(&rl.image, &names).unwrap();
                    let again = parse_expression(&ast.to_string(), &names).unwrap();
                    assert_eq!(ast, again, "{label}:{}", rl.line);
                    assert!(!matches!(again.kind, ExprKind::Apply(..)));
                }
            }
        }
    }

    #[test]
    fn errors_carry_line_numbers() {
        let a = Arc::new(Alphabet::standard());
        let err = load_rules("[s]\nparity = 1\nc_L = -c_L*c_X\n", &a, 2).unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
        let err = load_rules("c_L = 0\n", &a, 2).unwrap_err();
        assert!(err.to_string().contains("line 1"), "{err}");
    }

    #[test]
    fn verbatim_tables_have_ghost_defects() {
        let set = builtin_rules(Gauge::Linear, Convention::Verbatim, &Scalar::from_int(2), 2).unwrap();
        let defects = set.get("s").unwrap().grading_defects(set.alphabet());
        assert_eq!(defects.len(), 1);
        assert_eq!(defects[0].0, "b_R");
        let defects = set.get("sbar").unwrap().grading_defects(set.alphabet());
        assert_eq!(defects[0].0, "b_L");
        let set = builtin_rules(Gauge::Linear, Convention::Leibniz, &Scalar::from_int(2), 2).unwrap();
        for d in set.iter() {
            assert!(d.grading_defects(set.alphabet()).is_empty(), "{}", d.name);
        }
    }
}
