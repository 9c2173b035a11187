//! Flat `key = value` configuration files.
//!
//! Blank lines and lines starting with `#` are ignored. Recognized keys:
//!
//! | key | value |
//! |-----|-------|
//! | `convention` | `verbatim` or `leibniz` |
//! | `gauge` | `landau`, `linear`, `cf`, `massive-cf` |
//! | `generator.NAME` | `SECTOR PARITY GHOST HCHARGE [CONJUGATE]`, e.g. `L odd 1 0 phibar` |
//! | `deformation.AaM` | scalar expression for `A^{aμ}`, e.g. `deformation.A10 = 1/2` |
//! | `deformation.parity` | `odd` or `even` |
//! | `deformation.exponent` | `antisymmetric` or `symmetric` |
//! | `deformation.spacelike` | `true` or `false` |
//! | `param.m2` | scalar expression substituted for `m2` |
//! | `param.alpha` | scalar expression for the gauge parameter |
//! | `fp.lambda` | scale of the ghost-counting derivation |
//! | `bound.depth` | maximum `Dpp` depth per symbol |
//! | `bound.trace_length` | longest trace word in the total-derivative solve |
//! | `bound.unknowns` | calibration unknown limit |
//! | `rules` | path of a rule file replacing the built-in table |
//!
//! Relative `rules` paths resolve against the config file's directory.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use crate::algebra::{Alphabet, Generator, Grading, Sector};
use crate::derivation::{Convention, Gauge};
use crate::dsl::parse_element;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::star::{Deformation, Exponent, Parity};

const PLAIN_KEYS: [&str; 12] = [
    "convention",
    "gauge",
    "deformation.parity",
    "deformation.exponent",
    "deformation.spacelike",
    "param.m2",
    "param.alpha",
    "fp.lambda",
    "bound.depth",
    "bound.trace_length",
    "bound.unknowns",
    "rules",
];

/// Parsed configuration; every field is optional and overrides a default.
#[derive(Clone, Debug, Default)]
pub struct Config {
    pub convention: Option<Convention>,
    pub gauge: Option<Gauge>,
    pub generators: Vec<Generator>,
    /// `(a, μ, text)` entries of the deformation tensor.
    pub deformation: Vec<(usize, usize, String)>,
    pub parity: Option<Parity>,
    pub exponent: Option<Exponent>,
    pub spacelike: bool,
    pub m2: Option<String>,
    pub alpha: Option<String>,
    pub fp_lambda: Option<String>,
    pub depth_bound: Option<u8>,
    pub trace_length: Option<usize>,
    pub max_unknowns: Option<usize>,
    pub rules: Option<PathBuf>,
}

fn bad(line: usize, msg: impl Into<String>) -> Error {
    Error::Config(format!("line {line}: {}", msg.into()))
}

fn parse_generator(line: usize, name: &str, value: &str) -> Result<Generator> {
    let parts: Vec<&str> = value.split_whitespace().collect();
    if !(4..=5).contains(&parts.len()) {
        return Err(bad(line, "generator needs SECTOR PARITY GHOST HCHARGE [CONJUGATE]"));
    }
    let sector = Sector::parse(parts[0]).ok_or_else(|| bad(line, format!("unknown sector '{}'", parts[0])))?;
    let parity = match parts[1] {
        "even" => 0,
        "odd" => 1,
        p => return Err(bad(line, format!("parity must be even or odd, got '{p}'"))),
    };
    let int = |s: &str| s.parse::<i32>().map_err(|_| bad(line, format!("'{s}' is not an integer")));
    let grading = Grading::new(parity, int(parts[2])?, int(parts[3])?);
    Ok(Generator::new(name, sector, grading, parts.get(4).copied()))
}

fn parse_number<T: std::str::FromStr>(line: usize, key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| bad(line, format!("{key} expects a non-negative integer, got '{value}'")))
}

impl Config {
    /// Parses config text. `base` is used to resolve relative paths.
    pub fn parse(text: &str, base: &Path) -> Result<Config> {
        let mut cfg = Config::default();
        let mut seen = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let t = raw.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let (key, value) = t
                .split_once('=')
                .ok_or_else(|| bad(line, "expected key = value"))?;
            let (key, value) = (key.trim(), value.trim());
            if let Some(prev) = seen.insert(key.to_string(), line) {
                return Err(bad(line, format!("duplicate key '{key}' (first set on line {prev})")));
            }
            if let Some(name) = key.strip_prefix("generator.") {
                cfg.generators.push(parse_generator(line, name, value)?);
                continue;
            }
            if let Some(entry) = key.strip_prefix("deformation.A") {
                let digits: Vec<u32> = entry.chars().filter_map(|c| c.to_digit(10)).collect();
                match digits.as_slice() {
                    [a @ 1..=2, m @ 0..=2] if entry.len() == 2 => {
                        cfg.deformation.push((*a as usize, *m as usize, value.to_string()))
                    }
                    _ => return Err(bad(line, format!("'{key}' is not an entry A10 .. A22"))),
                }
                continue;
            }
            match key {
                "convention" => {
                    cfg.convention = Some(
                        Convention::parse(value)
                            .ok_or_else(|| bad(line, format!("unknown convention '{value}'")))?,
                    )
                }
                "gauge" => {
                    cfg.gauge =
                        Some(Gauge::parse(value).ok_or_else(|| bad(line, format!("unknown gauge '{value}'")))?)
                }
                "deformation.parity" => {
                    cfg.parity = Some(match value {
                        "odd" => Parity::Odd,
                        "even" => Parity::Even,
                        _ => return Err(bad(line, "deformation.parity is odd or even")),
                    })
                }
                "deformation.exponent" => {
                    cfg.exponent = Some(match value {
                        "antisymmetric" => Exponent::Antisymmetric,
                        "symmetric" => Exponent::Symmetric,
                        _ => return Err(bad(line, "deformation.exponent is antisymmetric or symmetric")),
                    })
                }
                "deformation.spacelike" => {
                    cfg.spacelike = value
                        .parse()
                        .map_err(|_| bad(line, "deformation.spacelike is true or false"))?
                }
                "param.m2" => cfg.m2 = Some(value.to_string()),
                "param.alpha" => cfg.alpha = Some(value.to_string()),
                "fp.lambda" => cfg.fp_lambda = Some(value.to_string()),
                "bound.depth" => cfg.depth_bound = Some(parse_number(line, key, value)?),
                "bound.trace_length" => cfg.trace_length = Some(parse_number(line, key, value)?),
                "bound.unknowns" => cfg.max_unknowns = Some(parse_number(line, key, value)?),
                "rules" => cfg.rules = Some(base.join(value)),
                _ => {
                    let near: Vec<&str> = PLAIN_KEYS
                        .iter()
                        .copied()
                        .filter(|k| strsim::levenshtein(k, key) <= 3)
                        .collect();
                    let hint = if near.is_empty() {
                        String::new()
                    } else {
                        format!(" (did you mean {}?)", near.join(", "))
                    };
                    return Err(bad(line, format!("unknown key '{key}'{hint}")));
                }
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Config> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Config::parse(&text, path.parent().unwrap_or(Path::new(".")))
    }

    /// The standard alphabet extended with configured generators.
    pub fn alphabet(&self) -> Result<Arc<Alphabet>> {
        let mut a = Alphabet::standard();
        for g in &self.generators {
            a = a.with_generator(g.clone())?;
        }
        Ok(Arc::new(a))
    }

    /// The deformation tensor: symbolic entries unless overridden.
    pub fn deformation(&self) -> Result<Deformation> {
        let mut d = Deformation::symbolic();
        for (a, m, text) in &self.deformation {
            d.entries[a - 1][*m] = scalar(text)?;
        }
        if let Some(p) = self.parity {
            d.parity = p;
        }
        if let Some(e) = self.exponent {
            d.exponent = e;
        }
        Ok(if self.spacelike { d.spacelike() } else { d })
    }
}

/// Parses a scalar expression such as `1/2` or `i*alpha`.
pub fn scalar(text: &str) -> Result<Scalar> {
    let a = Arc::new(Alphabet::standard());
    let e = parse_element(text, &a, 0)?;
    if e.is_zero() {
        return Ok(Scalar::zero());
    }
    let constant = e.terms().next().filter(|(w, _)| e.len() == 1 && w.syms.is_empty() && !w.traced);
    match constant {
        Some((_, c)) => Ok(c.clone()),
        None => Err(Error::Config(format!("'{text}' is not a scalar"))),
    }
}
