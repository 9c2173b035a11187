use std::collections::HashMap;
use std::fmt;
use std::ops::Add;

use crate::error::{Error, Result};

/// Grassmann parity, ghost number and harmonic U(1) charge.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Grading {
    pub parity: u8,
    pub ghost: i32,
    pub hcharge: i32,
}

impl Grading {
    pub const fn new(parity: u8, ghost: i32, hcharge: i32) -> Self {
        Grading {
            parity: parity % 2,
            ghost,
            hcharge,
        }
    }

    pub fn is_odd(&self) -> bool {
        self.parity == 1
    }
}

impl Add for Grading {
    type Output = Grading;
    fn add(self, o: Grading) -> Grading {
        Grading::new(
            (self.parity + o.parity) % 2,
            self.ghost + o.ghost,
            self.hcharge + o.hcharge,
        )
    }
}

impl fmt::Display for Grading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(parity {}, ghost {}, hcharge {})",
            self.parity, self.ghost, self.hcharge
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sector {
    L,
    R,
    Matter,
    Derived,
}

impl Sector {
    pub fn parse(s: &str) -> Option<Sector> {
        match s {
            "L" => Some(Sector::L),
            "R" => Some(Sector::R),
            "matter" => Some(Sector::Matter),
            "derived" => Some(Sector::Derived),
            _ => None,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Sector::L => "L",
            Sector::R => "R",
            Sector::Matter => "matter",
            Sector::Derived => "derived",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub sector: Sector,
    pub grading: Grading,
    pub conj_image: Option<String>,
}

impl Generator {
    pub fn new(name: &str, sector: Sector, grading: Grading, conj: Option<&str>) -> Self {
        Generator {
            name: name.to_string(),
            sector,
            grading,
            conj_image: conj.map(str::to_string),
        }
    }
}

/// Harmonic charge carried by one formal `D⁺⁺`.
pub const DPP_HCHARGE: i32 = 2;

/// An ordered set of generators with unique names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    generators: Vec<Generator>,
    by_name: HashMap<String, usize>,
}

impl Alphabet {
    pub fn new(generators: Vec<Generator>) -> Result<Self> {
        let mut by_name = HashMap::new();
        for (idx, g) in generators.iter().enumerate() {
            if by_name.insert(g.name.clone(), idx).is_some() {
                return Err(Error::Config(format!("duplicate generator '{}'", g.name)));
            }
        }
        let alphabet = Alphabet {
            generators,
            by_name,
        };
        for g in &alphabet.generators {
            if let Some(c) = &g.conj_image {
                if !alphabet.by_name.contains_key(c) {
                    return Err(Error::Config(format!(
                        "conjugate '{c}' of '{}' is not a generator",
                        g.name
                    )));
                }
            }
        }
        Ok(alphabet)
    }

    /// The gauge, ghost, matter and parameter fields with the default grading
    /// table. `V_L`, `V_R` stand for `V⁺⁺`; `Vmm_*` and `W_*` are opaque.
    pub fn standard() -> Self {
        use Sector::*;
        let even = |g, h| Grading::new(0, g, h);
        let odd = |g, h| Grading::new(1, g, h);
        let mut gens = Vec::new();
        for (sector, suffix) in [(L, "L"), (R, "R")] {
            let n = |base: &str| format!("{base}_{suffix}");
            gens.push(Generator::new(&n("V"), sector, even(0, 2), Some(&n("V"))));
            gens.push(Generator::new(&n("c"), sector, odd(1, 0), Some(&n("c"))));
            gens.push(Generator::new(&n("cbar"), sector, odd(-1, 0), Some(&n("cbar"))));
            gens.push(Generator::new(&n("b"), sector, even(0, 0), Some(&n("b"))));
        }
        gens.push(Generator::new("q", Matter, even(0, 1), Some("qbar")));
        gens.push(Generator::new("qbar", Matter, even(0, 1), Some("q")));
        gens.push(Generator::new("Lambda_L", L, even(0, 0), Some("Lambda_L")));
        gens.push(Generator::new("Lambda_R", R, even(0, 0), Some("Lambda_R")));
        gens.push(Generator::new("Vmm_L", Derived, even(0, -2), Some("Vmm_L")));
        gens.push(Generator::new("Vmm_R", Derived, even(0, -2), Some("Vmm_R")));
        gens.push(Generator::new("W_L", Derived, even(0, 2), Some("W_L")));
        gens.push(Generator::new("W_R", Derived, even(0, 2), Some("W_R")));
        Alphabet::new(gens).expect("standard alphabet is well-formed")
    }

    /// The fields the BRST-type derivations act on.
    pub const FIELDS: [&'static str; 10] = [
        "V_L", "c_L", "cbar_L", "b_L", "V_R", "c_R", "cbar_R", "b_R", "q", "qbar",
    ];

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn get(&self, idx: u16) -> &Generator {
        &self.generators[idx as usize]
    }

    pub fn index_of(&self, name: &str) -> Option<u16> {
        self.by_name.get(name).map(|&i| i as u16)
    }

    pub fn require(&self, name: &str) -> Result<u16> {
        self.index_of(name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.generators.iter().map(|g| g.name.as_str())
    }

    /// Replaces or appends a generator definition.
    pub fn with_generator(&self, g: Generator) -> Result<Alphabet> {
        let mut gens = self.generators.clone();
        match self.by_name.get(&g.name) {
            Some(&idx) => gens[idx] = g,
            None => gens.push(g),
        }
        Alphabet::new(gens)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicate_names_rejected() {
        let g = Generator::new("x", Sector::L, Grading::default(), None);
        assert!(Alphabet::new(vec![g.clone(), g]).is_err());
    }

    #[test]
    fn standard_table() {
        let a = Alphabet::standard();
        let c = a.get(a.require("c_L").unwrap());
        assert_eq!(c.grading, Grading::new(1, 1, 0));
        let v = a.get(a.require("V_R").unwrap());
        assert_eq!(v.grading.hcharge, 2);
        assert_eq!(
            a.get(a.require("q").unwrap()).conj_image.as_deref(),
            Some("qbar")
        );
    }
}
