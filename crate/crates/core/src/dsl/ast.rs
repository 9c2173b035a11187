use std::fmt;

use num_bigint::BigInt;

use crate::scalar::Param;

/// Expression tree node with the byte offset it was parsed from.
#[derive(Clone, Debug)]
pub struct Expr {
    pub kind: ExprKind,
    pub pos: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprKind {
    Generator(String),
    Param(Param),
    Imag,
    Number(BigInt),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Bracket(Box<Expr>, Box<Expr>),
    Trace(Box<Expr>),
    /// A named derivation applied to its argument.
    Apply(String, Box<Expr>),
    /// Formal `D⁺⁺`.
    Dpp(Box<Expr>),
}

/// Structural equality ignoring source positions.
impl PartialEq for Expr {
    fn eq(&self, o: &Expr) -> bool {
        self.kind == o.kind
    }
}

impl Eq for Expr {}

impl Expr {
    pub fn new(kind: ExprKind, pos: usize) -> Self {
        Expr { kind, pos }
    }

    fn precedence(&self) -> u8 {
        match &self.kind {
            ExprKind::Add(..) | ExprKind::Sub(..) => 1,
            ExprKind::Mul(..) | ExprKind::Div(..) => 2,
            ExprKind::Neg(..) => 3,
            _ => 4,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        let paren = self.precedence() < min_prec;
        if paren {
            write!(f, "(")?;
        }
        match &self.kind {
            ExprKind::Generator(n) => write!(f, "{n}")?,
            ExprKind::Param(p) => write!(f, "{}", p.name())?,
            ExprKind::Imag => write!(f, "i")?,
            ExprKind::Number(n) => write!(f, "{n}")?,
            ExprKind::Neg(a) => {
                write!(f, "-")?;
                a.write_at(f, 3)?;
            }
            ExprKind::Add(a, b) => {
                a.write_at(f, 1)?;
                write!(f, " + ")?;
                b.write_at(f, 2)?;
            }
            ExprKind::Sub(a, b) => {
                a.write_at(f, 1)?;
                write!(f, " - ")?;
                b.write_at(f, 2)?;
            }
            ExprKind::Mul(a, b) => {
                a.write_at(f, 2)?;
                write!(f, "*")?;
                b.write_at(f, 3)?;
            }
            ExprKind::Div(a, b) => {
                a.write_at(f, 2)?;
                write!(f, "/")?;
                b.write_at(f, 3)?;
            }
            ExprKind::Bracket(a, b) => {
                write!(f, "[")?;
                a.write_at(f, 0)?;
                write!(f, ", ")?;
                b.write_at(f, 0)?;
                write!(f, "]")?;
            }
            ExprKind::Trace(a) => {
                write!(f, "tr(")?;
                a.write_at(f, 0)?;
                write!(f, ")")?;
            }
            ExprKind::Apply(d, a) => {
                write!(f, "{d}(")?;
                a.write_at(f, 0)?;
                write!(f, ")")?;
            }
            ExprKind::Dpp(a) => {
                write!(f, "Dpp(")?;
                a.write_at(f, 0)?;
                write!(f, ")")?;
            }
        }
        if paren {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}
