use num_bigint::BigInt;

use super::ast::{Expr, ExprKind};
use crate::error::{Error, Result};
use crate::scalar::Param;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Number(BigInt),
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    End,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            ',' => Tok::Comma,
            _ if c.is_ascii_digit() => {
                while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                    i += 1;
                }
                out.push((Tok::Number(text[start..i].parse().unwrap()), start));
                continue;
            }
            _ if c.is_ascii_alphabetic() || c == '_' => {
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
                continue;
            }
            _ => {
                return Err(Error::Parse {
                    pos: i,
                    msg: format!("unexpected character '{c}'"),
                })
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

/// Names an expression may refer to.
pub struct Names<'a> {
    pub generators: Vec<&'a str>,
    pub derivations: Vec<&'a str>,
}

impl Names<'_> {
    fn suggestions(&self, name: &str) -> Vec<String> {
        let mut pool: Vec<String> = self
            .generators
            .iter()
            .chain(self.derivations.iter())
            .map(|s| s.to_string())
            .collect();
        pool.extend(Param::ALL.iter().map(|p| p.name()));
        pool.extend(["tr".to_string(), "Dpp".to_string(), "i".to_string()]);
        let mut scored: Vec<(usize, String)> = pool
            .into_iter()
            .map(|c| (strsim::levenshtein(name, &c), c))
            .filter(|(d, _)| *d <= 2)
            .collect();
        scored.sort();
        scored.into_iter().take(3).map(|(_, c)| c).collect()
    }
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    names: &'a Names<'a>,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(Error::Parse {
                pos: self.pos(),
                msg: format!("expected {what}"),
            })
        }
    }

    fn sum(&mut self) -> Result<Expr> {
        let mut lhs = self.product()?;
        loop {
            let pos = self.pos();
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    let rhs = self.product()?;
                    lhs = Expr::new(ExprKind::Add(Box::new(lhs), Box::new(rhs)), pos);
                }
                Tok::Minus => {
                    self.bump();
                    let rhs = self.product()?;
                    lhs = Expr::new(ExprKind::Sub(Box::new(lhs), Box::new(rhs)), pos);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn product(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let pos = self.pos();
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    let rhs = self.unary()?;
                    lhs = Expr::new(ExprKind::Mul(Box::new(lhs), Box::new(rhs)), pos);
                }
                Tok::Slash => {
                    self.bump();
                    let rhs = self.unary()?;
                    lhs = Expr::new(ExprKind::Div(Box::new(lhs), Box::new(rhs)), pos);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if *self.peek() == Tok::Minus {
            let pos = self.pos();
            self.bump();
            let inner = self.unary()?;
            return Ok(Expr::new(ExprKind::Neg(Box::new(inner)), pos));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Expr> {
        let (tok, pos) = self.bump();
        match tok {
            Tok::Number(n) => Ok(Expr::new(ExprKind::Number(n), pos)),
            Tok::LParen => {
                let e = self.sum()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            Tok::LBracket => {
                let a = self.sum()?;
                self.expect(Tok::Comma, "',' in bracket")?;
                let b = self.sum()?;
                self.expect(Tok::RBracket, "']'")?;
                Ok(Expr::new(ExprKind::Bracket(Box::new(a), Box::new(b)), pos))
            }
            Tok::Ident(name) => {
                if *self.peek() == Tok::LParen {
                    let is_fn = name == "tr"
                        || name == "Dpp"
                        || self.names.derivations.contains(&name.as_str());
                    if !is_fn {
                        return Err(Error::Resolution {
                            suggestions: self.names.suggestions(&name),
                            name,
                            pos,
                        });
                    }
                    self.bump();
                    let arg = Box::new(self.sum()?);
                    self.expect(Tok::RParen, "')'")?;
                    let kind = match name.as_str() {
                        "tr" => ExprKind::Trace(arg),
                        "Dpp" => ExprKind::Dpp(arg),
                        _ => ExprKind::Apply(name, arg),
                    };
                    return Ok(Expr::new(kind, pos));
                }
                if self.names.generators.contains(&name.as_str()) {
                    Ok(Expr::new(ExprKind::Generator(name), pos))
                } else if name == "i" {
                    Ok(Expr::new(ExprKind::Imag, pos))
                } else if let Some(p) = Param::from_name(&name) {
                    Ok(Expr::new(ExprKind::Param(p), pos))
                } else {
                    Err(Error::Resolution {
                        suggestions: self.names.suggestions(&name),
                        name,
                        pos,
                    })
                }
            }
            Tok::End => Err(Error::Parse {
                pos,
                msg: "unexpected end of input".into(),
            }),
            other => Err(Error::Parse {
                pos,
                msg: format!("unexpected token {other:?}"),
            }),
        }
    }
}

/// Parses one expression of the rule/expression language.
pub fn parse_expression(text: &str, names: &Names<'_>) -> Result<Expr> {
    let toks = lex(text)?;
    let mut p = Parser { toks, at: 0, names };
    let e = p.sum()?;
    if *p.peek() != Tok::End {
        let msg = match p.peek() {
            Tok::RParen | Tok::RBracket => "unbalanced closing bracket".to_string(),
            t => format!("unexpected token {t:?}"),
        };
        return Err(Error::Parse { pos: p.pos(), msg });
    }
    Ok(e)
}
