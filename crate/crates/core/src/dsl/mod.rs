//! The expression language used for rule tables, configuration values and
//! the `eval` command.
//!
//! ```text
//! expr    := product (('+' | '-') product)*
//! product := unary (('*' | '/') unary)*
//! unary   := '-' unary | primary
//! primary := number | name | name '(' expr ')' | '(' expr ')' | '[' expr ',' expr ']'
//! ```
//!
//! Function names are `tr`, `Dpp` and the derivations in scope (`s`, `sbar`,
//! `d1`, `d2`, `dFP`). Scalar names are `i`, `alpha`, `k`, `m2` and `A10`..`A22`.
//! Division is only allowed by nonzero numeric constants.

mod ast;
mod eval;
mod parser;

pub use ast::{Expr, ExprKind};
pub use eval::{evaluate, DerivationLookup, NoDerivations};
pub use parser::{parse_expression, Names};

use std::sync::Arc;

use crate::algebra::{Alphabet, Element};
use crate::error::Result;

/// Parses and evaluates an expression with no derivations in scope.
pub fn parse_element(text: &str, alphabet: &Arc<Alphabet>, depth_bound: u8) -> Result<Element> {
    let names = Names {
        generators: alphabet.names().collect(),
        derivations: Vec::new(),
    };
    let expr = parse_expression(text, &names)?;
    evaluate(&expr, alphabet, &NoDerivations, depth_bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn names(a: &Alphabet) -> Names<'_> {
        Names {
            generators: a.names().collect(),
            derivations: vec!["s", "sbar", "d1", "d2", "dFP"],
        }
    }

    #[test]
    fn precedence() {
        let a = Alphabet::standard();
        let e = parse_expression("-c_L*c_L + b_L - 2*q", &names(&a)).unwrap();
        assert_eq!(e.to_string(), "-c_L*c_L + b_L - 2*q");
        let e = parse_expression("c_L*(b_L - q)", &names(&a)).unwrap();
        assert_eq!(e.to_string(), "c_L*(b_L - q)");
        let e = parse_expression("a - (b_L + q)".replace("a", "V_L").as_str(), &names(&a)).unwrap();
        assert_eq!(e.to_string(), "V_L - (b_L + q)");
    }

    #[test]
    fn structures() {
        let a = Alphabet::standard();
        let e = parse_expression("s(cbar_L)", &names(&a)).unwrap();
        assert!(matches!(e.kind, ExprKind::Apply(ref d, _) if d == "s"));
        let e = parse_expression("[c_L, c_L]", &names(&a)).unwrap();
        assert!(matches!(e.kind, ExprKind::Bracket(..)));
        let e = parse_expression("tr(V_L * V_L) - tr(V_R * V_R)", &names(&a)).unwrap();
        assert_eq!(e.to_string(), "tr(V_L*V_L) - tr(V_R*V_R)");
    }

    #[test]
    fn unknown_identifier_suggests() {
        let a = Alphabet::standard();
        match parse_expression("cbar_l", &names(&a)) {
            Err(Error::Resolution {
                suggestions, pos, ..
            }) => {
                assert_eq!(pos, 0);
                assert!(suggestions.contains(&"cbar_L".to_string()));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unbalanced() {
        let a = Alphabet::standard();
        assert!(matches!(
            parse_expression("[c_L, c_L", &names(&a)),
            Err(Error::Parse { pos: 9, .. })
        ));
        assert!(matches!(
            parse_expression("c_L)", &names(&a)),
            Err(Error::Parse { pos: 3, .. })
        ));
    }

    #[test]
    fn evaluates_brackets_and_scalars() {
        let a = Arc::new(Alphabet::standard());
        let e = parse_element("[c_L, c_L]", &a, 2).unwrap();
        assert_eq!(e.to_string(), "2*c_L*c_L");
        let e = parse_element("-i*alpha/2*c_L*b_L", &a, 2).unwrap();
        assert_eq!(e.to_string(), "-1/2*i*alpha*c_L*b_L");
        assert!(matches!(
            parse_element("c_L/alpha", &a, 2),
            Err(Error::Division)
        ));
    }
}
