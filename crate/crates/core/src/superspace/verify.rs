use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::ops::{apply_operator, OperatorTag};
use super::poly::{Basis, SuperPolynomial};
use crate::report::{RelationReport, VerificationReport};
use crate::sampling::random_superpoly;
use crate::scalar::Scalar;

type Residual = Box<dyn Fn(&SuperPolynomial) -> SuperPolynomial + Send + Sync>;

/// A family of operator identities, evaluated as `lhs − rhs` on a polynomial.
pub struct OperatorRelation {
    pub name: &'static str,
    /// One residual per index instance, labelled like `a=1,b=2`.
    pub instances: Vec<(String, Residual)>,
}

fn op(f: &SuperPolynomial, t: OperatorTag) -> SuperPolynomial {
    apply_operator(f, t)
}

/// Graded commutator of two operators applied to `f`.
fn bracket(f: &SuperPolynomial, a: OperatorTag, b: OperatorTag) -> SuperPolynomial {
    let ab = op(&op(f, b), a);
    let ba = op(&op(f, a), b);
    if a.parity() * b.parity() == 1 {
        ab.add(&ba).expect("same basis")
    } else {
        ab.sub(&ba).expect("same basis")
    }
}

fn ci(n: i64) -> Scalar {
    &Scalar::i() * &Scalar::from_int(n)
}

fn d_ab(f: &SuperPolynomial, a: usize, b: usize) -> SuperPolynomial {
    super::ops::d_ab(f, a, b)
}

fn pairs(build: impl Fn(usize, usize) -> Residual) -> Vec<(String, Residual)> {
    let mut out = Vec::new();
    for a in 1..=2 {
        for b in 1..=2 {
            out.push((format!("a={a},b={b}"), build(a, b)));
        }
    }
    out
}

fn singles(build: impl Fn(usize) -> Residual) -> Vec<(String, Residual)> {
    (1..=2).map(|a| (format!("a={a}"), build(a))).collect()
}

fn single(r: Residual) -> Vec<(String, Residual)> {
    vec![(String::new(), r)]
}

/// The twelve relation families of the spinor-derivative algebra.
pub fn superspace_relations() -> Vec<OperatorRelation> {
    use OperatorTag::*;
    vec![
        OperatorRelation {
            name: "{D++_a, D--_b} = 2i d_ab",
            instances: pairs(|a, b| {
                Box::new(move |f| bracket(f, DppA(a), DmmA(b)).sub(&d_ab(f, a, b).scale(&ci(2))).unwrap())
            }),
        },
        OperatorRelation {
            name: "{D0_a, D0_b} = -i d_ab",
            instances: pairs(|a, b| {
                Box::new(move |f| bracket(f, D0A(a), D0A(b)).add(&d_ab(f, a, b).scale(&ci(1))).unwrap())
            }),
        },
        OperatorRelation {
            name: "[D--, D++_a] = 2 D0_a",
            instances: singles(|a| {
                Box::new(move |f| bracket(f, DMM, DppA(a)).sub(&op(f, D0A(a)).scale(&Scalar::from_int(2))).unwrap())
            }),
        },
        OperatorRelation {
            name: "[D++, D--_a] = 2 D0_a",
            instances: singles(|a| {
                Box::new(move |f| bracket(f, DPP, DmmA(a)).sub(&op(f, D0A(a)).scale(&Scalar::from_int(2))).unwrap())
            }),
        },
        OperatorRelation {
            name: "[D0, D++_a] = 2 D++_a",
            instances: singles(|a| {
                Box::new(move |f| bracket(f, D0, DppA(a)).sub(&op(f, DppA(a)).scale(&Scalar::from_int(2))).unwrap())
            }),
        },
        OperatorRelation {
            name: "[D0, D--_a] = -2 D--_a",
            instances: singles(|a| {
                Box::new(move |f| bracket(f, D0, DmmA(a)).add(&op(f, DmmA(a)).scale(&Scalar::from_int(2))).unwrap())
            }),
        },
        OperatorRelation {
            name: "d0 = [d++, d--]",
            instances: single(Box::new(|f| op(f, Partial0).sub(&bracket(f, PartialPP, PartialMM)).unwrap())),
        },
        OperatorRelation {
            name: "[D++, D--] = D0",
            instances: single(Box::new(|f| bracket(f, DPP, DMM).sub(&op(f, D0)).unwrap())),
        },
        OperatorRelation {
            name: "{D++_a, D0_b} = 0",
            instances: pairs(|a, b| Box::new(move |f| bracket(f, DppA(a), D0A(b)))),
        },
        OperatorRelation {
            name: "{D--_a, D0_b} = 0",
            instances: pairs(|a, b| Box::new(move |f| bracket(f, DmmA(a), D0A(b)))),
        },
        OperatorRelation {
            name: "[D++, D0_a] = D++_a",
            instances: singles(|a| Box::new(move |f| bracket(f, DPP, D0A(a)).sub(&op(f, DppA(a))).unwrap())),
        },
        OperatorRelation {
            name: "[D--, D0_a] = D--_a",
            instances: singles(|a| Box::new(move |f| bracket(f, DMM, D0A(a)).sub(&op(f, DmmA(a))).unwrap())),
        },
    ]
}

/// Checks every relation family on seeded random polynomials.
pub fn verify_superspace(samples: usize, seed: u64) -> VerificationReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let polys: Vec<SuperPolynomial> = (0..samples)
        .map(|_| random_superpoly(&mut rng, Basis::Analytic, 3, 2, 4))
        .collect();
    let mut report = VerificationReport::new("superspace", "none", "none");
    report.seed = Some(seed);
    report.settings.push(("samples".into(), samples.to_string()));
    for rel in superspace_relations() {
        let mut r = RelationReport::pass(rel.name);
        'outer: for (k, f) in polys.iter().enumerate() {
            for (label, residual) in &rel.instances {
                let res = residual(f);
                if !res.is_zero() {
                    let at = if label.is_empty() {
                        format!("sample {k}")
                    } else {
                        format!("sample {k}, {label}")
                    };
                    r = RelationReport::fail(rel.name, &at, res.to_string());
                    break 'outer;
                }
            }
        }
        report.relations.push(r);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Status;

    #[test]
    fn all_families_hold_on_a_few_samples() {
        let r = verify_superspace(5, 11);
        assert_eq!(r.relations.len(), 12);
        for rel in &r.relations {
            assert_eq!(rel.status, Status::Pass, "{}: {:?}", rel.name, rel.failures);
        }
    }
}
