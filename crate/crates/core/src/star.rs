//! The star product induced by `[θ^{++a}, x^{μ}] = A^{aμ}`.
//!
//! By default each entry is `A^{aμ} = c^{aμ} η^{aμ}`, an even scalar times an odd
//! constant, with the exponent
//! `½ Σ c^{aμ} [(η^{aμ}∂_a) ⊗ ∂_μ − ∂_μ ⊗ (η^{aμ}∂_a)]`.
//! Treating `A` as a plain even number is available as [`Parity::Even`]; that
//! product is not associative.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::report::{RelationReport, VerificationReport};
use crate::sampling::random_superpoly;
use crate::scalar::{Param, Scalar};
use crate::superspace::{d_odd, d_x, eta, theta_0, theta_mm, theta_pp, Basis, SuperPolynomial};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    /// `A^{aμ} = c^{aμ} η^{aμ}` with odd constants `η`.
    Odd,
    /// `A^{aμ}` an even scalar.
    Even,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exponent {
    /// Opposite signs on the two orderings; reproduces the defining commutator.
    Antisymmetric,
    /// Both orderings with the same sign, as the series is sometimes written.
    Symmetric,
}

/// The constant tensor `A^{aμ}`, `a ∈ {1, 2}`, `μ ∈ {0, 1, 2}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Deformation {
    /// Even coefficients `c^{aμ}`, indexed `[a − 1][μ]`.
    pub entries: [[Scalar; 3]; 2],
    pub parity: Parity,
    pub exponent: Exponent,
}

impl Deformation {
    /// Formal entries `A10 … A22`.
    pub fn symbolic() -> Self {
        let e = |a: u8, m: u8| Scalar::param(Param::A(a, m));
        Deformation {
            entries: [[e(1, 0), e(1, 1), e(1, 2)], [e(2, 0), e(2, 1), e(2, 2)]],
            parity: Parity::Odd,
            exponent: Exponent::Antisymmetric,
        }
    }

    pub fn zero() -> Self {
        let z = Scalar::zero;
        Deformation {
            entries: [[z(), z(), z()], [z(), z(), z()]],
            parity: Parity::Odd,
            exponent: Exponent::Antisymmetric,
        }
    }

    /// Zeroes the `μ = 0` column.
    pub fn spacelike(mut self) -> Self {
        self.entries[0][0] = Scalar::zero();
        self.entries[1][0] = Scalar::zero();
        self
    }

    /// `A^{aμ}` as a polynomial (an odd constant times `c^{aμ}` in odd mode).
    pub fn entry(&self, basis: Basis, a: usize, mu: usize) -> SuperPolynomial {
        let c = self.entries[a - 1][mu].clone();
        match self.parity {
            Parity::Odd => SuperPolynomial::odd(basis, eta(a, mu)).scale(&c),
            Parity::Even => SuperPolynomial::constant(basis, c),
        }
    }
}

type Pair = (SuperPolynomial, SuperPolynomial, Scalar);

/// Splits a polynomial into its even and odd parts.
fn by_parity(f: &SuperPolynomial) -> [SuperPolynomial; 2] {
    let mut parts = [SuperPolynomial::zero(f.basis), SuperPolynomial::zero(f.basis)];
    for (m, c) in f.terms() {
        let p = m.parity() as usize;
        parts[p] = parts[p]
            .add(&SuperPolynomial::monomial(f.basis, *m, c.clone()))
            .expect("same basis");
    }
    parts
}

/// One application of the bidifferential exponent.
fn bidifferential(pairs: &[Pair], a_tensor: &Deformation) -> Vec<Pair> {
    let half = Scalar::from_ratio(1, 2);
    let sym = match a_tensor.exponent {
        Exponent::Antisymmetric => -1,
        Exponent::Symmetric => 1,
    };
    let mut out = Vec::new();
    for (f, g, c) in pairs {
        for a in 1..=2 {
            for mu in 0..3 {
                let k = &a_tensor.entries[a - 1][mu];
                if k.is_zero() {
                    continue;
                }
                let coeff = &(c * k) * &half;
                match a_tensor.parity {
                    Parity::Odd => {
                        let e = SuperPolynomial::odd(f.basis, eta(a, mu));
                        let f1 = e.multiply(&d_odd(f, theta_pp(a))).expect("same basis");
                        let g1 = d_x(g, mu);
                        if !f1.is_zero() && !g1.is_zero() {
                            out.push((f1, g1, coeff.clone()));
                        }
                        let f2 = d_x(f, mu);
                        let g2 = e.multiply(&d_odd(g, theta_pp(a))).expect("same basis");
                        if !f2.is_zero() && !g2.is_zero() {
                            out.push((f2, g2, &coeff * &Scalar::from_int(sym)));
                        }
                    }
                    Parity::Even => {
                        let f1 = d_odd(f, theta_pp(a));
                        let g1 = d_x(g, mu);
                        if !f1.is_zero() && !g1.is_zero() {
                            out.push((f1, g1, coeff.clone()));
                        }
                        // Moving ∂_a past the first factor costs (−1)^{ε(f)}.
                        let g2 = d_odd(g, theta_pp(a));
                        if g2.is_zero() {
                            continue;
                        }
                        for (p, part) in by_parity(&d_x(f, mu)).into_iter().enumerate() {
                            if part.is_zero() {
                                continue;
                            }
                            let sign = if p == 1 { -sym } else { sym };
                            out.push((part, g2.clone(), &coeff * &Scalar::from_int(sign)));
                        }
                    }
                }
            }
        }
    }
    out
}

/// Largest order of the exponential series that can contribute.
pub fn series_bound(f: &SuperPolynomial, g: &SuperPolynomial) -> u32 {
    let pp = (1u16 << theta_pp(1)) | (1u16 << theta_pp(2));
    let thetas = f.odd_count(pp) + g.odd_count(pp);
    thetas.min(f.x_degree() + g.x_degree())
}

pub fn star(f: &SuperPolynomial, g: &SuperPolynomial, a_tensor: &Deformation) -> Result<SuperPolynomial> {
    if f.basis != g.basis {
        return Err(Error::Basis("star product of polynomials in different bases".into()));
    }
    let bound = series_bound(f, g);
    let mut out = SuperPolynomial::zero(f.basis);
    let mut pairs: Vec<Pair> = vec![(f.clone(), g.clone(), Scalar::one())];
    let mut order = 0u32;
    let mut factorial = Scalar::one();
    while !pairs.is_empty() {
        if order > bound {
            return Err(Error::Unsupported(format!(
                "star series did not terminate by order {bound}"
            )));
        }
        let inv = Scalar::constant(
            factorial
                .as_constant()
                .and_then(|c| c.inv())
                .expect("factorials are nonzero constants"),
        );
        for (p, q, c) in &pairs {
            out = out.add(&p.multiply(q)?.scale(&(c * &inv)))?;
        }
        pairs = bidifferential(&pairs, a_tensor);
        order += 1;
        factorial = &factorial * &Scalar::from_int(order as i64);
    }
    Ok(out)
}

/// `f ⋆ g − (−1)^{ε(f)ε(g)} g ⋆ f`.
pub fn star_commutator(f: &SuperPolynomial, g: &SuperPolynomial, a_tensor: &Deformation) -> Result<SuperPolynomial> {
    let pf = f.parity()?;
    let pg = g.parity()?;
    let fg = star(f, g, a_tensor)?;
    let gf = star(g, f, a_tensor)?;
    if pf * pg == 1 {
        fg.add(&gf)
    } else {
        fg.sub(&gf)
    }
}

fn support(f: &SuperPolynomial) -> ([bool; 3], u16, [bool; 4]) {
    let mut xs = [false; 3];
    let mut odd = 0u16;
    let mut us = [false; 4];
    for (m, _) in f.terms() {
        for k in 0..3 {
            xs[k] |= m.x[k] > 0;
        }
        odd |= m.odd;
        for k in 0..4 {
            us[k] |= m.u[k] > 0;
        }
    }
    (xs, odd, us)
}

/// Checks the star-product properties on seeded random inputs.
pub fn verify_star(a_tensor: &Deformation, samples: usize, seed: u64) -> Result<VerificationReport> {
    let basis = Basis::Analytic;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = VerificationReport::new("star", "none", "none");
    report.seed = Some(seed);
    report.settings.push(("samples".into(), samples.to_string()));
    report.settings.push((
        "deformation.parity".into(),
        match a_tensor.parity {
            Parity::Odd => "odd".into(),
            Parity::Even => "even".into(),
        },
    ));
    report.settings.push((
        "deformation.exponent".into(),
        match a_tensor.exponent {
            Exponent::Antisymmetric => "antisymmetric".into(),
            Exponent::Symmetric => "symmetric".into(),
        },
    ));
    let x = |m: usize| SuperPolynomial::x(basis, m);
    let th = |bit: usize| SuperPolynomial::odd(basis, bit);

    let mut defining = RelationReport::pass("[th++a, x^mu] = A^{a mu}");
    'def: for a in 1..=2 {
        for mu in 0..3 {
            let res = star_commutator(&th(theta_pp(a)), &x(mu), a_tensor)?.sub(&a_tensor.entry(basis, a, mu))?;
            if !res.is_zero() {
                defining = RelationReport::fail(&defining.name, &format!("a={a}, mu={mu}"), res.to_string());
                break 'def;
            }
        }
    }
    report.relations.push(defining);

    let mut others = RelationReport::pass("[th0a, x^mu] = [th--a, x^mu] = 0");
    'oth: for a in 1..=2 {
        for bit in [theta_0(a), theta_mm(a)] {
            for mu in 0..3 {
                let res = star_commutator(&th(bit), &x(mu), a_tensor)?;
                if !res.is_zero() {
                    others = RelationReport::fail(&others.name, &format!("theta bit {bit}, mu={mu}"), res.to_string());
                    break 'oth;
                }
            }
        }
    }
    report.relations.push(others);

    let mut xx = RelationReport::pass("[x^mu, x^nu] = 0");
    for mu in 0..3 {
        for nu in 0..3 {
            let res = star_commutator(&x(mu), &x(nu), a_tensor)?;
            if !res.is_zero() && xx.status == crate::report::Status::Pass {
                xx = RelationReport::fail(&xx.name, &format!("mu={mu}, nu={nu}"), res.to_string());
            }
        }
    }
    report.relations.push(xx);

    let zero = Deformation {
        parity: a_tensor.parity,
        exponent: a_tensor.exponent,
        ..Deformation::zero()
    };
    let mut assoc = RelationReport::pass("associativity");
    let mut bilinear = RelationReport::pass("bilinearity");
    let mut degenerate = RelationReport::pass("A -> 0 gives the ordinary product");
    let mut parity = RelationReport::pass("parity of f*g is parity(f) + parity(g)");
    let mut closure = RelationReport::pass("no new coordinates");
    for k in 0..samples {
        let f = random_superpoly(&mut rng, basis, 2, 1, 3);
        let g = random_superpoly(&mut rng, basis, 2, 1, 3);
        let h = random_superpoly(&mut rng, basis, 2, 1, 3);
        let at = format!("sample {k}");
        if assoc.failures.is_empty() {
            let lhs = star(&star(&f, &g, a_tensor)?, &h, a_tensor)?;
            let rhs = star(&f, &star(&g, &h, a_tensor)?, a_tensor)?;
            let res = lhs.sub(&rhs)?;
            if !res.is_zero() {
                assoc = RelationReport::fail(&assoc.name, &at, res.to_string());
            }
        }
        if bilinear.failures.is_empty() {
            let lam = crate::sampling::random_coefficient(&mut rng);
            let comb = f.add(&g.scale(&lam))?;
            let left = star(&comb, &h, a_tensor)?.sub(&star(&f, &h, a_tensor)?.add(&star(&g, &h, a_tensor)?.scale(&lam))?)?;
            let right = star(&h, &comb, a_tensor)?.sub(&star(&h, &f, a_tensor)?.add(&star(&h, &g, a_tensor)?.scale(&lam))?)?;
            let res = left.add(&right)?;
            if !res.is_zero() {
                bilinear = RelationReport::fail(&bilinear.name, &at, res.to_string());
            }
        }
        if degenerate.failures.is_empty() {
            let res = star(&f, &g, &zero)?.sub(&f.multiply(&g)?)?;
            if !res.is_zero() {
                degenerate = RelationReport::fail(&degenerate.name, &at, res.to_string());
            }
        }
        if parity.failures.is_empty() {
            for fp in by_parity(&f) {
                for gp in by_parity(&g) {
                    if fp.is_zero() || gp.is_zero() {
                        continue;
                    }
                    let prod = star(&fp, &gp, a_tensor)?;
                    let want = (fp.parity()? + gp.parity()?) % 2;
                    if prod.parity().map_or(true, |p| !prod.is_zero() && p != want) {
                        parity = RelationReport::fail(&parity.name, &at, prod.to_string());
                    }
                }
            }
        }
        if closure.failures.is_empty() {
            let prod = star(&f, &g, a_tensor)?;
            let (fx, fo, fu) = support(&f);
            let (gx, go, gu) = support(&g);
            let (px, po, pu) = support(&prod);
            let theta_mask = (1u16 << crate::superspace::THETA_COUNT) - 1;
            let new_x = (0..3).any(|k| px[k] && !fx[k] && !gx[k]);
            // u+1 u-2 reduces to u+2 u-1 - 1, so those two may appear.
            let mut allowed_u = [fu[0] || gu[0], fu[1] || gu[1], fu[2] || gu[2], fu[3] || gu[3]];
            if allowed_u[0] && allowed_u[3] {
                allowed_u[1] = true;
                allowed_u[2] = true;
            }
            let new_u = (0..4).any(|k| pu[k] && !allowed_u[k]);
            let new_theta = po & theta_mask & !(fo | go) != 0;
            if new_x || new_u || new_theta {
                closure = RelationReport::fail(&closure.name, &at, prod.to_string());
            }
        }
    }
    report.relations.extend([assoc, bilinear, degenerate, parity, closure]);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Status;

    const B: Basis = Basis::Analytic;

    #[test]
    fn defining_commutator() {
        let a = Deformation::symbolic();
        for i in 1..=2 {
            for mu in 0..3 {
                let c = star_commutator(&SuperPolynomial::odd(B, theta_pp(i)), &SuperPolynomial::x(B, mu), &a).unwrap();
                assert_eq!(c, a.entry(B, i, mu));
            }
        }
    }

    #[test]
    fn trivial_examples() {
        let a = Deformation::symbolic();
        let x0 = SuperPolynomial::x(B, 0);
        let x1 = SuperPolynomial::x(B, 1);
        assert_eq!(star(&x0, &x1, &a).unwrap(), x0.multiply(&x1).unwrap());
        assert!(star_commutator(&x0, &x1, &a).unwrap().is_zero());
        let t1 = SuperPolynomial::odd(B, theta_pp(1));
        let t2 = SuperPolynomial::odd(B, theta_pp(2));
        assert!(star_commutator(&t1, &t2, &a).unwrap().is_zero());
    }

    #[test]
    fn even_parameters_break_associativity() {
        let mut a = Deformation::symbolic();
        a.parity = Parity::Even;
        let r = verify_star(&a, 20, 3).unwrap();
        assert_eq!(r.relation("[th++a, x^mu] = A^{a mu}").unwrap().status, Status::Pass);
        assert_eq!(r.relation("associativity").unwrap().status, Status::Fail);
    }

    #[test]
    fn symmetric_exponent_loses_the_commutator() {
        let mut a = Deformation::symbolic();
        a.exponent = Exponent::Symmetric;
        let c = star_commutator(&SuperPolynomial::odd(B, theta_pp(1)), &SuperPolynomial::x(B, 0), &a).unwrap();
        assert!(c.is_zero());
    }

    #[test]
    fn inhomogeneous_commutator_rejected() {
        let a = Deformation::symbolic();
        let mixed = SuperPolynomial::x(B, 0).add(&SuperPolynomial::odd(B, theta_pp(1))).unwrap();
        assert!(star_commutator(&mixed, &mixed, &a).is_err());
    }

    #[test]
    fn odd_suite_passes() {
        let r = verify_star(&Deformation::symbolic(), 10, 5).unwrap();
        for rel in &r.relations {
            assert_eq!(rel.status, Status::Pass, "{}: {:?}", rel.name, rel.failures);
        }
    }
}
