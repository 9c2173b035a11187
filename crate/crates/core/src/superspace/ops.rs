use std::fmt;

use super::poly::{
    front_sign, theta_0, theta_mm, theta_pp, Basis, Mono, SuperPolynomial, THETA_COUNT, UM1, UM2, UP1, UP2,
};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Left derivative with respect to the odd factor at mask bit `bit`.
pub fn d_odd(f: &SuperPolynomial, bit: usize) -> SuperPolynomial {
    f.map_terms(|m, c| {
        if m.odd & (1 << bit) == 0 {
            return SuperPolynomial::zero(f.basis);
        }
        let mut mono = *m;
        mono.odd &= !(1 << bit);
        SuperPolynomial::monomial(f.basis, mono, c * &Scalar::from_int(front_sign(m.odd, bit)))
    })
}

/// Left multiplication by the odd factor at mask bit `bit`.
pub fn mul_odd(f: &SuperPolynomial, bit: usize) -> SuperPolynomial {
    f.map_terms(|m, c| {
        if m.odd & (1 << bit) != 0 {
            return SuperPolynomial::zero(f.basis);
        }
        let mut mono = *m;
        mono.odd |= 1 << bit;
        SuperPolynomial::monomial(f.basis, mono, c * &Scalar::from_int(front_sign(m.odd, bit)))
    })
}

/// `∂/∂x^m` for the stored coordinates (`m = 0, 1, 2` for `x^{11}, x^{12}, x^{22}`).
pub fn d_x(f: &SuperPolynomial, m: usize) -> SuperPolynomial {
    f.map_terms(|mono, c| {
        if mono.x[m] == 0 {
            return SuperPolynomial::zero(f.basis);
        }
        let mut out = *mono;
        out.x[m] -= 1;
        SuperPolynomial::monomial(f.basis, out, c * &Scalar::from_int(mono.x[m] as i64))
    })
}

/// Bispinor derivative `∂_{ab}` with `∂_{ab} x^{cd} = ½(δ_a^c δ_b^d + δ_a^d δ_b^c)`.
pub fn d_ab(f: &SuperPolynomial, a: usize, b: usize) -> SuperPolynomial {
    match (a.min(b), a.max(b)) {
        (1, 1) => d_x(f, 0),
        (1, 2) => d_x(f, 1).scale(&Scalar::from_ratio(1, 2)),
        _ => d_x(f, 2),
    }
}

fn d_u(f: &SuperPolynomial, slot: usize, times: usize) -> SuperPolynomial {
    f.map_terms(|m, c| {
        if m.u[slot] == 0 {
            return SuperPolynomial::zero(f.basis);
        }
        let mut mono = *m;
        mono.u[slot] -= 1;
        mono.u[times] += 1;
        SuperPolynomial::monomial(f.basis, mono, c * &Scalar::from_int(m.u[slot] as i64))
    })
}

/// `∂⁺⁺ = u⁺_i ∂/∂u⁻_i`.
pub fn harmonic_pp(f: &SuperPolynomial) -> SuperPolynomial {
    d_u(f, UM1, UP1).add(&d_u(f, UM2, UP2)).expect("same basis")
}

/// `∂⁻⁻ = u⁻_i ∂/∂u⁺_i`.
pub fn harmonic_mm(f: &SuperPolynomial) -> SuperPolynomial {
    d_u(f, UP1, UM1).add(&d_u(f, UP2, UM2)).expect("same basis")
}

/// `∂⁰`: multiplication by the harmonic charge.
pub fn harmonic_0(f: &SuperPolynomial) -> SuperPolynomial {
    f.map_terms(|m, c| SuperPolynomial::monomial(f.basis, *m, c * &Scalar::from_int(m.u_charge() as i64)))
}

/// The operators built from the elementary derivatives.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OperatorTag {
    PartialPP,
    PartialMM,
    Partial0,
    DPP,
    DMM,
    D0,
    /// `D⁺⁺_a`.
    DppA(usize),
    /// `D⁻⁻_a`.
    DmmA(usize),
    /// `D⁰_a`.
    D0A(usize),
    QppA(usize),
    QmmA(usize),
    Q0A(usize),
    /// `∂/∂θ` by mask bit.
    DTheta(usize),
    /// `∂/∂x^m`.
    DX(usize),
}

impl OperatorTag {
    /// Grassmann parity of the operator.
    pub fn parity(self) -> u8 {
        match self {
            OperatorTag::PartialPP
            | OperatorTag::PartialMM
            | OperatorTag::Partial0
            | OperatorTag::DPP
            | OperatorTag::DMM
            | OperatorTag::D0
            | OperatorTag::DX(_) => 0,
            _ => 1,
        }
    }
}

impl fmt::Display for OperatorTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OperatorTag::PartialPP => write!(f, "d++"),
            OperatorTag::PartialMM => write!(f, "d--"),
            OperatorTag::Partial0 => write!(f, "d0"),
            OperatorTag::DPP => write!(f, "D++"),
            OperatorTag::DMM => write!(f, "D--"),
            OperatorTag::D0 => write!(f, "D0"),
            OperatorTag::DppA(a) => write!(f, "D++_{a}"),
            OperatorTag::DmmA(a) => write!(f, "D--_{a}"),
            OperatorTag::D0A(a) => write!(f, "D0_{a}"),
            OperatorTag::QppA(a) => write!(f, "Q++_{a}"),
            OperatorTag::QmmA(a) => write!(f, "Q--_{a}"),
            OperatorTag::Q0A(a) => write!(f, "Q0_{a}"),
            OperatorTag::DTheta(b) => write!(f, "d/dtheta[{b}]"),
            OperatorTag::DX(m) => write!(f, "d/dx{m}"),
        }
    }
}

fn sum(basis: Basis, parts: Vec<SuperPolynomial>) -> SuperPolynomial {
    parts
        .into_iter()
        .fold(SuperPolynomial::zero(basis), |acc, p| acc.add(&p).expect("same basis"))
}

fn c(re: i64, im: i64) -> Scalar {
    &Scalar::from_int(re) + &(&Scalar::i() * &Scalar::from_int(im))
}

/// Applies an operator in analytic coordinates.
fn apply_analytic(f: &SuperPolynomial, tag: OperatorTag) -> SuperPolynomial {
    let b = f.basis;
    let spinor = [1usize, 2];
    match tag {
        OperatorTag::PartialPP => harmonic_pp(f),
        OperatorTag::PartialMM => harmonic_mm(f),
        OperatorTag::Partial0 => harmonic_0(f),
        OperatorTag::DPP => {
            let mut parts = vec![harmonic_pp(f)];
            for a in spinor {
                for bb in spinor {
                    let t = mul_odd(&mul_odd(&d_ab(f, a, bb), theta_0(bb)), theta_pp(a));
                    parts.push(t.scale(&c(0, 2)));
                }
                parts.push(mul_odd(&d_odd(f, theta_0(a)), theta_pp(a)));
                parts.push(mul_odd(&d_odd(f, theta_mm(a)), theta_0(a)).scale(&c(2, 0)));
            }
            sum(b, parts)
        }
        OperatorTag::DMM => {
            let mut parts = vec![harmonic_mm(f)];
            for a in spinor {
                for bb in spinor {
                    let t = mul_odd(&mul_odd(&d_ab(f, a, bb), theta_0(bb)), theta_mm(a));
                    parts.push(t.scale(&c(0, -2)));
                }
                parts.push(mul_odd(&d_odd(f, theta_0(a)), theta_mm(a)));
                parts.push(mul_odd(&d_odd(f, theta_pp(a)), theta_0(a)).scale(&c(2, 0)));
            }
            sum(b, parts)
        }
        OperatorTag::D0 => {
            let mut parts = vec![harmonic_0(f)];
            for a in spinor {
                parts.push(mul_odd(&d_odd(f, theta_pp(a)), theta_pp(a)).scale(&c(2, 0)));
                parts.push(mul_odd(&d_odd(f, theta_mm(a)), theta_mm(a)).scale(&c(-2, 0)));
            }
            sum(b, parts)
        }
        OperatorTag::DppA(a) => d_odd(f, theta_mm(a)),
        OperatorTag::DmmA(a) => {
            let mut parts = vec![d_odd(f, theta_pp(a))];
            for bb in spinor {
                parts.push(mul_odd(&d_ab(f, a, bb), theta_mm(bb)).scale(&c(0, 2)));
            }
            sum(b, parts)
        }
        OperatorTag::D0A(a) => {
            let mut parts = vec![d_odd(f, theta_0(a)).scale(&Scalar::from_ratio(-1, 2))];
            for bb in spinor {
                parts.push(mul_odd(&d_ab(f, a, bb), theta_0(bb)).scale(&c(0, 1)));
            }
            sum(b, parts)
        }
        OperatorTag::QppA(a) => {
            let mut parts = vec![d_odd(f, theta_mm(a))];
            for bb in spinor {
                parts.push(mul_odd(&d_ab(f, a, bb), theta_pp(bb)).neg());
            }
            sum(b, parts)
        }
        OperatorTag::QmmA(a) => {
            let mut parts = vec![d_odd(f, theta_pp(a))];
            for bb in spinor {
                parts.push(mul_odd(&d_ab(f, a, bb), theta_mm(bb)).neg());
            }
            sum(b, parts)
        }
        OperatorTag::Q0A(a) => {
            let mut parts = vec![d_odd(f, theta_0(a)).scale(&Scalar::from_ratio(-1, 2))];
            for bb in spinor {
                parts.push(mul_odd(&d_ab(f, a, bb), theta_0(bb)).neg());
            }
            sum(b, parts)
        }
        OperatorTag::DTheta(bit) => d_odd(f, bit),
        OperatorTag::DX(m) => d_x(f, m),
    }
}

/// Applies an operator. The operator formulas use analytic-coordinate
/// `x`-derivatives; central-basis inputs are converted there and back.
pub fn apply_operator(f: &SuperPolynomial, tag: OperatorTag) -> SuperPolynomial {
    match f.basis {
        Basis::Analytic => apply_analytic(f, tag),
        Basis::Central => to_central(&apply_analytic(&to_analytic(f), tag)),
    }
}

/// The nilpotent shift `Θ^{ab} = θ^{++a}θ^{--b} + θ^{++b}θ^{--a}` per component.
fn theta_shift(basis: Basis, m: usize) -> SuperPolynomial {
    let pair = |a: usize, b: usize| {
        SuperPolynomial::odd(basis, theta_pp(a))
            .multiply(&SuperPolynomial::odd(basis, theta_mm(b)))
            .expect("same basis")
    };
    match m {
        0 => pair(1, 1).scale(&Scalar::from_int(2)),
        1 => pair(1, 2).add(&pair(2, 1)).expect("same basis"),
        _ => pair(2, 2).scale(&Scalar::from_int(2)),
    }
}

/// Substitutes `x^m → x^m + sign·i·Θ^m` and relabels the basis.
fn shift_x(f: &SuperPolynomial, sign: i64, target: Basis) -> SuperPolynomial {
    let shifted: Vec<SuperPolynomial> = (0..3)
        .map(|m| {
            SuperPolynomial::x(target, m)
                .add(&theta_shift(target, m).scale(&c(0, sign)))
                .expect("same basis")
        })
        .collect();
    let mut out = SuperPolynomial::zero(target);
    for (mono, coeff) in f.terms() {
        let mut rest = *mono;
        rest.x = [0; 3];
        let mut term = SuperPolynomial::monomial(target, rest, coeff.clone());
        for m in 0..3 {
            for _ in 0..mono.x[m] {
                term = shifted[m].multiply(&term).expect("same basis");
            }
        }
        out = out.add(&term).expect("same basis");
    }
    out
}

/// Rewrites a central-basis polynomial in analytic coordinates, `x = x_A − iΘ`.
pub fn to_analytic(f: &SuperPolynomial) -> SuperPolynomial {
    match f.basis {
        Basis::Analytic => f.clone(),
        Basis::Central => shift_x(f, -1, Basis::Analytic),
    }
}

/// Rewrites an analytic-basis polynomial in central coordinates, `x_A = x + iΘ`.
pub fn to_central(f: &SuperPolynomial) -> SuperPolynomial {
    match f.basis {
        Basis::Central => f.clone(),
        Basis::Analytic => shift_x(f, 1, Basis::Central),
    }
}

/// True iff `D⁺⁺_a f = 0` for both `a`; requires analytic coordinates.
pub fn is_analytic(f: &SuperPolynomial) -> Result<bool> {
    if f.basis != Basis::Analytic {
        return Err(Error::Basis(
            "analyticity is defined for analytic-basis polynomials; convert with to_analytic".into(),
        ));
    }
    Ok((1..=2).all(|a| apply_operator(f, OperatorTag::DppA(a)).is_zero()))
}

/// `D_2 D_1 − D_1 D_2` for a spinor pair of operators.
fn spinor_square(f: &SuperPolynomial, op: fn(usize) -> OperatorTag) -> SuperPolynomial {
    let a = apply_operator(&apply_operator(f, op(1)), op(2));
    let b = apply_operator(&apply_operator(f, op(2)), op(1));
    a.sub(&b).expect("same basis")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Measure {
    /// `−1/16 (D⁺⁺)²(D⁻⁻)²(D⁰)²`.
    Full,
    /// `¼ (D⁻⁻)²(D⁰)²`.
    Analytic,
}

/// Berezin integration as differentiation followed by setting every `θ` to zero.
/// The spacetime and harmonic integrals are not performed.
pub fn berezin_integrate(f: &SuperPolynomial, measure: Measure) -> SuperPolynomial {
    let g = spinor_square(f, OperatorTag::D0A);
    let g = spinor_square(&g, OperatorTag::DmmA);
    let (g, k) = match measure {
        Measure::Full => (spinor_square(&g, OperatorTag::DppA), Scalar::from_ratio(-1, 16)),
        Measure::Analytic => (g, Scalar::from_ratio(1, 4)),
    };
    g.drop_odd((1 << THETA_COUNT) - 1).scale(&k)
}

/// Tilde conjugation: `u^±_i → u^{±i}` (ε^{12} = 1), odd factors reversed,
/// scalars conjugated, `x` and `θ` fixed.
pub fn tilde(f: &SuperPolynomial) -> SuperPolynomial {
    f.map_terms(|m, coeff| {
        let k = m.odd.count_ones() as i64;
        let mut sign = if (k * (k - 1) / 2) % 2 == 1 { -1 } else { 1 };
        if (m.u[UP2] + m.u[UM2]) % 2 == 1 {
            sign = -sign;
        }
        let mut mono: Mono = *m;
        mono.u = [m.u[UP2], m.u[UP1], m.u[UM2], m.u[UM1]];
        SuperPolynomial::monomial(f.basis, mono, &coeff.conj() * &Scalar::from_int(sign))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const A: Basis = Basis::Analytic;

    fn th(bit: usize) -> SuperPolynomial {
        SuperPolynomial::odd(A, bit)
    }

    fn mul(a: &SuperPolynomial, b: &SuperPolynomial) -> SuperPolynomial {
        a.multiply(b).unwrap()
    }

    #[test]
    fn grassmann_derivative_examples() {
        let f = mul(&th(theta_pp(1)), &th(theta_mm(2)));
        assert_eq!(d_odd(&f, theta_pp(1)), th(theta_mm(2)));
        let g = mul(&th(theta_mm(2)), &th(theta_pp(1)));
        assert_eq!(d_odd(&g, theta_pp(1)), th(theta_mm(2)).neg());
        let h = mul(&SuperPolynomial::x(A, 0), &th(theta_0(2)));
        assert!(d_odd(&h, theta_pp(1)).is_zero());
    }

    #[test]
    fn harmonic_derivative_examples() {
        assert_eq!(harmonic_pp(&SuperPolynomial::u(A, UM1)), SuperPolynomial::u(A, UP1));
        let f = mul(&SuperPolynomial::u(A, UP1), &SuperPolynomial::u(A, UM2));
        assert!(harmonic_0(&f).is_zero());
    }

    #[test]
    fn covariant_derivative_examples() {
        for a in 1..=2 {
            let t = th(theta_pp(a));
            assert_eq!(apply_operator(&t, OperatorTag::D0), t.scale(&Scalar::from_int(2)));
        }
        let t = th(theta_mm(1));
        let ab = apply_operator(&apply_operator(&t, OperatorTag::DmmA(1)), OperatorTag::DppA(1));
        let ba = apply_operator(&apply_operator(&t, OperatorTag::DppA(1)), OperatorTag::DmmA(1));
        assert!(ab.add(&ba).unwrap().is_zero());
        let free = mul(&SuperPolynomial::x(A, 1), &mul(&th(theta_pp(2)), &th(theta_0(1))));
        assert!(apply_operator(&free, OperatorTag::DppA(1)).is_zero());
    }

    #[test]
    fn analyticity() {
        let f = mul(&th(theta_pp(1)), &th(theta_0(2)));
        assert!(is_analytic(&f).unwrap());
        assert!(!is_analytic(&th(theta_mm(1))).unwrap());
        let g = mul(&SuperPolynomial::u(A, UP1), &SuperPolynomial::x(A, 0));
        assert!(is_analytic(&g).unwrap());
        assert!(matches!(
            is_analytic(&SuperPolynomial::one(Basis::Central)),
            Err(Error::Basis(_))
        ));
        // The central coordinate x itself depends on θ⁻⁻ once written analytically.
        let x_central = to_analytic(&SuperPolynomial::x(Basis::Central, 0));
        assert!(!is_analytic(&x_central).unwrap());
    }

    #[test]
    fn basis_round_trip() {
        let f = mul(&SuperPolynomial::x(Basis::Central, 0), &SuperPolynomial::x(Basis::Central, 1));
        assert_eq!(to_central(&to_analytic(&f)), f);
    }

    #[test]
    fn berezin_examples() {
        let top = [theta_pp(1), theta_pp(2), theta_mm(1), theta_mm(2), theta_0(1), theta_0(2)]
            .iter()
            .fold(SuperPolynomial::one(A), |acc, &b| mul(&acc, &th(b)));
        assert_eq!(
            berezin_integrate(&top, Measure::Full),
            SuperPolynomial::constant(A, Scalar::from_ratio(-1, 8))
        );
        let five = d_odd(&top, theta_0(2));
        assert!(berezin_integrate(&five, Measure::Full).is_zero());
        let f = mul(&th(theta_mm(1)), &mul(&th(theta_pp(1)), &mul(&th(theta_pp(2)), &mul(&th(theta_0(1)), &th(theta_0(2))))));
        assert!(berezin_integrate(&f, Measure::Analytic).is_zero());
    }

    #[test]
    fn susy_generator_examples() {
        let one = SuperPolynomial::one(A);
        for a in 1..=2 {
            assert!(apply_operator(&one, OperatorTag::Q0A(a)).is_zero());
        }
        let f = mul(&th(theta_mm(1)), &th(theta_pp(2)));
        assert_eq!(apply_operator(&f, OperatorTag::QppA(1)), d_odd(&f, theta_mm(1)));
        let x0 = SuperPolynomial::x(A, 0);
        let q = apply_operator(&apply_operator(&x0, OperatorTag::Q0A(1)), OperatorTag::Q0A(1));
        assert_eq!(q.scale(&Scalar::from_int(2)), SuperPolynomial::one(A));
    }

    #[test]
    fn tilde_examples() {
        assert_eq!(tilde(&SuperPolynomial::u(A, UP1)), SuperPolynomial::u(A, UP2));
        let pair = mul(&th(theta_pp(1)), &th(theta_pp(2)));
        assert_eq!(tilde(&pair), pair.neg());
        assert_eq!(tilde(&tilde(&pair)), pair);
        let ix = SuperPolynomial::x(A, 0).scale(&Scalar::i());
        assert_eq!(tilde(&ix), ix.neg());
        let u = SuperPolynomial::u(A, UM2);
        assert_eq!(tilde(&tilde(&u)), u.neg());
    }
}
