//! Polynomials on N=3 harmonic superspace and the differential operators acting on them.

mod ops;
mod poly;
mod verify;

pub use ops::{
    apply_operator, berezin_integrate, d_ab, d_odd, d_x, harmonic_0, harmonic_mm, harmonic_pp, is_analytic, mul_odd,
    tilde, to_analytic, to_central, Measure, OperatorTag,
};
pub use poly::{
    eta, front_sign, odd_product, theta_0, theta_mm, theta_pp, Basis, Mono, SuperPolynomial, ETA_COUNT, THETA_COUNT,
    UM1, UM2, UP1, UP2,
};
pub use verify::{superspace_relations, verify_superspace, OperatorRelation};
