//! Semigroup rings of faces, Jacobian-type quotients and the deformed (hatted) module structure.

mod coefficients;
mod hat;
mod ring;

pub use coefficients::CoefficientFunction;
pub use hat::{
    compare_hat_dims, hat_action, r1_hat, r1_hat_at, r1_hat_default, HatComparison, HatElement, HatTruncation,
};
pub use ring::{
    check_nondegenerate, is_nondegenerate, log_derivative_elements, log_derivatives_for, pair_with,
    pivot_functionals, quotient_dims, quotient_dims_with, r1, r1_all, random_nondegenerate, FaceRing,
    GradedQuotient, R1Space, RingElement,
};
