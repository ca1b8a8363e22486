//! Exact arithmetic foundation: rationals, polynomials, matrices, cyclotomic fields and
//! integer-lattice normal forms.

pub mod arith;
pub mod cyclotomic;
pub mod intmat;
pub mod matrix;
pub mod poly;
pub mod power;

pub use num_rational::BigRational;

pub use cyclotomic::{
    cyclotomic_divisor_orders, cyclotomic_polynomial, is_root_of_unity, CyclotomicElement,
    CyclotomicField,
};
pub use intmat::{IntMatrix, SmithForm, DEFAULT_ORDER_CAP};
pub use matrix::QMatrix;
pub use poly::{rat, rat_frac, RatPoly};
pub use power::{power_charpoly, power_sum, root_ratio_poly};

/// `det(xI - M)`.
pub fn charpoly(m: &QMatrix) -> crate::Result<RatPoly> {
    m.charpoly()
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    a.smith_normal_form()
}

/// Least `n` with `A^n = I` up to [`DEFAULT_ORDER_CAP`].
pub fn matrix_order(a: &IntMatrix) -> crate::Result<Option<u32>> {
    a.order(DEFAULT_ORDER_CAP)
}
