//! Exact splitting-field degrees for products of low-degree integer polynomials.
//!
//! Supported shape: after square-free decomposition and removal of integer roots, every
//! remaining factor is an irreducible quadratic or there is at most one irreducible cubic.
//! Then the splitting field is a multiquadratic field, possibly composed with one cubic
//! field, and its degree is `3^c * 2^r` where `r` is the rank of the discriminant classes
//! in `Q*/Q*^2`.

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::algebra::RatPoly;

fn is_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

fn integer_roots_of_cubic(h: &RatPoly) -> Option<BigInt> {
    // an integer root of a monic cubic is real; locate real roots numerically and test exactly
    let c: Vec<f64> = (0..=3).map(|i| h.coeff(i).to_f64().unwrap_or(f64::NAN)).collect();
    if c.iter().any(|v| !v.is_finite()) {
        return None;
    }
    let bound = 1.0 + c[..3].iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let eval = |x: f64| ((x + c[2]) * x + c[1]) * x + c[0];
    let deval = |x: f64| (3.0 * x + 2.0 * c[2]) * x + c[1];
    let mut candidates = Vec::new();
    let steps = 64;
    for s in 0..steps {
        let mut x = -bound + 2.0 * bound * s as f64 / (steps - 1) as f64;
        for _ in 0..200 {
            let d = deval(x);
            if d == 0.0 {
                break;
            }
            x -= eval(x) / d;
        }
        if x.is_finite() {
            candidates.push(x.round());
        }
    }
    candidates.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    candidates.dedup();
    for x in candidates {
        for delta in [-1.0, 0.0, 1.0] {
            let r = BigInt::from((x + delta) as i64);
            if h.eval(&BigRational::from_integer(r.clone())).is_zero() {
                return Some(r);
            }
        }
    }
    None
}

#[derive(Default)]
struct FieldShape {
    discriminants: Vec<BigInt>,
    cubics: u32,
}

impl FieldShape {
    fn absorb(&mut self, h: &RatPoly) -> Option<()> {
        match h.degree() {
            0 | 1 => Some(()),
            2 => {
                let b = h.coeff(1).to_integer();
                let c = h.coeff(0).to_integer();
                let disc = &b * &b - BigInt::from(4) * c;
                if !is_square(&disc) {
                    self.discriminants.push(disc);
                }
                Some(())
            }
            3 => {
                if let Some(r) = integer_roots_of_cubic(h) {
                    let lin = RatPoly::linear(BigRational::from_integer(r));
                    let q = h.exact_div(&lin)?;
                    return self.absorb(&q);
                }
                let (a, b, c) = (
                    h.coeff(2).to_integer(),
                    h.coeff(1).to_integer(),
                    h.coeff(0).to_integer(),
                );
                // discriminant of x^3 + a x^2 + b x + c
                let disc = &a * &a * &b * &b - BigInt::from(4) * &b * &b * &b
                    - BigInt::from(4) * &a * &a * &a * &c
                    - BigInt::from(27) * &c * &c
                    + BigInt::from(18) * &a * &b * &c;
                if !is_square(&disc) {
                    self.discriminants.push(disc);
                }
                self.cubics += 1;
                (self.cubics <= 1).then_some(())
            }
            _ => None,
        }
    }

    fn degree(&self) -> u64 {
        let r = self.discriminants.len();
        let square_subsets = (0u32..1 << r)
            .filter(|mask| {
                let mut prod = BigInt::from(1);
                for (i, d) in self.discriminants.iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        prod *= d;
                    }
                }
                prod.sign() != Sign::Minus && is_square(&prod)
            })
            .count();
        let rank = r as u32 - square_subsets.trailing_zeros();
        3u64.pow(self.cubics) * (1u64 << rank)
    }
}

/// `[Q(all roots of all polys) : Q]` when the factorization shape is supported, else `None`.
pub fn splitting_field_degree(polys: &[&RatPoly]) -> Option<u64> {
    let mut shape = FieldShape::default();
    for f in polys {
        if !f.is_monic() || !f.has_integer_coeffs() {
            return None;
        }
        for (h, _) in f.squarefree_decomposition() {
            shape.absorb(&h)?;
        }
    }
    if shape.discriminants.len() > 16 {
        return None;
    }
    Some(shape.degree())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> RatPoly {
        RatPoly::from_ints_desc(c)
    }

    #[test]
    fn gaussian_examples() {
        let f = p(&[1, -14, 49]);
        assert_eq!(splitting_field_degree(&[&f, &p(&[1, 0, 49])]), Some(2));
        assert_eq!(splitting_field_degree(&[&p(&[1, -10, 25]), &p(&[1, 6, 25])]), Some(2));
    }

    #[test]
    fn multiquadratic_rank() {
        // Q(i, sqrt2) has degree 4; adding sqrt(-2) stays inside
        let a = p(&[1, 0, 1]);
        let b = p(&[1, 0, -2]);
        let c = p(&[1, 0, 2]);
        assert_eq!(splitting_field_degree(&[&a, &b]), Some(4));
        assert_eq!(splitting_field_degree(&[&a, &b, &c]), Some(4));
        assert_eq!(splitting_field_degree(&[&p(&[1, -3, 2])]), Some(1));
    }

    #[test]
    fn cubic_fields() {
        // x^3 - 2: S3, degree 6; x^3 - 3x + 1: cyclic, degree 3
        assert_eq!(splitting_field_degree(&[&p(&[1, 0, 0, -2])]), Some(6));
        assert_eq!(splitting_field_degree(&[&p(&[1, 0, -3, 1])]), Some(3));
        // x^3 - 2 with Q(sqrt(-3)) already inside its closure
        assert_eq!(splitting_field_degree(&[&p(&[1, 0, 0, -2]), &p(&[1, 0, 3])]), Some(6));
        // reducible cubic (x - 1)(x^2 + 1)
        assert_eq!(splitting_field_degree(&[&p(&[1, -1, 1, -1])]), Some(2));
    }

    #[test]
    fn unsupported_shapes() {
        assert_eq!(splitting_field_degree(&[&p(&[1, 0, 0, 0, -2])]), None);
        assert_eq!(splitting_field_degree(&[&p(&[1, 0, 0, -2]), &p(&[1, 0, 0, -3])]), None);
    }
}
