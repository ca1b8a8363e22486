//! Elliptic curves in long Weierstrass form and naive point counting over prime fields.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::algebra::arith::is_prime;
use crate::error::{Error, Result};

/// `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6` with nonzero discriminant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ECModel {
    a: [i64; 5],
    discriminant: BigInt,
}

impl ECModel {
    /// Coefficients `[a1, a2, a3, a4, a6]`.
    pub fn new(a: [i64; 5]) -> Result<Self> {
        let [a1, a2, a3, a4, a6]: [BigInt; 5] = a.map(BigInt::from);
        let k = |v: i64| BigInt::from(v);
        let b2 = &a1 * &a1 + k(4) * &a2;
        let b4 = k(2) * &a4 + &a1 * &a3;
        let b6 = &a3 * &a3 + k(4) * &a6;
        let b8 = &a1 * &a1 * &a6 + k(4) * &a2 * &a6 - &a1 * &a3 * &a4 + &a2 * &a3 * &a3 - &a4 * &a4;
        let discriminant: BigInt = -(&b2 * &b2 * &b8) - k(8) * &b4 * &b4 * &b4 - k(27) * &b6 * &b6
            + k(9) * &b2 * &b4 * &b6;
        if discriminant.is_zero() {
            return Err(Error::Contract(format!("singular Weierstrass model {a:?}")));
        }
        Ok(ECModel { a, discriminant })
    }

    /// `y^2 = x^3 + a x + b`.
    pub fn short(a: i64, b: i64) -> Result<Self> {
        Self::new([0, 0, 0, a, b])
    }

    /// `y^2 = x^3 - x`, with complex multiplication by the Gaussian integers.
    pub fn gaussian_cm() -> Self {
        Self::short(-1, 0).expect("nonsingular")
    }

    /// `y^2 + y = x^3 - x^2 - 10x - 20`, conductor 11.
    pub fn level_11() -> Self {
        Self::new([0, -1, 1, -10, -20]).expect("nonsingular")
    }

    pub fn coefficients(&self) -> [i64; 5] {
        self.a
    }

    pub fn discriminant(&self) -> &BigInt {
        &self.discriminant
    }

    pub fn has_good_reduction(&self, p: u64) -> bool {
        !(&self.discriminant % BigInt::from(p)).is_zero()
    }
}

impl fmt::Display for ECModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.a)
    }
}

/// `a_p = p + 1 - #E(F_p)` by enumerating `x` and evaluating the Legendre symbol of the
/// completed square `4x^3 + b2 x^2 + 2 b4 x + b6` through a table of squares.
pub fn count_points(e: &ECModel, p: u64) -> Result<i64> {
    if p == 2 {
        return Err(Error::Unsupported("point counting in characteristic 2".into()));
    }
    if !is_prime(p) {
        return Err(Error::Contract(format!("{p} is not prime")));
    }
    if !e.has_good_reduction(p) {
        return Err(Error::ExcludedPrime {
            p,
            reason: "bad reduction".into(),
        });
    }
    let r = |v: i128| v.rem_euclid(p as i128) as u64;
    let [a1, a2, a3, a4, a6] = e.a.map(i128::from);
    let b2 = r(a1 * a1 + 4 * a2);
    let b4 = r(2 * a4 + a1 * a3);
    let b6 = r(a3 * a3 + 4 * a6);
    if p > u32::MAX as u64 {
        return Err(Error::Unsupported(format!("naive point count at p = {p}")));
    }
    let pp = p as usize;
    // chi[v] = Legendre symbol (v / p)
    let mut chi = vec![-1i8; pp];
    chi[0] = 0;
    for y in 1..=pp / 2 {
        chi[(y as u64 * y as u64 % p) as usize] = 1;
    }
    let b4x2 = 2 * b4 % p;
    let mut sum: i64 = 0;
    for x in 0..p {
        // Horner: ((4x + b2) x + 2 b4) x + b6
        let h = (((4 * x + b2) % p * x + b4x2) % p * x + b6) % p;
        sum += chi[h as usize] as i64;
    }
    Ok(-sum)
}

/// `|a_p| <= 2 sqrt(p)`.
pub fn within_hasse_bound(a_p: i64, p: u64) -> bool {
    (a_p as i128).pow(2) <= 4 * p as i128
}
