//! Cyclotomic polynomials, root-of-unity detection and arithmetic in cyclotomic fields.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::arith::{divisors, euler_phi, mobius};
use super::poly::{rat, RatPoly};
use crate::error::{Error, Result};

/// The `k`-th cyclotomic polynomial, built from the Moebius product of `x^d - 1`.
pub fn cyclotomic_polynomial(k: u64) -> RatPoly {
    assert!(k >= 1, "cyclotomic index must be positive");
    let mut num = RatPoly::one();
    let mut den = RatPoly::one();
    for d in divisors(k) {
        let term = &RatPoly::monomial(BigRational::one(), d as usize) - &RatPoly::one();
        match mobius(k / d) {
            1 => num = &num * &term,
            -1 => den = &den * &term,
            _ => {}
        }
    }
    num.exact_div(&den).expect("Moebius product is exact")
}

/// Largest `k` that can satisfy `phi(k) <= d`; uses `phi(k) >= sqrt(k/2)`.
pub(crate) fn phi_search_limit(d: u64) -> u64 {
    2 * d * d + 2
}

/// If the monic integer polynomial `f` equals some cyclotomic polynomial `Phi_k`, return `k`.
///
/// `f` is assumed to be the minimal polynomial of the element under test; the
/// comparison against every `Phi_k` with `phi(k) = deg f` makes the answer exact.
pub fn is_root_of_unity(f: &RatPoly) -> Result<Option<u64>> {
    f.require_monic("root-of-unity candidate")?;
    if !f.has_integer_coeffs() {
        return Err(Error::Contract(format!("{f} does not have integer coefficients")));
    }
    let n = f.degree() as u64;
    if n == 0 {
        return Err(Error::Contract("constant polynomial has no roots".into()));
    }
    Ok((1..=phi_search_limit(n))
        .filter(|&k| euler_phi(k) == n)
        .find(|&k| cyclotomic_polynomial(k) == *f))
}

/// Every `k` with `Phi_k | r`, ascending. Only `k` with `phi(k) <= deg r` can occur.
pub fn cyclotomic_divisor_orders(r: &RatPoly) -> Vec<u64> {
    let deg = r.degree() as u64;
    if r.is_zero() || deg == 0 {
        return Vec::new();
    }
    (1..=phi_search_limit(deg))
        .filter(|&k| euler_phi(k) <= deg)
        .filter(|&k| cyclotomic_polynomial(k).divides(r))
        .collect()
}

/// The `N`-th cyclotomic field `Q[x]/Phi_N`.
#[derive(Debug)]
pub struct CyclotomicField {
    conductor: u64,
    modulus: RatPoly,
}

impl CyclotomicField {
    pub fn new(conductor: u64) -> Arc<Self> {
        assert!(conductor >= 1);
        Arc::new(CyclotomicField {
            conductor,
            modulus: cyclotomic_polynomial(conductor),
        })
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn degree(&self) -> usize {
        self.modulus.degree()
    }

    pub fn modulus(&self) -> &RatPoly {
        &self.modulus
    }
}

/// Element of a cyclotomic field, as power-basis coordinates of length `phi(N)`.
#[derive(Clone, Debug)]
pub struct CyclotomicElement {
    field: Arc<CyclotomicField>,
    coords: Vec<BigRational>,
}

impl PartialEq for CyclotomicElement {
    fn eq(&self, other: &Self) -> bool {
        self.field.conductor == other.field.conductor && self.coords == other.coords
    }
}

impl Eq for CyclotomicElement {}

impl Hash for CyclotomicElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.conductor.hash(state);
        self.coords.hash(state);
    }
}

fn extended_gcd(a: &RatPoly, b: &RatPoly) -> (RatPoly, RatPoly) {
    // returns (g, s) with s*a = g (mod b)
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (RatPoly::one(), RatPoly::zero());
    while !r1.is_zero() {
        let (q, r) = r0.div_rem(&r1);
        let s = &s0 - &(&q * &s1);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    (r0, s0)
}

impl CyclotomicElement {
    fn from_poly(field: &Arc<CyclotomicField>, p: &RatPoly) -> Self {
        let r = p.rem(&field.modulus);
        let mut coords = r.coeffs().to_vec();
        coords.resize(field.degree(), BigRational::zero());
        CyclotomicElement {
            field: Arc::clone(field),
            coords,
        }
    }

    pub fn from_coords(field: &Arc<CyclotomicField>, coords: Vec<BigRational>) -> Result<Self> {
        if coords.len() != field.degree() {
            return Err(Error::Dimension(format!(
                "field of conductor {} has degree {}, got {} coordinates",
                field.conductor,
                field.degree(),
                coords.len()
            )));
        }
        Ok(CyclotomicElement {
            field: Arc::clone(field),
            coords,
        })
    }

    pub fn from_rational(field: &Arc<CyclotomicField>, q: BigRational) -> Self {
        Self::from_poly(field, &RatPoly::constant(q))
    }

    pub fn from_int(field: &Arc<CyclotomicField>, n: i64) -> Self {
        Self::from_rational(field, rat(n))
    }

    pub fn zero(field: &Arc<CyclotomicField>) -> Self {
        Self::from_poly(field, &RatPoly::zero())
    }

    pub fn one(field: &Arc<CyclotomicField>) -> Self {
        Self::from_poly(field, &RatPoly::one())
    }

    /// The primitive root `zeta_N`, the class of `x`.
    pub fn zeta(field: &Arc<CyclotomicField>) -> Self {
        Self::from_poly(field, &RatPoly::x())
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn conductor(&self) -> u64 {
        self.field.conductor
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    fn as_poly(&self) -> RatPoly {
        RatPoly::from_coeffs(self.coords.clone())
    }

    fn same_field(&self, other: &Self) {
        assert_eq!(
            self.field.conductor, other.field.conductor,
            "cyclotomic elements from different fields"
        );
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coords.first().is_some_and(One::is_one) && self.coords[1..].iter().all(Zero::is_zero)
    }

    /// The rational value, if the element lies in the prime field.
    pub fn as_rational(&self) -> Option<BigRational> {
        self.coords[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| self.coords[0].clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        self.same_field(other);
        CyclotomicElement {
            field: Arc::clone(&self.field),
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.same_field(other);
        CyclotomicElement {
            field: Arc::clone(&self.field),
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        CyclotomicElement {
            field: Arc::clone(&self.field),
            coords: self.coords.iter().map(|a| -a).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.same_field(other);
        Self::from_poly(&self.field, &(&self.as_poly() * &other.as_poly()))
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Contract("inverse of zero".into()));
        }
        let (g, s) = extended_gcd(&self.as_poly(), &self.field.modulus);
        // Phi_N is irreducible, so g is a nonzero constant
        let c = g.coeff(0).recip();
        Ok(Self::from_poly(&self.field, &s.scale(&c)))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut result = Self::one(&self.field);
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        Ok(result)
    }

    pub fn pow_big(&self, e: &BigInt) -> Result<Self> {
        let small: i64 = e
            .try_into()
            .map_err(|_| Error::Unsupported(format!("exponent {e} out of range")))?;
        self.pow(small)
    }
}

impl fmt::Display for CyclotomicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.as_rational() {
            return write!(f, "{q}");
        }
        let s = RatPoly::from_coeffs(self.coords.clone()).to_string().replace('x', "z");
        write!(f, "({s})")
    }
}
