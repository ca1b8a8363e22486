//! The local decision procedure: given the characteristic polynomials of two semisimple
//! elements of `GL_n`, decide whether some power of one is conjugate to the same power of
//! the other, and certify the least such exponent against a uniform bound.

mod bounds;
mod numeric;
mod splitting;

use std::fmt;

use num_bigint::BigUint;

use crate::algebra::arith::{divisors, factorial};
use crate::algebra::{
    cyclotomic_divisor_orders, power_charpoly, power_sum, root_ratio_poly, RatPoly,
};
use crate::error::{Error, Result};

pub use bounds::{
    divides_exponent_bound, exponent_bound, exponent_bound_gcd, factorial_bound,
    factorial_exponent_bound, max_root_of_unity_order,
};
pub use numeric::{numeric_ratio_oracle, OracleReport, OracleVerdict, RatioDiagnostic, DEFAULT_ORACLE_PRECISION};
pub use splitting::splitting_field_degree;

/// Conjugacy class of a semisimple element of `GL_n`, represented by its characteristic
/// polynomial. Two such classes are conjugate iff their polynomials agree.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SemisimpleClass {
    charpoly: RatPoly,
}

impl SemisimpleClass {
    pub fn new(charpoly: RatPoly) -> Result<Self> {
        charpoly.require_monic("characteristic polynomial")?;
        if charpoly.degree() == 0 {
            return Err(Error::Contract("characteristic polynomial must have degree >= 1".into()));
        }
        if !charpoly.has_integer_coeffs() {
            return Err(Error::Contract(format!("{charpoly} must have integer coefficients")));
        }
        if charpoly.coeff(0) == num_rational::BigRational::from_integer(0.into()) {
            return Err(Error::Contract(format!("{charpoly} has a zero root; not invertible")));
        }
        Ok(SemisimpleClass { charpoly })
    }

    /// Coefficients highest degree first.
    pub fn from_ints_desc(coeffs: &[i64]) -> Result<Self> {
        Self::new(RatPoly::from_ints_desc(coeffs))
    }

    pub fn charpoly(&self) -> &RatPoly {
        &self.charpoly
    }

    pub fn degree(&self) -> usize {
        self.charpoly.degree()
    }

    /// The class of the `m`-th power.
    pub fn power(&self, m: u64) -> Result<SemisimpleClass> {
        Ok(SemisimpleClass {
            charpoly: power_charpoly(&self.charpoly, m)?,
        })
    }
}

impl fmt::Display for SemisimpleClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.charpoly.fmt(f)
    }
}

/// How the degree of the field generated by eigenvalue ratios is bounded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum DegreeMode {
    /// `min((n!)^2, n^2)`: the compositum bound and the degree of the ratio polynomial.
    #[default]
    Default,
    /// `(n!)^2`, the degree of the field generated by all eigenvalues.
    Factorial,
    /// Exact splitting-field degree of `f * g` when its factorization shape is supported,
    /// falling back to `Default` otherwise.
    Exact,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PotEquivVerdict {
    pub equivalent: bool,
    pub minimal_exponent: Option<u64>,
    /// Degree bound the exponent bound was derived from.
    pub degree_bound: u64,
    pub bound_used: BigUint,
    /// Common characteristic polynomial of the `m`-th powers when equivalent.
    pub certificate: Option<RatPoly>,
}

fn check_degrees(f: &SemisimpleClass, g: &SemisimpleClass) -> Result<()> {
    if f.degree() != g.degree() {
        return Err(Error::Contract(format!(
            "degree mismatch: {} vs {}",
            f.degree(),
            g.degree()
        )));
    }
    Ok(())
}

fn factorial_squared(n: u64) -> u64 {
    factorial(n)
        .pow(2)
        .try_into()
        .unwrap_or(u64::MAX)
}

/// Upper bound on the degree over the rationals of every eigenvalue ratio `alpha_i / beta_j`.
pub fn degree_bound(f: &SemisimpleClass, g: &SemisimpleClass, mode: DegreeMode) -> u64 {
    let n = f.degree().max(g.degree()) as u64;
    let factorial_form = factorial_squared(n);
    let default = factorial_form.min(n * n);
    match mode {
        DegreeMode::Factorial => factorial_form,
        DegreeMode::Default => default,
        DegreeMode::Exact => splitting_field_degree(&[f.charpoly(), g.charpoly()])
            .map_or(default, |d| d.min(default).max(1)),
    }
}

/// Trace test: `Tr(g1^m) = Tr(g2^m)`.
pub fn in_x_m(f: &SemisimpleClass, g: &SemisimpleClass, m: u64) -> Result<bool> {
    check_degrees(f, g)?;
    Ok(power_sum(f.charpoly(), m)? == power_sum(g.charpoly(), m)?)
}

/// Conjugacy of `m`-th powers: all exterior-power traces of `g1^m` and `g2^m` agree.
pub fn in_y_m(f: &SemisimpleClass, g: &SemisimpleClass, m: u64) -> Result<bool> {
    check_degrees(f, g)?;
    Ok(power_charpoly(f.charpoly(), m)? == power_charpoly(g.charpoly(), m)?)
}

pub fn locally_pot_equiv(f: &SemisimpleClass, g: &SemisimpleClass) -> Result<PotEquivVerdict> {
    locally_pot_equiv_with(f, g, DegreeMode::Default)
}

/// Decide local potential equivalence and return the least working exponent.
///
/// The answer is the first divisor of `M = exponent_bound(D)` (in increasing order) at
/// which the powers become conjugate. The scan is restricted to divisors of
/// `L = lcm { k : Phi_k divides the ratio polynomial }`: a working exponent `d` pairs the
/// roots so that every ratio is a root of unity whose order divides both `d` and `L`, so
/// the least working divisor of `M` already divides `gcd(M, L)`. Monotonicity (if `d`
/// works so does every multiple) lets a single test at `gcd(M, L)` settle the negative case.
pub fn locally_pot_equiv_with(
    f: &SemisimpleClass,
    g: &SemisimpleClass,
    mode: DegreeMode,
) -> Result<PotEquivVerdict> {
    check_degrees(f, g)?;
    let degree = degree_bound(f, g, mode);
    let bound = exponent_bound(degree);
    let not_equivalent = |bound: BigUint| PotEquivVerdict {
        equivalent: false,
        minimal_exponent: None,
        degree_bound: degree,
        bound_used: bound,
        certificate: None,
    };

    let ratios = root_ratio_poly(f.charpoly(), g.charpoly())?;
    let orders: Vec<u64> = cyclotomic_divisor_orders(&ratios)
        .into_iter()
        .filter(|&k| divides_exponent_bound(k, degree))
        .collect();
    if orders.is_empty() {
        return Ok(not_equivalent(bound));
    }
    let top = exponent_bound_gcd(degree, bounds::lcm_all(&orders));
    if !in_y_m(f, g, top)? {
        return Ok(not_equivalent(bound));
    }
    for m in divisors(top) {
        let pf = power_charpoly(f.charpoly(), m)?;
        if pf == power_charpoly(g.charpoly(), m)? {
            return Ok(PotEquivVerdict {
                equivalent: true,
                minimal_exponent: Some(m),
                degree_bound: degree,
                bound_used: bound,
                certificate: Some(pf),
            });
        }
    }
    unreachable!("the top divisor was verified to work")
}

/// Reference decision by a plain scan over every divisor of the exponent bound.
///
/// Only usable when the bound fits in a `u64`; intended for cross-checking
/// [`locally_pot_equiv_with`].
pub fn locally_pot_equiv_by_scan(
    f: &SemisimpleClass,
    g: &SemisimpleClass,
    mode: DegreeMode,
) -> Result<PotEquivVerdict> {
    check_degrees(f, g)?;
    let degree = degree_bound(f, g, mode);
    let bound = exponent_bound(degree);
    let m_max: u64 = (&bound)
        .try_into()
        .map_err(|_| Error::Unsupported(format!("exponent bound {bound} too large to scan")))?;
    for m in divisors(m_max) {
        let pf = power_charpoly(f.charpoly(), m)?;
        if pf == power_charpoly(g.charpoly(), m)? {
            return Ok(PotEquivVerdict {
                equivalent: true,
                minimal_exponent: Some(m),
                degree_bound: degree,
                bound_used: bound,
                certificate: Some(pf),
            });
        }
    }
    Ok(PotEquivVerdict {
        equivalent: false,
        minimal_exponent: None,
        degree_bound: degree,
        bound_used: bound,
        certificate: None,
    })
}
