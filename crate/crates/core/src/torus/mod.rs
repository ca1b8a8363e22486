//! Split tori `G_m^k` with a finite-order automorphism, the semidirect products `Z<J>`,
//! character-lattice decompositions and monomial representations.
//!
//! Convention: `A` acts on points by `theta(t)_i = prod_j t_j^(A_ij)`. A character
//! `lambda(t) = prod_j t_j^(lambda_j)` then satisfies `lambda(theta(t)) = (A^T lambda)(t)`, so
//! the induced action on the character lattice is `lambda -> A^T lambda` on column vectors.

mod lattice;
mod rep;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::algebra::{rat_frac, CyclotomicElement, CyclotomicField, IntMatrix, DEFAULT_ORDER_CAP};
use crate::error::{Error, Result};

pub use lattice::{decompose, LatticeDecomposition};
pub use rep::{commutant_check, rep_matrix, trace_identity_check, CycMatrix, MonomialRep, TraceIdentityReport, TraceSample};

/// Unimodular `A` of finite order `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeAutomorphism {
    matrix: IntMatrix,
    order: u32,
    /// `A^i` for `0 <= i < n`.
    powers: Vec<IntMatrix>,
}

impl LatticeAutomorphism {
    pub fn new(matrix: IntMatrix) -> Result<Self> {
        Self::with_cap(matrix, DEFAULT_ORDER_CAP)
    }

    pub fn with_cap(matrix: IntMatrix, cap: u32) -> Result<Self> {
        let order = matrix.order(cap)?.ok_or(Error::InfiniteOrder { cap })?;
        let mut powers = vec![IntMatrix::identity(matrix.rows())];
        for i in 1..order as usize {
            powers.push(&powers[i - 1] * &matrix);
        }
        Ok(LatticeAutomorphism {
            matrix,
            order,
            powers,
        })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(IntMatrix::from_rows(rows)?)
    }

    /// `[[-1]]`: inversion on `G_m`.
    pub fn inversion() -> Self {
        Self::from_rows(&[vec![-1]]).expect("order 2")
    }

    /// Cyclic coordinate shift on `G_m^k`, `theta(t)_i = t_(i+1 mod k)`.
    pub fn cyclic_shift(k: usize) -> Self {
        let rows: Vec<Vec<i64>> = (0..k)
            .map(|i| (0..k).map(|j| i64::from(j == (i + 1) % k)).collect())
            .collect();
        Self::from_rows(&rows).expect("permutation matrices have finite order")
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn rank(&self) -> usize {
        self.matrix.rows()
    }

    /// `A^e` for any integer `e`.
    pub fn power(&self, e: i64) -> &IntMatrix {
        &self.powers[e.rem_euclid(self.order as i64) as usize]
    }

    /// `N = 1 + A + ... + A^(n-1)`.
    pub fn norm_matrix(&self) -> IntMatrix {
        self.powers
            .iter()
            .skip(1)
            .fold(self.powers[0].clone(), |acc, p| acc.add(p))
    }

    /// Matrix of the action on the character lattice (column vectors).
    pub fn character_matrix(&self) -> IntMatrix {
        self.matrix.transpose()
    }
}

impl fmt::Display for LatticeAutomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.matrix.fmt(f)
    }
}

/// `|det(A - I)|` when nonzero: the order of the finite group of `theta`-fixed points.
/// `None` means the fixed locus contains a positive-dimensional subtorus.
pub fn invariant_order(theta: &LatticeAutomorphism) -> Option<BigInt> {
    let k = theta.rank();
    let det = theta
        .matrix
        .sub(&IntMatrix::identity(k))
        .determinant()
        .expect("square");
    (!det.is_zero()).then(|| det.abs())
}

/// A point of `(K*)^k` with coordinates in a cyclotomic field `K`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TorusPoint {
    coords: Vec<CyclotomicElement>,
}

impl TorusPoint {
    pub fn new(coords: Vec<CyclotomicElement>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::Dimension("torus of rank 0".into()));
        }
        if coords.iter().any(CyclotomicElement::is_zero) {
            return Err(Error::Contract("torus coordinates must be nonzero".into()));
        }
        let n = coords[0].conductor();
        if coords.iter().any(|c| c.conductor() != n) {
            return Err(Error::Contract("coordinates from different fields".into()));
        }
        Ok(TorusPoint { coords })
    }

    pub fn from_ints(field: &Arc<CyclotomicField>, values: &[i64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| CyclotomicElement::from_int(field, v)).collect())
    }

    pub fn identity(field: &Arc<CyclotomicField>, k: usize) -> Self {
        TorusPoint {
            coords: vec![CyclotomicElement::one(field); k],
        }
    }

    pub fn coords(&self) -> &[CyclotomicElement] {
        &self.coords
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        self.coords[0].field()
    }

    pub fn is_identity(&self) -> bool {
        self.coords.iter().all(CyclotomicElement::is_one)
    }

    fn check_rank(&self, other: &TorusPoint) -> Result<()> {
        if self.rank() != other.rank() {
            return Err(Error::Dimension(format!("rank {} vs {}", self.rank(), other.rank())));
        }
        Ok(())
    }

    pub fn mul(&self, other: &TorusPoint) -> Result<TorusPoint> {
        self.check_rank(other)?;
        Ok(TorusPoint {
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a.mul(b)).collect(),
        })
    }

    pub fn inverse(&self) -> TorusPoint {
        TorusPoint {
            coords: self.coords.iter().map(|c| c.inverse().expect("nonzero")).collect(),
        }
    }

    pub fn pow(&self, e: i64) -> TorusPoint {
        TorusPoint {
            coords: self.coords.iter().map(|c| c.pow(e).expect("nonzero")).collect(),
        }
    }

    /// `prod_j t_j^(exponents_j)`.
    pub fn monomial(&self, exponents: &[BigInt]) -> CyclotomicElement {
        self.coords
            .iter()
            .zip(exponents)
            .fold(CyclotomicElement::one(self.field()), |acc, (c, e)| {
                acc.mul(&c.pow_big(e).expect("nonzero coordinate, exponent in range"))
            })
    }

    /// Evaluate the character `lambda`.
    pub fn character(&self, lambda: &[i64]) -> CyclotomicElement {
        let e: Vec<BigInt> = lambda.iter().map(|&v| BigInt::from(v)).collect();
        self.monomial(&e)
    }

    /// Random point with coordinates `+-a/b`, `1 <= a, b <= bound`.
    pub fn random(rng: &mut impl Rng, field: &Arc<CyclotomicField>, k: usize, bound: i64) -> Self {
        let coords = (0..k)
            .map(|_| {
                let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
                let q = rat_frac(sign * rng.gen_range(1..=bound), rng.gen_range(1..=bound));
                CyclotomicElement::from_rational(field, q)
            })
            .collect();
        TorusPoint { coords }
    }
}

impl fmt::Display for TorusPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

fn apply_matrix(a: &IntMatrix, t: &TorusPoint) -> Result<TorusPoint> {
    if a.cols() != t.rank() {
        return Err(Error::Dimension(format!(
            "automorphism of rank {} applied to a point of rank {}",
            a.cols(),
            t.rank()
        )));
    }
    Ok(TorusPoint {
        coords: (0..a.rows()).map(|i| t.monomial(&a.row(i))).collect(),
    })
}

/// `theta(t)_i = prod_j t_j^(A_ij)`.
pub fn theta_apply(theta: &LatticeAutomorphism, t: &TorusPoint) -> Result<TorusPoint> {
    apply_matrix(&theta.matrix, t)
}

/// `theta^e(t)` for any integer `e`.
pub fn theta_power_apply(theta: &LatticeAutomorphism, e: i64, t: &TorusPoint) -> Result<TorusPoint> {
    apply_matrix(theta.power(e), t)
}

/// `prod_(i < count) theta^i(t)`.
pub fn twisted_product(theta: &LatticeAutomorphism, t: &TorusPoint, count: u64) -> Result<TorusPoint> {
    let mut acc = TorusPoint::identity(t.field(), t.rank());
    for i in 0..count {
        acc = acc.mul(&theta_power_apply(theta, i as i64, t)?)?;
    }
    Ok(acc)
}

/// `t theta(t) ... theta^(n-1)(t)`; the result is checked to be `theta`-invariant.
pub fn norm_map(theta: &LatticeAutomorphism, t: &TorusPoint) -> Result<TorusPoint> {
    let n = twisted_product(theta, t, theta.order() as u64)?;
    assert_eq!(theta_apply(theta, &n)?, n, "norm is not theta-invariant");
    Ok(n)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SemidirectElement {
    pub t: TorusPoint,
    /// Exponent of `J`, in `0..n`.
    pub a: u32,
}

impl fmt::Display for SemidirectElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} J^{}", self.t, self.a)
    }
}

/// `Z<J> = Z x| Z/nZ` with `J x J^-1 = theta(x)`. An optional central twist sets `J^n = c`
/// for a `theta`-fixed `c`; without it `J^n = 1`.
#[derive(Clone, Debug)]
pub struct SemidirectGroup {
    theta: LatticeAutomorphism,
    field: Arc<CyclotomicField>,
    twist: Option<TorusPoint>,
}

impl SemidirectGroup {
    pub fn new(theta: LatticeAutomorphism, field: Arc<CyclotomicField>) -> Self {
        SemidirectGroup {
            theta,
            field,
            twist: None,
        }
    }

    pub fn with_central_twist(mut self, c: TorusPoint) -> Result<Self> {
        if theta_apply(&self.theta, &c)? != c {
            return Err(Error::Contract(format!("central twist {c} is not theta-fixed")));
        }
        self.twist = Some(c);
        Ok(self)
    }

    pub fn theta(&self) -> &LatticeAutomorphism {
        &self.theta
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn central_twist(&self) -> Option<&TorusPoint> {
        self.twist.as_ref()
    }

    pub fn order_of_j(&self) -> u32 {
        self.theta.order()
    }

    pub fn identity(&self) -> SemidirectElement {
        SemidirectElement {
            t: TorusPoint::identity(&self.field, self.theta.rank()),
            a: 0,
        }
    }

    pub fn j(&self) -> SemidirectElement {
        SemidirectElement {
            t: TorusPoint::identity(&self.field, self.theta.rank()),
            a: 1 % self.order_of_j(),
        }
    }

    pub fn element(&self, t: TorusPoint, a: u32) -> Result<SemidirectElement> {
        self.check(&t)?;
        Ok(SemidirectElement {
            t,
            a: a % self.order_of_j(),
        })
    }

    fn check(&self, t: &TorusPoint) -> Result<()> {
        if t.rank() != self.theta.rank() || t.field().conductor() != self.field.conductor() {
            return Err(Error::Contract(format!("{t} is not a point of this torus")));
        }
        Ok(())
    }

    /// `(x, a)(y, b) = (x theta^a(y), a + b)`, with the twist when `a + b` wraps.
    pub fn mul(&self, g: &SemidirectElement, h: &SemidirectElement) -> Result<SemidirectElement> {
        self.check(&g.t)?;
        self.check(&h.t)?;
        let n = self.order_of_j();
        let mut t = g.t.mul(&theta_power_apply(&self.theta, g.a as i64, &h.t)?)?;
        if g.a + h.a >= n {
            if let Some(c) = &self.twist {
                t = t.mul(c)?;
            }
        }
        Ok(SemidirectElement {
            t,
            a: (g.a + h.a) % n,
        })
    }

    pub fn pow(&self, g: &SemidirectElement, e: u64) -> Result<SemidirectElement> {
        let mut acc = self.identity();
        for _ in 0..e {
            acc = self.mul(&acc, g)?;
        }
        Ok(acc)
    }

    /// Least `k >= 1` with `g^k = 1`, trying `k <= cap`.
    pub fn element_order(&self, g: &SemidirectElement, cap: u64) -> Result<Option<u64>> {
        let mut acc = g.clone();
        for k in 1..=cap {
            if acc == self.identity() {
                return Ok(Some(k));
            }
            acc = self.mul(&acc, g)?;
        }
        Ok(None)
    }

    /// Order of `x J`. Bounded by `m n` where `m` is the invariant order.
    pub fn coset_element_order(&self, x: &TorusPoint) -> Result<u64> {
        let m = invariant_order(&self.theta)
            .ok_or_else(|| Error::Unsupported("theta has infinitely many fixed points".into()))?;
        let n = self.order_of_j() as u64;
        let bound = m
            .to_u64()
            .and_then(|m| m.checked_mul(n))
            .ok_or_else(|| Error::Unsupported(format!("bound {m} * {n} too large to search")))?;
        let g = self.element(x.clone(), 1)?;
        let k = self
            .element_order(&g, bound)?
            .expect("coset element order exceeds m n");
        assert!(k <= bound);
        Ok(k)
    }
}
