//! Root-power transforms of monic polynomials: power sums and `m`-th power characteristic polynomials.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;

use super::matrix::QMatrix;
use super::poly::{rat, RatPoly};
use crate::error::{Error, Result};

/// `sum_i alpha_i^m` over the roots of a monic `f`, by Newton's identities.
pub fn power_sum(f: &RatPoly, m: u64) -> Result<BigRational> {
    f.require_monic("power_sum input")?;
    let n = f.degree();
    if m == 0 {
        return Ok(rat(n as i64));
    }
    // a[i] is the coefficient of x^(n-i)
    let a: Vec<BigRational> = (0..=n).map(|i| f.coeff(n - i)).collect();
    let m = m as usize;
    let mut p: Vec<BigRational> = Vec::with_capacity(m + 1);
    p.push(rat(n as i64));
    for k in 1..=m {
        let mut s = BigRational::zero();
        for i in 1..k.min(n + 1) {
            s += &a[i] * &p[k - i];
        }
        if k <= n {
            s += &a[k] * rat(k as i64);
        }
        p.push(-s);
    }
    Ok(p.swap_remove(m))
}

/// Matrix of multiplication by `r` on `Q[y]/f` in the basis `1, y, ..., y^(n-1)`.
fn multiplication_matrix(r: &RatPoly, f: &RatPoly) -> QMatrix {
    let n = f.degree();
    let mut m = QMatrix::zeros(n, n);
    let mut col = r.rem(f);
    for j in 0..n {
        for i in 0..n {
            m.set(i, j, col.coeff(i));
        }
        col = (&col * &RatPoly::x()).rem(f);
    }
    m
}

/// Monic polynomial whose roots are the `m`-th powers of the roots of `f`.
///
/// This is `Res_y(f(y), x - y^m)`: the norm of `x - y^m` from `Q[y]/f`, i.e. the
/// characteristic polynomial of multiplication by `y^m mod f`.
pub fn power_charpoly(f: &RatPoly, m: u64) -> Result<RatPoly> {
    f.require_monic("power_charpoly input")?;
    if m == 0 {
        return Err(Error::Contract("power exponent must be positive".into()));
    }
    if f.degree() == 0 {
        return Err(Error::Contract("power_charpoly of a constant".into()));
    }
    power_charpoly_big(f, &BigUint::from(m))
}

pub fn power_charpoly_big(f: &RatPoly, m: &BigUint) -> Result<RatPoly> {
    f.require_monic("power_charpoly input")?;
    let r = RatPoly::x().pow_mod(m, f);
    multiplication_matrix(&r, f).charpoly()
}

/// Polynomial whose roots are all products `alpha_i * gamma_j` (roots of `f`, `h`).
pub fn root_product_poly(f: &RatPoly, h: &RatPoly) -> Result<RatPoly> {
    let cf = QMatrix::companion(f)?;
    let ch = QMatrix::companion(h)?;
    cf.kronecker(&ch).charpoly()
}

/// Polynomial whose roots are the ratios `alpha_i / beta_j` of the roots of `f` and `g`.
/// Requires `g(0) != 0`.
pub fn root_ratio_poly(f: &RatPoly, g: &RatPoly) -> Result<RatPoly> {
    if g.coeff(0).is_zero() {
        return Err(Error::Contract("ratio polynomial needs nonzero roots".into()));
    }
    let cg_inv = QMatrix::companion(g)?.inverse()?;
    QMatrix::companion(f)?.kronecker(&cg_inv).charpoly()
}
