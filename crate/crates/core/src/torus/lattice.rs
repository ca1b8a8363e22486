//! Decomposition of the character lattice under `theta`: the fixed sublattice `X^theta`, the
//! kernel `Y` of the norm, and the `theta`-stable lattice `L_theta` generated by `L_0 in Y`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::LatticeAutomorphism;
use crate::algebra::{IntMatrix, QMatrix};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeDecomposition {
    /// Saturated basis of `X^theta = ker(B - I)`, `B` the character action.
    pub fixed_basis: Vec<Vec<BigInt>>,
    /// Basis of `Y = ker N` over the rationals.
    pub y_basis: Vec<Vec<BigRational>>,
    pub l0: Vec<Vec<BigInt>>,
    /// Hermite basis of `L_theta = sum_i B^i L_0`.
    pub ltheta_basis: Vec<Vec<BigInt>>,
    /// Matrix of `B` restricted to `L_theta` in `ltheta_basis` (row convention:
    /// `B b_i = sum_j R_ij b_j`).
    pub restriction: IntMatrix,
    /// `|det(R - I)|`, or `None` when the restriction has fixed vectors.
    pub invariant_order: Option<BigInt>,
}

fn to_rational(v: &[BigInt]) -> Vec<BigRational> {
    v.iter().cloned().map(BigRational::from_integer).collect()
}

fn matrix_from_rows(rows: &[Vec<BigInt>], cols: usize) -> IntMatrix {
    if rows.is_empty() {
        return IntMatrix::zeros(0, cols);
    }
    IntMatrix::from_big_rows(rows.to_vec()).expect("rectangular")
}

fn hermite(rows: &[Vec<BigInt>], cols: usize) -> Vec<Vec<BigInt>> {
    if rows.is_empty() {
        return Vec::new();
    }
    matrix_from_rows(rows, cols).hermite_rows()
}

/// Coordinates of `target` (rows) in the Hermite basis `basis`, exact over the rationals.
fn coordinates(basis: &[Vec<BigInt>], target: &[Vec<BigInt>]) -> Option<QMatrix> {
    // pivot columns of a Hermite basis give an invertible r x r minor
    let pivots: Vec<usize> = basis
        .iter()
        .map(|row| row.iter().position(|x| !x.is_zero()).expect("nonzero row"))
        .collect();
    let minor = QMatrix::from_rat_rows(
        basis
            .iter()
            .map(|row| pivots.iter().map(|&c| BigRational::from_integer(row[c].clone())).collect())
            .collect(),
    )
    .ok()?;
    let inv = minor.inverse().ok()?;
    let t = QMatrix::from_rat_rows(
        target
            .iter()
            .map(|row| pivots.iter().map(|&c| BigRational::from_integer(row[c].clone())).collect())
            .collect(),
    )
    .ok()?;
    let coords = t.try_mul(&inv).ok()?;
    // verify on all columns, not just the pivots
    let full = QMatrix::from_rat_rows(basis.iter().map(|r| to_rational(r)).collect()).ok()?;
    let check = coords.try_mul(&full).ok()?;
    let expect = QMatrix::from_rat_rows(target.iter().map(|r| to_rational(r)).collect()).ok()?;
    (check == expect).then_some(coords)
}

/// Decompose the character lattice of the torus under `theta`.
///
/// `l0` defaults to the saturated integer kernel of the norm; a supplied `l0` must lie in `Y`.
pub fn decompose(theta: &LatticeAutomorphism, l0: Option<Vec<Vec<BigInt>>>) -> Result<LatticeDecomposition> {
    let k = theta.rank();
    let b = theta.character_matrix();
    let n = theta.order() as usize;
    let fixed_basis = b.sub(&IntMatrix::identity(k)).kernel_basis();
    let norm = (1..n).fold(IntMatrix::identity(k), |acc, i| acc.add(&theta.power(i as i64).transpose()));
    let y_int = norm.kernel_basis();
    let y_basis: Vec<Vec<BigRational>> = y_int.iter().map(|v| to_rational(v)).collect();

    let l0 = match l0 {
        None => y_int.clone(),
        Some(l0) => {
            for v in &l0 {
                if v.len() != k {
                    return Err(Error::Dimension(format!("L0 vector of length {} in rank {k}", v.len())));
                }
                if norm.mul_vec(v).iter().any(|x| !x.is_zero()) {
                    return Err(Error::Contract(format!("L0 vector {v:?} is not in the norm kernel")));
                }
            }
            l0
        }
    };

    let mut generators = Vec::new();
    let mut image = l0.clone();
    for _ in 0..n {
        generators.extend(image.iter().cloned());
        image = image.iter().map(|v| b.mul_vec(v)).collect();
    }
    let ltheta_basis = hermite(&generators, k);

    let r = ltheta_basis.len();
    let images: Vec<Vec<BigInt>> = ltheta_basis.iter().map(|v| b.mul_vec(v)).collect();
    let (restriction, invariant_order) = if r == 0 {
        (IntMatrix::zeros(0, 0), Some(BigInt::from(1)))
    } else {
        let coords = coordinates(&ltheta_basis, &images).expect("L_theta is theta-stable");
        let rows = coords.to_integer_rows().expect("integral on a stable lattice");
        let restriction = IntMatrix::from_big_rows(rows)?;
        let det = restriction.sub(&IntMatrix::identity(r)).determinant()?;
        (restriction, (!det.is_zero()).then(|| det.abs()))
    };

    let d = LatticeDecomposition {
        fixed_basis,
        y_basis,
        l0,
        ltheta_basis,
        restriction,
        invariant_order,
    };
    d.assert_invariants(theta);
    Ok(d)
}

impl LatticeDecomposition {
    /// Fixed vectors are fixed, `Y` is killed by the norm, ranks add up to `k`, and
    /// `L_theta` is `theta`-stable.
    pub fn check_invariants(&self, theta: &LatticeAutomorphism) -> Vec<String> {
        let k = theta.rank();
        let b = theta.character_matrix();
        let mut failures = Vec::new();
        for v in &self.fixed_basis {
            if b.mul_vec(v) != *v {
                failures.push(format!("{v:?} is not fixed"));
            }
        }
        let norm = theta.norm_matrix().transpose().to_qmatrix();
        for v in &self.y_basis {
            let col = QMatrix::from_rat_rows(v.iter().map(|x| vec![x.clone()]).collect()).expect("column");
            let img = norm.try_mul(&col).expect("dimensions");
            if img.entries().iter().any(|x| !x.is_zero()) {
                failures.push(format!("{v:?} is not in ker N"));
            }
        }
        let fixed_rank = matrix_from_rows(&self.fixed_basis, k).rank();
        let y_rows: Vec<Vec<BigInt>> = self
            .y_basis
            .iter()
            .map(|v| {
                let l = v.iter().fold(BigInt::from(1), |acc, x| num_integer::lcm(acc, x.denom().clone()));
                v.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect()
            })
            .collect();
        let y_rank = matrix_from_rows(&y_rows, k).rank();
        if fixed_rank + y_rank != k {
            failures.push(format!("rank {fixed_rank} + {y_rank} != {k}"));
        }
        let images: Vec<Vec<BigInt>> = self.ltheta_basis.iter().map(|v| b.mul_vec(v)).collect();
        let mut both = self.ltheta_basis.clone();
        both.extend(images);
        if hermite(&both, k) != self.ltheta_basis {
            failures.push("L_theta is not theta-stable".into());
        }
        failures
    }

    fn assert_invariants(&self, theta: &LatticeAutomorphism) {
        let failures = self.check_invariants(theta);
        assert!(failures.is_empty(), "decomposition invariants: {failures:?}");
    }

    pub fn fixed_rank(&self) -> usize {
        self.fixed_basis.len()
    }

    pub fn y_rank(&self) -> usize {
        self.y_basis.len()
    }

    pub fn ltheta_rank(&self) -> usize {
        self.ltheta_basis.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn three_cycle() {
        let theta = LatticeAutomorphism::cyclic_shift(3);
        let d = decompose(&theta, None).unwrap();
        assert_eq!(d.fixed_basis.len(), 1);
        let v = &d.fixed_basis[0];
        assert!(v == &big(&[1, 1, 1]) || v == &big(&[-1, -1, -1]));
        assert_eq!(d.y_rank(), 2);
        assert_eq!(d.ltheta_rank(), 2);
        assert_eq!(d.invariant_order, Some(BigInt::from(3)));
    }

    #[test]
    fn identity_and_rotation() {
        let id = LatticeAutomorphism::from_rows(&[vec![1, 0], vec![0, 1]]).unwrap();
        let d = decompose(&id, None).unwrap();
        assert_eq!((d.fixed_rank(), d.y_rank(), d.ltheta_rank()), (2, 0, 0));

        let rot = LatticeAutomorphism::from_rows(&[vec![0, 1], vec![-1, 0]]).unwrap();
        let d = decompose(&rot, None).unwrap();
        assert_eq!((d.fixed_rank(), d.y_rank(), d.ltheta_rank()), (0, 2, 2));
        assert_eq!(d.invariant_order, Some(BigInt::from(2)));
    }

    #[test]
    fn explicit_l0() {
        let theta = LatticeAutomorphism::cyclic_shift(3);
        let d = decompose(&theta, Some(vec![big(&[2, -2, 0])])).unwrap();
        // orbit of (2,-2,0) spans the index-4 sublattice 2*{sum = 0}
        assert_eq!(d.ltheta_basis, vec![big(&[2, 0, -2]), big(&[0, 2, -2])]);
        assert!(matches!(
            decompose(&theta, Some(vec![big(&[1, 0, 0])])),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn non_symmetric_matrix_uses_transpose() {
        // theta(t) = (t2, t2^-1 t1^-1)... character action A^T
        let theta = LatticeAutomorphism::from_rows(&[vec![0, 1], vec![-1, -1]]).unwrap();
        let d = decompose(&theta, None).unwrap();
        assert_eq!(d.fixed_rank(), 0);
        assert_eq!(d.invariant_order, Some(BigInt::from(3)));
        assert!(d.check_invariants(&theta).is_empty());
    }
}
