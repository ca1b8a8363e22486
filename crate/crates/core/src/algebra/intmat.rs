//! Integer matrices: Smith and Hermite normal forms, kernels and multiplicative order.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::matrix::QMatrix;
use crate::error::{Error, Result};

/// Default cap for [`IntMatrix::order`].
pub const DEFAULT_ORDER_CAP: u32 = 1000;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

/// Result of [`IntMatrix::smith_normal_form`]: `u * a * v == d`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols)).map(|i| self.d.get(i, i).clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let big: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect();
        Self::from_big_rows(big)
    }

    pub fn from_big_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if r == 0 || c == 0 {
            return Err(Error::Dimension("empty integer matrix".into()));
        }
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(IntMatrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Parse a bracketed literal such as `[[0,1],[-1,0]]`.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Format {
            line: 1,
            column: 1,
            message: format!("{msg} in matrix literal {text:?}"),
        };
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = compact
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| bad("missing outer brackets"))?;
        let mut rows = Vec::new();
        let mut rest = inner;
        while !rest.is_empty() {
            let body_start = rest.strip_prefix('[').ok_or_else(|| bad("expected '['"))?;
            let end = body_start.find(']').ok_or_else(|| bad("unclosed row"))?;
            let row = body_start[..end]
                .split(',')
                .map(|t| t.parse::<BigInt>().map_err(|_| bad(&format!("bad entry {t:?}"))))
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
            rest = &body_start[end + 1..];
            rest = rest.strip_prefix(',').unwrap_or(rest);
        }
        Self::from_big_rows(rows)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<BigInt> {
        self.entries[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn try_mul(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.entries[i * rhs.cols + j] += a * rhs.get(k, j);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * &v[j]).sum())
            .collect()
    }

    pub fn add(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn pow(&self, e: u64) -> IntMatrix {
        assert!(self.is_square());
        let mut acc = Self::identity(self.rows);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Self::identity(self.rows)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn to_qmatrix(&self) -> QMatrix {
        QMatrix::new(
            self.rows,
            self.cols,
            self.entries.iter().cloned().map(BigRational::from_integer).collect(),
        )
        .expect("shape preserved")
    }

    pub fn determinant(&self) -> Result<BigInt> {
        Ok(self.to_qmatrix().determinant()?.to_integer())
    }

    pub fn is_unimodular(&self) -> bool {
        self.is_square() && self.determinant().is_ok_and(|d| d.abs().is_one())
    }

    /// Inverse of a unimodular matrix.
    pub fn unimodular_inverse(&self) -> Result<IntMatrix> {
        if !self.is_unimodular() {
            return Err(Error::Contract("matrix is not unimodular".into()));
        }
        let inv = self.to_qmatrix().inverse()?;
        let rows = inv.to_integer_rows().expect("inverse of a unimodular matrix is integral");
        Self::from_big_rows(rows)
    }

    /// Least `n >= 1` with `A^n = I`, searching up to `cap`; `None` past the cap.
    pub fn order(&self, cap: u32) -> Result<Option<u32>> {
        if !self.is_square() {
            return Err(Error::Dimension("order of a non-square matrix".into()));
        }
        if !self.is_unimodular() {
            return Err(Error::Contract("matrix_order requires a unimodular matrix".into()));
        }
        let mut power = self.clone();
        for n in 1..=cap {
            if power.is_identity() {
                return Ok(Some(n));
            }
            power = &power * self;
        }
        Ok(None)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.entries.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.entries.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[target] += factor * row[source]
    fn add_row_multiple(&mut self, target: usize, source: usize, factor: &BigInt) {
        for j in 0..self.cols {
            let v = factor * self.get(source, j);
            self.entries[target * self.cols + j] += v;
        }
    }

    /// col[target] += factor * col[source]
    fn add_col_multiple(&mut self, target: usize, source: usize, factor: &BigInt) {
        for i in 0..self.rows {
            let v = factor * self.get(i, source);
            self.entries[i * self.cols + target] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }

    /// Smith normal form `U A V = D` with `d_1 | d_2 | ...`, all `d_i >= 0`.
    pub fn smith_normal_form(&self) -> SmithForm {
        let (r, c) = (self.rows, self.cols);
        let mut d = self.clone();
        let mut u = Self::identity(r);
        let mut v = Self::identity(c);
        for t in 0..r.min(c) {
            loop {
                // smallest nonzero entry of the trailing block becomes the pivot
                let mut best: Option<(usize, usize)> = None;
                for i in t..r {
                    for j in t..c {
                        let x = d.get(i, j);
                        if !x.is_zero()
                            && best.is_none_or(|(bi, bj)| x.abs() < d.get(bi, bj).abs())
                        {
                            best = Some((i, j));
                        }
                    }
                }
                let Some((pi, pj)) = best else {
                    return SmithForm { u, d, v };
                };
                d.swap_rows(t, pi);
                u.swap_rows(t, pi);
                d.swap_cols(t, pj);
                v.swap_cols(t, pj);

                let mut dirty = false;
                for i in t + 1..r {
                    let q = d.get(i, t).div_floor(d.get(t, t));
                    if !q.is_zero() {
                        d.add_row_multiple(i, t, &-&q);
                        u.add_row_multiple(i, t, &-&q);
                    }
                    dirty |= !d.get(i, t).is_zero();
                }
                for j in t + 1..c {
                    let q = d.get(t, j).div_floor(d.get(t, t));
                    if !q.is_zero() {
                        d.add_col_multiple(j, t, &-&q);
                        v.add_col_multiple(j, t, &-&q);
                    }
                    dirty |= !d.get(t, j).is_zero();
                }
                if dirty {
                    continue;
                }
                let pivot = d.get(t, t).clone();
                let offender = (t + 1..r).find(|&i| (t + 1..c).any(|j| !d.get(i, j).is_multiple_of(&pivot)));
                match offender {
                    Some(i) => {
                        let one = BigInt::one();
                        d.add_row_multiple(t, i, &one);
                        u.add_row_multiple(t, i, &one);
                    }
                    None => break,
                }
            }
            if d.get(t, t).is_negative() {
                d.negate_row(t);
                u.negate_row(t);
            }
        }
        SmithForm { u, d, v }
    }

    /// Row-style Hermite normal form; returns the nonzero rows, pivots strictly increasing,
    /// pivots positive and entries above each pivot reduced into `[0, pivot)`.
    pub fn hermite_rows(&self) -> Vec<Vec<BigInt>> {
        let mut h = self.clone();
        let mut pivot_row = 0;
        let mut pivots = Vec::new();
        for col in 0..h.cols {
            if pivot_row == h.rows {
                break;
            }
            loop {
                let mut best: Option<usize> = None;
                for i in pivot_row..h.rows {
                    if !h.get(i, col).is_zero()
                        && best.is_none_or(|b| h.get(i, col).abs() < h.get(b, col).abs())
                    {
                        best = Some(i);
                    }
                }
                let Some(b) = best else { break };
                h.swap_rows(pivot_row, b);
                let mut done = true;
                for i in pivot_row + 1..h.rows {
                    let q = h.get(i, col).div_floor(h.get(pivot_row, col));
                    if !q.is_zero() {
                        h.add_row_multiple(i, pivot_row, &-&q);
                    }
                    done &= h.get(i, col).is_zero();
                }
                if done {
                    break;
                }
            }
            if h.get(pivot_row, col).is_zero() {
                continue;
            }
            if h.get(pivot_row, col).is_negative() {
                h.negate_row(pivot_row);
            }
            let p = h.get(pivot_row, col).clone();
            for i in 0..pivot_row {
                let q = h.get(i, col).div_floor(&p);
                if !q.is_zero() {
                    h.add_row_multiple(i, pivot_row, &-&q);
                }
            }
            pivots.push(col);
            pivot_row += 1;
        }
        (0..pivot_row).map(|i| h.row(i)).collect()
    }

    /// Saturated integer basis of `{v : A v = 0}` (column vectors), read off the Smith form.
    pub fn kernel_basis(&self) -> Vec<Vec<BigInt>> {
        let snf = self.smith_normal_form();
        let rank = snf.rank();
        (rank..self.cols).map(|j| snf.v.column(j)).collect()
    }

    pub fn rank(&self) -> usize {
        self.smith_normal_form().rank()
    }
}

impl Mul<&IntMatrix> for &IntMatrix {
    type Output = IntMatrix;
    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        self.try_mul(rhs).expect("matrix dimensions agree")
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ",")?;
            }
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            write!(f, "[{}]", row.join(","))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    fn check_snf(a: &IntMatrix) -> SmithForm {
        let s = a.smith_normal_form();
        assert_eq!(&(&s.u * a) * &s.v, s.d, "UAV = D for {a}");
        assert!(s.u.determinant().unwrap().abs().is_one());
        assert!(s.v.determinant().unwrap().abs().is_one());
        let diag = s.diagonal();
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert!(s.d.get(i, j).is_zero());
                }
            }
        }
        for w in diag.windows(2) {
            if !w[0].is_zero() {
                assert!(w[1].is_multiple_of(&w[0]), "divisibility chain {diag:?}");
            } else {
                assert!(w[1].is_zero());
            }
        }
        s
    }

    #[test]
    fn snf_examples() {
        let id = check_snf(&IntMatrix::identity(3));
        assert!(id.d.is_identity());

        let rot_minus_i = m(&[vec![-1, 1], vec![-1, -1]]);
        let s = check_snf(&rot_minus_i);
        assert_eq!(s.diagonal(), vec![BigInt::from(1), BigInt::from(2)]);

        let z = check_snf(&IntMatrix::zeros(2, 3));
        assert!(z.d.is_zero());
    }

    #[test]
    fn order_examples() {
        assert_eq!(IntMatrix::identity(2).order(DEFAULT_ORDER_CAP).unwrap(), Some(1));
        assert_eq!(m(&[vec![0, 1], vec![-1, 0]]).order(DEFAULT_ORDER_CAP).unwrap(), Some(4));
        assert_eq!(m(&[vec![1, 1], vec![0, 1]]).order(DEFAULT_ORDER_CAP).unwrap(), None);
        assert!(matches!(m(&[vec![2, 0], vec![0, 1]]).order(10), Err(Error::Contract(_))));
    }

    #[test]
    fn kernel_of_three_cycle_minus_identity() {
        let a = m(&[vec![-1, 0, 1], vec![1, -1, 0], vec![0, 1, -1]]);
        let ker = a.kernel_basis();
        assert_eq!(ker.len(), 1);
        let v = &ker[0];
        assert!(v.iter().all(|x| x.abs().is_one()));
        assert!(v.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn hermite_rows_of_redundant_generators() {
        let g = m(&[vec![2, 4], vec![3, 6], vec![0, 5]]);
        let h = g.hermite_rows();
        assert_eq!(h, vec![vec![BigInt::from(1), BigInt::from(2)], vec![BigInt::from(0), BigInt::from(5)]]);
    }

    #[test]
    fn parse_literal() {
        let a = IntMatrix::parse("[[0, 1], [-1, 0]]").unwrap();
        assert_eq!(a, m(&[vec![0, 1], vec![-1, 0]]));
        assert_eq!(a.to_string(), "[[0,1],[-1,0]]");
        assert!(IntMatrix::parse("[[1,2],[3]]").is_err());
        assert!(IntMatrix::parse("1,2").is_err());
    }

    proptest! {
        #[test]
        fn snf_certificate_holds(entries in proptest::collection::vec(-9i64..10, 12), shape in 0usize..3) {
            let (r, c) = [(3, 4), (4, 3), (2, 6)][shape];
            let rows: Vec<Vec<i64>> = entries.chunks(c).take(r).map(|ch| ch.to_vec()).collect();
            check_snf(&m(&rows));
        }
    }
}
