//! Power maps on a non-identity component `G^0 J`: the collapse of the normalizer of the torus
//! in `SL_2` and the non-collapse for `SL_2 x SL_2` with the swap.

use std::collections::HashSet;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{rat, rat_frac, QMatrix};
use crate::error::{Error, Result};

/// Seed used by the demos when the caller has no preference.
pub const DEFAULT_SEED: u64 = 0x5eed_2024;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sampler {
    /// `diag(t, 1/t)` with `t` a random nonzero rational.
    Sl2Torus,
    /// Block pairs `(x, y)` of `SL_2(Z)` elements from elementary-matrix words.
    Sl2Pair,
}

/// A component `G^0 J` together with the exponent `m` of the power map under study.
#[derive(Clone, Debug)]
pub struct ComponentSpec {
    pub dimension: usize,
    pub sampler: Sampler,
    pub j: QMatrix,
    pub m: u64,
}

impl ComponentSpec {
    /// Normalizer of the diagonal torus in `SL_2`, `J = antidiag(1, -1)`, `m = 2`.
    pub fn sl2_torus() -> Self {
        ComponentSpec {
            dimension: 2,
            sampler: Sampler::Sl2Torus,
            j: QMatrix::from_int_rows(&[vec![0, 1], vec![-1, 0]]),
            m: 2,
        }
    }

    /// `SL_2 x SL_2` in `GL_4` with `J` swapping the blocks, `m = 2`.
    pub fn sl2_swap() -> Self {
        ComponentSpec {
            dimension: 4,
            sampler: Sampler::Sl2Pair,
            j: QMatrix::from_int_rows(&[vec![0, 0, 1, 0], vec![0, 0, 0, 1], vec![1, 0, 0, 0], vec![0, 1, 0, 0]]),
            m: 2,
        }
    }

    pub fn sample(&self, rng: &mut impl Rng) -> QMatrix {
        match self.sampler {
            Sampler::Sl2Torus => {
                let t = random_nonzero_rational(rng, 50);
                QMatrix::diagonal(&[t.clone(), t.recip()])
            }
            Sampler::Sl2Pair => QMatrix::block_diagonal(&[&random_sl2(rng, 6), &random_sl2(rng, 6)]),
        }
    }

    /// Membership in `G^0`.
    pub fn contains(&self, x: &QMatrix) -> bool {
        if x.rows() != self.dimension || !x.is_square() {
            return false;
        }
        let one = BigRational::one();
        match self.sampler {
            Sampler::Sl2Torus => x.get(0, 1).is_zero() && x.get(1, 0).is_zero() && x.get(0, 0) * x.get(1, 1) == one,
            Sampler::Sl2Pair => {
                let off_blocks = (0..2).all(|i| (2..4).all(|j| x.get(i, j).is_zero() && x.get(j, i).is_zero()));
                off_blocks && x.block(0, 0, 2).determinant().ok() == Some(one.clone()) && x.block(2, 2, 2).determinant().ok() == Some(one)
            }
        }
    }

    /// `J x J^-1` stays in `G^0`.
    pub fn normalizes(&self, x: &QMatrix) -> Result<bool> {
        let conj = &(&self.j * x) * &self.j.inverse()?;
        Ok(self.contains(&conj))
    }

    /// `(x J)^m`.
    pub fn power_image(&self, x: &QMatrix) -> QMatrix {
        (x * &self.j).pow(self.m)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerMapReport {
    pub m: u64,
    pub samples: usize,
    pub distinct_images: usize,
    /// Every sample has the same image.
    pub collapse: bool,
    /// Image points exhibited with an explicit preimage in the component.
    pub witnessed_neighborhood: Vec<QMatrix>,
}

fn random_nonzero_rational(rng: &mut impl Rng, bound: i64) -> BigRational {
    let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
    rat_frac(sign * rng.gen_range(1..=bound), rng.gen_range(1..=bound))
}

/// Product of `len` elementary matrices `E_12(a)`, `E_21(a)` with `0 < |a| <= 4`, alternating.
pub fn random_sl2(rng: &mut impl Rng, len: usize) -> QMatrix {
    let mut acc = QMatrix::identity(2);
    for i in 0..len {
        let mut a = rng.gen_range(1..=4);
        if rng.gen_bool(0.5) {
            a = -a;
        }
        let e = if i % 2 == 0 {
            QMatrix::from_int_rows(&[vec![1, a], vec![0, 1]])
        } else {
            QMatrix::from_int_rows(&[vec![1, 0], vec![a, 1]])
        };
        acc = &acc * &e;
    }
    acc
}

/// `(x J)^m = x theta(x) ... theta^(m-1)(x) J^m` with `theta(y) = J y J^-1`.
pub fn coset_power_identity(x: &QMatrix, j: &QMatrix, m: u64) -> Result<bool> {
    if !x.is_square() || x.rows() != j.rows() || !j.is_square() {
        return Err(Error::Dimension(format!(
            "{}x{} against {}x{}",
            x.rows(),
            x.cols(),
            j.rows(),
            j.cols()
        )));
    }
    if x.determinant()?.is_zero() {
        return Err(Error::Singular);
    }
    let j_inv = j.inverse()?;
    let lhs = (x * j).pow(m);
    let n = x.rows();
    let mut rhs = QMatrix::identity(n);
    let mut ji = QMatrix::identity(n);
    let mut ji_inv = QMatrix::identity(n);
    for _ in 0..m {
        rhs = &rhs * &(&(&ji * x) * &ji_inv);
        ji = &ji * j;
        ji_inv = &ji_inv * &j_inv;
    }
    Ok(lhs == &rhs * &ji)
}

/// Squares of `diag(t, 1/t) antidiag(1, -1)`: all equal to `-I`, with fourth-power trace 2.
pub fn torus_collapse_demo(samples: usize, seed: u64) -> Result<PowerMapReport> {
    let spec = ComponentSpec::sl2_torus();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let minus_one = QMatrix::scalar(2, rat(-1));
    let mut images = HashSet::new();
    for _ in 0..samples {
        let x = spec.sample(&mut rng);
        assert!(spec.contains(&x) && spec.normalizes(&x)?);
        let w = &x * &spec.j;
        let image = w.pow(spec.m);
        assert_eq!(image, minus_one, "square of {w} is not -I");
        assert_eq!(w.pow(4).trace(), rat(2));
        images.insert(image);
    }
    Ok(PowerMapReport {
        m: spec.m,
        samples,
        distinct_images: images.len(),
        collapse: images.len() == 1,
        witnessed_neighborhood: images.into_iter().collect(),
    })
}

/// `((x, y) J)^2 = (xy, yx)` on `SL_2 x SL_2`; each sampled `(g, g)` is witnessed as
/// `((g, 1) J)^2`.
pub fn semisimple_noncollapse_demo(samples: usize, seed: u64) -> Result<PowerMapReport> {
    let spec = ComponentSpec::sl2_swap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let id = QMatrix::identity(2);
    let mut images = HashSet::new();
    let mut witnessed = Vec::with_capacity(samples);
    for _ in 0..samples {
        let pair = spec.sample(&mut rng);
        assert!(spec.contains(&pair) && spec.normalizes(&pair)?);
        let (x, y) = (pair.block(0, 0, 2), pair.block(2, 2, 2));
        let image = spec.power_image(&pair);
        assert_eq!(image, QMatrix::block_diagonal(&[&(&x * &y), &(&y * &x)]));
        images.insert(image);

        let g = random_sl2(&mut rng, 6);
        let preimage = QMatrix::block_diagonal(&[&g, &id]);
        assert!(spec.contains(&preimage));
        let diag = QMatrix::block_diagonal(&[&g, &g]);
        assert_eq!(spec.power_image(&preimage), diag, "diagonal witness failed for {g}");
        witnessed.push(diag);
    }
    Ok(PowerMapReport {
        m: spec.m,
        samples,
        distinct_images: images.len(),
        collapse: images.len() == 1,
        witnessed_neighborhood: witnessed,
    })
}
