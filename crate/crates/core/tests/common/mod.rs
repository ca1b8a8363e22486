//! Pair generators shared by the property tests and the acceptance suite.
#![allow(dead_code)]

use std::sync::Arc;

use num_integer::Integer;
use num_traits::Signed;
use potequiv::algebra::{rat, CyclotomicElement, CyclotomicField, RatPoly};
use potequiv::potequiv::SemisimpleClass;
use rand::Rng;

pub struct TwistedPair {
    pub f: SemisimpleClass,
    pub g: SemisimpleClass,
    /// lcm of the orders of the roots of unity applied to the eigenvalues.
    pub order: u64,
    pub alphas: Vec<CyclotomicElement>,
    pub betas: Vec<CyclotomicElement>,
}

impl TwistedPair {
    /// For every bijection `alpha_i -> beta_s(i)` whose ratios are all roots of unity, the lcm
    /// of those orders. The sampled pattern is one such bijection; others can realize the
    /// same `g` with a different (possibly smaller) order.
    pub fn realizing_orders(&self) -> Vec<u64> {
        let n = self.alphas.len();
        let conductor = self.alphas[0].conductor();
        let ratio_order = |a: &CyclotomicElement, b: &CyclotomicElement| -> Option<u64> {
            let r = b.mul(&a.inverse().unwrap());
            (1..=conductor)
                .filter(|d| conductor % d == 0)
                .find(|&d| r.pow(d as i64).unwrap().is_one())
        };
        let table: Vec<Vec<Option<u64>>> = self
            .alphas
            .iter()
            .map(|a| self.betas.iter().map(|b| ratio_order(a, b)).collect())
            .collect();
        let mut out = Vec::new();
        let mut perm: Vec<usize> = (0..n).collect();
        permutations(&mut perm, 0, &mut |p| {
            let orders: Option<Vec<u64>> = (0..n).map(|i| table[i][p[i]]).collect();
            if let Some(o) = orders {
                out.push(o.into_iter().fold(1, |acc, k| acc.lcm(&k)));
            }
        });
        out.sort_unstable();
        out.dedup();
        out
    }
}

fn permutations(v: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == v.len() {
        visit(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permutations(v, k + 1, visit);
        v.swap(k, i);
    }
}

fn nonzero(rng: &mut impl Rng, bound: i64) -> i64 {
    loop {
        let v = rng.gen_range(-bound..=bound);
        if v != 0 {
            return v;
        }
    }
}

/// Eigenvalues in `Q(zeta_N)` forming Galois-stable groups, plus the indices of conjugate pairs.
fn sample_roots(
    rng: &mut impl Rng,
    field: &Arc<CyclotomicField>,
    n: usize,
) -> (Vec<CyclotomicElement>, Vec<(usize, usize)>) {
    let big_n = field.conductor() as i64;
    let z = CyclotomicElement::zeta(field);
    let i = z.pow(big_n / 4).unwrap();
    let w = z.pow(big_n / 3).unwrap();
    let w2 = w.mul(&w);
    let int = |v: i64| CyclotomicElement::from_int(field, v);
    let mut roots = Vec::new();
    let mut pairs = Vec::new();
    while roots.len() < n {
        let room = n - roots.len();
        match rng.gen_range(0..3) {
            0 => roots.push(int(nonzero(rng, 7))),
            1 if room >= 2 => {
                let (a, b) = (rng.gen_range(-5..=5), nonzero(rng, 5));
                pairs.push((roots.len(), roots.len() + 1));
                roots.push(int(a).add(&int(b).mul(&i)));
                roots.push(int(a).sub(&int(b).mul(&i)));
            }
            2 if room >= 2 => {
                let (a, b) = (rng.gen_range(-5..=5), nonzero(rng, 5));
                pairs.push((roots.len(), roots.len() + 1));
                roots.push(int(a).add(&int(b).mul(&w)));
                roots.push(int(a).add(&int(b).mul(&w2)));
            }
            _ => {}
        }
    }
    (roots, pairs)
}

fn expand(field: &Arc<CyclotomicField>, roots: &[CyclotomicElement]) -> Option<RatPoly> {
    let mut coeffs = vec![CyclotomicElement::one(field)];
    for r in roots {
        let mut next = vec![CyclotomicElement::zero(field); coeffs.len() + 1];
        for (k, c) in coeffs.iter().enumerate() {
            next[k + 1] = next[k + 1].add(c);
            next[k] = next[k].sub(&c.mul(r));
        }
        coeffs = next;
    }
    let rational: Option<Vec<_>> = coeffs.iter().map(|c| c.as_rational()).collect();
    rational.map(RatPoly::from_coeffs)
}

/// Multiply each eigenvalue of a random `f` of degree `<= 3` by a root of unity of order
/// dividing some `k <= 12`, resampling the pattern until the twisted polynomial is rational.
pub fn twisted_pair(rng: &mut impl Rng) -> TwistedPair {
    loop {
        let n = rng.gen_range(1..=3);
        let k: u64 = rng.gen_range(1..=12);
        let conductor = 12u64.lcm(&k);
        let field = CyclotomicField::new(conductor);
        let (roots, pairs) = sample_roots(rng, &field, n);
        let step = (conductor / k) as i64;
        let z = CyclotomicElement::zeta(&field);
        for _attempt in 0..32 {
            let mut exps: Vec<i64> = (0..n).map(|_| rng.gen_range(0..k as i64)).collect();
            for &(a, b) in &pairs {
                if rng.gen_bool(0.75) {
                    exps[b] = (k as i64 - exps[a]) % k as i64;
                }
            }
            let twisted: Vec<_> = roots
                .iter()
                .zip(&exps)
                .map(|(r, &e)| r.mul(&z.pow(e * step).unwrap()))
                .collect();
            if let Some(g) = expand(&field, &twisted) {
                let f = expand(&field, &roots).expect("root groups are Galois stable");
                let order = exps
                    .iter()
                    .map(|&e| k / (e as u64).gcd(&k))
                    .fold(1u64, |acc, o| acc.lcm(&o));
                return TwistedPair {
                    f: SemisimpleClass::new(f).unwrap(),
                    g: SemisimpleClass::new(g).unwrap(),
                    order,
                    alphas: roots,
                    betas: twisted,
                };
            }
        }
    }
}

pub fn random_class(rng: &mut impl Rng, n: usize, bound: i64) -> SemisimpleClass {
    let mut c: Vec<_> = (0..n).map(|_| rat(rng.gen_range(-bound..=bound))).collect();
    c[0] = rat(nonzero(rng, bound));
    c.push(rat(1));
    SemisimpleClass::new(RatPoly::from_coeffs(c)).unwrap()
}

/// Random pair of equal degree with `|f(0)| != |g(0)|`: every matching of eigenvalues
/// contains a ratio off the unit circle, so no power can make them conjugate.
pub fn control_pair(rng: &mut impl Rng) -> (SemisimpleClass, SemisimpleClass) {
    let n = rng.gen_range(1..=3);
    loop {
        let f = random_class(rng, n, 9);
        let g = random_class(rng, n, 9);
        if f.charpoly().coeff(0).abs() != g.charpoly().coeff(0).abs() {
            return (f, g);
        }
    }
}

/// Mixture used for oracle agreement: twisted, control and unconstrained random pairs.
pub fn mixed_pair(rng: &mut impl Rng) -> (SemisimpleClass, SemisimpleClass) {
    match rng.gen_range(0..3) {
        0 => {
            let t = twisted_pair(rng);
            (t.f, t.g)
        }
        1 => control_pair(rng),
        _ => {
            let n = rng.gen_range(1..=3);
            (random_class(rng, n, 6), random_class(rng, n, 6))
        }
    }
}
