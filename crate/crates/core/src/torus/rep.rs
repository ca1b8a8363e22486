//! Monomial representations of `Z<J>` induced from a character of the torus.

use std::fmt;
use std::sync::Arc;

use super::{theta_power_apply, twisted_product, LatticeAutomorphism, SemidirectElement, SemidirectGroup, TorusPoint};
use crate::algebra::{CyclotomicElement, CyclotomicField};
use crate::error::{Error, Result};

/// Square matrix over a cyclotomic field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycMatrix {
    n: usize,
    entries: Vec<CyclotomicElement>,
}

impl CycMatrix {
    pub fn zeros(field: &Arc<CyclotomicField>, n: usize) -> Self {
        CycMatrix {
            n,
            entries: vec![CyclotomicElement::zero(field); n * n],
        }
    }

    pub fn identity(field: &Arc<CyclotomicField>, n: usize) -> Self {
        let mut m = Self::zeros(field, n);
        for i in 0..n {
            m.entries[i * n + i] = CyclotomicElement::one(field);
        }
        m
    }

    pub fn diagonal(diag: Vec<CyclotomicElement>) -> Self {
        let n = diag.len();
        let field = diag[0].field().clone();
        let mut m = Self::zeros(&field, n);
        for (i, d) in diag.into_iter().enumerate() {
            m.entries[i * n + i] = d;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &CyclotomicElement {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: CyclotomicElement) {
        self.entries[i * self.n + j] = v;
    }

    pub fn mul(&self, rhs: &CycMatrix) -> CycMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        let n = self.n;
        let field = self.entries[0].field();
        let mut out = Self::zeros(field, n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * n + j] = out.entries[i * n + j].add(&a.mul(b));
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, e: u64) -> CycMatrix {
        let mut acc = Self::identity(self.entries[0].field(), self.n);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn trace(&self) -> CyclotomicElement {
        (1..self.n).fold(self.get(0, 0).clone(), |acc, i| acc.add(self.get(i, i)))
    }

    pub fn is_identity(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| if i == j { self.get(i, j).is_one() } else { self.get(i, j).is_zero() }))
    }
}

impl fmt::Display for CycMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// `Ind_Z^(Z<J>) lambda`, of dimension `n = ord(theta)`.
#[derive(Clone, Debug)]
pub struct MonomialRep {
    lambda: Vec<i64>,
    theta: LatticeAutomorphism,
}

impl MonomialRep {
    pub fn new(lambda: Vec<i64>, theta: LatticeAutomorphism) -> Result<Self> {
        if lambda.len() != theta.rank() {
            return Err(Error::Dimension(format!(
                "character of length {} on a torus of rank {}",
                lambda.len(),
                theta.rank()
            )));
        }
        Ok(MonomialRep { lambda, theta })
    }

    pub fn lambda(&self) -> &[i64] {
        &self.lambda
    }

    pub fn theta(&self) -> &LatticeAutomorphism {
        &self.theta
    }

    pub fn dimension(&self) -> usize {
        self.theta.order() as usize
    }

    /// `diag(lambda(theta^-j(t)))`.
    fn torus_matrix(&self, t: &TorusPoint) -> Result<CycMatrix> {
        let diag = (0..self.dimension())
            .map(|j| Ok(theta_power_apply(&self.theta, -(j as i64), t)?.character(&self.lambda)))
            .collect::<Result<Vec<_>>>()?;
        Ok(CycMatrix::diagonal(diag))
    }

    /// `e_j -> e_(j+1)`, and `e_(n-1) -> lambda(c) e_0` under a central twist `c`.
    fn j_matrix(&self, group: &SemidirectGroup) -> CycMatrix {
        let n = self.dimension();
        let field = group.field();
        let mut m = CycMatrix::zeros(field, n);
        for j in 0..n {
            m.set((j + 1) % n, j, CyclotomicElement::one(field));
        }
        if let Some(c) = group.central_twist() {
            m.set(0, n - 1, c.character(&self.lambda));
        }
        m
    }
}

/// `rho((t, a)) = rho(t) rho(J)^a` for the induced representation.
pub fn rep_matrix(rep: &MonomialRep, group: &SemidirectGroup, g: &SemidirectElement) -> Result<CycMatrix> {
    if group.theta() != rep.theta() {
        return Err(Error::Contract("representation and group use different automorphisms".into()));
    }
    let t = rep.torus_matrix(&g.t)?;
    Ok(t.mul(&rep.j_matrix(group).pow(g.a as u64)))
}

#[derive(Clone, Debug)]
pub struct TraceSample {
    pub x: TorusPoint,
    pub trace: CyclotomicElement,
    pub passed: bool,
    /// `rho((x, 1))^m = rho((x theta(x) ... theta^(m-1)(x), 0)) rho(J)^m`.
    pub expansion_holds: bool,
}

#[derive(Clone, Debug)]
pub struct TraceIdentityReport {
    pub m: u64,
    pub dimension: usize,
    pub samples: Vec<TraceSample>,
}

impl TraceIdentityReport {
    pub fn all_pass(&self) -> bool {
        self.samples.iter().all(|s| s.passed && s.expansion_holds)
    }

    pub fn failures(&self) -> usize {
        self.samples.iter().filter(|s| !(s.passed && s.expansion_holds)).count()
    }
}

/// Checks `Tr rho((x theta(x) ... theta^(m-1)(x), 0)) = dim` for each sample. `m` must be a
/// multiple of `n`.
pub fn trace_identity_check(
    theta: &LatticeAutomorphism,
    rep: &MonomialRep,
    m: u64,
    samples: &[TorusPoint],
) -> Result<TraceIdentityReport> {
    let n = theta.order() as u64;
    if m == 0 || m % n != 0 {
        return Err(Error::Contract(format!("m = {m} is not a positive multiple of n = {n}")));
    }
    let dimension = rep.dimension();
    let mut out = Vec::with_capacity(samples.len());
    for x in samples {
        let group = SemidirectGroup::new(theta.clone(), x.field().clone());
        let prod = twisted_product(theta, x, m)?;
        let rho_prod = rep_matrix(rep, &group, &group.element(prod, 0)?)?;
        let trace = rho_prod.trace();
        let passed = trace == CyclotomicElement::from_int(x.field(), dimension as i64);
        let lhs = rep_matrix(rep, &group, &group.element(x.clone(), 1)?)?.pow(m);
        let rhs = rho_prod.mul(&rep_matrix(rep, &group, &group.j())?.pow(m));
        out.push(TraceSample {
            x: x.clone(),
            trace,
            passed,
            expansion_holds: lhs == rhs,
        });
    }
    Ok(TraceIdentityReport {
        m,
        dimension,
        samples: out,
    })
}

/// Whether `rho(Z)` commutes with `rho(J)`, tested at the points with `2` in one coordinate.
pub fn commutant_check(rep: &MonomialRep) -> Result<bool> {
    let k = rep.theta().rank();
    let field = CyclotomicField::new(1);
    let group = SemidirectGroup::new(rep.theta().clone(), field.clone());
    let j = rep_matrix(rep, &group, &group.j())?;
    for i in 0..k {
        let mut coords = vec![1i64; k];
        coords[i] = 2;
        let t = rep_matrix(rep, &group, &group.element(TorusPoint::from_ints(&field, &coords)?, 0)?)?;
        if t.mul(&j) != j.mul(&t) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat_frac;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q() -> Arc<CyclotomicField> {
        CyclotomicField::new(1)
    }

    fn c(v: i64) -> CyclotomicElement {
        CyclotomicElement::from_int(&q(), v)
    }

    fn inversion_rep() -> (MonomialRep, SemidirectGroup) {
        let theta = LatticeAutomorphism::inversion();
        (
            MonomialRep::new(vec![1], theta.clone()).unwrap(),
            SemidirectGroup::new(theta, q()),
        )
    }

    #[test]
    fn inversion_torus_matrices() {
        let (rep, g) = inversion_rep();
        let t = TorusPoint::from_ints(&q(), &[5]).unwrap();
        let m = rep_matrix(&rep, &g, &g.element(t.clone(), 0).unwrap()).unwrap();
        let fifth = CyclotomicElement::from_rational(&q(), rat_frac(1, 5));
        assert_eq!(m, CycMatrix::diagonal(vec![c(5), fifth]));
        let j = rep_matrix(&rep, &g, &g.j()).unwrap();
        assert!(j.get(0, 1).is_one() && j.get(1, 0).is_one() && j.get(0, 0).is_zero());
        let x = rep_matrix(&rep, &g, &g.element(t, 1).unwrap()).unwrap();
        assert!(x.pow(2).is_identity());
        assert_eq!(x.pow(4).trace(), c(2));
    }

    #[test]
    fn homomorphism_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let cases = [
            (LatticeAutomorphism::inversion(), vec![1]),
            (LatticeAutomorphism::cyclic_shift(3), vec![1, -2, 0]),
            (LatticeAutomorphism::from_rows(&[vec![0, 1], vec![-1, -1]]).unwrap(), vec![2, 1]),
        ];
        for (theta, lambda) in cases {
            let rep = MonomialRep::new(lambda, theta.clone()).unwrap();
            let group = SemidirectGroup::new(theta.clone(), q());
            let n = theta.order();
            for _ in 0..100 {
                let g = group
                    .element(TorusPoint::random(&mut rng, &q(), theta.rank(), 7), rand::Rng::gen_range(&mut rng, 0..n))
                    .unwrap();
                let h = group
                    .element(TorusPoint::random(&mut rng, &q(), theta.rank(), 7), rand::Rng::gen_range(&mut rng, 0..n))
                    .unwrap();
                let gh = rep_matrix(&rep, &group, &group.mul(&g, &h).unwrap()).unwrap();
                let prod = rep_matrix(&rep, &group, &g).unwrap().mul(&rep_matrix(&rep, &group, &h).unwrap());
                assert_eq!(gh, prod);
            }
        }
    }

    #[test]
    fn homomorphism_with_central_twist() {
        let theta = LatticeAutomorphism::inversion();
        let group = SemidirectGroup::new(theta.clone(), q())
            .with_central_twist(TorusPoint::from_ints(&q(), &[-1]).unwrap())
            .unwrap();
        let rep = MonomialRep::new(vec![1], theta).unwrap();
        let g = group.element(TorusPoint::from_ints(&q(), &[3]).unwrap(), 1).unwrap();
        let h = group.element(TorusPoint::from_ints(&q(), &[-7]).unwrap(), 1).unwrap();
        let gh = rep_matrix(&rep, &group, &group.mul(&g, &h).unwrap()).unwrap();
        let prod = rep_matrix(&rep, &group, &g).unwrap().mul(&rep_matrix(&rep, &group, &h).unwrap());
        assert_eq!(gh, prod);
    }

    #[test]
    fn trace_identity_examples() {
        let (rep, _) = inversion_rep();
        let x = TorusPoint::from_ints(&q(), &[5]).unwrap();
        let r = trace_identity_check(rep.theta(), &rep, 2, &[x.clone(), TorusPoint::identity(&q(), 1)]).unwrap();
        assert!(r.all_pass());
        assert_eq!(r.samples[0].trace, c(2));
        assert!(trace_identity_check(rep.theta(), &rep, 3, &[x]).is_err());

        let theta = LatticeAutomorphism::from_rows(&[vec![0, 1], vec![-1, -1]]).unwrap();
        let rep = MonomialRep::new(vec![1, 2], theta.clone()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let samples: Vec<TorusPoint> = (0..20).map(|_| TorusPoint::random(&mut rng, &q(), 2, 9)).collect();
        assert!(trace_identity_check(&theta, &rep, 3, &samples).unwrap().all_pass());
        assert!(trace_identity_check(&theta, &rep, 6, &samples).unwrap().all_pass());
    }

    #[test]
    fn trace_identity_fails_off_the_norm_kernel() {
        // the 2-cycle fixes (1,1); lambda = (1,0) does not kill the norm
        let theta = LatticeAutomorphism::cyclic_shift(2);
        let rep = MonomialRep::new(vec![1, 0], theta.clone()).unwrap();
        let x = TorusPoint::from_ints(&q(), &[2, 3]).unwrap();
        let r = trace_identity_check(&theta, &rep, 2, &[x]).unwrap();
        assert!(!r.samples[0].passed);
        assert!(r.samples[0].expansion_holds);
        let rep = MonomialRep::new(vec![1, -1], theta.clone()).unwrap();
        let x = TorusPoint::from_ints(&q(), &[2, 3]).unwrap();
        assert!(trace_identity_check(&theta, &rep, 4, &[x]).unwrap().all_pass());
    }

    #[test]
    fn expansion_for_small_m() {
        let theta = LatticeAutomorphism::cyclic_shift(3);
        let rep = MonomialRep::new(vec![2, -1, 0], theta.clone()).unwrap();
        let group = SemidirectGroup::new(theta.clone(), q());
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let x = TorusPoint::random(&mut rng, &q(), 3, 5);
            let rx = rep_matrix(&rep, &group, &group.element(x.clone(), 1).unwrap()).unwrap();
            let j = rep_matrix(&rep, &group, &group.j()).unwrap();
            for m in 1..=6 {
                let prod = twisted_product(&theta, &x, m).unwrap();
                let rp = rep_matrix(&rep, &group, &group.element(prod, 0).unwrap()).unwrap();
                assert_eq!(rx.pow(m), rp.mul(&j.pow(m)), "m = {m}");
            }
        }
    }

    #[test]
    fn commutant_examples() {
        let id = LatticeAutomorphism::from_rows(&[vec![1, 0], vec![0, 1]]).unwrap();
        assert!(commutant_check(&MonomialRep::new(vec![3, 1], id).unwrap()).unwrap());
        let shift = LatticeAutomorphism::cyclic_shift(3);
        assert!(commutant_check(&MonomialRep::new(vec![0, 0, 0], shift.clone()).unwrap()).unwrap());
        assert!(commutant_check(&MonomialRep::new(vec![1, 1, 1], shift.clone()).unwrap()).unwrap());
        assert!(!commutant_check(&MonomialRep::new(vec![1, 0, 0], shift).unwrap()).unwrap());
        let (rep, _) = inversion_rep();
        assert!(!commutant_check(&rep).unwrap());
    }
}
