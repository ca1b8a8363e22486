//! Per-prime Frobenius data for pairs of representations: generators, comparison and files.

mod curve;
mod format;
mod twist;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::algebra::arith::is_prime;
use crate::algebra::RatPoly;
use crate::density::prime_sieve;
use crate::error::{Error, Result};
use crate::par;
use crate::potequiv::{locally_pot_equiv, PotEquivVerdict, SemisimpleClass};

pub use curve::{count_points, within_hasse_bound, ECModel};
pub use format::{parse_frobenius_table, read_frobenius_table, write_frobenius_table, save_frobenius_table};
pub use twist::{
    detect_twist_character, parse_ap_table, read_ap_table, write_ap_table, APTable,
    DirichletCharacter, TwistOutcome, TwistReport,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeRecord {
    pub p: u64,
    /// Modulus `q` to `p mod q`.
    pub residues: BTreeMap<u64, u64>,
    pub good_reduction: bool,
}

impl PrimeRecord {
    pub fn new(p: u64, moduli: &[u64]) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Contract(format!("{p} is not prime")));
        }
        Ok(PrimeRecord {
            p,
            residues: moduli.iter().map(|&q| (q, p % q)).collect(),
            good_reduction: true,
        })
    }

    pub fn residue(&self, q: u64) -> Option<u64> {
        self.residues.get(&q).copied()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusEntry {
    pub record: PrimeRecord,
    pub charpoly1: SemisimpleClass,
    pub charpoly2: SemisimpleClass,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusTable {
    pub label1: String,
    pub label2: String,
    /// Residue moduli tagged on every record.
    pub moduli: Vec<u64>,
    degree: Option<usize>,
    entries: Vec<FrobeniusEntry>,
    excluded: Vec<(u64, String)>,
}

impl FrobeniusTable {
    pub fn new(label1: impl Into<String>, label2: impl Into<String>, moduli: Vec<u64>) -> Self {
        FrobeniusTable {
            label1: label1.into(),
            label2: label2.into(),
            moduli,
            degree: None,
            entries: Vec::new(),
            excluded: Vec::new(),
        }
    }

    /// Common degree of all entries; `None` for a table with no entries.
    pub fn degree(&self) -> Option<usize> {
        self.degree
    }

    pub(crate) fn set_degree(&mut self, n: usize) {
        self.degree = Some(n);
    }

    pub fn entries(&self) -> &[FrobeniusEntry] {
        &self.entries
    }

    pub fn excluded(&self) -> &[(u64, String)] {
        &self.excluded
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entry(&self, p: u64) -> Option<&FrobeniusEntry> {
        self.entries
            .binary_search_by_key(&p, |e| e.record.p)
            .ok()
            .map(|i| &self.entries[i])
    }

    pub fn push(
        &mut self,
        p: u64,
        charpoly1: SemisimpleClass,
        charpoly2: SemisimpleClass,
    ) -> Result<()> {
        let n = charpoly1.degree();
        if charpoly2.degree() != n || self.degree.is_some_and(|d| d != n) {
            return Err(Error::Contract(format!(
                "degree mismatch at p = {p}: table {:?}, entry {} and {}",
                self.degree,
                n,
                charpoly2.degree()
            )));
        }
        if let Some(last) = self.entries.last() {
            if last.record.p >= p {
                return Err(Error::Contract(format!(
                    "primes must increase strictly: {p} after {}",
                    last.record.p
                )));
            }
        }
        if self.excluded.iter().any(|(q, _)| *q == p) {
            return Err(Error::Contract(format!("{p} is already excluded")));
        }
        let record = PrimeRecord::new(p, &self.moduli)?;
        self.degree = Some(n);
        self.entries.push(FrobeniusEntry {
            record,
            charpoly1,
            charpoly2,
        });
        Ok(())
    }

    pub fn exclude(&mut self, p: u64, reason: impl Into<String>) -> Result<()> {
        if self.entry(p).is_some() || self.excluded.iter().any(|(q, _)| *q == p) {
            return Err(Error::Contract(format!("{p} listed twice")));
        }
        self.excluded.push((p, reason.into()));
        self.excluded.sort_by_key(|(q, _)| *q);
        Ok(())
    }
}

fn linear_power(p: u64, k: u32) -> RatPoly {
    RatPoly::linear(BigRational::from_integer(BigInt::from(p).pow(k)))
}

/// The pair `chi (+) chi` against the induction of `psi^2` for the curve `y^2 = x^3 - x`.
///
/// At inert primes (`p = 3 mod 4`) the second polynomial is `x^2 + p^2`; at split primes the
/// eigenvalues are `pi^2`, `conj(pi)^2` with `pi + conj(pi) = a_p` and `pi conj(pi) = p`, so
/// their sum is `a_p^2 - 2p`.
pub fn cm_pair_table(x: u64) -> Result<FrobeniusTable> {
    let curve = ECModel::gaussian_cm();
    let mut table = FrobeniusTable::new("chi+chi", "Ind(psi^2)", vec![4]);
    let primes = prime_sieve(x);
    let rows = par::map(&primes, |&p| -> Result<Option<(SemisimpleClass, SemisimpleClass)>> {
        if p == 2 || !curve.has_good_reduction(p) {
            return Ok(None);
        }
        let pi = p as i64;
        let c1 = SemisimpleClass::new(linear_power(p, 1).pow(2))?;
        let c2 = if p % 4 == 3 {
            SemisimpleClass::from_ints_desc(&[1, 0, pi * pi])?
        } else {
            let a = count_points(&curve, p)?;
            SemisimpleClass::from_ints_desc(&[1, -(a * a - 2 * pi), pi * pi])?
        };
        Ok(Some((c1, c2)))
    });
    for (&p, row) in primes.iter().zip(rows) {
        match row? {
            Some((c1, c2)) => table.push(p, c1, c2)?,
            None if p == 2 => table.exclude(p, "even characteristic")?,
            None => table.exclude(p, "bad reduction")?,
        }
    }
    Ok(table)
}

/// Powers of the cyclotomic character: `x - p^k1` against `x - p^k2` at every prime `<= x`.
pub fn cyclotomic_pair_table(x: u64, k1: u32, k2: u32) -> Result<FrobeniusTable> {
    let mut table = FrobeniusTable::new(format!("chi^{k1}"), format!("chi^{k2}"), Vec::new());
    for p in prime_sieve(x) {
        table.push(
            p,
            SemisimpleClass::new(linear_power(p, k1))?,
            SemisimpleClass::new(linear_power(p, k2))?,
        )?;
    }
    Ok(table)
}

/// Verdict per entry, in table (prime) order.
pub fn table_verdicts(table: &FrobeniusTable) -> Result<Vec<(u64, PotEquivVerdict)>> {
    par::map(table.entries(), |e| {
        locally_pot_equiv(&e.charpoly1, &e.charpoly2).map(|v| (e.record.p, v))
    })
    .into_iter()
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potequiv::in_y_m;

    fn class(c: &[i64]) -> SemisimpleClass {
        SemisimpleClass::from_ints_desc(c).unwrap()
    }

    #[test]
    fn cm_table_rows() {
        let t = cm_pair_table(100).unwrap();
        assert_eq!(t.excluded(), &[(2, "even characteristic".to_string())]);
        assert_eq!(t.entry(7).unwrap().charpoly1, class(&[1, -14, 49]));
        assert_eq!(t.entry(7).unwrap().charpoly2, class(&[1, 0, 49]));
        assert_eq!(t.entry(5).unwrap().charpoly2, class(&[1, 6, 25]));
        assert_eq!(t.entry(3).unwrap().charpoly2, class(&[1, 0, 9]));
        let inert = t.entries().iter().filter(|e| e.record.residue(4) == Some(3)).count();
        assert_eq!((inert, t.len() - inert), (13, 11));
    }

    #[test]
    fn cm_table_weight_consistency() {
        let t = cm_pair_table(2000).unwrap();
        for e in t.entries() {
            let p = BigInt::from(e.record.p);
            assert_eq!(e.charpoly2.charpoly().coeff(0), BigRational::from_integer(&p * &p));
        }
    }

    #[test]
    fn cm_verdicts_split_by_class() {
        let t = cm_pair_table(100).unwrap();
        for (p, v) in table_verdicts(&t).unwrap() {
            if p % 4 == 3 {
                assert_eq!(v.minimal_exponent, Some(4), "p = {p}");
            } else {
                assert!(!v.equivalent, "p = {p}");
                let e = t.entry(p).unwrap();
                for m in 1..=120 {
                    assert!(!in_y_m(&e.charpoly1, &e.charpoly2, m).unwrap());
                }
            }
        }
    }

    #[test]
    fn cyclotomic_tables() {
        let same = cyclotomic_pair_table(50, 1, 1).unwrap();
        assert!(table_verdicts(&same)
            .unwrap()
            .iter()
            .all(|(_, v)| v.minimal_exponent == Some(1)));
        let t = cyclotomic_pair_table(50, 1, 2).unwrap();
        assert_eq!(t.entry(3).unwrap().charpoly2, class(&[1, -9]));
        let t = cyclotomic_pair_table(50, 0, 2).unwrap();
        assert_eq!(t.entry(3).unwrap().charpoly1, class(&[1, -1]));
    }

    #[test]
    fn table_invariants() {
        let mut t = FrobeniusTable::new("a", "b", vec![]);
        t.push(5, class(&[1, -5]), class(&[1, -5])).unwrap();
        assert!(t.push(3, class(&[1, -3]), class(&[1, -3])).is_err());
        assert!(t.push(5, class(&[1, -5]), class(&[1, -5])).is_err());
        assert!(t.push(7, class(&[1, 0, 1]), class(&[1, 0, 1])).is_err());
        assert!(t.push(9, class(&[1, -9]), class(&[1, -9])).is_err());
        t.exclude(11, "bad").unwrap();
        assert!(t.push(11, class(&[1, -1]), class(&[1, -1])).is_err());
        assert!(t.exclude(5, "bad").is_err());
    }
}
