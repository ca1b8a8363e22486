//! Hecke eigenvalue tables and detection of a Dirichlet character relating two of them.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::path::Path;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::curve::{count_points, ECModel};
use crate::density::prime_sieve;
use crate::error::{Error, Result};

/// `p -> a_p` with weight and level metadata.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct APTable {
    pub label: String,
    pub weight: u32,
    pub level: u64,
    values: BTreeMap<u64, BigInt>,
}

impl APTable {
    pub fn new(label: impl Into<String>, weight: u32, level: u64) -> Self {
        APTable {
            label: label.into(),
            weight,
            level,
            values: BTreeMap::new(),
        }
    }

    /// `a_p` of an elliptic curve at every odd good prime `<= x`; weight 2.
    pub fn from_curve(e: &ECModel, level: u64, x: u64, label: impl Into<String>) -> Result<Self> {
        let mut t = APTable::new(label, 2, level);
        for p in prime_sieve(x) {
            match count_points(e, p) {
                Ok(a) => {
                    t.insert(p, BigInt::from(a));
                }
                Err(Error::ExcludedPrime { .. } | Error::Unsupported(_)) => {}
                Err(other) => return Err(other),
            }
        }
        Ok(t)
    }

    pub fn insert(&mut self, p: u64, a_p: BigInt) -> Option<BigInt> {
        self.values.insert(p, a_p)
    }

    pub fn get(&self, p: u64) -> Option<&BigInt> {
        self.values.get(&p)
    }

    pub fn values(&self) -> &BTreeMap<u64, BigInt> {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Primes where `|a_p| > ceil(2 p^((k-1)/2))`. Advisory only.
    pub fn ramanujan_violations(&self) -> Vec<u64> {
        let k = self.weight.max(1);
        self.values
            .iter()
            .filter(|(&p, a)| {
                let n = BigInt::from(4) * BigInt::from(p).pow(k - 1);
                let r = n.sqrt();
                let limit = if &r * &r == n { r } else { r + 1 };
                a.abs() > limit
            })
            .map(|(&p, _)| p)
            .collect()
    }

    /// `a_p -> chi(p) a_p`.
    pub fn twisted(&self, chi: &DirichletCharacter, label: impl Into<String>) -> APTable {
        let mut t = APTable::new(label, self.weight, self.level);
        for (&p, a) in &self.values {
            t.insert(p, a * BigInt::from(chi.eval(p)));
        }
        t
    }
}

/// A character of `(Z/qZ)*` with values in `{1, -1}`, extended by zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirichletCharacter {
    modulus: u64,
    values: BTreeMap<u64, i64>,
}

fn units(q: u64) -> Vec<u64> {
    if q == 1 {
        return vec![0];
    }
    (1..q).filter(|r| r.gcd(&q) == 1).collect()
}

impl DirichletCharacter {
    pub fn trivial(q: u64) -> Self {
        DirichletCharacter {
            modulus: q,
            values: units(q).into_iter().map(|r| (r, 1)).collect(),
        }
    }

    /// Checks that `values` covers every unit class, takes values `+-1` and is multiplicative.
    pub fn from_values(q: u64, values: &[(u64, i64)]) -> Result<Self> {
        let chi = DirichletCharacter {
            modulus: q,
            values: values.iter().map(|&(r, v)| (r % q, v)).collect(),
        };
        let u = units(q);
        if chi.values.len() != u.len() || u.iter().any(|r| !chi.values.contains_key(r)) {
            return Err(Error::Contract(format!("values must cover (Z/{q}Z)* exactly")));
        }
        if chi.values.values().any(|v| v.abs() != 1) {
            return Err(Error::Contract("character values must be +-1".into()));
        }
        if !chi.is_multiplicative() {
            return Err(Error::Contract("not multiplicative".into()));
        }
        Ok(chi)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn values(&self) -> &BTreeMap<u64, i64> {
        &self.values
    }

    pub fn eval(&self, n: u64) -> i64 {
        self.values.get(&(n % self.modulus)).copied().unwrap_or(0)
    }

    /// Complex conjugate; equal to `self` for real characters.
    pub fn conjugate(&self) -> Self {
        self.clone()
    }

    pub fn is_trivial(&self) -> bool {
        self.values.values().all(|&v| v == 1)
    }

    fn is_multiplicative(&self) -> bool {
        let q = self.modulus;
        self.values.iter().all(|(&a, &va)| {
            self.values
                .iter()
                .all(|(&b, &vb)| self.values.get(&(a * b % q)) == Some(&(va * vb)))
        })
    }
}

impl fmt::Display for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(|(r, v)| format!("{r}:{v:+}")).collect();
        write!(f, "mod {} [{}]", self.modulus, parts.join(" "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TwistOutcome {
    Character(DirichletCharacter),
    NoCharacter { reason: String },
    /// Residue classes with fewer than the required number of informative primes.
    Inconclusive { missing: Vec<u64> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistReport {
    pub outcome: TwistOutcome,
    pub usable_primes: usize,
    /// `(weight of A, weight of B)` when they differ. Reported, not enforced.
    pub weight_mismatch: Option<(u32, u32)>,
}

/// Informative primes needed in every residue class.
pub const MIN_PRIMES_PER_CLASS: usize = 3;

/// Look for `chi` mod `q` with `a_p(A) = chi(p) a_p(B)` at every shared prime coprime to
/// `q` and both levels.
pub fn detect_twist_character(a: &APTable, b: &APTable, q: u64) -> Result<TwistReport> {
    if q == 0 {
        return Err(Error::Contract("modulus must be positive".into()));
    }
    let bad = q * a.level * b.level;
    let weight_mismatch = (a.weight != b.weight).then_some((a.weight, b.weight));
    let report = |outcome, usable_primes| TwistReport {
        outcome,
        usable_primes,
        weight_mismatch,
    };
    let mut chi: BTreeMap<u64, i64> = BTreeMap::new();
    let mut informative: BTreeMap<u64, usize> = units(q).into_iter().map(|r| (r, 0)).collect();
    let mut usable = 0;
    for (&p, ap) in &a.values {
        let Some(bp) = b.values.get(&p) else { continue };
        if p.gcd(&bad) != 1 {
            continue;
        }
        usable += 1;
        let r = p % q;
        if bp.is_zero() {
            if !ap.is_zero() {
                return Ok(report(
                    TwistOutcome::NoCharacter {
                        reason: format!("a_{p} = {ap} against a_{p} = 0"),
                    },
                    usable,
                ));
            }
            continue;
        }
        let v = if ap == bp {
            1
        } else if *ap == -bp {
            -1
        } else {
            return Ok(report(
                TwistOutcome::NoCharacter {
                    reason: format!("a_{p}: {ap} / {bp} is not +-1"),
                },
                usable,
            ));
        };
        if let Some(&prev) = chi.get(&r) {
            if prev != v {
                return Ok(report(
                    TwistOutcome::NoCharacter {
                        reason: format!("class {r} mod {q} has sign {prev} and {v} (at p = {p})"),
                    },
                    usable,
                ));
            }
        }
        chi.insert(r, v);
        *informative.get_mut(&r).expect("p is a unit mod q") += 1;
    }
    let missing: Vec<u64> = informative
        .iter()
        .filter(|(_, &n)| n < MIN_PRIMES_PER_CLASS)
        .map(|(&r, _)| r)
        .collect();
    if !missing.is_empty() {
        return Ok(report(TwistOutcome::Inconclusive { missing }, usable));
    }
    let candidate = DirichletCharacter {
        modulus: q,
        values: chi,
    };
    let outcome = if candidate.is_multiplicative() {
        TwistOutcome::Character(candidate)
    } else {
        TwistOutcome::NoCharacter {
            reason: format!("class signs {candidate} are not multiplicative"),
        }
    };
    Ok(report(outcome, usable))
}

fn format_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Format {
        line,
        column,
        message: message.into(),
    }
}

/// Lines `p a_p`; header tokens `#weight=k #level=N #label=...`.
pub fn parse_ap_table(text: &str) -> Result<APTable> {
    let mut t = APTable::new("", 0, 0);
    let (mut weight, mut level) = (None, None);
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        if trimmed.starts_with('#') {
            let mut col = raw.len() - raw.trim_start().len() + 1;
            for token in raw.split(' ') {
                if let Some((key, value)) = token.strip_prefix('#').and_then(|b| b.split_once('=')) {
                    let bad = || format_err(line, col, format!("bad header value {value:?}"));
                    match key {
                        "weight" => weight = Some(value.parse().map_err(|_| bad())?),
                        "level" => level = Some(value.parse().map_err(|_| bad())?),
                        "label" => t.label = value.to_string(),
                        _ => {}
                    }
                }
                col += token.len() + 1;
            }
            continue;
        }
        let (Some(w), Some(n)) = (weight, level) else {
            return Err(format_err(line, 1, "record before the #weight= #level= header"));
        };
        t.weight = w;
        t.level = n;
        let fields: Vec<&str> = raw.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(format_err(line, 1, format!("expected `p a_p`, found {} fields", fields.len())));
        }
        let p: u64 = fields[0]
            .parse()
            .map_err(|_| format_err(line, 1, format!("bad prime {:?}", fields[0])))?;
        let col = raw.find(fields[1]).map_or(1, |i| i + 1);
        let a: BigInt = fields[1]
            .parse()
            .map_err(|_| format_err(line, col, format!("bad a_p {:?}", fields[1])))?;
        if t.values.keys().next_back().is_some_and(|&last| last >= p) {
            return Err(format_err(line, 1, format!("prime {p} out of order")));
        }
        t.insert(p, a);
    }
    if let (Some(w), Some(n)) = (weight, level) {
        t.weight = w;
        t.level = n;
    }
    Ok(t)
}

pub fn write_ap_table(t: &APTable) -> String {
    let mut out = format!("#weight={} #level={}", t.weight, t.level);
    if !t.label.is_empty() {
        write!(out, " #label={}", t.label).unwrap();
    }
    out.push('\n');
    for (p, a) in &t.values {
        writeln!(out, "{p} {a}").unwrap();
    }
    out
}

pub fn read_ap_table(path: impl AsRef<Path>) -> Result<APTable> {
    parse_ap_table(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chi8() -> DirichletCharacter {
        DirichletCharacter::from_values(8, &[(1, 1), (3, -1), (5, -1), (7, 1)]).unwrap()
    }

    fn chi_minus8() -> DirichletCharacter {
        DirichletCharacter::from_values(8, &[(1, 1), (3, 1), (5, -1), (7, -1)]).unwrap()
    }

    fn level11(x: u64) -> APTable {
        APTable::from_curve(&ECModel::level_11(), 11, x, "11a").unwrap()
    }

    #[test]
    fn identical_tables_give_trivial_character() {
        let b = level11(200);
        let r = detect_twist_character(&b, &b, 1).unwrap();
        assert_eq!(r.outcome, TwistOutcome::Character(DirichletCharacter::trivial(1)));
    }

    #[test]
    fn recovers_planted_characters() {
        let b = level11(2000);
        for chi in [chi8(), chi_minus8()] {
            let a = b.twisted(&chi, "twist");
            let r = detect_twist_character(&a, &b, 8).unwrap();
            assert_eq!(r.outcome, TwistOutcome::Character(chi.clone()));
            let back = detect_twist_character(&b, &a, 8).unwrap();
            assert_eq!(back.outcome, TwistOutcome::Character(chi.conjugate()));
        }
    }

    #[test]
    fn corrupted_sign_is_rejected() {
        let b = level11(2000);
        let mut a = b.twisted(&chi8(), "twist");
        let p = 13;
        let v = a.get(p).unwrap().clone();
        a.insert(p, -v);
        assert!(matches!(
            detect_twist_character(&a, &b, 8).unwrap().outcome,
            TwistOutcome::NoCharacter { .. }
        ));
    }

    #[test]
    fn too_little_data_is_inconclusive() {
        let b = level11(30);
        let r = detect_twist_character(&b, &b, 8).unwrap();
        assert!(matches!(r.outcome, TwistOutcome::Inconclusive { .. }));
    }

    #[test]
    fn non_multiplicative_signs_are_rejected() {
        // flipping only the class of 3 breaks chi(3) chi(5) = chi(7)
        let b = level11(2000);
        let mut a = b.clone();
        for (&p, v) in b.values() {
            if p % 8 == 3 {
                a.insert(p, -v);
            }
        }
        assert!(matches!(
            detect_twist_character(&a, &b, 8).unwrap().outcome,
            TwistOutcome::NoCharacter { .. }
        ));
    }

    #[test]
    fn weight_mismatch_is_reported() {
        let b = level11(500);
        let mut a = b.clone();
        a.weight = 4;
        let r = detect_twist_character(&a, &b, 1).unwrap();
        assert_eq!(r.weight_mismatch, Some((4, 2)));
        assert!(matches!(r.outcome, TwistOutcome::Character(_)));
    }

    #[test]
    fn ramanujan_and_hasse() {
        let b = level11(3000);
        assert!(b.ramanujan_violations().is_empty());
        let mut bad = b.clone();
        // ceil(2 sqrt 3) = 4 is allowed, 5 is not
        bad.insert(3, BigInt::from(4));
        assert!(bad.ramanujan_violations().is_empty());
        bad.insert(3, BigInt::from(-5));
        assert_eq!(bad.ramanujan_violations(), vec![3]);
    }

    #[test]
    fn ap_file_round_trip() {
        let b = level11(300);
        let text = write_ap_table(&b);
        assert!(text.starts_with("#weight=2 #level=11 #label=11a\n"));
        assert_eq!(parse_ap_table(&text).unwrap(), b);
        assert!(matches!(parse_ap_table("3 1\n"), Err(Error::Format { line: 1, .. })));
        assert!(matches!(
            parse_ap_table("#weight=2 #level=11\n3 x\n"),
            Err(Error::Format { line: 2, column: 3, .. })
        ));
    }

    #[test]
    fn character_contract() {
        assert!(DirichletCharacter::from_values(8, &[(1, 1), (3, -1), (5, 1), (7, 1)]).is_err());
        assert!(DirichletCharacter::from_values(8, &[(1, 1), (3, -1)]).is_err());
        assert_eq!(chi8().eval(4), 0);
        assert_eq!(chi8().eval(11), -1);
    }
}
