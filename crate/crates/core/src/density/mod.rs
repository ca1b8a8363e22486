//! Prime sieving and finite-X frequency reports.
//!
//! The reported frequency counts only primes present in the table; excluded (bad) primes are
//! in neither numerator nor denominator, approximating the natural density over unramified
//! places. No limsup claim is made.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::potequiv::PotEquivVerdict;

/// Primes `<= x` in increasing order (sieve of Eratosthenes over odd numbers).
pub fn prime_sieve(x: u64) -> Vec<u64> {
    if x < 2 {
        return Vec::new();
    }
    let n = x as usize;
    // index i stands for 2i + 1
    let mut composite = vec![false; n / 2 + 1];
    let mut i = 1;
    while (2 * i + 1) * (2 * i + 1) <= n {
        if !composite[i] {
            let p = 2 * i + 1;
            let mut j = p * p / 2;
            while j < composite.len() {
                composite[j] = true;
                j += p;
            }
        }
        i += 1;
    }
    let mut primes = vec![2];
    primes.extend(
        (1..composite.len())
            .filter(|&i| !composite[i] && 2 * i + 1 <= n)
            .map(|i| (2 * i + 1) as u64),
    );
    primes
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityReport {
    pub x: u64,
    pub total_primes: usize,
    pub hits: usize,
    pub observed: BigRational,
    pub predicted: Option<BigRational>,
    pub deviation: Option<BigRational>,
}

impl DensityReport {
    pub fn observed_f64(&self) -> f64 {
        self.observed.to_f64().unwrap_or(f64::NAN)
    }

    pub fn deviation_f64(&self) -> Option<f64> {
        self.deviation.as_ref().and_then(|d| d.to_f64())
    }
}

impl fmt::Display for DensityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "X = {}: {}/{} = {:.6}",
            self.x,
            self.hits,
            self.total_primes,
            self.observed_f64()
        )?;
        if let (Some(p), Some(d)) = (&self.predicted, self.deviation_f64()) {
            write!(f, " (predicted {p}, deviation {d:.6})")?;
        }
        Ok(())
    }
}

/// Frequency of equivalent verdicts among the table entries up to `x`.
pub fn density_report(
    x: u64,
    verdicts: &[(u64, PotEquivVerdict)],
    predicted: Option<BigRational>,
) -> Result<DensityReport> {
    if verdicts.is_empty() {
        return Err(Error::UndefinedDensity("no primes in the table".into()));
    }
    let hits = verdicts.iter().filter(|(_, v)| v.equivalent).count();
    let total = verdicts.len();
    let observed = BigRational::new(BigInt::from(hits), BigInt::from(total));
    let deviation = predicted.as_ref().map(|p| (&observed - p).abs());
    Ok(DensityReport {
        x,
        total_primes: total,
        hits,
        observed,
        predicted,
        deviation,
    })
}

/// Soft check that `|observed - predicted|` does not grow along increasing `X`, allowing
/// `noise`. Returns a warning per violation; an empty list means stable.
pub fn stabilization_warnings(reports: &[DensityReport], noise: f64) -> Vec<String> {
    reports
        .windows(2)
        .filter_map(|w| {
            let (a, b) = (w[0].deviation_f64()?, w[1].deviation_f64()?);
            (b > a + noise).then(|| {
                format!(
                    "deviation grew from {a:.4} at X = {} to {b:.4} at X = {}",
                    w[0].x, w[1].x
                )
            })
        })
        .collect()
}
