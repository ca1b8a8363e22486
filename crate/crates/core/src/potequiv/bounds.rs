//! Uniform exponent bounds: how large a power can be needed to kill every root-of-unity
//! discrepancy between eigenvalues whose ratios lie in a field of bounded degree.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;

use crate::algebra::arith::{factor_u64, factorial, is_prime};

/// Largest exponent `e` such that `phi(p^e) <= degree` (0 when even `phi(p) > degree`).
pub(crate) fn max_prime_exponent(p: u64, degree: u64) -> u32 {
    if p - 1 > degree {
        return 0;
    }
    let mut e = 1u32;
    let mut phi = p - 1;
    while let Some(next) = phi.checked_mul(p) {
        if next > degree {
            break;
        }
        phi = next;
        e += 1;
    }
    e
}

/// `lcm { k >= 1 : phi(k) <= degree }`.
///
/// The lcm takes, for each prime `p`, the largest `p^e` with `phi(p^e) <= degree`:
/// any `k` divisible by `p^e` has `phi(k) >= phi(p^e)`.
pub fn exponent_bound(degree: u64) -> BigUint {
    assert!(degree >= 1, "degree bound must be positive");
    let mut m = BigUint::one();
    for p in (2..=degree + 1).filter(|&p| is_prime(p)) {
        let e = max_prime_exponent(p, degree);
        m *= BigUint::from(p).pow(e);
    }
    m
}

/// `gcd(exponent_bound(degree), l)`, computed without materializing the bound.
pub fn exponent_bound_gcd(degree: u64, l: u64) -> u64 {
    factor_u64(l)
        .into_iter()
        .map(|(p, v)| p.pow(v.min(max_prime_exponent(p, degree))))
        .product()
}

/// Whether `m` divides `exponent_bound(degree)`.
pub fn divides_exponent_bound(m: u64, degree: u64) -> bool {
    exponent_bound_gcd(degree, m) == m
}

/// Largest order of a root of unity in a field of degree at most `degree` over the rationals.
pub fn max_root_of_unity_order(degree: u64) -> u64 {
    // phi(k) >= sqrt(k/2), so the search is finite
    let limit = crate::algebra::cyclotomic::phi_search_limit(degree);
    (1..=limit)
        .rev()
        .find(|&k| crate::algebra::arith::euler_phi(k) <= degree)
        .unwrap_or(1)
}

/// The coarse `m0!` form of the bound, with `m0` a bound on the number of roots of unity.
pub fn factorial_bound(m0: u64) -> BigUint {
    factorial(m0)
}

/// `m0!` with `m0 = max_root_of_unity_order(degree)`.
pub fn factorial_exponent_bound(degree: u64) -> BigUint {
    factorial_bound(max_root_of_unity_order(degree))
}

pub(crate) fn lcm_all(values: &[u64]) -> u64 {
    values.iter().fold(1u64, |acc, &k| acc.lcm(&k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::arith::euler_phi;

    /// Oracle: enumerate every k with phi(k) <= d by brute force and take the lcm.
    fn brute_force_bound(d: u64) -> BigUint {
        let mut acc = BigUint::one();
        for k in 1..=(4 * d * d + 4) {
            if euler_phi(k) <= d {
                acc = acc.lcm(&BigUint::from(k));
            }
        }
        acc
    }

    #[test]
    fn frozen_small_bounds() {
        assert_eq!(brute_force_bound(1), BigUint::from(2u32));
        assert_eq!(brute_force_bound(2), BigUint::from(12u32));
        assert_eq!(brute_force_bound(4), BigUint::from(120u32));
        assert_eq!(exponent_bound(1), BigUint::from(2u32));
        assert_eq!(exponent_bound(2), BigUint::from(12u32));
        assert_eq!(exponent_bound(4), BigUint::from(120u32));
    }

    #[test]
    fn closed_form_matches_enumeration() {
        for d in 1..=40 {
            assert_eq!(exponent_bound(d), brute_force_bound(d), "d = {d}");
        }
    }

    #[test]
    fn gcd_shortcut_matches_bignum_gcd() {
        for d in [1u64, 2, 4, 9, 16] {
            let m = exponent_bound(d);
            for l in 1..300u64 {
                assert_eq!(BigUint::from(exponent_bound_gcd(d, l)), m.gcd(&BigUint::from(l)));
            }
        }
    }

    #[test]
    fn factorial_variant() {
        assert_eq!(max_root_of_unity_order(1), 2);
        assert_eq!(max_root_of_unity_order(2), 6);
        assert_eq!(max_root_of_unity_order(4), 12);
        assert_eq!(factorial_exponent_bound(1), exponent_bound(1));
        for d in 2..=12 {
            assert!(factorial_exponent_bound(d) > exponent_bound(d), "d = {d}");
            // the lcm bound divides the factorial bound
            assert!((factorial_exponent_bound(d) % exponent_bound(d)) == BigUint::from(0u32));
        }
    }
}
