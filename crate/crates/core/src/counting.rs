//! Exact counting functions over finite fields.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::abelian::prime_factors;

fn big_pow(q: u64, e: u32) -> BigUint {
    BigUint::from(q).pow(e)
}

/// `|GL(m, q)| = Π_{i<m} (q^m - q^i)`.
pub fn gl_order(m: u32, q: u64) -> BigUint {
    let qm = big_pow(q, m);
    (0..m).map(|i| &qm - big_pow(q, i)).product()
}

/// Number of `k`-dimensional subspaces of `GF(q)^n`.
pub fn gaussian_binomial(n: u32, k: u32, q: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= big_pow(q, n - i) - 1u32;
        den *= big_pow(q, i + 1) - 1u32;
    }
    let (quot, rem) = num.div_rem(&den);
    assert!(rem.is_zero(), "q-binomial ratio must be exact");
    quot
}

pub fn smallest_prime_divisor(n: u64) -> u64 {
    prime_factors(n)[0]
}

/// `b`, the least prime dividing `n`, and `N(b)`, the number of subspaces of
/// `GF(q)^n` of dimension at most `n/2` not divisible by `b`.
pub fn count_n(n: u32, q: u64) -> (u32, BigUint) {
    let b = smallest_prime_divisor(u64::from(n)) as u32;
    let total = (1..=n / 2)
        .filter(|k| k % b != 0)
        .map(|k| gaussian_binomial(n, k, q))
        .sum();
    (b, total)
}

/// Euler's totient.
pub fn euler_phi(m: u64) -> u64 {
    prime_factors(m).iter().fold(m, |acc, &p| acc / p * (p - 1))
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(gl_order(1, 5), BigUint::from(4u32));
        assert_eq!(gl_order(2, 2), BigUint::from(6u32));
        assert_eq!(gl_order(3, 2), BigUint::from(168u32));
        assert_eq!(gaussian_binomial(2, 1, 2), BigUint::from(3u32));
        assert_eq!(gaussian_binomial(6, 3, 2), BigUint::from(1395u32));
        assert_eq!(gaussian_binomial(5, 0, 7), BigUint::one());
        assert_eq!(count_n(2, 2), (2, BigUint::from(3u32)));
        assert_eq!(count_n(3, 2), (3, BigUint::from(7u32)));
        assert_eq!(count_n(6, 2), (2, BigUint::from(1458u32)));
        assert_eq!([1, 3, 7].map(euler_phi), [1, 2, 6]);
    }
}
