//! Small-integer number theory used throughout the crate.

use alloc::vec::Vec;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factorisation by trial division, primes ascending.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Factor a nonzero big integer (sign ignored). Returns `None` when a cofactor
/// above 10^12 survives trial division up to 10^6.
pub fn factor_big(n: &BigInt) -> Option<Vec<(u64, u32)>> {
    let mut n = n.abs();
    if n.is_zero() {
        return None;
    }
    let mut out = Vec::new();
    let mut d = 2u64;
    while d <= 1_000_000 {
        let bd = BigInt::from(d);
        if &bd * &bd > n {
            break;
        }
        let mut e = 0;
        while (&n % &bd).is_zero() {
            n /= &bd;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > BigInt::one() {
        let rest = n.to_u64()?;
        if rest > 1_000_000_000_000 && !is_prime(rest) {
            return None;
        }
        out.push((rest, 1));
        out.sort();
    }
    Some(out)
}

pub fn prime_divisors(n: u64) -> Vec<u64> {
    factor(n).into_iter().map(|(p, _)| p).collect()
}

pub fn euler_phi(n: u64) -> u64 {
    factor(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

pub fn mobius(n: u64) -> i64 {
    let f = factor(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
    out.sort_unstable();
    out
}

/// p-adic valuation of a positive integer.
pub fn valuation(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n > 0 && n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

pub fn valuation_big(n: &BigInt, p: u64) -> u32 {
    let mut n = n.abs();
    let bp = BigInt::from(p);
    let mut v = 0;
    while !n.is_zero() && (&n % &bp).is_zero() {
        n /= &bp;
        v += 1;
    }
    v
}

pub fn mod_mul(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut r = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mod_mul(r, b, m);
        }
        b = mod_mul(b, b, m);
        e >>= 1;
    }
    r
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn mod_inv(a: i64, m: u64) -> Option<u64> {
    let m_i = m as i128;
    let a = (a as i128).rem_euclid(m_i);
    let e = (a).extended_gcd(&m_i);
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(m_i) as u64)
}

/// Multiplicative order of `a` modulo `m` (requires `gcd(a, m) = 1`).
pub fn mult_order(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 1;
    }
    let a = a % m;
    let mut x = a;
    let mut k = 1;
    while x != 1 {
        x = mod_mul(x, a, m);
        k += 1;
    }
    k
}

/// Reduce a signed residue into `0..m`.
pub fn residue(a: i64, m: u64) -> u64 {
    (a as i128).rem_euclid(m as i128) as u64
}

/// Primes below `bound`, ascending.
pub fn primes_below(bound: u64) -> Vec<u64> {
    if bound < 3 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut sieve = alloc::vec![true; n];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i < n {
        if sieve[i] {
            let mut j = i * i;
            while j < n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(i, _)| i as u64)
        .collect()
}

/// Integer square root of a nonnegative big integer, if it is a perfect square.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

/// Squarefree part `d` and cofactor `c` with `n = d c^2` for positive `n`.
pub fn squarefree_decomposition(n: u64) -> (u64, u64) {
    let mut d = 1;
    let mut c = 1;
    for (p, e) in factor(n) {
        if e % 2 == 1 {
            d *= p;
        }
        c *= p.pow(e / 2);
    }
    (d, c)
}

/// Legendre symbol test: is `a` a nonzero square modulo the odd prime `p`?
pub fn is_square_mod(a: i64, p: u64) -> bool {
    let a = residue(a, p);
    a != 0 && mod_pow(a, (p - 1) / 2, p) == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_and_mobius() {
        assert_eq!(euler_phi(7), 6);
        assert_eq!(euler_phi(44), 20);
        assert_eq!(euler_phi(9), 6);
        assert_eq!(mobius(30), -1);
        assert_eq!(mobius(12), 0);
        assert_eq!(mobius(1), 1);
    }

    #[test]
    fn orders_and_inverses() {
        assert_eq!(mult_order(2, 7), 3);
        assert_eq!(mult_order(43, 44), 2);
        assert_eq!(mod_inv(3, 7), Some(5));
        assert_eq!(mod_inv(2, 4), None);
        assert_eq!(mod_inv(-1, 51), Some(50));
    }

    #[test]
    fn factoring() {
        assert_eq!(factor(360), alloc::vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(
            factor_big(&BigInt::from(7u64 * 169)).unwrap(),
            alloc::vec![(7, 1), (13, 2)]
        );
        assert_eq!(squarefree_decomposition(5 * 36), (5, 6));
    }
}
