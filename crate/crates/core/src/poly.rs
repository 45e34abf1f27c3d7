//! Integer cyclotomic polynomials and dense polynomial arithmetic over F_p.
//!
//! F_p polynomials are little-endian coefficient vectors with no trailing zeros;
//! the zero polynomial is the empty vector.

use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::arith::{divisors, mod_inv, mod_mul};

/// Coefficients of Φ_m, little-endian.
pub fn cyclotomic_poly(m: u64) -> Vec<i64> {
    // x^m - 1 divided by Φ_d for every proper divisor d.
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in divisors(m) {
        if d == m {
            continue;
        }
        let den = cyclotomic_poly(d);
        num = int_exact_div(&num, &den);
    }
    num
}

/// Exact division of integer polynomials by a monic divisor.
fn int_exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    debug_assert_eq!(den[dn], 1);
    let mut rem = num.to_vec();
    if rem.len() <= dn {
        return vec![0];
    }
    let mut q = vec![0i64; rem.len() - dn];
    for i in (0..q.len()).rev() {
        let c = rem[i + dn];
        q[i] = c;
        if c != 0 {
            for j in 0..=dn {
                rem[i + j] -= c * den[j];
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    q
}

pub fn fp_trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn fp_from_ints(c: &[i64], p: u64) -> Vec<u64> {
    fp_trim(c.iter().map(|&x| crate::arith::residue(x, p)).collect())
}

pub fn fp_add(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        out.push((x + y) % p);
    }
    fp_trim(out)
}

pub fn fp_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        out.push((x + p - y) % p);
    }
    fp_trim(out)
}

pub fn fp_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mod_mul(x, y, p)) % p;
        }
    }
    fp_trim(out)
}

/// Quotient and remainder; `b` must be nonzero.
pub fn fp_divrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let db = b.len() - 1;
    let inv = mod_inv(b[db] as i64, p).expect("leading coefficient invertible");
    let mut rem = a.to_vec();
    if rem.len() <= db {
        return (Vec::new(), fp_trim(rem));
    }
    let mut q = vec![0u64; rem.len() - db];
    for i in (0..q.len()).rev() {
        let c = mod_mul(rem[i + db], inv, p);
        q[i] = c;
        if c != 0 {
            for j in 0..=db {
                rem[i + j] = (rem[i + j] + p - mod_mul(c, b[j], p)) % p;
            }
        }
    }
    rem.truncate(db);
    (fp_trim(q), fp_trim(rem))
}

pub fn fp_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    fp_divrem(a, b, p).1
}

pub fn fp_monic(a: &[u64], p: u64) -> Vec<u64> {
    match a.last() {
        None => Vec::new(),
        Some(&lc) => {
            let inv = mod_inv(lc as i64, p).expect("nonzero");
            a.iter().map(|&c| mod_mul(c, inv, p)).collect()
        }
    }
}

/// Monic gcd.
pub fn fp_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = fp_trim(a.to_vec());
    let mut y = fp_trim(b.to_vec());
    while !y.is_empty() {
        let r = fp_rem(&x, &y, p);
        x = y;
        y = r;
    }
    fp_monic(&x, p)
}

pub fn fp_mulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    fp_rem(&fp_mul(a, b, p), f, p)
}

pub fn fp_powmod(base: &[u64], exp: &BigUint, f: &[u64], p: u64) -> Vec<u64> {
    let mut result = vec![1u64];
    let b = fp_rem(base, f, p);
    for i in (0..exp.bits()).rev() {
        result = fp_mulmod(&result, &result, f, p);
        if exp.bit(i) {
            result = fp_mulmod(&result, &b, f, p);
        }
    }
    fp_rem(&result, f, p)
}

/// Evaluate g(x^k) as a polynomial.
pub fn fp_compose_power(g: &[u64], k: usize) -> Vec<u64> {
    if g.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; (g.len() - 1) * k + 1];
    for (i, &c) in g.iter().enumerate() {
        out[i * k] = c;
    }
    out
}

/// Deterministic stream of pseudo-random polynomials of degree < n.
struct PolyStream {
    state: u64,
}

impl PolyStream {
    fn next(&mut self, n: usize, p: u64) -> Vec<u64> {
        let mut v = Vec::with_capacity(n);
        for _ in 0..n {
            // SplitMix64
            self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
            let mut z = self.state;
            z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
            z ^= z >> 31;
            v.push(z % p);
        }
        fp_trim(v)
    }
}

/// Split a monic squarefree polynomial whose irreducible factors all have
/// degree `d` (Cantor–Zassenhaus). Output is sorted and deterministic.
pub fn equal_degree_factor(f: &[u64], d: usize, p: u64) -> Vec<Vec<u64>> {
    let f = fp_monic(f, p);
    let deg = f.len() - 1;
    assert!(deg % d == 0, "degree not a multiple of the factor degree");
    let mut done = Vec::new();
    let mut todo = vec![f];
    let mut stream = PolyStream { state: 0x5EED ^ p ^ ((d as u64) << 32) };
    let pd = BigUint::from(p).pow(d as u32);
    let half = (&pd - BigUint::one()) >> 1;
    while let Some(g) = todo.pop() {
        let n = g.len() - 1;
        if n == d {
            done.push(g);
            continue;
        }
        loop {
            let h = stream.next(n, p);
            if h.len() < 2 {
                continue;
            }
            let t = if p == 2 {
                // absolute trace map F_{2^d} -> F_2
                let mut acc = h.clone();
                let mut pow = h.clone();
                for _ in 1..d {
                    pow = fp_mulmod(&pow, &pow, &g, p);
                    acc = fp_add(&acc, &pow, p);
                }
                acc
            } else {
                fp_sub(&fp_powmod(&h, &half, &g, p), &[1], p)
            };
            let c = fp_gcd(&t, &g, p);
            let cd = c.len().saturating_sub(1);
            if cd > 0 && cd < n {
                let (q, r) = fp_divrem(&g, &c, p);
                debug_assert!(r.is_empty());
                todo.push(c);
                todo.push(fp_monic(&q, p));
                break;
            }
        }
    }
    done.sort();
    done
}

#[cfg(test)]
fn fp_is_irreducible(f: &[u64], p: u64) -> bool {
    // x^{p^k} mod f: irreducible iff gcd(x^{p^k} - x, f) = 1 for k < deg, and = f for k = deg.
    let n = f.len() - 1;
    let x = vec![0u64, 1];
    let mut xp = x.clone();
    for k in 1..=n {
        xp = fp_powmod(&xp, &BigUint::from(p), f, p);
        let g = fp_gcd(&fp_sub(&xp, &x, p), f, p);
        if k < n && g.len() > 1 {
            return false;
        }
        if k == n {
            return g == fp_monic(f, p);
        }
    }
    false
}

pub fn fp_eval(a: &[u64], x: u64, p: u64) -> u64 {
    a.iter().rev().fold(0, |acc, &c| (mod_mul(acc, x, p) + c) % p)
}

pub fn fp_is_zero(a: &[u64]) -> bool {
    a.iter().all(|c| c.is_zero())
}

/// x^e mod (f, p) for a small exponent, used for Frobenius checks.
pub fn fp_xpow(e: u64, f: &[u64], p: u64) -> Vec<u64> {
    fp_powmod(&[0, 1], &BigUint::from(e), f, p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_poly(9), vec![1, 0, 0, 1, 0, 0, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_poly(44).len(), 21);
    }

    #[test]
    fn phi7_mod_2_splits_into_two_cubics() {
        let f = fp_from_ints(&cyclotomic_poly(7), 2);
        let facs = equal_degree_factor(&f, 3, 2);
        assert_eq!(facs, vec![vec![1, 0, 1, 1], vec![1, 1, 0, 1]]);
        for g in &facs {
            assert!(fp_is_irreducible(g, 2));
        }
    }

    #[test]
    fn phi7_mod_13_quadratics() {
        let f = fp_from_ints(&cyclotomic_poly(7), 13);
        let facs = equal_degree_factor(&f, 2, 13);
        assert_eq!(facs.len(), 3);
        let mut prod = vec![1u64];
        for g in &facs {
            assert!(fp_is_irreducible(g, 13));
            prod = fp_mul(&prod, g, 13);
        }
        assert_eq!(prod, f);
    }

    #[test]
    fn phi44_mod_89_linear() {
        let f = fp_from_ints(&cyclotomic_poly(44), 89);
        let facs = equal_degree_factor(&f, 1, 89);
        assert_eq!(facs.len(), 20);
        for g in &facs {
            assert_eq!(fp_eval(&f, (89 - g[0]) % 89, 89), 0);
        }
    }
}
