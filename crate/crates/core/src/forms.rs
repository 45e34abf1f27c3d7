//! Finite symmetric bilinear forms with values in Q/Z, optional quadratic
//! refinements in Q/2Z, and Witt classes in W(Q/Z).
//!
//! Values are stored scaled by the level N = lcm(orders): b(g_i, g_j) =
//! `bilinear[i][j]`/N mod 1 and q(g_i) = `quadratic[i]`/N mod 2.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{factor, is_square_mod, mod_inv, residue};
use crate::error::{Error, Result};
use crate::invalid;
use crate::matrix::{self, IMat};

#[derive(Clone, PartialEq, Eq)]
pub struct FiniteQuadraticForm {
    orders: Vec<u64>,
    level: u64,
    bilinear: Vec<Vec<u64>>,
    quadratic: Option<Vec<u64>>,
}

impl fmt::Debug for FiniteQuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FQF(orders={:?}, b=[", self.orders)?;
        for (i, row) in self.bilinear.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            for (j, v) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", BigRational::new((*v).into(), self.level.into()))?;
            }
        }
        write!(f, "]")?;
        if let Some(q) = &self.quadratic {
            write!(f, ", q=[")?;
            for (i, v) in q.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", BigRational::new((*v).into(), self.level.into()))?;
            }
            write!(f, "]")?;
        }
        write!(f, ")")
    }
}

fn lcm_all(xs: &[u64]) -> u64 {
    xs.iter().fold(1u64, |a, &b| a.lcm(&b))
}

/// x mod 1 (`modulus` = 1) or mod 2, scaled to an integer over `level`.
fn scaled_mod(x: &BigRational, level: u64, modulus: u64) -> Result<u64> {
    let s = x * BigRational::from_integer(level.into());
    if !s.is_integer() {
        return Err(invalid!("value {x} has denominator not dividing the level {level}"));
    }
    let m = BigInt::from(level * modulus);
    let r = ((s.to_integer() % &m) + &m) % &m;
    Ok(r.to_u64().expect("reduced"))
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

impl FiniteQuadraticForm {
    /// Builds and validates a form from exact values. Generators of order 1
    /// are dropped.
    pub fn new(
        orders: Vec<u64>,
        bilinear: &[Vec<BigRational>],
        quadratic: Option<&[BigRational]>,
    ) -> Result<Self> {
        let r = orders.len();
        if bilinear.len() != r || bilinear.iter().any(|row| row.len() != r) {
            return Err(invalid!("bilinear matrix must be {r}x{r}"));
        }
        if orders.iter().any(|&n| n == 0) {
            return Err(invalid!("generator orders must be positive"));
        }
        let level = lcm_all(&orders);
        let mut b = vec![vec![0u64; r]; r];
        for i in 0..r {
            for j in 0..r {
                if bilinear[i][j] != bilinear[j][i] {
                    return Err(invalid!("bilinear matrix not symmetric"));
                }
                let v = scaled_mod(&bilinear[i][j], level, 1)?;
                if mulmod(v, orders[i], level) != 0 {
                    return Err(invalid!("b(g{i}, g{j}) not killed by the order of g{i}"));
                }
                b[i][j] = v;
            }
        }
        let q = match quadratic {
            None => None,
            Some(qs) => {
                if qs.len() != r {
                    return Err(invalid!("need {r} quadratic values"));
                }
                let mut out = Vec::with_capacity(r);
                for i in 0..r {
                    let v = scaled_mod(&qs[i], level, 2)?;
                    if v % level != b[i][i] {
                        return Err(invalid!("q(g{i}) and b(g{i}, g{i}) disagree mod 1"));
                    }
                    let n = orders[i];
                    if mulmod(mulmod(n, n, 2 * level), v, 2 * level) != 0 {
                        return Err(invalid!("q(g{i}) not well defined on Z/{n}"));
                    }
                    out.push(v);
                }
                Some(out)
            }
        };
        let form = FiniteQuadraticForm { orders, level, bilinear: b, quadratic: q };
        Ok(form.drop_trivial())
    }

    pub fn trivial() -> Self {
        FiniteQuadraticForm { orders: Vec::new(), level: 1, bilinear: Vec::new(), quadratic: Some(Vec::new()) }
    }

    fn drop_trivial(self) -> Self {
        let keep: Vec<usize> = (0..self.orders.len()).filter(|&i| self.orders[i] > 1).collect();
        if keep.len() == self.orders.len() {
            return self;
        }
        let gens: Vec<Vec<u64>> = keep
            .iter()
            .map(|&i| {
                let mut v = vec![0u64; self.orders.len()];
                v[i] = 1;
                v
            })
            .collect();
        let orders = keep.iter().map(|&i| self.orders[i]).collect();
        self.restrict(&gens, orders)
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn size(&self) -> u64 {
        self.orders.iter().product()
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn is_trivial(&self) -> bool {
        self.orders.is_empty()
    }

    pub fn has_quadratic(&self) -> bool {
        self.quadratic.is_some()
    }

    /// b(g_i, g_j) as a reduced fraction in [0, 1).
    pub fn bilinear_entry(&self, i: usize, j: usize) -> BigRational {
        BigRational::new(self.bilinear[i][j].into(), self.level.into())
    }

    /// q(g_i) as a reduced fraction in [0, 2).
    pub fn quadratic_entry(&self, i: usize) -> Option<BigRational> {
        self.quadratic.as_ref().map(|q| BigRational::new(q[i].into(), self.level.into()))
    }

    fn reduce(&self, x: &[u64]) -> Vec<u64> {
        x.iter().zip(&self.orders).map(|(a, n)| a % n).collect()
    }

    /// N·b(x, y) mod N.
    pub fn b_scaled(&self, x: &[u64], y: &[u64]) -> u64 {
        let n = self.level;
        let mut acc = 0u64;
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj != 0 {
                    acc = (acc + mulmod(mulmod(xi, yj, n), self.bilinear[i][j], n)) % n;
                }
            }
        }
        acc
    }

    /// N·q(x) mod 2N, or N·b(x, x) when no refinement is stored.
    pub fn q_scaled(&self, x: &[u64]) -> u64 {
        let Some(q) = &self.quadratic else {
            return self.b_scaled(x, x);
        };
        let n2 = 2 * self.level;
        let mut acc = 0u64;
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            acc = (acc + mulmod(mulmod(xi, xi, n2), q[i], n2)) % n2;
            for (j, &xj) in x.iter().enumerate().skip(i + 1) {
                if xj != 0 {
                    let t = mulmod(mulmod(xi, xj, n2), self.bilinear[i][j], n2);
                    acc = (acc + 2 * t) % n2;
                }
            }
        }
        acc
    }

    pub fn bilinear_value(&self, x: &[u64], y: &[u64]) -> BigRational {
        BigRational::new(self.b_scaled(x, y).into(), self.level.into())
    }

    pub fn quadratic_value(&self, x: &[u64]) -> Option<BigRational> {
        self.quadratic.as_ref()?;
        Some(BigRational::new(self.q_scaled(x).into(), self.level.into()))
    }

    pub fn element_order(&self, x: &[u64]) -> u64 {
        x.iter()
            .zip(&self.orders)
            .fold(1u64, |acc, (&a, &n)| acc.lcm(&(n / a.gcd(&n))))
    }

    /// All elements in mixed-radix order (first coordinate fastest).
    pub fn elements(&self) -> ElementIter<'_> {
        ElementIter { orders: &self.orders, next: Some(vec![0; self.orders.len()]) }
    }

    pub fn negate(&self) -> Self {
        let n = self.level;
        FiniteQuadraticForm {
            orders: self.orders.clone(),
            level: n,
            bilinear: self
                .bilinear
                .iter()
                .map(|row| row.iter().map(|&v| (n - v) % n).collect())
                .collect(),
            quadratic: self.quadratic.as_ref().map(|q| q.iter().map(|&v| (2 * n - v) % (2 * n)).collect()),
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let level = self.level.lcm(&other.level);
        let (s1, s2) = (level / self.level, level / other.level);
        let r = self.rank() + other.rank();
        let mut b = vec![vec![0u64; r]; r];
        for (i, row) in self.bilinear.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                b[i][j] = v * s1;
            }
        }
        let o = self.rank();
        for (i, row) in other.bilinear.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                b[o + i][o + j] = v * s2;
            }
        }
        let quadratic = match (&self.quadratic, &other.quadratic) {
            (Some(a), Some(c)) => Some(a.iter().map(|&v| v * s1).chain(c.iter().map(|&v| v * s2)).collect()),
            _ => None,
        };
        let mut orders = self.orders.clone();
        orders.extend_from_slice(&other.orders);
        FiniteQuadraticForm { orders, level, bilinear: b, quadratic }
    }

    /// Form on the subgroup generated by independent `gens` with the given orders.
    pub fn restrict(&self, gens: &[Vec<u64>], orders: Vec<u64>) -> Self {
        let gens: Vec<Vec<u64>> = gens.iter().map(|g| self.reduce(g)).collect();
        let level = lcm_all(&orders);
        let n = self.level;
        let rescale = |v: u64, modulus: u64| -> u64 {
            // v/N as a value over `level`
            let num = v as u128 * level as u128;
            debug_assert_eq!(num % n as u128, 0, "value not representable at the new level");
            ((num / n as u128) % (modulus * level) as u128) as u64
        };
        let r = gens.len();
        let mut b = vec![vec![0u64; r]; r];
        for i in 0..r {
            for j in 0..r {
                b[i][j] = rescale(self.b_scaled(&gens[i], &gens[j]), 1);
            }
        }
        let quadratic = self
            .quadratic
            .as_ref()
            .map(|_| gens.iter().map(|g| rescale(self.q_scaled(g), 2)).collect());
        FiniteQuadraticForm { orders, level, bilinear: b, quadratic }
    }

    fn relations(&self) -> IMat {
        let r = self.rank();
        (0..r)
            .map(|i| (0..r).map(|j| BigInt::from(if i == j { self.orders[i] } else { 0 })).collect())
            .collect()
    }

    /// The form on A/B for lattices Z^r ⊇ A ⊇ B ⊇ relations, given by generators.
    /// The caller guarantees the values descend (B ⊆ A^⊥ ∩ isotropic).
    pub fn subquotient(&self, a_gens: &[Vec<BigInt>], b_gens: &[Vec<BigInt>]) -> Result<Self> {
        let r = self.rank();
        if r == 0 {
            return Ok(self.clone());
        }
        let mut a_all: IMat = a_gens.to_vec();
        a_all.extend(self.relations());
        let a = matrix::hnf_rows(&a_all);
        if a.len() != r {
            return Err(Error::Internal("subgroup lattice not of full rank".into()));
        }
        let a_inv = matrix::inverse(&a).ok_or_else(|| Error::Internal("singular basis".into()))?;
        let mut b_all: IMat = b_gens.to_vec();
        b_all.extend(self.relations());
        let coords: IMat = b_all
            .iter()
            .map(|row| {
                (0..r)
                    .map(|j| {
                        let v = (0..r).fold(BigRational::zero(), |acc, i| {
                            acc + BigRational::from_integer(row[i].clone()) * &a_inv[i][j]
                        });
                        if v.is_integer() {
                            Ok(v.to_integer())
                        } else {
                            Err(Error::Internal("B is not contained in A".into()))
                        }
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        let s = matrix::smith(&coords);
        let v_inv = matrix::inverse(&s.v).ok_or_else(|| Error::Internal("V singular".into()))?;
        let mut gens = Vec::new();
        let mut orders = Vec::new();
        for (k, d) in s.diag.iter().enumerate() {
            let d = d.to_u64().ok_or_else(|| Error::Internal("infinite quotient".into()))?;
            if d <= 1 {
                continue;
            }
            let row: Vec<u64> = (0..r)
                .map(|j| {
                    let v = (0..r).fold(BigInt::zero(), |acc, i| acc + v_inv[k][i].to_integer() * &a[i][j]);
                    residue_big(&v, self.orders[j])
                })
                .collect();
            gens.push(row);
            orders.push(d);
        }
        Ok(self.restrict(&gens, orders))
    }

    /// Orthogonal p-primary parts, p ascending, with their generators in the
    /// coordinates of `self`.
    pub fn p_parts(&self) -> Vec<(u64, FiniteQuadraticForm, Vec<Vec<u64>>)> {
        let mut primes: Vec<u64> = self.orders.iter().flat_map(|&n| factor(n)).map(|(p, _)| p).collect();
        primes.sort_unstable();
        primes.dedup();
        primes
            .into_iter()
            .map(|p| {
                let mut gens = Vec::new();
                let mut orders = Vec::new();
                for (i, &n) in self.orders.iter().enumerate() {
                    let mut pa = 1;
                    while n % (pa * p) == 0 {
                        pa *= p;
                    }
                    if pa > 1 {
                        let mut g = vec![0u64; self.rank()];
                        g[i] = n / pa;
                        gens.push(g);
                        orders.push(pa);
                    }
                }
                let form = self.restrict(&gens, orders);
                (p, form, gens)
            })
            .collect()
    }

    pub fn p_primary_decompose(&self) -> Vec<(u64, FiniteQuadraticForm)> {
        self.p_parts().into_iter().map(|(p, f, _)| (p, f)).collect()
    }

    /// Length: minimal number of generators, max over p of the p-rank.
    pub fn length(&self) -> usize {
        self.p_parts().iter().map(|(_, f, _)| f.rank()).max().unwrap_or(0)
    }

    /// Whether b is nondegenerate (no nonzero x with b(x, ·) = 0).
    pub fn is_nondegenerate(&self) -> bool {
        let r = self.rank();
        let basis: Vec<Vec<u64>> = (0..r)
            .map(|i| {
                let mut v = vec![0u64; r];
                v[i] = 1;
                v
            })
            .collect();
        self.elements()
            .skip(1)
            .all(|x| basis.iter().any(|g| self.b_scaled(&x, g) != 0))
    }

    /// A nonzero element of prime order with b(x, x) = 0 (or q(x) = 0 when
    /// `quadratic` and a refinement is stored).
    pub fn find_isotropic(&self, quadratic: bool) -> Option<Vec<u64>> {
        let use_q = quadratic && self.quadratic.is_some();
        for x in self.elements().skip(1) {
            let ord = self.element_order(&x);
            let p = factor(ord)[0].0;
            let y: Vec<u64> = self.reduce(&x.iter().map(|&a| a * (ord / p)).collect::<Vec<_>>());
            let iso = if use_q { self.q_scaled(&y) == 0 } else { self.b_scaled(&y, &y) == 0 };
            if iso {
                return Some(y);
            }
        }
        None
    }

    /// x^⊥/⟨x⟩ for an isotropic x of prime order.
    pub fn reduce_by(&self, x: &[u64]) -> Result<Self> {
        let r = self.rank();
        let ord = self.element_order(x);
        if !crate::arith::is_prime(ord) {
            return Err(invalid!("reduction needs an element of prime order"));
        }
        let p = ord;
        // b(x, g_j) = c_j / p
        let c: Vec<u64> = (0..r)
            .map(|j| {
                let mut g = vec![0u64; r];
                g[j] = 1;
                self.b_scaled(x, &g) / (self.level / p)
            })
            .collect();
        let a_gens: Vec<Vec<BigInt>> = match c.iter().position(|&v| v % p != 0) {
            None => return Err(invalid!("form is degenerate at the reducing element")),
            Some(j0) => {
                let inv = mod_inv(c[j0] as i64, p).expect("unit mod p");
                let mut gens = Vec::with_capacity(r);
                for j in 0..r {
                    let mut v = vec![BigInt::zero(); r];
                    if j == j0 {
                        v[j0] = BigInt::from(p);
                    } else {
                        v[j] = BigInt::one();
                        v[j0] = -BigInt::from(mulmod(c[j], inv, p));
                    }
                    gens.push(v);
                }
                gens
            }
        };
        let b_gens = vec![x.iter().map(|&a| BigInt::from(a)).collect()];
        self.subquotient(&a_gens, &b_gens)
    }

    /// Anisotropic representative of the Witt class (bilinear isotropy).
    pub fn anisotropic_kernel(&self) -> Result<Self> {
        let mut f = self.clone();
        while let Some(x) = f.find_isotropic(false) {
            f = f.reduce_by(&x)?;
        }
        Ok(f)
    }
}

fn residue_big(v: &BigInt, n: u64) -> u64 {
    let nb = BigInt::from(n);
    (((v % &nb) + &nb) % &nb).to_u64().expect("reduced")
}

pub struct ElementIter<'a> {
    orders: &'a [u64],
    next: Option<Vec<u64>>,
}

impl Iterator for ElementIter<'_> {
    type Item = Vec<u64>;
    fn next(&mut self) -> Option<Vec<u64>> {
        let cur = self.next.take()?;
        let mut nxt = cur.clone();
        let mut i = 0;
        while i < nxt.len() {
            nxt[i] += 1;
            if nxt[i] < self.orders[i] {
                break;
            }
            nxt[i] = 0;
            i += 1;
        }
        if i < nxt.len() {
            self.next = Some(nxt);
        }
        Some(cur)
    }
}

/// (Z/p^k, (a/p^k)·xy) with its unique quadratic refinement for odd p.
pub fn standard_form(p: u64, k: u32, a: i64) -> Result<FiniteQuadraticForm> {
    if !crate::arith::is_prime(p) || k == 0 {
        return Err(invalid!("need a prime p and k >= 1"));
    }
    if residue(a, p) == 0 {
        return Err(invalid!("{a} is not coprime to {p}"));
    }
    let n = p.pow(k);
    let a = residue(a, n);
    let b = BigRational::new(a.into(), n.into());
    let q = if p == 2 {
        None
    } else {
        let c = if a % 2 == 0 { a } else { a + n };
        Some(vec![BigRational::new(c.into(), n.into())])
    };
    FiniteQuadraticForm::new(vec![n], &[vec![b]], q.as_deref())
}

/// Anisotropic odd-p data: rank 0, 1 or 2; for rank 1 the Legendre symbol of a
/// in (Z/p, a/p). Rank-2 anisotropic forms form a single class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OddWittPart {
    pub p: u64,
    pub rank: u8,
    pub legendre: i8,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WittClass {
    /// Nonzero odd components, p ascending.
    pub odd: Vec<OddWittPart>,
    /// Anisotropic representative of the 2-part; not canonical.
    pub two: Option<FiniteQuadraticForm>,
}

impl WittClass {
    pub fn is_zero(&self) -> bool {
        self.odd.is_empty() && self.two.is_none()
    }
}

fn odd_label(p: u64, f: &FiniteQuadraticForm) -> Result<OddWittPart> {
    if f.orders.iter().any(|&n| n != p) || f.rank() > 2 {
        return Err(Error::Internal(alloc::format!("anisotropic {p}-part is not elementary of rank <= 2")));
    }
    let legendre = if f.rank() == 1 {
        let a = f.bilinear[0][0] / (f.level / p);
        if is_square_mod(a as i64, p) { 1 } else { -1 }
    } else {
        0
    };
    Ok(OddWittPart { p, rank: f.rank() as u8, legendre })
}

/// Witt class in W(Q/Z) by sublagrangian reduction of each p-primary part.
pub fn witt_class(f: &FiniteQuadraticForm) -> Result<WittClass> {
    let mut odd = Vec::new();
    let mut two = None;
    let mut by_p: BTreeMap<u64, FiniteQuadraticForm> = BTreeMap::new();
    for (p, part) in f.p_primary_decompose() {
        by_p.insert(p, part);
    }
    for (p, part) in by_p {
        let k = part.anisotropic_kernel()?;
        if k.is_trivial() {
            continue;
        }
        if p == 2 {
            two = Some(k);
        } else {
            odd.push(odd_label(p, &k)?);
        }
    }
    Ok(WittClass { odd, two })
}

/// Equality in W(Q/Z): f ⊕ (−g) reduces to zero.
pub fn witt_equal(f: &FiniteQuadraticForm, g: &FiniteQuadraticForm) -> Result<bool> {
    Ok(witt_class(&f.direct_sum(&g.negate()))?.is_zero())
}

/// An isometry f → g as images of the generators of f, found by
/// backtracking over elements of g with matching order and values.
/// Uses quadratic values when both forms carry them.
pub fn find_isometry(f: &FiniteQuadraticForm, g: &FiniteQuadraticForm) -> Option<Vec<Vec<u64>>> {
    if f.size() != g.size() {
        return None;
    }
    let use_q = f.quadratic.is_some() && g.quadratic.is_some();
    let level = f.level.lcm(&g.level);
    let (sf, sg) = (level / f.level, level / g.level);
    let elements: Vec<Vec<u64>> = g.elements().collect();
    let self_value = |form: &FiniteQuadraticForm, x: &[u64], s: u64| {
        if use_q { form.q_scaled(x) * s } else { form.b_scaled(x, x) * s }
    };
    let r = f.rank();
    let gens_f: Vec<Vec<u64>> = (0..r)
        .map(|i| {
            let mut v = vec![0u64; r];
            v[i] = 1;
            v
        })
        .collect();
    let candidates: Vec<Vec<usize>> = (0..r)
        .map(|i| {
            let want = self_value(f, &gens_f[i], sf);
            elements
                .iter()
                .enumerate()
                .filter(|(_, y)| g.element_order(y) == f.orders[i] && self_value(g, y, sg) == want)
                .map(|(k, _)| k)
                .collect()
        })
        .collect();
    let mut chosen: Vec<usize> = Vec::with_capacity(r);
    fn backtrack(
        i: usize,
        chosen: &mut Vec<usize>,
        candidates: &[Vec<usize>],
        ok: &dyn Fn(usize, usize, usize, usize) -> bool,
    ) -> bool {
        if i == candidates.len() {
            return true;
        }
        for &c in &candidates[i] {
            if chosen.iter().enumerate().all(|(j, &cj)| ok(i, c, j, cj)) {
                chosen.push(c);
                if backtrack(i + 1, chosen, candidates, ok) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    let ok = |i: usize, c: usize, j: usize, cj: usize| {
        f.b_scaled(&gens_f[i], &gens_f[j]) * sf == g.b_scaled(&elements[c], &elements[cj]) * sg
    };
    if backtrack(0, &mut chosen, &candidates, &ok) {
        Some(chosen.into_iter().map(|k| elements[k].clone()).collect())
    } else {
        None
    }
}
