//! Exact arithmetic in Q(ζ_m) on the power basis 1, ζ, …, ζ^{φ(m)−1}.
//!
//! Elements carry a shared handle to their field. Coefficients are held as an
//! integer numerator vector over one positive common denominator, always in
//! lowest terms.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{euler_phi, gcd, mobius, mod_inv};
use crate::error::{Error, Result};
use crate::invalid;
use crate::poly::cyclotomic_poly;

/// Precomputed tables for Q(ζ_m), m ≥ 3 and m ≢ 2 (mod 4).
pub struct CyclotomicField {
    m: u64,
    phi: usize,
    units: Vec<u64>,
    /// `reduce[t]` = coordinates of ζ^t, t < m.
    reduce: Vec<Vec<i64>>,
    /// `trace[t]` = Tr(ζ^t).
    trace: Vec<i64>,
    /// Minimal polynomial Ψ_m of ζ + ζ^{-1}, little-endian.
    psi: Vec<BigInt>,
    /// V_t(w) with 2cos(tθ) = V_t(2cosθ), for t < φ.
    chebyshev: Vec<Vec<BigInt>>,
    /// k in [1, m/2) coprime to m, ascending: embedding ζ ↦ e^{2πik/m}.
    real_embeddings: Vec<u64>,
    /// Isolating intervals [lo, hi]·2^{-ISO_BITS} for 2cos(2πk/m), one per
    /// real embedding; `lo == hi` only for a rational root.
    isolating: Vec<(BigInt, BigInt)>,
}

impl fmt::Debug for CyclotomicField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(zeta_{})", self.m)
    }
}

const ISO_BITS: u32 = 40;

/// Numerator of the dyadic rational with denominator 2^ISO_BITS just below
/// (`up = false`) or above `x`.
fn dyadic(x: f64, up: bool) -> BigInt {
    let scaled = x * (1u64 << ISO_BITS) as f64;
    let v = if up { libm::ceil(scaled) } else { libm::floor(scaled) };
    BigInt::from(v as i64)
}

/// Sign of poly(X / 2^e) for integer X, computed exactly.
fn sign_at_dyadic(poly: &[BigInt], x: &BigInt, e: u32) -> i8 {
    // Horner on Σ c_i X^i 2^{e(d−i)}
    let acc = poly
        .iter()
        .rev()
        .enumerate()
        .fold(BigInt::zero(), |acc, (j, c)| acc * x + (c << (e as usize * j)));
    match acc.sign() {
        num_bigint::Sign::Plus => 1,
        num_bigint::Sign::Minus => -1,
        num_bigint::Sign::NoSign => 0,
    }
}

/// Exact range enclosure of Σ a_i x^i over x ∈ [xl, xh]·2^{-e}, returned
/// scaled by 2^{e·deg}.
fn enclose(poly: &[BigInt], xl: &BigInt, xh: &BigInt, e: u32) -> (BigInt, BigInt) {
    let mut lo = BigInt::zero();
    let mut hi = BigInt::zero();
    for (j, c) in poly.iter().rev().enumerate() {
        if j > 0 {
            let p = [&lo * xl, &lo * xh, &hi * xl, &hi * xh];
            lo = p.iter().min().cloned().expect("four products");
            hi = p.iter().max().cloned().expect("four products");
        }
        let term = c << (e as usize * j);
        lo += &term;
        hi += term;
    }
    (lo, hi)
}

impl CyclotomicField {
    pub fn new(m: u64) -> Result<Arc<Self>> {
        if m < 3 || m % 4 == 2 {
            return Err(invalid!("Q(zeta_m) needs m >= 3 with m != 2 mod 4, got {m}"));
        }
        let phi = euler_phi(m) as usize;
        let cyc = cyclotomic_poly(m);
        let mut reduce = Vec::with_capacity(m as usize);
        let mut cur = vec![0i64; phi];
        cur[0] = 1;
        for _ in 0..m {
            reduce.push(cur.clone());
            let top = cur[phi - 1];
            let mut next = vec![0i64; phi];
            for i in (1..phi).rev() {
                next[i] = cur[i - 1];
            }
            for i in 0..phi {
                next[i] -= top * cyc[i];
            }
            cur = next;
        }
        let trace = (0..m)
            .map(|t| {
                let g = gcd(t, m);
                let d = m / g;
                mobius(d) * (phi as i64) / euler_phi(d) as i64
            })
            .collect();
        let units: Vec<u64> = (1..m).filter(|&k| gcd(k, m) == 1).collect();

        let half = phi / 2;
        let mut chebyshev: Vec<Vec<BigInt>> = Vec::with_capacity(phi.max(2));
        chebyshev.push(vec![BigInt::from(2)]);
        chebyshev.push(vec![BigInt::zero(), BigInt::one()]);
        for t in 2..phi.max(2) {
            let mut next = vec![BigInt::zero(); t + 1];
            for (i, c) in chebyshev[t - 1].iter().enumerate() {
                next[i + 1] += c;
            }
            for (i, c) in chebyshev[t - 2].iter().enumerate() {
                next[i] -= c;
            }
            chebyshev.push(next);
        }
        let mut psi = vec![BigInt::zero(); half + 1];
        psi[0] += cyc[half];
        for j in 1..=half {
            for (i, c) in chebyshev[j].iter().enumerate() {
                psi[i] += c * cyc[half + j];
            }
        }

        let real_embeddings: Vec<u64> = units.iter().copied().filter(|&k| 2 * k < m).collect();
        let approx: Vec<f64> = real_embeddings
            .iter()
            .map(|&k| 2.0 * libm::cos(2.0 * core::f64::consts::PI * k as f64 / m as f64))
            .collect();
        let mut gap = 1.0f64;
        for i in 0..approx.len() {
            for j in (i + 1)..approx.len() {
                gap = gap.min((approx[i] - approx[j]).abs());
            }
        }
        let radius = gap / 4.0;
        let mut isolating = Vec::with_capacity(approx.len());
        for &w in &approx {
            let lo = dyadic(w - radius, false);
            let hi = dyadic(w + radius, true);
            let (slo, shi) = (sign_at_dyadic(&psi, &lo, ISO_BITS), sign_at_dyadic(&psi, &hi, ISO_BITS));
            if slo == 0 {
                isolating.push((lo.clone(), lo));
            } else if shi == 0 {
                isolating.push((hi.clone(), hi));
            } else if slo != shi {
                isolating.push((lo, hi));
            } else {
                return Err(Error::Internal(alloc::format!(
                    "root isolation for Psi_{m} failed near {w}"
                )));
            }
        }
        Ok(Arc::new(CyclotomicField {
            m,
            phi,
            units,
            reduce,
            trace,
            psi,
            chebyshev,
            real_embeddings,
            isolating,
        }))
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn degree(&self) -> usize {
        self.phi
    }

    pub fn units(&self) -> &[u64] {
        &self.units
    }

    /// Residues k of the real embeddings, in the order used by `embedding_signs`.
    pub fn real_embeddings(&self) -> &[u64] {
        &self.real_embeddings
    }

    pub fn trace_of_zeta_power(&self, t: i64) -> i64 {
        self.trace[crate::arith::residue(t, self.m) as usize]
    }

    pub fn zeta_power_coords(&self, t: i64) -> &[i64] {
        &self.reduce[crate::arith::residue(t, self.m) as usize]
    }

    /// Minimal polynomial of ζ + ζ^{-1}.
    pub fn psi(&self) -> &[BigInt] {
        &self.psi
    }
}

#[derive(Clone)]
pub struct CyclotomicElement {
    field: Arc<CyclotomicField>,
    num: Vec<BigInt>,
    den: BigInt,
}

impl fmt::Debug for CyclotomicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(zeta_{})[", self.field.m)?;
        for (i, c) in self.coeffs().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl PartialEq for CyclotomicElement {
    fn eq(&self, other: &Self) -> bool {
        self.field.m == other.field.m && self.num == other.num && self.den == other.den
    }
}

impl Eq for CyclotomicElement {}

impl CyclotomicElement {
    fn normalized(field: Arc<CyclotomicField>, mut num: Vec<BigInt>, mut den: BigInt) -> Self {
        debug_assert!(!den.is_zero());
        if den.is_negative() {
            den = -den;
            for c in num.iter_mut() {
                *c = -&*c;
            }
        }
        let mut g = den.clone();
        for c in &num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if !g.is_one() {
            for c in num.iter_mut() {
                *c = &*c / &g;
            }
            den /= &g;
        }
        CyclotomicElement { field, num, den }
    }

    pub fn zero(field: &Arc<CyclotomicField>) -> Self {
        CyclotomicElement { field: field.clone(), num: vec![BigInt::zero(); field.phi], den: BigInt::one() }
    }

    pub fn from_integer(field: &Arc<CyclotomicField>, n: impl Into<BigInt>) -> Self {
        let mut x = Self::zero(field);
        x.num[0] = n.into();
        x
    }

    pub fn one(field: &Arc<CyclotomicField>) -> Self {
        Self::from_integer(field, 1)
    }

    pub fn from_rational(field: &Arc<CyclotomicField>, q: &BigRational) -> Self {
        let mut num = vec![BigInt::zero(); field.phi];
        num[0] = q.numer().clone();
        Self::normalized(field.clone(), num, q.denom().clone())
    }

    /// ζ^t for any integer t.
    pub fn zeta_pow(field: &Arc<CyclotomicField>, t: i64) -> Self {
        let num = field.zeta_power_coords(t).iter().map(|&c| BigInt::from(c)).collect();
        CyclotomicElement { field: field.clone(), num, den: BigInt::one() }
    }

    /// Σ c_t ζ^t over the exponents given (any length; reduced mod Φ_m).
    pub fn from_exponent_coeffs(field: &Arc<CyclotomicField>, coeffs: &[i64]) -> Self {
        let mut num = vec![BigInt::zero(); field.phi];
        for (t, &c) in coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (i, &r) in field.zeta_power_coords(t as i64).iter().enumerate() {
                if r != 0 {
                    num[i] += BigInt::from(c * r);
                }
            }
        }
        CyclotomicElement { field: field.clone(), num, den: BigInt::one() }
    }

    pub fn from_coeffs(field: &Arc<CyclotomicField>, coeffs: &[BigRational]) -> Result<Self> {
        if coeffs.len() != field.phi {
            return Err(invalid!("expected {} coefficients, got {}", field.phi, coeffs.len()));
        }
        let den = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = coeffs.iter().map(|c| c.numer() * (&den / c.denom())).collect();
        Ok(Self::normalized(field.clone(), num, den))
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn m(&self) -> u64 {
        self.field.m
    }

    pub fn coeffs(&self) -> Vec<BigRational> {
        self.num
            .iter()
            .map(|c| BigRational::new(c.clone(), self.den.clone()))
            .collect()
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_real(&self) -> bool {
        self.conjugate() == *self
    }

    /// The rational value if the element lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.num[1..].iter().all(Zero::is_zero) {
            Some(BigRational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    fn same_field(&self, other: &Self) {
        assert_eq!(self.field.m, other.field.m, "elements of different cyclotomic fields");
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        let num = self.num.iter().map(|c| c * q.numer()).collect();
        Self::normalized(self.field.clone(), num, &self.den * q.denom())
    }

    fn reduce_exponents(field: &Arc<CyclotomicField>, by_exp: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); field.phi];
        for (t, c) in by_exp.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (i, &r) in field.reduce[t % field.m as usize].iter().enumerate() {
                if r != 0 {
                    out[i] += c * r;
                }
            }
        }
        out
    }

    /// Image under ζ ↦ ζ^k. Errors unless gcd(k, m) = 1.
    pub fn galois(&self, k: i64) -> Result<Self> {
        let m = self.field.m;
        let k = crate::arith::residue(k, m);
        if gcd(k, m) != 1 {
            return Err(invalid!("{k} is not a unit modulo {m}"));
        }
        Ok(self.galois_unit(k))
    }

    fn galois_unit(&self, k: u64) -> Self {
        let m = self.field.m as usize;
        let mut by_exp = vec![BigInt::zero(); m];
        for (t, c) in self.num.iter().enumerate() {
            by_exp[(t * k as usize) % m] += c;
        }
        let num = Self::reduce_exponents(&self.field, &by_exp);
        CyclotomicElement { field: self.field.clone(), num, den: self.den.clone() }
    }

    pub fn conjugate(&self) -> Self {
        self.galois_unit(self.field.m - 1)
    }

    pub fn trace(&self) -> BigRational {
        let t: BigInt = self
            .num
            .iter()
            .zip(&self.field.trace)
            .map(|(c, &tr)| c * tr)
            .sum();
        BigRational::new(t, self.den.clone())
    }

    /// Product of all Galois conjugates except the identity.
    fn conjugate_product(&self) -> Self {
        let mut acc = Self::one(&self.field);
        for &k in &self.field.units {
            if k != 1 {
                acc = &acc * &self.galois_unit(k);
            }
        }
        acc
    }

    pub fn norm(&self) -> BigRational {
        let full = &self.conjugate_product() * self;
        full.as_rational().expect("norm lies in Q")
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(invalid!("inverse of zero"));
        }
        let rest = self.conjugate_product();
        let n = (&rest * self).as_rational().expect("norm lies in Q");
        Ok(rest.scale(&n.recip()))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one(&self.field);
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            e >>= 1;
            if e > 0 {
                b = &b * &b;
            }
        }
        Ok(acc)
    }

    /// Integer polynomial A with 2·den·x = A(ζ + ζ^{-1}), valid for real x.
    fn real_polynomial(&self) -> Vec<BigInt> {
        let f = &self.field;
        let mut out = vec![BigInt::zero(); f.phi.max(1)];
        for (t, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (i, v) in f.chebyshev[t].iter().enumerate() {
                out[i] += c * v;
            }
        }
        while out.len() > 1 && out.last().is_some_and(Zero::is_zero) {
            out.pop();
        }
        out
    }

    /// Exact signs (+1/−1) of a nonzero real element under the real
    /// embeddings of Q(ζ_m)^+, ordered by ascending k in ζ ↦ e^{2πik/m}.
    pub fn embedding_signs(&self) -> Result<Vec<i8>> {
        if self.is_zero() {
            return Err(invalid!("embedding signs of zero"));
        }
        if !self.is_real() {
            return Err(invalid!("element is not fixed by complex conjugation"));
        }
        let h = self.real_polynomial();
        let f = &self.field;
        let mut out = Vec::with_capacity(f.isolating.len());
        for (lo0, hi0) in &f.isolating {
            let (mut lo, mut hi, mut e) = (lo0.clone(), hi0.clone(), ISO_BITS);
            let s_lo = sign_at_dyadic(&f.psi, &lo, e);
            loop {
                let (a, b) = enclose(&h, &lo, &hi, e);
                if a.is_positive() {
                    out.push(1);
                    break;
                }
                if b.is_negative() {
                    out.push(-1);
                    break;
                }
                if lo == hi {
                    return Err(Error::Internal("real embedding vanished for a nonzero element".into()));
                }
                for _ in 0..8 {
                    lo <<= 1;
                    hi <<= 1;
                    e += 1;
                    let mid = (&lo + &hi) >> 1;
                    match sign_at_dyadic(&f.psi, &mid, e) {
                        0 => {
                            lo = mid.clone();
                            hi = mid;
                            break;
                        }
                        s if s == s_lo => lo = mid,
                        _ => hi = mid,
                    }
                }
            }
        }
        Ok(out)
    }

    /// Floating-point |σ_k(x)| for each real-embedding representative k.
    /// Used only as a search filter; never for decisions.
    pub fn approx_abs(&self) -> Vec<f64> {
        let f = &self.field;
        let den = self.den.to_f64().unwrap_or(f64::INFINITY);
        f.real_embeddings
            .iter()
            .map(|&k| {
                let (mut re, mut im) = (0.0, 0.0);
                for (t, c) in self.num.iter().enumerate() {
                    let c = c.to_f64().unwrap_or(0.0);
                    if c == 0.0 {
                        continue;
                    }
                    let th = 2.0 * core::f64::consts::PI * ((k as usize * t) % f.m as usize) as f64
                        / f.m as f64;
                    re += c * libm::cos(th);
                    im += c * libm::sin(th);
                }
                libm::sqrt(re * re + im * im) / den
            })
            .collect()
    }
}

impl<'a> Add<&'a CyclotomicElement> for &'a CyclotomicElement {
    type Output = CyclotomicElement;
    fn add(self, rhs: &CyclotomicElement) -> CyclotomicElement {
        self.same_field(rhs);
        let num = self
            .num
            .iter()
            .zip(&rhs.num)
            .map(|(a, b)| a * &rhs.den + b * &self.den)
            .collect();
        CyclotomicElement::normalized(self.field.clone(), num, &self.den * &rhs.den)
    }
}

impl<'a> Sub<&'a CyclotomicElement> for &'a CyclotomicElement {
    type Output = CyclotomicElement;
    fn sub(self, rhs: &CyclotomicElement) -> CyclotomicElement {
        self + &(-rhs)
    }
}

impl Neg for &CyclotomicElement {
    type Output = CyclotomicElement;
    fn neg(self) -> CyclotomicElement {
        CyclotomicElement {
            field: self.field.clone(),
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

impl<'a> Mul<&'a CyclotomicElement> for &'a CyclotomicElement {
    type Output = CyclotomicElement;
    fn mul(self, rhs: &CyclotomicElement) -> CyclotomicElement {
        self.same_field(rhs);
        let phi = self.field.phi;
        let mut conv = vec![BigInt::zero(); 2 * phi - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.num.iter().enumerate() {
                if !b.is_zero() {
                    conv[i + j] += a * b;
                }
            }
        }
        let num = CyclotomicElement::reduce_exponents(&self.field, &conv);
        CyclotomicElement::normalized(self.field.clone(), num, &self.den * &rhs.den)
    }
}

/// Real cyclotomic units: ratios ζ^{(b−a)/2}(1−ζ^a)/(1−ζ^b) with 1−ζ^a, 1−ζ^b
/// generating the same ideal, plus ζ^{−m/4−a/2}(1−ζ^a) for 4 | m, a even and
/// 1−ζ^a a unit. Exponents a run over 1 ≤ a < m/2.
pub fn real_cyclotomic_units(field: &Arc<CyclotomicField>) -> Result<Vec<CyclotomicElement>> {
    let m = field.m;
    let one = CyclotomicElement::one(field);
    let one_minus = |a: u64| &one - &CyclotomicElement::zeta_pow(field, a as i64);
    // Ideal class of 1 − ζ^a: its order if a prime power, else 0 (a unit).
    let class = |a: u64| {
        let d = m / gcd(a, m);
        if crate::arith::factor(d).len() == 1 { d } else { 0 }
    };
    let half_shift = |diff: i64| -> i64 {
        if m % 2 == 1 {
            diff * mod_inv(2, m).expect("m odd") as i64
        } else {
            diff / 2
        }
    };
    let exps: Vec<u64> = (1..).take_while(|&a| 2 * a < m).collect();
    let mut bases: Vec<((u64, u64), u64, CyclotomicElement)> = Vec::new();
    let mut out = Vec::new();
    for &a in &exps {
        let parity = if m % 2 == 0 { a % 2 } else { 0 };
        let key = (class(a), parity);
        if m % 4 == 0 && a % 2 == 0 && key.0 == 0 {
            let shift = -((m / 4) as i64) - (a / 2) as i64;
            let r = &CyclotomicElement::zeta_pow(field, shift) * &one_minus(a);
            debug_assert!(r.is_real());
            out.push(r);
        }
        match bases.iter().find(|(k, _, _)| *k == key) {
            None => {
                let inv = one_minus(a).inv()?;
                bases.push((key, a, inv));
            }
            Some((_, b, inv_b)) => {
                let shift = half_shift(*b as i64 - a as i64);
                let u = &(&CyclotomicElement::zeta_pow(field, shift) * &one_minus(a)) * inv_b;
                debug_assert!(u.is_real());
                out.push(u);
            }
        }
    }
    Ok(out)
}

/// A unit of O_F (F = Q(ζ_m)^+) positive at real embedding `sigma0` and
/// negative at every other one.
pub fn find_sign_unit(field: &Arc<CyclotomicField>, sigma0: usize) -> Result<CyclotomicElement> {
    let n = field.real_embeddings.len();
    if sigma0 >= n {
        return Err(invalid!("embedding index {sigma0} out of range 0..{n}"));
    }
    let want: Vec<i8> = (0..n).map(|i| if i == sigma0 { 1 } else { -1 }).collect();
    unit_with_signs(field, &want)
}

/// Sign vectors of −1 and the real cyclotomic units, reduced over F_2 so
/// that sign patterns can be solved for repeatedly.
#[derive(Clone, Debug)]
pub struct SignUnits {
    field: Arc<CyclotomicField>,
    gens: Vec<CyclotomicElement>,
    /// Echelon rows (sign bits, generator mask) with their pivot columns.
    rows: Vec<(Vec<u8>, Vec<u8>, usize)>,
}

impl SignUnits {
    pub fn new(field: &Arc<CyclotomicField>) -> Result<Self> {
        let n = field.real_embeddings.len();
        let mut gens = vec![CyclotomicElement::from_integer(field, -1)];
        gens.extend(real_cyclotomic_units(field)?);
        let mut pending: Vec<(Vec<u8>, Vec<u8>)> = Vec::with_capacity(gens.len());
        for (i, u) in gens.iter().enumerate() {
            let bits = u.embedding_signs()?.iter().map(|&x| u8::from(x < 0)).collect();
            let mut tag = vec![0u8; gens.len()];
            tag[i] = 1;
            pending.push((bits, tag));
        }
        let mut rows: Vec<(Vec<u8>, Vec<u8>, usize)> = Vec::new();
        for col in 0..n {
            let Some(r) = pending.iter().position(|row| row.0[col] == 1) else {
                continue;
            };
            let (pv, pt) = pending.swap_remove(r);
            for row in pending.iter_mut() {
                if row.0[col] == 1 {
                    xor(&mut row.0, &pv);
                    xor(&mut row.1, &pt);
                }
            }
            rows.push((pv, pt, col));
        }
        Ok(SignUnits { field: field.clone(), gens, rows })
    }

    /// Dimension over F_2 of the reachable sign patterns.
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Generator mask realising the pattern (bit 1 = negative), if reachable.
    fn solve(&self, target: &[u8]) -> Option<Vec<u8>> {
        let mut residual = target.to_vec();
        let mut mask = vec![0u8; self.gens.len()];
        for (bits, tag, col) in &self.rows {
            if residual[*col] == 1 {
                xor(&mut residual, bits);
                xor(&mut mask, tag);
            }
        }
        residual.iter().all(|&b| b == 0).then_some(mask)
    }

    pub fn reachable(&self, want: &[i8]) -> bool {
        let target: Vec<u8> = want.iter().map(|&s| u8::from(s < 0)).collect();
        self.solve(&target).is_some()
    }

    pub fn unit_with_signs(&self, want: &[i8]) -> Result<CyclotomicElement> {
        let field = &self.field;
        let n = field.real_embeddings.len();
        if want.len() != n || want.iter().any(|&s| s != 1 && s != -1) {
            return Err(invalid!("expected {n} signs of +1 or -1"));
        }
        let target: Vec<u8> = want.iter().map(|&s| u8::from(s < 0)).collect();
        let mask = self.solve(&target).ok_or_else(|| {
            Error::SearchExhausted(alloc::format!(
                "no product of -1 and real cyclotomic units of Q(zeta_{}) has the sign pattern",
                field.m
            ))
        })?;
        let mut u = CyclotomicElement::one(field);
        for (g, &use_it) in self.gens.iter().zip(&mask) {
            if use_it == 1 {
                u = &u * g;
            }
        }
        let signs = u.embedding_signs()?;
        if signs != want || !u.is_integral() || u.norm().abs() != BigRational::one() {
            return Err(Error::Internal("sign unit failed verification".into()));
        }
        Ok(u)
    }
}

/// A unit of O_F with the prescribed signs (±1 per real embedding). Combines
/// −1 and the real cyclotomic units by elimination over F_2 on sign vectors.
/// Fails when the pattern lies outside their sign span, which for fields with
/// Ram = ∅ can be a genuine obstruction.
pub fn unit_with_signs(field: &Arc<CyclotomicField>, want: &[i8]) -> Result<CyclotomicElement> {
    SignUnits::new(field)?.unit_with_signs(want)
}

fn xor(a: &mut [u8], b: &[u8]) {
    for (x, y) in a.iter_mut().zip(b) {
        *x ^= y;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn field(m: u64) -> Arc<CyclotomicField> {
        CyclotomicField::new(m).unwrap()
    }

    #[test]
    fn basic_identities() {
        let k = field(7);
        let z = CyclotomicElement::zeta_pow(&k, 1);
        assert_eq!(&z * &CyclotomicElement::zeta_pow(&k, 6), CyclotomicElement::one(&k));
        let k3 = field(3);
        let one = CyclotomicElement::one(&k3);
        let a = &one - &CyclotomicElement::zeta_pow(&k3, 1);
        let b = &one - &CyclotomicElement::zeta_pow(&k3, 2);
        assert_eq!(&a * &b, CyclotomicElement::from_integer(&k3, 3));
        let two = CyclotomicElement::from_integer(&k, 2);
        assert_eq!(
            two.inv().unwrap(),
            CyclotomicElement::from_rational(&k, &BigRational::new(1.into(), 2.into()))
        );
        assert!(CyclotomicElement::zero(&k).inv().is_err());
    }

    #[test]
    fn conjugation_and_galois() {
        let k = field(7);
        let z = CyclotomicElement::zeta_pow(&k, 1);
        assert_eq!(z.conjugate(), CyclotomicElement::zeta_pow(&k, 6));
        assert_eq!(z.galois(2).unwrap(), CyclotomicElement::zeta_pow(&k, 2));
        assert!(z.galois(7).is_err());
        let k9 = field(9);
        let w = &CyclotomicElement::zeta_pow(&k9, 1) + &CyclotomicElement::zeta_pow(&k9, -1);
        assert!(w.is_real());
    }

    #[test]
    fn traces() {
        let k = field(7);
        assert_eq!(CyclotomicElement::one(&k).trace(), rat(6));
        assert_eq!(CyclotomicElement::zeta_pow(&k, 1).trace(), rat(-1));
        assert_eq!(CyclotomicElement::zeta_pow(&field(9), 1).trace(), rat(0));
    }

    #[test]
    fn norms() {
        let k3 = field(3);
        let g = CyclotomicElement::from_exponent_coeffs(&k3, &[3, 1]);
        assert_eq!(g.norm(), rat(7));
        let k7 = field(7);
        let w = &CyclotomicElement::zeta_pow(&k7, 1) + &CyclotomicElement::zeta_pow(&k7, -1);
        assert_eq!(w.norm(), rat(1));
    }

    #[test]
    fn signs_of_zeta7_plus() {
        let k = field(7);
        let w = &CyclotomicElement::zeta_pow(&k, 1) + &CyclotomicElement::zeta_pow(&k, -1);
        assert_eq!(w.embedding_signs().unwrap(), vec![1, -1, -1]);
        assert_eq!(CyclotomicElement::one(&k).embedding_signs().unwrap(), vec![1, 1, 1]);
        assert_eq!(
            CyclotomicElement::from_integer(&k, -1).embedding_signs().unwrap(),
            vec![-1, -1, -1]
        );
        assert!(CyclotomicElement::zeta_pow(&k, 1).embedding_signs().is_err());
    }

    #[test]
    fn sign_units() {
        for m in [3u64, 4, 5, 7, 9, 11, 13, 17, 19, 25, 27, 44, 33] {
            let k = field(m);
            if m == 44 || m == 33 {
                // nine negative signs would make (O_E, u) of signature (2, 18) while the
                // inert prime over 11 has odd different exponent: forbidden mod 8
                assert!(matches!(find_sign_unit(&k, 0), Err(Error::SearchExhausted(_))));
                continue;
            }
            for s0 in 0..k.real_embeddings().len() {
                let u = find_sign_unit(&k, s0).unwrap();
                let signs = u.embedding_signs().unwrap();
                assert!(signs.iter().enumerate().all(|(i, &s)| (s > 0) == (i == s0)), "m={m}");
            }
        }
        assert_eq!(find_sign_unit(&field(3), 0).unwrap(), CyclotomicElement::one(&field(3)));
    }

    #[test]
    fn psi_roots() {
        assert_eq!(field(3).psi(), &[BigInt::from(1), BigInt::from(1)]);
        // Ψ_7 = w^3 + w^2 − 2w − 1
        let p: Vec<i64> = field(7).psi().iter().map(|c| c.to_i64().unwrap()).collect();
        assert_eq!(p, vec![-1, -2, 1, 1]);
    }
}
