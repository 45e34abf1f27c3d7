//! Abelian number fields as (conductor, subgroup of (Z/m)^*) pairs, with
//! splitting, ramification and different data.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::arith::{factor, gcd, is_prime, mod_mul, valuation};
use crate::error::{Error, Result};
use crate::invalid;

/// Fixed field of `subgroup` inside Q(ζ_conductor). The conductor is always
/// minimal, so two equal fields have equal representations. Q is `(1, [0])`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbelianField {
    conductor: u64,
    subgroup: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeSplitting {
    pub p: u64,
    pub e: u64,
    pub f: u64,
    pub g: u64,
    /// Smallest residue in the Frobenius coset modulo inertia·H.
    pub frobenius_coset: u64,
    /// Whether complex conjugation fixes each prime above `p`.
    pub conjugation_fixed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Behavior {
    Split,
    Inert,
    Ramified,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FPlace {
    pub f_f: u64,
    pub e_f: u64,
    pub behavior: Behavior,
    /// v_w(D_E) at the E-place(s) above this F-place.
    pub different_exponent: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelativePlaceData {
    pub p: u64,
    pub places_of_f: Vec<FPlace>,
    /// Splitting of `p` in E itself.
    pub in_e: PrimeSplitting,
}

impl RelativePlaceData {
    pub fn ram(&self) -> usize {
        self.count(|pl| pl.behavior == Behavior::Ramified)
    }
    pub fn int(&self) -> usize {
        self.count(|pl| pl.behavior == Behavior::Inert)
    }
    pub fn ram_odd(&self) -> usize {
        self.count(|pl| pl.behavior == Behavior::Ramified && pl.different_exponent % 2 == 1)
    }
    pub fn int_odd(&self) -> usize {
        self.count(|pl| pl.behavior == Behavior::Inert && pl.different_exponent % 2 == 1)
    }
    fn count(&self, pred: impl Fn(&FPlace) -> bool) -> usize {
        self.places_of_f.iter().filter(|pl| pred(pl)).count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SClass {
    S1,
    S2,
    S3,
    None,
}

/// Subgroup of (Z/m)^* generated by `gens`, sorted.
pub fn generate_subgroup(m: u64, gens: &[u64]) -> Vec<u64> {
    let one = 1 % m;
    let mut set: BTreeSet<u64> = BTreeSet::new();
    set.insert(one);
    let mut frontier = vec![one];
    while let Some(x) = frontier.pop() {
        for &g in gens {
            let y = mod_mul(x, g % m, m.max(1));
            if set.insert(y) {
                frontier.push(y);
            }
        }
    }
    set.into_iter().collect()
}

pub fn units_mod(m: u64) -> Vec<u64> {
    if m == 1 {
        return vec![0];
    }
    (1..m).filter(|&x| gcd(x, m) == 1).collect()
}

/// Element of (Z/m)^* congruent to `a` mod `m1` and `b` mod `m2` (`m = m1 m2`, coprime).
fn crt(a: u64, m1: u64, b: u64, m2: u64) -> u64 {
    let m = m1 * m2;
    (0..m2)
        .map(|k| (a % m1.max(1)) + k * m1)
        .find(|&x| x % m2.max(1) == b % m2.max(1))
        .map(|x| x % m.max(1))
        .expect("coprime moduli")
}

impl AbelianField {
    pub fn rationals() -> Self {
        AbelianField { conductor: 1, subgroup: vec![0] }
    }

    pub fn cyclotomic(m: u64) -> Result<Self> {
        let m = if m % 4 == 2 { m / 2 } else { m };
        if m < 3 {
            return Err(invalid!("cyclotomic field needs m >= 3 after normalisation, got {m}"));
        }
        Ok(AbelianField { conductor: m, subgroup: vec![1] })
    }

    /// Fixed field of the subgroup generated by `gens` (negative residues allowed).
    pub fn from_subgroup(m: u64, gens: &[i64]) -> Result<Self> {
        if m == 0 {
            return Err(invalid!("modulus must be positive"));
        }
        let mut reduced = Vec::with_capacity(gens.len());
        for &g in gens {
            let r = crate::arith::residue(g, m);
            if gcd(r, m) != 1 && m > 1 {
                return Err(invalid!("generator {g} is not coprime to {m}"));
            }
            reduced.push(r);
        }
        let h = generate_subgroup(m, &reduced);
        Ok(Self::minimize(m, h))
    }

    fn minimize(mut m: u64, mut h: Vec<u64>) -> Self {
        loop {
            if m <= 2 {
                return Self::rationals();
            }
            let mut reduced = false;
            for (q, _) in factor(m) {
                let m2 = m / q;
                let kernel_in_h = units_mod(m)
                    .into_iter()
                    .filter(|&x| x % m2 == 1 % m2)
                    .all(|x| h.binary_search(&x).is_ok());
                if kernel_in_h {
                    let img: BTreeSet<u64> = h.iter().map(|&x| x % m2).collect();
                    h = img.into_iter().collect();
                    if m2 == 1 {
                        h = vec![0];
                    }
                    m = m2;
                    reduced = true;
                    break;
                }
            }
            if !reduced {
                return AbelianField { conductor: m, subgroup: h };
            }
        }
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn subgroup(&self) -> &[u64] {
        &self.subgroup
    }

    pub fn degree(&self) -> u64 {
        units_mod(self.conductor).len() as u64 / self.subgroup.len() as u64
    }

    pub fn is_cyclotomic(&self) -> bool {
        self.subgroup.len() == 1 && self.conductor >= 3
    }

    fn contains(&self, x: u64) -> bool {
        self.subgroup.binary_search(&(x % self.conductor)).is_ok()
    }

    pub fn is_cm(&self) -> bool {
        self.conductor >= 3 && !self.contains(self.conductor - 1)
    }

    pub fn maximal_real_subfield(&self) -> Result<Self> {
        if !self.is_cm() {
            return Err(Error::NotCm("field is already totally real".into()));
        }
        let m = self.conductor;
        let mut gens = self.subgroup.clone();
        gens.push(m - 1);
        Ok(Self::minimize(m, generate_subgroup(m, &gens)))
    }

    /// Closure of `H` together with extra residues.
    fn extend(&self, extra: &[u64]) -> Vec<u64> {
        let mut gens = self.subgroup.clone();
        gens.extend_from_slice(extra);
        generate_subgroup(self.conductor, &gens)
    }

    pub fn prime_splitting(&self, p: u64) -> Result<PrimeSplitting> {
        if !is_prime(p) {
            return Err(invalid!("{p} is not prime"));
        }
        let m = self.conductor;
        let deg = self.degree();
        if m == 1 {
            return Ok(PrimeSplitting { p, e: 1, f: 1, g: 1, frobenius_coset: 0, conjugation_fixed: true });
        }
        let v = valuation(m, p);
        let pv = p.pow(v);
        let m0 = m / pv;
        let inertia: Vec<u64> =
            units_mod(m).into_iter().filter(|&x| x % m0 == 1 % m0).collect();
        let frob = if v == 0 { p % m } else { crt(p % m0, m0, 1, pv) };
        let ih = self.extend(&inertia);
        let e = (ih.len() / self.subgroup.len()) as u64;
        let mut f = 1u64;
        let mut x = frob;
        while ih.binary_search(&x).is_err() {
            x = mod_mul(x, frob, m);
            f += 1;
        }
        let g = deg / (e * f);
        let mut dgens = inertia.clone();
        dgens.push(frob);
        let decomposition = self.extend(&dgens);
        let conjugation_fixed = decomposition.binary_search(&(m - 1)).is_ok();
        let frobenius_coset = ih
            .iter()
            .map(|&h| mod_mul(h, frob, m))
            .min()
            .unwrap_or(frob);
        Ok(PrimeSplitting { p, e, f, g, frobenius_coset, conjugation_fixed })
    }

    /// v_p(disc K) from the conductor-discriminant formula.
    pub fn disc_valuation(&self, p: u64) -> u64 {
        let m = self.conductor;
        if m == 1 {
            return 0;
        }
        let v = valuation(m, p);
        let m0 = m / p.pow(v);
        let index = |extra: &[u64]| self.degree() / (self.extend(extra).len() as u64 / self.subgroup.len() as u64);
        let g_h = self.degree();
        let mut total = 0;
        for c in 0..v {
            let modulus = p.pow(c) * m0;
            let w: Vec<u64> = units_mod(m)
                .into_iter()
                .filter(|&x| x % modulus == 1 % modulus)
                .collect();
            total += g_h - index(&w);
        }
        total
    }

    /// v_w(D_K) at each (conjugate) place above `p`.
    pub fn different_exponent(&self, p: u64) -> Result<u64> {
        let s = self.prime_splitting(p)?;
        let dv = self.disc_valuation(p);
        if dv % (s.f * s.g) != 0 {
            return Err(Error::Internal("discriminant valuation not divisible by f·g".into()));
        }
        Ok(dv / (s.f * s.g))
    }

    pub fn relative_place_data(&self, p: u64) -> Result<RelativePlaceData> {
        let f_field = self.maximal_real_subfield()?;
        let se = self.prime_splitting(p)?;
        let sf = f_field.prime_splitting(p)?;
        let behavior = if se.e == 2 * sf.e {
            Behavior::Ramified
        } else if se.f == 2 * sf.f {
            Behavior::Inert
        } else {
            Behavior::Split
        };
        let dexp = self.different_exponent(p)?;
        let places_of_f = (0..sf.g)
            .map(|_| FPlace { f_f: sf.f, e_f: sf.e, behavior, different_exponent: dexp })
            .collect();
        Ok(RelativePlaceData { p, places_of_f, in_e: se })
    }

    /// Rational primes below a place of F that ramifies in E.
    pub fn ramified_primes(&self) -> Result<Vec<u64>> {
        let mut out = Vec::new();
        for (p, _) in factor(self.conductor) {
            if self.relative_place_data(p)?.ram() > 0 {
                out.push(p);
            }
        }
        Ok(out)
    }

    /// Ram(p): E-places over ramified F-places for odd p, dyadic E-places with
    /// positive different exponent for p = 2. Returns (count, Σ f_w).
    pub fn ram_of_p(&self, p: u64) -> Result<(u64, u64)> {
        let rd = self.relative_place_data(p)?;
        let s = &rd.in_e;
        let hit = if p == 2 {
            self.different_exponent(2)? > 0
        } else {
            rd.ram() > 0
        };
        Ok(if hit { (s.g, s.g * s.f) } else { (0, 0) })
    }

    pub fn f_of_p(&self, p: u64) -> Result<u64> {
        Ok(self.ram_of_p(p)?.1)
    }

    pub fn s_class(&self, p: u64) -> Result<SClass> {
        if self.degree() != 20 {
            return Err(invalid!("S1/S2/S3 are defined for degree-20 fields, got {}", self.degree()));
        }
        if !self.is_cm() {
            return Err(Error::NotCm("S1/S2/S3 need a CM field".into()));
        }
        let s = self.prime_splitting(p)?;
        Ok(match (s.conjugation_fixed, s.f) {
            (false, 1) => SClass::S1,
            (true, 2) => SClass::S2,
            (true, 1) => SClass::S3,
            _ => SClass::None,
        })
    }

    /// Every subgroup of (Z/m)^*, by breadth-first closure over generators.
    pub fn all_subgroups(m: u64) -> Vec<Vec<u64>> {
        let units = units_mod(m);
        let mut seen: BTreeSet<Vec<u64>> = BTreeSet::new();
        let start = vec![1 % m];
        seen.insert(start.clone());
        let mut frontier = vec![start];
        while let Some(h) = frontier.pop() {
            for &u in &units {
                if h.binary_search(&u).is_ok() {
                    continue;
                }
                let mut gens = h.clone();
                gens.push(u);
                let next = generate_subgroup(m, &gens);
                if seen.insert(next.clone()) {
                    frontier.push(next);
                }
            }
        }
        seen.into_iter().collect()
    }

    /// All CM abelian fields with conductor exactly `m`.
    pub fn cm_fields_of_conductor(m: u64) -> Vec<AbelianField> {
        let mut out: Vec<AbelianField> = Self::all_subgroups(m)
            .into_iter()
            .map(|h| Self::minimize(m, h))
            .filter(|k| k.conductor == m && k.is_cm())
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_degrees() {
        assert_eq!(AbelianField::cyclotomic(7).unwrap().degree(), 6);
        assert_eq!(AbelianField::cyclotomic(44).unwrap().degree(), 20);
        assert_eq!(AbelianField::cyclotomic(66).unwrap().conductor(), 33);
        assert!(AbelianField::cyclotomic(2).is_err());
        assert!(AbelianField::cyclotomic(1).is_err());
    }

    #[test]
    fn conductor_51_field() {
        let e = AbelianField::from_subgroup(51, &[16]).unwrap();
        assert_eq!(e.degree(), 16);
        assert_eq!(e.conductor(), 51);
        assert!(e.is_cm());
        let f = e.maximal_real_subfield().unwrap();
        assert_eq!(f, AbelianField::from_subgroup(17, &[-1]).unwrap());
        assert_eq!(f.degree(), 8);
        let s = e.prime_splitting(3).unwrap();
        assert_eq!((s.e, s.f, s.g), (2, 8, 1));
        assert_eq!(e.f_of_p(3).unwrap(), 8);
        assert_eq!(e.relative_place_data(3).unwrap().ram(), 1);
    }

    #[test]
    fn minimisation() {
        // H = {1, 8} in (Z/21)^* is the kernel of reduction mod 7
        let k = AbelianField::from_subgroup(21, &[8]).unwrap();
        assert_eq!(k, AbelianField::cyclotomic(7).unwrap());
        assert_eq!(AbelianField::from_subgroup(7, &[1]).unwrap(), AbelianField::cyclotomic(7).unwrap());
        assert_eq!(AbelianField::from_subgroup(7, &[3]).unwrap(), AbelianField::rationals());
        assert!(AbelianField::from_subgroup(9, &[3]).is_err());
    }

    #[test]
    fn splitting_examples() {
        let k = AbelianField::cyclotomic(7).unwrap();
        let s = k.prime_splitting(2).unwrap();
        assert_eq!((s.e, s.f, s.g), (1, 3, 2));
        assert!(!s.conjugation_fixed);
        let s = k.prime_splitting(7).unwrap();
        assert_eq!((s.e, s.f, s.g), (6, 1, 1));
        let s = k.prime_splitting(13).unwrap();
        assert_eq!((s.e, s.f, s.g), (1, 2, 3));
        assert!(s.conjugation_fixed);
        let r = k.relative_place_data(13).unwrap();
        assert_eq!(r.int(), 3);
        assert_eq!(r.ram(), 0);
    }

    #[test]
    fn differents() {
        let k7 = AbelianField::cyclotomic(7).unwrap();
        assert_eq!(k7.different_exponent(7).unwrap(), 5);
        assert_eq!(k7.different_exponent(2).unwrap(), 0);
        let k9 = AbelianField::cyclotomic(9).unwrap();
        assert_eq!(k9.different_exponent(3).unwrap(), 9);
        let k44 = AbelianField::cyclotomic(44).unwrap();
        assert_eq!(k44.different_exponent(11).unwrap(), 9);
        assert_eq!(k44.different_exponent(2).unwrap(), 2);
        assert!(k44.ramified_primes().unwrap().is_empty());
        let r = k7.relative_place_data(7).unwrap();
        assert_eq!((r.ram(), r.ram_odd()), (1, 1));
    }

    #[test]
    fn s_classes() {
        let k44 = AbelianField::cyclotomic(44).unwrap();
        assert_eq!(k44.s_class(89).unwrap(), SClass::S1);
        assert_eq!(k44.s_class(43).unwrap(), SClass::S2);
        assert_eq!(k44.s_class(5).unwrap(), SClass::None);
        let k25 = AbelianField::cyclotomic(25).unwrap();
        assert_eq!(k25.s_class(5).unwrap(), SClass::S3);
        assert!(AbelianField::cyclotomic(7).unwrap().s_class(2).is_err());
    }

    #[test]
    fn f_of_p_values() {
        for m in [3u64, 5, 7, 9, 11, 13, 25, 27] {
            let k = AbelianField::cyclotomic(m).unwrap();
            let p = factor(m)[0].0;
            assert_eq!(k.f_of_p(p).unwrap(), 1, "m = {m}");
        }
        assert_eq!(AbelianField::cyclotomic(44).unwrap().f_of_p(5).unwrap(), 0);
    }
}
