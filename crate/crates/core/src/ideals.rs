//! Prime ideals of Z[ζ_m], valuations, principal generators and ideal bases.
//!
//! A prime above q is labelled by q and a monic irreducible factor g of
//! Φ_{m'} mod q, m' the prime-to-q part of m: P = (q, g(ζ_{m'}), 1 − ζ_{q^v})
//! with ζ_{m'} = ζ^{q^v} and ζ_{q^v} = ζ^{m'}.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{is_prime, mod_inv, mult_order, residue, valuation, valuation_big};
use crate::cyclotomic::{unit_with_signs, CyclotomicElement, CyclotomicField};
use crate::error::{Error, Result};
use crate::invalid;
use crate::matrix::{self, QMat};
use crate::poly::{
    cyclotomic_poly, equal_degree_factor, fp_compose_power, fp_from_ints, fp_gcd, fp_rem,
};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PrimeLabel {
    pub q: u64,
    /// Monic factor of Φ_{m'} mod q, little-endian.
    pub factor: Vec<u64>,
}

impl fmt::Display for PrimeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P({}", self.q)?;
        for c in &self.factor {
            write!(f, ",{c}")?;
        }
        write!(f, ")")
    }
}

impl PrimeLabel {
    /// Label of σ_a(P) for σ_a: ζ ↦ ζ^a.
    pub fn galois(&self, m: u64, a: i64) -> PrimeLabel {
        let mp = prime_to_part(m, self.q);
        let phi = fp_from_ints(&cyclotomic_poly(mp), self.q);
        let a = residue(a, mp.max(1)) as usize;
        let composed = fp_rem(&fp_compose_power(&self.factor, a.max(1)), &phi, self.q);
        let h = if mp == 1 { self.factor.clone() } else { fp_gcd(&phi, &composed, self.q) };
        PrimeLabel { q: self.q, factor: h }
    }

    pub fn conjugate(&self, m: u64) -> PrimeLabel {
        self.galois(m, -1)
    }

    /// Residual degree f = deg g.
    pub fn f(&self) -> u64 {
        (self.factor.len() - 1) as u64
    }
}

fn prime_to_part(mut m: u64, q: u64) -> u64 {
    while m % q == 0 {
        m /= q;
    }
    m
}

/// A prime ideal of Z[ζ_m] with the data needed for membership and valuations.
#[derive(Clone)]
pub struct PrimeIdeal {
    pub label: PrimeLabel,
    pub e: u64,
    pub f: u64,
    pub conjugation_fixed: bool,
    field: Arc<CyclotomicField>,
    /// Images of ζ^t (t < φ(m)) in F_q[X]/(g).
    residues: Vec<Vec<u64>>,
    /// Product of the other factors evaluated at ζ_{m'}.
    cofactor: CyclotomicElement,
    /// 1/(1 − ζ_{q^v}) when q | m.
    uniformizer_inv: Option<CyclotomicElement>,
}

impl fmt::Debug for PrimeIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (e={}, f={}, fixed={})", self.label, self.e, self.f, self.conjugation_fixed)
    }
}

impl PartialEq for PrimeIdeal {
    fn eq(&self, other: &Self) -> bool {
        self.field.m() == other.field.m() && self.label == other.label
    }
}

impl Eq for PrimeIdeal {}

/// Primes above q in Z[ζ_m], sorted by label.
pub fn primes_above(field: &Arc<CyclotomicField>, q: u64) -> Result<Vec<PrimeIdeal>> {
    if !is_prime(q) {
        return Err(invalid!("{q} is not prime"));
    }
    let m = field.m();
    let v = valuation(m, q);
    let qv = q.pow(v);
    let mp = m / qv;
    let f = mult_order(q % mp.max(1), mp);
    let phi_mp = fp_from_ints(&cyclotomic_poly(mp), q);
    let factors = if mp == 1 { vec![phi_mp.clone()] } else { equal_degree_factor(&phi_mp, f as usize, q) };
    let e = crate::arith::euler_phi(qv);
    // ζ ≡ ζ_{m'}^w modulo every prime above q, where q^v·w ≡ 1 (mod m').
    let w = if mp == 1 { 0 } else { mod_inv(qv as i64, mp).expect("coprime") };
    let one = CyclotomicElement::one(field);
    let uniformizer_inv = if v > 0 {
        Some((&one - &CyclotomicElement::zeta_pow(field, mp as i64)).inv()?)
    } else {
        None
    };
    let eval_at_zeta_mp = |g: &[u64]| {
        let mut exps = vec![0i64; (g.len().saturating_sub(1)) * qv as usize + 1];
        for (i, &c) in g.iter().enumerate() {
            exps[i * qv as usize] = c as i64;
        }
        CyclotomicElement::from_exponent_coeffs(field, &exps)
    };
    let mut out = Vec::with_capacity(factors.len());
    for (i, g) in factors.iter().enumerate() {
        let mut cofactor = one.clone();
        for (j, h) in factors.iter().enumerate() {
            if i != j {
                cofactor = &cofactor * &eval_at_zeta_mp(h);
            }
        }
        let residues = (0..field.degree())
            .map(|t| {
                let exp = (w as usize * t) % mp.max(1) as usize;
                let mut xp = vec![0u64; exp + 1];
                xp[exp] = 1;
                fp_rem(&xp, g, q)
            })
            .collect();
        let label = PrimeLabel { q, factor: g.clone() };
        let conjugation_fixed = label.conjugate(m) == label;
        out.push(PrimeIdeal {
            label,
            e,
            f,
            conjugation_fixed,
            field: field.clone(),
            residues,
            cofactor,
            uniformizer_inv: uniformizer_inv.clone(),
        });
    }
    Ok(out)
}

impl PrimeIdeal {
    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    /// N(P) = q^f.
    pub fn norm(&self) -> BigInt {
        BigInt::from(self.label.q).pow(self.f as u32)
    }

    /// Whether an integral element lies in P, via its image in O/P.
    pub fn contains(&self, x: &CyclotomicElement) -> bool {
        debug_assert!(x.is_integral());
        let q = self.label.q;
        let bq = BigInt::from(q);
        let mut acc = vec![0u64; self.f as usize];
        for (c, r) in x.numerators().iter().zip(&self.residues) {
            let c = residue((c % &bq).to_i64().expect("small residue"), q);
            if c == 0 {
                continue;
            }
            for (a, &b) in acc.iter_mut().zip(r) {
                *a = (*a + c * b) % q;
            }
        }
        acc.iter().all(|&a| a == 0)
    }

    fn contains_small(&self, coeffs: &[i64]) -> bool {
        let q = self.label.q;
        let mut acc = vec![0u64; self.f as usize];
        for (&c, r) in coeffs.iter().zip(&self.residues) {
            if c == 0 {
                continue;
            }
            let c = residue(c, q);
            for (a, &b) in acc.iter_mut().zip(r) {
                *a = (*a + c * b) % q;
            }
        }
        acc.iter().all(|&a| a == 0)
    }

    /// Divide an element of P by the uniformizing data, keeping it integral.
    fn step(&self, y: &CyclotomicElement) -> CyclotomicElement {
        let z = &self.cofactor * y;
        match &self.uniformizer_inv {
            None => z.scale(&BigRational::new(BigInt::one(), BigInt::from(self.label.q))),
            Some(t) => &z * t,
        }
    }

    /// v_P(x); `None` for x = 0.
    pub fn valuation(&self, x: &CyclotomicElement) -> Option<i64> {
        if x.is_zero() {
            return None;
        }
        let den = x.denominator().clone();
        let mut y = x.scale(&BigRational::from_integer(den.clone()));
        let mut k = 0i64;
        while self.contains(&y) {
            y = self.step(&y);
            debug_assert!(y.is_integral());
            k += 1;
        }
        Some(k - (self.e as i64) * valuation_big(&den, self.label.q) as i64)
    }

    pub fn galois(&self, a: i64) -> Result<PrimeIdeal> {
        let target = self.label.galois(self.field.m(), a);
        primes_above(&self.field, self.label.q)?
            .into_iter()
            .find(|p| p.label == target)
            .ok_or_else(|| Error::Internal("Galois image of a prime not found".into()))
    }

    pub fn conjugate(&self) -> Result<PrimeIdeal> {
        self.galois(-1)
    }
}

/// Configurable bounds for the small-coefficient generator search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBound {
    /// Largest absolute coefficient.
    pub height: i64,
    /// Largest number of nonzero coefficients.
    pub support: usize,
}

impl Default for SearchBound {
    fn default() -> Self {
        SearchBound { height: 2, support: 4 }
    }
}

/// Approximate log|N(x)| from the real-embedding representatives.
fn approx_log_norm(table: &[Vec<(f64, f64)>], coeffs: &[(usize, i64)]) -> f64 {
    let mut total = 0.0;
    for row in table {
        let (mut re, mut im) = (0.0, 0.0);
        for &(t, c) in coeffs {
            re += c as f64 * row[t].0;
            im += c as f64 * row[t].1;
        }
        total += libm::log(re * re + im * im);
    }
    total
}

fn embedding_table(field: &CyclotomicField, basis: &[Vec<i64>]) -> Vec<Vec<(f64, f64)>> {
    // basis[j] = exponent-coefficient vector of the j-th search direction
    let m = field.m() as f64;
    field
        .real_embeddings()
        .iter()
        .map(|&k| {
            basis
                .iter()
                .map(|b| {
                    let (mut re, mut im) = (0.0, 0.0);
                    for (t, &c) in b.iter().enumerate() {
                        if c != 0 {
                            let th = 2.0 * core::f64::consts::PI * (k as f64) * (t as f64) / m;
                            re += c as f64 * libm::cos(th);
                            im += c as f64 * libm::sin(th);
                        }
                    }
                    (re, im)
                })
                .collect()
        })
        .collect()
}

/// Enumerate coefficient vectors over `dim` directions by increasing height,
/// then support size, then lexicographic support; stop at the first hit.
fn small_search<F>(dim: usize, bound: SearchBound, mut accept: F) -> Option<Vec<(usize, i64)>>
where
    F: FnMut(&[(usize, i64)]) -> bool,
{
    for h in 1..=bound.height {
        for s in 1..=bound.support.min(dim) {
            let mut support: Vec<usize> = (0..s).collect();
            loop {
                // coefficient vectors in [−h, h]^s \ 0 with max |c| = h
                let mut coeffs = vec![-h; s];
                loop {
                    if coeffs.iter().all(|&c| c != 0) && coeffs.iter().any(|&c| c.abs() == h) {
                        let cand: Vec<(usize, i64)> =
                            support.iter().copied().zip(coeffs.iter().copied()).collect();
                        if accept(&cand) {
                            return Some(cand);
                        }
                    }
                    let mut i = 0;
                    while i < s {
                        if coeffs[i] < h {
                            coeffs[i] += 1;
                            break;
                        }
                        coeffs[i] = -h;
                        i += 1;
                    }
                    if i == s {
                        break;
                    }
                }
                // next support subset
                let mut i = s;
                while i > 0 && support[i - 1] == dim - s + i - 1 {
                    i -= 1;
                }
                if i == 0 {
                    break;
                }
                support[i - 1] += 1;
                for j in i..s {
                    support[j] = support[j - 1] + 1;
                }
            }
        }
    }
    None
}

/// Shortest elements of P ∩ span(directions) under T2(x) = Tr(x x̄), tried in
/// order of T2 until one has |N(x)| = N(P). The sublattice is cut out by the
/// reduction map to O/P, so every candidate lies in P by construction.
fn short_vector_search(p: &PrimeIdeal, directions: &[Vec<i64>]) -> Option<CyclotomicElement> {
    let field = p.field.clone();
    let q = p.label.q as i64;
    let dim = directions.len();
    let elems: Vec<CyclotomicElement> =
        directions.iter().map(|d| CyclotomicElement::from_exponent_coeffs(&field, d)).collect();
    // residue of each direction in F_q^f
    let res: Vec<Vec<i64>> = elems
        .iter()
        .map(|x| {
            let mut acc = vec![0i64; p.f as usize];
            for (c, r) in x.numerators().iter().zip(&p.residues) {
                let c = (c % BigInt::from(q)).to_i64().expect("small residue").rem_euclid(q);
                for (a, &b) in acc.iter_mut().zip(r) {
                    *a = (*a + c * b as i64) % q;
                }
            }
            acc
        })
        .collect();
    // kernel of the dim × f residue matrix over F_q, in reduced echelon form
    let mut rows: Vec<Vec<i64>> = (0..p.f as usize).map(|j| res.iter().map(|r| r[j]).collect()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..dim {
        let Some(k) = (r..rows.len()).find(|&k| rows[k][c] != 0) else { continue };
        rows.swap(r, k);
        let inv = mod_inv(rows[r][c], q as u64)? as i64;
        for x in rows[r].iter_mut() {
            *x = *x * inv % q;
        }
        for k in 0..rows.len() {
            if k != r && rows[k][c] != 0 {
                let t = rows[k][c];
                for j in 0..dim {
                    rows[k][j] = (rows[k][j] - t * rows[r][j]).rem_euclid(q);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let mut basis: Vec<Vec<i64>> = Vec::new();
    for c in (0..dim).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0i64; dim];
        v[c] = 1;
        for (i, &pc) in pivots.iter().enumerate() {
            v[pc] = (-rows[i][c]).rem_euclid(q);
        }
        basis.push(v);
    }
    for &pc in &pivots {
        let mut v = vec![0i64; dim];
        v[pc] = q;
        basis.push(v);
    }
    let el = |v: &[BigInt]| {
        let mut x = CyclotomicElement::zero(&field);
        for (c, e) in v.iter().zip(&elems) {
            if !c.is_zero() {
                x = &x + &e.scale(&BigRational::from_integer(c.clone()));
            }
        }
        x
    };
    let vecs: Vec<Vec<BigInt>> = basis.iter().map(|b| b.iter().map(|&c| BigInt::from(c)).collect()).collect();
    let bel: Vec<CyclotomicElement> = vecs.iter().map(|v| el(v)).collect();
    let gram: matrix::IMat = bel
        .iter()
        .map(|x| bel.iter().map(|y| (x * &y.conjugate()).trace().to_integer()).collect())
        .collect();
    let lat = crate::lattice::IntegerLattice::new(gram.clone()).ok()?;
    let target = BigRational::from_integer(p.norm());
    let n = field.degree() as f64;
    let floor = n * libm::pow(p.norm().to_f64()?, 2.0 / n);
    let mut bound = libm::ceil(1.25 * floor) as u64;
    for _ in 0..8 {
        let mut cands: Vec<(BigInt, Vec<BigInt>)> = lat
            .short_vectors(bound)
            .ok()?
            .into_iter()
            .map(|v| (matrix::bilinear(&gram, &v, &v), v))
            .collect();
        cands.sort();
        for (_, v) in cands {
            let coords: Vec<BigInt> = (0..dim)
                .map(|j| v.iter().zip(&vecs).fold(BigInt::zero(), |acc, (c, b)| acc + c * &b[j]))
                .collect();
            let x = el(&coords);
            if x.norm().abs() == target {
                return Some(x);
            }
        }
        bound *= 2;
    }
    None
}

fn search_in_span(
    p: &PrimeIdeal,
    directions: &[Vec<i64>],
    bound: SearchBound,
    what: &str,
) -> Result<CyclotomicElement> {
    let field = p.field.clone();
    let phi = field.degree();
    let coords: Vec<Vec<i64>> = directions
        .iter()
        .map(|d| {
            let x = CyclotomicElement::from_exponent_coeffs(&field, d);
            x.numerators().iter().map(|c| c.to_i64().expect("small")).collect()
        })
        .collect();
    let table = embedding_table(&field, directions);
    let target = BigRational::from_integer(p.norm());
    let log_target = libm::log(p.norm().to_f64().unwrap_or(f64::MAX));
    let found = small_search(directions.len(), bound, |cand| {
        let mut x = vec![0i64; phi];
        for &(j, c) in cand {
            for (a, &b) in x.iter_mut().zip(&coords[j]) {
                *a += c * b;
            }
        }
        if !p.contains_small(&x) {
            return false;
        }
        if (approx_log_norm(&table, cand) - log_target).abs() > 1e-6 * log_target.max(1.0) {
            return false;
        }
        let el = CyclotomicElement::from_exponent_coeffs(&field, &x);
        el.norm().abs() == target
    });
    let Some(cand) = found else {
        return short_vector_search(p, directions).ok_or_else(|| {
            Error::SearchExhausted(alloc::format!(
                "no {what} for {} in Q(zeta_{}) with height <= {} and support <= {}, nor among short vectors",
                p.label,
                field.m(),
                bound.height,
                bound.support
            ))
        });
    };
    let mut exps = vec![0i64; directions.iter().map(Vec::len).max().unwrap_or(1)];
    for &(j, c) in &cand {
        for (a, &b) in exps.iter_mut().zip(&directions[j]) {
            *a += c * b;
        }
    }
    Ok(CyclotomicElement::from_exponent_coeffs(&field, &exps))
}

/// q itself when P = qO_E.
fn inert_rational_generator(p: &PrimeIdeal) -> Option<CyclotomicElement> {
    let q = p.label.q;
    (p.e == 1 && p.f as usize == p.field.degree())
        .then(|| CyclotomicElement::from_integer(&p.field, q))
}

/// A generator of P found by deterministic small-coefficient search (h = 1).
/// Verified by membership and |N(γ)| = N(P).
pub fn prime_generator(p: &PrimeIdeal, bound: SearchBound) -> Result<CyclotomicElement> {
    let phi = p.field.degree();
    if p.e > 1 {
        // 1 − ζ_{q^v} generates the product of all primes above q
        if let Some(t) = &p.uniformizer_inv {
            let gen = t.inv()?;
            if p.contains(&gen) && gen.norm().abs() == BigRational::from_integer(p.norm()) {
                return Ok(gen);
            }
        }
    }
    if let Some(q) = inert_rational_generator(p) {
        return Ok(q);
    }
    let directions: Vec<Vec<i64>> = (0..phi)
        .map(|t| {
            let mut d = vec![0i64; t + 1];
            d[t] = 1;
            d
        })
        .collect();
    search_in_span(p, &directions, bound, "generator")
}

/// A generator of P lying in the real subfield, for P fixed by conjugation and
/// unramified in E/F. Searched in the basis 1, ζ^j + ζ^{−j}.
pub fn real_prime_generator(p: &PrimeIdeal, bound: SearchBound) -> Result<CyclotomicElement> {
    if !p.conjugation_fixed {
        return Err(invalid!("{} is not fixed by conjugation", p.label));
    }
    if let Some(q) = inert_rational_generator(p) {
        return Ok(q);
    }
    // g/ḡ is a unit of absolute value 1; when it is a root of unity some
    // ζ^t g is real
    if let Ok(g) = prime_generator(p, bound) {
        for t in 0..p.field.m() as i64 {
            let x = &CyclotomicElement::zeta_pow(&p.field, t) * &g;
            if x.is_real() {
                return Ok(x);
            }
        }
    }
    let m = p.field.m() as usize;
    let half = p.field.degree() / 2;
    let directions: Vec<Vec<i64>> = (0..half.max(1))
        .map(|j| {
            let mut d = vec![0i64; m];
            d[j] += 1;
            if j > 0 {
                d[m - j] += 1;
            }
            d
        })
        .collect();
    search_in_span(p, &directions, bound, "real generator")
}

/// Multiply a real element by a unit so that the product is totally positive.
pub fn make_totally_positive(x: &CyclotomicElement) -> Result<CyclotomicElement> {
    let signs = x.embedding_signs()?;
    let u = unit_with_signs(x.field(), &signs)?;
    Ok(x * &u)
}

/// Fractional ideal γ·O_E held by a generator, with its prime factorisation.
#[derive(Clone, Debug)]
pub struct IdealBasis {
    pub generator: CyclotomicElement,
    pub label: Vec<(PrimeLabel, i64)>,
    pub basis: Vec<CyclotomicElement>,
}

impl PartialEq for IdealBasis {
    fn eq(&self, other: &Self) -> bool {
        self.generator == other.generator && self.label == other.label
    }
}

impl IdealBasis {
    /// Checks |N(γ)| against the label before accepting.
    pub fn principal(generator: CyclotomicElement, label: Vec<(PrimeLabel, i64)>) -> Result<Self> {
        if generator.is_zero() {
            return Err(invalid!("zero generates no fractional ideal"));
        }
        let mut merged: BTreeMap<PrimeLabel, i64> = BTreeMap::new();
        for (p, e) in label {
            *merged.entry(p).or_insert(0) += e;
        }
        let label: Vec<(PrimeLabel, i64)> = merged.into_iter().filter(|(_, e)| *e != 0).collect();
        let mut expected = BigRational::one();
        for (p, e) in &label {
            let n = BigRational::from_integer(BigInt::from(p.q).pow(p.f() as u32));
            expected *= if *e >= 0 { n.pow(*e as i32) } else { n.recip().pow((-*e) as i32) };
        }
        if generator.norm().abs() != expected {
            return Err(Error::Internal(alloc::format!(
                "norm of generator {} disagrees with label norm {}",
                generator.norm(),
                expected
            )));
        }
        let field = generator.field().clone();
        let basis = (0..field.degree())
            .map(|i| &generator * &CyclotomicElement::zeta_pow(&field, i as i64))
            .collect();
        Ok(IdealBasis { generator, label, basis })
    }

    /// γ·O_E labelled by factorising γ.
    pub fn from_generator(generator: CyclotomicElement) -> Result<Self> {
        let label = factorize(&generator)?.into_iter().map(|(p, e)| (p.label, e)).collect();
        Self::principal(generator, label)
    }

    pub fn unit(field: &Arc<CyclotomicField>) -> Self {
        Self::principal(CyclotomicElement::one(field), Vec::new()).expect("O_E")
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        self.generator.field()
    }

    /// Rows = power-basis coordinates of the basis elements.
    pub fn coordinates(&self) -> QMat {
        self.basis.iter().map(|b| b.coeffs()).collect()
    }

    /// [O_E : I] for integral I, or its reciprocal for I ⊇ O_E; equals N(I).
    pub fn index(&self) -> BigRational {
        let c = self.coordinates();
        let den = c
            .iter()
            .flatten()
            .fold(BigInt::one(), |acc, x| num_integer::Integer::lcm(&acc, x.denom()));
        let scaled: matrix::IMat = c
            .iter()
            .map(|row| row.iter().map(|x| (x * BigRational::from_integer(den.clone())).to_integer()).collect())
            .collect();
        let d = matrix::det(&scaled).abs();
        BigRational::new(d, den.pow(c.len() as u32))
    }

    /// Product with another principal ideal.
    pub fn multiply(&self, other: &IdealBasis) -> Result<Self> {
        let mut label = self.label.clone();
        label.extend(other.label.iter().cloned());
        Self::principal(&self.generator * &other.generator, label)
    }

    pub fn label_string(&self) -> String {
        if self.label.is_empty() {
            return "O_E".into();
        }
        let parts: Vec<String> = self.label.iter().map(|(p, e)| alloc::format!("{p}^{e}")).collect();
        parts.join("*")
    }
}

/// The ramified prime P = (1 − ζ) of Q(ζ_{p^r}).
pub fn ramified_prime(field: &Arc<CyclotomicField>) -> Result<PrimeIdeal> {
    let f = crate::arith::factor(field.m());
    if f.len() != 1 {
        return Err(invalid!("Q(zeta_{}) is not a prime-power cyclotomic field", field.m()));
    }
    let mut ps = primes_above(field, f[0].0)?;
    Ok(ps.remove(0))
}

/// P^k = (1 − ζ)^k O_E for E = Q(ζ_{p^r}); k may be negative.
pub fn ideal_power_basis(field: &Arc<CyclotomicField>, k: i64) -> Result<IdealBasis> {
    let p = ramified_prime(field)?;
    let one = CyclotomicElement::one(field);
    let t = &one - &CyclotomicElement::zeta_pow(field, 1);
    IdealBasis::principal(t.pow(k)?, vec![(p.label, k)])
}

/// Rational primes dividing numerator or denominator of a nonzero rational.
pub fn rational_support(x: &BigRational) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for part in [x.numer(), x.denom()] {
        if part.abs().is_one() {
            continue;
        }
        let f = crate::arith::factor_big(part)
            .ok_or_else(|| Error::Internal("norm too large to factor".into()))?;
        out.extend(f.into_iter().map(|(p, _)| p));
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Prime factorisation of a nonzero element as (prime, exponent) pairs.
pub fn factorize(x: &CyclotomicElement) -> Result<Vec<(PrimeIdeal, i64)>> {
    if x.is_zero() {
        return Err(invalid!("cannot factor zero"));
    }
    let mut out = Vec::new();
    for q in rational_support(&x.norm())? {
        for p in primes_above(x.field(), q)? {
            let v = p.valuation(x).expect("nonzero");
            if v != 0 {
                out.push((p, v));
            }
        }
    }
    Ok(out)
}
