//! Trace-form lattices (I, α) over Q(ζ_m) with Gram Tr(α x ȳ): Craig-like
//! lattices, discriminant ideals, twists, evenness and realisation of
//! admissible discriminant ideals.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::abelian::{AbelianField, Behavior};
use crate::arith::{factor, factor_big};
use crate::cyclotomic::{find_sign_unit, CyclotomicElement, CyclotomicField, SignUnits};
use crate::error::{Error, Result};
use crate::ideals::{
    ideal_power_basis, make_totally_positive, prime_generator, primes_above, rational_support,
    real_prime_generator, IdealBasis, PrimeIdeal, PrimeLabel, SearchBound,
};
use crate::invalid;
use crate::lattice::IntegerLattice;
use crate::matrix::{self, IMat};

#[derive(Clone, Debug)]
pub struct TraceLattice {
    field: Arc<CyclotomicField>,
    ideal: IdealBasis,
    alpha: CyclotomicElement,
    lattice: IntegerLattice,
}

/// Gram matrix Tr(β ζ^{i−j}) for β = α γ γ̄.
fn toeplitz_gram(field: &Arc<CyclotomicField>, beta: &CyclotomicElement) -> Result<IMat> {
    let n = field.degree();
    let den = beta.denominator();
    let mut traces: BTreeMap<i64, BigInt> = BTreeMap::new();
    for t in -(n as i64 - 1)..(n as i64) {
        let mut acc = BigInt::zero();
        for (i, c) in beta.numerators().iter().enumerate() {
            if !c.is_zero() {
                acc += c * field.trace_of_zeta_power(i as i64 + t);
            }
        }
        let v = BigRational::new(acc, den.clone());
        if !v.is_integer() {
            return Err(invalid!("trace form is not integral on this ideal"));
        }
        traces.insert(t, v.to_integer());
    }
    Ok((0..n)
        .map(|i| (0..n).map(|j| traces[&(i as i64 - j as i64)].clone()).collect())
        .collect())
}

/// The lattice (I, α) with q(x, y) = Tr(α x ȳ).
pub fn trace_lattice(ideal: IdealBasis, alpha: CyclotomicElement) -> Result<TraceLattice> {
    let field = ideal.field().clone();
    if alpha.field().m() != field.m() {
        return Err(invalid!("α and I live in different fields"));
    }
    if alpha.is_zero() {
        return Err(invalid!("α must be nonzero"));
    }
    if !alpha.is_real() {
        return Err(invalid!("α must be fixed by complex conjugation"));
    }
    let g = &ideal.generator;
    let beta = &(&alpha * g) * &g.conjugate();
    let gram = toeplitz_gram(&field, &beta)?;
    let lattice = IntegerLattice::new(gram).map_err(|_| Error::Internal("singular trace form".into()))?;
    Ok(TraceLattice { field, ideal, alpha, lattice })
}

impl TraceLattice {
    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn abelian_field(&self) -> AbelianField {
        AbelianField::cyclotomic(self.field.m()).expect("valid conductor")
    }

    pub fn ideal(&self) -> &IdealBasis {
        &self.ideal
    }

    pub fn alpha(&self) -> &CyclotomicElement {
        &self.alpha
    }

    pub fn lattice(&self) -> &IntegerLattice {
        &self.lattice
    }

    pub fn gram(&self) -> &IMat {
        self.lattice.gram()
    }

    pub fn det(&self) -> BigInt {
        self.lattice.det()
    }

    pub fn signature(&self) -> (usize, usize) {
        self.lattice.signature()
    }

    /// Signs of α at the real embeddings of F; these fix the signature.
    pub fn alpha_signs(&self) -> Result<Vec<i8>> {
        self.alpha.embedding_signs()
    }

    /// L(−1) as the trace lattice (I, −α).
    pub fn negate(&self) -> Result<TraceLattice> {
        trace_lattice(self.ideal.clone(), -&self.alpha)
    }
}

/// v_P(D_E) = δ and d with δ = 1 − 2d for E = Q(ζ_{p^r}).
pub fn craig_delta(p: u64, r: u32) -> Result<(i64, i64)> {
    if p == 2 || !crate::arith::is_prime(p) || r == 0 {
        return Err(invalid!("Craig-like lattices need an odd prime p and r >= 1"));
    }
    let m = p.pow(r);
    let delta = AbelianField::cyclotomic(m)?.different_exponent(p)? as i64;
    Ok((delta, (1 - delta) / 2))
}

fn prime_power_field(p: u64, r: u32) -> Result<Arc<CyclotomicField>> {
    craig_delta(p, r)?;
    CyclotomicField::new(p.pow(r))
}

/// C_k = (P^k, 1) for k ≥ d; positive definite of determinant p^{δ+2k}.
pub fn craig_c(p: u64, r: u32, k: i64) -> Result<TraceLattice> {
    let (_, d) = craig_delta(p, r)?;
    if k < d {
        return Err(invalid!("C_k needs k >= d = {d}"));
    }
    let field = prime_power_field(p, r)?;
    trace_lattice(ideal_power_basis(&field, k)?, CyclotomicElement::one(&field))
}

fn craig_index(p: u64, r: u32, a: i64) -> Result<i64> {
    let (delta, _) = craig_delta(p, r)?;
    if a < 1 {
        return Err(invalid!("a must be at least 1"));
    }
    if (a - delta) % 2 != 0 {
        return Err(invalid!("a = {a} must have the parity of δ = {delta}"));
    }
    Ok((a - delta) / 2)
}

/// Λ_a = (P^k, u) with k = (a − δ)/2 and u a unit positive only at the first
/// real embedding; signature (2, 2n − 2), |det| = p^a.
pub fn lambda_a(p: u64, r: u32, a: i64) -> Result<TraceLattice> {
    let k = craig_index(p, r, a)?;
    let field = prime_power_field(p, r)?;
    let u = find_sign_unit(&field, 0)?;
    trace_lattice(ideal_power_basis(&field, k)?, u)
}

/// Δ_a = C_k(−1) with k = (a − δ)/2; negative definite, |det| = p^a.
pub fn delta_a(p: u64, r: u32, a: i64) -> Result<TraceLattice> {
    let k = craig_index(p, r, a)?;
    let field = prime_power_field(p, r)?;
    trace_lattice(ideal_power_basis(&field, k)?, CyclotomicElement::from_integer(&field, -1))
}

/// One prime factor P^e of an ideal, with the data needed by the oracles.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DiscEntry {
    pub label: PrimeLabel,
    /// Ramification index of P over Q.
    pub e_ram: u64,
    pub f: u64,
    pub conjugation_fixed: bool,
    pub exponent: i64,
}

impl DiscEntry {
    pub fn p(&self) -> u64 {
        self.label.q
    }

    pub fn prime_norm(&self) -> BigInt {
        BigInt::from(self.label.q).pow(self.f as u32)
    }
}

/// A fractional ideal of Z[ζ_m] as an exponent map on labelled primes.
/// Entries have nonzero exponents and are sorted by label.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiscriminantIdeal {
    m: u64,
    entries: Vec<DiscEntry>,
}

impl fmt::Display for DiscriminantIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "O_E");
        }
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "{}^{}", e.label, e.exponent)?;
        }
        Ok(())
    }
}

impl DiscriminantIdeal {
    pub fn unit(m: u64) -> Self {
        DiscriminantIdeal { m, entries: Vec::new() }
    }

    /// Merges repeated primes and drops zero exponents.
    pub fn from_primes(field: &Arc<CyclotomicField>, factors: &[(PrimeIdeal, i64)]) -> Self {
        let mut map: BTreeMap<PrimeLabel, DiscEntry> = BTreeMap::new();
        for (p, e) in factors {
            map.entry(p.label.clone())
                .or_insert_with(|| DiscEntry {
                    label: p.label.clone(),
                    e_ram: p.e,
                    f: p.f,
                    conjugation_fixed: p.conjugation_fixed,
                    exponent: 0,
                })
                .exponent += e;
        }
        DiscriminantIdeal { m: field.m(), entries: map.into_values().filter(|e| e.exponent != 0).collect() }
    }

    /// Primes above `q` given by index in label order, e.g. `[(13, 0, 1)]`.
    pub fn from_indices(field: &Arc<CyclotomicField>, spec: &[(u64, usize, i64)]) -> Result<Self> {
        let mut factors = Vec::new();
        for &(q, idx, e) in spec {
            let mut ps = primes_above(field, q)?;
            if idx >= ps.len() {
                return Err(invalid!("only {} primes above {q}", ps.len()));
            }
            factors.push((ps.swap_remove(idx), e));
        }
        Ok(Self::from_primes(field, &factors))
    }

    /// The conjugation-stable ideal generated by the `idx`-th prime above q:
    /// P itself when P̄ = P, otherwise P·P̄.
    pub fn stable_prime(field: &Arc<CyclotomicField>, q: u64, idx: usize) -> Result<Self> {
        let ps = primes_above(field, q)?;
        let p = ps.get(idx).ok_or_else(|| invalid!("only {} primes above {q}", ps.len()))?;
        if p.conjugation_fixed {
            return Ok(Self::from_primes(field, &[(p.clone(), 1)]));
        }
        let bar = p.conjugate()?;
        Ok(Self::from_primes(field, &[(p.clone(), 1), (bar, 1)]))
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn entries(&self) -> &[DiscEntry] {
        &self.entries
    }

    pub fn is_unit(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(|e| e.exponent > 0)
    }

    pub fn exponent(&self, label: &PrimeLabel) -> i64 {
        self.entries.iter().find(|e| &e.label == label).map_or(0, |e| e.exponent)
    }

    /// N(𝒟) = ∏ N(P)^{e_P} (a rational number for fractional ideals).
    pub fn norm(&self) -> BigRational {
        self.entries.iter().fold(BigRational::one(), |acc, e| {
            let n = BigRational::from_integer(e.prime_norm());
            if e.exponent >= 0 {
                acc * n.pow(e.exponent as i32)
            } else {
                acc / n.pow((-e.exponent) as i32)
            }
        })
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.m != other.m {
            return Err(invalid!("ideals of different fields"));
        }
        let mut map: BTreeMap<PrimeLabel, DiscEntry> =
            self.entries.iter().map(|e| (e.label.clone(), e.clone())).collect();
        for e in &other.entries {
            map.entry(e.label.clone())
                .and_modify(|x| x.exponent += e.exponent)
                .or_insert_with(|| e.clone());
        }
        Ok(DiscriminantIdeal { m: self.m, entries: map.into_values().filter(|e| e.exponent != 0).collect() })
    }

    pub fn is_coprime_to(&self, other: &Self) -> bool {
        self.entries.iter().all(|e| other.exponent(&e.label) == 0)
    }

    pub fn conjugate(&self) -> Self {
        self.galois(-1)
    }

    /// σ_a(𝒟) for ζ ↦ ζ^a.
    pub fn galois(&self, a: i64) -> Self {
        let mut entries: Vec<DiscEntry> = self
            .entries
            .iter()
            .map(|e| DiscEntry { label: e.label.galois(self.m, a), ..e.clone() })
            .collect();
        entries.sort();
        DiscriminantIdeal { m: self.m, entries }
    }

    pub fn is_conjugation_stable(&self) -> bool {
        &self.conjugate() == self
    }

    /// Invariant factors of O_E/𝒟 grouped by prime: for each q, the list of
    /// exponents c with a cyclic summand Z/q^c, descending.
    pub fn group_structure(&self) -> Result<BTreeMap<u64, Vec<u32>>> {
        if !self.is_integral() {
            return Err(invalid!("O_E/𝒟 needs an integral ideal"));
        }
        let mut out: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
        for e in &self.entries {
            // O_P has a W(F_{q^f})-basis 1, π, ..., π^{e_ram−1}
            let k = e.exponent as u64;
            let slot = out.entry(e.p()).or_default();
            for i in 0..e.e_ram.min(k) {
                let c = (k - i).div_ceil(e.e_ram) as u32;
                slot.extend(core::iter::repeat(c).take(e.f as usize));
            }
        }
        for v in out.values_mut() {
            v.sort_unstable_by(|a, b| b.cmp(a));
        }
        Ok(out)
    }

    /// ℓ(O_E/𝒟): the largest q-rank.
    pub fn length(&self) -> Result<usize> {
        Ok(self.group_structure()?.values().map(|v| v.len()).max().unwrap_or(0))
    }
}

/// Primes of Q(ζ_m) dividing a nonzero element, with valuations.
fn valuations_at(
    primes: &[PrimeIdeal],
    x: &CyclotomicElement,
) -> Vec<i64> {
    primes.iter().map(|p| p.valuation(x).expect("nonzero")).collect()
}

/// 𝒟(L) = α I Ī D_E, cross-checked against det and the Smith form of the Gram.
pub fn discriminant_ideal(l: &TraceLattice) -> Result<DiscriminantIdeal> {
    let field = &l.field;
    let ab = l.abelian_field();
    let gamma = &l.ideal.generator;
    let mut qs = rational_support(&l.alpha.norm())?;
    qs.extend(rational_support(&gamma.norm())?);
    qs.extend(factor(field.m()).into_iter().map(|(p, _)| p));
    qs.sort_unstable();
    qs.dedup();
    let gbar = gamma.conjugate();
    let mut factors = Vec::new();
    for q in qs {
        let primes = primes_above(field, q)?;
        let d = if field.m() % q == 0 { ab.different_exponent(q)? as i64 } else { 0 };
        let va = valuations_at(&primes, &l.alpha);
        let vg = valuations_at(&primes, gamma);
        let vgb = valuations_at(&primes, &gbar);
        for (i, p) in primes.into_iter().enumerate() {
            let e = va[i] + vg[i] + vgb[i] + d;
            factors.push((p, e));
        }
    }
    let dis = DiscriminantIdeal::from_primes(field, &factors);
    cross_check(l, &dis)?;
    Ok(dis)
}

fn cross_check(l: &TraceLattice, dis: &DiscriminantIdeal) -> Result<()> {
    if !dis.is_integral() && !dis.is_unit() {
        return Err(Error::Internal(alloc::format!("discriminant ideal {dis} is not integral")));
    }
    let det = l.det().abs();
    if dis.norm() != BigRational::from_integer(det.clone()) {
        return Err(Error::Internal(alloc::format!("N({dis}) = {} but |det| = {det}", dis.norm())));
    }
    let mut lattice_side: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
    for d in l.lattice.discriminant_group().invariants {
        let f = factor_big(&d).ok_or_else(|| Error::Internal("invariant factor too large".into()))?;
        for (q, c) in f {
            lattice_side.entry(q).or_default().push(c);
        }
    }
    for v in lattice_side.values_mut() {
        v.sort_unstable_by(|a, b| b.cmp(a));
    }
    if lattice_side != dis.group_structure()? {
        return Err(Error::Internal(alloc::format!("Smith form of the Gram disagrees with O_E/{dis}")));
    }
    Ok(())
}

/// How evenness was established.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EvenCertificate {
    /// No dyadic place of F ramifies in E.
    NoDyadicRamification,
    /// w(α I Ī) ≥ 0 at every dyadic place w of E.
    DyadicValuations,
    /// Neither criterion applies; the answer comes from the Gram diagonal.
    DiagonalOnly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvenReport {
    pub even: bool,
    pub certificate: EvenCertificate,
}

pub fn is_even(l: &TraceLattice) -> Result<EvenReport> {
    let even = l.lattice.is_even();
    let ab = l.abelian_field();
    let rd = ab.relative_place_data(2)?;
    let certificate = if rd.places_of_f.iter().all(|p| p.behavior != Behavior::Ramified) {
        EvenCertificate::NoDyadicRamification
    } else {
        let g = &l.ideal.generator;
        let x = &(&l.alpha * g) * &g.conjugate();
        let ok = primes_above(&l.field, 2)?.iter().all(|p| p.valuation(&x).expect("nonzero") >= 0);
        if ok { EvenCertificate::DyadicValuations } else { EvenCertificate::DiagonalOnly }
    };
    if certificate != EvenCertificate::DiagonalOnly && !even {
        return Err(Error::Internal("evenness criterion holds but a diagonal entry is odd".into()));
    }
    Ok(EvenReport { even, certificate })
}

/// Whether L and L' become isomorphic over Q: same O_E-signature and equal
/// parity of discriminant exponents at every conjugation-fixed prime.
pub fn isogenous_over_q(a: &TraceLattice, b: &TraceLattice) -> Result<bool> {
    if a.field.m() != b.field.m() {
        return Err(invalid!("lattices over different fields"));
    }
    let sa = a.alpha_signs()?;
    let sb = b.alpha_signs()?;
    if sa != sb {
        return Err(invalid!("lattices do not have the same O_E-signature"));
    }
    let da = discriminant_ideal(a)?;
    let db = discriminant_ideal(b)?;
    let mut labels: Vec<&DiscEntry> = da.entries.iter().chain(&db.entries).filter(|e| e.conjugation_fixed).collect();
    labels.sort();
    labels.dedup_by(|x, y| x.label == y.label);
    Ok(labels
        .iter()
        .all(|e| (da.exponent(&e.label) - db.exponent(&e.label)).rem_euclid(2) == 0))
}

/// Twist of L by a conjugation-stable J coprime to 𝒟(L): split pairs enlarge
/// the ideal, conjugation-fixed primes unramified in E/F scale α by a totally
/// positive generator of the prime of F below.
pub fn twist(l: &TraceLattice, j: &DiscriminantIdeal, bound: SearchBound) -> Result<TraceLattice> {
    let field = &l.field;
    if j.m != field.m() {
        return Err(invalid!("J lives in another field"));
    }
    if j.is_unit() {
        return Ok(l.clone());
    }
    if !j.is_integral() {
        return Err(invalid!("J must be an integral ideal"));
    }
    if !j.is_conjugation_stable() {
        return Err(invalid!("J = {j} is not stable under complex conjugation"));
    }
    let dl = discriminant_ideal(l)?;
    if !j.is_coprime_to(&dl) {
        return Err(invalid!("J = {j} is not coprime to 𝒟(L) = {dl}"));
    }
    let target = dl.multiply(j)?;
    let report = crate::oracle::check_disc_conditions(&l.abelian_field(), l.signature(), &target)?;
    if !report.passes() {
        return Err(Error::NotRealizable(alloc::format!("𝒟(L)·J violates {}", report.failures().join(", "))));
    }
    let ab = l.abelian_field();
    let mut gamma = l.ideal.generator.clone();
    let mut label = l.ideal.label.clone();
    let mut pi = CyclotomicElement::one(field);
    let mut seen = Vec::new();
    for e in &j.entries {
        if seen.contains(&e.label) {
            continue;
        }
        let p = primes_above(field, e.p())?
            .into_iter()
            .find(|p| p.label == e.label)
            .ok_or_else(|| Error::Internal("label not found".into()))?;
        if !e.conjugation_fixed {
            seen.push(e.label.conjugate(field.m()));
            let g = prime_generator(&p, bound)?;
            gamma = &gamma * &g.pow(e.exponent)?;
            label.push((e.label.clone(), e.exponent));
            continue;
        }
        let behaviour = ab.relative_place_data(e.p())?.places_of_f[0].behavior;
        if behaviour == Behavior::Ramified {
            if e.exponent % 2 != 0 {
                return Err(Error::NotRealizable(alloc::format!(
                    "odd exponent at {} which ramifies in E/F",
                    e.label
                )));
            }
            let g = prime_generator(&p, bound)?;
            gamma = &gamma * &g.pow(e.exponent / 2)?;
            label.push((e.label.clone(), e.exponent / 2));
        } else {
            pi = &pi * &real_prime_generator(&p, bound)?.pow(e.exponent)?;
        }
    }
    let alpha = &l.alpha * &make_totally_positive(&pi)?;
    let out = trace_lattice(IdealBasis::principal(gamma, label)?, alpha)?;
    let got = discriminant_ideal(&out)?;
    if got != target || out.signature() != l.signature() {
        return Err(Error::Internal(alloc::format!("twist produced {got}, expected {target}")));
    }
    Ok(out)
}

/// Constructs (I, α) of the given signature with 𝒟(I, α) = 𝒟. Every prime
/// orbit is placed directly: split pairs in I, conjugation-fixed primes
/// ramified in E/F in I with half the excess over D_E, inert ones in α. The
/// sign pattern of α is then corrected by a unit, trying negative sets in
/// lexicographic order.
pub fn realize(
    field: &Arc<CyclotomicField>,
    signature: (usize, usize),
    target: &DiscriminantIdeal,
    bound: SearchBound,
) -> Result<TraceLattice> {
    let ab = AbelianField::cyclotomic(field.m())?;
    let report = crate::oracle::check_disc_conditions(&ab, signature, target)?;
    if !report.passes() {
        return Err(Error::NotRealizable(alloc::format!("conditions fail: {}", report.failures().join(", "))));
    }
    let mut qs: Vec<u64> = target.entries.iter().map(|e| e.p()).collect();
    qs.extend(factor(field.m()).into_iter().map(|(p, _)| p));
    qs.sort_unstable();
    qs.dedup();
    let mut gamma = CyclotomicElement::one(field);
    let mut label: Vec<(PrimeLabel, i64)> = Vec::new();
    let mut alpha0 = CyclotomicElement::one(field);
    for q in qs {
        let d = if field.m() % q == 0 { ab.different_exponent(q)? as i64 } else { 0 };
        let behaviour = ab.relative_place_data(q)?.places_of_f[0].behavior;
        let primes = primes_above(field, q)?;
        let mut done: Vec<PrimeLabel> = Vec::new();
        for p in &primes {
            if done.contains(&p.label) {
                continue;
            }
            let excess = target.exponent(&p.label) - d;
            if excess == 0 {
                continue;
            }
            if !p.conjugation_fixed {
                done.push(p.label.conjugate(field.m()));
                let g = prime_generator(p, bound)?;
                gamma = &gamma * &g.pow(excess)?;
                label.push((p.label.clone(), excess));
            } else if behaviour == Behavior::Ramified {
                if excess % 2 != 0 {
                    return Err(Error::NotRealizable(alloc::format!(
                        "exponent at {} has the wrong parity for a prime ramified in E/F",
                        p.label
                    )));
                }
                let g = prime_generator(p, bound)?;
                gamma = &gamma * &g.pow(excess / 2)?;
                label.push((p.label.clone(), excess / 2));
            } else {
                alpha0 = &alpha0 * &real_prime_generator(p, bound)?.pow(excess)?;
            }
        }
    }
    let n = field.real_embeddings().len();
    let negatives = signature.1 / 2;
    let signs0 = alpha0.embedding_signs()?;
    let units = SignUnits::new(field)?;
    let mut found = None;
    for set in combinations(n, negatives) {
        let want: Vec<i8> = (0..n)
            .map(|i| {
                let t: i8 = if set.contains(&i) { -1 } else { 1 };
                t * signs0[i]
            })
            .collect();
        if units.reachable(&want) {
            found = Some(units.unit_with_signs(&want)?);
            break;
        }
    }
    let u = found.ok_or_else(|| {
        Error::SearchExhausted(alloc::format!(
            "no unit gives α {negatives} negative real embeddings for {target}"
        ))
    })?;
    let alpha = &alpha0 * &u;
    let l = trace_lattice(IdealBasis::principal(gamma, label)?, alpha)?;
    let got = discriminant_ideal(&l)?;
    if &got != target || l.signature() != signature {
        return Err(Error::Internal(alloc::format!("realised {got} with signature {:?}", l.signature())));
    }
    Ok(l)
}

/// k-subsets of 0..n in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] != i + n - k) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Matrix of multiplication by ζ^k on the basis γζ^i; rows are images.
pub fn zeta_isometry(l: &TraceLattice, k: i64) -> Result<IMat> {
    let field = &l.field;
    let n = field.degree();
    let m: IMat = (0..n)
        .map(|i| field.zeta_power_coords(i as i64 + k).iter().map(|&c| BigInt::from(c)).collect())
        .collect();
    let g = l.gram();
    let mg = matrix::mul(&matrix::mul(&m, g), &matrix::transpose(&m));
    if &mg != g {
        return Err(Error::Internal("multiplication by ζ does not preserve the form".into()));
    }
    Ok(m)
}

/// Human-readable description of an ideal label list.
pub fn describe_ideal(ideal: &IdealBasis) -> String {
    ideal.label_string()
}

/// Multiplicative order of a square integer matrix, up to `limit`.
pub fn matrix_order(m: &IMat, limit: u64) -> Option<u64> {
    let id = matrix::identity(m.len());
    let mut acc = m.clone();
    for k in 1..=limit {
        if acc == id {
            return Some(k);
        }
        acc = matrix::mul(&acc, m);
    }
    None
}

/// |det| as u64 when it fits.
pub fn det_u64(l: &TraceLattice) -> Option<u64> {
    l.det().abs().to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{standard_form, witt_equal};
    use crate::lattice::{standard_lattice, StandardName};

    fn field(m: u64) -> Arc<CyclotomicField> {
        CyclotomicField::new(m).unwrap()
    }

    #[test]
    fn deltas() {
        assert_eq!(craig_delta(3, 1).unwrap(), (1, 0));
        assert_eq!(craig_delta(7, 1).unwrap(), (5, -2));
        assert_eq!(craig_delta(3, 2).unwrap(), (9, -4));
        assert_eq!(craig_delta(5, 2).unwrap(), (35, -17));
    }

    #[test]
    fn a2_from_zeta3() {
        let k = field(3);
        let l = trace_lattice(IdealBasis::unit(&k), CyclotomicElement::one(&k)).unwrap();
        assert_eq!(l.gram(), &matrix::imat_from_i64(&[vec![2, -1], vec![-1, 2]]));
        let neg = trace_lattice(IdealBasis::unit(&k), CyclotomicElement::from_integer(&k, -1)).unwrap();
        assert_eq!(neg.lattice(), &standard_lattice(StandardName::A(2)).unwrap().negate());
        assert_eq!(craig_c(3, 1, 0).unwrap().lattice(), l.lattice());
    }

    #[test]
    fn craig_determinants() {
        for (p, r) in [(3u64, 1u32), (5, 1), (7, 1), (3, 2)] {
            let (delta, d) = craig_delta(p, r).unwrap();
            for k in d..d + 3 {
                let l = craig_c(p, r, k).unwrap();
                assert_eq!(l.det(), BigInt::from(p).pow((delta + 2 * k) as u32));
                assert!(l.lattice().is_even() && l.lattice().is_positive_definite());
            }
        }
    }

    #[test]
    fn lambda_signature_and_det() {
        let l = lambda_a(7, 1, 3).unwrap();
        assert_eq!(l.signature(), (2, 4));
        assert_eq!(l.det().abs(), BigInt::from(343));
        let d = discriminant_ideal(&l).unwrap();
        assert_eq!(d.entries().len(), 1);
        assert_eq!(d.entries()[0].exponent, 3);
        assert_eq!(d.length().unwrap(), 3);
    }

    #[test]
    fn disc_ideal_of_c0() {
        let d = discriminant_ideal(&craig_c(3, 1, 0).unwrap()).unwrap();
        assert_eq!(d.entries().len(), 1);
        assert_eq!((d.entries()[0].p(), d.entries()[0].exponent), (3, 1));
    }

    #[test]
    fn witt_of_lambda_one() {
        let f = lambda_a(7, 1, 1).unwrap().lattice().discriminant_form().unwrap();
        assert!(witt_equal(&f, &standard_form(7, 1, -1).unwrap()).unwrap());
    }

    #[test]
    fn twists() {
        let k = field(7);
        let l = lambda_a(7, 1, 1).unwrap();
        let j = DiscriminantIdeal::stable_prime(&k, 13, 0).unwrap();
        assert_eq!(j.entries().len(), 1);
        let t = twist(&l, &j, SearchBound::default()).unwrap();
        assert_eq!(t.det().abs(), BigInt::from(7 * 169));
        assert_eq!(t.signature(), (2, 4));
        assert!(!isogenous_over_q(&l, &t).unwrap());
        let j2 = DiscriminantIdeal::stable_prime(&k, 2, 0).unwrap();
        assert_eq!(j2.entries().len(), 2);
        let t2 = twist(&l, &j2, SearchBound::default()).unwrap();
        assert_eq!(t2.det().abs(), BigInt::from(7 * 64));
        assert!(isogenous_over_q(&l, &t2).unwrap());
        let same = twist(&l, &DiscriminantIdeal::unit(7), SearchBound::default()).unwrap();
        assert_eq!(same.gram(), l.gram());
    }

    #[test]
    fn zeta_action() {
        let l = lambda_a(7, 1, 1).unwrap();
        let m = zeta_isometry(&l, 1).unwrap();
        assert_eq!(matrix_order(&m, 20), Some(7));
        let phi7: Vec<BigInt> = (0..7).map(|_| BigInt::one()).collect();
        assert_eq!(matrix::char_poly(&m), phi7);
        assert_eq!(zeta_isometry(&l, 0).unwrap(), matrix::identity(6));
        let a2 = craig_c(3, 1, 0).unwrap();
        assert_eq!(matrix_order(&zeta_isometry(&a2, 1).unwrap(), 10), Some(3));
    }

    #[test]
    fn evenness_certificates() {
        let r = is_even(&lambda_a(7, 1, 1).unwrap()).unwrap();
        assert_eq!(r, EvenReport { even: true, certificate: EvenCertificate::NoDyadicRamification });
        let k = field(4);
        let odd = trace_lattice(IdealBasis::unit(&k), CyclotomicElement::from_rational(&k, &BigRational::new(1.into(), 2.into()))).unwrap();
        let r = is_even(&odd).unwrap();
        assert!(!r.even);
        assert_eq!(r.certificate, EvenCertificate::DiagonalOnly);
    }

    #[test]
    fn group_structure_of_ramified_powers() {
        let k = field(3);
        let d = DiscriminantIdeal::from_indices(&k, &[(3, 0, 3)]).unwrap();
        assert_eq!(d.group_structure().unwrap()[&3], vec![2, 1]);
        let k9 = field(9);
        let d = DiscriminantIdeal::from_indices(&k9, &[(3, 0, 7)]).unwrap();
        assert_eq!(d.group_structure().unwrap()[&3], vec![2, 1, 1, 1, 1, 1]);
    }

    #[test]
    fn combos() {
        assert_eq!(combinations(4, 2).len(), 6);
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
    }
}
