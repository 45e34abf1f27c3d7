//! Decision procedures for CM trace lattices and K3 lattice data: admissible
//! discriminant ideals, existence of K3 surfaces with maximal CM, embedding
//! predicates, degree-20 Picard lattices and surface records.

use alloc::borrow::ToOwned;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use crate::abelian::{AbelianField, Behavior, SClass};
use crate::arith::{factor, is_prime, is_square_mod, primes_below, squarefree_decomposition};
use crate::cyclotomic::CyclotomicField;
use crate::error::{Error, Result};
use crate::ideals::{primes_above, PrimeIdeal, SearchBound};
use crate::invalid;
use crate::lattice::{glue_even_unimodular, standard_lattice, Glued, IntegerLattice, StandardName};
use crate::matrix::{self, IMat};
use crate::trace::{
    delta_a, discriminant_ideal, lambda_a, twist, DiscriminantIdeal, TraceLattice,
};

/// Outcome of one named condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Condition {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscReport {
    pub conditions: Vec<Condition>,
}

impl DiscReport {
    pub fn passes(&self) -> bool {
        self.conditions.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<String> {
        self.conditions.iter().filter(|c| !c.pass).map(|c| format!("({}) {}", c.name, c.detail)).collect()
    }
}

fn cyclotomic_of(e: &AbelianField, m: u64) -> Result<Arc<CyclotomicField>> {
    if !e.is_cyclotomic() {
        return Err(invalid!("discriminant ideals are supported over cyclotomic fields only"));
    }
    if e.conductor() != m {
        return Err(invalid!("ideal belongs to Q(zeta_{m}), field has conductor {}", e.conductor()));
    }
    CyclotomicField::new(m)
}

/// Per rational prime q | m: behaviour of its F-places in E and v(D_E).
fn ramification_table(e: &AbelianField) -> Result<BTreeMap<u64, (Behavior, i64)>> {
    let mut out = BTreeMap::new();
    for (q, _) in factor(e.conductor()) {
        let rd = e.relative_place_data(q)?;
        out.insert(q, (rd.places_of_f[0].behavior, e.different_exponent(q)? as i64));
    }
    Ok(out)
}

/// Evaluates conditions (i)–(v) for a CM field E, a signature and an ideal
/// 𝒟, plus the parity forced at primes ramified in E/F with even different
/// exponent (v_P(α I Ī) is even there).
pub fn check_disc_conditions(
    e: &AbelianField,
    signature: (usize, usize),
    d: &DiscriminantIdeal,
) -> Result<DiscReport> {
    if !e.is_cm() {
        return Err(Error::NotCm(format!("conductor {} with subgroup {:?}", e.conductor(), e.subgroup())));
    }
    let field = cyclotomic_of(e, d.m())?;
    let degree = e.degree() as usize;
    let (s1, s2) = signature;
    if s1 + s2 != degree {
        return Err(invalid!("signature ({s1}, {s2}) does not add up to the degree {degree}"));
    }
    let n = degree / 2;
    // CM: every real place of F extends to an imaginary place of E, so s = n
    let s = n;
    let mut conditions = Vec::new();
    let base = n - s;
    conditions.push(Condition {
        name: "i",
        pass: s1 >= base && s2 >= base && s1 % 2 == base % 2 && s2 % 2 == base % 2,
        detail: format!("σ₁ = {s1}, σ₂ = {s2}, n − s = {base}"),
    });
    conditions.push(Condition {
        name: "ii",
        pass: d.is_integral() || d.is_unit(),
        detail: format!("{} prime factors, all exponents positive", d.entries().len()),
    });
    let bad_conj: Vec<String> = d
        .entries()
        .iter()
        .filter(|x| d.exponent(&x.label.conjugate(d.m())) != x.exponent)
        .map(|x| x.label.to_string())
        .collect();
    conditions.push(Condition {
        name: "iii",
        pass: bad_conj.is_empty(),
        detail: if bad_conj.is_empty() { "e of P-bar equals e of P".into() } else { format!("asymmetric at {}", bad_conj.join(", ")) },
    });
    let table = ramification_table(e)?;
    let mut ram_odd_bad = Vec::new();
    let mut ram_even_bad = Vec::new();
    let mut any_ram = false;
    for (&q, &(behaviour, dexp)) in &table {
        if behaviour != Behavior::Ramified {
            continue;
        }
        any_ram = true;
        for p in primes_above(&field, q)? {
            let x = d.exponent(&p.label);
            if dexp % 2 == 1 && x % 2 == 0 {
                ram_odd_bad.push(format!("{} has exponent {x}", p.label));
            }
            if dexp % 2 == 0 && x % 2 != 0 {
                ram_even_bad.push(format!("{} has exponent {x}", p.label));
            }
        }
    }
    conditions.push(Condition {
        name: "iv",
        pass: ram_odd_bad.is_empty(),
        detail: if ram_odd_bad.is_empty() { "odd exponents at Ram_odd".into() } else { ram_odd_bad.join("; ") },
    });
    // m = #{v ∈ Int : e_{P_v} odd}
    let mut inert_odd = 0usize;
    for x in d.entries() {
        if !x.conjugation_fixed || x.exponent % 2 == 0 {
            continue;
        }
        let behaviour = match table.get(&x.p()) {
            Some(&(b, _)) => b,
            None => e.relative_place_data(x.p())?.places_of_f[0].behavior,
        };
        if behaviour == Behavior::Inert {
            inert_odd += 1;
        }
    }
    let tau = s1 as i64 - s2 as i64;
    let v_ok = any_ram || (tau - 4 * inert_odd as i64).rem_euclid(8) == 0;
    conditions.push(Condition {
        name: "v",
        pass: v_ok,
        detail: if any_ram {
            "Ram is nonempty".into()
        } else {
            format!("σ₁ − σ₂ = {tau}, m = {inert_odd}, need σ₁ − σ₂ ≡ 4m (mod 8)")
        },
    });
    conditions.push(Condition {
        name: "ram-parity",
        pass: ram_even_bad.is_empty(),
        detail: if ram_even_bad.is_empty() { "even exponents where v(D_E) is even and P ramifies in E/F".into() } else { ram_even_bad.join("; ") },
    });
    Ok(DiscReport { conditions })
}

/// A prime orbit under conjugation: one prime (fixed) or a pair.
struct Orbit {
    primes: Vec<PrimeIdeal>,
    /// Norm contributed by exponent 1 on the whole orbit.
    norm: BigInt,
    /// Exponent must be odd (Ram_odd).
    forced_odd: bool,
}

/// All integral ideals of norm ≤ `norm_bound` satisfying the conditions for
/// `signature`, ordered by norm and then by label.
pub fn enumerate_admissible(
    e: &AbelianField,
    signature: (usize, usize),
    norm_bound: u64,
) -> Result<Vec<DiscriminantIdeal>> {
    if norm_bound == 0 {
        return Err(invalid!("norm bound must be at least 1"));
    }
    let m = e.conductor();
    let field = cyclotomic_of(e, m)?;
    let table = ramification_table(e)?;
    let mut orbits = Vec::new();
    for q in primes_below(norm_bound + 1) {
        let mut done = Vec::new();
        for p in primes_above(&field, q)? {
            if done.contains(&p.label) {
                continue;
            }
            let pn = BigInt::from(q).pow(p.f as u32);
            let forced_odd = matches!(table.get(&q), Some(&(Behavior::Ramified, d)) if d % 2 == 1);
            if p.conjugation_fixed {
                if pn <= BigInt::from(norm_bound) || forced_odd {
                    orbits.push(Orbit { primes: vec![p.clone()], norm: pn, forced_odd });
                }
            } else {
                let bar = p.conjugate()?;
                done.push(bar.label.clone());
                let n2 = &pn * &pn;
                if n2 <= BigInt::from(norm_bound) {
                    orbits.push(Orbit { primes: vec![p.clone(), bar], norm: n2, forced_odd });
                }
            }
        }
    }
    let bound = BigInt::from(norm_bound);
    let mut out: Vec<(BigInt, DiscriminantIdeal)> = Vec::new();
    let mut exps = vec![0i64; orbits.len()];
    fn rec(
        i: usize,
        norm: &BigInt,
        bound: &BigInt,
        orbits: &[Orbit],
        exps: &mut Vec<i64>,
        emit: &mut dyn FnMut(&[i64], &BigInt),
    ) {
        if i == orbits.len() {
            emit(exps, norm);
            return;
        }
        let mut k = 0i64;
        let mut cur = norm.clone();
        loop {
            if &cur > bound {
                break;
            }
            if !orbits[i].forced_odd || k % 2 == 1 {
                exps[i] = k;
                rec(i + 1, &cur, bound, orbits, exps, emit);
            }
            k += 1;
            cur = &cur * &orbits[i].norm;
        }
        exps[i] = 0;
    }
    let mut err = None;
    rec(0, &BigInt::one(), &bound, &orbits, &mut exps, &mut |ex: &[i64], norm: &BigInt| {
        let factors: Vec<(PrimeIdeal, i64)> = orbits
            .iter()
            .zip(ex)
            .filter(|(_, &k)| k > 0)
            .flat_map(|(o, &k)| o.primes.iter().map(move |p| (p.clone(), k)))
            .collect();
        let d = DiscriminantIdeal::from_primes(&field, &factors);
        match check_disc_conditions(e, signature, &d) {
            Ok(r) if r.passes() => out.push((norm.clone(), d)),
            Ok(_) => {}
            Err(x) => err = Some(x),
        }
    });
    if let Some(x) = err {
        return Err(x);
    }
    out.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.entries().cmp(b.1.entries())));
    Ok(out.into_iter().map(|(_, d)| d).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Existence {
    InfinitelyMany,
    None,
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExistenceVerdict {
    pub verdict: Existence,
    pub reason: String,
    /// (p, f) for the primes that decided or blocked the verdict.
    pub primes: Vec<(u64, u64)>,
}

/// Trichotomy for K3 surfaces with CM by O_E: the f(p) < 22 − 2n criterion,
/// the non-existence test for an odd prime of F ramified in E with residual
/// degree above 22 − 2n, and the gap between them.
pub fn exists_maximal_cm_k3(e: &AbelianField) -> Result<ExistenceVerdict> {
    if !e.is_cm() {
        return Err(Error::NotCm(format!("conductor {} with subgroup {:?}", e.conductor(), e.subgroup())));
    }
    let degree = e.degree();
    if degree > 20 {
        return Err(invalid!("degree {degree} exceeds 20"));
    }
    let n = degree / 2;
    let limit = 22 - 2 * n;
    let ram = e.ramified_primes()?;
    if ram.is_empty() {
        return Ok(ExistenceVerdict {
            verdict: Existence::InfinitelyMany,
            reason: "no finite place of F ramifies in E".into(),
            primes: Vec::new(),
        });
    }
    let mut fs = Vec::new();
    for (p, _) in factor(e.conductor()) {
        let f = e.f_of_p(p)?;
        if f > 0 {
            fs.push((p, f));
        }
    }
    let blocking: Vec<(u64, u64)> = fs.iter().copied().filter(|&(_, f)| f >= limit).collect();
    if blocking.is_empty() {
        return Ok(ExistenceVerdict {
            verdict: Existence::InfinitelyMany,
            reason: format!("f(p) < {limit} for every p with Ram(p) nonempty"),
            primes: fs,
        });
    }
    let f_field = e.maximal_real_subfield()?;
    for &p in &ram {
        if p == 2 {
            continue;
        }
        let f = f_field.prime_splitting(p)?.f;
        if f > limit {
            return Ok(ExistenceVerdict {
                verdict: Existence::None,
                reason: format!("ramified prime {p} with f={f} > {limit}"),
                primes: vec![(p, f)],
            });
        }
    }
    Ok(ExistenceVerdict {
        verdict: Existence::Undetermined,
        reason: format!("f(p) >= {limit} but no odd ramified prime of F has residual degree above {limit}"),
        primes: blocking,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddingReport {
    pub length: usize,
    pub primitively_embeds: bool,
    pub uniquely_embeds: bool,
    /// The rank-20 case with ℓ = 2 settled by the (F_p)², det −p² criterion.
    pub special_case: bool,
}

/// Primitive and unique embedding into the even unimodular lattice of
/// signature (3, 19): ℓ < 22 − 2n, resp. ℓ ≤ 20 − 2n, plus the rank-20 case.
pub fn embedding_predicates(l: &IntegerLattice) -> Result<EmbeddingReport> {
    if !l.is_even() {
        return Err(invalid!("embedding predicates need an even lattice"));
    }
    let rank = l.rank();
    let (s1, s2) = l.signature();
    if s1 != 2 || rank % 2 != 0 || rank > 22 {
        return Err(invalid!("expected signature (2, 2n − 2), got ({s1}, {s2})"));
    }
    let two_n = rank;
    let length = l.length();
    let mut primitively = length + two_n < 22;
    let uniquely = length + two_n <= 20;
    let mut special = false;
    if !primitively && two_n == 20 && length == 2 {
        let form = l.discriminant_form()?;
        let ok = form.p_primary_decompose().into_iter().all(|(p, part)| {
            if part.rank() < 2 {
                return true;
            }
            if p == 2 || part.orders() != [p, p] {
                return false;
            }
            // det of p·b over F_p must be −1 times a square
            let scale = BigRational::from_integer(p.into());
            let entry = |i, j| {
                (part.bilinear_entry(i, j) * &scale).to_integer().to_i64().expect("small") % p as i64
            };
            let det = entry(0, 0) * entry(1, 1) - entry(0, 1) * entry(1, 0);
            let det = det.rem_euclid(p as i64);
            det != 0 && is_square_mod(-det, p)
        });
        if ok {
            primitively = true;
            special = true;
        }
    }
    Ok(EmbeddingReport { length, primitively_embeds: primitively, uniquely_embeds: uniquely, special_case: special })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PicardQuery {
    /// Picard lattice U(N) sought; |det T| = N².
    N(u64),
    /// |det T| given directly.
    Det(u64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PicardVerdict {
    U { n: u64, note: Option<String> },
    QI { d: u64, c: u64, gram: IMat, note: Option<String> },
    NotRealizable { reason: String },
}

/// S1/S2 membership for primes not dividing the conductor; S3 for the rest.
fn picard_class(e: &AbelianField, p: u64) -> Result<SClass> {
    let c = e.s_class(p)?;
    if e.conductor() % p == 0 {
        return Ok(if c == SClass::S3 { SClass::S3 } else { SClass::None });
    }
    Ok(if c == SClass::S3 { SClass::None } else { c })
}

fn ramified_s2_note(e: &AbelianField, n: u64) -> Result<Option<String>> {
    for (p, _) in factor(n) {
        if e.conductor() % p == 0 && e.s_class(p)? == SClass::S2 {
            return Ok(Some(format!(
                "{p} divides the conductor; its conjugation-fixed prime has norm {p}^2 but is excluded from S2"
            )));
        }
    }
    Ok(None)
}

/// Degree-20 Picard lattices: U(N) when S3 = ∅ (N ∈ 𝒩_E), and when S3 ≠ ∅
/// either U(N) for square determinant or the binary form q_I over Q(√d_E).
pub fn picard_classify(e: &AbelianField, query: PicardQuery) -> Result<PicardVerdict> {
    if e.degree() != 20 {
        return Err(invalid!("Picard classification needs degree 20, got {}", e.degree()));
    }
    if !e.is_cm() {
        return Err(Error::NotCm("Picard classification needs a CM field".into()));
    }
    let s3: Vec<u64> = factor(e.conductor())
        .into_iter()
        .map(|(p, _)| p)
        .filter(|&p| e.s_class(p).map(|c| c == SClass::S3).unwrap_or(false))
        .collect();
    let unramified = e.ramified_primes()?.is_empty();
    let det = match query {
        PicardQuery::N(n) => {
            if n == 0 {
                return Err(invalid!("N must be positive"));
            }
            u128::from(n) * u128::from(n)
        }
        PicardQuery::Det(d) => {
            if d == 0 {
                return Err(invalid!("det must be nonzero"));
            }
            u128::from(d)
        }
    };
    let det = u64::try_from(det).map_err(|_| invalid!("determinant too large"))?;
    let (d_free, c) = squarefree_decomposition(det);
    // membership of N in 𝒩_E (S3 = ∅) or 𝓜_E (S3 ≠ ∅)
    let check_n = |n: u64| -> Result<core::result::Result<(), String>> {
        let mut s2_sum = 0u32;
        for (p, k) in factor(n) {
            match picard_class(e, p)? {
                SClass::S1 => {}
                SClass::S2 => s2_sum += k,
                SClass::S3 if !s3.is_empty() => {
                    if k % 2 != 0 {
                        return Ok(Err(format!("{p} ∈ S3 occurs to the odd power {k}")));
                    }
                }
                _ => {
                    let mut msg = format!("prime divisor {p} lies in neither S1 nor S2");
                    if let Some(note) = ramified_s2_note(e, p)? {
                        msg.push_str(&format!(" ({note})"));
                    }
                    return Ok(Err(msg));
                }
            }
        }
        if s3.is_empty() && unramified && s2_sum % 2 != 0 {
            return Ok(Err(format!("S2-exponent sum {s2_sum} is odd")));
        }
        Ok(Ok(()))
    };
    if d_free == 1 {
        let n = c;
        return Ok(match check_n(n)? {
            Ok(()) => PicardVerdict::U {
                n,
                note: (n == 1 && s3.is_empty()).then(|| "Kondo".to_owned()),
            },
            Err(reason) => PicardVerdict::NotRealizable { reason },
        });
    }
    if s3.is_empty() {
        return Ok(PicardVerdict::NotRealizable {
            reason: format!("S3 is empty, so |det| must be a square; got {det}"),
        });
    }
    let d_e: u64 = s3.iter().product();
    if d_free != d_e {
        return Ok(PicardVerdict::NotRealizable {
            reason: format!("squarefree part {d_free} differs from d_E = {d_e}"),
        });
    }
    if let Err(reason) = check_n(c)? {
        return Ok(PicardVerdict::NotRealizable { reason: format!("conductor {c}: {reason}") });
    }
    let disc = d_e * c * c;
    let gram = match disc % 4 {
        1 => vec![vec![2, 1], vec![1, (1 - disc as i64) / 2]],
        0 => vec![vec![2, 0], vec![0, -(disc as i64) / 2]],
        _ => return Err(invalid!("no even binary form of determinant −{disc}")),
    };
    Ok(PicardVerdict::QI {
        d: d_e,
        c,
        gram: matrix::imat_from_i64(&gram),
        note: (c == 1 && e.conductor() == 25).then(|| "Vorontsov".to_owned()),
    })
}

/// Lattice-side record of a K3 surface with CM by Q(ζ_p).
#[derive(Clone, Debug)]
pub struct K3SurfaceRecord {
    pub p: u64,
    pub a: i64,
    pub j: DiscriminantIdeal,
    pub t: TraceLattice,
    pub delta: TraceLattice,
    pub s: Option<IntegerLattice>,
    pub glued: Option<Glued>,
    pub disc_module: DiscriminantIdeal,
    pub length: usize,
    pub embedding: EmbeddingReport,
    /// Δ_{a,J} contains no vector of norm −2.
    pub root_free: bool,
    /// Number of isomorphism classes with this discriminant ideal (h_E = 1).
    pub class_count: u64,
    pub notes: Vec<String>,
}

/// X_{a,J}: T = twist(Λ_a, J), and for p ∈ {3, 7, 11} the Picard side
/// S = Δ_{a,J} ⊕ M_{24−2p} glued into an even unimodular (3, 19) lattice.
pub fn surface_x(p: u64, a: i64, j: &DiscriminantIdeal, bound: SearchBound) -> Result<K3SurfaceRecord> {
    if !(3..=11).contains(&p) || !is_prime(p) {
        return Err(invalid!("p must be an odd prime at most 11"));
    }
    if a < 1 || a % 2 == 0 {
        return Err(invalid!("a must be odd and positive"));
    }
    if j.m() != p {
        return Err(invalid!("J must be an ideal of Q(zeta_{p})"));
    }
    let lam = lambda_a(p, 1, a)?;
    let del = delta_a(p, 1, a)?;
    let (t, delta) = if j.is_unit() {
        (lam, del)
    } else {
        (twist(&lam, j, bound)?, twist(&del, j, bound)?)
    };
    let disc_module = discriminant_ideal(&t)?;
    let length = disc_module.length()?;
    let embedding = embedding_predicates(t.lattice())?;
    let root_free = delta.lattice().is_root_free()?;
    let mut notes = Vec::new();
    if a == 1 && j.is_unit() {
        notes.push("Vorontsov".to_owned());
    }
    let (s, glued) = if matches!(p, 3 | 7 | 11) {
        let m = standard_lattice(StandardName::M(24 - 2 * p as usize))?;
        let s = delta.lattice().direct_sum(&m);
        let g = glue_even_unimodular(t.lattice(), &s)?;
        if g.lattice.signature() != (3, 19) {
            return Err(Error::Internal("glued lattice does not have signature (3, 19)".into()));
        }
        notes.push(format!("S = Δ ⊕ M_{}", 24 - 2 * p));
        (Some(s), Some(g))
    } else {
        notes.push("Picard side not constructed for this p".to_owned());
        (None, None)
    };
    if let Some(s) = &s {
        if s.det().abs() != t.det().abs() {
            return Err(Error::Internal("|det S| differs from |det T|".into()));
        }
    }
    Ok(K3SurfaceRecord {
        p,
        a,
        j: j.clone(),
        t,
        delta,
        s,
        glued,
        disc_module,
        length,
        embedding,
        root_free,
        class_count: 1,
        notes,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SameSurface {
    Equal,
    Different,
    Undetermined(String),
}

/// Isomorphism of the discriminant O_E-modules, allowing the Galois twist
/// of the O_E-action; decisive when both lengths are at most 20 − 2n.
pub fn surfaces_equal(r1: &K3SurfaceRecord, r2: &K3SurfaceRecord) -> Result<SameSurface> {
    if r1.p != r2.p {
        return Err(invalid!("records over different fields"));
    }
    let two_n = (r1.p - 1) as usize;
    for r in [r1, r2] {
        if r.length + two_n > 20 {
            return Ok(SameSurface::Undetermined(format!("length {} exceeds 20 − 2n", r.length)));
        }
    }
    let m = r1.p;
    let same = (1..m).any(|a| r1.disc_module.galois(a as i64) == r2.disc_module);
    Ok(if same { SameSurface::Equal } else { SameSurface::Different })
}

/// Abelian CM fields of degree ≤ `max_degree` and conductor ≤ `max_conductor`.
pub fn cm_fields(max_conductor: u64, max_degree: u64) -> Vec<AbelianField> {
    let mut out = Vec::new();
    for m in 3..=max_conductor {
        if m % 4 == 2 {
            continue;
        }
        out.extend(AbelianField::cm_fields_of_conductor(m).into_iter().filter(|k| k.degree() <= max_degree));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trace::realize;

    fn cyc(m: u64) -> AbelianField {
        AbelianField::cyclotomic(m).unwrap()
    }

    fn k(m: u64) -> Arc<CyclotomicField> {
        CyclotomicField::new(m).unwrap()
    }

    #[test]
    fn conditions_for_zeta7() {
        let e = cyc(7);
        let p1 = DiscriminantIdeal::from_indices(&k(7), &[(7, 0, 1)]).unwrap();
        assert!(check_disc_conditions(&e, (2, 4), &p1).unwrap().passes());
        let r = check_disc_conditions(&e, (2, 4), &DiscriminantIdeal::unit(7)).unwrap();
        assert!(!r.passes());
        assert_eq!(r.conditions.iter().find(|c| !c.pass).unwrap().name, "iv");
        assert!(!check_disc_conditions(&e, (3, 3), &p1).unwrap().passes());
    }

    #[test]
    fn conditions_for_zeta44() {
        let e = cyc(44);
        assert!(check_disc_conditions(&e, (2, 18), &DiscriminantIdeal::unit(44)).unwrap().passes());
        assert!(!check_disc_conditions(&e, (4, 16), &DiscriminantIdeal::unit(44)).unwrap().passes());
        assert_eq!(
            enumerate_admissible(&e, (2, 18), 1).unwrap(),
            vec![DiscriminantIdeal::unit(44)]
        );
    }

    #[test]
    fn enumeration_zeta7() {
        let e = cyc(7);
        let got = enumerate_admissible(&e, (2, 4), 7).unwrap();
        assert_eq!(got.len(), 1);
        assert_eq!(got[0].norm(), BigRational::from_integer(7.into()));
        let got = enumerate_admissible(&e, (2, 4), 343).unwrap();
        let norms: Vec<BigRational> = got.iter().map(|d| d.norm()).collect();
        assert_eq!(norms, vec![BigRational::from_integer(7.into()), BigRational::from_integer(343.into())]);
    }

    #[test]
    fn realize_small() {
        let field = k(7);
        for d in enumerate_admissible(&cyc(7), (2, 4), 7 * 64).unwrap() {
            let l = realize(&field, (2, 4), &d, SearchBound::default()).unwrap();
            assert_eq!(discriminant_ideal(&l).unwrap(), d);
        }
    }

    #[test]
    fn existence() {
        let v = exists_maximal_cm_k3(&AbelianField::from_subgroup(51, &[16]).unwrap()).unwrap();
        assert_eq!(v.verdict, Existence::None);
        assert_eq!(v.reason, "ramified prime 3 with f=8 > 6");
        for m in [3u64, 7, 25, 44, 33, 11, 13] {
            assert_eq!(exists_maximal_cm_k3(&cyc(m)).unwrap().verdict, Existence::InfinitelyMany, "m = {m}");
        }
    }

    #[test]
    fn picard_44() {
        let e = cyc(44);
        assert_eq!(
            picard_classify(&e, PicardQuery::N(1)).unwrap(),
            PicardVerdict::U { n: 1, note: Some("Kondo".into()) }
        );
        assert!(matches!(picard_classify(&e, PicardQuery::N(43)).unwrap(), PicardVerdict::NotRealizable { .. }));
        assert!(matches!(picard_classify(&e, PicardQuery::N(89)).unwrap(), PicardVerdict::U { n: 89, .. }));
        assert!(matches!(picard_classify(&e, PicardQuery::N(43 * 43)).unwrap(), PicardVerdict::U { .. }));
        assert!(matches!(picard_classify(&e, PicardQuery::N(11 * 43)).unwrap(), PicardVerdict::NotRealizable { .. }));
    }

    #[test]
    fn picard_25() {
        match picard_classify(&cyc(25), PicardQuery::Det(5)).unwrap() {
            PicardVerdict::QI { d, c, gram, note } => {
                assert_eq!((d, c), (5, 1));
                assert_eq!(gram, matrix::imat_from_i64(&[vec![2, 1], vec![1, -2]]));
                assert_eq!(note.as_deref(), Some("Vorontsov"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn embedding() {
        let r = embedding_predicates(lambda_a(7, 1, 3).unwrap().lattice()).unwrap();
        assert_eq!(r.length, 3);
        assert!(r.primitively_embeds && r.uniquely_embeds);
        let r = embedding_predicates(lambda_a(19, 1, 1).unwrap().lattice()).unwrap();
        assert!(r.primitively_embeds && r.uniquely_embeds);
    }
}
