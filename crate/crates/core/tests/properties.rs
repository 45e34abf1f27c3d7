use std::sync::Arc;

use cmk3_core::abelian::AbelianField;
use cmk3_core::cyclotomic::{real_cyclotomic_units, CyclotomicElement, CyclotomicField};
use cmk3_core::forms::{standard_form, witt_class, witt_equal, FiniteQuadraticForm};
use cmk3_core::ideals::{primes_above, IdealBasis, PrimeIdeal, SearchBound};
use cmk3_core::oracle::{check_disc_conditions, enumerate_admissible};
use cmk3_core::trace::{
    craig_c, craig_delta, discriminant_ideal, is_even, lambda_a, realize, trace_lattice, twist,
    DiscriminantIdeal, TraceLattice,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn field(m: u64) -> Arc<CyclotomicField> {
    CyclotomicField::new(m).unwrap()
}

fn small_form() -> impl Strategy<Value = FiniteQuadraticForm> {
    let atom = (prop::sample::select(vec![2u64, 3, 5, 7]), 1u32..=2, prop::sample::select(vec![1i64, 3, 5, 7]))
        .prop_map(|(p, k, a)| {
            let a = if p == 2 { a } else if a % p as i64 == 0 { 1 } else { a };
            standard_form(p, k, a).unwrap()
        });
    prop::collection::vec(atom, 1..=3).prop_map(|v| {
        v.into_iter().fold(FiniteQuadraticForm::trivial(), |acc, f| acc.direct_sum(&f))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn form_plus_its_negative_is_metabolic(f in small_form()) {
        let g = f.direct_sum(&f.negate());
        prop_assert!(witt_class(&g).unwrap().is_zero());
    }

    #[test]
    fn metabolic_summands_do_not_change_the_class(f in small_form(), h in small_form()) {
        let g = f.direct_sum(&h).direct_sum(&h.negate());
        prop_assert!(witt_equal(&f, &g).unwrap());
    }
}

#[test]
fn craig_class_is_independent_of_k() {
    for (p, r) in [(3u64, 1u32), (5, 1), (7, 1), (3, 2)] {
        let (_, d) = craig_delta(p, r).unwrap();
        let base = craig_c(p, r, d).unwrap().lattice().discriminant_form().unwrap();
        for k in d + 1..=d + 4 {
            let f = craig_c(p, r, k).unwrap().lattice().discriminant_form().unwrap();
            assert!(witt_equal(&base, &f).unwrap(), "p={p} r={r} k={k}");
        }
    }
}

/// Conjugation-stable ideals of Q(ζ_7) coprime to 7 built from small primes.
fn stable_ideals_7() -> Vec<DiscriminantIdeal> {
    let k = field(7);
    let mut atoms = Vec::new();
    for q in [2u64, 13, 29, 43] {
        let primes = primes_above(&k, q).unwrap();
        let mut seen = Vec::new();
        for (i, p) in primes.iter().enumerate() {
            if seen.contains(&p.label) {
                continue;
            }
            seen.push(p.label.conjugate(7));
            atoms.push(DiscriminantIdeal::stable_prime(&k, q, i).unwrap());
        }
    }
    atoms
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn twisting_multiplies_the_discriminant(picks in prop::collection::vec(0usize..64, 1..=2), a in prop::sample::select(vec![1i64, 3])) {
        let atoms = stable_ideals_7();
        let k = field(7);
        let mut j = DiscriminantIdeal::unit(7);
        for i in picks {
            j = j.multiply(&atoms[i % atoms.len()]).unwrap();
        }
        let _ = k;
        let l = lambda_a(7, 1, a).unwrap();
        let before = discriminant_ideal(&l).unwrap();
        let t = twist(&l, &j, SearchBound::default()).unwrap();
        prop_assert_eq!(discriminant_ideal(&t).unwrap(), before.multiply(&j).unwrap());
        prop_assert_eq!(t.signature(), l.signature());
    }
}

fn signatures(n: usize) -> Vec<(usize, usize)> {
    (0..=n).map(|i| (2 * i, 2 * n - 2 * i)).collect()
}

#[test]
fn admissible_ideals_are_realized() {
    for m in [5u64, 7, 9] {
        let k = field(m);
        let e = AbelianField::cyclotomic(m).unwrap();
        for sig in signatures(k.degree() / 2) {
            let list = enumerate_admissible(&e, sig, 2000).unwrap();
            assert!(!list.is_empty());
            for d in &list {
                let l = realize(&k, sig, d, SearchBound::default())
                    .unwrap_or_else(|err| panic!("m={m} {sig:?} {d}: {err}"));
                assert_eq!(&discriminant_ideal(&l).unwrap(), d);
                assert_eq!(l.signature(), sig);
                assert!(is_even(&l).unwrap().even);
            }
        }
    }
}

/// Every integral ideal of Q(ζ_5) with norm ≤ bound, ignoring all conditions.
fn all_ideals_5(bound: u64) -> Vec<DiscriminantIdeal> {
    let k = field(5);
    let primes: Vec<PrimeIdeal> = (2..=bound)
        .filter(|&q| cmk3_core::arith::is_prime(q))
        .flat_map(|q| primes_above(&k, q).unwrap())
        .filter(|p| p.norm() <= BigInt::from(bound))
        .collect();
    let mut out = Vec::new();
    fn rec(i: usize, norm: u64, bound: u64, primes: &[PrimeIdeal], cur: &mut Vec<(PrimeIdeal, i64)>, out: &mut Vec<Vec<(PrimeIdeal, i64)>>) {
        if i == primes.len() {
            out.push(cur.clone());
            return;
        }
        rec(i + 1, norm, bound, primes, cur, out);
        let q = u64::try_from(primes[i].norm()).unwrap();
        let mut e = 1;
        let mut n = norm * q;
        while n <= bound {
            cur.push((primes[i].clone(), e));
            rec(i + 1, n, bound, primes, cur, out);
            cur.pop();
            e += 1;
            n *= q;
        }
    }
    let mut raw = Vec::new();
    rec(0, 1, bound, &primes, &mut Vec::new(), &mut raw);
    for f in raw {
        out.push(DiscriminantIdeal::from_primes(&k, &f));
    }
    out
}

#[test]
fn ideals_outside_the_list_fail_a_named_condition() {
    let e = AbelianField::cyclotomic(5).unwrap();
    let k = field(5);
    let all = all_ideals_5(500);
    assert!(all.len() > 50);
    for sig in signatures(2) {
        let admissible = enumerate_admissible(&e, sig, 500).unwrap();
        for d in &all {
            let report = check_disc_conditions(&e, sig, d).unwrap();
            if admissible.contains(d) {
                assert!(report.passes());
            } else {
                assert!(!report.failures().is_empty(), "{d} {sig:?}");
                assert!(realize(&k, sig, d, SearchBound::default()).is_err());
            }
        }
    }
}

/// A random lattice (I, α) with I = (γ) integral and α integral and real.
fn random_lattice(m: u64, gamma: &[(i64, i64, u64)], rho: (i64, i64, u64), unit_bits: u64) -> Option<TraceLattice> {
    let k = field(m);
    let mut g = CyclotomicElement::one(&k);
    for &(a, b, t) in gamma {
        let x = &CyclotomicElement::from_integer(&k, a) + &CyclotomicElement::zeta_pow(&k, t as i64).scale(&BigRational::from_integer(b.into()));
        g = &g * &x;
    }
    let (a, b, t) = rho;
    let z = CyclotomicElement::zeta_pow(&k, t as i64);
    let r = &CyclotomicElement::from_integer(&k, a) + &(&z + &z.conjugate()).scale(&BigRational::from_integer(b.into()));
    let mut alpha = r;
    let mut units = vec![CyclotomicElement::from_integer(&k, -1)];
    units.extend(real_cyclotomic_units(&k).unwrap());
    for (i, u) in units.iter().enumerate() {
        if unit_bits >> i & 1 == 1 {
            alpha = &alpha * u;
        }
    }
    if g.is_zero() || alpha.is_zero() {
        return None;
    }
    Some(trace_lattice(IdealBasis::from_generator(g).ok()?, alpha).unwrap())
}

fn gamma_strategy() -> impl Strategy<Value = Vec<(i64, i64, u64)>> {
    prop::collection::vec((-2i64..=2, -1i64..=1, 1u64..40), 0..=2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn random_lattices_satisfy_the_conditions(
        m in prop::sample::select(vec![5u64, 7, 9, 12, 15]),
        gamma in gamma_strategy(),
        rho in (-3i64..=3, -1i64..=1, 1u64..40),
        bits in any::<u64>(),
    ) {
        let Some(l) = random_lattice(m, &gamma, rho, bits) else { return Ok(()) };
        let d = discriminant_ideal(&l).unwrap();
        let e = AbelianField::cyclotomic(m).unwrap();
        let report = check_disc_conditions(&e, l.signature(), &d).unwrap();
        prop_assert!(report.passes(), "{:?}", report.failures());
        prop_assert!(is_even(&l).unwrap().even);
        if m == 5 && d.norm() <= BigRational::from_integer(500.into()) {
            prop_assert!(enumerate_admissible(&e, l.signature(), 500).unwrap().contains(&d));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn random_lattices_over_zeta44_obey_the_mod_8_rule(
        gamma in prop::collection::vec((-1i64..=1, -1i64..=1, 1u64..44), 0..=1),
        rho in (-2i64..=2, -1i64..=1, 1u64..44),
        bits in any::<u64>(),
    ) {
        let Some(l) = random_lattice(44, &gamma, rho, bits) else { return Ok(()) };
        let d = discriminant_ideal(&l).unwrap();
        let e = AbelianField::cyclotomic(44).unwrap();
        let report = check_disc_conditions(&e, l.signature(), &d).unwrap();
        prop_assert!(report.passes(), "{:?}", report.failures());
    }
}
