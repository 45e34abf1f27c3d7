use cmk3_core::cyclotomic::CyclotomicField;
use cmk3_core::ideals::SearchBound;
use cmk3_core::oracle::{surface_x, surfaces_equal, SameSurface};
use cmk3_core::trace::DiscriminantIdeal;
use num_bigint::BigInt;
use num_traits::Signed;

fn unit(p: u64) -> DiscriminantIdeal {
    DiscriminantIdeal::unit(p)
}

fn thirteen() -> DiscriminantIdeal {
    let k = CyclotomicField::new(7).unwrap();
    DiscriminantIdeal::stable_prime(&k, 13, 0).unwrap()
}

#[test]
fn x1_of_7() {
    let r = surface_x(7, 1, &unit(7), SearchBound::default()).unwrap();
    assert_eq!(r.t.det().abs(), BigInt::from(7));
    assert_eq!(r.t.signature(), (2, 4));
    let g = r.glued.as_ref().unwrap();
    assert!(g.lattice.is_unimodular() && g.lattice.is_even());
    assert!(!r.root_free);
    assert!(r.notes.iter().any(|n| n == "Vorontsov"));
}

#[test]
fn x3_of_7_is_root_free() {
    let r = surface_x(7, 3, &unit(7), SearchBound::default()).unwrap();
    assert_eq!(r.t.det().abs(), BigInt::from(343));
    assert_eq!(r.length, 3);
    assert!(r.root_free);
    assert!(r.embedding.uniquely_embeds);
}

#[test]
fn twisted_by_thirteen() {
    let j = thirteen();
    let r = surface_x(7, 1, &j, SearchBound::default()).unwrap();
    assert_eq!(r.t.det().abs(), BigInt::from(7 * 169));
    assert_eq!(r.s.as_ref().unwrap().det().abs(), BigInt::from(7 * 169));
    assert!(r.embedding.uniquely_embeds);
    assert!(r.root_free);
    let rb = surface_x(7, 1, &j.conjugate(), SearchBound::default()).unwrap();
    assert_eq!(surfaces_equal(&r, &rb).unwrap(), SameSurface::Equal);
}

#[test]
fn distinct_a_differ() {
    let r1 = surface_x(7, 1, &unit(7), SearchBound::default()).unwrap();
    let r1b = surface_x(7, 1, &unit(7), SearchBound::default()).unwrap();
    let r3 = surface_x(7, 3, &unit(7), SearchBound::default()).unwrap();
    assert_eq!(surfaces_equal(&r1, &r1b).unwrap(), SameSurface::Equal);
    assert_eq!(surfaces_equal(&r1, &r3).unwrap(), SameSurface::Different);
}

#[test]
fn p3_and_p11() {
    for (p, a) in [(3u64, 1i64), (3, 3), (11, 1), (11, 3)] {
        let r = surface_x(p, a, &unit(p), SearchBound::default()).unwrap();
        assert_eq!(r.t.det().abs(), BigInt::from(p).pow(a as u32), "p={p} a={a}");
        assert_eq!(r.glued.as_ref().unwrap().lattice.signature(), (3, 19));
    }
}
