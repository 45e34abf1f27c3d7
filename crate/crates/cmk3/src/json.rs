//! JSON encodings of core values. Exact quantities (determinants, Gram
//! entries, norms, form values) are strings such as `"-7"` or `"3/7"`; small
//! bookkeeping integers (ranks, exponents, primes) are JSON numbers.

use cmk3_core::abelian::{AbelianField, Behavior, PrimeSplitting, RelativePlaceData};
use cmk3_core::forms::{FiniteQuadraticForm, WittClass};
use cmk3_core::lattice::{Glued, IntegerLattice};
use cmk3_core::matrix::{IMat, QMat};
use cmk3_core::oracle::{
    DiscReport, EmbeddingReport, Existence, ExistenceVerdict, K3SurfaceRecord, PicardVerdict,
};
use cmk3_core::trace::{DiscriminantIdeal, TraceLattice};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Map, Value};

pub fn int(x: &BigInt) -> Value {
    Value::String(x.to_string())
}

pub fn frac(x: &BigRational) -> Value {
    Value::String(x.to_string())
}

pub fn imat(m: &IMat) -> Value {
    Value::Array(m.iter().map(|row| Value::Array(row.iter().map(int).collect())).collect())
}

pub fn qmat(m: &QMat) -> Value {
    Value::Array(m.iter().map(|row| Value::Array(row.iter().map(frac).collect())).collect())
}

/// A node of the reason tree attached to every oracle answer.
pub fn reason(rule: &str, detail: impl Into<String>, children: Vec<Value>) -> Value {
    let mut m = Map::new();
    m.insert("rule".into(), rule.into());
    m.insert("detail".into(), Value::String(detail.into()));
    if !children.is_empty() {
        m.insert("children".into(), Value::Array(children));
    }
    Value::Object(m)
}

pub fn field(e: &AbelianField) -> Value {
    json!({
        "conductor": e.conductor(),
        "subgroup": e.subgroup(),
        "degree": e.degree(),
        "cyclotomic": e.is_cyclotomic(),
        "cm": e.is_cm(),
    })
}

fn behaviour(b: Behavior) -> &'static str {
    match b {
        Behavior::Split => "split",
        Behavior::Inert => "inert",
        Behavior::Ramified => "ramified",
    }
}

pub fn splitting(s: &PrimeSplitting) -> Value {
    json!({
        "p": s.p,
        "e": s.e,
        "f": s.f,
        "g": s.g,
        "frobenius_coset": s.frobenius_coset,
        "conjugation_fixed": s.conjugation_fixed,
    })
}

pub fn relative(rd: &RelativePlaceData) -> Value {
    let first = &rd.places_of_f[0];
    json!({
        "places_of_f": rd.places_of_f.len(),
        "f_in_f": first.f_f,
        "e_in_f": first.e_f,
        "behaviour_in_e_over_f": behaviour(first.behavior),
        "different_exponent": first.different_exponent,
        "ram": rd.ram(),
        "ram_odd": rd.ram_odd(),
        "int": rd.int(),
        "int_odd": rd.int_odd(),
    })
}

pub fn ideal(d: &DiscriminantIdeal) -> Value {
    let factors: Vec<Value> = d
        .entries()
        .iter()
        .map(|e| {
            json!({
                "q": e.p(),
                "label": e.label.to_string(),
                "f": e.f,
                "e_ram": e.e_ram,
                "conjugation_fixed": e.conjugation_fixed,
                "exponent": e.exponent,
            })
        })
        .collect();
    json!({
        "conductor": d.m(),
        "ideal": d.to_string(),
        "norm": frac(&d.norm()),
        "factors": factors,
    })
}

pub fn lattice(l: &IntegerLattice) -> Value {
    let (pos, neg) = l.signature();
    let group = l.discriminant_group();
    json!({
        "rank": l.rank(),
        "gram": imat(l.gram()),
        "det": int(&l.det()),
        "signature": [pos, neg],
        "even": l.is_even(),
        "unimodular": l.is_unimodular(),
        "discriminant_group": group.invariants.iter().map(int).collect::<Vec<_>>(),
        "length": group.length(),
    })
}

pub fn trace_lattice(t: &TraceLattice) -> Value {
    let mut v = lattice(t.lattice());
    let obj = v.as_object_mut().expect("object");
    obj.insert("field_conductor".into(), t.field().m().into());
    obj.insert("ideal".into(), Value::String(t.ideal().label_string()));
    obj.insert(
        "alpha".into(),
        Value::Array(t.alpha().coeffs().iter().map(frac).collect()),
    );
    v
}

pub fn form(f: &FiniteQuadraticForm) -> Value {
    let r = f.rank();
    let b: Vec<Value> = (0..r)
        .map(|i| Value::Array((0..r).map(|j| frac(&f.bilinear_entry(i, j))).collect()))
        .collect();
    let q: Value = if f.has_quadratic() {
        Value::Array((0..r).map(|i| frac(&f.quadratic_entry(i).expect("quadratic"))).collect())
    } else {
        Value::Null
    };
    json!({
        "orders": f.orders(),
        "bilinear": b,
        "quadratic": q,
        "length": f.length(),
    })
}

pub fn witt(w: &WittClass) -> Value {
    let odd: Vec<Value> = w
        .odd
        .iter()
        .map(|o| json!({ "p": o.p, "rank": o.rank, "legendre": o.legendre }))
        .collect();
    json!({
        "zero": w.is_zero(),
        "odd": odd,
        "two": w.two.as_ref().map(form),
    })
}

pub fn disc_report(r: &DiscReport) -> Value {
    let children = r
        .conditions
        .iter()
        .map(|c| {
            let mut node = reason(&format!("condition ({})", c.name), c.detail.clone(), vec![]);
            node.as_object_mut().expect("object").insert("pass".into(), c.pass.into());
            node
        })
        .collect();
    json!({
        "pass": r.passes(),
        "reason": reason("discriminant ideal conditions", if r.passes() { "all conditions hold" } else { "some condition fails" }, children),
    })
}

pub fn existence_name(v: Existence) -> &'static str {
    match v {
        Existence::InfinitelyMany => "infinitely_many",
        Existence::None => "none",
        Existence::Undetermined => "undetermined",
    }
}

pub fn existence(v: &ExistenceVerdict) -> Value {
    let primes: Vec<Value> = v.primes.iter().map(|&(p, f)| json!({ "p": p, "f": f })).collect();
    json!({
        "verdict": existence_name(v.verdict),
        "reason": v.reason,
        "primes": primes,
    })
}

pub fn embedding(r: &EmbeddingReport) -> Value {
    json!({
        "length": r.length,
        "primitively_embeds": r.primitively_embeds,
        "uniquely_embeds": r.uniquely_embeds,
        "special_case": r.special_case,
    })
}

pub fn picard(v: &PicardVerdict) -> Value {
    match v {
        PicardVerdict::U { n, note } => {
            let mut m = Map::new();
            m.insert("picard".into(), Value::String(format!("U({n})")));
            m.insert("N".into(), (*n).into());
            if let Some(note) = note {
                m.insert("note".into(), Value::String(note.clone()));
            }
            Value::Object(m)
        }
        PicardVerdict::QI { d, c, gram, note } => {
            let mut m = Map::new();
            m.insert("picard".into(), "q_I".into());
            m.insert("d".into(), (*d).into());
            m.insert("c".into(), (*c).into());
            m.insert("gram".into(), imat(gram));
            if let Some(note) = note {
                m.insert("note".into(), Value::String(note.clone()));
            }
            Value::Object(m)
        }
        PicardVerdict::NotRealizable { reason } => json!({
            "picard": "not_realizable",
            "reason": reason,
        }),
    }
}

pub fn glued(g: &Glued) -> Value {
    let maps: Vec<Value> = g
        .maps
        .iter()
        .map(|m| {
            json!({
                "p": m.p,
                "source_generators": m.source_generators,
                "target_generators": m.target_generators,
                "images": m.images,
            })
        })
        .collect();
    json!({
        "lattice": lattice(&g.lattice),
        "basis": qmat(&g.basis),
        "glue_maps": maps,
    })
}

pub fn surface(r: &K3SurfaceRecord) -> Value {
    json!({
        "p": r.p,
        "a": r.a,
        "J": ideal(&r.j),
        "T": trace_lattice(&r.t),
        "delta": trace_lattice(&r.delta),
        "S": r.s.as_ref().map(lattice),
        "glued": r.glued.as_ref().map(|g| {
            let l = &g.lattice;
            let (pos, neg) = l.signature();
            json!({ "signature": [pos, neg], "even": l.is_even(), "unimodular": l.is_unimodular() })
        }),
        "disc_module": ideal(&r.disc_module),
        "length": r.length,
        "embedding": embedding(&r.embedding),
        "root_free": r.root_free,
        "class_count": r.class_count,
        "notes": r.notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_values_are_strings() {
        assert_eq!(int(&BigInt::from(-7)), json!("-7"));
        assert_eq!(frac(&BigRational::new(3.into(), 7.into())), json!("3/7"));
        assert_eq!(imat(&vec![vec![BigInt::from(2), BigInt::from(-1)]]), json!([["2", "-1"]]));
    }

    #[test]
    fn reason_tree_omits_empty_children() {
        let leaf = reason("r", "d", vec![]);
        assert!(leaf.get("children").is_none());
        let node = reason("top", "x", vec![leaf.clone()]);
        assert_eq!(node["children"][0], leaf);
    }
}
