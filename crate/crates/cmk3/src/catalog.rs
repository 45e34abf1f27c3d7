//! The example catalog: a versioned JSON document of named examples with
//! their stored invariants. `verify` recomputes every entry and diffs.
//! Equation entries are inert data and are only checked for a valid target.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context};
use cmk3_core::abelian::AbelianField;
use cmk3_core::cyclotomic::CyclotomicField;
use cmk3_core::forms::witt_class;
use cmk3_core::ideals::SearchBound;
use cmk3_core::oracle::{
    embedding_predicates, exists_maximal_cm_k3, picard_classify, surface_x, PicardQuery,
};
use cmk3_core::trace::{discriminant_ideal, lambda_a, DiscriminantIdeal};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::json;

pub const CATALOG_VERSION: u32 = 1;

/// The catalog shipped with the crate, used when no path is given.
pub const BUILTIN: &str = include_str!("../catalog/catalog.json");

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Catalog {
    pub version: u32,
    pub entries: Vec<Entry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Entry {
    pub id: String,
    #[serde(flatten)]
    pub kind: Kind,
    #[serde(default)]
    pub expected: BTreeMap<String, Value>,
    /// Free-form data stored verbatim and never recomputed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub data: Option<Value>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Kind {
    /// X_{a,J}(p); `j` lists (q, index) of conjugation-stable prime orbits.
    Surface {
        p: u64,
        a: i64,
        #[serde(default)]
        j: Vec<(u64, usize)>,
    },
    /// Λ_a over Q(ζ_m) for a prime power m.
    Lattice { m: u64, a: i64 },
    Picard {
        m: u64,
        #[serde(default)]
        n: Option<u64>,
        #[serde(default)]
        det: Option<u64>,
    },
    Existence {
        conductor: u64,
        #[serde(default)]
        subgroup: Vec<i64>,
    },
    /// Verbatim equations attached to another entry.
    Equation { surface: String },
}

#[derive(Clone, Debug, Serialize)]
pub struct Mismatch {
    pub id: String,
    pub invariant: String,
    pub expected: Value,
    pub got: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub version: u32,
    pub checked: usize,
    pub mismatches: Vec<Mismatch>,
}

impl Report {
    pub fn passes(&self) -> bool {
        self.mismatches.is_empty()
    }
}

pub fn load(path: Option<&Path>) -> anyhow::Result<Catalog> {
    let text = match path {
        Some(p) => fs::read_to_string(p).with_context(|| format!("cannot read catalog {}", p.display()))?,
        None => BUILTIN.to_owned(),
    };
    let cat: Catalog = serde_json::from_str(&text).context("catalog is not valid JSON for this schema")?;
    if cat.version != CATALOG_VERSION {
        bail!("catalog version {} is not supported (expected {CATALOG_VERSION})", cat.version);
    }
    Ok(cat)
}

/// J as a product of conjugation-stable prime orbits of Q(ζ_p).
pub fn stable_ideal(m: u64, parts: &[(u64, usize)]) -> anyhow::Result<DiscriminantIdeal> {
    let field = CyclotomicField::new(m)?;
    let mut j = DiscriminantIdeal::unit(m);
    for &(q, idx) in parts {
        j = j.multiply(&DiscriminantIdeal::stable_prime(&field, q, idx)?)?;
    }
    Ok(j)
}

fn prime_power(m: u64) -> anyhow::Result<(u64, u32)> {
    let f = cmk3_core::arith::factor(m);
    if f.len() != 1 {
        bail!("{m} is not a prime power");
    }
    Ok((f[0].0, f[0].1))
}

/// Recomputes the invariants of one entry.
pub fn compute(entry: &Entry, ids: &[&str], bound: SearchBound) -> anyhow::Result<BTreeMap<String, Value>> {
    let mut out = BTreeMap::new();
    match &entry.kind {
        Kind::Surface { p, a, j } => {
            let j = stable_ideal(*p, j)?;
            let r = surface_x(*p, *a, &j, bound)?;
            let w = witt_class(&r.t.lattice().discriminant_form()?)?;
            out.insert("det_T".into(), json::int(&r.t.det()));
            out.insert("signature_T".into(), json!([r.t.signature().0, r.t.signature().1]));
            out.insert("disc_module".into(), Value::String(r.disc_module.to_string()));
            out.insert("length".into(), r.length.into());
            out.insert("witt".into(), json::witt(&w));
            out.insert("uniquely_embeds".into(), r.embedding.uniquely_embeds.into());
            out.insert("primitively_embeds".into(), r.embedding.primitively_embeds.into());
            out.insert("delta_root_free".into(), r.root_free.into());
            out.insert("notes".into(), json!(r.notes));
            if let Some(s) = &r.s {
                out.insert("det_S".into(), json::int(&s.det()));
            }
            if let Some(g) = &r.glued {
                let (pos, neg) = g.lattice.signature();
                out.insert("glued_signature".into(), json!([pos, neg]));
                out.insert("glued_even_unimodular".into(), (g.lattice.is_even() && g.lattice.is_unimodular()).into());
            }
        }
        Kind::Lattice { m, a } => {
            let (p, r) = prime_power(*m)?;
            let l = lambda_a(p, r, *a)?;
            let d = discriminant_ideal(&l)?;
            let w = witt_class(&l.lattice().discriminant_form()?)?;
            let e = embedding_predicates(l.lattice())?;
            out.insert("det".into(), json::int(&l.det()));
            out.insert("signature".into(), json!([l.signature().0, l.signature().1]));
            out.insert("disc_module".into(), Value::String(d.to_string()));
            out.insert("length".into(), e.length.into());
            out.insert("witt".into(), json::witt(&w));
            out.insert("uniquely_embeds".into(), e.uniquely_embeds.into());
            out.insert("primitively_embeds".into(), e.primitively_embeds.into());
        }
        Kind::Picard { m, n, det } => {
            let e = AbelianField::cyclotomic(*m)?;
            let q = match (n, det) {
                (Some(n), None) => PicardQuery::N(*n),
                (None, Some(d)) => PicardQuery::Det(*d),
                _ => bail!("picard entry needs exactly one of n and det"),
            };
            let v = json::picard(&picard_classify(&e, q)?);
            for (k, x) in v.as_object().expect("object") {
                out.insert(k.clone(), x.clone());
            }
        }
        Kind::Existence { conductor, subgroup } => {
            let e = AbelianField::from_subgroup(*conductor, subgroup)?;
            let v = exists_maximal_cm_k3(&e)?;
            out.insert("verdict".into(), json::existence_name(v.verdict).into());
            out.insert("reason".into(), v.reason.into());
            out.insert("degree".into(), e.degree().into());
        }
        Kind::Equation { surface } => {
            out.insert("surface_present".into(), ids.contains(&surface.as_str()).into());
        }
    }
    Ok(out)
}

pub fn verify(cat: &Catalog, bound: SearchBound) -> Report {
    let ids: Vec<&str> = cat.entries.iter().map(|e| e.id.as_str()).collect();
    let mut mismatches = Vec::new();
    for entry in &cat.entries {
        let got = match compute(entry, &ids, bound) {
            Ok(g) => g,
            Err(err) => {
                mismatches.push(Mismatch {
                    id: entry.id.clone(),
                    invariant: "computation".into(),
                    expected: Value::String("success".into()),
                    got: Value::String(format!("{err:#}")),
                });
                continue;
            }
        };
        for (key, want) in &entry.expected {
            let have = got.get(key).cloned().unwrap_or(Value::Null);
            if &have != want {
                mismatches.push(Mismatch {
                    id: entry.id.clone(),
                    invariant: key.clone(),
                    expected: want.clone(),
                    got: have,
                });
            }
        }
    }
    Report { version: cat.version, checked: cat.entries.len(), mismatches }
}

/// Every entry with its freshly computed invariants in place of the stored ones.
pub fn regenerate(cat: &Catalog, bound: SearchBound) -> anyhow::Result<Catalog> {
    let ids: Vec<&str> = cat.entries.iter().map(|e| e.id.as_str()).collect();
    let mut out = cat.clone();
    for entry in &mut out.entries {
        let got = compute(entry, &ids, bound).with_context(|| format!("entry {}", entry.id))?;
        entry.expected = got;
    }
    Ok(out)
}
