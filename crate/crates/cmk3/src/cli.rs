//! Command-line front end. Every subcommand maps to one core operation and
//! prints one JSON document. Exit codes: 0 for an answer, 1 for a failure
//! verdict or a mathematical error (with a reason document), 2 for usage.

use std::ffi::OsString;
use std::path::PathBuf;

use anyhow::{anyhow, bail};
use clap::{Args, Parser, Subcommand, ValueEnum};
use cmk3_core::abelian::AbelianField;
use cmk3_core::arith::{factor, is_prime};
use cmk3_core::cyclotomic::CyclotomicField;
use cmk3_core::forms::{standard_form, witt_class, witt_equal};
use cmk3_core::ideals::SearchBound;
use cmk3_core::lattice::{glue_even_unimodular, standard_lattice, IntegerLattice, StandardName};
use cmk3_core::oracle::{
    check_disc_conditions, embedding_predicates, enumerate_admissible, exists_maximal_cm_k3,
    picard_classify, surface_x, PicardQuery, PicardVerdict,
};
use cmk3_core::trace::{
    craig_c, delta_a, discriminant_ideal, isogenous_over_q, lambda_a, twist, DiscriminantIdeal,
    TraceLattice,
};
use serde_json::{json, Value};

use crate::{catalog, json};

/// A malformed argument caught after clap parsing; exits with code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

macro_rules! usage {
    ($($t:tt)*) => { return Err(anyhow::Error::new(UsageError(format!($($t)*)))) };
}

#[derive(Debug, Parser)]
#[command(name = "cmk3", version, about = "Exact oracles for K3 surfaces with complex multiplication")]
pub struct Cli {
    /// Emit JSON (the default; accepted for explicitness).
    #[arg(long, global = true)]
    pub json: bool,
    /// Indent the JSON output.
    #[arg(long, global = true)]
    pub pretty: bool,
    /// Render the answer as `key: value` lines instead of JSON.
    #[arg(long, global = true, conflicts_with = "json")]
    pub human: bool,
    /// Generator search bound as `height` or `height,support`.
    #[arg(long, global = true, env = "CMK3_SEARCH_BOUND")]
    pub search_bound: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
#[group(required = true, multiple = true)]
pub struct FieldArgs {
    /// The cyclotomic field Q(ζ_m).
    #[arg(long, conflicts_with_all = ["conductor", "subgroup"])]
    pub cyclotomic: Option<u64>,
    /// Conductor of an abelian field given by a subgroup of (Z/m)^*.
    #[arg(long)]
    pub conductor: Option<u64>,
    /// Generators of the subgroup fixing the field.
    #[arg(long, num_args = 1.., requires = "conductor", allow_negative_numbers = true)]
    pub subgroup: Vec<i64>,
}

impl FieldArgs {
    fn field(&self) -> anyhow::Result<AbelianField> {
        Ok(match (self.cyclotomic, self.conductor) {
            (Some(m), None) => AbelianField::cyclotomic(m)?,
            (None, Some(m)) => AbelianField::from_subgroup(m, &self.subgroup)?,
            _ => usage!("give either --cyclotomic or --conductor"),
        })
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Standard {
    U,
    A1,
    A2,
    A4,
    A6,
    E6,
    E8,
    #[value(name = "e8-")]
    E8Neg,
}

#[derive(Debug, Args, Clone)]
pub struct LatticeArgs {
    /// Craig-like lattice over Q(ζ_{p^r}): Λ_a with --a, C_k with --k, Δ_a with --a --delta.
    #[arg(long, requires = "p")]
    pub craig: bool,
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long, default_value_t = 1)]
    pub r: u32,
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<i64>,
    #[arg(long, allow_negative_numbers = true, conflicts_with = "a")]
    pub k: Option<i64>,
    #[arg(long, requires = "a")]
    pub delta: bool,
    /// Gram matrix as JSON, e.g. `[[2,1],[1,2]]`.
    #[arg(long, conflicts_with_all = ["craig", "standard"])]
    pub gram: Option<String>,
    #[arg(long, value_enum, conflicts_with = "craig")]
    pub standard: Option<Standard>,
}

enum Built {
    Trace(TraceLattice),
    Plain(IntegerLattice),
}

impl Built {
    fn lattice(&self) -> &IntegerLattice {
        match self {
            Built::Trace(t) => t.lattice(),
            Built::Plain(l) => l,
        }
    }

    fn describe(&self) -> Value {
        match self {
            Built::Trace(t) => json::trace_lattice(t),
            Built::Plain(l) => json::lattice(l),
        }
    }
}

impl LatticeArgs {
    fn build(&self) -> anyhow::Result<Built> {
        if self.craig {
            let p = self.p.expect("clap enforces --p");
            return Ok(Built::Trace(match (self.a, self.k, self.delta) {
                (Some(a), None, false) => lambda_a(p, self.r, a)?,
                (Some(a), None, true) => delta_a(p, self.r, a)?,
                (None, Some(k), false) => craig_c(p, self.r, k)?,
                _ => usage!("--craig needs --a (optionally with --delta) or --k"),
            }));
        }
        if let Some(g) = &self.gram {
            let Ok(rows) = serde_json::from_str::<Vec<Vec<i64>>>(g) else {
                usage!("--gram must be a JSON array of integer rows");
            };
            return Ok(Built::Plain(IntegerLattice::from_i64(&rows)?));
        }
        if let Some(s) = self.standard {
            let name = match s {
                Standard::U => StandardName::U,
                Standard::A1 => StandardName::A(1),
                Standard::A2 => StandardName::A(2),
                Standard::A4 => StandardName::A(4),
                Standard::A6 => StandardName::A(6),
                Standard::E6 => StandardName::E6,
                Standard::E8 => StandardName::E8,
                Standard::E8Neg => StandardName::E8Neg,
            };
            return Ok(Built::Plain(standard_lattice(name)?));
        }
        usage!("choose a lattice with --craig, --gram or --standard")
    }
}

#[derive(Debug, Args, Clone)]
pub struct SurfaceArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    pub a: i64,
    /// Conjugation-stable factor of J as `q:index` (the orbit of the
    /// index-th prime above q) or `q:index^e`; repeatable.
    #[arg(long = "j")]
    pub j: Vec<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Invariants of an abelian field.
    Field(FieldArgs),
    /// Splitting of rational primes, absolutely and relative to F.
    Splits {
        #[command(flatten)]
        field: FieldArgs,
        /// Primes to report; defaults to the primes dividing the conductor.
        #[arg(long = "prime", num_args = 1..)]
        primes: Vec<u64>,
    },
    /// Whether K3 surfaces with CM by O_E exist.
    K3Exists(FieldArgs),
    /// Admissible discriminant ideals of bounded norm, or a single check.
    DiscEnumerate {
        #[command(flatten)]
        field: FieldArgs,
        /// Signature as `s1,s2`.
        #[arg(long, default_value = "2,-")]
        sig: String,
        #[arg(long, default_value_t = 1000)]
        norm_bound: u64,
        /// Check one ideal instead, given as `q:index^e` prime factors.
        #[arg(long, num_args = 0..)]
        check: Option<Vec<String>>,
    },
    /// Gram matrix and basic invariants.
    Lattice(LatticeArgs),
    /// Discriminant form on L^♯/L.
    DiscForm(LatticeArgs),
    /// Witt class of the discriminant form.
    Witt {
        #[command(flatten)]
        lattice: LatticeArgs,
        /// Compare with the form (Z/p^k, a/p^k) given as `p,k,a`.
        #[arg(long, allow_hyphen_values = true)]
        against: Option<String>,
    },
    /// Twist Λ_a (or Δ_a) over Q(ζ_p) by a conjugation-stable ideal J.
    Twist {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long)]
        delta: bool,
    },
    /// Picard lattice of a degree-20 CM field from N or |det|.
    Picard {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long = "N", conflicts_with = "det")]
        n: Option<u64>,
        #[arg(long)]
        det: Option<u64>,
    },
    /// The lattice record of X_{a,J}(p).
    Surface(SurfaceArgs),
    /// Glue twist(Λ_a, J) with Δ_{a,J} ⊕ M_{24−2p}, or two given lattices.
    Glue {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long, requires = "s_gram")]
        t_gram: Option<String>,
        #[arg(long, requires = "t_gram")]
        s_gram: Option<String>,
    },
    /// Catalog of named examples.
    Catalog {
        #[arg(value_enum)]
        action: CatalogAction,
        /// Catalog file; defaults to the built-in catalog.
        #[arg(long, env = "CMK3_CATALOG")]
        catalog: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum CatalogAction {
    Verify,
    Show,
    Regenerate,
}

/// Exit code and the text for each stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// An answer plus whether it is a failure verdict.
struct Answer {
    value: Value,
    failure: bool,
}

impl From<Value> for Answer {
    fn from(value: Value) -> Self {
        Answer { value, failure: false }
    }
}

pub fn parse_bound(s: Option<&str>) -> anyhow::Result<SearchBound> {
    let mut b = SearchBound::default();
    let Some(s) = s else { return Ok(b) };
    let mut parts = s.split(',');
    let bad = || UsageError(format!("search bound {s:?} must be `height` or `height,support` with positive entries"));
    b.height = parts.next().unwrap_or("").trim().parse().map_err(|_| bad())?;
    if let Some(x) = parts.next() {
        b.support = x.trim().parse().map_err(|_| bad())?;
    }
    if parts.next().is_some() || b.height < 1 || b.support < 1 {
        return Err(bad().into());
    }
    Ok(b)
}

/// `q:index` or `q:index^e`.
fn parse_factor(s: &str) -> anyhow::Result<(u64, usize, i64)> {
    let bad = || UsageError(format!("ideal factor {s:?} is not of the form q:index or q:index^e"));
    let (base, e) = match s.split_once('^') {
        Some((b, e)) => (b, e.parse().map_err(|_| bad())?),
        None => (s, 1),
    };
    let (q, i) = base.split_once(':').ok_or_else(bad)?;
    Ok((q.parse().map_err(|_| bad())?, i.parse().map_err(|_| bad())?, e))
}

fn stable_ideal(m: u64, parts: &[String]) -> anyhow::Result<DiscriminantIdeal> {
    let field = CyclotomicField::new(m)?;
    let mut j = DiscriminantIdeal::unit(m);
    for s in parts {
        let (q, i, e) = parse_factor(s)?;
        if e < 0 {
            usage!("J must be integral");
        }
        let atom = DiscriminantIdeal::stable_prime(&field, q, i)?;
        for _ in 0..e {
            j = j.multiply(&atom)?;
        }
    }
    Ok(j)
}

fn parse_sig(s: &str, degree: u64) -> anyhow::Result<(usize, usize)> {
    let bad = || UsageError(format!("signature {s:?} must be s1,s2 (s2 may be `-`)"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    let s1: usize = a.trim().parse().map_err(|_| bad())?;
    let s2: usize = if b.trim() == "-" {
        (degree as usize).checked_sub(s1).ok_or_else(bad)?
    } else {
        b.trim().parse().map_err(|_| bad())?
    };
    Ok((s1, s2))
}

fn cyclotomic_conductor(e: &AbelianField) -> anyhow::Result<u64> {
    if !e.is_cyclotomic() {
        bail!("this operation needs a cyclotomic field");
    }
    Ok(e.conductor())
}

fn run_field(e: &AbelianField) -> anyhow::Result<Value> {
    let mut v = json::field(e);
    let obj = v.as_object_mut().expect("object");
    let mut ram = Vec::new();
    for (p, _) in factor(e.conductor()) {
        ram.push(json!({
            "p": p,
            "disc_valuation": e.disc_valuation(p),
            "different_exponent": e.different_exponent(p)?,
        }));
    }
    obj.insert("ramified_rational_primes".into(), Value::Array(ram));
    if e.is_cm() {
        let f = e.maximal_real_subfield()?;
        obj.insert("real_subfield".into(), json::field(&f));
        obj.insert("ram_in_e_over_f".into(), json!(e.ramified_primes()?));
    }
    Ok(v)
}

fn run_splits(e: &AbelianField, primes: &[u64]) -> anyhow::Result<Value> {
    let ps: Vec<u64> = if primes.is_empty() {
        factor(e.conductor()).into_iter().map(|(p, _)| p).collect()
    } else {
        primes.to_vec()
    };
    let mut out = Vec::new();
    for p in ps {
        if !is_prime(p) {
            bail!("{p} is not prime");
        }
        let mut v = json::splitting(&e.prime_splitting(p)?);
        if e.is_cm() {
            v.as_object_mut().expect("object").insert("relative".into(), json::relative(&e.relative_place_data(p)?));
        }
        if e.is_cm() && e.degree() == 20 {
            let c = format!("{:?}", e.s_class(p)?);
            v.as_object_mut().expect("object").insert("s_class".into(), c.into());
        }
        out.push(v);
    }
    Ok(json!({ "field": json::field(e), "primes": out }))
}

fn run_disc_enumerate(
    e: &AbelianField,
    sig: &str,
    bound: u64,
    check: Option<&[String]>,
) -> anyhow::Result<Answer> {
    let m = cyclotomic_conductor(e)?;
    let sig = parse_sig(sig, e.degree())?;
    if let Some(parts) = check {
        let field = CyclotomicField::new(m)?;
        let spec: Vec<(u64, usize, i64)> = parts.iter().map(|s| parse_factor(s)).collect::<anyhow::Result<_>>()?;
        let d = DiscriminantIdeal::from_indices(&field, &spec)?;
        let r = check_disc_conditions(e, sig, &d)?;
        let mut v = json::disc_report(&r);
        v.as_object_mut().expect("object").insert("ideal".into(), json::ideal(&d));
        return Ok(Answer { failure: !r.passes(), value: v });
    }
    let list = enumerate_admissible(e, sig, bound)?;
    Ok(json!({
        "signature": [sig.0, sig.1],
        "norm_bound": bound,
        "count": list.len(),
        "ideals": list.iter().map(json::ideal).collect::<Vec<_>>(),
    })
    .into())
}

fn run_witt(l: &LatticeArgs, against: Option<&str>) -> anyhow::Result<Answer> {
    let built = l.build()?;
    let f = built.lattice().discriminant_form()?;
    let w = witt_class(&f)?;
    let mut v = json!({ "witt": json::witt(&w) });
    let mut failure = false;
    if let Some(s) = against {
        let parts: Vec<i64> = s.split(',').map(|x| x.trim().parse()).collect::<Result<_, _>>().unwrap_or_default();
        let [p, k, a] = parts[..] else { usage!("--against must be p,k,a") };
        if p < 2 || k < 1 {
            usage!("--against needs p >= 2 and k >= 1");
        }
        let g = standard_form(p as u64, k as u32, a)?;
        let eq = witt_equal(&f, &g)?;
        failure = !eq;
        v.as_object_mut().expect("object").insert("equal".into(), eq.into());
    }
    Ok(Answer { value: v, failure })
}

fn run_twist(s: &SurfaceArgs, delta: bool, bound: SearchBound) -> anyhow::Result<Value> {
    let l = if delta { delta_a(s.p, 1, s.a)? } else { lambda_a(s.p, 1, s.a)? };
    let j = stable_ideal(s.p, &s.j)?;
    let t = twist(&l, &j, bound)?;
    Ok(json!({
        "J": json::ideal(&j),
        "before": json::ideal(&discriminant_ideal(&l)?),
        "after": json::ideal(&discriminant_ideal(&t)?),
        "lattice": json::trace_lattice(&t),
        "isogenous_over_q": isogenous_over_q(&l, &t)?,
    }))
}

fn run_picard(e: &AbelianField, n: Option<u64>, det: Option<u64>) -> anyhow::Result<Answer> {
    let q = match (n, det) {
        (Some(n), None) => PicardQuery::N(n),
        (None, Some(d)) => PicardQuery::Det(d),
        _ => usage!("give exactly one of --N and --det"),
    };
    let v = picard_classify(e, q)?;
    let failure = matches!(v, PicardVerdict::NotRealizable { .. });
    Ok(Answer { value: json::picard(&v), failure })
}

fn run_glue(s: &SurfaceArgs, t: Option<&str>, sg: Option<&str>, bound: SearchBound) -> anyhow::Result<Value> {
    if let (Some(t), Some(sg)) = (t, sg) {
        let parse = |g: &str| -> anyhow::Result<IntegerLattice> {
            let Ok(rows) = serde_json::from_str::<Vec<Vec<i64>>>(g) else {
                usage!("Gram matrices must be JSON arrays of integer rows");
            };
            Ok(IntegerLattice::from_i64(&rows)?)
        };
        let g = glue_even_unimodular(&parse(t)?, &parse(sg)?)?;
        return Ok(json::glued(&g));
    }
    let j = stable_ideal(s.p, &s.j)?;
    let r = surface_x(s.p, s.a, &j, bound)?;
    let g = r.glued.as_ref().ok_or_else(|| anyhow!("no Picard side is constructed for p = {}", s.p))?;
    Ok(json::glued(g))
}

fn run_catalog(action: CatalogAction, path: Option<&std::path::Path>, bound: SearchBound) -> anyhow::Result<Answer> {
    let cat = catalog::load(path)?;
    Ok(match action {
        CatalogAction::Show => serde_json::to_value(&cat)?.into(),
        CatalogAction::Regenerate => serde_json::to_value(catalog::regenerate(&cat, bound)?)?.into(),
        CatalogAction::Verify => {
            let r = catalog::verify(&cat, bound);
            Answer { failure: !r.passes(), value: json!({ "pass": r.passes(), "report": r }) }
        }
    })
}

fn dispatch(cli: &Cli) -> anyhow::Result<Answer> {
    let bound = parse_bound(cli.search_bound.as_deref())?;
    Ok(match &cli.command {
        Command::Field(f) => run_field(&f.field()?)?.into(),
        Command::Splits { field, primes } => run_splits(&field.field()?, primes)?.into(),
        Command::K3Exists(f) => json::existence(&exists_maximal_cm_k3(&f.field()?)?).into(),
        Command::DiscEnumerate { field, sig, norm_bound, check } => {
            run_disc_enumerate(&field.field()?, sig, *norm_bound, check.as_deref())?
        }
        Command::Lattice(l) => {
            let b = l.build()?;
            let mut v = b.describe();
            if let Built::Trace(t) = &b {
                let obj = v.as_object_mut().expect("object");
                obj.insert("disc_module".into(), json::ideal(&discriminant_ideal(t)?));
                let (pos, _) = t.signature();
                if pos == 2 && t.lattice().is_even() {
                    obj.insert("embedding".into(), json::embedding(&embedding_predicates(t.lattice())?));
                }
            }
            v.into()
        }
        Command::DiscForm(l) => {
            let b = l.build()?;
            let f = b.lattice().discriminant_form()?;
            let parts: Vec<Value> = f
                .p_primary_decompose()
                .into_iter()
                .map(|(p, g)| json!({ "p": p, "form": json::form(&g) }))
                .collect();
            json!({ "form": json::form(&f), "primary_parts": parts }).into()
        }
        Command::Witt { lattice, against } => run_witt(lattice, against.as_deref())?,
        Command::Twist { surface, delta } => run_twist(surface, *delta, bound)?.into(),
        Command::Picard { field, n, det } => run_picard(&field.field()?, *n, *det)?,
        Command::Surface(s) => json::surface(&surface_x(s.p, s.a, &stable_ideal(s.p, &s.j)?, bound)?).into(),
        Command::Glue { surface, t_gram, s_gram } => {
            run_glue(surface, t_gram.as_deref(), s_gram.as_deref(), bound)?.into()
        }
        Command::Catalog { action, catalog } => run_catalog(*action, catalog.as_deref(), bound)?,
    })
}

fn render(v: &Value, cli: &Cli) -> String {
    if cli.human {
        let mut out = String::new();
        flatten("", v, &mut out);
        return out;
    }
    let mut s = if cli.pretty {
        serde_json::to_string_pretty(v).expect("serializable")
    } else {
        serde_json::to_string(v).expect("serializable")
    };
    s.push('\n');
    s
}

fn flatten(prefix: &str, v: &Value, out: &mut String) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        Value::Array(a) if a.iter().any(|x| x.is_object()) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        other => {
            let text = match other {
                Value::String(s) => s.clone(),
                x => x.to_string(),
            };
            out.push_str(&format!("{prefix}: {text}\n"));
        }
    }
}

fn error_kind(err: &anyhow::Error) -> &'static str {
    match err.downcast_ref::<cmk3_core::Error>() {
        Some(cmk3_core::Error::InvalidInput(_)) => "invalid_input",
        Some(cmk3_core::Error::NotCm(_)) => "not_cm",
        Some(cmk3_core::Error::SearchExhausted(_)) => "search_exhausted",
        Some(cmk3_core::Error::GlueFailure { .. }) => "glue_failure",
        Some(cmk3_core::Error::Internal(_)) => "internal",
        Some(cmk3_core::Error::NotRealizable(_)) => "not_realizable",
        None if err.chain().any(|c| c.is::<std::io::Error>()) => "io",
        None if err.chain().any(|c| c.is::<serde_json::Error>()) => "parse",
        None => "error",
    }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: 2, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    match dispatch(&cli) {
        Ok(a) => Outcome { code: if a.failure { 1 } else { 0 }, stdout: render(&a.value, &cli), stderr: String::new() },
        Err(err) if err.downcast_ref::<UsageError>().is_some() => {
            Outcome { code: 2, stdout: String::new(), stderr: format!("error: {err}\n") }
        }
        Err(err) => {
            let v = json!({ "error": error_kind(&err), "reason": format!("{err:#}") });
            Outcome { code: 1, stdout: render(&v, &cli), stderr: String::new() }
        }
    }
}
