//! Canonical JSON encodings of fields, modules, reports and scenarios.
//!
//! Objects are emitted with sorted keys and elements in their canonical text
//! form, so equal inputs serialize to identical bytes.

use std::collections::BTreeMap;

use num_rational::BigRational;
use serde_json::{json, Map, Value};

use crate::analyze::{Decomposition, Verdict, Witness};
use crate::basering::{LaurentPoly, WeightPoint};
use crate::coeffs::{Elem, FieldCtx, FieldSpec};
use crate::error::{Error, Result};
use crate::extend::{Extension, Outcome};
use crate::families::FamilyId;
use crate::linalg::Matrix;
use crate::orbits::SubalgebraName;
use crate::verify::{format_vector, Realization, RelationReport};
use crate::wmod::{EdgeFlags, GradedMap, GwaKind, Letter, Op, RawModule, WeightModule};

/// Version tag written into modules and required in scenarios.
pub const SCHEMA: &str = "1";

fn jerr(msg: impl Into<String>) -> Error {
    Error::Json(msg.into())
}

/// Serializes with sorted keys; `pretty` adds indentation.
pub fn to_canonical_string(v: &Value, pretty: bool) -> String {
    if pretty {
        serde_json::to_string_pretty(v).expect("json values serialize")
    } else {
        serde_json::to_string(v).expect("json values serialize")
    }
}

pub fn parse_str(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| jerr(e.to_string()))
}

fn get<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| jerr(format!("missing field {key:?}")))
}

fn get_str<'a>(v: &'a Value, key: &str) -> Result<&'a str> {
    get(v, key)?.as_str().ok_or_else(|| jerr(format!("field {key:?} must be a string")))
}

fn get_i64(v: &Value, key: &str) -> Result<i64> {
    get(v, key)?.as_i64().ok_or_else(|| jerr(format!("field {key:?} must be an integer")))
}

fn get_u64(v: &Value, key: &str) -> Result<u64> {
    get(v, key)?.as_u64().ok_or_else(|| jerr(format!("field {key:?} must be a nonnegative integer")))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| jerr(format!("{what} must be an array")))
}

fn elem(ctx: &FieldCtx, v: &Value) -> Result<Elem> {
    let s = v.as_str().ok_or_else(|| jerr(format!("field element must be a string, got {v}")))?;
    ctx.parse(s)
}

fn u64_list(v: &Value, what: &str) -> Result<Vec<u64>> {
    as_array(v, what)?
        .iter()
        .map(|x| x.as_u64().ok_or_else(|| jerr(format!("{what} entries must be nonnegative integers"))))
        .collect()
}

// ---------------------------------------------------------------- fields

/// The field object (without `q`).
pub fn field_to_json(ctx: &FieldCtx) -> Value {
    match ctx.spec() {
        FieldSpec::Rational { .. } => json!({"kind": "RATIONAL"}),
        FieldSpec::Cyclotomic { n } => json!({"kind": "CYCLOTOMIC", "n": n}),
        FieldSpec::FunctionField => json!({"kind": "FUNCTION_FIELD"}),
        FieldSpec::PrimeField { p, .. } => json!({"kind": "PRIME_FIELD", "p": p}),
        FieldSpec::ExtField { p, modulus, .. } => json!({"kind": "EXT_FIELD", "p": p, "modulus": modulus}),
    }
}

/// Builds a field from its object (or compact descriptor string such as
/// `EXT_FIELD(3,[1,0,1])`) and the encoded `q`. Fields whose `q` is fixed
/// accept only that value.
pub fn field_from_json(field: &Value, q: Option<&str>) -> Result<FieldCtx> {
    let shape = match field {
        Value::String(s) => parse_descriptor(s)?,
        Value::Object(_) => match get_str(field, "kind")? {
            "RATIONAL" => Shape::Rational,
            "CYCLOTOMIC" => Shape::Cyclotomic(get_u64(field, "n")? as u32),
            "FUNCTION_FIELD" => Shape::Function,
            "PRIME_FIELD" => Shape::Prime(get_u64(field, "p")?),
            "EXT_FIELD" => Shape::Ext(get_u64(field, "p")?, u64_list(get(field, "modulus")?, "modulus")?),
            other => return Err(Error::InvalidField(format!("unknown field kind {other:?}"))),
        },
        _ => return Err(jerr("field must be an object or a descriptor string")),
    };
    shape.build(q)
}

enum Shape {
    Rational,
    Cyclotomic(u32),
    Function,
    Prime(u64),
    Ext(u64, Vec<u64>),
}

impl Shape {
    fn build(self, q: Option<&str>) -> Result<FieldCtx> {
        let need_q = || q.ok_or_else(|| Error::InvalidField("this field needs an explicit q".into()));
        let fixed = |ctx: FieldCtx| -> Result<FieldCtx> {
            if let Some(text) = q {
                if ctx.parse(text)? != ctx.q() {
                    return Err(Error::InvalidField(format!(
                        "q is fixed to {} in {}",
                        ctx.print(&ctx.q()),
                        ctx.describe()
                    )));
                }
            }
            Ok(ctx)
        };
        match self {
            Shape::Rational => {
                let tmp = FieldCtx::new(FieldSpec::Rational { q: BigRational::from_integer(2.into()) })?;
                let Elem::Rat(q) = tmp.parse(need_q()?)? else { unreachable!("rational parse") };
                FieldCtx::new(FieldSpec::Rational { q })
            }
            Shape::Cyclotomic(n) => fixed(FieldCtx::new(FieldSpec::Cyclotomic { n })?),
            Shape::Function => fixed(FieldCtx::new(FieldSpec::FunctionField)?),
            Shape::Prime(p) => {
                let tmp = FieldCtx::new(FieldSpec::PrimeField { p, q: 1 })?;
                let Elem::Fp(q) = tmp.parse(need_q()?)? else { unreachable!("prime parse") };
                FieldCtx::new(FieldSpec::PrimeField { p, q })
            }
            Shape::Ext(p, modulus) => {
                let mut one = vec![0; modulus.len().saturating_sub(1)];
                if let Some(c) = one.first_mut() {
                    *c = 1;
                }
                let tmp = FieldCtx::new(FieldSpec::ExtField { p, modulus: modulus.clone(), q: one })?;
                let Elem::Fq(q) = tmp.parse(need_q()?)? else { unreachable!("extension parse") };
                FieldCtx::new(FieldSpec::ExtField { p, modulus, q })
            }
        }
    }
}

fn parse_descriptor(s: &str) -> Result<Shape> {
    let bad = || Error::InvalidField(format!("cannot parse field descriptor {s:?}"));
    let s = s.trim();
    let (name, args) = match s.split_once('(') {
        Some((n, rest)) => (n.trim(), Some(rest.strip_suffix(')').ok_or_else(bad)?)),
        None => (s, None),
    };
    let int = |t: &str| t.trim().parse::<u64>().map_err(|_| bad());
    match (name, args) {
        ("RATIONAL", None) => Ok(Shape::Rational),
        ("FUNCTION_FIELD", None) => Ok(Shape::Function),
        ("CYCLOTOMIC", Some(a)) => Ok(Shape::Cyclotomic(int(a)? as u32)),
        ("PRIME_FIELD", Some(a)) => Ok(Shape::Prime(int(a)?)),
        ("EXT_FIELD", Some(a)) => {
            let (p, m) = a.split_once(',').ok_or_else(bad)?;
            let m = m.trim().strip_prefix('[').and_then(|m| m.strip_suffix(']')).ok_or_else(bad)?;
            let modulus = m.split(',').map(int).collect::<Result<Vec<_>>>()?;
            Ok(Shape::Ext(int(p)?, modulus))
        }
        _ => Err(bad()),
    }
}

// ---------------------------------------------------------------- ring

/// `[[i, j, coeff], ...]` for the terms `coeff * tau^i * sigma^j`.
pub fn laurent_to_json(ctx: &FieldCtx, p: &LaurentPoly) -> Value {
    Value::Array(p.terms().map(|(&(i, j), c)| json!([i, j, ctx.print(c)])).collect())
}

pub fn laurent_from_json(ctx: &FieldCtx, v: &Value) -> Result<LaurentPoly> {
    let mut terms = Vec::new();
    for t in as_array(v, "polynomial")? {
        let t = as_array(t, "term")?;
        if t.len() != 3 {
            return Err(jerr("polynomial terms are [i, j, coeff]"));
        }
        let i = t[0].as_u64().ok_or_else(|| jerr("tau exponent must be a nonnegative integer"))?;
        let j = t[1].as_i64().ok_or_else(|| jerr("sigma exponent must be an integer"))?;
        terms.push(((i as u32, j as i32), elem(ctx, &t[2])?));
    }
    Ok(LaurentPoly::from_terms(ctx, terms))
}

fn point_to_json(ctx: &FieldCtx, w: &WeightPoint) -> Value {
    json!([ctx.print(&w.a), ctx.print(&w.b)])
}

fn point_from_json(ctx: &FieldCtx, v: &Value) -> Result<WeightPoint> {
    let ab = as_array(v, "base")?;
    if ab.len() != 2 {
        return Err(jerr("base must be [a, b]"));
    }
    WeightPoint::new(ctx, elem(ctx, &ab[0])?, elem(ctx, &ab[1])?)
}

// ---------------------------------------------------------------- modules

/// Row-major list of coefficient strings.
pub fn matrix_to_json(ctx: &FieldCtx, m: &Matrix) -> Value {
    Value::Array(
        m.to_rows().iter().map(|r| Value::Array(r.iter().map(|c| Value::String(ctx.print(c))).collect())).collect(),
    )
}

fn matrix_from_json(ctx: &FieldCtx, v: &Value, rows: usize, cols: usize) -> Result<Matrix> {
    let data = as_array(v, "matrix")?;
    if data.len() != rows {
        return Err(Error::Shape(format!("matrix has {} rows, expected {rows}", data.len())));
    }
    let mut m = Matrix::zeros(ctx, rows, cols);
    for (i, r) in data.iter().enumerate() {
        let r = as_array(r, "matrix row")?;
        if r.len() != cols {
            return Err(Error::Shape(format!("matrix row has {} entries, expected {cols}", r.len())));
        }
        for (j, c) in r.iter().enumerate() {
            m.set(i, j, elem(ctx, c)?);
        }
    }
    Ok(m)
}

/// Per-offset blocks as `[{"offset": k, "matrix": [...]}, ...]`.
pub fn graded_to_json(ctx: &FieldCtx, g: &GradedMap) -> Value {
    Value::Array(g.iter().map(|(k, m)| json!({"offset": k, "matrix": matrix_to_json(ctx, m)})).collect())
}

fn vectors_to_json(ctx: &FieldCtx, vs: &[Vec<Elem>]) -> Value {
    Value::Array(vs.iter().map(|v| Value::Array(v.iter().map(|c| Value::String(ctx.print(c))).collect())).collect())
}

pub fn module_to_json(m: &WeightModule) -> Value {
    let ctx = m.ctx();
    let raw = m.to_raw();
    let spaces: Vec<Value> =
        raw.spaces.iter().map(|(k, l)| json!({"offset": k, "dim": l.len(), "labels": l})).collect();
    let mut ops = Map::new();
    for (op, blocks) in &raw.ops {
        ops.insert(op.name().into(), graded_to_json(ctx, blocks));
    }
    json!({
        "schema": SCHEMA,
        "field": field_to_json(ctx),
        "q": ctx.print(&ctx.q()),
        "base": point_to_json(ctx, &raw.base),
        "kind": raw.kind,
        "circular": m.is_circular(),
        "window": [raw.window.0, raw.window.1],
        "spaces": spaces,
        "ops": ops,
        "edge_flags": {"low": raw.edges.low, "high": raw.edges.high},
    })
}

pub fn module_from_json(v: &Value) -> Result<WeightModule> {
    check_schema(v)?;
    let ctx = field_from_json(get(v, "field")?, v.get("q").and_then(Value::as_str))?;
    let base = point_from_json(&ctx, get(v, "base")?)?;
    let window = window_from_json(get(v, "window")?)?;
    let mut raw = RawModule::new(base, window, get_str(v, "kind")?);
    for s in as_array(get(v, "spaces")?, "spaces")? {
        let k = get_i64(s, "offset")?;
        let labels: Vec<String> = as_array(get(s, "labels")?, "labels")?
            .iter()
            .map(|l| l.as_str().map(String::from).ok_or_else(|| jerr("labels must be strings")))
            .collect::<Result<_>>()?;
        if let Some(d) = s.get("dim") {
            if d.as_u64() != Some(labels.len() as u64) {
                return Err(jerr(format!("space at offset {k}: dim does not match the labels")));
            }
        }
        if raw.spaces.insert(k, labels).is_some() {
            return Err(jerr(format!("duplicate space at offset {k}")));
        }
    }
    if let Some(e) = v.get("edge_flags") {
        raw.edges = EdgeFlags {
            low: get(e, "low")?.as_bool().ok_or_else(|| jerr("edge flags are booleans"))?,
            high: get(e, "high")?.as_bool().ok_or_else(|| jerr("edge flags are booleans"))?,
        };
    }
    // Shapes need the orbit to place targets on circular modules.
    let zero = WeightModule::new(&ctx, RawModule { ops: BTreeMap::new(), ..raw.clone() })?;
    let ops = get(v, "ops")?.as_object().ok_or_else(|| jerr("ops must be an object"))?;
    for (name, blocks) in ops {
        let op: Op = name.parse()?;
        let mut g = GradedMap::new();
        for b in as_array(blocks, "operator blocks")? {
            let k = get_i64(b, "offset")?;
            let t = zero
                .target(op, k)
                .ok_or_else(|| Error::InvalidModule(format!("{op} block at offset {k} leaves the window")))?;
            let m = matrix_from_json(&ctx, get(b, "matrix")?, zero.dim_at(t), zero.dim_at(k))?;
            if g.insert(k, m).is_some() {
                return Err(jerr(format!("duplicate {op} block at offset {k}")));
            }
        }
        raw.ops.insert(op, g);
    }
    WeightModule::new(&ctx, raw)
}

fn window_from_json(v: &Value) -> Result<(i64, i64)> {
    let w = as_array(v, "window")?;
    match (w.first().and_then(Value::as_i64), w.get(1).and_then(Value::as_i64), w.len()) {
        (Some(lo), Some(hi), 2) => Ok((lo, hi)),
        _ => Err(jerr("window must be [lo, hi]")),
    }
}

fn check_schema(v: &Value) -> Result<()> {
    match v.get("schema").and_then(Value::as_str) {
        Some(SCHEMA) => Ok(()),
        Some(other) => Err(jerr(format!("unsupported schema {other:?}, expected {SCHEMA:?}"))),
        None => Err(jerr("missing field \"schema\"")),
    }
}

// ---------------------------------------------------------------- reports

pub fn relation_report_to_json(ctx: &FieldCtx, r: &RelationReport) -> Value {
    let violations: Vec<Value> = r
        .violations
        .iter()
        .map(|x| {
            json!({
                "relation": x.relation,
                "offset": x.offset,
                "label": x.label,
                "computed": format_vector(ctx, &x.target_labels, &x.computed),
                "expected": format_vector(ctx, &x.target_labels, &x.expected),
            })
        })
        .collect();
    let skipped: Vec<Value> =
        r.skipped.iter().map(|s| json!({"relation": s.relation, "offset": s.offset, "label": s.label})).collect();
    json!({
        "algebra": r.algebra,
        "checked": r.checked,
        "passed": r.passed(),
        "violations": violations,
        "skipped": skipped,
    })
}

pub fn witness_to_json(ctx: &FieldCtx, w: &Witness) -> Value {
    match w {
        Witness::None => Value::Null,
        Witness::Submodule(bases) => json!({
            "type": "submodule",
            "bases": bases
                .iter()
                .map(|(k, vs)| json!({"offset": k, "vectors": vectors_to_json(ctx, vs)}))
                .collect::<Vec<_>>(),
        }),
        Witness::Idempotent(g) => json!({"type": "idempotent", "blocks": graded_to_json(ctx, g)}),
        Witness::Intertwiner(g) => json!({"type": "intertwiner", "blocks": graded_to_json(ctx, g)}),
        Witness::Unequal { first, second, classes } => json!({
            "type": "unequal_dimensions",
            "offsets": [first, second],
            "classes": classes
                .iter()
                .map(|(d, ks)| json!({"dim": d, "offsets": ks}))
                .collect::<Vec<_>>(),
        }),
        Witness::DimensionMismatch { offset, left, right } => json!({
            "type": "dimension_mismatch",
            "offset": offset,
            "left": left,
            "right": right,
        }),
        Witness::NoInvertible { hom_dim } => json!({"type": "no_invertible", "hom_dim": hom_dim}),
    }
}

pub fn verdict_to_json(ctx: &FieldCtx, v: &Verdict) -> Value {
    match v {
        Verdict::Yes(w) | Verdict::No(w) => json!({"verdict": v.label(), "witness": witness_to_json(ctx, w)}),
        Verdict::Unknown(reason) | Verdict::NotApplicable(reason) => {
            json!({"verdict": v.label(), "reason": reason})
        }
    }
}

fn dims_json(m: &WeightModule) -> Value {
    Value::Array(m.spaces().iter().map(|(k, l)| json!({"offset": k, "dim": l.len()})).collect())
}

pub fn decomposition_to_json(ctx: &FieldCtx, d: &Decomposition) -> Value {
    json!({
        "count": d.summands.len(),
        "complete": d.complete,
        "summands": d
            .summands
            .iter()
            .map(|s| json!({"kind": s.kind(), "dim": s.total_dim(), "dims": dims_json(s)}))
            .collect::<Vec<_>>(),
        "idempotent": d.idempotent.as_ref().map(|g| graded_to_json(ctx, g)),
    })
}

pub fn extension_to_json(ctx: &FieldCtx, e: &Extension) -> Value {
    let mut out = Map::new();
    out.insert("kind".into(), json!(e.kind()));
    out.insert("missing".into(), json!(e.missing.name()));
    out.insert("unconstrained_offsets".into(), json!(e.unconstrained_offsets));
    match &e.outcome {
        Outcome::Impossible(c) => {
            out.insert(
                "conflict".into(),
                json!({"offset": c.offset, "relation": c.relation, "label": c.label, "row": c.row}),
            );
        }
        Outcome::Unique(m) => {
            out.insert("representative".into(), module_to_json(m));
        }
        Outcome::Family { k, representative, basis } => {
            out.insert("k".into(), json!(k));
            out.insert("representative".into(), module_to_json(representative));
            out.insert(
                "homogeneous_basis".into(),
                Value::Array(basis.iter().map(|g| graded_to_json(ctx, g)).collect()),
            );
        }
    }
    Value::Object(out)
}

pub fn realization_to_json(ctx: &FieldCtx, r: &Realization) -> Value {
    json!({
        "field": field_to_json(ctx),
        "q": ctx.print(&ctx.q()),
        "N": r.n,
        "matrices": {
            "x": matrix_to_json(ctx, &r.x),
            "d_1": matrix_to_json(ctx, &r.d1),
            "d_-1": matrix_to_json(ctx, &r.dm1),
            "d": matrix_to_json(ctx, &r.d),
            "sigma": matrix_to_json(ctx, &r.sigma),
            "sigma^-1": matrix_to_json(ctx, &r.sigma_inv),
            "tau": matrix_to_json(ctx, &r.tau),
        },
        "report": relation_report_to_json(ctx, &r.report),
    })
}

// ---------------------------------------------------------------- scenarios

/// What a scenario builds.
#[derive(Clone, Debug, PartialEq)]
pub enum Source {
    Family(FamilyId),
    Gwa { flavor: SubalgebraName, kind: GwaKind, base: WeightPoint },
}

/// A parsed scenario file.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub ctx: FieldCtx,
    pub action: String,
    pub source: Option<Source>,
    pub window: (i64, i64),
    pub algebra: Option<SubalgebraName>,
    pub checks: Vec<String>,
    pub seed: Option<u64>,
    /// Degree bound of the polynomial realization.
    pub n: Option<usize>,
}

pub const ACTIONS: [&str; 7] = ["construct", "verify", "analyze", "extend", "iso", "realize", "suite"];
const CHECKS: [&str; 5] = ["dims", "equidim", "irreducible", "indecomposable", "decompose"];
const KEYS: [&str; 12] =
    ["schema", "field", "q", "action", "family", "gwa", "window", "algebra", "checks", "seed", "N", "budget"];

impl Scenario {
    /// Validates and parses a scenario document.
    pub fn from_json(v: &Value) -> Result<Self> {
        check_schema(v)?;
        let obj = v.as_object().ok_or_else(|| jerr("scenario must be an object"))?;
        if let Some(k) = obj.keys().find(|k| !KEYS.contains(&k.as_str())) {
            return Err(jerr(format!("unknown scenario field {k:?}")));
        }
        let ctx = field_from_json(get(v, "field")?, v.get("q").and_then(Value::as_str))?;
        let action = v.get("action").and_then(Value::as_str).unwrap_or("construct").to_string();
        if !ACTIONS.contains(&action.as_str()) {
            return Err(jerr(format!("unknown action {action:?}")));
        }
        let source = match (v.get("family"), v.get("gwa")) {
            (Some(_), Some(_)) => return Err(jerr("give either \"family\" or \"gwa\", not both")),
            (Some(f), None) => Some(Source::Family(family_from_json(&ctx, f)?)),
            (None, Some(g)) => Some(gwa_from_json(&ctx, g)?),
            (None, None) => None,
        };
        let window = match v.get("window") {
            Some(w) => window_from_json(w)?,
            None => (-3, 3),
        };
        let algebra = match v.get("algebra") {
            Some(a) => Some(a.as_str().ok_or_else(|| jerr("algebra must be a string"))?.parse()?),
            None => None,
        };
        let checks = match v.get("checks") {
            Some(c) => as_array(c, "checks")?
                .iter()
                .map(|x| {
                    let s = x.as_str().ok_or_else(|| jerr("checks must be strings"))?;
                    if CHECKS.contains(&s) {
                        Ok(s.to_string())
                    } else {
                        Err(jerr(format!("unknown check {s:?}")))
                    }
                })
                .collect::<Result<_>>()?,
            None => vec![],
        };
        let seed = match v.get("seed") {
            Some(s) => Some(s.as_u64().ok_or_else(|| jerr("seed must be a nonnegative integer"))?),
            None => None,
        };
        let n = match v.get("N") {
            Some(s) => Some(s.as_u64().ok_or_else(|| jerr("N must be a nonnegative integer"))? as usize),
            None => None,
        };
        if matches!(action.as_str(), "construct" | "verify" | "analyze" | "extend") && source.is_none() {
            return Err(jerr(format!("action {action:?} needs a \"family\" or \"gwa\" source")));
        }
        Ok(Scenario { ctx, action, source, window, algebra, checks, seed, n })
    }

    /// Builds the module the scenario describes.
    pub fn build(&self) -> Result<WeightModule> {
        match &self.source {
            Some(Source::Family(id)) => crate::families::construct_family(&self.ctx, id, self.window),
            Some(Source::Gwa { flavor, kind, base }) => {
                crate::wmod::construct_gwa(&self.ctx, *flavor, kind, base, self.window)
            }
            None => Err(jerr("scenario has no module source")),
        }
    }
}

/// `{"id": "VQ_B_A", "params": {"b": "3", "a": "5"}}`; `CHAIN_CYCLE` takes
/// `"word": ["Y", "Y1"]` and `"a": [...]` in its params.
pub fn family_from_json(ctx: &FieldCtx, v: &Value) -> Result<FamilyId> {
    let id = get_str(v, "id")?;
    let names = FamilyId::param_names(id).ok_or_else(|| jerr(format!("unknown family {id:?}")))?;
    let empty = Map::new();
    let params = match v.get("params") {
        Some(p) => p.as_object().ok_or_else(|| jerr("params must be an object"))?,
        None => &empty,
    };
    if let Some(k) = params.keys().find(|k| !names.contains(&k.as_str())) {
        return Err(jerr(format!("family {id} has no parameter {k:?}")));
    }
    let p = |name: &str| -> Result<Elem> {
        elem(ctx, params.get(name).ok_or_else(|| jerr(format!("family {id} needs parameter {name:?}")))?)
    };
    Ok(match id {
        "VQ_B_A" => FamilyId::VqBA { b: p("b")?, a: p("a")? },
        "VQ_JJ_1" => FamilyId::VqJJ1 { a: p("a")? },
        "VQ_JJ_CD" => FamilyId::VqJJCD { c: p("c")?, d: p("d")? },
        "VQ_JJ_3" => FamilyId::VqJJ3 { a: p("a")? },
        "VQ_JJ_4" => FamilyId::VqJJ4 { a: p("a")? },
        "VQ_F_B_A" => FamilyId::VqFBA { f: p("f")?, b: p("b")?, a: p("a")? },
        "V1_A_B" => FamilyId::V1AB { a: p("a")?, b: p("b")? },
        "V1_JJ_1" => FamilyId::V1JJ1 { b: p("b")? },
        "V1_JJ_CD" => FamilyId::V1JJCD { c: p("c")?, d: p("d")? },
        "V1_JJ_3" => FamilyId::V1JJ3 { b: p("b")? },
        "V1_JJ_4" => FamilyId::V1JJ4 { b: p("b")? },
        "V1_F_A_B" => FamilyId::V1FAB { f: p("f")?, a: p("a")?, b: p("b")? },
        "VCD_TWOROW" => FamilyId::VcdTwoRow { c: p("c")?, d: p("d")? },
        "REMARK_136" => FamilyId::Remark136,
        "CHAIN_CYCLE" => {
            let word = as_array(params.get("word").ok_or_else(|| jerr("CHAIN_CYCLE needs \"word\""))?, "word")?
                .iter()
                .map(|o| o.as_str().ok_or_else(|| jerr("word letters are strings"))?.parse::<Op>())
                .collect::<Result<Vec<_>>>()?;
            let a = as_array(params.get("a").ok_or_else(|| jerr("CHAIN_CYCLE needs \"a\""))?, "a")?
                .iter()
                .map(|x| elem(ctx, x))
                .collect::<Result<Vec<_>>>()?;
            FamilyId::ChainCycle { word, a }
        }
        _ => return Err(jerr(format!("unknown family {id:?}"))),
    })
}

pub fn family_to_json(ctx: &FieldCtx, id: &FamilyId) -> Value {
    let mut params = Map::new();
    for (name, e) in id.params() {
        params.insert(name.into(), json!(ctx.print(&e)));
    }
    if let FamilyId::ChainCycle { word, a } = id {
        params.insert("word".into(), json!(word.iter().map(|o| o.name()).collect::<Vec<_>>()));
        params.insert("a".into(), json!(a.iter().map(|e| ctx.print(e)).collect::<Vec<_>>()));
    }
    json!({"id": id.name(), "params": params})
}

/// `{"flavor": "AQ", "kind": "WITH_BREAKS", "j": [0, 1], "j_prime": [],
/// "base": ["2", "1/2"]}` and similarly for the other kinds.
fn gwa_from_json(ctx: &FieldCtx, v: &Value) -> Result<Source> {
    let flavor: SubalgebraName = get_str(v, "flavor")?.parse()?;
    let base = point_from_json(ctx, get(v, "base")?)?;
    let offsets = |key: &str| -> Result<Vec<i64>> {
        as_array(get(v, key)?, key)?
            .iter()
            .map(|x| x.as_i64().ok_or_else(|| jerr(format!("{key} entries are integers"))))
            .collect()
    };
    let kind = match get_str(v, "kind")? {
        "SIMPLE_NO_BREAK" => GwaKind::SimpleNoBreak,
        "WITH_BREAKS" => GwaKind::WithBreaks { j: offsets("j")?, j_prime: offsets("j_prime")? },
        "CIRC_NO_BREAK" => GwaKind::CircNoBreak { f: elem(ctx, get(v, "f")?)? },
        "FAMILY1" => GwaKind::Family1 { j: get_u64(v, "j")? as usize, word: Letter::parse_word(get_str(v, "word")?)? },
        "FAMILY2" => GwaKind::Family2 { word: Letter::parse_word(get_str(v, "word")?)?, f: elem(ctx, get(v, "f")?)? },
        other => return Err(jerr(format!("unknown gwa kind {other:?}"))),
    };
    Ok(Source::Gwa { flavor, kind, base })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::construct_family;
    use crate::poly::Field;
    use crate::verify::check_relations;

    fn qq() -> FieldCtx {
        field_from_json(&json!({"kind": "RATIONAL"}), Some("2")).unwrap()
    }

    #[test]
    fn field_descriptors_and_objects_agree() {
        let a = field_from_json(&json!("EXT_FIELD(3,[1,0,1])"), Some("2")).unwrap();
        let b = field_from_json(&json!({"kind": "EXT_FIELD", "p": 3, "modulus": [1, 0, 1]}), Some("[2]")).unwrap();
        assert_eq!(a, b);
        assert_eq!(field_to_json(&a), json!({"kind": "EXT_FIELD", "p": 3, "modulus": [1, 0, 1]}));
        assert!(field_from_json(&json!("CYCLOTOMIC(5)"), None).is_ok());
        assert!(field_from_json(&json!("CYCLOTOMIC(5)"), Some("2")).is_err());
        assert!(field_from_json(&json!({"kind": "RATIONAL"}), None).is_err());
    }

    #[test]
    fn module_round_trip_is_byte_stable() {
        let f = qq();
        let m = construct_family(&f, &FamilyId::VqBA { b: f.from_int(3), a: f.from_int(5) }, (-2, 2)).unwrap();
        let text = to_canonical_string(&module_to_json(&m), false);
        let back = module_from_json(&parse_str(&text).unwrap()).unwrap();
        assert_eq!(back, m);
        assert_eq!(to_canonical_string(&module_to_json(&back), false), text);
        assert!(text.starts_with("{\"base\":[\"5/1\",\"3/1\"]"), "{text}");
    }

    #[test]
    fn circular_module_round_trip() {
        let f = field_from_json(&json!("EXT_FIELD(2,[1,1,1])"), Some("[0,1]")).unwrap();
        let id = FamilyId::ChainCycle { word: vec![Op::Y], a: vec![f.one()] };
        let m = construct_family(&f, &id, (0, 0)).unwrap();
        let back = module_from_json(&module_to_json(&m)).unwrap();
        assert_eq!(back, m);
        assert_eq!(family_from_json(&f, &family_to_json(&f, &id)).unwrap(), id);
    }

    #[test]
    fn remark_fixture_report_names_the_failure() {
        let f = field_from_json(&json!("PRIME_FIELD(3)"), Some("2")).unwrap();
        let m = construct_family(&f, &FamilyId::Remark136, (0, 0)).unwrap();
        let r = relation_report_to_json(&f, &check_relations(&m, SubalgebraName::D).unwrap());
        assert_eq!(r["passed"], json!(false));
        assert_eq!(r["violations"][0]["relation"], json!("Y1X=qsigma-1"));
        assert_eq!(r["violations"][0]["offset"], json!(2));
        assert_eq!(r["violations"][0]["label"], json!("v3"));
    }

    #[test]
    fn scenario_validation() {
        let ok = json!({
            "schema": "1", "field": {"kind": "RATIONAL"}, "q": "2", "action": "construct",
            "family": {"id": "VQ_B_A", "params": {"b": "3", "a": "5"}}, "window": [-1, 1]
        });
        let s = Scenario::from_json(&ok).unwrap();
        assert_eq!(s.build().unwrap().total_dim(), 3);
        let mut bad = ok.clone();
        bad["schema"] = json!("2");
        assert!(Scenario::from_json(&bad).is_err());
        let mut bad = ok.clone();
        bad["family"]["params"]["z"] = json!("1");
        assert!(Scenario::from_json(&bad).is_err());
        let mut bad = ok;
        bad["colour"] = json!(1);
        assert!(Scenario::from_json(&bad).is_err());
    }

    #[test]
    fn gwa_scenario() {
        let v = json!({
            "schema": "1", "field": "RATIONAL", "q": "2",
            "gwa": {"flavor": "AQ", "kind": "WITH_BREAKS", "j": [0, 1], "j_prime": [], "base": ["0", "1/2"]},
            "window": [-3, 3]
        });
        let m = Scenario::from_json(&v).unwrap().build().unwrap();
        assert!(check_relations(&m, SubalgebraName::AQ).unwrap().passed());
    }

    #[test]
    fn laurent_round_trip() {
        let f = qq();
        let p = LaurentPoly::t_quantum(&f).mul(&f, &LaurentPoly::sigma_inv(&f));
        assert_eq!(laurent_from_json(&f, &laurent_to_json(&f, &p)).unwrap(), p);
    }
}
