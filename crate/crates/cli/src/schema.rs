//! JSON input documents: parsing with path-qualified errors, and the
//! canonical serialization used for round trips.

use std::sync::Arc;

use cremona_core::cyclo::{CycNum, CycloField};
use cremona_core::decider::{Generators, SurfaceDescriptor};
use cremona_core::delpezzo::{DP5Group, DP6Aut, DP6Point, Hex};
use cremona_core::moebius::{MoebiusMap, ProjPoint};
use cremona_core::quadric::{QuadricAut, QuadricPoint};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Map, Value};
use thiserror::Error;

/// Largest conductor accepted from a document.
pub const MAX_CONDUCTOR: i64 = 2000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SchemaError {
    #[error("{path}: {reason}")]
    Invalid { path: String, reason: String },
    #[error("conductor {value} is invalid: {reason}")]
    ConductorInvalid { value: String, reason: String },
    #[error("not valid JSON: {0}")]
    Json(String),
}

fn invalid(path: &str, reason: impl Into<String>) -> SchemaError {
    SchemaError::Invalid { path: path.to_string(), reason: reason.into() }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[derive(Default)]
pub struct Options {
    pub cap: Option<usize>,
    pub seed: u64,
}


#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadricLiteral {
    pub m: [[CycNum; 2]; 2],
    pub n: [[CycNum; 2]; 2],
    pub swap: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SexticLiteral {
    pub torus: [CycNum; 3],
    pub hex: String,
}

/// Generators as written in the document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeneratorLiterals {
    None,
    Plane(Vec<[[CycNum; 3]; 3]>),
    Base(Vec<[[CycNum; 2]; 2]>),
    Quadric(Vec<QuadricLiteral>),
    DP6(Vec<SexticLiteral>),
    DP5(Vec<Vec<u32>>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputDocument {
    pub conductor: u32,
    pub surface: SurfaceDescriptor,
    pub generators: GeneratorLiterals,
    pub options: Options,
}

fn field_of(doc: &InputDocument) -> Arc<CycloField> {
    CycloField::new(doc.conductor).expect("conductor validated at parse time")
}

fn moebius(m: &[[CycNum; 2]; 2]) -> Result<MoebiusMap, String> {
    MoebiusMap::new([m[0][0].clone(), m[0][1].clone(), m[1][0].clone(), m[1][1].clone()]).map_err(|e| e.to_string())
}

impl InputDocument {
    pub fn field(&self) -> Arc<CycloField> {
        field_of(self)
    }

    /// Convert the literals into group elements; errors name the offending path.
    pub fn build(&self) -> Result<Generators, SchemaError> {
        let at = |i: usize, key: &str| format!("generators[{i}]{key}");
        Ok(match &self.generators {
            GeneratorLiterals::None => Generators::None,
            GeneratorLiterals::Plane(ms) => {
                for (i, m) in ms.iter().enumerate() {
                    if cremona_core::decider::plane_det(m).is_zero() {
                        return Err(invalid(&at(i, ""), "matrix is singular"));
                    }
                }
                Generators::Plane(ms.clone())
            }
            GeneratorLiterals::Base(ms) => Generators::Base(
                ms.iter().enumerate().map(|(i, m)| moebius(m).map_err(|r| invalid(&at(i, ""), r))).collect::<Result<_, _>>()?,
            ),
            GeneratorLiterals::Quadric(qs) => {
                let mut out = Vec::new();
                for (i, q) in qs.iter().enumerate() {
                    let m = moebius(&q.m).map_err(|r| invalid(&at(i, ".m"), r))?;
                    let n = moebius(&q.n).map_err(|r| invalid(&at(i, ".n"), r))?;
                    out.push(QuadricAut::new(m, n, q.swap));
                }
                Generators::Quadric(out)
            }
            GeneratorLiterals::DP6(gs) => {
                let mut out = Vec::new();
                for (i, g) in gs.iter().enumerate() {
                    let hex = Hex::parse(&g.hex).map_err(|e| invalid(&at(i, ".hex"), e.to_string()))?;
                    out.push(DP6Aut::new(g.torus.clone(), hex).map_err(|e| invalid(&at(i, ".torus"), e.to_string()))?);
                }
                Generators::DP6(out)
            }
            GeneratorLiterals::DP5(ps) => {
                for (i, p) in ps.iter().enumerate() {
                    let mut sorted = p.clone();
                    sorted.sort_unstable();
                    if sorted != [1, 2, 3, 4, 5] {
                        return Err(invalid(&at(i, ".perm"), format!("{p:?} is not a permutation of 1..5")));
                    }
                }
                let g = DP5Group::new(ps.clone()).map_err(|e| invalid("generators", e.to_string()))?;
                Generators::DP5(g)
            }
        })
    }
}

// ---- parsing ----

fn get<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value, SchemaError> {
    obj.get(key).ok_or_else(|| invalid(&format!("{path}.{key}"), "missing"))
}

fn as_object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>, SchemaError> {
    v.as_object().ok_or_else(|| invalid(path, "expected an object"))
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, SchemaError> {
    v.as_array().ok_or_else(|| invalid(path, "expected an array"))
}

fn as_int(v: &Value, path: &str) -> Result<i64, SchemaError> {
    v.as_i64().ok_or_else(|| invalid(path, "expected an integer"))
}

fn big_int(v: &Value, path: &str) -> Result<BigInt, SchemaError> {
    match v {
        Value::Number(n) => n.as_i64().map(BigInt::from).ok_or_else(|| invalid(path, "expected an integer")),
        Value::String(s) => s.parse::<BigInt>().map_err(|_| invalid(path, "expected a decimal integer string")),
        _ => invalid_result(path, "expected an integer"),
    }
}

fn invalid_result<T>(path: &str, reason: &str) -> Result<T, SchemaError> {
    Err(invalid(path, reason))
}

/// A cyclotomic literal: an integer, or {"terms": [[p, q, e], ...]} for Σ (p/q)·ω_N^e.
pub fn parse_cyc(field: &Arc<CycloField>, v: &Value, path: &str) -> Result<CycNum, SchemaError> {
    if v.is_number() {
        return Ok(field.rational(BigRational::from_integer(big_int(v, path)?)));
    }
    let obj = as_object(v, path)?;
    if let Some(k) = obj.keys().find(|k| *k != "terms") {
        return Err(invalid(&format!("{path}.{k}"), "unknown key"));
    }
    let terms = as_array(get(obj, "terms", path)?, &format!("{path}.terms"))?;
    let mut acc = field.zero();
    for (i, t) in terms.iter().enumerate() {
        let tp = format!("{path}.terms[{i}]");
        let parts = as_array(t, &tp)?;
        if parts.len() != 3 {
            return Err(invalid(&tp, "expected [p, q, e]"));
        }
        let p = big_int(&parts[0], &format!("{tp}[0]"))?;
        let q = big_int(&parts[1], &format!("{tp}[1]"))?;
        if q.is_zero() {
            return Err(invalid(&format!("{tp}[1]"), "zero denominator"));
        }
        let e = as_int(&parts[2], &format!("{tp}[2]"))?;
        acc = &acc + &(&field.omega(e) * &field.rational(BigRational::new(p, q)));
    }
    Ok(acc)
}

fn parse_vec<const K: usize>(field: &Arc<CycloField>, v: &Value, path: &str) -> Result<[CycNum; K], SchemaError> {
    let items = as_array(v, path)?;
    if items.len() != K {
        return Err(invalid(path, format!("expected {K} entries, found {}", items.len())));
    }
    let parsed: Vec<CycNum> =
        items.iter().enumerate().map(|(i, x)| parse_cyc(field, x, &format!("{path}[{i}]"))).collect::<Result<_, _>>()?;
    Ok(parsed.try_into().expect("length checked"))
}

fn parse_matrix<const K: usize>(field: &Arc<CycloField>, v: &Value, path: &str) -> Result<[[CycNum; K]; K], SchemaError> {
    let rows = as_array(v, path)?;
    if rows.len() != K {
        return Err(invalid(path, format!("expected a {K}×{K} matrix, found {} rows", rows.len())));
    }
    let mut out = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        let rp = format!("{path}[{i}]");
        if as_array(r, &rp)?.len() != K {
            return Err(invalid(path, format!("expected a {K}×{K} matrix")));
        }
        out.push(parse_vec::<K>(field, r, &rp)?);
    }
    Ok(out.try_into().expect("length checked"))
}

fn parse_surface(v: &Value) -> Result<SurfaceDescriptor, SchemaError> {
    let path = "surface";
    if let Some(s) = v.as_str() {
        return match s {
            "P2" => Ok(SurfaceDescriptor::P2),
            "Quadric" => Ok(SurfaceDescriptor::Quadric),
            "DP5" => Ok(SurfaceDescriptor::DP5),
            "DP6" => Ok(SurfaceDescriptor::DP6),
            _ => Err(invalid(path, format!("unknown surface {s:?}"))),
        };
    }
    let obj = as_object(v, path)?;
    if obj.len() != 1 {
        return Err(invalid(path, "expected exactly one key"));
    }
    let (k, val) = obj.iter().next().expect("one key");
    let kp = format!("{path}.{k}");
    let n = as_int(val, &kp)?;
    let s = match k.as_str() {
        "Hirzebruch" if n >= 1 => SurfaceDescriptor::Hirzebruch(n as u64),
        "Hirzebruch" => return Err(invalid(&kp, "n must be at least 1")),
        "ConicBundle" => SurfaceDescriptor::ConicBundle(n),
        "DelPezzoLow" => SurfaceDescriptor::DelPezzoLow(n),
        _ => return Err(invalid(&kp, "unknown surface")),
    };
    s.validate().map_err(|e| invalid(&kp, e.to_string()))?;
    Ok(s)
}

fn parse_generators(field: &Arc<CycloField>, surface: SurfaceDescriptor, v: Option<&Value>) -> Result<GeneratorLiterals, SchemaError> {
    let empty = Vec::new();
    let items = match v {
        None => &empty,
        Some(v) => as_array(v, "generators")?,
    };
    let at = |i: usize| format!("generators[{i}]");
    Ok(match surface {
        SurfaceDescriptor::ConicBundle(_) | SurfaceDescriptor::DelPezzoLow(_) => {
            if !items.is_empty() {
                return Err(invalid("generators", "this surface takes no generators"));
            }
            GeneratorLiterals::None
        }
        SurfaceDescriptor::P2 => GeneratorLiterals::Plane(
            items.iter().enumerate().map(|(i, g)| parse_matrix::<3>(field, g, &at(i))).collect::<Result<_, _>>()?,
        ),
        SurfaceDescriptor::Hirzebruch(_) => GeneratorLiterals::Base(
            items.iter().enumerate().map(|(i, g)| parse_matrix::<2>(field, g, &at(i))).collect::<Result<_, _>>()?,
        ),
        SurfaceDescriptor::Quadric => {
            let mut out = Vec::new();
            for (i, g) in items.iter().enumerate() {
                let p = at(i);
                let obj = as_object(g, &p)?;
                let swap = match obj.get("swap") {
                    None => false,
                    Some(s) => s.as_bool().ok_or_else(|| invalid(&format!("{p}.swap"), "expected a boolean"))?,
                };
                out.push(QuadricLiteral {
                    m: parse_matrix::<2>(field, get(obj, "m", &p)?, &format!("{p}.m"))?,
                    n: parse_matrix::<2>(field, get(obj, "n", &p)?, &format!("{p}.n"))?,
                    swap,
                });
            }
            GeneratorLiterals::Quadric(out)
        }
        SurfaceDescriptor::DP6 => {
            let mut out = Vec::new();
            for (i, g) in items.iter().enumerate() {
                let p = at(i);
                let obj = as_object(g, &p)?;
                let hex = get(obj, "hex", &p)?.as_str().ok_or_else(|| invalid(&format!("{p}.hex"), "expected a word in r, s"))?;
                out.push(SexticLiteral { torus: parse_vec::<3>(field, get(obj, "torus", &p)?, &format!("{p}.torus"))?, hex: hex.to_string() });
            }
            GeneratorLiterals::DP6(out)
        }
        SurfaceDescriptor::DP5 => {
            let mut out = Vec::new();
            for (i, g) in items.iter().enumerate() {
                let p = format!("{}.perm", at(i));
                let perm = as_array(get(as_object(g, &at(i))?, "perm", &at(i))?, &p)?;
                let perm: Vec<u32> = perm
                    .iter()
                    .enumerate()
                    .map(|(j, x)| x.as_u64().map(|x| x as u32).ok_or_else(|| invalid(&format!("{p}[{j}]"), "expected a positive integer")))
                    .collect::<Result<_, _>>()?;
                out.push(perm);
            }
            GeneratorLiterals::DP5(out)
        }
    })
}

fn parse_options(v: Option<&Value>) -> Result<Options, SchemaError> {
    let Some(v) = v else { return Ok(Options::default()) };
    let obj = as_object(v, "options")?;
    let mut o = Options::default();
    for (k, val) in obj {
        let p = format!("options.{k}");
        match k.as_str() {
            "cap" => o.cap = Some(val.as_u64().ok_or_else(|| invalid(&p, "expected a positive integer"))? as usize),
            "seed" => o.seed = val.as_u64().ok_or_else(|| invalid(&p, "expected a non-negative integer"))?,
            _ => return Err(invalid(&p, "unknown option")),
        }
    }
    Ok(o)
}

pub fn parse_conductor(v: &Value) -> Result<Arc<CycloField>, SchemaError> {
    let n = v.as_i64().ok_or_else(|| SchemaError::ConductorInvalid { value: v.to_string(), reason: "not an integer".into() })?;
    if !(1..=MAX_CONDUCTOR).contains(&n) {
        return Err(SchemaError::ConductorInvalid { value: n.to_string(), reason: format!("must lie in 1..={MAX_CONDUCTOR}") });
    }
    CycloField::new(n as u32).map_err(|e| SchemaError::ConductorInvalid { value: n.to_string(), reason: e.to_string() })
}

pub fn parse_value(v: &Value) -> Result<InputDocument, SchemaError> {
    let obj = as_object(v, "$")?;
    for k in obj.keys() {
        if !matches!(k.as_str(), "conductor" | "surface" | "generators" | "options" | "comment") {
            return Err(invalid(k, "unknown key"));
        }
    }
    let field = parse_conductor(get(obj, "conductor", "$")?)?;
    let surface = parse_surface(get(obj, "surface", "$")?)?;
    let generators = parse_generators(&field, surface, obj.get("generators"))?;
    let options = parse_options(obj.get("options"))?;
    let doc = InputDocument { conductor: field.conductor(), surface, generators, options };
    doc.build()?;
    Ok(doc)
}

pub fn parse_input(text: &str) -> Result<InputDocument, SchemaError> {
    let v: Value = serde_json::from_str(text).map_err(|e| SchemaError::Json(e.to_string()))?;
    parse_value(&v)
}

// ---- serialization ----

fn int_value(b: &BigInt) -> Value {
    match b.to_i64() {
        Some(i) => json!(i),
        None => json!(b.to_string()),
    }
}

pub fn cyc_to_value(c: &CycNum) -> Value {
    let terms: Vec<Value> = c
        .coefficients()
        .iter()
        .enumerate()
        .filter(|(_, q)| !q.is_zero())
        .map(|(e, q)| json!([int_value(q.numer()), int_value(q.denom()), e]))
        .collect();
    json!({ "terms": terms })
}

fn matrix_value<const K: usize>(m: &[[CycNum; K]; K]) -> Value {
    Value::Array(m.iter().map(|r| Value::Array(r.iter().map(cyc_to_value).collect())).collect())
}

fn surface_value(s: &SurfaceDescriptor) -> Value {
    match s {
        SurfaceDescriptor::P2 => json!("P2"),
        SurfaceDescriptor::Quadric => json!("Quadric"),
        SurfaceDescriptor::DP5 => json!("DP5"),
        SurfaceDescriptor::DP6 => json!("DP6"),
        SurfaceDescriptor::Hirzebruch(n) => json!({ "Hirzebruch": n }),
        SurfaceDescriptor::ConicBundle(k) => json!({ "ConicBundle": k }),
        SurfaceDescriptor::DelPezzoLow(k) => json!({ "DelPezzoLow": k }),
    }
}

pub fn to_value(doc: &InputDocument) -> Value {
    let generators: Vec<Value> = match &doc.generators {
        GeneratorLiterals::None => Vec::new(),
        GeneratorLiterals::Plane(ms) => ms.iter().map(matrix_value).collect(),
        GeneratorLiterals::Base(ms) => ms.iter().map(matrix_value).collect(),
        GeneratorLiterals::Quadric(qs) => {
            qs.iter().map(|q| json!({ "m": matrix_value(&q.m), "n": matrix_value(&q.n), "swap": q.swap })).collect()
        }
        GeneratorLiterals::DP6(gs) => gs
            .iter()
            .map(|g| json!({ "torus": g.torus.iter().map(cyc_to_value).collect::<Vec<_>>(), "hex": g.hex }))
            .collect(),
        GeneratorLiterals::DP5(ps) => ps.iter().map(|p| json!({ "perm": p })).collect(),
    };
    let mut options = Map::new();
    if let Some(c) = doc.options.cap {
        options.insert("cap".into(), json!(c));
    }
    options.insert("seed".into(), json!(doc.options.seed));
    json!({
        "conductor": doc.conductor,
        "surface": surface_value(&doc.surface),
        "generators": generators,
        "options": options,
    })
}

pub fn serialize(doc: &InputDocument) -> String {
    serde_json::to_string_pretty(&to_value(doc)).expect("JSON values serialize")
}

// ---- literals from group elements, for building documents in code ----

fn moebius_literal(m: &MoebiusMap) -> [[CycNum; 2]; 2] {
    let e = m.entries();
    [[e[0].clone(), e[1].clone()], [e[2].clone(), e[3].clone()]]
}

impl QuadricLiteral {
    pub fn from_aut(a: &QuadricAut) -> QuadricLiteral {
        QuadricLiteral { m: moebius_literal(&a.m), n: moebius_literal(&a.n), swap: a.swap }
    }
}

impl GeneratorLiterals {
    pub fn base(maps: &[MoebiusMap]) -> GeneratorLiterals {
        GeneratorLiterals::Base(maps.iter().map(moebius_literal).collect())
    }

    pub fn quadric(auts: &[QuadricAut]) -> GeneratorLiterals {
        GeneratorLiterals::Quadric(auts.iter().map(QuadricLiteral::from_aut).collect())
    }

    pub fn sextic(auts: &[DP6Aut]) -> GeneratorLiterals {
        GeneratorLiterals::DP6(auts.iter().map(|a| SexticLiteral { torus: a.torus.clone(), hex: hex_word(a.hex) }).collect())
    }
}

/// A word over r, s evaluating to `h`.
pub fn hex_word(h: Hex) -> String {
    let mut w = "r".repeat(h.k as usize);
    if h.reflect {
        w.push('s');
    }
    w
}

// ---- points for the orbits subcommand ----

#[derive(Debug, Clone)]
pub enum PointLiterals {
    Line(Vec<ProjPoint>),
    Quadric(Vec<QuadricPoint>),
    Sextic(Vec<DP6Point>),
    Plane(Vec<[CycNum; 3]>),
    Labels(Vec<u32>),
}

pub fn parse_points(doc: &InputDocument, text: &str) -> Result<PointLiterals, SchemaError> {
    let v: Value = serde_json::from_str(text).map_err(|e| SchemaError::Json(e.to_string()))?;
    let field = doc.field();
    let items = as_array(&v, "points")?;
    let at = |i: usize| format!("points[{i}]");
    let proj = |v: &Value, p: &str| -> Result<ProjPoint, SchemaError> {
        let [a, b] = parse_vec::<2>(&field, v, p)?;
        ProjPoint::new(a, b).map_err(|e| invalid(p, e.to_string()))
    };
    Ok(match doc.surface {
        SurfaceDescriptor::Hirzebruch(_) => {
            PointLiterals::Line(items.iter().enumerate().map(|(i, x)| proj(x, &at(i))).collect::<Result<_, _>>()?)
        }
        SurfaceDescriptor::Quadric => {
            let mut out = Vec::new();
            for (i, x) in items.iter().enumerate() {
                let pair = as_array(x, &at(i))?;
                if pair.len() != 2 {
                    return Err(invalid(&at(i), "expected [[x0, x1], [y0, y1]]"));
                }
                out.push(QuadricPoint { x: proj(&pair[0], &format!("{}[0]", at(i)))?, y: proj(&pair[1], &format!("{}[1]", at(i)))? });
            }
            PointLiterals::Quadric(out)
        }
        SurfaceDescriptor::DP6 => {
            let mut out = Vec::new();
            for (i, x) in items.iter().enumerate() {
                let pair = as_array(x, &at(i))?;
                if pair.len() != 2 {
                    return Err(invalid(&at(i), "expected [[x0, x1, x2], [y0, y1, y2]]"));
                }
                let xs = parse_vec::<3>(&field, &pair[0], &format!("{}[0]", at(i)))?;
                let ys = parse_vec::<3>(&field, &pair[1], &format!("{}[1]", at(i)))?;
                out.push(DP6Point::new(xs, ys).map_err(|e| invalid(&at(i), e.to_string()))?);
            }
            PointLiterals::Sextic(out)
        }
        SurfaceDescriptor::P2 => PointLiterals::Plane(
            items.iter().enumerate().map(|(i, x)| parse_vec::<3>(&field, x, &at(i))).collect::<Result<_, _>>()?,
        ),
        SurfaceDescriptor::DP5 => PointLiterals::Labels(
            items
                .iter()
                .enumerate()
                .map(|(i, x)| match x.as_u64() {
                    Some(l @ 1..=5) => Ok(l as u32),
                    _ => Err(invalid(&at(i), "expected a label in 1..5")),
                })
                .collect::<Result<_, _>>()?,
        ),
        _ => return Err(invalid("surface", "this surface has no point model")),
    })
}
