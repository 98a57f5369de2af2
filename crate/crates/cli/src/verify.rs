//! Exact checks that one plane Cremona map conjugates another to a target.

use std::collections::BTreeMap;
use std::sync::Arc;

use cremona_core::cyclo::{CycNum, CycloField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;
use thiserror::Error;

use crate::schema::{cyc_to_value, parse_conductor, parse_cyc, SchemaError};

/// Sample coordinates are drawn from [−SAMPLE_RANGE, SAMPLE_RANGE].
pub const SAMPLE_RANGE: i64 = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("only {checked} of {trials} sample points avoided the indeterminacy locus")]
    TooManyIndeterminacyHits { checked: usize, trials: usize },
    #[error("a map must be three homogeneous polynomials of one degree: {0}")]
    NotHomogeneous(String),
    #[error("all three polynomials are zero")]
    ZeroMap,
    #[error("at least one trial is needed")]
    NoTrials,
    #[error(transparent)]
    Schema(#[from] SchemaError),
}

/// Homogeneous polynomial in x, y, z, keyed by exponent triples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    pub terms: BTreeMap<[u32; 3], CycNum>,
}

impl Poly {
    pub fn new(field: &Arc<CycloField>, terms: &[(CycNum, [u32; 3])]) -> Poly {
        let mut p = Poly { terms: BTreeMap::new() };
        for (c, e) in terms {
            p.add_term(field, *e, c);
        }
        p
    }

    fn add_term(&mut self, field: &Arc<CycloField>, e: [u32; 3], c: &CycNum) {
        let v = self.terms.remove(&e).unwrap_or_else(|| field.zero());
        let v = &v + c;
        if !v.is_zero() {
            self.terms.insert(e, v);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    fn homogeneous_degree(&self) -> Result<Option<u32>, VerifyError> {
        let mut degrees = self.terms.keys().map(|e| e.iter().sum::<u32>());
        let Some(d) = degrees.next() else { return Ok(None) };
        if degrees.any(|k| k != d) {
            return Err(VerifyError::NotHomogeneous(format!("mixed degrees in {self:?}")));
        }
        Ok(Some(d))
    }

    pub fn eval(&self, field: &Arc<CycloField>, p: &[CycNum; 3]) -> CycNum {
        let mut acc = field.zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for i in 0..3 {
                t = &t * &p[i].pow(e[i] as u64);
            }
            acc = &acc + &t;
        }
        acc
    }

    pub fn mul(&self, field: &Arc<CycloField>, other: &Poly) -> Poly {
        let mut out = Poly { terms: BTreeMap::new() };
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(field, [e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]], &(c1 * c2));
            }
        }
        out
    }

    fn constant(field: &Arc<CycloField>, c: CycNum) -> Poly {
        Poly::new(field, &[(c, [0, 0, 0])])
    }

    /// Substitute (x, y, z) ↦ (s[0], s[1], s[2]).
    fn substitute(&self, field: &Arc<CycloField>, s: &[Poly; 3]) -> Poly {
        let mut powers: [Vec<Poly>; 3] = std::array::from_fn(|i| vec![Poly::constant(field, field.one()), s[i].clone()]);
        let mut out = Poly { terms: BTreeMap::new() };
        for (e, c) in &self.terms {
            let mut t = Poly::constant(field, c.clone());
            for i in 0..3 {
                while powers[i].len() <= e[i] as usize {
                    let next = powers[i].last().expect("nonempty").mul(field, &s[i]);
                    powers[i].push(next);
                }
                t = t.mul(field, &powers[i][e[i] as usize]);
            }
            for (k, v) in t.terms {
                out.add_term(field, k, &v);
            }
        }
        out
    }
}

/// A rational map of P² given by three homogeneous polynomials.
#[derive(Debug, Clone)]
pub struct P2RationalMap {
    pub field: Arc<CycloField>,
    pub polys: [Poly; 3],
    pub degree: u32,
}

impl P2RationalMap {
    pub fn new(field: &Arc<CycloField>, polys: [Poly; 3]) -> Result<P2RationalMap, VerifyError> {
        let mut degree = None;
        for p in &polys {
            if let Some(d) = p.homogeneous_degree()? {
                if degree.is_some_and(|e| e != d) {
                    return Err(VerifyError::NotHomogeneous("coordinates of different degrees".into()));
                }
                degree = Some(d);
            }
        }
        let degree = degree.ok_or(VerifyError::ZeroMap)?;
        Ok(P2RationalMap { field: field.clone(), polys, degree })
    }

    /// None at an indeterminacy point.
    pub fn eval(&self, p: &[CycNum; 3]) -> Option<[CycNum; 3]> {
        let v: [CycNum; 3] = std::array::from_fn(|i| self.polys[i].eval(&self.field, p));
        if v.iter().all(|c| c.is_zero()) {
            None
        } else {
            Some(v)
        }
    }

    /// self ∘ inner, as polynomials before any cancellation.
    pub fn compose(&self, inner: &P2RationalMap) -> P2RationalMap {
        let polys = std::array::from_fn(|i| self.polys[i].substitute(&self.field, &inner.polys));
        P2RationalMap { field: self.field.clone(), polys, degree: self.degree * inner.degree }
    }
}

/// Equal as points of P²: every 2×2 minor vanishes.
pub fn projectively_equal(a: &[CycNum; 3], b: &[CycNum; 3]) -> bool {
    [(0, 1), (0, 2), (1, 2)].iter().all(|&(i, j)| (&(&a[i] * &b[j]) - &(&a[j] * &b[i])).is_zero())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Ordering {
    /// c ∘ f ∘ c = target, read literally.
    #[serde(rename = "c∘f∘c")]
    Sandwich,
    /// c ∘ f ∘ c⁻¹ = target, checked as target ∘ c = c ∘ f.
    #[serde(rename = "c∘f∘c⁻¹")]
    Forward,
    /// c⁻¹ ∘ f ∘ c = target, checked as c ∘ target = f ∘ c.
    #[serde(rename = "c⁻¹∘f∘c")]
    Backward,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrderingResult {
    pub ordering: Ordering,
    pub holds: bool,
    pub checked: usize,
    pub skipped: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub verified: bool,
    pub trials: usize,
    pub seed: u64,
    /// Degree of c ∘ f ∘ c before cancellation.
    pub composite_degree: u32,
    pub orderings: Vec<OrderingResult>,
}

fn sample_points(field: &Arc<CycloField>, trials: usize, seed: u64) -> Vec<[CycNum; 3]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(trials);
    while out.len() < trials {
        let v: [i64; 3] = std::array::from_fn(|_| rng.gen_range(-SAMPLE_RANGE..=SAMPLE_RANGE));
        if v != [0, 0, 0] {
            out.push(v.map(|k| field.int(k)));
        }
    }
    out
}

fn check_ordering(
    ordering: Ordering,
    f: &P2RationalMap,
    c: &P2RationalMap,
    target: &P2RationalMap,
    points: &[[CycNum; 3]],
) -> OrderingResult {
    let (mut checked, mut skipped, mut holds) = (0, 0, true);
    for p in points {
        let sides = match ordering {
            Ordering::Sandwich => c.eval(p).and_then(|q| f.eval(&q)).and_then(|q| c.eval(&q)).zip(target.eval(p)),
            Ordering::Forward => c.eval(p).and_then(|q| target.eval(&q)).zip(f.eval(p).and_then(|q| c.eval(&q))),
            Ordering::Backward => target.eval(p).and_then(|q| c.eval(&q)).zip(c.eval(p).and_then(|q| f.eval(&q))),
        };
        match sides {
            None => skipped += 1,
            Some((a, b)) => {
                checked += 1;
                if !projectively_equal(&a, &b) {
                    holds = false;
                }
            }
        }
    }
    OrderingResult { ordering, holds, checked, skipped }
}

/// Sample `trials` integer points and test each conjugation ordering
/// exactly. An ordering verifies when it agrees at every checkable point
/// and at least half of the points were checkable.
pub fn verify_p2_conjugation(
    f: &P2RationalMap,
    c: &P2RationalMap,
    target: &P2RationalMap,
    trials: usize,
    seed: u64,
) -> Result<VerifyReport, VerifyError> {
    if trials == 0 {
        return Err(VerifyError::NoTrials);
    }
    let points = sample_points(&f.field, trials, seed);
    let orderings: Vec<OrderingResult> = [Ordering::Sandwich, Ordering::Forward, Ordering::Backward]
        .into_iter()
        .map(|o| check_ordering(o, f, c, target, &points))
        .collect();
    let enough = |r: &OrderingResult| 2 * r.checked >= trials;
    if !orderings.iter().any(enough) {
        let checked = orderings.iter().map(|r| r.checked).max().unwrap_or(0);
        return Err(VerifyError::TooManyIndeterminacyHits { checked, trials });
    }
    let verified = orderings.iter().any(|r| r.holds && enough(r));
    Ok(VerifyReport { verified, trials, seed, composite_degree: c.degree * f.degree * c.degree, orderings })
}

/// The document read by `verify-map`.
#[derive(Debug, Clone)]
pub struct MapDocument {
    pub f: P2RationalMap,
    pub conjugator: P2RationalMap,
    pub target: P2RationalMap,
    pub trials: usize,
    pub seed: u64,
}

fn parse_map(field: &Arc<CycloField>, v: Option<&Value>, name: &str) -> Result<P2RationalMap, VerifyError> {
    let bad = |path: String, reason: &str| VerifyError::Schema(SchemaError::Invalid { path, reason: reason.into() });
    let coords = v.and_then(Value::as_array).ok_or_else(|| bad(name.into(), "expected three polynomials"))?;
    if coords.len() != 3 {
        return Err(bad(name.into(), "expected three polynomials"));
    }
    let mut polys = Vec::new();
    for (i, poly) in coords.iter().enumerate() {
        let pp = format!("{name}[{i}]");
        let terms = poly.as_array().ok_or_else(|| bad(pp.clone(), "expected a list of [coefficient, [i, j, k]]"))?;
        let mut parsed = Vec::new();
        for (j, t) in terms.iter().enumerate() {
            let tp = format!("{pp}[{j}]");
            let pair = t.as_array().filter(|a| a.len() == 2).ok_or_else(|| bad(tp.clone(), "expected [coefficient, [i, j, k]]"))?;
            let c = parse_cyc(field, &pair[0], &format!("{tp}[0]"))?;
            let e: Vec<u32> = pair[1]
                .as_array()
                .filter(|a| a.len() == 3)
                .and_then(|a| a.iter().map(|x| x.as_u64().map(|x| x as u32)).collect())
                .ok_or_else(|| bad(format!("{tp}[1]"), "expected three non-negative exponents"))?;
            parsed.push((c, [e[0], e[1], e[2]]));
        }
        polys.push(Poly::new(field, &parsed));
    }
    let polys: [Poly; 3] = polys.try_into().expect("three coordinates");
    P2RationalMap::new(field, polys)
}

pub fn parse_map_document(text: &str) -> Result<MapDocument, VerifyError> {
    let v: Value = serde_json::from_str(text).map_err(|e| SchemaError::Json(e.to_string()))?;
    let obj = v.as_object().ok_or(SchemaError::Invalid { path: "$".into(), reason: "expected an object".into() })?;
    let field = parse_conductor(obj.get("conductor").unwrap_or(&Value::Null))?;
    let opts = obj.get("options").and_then(Value::as_object);
    let opt = |k: &str, default: u64| opts.and_then(|o| o.get(k)).and_then(Value::as_u64).unwrap_or(default);
    Ok(MapDocument {
        f: parse_map(&field, obj.get("f"), "f")?,
        conjugator: parse_map(&field, obj.get("conjugator"), "conjugator")?,
        target: parse_map(&field, obj.get("target"), "target")?,
        trials: opt("trials", 50) as usize,
        seed: opt("seed", 0),
    })
}

fn map_value(m: &P2RationalMap) -> Value {
    Value::Array(
        m.polys
            .iter()
            .map(|p| Value::Array(p.terms.iter().map(|(e, c)| serde_json::json!([cyc_to_value(c), e])).collect()))
            .collect(),
    )
}

/// Inverse of [`parse_map_document`].
pub fn map_document_value(doc: &MapDocument) -> Value {
    serde_json::json!({
        "conductor": doc.f.field.conductor(),
        "f": map_value(&doc.f),
        "conjugator": map_value(&doc.conjugator),
        "target": map_value(&doc.target),
        "options": { "trials": doc.trials, "seed": doc.seed },
    })
}
