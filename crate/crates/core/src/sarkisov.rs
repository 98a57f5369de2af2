//! Elementary transformations between Hirzebruch surfaces, planned from
//! orbit lengths on the base, and conjugation by monomial maps.

use std::collections::VecDeque;
use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::cyclo::{CycNum, CycloError, CycloField};
use crate::groups::{closure, GroupError};
use crate::moebius::{orbit_lengths_available, KleinClass};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SarkisovError {
    #[error(transparent)]
    Cyclo(#[from] CycloError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("no orbit of length {length} on the base (available: {available:?})")]
    LengthNotAvailable { length: u64, available: Vec<u64> },
    #[error("F_0 has no invariant n-curve disjoint from a negative section")]
    NoInvariantCurve,
    #[error("exponent matrix has determinant {0}, expected ±1")]
    NotInvertible(i64),
    #[error("conductor mismatch: {left} vs {right}")]
    ConductorMismatch { left: u32, right: u32 },
    #[error("both exponents are zero")]
    DegenerateInput,
    #[error("orbit spectrum is empty")]
    EmptySpectrum,
}

/// A G-conic bundle F_n → P¹ together with the orbit lengths of the image
/// of G acting on the base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HirzebruchState {
    pub n: u64,
    pub base_class: KleinClass,
    pub spectrum: Vec<u64>,
}

impl HirzebruchState {
    pub fn new(n: u64, base_class: KleinClass) -> HirzebruchState {
        HirzebruchState { n, base_class, spectrum: orbit_lengths_available(base_class) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Side {
    /// Orbit on the negative section: F_n ⇢ F_{n+ℓ}.
    Sigma,
    /// Orbit on the invariant n-curve: F_n ⇢ F_{|n−ℓ|}.
    C,
}

pub fn elementary_transform(s: &HirzebruchState, length: u64, side: Side) -> Result<HirzebruchState, SarkisovError> {
    if !s.spectrum.contains(&length) {
        return Err(SarkisovError::LengthNotAvailable { length, available: s.spectrum.clone() });
    }
    let n = step_target(s.n, length, side).ok_or(SarkisovError::NoInvariantCurve)?;
    Ok(HirzebruchState { n, ..s.clone() })
}

fn step_target(n: u64, length: u64, side: Side) -> Option<u64> {
    match side {
        Side::Sigma => Some(n + length),
        Side::C if n >= 1 => Some(n.abs_diff(length)),
        Side::C => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum LinkKind {
    ElementaryOnSigma,
    ElementaryOnC,
    TypeIV,
    Contract,
    Conjugate,
    StereographicProjection,
    BlowUpFixedPoint,
}

impl fmt::Display for LinkKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinkStep {
    pub kind: LinkKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub length: Option<u64>,
    #[serde(rename = "from", skip_serializing_if = "Option::is_none")]
    pub from_n: Option<u64>,
    #[serde(rename = "to", skip_serializing_if = "Option::is_none")]
    pub to_n: Option<u64>,
    #[serde(rename = "map", skip_serializing_if = "Option::is_none")]
    pub map: Option<MonomialMap>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl LinkStep {
    pub fn elementary(side: Side, length: u64, from_n: u64, to_n: u64) -> LinkStep {
        let kind = match side {
            Side::Sigma => LinkKind::ElementaryOnSigma,
            Side::C => LinkKind::ElementaryOnC,
        };
        LinkStep { kind, length: Some(length), from_n: Some(from_n), to_n: Some(to_n), map: None, note: None }
    }

    pub fn conjugate(map: MonomialMap) -> LinkStep {
        LinkStep { kind: LinkKind::Conjugate, length: None, from_n: None, to_n: None, map: Some(map), note: None }
    }

    /// F₁ → P², the contraction of the (−1)-section.
    pub fn contract_f1() -> LinkStep {
        LinkStep { kind: LinkKind::Contract, length: None, from_n: Some(1), to_n: None, map: None, note: None }
    }

    pub fn other(kind: LinkKind, note: &str) -> LinkStep {
        LinkStep { kind, length: None, from_n: None, to_n: None, map: None, note: Some(note.to_string()) }
    }

    pub fn with_note(mut self, note: &str) -> LinkStep {
        self.note = Some(note.to_string());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PlanOutcome {
    Plan(Vec<LinkStep>),
    /// gcd of the spectrum, which obstructs reaching F₁.
    Unreachable(u64),
}

/// Steps from F_n to F₁ using orbit lengths from `spectrum`.
///
/// Among shortest plans, each step greedily prefers the smaller next n,
/// then the smaller length, then the Σ side.
pub fn bezout_plan(n: u64, spectrum: &[u64]) -> Result<PlanOutcome, SarkisovError> {
    let lengths: Vec<u64> = {
        let mut v: Vec<u64> = spectrum.iter().copied().filter(|&l| l > 0).collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    if lengths.is_empty() {
        return Err(SarkisovError::EmptySpectrum);
    }
    let d = lengths.iter().fold(0u64, |g, &l| g.gcd(&l));
    let r = n % d;
    if !(r == 1 % d || (r + 1).is_multiple_of(d)) {
        return Ok(PlanOutcome::Unreachable(d));
    }
    let max_len = *lengths.last().expect("nonempty");
    let mut bound = n.max(1) + 2 * max_len + 2;
    loop {
        if let Some(plan) = plan_within(n, &lengths, bound) {
            return Ok(PlanOutcome::Plan(plan));
        }
        bound *= 2;
    }
}

fn plan_within(n: u64, lengths: &[u64], bound: u64) -> Option<Vec<LinkStep>> {
    if n > bound {
        return None;
    }
    // distance to F₁ by breadth-first search over reversed moves
    let size = bound as usize + 1;
    let mut dist = vec![usize::MAX; size];
    dist[1] = 0;
    let mut queue = VecDeque::from([1u64]);
    while let Some(m) = queue.pop_front() {
        let dm = dist[m as usize];
        let mut preds = Vec::new();
        for &l in lengths {
            if m >= l {
                preds.push(m - l); // Σ move from m − ℓ
            }
            preds.push(m + l); // C move from m + ℓ
            if l > m {
                preds.push(l - m); // C move from ℓ − m
            }
        }
        for p in preds {
            if p <= bound && dist[p as usize] == usize::MAX {
                dist[p as usize] = dm + 1;
                queue.push_back(p);
            }
        }
    }
    if dist[n as usize] == usize::MAX {
        return None;
    }
    let mut steps = Vec::new();
    let mut cur = n;
    while cur != 1 {
        let mut best: Option<(u64, u64, Side)> = None;
        for &l in lengths {
            for side in [Side::Sigma, Side::C] {
                let Some(next) = step_target(cur, l, side) else { continue };
                if next <= bound && dist[next as usize].checked_add(1) == Some(dist[cur as usize]) {
                    let key = (next, l, side);
                    if best.is_none_or(|b| key < b) {
                        best = Some(key);
                    }
                }
            }
        }
        let (next, l, side) = best.expect("distance decreases along some move");
        steps.push(LinkStep::elementary(side, l, cur, next));
        cur = next;
    }
    Some(steps)
}

/// (x, y) ↦ (c₀ x^{e₀₀} y^{e₀₁}, c₁ x^{e₁₀} y^{e₁₁}) with det e = ±1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MonomialMap {
    pub exponents: [[i64; 2]; 2],
    pub coefficients: [CycNum; 2],
}

impl Serialize for MonomialMap {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl fmt::Debug for MonomialMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn monomial_term(c: &CycNum, e: [i64; 2]) -> String {
    let mut factors = Vec::new();
    for (v, k) in ["x", "y"].iter().zip(e) {
        match k {
            0 => {}
            1 => factors.push(v.to_string()),
            k => factors.push(format!("{v}{}", superscript(k))),
        }
    }
    let mono = factors.concat();
    if c.is_one() {
        if mono.is_empty() { "1".into() } else { mono }
    } else if mono.is_empty() {
        format!("{c}")
    } else if c.as_monomial().is_none() {
        format!("({c})·{mono}")
    } else {
        format!("{c}·{mono}")
    }
}

fn superscript(k: i64) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    let digits = k.unsigned_abs().to_string();
    let sign = if k < 0 { Some('⁻') } else { None };
    sign.into_iter().chain(digits.chars().map(|d| DIGITS[d as usize - '0' as usize])).collect()
}

impl fmt::Display for MonomialMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = monomial_term(&self.coefficients[0], self.exponents[0]);
        let b = monomial_term(&self.coefficients[1], self.exponents[1]);
        write!(f, "(x,y) ↦ ({a}, {b})")
    }
}

impl MonomialMap {
    pub fn new(exponents: [[i64; 2]; 2], coefficients: [CycNum; 2]) -> Result<MonomialMap, SarkisovError> {
        let det = exponents[0][0] * exponents[1][1] - exponents[0][1] * exponents[1][0];
        if det.abs() != 1 {
            return Err(SarkisovError::NotInvertible(det));
        }
        if coefficients.iter().any(|c| c.is_zero()) {
            return Err(SarkisovError::Cyclo(CycloError::DivisionByZero));
        }
        let (l, r) = (coefficients[0].conductor(), coefficients[1].conductor());
        if l != r {
            return Err(SarkisovError::ConductorMismatch { left: l, right: r });
        }
        Ok(MonomialMap { exponents, coefficients })
    }

    fn pure(field: &Arc<CycloField>, exponents: [[i64; 2]; 2]) -> MonomialMap {
        MonomialMap { exponents, coefficients: [field.one(), field.one()] }
    }

    pub fn identity(field: &Arc<CycloField>) -> MonomialMap {
        MonomialMap::pure(field, [[1, 0], [0, 1]])
    }

    /// (x, y) ↦ (x, x⁻¹ y).
    pub fn shear(field: &Arc<CycloField>) -> MonomialMap {
        MonomialMap::pure(field, [[1, 0], [-1, 1]])
    }

    /// (x, y) ↦ (x, x^{−q} y), the q-th power of the shear.
    pub fn shear_power(field: &Arc<CycloField>, q: i64) -> MonomialMap {
        MonomialMap::pure(field, [[1, 0], [-q, 1]])
    }

    /// (x, y) ↦ (y, x).
    pub fn swap(field: &Arc<CycloField>) -> MonomialMap {
        MonomialMap::pure(field, [[0, 1], [1, 0]])
    }

    /// (x, y) ↦ (1/x, 1/y), the pair (B, B).
    pub fn double_inversion(field: &Arc<CycloField>) -> MonomialMap {
        MonomialMap::pure(field, [[-1, 0], [0, -1]])
    }

    /// (x, y) ↦ (α x, β y).
    pub fn diagonal(alpha: CycNum, beta: CycNum) -> MonomialMap {
        MonomialMap { exponents: [[1, 0], [0, 1]], coefficients: [alpha, beta] }
    }

    /// (x, y) ↦ (ω_M^a x, ω_M^b y).
    pub fn rotation_pair(field: &Arc<CycloField>, m: u32, a: i64, b: i64) -> Option<MonomialMap> {
        Some(MonomialMap::diagonal(field.root_of_unity(m, a)?, field.root_of_unity(m, b)?))
    }

    pub fn field(&self) -> &Arc<CycloField> {
        self.coefficients[0].field()
    }

    pub fn determinant(&self) -> i64 {
        let e = &self.exponents;
        e[0][0] * e[1][1] - e[0][1] * e[1][0]
    }

    /// self ∘ other.
    pub fn compose(&self, other: &MonomialMap) -> MonomialMap {
        let (a, b) = (&self.exponents, &other.exponents);
        let exponents = [
            [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
            [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
        ];
        let coefficients = std::array::from_fn(|i| {
            let mut c = self.coefficients[i].clone();
            for j in 0..2 {
                c = &c * &int_pow(&other.coefficients[j], a[i][j]);
            }
            c
        });
        MonomialMap { exponents, coefficients }
    }

    pub fn checked_compose(&self, other: &MonomialMap) -> Result<MonomialMap, SarkisovError> {
        let (l, r) = (self.field().conductor(), other.field().conductor());
        if l != r {
            return Err(SarkisovError::ConductorMismatch { left: l, right: r });
        }
        Ok(self.compose(other))
    }

    pub fn inverse(&self) -> MonomialMap {
        let e = &self.exponents;
        let det = self.determinant();
        let inv = [[e[1][1] * det, -e[0][1] * det], [-e[1][0] * det, e[0][0] * det]];
        // (c·v^E)⁻¹: v = (c⁻¹ w)^{E⁻¹}
        let scaling = MonomialMap {
            exponents: [[1, 0], [0, 1]],
            coefficients: self.coefficients.clone().map(|c| c.invert().expect("nonzero coefficient")),
        };
        MonomialMap::pure(self.field(), inv).compose(&scaling)
    }

    /// c ∘ self ∘ c⁻¹.
    pub fn conjugate_by(&self, c: &MonomialMap) -> MonomialMap {
        c.compose(self).compose(&c.inverse())
    }

    /// Evaluate at a point of the torus.
    pub fn apply(&self, p: &[CycNum; 2]) -> [CycNum; 2] {
        std::array::from_fn(|i| {
            let mut c = self.coefficients[i].clone();
            for j in 0..2 {
                c = &c * &int_pow(&p[j], self.exponents[i][j]);
            }
            c
        })
    }
}

fn int_pow(c: &CycNum, e: i64) -> CycNum {
    if e >= 0 {
        c.pow(e as u64)
    } else {
        c.invert().expect("nonzero").pow(e.unsigned_abs())
    }
}

/// A birational conjugation followed by links down to P².
#[derive(Debug, Clone, Serialize)]
pub struct WitnessChain {
    pub original_generators: Vec<MonomialMap>,
    pub steps: Vec<LinkStep>,
    pub final_generators: Vec<MonomialMap>,
    /// Orbit lengths on the base, for elementary steps.
    pub spectrum: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainReport {
    pub valid: bool,
    /// Index of the first step that fails, or `steps.len()` when the
    /// generators reached at the end differ from the claimed ones.
    pub failed_step: Option<usize>,
    pub reason: Option<String>,
}

impl ChainReport {
    fn fail(step: usize, reason: String) -> ChainReport {
        ChainReport { valid: false, failed_step: Some(step), reason: Some(reason) }
    }
}

/// Replay the chain: conjugation steps act on the generators, elementary
/// steps must use an available length and continue the n-sequence, and a
/// contraction must start from F₁.
///
/// An elementary step from F₀ whose length is half the order of the final
/// group is accepted as the transformation at an orbit inside one fibre.
pub fn validate_chain(chain: &WitnessChain) -> ChainReport {
    let mut gens = chain.original_generators.clone();
    let mut current_n: Option<u64> = None;
    for (i, step) in chain.steps.iter().enumerate() {
        match step.kind {
            LinkKind::Conjugate => {
                let Some(c) = &step.map else {
                    return ChainReport::fail(i, "conjugation step without a map".into());
                };
                gens = gens.iter().map(|g| g.conjugate_by(c)).collect();
                // the conjugated generators must be the pure form the step claims
                if let Some(expected) = step.note.as_deref().and_then(|n| n.strip_prefix("generators: ")) {
                    let got = gens.iter().map(|g| g.to_string()).collect::<Vec<_>>().join("; ");
                    if got != expected {
                        return ChainReport::fail(i, format!("conjugation gives {got}, step claims {expected}"));
                    }
                }
            }
            LinkKind::ElementaryOnSigma | LinkKind::ElementaryOnC => {
                let (Some(l), Some(from), Some(to)) = (step.length, step.from_n, step.to_n) else {
                    return ChainReport::fail(i, "elementary step without length or endpoints".into());
                };
                if current_n.is_some_and(|n| n != from) {
                    return ChainReport::fail(i, format!("step starts at F_{from} but the chain is at F_{}", current_n.unwrap()));
                }
                let side = if step.kind == LinkKind::ElementaryOnSigma { Side::Sigma } else { Side::C };
                if step_target(from, l, side) != Some(to) {
                    return ChainReport::fail(i, format!("F_{from} with length {l} does not lead to F_{to}"));
                }
                let fibre_ok = from == 0 && side == Side::Sigma && group_half_order(&chain.final_generators) == Some(l);
                if !chain.spectrum.contains(&l) && !fibre_ok {
                    return ChainReport::fail(i, format!("no orbit of length {l}"));
                }
                current_n = Some(to);
            }
            LinkKind::Contract => {
                if step.from_n.is_some() && current_n.is_some_and(|n| n != 1) {
                    return ChainReport::fail(i, format!("contraction from F_{} instead of F_1", current_n.unwrap()));
                }
                current_n = None;
            }
            _ => {}
        }
    }
    if gens != chain.final_generators {
        return ChainReport::fail(chain.steps.len(), "final generators differ from the claimed ones".into());
    }
    ChainReport { valid: true, failed_step: None, reason: None }
}

fn group_half_order(gens: &[MonomialMap]) -> Option<u64> {
    let first = gens.first()?;
    let g = closure(MonomialMap::identity(first.field()), gens, |a, b| a.compose(b), 100_000).ok()?;
    Some(g.len() as u64 / 2)
}

/// Conjugation trace of the Euclidean algorithm for the dihedral group
/// generated by (ω_M^a x, ω_M^b y) and (1/x, 1/y), followed by the links to
/// P². The final exponent pair is (gcd(a, b), 0).
pub fn euclid_witness(a: u64, b: u64, m: u32) -> Result<(WitnessChain, (u64, u64)), SarkisovError> {
    if a == 0 && b == 0 {
        return Err(SarkisovError::DegenerateInput);
    }
    let field = CycloField::new(m)?;
    let rot = |x: u64, y: u64| MonomialMap::rotation_pair(&field, m, x as i64, y as i64).expect("M-th roots live at conductor M");
    let inv = MonomialMap::double_inversion(&field);
    let original = vec![rot(a, b), inv.clone()];
    let mut steps = Vec::new();
    let (mut x, mut y) = (a, b);
    let record = |map: MonomialMap, x: u64, y: u64| {
        let note = format!("generators: {}; {}", rot(x, y), inv);
        LinkStep::conjugate(map).with_note(&note)
    };
    if x > y {
        (x, y) = (y, x);
        steps.push(record(MonomialMap::swap(&field), x, y));
    }
    loop {
        if x == 0 {
            (x, y) = (y, 0);
            steps.push(record(MonomialMap::swap(&field), x, y));
            break;
        }
        let (q, r) = y.div_rem(&x);
        if q > 0 {
            y = r;
            steps.push(record(MonomialMap::shear_power(&field, q as i64), x, y));
        }
        if y == 0 {
            break;
        }
        (x, y) = (y, x);
        steps.push(record(MonomialMap::swap(&field), x, y));
    }
    let final_generators = vec![rot(x, 0), inv];
    // the fibre over y = 1 carries the dihedral action of order 2N
    let order_n = (m as u64) / (m as u64).gcd(&x);
    steps.push(LinkStep::elementary(Side::Sigma, order_n, 0, order_n).with_note("orbit of size N = |G|/2 in the fibre y = 1"));
    // the image on the base y is generated by y ↦ 1/y
    let spectrum = orbit_lengths_available(KleinClass::Cyclic(2));
    if let PlanOutcome::Plan(plan) = bezout_plan(order_n, &spectrum)? {
        steps.extend(plan);
    }
    steps.push(LinkStep::contract_f1());
    Ok((WitnessChain { original_generators: original, steps, final_generators, spectrum }, (x, 0)))
}
