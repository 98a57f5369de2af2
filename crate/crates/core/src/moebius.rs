//! Finite subgroups of PGL₂ over a cyclotomic field acting on P¹.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclo::{CycNum, CycloError, CycloField};
use crate::groups::{closure, is_dihedral, FamilyTag, GroupError, GroupTable};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MoebiusError {
    #[error(transparent)]
    Cyclo(#[from] CycloError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("matrix is singular")]
    Singular,
    #[error("point [0:0] is not projective")]
    ZeroPoint,
    #[error("a primitive {order}-th root of unity is not available at conductor {conductor}")]
    RootUnavailable { order: u32, conductor: u32 },
    #[error("element has no finite order below {cap}")]
    InfiniteOrder { cap: u64 },
    #[error("group of order {order} is not one of the finite subgroups of PGL2")]
    UnclassifiableGroup { order: usize },
    #[error("fixed points need conductor multiplied by {multiplier}")]
    NeedsExtension { multiplier: u32 },
}

/// A point [x:y] of P¹, scaled so the first nonzero coordinate is 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ProjPoint {
    x: CycNum,
    y: CycNum,
}

impl ProjPoint {
    pub fn new(x: CycNum, y: CycNum) -> Result<ProjPoint, MoebiusError> {
        if x.is_zero() && y.is_zero() {
            return Err(MoebiusError::ZeroPoint);
        }
        if x.is_zero() {
            let one = y.field().one();
            return Ok(ProjPoint { x, y: one });
        }
        let inv = x.invert()?;
        let y = y.checked_mul(&inv)?;
        Ok(ProjPoint { x: x.field().one(), y })
    }

    pub fn infinity(field: &Arc<CycloField>) -> ProjPoint {
        ProjPoint { x: field.one(), y: field.zero() }
    }

    pub fn zero(field: &Arc<CycloField>) -> ProjPoint {
        ProjPoint { x: field.zero(), y: field.one() }
    }

    /// [1:t]
    pub fn affine(t: CycNum) -> ProjPoint {
        ProjPoint { x: t.field().one(), y: t }
    }

    pub fn x(&self) -> &CycNum {
        &self.x
    }

    pub fn y(&self) -> &CycNum {
        &self.y
    }

    pub fn lift(&self, field: &Arc<CycloField>) -> Result<ProjPoint, MoebiusError> {
        ProjPoint::new(self.x.lift(field)?, self.y.lift(field)?)
    }
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}:{}]", self.x, self.y)
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}:{}]", self.x, self.y)
    }
}

/// An element of PGL₂, stored as a matrix whose first nonzero entry
/// (row-major) is 1. It acts by [x:y] ↦ [m00 x + m01 y : m10 x + m11 y].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MoebiusMap {
    m: [CycNum; 4],
}

impl fmt::Debug for MoebiusMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.m[0], self.m[1], self.m[2], self.m[3])
    }
}

impl fmt::Display for MoebiusMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl MoebiusMap {
    pub fn new(entries: [CycNum; 4]) -> Result<MoebiusMap, MoebiusError> {
        let n = entries[0].conductor();
        for e in &entries[1..] {
            if e.conductor() != n {
                return Err(CycloError::ConductorMismatch { left: n, right: e.conductor() }.into());
            }
        }
        let det = &(&entries[0] * &entries[3]) - &(&entries[1] * &entries[2]);
        if det.is_zero() {
            return Err(MoebiusError::Singular);
        }
        Ok(Self::scaled(entries))
    }

    fn scaled(m: [CycNum; 4]) -> MoebiusMap {
        let lead = m.iter().find(|c| !c.is_zero()).expect("nonsingular").clone();
        if lead.is_one() {
            return MoebiusMap { m };
        }
        let inv = lead.invert().expect("nonzero");
        MoebiusMap { m: m.map(|c| &c * &inv) }
    }

    pub fn from_ints(field: &Arc<CycloField>, e: [i64; 4]) -> Result<MoebiusMap, MoebiusError> {
        MoebiusMap::new(e.map(|v| field.int(v)))
    }

    pub fn identity(field: &Arc<CycloField>) -> MoebiusMap {
        MoebiusMap { m: [field.one(), field.zero(), field.zero(), field.one()] }
    }

    pub fn field(&self) -> &Arc<CycloField> {
        self.m[0].field()
    }

    pub fn entries(&self) -> &[CycNum; 4] {
        &self.m
    }

    pub fn is_identity(&self) -> bool {
        self.m[1].is_zero() && self.m[2].is_zero() && self.m[0] == self.m[3]
    }

    /// self ∘ other.
    pub fn compose(&self, other: &MoebiusMap) -> MoebiusMap {
        let (a, b) = (&self.m, &other.m);
        MoebiusMap::scaled([
            &(&a[0] * &b[0]) + &(&a[1] * &b[2]),
            &(&a[0] * &b[1]) + &(&a[1] * &b[3]),
            &(&a[2] * &b[0]) + &(&a[3] * &b[2]),
            &(&a[2] * &b[1]) + &(&a[3] * &b[3]),
        ])
    }

    pub fn inverse(&self) -> MoebiusMap {
        let m = &self.m;
        MoebiusMap::scaled([m[3].clone(), -&m[1], -&m[2], m[0].clone()])
    }

    pub fn pow(&self, k: u64) -> MoebiusMap {
        let mut acc = MoebiusMap::identity(self.field());
        for _ in 0..k {
            acc = acc.compose(self);
        }
        acc
    }

    pub fn apply(&self, p: &ProjPoint) -> ProjPoint {
        let m = &self.m;
        let x = &(&m[0] * &p.x) + &(&m[1] * &p.y);
        let y = &(&m[2] * &p.x) + &(&m[3] * &p.y);
        ProjPoint::new(x, y).expect("invertible map")
    }

    /// Smallest k ≥ 1 with self^k = id, searching up to `cap`.
    pub fn order(&self, cap: u64) -> Option<u64> {
        let mut acc = self.clone();
        for k in 1..=cap {
            if acc.is_identity() {
                return Some(k);
            }
            acc = acc.compose(self);
        }
        None
    }

    pub fn lift(&self, field: &Arc<CycloField>) -> Result<MoebiusMap, MoebiusError> {
        let m = [self.m[0].lift(field)?, self.m[1].lift(field)?, self.m[2].lift(field)?, self.m[3].lift(field)?];
        MoebiusMap::new(m)
    }

    pub fn conjugate_by(&self, c: &MoebiusMap) -> MoebiusMap {
        c.compose(self).compose(&c.inverse())
    }
}

/// Rotation of order n: [[1,0],[0,ζ_n]].
pub fn rotation(field: &Arc<CycloField>, n: u32) -> Result<MoebiusMap, MoebiusError> {
    let z = field.root_of_unity(n, 1).ok_or(MoebiusError::RootUnavailable { order: n, conductor: field.conductor() })?;
    MoebiusMap::new([field.one(), field.zero(), field.zero(), z])
}

/// [[1,0],[0,-1]]
pub fn negation(field: &Arc<CycloField>) -> MoebiusMap {
    MoebiusMap::from_ints(field, [1, 0, 0, -1]).expect("nonsingular")
}

/// [[0,1],[1,0]]
pub fn inversion(field: &Arc<CycloField>) -> MoebiusMap {
    MoebiusMap::from_ints(field, [0, 1, 1, 0]).expect("nonsingular")
}

/// Order-3 element completing the Klein four-group to A4: [[i,-i],[1,1]].
pub fn tetrahedral_three(field: &Arc<CycloField>) -> Result<MoebiusMap, MoebiusError> {
    let i = imaginary_unit(field)?;
    MoebiusMap::new([i.clone(), -i, field.one(), field.one()])
}

/// Involution extending A4 to S4: [[1,-i],[i,-1]].
pub fn octahedral_two(field: &Arc<CycloField>) -> Result<MoebiusMap, MoebiusError> {
    let i = imaginary_unit(field)?;
    MoebiusMap::new([field.one(), -&i, i, field.int(-1)])
}

/// Order-5 rotation of the icosahedral group: [[ζ_5,0],[0,1]].
pub fn icosahedral_five(field: &Arc<CycloField>) -> Result<MoebiusMap, MoebiusError> {
    let z = field.root_of_unity(5, 1).ok_or(MoebiusError::RootUnavailable { order: 5, conductor: field.conductor() })?;
    MoebiusMap::new([z, field.zero(), field.zero(), field.one()])
}

/// Involution of the icosahedral group: [[1, 1-ζ_5-ζ_5⁻¹],[1,-1]].
pub fn icosahedral_two(field: &Arc<CycloField>) -> Result<MoebiusMap, MoebiusError> {
    let z = field.root_of_unity(5, 1).ok_or(MoebiusError::RootUnavailable { order: 5, conductor: field.conductor() })?;
    let zi = field.root_of_unity(5, -1).expect("inverse root");
    let c = &(&field.one() - &z) - &zi;
    MoebiusMap::new([field.one(), c, field.one(), field.int(-1)])
}

fn imaginary_unit(field: &Arc<CycloField>) -> Result<CycNum, MoebiusError> {
    field.root_of_unity(4, 1).ok_or(MoebiusError::RootUnavailable { order: 4, conductor: field.conductor() })
}

pub fn moebius_closure(gens: &[MoebiusMap], cap: usize) -> Result<GroupTable<MoebiusMap>, MoebiusError> {
    let id = match gens.first() {
        Some(g) => MoebiusMap::identity(g.field()),
        None => MoebiusMap::identity(&CycloField::new(1)?),
    };
    Ok(closure(id, gens, |a, b| a.compose(b), cap)?)
}

/// The finite subgroups of PGL₂ over an algebraically closed field of characteristic 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum KleinClass {
    Cyclic(u64),
    Dihedral(u64),
    A4,
    S4,
    A5,
}

impl KleinClass {
    pub fn order(&self) -> u64 {
        match self {
            KleinClass::Cyclic(n) => *n,
            KleinClass::Dihedral(n) => 2 * n,
            KleinClass::A4 => 12,
            KleinClass::S4 => 24,
            KleinClass::A5 => 60,
        }
    }

    pub fn family(&self) -> FamilyTag {
        match *self {
            KleinClass::Cyclic(1) => FamilyTag::Trivial,
            KleinClass::Cyclic(n) => FamilyTag::Cyclic(n),
            KleinClass::Dihedral(n) => FamilyTag::Dihedral(n),
            KleinClass::A4 => FamilyTag::A4,
            KleinClass::S4 => FamilyTag::S4,
            KleinClass::A5 => FamilyTag::A5,
        }
    }

    pub fn is_cyclic(&self) -> bool {
        matches!(self, KleinClass::Cyclic(_))
    }

    pub fn is_odd_dihedral(&self) -> bool {
        matches!(self, KleinClass::Dihedral(n) if n % 2 == 1)
    }
}

impl fmt::Display for KleinClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KleinClass::Cyclic(n) => write!(f, "C{n}"),
            KleinClass::Dihedral(n) => write!(f, "D{n}"),
            KleinClass::A4 => write!(f, "A4"),
            KleinClass::S4 => write!(f, "S4"),
            KleinClass::A5 => write!(f, "A5"),
        }
    }
}

/// Classify a finite group by its order and element orders. Works for
/// any group table, and is meant for subgroups of PGL₂.
pub fn klein_classify<E>(g: &GroupTable<E>) -> Result<KleinClass, MoebiusError> {
    let n = g.len() as u64;
    if (0..g.len()).any(|x| g.element_order(x) == n) {
        return Ok(KleinClass::Cyclic(n));
    }
    let counts = g.order_counts();
    let c = |k: u64| counts.get(&k).copied().unwrap_or(0);
    let max = counts.keys().max().copied().unwrap_or(1);
    match n {
        12 if c(3) == 8 && c(2) == 3 => return Ok(KleinClass::A4),
        24 if c(2) == 9 && c(3) == 8 && c(4) == 6 && max == 4 => return Ok(KleinClass::S4),
        60 if c(2) == 15 && c(3) == 20 && c(5) == 24 => return Ok(KleinClass::A5),
        _ => {}
    }
    match is_dihedral(g) {
        Some(w) if w.n >= 2 => Ok(KleinClass::Dihedral(w.n)),
        _ => Err(MoebiusError::UnclassifiableGroup { order: g.len() }),
    }
}

/// Lengths of the non-free orbits, sorted. Cyclic groups of order n ≥ 2
/// have two fixed points; D_n has one orbit of length 2 and two of length
/// n, the orbits of [1:1] and [1:-1].
pub fn special_orbit_spectrum(class: KleinClass) -> Vec<u64> {
    match class {
        KleinClass::Cyclic(1) => vec![],
        KleinClass::Cyclic(_) => vec![1, 1],
        KleinClass::Dihedral(n) => {
            let mut v = vec![2, n, n];
            v.sort_unstable();
            v
        }
        KleinClass::A4 => vec![4, 4, 6],
        KleinClass::S4 => vec![6, 8, 12],
        KleinClass::A5 => vec![12, 20, 30],
    }
}

/// Distinct lengths of orbits on P¹, including the generic length |G|.
pub fn orbit_lengths_available(class: KleinClass) -> Vec<u64> {
    let mut v = special_orbit_spectrum(class);
    v.push(class.order());
    v.sort_unstable();
    v.dedup();
    v
}

pub fn orbit(g: &GroupTable<MoebiusMap>, p: &ProjPoint) -> Vec<ProjPoint> {
    let gens: Vec<&MoebiusMap> = g.generators().iter().map(|&i| g.element(i)).collect();
    let mut seen: HashSet<ProjPoint> = HashSet::from([p.clone()]);
    let mut out = vec![p.clone()];
    let mut queue = VecDeque::from([p.clone()]);
    while let Some(q) = queue.pop_front() {
        for s in &gens {
            let r = s.apply(&q);
            if seen.insert(r.clone()) {
                out.push(r.clone());
                queue.push_back(r);
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FixedPoints {
    /// The identity fixes everything.
    Everywhere,
    Points(Vec<ProjPoint>),
}

/// Fixed points of a finite-order element: roots of
/// m10·x² + (m11 − m00)·x·y − m01·y² = 0.
pub fn fixed_points(g: &MoebiusMap, cap: u64) -> Result<FixedPoints, MoebiusError> {
    let ord = g.order(cap).ok_or(MoebiusError::InfiniteOrder { cap })?;
    if ord == 1 {
        return Ok(FixedPoints::Everywhere);
    }
    let f = g.field();
    let m = g.entries();
    let b = &m[3] - &m[0];
    let mut pts = Vec::new();
    if m[2].is_zero() {
        // y·(b·x − m01·y) = 0
        pts.push(ProjPoint::infinity(f));
        if !b.is_zero() {
            pts.push(ProjPoint::new(m[1].clone(), b)?);
        }
    } else {
        let disc = &(&b * &b) + &(&(&m[2] * &m[1]) * &f.int(4));
        let s = match disc.sqrt() {
            Some(s) => s,
            None => return Err(MoebiusError::NeedsExtension { multiplier: extension_hint(&disc, ord) }),
        };
        let two_c = (&m[2] * &f.int(2)).invert()?;
        for root in [&s - &b, &(-&s) - &b] {
            let t = &root * &two_c;
            let p = ProjPoint::new(t, f.one())?;
            if !pts.contains(&p) {
                pts.push(p);
            }
        }
    }
    debug_assert!(pts.iter().all(|p| &g.apply(p) == p));
    Ok(FixedPoints::Points(pts))
}

/// Suggested conductor multiplier for a missing square root. For a rational
/// discriminant this is the conductor of Q(√d); otherwise 2·ord(g).
fn extension_hint(disc: &CycNum, ord: u64) -> u32 {
    if let Some(q) = disc.as_rational() {
        let prod: BigInt = q.numer() * q.denom();
        if let Some(v) = prod.abs().to_u64().filter(|&v| v < 1 << 40) {
            let mut m = squarefree(v) as i64;
            if prod.is_negative() {
                m = -m;
            }
            let c = if m.rem_euclid(4) == 1 { m.unsigned_abs() } else { 4 * m.unsigned_abs() };
            return c as u32;
        }
    }
    (2 * ord) as u32
}

fn squarefree(mut v: u64) -> u64 {
    let mut out = 1;
    let mut p = 2;
    while p * p <= v {
        let mut e = 0;
        while v.is_multiple_of(p) {
            v /= p;
            e += 1;
        }
        if e % 2 == 1 {
            out *= p;
        }
        p += 1;
    }
    out * v
}

/// All non-free orbits of the group, as sorted lengths.
pub fn special_orbits(g: &GroupTable<MoebiusMap>) -> Result<Vec<u64>, MoebiusError> {
    let mut pts: Vec<ProjPoint> = Vec::new();
    let mut seen: HashSet<ProjPoint> = HashSet::new();
    for x in 1..g.len() {
        if let FixedPoints::Points(ps) = fixed_points(g.element(x), g.element_order(x))? {
            for p in ps {
                if seen.insert(p.clone()) {
                    pts.push(p);
                }
            }
        }
    }
    let mut covered: HashSet<ProjPoint> = HashSet::new();
    let mut lengths = Vec::new();
    for p in pts {
        if covered.contains(&p) {
            continue;
        }
        let o = orbit(g, &p);
        lengths.push(o.len() as u64);
        covered.extend(o);
    }
    lengths.sort_unstable();
    Ok(lengths)
}

/// `special_orbits`, moving to larger conductors while square roots are missing.
/// Returns the lengths and the conductor used.
pub fn special_orbits_extending(gens: &[MoebiusMap], max_conductor: u32) -> Result<(Vec<u64>, u32), MoebiusError> {
    let mut gens = gens.to_vec();
    loop {
        let g = moebius_closure(&gens, crate::groups::DEFAULT_CAP)?;
        let n = gens.first().map_or(1, |m| m.field().conductor());
        match special_orbits(&g) {
            Ok(v) => return Ok((v, n)),
            Err(MoebiusError::NeedsExtension { multiplier }) => {
                let next = n.lcm(&multiplier);
                if next == n || next > max_conductor {
                    return Err(MoebiusError::NeedsExtension { multiplier });
                }
                let f = CycloField::new(next)?;
                gens = gens.iter().map(|m| m.lift(&f)).collect::<Result<_, _>>()?;
            }
            Err(e) => return Err(e),
        }
    }
}

/// Is `c ⟨a⟩ c⁻¹ = ⟨b⟩` as sets?
pub fn conjugates_onto(a: &GroupTable<MoebiusMap>, c: &MoebiusMap, b: &GroupTable<MoebiusMap>) -> bool {
    a.len() == b.len() && a.elements().iter().all(|x| b.index_of(&x.conjugate_by(c)).is_some())
}

/// Does every element of `sub` stay in `sub` under conjugation by `g`?
pub fn normalizes(g: &MoebiusMap, sub: &GroupTable<MoebiusMap>) -> bool {
    sub.elements().iter().all(|x| sub.index_of(&x.conjugate_by(g)).is_some())
}
