//! Automorphisms of P¹×P¹: pairs of Möbius maps, possibly followed by the
//! swap of the two rulings.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclo::CycloField;
use crate::groups::{closure, goursat_decompose, recognize_family, FamilyTag, GoursatData, GroupError, GroupTable};
use crate::moebius::{
    fixed_points, icosahedral_five, icosahedral_two, inversion, klein_classify, negation, octahedral_two, rotation,
    tetrahedral_three, FixedPoints, KleinClass, MoebiusError, MoebiusMap, ProjPoint,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuadricError {
    #[error(transparent)]
    Moebius(#[from] MoebiusError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("generators live over different conductors")]
    MixedConductors,
    #[error("conductor mismatch: {left} vs {right}")]
    ConductorMismatch { left: u32, right: u32 },
    #[error("no generators given")]
    Empty,
    #[error("the common fixed locus is a curve or the whole surface")]
    PositiveDimensional,
}

/// (x, y) ↦ (M x, N y), or (M y, N x) when `swap` is set.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadricAut {
    pub m: MoebiusMap,
    pub n: MoebiusMap,
    pub swap: bool,
}

impl fmt::Debug for QuadricAut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?}{})", self.m, self.n, if self.swap { ", swap" } else { "" })
    }
}

impl QuadricAut {
    pub fn new(m: MoebiusMap, n: MoebiusMap, swap: bool) -> QuadricAut {
        QuadricAut { m, n, swap }
    }

    pub fn identity(field: &Arc<CycloField>) -> QuadricAut {
        let i = MoebiusMap::identity(field);
        QuadricAut { m: i.clone(), n: i, swap: false }
    }

    pub fn field(&self) -> &Arc<CycloField> {
        self.m.field()
    }

    /// self ∘ other.
    pub fn compose(&self, other: &QuadricAut) -> QuadricAut {
        if self.swap {
            QuadricAut { m: self.m.compose(&other.n), n: self.n.compose(&other.m), swap: !other.swap }
        } else {
            QuadricAut { m: self.m.compose(&other.m), n: self.n.compose(&other.n), swap: other.swap }
        }
    }

    pub fn checked_compose(&self, other: &QuadricAut) -> Result<QuadricAut, QuadricError> {
        let (left, right) = (self.field().conductor(), other.field().conductor());
        if left != right {
            return Err(QuadricError::ConductorMismatch { left, right });
        }
        Ok(self.compose(other))
    }

    pub fn inverse(&self) -> QuadricAut {
        if self.swap {
            QuadricAut { m: self.n.inverse(), n: self.m.inverse(), swap: true }
        } else {
            QuadricAut { m: self.m.inverse(), n: self.n.inverse(), swap: false }
        }
    }

    pub fn act(&self, p: &QuadricPoint) -> QuadricPoint {
        if self.swap {
            QuadricPoint { x: self.m.apply(&p.y), y: self.n.apply(&p.x) }
        } else {
            QuadricPoint { x: self.m.apply(&p.x), y: self.n.apply(&p.y) }
        }
    }

    pub fn conjugate_by(&self, c: &QuadricAut) -> QuadricAut {
        c.compose(self).compose(&c.inverse())
    }

    pub fn lift(&self, field: &Arc<CycloField>) -> Result<QuadricAut, MoebiusError> {
        Ok(QuadricAut { m: self.m.lift(field)?, n: self.n.lift(field)?, swap: self.swap })
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadricPoint {
    pub x: ProjPoint,
    pub y: ProjPoint,
}

impl fmt::Debug for QuadricPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?})", self.x, self.y)
    }
}

pub fn quadric_closure(gens: &[QuadricAut], cap: usize) -> Result<GroupTable<QuadricAut>, QuadricError> {
    let first = gens.first().ok_or(QuadricError::Empty)?;
    let n = first.field().conductor();
    if gens.iter().any(|g| g.field().conductor() != n) {
        return Err(QuadricError::MixedConductors);
    }
    Ok(closure(QuadricAut::identity(first.field()), gens, |a, b| a.compose(b), cap)?)
}

/// How the group sits relative to the two rulings.
pub struct RulingAnalysis {
    pub group: GroupTable<QuadricAut>,
    /// 2 if both rulings are preserved, 1 if some element swaps them.
    pub rank: u8,
    /// The subgroup preserving each ruling (all of G in rank 2).
    pub kernel: GroupTable<QuadricAut>,
    /// Goursat data of the kernel inside PGL₂ × PGL₂.
    pub goursat: GoursatData<MoebiusMap, MoebiusMap>,
    /// Classes of the two projections of the kernel.
    pub factor_classes: (KleinClass, KleinClass),
    /// First generator exchanging the rulings, in rank 1.
    pub swap_rep: Option<QuadricAut>,
}

impl fmt::Debug for RulingAnalysis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RulingAnalysis")
            .field("order", &self.group.len())
            .field("rank", &self.rank)
            .field("kernel", &self.kernel.len())
            .field("factor_classes", &self.factor_classes)
            .finish()
    }
}

pub fn analyze_rulings(gens: &[QuadricAut], cap: usize) -> Result<RulingAnalysis, QuadricError> {
    let group = quadric_closure(gens, cap)?;
    let rank = if gens.iter().any(|g| g.swap) { 1 } else { 2 };
    let kernel_idx: Vec<usize> = (0..group.len()).filter(|&i| !group.element(i).swap).collect();
    let kgens: Vec<QuadricAut> =
        group.generating_set(&kernel_idx).into_iter().map(|i| group.element(i).clone()).collect();
    let identity = QuadricAut::identity(gens[0].field());
    let kernel = closure(identity, &kgens, |a, b| a.compose(b), cap)?;
    let goursat = goursat_decompose(&kernel, |a| a.m.clone(), |a| a.n.clone(), |a, b| a.compose(b), |a, b| a.compose(b))?;
    let factor_classes = (klein_classify(&goursat.g1)?, klein_classify(&goursat.g2)?);
    let swap_rep = gens.iter().find(|g| g.swap).cloned();
    Ok(RulingAnalysis { group, rank, kernel, goursat, factor_classes, swap_rep })
}

#[derive(Clone)]
enum Locus {
    All,
    Finite(Vec<ProjPoint>),
}

impl Locus {
    fn meet(self, other: Locus) -> Locus {
        match (self, other) {
            (Locus::All, o) | (o, Locus::All) => o,
            (Locus::Finite(a), Locus::Finite(b)) => Locus::Finite(a.into_iter().filter(|p| b.contains(p)).collect()),
        }
    }
}

fn moebius_locus(m: &MoebiusMap) -> Result<Locus, MoebiusError> {
    Ok(match fixed_points(m, 1000)? {
        FixedPoints::Everywhere => Locus::All,
        FixedPoints::Points(v) => Locus::Finite(v),
    })
}

/// Points fixed by every generator. Ruling-preserving generators fix
/// products of fixed points of their factors; a swapping generator
/// (M, N, swap) fixes exactly the points (x, N x) with x fixed by M N.
pub fn common_fixed_points(gens: &[QuadricAut]) -> Result<Vec<QuadricPoint>, QuadricError> {
    let (mut lx, mut ly) = (Locus::All, Locus::All);
    for g in gens.iter().filter(|g| !g.swap) {
        lx = lx.meet(moebius_locus(&g.m)?);
        ly = ly.meet(moebius_locus(&g.n)?);
    }
    let candidates: Vec<QuadricPoint> = match gens.iter().find(|g| g.swap) {
        None => match (&lx, &ly) {
            (Locus::Finite(a), Locus::Finite(b)) => {
                a.iter().flat_map(|x| b.iter().map(move |y| QuadricPoint { x: x.clone(), y: y.clone() })).collect()
            }
            _ => return Err(QuadricError::PositiveDimensional),
        },
        Some(s) => {
            let mn = s.m.compose(&s.n);
            match (moebius_locus(&mn)?, &lx, &ly) {
                (Locus::Finite(xs), _, _) => {
                    xs.into_iter().map(|x| QuadricPoint { y: s.n.apply(&x), x }).collect()
                }
                (Locus::All, Locus::Finite(xs), _) => {
                    xs.iter().map(|x| QuadricPoint { x: x.clone(), y: s.n.apply(x) }).collect()
                }
                (Locus::All, _, Locus::Finite(ys)) => {
                    ys.iter().map(|y| QuadricPoint { x: s.m.apply(y), y: y.clone() }).collect()
                }
                (Locus::All, Locus::All, Locus::All) => return Err(QuadricError::PositiveDimensional),
            }
        }
    };
    let mut out: Vec<QuadricPoint> = Vec::new();
    for p in candidates {
        if gens.iter().all(|g| g.act(&p) == p) && !out.contains(&p) {
            out.push(p);
        }
    }
    Ok(out)
}

pub fn orbit_on_quadric(g: &GroupTable<QuadricAut>, p: &QuadricPoint) -> Vec<QuadricPoint> {
    let gens: Vec<&QuadricAut> = g.generators().iter().map(|&i| g.element(i)).collect();
    let mut seen: HashSet<QuadricPoint> = HashSet::from([p.clone()]);
    let mut out = vec![p.clone()];
    let mut queue = VecDeque::from([p.clone()]);
    while let Some(q) = queue.pop_front() {
        for s in &gens {
            let r = s.act(&q);
            if seen.insert(r.clone()) {
                out.push(r.clone());
                queue.push_back(r);
            }
        }
    }
    out
}

/// Named factors used to write down the generator lists of the standard
/// finite subgroups of Aut(P¹×P¹).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Factor {
    Identity,
    Negation,
    Inversion,
    TetrahedralThree,
    OctahedralTwo,
    IcosahedralFive,
    IcosahedralTwo,
    /// Images of the icosahedral generators under an involutive outer
    /// automorphism of A5.
    TwistedIcosahedralFive,
    TwistedIcosahedralTwo,
    Rotation(u32),
}

impl Factor {
    pub fn build(self, field: &Arc<CycloField>) -> Result<MoebiusMap, MoebiusError> {
        Ok(match self {
            Factor::Identity => MoebiusMap::identity(field),
            Factor::Negation => negation(field),
            Factor::Inversion => inversion(field),
            Factor::TetrahedralThree => tetrahedral_three(field)?,
            Factor::OctahedralTwo => octahedral_two(field)?,
            Factor::IcosahedralFive => icosahedral_five(field)?,
            Factor::IcosahedralTwo => icosahedral_two(field)?,
            Factor::TwistedIcosahedralFive => outer_twist(field)?.0,
            Factor::TwistedIcosahedralTwo => outer_twist(field)?.1,
            Factor::Rotation(n) => rotation(field, n)?,
        })
    }
}

/// Images (X, Y) of the icosahedral generators (E, F) under an involutive
/// outer automorphism of A5 = ⟨E, F⟩. Found by search: X of order 5 outside
/// the conjugacy class of E, Y an involution with (XY)³ = 1, such that
/// E ↦ X, F ↦ Y extends to an automorphism of order 2.
pub fn outer_twist(field: &Arc<CycloField>) -> Result<(MoebiusMap, MoebiusMap), MoebiusError> {
    let e = icosahedral_five(field)?;
    let f = icosahedral_two(field)?;
    let g = crate::moebius::moebius_closure(&[e.clone(), f.clone()], 100)?;
    let ie = g.index_of(&e).expect("generator");
    let class_e: HashSet<usize> = (0..g.len()).map(|x| g.conjugate(ie, x)).collect();
    for x in 0..g.len() {
        if g.element_order(x) != 5 || class_e.contains(&x) {
            continue;
        }
        for y in 0..g.len() {
            if g.element_order(y) != 2 || g.element_order(g.mul(x, y)) != 3 {
                continue;
            }
            // the map on words: generator 0 ↦ x, generator 1 ↦ y
            let images = [x, y];
            let hom: Vec<usize> =
                (0..g.len()).map(|z| g.word(z).into_iter().fold(0, |acc, k| g.mul(acc, images[k]))).collect();
            let well_defined = (0..g.len())
                .all(|a| (0..g.len()).all(|b| hom[g.mul(a, b)] == g.mul(hom[a], hom[b])));
            let bijective = hom.iter().collect::<HashSet<_>>().len() == g.len();
            let involutive = (0..g.len()).all(|z| hom[hom[z]] == z);
            if well_defined && bijective && involutive {
                return Ok((g.element(x).clone(), g.element(y).clone()));
            }
        }
    }
    unreachable!("A5 has involutive outer automorphisms")
}

/// A generator list written with named factors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub name: String,
    pub generators: Vec<(Factor, Factor, bool)>,
}

impl TableRow {
    fn new(name: &str, generators: &[(Factor, Factor, bool)]) -> TableRow {
        TableRow { name: name.to_string(), generators: generators.to_vec() }
    }

    pub fn build(&self, field: &Arc<CycloField>) -> Result<Vec<QuadricAut>, MoebiusError> {
        self.generators.iter().map(|&(a, b, s)| Ok(QuadricAut::new(a.build(field)?, b.build(field)?, s))).collect()
    }
}

/// Rank-1 groups whose kernel projects onto A4.
pub fn tetrahedral_rows() -> Vec<TableRow> {
    use Factor::*;
    vec![
        TableRow::new("A4 diagonal, plain swap", &[(Negation, Negation, false), (Inversion, Inversion, false), (TetrahedralThree, TetrahedralThree, false), (Identity, Identity, true)]),
        TableRow::new("A4 diagonal, octahedral swap", &[(Negation, Negation, false), (Inversion, Inversion, false), (TetrahedralThree, TetrahedralThree, false), (OctahedralTwo, OctahedralTwo, true)]),
        TableRow::new("V4 x V4 over A4, plain swap", &[(Negation, Identity, false), (Inversion, Identity, false), (TetrahedralThree, TetrahedralThree, false), (Identity, Identity, true)]),
        TableRow::new("V4 x V4 over A4, twisted swap", &[(Negation, Identity, false), (Inversion, Identity, false), (TetrahedralThree, TetrahedralThree, false), (Identity, TetrahedralThree, true)]),
        TableRow::new("V4 x V4 over A4, octahedral swap", &[(Negation, Identity, false), (Inversion, Identity, false), (TetrahedralThree, TetrahedralThree, false), (OctahedralTwo, OctahedralTwo, true)]),
        TableRow::new("A4 x A4, plain swap", &[(Negation, Identity, false), (Inversion, Identity, false), (TetrahedralThree, Identity, false), (Identity, Identity, true)]),
        TableRow::new("A4 x A4, octahedral swap", &[(Negation, Identity, false), (Inversion, Identity, false), (TetrahedralThree, Identity, false), (OctahedralTwo, OctahedralTwo, true)]),
    ]
}

/// Rank-1 groups whose kernel projects onto S4.
pub fn octahedral_rows() -> Vec<TableRow> {
    use Factor::*;
    vec![
        TableRow::new("S4 diagonal", &[(Negation, Negation, false), (Inversion, Inversion, false), (TetrahedralThree, TetrahedralThree, false), (OctahedralTwo, OctahedralTwo, false), (Identity, Identity, true)]),
        TableRow::new("V4 x V4 over S4", &[(Negation, Identity, false), (Inversion, Identity, false), (TetrahedralThree, TetrahedralThree, false), (OctahedralTwo, OctahedralTwo, false), (Identity, Identity, true)]),
        TableRow::new("A4 x A4 over C2, plain swap", &[(Negation, Identity, false), (Inversion, Identity, false), (TetrahedralThree, Identity, false), (OctahedralTwo, OctahedralTwo, false), (Identity, Identity, true)]),
        TableRow::new("A4 x A4 over C2, twisted swap", &[(Negation, Identity, false), (Inversion, Identity, false), (TetrahedralThree, Identity, false), (OctahedralTwo, OctahedralTwo, false), (Identity, OctahedralTwo, true)]),
        TableRow::new("S4 wreath C2", &[(Negation, Identity, false), (Inversion, Identity, false), (TetrahedralThree, Identity, false), (OctahedralTwo, Identity, false), (Identity, Identity, true)]),
    ]
}

/// Rank-1 groups whose kernel projects onto A5.
pub fn icosahedral_rows() -> Vec<TableRow> {
    use Factor::*;
    vec![
        TableRow::new("A5 diagonal", &[(IcosahedralFive, IcosahedralFive, false), (IcosahedralTwo, IcosahedralTwo, false), (Identity, Identity, true)]),
        TableRow::new("A5 twisted diagonal", &[(IcosahedralFive, TwistedIcosahedralFive, false), (IcosahedralTwo, TwistedIcosahedralTwo, false), (Identity, Identity, true)]),
        TableRow::new("A5 wreath C2", &[(Identity, IcosahedralFive, false), (Identity, IcosahedralTwo, false), (IcosahedralFive, Identity, false), (IcosahedralTwo, Identity, false), (Identity, Identity, true)]),
    ]
}

/// Non-linearizable products and wreath products over both rulings.
pub fn product_rows(n: u32) -> Vec<TableRow> {
    use Factor::*;
    let dn = format!("D{n}");
    vec![
        TableRow::new(&format!("{dn} x S4"), &[(Rotation(n), Identity, false), (Inversion, Identity, false), (Identity, Negation, false), (Identity, Inversion, false), (Identity, TetrahedralThree, false), (Identity, OctahedralTwo, false)]),
        TableRow::new(&format!("{dn} x A5"), &[(Rotation(n), Identity, false), (Inversion, Identity, false), (Identity, IcosahedralFive, false), (Identity, IcosahedralTwo, false)]),
        TableRow::new("S4 x A5", &[(Negation, Identity, false), (Inversion, Identity, false), (TetrahedralThree, Identity, false), (OctahedralTwo, Identity, false), (Identity, IcosahedralFive, false), (Identity, IcosahedralTwo, false)]),
        TableRow::new(&format!("{dn} wreath C2"), &[(Rotation(n), Identity, false), (Inversion, Identity, false), (Identity, Identity, true)]),
        TableRow::new("S4 wreath C2", &[(Negation, Identity, false), (Inversion, Identity, false), (TetrahedralThree, Identity, false), (OctahedralTwo, Identity, false), (Identity, Identity, true)]),
        TableRow::new("A5 wreath C2", &[(IcosahedralFive, Identity, false), (IcosahedralTwo, Identity, false), (Identity, Identity, true)]),
    ]
}

/// Order and family of the group generated by a table row.
pub fn verify_table_row(row: &TableRow, field: &Arc<CycloField>, cap: usize) -> Result<(u64, FamilyTag), QuadricError> {
    let gens = row.build(field)?;
    let g = quadric_closure(&gens, cap)?;
    Ok((g.len() as u64, recognize_family(&g)))
}
