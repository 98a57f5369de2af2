//! Del Pezzo surfaces of degree 6 and 5.
//!
//! Degree 6 is modelled as {x₀y₀ = x₁y₁ = x₂y₂} ⊂ P² × P², with automorphisms
//! written as a torus element applied after a standard hexagon symmetry.
//! Degree 5 is handled purely through subgroups of S₅.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::cyclo::{CycNum, CycloError, CycloField};
use crate::groups::{closure, recognize_family, FamilyTag, GroupError, GroupTable};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DelPezzoError {
    #[error(transparent)]
    Cyclo(#[from] CycloError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("point does not satisfy x0*y0 = x1*y1 = x2*y2")]
    OffSurface,
    #[error("all coordinates of a projective point vanish")]
    ZeroPoint,
    #[error("torus coordinates must be nonzero")]
    DegenerateTorus,
    #[error("conductor mismatch: {left} vs {right}")]
    ConductorMismatch { left: u32, right: u32 },
    #[error("hexagon word may only contain 'r' and 's', got {0:?}")]
    InvalidWord(String),
    #[error("not a permutation of 1..5: {0:?}")]
    InvalidPermutation(Vec<u32>),
    #[error("no primitive {order}-th root of unity at conductor {conductor}")]
    RootUnavailable { order: u32, conductor: u32 },
    #[error("no generators given")]
    Empty,
}

/// Element r^k s^e of D₆ = ⟨r, s | r⁶ = s² = (sr)² = 1⟩.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hex {
    pub k: u8,
    pub reflect: bool,
}

impl fmt::Debug for Hex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Hex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.k, self.reflect) {
            (0, false) => write!(f, "1"),
            (0, true) => write!(f, "s"),
            (1, e) => write!(f, "r{}", if e { "s" } else { "" }),
            (k, e) => write!(f, "r^{k}{}", if e { "s" } else { "" }),
        }
    }
}

/// Index permutation π and x/y exchange ε of the standard lift of r^k s^e:
/// x'ᵢ = (ε ? y : x)_{π(i)}, y'ᵢ = (ε ? x : y)_{π(i)}. Derived from the
/// formulas for the rotation ρ and the reflection σ with r = ρ, s = σ.
const HEX_ACTION: [[([usize; 3], bool); 2]; 6] = [
    [([0, 1, 2], false), ([0, 2, 1], true)],
    [([1, 2, 0], true), ([2, 1, 0], false)],
    [([2, 0, 1], false), ([1, 0, 2], true)],
    [([0, 1, 2], true), ([0, 2, 1], false)],
    [([1, 2, 0], false), ([2, 1, 0], true)],
    [([2, 0, 1], true), ([1, 0, 2], false)],
];

impl Hex {
    pub const IDENTITY: Hex = Hex { k: 0, reflect: false };
    pub const R: Hex = Hex { k: 1, reflect: false };
    pub const S: Hex = Hex { k: 0, reflect: true };

    pub fn new(k: i64, reflect: bool) -> Hex {
        Hex { k: k.rem_euclid(6) as u8, reflect }
    }

    pub fn all() -> impl Iterator<Item = Hex> {
        (0..6).flat_map(|k| [false, true].map(move |e| Hex { k, reflect: e }))
    }

    /// Reduce a word over {r, s}.
    pub fn parse(word: &str) -> Result<Hex, DelPezzoError> {
        word.chars().try_fold(Hex::IDENTITY, |acc, c| match c {
            'r' => Ok(acc.mul(Hex::R)),
            's' => Ok(acc.mul(Hex::S)),
            _ => Err(DelPezzoError::InvalidWord(word.to_string())),
        })
    }

    pub fn mul(self, other: Hex) -> Hex {
        // r^a s^e · r^b s^f = r^(a ± b) s^(e+f)
        let b = if self.reflect { -(other.k as i64) } else { other.k as i64 };
        Hex::new(self.k as i64 + b, self.reflect ^ other.reflect)
    }

    pub fn inverse(self) -> Hex {
        if self.reflect {
            self
        } else {
            Hex::new(-(self.k as i64), false)
        }
    }

    pub fn action(self) -> ([usize; 3], bool) {
        HEX_ACTION[self.k as usize][self.reflect as usize]
    }
}

/// A point of the degree-6 surface; each triple has first nonzero entry 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DP6Point {
    pub x: [CycNum; 3],
    pub y: [CycNum; 3],
}

impl fmt::Debug for DP6Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "([{}:{}:{}],[{}:{}:{}])", self.x[0], self.x[1], self.x[2], self.y[0], self.y[1], self.y[2])
    }
}

fn normalize_triple(v: [CycNum; 3]) -> Result<[CycNum; 3], DelPezzoError> {
    let lead = v.iter().find(|c| !c.is_zero()).ok_or(DelPezzoError::ZeroPoint)?;
    let inv = lead.invert()?;
    Ok(v.map(|c| &c * &inv))
}

impl DP6Point {
    pub fn new(x: [CycNum; 3], y: [CycNum; 3]) -> Result<DP6Point, DelPezzoError> {
        let p = DP6Point { x: normalize_triple(x)?, y: normalize_triple(y)? };
        if !p.on_surface() {
            return Err(DelPezzoError::OffSurface);
        }
        Ok(p)
    }

    pub fn on_surface(&self) -> bool {
        let p: Vec<CycNum> = (0..3).map(|i| &self.x[i] * &self.y[i]).collect();
        p[0] == p[1] && p[1] == p[2]
    }

    /// ([1:1:1],[1:1:1])
    pub fn center(field: &Arc<CycloField>) -> DP6Point {
        let one = [field.one(), field.one(), field.one()];
        DP6Point { x: one.clone(), y: one }
    }

    /// The six vertices of the hexagon of (-1)-curves, i.e. the points with
    /// two vanishing coordinates in each triple.
    pub fn hexagon_vertices(field: &Arc<CycloField>) -> Vec<DP6Point> {
        let unit = |i: usize| {
            let mut v = [field.zero(), field.zero(), field.zero()];
            v[i] = field.one();
            v
        };
        let mut out = Vec::new();
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    out.push(DP6Point { x: unit(i), y: unit(j) });
                }
            }
        }
        out
    }
}

/// p ↦ t · h(p) with t a torus element and h the standard lift of a
/// hexagon symmetry.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DP6Aut {
    pub torus: [CycNum; 3],
    pub hex: Hex,
}

impl fmt::Debug for DP6Aut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(({}, {}, {}), {})", self.torus[0], self.torus[1], self.torus[2], self.hex)
    }
}

impl DP6Aut {
    pub fn new(torus: [CycNum; 3], hex: Hex) -> Result<DP6Aut, DelPezzoError> {
        if torus.iter().any(|c| c.is_zero()) {
            return Err(DelPezzoError::DegenerateTorus);
        }
        let n = torus[0].conductor();
        for c in &torus[1..] {
            if c.conductor() != n {
                return Err(DelPezzoError::ConductorMismatch { left: n, right: c.conductor() });
            }
        }
        Ok(DP6Aut { torus: normalize_triple(torus)?, hex })
    }

    pub fn identity(field: &Arc<CycloField>) -> DP6Aut {
        DP6Aut { torus: [field.one(), field.one(), field.one()], hex: Hex::IDENTITY }
    }

    pub fn standard(field: &Arc<CycloField>, hex: Hex) -> DP6Aut {
        DP6Aut { torus: [field.one(), field.one(), field.one()], hex }
    }

    /// ρ, the standard rotation of order 6.
    pub fn rotation(field: &Arc<CycloField>) -> DP6Aut {
        DP6Aut::standard(field, Hex::R)
    }

    /// σ, the standard reflection.
    pub fn reflection(field: &Arc<CycloField>) -> DP6Aut {
        DP6Aut::standard(field, Hex::S)
    }

    pub fn field(&self) -> &Arc<CycloField> {
        self.torus[0].field()
    }

    pub fn is_torus(&self) -> bool {
        self.hex == Hex::IDENTITY
    }
}

/// a ∘ b.
pub fn dp6_compose(a: &DP6Aut, b: &DP6Aut) -> Result<DP6Aut, DelPezzoError> {
    let (left, right) = (a.torus[0].conductor(), b.torus[0].conductor());
    if left != right {
        return Err(DelPezzoError::ConductorMismatch { left, right });
    }
    Ok(compose(a, b))
}

fn compose(a: &DP6Aut, b: &DP6Aut) -> DP6Aut {
    // t₁ h₁ t₂ h₂ = t₁ (h₁ t₂ h₁⁻¹) h₁ h₂, and h t h⁻¹ has coordinates t_{π(i)}^{±1}
    let (perm, flip) = a.hex.action();
    let torus: [CycNum; 3] = std::array::from_fn(|i| {
        let c = &b.torus[perm[i]];
        let c = if flip { c.invert().expect("torus coordinates are nonzero") } else { c.clone() };
        &a.torus[i] * &c
    });
    DP6Aut { torus: normalize_triple(torus).expect("nonzero"), hex: a.hex.mul(b.hex) }
}

pub fn dp6_inverse(a: &DP6Aut) -> DP6Aut {
    let hinv = DP6Aut::standard(a.field(), a.hex.inverse());
    let tinv = DP6Aut {
        torus: a.torus.clone().map(|c| c.invert().expect("torus coordinates are nonzero")),
        hex: Hex::IDENTITY,
    };
    compose(&hinv, &tinv)
}

pub fn dp6_act(a: &DP6Aut, p: &DP6Point) -> Result<DP6Point, DelPezzoError> {
    if !p.on_surface() {
        return Err(DelPezzoError::OffSurface);
    }
    let (perm, flip) = a.hex.action();
    let (u, v) = if flip { (&p.y, &p.x) } else { (&p.x, &p.y) };
    let x: [CycNum; 3] = std::array::from_fn(|i| &a.torus[i] * &u[perm[i]]);
    let y: [CycNum; 3] = std::array::from_fn(|i| &a.torus[i].invert().expect("nonzero") * &v[perm[i]]);
    DP6Point::new(x, y)
}

/// A subgroup of D₆, stored as its sorted element list.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HexSubgroup(pub Vec<Hex>);

impl HexSubgroup {
    pub fn generated(gens: &[Hex]) -> HexSubgroup {
        let mut set: BTreeSet<Hex> = BTreeSet::from([Hex::IDENTITY]);
        let mut queue: VecDeque<Hex> = VecDeque::from([Hex::IDENTITY]);
        while let Some(h) = queue.pop_front() {
            for &g in gens {
                let x = h.mul(g);
                if set.insert(x) {
                    queue.push_back(x);
                }
            }
        }
        HexSubgroup(set.into_iter().collect())
    }

    pub fn order(&self) -> usize {
        self.0.len()
    }

    /// The three images for which the invariant Picard rank is 1.
    pub fn is_minimal(&self) -> bool {
        [
            HexSubgroup::generated(&[Hex::R]),
            HexSubgroup::generated(&[Hex::new(2, false), Hex::S]),
            HexSubgroup::generated(&[Hex::R, Hex::S]),
        ]
        .contains(self)
    }

    /// First generating set of minimal size, rotations before reflections.
    pub fn generators(&self) -> Vec<Hex> {
        if self.0.len() == 1 {
            return Vec::new();
        }
        let mut elems = self.0.clone();
        elems.sort_by_key(|h| (h.reflect, h.k));
        for &a in &elems {
            if HexSubgroup::generated(&[a]) == *self {
                return vec![a];
            }
        }
        for (i, &a) in elems.iter().enumerate() {
            for &b in &elems[i + 1..] {
                if HexSubgroup::generated(&[a, b]) == *self {
                    return vec![a, b];
                }
            }
        }
        self.0.clone()
    }

    pub fn all() -> Vec<HexSubgroup> {
        let elems: Vec<Hex> = Hex::all().collect();
        let mut out: Vec<HexSubgroup> = Vec::new();
        for &a in &elems {
            for &b in &elems {
                let s = HexSubgroup::generated(&[a, b]);
                if !out.contains(&s) {
                    out.push(s);
                }
            }
        }
        out.sort_by_key(|s| (s.order(), s.0.clone()));
        out
    }
}

impl fmt::Debug for HexSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for HexSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g: Vec<String> = self.generators().iter().map(|h| h.to_string()).collect();
        write!(f, "<{}>", if g.is_empty() { "1".to_string() } else { g.join(", ") })
    }
}

pub struct DP6Analysis {
    pub group: GroupTable<DP6Aut>,
    pub hexagon_image: HexSubgroup,
    /// G ∩ T.
    pub torus_part: GroupTable<DP6Aut>,
    pub minimal: bool,
    pub fixes_point: bool,
}

impl fmt::Debug for DP6Analysis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DP6Analysis")
            .field("order", &self.group.len())
            .field("hexagon_image", &self.hexagon_image)
            .field("torus_part", &self.torus_part.len())
            .field("minimal", &self.minimal)
            .field("fixes_point", &self.fixes_point)
            .finish()
    }
}

pub fn dp6_closure(gens: &[DP6Aut], cap: usize) -> Result<GroupTable<DP6Aut>, DelPezzoError> {
    let first = gens.first().ok_or(DelPezzoError::Empty)?;
    let n = first.field().conductor();
    if let Some(g) = gens.iter().find(|g| g.field().conductor() != n) {
        return Err(DelPezzoError::ConductorMismatch { left: n, right: g.field().conductor() });
    }
    Ok(closure(DP6Aut::identity(first.field()), gens, compose, cap)?)
}

/// The fixed-point criterion (G fixes a point iff G ∩ T = 1) is only
/// asserted for minimal groups; for the others `fixes_point` reports the
/// same torus test.
pub fn dp6_analyze(gens: &[DP6Aut], cap: usize) -> Result<DP6Analysis, DelPezzoError> {
    let group = dp6_closure(gens, cap)?;
    let hexagon_image = HexSubgroup::generated(&gens.iter().map(|g| g.hex).collect::<Vec<_>>());
    let torus_idx: Vec<usize> = (0..group.len()).filter(|&i| group.element(i).is_torus()).collect();
    let tgens: Vec<DP6Aut> = group.generating_set(&torus_idx).into_iter().map(|i| group.element(i).clone()).collect();
    let torus_part = closure(DP6Aut::identity(gens[0].field()), &tgens, compose, cap)?;
    let minimal = hexagon_image.is_minimal();
    let fixes_point = torus_part.len() == 1;
    Ok(DP6Analysis { group, hexagon_image, torus_part, minimal, fixes_point })
}

/// Permutation group inside S₅; permutations are one-line images of 1..5.
#[derive(Debug, Clone)]
pub struct DP5Group {
    pub perms: Vec<Vec<u32>>,
    pub table: GroupTable<Vec<u8>>,
}

fn perm_compose(a: &Vec<u8>, b: &Vec<u8>) -> Vec<u8> {
    // (a∘b)(i) = a(b(i))
    b.iter().map(|&i| a[i as usize]).collect()
}

impl DP5Group {
    pub fn new(perms: Vec<Vec<u32>>) -> Result<DP5Group, DelPezzoError> {
        let mut gens = Vec::new();
        for p in &perms {
            let mut seen = [false; 5];
            if p.len() != 5 || p.iter().any(|&i| !(1..=5).contains(&i) || std::mem::replace(&mut seen[i as usize - 1], true)) {
                return Err(DelPezzoError::InvalidPermutation(p.clone()));
            }
            gens.push(p.iter().map(|&i| (i - 1) as u8).collect::<Vec<u8>>());
        }
        let table = closure((0..5).collect(), &gens, perm_compose, 200)?;
        Ok(DP5Group { perms, table })
    }

    /// Conjugate every generator by the relabeling `label` of {1..5}.
    pub fn relabel(&self, label: &[u32]) -> Result<DP5Group, DelPezzoError> {
        let perms = self
            .perms
            .iter()
            .map(|p| {
                let mut q = vec![0; 5];
                for i in 0..5 {
                    q[label[i] as usize - 1] = label[p[i] as usize - 1];
                }
                q
            })
            .collect();
        DP5Group::new(perms)
    }
}

/// Family of the group and whether it is one of the five minimal ones
/// (orders 5, 10, 20, 60, 120).
pub fn dp5_analyze(g: &DP5Group) -> (FamilyTag, bool) {
    let tag = recognize_family(&g.table);
    let minimal = matches!(g.table.len(), 5 | 10 | 20 | 60 | 120);
    (tag, minimal)
}

/// A 3×3 matrix acting on P².
pub type PlaneMatrix = [[CycNum; 3]; 3];

fn apply_plane(m: &PlaneMatrix, p: &[CycNum; 3]) -> Result<[CycNum; 3], DelPezzoError> {
    let v: [CycNum; 3] = std::array::from_fn(|i| {
        let mut acc = &m[i][0] * &p[0];
        acc = &acc + &(&m[i][1] * &p[1]);
        &acc + &(&m[i][2] * &p[2])
    });
    normalize_triple(v)
}

/// [x:y:z] ↦ [x : ω₅ y : ω₅⁻¹ z] and [x:y:z] ↦ [x:z:y].
pub fn standard_d5(field: &Arc<CycloField>) -> Result<(PlaneMatrix, PlaneMatrix), DelPezzoError> {
    let w = field
        .root_of_unity(5, 1)
        .ok_or(DelPezzoError::RootUnavailable { order: 5, conductor: field.conductor() })?;
    let winv = w.invert()?;
    let (o, z) = (field.one(), field.zero());
    let r = [[o.clone(), z.clone(), z.clone()], [z.clone(), w, z.clone()], [z.clone(), z.clone(), winv]];
    let s = [[o, z.clone(), z.clone()], [z.clone(), z.clone(), field.one()], [z.clone(), field.one(), z]];
    Ok((r, s))
}

pub fn plane_orbit(gens: &[PlaneMatrix], p: &[CycNum; 3]) -> Result<Vec<[CycNum; 3]>, DelPezzoError> {
    let start = normalize_triple(p.clone())?;
    let mut seen: HashSet<[CycNum; 3]> = HashSet::from([start.clone()]);
    let mut out = vec![start.clone()];
    let mut queue = VecDeque::from([start]);
    while let Some(q) = queue.pop_front() {
        for m in gens {
            let r = apply_plane(m, &q)?;
            if seen.insert(r.clone()) {
                out.push(r.clone());
                queue.push_back(r);
            }
        }
    }
    Ok(out)
}

fn det3(m: &[[CycNum; 3]; 3]) -> CycNum {
    let t = |a: usize, b: usize, c: usize| &(&m[0][a] * &m[1][b]) * &m[2][c];
    let pos = &(&t(0, 1, 2) + &t(1, 2, 0)) + &t(2, 0, 1);
    let neg = &(&t(0, 2, 1) + &t(1, 0, 2)) + &t(2, 1, 0);
    &pos - &neg
}

/// Row-reduce and return the rank together with a nonzero kernel vector
/// when the kernel is one-dimensional.
fn rank_and_kernel(rows: &[Vec<CycNum>]) -> (usize, Option<Vec<CycNum>>) {
    let mut a: Vec<Vec<CycNum>> = rows.to_vec();
    let cols = a.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = a[r][c].invert().expect("nonzero pivot");
        a[r] = a[r].iter().map(|x| x * &inv).collect();
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                let row = a[r].clone();
                for (x, y) in a[i].iter_mut().zip(&row) {
                    *x = &*x - &(&f * y);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let rank = pivots.len();
    if cols != rank + 1 {
        return (rank, None);
    }
    let field = rows[0][0].field().clone();
    let free = (0..cols).find(|c| !pivots.contains(c)).expect("one free column");
    let mut v = vec![field.zero(); cols];
    v[free] = field.one();
    for (i, &c) in pivots.iter().enumerate() {
        v[c] = -&a[i][free];
    }
    (rank, Some(v))
}

/// Whether the orbit of `p` consists of 5 points, no three collinear, on a
/// unique smooth conic.
pub fn dp5_orbit_general_position(gens: &[PlaneMatrix], p: &[CycNum; 3]) -> Result<bool, DelPezzoError> {
    let orbit = plane_orbit(gens, p)?;
    if orbit.len() != 5 {
        return Ok(false);
    }
    for i in 0..5 {
        for j in i + 1..5 {
            for k in j + 1..5 {
                if det3(&[orbit[i].clone(), orbit[j].clone(), orbit[k].clone()]).is_zero() {
                    return Ok(false);
                }
            }
        }
    }
    // conics x², y², z², xy, xz, yz
    let rows: Vec<Vec<CycNum>> = orbit
        .iter()
        .map(|[x, y, z]| vec![x * x, y * y, z * z, x * y, x * z, y * z])
        .collect();
    let (rank, kernel) = rank_and_kernel(&rows);
    let Some(c) = kernel.filter(|_| rank == 5) else { return Ok(false) };
    let half = |v: &CycNum| v.scale(&num_rational::BigRational::new(1.into(), 2.into()));
    let q = [
        [c[0].clone(), half(&c[3]), half(&c[4])],
        [half(&c[3]), c[1].clone(), half(&c[5])],
        [half(&c[4]), half(&c[5]), c[2].clone()],
    ];
    Ok(!det3(&q).is_zero())
}
