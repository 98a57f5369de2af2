//! Linearizability verdicts for finite groups acting on the minimal
//! rational surfaces, with constructive witnesses where one is known.

use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::cyclo::{CycNum, CycloField};
use crate::delpezzo::{dp5_analyze, dp6_analyze, DP5Group, DP6Aut, DP6Point, DelPezzoError, Hex, HexSubgroup, PlaneMatrix};
use crate::groups::{closure, is_dihedral, recognize_family, FamilyTag, GroupError};
use crate::moebius::{
    fixed_points, klein_classify, moebius_closure, orbit_lengths_available, FixedPoints, KleinClass, MoebiusError,
    MoebiusMap, ProjPoint,
};
use crate::quadric::{analyze_rulings, common_fixed_points, QuadricAut, QuadricError, RulingAnalysis};
use crate::sarkisov::{
    bezout_plan, euclid_witness, LinkKind, LinkStep, MonomialMap, PlanOutcome, SarkisovError, WitnessChain,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DeciderError {
    #[error(transparent)]
    Moebius(#[from] MoebiusError),
    #[error(transparent)]
    Quadric(#[from] QuadricError),
    #[error(transparent)]
    DelPezzo(#[from] DelPezzoError),
    #[error(transparent)]
    Sarkisov(#[from] SarkisovError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("invalid surface: {0}")]
    InvalidSurface(String),
    #[error("{surface} expects {expected}")]
    WrongGenerators { surface: String, expected: &'static str },
    #[error("plane matrix is singular")]
    SingularMatrix,
    #[error("no planner route from F_{0} although the base group allows one")]
    PlannerGap(u64),
    #[error("decision carries no witness")]
    NoWitness,
}

impl DeciderError {
    /// True when the failure is a problem with the input rather than with the computation.
    pub fn is_input_error(&self) -> bool {
        match self {
            DeciderError::InvalidSurface(_) | DeciderError::WrongGenerators { .. } | DeciderError::SingularMatrix => true,
            DeciderError::Moebius(e) => matches!(e, MoebiusError::Singular | MoebiusError::ZeroPoint | MoebiusError::UnclassifiableGroup { .. } | MoebiusError::InfiniteOrder { .. }),
            DeciderError::Quadric(e) => matches!(e, QuadricError::MixedConductors | QuadricError::ConductorMismatch { .. } | QuadricError::Empty),
            DeciderError::DelPezzo(e) => !matches!(e, DelPezzoError::Group(_) | DelPezzoError::Cyclo(_)),
            _ => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SurfaceDescriptor {
    P2,
    Quadric,
    Hirzebruch(u64),
    DP5,
    DP6,
    /// Conic bundle with the given K².
    ConicBundle(i64),
    /// Del Pezzo surface of degree K² ≤ 4.
    DelPezzoLow(i64),
}

impl SurfaceDescriptor {
    pub fn validate(&self) -> Result<(), DeciderError> {
        match *self {
            SurfaceDescriptor::Hirzebruch(0) => {
                Err(DeciderError::InvalidSurface("Hirzebruch surfaces need n ≥ 1; F_0 is the quadric".into()))
            }
            SurfaceDescriptor::ConicBundle(k) if k > 8 => {
                Err(DeciderError::InvalidSurface(format!("conic bundle with K² = {k} > 8")))
            }
            SurfaceDescriptor::DelPezzoLow(k) if !(1..=4).contains(&k) => {
                Err(DeciderError::InvalidSurface(format!("low degree del Pezzo surface with K² = {k}")))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for SurfaceDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SurfaceDescriptor::P2 => write!(f, "P2"),
            SurfaceDescriptor::Quadric => write!(f, "Quadric"),
            SurfaceDescriptor::Hirzebruch(n) => write!(f, "Hirzebruch({n})"),
            SurfaceDescriptor::DP5 => write!(f, "DP5"),
            SurfaceDescriptor::DP6 => write!(f, "DP6"),
            SurfaceDescriptor::ConicBundle(k) => write!(f, "ConicBundle({k})"),
            SurfaceDescriptor::DelPezzoLow(k) => write!(f, "DelPezzoLow({k})"),
        }
    }
}

/// Generators in the shape each surface kind expects.
#[derive(Debug, Clone)]
pub enum Generators {
    None,
    Plane(Vec<PlaneMatrix>),
    /// Action on the base of a Hirzebruch surface.
    Base(Vec<MoebiusMap>),
    Quadric(Vec<QuadricAut>),
    DP6(Vec<DP6Aut>),
    DP5(DP5Group),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Linearizable,
    NotLinearizable,
    InvalidInput,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Linearizable => "linearizable",
            Verdict::NotLinearizable => "not_linearizable",
            Verdict::InvalidInput => "invalid_input",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    PlaneLinear,
    DelPezzoRigid,
    DelPezzoQuartic,
    ConicBundleLowDegree,
    ConicBundleSuperrigid,
    ConicBundleNotMinimal,
    ConicBundleSeven,
    HirzebruchOdd,
    HirzebruchCyclicBase,
    HirzebruchOddDihedralBase,
    HirzebruchEvenParity,
    QuadricCyclicFactors,
    QuadricCyclicOddDihedral,
    QuadricDihedralFibreProduct,
    QuadricEvenOrbits,
    QuadricNonDihedralProduct,
    SwapCyclicKernel,
    SwapPlatonicKernel,
    SwapDihedralKernel,
    SexticFixedPoint,
    SexticTorusMeet,
    SexticFullHexagon,
    SexticNotMinimal,
    QuinticCyclicDihedral,
    QuinticLarge,
    QuinticNotMinimal,
}

impl Rule {
    pub fn key(&self) -> String {
        let mut out = String::new();
        for (i, c) in format!("{self:?}").chars().enumerate() {
            if c.is_ascii_uppercase() && i > 0 {
                out.push('_');
            }
            out.push(c.to_ascii_lowercase());
        }
        out
    }

    pub fn citation(&self) -> &'static str {
        match self {
            Rule::PlaneLinear => "G ⊂ PGL₃ already acts linearly on P²",
            Rule::DelPezzoRigid => "a G-minimal del Pezzo surface with K² ≤ 3 is G-birationally rigid",
            Rule::DelPezzoQuartic => "no G-minimal del Pezzo surface with K² = 4 is G-birational to P²",
            Rule::ConicBundleLowDegree => "a G-minimal conic bundle with K² ∈ {1, 2, 4} is not G-birational to P²",
            Rule::ConicBundleSuperrigid => "a G-minimal conic bundle with K² ≤ 0 is G-birationally superrigid",
            Rule::ConicBundleNotMinimal => "a G-conic bundle with K² ∈ {3, 5, 6} is not G-minimal",
            Rule::ConicBundleSeven => "a conic bundle with K² = 7 is not a G-Mori fibre space",
            Rule::HirzebruchOdd => "on F_n with n odd, elementary transformations reach F₁",
            Rule::HirzebruchCyclicBase => "a cyclic base group has fixed points, so elementary transformations reach F₁",
            Rule::HirzebruchOddDihedralBase => "D_n with n odd has orbits of coprime lengths 2 and n on the base",
            Rule::HirzebruchEvenParity => {
                "on F_n with n even, a base group with only even orbit lengths keeps n even under every elementary transformation"
            }
            Rule::QuadricCyclicFactors => "C_n ×_Q C_m fixes a point, and projection from it linearizes G",
            Rule::QuadricCyclicOddDihedral => {
                "C_m ×_Q D_n with n odd acts on the fibre over a C_m-fixed point with an orbit of length n, leading to F_n"
            }
            Rule::QuadricDihedralFibreProduct => {
                "D_n ×_Q D_m with n, m odd is linearizable when G is dihedral, by a Euclid chain of monomial conjugations"
            }
            Rule::QuadricEvenOrbits => {
                "a factor A₄, S₄, A₅ or D_2k leaves only orbits of even length on P¹ × P¹, so F₁ is never reached"
            }
            Rule::QuadricNonDihedralProduct => "D_n ×_Q D_m with n, m odd and G not dihedral is not linearizable",
            Rule::SwapCyclicKernel => "a G exchanging the rulings with cyclic kernel factor fixes a point on P¹ × P¹",
            Rule::SwapPlatonicKernel => {
                "a G exchanging the rulings with kernel factor A₄, S₄ or A₅ has only orbits of length ≥ 4: P¹ × P¹ is G-birationally rigid"
            }
            Rule::SwapDihedralKernel => "a G exchanging the rulings with dihedral kernel factor is not linearizable",
            Rule::SexticFixedPoint => "a G-minimal sextic del Pezzo surface is linearizable iff G ≅ C₆ or G ≅ S₃",
            Rule::SexticTorusMeet => "if G meets the torus of the sextic del Pezzo surface, G fixes no point and is not linearizable",
            Rule::SexticFullHexagon => "G ≅ D₆ acting on the sextic del Pezzo surface through the whole hexagon is not linearizable",
            Rule::SexticNotMinimal => "the action on the hexagon of (−1)-curves leaves invariant Picard rank above 1",
            Rule::QuinticCyclicDihedral => "C₅ and D₅ on the quintic del Pezzo surface come from 5 points in general position on P²",
            Rule::QuinticLarge => "F₅, A₅ and S₅ on the quintic del Pezzo surface are not linearizable",
            Rule::QuinticNotMinimal => "the quintic del Pezzo surface is G-minimal only for orders 5, 10, 20, 60, 120",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupSummary {
    pub order: u64,
    #[serde(serialize_with = "display_string")]
    pub family: FamilyTag,
}

fn display_string<T: fmt::Display, S: Serializer>(t: &T, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&t.to_string())
}

#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub steps: Vec<LinkStep>,
    /// Set when the input is not in the normal form the construction needs.
    pub requires_standard_form: bool,
    /// The replayable chain, when the construction is monomial.
    #[serde(skip)]
    pub chain: Option<WitnessChain>,
}

impl Witness {
    fn steps(steps: Vec<LinkStep>) -> Witness {
        Witness { steps, requires_standard_form: false, chain: None }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Decision {
    pub verdict: Verdict,
    pub rule: Rule,
    pub group: Option<GroupSummary>,
    pub witness: Option<Witness>,
}

impl Decision {
    fn new(verdict: Verdict, rule: Rule, group: Option<GroupSummary>) -> Decision {
        Decision { verdict, rule, group, witness: None }
    }

    fn linearizable(rule: Rule, group: Option<GroupSummary>, witness: Witness) -> Decision {
        Decision { verdict: Verdict::Linearizable, rule, group, witness: Some(witness) }
    }
}

fn summary<E>(g: &crate::groups::GroupTable<E>) -> GroupSummary {
    GroupSummary { order: g.len() as u64, family: recognize_family(g) }
}

pub fn decide(surface: &SurfaceDescriptor, gens: &Generators, cap: usize) -> Result<Decision, DeciderError> {
    surface.validate()?;
    let wrong = |expected| DeciderError::WrongGenerators { surface: surface.to_string(), expected };
    match (*surface, gens) {
        (SurfaceDescriptor::P2, Generators::None) => decide_plane(&[], cap),
        (SurfaceDescriptor::P2, Generators::Plane(m)) => decide_plane(m, cap),
        (SurfaceDescriptor::P2, _) => Err(wrong("3×3 matrices")),
        (SurfaceDescriptor::DelPezzoLow(k), Generators::None) => {
            let rule = if k <= 3 { Rule::DelPezzoRigid } else { Rule::DelPezzoQuartic };
            Ok(Decision::new(Verdict::NotLinearizable, rule, None))
        }
        (SurfaceDescriptor::ConicBundle(k), Generators::None) => Ok(match k {
            1 | 2 | 4 => Decision::new(Verdict::NotLinearizable, Rule::ConicBundleLowDegree, None),
            k if k <= 0 => Decision::new(Verdict::NotLinearizable, Rule::ConicBundleSuperrigid, None),
            7 => Decision::new(Verdict::InvalidInput, Rule::ConicBundleSeven, None),
            // 3, 5, 6; K² = 8 conic bundles are Hirzebruch surfaces
            _ => Decision::new(Verdict::InvalidInput, Rule::ConicBundleNotMinimal, None),
        }),
        (SurfaceDescriptor::DelPezzoLow(_) | SurfaceDescriptor::ConicBundle(_), _) => Err(wrong("no generators")),
        (SurfaceDescriptor::Hirzebruch(n), Generators::Base(b)) => decide_hirzebruch(n, b, cap),
        (SurfaceDescriptor::Hirzebruch(_), _) => Err(wrong("Möbius maps of the base")),
        (SurfaceDescriptor::Quadric, Generators::Quadric(q)) => decide_quadric(q, cap),
        (SurfaceDescriptor::Quadric, _) => Err(wrong("quadric automorphisms")),
        (SurfaceDescriptor::DP6, Generators::DP6(g)) => decide_sextic(g, cap),
        (SurfaceDescriptor::DP6, _) => Err(wrong("torus-hexagon pairs")),
        (SurfaceDescriptor::DP5, Generators::DP5(g)) => Ok(decide_quintic(g)),
        (SurfaceDescriptor::DP5, _) => Err(wrong("permutations of five points")),
    }
}

fn normalize_matrix(m: &PlaneMatrix) -> Result<PlaneMatrix, DeciderError> {
    let pivot = m.iter().flatten().find(|c| !c.is_zero()).ok_or(DeciderError::SingularMatrix)?;
    let inv = pivot.invert().map_err(|_| DeciderError::SingularMatrix)?;
    Ok(std::array::from_fn(|i| std::array::from_fn(|j| &m[i][j] * &inv)))
}

fn matmul(a: &PlaneMatrix, b: &PlaneMatrix) -> PlaneMatrix {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let acc = &(&a[i][0] * &b[0][j]) + &(&a[i][1] * &b[1][j]);
            &acc + &(&a[i][2] * &b[2][j])
        })
    })
}

pub fn plane_det(m: &PlaneMatrix) -> CycNum {
    let t = |a: usize, b: usize, c: usize| &(&m[0][a] * &m[1][b]) * &m[2][c];
    let pos = &(&t(0, 1, 2) + &t(1, 2, 0)) + &t(2, 0, 1);
    let neg = &(&t(0, 2, 1) + &t(1, 0, 2)) + &t(2, 1, 0);
    &pos - &neg
}

fn decide_plane(mats: &[PlaneMatrix], cap: usize) -> Result<Decision, DeciderError> {
    let group = match mats.first() {
        None => GroupSummary { order: 1, family: FamilyTag::Trivial },
        Some(first) => {
            let field = first[0][0].field().clone();
            let mut gens = Vec::new();
            for m in mats {
                if plane_det(m).is_zero() {
                    return Err(DeciderError::SingularMatrix);
                }
                gens.push(normalize_matrix(m)?);
            }
            let id: PlaneMatrix =
                std::array::from_fn(|i| std::array::from_fn(|j| if i == j { field.one() } else { field.zero() }));
            let g = closure(id, &gens, |a, b| normalize_matrix(&matmul(a, b)).expect("invertible"), cap)?;
            summary(&g)
        }
    };
    Ok(Decision::linearizable(Rule::PlaneLinear, Some(group), Witness::steps(Vec::new())))
}

/// Steps from F_n to F₁ plus the final contraction.
fn plan_to_plane(n: u64, class: KleinClass) -> Result<Vec<LinkStep>, DeciderError> {
    match bezout_plan(n, &orbit_lengths_available(class))? {
        PlanOutcome::Plan(mut steps) => {
            steps.push(LinkStep::contract_f1());
            Ok(steps)
        }
        PlanOutcome::Unreachable(_) => Err(DeciderError::PlannerGap(n)),
    }
}

fn decide_hirzebruch(n: u64, base: &[MoebiusMap], cap: usize) -> Result<Decision, DeciderError> {
    let g = moebius_closure(base, cap)?;
    let class = klein_classify(&g)?;
    let group = Some(GroupSummary { order: class.order(), family: class.family() });
    let rule = if n % 2 == 1 {
        Rule::HirzebruchOdd
    } else if class.is_cyclic() {
        Rule::HirzebruchCyclicBase
    } else if class.is_odd_dihedral() {
        Rule::HirzebruchOddDihedralBase
    } else {
        return Ok(Decision::new(Verdict::NotLinearizable, Rule::HirzebruchEvenParity, group));
    };
    Ok(Decision::linearizable(rule, group, Witness::steps(plan_to_plane(n, class)?)))
}

/// A point of P¹ fixed by every map, if one exists over the current field.
fn common_fixed_point(maps: &[MoebiusMap], field: &Arc<CycloField>) -> Result<Option<ProjPoint>, MoebiusError> {
    let mut locus: Option<Vec<ProjPoint>> = None;
    for m in maps {
        if let FixedPoints::Points(pts) = fixed_points(m, 1000)? {
            locus = Some(match locus {
                None => pts,
                Some(prev) => prev.into_iter().filter(|p| pts.contains(p)).collect(),
            });
        }
    }
    Ok(match locus {
        None => Some(ProjPoint::zero(field)),
        Some(v) => v.into_iter().next(),
    })
}

fn describe_fixed_point(r: Result<Option<ProjPoint>, MoebiusError>) -> Result<String, DeciderError> {
    match r {
        Ok(Some(p)) => Ok(p.to_string()),
        Ok(None) => Ok("a point defined over an extension".into()),
        Err(MoebiusError::NeedsExtension { multiplier }) => {
            Ok(format!("a point defined after multiplying the conductor by {multiplier}"))
        }
        Err(e) => Err(e.into()),
    }
}

fn decide_quadric(gens: &[QuadricAut], cap: usize) -> Result<Decision, DeciderError> {
    let a = analyze_rulings(gens, cap)?;
    let group = Some(summary(&a.group));
    if a.rank == 1 {
        return decide_swapping(gens, &a, group);
    }
    let (h1, h2) = a.factor_classes;
    let field = gens[0].field().clone();
    if h1.is_cyclic() && h2.is_cyclic() {
        let first = common_fixed_point(&gens.iter().map(|g| g.m.clone()).collect::<Vec<_>>(), &field);
        let second = common_fixed_point(&gens.iter().map(|g| g.n.clone()).collect::<Vec<_>>(), &field);
        let note = format!(
            "project from the fixed point ({}, {})",
            describe_fixed_point(first)?,
            describe_fixed_point(second)?
        );
        let w = Witness::steps(vec![LinkStep::other(LinkKind::StereographicProjection, &note)]);
        return Ok(Decision::linearizable(Rule::QuadricCyclicFactors, group, w));
    }
    if (h1.is_cyclic() && h2.is_odd_dihedral()) || (h2.is_cyclic() && h1.is_odd_dihedral()) {
        let (cyclic, dihedral, maps): (KleinClass, KleinClass, Vec<MoebiusMap>) = if h1.is_cyclic() {
            (h1, h2, gens.iter().map(|g| g.m.clone()).collect())
        } else {
            (h2, h1, gens.iter().map(|g| g.n.clone()).collect())
        };
        let KleinClass::Dihedral(n) = dihedral else { unreachable!("checked odd dihedral") };
        let p = describe_fixed_point(common_fixed_point(&maps, &field))?;
        let mut steps = vec![LinkStep::elementary(crate::sarkisov::Side::Sigma, n, 0, n)
            .with_note(&format!("orbit of length {n} in the fibre over the {cyclic}-fixed point {p}"))];
        steps.extend(plan_to_plane(n, cyclic)?);
        return Ok(Decision::linearizable(Rule::QuadricCyclicOddDihedral, group, Witness::steps(steps)));
    }
    if h1.is_odd_dihedral() && h2.is_odd_dihedral() {
        if is_dihedral(&a.group).is_none() {
            return Ok(Decision::new(Verdict::NotLinearizable, Rule::QuadricNonDihedralProduct, group));
        }
        let witness = match standard_dihedral_exponents(&a)? {
            Some((x, y, m)) => {
                let (chain, _) = euclid_witness(x, y, m)?;
                Witness { steps: chain.steps.clone(), requires_standard_form: false, chain: Some(chain) }
            }
            None => Witness { steps: Vec::new(), requires_standard_form: true, chain: None },
        };
        return Ok(Decision::linearizable(Rule::QuadricDihedralFibreProduct, group, witness));
    }
    Ok(Decision::new(Verdict::NotLinearizable, Rule::QuadricEvenOrbits, group))
}

/// Read a Möbius map in the affine coordinate x₁/x₀ as c·x^{±1}.
fn as_monomial_factor(m: &MoebiusMap) -> Option<(CycNum, i64)> {
    let e = m.entries();
    if e[1].is_zero() && e[2].is_zero() {
        Some((e[3].checked_div(&e[0]).ok()?, 1))
    } else if e[0].is_zero() && e[3].is_zero() {
        Some((e[2].checked_div(&e[1]).ok()?, -1))
    } else {
        None
    }
}

fn as_monomial_map(g: &QuadricAut) -> Option<MonomialMap> {
    let (c1, e1) = as_monomial_factor(&g.m)?;
    let (c2, e2) = as_monomial_factor(&g.n)?;
    MonomialMap::new([[e1, 0], [0, e2]], [c1, c2]).ok()
}

/// For G = ⟨(ω^a x, ω^b y), (1/x, 1/y)⟩ in monomial form, return (a, b, M).
fn standard_dihedral_exponents(a: &RulingAnalysis) -> Result<Option<(u64, u64, u32)>, DeciderError> {
    let g = &a.group;
    let maps: Option<Vec<MonomialMap>> = g.elements().iter().map(as_monomial_map).collect();
    let Some(maps) = maps else { return Ok(None) };
    let field = g.element(0).field().clone();
    if !maps.contains(&MonomialMap::double_inversion(&field)) {
        return Ok(None);
    }
    let Some(w) = is_dihedral(g) else { return Ok(None) };
    let r = &maps[w.rotation];
    if r.exponents != [[1, 0], [0, 1]] {
        return Ok(None);
    }
    let (Some((k1, n1)), Some((k2, n2))) =
        (r.coefficients[0].root_of_unity_exponent(), r.coefficients[1].root_of_unity_exponent())
    else {
        return Ok(None);
    };
    let m = num_integer::lcm(n1, n2);
    Ok(Some(((k1 * (m / n1)) as u64, (k2 * (m / n2)) as u64, m)))
}

fn decide_swapping(gens: &[QuadricAut], a: &RulingAnalysis, group: Option<GroupSummary>) -> Result<Decision, DeciderError> {
    match a.factor_classes.0 {
        KleinClass::Cyclic(_) => {
            let p = match common_fixed_points(gens) {
                Ok(pts) => match pts.first() {
                    Some(p) => format!("{p:?}"),
                    None => "a point defined over an extension".into(),
                },
                Err(QuadricError::Moebius(MoebiusError::NeedsExtension { multiplier })) => {
                    format!("a point defined after multiplying the conductor by {multiplier}")
                }
                Err(e) => return Err(e.into()),
            };
            let steps = vec![
                LinkStep::other(LinkKind::BlowUpFixedPoint, &format!("blow up the fixed point {p}: degree 7")),
                LinkStep::other(LinkKind::Contract, "contract the two fibres through the point onto P²"),
            ];
            Ok(Decision::linearizable(Rule::SwapCyclicKernel, group, Witness::steps(steps)))
        }
        KleinClass::Dihedral(_) => Ok(Decision::new(Verdict::NotLinearizable, Rule::SwapDihedralKernel, group)),
        _ => Ok(Decision::new(Verdict::NotLinearizable, Rule::SwapPlatonicKernel, group)),
    }
}

fn decide_sextic(gens: &[DP6Aut], cap: usize) -> Result<Decision, DeciderError> {
    let a = dp6_analyze(gens, cap)?;
    let group = Some(summary(&a.group));
    if !a.minimal {
        return Ok(Decision::new(Verdict::InvalidInput, Rule::SexticNotMinimal, group));
    }
    if a.torus_part.len() > 1 {
        return Ok(Decision::new(Verdict::NotLinearizable, Rule::SexticTorusMeet, group));
    }
    if a.hexagon_image == HexSubgroup::generated(&[Hex::R, Hex::S]) {
        return Ok(Decision::new(Verdict::NotLinearizable, Rule::SexticFullHexagon, group));
    }
    let field = gens[0].field();
    let center = DP6Point::center(field);
    let fixes_center = gens.iter().all(|g| crate::delpezzo::dp6_act(g, &center).is_ok_and(|p| p == center));
    let point = if fixes_center {
        "([1:1:1],[1:1:1])".to_string()
    } else {
        "the torus translate of ([1:1:1],[1:1:1]) fixed by G".to_string()
    };
    let steps = vec![
        LinkStep::other(LinkKind::BlowUpFixedPoint, &format!("blow up the fixed point {point}: degree 5")),
        LinkStep::other(LinkKind::Contract, "contract the strict transforms of the three conics through the point onto P¹ × P¹"),
        LinkStep::other(LinkKind::StereographicProjection, "project from the image of the fixed point to P²"),
    ];
    Ok(Decision::linearizable(Rule::SexticFixedPoint, group, Witness::steps(steps)))
}

fn decide_quintic(g: &DP5Group) -> Decision {
    let (family, minimal) = dp5_analyze(g);
    let group = Some(GroupSummary { order: g.table.len() as u64, family: family.clone() });
    if !minimal {
        return Decision::new(Verdict::InvalidInput, Rule::QuinticNotMinimal, group);
    }
    match family {
        FamilyTag::Cyclic(5) | FamilyTag::Dihedral(5) => {
            let steps = vec![LinkStep::other(
                LinkKind::Contract,
                "P² ⇢ S: blow up the orbit of [1:1:1] under [x:ω₅y:ω₅⁻¹z] and [x:z:y], 5 points in general position on a smooth conic, then contract the conic",
            )];
            Decision::linearizable(Rule::QuinticCyclicDihedral, group, Witness::steps(steps))
        }
        _ => Decision::new(Verdict::NotLinearizable, Rule::QuinticLarge, group),
    }
}

fn step_line(step: &LinkStep) -> String {
    let endpoints = match (step.from_n, step.to_n) {
        (Some(a), Some(b)) => format!("F_{a} ⇢ F_{b}"),
        (Some(a), None) => format!("F_{a} → P²"),
        _ => String::new(),
    };
    let mut line = match step.kind {
        LinkKind::ElementaryOnSigma => format!(
            "elementary transformation {endpoints} at an orbit of length {} on the negative section",
            step.length.unwrap_or(0)
        ),
        LinkKind::ElementaryOnC => format!(
            "elementary transformation {endpoints} at an orbit of length {} on an invariant curve disjoint from it",
            step.length.unwrap_or(0)
        ),
        LinkKind::Contract if !endpoints.is_empty() => format!("contract the (−1)-section, {endpoints}"),
        LinkKind::Contract => "contraction".into(),
        LinkKind::Conjugate => "conjugate".into(),
        LinkKind::TypeIV => "exchange the two rulings".into(),
        LinkKind::StereographicProjection => "stereographic projection".into(),
        LinkKind::BlowUpFixedPoint => "blow-up".into(),
    };
    if let Some(m) = &step.map {
        line.push_str(&format!(" by {m}"));
    }
    if let Some(n) = &step.note {
        line.push_str(&format!(" [{n}]"));
    }
    line
}

pub fn render_witness(d: &Decision) -> Result<String, DeciderError> {
    let Some(w) = d.witness.as_ref().filter(|_| d.verdict == Verdict::Linearizable) else {
        return Err(DeciderError::NoWitness);
    };
    let mut out = format!("{}: {}\n", d.rule, d.rule.citation());
    if w.requires_standard_form {
        out.push_str("witness requires standard form: conjugate to ⟨(ω^a x, ω^b y), (1/x, 1/y)⟩ first\n");
    } else if w.steps.is_empty() {
        out.push_str("identity\n");
    }
    for (i, s) in w.steps.iter().enumerate() {
        out.push_str(&format!("{}. {}\n", i + 1, step_line(s)));
    }
    Ok(out)
}
