#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::Arc;

use cremona_cli::schema::{GeneratorLiterals, InputDocument, Options};
use cremona_cli::verify::{MapDocument, P2RationalMap, Poly};
use cremona_core::cyclo::{CycNum, CycloField};
use cremona_core::decider::SurfaceDescriptor;
use cremona_core::delpezzo::{DP6Aut, Hex};
use cremona_core::moebius::{icosahedral_five, icosahedral_two, inversion, rotation, MoebiusMap};
use cremona_core::quadric::{octahedral_rows, tetrahedral_rows, Factor, QuadricAut};

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("fixtures")
}

/// A golden document with the verdict and rule read off the classification table.
pub struct Case {
    pub name: &'static str,
    pub doc: InputDocument,
    pub verdict: &'static str,
    pub rule: &'static str,
}

fn doc(field: &Arc<CycloField>, surface: SurfaceDescriptor, generators: GeneratorLiterals) -> InputDocument {
    InputDocument { conductor: field.conductor(), surface, generators, options: Options::default() }
}

fn k(n: u32) -> Arc<CycloField> {
    CycloField::new(n).unwrap()
}

fn rot(f: &Arc<CycloField>, n: u32) -> MoebiusMap {
    rotation(f, n).unwrap()
}

fn q(f: &Arc<CycloField>, a: Factor, b: Factor, swap: bool) -> QuadricAut {
    QuadricAut::new(a.build(f).unwrap(), b.build(f).unwrap(), swap)
}

fn sextic(gens: &[([CycNum; 3], &str)]) -> GeneratorLiterals {
    let auts: Vec<DP6Aut> = gens.iter().map(|(t, w)| DP6Aut::new(t.clone(), Hex::parse(w).unwrap()).unwrap()).collect();
    GeneratorLiterals::sextic(&auts)
}

fn perms(ps: &[[u32; 5]]) -> GeneratorLiterals {
    GeneratorLiterals::DP5(ps.iter().map(|p| p.to_vec()).collect())
}

const LIN: &str = "linearizable";
const NOT: &str = "not_linearizable";
const INVALID: &str = "invalid_input";

pub fn catalogue() -> Vec<Case> {
    use Factor::*;
    use SurfaceDescriptor as S;
    let mut out = Vec::new();
    let mut add = |name, doc, verdict, rule| out.push(Case { name, doc, verdict, rule });

    // rows of the classification table
    let f = k(5);
    add("hirzebruch_odd_icosahedral", doc(&f, S::Hirzebruch(3), GeneratorLiterals::base(&[icosahedral_five(&f).unwrap(), icosahedral_two(&f).unwrap()])), LIN, "hirzebruch_odd");
    add("hirzebruch_even_cyclic", doc(&f, S::Hirzebruch(2), GeneratorLiterals::base(&[rot(&f, 5)])), LIN, "hirzebruch_cyclic_base");
    let f = k(3);
    add("hirzebruch_even_odd_dihedral", doc(&f, S::Hirzebruch(4), GeneratorLiterals::base(&[rot(&f, 3), inversion(&f)])), LIN, "hirzebruch_odd_dihedral_base");
    let f = k(12);
    add("quadric_cyclic_cyclic", doc(&f, S::Quadric, GeneratorLiterals::quadric(&[q(&f, Rotation(3), Identity, false), q(&f, Identity, Rotation(4), false)])), LIN, "quadric_cyclic_factors");
    add(
        "quadric_cyclic_odd_dihedral",
        doc(&f, S::Quadric, GeneratorLiterals::quadric(&[q(&f, Rotation(4), Identity, false), q(&f, Identity, Rotation(3), false), q(&f, Identity, Inversion, false)])),
        LIN,
        "quadric_cyclic_odd_dihedral",
    );
    let f = k(15);
    add("quadric_dihedral_d15", doc(&f, S::Quadric, GeneratorLiterals::quadric(&[q(&f, Rotation(3), Rotation(5), false), q(&f, Inversion, Inversion, false)])), LIN, "quadric_dihedral_fibre_product");
    let f = k(2);
    add("quadric_swap_cyclic_kernel", doc(&f, S::Quadric, GeneratorLiterals::quadric(&[q(&f, Rotation(2), Rotation(2), false), q(&f, Identity, Identity, true)])), LIN, "swap_cyclic_kernel");
    let f = k(1);
    add("quintic_cyclic", doc(&f, S::DP5, perms(&[[2, 3, 4, 5, 1]])), LIN, "quintic_cyclic_dihedral");
    add("quintic_dihedral", doc(&f, S::DP5, perms(&[[2, 3, 4, 5, 1], [1, 5, 4, 3, 2]])), LIN, "quintic_cyclic_dihedral");
    let one = || [f.one(), f.one(), f.one()];
    add("sextic_cyclic_six", doc(&f, S::DP6, sextic(&[(one(), "r")])), LIN, "sextic_fixed_point");
    add("sextic_symmetric_three", doc(&f, S::DP6, sextic(&[(one(), "rr"), (one(), "s")])), LIN, "sextic_fixed_point");
    let f = k(3);
    let (z, o, zero) = (f.omega(1), f.one(), f.zero());
    let heis = vec![
        [[o.clone(), zero.clone(), zero.clone()], [zero.clone(), z.clone(), zero.clone()], [zero.clone(), zero.clone(), &z * &z]],
        [[zero.clone(), o.clone(), zero.clone()], [zero.clone(), zero.clone(), o.clone()], [o.clone(), zero.clone(), zero.clone()]],
    ];
    add("plane_heisenberg", doc(&f, S::P2, GeneratorLiterals::Plane(heis)), LIN, "plane_linear");

    // non-linearizable counterparts
    let f = k(1);
    add("sextic_full_hexagon", doc(&f, S::DP6, sextic(&[(one(), "r"), (one(), "s")])), NOT, "sextic_full_hexagon");
    let f = k(3);
    let w = f.omega(1);
    add("sextic_torus_meet", doc(&f, S::DP6, sextic(&[([f.one(), w.clone(), &w * &w], ""), ([f.one(), f.one(), f.one()], "r")])), NOT, "sextic_torus_meet");
    let f = k(1);
    add("quintic_frobenius", doc(&f, S::DP5, perms(&[[2, 3, 4, 5, 1], [1, 3, 5, 2, 4]])), NOT, "quintic_large");
    add("quintic_alternating", doc(&f, S::DP5, perms(&[[2, 3, 4, 5, 1], [2, 3, 1, 4, 5]])), NOT, "quintic_large");
    add("quintic_symmetric", doc(&f, S::DP5, perms(&[[2, 3, 4, 5, 1], [2, 1, 3, 4, 5]])), NOT, "quintic_large");
    let f = k(4);
    add("quadric_tetrahedral_factor", doc(&f, S::Quadric, GeneratorLiterals::quadric(&[q(&f, Negation, Identity, false), q(&f, Inversion, Identity, false), q(&f, TetrahedralThree, Identity, false)])), NOT, "quadric_even_orbits");
    let f = k(12);
    add(
        "quadric_octahedral_factor",
        doc(&f, S::Quadric, GeneratorLiterals::quadric(&[q(&f, Negation, Identity, false), q(&f, Inversion, Identity, false), q(&f, TetrahedralThree, Identity, false), q(&f, OctahedralTwo, Identity, false), q(&f, Identity, Rotation(3), false)])),
        NOT,
        "quadric_even_orbits",
    );
    let f = k(5);
    add("quadric_icosahedral_factor", doc(&f, S::Quadric, GeneratorLiterals::quadric(&[q(&f, IcosahedralFive, Identity, false), q(&f, IcosahedralTwo, Identity, false)])), NOT, "quadric_even_orbits");
    let f = k(12);
    add("quadric_even_dihedral_factor", doc(&f, S::Quadric, GeneratorLiterals::quadric(&[q(&f, Rotation(4), Identity, false), q(&f, Inversion, Identity, false), q(&f, Identity, Rotation(3), false)])), NOT, "quadric_even_orbits");
    let f = k(15);
    add(
        "quadric_odd_dihedral_product",
        doc(&f, S::Quadric, GeneratorLiterals::quadric(&[q(&f, Rotation(3), Identity, false), q(&f, Inversion, Identity, false), q(&f, Identity, Rotation(5), false), q(&f, Identity, Inversion, false)])),
        NOT,
        "quadric_non_dihedral_product",
    );
    let f = k(4);
    add("quadric_swap_tetrahedral_kernel", doc(&f, S::Quadric, GeneratorLiterals::quadric(&tetrahedral_rows()[0].build(&f).unwrap())), NOT, "swap_platonic_kernel");
    let f = k(3);
    add("quadric_swap_dihedral_kernel", doc(&f, S::Quadric, GeneratorLiterals::quadric(&[q(&f, Rotation(3), Rotation(3), false), q(&f, Inversion, Inversion, false), q(&f, Identity, Identity, true)])), NOT, "swap_dihedral_kernel");
    let f = k(4);
    add("hirzebruch_even_even_dihedral", doc(&f, S::Hirzebruch(2), GeneratorLiterals::base(&[rot(&f, 4), inversion(&f)])), NOT, "hirzebruch_even_parity");
    let f = k(1);
    for (name, d) in [("conic_bundle_one", 1), ("conic_bundle_two", 2), ("conic_bundle_four", 4)] {
        add(name, doc(&f, S::ConicBundle(d), GeneratorLiterals::None), NOT, "conic_bundle_low_degree");
    }
    add("conic_bundle_zero", doc(&f, S::ConicBundle(0), GeneratorLiterals::None), NOT, "conic_bundle_superrigid");
    for (name, d) in [("del_pezzo_one", 1), ("del_pezzo_two", 2), ("del_pezzo_three", 3)] {
        add(name, doc(&f, S::DelPezzoLow(d), GeneratorLiterals::None), NOT, "del_pezzo_rigid");
    }
    add("del_pezzo_four", doc(&f, S::DelPezzoLow(4), GeneratorLiterals::None), NOT, "del_pezzo_quartic");

    // inputs that are not G-Mori fibre spaces
    add("conic_bundle_seven", doc(&f, S::ConicBundle(7), GeneratorLiterals::None), INVALID, "conic_bundle_seven");
    add("sextic_not_minimal", doc(&f, S::DP6, sextic(&[(one(), "rr"), (one(), "rs")])), INVALID, "sextic_not_minimal");
    out
}

/// The wreath product S₄ ≀ C₂ acting on the quadric.
pub fn wreath_s4() -> InputDocument {
    let f = k(4);
    let row = octahedral_rows().into_iter().find(|r| r.name == "S4 wreath C2").unwrap();
    doc(&f, SurfaceDescriptor::Quadric, GeneratorLiterals::quadric(&row.build(&f).unwrap()))
}

pub fn d3_base() -> InputDocument {
    let f = k(3);
    doc(&f, SurfaceDescriptor::Hirzebruch(1), GeneratorLiterals::base(&[rot(&f, 3), inversion(&f)]))
}

fn linear(f: &Arc<CycloField>, c: [CycNum; 3]) -> Poly {
    let terms: Vec<(CycNum, [u32; 3])> = c.into_iter().enumerate().map(|(i, c)| (c, std::array::from_fn(|j| (i == j) as u32))).collect();
    Poly::new(f, &terms)
}

fn product(f: &Arc<CycloField>, factors: &[Poly]) -> Poly {
    factors[1..].iter().fold(factors[0].clone(), |acc, p| acc.mul(f, p))
}

/// The quadratic map, the cubic involution and the linear map of the
/// worked conjugation example, over Q(ω₅) with φ = (1+√5)/2 = 1+ω+ω⁴.
pub fn conjugation_example() -> MapDocument {
    let f = k(5);
    let (w, w4) = (f.omega(1), f.omega(4));
    let phi = &(&f.one() + &w) + &w4;
    let phi_inv = &w + &w4;
    let phi_sq = &phi + &f.one();
    let phi_inv_sq = &f.int(2) - &phi;
    let (o, z) = (f.one(), f.zero());
    let neg = |c: &CycNum| -c.clone();
    let lin = |a: &CycNum, b: &CycNum, c: &CycNum| linear(&f, [a.clone(), b.clone(), c.clone()]);
    let x = lin(&o, &z, &z);
    let y = lin(&z, &o, &z);
    let zz = lin(&z, &z, &o);
    let map = |p: [Poly; 3]| P2RationalMap::new(&f, p).unwrap();
    // [x(z−y) : z(x−y) : xz]
    let quad = map([
        product(&f, &[x.clone(), lin(&z, &neg(&o), &o)]),
        product(&f, &[zz.clone(), lin(&o, &neg(&o), &z)]),
        product(&f, &[x.clone(), zz.clone()]),
    ]);
    let inv = map([
        product(&f, &[lin(&o, &neg(&phi), &z), lin(&z, &o, &neg(&o)), lin(&neg(&phi), &z, &o)]),
        product(&f, &[lin(&phi_inv, &neg(&o), &z), lin(&z, &phi_sq, &neg(&o)), lin(&neg(&o), &z, &o)]),
        product(&f, &[lin(&o, &neg(&o), &z), lin(&z, &phi_sq, &neg(&o)), lin(&neg(&phi), &z, &o)]),
    ]);
    // [y − φ⁻²z : y − φ⁻¹x : y]
    let target = map([lin(&z, &o, &neg(&phi_inv_sq)), lin(&neg(&phi_inv), &o, &z), y]);
    MapDocument { f: quad, conjugator: inv, target, trials: 50, seed: 0 }
}
