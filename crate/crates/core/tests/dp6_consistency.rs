use std::sync::Arc;

use cremona_core::cyclo::{CycNum, CycloField};
use cremona_core::delpezzo::{
    dp5_analyze, dp6_act, dp6_analyze, dp6_compose, DP5Group, DP6Aut, DP6Point, Hex, HexSubgroup,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn field() -> Arc<CycloField> {
    CycloField::new(6).unwrap()
}

fn random_unit(f: &Arc<CycloField>, rng: &mut ChaCha8Rng) -> CycNum {
    loop {
        let c = &f.int(rng.gen_range(-4..=4)) + &f.omega(rng.gen_range(0..6));
        if !c.is_zero() {
            return c;
        }
    }
}

fn random_point(f: &Arc<CycloField>, rng: &mut ChaCha8Rng) -> DP6Point {
    // mostly points of the open torus orbit, sometimes points on the hexagon
    if rng.gen_ratio(1, 10) {
        let v = DP6Point::hexagon_vertices(f);
        return v[rng.gen_range(0..v.len())].clone();
    }
    let x: [CycNum; 3] = std::array::from_fn(|_| random_unit(f, rng));
    let y = x.clone().map(|c| c.invert().unwrap());
    DP6Point::new(x, y).unwrap()
}

fn random_aut(f: &Arc<CycloField>, rng: &mut ChaCha8Rng) -> DP6Aut {
    let t: [CycNum; 3] = std::array::from_fn(|_| random_unit(f, rng));
    DP6Aut::new(t, Hex::new(rng.gen_range(0..6), rng.gen())).unwrap()
}

#[test]
fn compose_agrees_with_act() {
    let f = field();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let points: Vec<DP6Point> = (0..100).map(|_| random_point(&f, &mut rng)).collect();
    for _ in 0..100 {
        let a = random_aut(&f, &mut rng);
        let b = random_aut(&f, &mut rng);
        let ab = dp6_compose(&a, &b).unwrap();
        for p in &points {
            let lhs = dp6_act(&ab, p).unwrap();
            assert!(lhs.on_surface());
            assert_eq!(lhs, dp6_act(&a, &dp6_act(&b, p).unwrap()).unwrap());
        }
    }
}

#[test]
fn center_fixed_and_non_minimal_flagged() {
    let f = field();
    let rho = DP6Aut::rotation(&f);
    let sigma = DP6Aut::reflection(&f);
    let c = DP6Point::center(&f);
    let a = dp6_analyze(&[rho.clone(), sigma.clone()], 100).unwrap();
    assert!(a.group.elements().iter().all(|g| dp6_act(g, &c).unwrap() == c));
    let rho2 = dp6_compose(&rho, &rho).unwrap();
    let rs = dp6_compose(&rho, &sigma).unwrap();
    assert!(!dp6_analyze(&[rho2, rs], 100).unwrap().minimal);
}

/// Brute force: look for a common fixed point among torus translates of
/// the center by roots of unity, and among the hexagon vertices.
fn brute_force_fixes_point(f: &Arc<CycloField>, gens: &[DP6Aut]) -> bool {
    let roots: Vec<CycNum> = (0..6).map(|k| f.omega(k)).collect();
    let mut candidates = DP6Point::hexagon_vertices(f);
    for a in &roots {
        for b in &roots {
            let x = [f.one(), a.clone(), b.clone()];
            let y = x.clone().map(|c| c.invert().unwrap());
            candidates.push(DP6Point::new(x, y).unwrap());
        }
    }
    candidates.iter().any(|p| gens.iter().all(|g| dp6_act(g, p).unwrap() == *p))
}

#[test]
fn fixed_point_dichotomy() {
    let f = field();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let minimal: Vec<Vec<Hex>> = vec![vec![Hex::R], vec![Hex::new(2, false), Hex::S], vec![Hex::R, Hex::S]];
    let mut checked = 0;
    while checked < 20 {
        let hexes = minimal[rng.gen_range(0..3)].clone();
        let mut gens: Vec<DP6Aut> = hexes.iter().map(|&h| DP6Aut::standard(&f, h)).collect();
        // conjugate by a torus element of roots of unity, or add a torus element
        let t = DP6Aut::new([f.one(), f.omega(rng.gen_range(0..6)), f.omega(rng.gen_range(0..6))], Hex::IDENTITY).unwrap();
        if rng.gen() {
            let tinv = DP6Aut::new(t.torus.clone().map(|c| c.invert().unwrap()), Hex::IDENTITY).unwrap();
            gens = gens.iter().map(|g| dp6_compose(&dp6_compose(&t, g).unwrap(), &tinv).unwrap()).collect();
        } else {
            gens.push(t);
        }
        let a = dp6_analyze(&gens, 5000).unwrap();
        assert!(a.minimal);
        assert_eq!(a.fixes_point, brute_force_fixes_point(&f, &gens), "{gens:?}");
        checked += 1;
    }
}

#[test]
fn sixteen_subgroups_and_their_names() {
    let names: Vec<String> = HexSubgroup::all().iter().map(|s| s.to_string()).collect();
    assert_eq!(names.len(), 16);
    assert!(names.contains(&"<r>".to_string()));
    assert!(names.contains(&"<r^2, s>".to_string()));
    assert!(names.contains(&"<r^2, rs>".to_string()));
}

#[test]
fn dp5_relabeling_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let groups = [
        vec![vec![2, 3, 4, 5, 1]],
        vec![vec![2, 3, 4, 5, 1], vec![1, 5, 4, 3, 2]],
        vec![vec![2, 3, 4, 5, 1], vec![1, 3, 5, 2, 4]],
        vec![vec![2, 3, 1, 4, 5], vec![1, 2, 4, 5, 3]],
        vec![vec![2, 1, 3, 4, 5], vec![2, 3, 4, 5, 1]],
        vec![vec![2, 3, 1, 4, 5]],
        vec![vec![2, 1, 4, 3, 5]],
    ];
    for perms in groups {
        let g = DP5Group::new(perms).unwrap();
        let base = dp5_analyze(&g);
        for _ in 0..20 {
            let mut label: Vec<u32> = (1..=5).collect();
            label.shuffle(&mut rng);
            assert_eq!(dp5_analyze(&g.relabel(&label).unwrap()), base);
        }
    }
}
