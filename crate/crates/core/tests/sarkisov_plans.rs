use std::collections::{HashSet, VecDeque};

use cremona_core::cyclo::CycloField;
use cremona_core::moebius::{orbit_lengths_available, KleinClass};
use cremona_core::sarkisov::{
    bezout_plan, elementary_transform, euclid_witness, validate_chain, HirzebruchState, LinkKind, MonomialMap,
    PlanOutcome, Side,
};
use num_integer::Integer;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn klein_spectra() -> Vec<KleinClass> {
    vec![KleinClass::Cyclic(9), KleinClass::Dihedral(7), KleinClass::A4, KleinClass::S4, KleinClass::A5]
}

/// Forward search over F_0..F_limit, written independently of the planner.
fn reachable(n: u64, lengths: &[u64], limit: u64) -> bool {
    distance(n, lengths, limit).is_some()
}

fn distance(n: u64, lengths: &[u64], limit: u64) -> Option<usize> {
    let mut seen = HashSet::from([n]);
    let mut queue = VecDeque::from([(n, 0)]);
    while let Some((m, d)) = queue.pop_front() {
        if m == 1 {
            return Some(d);
        }
        for &l in lengths {
            let mut next = vec![m + l];
            if m >= 1 {
                next.push(m.abs_diff(l));
            }
            for x in next {
                if x <= limit && seen.insert(x) {
                    queue.push_back((x, d + 1));
                }
            }
        }
    }
    None
}

#[test]
fn planner_matches_search() {
    for class in klein_spectra() {
        let lengths = orbit_lengths_available(class);
        for n in 1..=12 {
            let outcome = bezout_plan(n, &lengths).unwrap();
            assert_eq!(matches!(outcome, PlanOutcome::Plan(_)), reachable(n, &lengths, 40), "{class:?} n={n}");
            if let PlanOutcome::Plan(steps) = outcome {
                let mut s = HirzebruchState::new(n, class);
                for step in &steps {
                    assert_eq!(step.from_n, Some(s.n));
                    let side = if step.kind == LinkKind::ElementaryOnSigma { Side::Sigma } else { Side::C };
                    s = elementary_transform(&s, step.length.unwrap(), side).unwrap();
                    assert_eq!(step.to_n, Some(s.n));
                }
                assert_eq!(s.n, 1);
            }
        }
    }
}

#[test]
fn plans_are_shortest() {
    let PlanOutcome::Plan(p) = bezout_plan(4, &[2, 5]).unwrap() else { panic!() };
    assert_eq!(Some(p.len()), distance(4, &[2, 5], 20));
    for class in klein_spectra() {
        let lengths = orbit_lengths_available(class);
        for n in 1..=12 {
            if let PlanOutcome::Plan(p) = bezout_plan(n, &lengths).unwrap() {
                assert_eq!(Some(p.len()), distance(n, &lengths, 200), "{class:?} n={n}");
            }
        }
    }
}

#[test]
fn parity_is_conserved_for_even_spectra() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let lengths: Vec<u64> = (0..rng.gen_range(1..4)).map(|_| 2 * rng.gen_range(1..10)).collect();
        let mut n: u64 = rng.gen_range(0..30);
        let parity = n % 2;
        for _ in 0..20 {
            let l = lengths[rng.gen_range(0..lengths.len())];
            let s = HirzebruchState { n, base_class: KleinClass::A4, spectrum: lengths.clone() };
            let side = if n == 0 || rng.gen() { Side::Sigma } else { Side::C };
            n = elementary_transform(&s, l, side).unwrap().n;
            assert_eq!(n % 2, parity);
        }
    }
}

#[test]
fn euclid_on_random_triples() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut cases = vec![(3, 5, 15)];
    while cases.len() < 101 {
        let m: u32 = rng.gen_range(2..40);
        let (a, b) = (rng.gen_range(0..m as u64), rng.gen_range(0..m as u64));
        if a + b > 0 {
            cases.push((a, b, m));
        }
    }
    for (a, b, m) in cases {
        let (chain, fin) = euclid_witness(a, b, m).unwrap();
        assert_eq!(fin, (a.gcd(&b), 0), "({a},{b},{m})");
        let report = validate_chain(&chain);
        assert!(report.valid, "({a},{b},{m}): {report:?}");
        let f = CycloField::new(m).unwrap();
        assert_eq!(chain.final_generators[0], MonomialMap::rotation_pair(&f, m, fin.0 as i64, 0).unwrap());
        assert_eq!(chain.final_generators[1], MonomialMap::double_inversion(&f));
    }
}

fn monomial(f: &std::sync::Arc<CycloField>, e: (i64, i64, i64), c: (i64, i64)) -> MonomialMap {
    // unimodular matrices from products of elementary ones
    let m = MonomialMap::shear_power(f, e.0)
        .compose(&MonomialMap::swap(f))
        .compose(&MonomialMap::shear_power(f, e.1))
        .compose(&if e.2 % 2 == 0 { MonomialMap::identity(f) } else { MonomialMap::double_inversion(f) });
    MonomialMap::diagonal(f.omega(c.0), &f.int(2) + &f.omega(c.1)).compose(&m)
}

proptest! {
    #[test]
    fn monomial_group_laws(
        e1 in (-3i64..4, -3i64..4, 0i64..2), e2 in (-3i64..4, -3i64..4, 0i64..2), e3 in (-3i64..4, -3i64..4, 0i64..2),
        c1 in (0i64..6, 0i64..6), c2 in (0i64..6, 0i64..6), c3 in (0i64..6, 0i64..6),
    ) {
        let f = CycloField::new(6).unwrap();
        let (a, b, c) = (monomial(&f, e1, c1), monomial(&f, e2, c2), monomial(&f, e3, c3));
        prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
        prop_assert_eq!(a.compose(&a.inverse()), MonomialMap::identity(&f));
        prop_assert_eq!(a.compose(&b).determinant(), a.determinant() * b.determinant());
        prop_assert_eq!(a.compose(&b).determinant().abs(), 1);
        let p = [&f.int(3) + &f.omega(1), f.int(-2)];
        prop_assert_eq!(a.compose(&b).apply(&p), a.apply(&b.apply(&p)));
    }
}
