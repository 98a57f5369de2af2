//! Isomorphism-family recognition from cheap invariants.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::GroupTable;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FamilyTag {
    Trivial,
    Cyclic(u64),
    Dihedral(u64),
    /// D(A) for an abelian A with the given invariant factors.
    GeneralizedDihedral(Vec<u64>),
    A4,
    S4,
    A5,
    /// The Frobenius group of order 20.
    F5,
    S5,
    DirectProduct(Vec<FamilyTag>),
    Wreath(Box<FamilyTag>),
    Unrecognized(u64),
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyTag::Trivial => write!(f, "Trivial"),
            FamilyTag::Cyclic(n) => write!(f, "Cyclic({n})"),
            FamilyTag::Dihedral(n) => write!(f, "Dihedral({n})"),
            FamilyTag::GeneralizedDihedral(v) => {
                let parts: Vec<String> = v.iter().map(|d| d.to_string()).collect();
                write!(f, "GeneralizedDihedral({})", parts.join("x"))
            }
            FamilyTag::A4 => write!(f, "A4"),
            FamilyTag::S4 => write!(f, "S4"),
            FamilyTag::A5 => write!(f, "A5"),
            FamilyTag::F5 => write!(f, "F5"),
            FamilyTag::S5 => write!(f, "S5"),
            FamilyTag::DirectProduct(v) => {
                let parts: Vec<String> = v.iter().map(|t| t.to_string()).collect();
                write!(f, "DirectProduct({})", parts.join(", "))
            }
            FamilyTag::Wreath(t) => write!(f, "Wreath({t})"),
            FamilyTag::Unrecognized(n) => write!(f, "Unrecognized({n})"),
        }
    }
}

/// Order, commutativity, element-order statistics, center and derived subgroup sizes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fingerprint {
    pub order: u64,
    pub abelian: bool,
    pub order_counts: BTreeMap<u64, u64>,
    pub center: u64,
    pub derived: u64,
}

pub fn fingerprint<E>(g: &GroupTable<E>) -> Fingerprint {
    Fingerprint {
        order: g.len() as u64,
        abelian: g.is_abelian(),
        order_counts: g.order_counts(),
        center: g.center().len() as u64,
        derived: g.derived_subgroup().len() as u64,
    }
}

/// A rotation of order n and a reflection inverting it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DihedralWitness {
    pub n: u64,
    pub rotation: usize,
    pub reflection: usize,
}

/// Is the group dihedral of order 2n? C2 counts as D1 and the Klein
/// four-group as D2.
pub fn is_dihedral<E>(g: &GroupTable<E>) -> Option<DihedralWitness> {
    let size = g.len() as u64;
    if size < 2 || size % 2 == 1 {
        return None;
    }
    let n = size / 2;
    let rotation = (0..g.len()).find(|&x| g.element_order(x) == n)?;
    let cyc = g.subgroup_generated(&[rotation]);
    let inv = g.inv(rotation);
    let reflection = (0..g.len()).find(|&s| {
        g.element_order(s) == 2 && cyc.binary_search(&s).is_err() && g.mul(g.mul(s, rotation), s) == inv
    })?;
    Some(DihedralWitness { n, rotation, reflection })
}

fn totient(n: u64) -> u64 {
    (1..=n).filter(|k| k.gcd(&n) == 1).count() as u64
}

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

fn counts(pairs: &[(u64, u64)]) -> BTreeMap<u64, u64> {
    pairs.iter().copied().collect()
}

/// Fingerprint of a named family, where it is determined by the name.
pub fn reference_fingerprint(tag: &FamilyTag) -> Option<Fingerprint> {
    let fp = |order, abelian, oc: BTreeMap<u64, u64>, center, derived| Fingerprint {
        order,
        abelian,
        order_counts: oc,
        center,
        derived,
    };
    Some(match tag {
        FamilyTag::Trivial => fp(1, true, counts(&[(1, 1)]), 1, 1),
        FamilyTag::Cyclic(k) => {
            let oc = divisors(*k).into_iter().map(|d| (d, totient(d))).collect();
            fp(*k, true, oc, *k, 1)
        }
        FamilyTag::Dihedral(k) if *k >= 3 => {
            let mut oc: BTreeMap<u64, u64> = divisors(*k).into_iter().map(|d| (d, totient(d))).collect();
            *oc.entry(2).or_insert(0) += k;
            let (center, derived) = if k % 2 == 0 { (2, k / 2) } else { (1, *k) };
            fp(2 * k, false, oc, center, derived)
        }
        FamilyTag::A4 => fp(12, false, counts(&[(1, 1), (2, 3), (3, 8)]), 1, 4),
        FamilyTag::S4 => fp(24, false, counts(&[(1, 1), (2, 9), (3, 8), (4, 6)]), 1, 12),
        FamilyTag::A5 => fp(60, false, counts(&[(1, 1), (2, 15), (3, 20), (5, 24)]), 1, 60),
        FamilyTag::F5 => fp(20, false, counts(&[(1, 1), (2, 5), (4, 10), (5, 4)]), 1, 5),
        FamilyTag::S5 => fp(120, false, counts(&[(1, 1), (2, 25), (3, 20), (4, 30), (5, 24), (6, 20)]), 1, 60),
        FamilyTag::DirectProduct(parts) => {
            let mut acc = reference_fingerprint(&FamilyTag::Trivial)?;
            for p in parts {
                acc = product_fingerprint(&acc, &reference_fingerprint(p)?);
            }
            acc
        }
        FamilyTag::Wreath(base) => wreath_fingerprint(&reference_fingerprint(base)?),
        _ => return None,
    })
}

fn product_fingerprint(a: &Fingerprint, b: &Fingerprint) -> Fingerprint {
    let mut oc = BTreeMap::new();
    for (&o1, &c1) in &a.order_counts {
        for (&o2, &c2) in &b.order_counts {
            *oc.entry(o1.lcm(&o2)).or_insert(0) += c1 * c2;
        }
    }
    Fingerprint {
        order: a.order * b.order,
        abelian: a.abelian && b.abelian,
        order_counts: oc,
        center: a.center * b.center,
        derived: a.derived * b.derived,
    }
}

/// X ≀ C2: pairs (a, b) plus the swapped coset, where (a, b)σ has order 2·ord(ab).
fn wreath_fingerprint(x: &Fingerprint) -> Fingerprint {
    let mut fp = product_fingerprint(x, x);
    for (&o, &c) in &x.order_counts {
        *fp.order_counts.entry(2 * o).or_insert(0) += x.order * c;
    }
    fp.order *= 2;
    fp.abelian = false;
    fp.center = x.center;
    fp.derived = x.order * x.derived;
    fp
}

/// Invariant factors d1 | d2 | … of an abelian group from its order statistics.
pub fn invariant_factors(order_counts: &BTreeMap<u64, u64>) -> Vec<u64> {
    let n: u64 = order_counts.values().sum();
    let mut per_prime: Vec<Vec<u64>> = Vec::new();
    let mut m = n;
    let mut p = 2;
    while m > 1 {
        if m.is_multiple_of(p) {
            let mut e = 0;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            // s_k = log_p #{x : x^{p^k} = 1}
            let mut s = vec![0u32];
            for k in 1..=e {
                let pk = p.pow(k);
                let c: u64 = order_counts.iter().filter(|(&o, _)| pk % o == 0).map(|(_, &c)| c).sum();
                s.push(c.ilog(p));
            }
            let at_least: Vec<u32> = (1..=e as usize).map(|k| s[k] - s[k - 1]).collect();
            let mut exps = Vec::new();
            for k in 1..=e as usize {
                let exactly = at_least[k - 1] - at_least.get(k).copied().unwrap_or(0);
                for _ in 0..exactly {
                    exps.push(p.pow(k as u32));
                }
            }
            exps.sort_unstable_by(|a, b| b.cmp(a));
            per_prime.push(exps);
        }
        p += 1;
    }
    let len = per_prime.iter().map(|v| v.len()).max().unwrap_or(0);
    let mut out: Vec<u64> = (0..len).map(|i| per_prime.iter().map(|v| v.get(i).copied().unwrap_or(1)).product()).collect();
    out.sort_unstable();
    out
}

/// If G = D(A) with A abelian of index 2, return A's element set.
fn generalized_dihedral_kernel<E>(g: &GroupTable<E>) -> Option<Vec<usize>> {
    let n = g.len();
    if n < 4 || n % 2 == 1 {
        return None;
    }
    let involutions = (0..n).filter(|&x| g.element_order(x) == 2).count();
    if involutions < n / 2 {
        return None;
    }
    let gens = g.generators.len();
    if gens > 16 {
        return None;
    }
    for mask in 1u32..(1 << gens) {
        let f = |k: usize| (mask >> k) & 1;
        let mut parity = vec![0u32; n];
        for j in 1..n {
            parity[j] = parity[g.parent[j]] ^ f(g.last_gen[j]);
        }
        let hom = (0..n).all(|i| (0..gens).all(|k| parity[g.rmul[i][k]] == parity[i] ^ f(k)));
        if !hom {
            continue;
        }
        if (0..n).any(|x| parity[x] == 1 && g.element_order(x) != 2) {
            continue;
        }
        let kernel: Vec<usize> = (0..n).filter(|&x| parity[x] == 0).collect();
        let kg = g.generating_set(&kernel);
        if kg.iter().all(|&a| kg.iter().all(|&b| g.commutes(a, b))) {
            return Some(kernel);
        }
    }
    None
}

fn catalogue_bases(order: u64) -> Vec<FamilyTag> {
    let mut out = Vec::new();
    if order >= 2 {
        out.push(FamilyTag::Cyclic(order));
    }
    if order.is_multiple_of(2) && order >= 6 {
        out.push(FamilyTag::Dihedral(order / 2));
    }
    match order {
        12 => out.push(FamilyTag::A4),
        20 => out.push(FamilyTag::F5),
        24 => out.push(FamilyTag::S4),
        60 => out.push(FamilyTag::A5),
        120 => out.push(FamilyTag::S5),
        _ => {}
    }
    out
}

/// Candidates that are isomorphic to families tested earlier in
/// `recognize_family`; matching one of them is treated as ambiguous.
fn shadows_earlier_family(tag: &FamilyTag) -> bool {
    match tag {
        FamilyTag::DirectProduct(parts) => {
            parts.iter().all(|p| matches!(p, FamilyTag::Cyclic(_)))
                || (parts.len() == 2
                    && parts.iter().any(|p| matches!(p, FamilyTag::Dihedral(_)))
                    && parts.contains(&FamilyTag::Cyclic(2)))
        }
        FamilyTag::Wreath(b) => **b == FamilyTag::Cyclic(2),
        _ => false,
    }
}

fn catalogue(order: u64) -> Vec<FamilyTag> {
    let mut out = Vec::new();
    for m in divisors(order) {
        let k = order / m;
        if m < 2 || k < m {
            continue;
        }
        for x in catalogue_bases(m) {
            for y in catalogue_bases(k) {
                let mut parts = vec![x.clone(), y];
                parts.sort();
                let t = FamilyTag::DirectProduct(parts);
                if !out.contains(&t) {
                    out.push(t);
                }
            }
        }
    }
    if order.is_multiple_of(2) {
        let half = order / 2;
        let r = (half as f64).sqrt().round() as u64;
        if r * r == half {
            for x in catalogue_bases(r) {
                out.push(FamilyTag::Wreath(Box::new(x)));
            }
        }
    }
    out
}

/// Name the isomorphism family of a finite group, or `Unrecognized`.
pub fn recognize_family<E>(g: &GroupTable<E>) -> FamilyTag {
    let n = g.len() as u64;
    if n == 1 {
        return FamilyTag::Trivial;
    }
    if (0..g.len()).any(|x| g.element_order(x) == n) {
        return FamilyTag::Cyclic(n);
    }
    if let Some(w) = is_dihedral(g) {
        return FamilyTag::Dihedral(w.n);
    }
    let fp = fingerprint(g);
    for tag in [FamilyTag::A4, FamilyTag::S4, FamilyTag::A5, FamilyTag::F5, FamilyTag::S5] {
        if reference_fingerprint(&tag).as_ref() == Some(&fp) {
            return tag;
        }
    }
    if fp.abelian {
        let f = invariant_factors(&fp.order_counts);
        return FamilyTag::DirectProduct(f.into_iter().map(FamilyTag::Cyclic).collect());
    }
    if let Some(kernel) = generalized_dihedral_kernel(g) {
        let mut oc = BTreeMap::new();
        for &x in &kernel {
            *oc.entry(g.element_order(x)).or_insert(0) += 1;
        }
        return FamilyTag::GeneralizedDihedral(invariant_factors(&oc));
    }
    let matches: Vec<FamilyTag> =
        catalogue(n).into_iter().filter(|t| reference_fingerprint(t).as_ref() == Some(&fp)).collect();
    match matches.as_slice() {
        [t] if !shadows_earlier_family(t) => t.clone(),
        _ => FamilyTag::Unrecognized(n),
    }
}

#[cfg(test)]
mod tests {
    use super::super::perm::*;
    use super::super::{closure, GroupTable};
    use super::*;

    fn perm_group(n: usize, gens: &[Perm]) -> GroupTable<Perm> {
        closure(id(n), gens, compose, 20_000).unwrap()
    }

    fn s(n: usize) -> GroupTable<Perm> {
        perm_group(n, &[cycle(n, &(0..n).collect::<Vec<_>>()), cycle(n, &[0, 1])])
    }

    fn dihedral(n: usize) -> GroupTable<Perm> {
        let refl: Perm = (0..n).map(|i| (n - i) % n).collect();
        perm_group(n, &[cycle(n, &(0..n).collect::<Vec<_>>()), refl])
    }

    #[test]
    fn reference_fingerprints_match_permutation_groups() {
        let a4 = perm_group(4, &[cycle(4, &[0, 1, 2]), cycle(4, &[1, 2, 3])]);
        let a5 = perm_group(5, &[cycle(5, &[0, 1, 2]), cycle(5, &[0, 1, 2, 3, 4])]);
        let f5 = perm_group(5, &[cycle(5, &[0, 1, 2, 3, 4]), cycle(5, &[1, 2, 4, 3])]);
        for (g, tag) in [(a4, FamilyTag::A4), (s(4), FamilyTag::S4), (a5, FamilyTag::A5), (f5, FamilyTag::F5), (s(5), FamilyTag::S5)] {
            assert_eq!(Some(fingerprint(&g)), reference_fingerprint(&tag), "{tag}");
            assert_eq!(recognize_family(&g), tag);
        }
        for k in 3..10 {
            assert_eq!(Some(fingerprint(&dihedral(k))), reference_fingerprint(&FamilyTag::Dihedral(k as u64)));
        }
    }

    #[test]
    fn dihedral_conventions() {
        assert!(is_dihedral(&perm_group(2, &[cycle(2, &[0, 1])])).is_some());
        let v4 = perm_group(4, &[vec![1, 0, 3, 2], vec![2, 3, 0, 1]]);
        assert_eq!(is_dihedral(&v4).map(|w| w.n), Some(2));
        let c4 = perm_group(4, &[cycle(4, &[0, 1, 2, 3])]);
        assert!(is_dihedral(&c4).is_none());
        assert_eq!(recognize_family(&c4), FamilyTag::Cyclic(4));
        assert_eq!(recognize_family(&dihedral(5)), FamilyTag::Dihedral(5));
        // D(C3 x C3) on 6 points is generalized dihedral but not dihedral
        let g = perm_group(6, &[cycle(6, &[0, 1, 2]), cycle(6, &[3, 4, 5]), vec![0, 2, 1, 3, 5, 4]]);
        assert_eq!(g.len(), 18);
        assert!(is_dihedral(&g).is_none());
        assert_eq!(recognize_family(&g), FamilyTag::GeneralizedDihedral(vec![3, 3]));
    }

    #[test]
    fn abelian_invariants() {
        let g = perm_group(8, &[cycle(8, &[0, 1, 2, 3]), cycle(8, &[4, 5]), cycle(8, &[6, 7])]);
        assert_eq!(recognize_family(&g), FamilyTag::DirectProduct(vec![FamilyTag::Cyclic(2), FamilyTag::Cyclic(2), FamilyTag::Cyclic(4)]));
        let c6 = perm_group(5, &[cycle(5, &[0, 1, 2]), cycle(5, &[3, 4])]);
        assert_eq!(recognize_family(&c6), FamilyTag::Cyclic(6));
    }

    #[test]
    fn wreath_of_d3() {
        // S3 wr C2 on 6 points
        let g = perm_group(6, &[cycle(6, &[0, 1, 2]), cycle(6, &[0, 1]), vec![3, 4, 5, 0, 1, 2]]);
        assert_eq!(g.len(), 72);
        assert_eq!(recognize_family(&g), FamilyTag::Wreath(Box::new(FamilyTag::Dihedral(3))));
        let s4wr = perm_group(8, &[cycle(8, &[0, 1, 2, 3]), cycle(8, &[0, 1]), vec![4, 5, 6, 7, 0, 1, 2, 3]]);
        assert_eq!(s4wr.len(), 1152);
        assert_eq!(recognize_family(&s4wr), FamilyTag::Wreath(Box::new(FamilyTag::S4)));
    }

    #[test]
    fn direct_products() {
        let g = perm_group(7, &[cycle(7, &[0, 1, 2]), cycle(7, &[1, 2, 3]), cycle(7, &[4, 5, 6]), vec![0, 1, 2, 3, 5, 4, 6]]);
        assert_eq!(g.len(), 72);
        assert_eq!(recognize_family(&g), FamilyTag::DirectProduct(vec![FamilyTag::Dihedral(3), FamilyTag::A4]));
    }

    #[test]
    fn dihedral_normal_subgroup_count() {
        // index-2 dihedral normal subgroups exist in pairs exactly for even n
        for n in 3..=12usize {
            let g = dihedral(n);
            let subs = g.enumerate_subgroups();
            let count = subs
                .iter()
                .filter(|h| h.len() * 2 == g.len() && g.is_normal(h))
                .filter(|h| {
                    let t = g.regenerate(&g.generating_set(h));
                    is_dihedral(&t).is_some() && !(0..t.len()).any(|x| t.element_order(x) == t.len() as u64)
                })
                .count();
            assert_eq!(count == 2, n % 2 == 0, "n = {n}");
        }
    }
}
