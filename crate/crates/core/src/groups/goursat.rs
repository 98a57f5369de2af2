//! Subgroups of a direct product as fibre products.

use std::hash::Hash;

use super::{closure, GroupError, GroupTable};

/// G ⊂ G1 × G2 described as the fibre product of G1 → Q ← G2.
///
/// `h1` is the image in G1 of the kernel of the second projection, `h2`
/// the image in G2 of the kernel of the first. Cosets are numbered in
/// first-appearance order, and `phi[c]` is the G2/H2 coset paired with
/// the G1/H1 coset `c`.
#[derive(Debug, Clone)]
pub struct GoursatData<A, B> {
    pub g1: GroupTable<A>,
    pub g2: GroupTable<B>,
    pub h1: Vec<usize>,
    pub h2: Vec<usize>,
    pub coset1: Vec<usize>,
    pub coset2: Vec<usize>,
    pub reps1: Vec<usize>,
    pub reps2: Vec<usize>,
    pub phi: Vec<usize>,
    /// G1/H1, keyed by coset id.
    pub quotient: GroupTable<usize>,
}

impl<A, B> GoursatData<A, B> {
    pub fn quotient_order(&self) -> usize {
        self.quotient.len()
    }

    /// |G| = |H1|·|H2|·|Q|.
    pub fn order(&self) -> usize {
        self.h1.len() * self.h2.len() * self.quotient.len()
    }
}

pub fn goursat_decompose<E, A, B>(
    g: &GroupTable<E>,
    p1: impl Fn(&E) -> A,
    p2: impl Fn(&E) -> B,
    mul1: impl Fn(&A, &A) -> A,
    mul2: impl Fn(&B, &B) -> B,
) -> Result<GoursatData<A, B>, GroupError>
where
    A: Clone + Eq + Hash,
    B: Clone + Eq + Hash,
{
    let cap = g.len() + 1;
    let gens: Vec<&E> = g.generators().iter().map(|&i| g.element(i)).collect();
    let gens1: Vec<A> = gens.iter().map(|e| p1(e)).collect();
    let gens2: Vec<B> = gens.iter().map(|e| p2(e)).collect();
    let id1 = p1(g.element(0));
    let id2 = p2(g.element(0));
    let g1 = closure(id1.clone(), &gens1, &mul1, cap).map_err(not_product)?;
    let g2 = closure(id2.clone(), &gens2, &mul2, cap).map_err(not_product)?;
    if g1.index_of(&mul1(&id1, &id1)) != Some(0) || g2.index_of(&mul2(&id2, &id2)) != Some(0) {
        return Err(GroupError::NotAProduct { reason: "projection of the identity is not an identity".into() });
    }
    let mut img1 = Vec::with_capacity(g.len());
    let mut img2 = Vec::with_capacity(g.len());
    for e in g.elements() {
        let a = g1.index_of(&p1(e)).ok_or_else(|| GroupError::NotAProduct { reason: "first projection leaves G1".into() })?;
        let b = g2.index_of(&p2(e)).ok_or_else(|| GroupError::NotAProduct { reason: "second projection leaves G2".into() })?;
        img1.push(a);
        img2.push(b);
    }
    // projections must be homomorphisms: check against generators
    for x in 0..g.len() {
        for &s in g.generators() {
            let y = g.mul(x, s);
            if img1[y] != g1.mul(img1[x], img1[s]) || img2[y] != g2.mul(img2[x], img2[s]) {
                return Err(GroupError::NotAProduct { reason: format!("projection is not multiplicative at element {x}") });
            }
        }
    }
    let mut h1: Vec<usize> = (0..g.len()).filter(|&x| img2[x] == 0).map(|x| img1[x]).collect();
    let mut h2: Vec<usize> = (0..g.len()).filter(|&x| img1[x] == 0).map(|x| img2[x]).collect();
    h1.sort_unstable();
    h1.dedup();
    h2.sort_unstable();
    h2.dedup();
    let (coset1, reps1) = g1.cosets(&h1);
    let (coset2, reps2) = g2.cosets(&h2);
    let mut phi = vec![usize::MAX; reps1.len()];
    for x in 0..g.len() {
        let c = coset1[img1[x]];
        let d = coset2[img2[x]];
        if phi[c] == usize::MAX {
            phi[c] = d;
        } else if phi[c] != d {
            return Err(GroupError::NotAProduct { reason: "coset pairing is not a function".into() });
        }
    }
    let quotient = g1.quotient(&h1);
    Ok(GoursatData { g1, g2, h1, h2, coset1, coset2, reps1, reps2, phi, quotient })
}

fn not_product(e: GroupError) -> GroupError {
    GroupError::NotAProduct { reason: e.to_string() }
}

/// Rebuild the fibre product as a group of pairs.
pub fn goursat_reconstruct<A, B>(
    d: &GoursatData<A, B>,
    mul1: impl Fn(&A, &A) -> A,
    mul2: impl Fn(&B, &B) -> B,
) -> Result<GroupTable<(A, B)>, GroupError>
where
    A: Clone + Eq + Hash,
    B: Clone + Eq + Hash,
{
    let bad = |reason: &str| GroupError::InconsistentData { reason: reason.into() };
    if d.reps1.len() * d.h1.len() != d.g1.len() || d.reps2.len() * d.h2.len() != d.g2.len() {
        return Err(bad("coset counts do not match subgroup orders"));
    }
    if d.reps1.len() != d.reps2.len() || d.phi.len() != d.reps1.len() {
        return Err(bad("quotients have different orders"));
    }
    let mut seen = vec![false; d.reps2.len()];
    for &c in &d.phi {
        if c >= seen.len() || std::mem::replace(&mut seen[c], true) {
            return Err(bad("phi is not a bijection"));
        }
    }
    if !d.g1.is_normal(&d.h1) || !d.g2.is_normal(&d.h2) {
        return Err(bad("kernels are not normal"));
    }
    // phi must respect multiplication of cosets
    for &s in d.g1.generators() {
        for (c, &r) in d.reps1.iter().enumerate() {
            let lhs = d.phi[d.coset1[d.g1.mul(r, s)]];
            let rhs = d.coset2[d.g2.mul(d.reps2[d.phi[c]], d.reps2[d.phi[d.coset1[s]]])];
            if lhs != rhs {
                return Err(bad("phi is not a homomorphism"));
            }
        }
    }
    let e1 = d.g1.element(0).clone();
    let e2 = d.g2.element(0).clone();
    let mut gens: Vec<(A, B)> = Vec::new();
    for h in d.g1.generating_set(&d.h1) {
        gens.push((d.g1.element(h).clone(), e2.clone()));
    }
    for h in d.g2.generating_set(&d.h2) {
        gens.push((e1.clone(), d.g2.element(h).clone()));
    }
    for &s in d.g1.generators() {
        let partner = d.reps2[d.phi[d.coset1[s]]];
        gens.push((d.g1.element(s).clone(), d.g2.element(partner).clone()));
    }
    let mul = |x: &(A, B), y: &(A, B)| (mul1(&x.0, &y.0), mul2(&x.1, &y.1));
    let expected = d.order();
    let t = closure((e1, e2), &gens, mul, expected + 1)?;
    if t.len() != expected {
        return Err(bad("reconstructed order differs from |H1||H2||Q|"));
    }
    Ok(t)
}
