//! Finite groups as enumerated tables, plus the structural tools built on
//! them: Goursat decomposition, dihedral detection and family recognition.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;
use std::hash::Hash;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub mod family;
pub mod goursat;

pub use family::{fingerprint, is_dihedral, recognize_family, DihedralWitness, FamilyTag, Fingerprint};
pub use goursat::{goursat_decompose, goursat_reconstruct, GoursatData};

pub const DEFAULT_CAP: usize = 20_000;

/// Groups up to this size get a full multiplication table.
const FULL_TABLE_LIMIT: usize = 1500;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("group exceeds the enumeration cap of {cap} elements")]
    GroupTooLarge { cap: usize },
    #[error("projections do not define a subgroup of a product: {reason}")]
    NotAProduct { reason: String },
    #[error("inconsistent Goursat data: {reason}")]
    InconsistentData { reason: String },
    #[error("table is not a group action: {reason}")]
    NotAnAction { reason: String },
}

/// A finite group, enumerated breadth-first from the identity.
///
/// Element 0 is the identity. Element `i > 0` was first reached as
/// `parent[i] * generator[last_gen[i]]`, so its word is the parent's word
/// followed by that generator.
#[derive(Clone)]
pub struct GroupTable<E> {
    elements: Vec<E>,
    index: HashMap<E, usize>,
    generators: Vec<usize>,
    parent: Vec<usize>,
    last_gen: Vec<usize>,
    /// `rmul[i][g]` = elements[i] * generator g.
    rmul: Vec<Vec<usize>>,
    table: Option<Vec<Vec<u32>>>,
    orders: Vec<u64>,
    inverses: Vec<usize>,
}

impl<E: fmt::Debug> fmt::Debug for GroupTable<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GroupTable").field("order", &self.elements.len()).field("generators", &self.generators).finish()
    }
}

/// Enumerate the group generated by `gens` under `mul`.
pub fn closure<E, F>(identity: E, gens: &[E], mul: F, cap: usize) -> Result<GroupTable<E>, GroupError>
where
    E: Clone + Eq + Hash,
    F: Fn(&E, &E) -> E,
{
    let mut elements = vec![identity.clone()];
    let mut index = HashMap::new();
    index.insert(identity, 0usize);
    let mut parent = vec![0usize];
    let mut last_gen = vec![usize::MAX];
    let mut rmul: Vec<Vec<usize>> = Vec::new();
    let mut i = 0;
    while i < elements.len() {
        let mut row = Vec::with_capacity(gens.len());
        for (g, gen) in gens.iter().enumerate() {
            let p = mul(&elements[i], gen);
            let j = match index.get(&p) {
                Some(&j) => j,
                None => {
                    if elements.len() >= cap {
                        return Err(GroupError::GroupTooLarge { cap });
                    }
                    let j = elements.len();
                    index.insert(p.clone(), j);
                    elements.push(p);
                    parent.push(i);
                    last_gen.push(g);
                    j
                }
            };
            row.push(j);
        }
        rmul.push(row);
        i += 1;
    }
    let generators = gens.iter().map(|g| index[g]).collect();
    let mut t = GroupTable {
        elements,
        index,
        generators,
        parent,
        last_gen,
        rmul,
        table: None,
        orders: Vec::new(),
        inverses: Vec::new(),
    };
    t.finish();
    Ok(t)
}

impl<E> GroupTable<E> {
    fn finish(&mut self) {
        let n = self.elements.len();
        if n <= FULL_TABLE_LIMIT {
            let mut table = vec![vec![0u32; n]; n];
            for (i, row) in table.iter_mut().enumerate() {
                row[0] = i as u32;
                for j in 1..n {
                    let p = row[self.parent[j]] as usize;
                    row[j] = self.rmul[p][self.last_gen[j]] as u32;
                }
            }
            self.table = Some(table);
        }
        let mut orders = vec![1u64; n];
        let mut inverses = vec![0usize; n];
        for i in 1..n {
            // walk the powers of i; the last one before the identity is the inverse
            let (mut x, mut k, mut prev) = (i, 1u64, i);
            while x != 0 {
                prev = x;
                x = self.mul(x, i);
                k += 1;
            }
            orders[i] = k;
            inverses[i] = prev;
        }
        self.orders = orders;
        self.inverses = inverses;
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn elements(&self) -> &[E] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &E {
        &self.elements[i]
    }

    /// Indices of the generators, in input order.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    /// Word in generator positions whose product is element `i`.
    pub fn word(&self, mut i: usize) -> Vec<usize> {
        let mut w = Vec::new();
        while i != 0 {
            w.push(self.last_gen[i]);
            i = self.parent[i];
        }
        w.reverse();
        w
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        if let Some(t) = &self.table {
            return t[i][j] as usize;
        }
        if j == 0 {
            return i;
        }
        // i * j = (i * parent(j)) * last generator of j
        self.rmul[self.mul(i, self.parent[j])][self.last_gen[j]]
    }

    pub fn inv(&self, i: usize) -> usize {
        self.inverses[i]
    }

    pub fn element_order(&self, i: usize) -> u64 {
        self.orders[i]
    }

    pub fn conjugate(&self, h: usize, g: usize) -> usize {
        // g⁻¹ h g
        self.mul(self.mul(self.inv(g), h), g)
    }

    pub fn commutes(&self, a: usize, b: usize) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn is_abelian(&self) -> bool {
        let g = &self.generators;
        g.iter().all(|&a| g.iter().all(|&b| self.commutes(a, b)))
    }

    /// Number of elements of each order.
    pub fn order_counts(&self) -> BTreeMap<u64, u64> {
        let mut m = BTreeMap::new();
        for &o in &self.orders {
            *m.entry(o).or_insert(0) += 1;
        }
        m
    }

    pub fn center(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.generators.iter().all(|&g| self.commutes(x, g))).collect()
    }

    /// Sorted element set of the subgroup generated by `seeds`.
    pub fn subgroup_generated(&self, seeds: &[usize]) -> Vec<usize> {
        let seeds: Vec<usize> = seeds.iter().copied().filter(|&s| s != 0).collect();
        let mut seen = vec![false; self.len()];
        seen[0] = true;
        let mut out = vec![0usize];
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &s in &seeds {
                let y = self.mul(x, s);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                    queue.push_back(y);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Smallest normal subgroup containing `seeds`.
    pub fn normal_closure(&self, seeds: &[usize]) -> Vec<usize> {
        let mut set: HashSet<usize> = self.subgroup_generated(seeds).into_iter().collect();
        loop {
            let mut extra = Vec::new();
            for &h in &set {
                for &g in &self.generators {
                    let c = self.conjugate(h, g);
                    if !set.contains(&c) {
                        extra.push(c);
                    }
                }
            }
            if extra.is_empty() {
                let mut v: Vec<usize> = set.into_iter().collect();
                v.sort_unstable();
                return v;
            }
            let mut all: Vec<usize> = set.iter().copied().collect();
            all.extend(extra);
            set = self.subgroup_generated(&self.generating_set(&all)).into_iter().collect();
        }
    }

    pub fn derived_subgroup(&self) -> Vec<usize> {
        let mut comms = Vec::new();
        for &a in &self.generators {
            for &b in &self.generators {
                let c = self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b));
                comms.push(c);
            }
        }
        self.normal_closure(&comms)
    }

    /// A small generating set of the subgroup generated by `set`, chosen greedily.
    pub fn generating_set(&self, set: &[usize]) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut covered: HashSet<usize> = HashSet::from([0]);
        for &x in set {
            if !covered.contains(&x) {
                gens.push(x);
                covered = self.subgroup_generated(&gens).into_iter().collect();
            }
        }
        gens
    }

    pub fn is_subgroup(&self, set: &[usize]) -> bool {
        let s: HashSet<usize> = set.iter().copied().collect();
        s.contains(&0) && set.iter().all(|&a| set.iter().all(|&b| s.contains(&self.mul(a, b))))
    }

    pub fn is_normal(&self, sub: &[usize]) -> bool {
        let s: HashSet<usize> = sub.iter().copied().collect();
        sub.iter().all(|&h| self.generators.iter().all(|&g| s.contains(&self.conjugate(h, g))))
    }

    /// Left cosets xH: returns the coset id of every element and one
    /// representative per coset, in order of first appearance.
    pub fn cosets(&self, sub: &[usize]) -> (Vec<usize>, Vec<usize>) {
        let mut id = vec![usize::MAX; self.len()];
        let mut reps = Vec::new();
        for x in 0..self.len() {
            if id[x] != usize::MAX {
                continue;
            }
            let c = reps.len();
            reps.push(x);
            for &h in sub {
                id[self.mul(x, h)] = c;
            }
        }
        (id, reps)
    }

    /// Quotient by a normal subgroup, keyed by coset id.
    pub fn quotient(&self, normal: &[usize]) -> GroupTable<usize> {
        let (id, reps) = self.cosets(normal);
        let gens: Vec<usize> = self.generators.iter().map(|&g| id[g]).collect();
        closure(id[0], &gens, |&a, &b| id[self.mul(reps[a], reps[b])], self.len() + 1)
            .expect("quotient is no larger than the group")
    }

    /// Re-enumerate with different generators, as an abstract group on
    /// indices of `self`. Used to relabel.
    pub fn regenerate(&self, gens: &[usize]) -> GroupTable<usize> {
        closure(0usize, gens, |&a, &b| self.mul(a, b), self.len() + 1).expect("subgroup is no larger than the group")
    }

    /// All subgroups, as sorted element sets. Intended for small groups.
    pub fn enumerate_subgroups(&self) -> Vec<Vec<usize>> {
        let mut cyclic: Vec<Vec<usize>> = Vec::new();
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        for x in 0..self.len() {
            let c = self.subgroup_generated(&[x]);
            if seen.insert(c.clone()) {
                cyclic.push(c);
            }
        }
        let mut all: Vec<Vec<usize>> = cyclic.clone();
        let mut frontier = cyclic.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for h in &frontier {
                let hs: HashSet<usize> = h.iter().copied().collect();
                for c in &cyclic {
                    let g = c.iter().copied().find(|&x| self.element_order(x) == c.len() as u64).unwrap_or(0);
                    if hs.contains(&g) {
                        continue;
                    }
                    let mut seeds = self.generating_set(h);
                    seeds.push(g);
                    let j = self.subgroup_generated(&seeds);
                    if seen.insert(j.clone()) {
                        all.push(j.clone());
                        next.push(j);
                    }
                }
            }
            frontier = next;
        }
        all.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        all
    }

    /// Element index of a concrete element.
    pub fn index_of(&self, e: &E) -> Option<usize>
    where
        E: Eq + Hash,
    {
        self.index.get(e).copied()
    }
}

/// Result of checking orbit-length divisibility for an action.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisibilityReport {
    /// Lengths of the orbits of the whole group.
    pub orbit_lengths: Vec<usize>,
    /// For each orbit, the sub-orbit (or factor orbit) length used.
    pub divisor_lengths: Vec<usize>,
    pub holds: bool,
}

/// What to compare orbit lengths against.
pub enum DivisibilityTarget<'a> {
    /// A normal subgroup, given as element indices: every orbit splits into
    /// sub-orbits of equal length, whose number divides the index.
    NormalSubgroup(&'a [usize]),
    /// The group sits in A×B acting on X×Y: `point_projection` sends each
    /// point to a point of X, and `factor_action` lists the permutations of
    /// X given by the elements of A. Each orbit length is divisible by the
    /// length of an A-orbit on X.
    ProductFactor { point_projection: &'a [usize], factor_action: &'a [Vec<usize>] },
}

/// `action[g][x]` is the image of point x under element g.
pub fn orbit_divisibility_check<E>(
    group: &GroupTable<E>,
    action: &[Vec<usize>],
    target: DivisibilityTarget<'_>,
) -> Result<DivisibilityReport, GroupError> {
    validate_action(group, action)?;
    let npts = action.first().map_or(0, |r| r.len());
    let orbits = orbits_under(action, (0..group.len()).collect::<Vec<_>>().as_slice(), npts);
    let mut divisor_lengths = Vec::new();
    let mut holds = true;
    match target {
        DivisibilityTarget::NormalSubgroup(sub) => {
            if !group.is_normal(sub) {
                return Err(GroupError::NotAnAction { reason: "subgroup is not normal".into() });
            }
            let sub_orbits = orbits_under(action, sub, npts);
            let index = group.len() / sub.len();
            for orb in &orbits {
                let lens: Vec<usize> =
                    sub_orbits.iter().filter(|s| orb.contains(&s[0])).map(|s| s.len()).collect();
                let all_equal = lens.windows(2).all(|w| w[0] == w[1]);
                let ok = all_equal && index.is_multiple_of(lens.len()) && orb.len() % lens[0] == 0;
                holds &= ok;
                divisor_lengths.push(lens[0]);
            }
        }
        DivisibilityTarget::ProductFactor { point_projection, factor_action } => {
            let xs = factor_action.first().map_or(0, |r| r.len());
            let idx: Vec<usize> = (0..factor_action.len()).collect();
            let factor_orbits = orbits_under(factor_action, &idx, xs);
            for orb in &orbits {
                let image: HashSet<usize> = orb.iter().map(|&p| point_projection[p]).collect();
                let f = factor_orbits.iter().find(|f| image.contains(&f[0])).map_or(0, |f| f.len());
                holds &= f > 0 && orb.len() % f == 0;
                divisor_lengths.push(f);
            }
        }
    }
    Ok(DivisibilityReport { orbit_lengths: orbits.iter().map(|o| o.len()).collect(), divisor_lengths, holds })
}

fn validate_action<E>(group: &GroupTable<E>, action: &[Vec<usize>]) -> Result<(), GroupError> {
    if action.len() != group.len() {
        return Err(GroupError::NotAnAction { reason: "one permutation per element is required".into() });
    }
    let npts = action[0].len();
    if action[0].iter().enumerate().any(|(x, &y)| x != y) {
        return Err(GroupError::NotAnAction { reason: "identity moves a point".into() });
    }
    for &g in group.generators() {
        for h in 0..group.len() {
            let gh = group.mul(g, h);
            for x in 0..npts {
                // (gh)·x = g·(h·x)
                if action[gh][x] != action[g][action[h][x]] {
                    return Err(GroupError::NotAnAction {
                        reason: format!("element {gh} = {g}*{h} disagrees at point {x}"),
                    });
                }
            }
        }
    }
    Ok(())
}

fn orbits_under(action: &[Vec<usize>], elems: &[usize], npts: usize) -> Vec<Vec<usize>> {
    let mut seen = vec![false; npts];
    let mut out = Vec::new();
    for x in 0..npts {
        if seen[x] {
            continue;
        }
        let mut orb: Vec<usize> = elems.iter().map(|&g| action[g][x]).collect();
        orb.sort_unstable();
        orb.dedup();
        for &y in &orb {
            seen[y] = true;
        }
        out.push(orb);
    }
    out
}

/// gcd of a list, 0 for the empty list.
pub fn gcd_all(xs: &[u64]) -> u64 {
    xs.iter().fold(0u64, |a, &b| a.gcd(&b))
}

#[cfg(test)]
pub(crate) mod perm {
    //! Permutation groups used as independent references in tests.

    pub type Perm = Vec<usize>;

    /// (a∘b)(i) = a(b(i))
    pub fn compose(a: &Perm, b: &Perm) -> Perm {
        b.iter().map(|&i| a[i]).collect()
    }

    pub fn id(n: usize) -> Perm {
        (0..n).collect()
    }

    pub fn cycle(n: usize, c: &[usize]) -> Perm {
        let mut p = id(n);
        for k in 0..c.len() {
            p[c[k]] = c[(k + 1) % c.len()];
        }
        p
    }
}
