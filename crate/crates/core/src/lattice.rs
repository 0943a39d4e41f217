//! Subrings, ideals, quotients, the Jacobson radical and isomorphisms of small rings.

use std::collections::{BTreeSet, HashSet, VecDeque};

use crate::abelian::abelian_basis;
use crate::bitset::ElemSet;
use crate::error::{Error, Result};
use crate::ring::{ring_from_tables, Elem, FiniteRing};

/// Default largest order handled by the generic enumeration code.
pub const DEFAULT_BOUND: usize = 256;

/// A subset closed under addition, negation and multiplication.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subring {
    members: ElemSet,
}

impl Subring {
    /// Wraps a member set after checking closure.
    pub fn new(r: &FiniteRing, members: ElemSet) -> Result<Subring> {
        if is_subring(r, &members) {
            Ok(Subring { members })
        } else {
            Err(Error::NotClosed("subset is not a subring".into()))
        }
    }

    pub(crate) fn from_closed(members: ElemSet) -> Subring {
        Subring { members }
    }

    pub fn members(&self) -> &ElemSet {
        &self.members
    }

    pub fn into_members(self) -> ElemSet {
        self.members
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.members.contains(x)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_proper(&self, r: &FiniteRing) -> bool {
        self.len() < r.order()
    }
}

/// A two-sided ideal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ideal(Subring);

impl Ideal {
    pub fn new(r: &FiniteRing, members: ElemSet) -> Result<Ideal> {
        if is_ideal(r, &members) {
            Ok(Ideal(Subring { members }))
        } else {
            Err(Error::NotAnIdeal)
        }
    }

    pub fn zero(r: &FiniteRing) -> Ideal {
        Ideal(Subring {
            members: ElemSet::from_iter(r.order(), [0]),
        })
    }

    pub fn whole(r: &FiniteRing) -> Ideal {
        Ideal(Subring {
            members: ElemSet::full(r.order()),
        })
    }

    pub fn as_subring(&self) -> &Subring {
        &self.0
    }
}

impl std::ops::Deref for Ideal {
    type Target = Subring;
    fn deref(&self) -> &Subring {
        &self.0
    }
}

fn check_bound(r: &FiniteRing, bound: usize) -> Result<()> {
    if r.order() > bound {
        Err(Error::BoundExceeded {
            order: r.order(),
            bound,
        })
    } else {
        Ok(())
    }
}

pub fn is_additive_subgroup(r: &FiniteRing, s: &ElemSet) -> bool {
    s.contains(0) && s.iter().all(|a| s.iter().all(|b| s.contains(r.add(a, b))))
}

pub fn is_subring(r: &FiniteRing, s: &ElemSet) -> bool {
    is_additive_subgroup(r, s) && s.iter().all(|a| s.iter().all(|b| s.contains(r.mul(a, b))))
}

pub fn is_ideal(r: &FiniteRing, s: &ElemSet) -> bool {
    is_additive_subgroup(r, s)
        && (0..r.rank()).all(|i| {
            let e = r.basis(i);
            s.iter()
                .all(|a| s.contains(r.mul(e, a)) && s.contains(r.mul(a, e)))
        })
}

/// Smallest subring containing `seed` and `extra`.
pub fn subring_closure(r: &FiniteRing, seed: &ElemSet, extra: &[Elem]) -> ElemSet {
    closure(r, seed, extra, true)
}

/// Smallest additive subgroup containing `seed` and `extra`.
pub fn additive_closure(r: &FiniteRing, seed: &ElemSet, extra: &[Elem]) -> ElemSet {
    closure(r, seed, extra, false)
}

fn closure(r: &FiniteRing, seed: &ElemSet, extra: &[Elem], with_mul: bool) -> ElemSet {
    let mut set = seed.clone();
    set.insert(0);
    let mut members: Vec<Elem> = set.iter().collect();
    for &x in extra {
        if set.insert(x) {
            members.push(x);
        }
    }
    // Seed members are already closed among themselves only if the seed was a
    // subring; restart from position 0 so every pair gets combined.
    let mut i = 0;
    while i < members.len() {
        let z = members[i];
        let nz = r.neg(z);
        if set.insert(nz) {
            members.push(nz);
        }
        for j in 0..=i {
            let w = members[j];
            let push = |v: Elem, set: &mut ElemSet, members: &mut Vec<Elem>| {
                if set.insert(v) {
                    members.push(v);
                }
            };
            push(r.add(z, w), &mut set, &mut members);
            if with_mul {
                push(r.mul(z, w), &mut set, &mut members);
                push(r.mul(w, z), &mut set, &mut members);
            }
        }
        i += 1;
    }
    set
}

/// Two-sided ideal generated by `seeds`.
pub fn ideal_closure(r: &FiniteRing, seeds: &[Elem]) -> ElemSet {
    let mut set = ElemSet::from_iter(r.order(), [0]);
    let mut members = vec![0];
    for &x in seeds {
        if set.insert(x) {
            members.push(x);
        }
    }
    let basis: Vec<Elem> = (0..r.rank()).map(|i| r.basis(i)).collect();
    let mut i = 0;
    while i < members.len() {
        let z = members[i];
        let mut new = vec![r.neg(z)];
        for &e in &basis {
            new.push(r.mul(e, z));
            new.push(r.mul(z, e));
        }
        for j in 0..=i {
            new.push(r.add(z, members[j]));
        }
        for v in new {
            if set.insert(v) {
                members.push(v);
            }
        }
        i += 1;
    }
    set
}

fn lattice_bfs<F>(r: &FiniteRing, grow: F) -> Vec<ElemSet>
where
    F: Fn(&ElemSet, Elem) -> ElemSet,
{
    let start = ElemSet::from_iter(r.order(), [0]);
    let mut seen: HashSet<ElemSet> = HashSet::new();
    seen.insert(start.clone());
    let mut queue = VecDeque::from([start]);
    while let Some(s) = queue.pop_front() {
        for x in r.elements() {
            if s.contains(x) {
                continue;
            }
            let t = grow(&s, x);
            if seen.insert(t.clone()) {
                queue.push_back(t);
            }
        }
    }
    let mut all: Vec<ElemSet> = seen.into_iter().collect();
    all.sort();
    all
}

/// All subrings, including `{0}` and `R`, in canonical bit-set order.
pub fn subrings(r: &FiniteRing, bound: usize) -> Result<Vec<Subring>> {
    check_bound(r, bound)?;
    Ok(lattice_bfs(r, |s, x| subring_closure(r, s, &[x]))
        .into_iter()
        .map(Subring::from_closed)
        .collect())
}

/// All additive subgroups in canonical bit-set order.
pub fn additive_subgroups(r: &FiniteRing, bound: usize) -> Result<Vec<ElemSet>> {
    check_bound(r, bound)?;
    Ok(lattice_bfs(r, |s, x| additive_closure(r, s, &[x])))
}

/// All two-sided ideals in canonical bit-set order.
pub fn ideals(r: &FiniteRing, bound: usize) -> Result<Vec<Ideal>> {
    check_bound(r, bound)?;
    let found = lattice_bfs(r, |s, x| {
        let mut seeds: Vec<Elem> = s.iter().collect();
        seeds.push(x);
        ideal_closure(r, &seeds)
    });
    Ok(found
        .into_iter()
        .map(|m| Ideal(Subring { members: m }))
        .collect())
}

/// Proper subrings that are maximal under inclusion among proper subrings.
pub fn maximal_subrings(r: &FiniteRing, bound: usize) -> Result<Vec<Subring>> {
    let all = subrings(r, bound)?;
    let proper: Vec<&Subring> = all.iter().filter(|s| s.is_proper(r)).collect();
    Ok(proper
        .iter()
        .filter(|s| {
            !proper
                .iter()
                .any(|t| t.len() > s.len() && s.members().is_subset(t.members()))
        })
        .map(|s| (*s).clone())
        .collect())
}

/// The factor ring `R/I` and the projection of every element of `R`.
pub fn quotient(r: &FiniteRing, ideal: &ElemSet) -> Result<(FiniteRing, Vec<Elem>)> {
    if !is_ideal(r, ideal) {
        return Err(Error::NotAnIdeal);
    }
    let n = r.order();
    let mut coset = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for x in r.elements() {
        if coset[x] == usize::MAX {
            let id = reps.len();
            reps.push(x);
            for i in ideal.iter() {
                coset[r.add(x, i)] = id;
            }
        }
    }
    let m = reps.len();
    let mut add_t = vec![0; m * m];
    let mut mul_t = vec![0; m * m];
    for a in 0..m {
        for b in 0..m {
            add_t[a * m + b] = coset[r.add(reps[a], reps[b])];
            mul_t[a * m + b] = coset[r.mul(reps[a], reps[b])];
        }
    }
    let (q, index_of) = ring_from_tables(m, 0, &add_t, &mul_t)?;
    let proj = r.elements().map(|x| index_of[coset[x]]).collect();
    Ok((q, proj))
}

/// Whether `z` has a two-sided quasi-inverse `w`: `z + w + zw = 0 = z + w + wz`.
pub fn is_quasi_regular(r: &FiniteRing, z: Elem) -> bool {
    r.elements().any(|w| {
        let s = r.add(z, w);
        r.add(s, r.mul(z, w)) == 0 && r.add(s, r.mul(w, z)) == 0
    })
}

/// Largest ideal consisting of quasi-regular elements.
pub fn jacobson_radical(r: &FiniteRing, bound: usize) -> Result<Ideal> {
    check_bound(r, bound)?;
    let qr: Vec<bool> = r.elements().map(|z| is_quasi_regular(r, z)).collect();
    let mut seeds = Vec::new();
    for i in ideals(r, bound)? {
        if i.members().iter().all(|z| qr[z]) {
            seeds.extend(i.members().iter());
        }
    }
    let j = ideal_closure(r, &seeds);
    assert!(
        j.iter().all(|z| qr[z]),
        "sum of quasi-regular ideals must be quasi-regular"
    );
    Ok(Ideal(Subring { members: j }))
}

/// A ring isomorphism as a bijection on element indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IsoMap {
    map: Vec<Elem>,
}

impl IsoMap {
    pub fn identity(r: &FiniteRing) -> IsoMap {
        IsoMap {
            map: r.elements().collect(),
        }
    }

    pub fn apply(&self, x: Elem) -> Elem {
        self.map[x]
    }

    pub fn as_slice(&self) -> &[Elem] {
        &self.map
    }

    pub fn image(&self, s: &ElemSet) -> ElemSet {
        ElemSet::from_iter(s.capacity(), s.iter().map(|x| self.map[x]))
    }

    pub fn inverse(&self) -> IsoMap {
        let mut inv = vec![0; self.map.len()];
        for (x, &y) in self.map.iter().enumerate() {
            inv[y] = x;
        }
        IsoMap { map: inv }
    }

    /// Checks that the map is a bijective additive and multiplicative homomorphism.
    pub fn is_isomorphism(&self, from: &FiniteRing, to: &FiniteRing) -> bool {
        if from.order() != to.order() || self.map.len() != from.order() {
            return false;
        }
        let mut hit = vec![false; to.order()];
        for &y in &self.map {
            if y >= to.order() || hit[y] {
                return false;
            }
            hit[y] = true;
        }
        from.elements().all(|a| {
            from.elements().all(|b| {
                self.map[from.add(a, b)] == to.add(self.map[a], self.map[b])
                    && self.map[from.mul(a, b)] == to.mul(self.map[a], self.map[b])
            })
        })
    }
}

/// Isomorphism-invariant data attached to each element, used to prune candidates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Signature {
    additive_order: u32,
    idempotent: bool,
    square_zero: bool,
    left_ideal_size: usize,
    right_ideal_size: usize,
    centralizer_size: usize,
    square_order: u32,
}

fn signatures(r: &FiniteRing) -> Vec<Signature> {
    r.elements()
        .map(|x| {
            let sq = r.mul(x, x);
            let xr = ElemSet::from_iter(r.order(), r.elements().map(|y| r.mul(x, y))).len();
            let rx = ElemSet::from_iter(r.order(), r.elements().map(|y| r.mul(y, x))).len();
            let cent = r.elements().filter(|&y| r.mul(x, y) == r.mul(y, x)).count();
            Signature {
                additive_order: r.additive_order(x),
                idempotent: sq == x,
                square_zero: sq == 0,
                left_ideal_size: xr,
                right_ideal_size: rx,
                centralizer_size: cent,
                square_order: r.additive_order(sq),
            }
        })
        .collect()
}

fn signature_census(sigs: &[Signature]) -> Vec<(String, usize)> {
    let mut counts: std::collections::BTreeMap<String, usize> = Default::default();
    for s in sigs {
        *counts.entry(format!("{s:?}")).or_default() += 1;
    }
    counts.into_iter().collect()
}

struct IsoSearch<'a> {
    from: &'a FiniteRing,
    to: &'a FiniteRing,
    candidates: Vec<Vec<Elem>>,
    /// For each depth m, the basis pairs (i, j) whose product can first be checked at m.
    checks: Vec<Vec<(usize, usize)>>,
    find_all: bool,
    found: Vec<IsoMap>,
}

impl<'a> IsoSearch<'a> {
    fn new(from: &'a FiniteRing, to: &'a FiniteRing, find_all: bool) -> Option<Self> {
        if from.order() != to.order() {
            return None;
        }
        let sf = signatures(from);
        let st = signatures(to);
        if signature_census(&sf) != signature_census(&st)
            || from.has_identity() != to.has_identity()
            || from.annihilator_sizes() != to.annihilator_sizes()
        {
            return None;
        }
        let k = from.rank();
        let candidates: Vec<Vec<Elem>> = (0..k)
            .map(|i| {
                let e = from.basis(i);
                to.elements().filter(|&y| st[y] == sf[e]).collect()
            })
            .collect();
        let mut checks = vec![Vec::new(); k];
        for i in 0..k {
            for j in 0..k {
                let c = from.product_coords(i, j);
                let support = c.iter().rposition(|&x| x != 0).unwrap_or(0);
                checks[i.max(j).max(support)].push((i, j));
            }
        }
        Some(IsoSearch {
            from,
            to,
            candidates,
            checks,
            find_all,
            found: Vec::new(),
        })
    }

    fn combine(&self, images: &[Elem], coords: &[u32]) -> Elem {
        coords.iter().zip(images).fold(0, |acc, (&c, &y)| {
            self.to.add(acc, self.to.scalar(c as u64, y))
        })
    }

    fn run(&mut self) {
        let mut images = Vec::new();
        let span = ElemSet::from_iter(self.to.order(), [0]);
        self.descend(&mut images, span);
    }

    /// Returns true when the search should stop.
    fn descend(&mut self, images: &mut Vec<Elem>, span: ElemSet) -> bool {
        let m = images.len();
        if m == self.from.rank() {
            let map: Vec<Elem> = self
                .from
                .elements()
                .map(|x| self.combine(images, &self.from.coords(x)))
                .collect();
            let iso = IsoMap { map };
            debug_assert!(iso.is_isomorphism(self.from, self.to));
            self.found.push(iso);
            return !self.find_all;
        }
        let d = self.from.moduli()[m] as usize;
        for idx in 0..self.candidates[m].len() {
            let y = self.candidates[m][idx];
            if span.contains(y) {
                continue;
            }
            // Independence: the span must grow by exactly a factor d.
            let mut next = span.clone();
            let mut multiple = 0;
            for _ in 1..d {
                multiple = self.to.add(multiple, y);
                for s in span.iter() {
                    next.insert(self.to.add(s, multiple));
                }
            }
            if next.len() != span.len() * d {
                continue;
            }
            images.push(y);
            let ok = self.checks[m].iter().all(|&(i, j)| {
                let want = self.combine(images, self.from.product_coords(i, j));
                self.to.mul(images[i], images[j]) == want
            });
            if ok && self.descend(images, next) {
                images.pop();
                return true;
            }
            images.pop();
        }
        false
    }
}

/// An isomorphism `R1 -> R2`, if one exists.
pub fn is_isomorphic(r1: &FiniteRing, r2: &FiniteRing, bound: usize) -> Result<Option<IsoMap>> {
    check_bound(r1, bound)?;
    check_bound(r2, bound)?;
    let Some(mut search) = IsoSearch::new(r1, r2, false) else {
        return Ok(None);
    };
    search.run();
    Ok(search.found.pop())
}

/// The full automorphism group, sorted, identity included.
pub fn automorphisms(r: &FiniteRing, bound: usize) -> Result<Vec<IsoMap>> {
    check_bound(r, bound)?;
    let mut search = IsoSearch::new(r, r, true).expect("a ring matches its own invariants");
    search.run();
    let mut all = search.found;
    all.sort();
    Ok(all)
}

/// Invariant that determines a ring up to isomorphism: the lexicographically least
/// structure-constant table over all additive bases of the canonical cyclic type.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    pub moduli: Vec<u32>,
    pub table: Vec<u32>,
}

pub fn canonical_form(r: &FiniteRing, bound: usize) -> Result<CanonicalForm> {
    check_bound(r, bound)?;
    let n = r.order();
    let moduli: Vec<u32> = abelian_basis(n, 0, |a, b| r.add(a, b))
        .into_iter()
        .map(|(_, d)| d)
        .collect();
    let mut best: Option<Vec<u32>> = None;
    let mut images = Vec::new();
    canonical_descend(
        r,
        &moduli,
        &mut images,
        ElemSet::from_iter(n, [0]),
        &mut best,
    );
    Ok(CanonicalForm {
        moduli,
        table: best.unwrap_or_default(),
    })
}

fn canonical_descend(
    r: &FiniteRing,
    moduli: &[u32],
    images: &mut Vec<Elem>,
    span: ElemSet,
    best: &mut Option<Vec<u32>>,
) {
    let m = images.len();
    if m == moduli.len() {
        // Coordinates of every element in the chosen basis.
        let mut coords_of = vec![Vec::new(); r.order()];
        let mut stack: Vec<(Elem, Vec<u32>)> = vec![(0, Vec::new())];
        for (t, &y) in images.iter().enumerate() {
            let mut next = Vec::with_capacity(stack.len() * moduli[t] as usize);
            for (e, c) in &stack {
                let mut acc = *e;
                for v in 0..moduli[t] {
                    let mut cc = c.clone();
                    cc.push(v);
                    next.push((acc, cc));
                    acc = r.add(acc, y);
                }
            }
            stack = next;
        }
        for (e, c) in stack {
            coords_of[e] = c;
        }
        let mut table = Vec::with_capacity(m * m * m);
        for &a in images.iter() {
            for &b in images.iter() {
                table.extend_from_slice(&coords_of[r.mul(a, b)]);
            }
        }
        if best.as_ref().is_none_or(|b| table < *b) {
            *best = Some(table);
        }
        return;
    }
    let d = moduli[m] as usize;
    for y in r.elements() {
        if span.contains(y) || r.additive_order(y) as usize != d {
            continue;
        }
        let mut next = span.clone();
        let mut multiple = 0;
        for _ in 1..d {
            multiple = r.add(multiple, y);
            for s in span.iter() {
                next.insert(r.add(s, multiple));
            }
        }
        if next.len() != span.len() * d {
            continue;
        }
        images.push(y);
        canonical_descend(r, moduli, images, next, best);
        images.pop();
    }
}

/// Orbit representative of a set under a group of automorphisms: the least image.
pub fn orbit_min(auts: &[IsoMap], s: &ElemSet) -> ElemSet {
    auts.iter()
        .map(|a| a.image(s))
        .min()
        .unwrap_or_else(|| s.clone())
}

/// Distinct orbits of `sets` under `auts`, keyed by their least member.
pub fn orbit_representatives(auts: &[IsoMap], sets: &[ElemSet]) -> BTreeSet<ElemSet> {
    sets.iter().map(|s| orbit_min(auts, s)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::make_ring;

    fn z2z2() -> FiniteRing {
        make_ring(
            vec![2, 2],
            vec![vec![vec![1, 0], vec![0, 0]], vec![vec![0, 0], vec![0, 1]]],
        )
        .unwrap()
    }

    fn zero4() -> FiniteRing {
        make_ring(vec![2, 2], vec![vec![vec![0, 0]; 2]; 2]).unwrap()
    }

    fn gf4() -> FiniteRing {
        // basis 1, w with w^2 = w + 1
        make_ring(
            vec![2, 2],
            vec![vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![1, 1]]],
        )
        .unwrap()
    }

    #[test]
    fn subring_counts() {
        assert_eq!(subrings(&z2z2(), DEFAULT_BOUND).unwrap().len(), 5);
        assert_eq!(subrings(&gf4(), DEFAULT_BOUND).unwrap().len(), 3);
        let zero2 = make_ring(vec![2], vec![vec![vec![0]]]).unwrap();
        assert_eq!(subrings(&zero2, DEFAULT_BOUND).unwrap().len(), 2);
    }

    #[test]
    fn zero_ring_ideals_are_subgroups() {
        let r = zero4();
        assert_eq!(ideals(&r, DEFAULT_BOUND).unwrap().len(), 5);
        assert_eq!(additive_subgroups(&r, DEFAULT_BOUND).unwrap().len(), 5);
    }

    #[test]
    fn bound_is_enforced() {
        assert!(matches!(
            subrings(&z2z2(), 2),
            Err(Error::BoundExceeded { .. })
        ));
    }

    #[test]
    fn quotient_by_whole_ring_is_trivial() {
        let r = z2z2();
        let (q, proj) = quotient(&r, &ElemSet::full(4)).unwrap();
        assert_eq!(q.order(), 1);
        assert!(proj.iter().all(|&x| x == 0));
        let not_ideal = ElemSet::from_iter(4, [0, 3]);
        assert!(matches!(quotient(&r, &not_ideal), Err(Error::NotAnIdeal)));
    }

    #[test]
    fn radical_of_semisimple_and_zero_rings() {
        assert_eq!(jacobson_radical(&z2z2(), DEFAULT_BOUND).unwrap().len(), 1);
        assert_eq!(jacobson_radical(&zero4(), DEFAULT_BOUND).unwrap().len(), 4);
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(automorphisms(&z2z2(), DEFAULT_BOUND).unwrap().len(), 2);
        assert_eq!(automorphisms(&zero4(), DEFAULT_BOUND).unwrap().len(), 6);
        assert_eq!(automorphisms(&gf4(), DEFAULT_BOUND).unwrap().len(), 2);
        let auts = automorphisms(&z2z2(), DEFAULT_BOUND).unwrap();
        assert!(auts.contains(&IsoMap::identity(&z2z2())));
    }

    #[test]
    fn isomorphism_and_canonical_form_agree() {
        let rings = [z2z2(), zero4(), gf4(), z2z2().opposite()];
        for a in &rings {
            for b in &rings {
                let iso = is_isomorphic(a, b, DEFAULT_BOUND).unwrap();
                if let Some(m) = &iso {
                    assert!(m.is_isomorphism(a, b));
                }
                let same = canonical_form(a, DEFAULT_BOUND).unwrap()
                    == canonical_form(b, DEFAULT_BOUND).unwrap();
                assert_eq!(iso.is_some(), same);
            }
        }
    }
}
