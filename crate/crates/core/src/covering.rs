//! Good 4-tuples, exact covering numbers and the three-subring criterion.

use serde::{Deserialize, Serialize};

use crate::bitset::ElemSet;
use crate::error::{Error, Result};
use crate::lattice::{
    automorphisms, ideal_closure, ideals, is_isomorphic, is_subring, maximal_subrings, orbit_min,
    quotient, subrings, Ideal, IsoMap, Subring, DEFAULT_BOUND,
};
use crate::ring::{Elem, FiniteRing, RingFile};
use crate::setcover::{min_cover, SearchRecord};

/// Why a triple of subsets fails to be a good tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TupleFailure {
    /// Member `i` (0-based) is not a subring.
    NotSubring(usize),
    NotProper(usize),
    /// The union misses this element.
    NotCovering(Elem),
    /// A nonzero ideal lies inside the common intersection.
    IdealInCore(ElemSet),
    /// Member `i` does not have additive index 2.
    IndexNotTwo(usize),
    /// Some pairwise intersection differs from the triple intersection.
    IntersectionMismatch,
}

impl std::fmt::Display for TupleFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TupleFailure::NotSubring(i) => write!(f, "NotSubring(S{})", i + 1),
            TupleFailure::NotProper(i) => write!(f, "NotProper(S{})", i + 1),
            TupleFailure::NotCovering(x) => write!(f, "NotCovering(element {x})"),
            TupleFailure::IdealInCore(i) => write!(f, "IdealInCore({i:?})"),
            TupleFailure::IndexNotTwo(i) => write!(f, "IndexNotTwo(S{})", i + 1),
            TupleFailure::IntersectionMismatch => write!(f, "IntersectionMismatch"),
        }
    }
}

/// Three proper subrings covering `R` whose intersection holds no nonzero ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodTuple {
    parts: [Subring; 3],
    core: ElemSet,
}

impl GoodTuple {
    pub fn parts(&self) -> &[Subring; 3] {
        &self.parts
    }

    pub fn part(&self, i: usize) -> &Subring {
        &self.parts[i]
    }

    /// `S1 ∩ S2 ∩ S3`.
    pub fn core(&self) -> &ElemSet {
        &self.core
    }

    /// Member sets sorted, so permuted tuples compare equal.
    pub fn sorted_members(&self) -> [ElemSet; 3] {
        let mut m = self.parts.clone().map(Subring::into_members);
        m.sort();
        m
    }
}

/// Checks every good-tuple condition, returning the first violated one.
pub fn is_good_tuple(
    r: &FiniteRing,
    sets: [&ElemSet; 3],
) -> std::result::Result<GoodTuple, TupleFailure> {
    for (i, s) in sets.iter().enumerate() {
        if !is_subring(r, s) {
            return Err(TupleFailure::NotSubring(i));
        }
    }
    for (i, s) in sets.iter().enumerate() {
        if s.len() >= r.order() {
            return Err(TupleFailure::NotProper(i));
        }
    }
    let union = sets[0].union(sets[1]).union(sets[2]);
    if let Some(x) = r.elements().find(|&x| !union.contains(x)) {
        return Err(TupleFailure::NotCovering(x));
    }
    let core = sets[0].intersection(sets[1]).intersection(sets[2]);
    for s in core.iter().filter(|&s| s != 0) {
        let generated = ideal_closure(r, &[s]);
        if generated.is_subset(&core) {
            return Err(TupleFailure::IdealInCore(generated));
        }
    }
    for (i, s) in sets.iter().enumerate() {
        if 2 * s.len() != r.order() {
            return Err(TupleFailure::IndexNotTwo(i));
        }
    }
    for (a, b) in [(0, 1), (0, 2), (1, 2)] {
        if sets[a].intersection(sets[b]) != core {
            return Err(TupleFailure::IntersectionMismatch);
        }
    }
    Ok(GoodTuple {
        parts: sets.map(|s| Subring::from_closed(s.clone())),
        core,
    })
}

/// The decomposition `R = S ⊕ {0, x, y, x+y}` of a good tuple, with the
/// subgroups `S_R = {s : sx ∈ S}`, `S_L = {s : xs ∈ S}` and `T = S_R ∩ S_L`.
#[derive(Clone, Debug)]
pub struct TupleAnalysis {
    /// The tuple reordered so that `x ∈ S1` and `y ∈ S2`.
    pub tuple: GoodTuple,
    pub core: ElemSet,
    pub x: Elem,
    pub y: Elem,
    pub s_right: ElemSet,
    pub s_left: ElemSet,
    pub t: ElemSet,
}

fn coset(r: &FiniteRing, s: &ElemSet, shift: Elem) -> ElemSet {
    ElemSet::from_iter(r.order(), s.iter().map(|a| r.add(a, shift)))
}

/// Picks `x` as the least element outside the core and `y` as the least element
/// outside the member containing `x`, then verifies the decomposition, the
/// coset symmetry and `T = {0}`.
pub fn analyze_tuple(r: &FiniteRing, t: &GoodTuple) -> Result<TupleAnalysis> {
    let fail = |m: String| Err(Error::AnalysisContradiction(m));
    let core = t.core().clone();
    let Some(x) = r.elements().find(|&e| !core.contains(e)) else {
        return fail("core is the whole ring".into());
    };
    let mut parts = t.parts().clone();
    let ix = (0..3)
        .find(|&i| parts[i].contains(x))
        .expect("tuple covers R");
    parts.swap(0, ix);
    let Some(y) = r.elements().find(|&e| !parts[0].contains(e)) else {
        return fail("S1 is the whole ring".into());
    };
    let iy = (1..3)
        .find(|&i| parts[i].contains(y))
        .expect("tuple covers R");
    parts.swap(1, iy);
    let xy = r.add(x, y);
    let mut whole = ElemSet::new(r.order());
    for shift in [0, x, y, xy] {
        let c = coset(r, &core, shift);
        if whole.intersection_len(&c) != 0 {
            return fail(format!("cosets of S by 0, {x}, {y}, {xy} overlap"));
        }
        whole.union_with(&c);
    }
    if whole.len() != r.order() {
        return fail("S + {0, x, y, x+y} is not all of R".into());
    }
    for (i, shift) in [x, y, xy].into_iter().enumerate() {
        if *parts[i].members() != core.union(&coset(r, &core, shift)) {
            return fail(format!("S{} is not S + {{0, {shift}}}", i + 1));
        }
    }
    let in_core = |e: Elem| core.contains(e);
    for s in core.iter() {
        if in_core(r.mul(s, x)) != in_core(r.mul(s, y)) {
            return fail(format!("sx and sy disagree for s = {s}"));
        }
        if in_core(r.mul(x, s)) != in_core(r.mul(y, s)) {
            return fail(format!("xs and ys disagree for s = {s}"));
        }
    }
    let s_right = ElemSet::from_iter(r.order(), core.iter().filter(|&s| in_core(r.mul(s, x))));
    let s_left = ElemSet::from_iter(r.order(), core.iter().filter(|&s| in_core(r.mul(x, s))));
    for (name, g) in [("S_R", &s_right), ("S_L", &s_left)] {
        if !crate::lattice::is_additive_subgroup(r, g) || 2 * g.len() < core.len() {
            return fail(format!("{name} is not a subgroup of index at most 2 in S"));
        }
    }
    let t_set = s_right.intersection(&s_left);
    if t_set.len() != 1 {
        return fail(format!("T has {} elements", t_set.len()));
    }
    let tuple = GoodTuple {
        parts,
        core: core.clone(),
    };
    Ok(TupleAnalysis {
        tuple,
        core,
        x,
        y,
        s_right,
        s_left,
        t: t_set,
    })
}

/// Subrings whose additive group has index 2.
pub fn index_two_subrings(r: &FiniteRing, bound: usize) -> Result<Vec<Subring>> {
    Ok(subrings(r, bound)?
        .into_iter()
        .filter(|s| 2 * s.len() == r.order())
        .collect())
}

/// Every good triple (as an unordered triple) drawn from `candidates`.
pub fn good_triples_among(r: &FiniteRing, candidates: &[ElemSet]) -> Vec<GoodTuple> {
    let mut out = Vec::new();
    let n = candidates.len();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if let Ok(t) = is_good_tuple(r, [&candidates[a], &candidates[b], &candidates[c]]) {
                    out.push(t);
                }
            }
        }
    }
    out
}

/// Least image of the sorted member triple under `auts`.
pub fn tuple_orbit_key(auts: &[IsoMap], t: &GoodTuple) -> [ElemSet; 3] {
    auts.iter()
        .map(|a| {
            let mut m = t.parts().clone().map(|s| a.image(s.members()));
            m.sort();
            m
        })
        .min()
        .unwrap_or_else(|| t.sorted_members())
}

/// Representatives of `tuples` up to permutation and `auts`, keyed first by the
/// orbit of the core and falling back to whole-tuple orbits on a shared core.
pub fn dedup_tuples(auts: &[IsoMap], tuples: Vec<GoodTuple>) -> Vec<GoodTuple> {
    let mut kept: Vec<(ElemSet, GoodTuple)> = Vec::new();
    for t in tuples {
        let key = orbit_min(auts, t.core());
        let same_core: Vec<&GoodTuple> = kept
            .iter()
            .filter(|(k, _)| *k == key)
            .map(|(_, g)| g)
            .collect();
        let fresh = same_core.is_empty() || {
            let tk = tuple_orbit_key(auts, &t);
            same_core.iter().all(|g| tuple_orbit_key(auts, g) != tk)
        };
        if fresh {
            kept.push((key, t));
        }
    }
    kept.sort_by(|a, b| a.0.cmp(&b.0));
    kept.into_iter().map(|(_, t)| t).collect()
}

/// Good tuples of `R` up to permutation and automorphism; empty iff `R` is not good.
pub fn good_tuples(r: &FiniteRing, bound: usize) -> Result<Vec<GoodTuple>> {
    let cands: Vec<ElemSet> = index_two_subrings(r, bound)?
        .into_iter()
        .map(Subring::into_members)
        .collect();
    let found = good_triples_among(r, &cands);
    if found.is_empty() {
        return Ok(found);
    }
    let auts = automorphisms(r, bound)?;
    Ok(dedup_tuples(&auts, found))
}

/// Every good triple found by testing all 3-subsets of proper subrings, without
/// assuming the index-2 condition.
pub fn good_triples_exhaustive(r: &FiniteRing, bound: usize) -> Result<Vec<GoodTuple>> {
    let cands: Vec<ElemSet> = subrings(r, bound)?
        .into_iter()
        .filter(|s| s.is_proper(r))
        .map(Subring::into_members)
        .collect();
    Ok(good_triples_among(r, &cands))
}

/// Lifts a tuple on `R` to the unitalization: each member gains the new identity.
pub fn unitalize_tuple(r: &FiniteRing, sets: [&ElemSet; 3]) -> (FiniteRing, [ElemSet; 3]) {
    let (star, embed, u) = r.unitalize();
    let lift = |s: &ElemSet| {
        let mut out = ElemSet::new(star.order());
        for a in s.iter() {
            out.insert(embed[a]);
            out.insert(star.add(embed[a], u));
        }
        out
    };
    let lifted = sets.map(lift);
    (star, lifted)
}

/// A minimum cover by proper subrings together with the exhausted smaller sizes.
#[derive(Clone, Debug)]
pub struct CoverSolution {
    pub members: Vec<Subring>,
    pub log: Vec<SearchRecord>,
}

impl CoverSolution {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// The covering number of `R`, by exact search over maximal subrings.
pub fn sigma_exact(r: &FiniteRing, bound: usize) -> Result<CoverSolution> {
    let maxes = maximal_subrings(r, bound)?;
    let sets: Vec<ElemSet> = maxes.iter().map(|s| s.members().clone()).collect();
    let mut union = ElemSet::new(r.order());
    for s in &sets {
        union.union_with(s);
    }
    if let Some(x) = r.elements().find(|&x| !union.contains(x)) {
        return Err(Error::NotCoverable(x));
    }
    let cover = min_cover(r.order(), &sets).expect("union checked");
    Ok(CoverSolution {
        members: cover.chosen.iter().map(|&i| maxes[i].clone()).collect(),
        log: cover.log,
    })
}

/// Two proper subrings whose union is `R`, if any.
pub fn two_cover(r: &FiniteRing, bound: usize) -> Result<Option<[Subring; 2]>> {
    let maxes = maximal_subrings(r, bound)?;
    for (i, a) in maxes.iter().enumerate() {
        for b in &maxes[i..] {
            if a.members().union(b.members()).len() == r.order() {
                return Ok(Some([a.clone(), b.clone()]));
            }
        }
    }
    Ok(None)
}

/// Three proper subrings whose union is `R`, if any. Members are maximal.
pub fn three_cover(r: &FiniteRing, bound: usize) -> Result<Option<[Subring; 3]>> {
    let maxes = maximal_subrings(r, bound)?;
    let n = maxes.len();
    for a in 0..n {
        for b in a..n {
            let ab = maxes[a].members().union(maxes[b].members());
            for c in b..n {
                if ab.union(maxes[c].members()).len() == r.order() {
                    return Ok(Some([maxes[a].clone(), maxes[b].clone(), maxes[c].clone()]));
                }
            }
        }
    }
    Ok(None)
}

/// An ideal whose quotient is isomorphic to one of the small good rings.
#[derive(Clone, Debug)]
pub struct QuotientWitness {
    pub ideal: Ideal,
    /// Catalog id of the matching good ring.
    pub example: u8,
    /// Isomorphism from the quotient onto the catalog ring.
    pub iso: IsoMap,
}

#[derive(Clone, Debug)]
pub struct Theorem2Verdict {
    pub direct: Option<[Subring; 3]>,
    pub via_quotient: Option<QuotientWitness>,
}

impl Theorem2Verdict {
    pub fn coverable(&self) -> bool {
        self.direct.is_some()
    }

    pub fn agree(&self) -> bool {
        self.direct.is_some() == self.via_quotient.is_some()
    }
}

/// Ideals `I` (including `{0}`) with `R/I` isomorphic to one of `targets`.
pub fn good_quotients(
    r: &FiniteRing,
    bound: usize,
    targets: &[(u8, FiniteRing)],
) -> Result<Vec<QuotientWitness>> {
    let mut out = Vec::new();
    for ideal in ideals(r, bound)? {
        let index = r.order() / ideal.len();
        if !targets.iter().any(|(_, t)| t.order() == index) {
            continue;
        }
        let (q, _) = quotient(r, ideal.members())?;
        for (id, target) in targets.iter().filter(|(_, t)| t.order() == index) {
            if let Some(iso) = is_isomorphic(&q, target, bound)? {
                out.push(QuotientWitness {
                    ideal: ideal.clone(),
                    example: *id,
                    iso,
                });
                break;
            }
        }
    }
    Ok(out)
}

/// Decides whether `R` is a union of three proper subrings, once by direct
/// search and once by looking for a quotient isomorphic to a catalog ring
/// 2.1, 2.2, 2.3, 2.4 or 2.6.
pub fn theorem2_decide(r: &FiniteRing, bound: usize) -> Result<Theorem2Verdict> {
    let direct = three_cover(r, bound)?;
    let targets = crate::catalog::quotient_targets();
    let via_quotient = good_quotients(r, bound, targets)?.into_iter().next();
    Ok(Theorem2Verdict {
        direct,
        via_quotient,
    })
}

/// Kind of a subring certificate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    GoodTuple,
    Cover,
}

/// Offline-checkable record of a good tuple or a minimum cover.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RingCertificate {
    pub kind: CertificateKind,
    pub ring: RingFile,
    pub subrings: Vec<Vec<usize>>,
    pub checks: Vec<(String, bool)>,
    #[serde(default)]
    pub search_log: Vec<SearchRecord>,
}

fn check_list(
    r: &FiniteRing,
    kind: CertificateKind,
    sets: &[ElemSet],
    log: &[SearchRecord],
) -> Vec<(String, bool)> {
    let mut checks = vec![
        (
            "subrings".to_string(),
            sets.iter().all(|s| is_subring(r, s)),
        ),
        (
            "proper".to_string(),
            sets.iter().all(|s| s.len() < r.order()),
        ),
    ];
    let mut union = ElemSet::new(r.order());
    for s in sets {
        union.union_with(s);
    }
    checks.push(("covering".to_string(), union.len() == r.order()));
    match kind {
        CertificateKind::GoodTuple => {
            let good = sets.len() == 3 && is_good_tuple(r, [&sets[0], &sets[1], &sets[2]]).is_ok();
            checks.push(("good_tuple".to_string(), good));
        }
        CertificateKind::Cover => {
            let exhausted = log
                .iter()
                .filter(|l| l.size < sets.len())
                .all(|l| !l.feasible)
                && log.iter().any(|l| l.size == sets.len() && l.feasible);
            checks.push(("search_log".to_string(), exhausted));
            if r.order() <= DEFAULT_BOUND {
                let minimal = sigma_exact(r, DEFAULT_BOUND)
                    .map(|c| c.size() == sets.len())
                    .unwrap_or(false);
                checks.push(("minimal".to_string(), minimal));
            }
        }
    }
    checks
}

impl RingCertificate {
    pub fn for_tuple(r: &FiniteRing, t: &GoodTuple) -> RingCertificate {
        let sets: Vec<ElemSet> = t.parts().iter().map(|s| s.members().clone()).collect();
        RingCertificate {
            kind: CertificateKind::GoodTuple,
            ring: r.to_file(),
            subrings: sets.iter().map(ElemSet::to_vec).collect(),
            checks: check_list(r, CertificateKind::GoodTuple, &sets, &[]),
            search_log: Vec::new(),
        }
    }

    pub fn for_cover(r: &FiniteRing, c: &CoverSolution) -> RingCertificate {
        let sets: Vec<ElemSet> = c.members.iter().map(|s| s.members().clone()).collect();
        RingCertificate {
            kind: CertificateKind::Cover,
            ring: r.to_file(),
            subrings: sets.iter().map(ElemSet::to_vec).collect(),
            checks: check_list(r, CertificateKind::Cover, &sets, &c.log),
            search_log: c.log.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificate serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<RingCertificate> {
        Ok(serde_json::from_str(text)?)
    }

    /// Recomputes every check from the stored ring and member sets, ignoring the
    /// recorded outcomes.
    pub fn reverify(&self) -> Result<Vec<(String, bool)>> {
        let r = FiniteRing::from_file(&self.ring)?;
        let mut sets = Vec::new();
        for members in &self.subrings {
            if let Some(&bad) = members.iter().find(|&&x| x >= r.order()) {
                return Err(Error::Format(format!("element index {bad} out of range")));
            }
            sets.push(ElemSet::from_iter(r.order(), members.iter().copied()));
        }
        Ok(check_list(&r, self.kind, &sets, &self.search_log))
    }
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

    fn gf4() -> FiniteRing {
        // basis 1, w with w^2 = w + 1
        make_ring(
            vec![2, 2],
            vec![vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![1, 1]]],
        )
        .unwrap()
    }

    #[test]
    fn klein_ring_has_one_good_tuple() {
        let r = z2z2();
        let tuples = good_tuples(&r, DEFAULT_BOUND).unwrap();
        assert_eq!(tuples.len(), 1);
        let a = analyze_tuple(&r, &tuples[0]).unwrap();
        assert_eq!(a.core.len(), 1);
        assert_eq!(a.t.len(), 1);
        assert_eq!(sigma_exact(&r, DEFAULT_BOUND).unwrap().size(), 3);
    }

    #[test]
    fn gf4_is_not_coverable() {
        let r = gf4();
        assert!(good_tuples(&r, DEFAULT_BOUND).unwrap().is_empty());
        assert!(matches!(
            sigma_exact(&r, DEFAULT_BOUND),
            Err(Error::NotCoverable(_))
        ));
    }

    #[test]
    fn whole_ring_member_is_not_proper() {
        let r = z2z2();
        let full = ElemSet::full(4);
        let a = ElemSet::from_iter(4, [0, 1]);
        assert_eq!(
            is_good_tuple(&r, [&a, &a, &full]).unwrap_err(),
            TupleFailure::NotProper(2)
        );
    }

    #[test]
    fn certificate_round_trip() {
        let r = z2z2();
        let t = &good_tuples(&r, DEFAULT_BOUND).unwrap()[0];
        let cert = RingCertificate::for_tuple(&r, t);
        let back = RingCertificate::from_json(&cert.to_json()).unwrap();
        assert_eq!(back, cert);
        assert!(back.reverify().unwrap().iter().all(|(_, ok)| *ok));
        let cover = sigma_exact(&r, DEFAULT_BOUND).unwrap();
        let cc = RingCertificate::for_cover(&r, &cover);
        assert!(cc.reverify().unwrap().iter().all(|(_, ok)| *ok));
    }
}
