//! The ten good rings, built as explicit subrings of matrix rings over `Z/m`.
//!
//! Entry `id` (1..=10) is the ring numbered `2.id` in the classification, with its
//! good tuple. Every entry is converted to structure constants from its matrices.

use std::fmt;
use std::sync::OnceLock;

use crate::bitset::ElemSet;
use crate::covering::{good_tuples, is_good_tuple, GoodTuple};
use crate::lattice::{ideal_closure, ideals, is_ideal, is_isomorphic, quotient, DEFAULT_BOUND};
use crate::ring::{ring_from_elements, Elem, FiniteRing};

/// Square matrix over `Z/m`, row-major.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZMat {
    pub n: usize,
    pub m: u32,
    pub e: Vec<u32>,
}

impl ZMat {
    pub fn zero(n: usize, m: u32) -> ZMat {
        ZMat {
            n,
            m,
            e: vec![0; n * n],
        }
    }

    pub fn from_rows(m: u32, rows: &[&[u32]]) -> ZMat {
        let n = rows.len();
        let e = rows.iter().flat_map(|r| r.iter().map(|&v| v % m)).collect();
        ZMat { n, m, e }
    }

    /// Matrix with the single entry `(i, j)` set to 1.
    pub fn unit(n: usize, m: u32, i: usize, j: usize) -> ZMat {
        let mut z = ZMat::zero(n, m);
        z.e[i * n + j] = 1;
        z
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.e[i * self.n + j]
    }

    pub fn add(&self, o: &ZMat) -> ZMat {
        let e = self
            .e
            .iter()
            .zip(&o.e)
            .map(|(a, b)| (a + b) % self.m)
            .collect();
        ZMat {
            n: self.n,
            m: self.m,
            e,
        }
    }

    pub fn mul(&self, o: &ZMat) -> ZMat {
        let n = self.n;
        let mut e = vec![0u32; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    e[i * n + j] = (e[i * n + j] + a * o.get(k, j)) % self.m;
                }
            }
        }
        ZMat { n, m: self.m, e }
    }
}

impl fmt::Debug for ZMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.n {
            if i > 0 {
                write!(f, ",")?;
            }
            let row: Vec<String> = (0..self.n).map(|j| self.get(i, j).to_string()).collect();
            write!(f, "[{}]", row.join(","))?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for ZMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// One of the ten good rings.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub id: u8,
    pub ring: FiniteRing,
    pub tuple: GoodTuple,
    /// Ambient matrix ring, e.g. `M_3(Z/2)`.
    pub ambient: &'static str,
    /// Shape of the member matrices and the restrictions defining `R`, `S1`, `S2`, `S3`.
    pub description: &'static str,
    /// The matrix for each element index of `ring`.
    pub matrices: Vec<ZMat>,
    pub unital: bool,
    pub commutative: bool,
}

impl CatalogEntry {
    /// Element index of a member matrix.
    pub fn index_of(&self, m: &ZMat) -> Option<Elem> {
        self.matrices.iter().position(|x| x == m)
    }

    /// `2.id`
    pub fn label(&self) -> String {
        format!("2.{}", self.id)
    }
}

type Pred = fn(&[u32]) -> bool;

struct Family {
    id: u8,
    ambient: &'static str,
    description: &'static str,
    params: usize,
    build: fn(&[u32]) -> ZMat,
    restriction: Pred,
    parts: [Pred; 3],
    unital: bool,
    commutative: bool,
}

fn assignments(params: usize) -> impl Iterator<Item = Vec<u32>> {
    (0u32..1 << params).map(move |mask| (0..params).map(|i| mask >> i & 1).collect())
}

fn finish(
    id: u8,
    ambient: &'static str,
    description: &'static str,
    mats: Vec<ZMat>,
    parts: [Vec<usize>; 3],
    unital: bool,
    commutative: bool,
) -> CatalogEntry {
    let zero = ZMat::zero(mats[0].n, mats[0].m);
    let (ring, index) =
        ring_from_elements(&mats, &zero, ZMat::add, ZMat::mul).expect("catalog ring closes");
    let mut matrices = vec![zero; ring.order()];
    for (pos, m) in mats.iter().enumerate() {
        matrices[index[pos]] = m.clone();
    }
    let sets = parts.map(|ps| ElemSet::from_iter(ring.order(), ps.into_iter().map(|p| index[p])));
    let tuple = match is_good_tuple(&ring, [&sets[0], &sets[1], &sets[2]]) {
        Ok(t) => t,
        Err(e) => panic!("catalog tuple 2.{id} is not good: {e}"),
    };
    CatalogEntry {
        id,
        ring,
        tuple,
        ambient,
        description,
        matrices,
        unital,
        commutative,
    }
}

fn from_family(f: &Family) -> CatalogEntry {
    let params: Vec<Vec<u32>> = assignments(f.params)
        .filter(|p| (f.restriction)(p))
        .collect();
    let mats: Vec<ZMat> = params.iter().map(|p| (f.build)(p)).collect();
    let parts = f
        .parts
        .map(|pred| (0..params.len()).filter(|&i| pred(&params[i])).collect());
    finish(
        f.id,
        f.ambient,
        f.description,
        mats,
        parts,
        f.unital,
        f.commutative,
    )
}

/// Four listed matrices; the members of the tuple are the subrings `{0, m}`.
fn from_list(
    id: u8,
    ambient: &'static str,
    description: &'static str,
    m: u32,
    rows: [&[&[u32]]; 4],
    unital: bool,
    commutative: bool,
) -> CatalogEntry {
    let mats: Vec<ZMat> = rows.iter().map(|r| ZMat::from_rows(m, r)).collect();
    let parts = [vec![0, 1], vec![0, 2], vec![0, 3]];
    finish(id, ambient, description, mats, parts, unital, commutative)
}

fn m3(rows: [[u32; 3]; 3]) -> ZMat {
    ZMat::from_rows(2, &[&rows[0], &rows[1], &rows[2]])
}

fn m4(rows: [[u32; 4]; 4]) -> ZMat {
    ZMat::from_rows(2, &[&rows[0], &rows[1], &rows[2], &rows[3]])
}

fn any(_: &[u32]) -> bool {
    true
}

fn build_all() -> Vec<CatalogEntry> {
    let mut out = vec![
        from_list(
            1,
            "M_2(Z/2)",
            "{0, I, diag(1,0), diag(0,1)}; S_i = {0, m} for each nonzero m",
            2,
            [
                &[&[0, 0], &[0, 0]],
                &[&[1, 0], &[0, 1]],
                &[&[1, 0], &[0, 0]],
                &[&[0, 0], &[0, 1]],
            ],
            true,
            true,
        ),
        from_list(
            2,
            "M_3(Z/2)",
            "{0, E21, E31, E21+E31}; S_i = {0, m} for each nonzero m",
            2,
            [
                &[&[0, 0, 0], &[0, 0, 0], &[0, 0, 0]],
                &[&[0, 0, 0], &[1, 0, 0], &[0, 0, 0]],
                &[&[0, 0, 0], &[0, 0, 0], &[1, 0, 0]],
                &[&[0, 0, 0], &[1, 0, 0], &[1, 0, 0]],
            ],
            false,
            true,
        ),
        from_list(
            3,
            "M_2(Z/2)",
            "{0, E12, E11, E11+E12}; S_i = {0, m} for each nonzero m",
            2,
            [
                &[&[0, 0], &[0, 0]],
                &[&[0, 1], &[0, 0]],
                &[&[1, 0], &[0, 0]],
                &[&[1, 1], &[0, 0]],
            ],
            false,
            false,
        ),
        from_list(
            4,
            "M_2(Z/2)",
            "{0, E12, E22, E12+E22}; S_i = {0, m} for each nonzero m",
            2,
            [
                &[&[0, 0], &[0, 0]],
                &[&[0, 1], &[0, 0]],
                &[&[0, 0], &[0, 1]],
                &[&[0, 1], &[0, 1]],
            ],
            false,
            false,
        ),
    ];
    let families = [
        Family {
            id: 5,
            ambient: "M_3(Z/2)",
            description: "diag(a,b,c); S1: a+b=0, S2: a+c=0, S3: b+c=0",
            params: 3,
            build: |p| m3([[p[0], 0, 0], [0, p[1], 0], [0, 0, p[2]]]),
            restriction: any,
            parts: [|p| p[0] == p[1], |p| p[0] == p[2], |p| p[1] == p[2]],
            unital: true,
            commutative: true,
        },
        Family {
            id: 6,
            ambient: "M_3(Z/2)",
            description: "[[a,0,0],[b,a,0],[c,0,a]]; S1: b=0, S2: c=0, S3: b+c=0",
            params: 3,
            build: |p| m3([[p[0], 0, 0], [p[1], p[0], 0], [p[2], 0, p[0]]]),
            restriction: any,
            parts: [|p| p[1] == 0, |p| p[2] == 0, |p| p[1] == p[2]],
            unital: true,
            commutative: true,
        },
        Family {
            id: 7,
            ambient: "M_2(Z/2)",
            description: "[[a,c],[0,b]]; S1: c=0, S2: a+b=0, S3: a+b+c=0",
            params: 3,
            build: |p| ZMat::from_rows(2, &[&[p[0], p[2]], &[0, p[1]]]),
            restriction: any,
            parts: [
                |p| p[2] == 0,
                |p| p[0] == p[1],
                |p| (p[0] + p[1] + p[2]) % 2 == 0,
            ],
            unital: true,
            commutative: false,
        },
        Family {
            id: 8,
            ambient: "M_4(Z/2)",
            description:
                "[[0,b,c,d],[0,e,0,0],[0,0,e,0],[0,0,0,e]], b+e=0; S1: c=0, S2: d=0, S3: c+d=0",
            params: 4,
            build: |p| {
                m4([
                    [0, p[0], p[1], p[2]],
                    [0, p[3], 0, 0],
                    [0, 0, p[3], 0],
                    [0, 0, 0, p[3]],
                ])
            },
            restriction: |p| p[0] == p[3],
            parts: [|p| p[1] == 0, |p| p[2] == 0, |p| p[1] == p[2]],
            unital: false,
            commutative: false,
        },
        Family {
            id: 9,
            ambient: "M_4(Z/2)",
            description:
                "[[0,0,0,0],[b,e,0,0],[c,0,e,0],[d,0,0,e]], b+e=0; S1: c=0, S2: d=0, S3: c+d=0",
            params: 4,
            build: |p| {
                m4([
                    [0, 0, 0, 0],
                    [p[0], p[3], 0, 0],
                    [p[1], 0, p[3], 0],
                    [p[2], 0, 0, p[3]],
                ])
            },
            restriction: |p| p[0] == p[3],
            parts: [|p| p[1] == 0, |p| p[2] == 0, |p| p[1] == p[2]],
            unital: false,
            commutative: false,
        },
        Family {
            id: 10,
            ambient: "M_4(Z/2)",
            description:
                "[[a,0,0,0],[b,e,0,0],[c,0,e,0],[d,0,0,e]], a+b+e=0; S1: c=0, S2: d=0, S3: c+d=0",
            params: 5,
            build: |p| {
                m4([
                    [p[0], 0, 0, 0],
                    [p[1], p[4], 0, 0],
                    [p[2], 0, p[4], 0],
                    [p[3], 0, 0, p[4]],
                ])
            },
            restriction: |p| (p[0] + p[1] + p[4]) % 2 == 0,
            parts: [|p| p[2] == 0, |p| p[3] == 0, |p| p[2] == p[3]],
            unital: true,
            commutative: false,
        },
    ];
    out.extend(families.iter().map(from_family));
    out
}

/// All ten entries, ordered by id.
pub fn all() -> &'static [CatalogEntry] {
    static CATALOG: OnceLock<Vec<CatalogEntry>> = OnceLock::new();
    CATALOG.get_or_init(build_all)
}

/// Entry `id`, for `1 <= id <= 10`.
pub fn example(id: u8) -> Option<&'static CatalogEntry> {
    all().get(usize::from(id).checked_sub(1)?)
}

/// The zero ring of order 4 realised as `{0, 2E11, 2E22, 2I}` in `M_2(Z/4)`.
pub fn example2_z4() -> (FiniteRing, Vec<ZMat>) {
    let rows: [&[&[u32]]; 4] = [
        &[&[0, 0], &[0, 0]],
        &[&[2, 0], &[0, 0]],
        &[&[0, 0], &[0, 2]],
        &[&[2, 0], &[0, 2]],
    ];
    let mats: Vec<ZMat> = rows.iter().map(|r| ZMat::from_rows(4, r)).collect();
    let (ring, _) = ring_from_elements(&mats, &mats[0], ZMat::add, ZMat::mul).expect("closed");
    (ring, mats)
}

/// The good rings a three-cover must map onto: entries 1, 2, 3, 4 and 6.
pub fn quotient_targets() -> &'static [(u8, FiniteRing)] {
    static TARGETS: OnceLock<Vec<(u8, FiniteRing)>> = OnceLock::new();
    TARGETS.get_or_init(|| {
        [1u8, 2, 3, 4, 6]
            .iter()
            .map(|&id| (id, example(id).expect("catalog id").ring.clone()))
            .collect()
    })
}

/// Outcome of one factor-ring claim.
#[derive(Clone, Debug)]
pub struct ClaimResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn quotient_claim(source: u8, target: u8, gens: &[ZMat], ideal_order: usize) -> ClaimResult {
    let name = format!("2.{source} -> 2.{target}");
    let e = example(source).expect("catalog id");
    let seeds: Option<Vec<Elem>> = gens.iter().map(|g| e.index_of(g)).collect();
    let Some(seeds) = seeds else {
        return ClaimResult {
            name,
            passed: false,
            detail: "generator not in ring".into(),
        };
    };
    let ideal = ideal_closure(&e.ring, &seeds);
    let members: Vec<String> = ideal.iter().map(|i| e.matrices[i].to_string()).collect();
    let detail_ideal = format!("I = {{{}}}", members.join(", "));
    if ideal.len() != ideal_order || !is_ideal(&e.ring, &ideal) {
        let detail = format!(
            "{detail_ideal} has order {}, expected {ideal_order}",
            ideal.len()
        );
        return ClaimResult {
            name,
            passed: false,
            detail,
        };
    }
    let (q, _) = quotient(&e.ring, &ideal).expect("ideal checked");
    let target_ring = &example(target).expect("catalog id").ring;
    let iso = is_isomorphic(&q, target_ring, DEFAULT_BOUND).expect("small rings");
    let passed = iso.is_some();
    let verdict = if passed {
        "R/I is isomorphic to the target"
    } else {
        "R/I is not isomorphic to the target"
    };
    ClaimResult {
        name,
        passed,
        detail: format!("{detail_ideal}; {verdict}"),
    }
}

fn no_good_factor_claim(id: u8) -> ClaimResult {
    let e = example(id).expect("catalog id");
    let mut checked = 0;
    let mut good = Vec::new();
    for ideal in ideals(&e.ring, DEFAULT_BOUND).expect("small ring") {
        if ideal.len() == 1 {
            continue;
        }
        checked += 1;
        let (q, _) = quotient(&e.ring, ideal.members()).expect("ideal");
        if !good_tuples(&q, DEFAULT_BOUND)
            .expect("small ring")
            .is_empty()
        {
            good.push(ideal.members().to_vec());
        }
    }
    ClaimResult {
        name: format!("2.{id} has no good proper factor ring"),
        passed: good.is_empty(),
        detail: format!("{checked} nonzero ideals checked, good quotients from {good:?}"),
    }
}

/// Checks the six factor-ring claims: 2.5, 2.7, 2.10 onto 2.1, 2.8 onto 2.4,
/// 2.9 onto 2.3, and that 2.6 has no good proper factor ring.
pub fn verify_section6() -> Vec<ClaimResult> {
    let e = |n: usize, i: usize, j: usize| ZMat::unit(n, 2, i, j);
    vec![
        quotient_claim(5, 1, &[e(3, 0, 0)], 2),
        quotient_claim(7, 1, &[e(2, 0, 1)], 2),
        quotient_claim(8, 4, &[e(4, 0, 3)], 2),
        quotient_claim(9, 3, &[e(4, 3, 0)], 2),
        quotient_claim(10, 1, &[e(4, 2, 0), e(4, 3, 0)], 4),
        no_good_factor_claim(6),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_and_flags() {
        let orders = [4, 4, 4, 4, 8, 8, 8, 8, 8, 16];
        for (e, &o) in all().iter().zip(&orders) {
            assert_eq!(e.ring.order(), o, "{}", e.label());
            assert_eq!(e.ring.has_identity(), e.unital, "{}", e.label());
            assert_eq!(e.ring.is_commutative(), e.commutative, "{}", e.label());
        }
        assert!(example(0).is_none());
        assert!(example(11).is_none());
    }

    #[test]
    fn section6_claims_pass() {
        for c in verify_section6() {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }
}
