//! Maximal subrings and minimal covers of the full matrix ring `M_n(q)`.
//!
//! The maximal subrings are the stabilizers `M(U)` of nontrivial proper
//! subspaces and the `GL(n,q)`-conjugates of `M_{n/a}(q^a)` for primes `a | n`.
//! A conjugate is represented by a matrix `z = g⁻¹ D g`, where `D` is block
//! diagonal with companion blocks of a primitive polynomial of degree `a`; its
//! members are exactly the matrices commuting with `z`.

use std::collections::{HashMap, HashSet, VecDeque};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::abelian::prime_factors;
use crate::bitset::ElemSet;
use crate::budget::Budget;
use crate::counting::{count_n, euler_phi, gaussian_binomial, gl_order};
use crate::error::{Error, Result};
use crate::gf::{field_of_order, poly, FElem, FieldCtx};
use crate::matrix::{kernel, subspaces, Mat, Subspace};
use crate::ring::{ring_from_elements, FiniteRing};
use crate::setcover::{min_cover, SearchRecord};

/// `(1/b) Π_{1≤i<n, b∤i} (q^n - q^i) + N(b)` with `b` the least prime dividing `n`.
pub fn sigma_formula(n: u32, q: u64) -> BigUint {
    let (b, nb) = count_n(n, q);
    product_term(n, q, b) + nb
}

fn product_term(n: u32, q: u64, b: u32) -> BigUint {
    let qn = BigUint::from(q).pow(n);
    let prod: BigUint = (1..n)
        .filter(|i| i % b != 0)
        .map(|i| &qn - BigUint::from(q).pow(i))
        .product();
    let (quot, rem) = prod.div_rem(&BigUint::from(b));
    assert!(rem.is_zero(), "the product term must be divisible by b");
    quot
}

/// Number of `GL(n,q)`-conjugates of `M_{n/a}(q^a)`: `|GL(n,q)| / (a |GL(n/a, q^a)|)`.
pub fn conjugate_count(n: u32, q: u64, a: u32) -> Result<BigUint> {
    if a == 0 || !n.is_multiple_of(a) {
        return Err(Error::NotADivisor {
            a: a as usize,
            n: n as usize,
        });
    }
    let den = gl_order(n / a, q.pow(a)) * a;
    let (quot, rem) = gl_order(n, q).div_rem(&den);
    assert!(rem.is_zero(), "conjugate count must be an integer");
    Ok(quot)
}

/// Distinct prime divisors of `n`, ascending.
pub fn prime_divisors(n: u32) -> Vec<u32> {
    prime_factors(u64::from(n))
        .into_iter()
        .map(|p| p as u32)
        .collect()
}

/// A maximal subring of `M_n(q)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MaximalSubring {
    /// Matrices leaving `U` invariant.
    Stabilizer(Subspace),
    /// The centralizer of `z = g⁻¹ D g`, a conjugate of `M_{n/a}(q^a)`.
    SubfieldConjugate { a: u32, g: Mat, z: Mat },
}

impl MaximalSubring {
    pub fn contains(&self, f: &FieldCtx, x: &Mat) -> bool {
        match self {
            MaximalSubring::Stabilizer(u) => u.is_invariant(f, x),
            MaximalSubring::SubfieldConjugate { z, .. } => x.commutes(f, z),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            MaximalSubring::Stabilizer(u) => {
                format!("M(U), dim U = {}, basis {:?}", u.dim(), u.basis())
            }
            MaximalSubring::SubfieldConjugate { a, g, .. } => {
                format!("conjugate of M_(n/{a})(q^{a}) by {g:?}")
            }
        }
    }
}

/// Fast membership test with precomputed data.
enum Tester {
    Stabilizer {
        basis: Vec<Vec<FElem>>,
        ann: Vec<Vec<FElem>>,
    },
    Centralizer(Mat),
}

impl Tester {
    fn new(f: &FieldCtx, m: &MaximalSubring) -> Tester {
        match m {
            MaximalSubring::Stabilizer(u) => {
                let n = u.ambient_dim();
                let mut rows = u.basis().to_vec();
                rows.resize(n, vec![0; n]);
                Tester::Stabilizer {
                    basis: u.basis().to_vec(),
                    ann: kernel(f, &Mat::from_rows(&rows)),
                }
            }
            MaximalSubring::SubfieldConjugate { z, .. } => Tester::Centralizer(z.clone()),
        }
    }

    fn contains(&self, f: &FieldCtx, x: &Mat) -> bool {
        match self {
            Tester::Stabilizer { basis, ann } => basis.iter().all(|u| {
                let xu = x.apply(f, u);
                ann.iter().all(|l| {
                    l.iter()
                        .zip(&xu)
                        .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
                        == 0
                })
            }),
            Tester::Centralizer(z) => x.commutes(f, z),
        }
    }
}

/// All conjugates of `M_{n/a}(q^a)` for one prime `a`, or a representative
/// with the count when there are too many to list.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConjugateClass {
    pub a: u32,
    #[serde(with = "big_string")]
    pub count: BigUint,
    pub explicit: bool,
    pub members: Vec<MaximalSubring>,
}

/// Stabilizers of one subspace dimension, listed or counted.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StabilizerClass {
    pub dim: u32,
    #[serde(with = "big_string")]
    pub count: BigUint,
    pub explicit: bool,
    pub members: Vec<MaximalSubring>,
}

mod big_string {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The maximal subrings of `M_n(q)` grouped by kind.
#[derive(Clone, Debug)]
pub struct MaximalFamily {
    pub stabilizers: Vec<StabilizerClass>,
    pub conjugates: Vec<ConjugateClass>,
}

impl MaximalFamily {
    pub fn total(&self) -> BigUint {
        self.stabilizers.iter().map(|s| &s.count).sum::<BigUint>()
            + self.conjugates.iter().map(|c| &c.count).sum::<BigUint>()
    }

    pub fn is_explicit(&self) -> bool {
        self.stabilizers.iter().all(|s| s.explicit) && self.conjugates.iter().all(|c| c.explicit)
    }

    /// Every listed member.
    pub fn descriptors(&self) -> Vec<MaximalSubring> {
        self.stabilizers
            .iter()
            .flat_map(|s| s.members.iter().cloned())
            .chain(
                self.conjugates
                    .iter()
                    .flat_map(|c| c.members.iter().cloned()),
            )
            .collect()
    }
}

/// `M_n(q)` with its field and enumeration budget.
#[derive(Clone, Debug)]
pub struct MatRing {
    n: usize,
    q: u64,
    field: FieldCtx,
    budget: Budget,
}

impl MatRing {
    pub fn new(n: usize, q: u64, budget: Budget) -> Result<MatRing> {
        if n == 0 {
            return Err(Error::IllFormed("matrix size must be positive".into()));
        }
        let field = field_of_order(q)?;
        Ok(MatRing {
            n,
            q,
            field,
            budget,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn budget(&self) -> &Budget {
        &self.budget
    }

    /// `q^(n^2)` if it is within the scan budget.
    pub fn scan_size(&self) -> Option<u64> {
        let e = u32::try_from(self.n * self.n).ok()?;
        self.q
            .checked_pow(e)
            .filter(|&s| s <= self.budget.matrix_elements)
    }

    fn require_scan(&self) -> Result<u64> {
        self.scan_size().ok_or_else(|| {
            Error::BudgetExceeded(format!(
                "M_{}({}) has more than {} elements",
                self.n, self.q, self.budget.matrix_elements
            ))
        })
    }

    pub fn matrix(&self, code: u64) -> Mat {
        Mat::from_code(&self.field, self.n, code)
    }

    /// `M_n(q)` as a ring given by structure constants, when it has at most
    /// `ring_order` elements.
    pub fn to_finite_ring(&self) -> Result<FiniteRing> {
        let order = self
            .q
            .checked_pow((self.n * self.n) as u32)
            .unwrap_or(u64::MAX);
        if order > self.budget.ring_order as u64 {
            return Err(Error::BoundExceeded {
                order: usize::try_from(order).unwrap_or(usize::MAX),
                bound: self.budget.ring_order,
            });
        }
        let total = order;
        let f = &self.field;
        let elems: Vec<Mat> = (0..total).map(|c| self.matrix(c)).collect();
        Ok(ring_from_elements(
            &elems,
            &Mat::zero(self.n),
            |a, b| a.add(f, b),
            |a, b| a.mul(f, b),
        )?
        .0)
    }

    /// Every invertible matrix, by scanning `M_n(q)`.
    pub fn gl_elements(&self) -> Result<Vec<Mat>> {
        let total = self.require_scan()?;
        let f = &self.field;
        Ok((0..total)
            .into_par_iter()
            .map(|c| self.matrix(c))
            .filter(|m| m.is_invertible(f))
            .collect())
    }

    /// `D`: block diagonal with `n/a` companion blocks of the primitive polynomial of degree `a`.
    pub fn subfield_generator(&self, a: u32) -> Mat {
        let p = poly::primitive(&self.field, a as usize);
        let c = Mat::companion(&self.field, &p);
        Mat::block_diag(&vec![c; self.n / a as usize])
    }

    fn field_key(&self, z: &Mat, a: u32) -> Vec<Mat> {
        let f = &self.field;
        let powers: Vec<Mat> = (0..a).map(|i| z.pow(f, u64::from(i))).collect();
        let q = u64::from(f.order());
        let mut key: Vec<Mat> = (0..q.pow(a))
            .map(|mut code| {
                let mut acc = Mat::zero(self.n);
                for pw in &powers {
                    let c = (code % q) as FElem;
                    code /= q;
                    if c != 0 {
                        acc = acc.add(f, &pw.scale(f, c));
                    }
                }
                acc
            })
            .collect();
        key.sort();
        key
    }

    fn gl_generators(&self) -> Vec<Mat> {
        let n = self.n;
        let mut gens = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    let mut t = Mat::identity(n);
                    t.set(i, j, 1);
                    gens.push(t);
                }
            }
        }
        let mut d = Mat::identity(n);
        d.set(0, 0, self.field.primitive());
        gens.push(d);
        gens
    }

    /// All conjugates of `M_{n/a}(q^a)` by orbit search, when their number is
    /// within budget; otherwise the single representative `D`.
    pub fn conjugate_class(&self, a: u32) -> Result<ConjugateClass> {
        let count = conjugate_count(self.n as u32, self.q, a)?;
        let d = self.subfield_generator(a);
        let rep = MaximalSubring::SubfieldConjugate {
            a,
            g: Mat::identity(self.n),
            z: d.clone(),
        };
        if count > BigUint::from(self.budget.group_elements) {
            return Ok(ConjugateClass {
                a,
                count,
                explicit: false,
                members: vec![rep],
            });
        }
        let f = &self.field;
        let gens: Vec<(Mat, Mat)> = self
            .gl_generators()
            .into_iter()
            .map(|h| {
                let hi = h.inverse(f).expect("generator is invertible");
                (h, hi)
            })
            .collect();
        let mut seen: HashSet<Vec<Mat>> = HashSet::new();
        let mut found: Vec<(Vec<Mat>, Mat, Mat)> = Vec::new();
        let mut queue = VecDeque::new();
        let key = self.field_key(&d, a);
        seen.insert(key.clone());
        found.push((key, Mat::identity(self.n), d.clone()));
        queue.push_back((Mat::identity(self.n), d));
        while let Some((g, z)) = queue.pop_front() {
            for (h, hi) in &gens {
                let z2 = z.conjugate(f, h, hi);
                let key = self.field_key(&z2, a);
                if seen.insert(key.clone()) {
                    let g2 = g.mul(f, h);
                    found.push((key, g2.clone(), z2.clone()));
                    queue.push_back((g2, z2));
                }
            }
        }
        if BigUint::from(found.len()) != count {
            return Err(Error::AnalysisContradiction(format!(
                "orbit search found {} conjugates of M_(n/{a})(q^{a}), formula gives {count}",
                found.len()
            )));
        }
        found.sort_by(|x, y| x.0.cmp(&y.0));
        let members = found
            .into_iter()
            .map(|(_, g, z)| MaximalSubring::SubfieldConjugate { a, g, z })
            .collect();
        Ok(ConjugateClass {
            a,
            count,
            explicit: true,
            members,
        })
    }

    pub fn stabilizer_class(&self, dim: u32) -> Result<StabilizerClass> {
        let count = gaussian_binomial(self.n as u32, dim, self.q);
        if count > BigUint::from(self.budget.vectors) {
            return Ok(StabilizerClass {
                dim,
                count,
                explicit: false,
                members: Vec::new(),
            });
        }
        let members = subspaces(&self.field, self.n, dim as usize, self.budget.vectors)?
            .into_iter()
            .map(MaximalSubring::Stabilizer)
            .collect();
        Ok(StabilizerClass {
            dim,
            count,
            explicit: true,
            members,
        })
    }

    /// Every maximal subring: stabilizers of all dimensions `1..n` and the
    /// conjugates of `M_{n/a}(q^a)` for every prime `a | n`.
    pub fn maximal_subrings(&self) -> Result<MaximalFamily> {
        let n = self.n as u32;
        let stabilizers = (1..n)
            .map(|k| self.stabilizer_class(k))
            .collect::<Result<Vec<_>>>()?;
        let conjugates = prime_divisors(n)
            .into_iter()
            .map(|a| self.conjugate_class(a))
            .collect::<Result<Vec<_>>>()?;
        Ok(MaximalFamily {
            stabilizers,
            conjugates,
        })
    }

    /// The covering family: conjugates of `M_{n/b}(q^b)` and stabilizers of
    /// dimension at most `n/2` not divisible by `b`.
    pub fn cover_family(&self) -> Result<MaximalFamily> {
        let n = self.n as u32;
        let b = prime_divisors(n)[0];
        let stabilizers = (1..=n / 2)
            .filter(|k| k % b != 0)
            .map(|k| self.stabilizer_class(k))
            .collect::<Result<Vec<_>>>()?;
        Ok(MaximalFamily {
            stabilizers,
            conjugates: vec![self.conjugate_class(b)?],
        })
    }

    /// Companion matrix of the least primitive polynomial of degree `n` over `GF(q)`.
    pub fn singer_generator(&self) -> Mat {
        let p = poly::primitive(&self.field, self.n);
        Mat::companion(&self.field, &p)
    }

    /// Elements of multiplicative order `q^n - 1`, by scanning.
    pub fn singer_generators(&self) -> Result<Vec<Mat>> {
        let total = self.require_scan()?;
        let f = &self.field;
        let target = self.q.pow(self.n as u32) - 1;
        let mut out: Vec<Mat> = (0..total)
            .into_par_iter()
            .map(|c| self.matrix(c))
            .filter(|m| m.order_dividing(f, target) == Some(target))
            .collect();
        out.sort();
        Ok(out)
    }

    /// Size of the centralizer of `x` in `GL(n,q)`, by scanning.
    pub fn centralizer_size(&self, x: &Mat) -> Result<u64> {
        let gl = self.gl_elements()?;
        Ok(gl.iter().filter(|c| c.commutes(&self.field, x)).count() as u64)
    }
}

/// `GF(q)` as a ring given by structure constants.
pub fn field_ring(q: u64) -> Result<FiniteRing> {
    let f = field_of_order(q)?;
    let elems: Vec<FElem> = f.elements().collect();
    Ok(ring_from_elements(&elems, &0, |a, b| f.add(*a, *b), |a, b| f.mul(*a, *b))?.0)
}

/// Singer cycle generator of `GL(n,q)`.
pub fn singer_generator(n: usize, q: u64) -> Result<Mat> {
    Ok(MatRing::new(n, q, Budget::default())?.singer_generator())
}

fn partitions(m: usize) -> Vec<Vec<usize>> {
    fn go(rem: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rem == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=rem.min(max)).rev() {
            cur.push(p);
            go(rem - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(m, m, &mut Vec::new(), &mut out);
    out
}

/// A similarity class of `M_n(q)`: for each irreducible `h`, the partition giving
/// the exponents of its elementary divisors.
#[derive(Clone, Debug)]
pub struct SimilarityClass {
    pub parts: Vec<(Vec<FElem>, Vec<usize>)>,
}

impl SimilarityClass {
    /// Block diagonal matrix of companion matrices of `h^e`.
    pub fn representative(&self, f: &FieldCtx) -> Mat {
        let blocks: Vec<Mat> = self
            .parts
            .iter()
            .flat_map(|(h, lam)| {
                lam.iter()
                    .map(move |&e| Mat::companion(f, &poly::pow(f, h, e as u32)))
            })
            .collect();
        Mat::block_diag(&blocks)
    }

    /// Order of the centralizer in `GL(n,q)`.
    pub fn centralizer_order(&self, q: u64) -> BigUint {
        let mut total = BigUint::from(1u32);
        for (h, lam) in &self.parts {
            let qh = BigUint::from(q).pow((h.len() - 1) as u32);
            let max = lam[0];
            let conj: Vec<usize> = (1..=max)
                .map(|i| lam.iter().filter(|&&p| p >= i).count())
                .collect();
            let mut exponent: i64 = conj.iter().map(|&c| (c * c) as i64).sum();
            for j in 1..=max {
                let mult = lam.iter().filter(|&&p| p == j).count();
                for s in 1..=mult {
                    exponent -= s as i64;
                    total *= qh.pow(s as u32) - 1u32;
                }
            }
            total *= qh.pow(u32::try_from(exponent).expect("non-negative exponent"));
        }
        total
    }
}

/// Every similarity class of `M_n(q)` by primary rational canonical form.
pub fn similarity_classes(f: &FieldCtx, n: usize) -> Vec<SimilarityClass> {
    let irr: Vec<Vec<FElem>> = (1..=n).flat_map(|d| poly::irreducibles(f, d)).collect();
    fn go(
        irr: &[Vec<FElem>],
        start: usize,
        rem: usize,
        cur: &mut Vec<(Vec<FElem>, Vec<usize>)>,
        out: &mut Vec<SimilarityClass>,
    ) {
        if rem == 0 {
            out.push(SimilarityClass { parts: cur.clone() });
            return;
        }
        for i in start..irr.len() {
            let d = irr[i].len() - 1;
            if d > rem {
                continue;
            }
            for m in 1..=rem / d {
                for lam in partitions(m) {
                    cur.push((irr[i].clone(), lam));
                    go(irr, i + 1, rem - d * m, cur, out);
                    cur.pop();
                }
            }
        }
    }
    let mut out = Vec::new();
    go(&irr, 0, n, &mut Vec::new(), &mut out);
    out
}

/// How a cover was checked.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum Verification {
    /// Every matrix tested against the listed members.
    FullScan {
        checked: u64,
        covered: u64,
    },
    /// One representative per similarity class placed in a member by an explicit
    /// witness; the family is closed under conjugation.
    CharPoly {
        classes: u64,
        by_stabilizer: u64,
        by_subfield: u64,
        /// Class sizes sum to `q^(n^2)`.
        classes_complete: bool,
    },
    Unverified {
        reason: String,
    },
}

/// A family of maximal subrings claimed to cover `M_n(q)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoverCertificate {
    pub n: u32,
    pub q: u64,
    pub b: u32,
    #[serde(with = "big_string")]
    pub size: BigUint,
    #[serde(with = "big_string")]
    pub formula: BigUint,
    pub stabilizers: Vec<StabilizerClass>,
    pub conjugates: ConjugateClass,
    pub verification: Verification,
    pub verified: bool,
    /// An uncovered matrix, if one was found.
    pub uncovered: Option<Mat>,
}

impl CoverCertificate {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificate serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<CoverCertificate> {
        Ok(serde_json::from_str(text)?)
    }

    fn family(&self) -> MaximalFamily {
        MaximalFamily {
            stabilizers: self.stabilizers.clone(),
            conjugates: vec![self.conjugates.clone()],
        }
    }
}

/// Result of a full membership scan.
struct ScanOutcome {
    checked: u64,
    covered: u64,
    first_gap: Option<Mat>,
}

fn full_scan(mr: &MatRing, members: &[MaximalSubring], total: u64) -> ScanOutcome {
    let f = mr.field();
    let testers: Vec<Tester> = members.iter().map(|m| Tester::new(f, m)).collect();
    let gaps: Vec<u64> = (0..total)
        .into_par_iter()
        .filter(|&c| {
            let x = mr.matrix(c);
            !testers.iter().any(|t| t.contains(f, &x))
        })
        .collect();
    ScanOutcome {
        checked: total,
        covered: total - gaps.len() as u64,
        first_gap: gaps.first().map(|&c| mr.matrix(c)),
    }
}

/// Witness that a class representative lies in a member of the cover family.
#[derive(Clone, Debug)]
pub enum ClassWitness {
    /// An invariant subspace of admissible dimension.
    Stabilizer(Subspace),
    /// A commuting matrix generating a field of order `q^b`.
    Subfield(Mat),
}

/// Places `x` (with elementary divisors given by `class`) in the cover family.
pub fn class_witness(
    mr: &MatRing,
    class: &SimilarityClass,
    x: &Mat,
    b: u32,
) -> Result<ClassWitness> {
    let f = mr.field();
    let n = mr.n();
    let b = b as usize;
    let mut degrees: Vec<&Vec<FElem>> = class
        .parts
        .iter()
        .map(|(h, _)| h)
        .filter(|h| (h.len() - 1) % b != 0)
        .collect();
    degrees.sort_by_key(|h| h.len());
    if let Some(h) = degrees.first() {
        let k = h.len() - 1;
        let sub = if 2 * k <= n {
            let v = kernel(f, &x.eval_poly(f, h))
                .into_iter()
                .next()
                .expect("h divides the characteristic polynomial");
            let mut vs = vec![v];
            for _ in 1..k {
                let next = x.apply(f, vs.last().expect("non-empty"));
                vs.push(next);
            }
            Subspace::span(f, n, vs)
        } else {
            let cp = x.char_poly(f);
            let (g, r) = poly::divrem(f, &cp, h);
            debug_assert!(r.is_empty());
            Subspace::span(f, n, kernel(f, &x.eval_poly(f, &g)))
        };
        let d = sub.dim();
        if d == 0 || 2 * d > n || d % b == 0 || !sub.is_invariant(f, x) {
            return Err(Error::AnalysisContradiction(format!(
                "no admissible invariant subspace for {x:?}"
            )));
        }
        return Ok(ClassWitness::Stabilizer(sub));
    }
    let r = poly::primitive(f, b);
    let mut cache: HashMap<(Vec<FElem>, usize), Mat> = HashMap::new();
    let mut blocks = Vec::new();
    for (h, lam) in &class.parts {
        for &e in lam {
            let key = (h.clone(), e);
            if let Some(y) = cache.get(&key) {
                blocks.push(y.clone());
                continue;
            }
            let he = poly::pow(f, h, e as u32);
            let m = he.len() - 1;
            let qf = u64::from(f.order());
            let tries = qf
                .checked_pow(m as u32)
                .filter(|&t| t <= mr.budget().vectors)
                .ok_or_else(|| {
                    Error::BudgetExceeded(format!("root search over {}^{m} polynomials", f.order()))
                })?;
            let root = (0..tries)
                .map(|code| {
                    let mut c = code;
                    let s: Vec<FElem> = (0..m)
                        .map(|_| {
                            let v = (c % qf) as FElem;
                            c /= qf;
                            v
                        })
                        .collect();
                    poly::normalize(s)
                })
                .find(|s| {
                    let mut acc: Vec<FElem> = Vec::new();
                    for &c in r.iter().rev() {
                        acc = poly::rem(f, &poly::add(f, &poly::mul(f, &acc, s), &[c]), &he);
                    }
                    acc.is_empty()
                })
                .ok_or_else(|| {
                    Error::AnalysisContradiction(format!("no root of {r:?} modulo {he:?}"))
                })?;
            let y = Mat::companion(f, &he).eval_poly(f, &root);
            cache.insert(key, y.clone());
            blocks.push(y);
        }
    }
    let y = Mat::block_diag(&blocks);
    if !y.commutes(f, x) || !y.eval_poly(f, &r).is_zero() {
        return Err(Error::AnalysisContradiction(format!(
            "subfield witness fails for {x:?}"
        )));
    }
    Ok(ClassWitness::Subfield(y))
}

fn charpoly_verification(mr: &MatRing, b: u32) -> Result<Verification> {
    let f = mr.field();
    if mr
        .q()
        .checked_pow(mr.n() as u32)
        .is_none_or(|c| c > mr.budget().vectors)
    {
        return Err(Error::BudgetExceeded(format!(
            "similarity classes of M_{}({})",
            mr.n(),
            mr.q()
        )));
    }
    let classes = similarity_classes(f, mr.n());
    let gl = gl_order(mr.n() as u32, mr.q());
    let total: BigUint = classes
        .iter()
        .map(|c| &gl / c.centralizer_order(mr.q()))
        .sum();
    let classes_complete = total == BigUint::from(mr.q()).pow((mr.n() * mr.n()) as u32);
    let witnesses: Vec<Result<ClassWitness>> = classes
        .par_iter()
        .map(|c| {
            let x = c.representative(f);
            class_witness(mr, c, &x, b)
        })
        .collect();
    let (mut by_stabilizer, mut by_subfield) = (0, 0);
    for w in witnesses {
        match w? {
            ClassWitness::Stabilizer(_) => by_stabilizer += 1,
            ClassWitness::Subfield(_) => by_subfield += 1,
        }
    }
    Ok(Verification::CharPoly {
        classes: classes.len() as u64,
        by_stabilizer,
        by_subfield,
        classes_complete,
    })
}

/// Builds the covering family and verifies it: by a full scan when `M_n(q)` is
/// small enough and the family is listed, otherwise one witness per similarity class.
pub fn build_cover(mr: &MatRing) -> Result<CoverCertificate> {
    let n = mr.n() as u32;
    if n < 2 {
        return Err(Error::IllFormed("matrix size must be at least 2".into()));
    }
    let b = prime_divisors(n)[0];
    let family = if mr.scan_size().is_some() {
        mr.cover_family()?
    } else {
        let counted = MatRing {
            budget: Budget {
                group_elements: 0,
                vectors: 0,
                ..*mr.budget()
            },
            ..mr.clone()
        };
        counted.cover_family()?
    };
    let size = family.total();
    let formula = sigma_formula(n, mr.q());
    let (verification, uncovered) = match mr.scan_size() {
        Some(total) if family.is_explicit() => {
            let out = full_scan(mr, &family.descriptors(), total);
            (
                Verification::FullScan {
                    checked: out.checked,
                    covered: out.covered,
                },
                out.first_gap,
            )
        }
        _ => match charpoly_verification(mr, b) {
            Ok(v) => (v, None),
            Err(Error::BudgetExceeded(reason)) => (Verification::Unverified { reason }, None),
            Err(e) => return Err(e),
        },
    };
    let verified = size == formula
        && match &verification {
            Verification::FullScan { checked, covered } => checked == covered,
            Verification::CharPoly {
                classes_complete, ..
            } => *classes_complete,
            Verification::Unverified { .. } => false,
        };
    let mut stabilizers = family.stabilizers;
    let conjugates = family
        .conjugates
        .into_iter()
        .next()
        .expect("one conjugate class");
    if !matches!(verification, Verification::FullScan { .. }) {
        // keep certificates small when the members were not scanned
        for s in &mut stabilizers {
            s.explicit = false;
            s.members.clear();
        }
    }
    let conjugates = if matches!(verification, Verification::FullScan { .. }) {
        conjugates
    } else {
        let rep = conjugates.members.into_iter().next().into_iter().collect();
        ConjugateClass {
            explicit: false,
            members: rep,
            ..conjugates
        }
    };
    Ok(CoverCertificate {
        n,
        q: mr.q(),
        b,
        size,
        formula,
        stabilizers,
        conjugates,
        verification,
        verified,
        uncovered,
    })
}

/// Re-checks a stored cover certificate from scratch.
pub fn verify_cover_certificate(
    cert: &CoverCertificate,
    budget: Budget,
) -> Result<Vec<(String, bool)>> {
    let mr = MatRing::new(cert.n as usize, cert.q, budget)?;
    let f = mr.field();
    let n = cert.n;
    let b = prime_divisors(n)[0];
    let mut checks = vec![("b is the least prime divisor of n".to_string(), b == cert.b)];
    let formula = sigma_formula(n, cert.q);
    checks.push(("formula value".into(), formula == cert.formula));
    let family = cert.family();
    checks.push((
        "family size equals formula".into(),
        family.total() == formula,
    ));
    let dims_ok = cert
        .stabilizers
        .iter()
        .all(|s| 2 * s.dim <= n && s.dim % b != 0 && s.dim > 0)
        && (1..=n / 2).filter(|k| k % b != 0).count() == cert.stabilizers.len();
    checks.push(("stabilizer dimensions".into(), dims_ok));
    let counts_ok = cert
        .stabilizers
        .iter()
        .all(|s| s.count == gaussian_binomial(n, s.dim, cert.q))
        && cert.conjugates.a == b
        && cert.conjugates.count == conjugate_count(n, cert.q, b)?;
    checks.push(("class counts".into(), counts_ok));
    let mut members_ok = true;
    for s in &cert.stabilizers {
        let mut seen = HashSet::new();
        for m in &s.members {
            match m {
                MaximalSubring::Stabilizer(u) => {
                    let valid = Subspace::from_echelon(f, n as usize, u.basis().to_vec()).is_ok()
                        && u.dim() == s.dim as usize;
                    members_ok &= valid && seen.insert(u.clone());
                }
                _ => members_ok = false,
            }
        }
        if s.explicit {
            members_ok &= BigUint::from(s.members.len()) == s.count;
        }
    }
    let d = mr.subfield_generator(b);
    let mut keys = HashSet::new();
    for m in &cert.conjugates.members {
        match m {
            MaximalSubring::SubfieldConjugate { a, g, z } => {
                let valid = *a == b
                    && g.n() == n as usize
                    && g.inverse(f).is_some_and(|gi| d.conjugate(f, g, &gi) == *z);
                members_ok &= valid && keys.insert(mr.field_key(z, b));
            }
            _ => members_ok = false,
        }
    }
    if cert.conjugates.explicit {
        members_ok &= BigUint::from(cert.conjugates.members.len()) == cert.conjugates.count;
    }
    checks.push(("listed members valid and distinct".into(), members_ok));
    let covered = match mr.scan_size() {
        Some(total) if family.is_explicit() => {
            let out = full_scan(&mr, &family.descriptors(), total);
            out.covered == out.checked
        }
        _ => matches!(
            charpoly_verification(&mr, b)?,
            Verification::CharPoly {
                classes_complete: true,
                ..
            }
        ),
    };
    checks.push(("every matrix covered".into(), covered));
    Ok(checks)
}

/// A minimum cover of `M_n(q)` by maximal subrings.
#[derive(Clone, Debug)]
pub struct MatrixCover {
    pub members: Vec<MaximalSubring>,
    pub log: Vec<SearchRecord>,
    pub candidates: usize,
    pub elements: u64,
}

impl MatrixCover {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// Exact covering number by search over all maximal subrings.
pub fn brute_force_sigma(mr: &MatRing) -> Result<MatrixCover> {
    let total = mr.require_scan()?;
    let family = mr.maximal_subrings()?;
    if !family.is_explicit() {
        return Err(Error::BudgetExceeded(
            "maximal subrings cannot all be listed".into(),
        ));
    }
    let members = family.descriptors();
    if members.len() > mr.budget().cover_candidates {
        return Err(Error::BudgetExceeded(format!(
            "{} maximal subrings exceed the candidate budget {}",
            members.len(),
            mr.budget().cover_candidates
        )));
    }
    let f = mr.field();
    let sets: Vec<ElemSet> = members
        .par_iter()
        .map(|m| {
            let t = Tester::new(f, m);
            ElemSet::from_iter(
                total as usize,
                (0..total)
                    .filter(|&c| t.contains(f, &mr.matrix(c)))
                    .map(|c| c as usize),
            )
        })
        .collect();
    let cover = min_cover(total as usize, &sets).ok_or_else(|| {
        Error::AnalysisContradiction("maximal subrings do not cover M_n(q)".into())
    })?;
    Ok(MatrixCover {
        members: cover.chosen.iter().map(|&i| members[i].clone()).collect(),
        log: cover.log,
        candidates: members.len(),
        elements: total,
    })
}

/// Kind of a witness element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PiKind {
    /// Singer cycle generator.
    T0,
    /// Singer generators on `U` (dimension `k`) and its paired complement `W`.
    Tk { k: usize, u: Subspace, w: Subspace },
    /// `[[S, I], [0, S]]` on complementary halves `U`, `U'`.
    Half { u: Subspace, w: Subspace },
}

#[derive(Clone, Debug)]
pub struct PiElement {
    pub kind: PiKind,
    pub matrix: Mat,
}

/// Pairs each `k`-subspace with a complementary `(n-k)`-subspace by a perfect
/// matching found with augmenting paths, in canonical order.
pub fn complement_pairing(
    f: &FieldCtx,
    small: &[Subspace],
    large: &[Subspace],
) -> Result<Vec<usize>> {
    let adj: Vec<Vec<usize>> = small
        .iter()
        .map(|u| {
            (0..large.len())
                .filter(|&j| u.is_complement(f, &large[j]))
                .collect()
        })
        .collect();
    let mut owner: Vec<Option<usize>> = vec![None; large.len()];
    fn augment(
        i: usize,
        adj: &[Vec<usize>],
        owner: &mut [Option<usize>],
        seen: &mut [bool],
    ) -> bool {
        for &j in &adj[i] {
            if seen[j] {
                continue;
            }
            seen[j] = true;
            if owner[j].is_none_or(|o| augment(o, adj, owner, seen)) {
                owner[j] = Some(i);
                return true;
            }
        }
        false
    }
    for i in 0..small.len() {
        let mut seen = vec![false; large.len()];
        if !augment(i, &adj, &mut owner, &mut seen) {
            return Err(Error::AnalysisContradiction(
                "no complement pairing exists".into(),
            ));
        }
    }
    let mut pair = vec![0; small.len()];
    for (j, o) in owner.iter().enumerate() {
        if let Some(i) = o {
            pair[*i] = j;
        }
    }
    Ok(pair)
}

fn basis_change(u: &Subspace, w: &Subspace) -> Mat {
    let cols: Vec<Vec<FElem>> = u.basis().iter().chain(w.basis()).cloned().collect();
    Mat::from_cols(&cols)
}

fn block_upper(a: &Mat, top_right: &Mat, c: &Mat) -> Mat {
    let (k, l) = (a.n(), c.n());
    let mut m = Mat::zero(k + l);
    for i in 0..k {
        for j in 0..k {
            m.set(i, j, a.get(i, j));
        }
        for j in 0..l {
            m.set(i, k + j, top_right.get(i, j));
        }
    }
    for i in 0..l {
        for j in 0..l {
            m.set(k + i, k + j, c.get(i, j));
        }
    }
    m
}

/// The witness set `Π = Π₁ ∪ Π₂ ∪ Π₃`, deduplicated by matrix.
pub fn build_pi(mr: &MatRing) -> Result<Vec<PiElement>> {
    let f = mr.field();
    let n = mr.n();
    let b = prime_divisors(n as u32)[0] as usize;
    let mut out: Vec<PiElement> = mr
        .singer_generators()?
        .into_iter()
        .map(|m| PiElement {
            kind: PiKind::T0,
            matrix: m,
        })
        .collect();
    let sub_gens = |k: usize| -> Result<Vec<Mat>> {
        MatRing::new(k, mr.q(), *mr.budget())?.singer_generators()
    };
    for k in (1..n).filter(|&k| 2 * k < n && k % b != 0) {
        let small = subspaces(f, n, k, mr.budget().vectors)?;
        let large = subspaces(f, n, n - k, mr.budget().vectors)?;
        let pair = complement_pairing(f, &small, &large)?;
        let (ga, gb) = (sub_gens(k)?, sub_gens(n - k)?);
        for (i, u) in small.iter().enumerate() {
            let w = &large[pair[i]];
            let p = basis_change(u, w);
            let pi = p.inverse(f).expect("complementary bases");
            for a in &ga {
                for c in &gb {
                    let x = Mat::block_diag(&[a.clone(), c.clone()]).conjugate(f, &pi, &p);
                    out.push(PiElement {
                        kind: PiKind::Tk {
                            k,
                            u: u.clone(),
                            w: w.clone(),
                        },
                        matrix: x,
                    });
                }
            }
        }
    }
    if n % 4 == 2 {
        let h = n / 2;
        let halves = subspaces(f, n, h, mr.budget().vectors)?;
        let gens = sub_gens(h)?;
        for u in &halves {
            for w in halves.iter().filter(|w| u.is_complement(f, w)) {
                let p = basis_change(u, w);
                let pi = p.inverse(f).expect("complementary bases");
                for s in &gens {
                    let x = block_upper(s, &Mat::identity(h), s).conjugate(f, &pi, &p);
                    out.push(PiElement {
                        kind: PiKind::Half {
                            u: u.clone(),
                            w: w.clone(),
                        },
                        matrix: x,
                    });
                }
            }
        }
    }
    let mut seen = HashSet::new();
    out.retain(|e| seen.insert(e.matrix.clone()));
    Ok(out)
}

/// One of the four unbeatability conditions.
#[derive(Clone, Debug)]
pub struct ConditionResult {
    pub index: u8,
    pub passed: bool,
    pub detail: String,
}

/// One counting inequality `|GL(n/c, q^c)| < |Π ∩ H|` for a shape of `H`.
#[derive(Clone, Debug)]
pub struct CountingInequality {
    pub shape: String,
    pub lhs: BigUint,
    pub rhs: BigUint,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UnbeatabilityMode {
    Elementwise,
    Counting,
}

#[derive(Clone, Debug)]
pub struct UnbeatabilityReport {
    pub n: u32,
    pub q: u64,
    pub mode: UnbeatabilityMode,
    pub conditions: Vec<ConditionResult>,
    pub inequalities: Vec<CountingInequality>,
    /// Extra structural checks (centralizer sizes, Singer uniqueness) with outcomes.
    pub checks: Vec<(String, bool)>,
    pi: Vec<Mat>,
    cover: Vec<MaximalSubring>,
}

impl UnbeatabilityReport {
    pub fn passed(&self) -> bool {
        self.conditions.iter().all(|c| c.passed)
            && self.inequalities.iter().all(|i| i.holds)
            && self.checks.iter().all(|(_, ok)| *ok)
    }

    /// Recomputes `Π ∩ H_i ∩ H_j` for two cover members (elementwise mode).
    pub fn reverify_disjoint(&self, i: usize, j: usize) -> Result<bool> {
        let mr = MatRing::new(self.n as usize, self.q, Budget::default())?;
        let f = mr.field();
        let (hi, hj) = (&self.cover[i], &self.cover[j]);
        Ok(!self
            .pi
            .iter()
            .any(|x| hi.contains(f, x) && hj.contains(f, x)))
    }

    pub fn cover_len(&self) -> usize {
        self.cover.len()
    }
}

fn exact_div(a: BigUint, b: BigUint) -> BigUint {
    let (quot, rem) = a.div_rem(&b);
    assert!(rem.is_zero(), "expected an exact division");
    quot
}

/// Number of Singer cycle generators in `GL(m, r)` per Singer cycle times the
/// number of cycles: `|GL(m,r)| / ((r^m - 1) m) · φ(r^m - 1)`.
fn singer_generator_count(m: u32, r: u64) -> BigUint {
    let rm = r.pow(m) - 1;
    exact_div(gl_order(m, r), BigUint::from(rm) * m) * euler_phi(rm)
}

/// The counting inequalities for `n` with at least two prime divisors; empty
/// when `n` is a prime power.
pub fn counting_inequalities(n: u32, q: u64) -> Vec<CountingInequality> {
    let primes = prime_divisors(n);
    if primes.len() < 2 {
        return Vec::new();
    }
    let (b, c) = (primes[0], primes[1]);
    let lhs = gl_order(n / c, q.pow(c));
    let mut out = Vec::new();
    let qn = q.pow(n) - 1;
    let rhs1 = exact_div(gl_order(n / b, q.pow(b)) * b, BigUint::from(qn) * n) * euler_phi(qn);
    out.push(CountingInequality {
        shape: format!("conjugate of M_{}(q^{b})", n / b),
        lhs: lhs.clone(),
        rhs: rhs1.clone(),
        holds: lhs < rhs1,
    });
    for k in (1..n).filter(|&k| 2 * k < n && k % b != 0) {
        let rhs = singer_generator_count(k, q) * singer_generator_count(n - k, q);
        out.push(CountingInequality {
            shape: format!("M(U), dim U = {k}"),
            lhs: lhs.clone(),
            rhs: rhs.clone(),
            holds: lhs < rhs,
        });
    }
    if n % 4 == 2 {
        let h = n / 2;
        let rhs = BigUint::from(q).pow(n * n / 4) * singer_generator_count(h, q);
        out.push(CountingInequality {
            shape: format!("M(U), dim U = {h}"),
            lhs: lhs.clone(),
            rhs: rhs.clone(),
            holds: lhs < rhs,
        });
    }
    out
}

/// Checks the four unbeatability conditions. Elementwise mode scans the whole
/// witness set at desk scale; counting mode evaluates the inequalities.
pub fn check_unbeatable(mr: &MatRing, mode: UnbeatabilityMode) -> Result<UnbeatabilityReport> {
    let n = mr.n() as u32;
    let q = mr.q();
    if n < 2 {
        return Err(Error::IllFormed("matrix size must be at least 2".into()));
    }
    let inequalities = counting_inequalities(n, q);
    let prime_power = prime_divisors(n).len() == 1;
    if mode == UnbeatabilityMode::Counting {
        let detail = if prime_power {
            "n is a prime power: K \\ H holds only stabilizers of b-divisible dimension, which meet no witness".to_string()
        } else {
            format!("{} exact inequalities", inequalities.len())
        };
        let passed = inequalities.iter().all(|i| i.holds);
        return Ok(UnbeatabilityReport {
            n,
            q,
            mode,
            conditions: vec![ConditionResult {
                index: 4,
                passed,
                detail,
            }],
            inequalities,
            checks: Vec::new(),
            pi: Vec::new(),
            cover: Vec::new(),
        });
    }
    let f = mr.field();
    let pi = build_pi(mr)?;
    let family = mr.maximal_subrings()?;
    if !family.is_explicit() {
        return Err(Error::BudgetExceeded(
            "maximal subrings cannot all be listed".into(),
        ));
    }
    let all = family.descriptors();
    let b = prime_divisors(n)[0];
    let in_cover = |m: &MaximalSubring| match m {
        MaximalSubring::Stabilizer(u) => 2 * u.dim() as u32 <= n && !(u.dim() as u32).is_multiple_of(b),
        MaximalSubring::SubfieldConjugate { a, .. } => *a == b,
    };
    let in_k = |m: &MaximalSubring| match m {
        MaximalSubring::Stabilizer(u) => 2 * u.dim() as u32 <= n,
        MaximalSubring::SubfieldConjugate { .. } => true,
    };
    let cover: Vec<MaximalSubring> = all.iter().filter(|m| in_cover(m)).cloned().collect();
    let testers: Vec<Tester> = all.iter().map(|m| Tester::new(f, m)).collect();
    // membership[p] = indices into `all` containing Π element p
    let membership: Vec<Vec<usize>> = pi
        .par_iter()
        .map(|e| {
            (0..all.len())
                .filter(|&i| testers[i].contains(f, &e.matrix))
                .collect()
        })
        .collect();
    let cover_idx: Vec<usize> = (0..all.len()).filter(|&i| in_cover(&all[i])).collect();
    let other_idx: Vec<usize> = (0..all.len())
        .filter(|&i| in_k(&all[i]) && !in_cover(&all[i]))
        .collect();
    let hits = |i: usize| membership.iter().filter(|m| m.contains(&i)).count();
    let cover_hits: Vec<usize> = cover_idx.iter().map(|&i| hits(i)).collect();
    let per_elem: Vec<usize> = membership
        .iter()
        .map(|m| m.iter().filter(|i| cover_idx.contains(i)).count())
        .collect();

    let uncovered = per_elem.iter().filter(|&&c| c == 0).count();
    let empty = cover_hits.iter().filter(|&&c| c == 0).count();
    let shared = per_elem.iter().filter(|&&c| c > 1).count();
    let min_hit = cover_hits.iter().copied().min().unwrap_or(0);
    let worst_other = other_idx.iter().map(|&i| hits(i)).max();
    let conditions = vec![
        ConditionResult {
            index: 1,
            passed: uncovered == 0,
            detail: format!(
                "{} of {} witnesses lie in a member of H",
                pi.len() - uncovered,
                pi.len()
            ),
        },
        ConditionResult {
            index: 2,
            passed: empty == 0,
            detail: format!(
                "{} of {} members of H meet the witness set (min {min_hit})",
                cover_idx.len() - empty,
                cover_idx.len()
            ),
        },
        ConditionResult {
            index: 3,
            passed: shared == 0,
            detail: format!("{shared} witnesses lie in two or more members of H"),
        },
        ConditionResult {
            index: 4,
            passed: worst_other.is_none_or(|w| w <= min_hit),
            detail: match worst_other {
                None => "K \\ H is empty".to_string(),
                Some(w) => format!(
                    "{} members of K \\ H, largest intersection {w} vs smallest {min_hit}",
                    other_idx.len()
                ),
            },
        },
    ];

    let mut checks = Vec::new();
    let singer_cycles = conjugate_count(n, q, n)?;
    let qn = q.pow(n) - 1;
    let pi1 = pi.iter().filter(|e| e.kind == PiKind::T0).count();
    checks.push((
        format!(
            "|Pi_1| = {pi1} equals Singer cycles x phi(q^n - 1) = {}",
            &singer_cycles * euler_phi(qn)
        ),
        BigUint::from(pi1) == singer_cycles * euler_phi(qn),
    ));
    // each T0 element: no stabilizer, exactly one conjugate per prime a | n
    let singer_ok = pi.iter().zip(&membership).filter(|(e, _)| e.kind == PiKind::T0).all(|(_, m)| {
        m.iter().all(|&i| matches!(all[i], MaximalSubring::SubfieldConjugate { .. }))
            && prime_divisors(n).iter().all(|&a| {
                m.iter().filter(|&&i| matches!(all[i], MaximalSubring::SubfieldConjugate { a: x, .. } if x == a)).count() == 1
            })
    });
    checks.push((
        "each Singer cycle lies in exactly one conjugate per prime divisor and in no stabilizer"
            .into(),
        singer_ok,
    ));
    // T_k and T_half elements lie only in the predicted maximal subrings
    let typed_ok = pi.iter().zip(&membership).all(|(e, m)| {
        let allowed = |i: usize, u: &Subspace, w: Option<&Subspace>, k: usize| match &all[i] {
            MaximalSubring::Stabilizer(s) => s == u || Some(s) == w,
            MaximalSubring::SubfieldConjugate { a, .. } => k.is_multiple_of(*a as usize),
        };
        match &e.kind {
            PiKind::T0 => true,
            PiKind::Tk { k, u, w } => {
                let has = |s: &Subspace| {
                    m.iter()
                        .any(|&i| matches!(&all[i], MaximalSubring::Stabilizer(x) if x == s))
                };
                has(u) && has(w) && m.iter().all(|&i| allowed(i, u, Some(w), *k))
            }
            PiKind::Half { u, .. } => {
                let has_u = m
                    .iter()
                    .any(|&i| matches!(&all[i], MaximalSubring::Stabilizer(x) if x == u));
                has_u && m.iter().all(|&i| allowed(i, u, None, n as usize / 2))
            }
        }
    });
    checks.push((
        "typed witnesses lie only in the predicted maximal subrings".into(),
        typed_ok,
    ));
    let mut seen_k = HashSet::new();
    for e in &pi {
        if let PiKind::Tk { k, .. } = e.kind {
            if seen_k.insert(k) {
                let size = mr.centralizer_size(&e.matrix)?;
                let expected = (q.pow(k as u32) - 1) * (q.pow(n - k as u32) - 1);
                checks.push((
                    format!(
                        "centralizer of a T_{k} witness has {size} elements, expected {expected}"
                    ),
                    size == expected,
                ));
            }
        }
    }
    if n % 4 == 2 {
        let (count, ok) = half_type_centralizer_check(mr)?;
        checks.push((format!("centralizers of {count} half-type witnesses are block upper triangular with Singer-power diagonal"), ok));
    }

    Ok(UnbeatabilityReport {
        n,
        q,
        mode,
        conditions,
        inequalities,
        checks,
        pi: pi.into_iter().map(|e| e.matrix).collect(),
        cover,
    })
}

/// Centralizer of a `T_half` element, conjugated back to block form: every
/// commuting invertible matrix must be block upper triangular with diagonal
/// blocks in the cyclic group generated by the Singer block.
pub fn half_type_centralizer_check(mr: &MatRing) -> Result<(usize, bool)> {
    let f = mr.field();
    let n = mr.n();
    if n % 4 != 2 {
        return Ok((0, true));
    }
    let h = n / 2;
    let gl = mr.gl_elements()?;
    let mut checked = 0;
    let mut ok = true;
    for e in build_pi(mr)? {
        let PiKind::Half { u, w } = &e.kind else {
            continue;
        };
        let p = basis_change(u, w);
        let pi = p.inverse(f).expect("complementary bases");
        let s_block = {
            let blk = e.matrix.conjugate(f, &p, &pi);
            let mut s = Mat::zero(h);
            for i in 0..h {
                for j in 0..h {
                    s.set(i, j, blk.get(i, j));
                }
            }
            s
        };
        let order = mr.q().pow(h as u32) - 1;
        let powers: HashSet<Mat> = (0..order).map(|i| s_block.pow(f, i)).collect();
        for c in gl.iter().filter(|c| c.commutes(f, &e.matrix)) {
            let cb = c.conjugate(f, &p, &pi);
            let lower_zero = (h..n).all(|i| (0..h).all(|j| cb.get(i, j) == 0));
            let block = |off: usize| {
                let mut m = Mat::zero(h);
                for i in 0..h {
                    for j in 0..h {
                        m.set(i, j, cb.get(off + i, off + j));
                    }
                }
                m
            };
            ok &= lower_zero && powers.contains(&block(0)) && powers.contains(&block(h));
        }
        checked += 1;
    }
    Ok((checked, ok))
}

/// Converts a big count to `u64` when it fits.
pub fn small(v: &BigUint) -> Option<u64> {
    v.to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formula_values() {
        assert_eq!(sigma_formula(2, 2), BigUint::from(4u32));
        assert_eq!(sigma_formula(2, 3), BigUint::from(7u32));
        assert_eq!(sigma_formula(3, 2), BigUint::from(15u32));
        assert_eq!(sigma_formula(6, 2), BigUint::from(57010u32));
        assert_eq!(conjugate_count(2, 2, 2).unwrap(), BigUint::from(1u32));
        assert_eq!(conjugate_count(2, 3, 2).unwrap(), BigUint::from(3u32));
        assert_eq!(conjugate_count(3, 2, 3).unwrap(), BigUint::from(8u32));
        assert!(matches!(
            conjugate_count(3, 2, 2),
            Err(Error::NotADivisor { .. })
        ));
    }

    #[test]
    fn small_cover_and_brute_force() {
        let mr = MatRing::new(2, 2, Budget::default()).unwrap();
        let cert = build_cover(&mr).unwrap();
        assert!(cert.verified);
        assert_eq!(cert.size, BigUint::from(4u32));
        assert_eq!(brute_force_sigma(&mr).unwrap().size(), 4);
        assert_eq!(mr.maximal_subrings().unwrap().descriptors().len(), 4);
    }

    #[test]
    fn similarity_classes_are_complete() {
        for (n, q) in [(2, 2), (3, 2), (2, 3), (4, 2)] {
            let mr = MatRing::new(n, q, Budget::default()).unwrap();
            let v = charpoly_verification(&mr, prime_divisors(n as u32)[0]).unwrap();
            assert!(
                matches!(
                    v,
                    Verification::CharPoly {
                        classes_complete: true,
                        ..
                    }
                ),
                "{n} {q}: {v:?}"
            );
        }
    }
}
