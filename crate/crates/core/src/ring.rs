//! Finite rings presented by structure constants over a finite abelian group.
//!
//! The additive group is `Z/d_1 x ... x Z/d_k`. An element is stored as a single
//! index in `0..order` using mixed radix with coordinate 0 least significant, so
//! every subset of a ring is a bit set over those indices. Multiplication is the
//! bilinear extension of the basis products `e_i * e_j = table[i][j]`.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::bitset::ElemSet;
use crate::error::{Error, Result};

/// Element index in mixed-radix encoding.
pub type Elem = usize;

/// Rings up to this order carry precomputed addition and multiplication tables.
const TABLE_LIMIT: usize = 1024;
/// Hard cap on ring order; larger rings do not fit the element-index model.
const ORDER_LIMIT: usize = 1 << 24;

#[derive(Clone)]
struct OpTables {
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
}

#[derive(Clone)]
pub struct FiniteRing {
    moduli: Vec<u32>,
    /// Flattened `k x k` grid of coordinate vectors, entry `(i, j)` at `i * k + j`.
    table: Vec<Vec<u32>>,
    order: usize,
    place: Vec<usize>,
    ops: Option<OpTables>,
}

impl PartialEq for FiniteRing {
    fn eq(&self, other: &Self) -> bool {
        self.moduli == other.moduli && self.table == other.table
    }
}

impl Eq for FiniteRing {}

impl fmt::Debug for FiniteRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteRing")
            .field("moduli", &self.moduli)
            .field("table", &self.table_nested())
            .finish()
    }
}

/// On-disk form of a ring. Field order is fixed, which keeps the JSON byte-stable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingFile {
    pub moduli: Vec<u32>,
    pub table: Vec<Vec<Vec<u32>>>,
}

/// Validates structure constants and builds the ring.
pub fn make_ring(moduli: Vec<u32>, table: Vec<Vec<Vec<u32>>>) -> Result<FiniteRing> {
    let k = moduli.len();
    if table.len() != k || table.iter().any(|row| row.len() != k) {
        return Err(Error::IllFormed(format!("table must be {k} x {k}")));
    }
    let flat: Vec<Vec<u32>> = table.into_iter().flatten().collect();
    FiniteRing::from_flat(moduli, flat)
}

impl FiniteRing {
    pub(crate) fn from_flat(moduli: Vec<u32>, table: Vec<Vec<u32>>) -> Result<FiniteRing> {
        let k = moduli.len();
        if let Some(&d) = moduli.iter().find(|&&d| d < 2) {
            return Err(Error::IllFormed(format!("additive modulus {d} is below 2")));
        }
        if table.len() != k * k {
            return Err(Error::IllFormed(format!(
                "table must have {} entries",
                k * k
            )));
        }
        let mut order: usize = 1;
        let mut place = Vec::with_capacity(k);
        for &d in &moduli {
            place.push(order);
            order = order
                .checked_mul(d as usize)
                .filter(|&o| o <= ORDER_LIMIT)
                .ok_or_else(|| Error::IllFormed("ring order too large".into()))?;
        }
        for (idx, v) in table.iter().enumerate() {
            if v.len() != k {
                return Err(Error::IllFormed(format!(
                    "product e{}*e{} has {} coordinates, expected {k}",
                    idx / k,
                    idx % k,
                    v.len()
                )));
            }
            if let Some(t) = (0..k).find(|&t| v[t] >= moduli[t]) {
                return Err(Error::IllFormed(format!(
                    "product e{}*e{} coordinate {t} is {} but modulus is {}",
                    idx / k,
                    idx % k,
                    v[t],
                    moduli[t]
                )));
            }
        }
        let mut ring = FiniteRing {
            moduli,
            table,
            order,
            place,
            ops: None,
        };
        ring.check_bilinear()?;
        ring.check_associative()?;
        if order <= TABLE_LIMIT {
            ring.ops = Some(ring.build_tables());
        }
        Ok(ring)
    }

    fn check_bilinear(&self) -> Result<()> {
        let k = self.rank();
        for i in 0..k {
            for j in 0..k {
                let c = &self.table[i * k + j];
                for (which, d) in [(i, self.moduli[i]), (j, self.moduli[j])] {
                    if !self.scale_vec(c, d).iter().all(|&x| x == 0) {
                        return Err(Error::IllFormed(format!(
                            "{d} * (e{i}*e{j}) != 0 although e{which} has additive order {d}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn check_associative(&self) -> Result<()> {
        let k = self.rank();
        for i in 0..k {
            for j in 0..k {
                for l in 0..k {
                    let left = self.vec_times_basis(&self.table[i * k + j], l);
                    let right = self.basis_times_vec(i, &self.table[j * k + l]);
                    if left != right {
                        return Err(Error::NotAssociative(i, j, l));
                    }
                }
            }
        }
        Ok(())
    }

    /// `v * e_l` for a coordinate vector `v`.
    fn vec_times_basis(&self, v: &[u32], l: usize) -> Vec<u32> {
        let k = self.rank();
        let mut out = vec![0u32; k];
        for (t, &coef) in v.iter().enumerate() {
            if coef != 0 {
                self.acc_scaled(&mut out, &self.table[t * k + l], coef);
            }
        }
        out
    }

    /// `e_i * v` for a coordinate vector `v`.
    fn basis_times_vec(&self, i: usize, v: &[u32]) -> Vec<u32> {
        let k = self.rank();
        let mut out = vec![0u32; k];
        for (t, &coef) in v.iter().enumerate() {
            if coef != 0 {
                self.acc_scaled(&mut out, &self.table[i * k + t], coef);
            }
        }
        out
    }

    fn acc_scaled(&self, acc: &mut [u32], v: &[u32], coef: u32) {
        for t in 0..acc.len() {
            let d = self.moduli[t] as u64;
            acc[t] = ((acc[t] as u64 + coef as u64 * v[t] as u64) % d) as u32;
        }
    }

    fn scale_vec(&self, v: &[u32], s: u32) -> Vec<u32> {
        v.iter()
            .zip(&self.moduli)
            .map(|(&x, &d)| ((x as u64 * s as u64) % d as u64) as u32)
            .collect()
    }

    fn build_tables(&self) -> OpTables {
        let n = self.order;
        let coords: Vec<Vec<u32>> = (0..n).map(|x| self.coords(x)).collect();
        let mut add = vec![0u32; n * n];
        let mut mul = vec![0u32; n * n];
        let mut neg = vec![0u32; n];
        for a in 0..n {
            neg[a] = self.neg_slow(&coords[a]) as u32;
            for b in 0..n {
                add[a * n + b] = self.add_slow(&coords[a], &coords[b]) as u32;
                mul[a * n + b] = self.mul_slow(&coords[a], &coords[b]) as u32;
            }
        }
        OpTables { add, mul, neg }
    }

    fn add_slow(&self, a: &[u32], b: &[u32]) -> Elem {
        let v: Vec<u32> = (0..self.rank())
            .map(|t| (a[t] + b[t]) % self.moduli[t])
            .collect();
        self.elem(&v)
    }

    fn neg_slow(&self, a: &[u32]) -> Elem {
        let v: Vec<u32> = (0..self.rank())
            .map(|t| (self.moduli[t] - a[t]) % self.moduli[t])
            .collect();
        self.elem(&v)
    }

    fn mul_slow(&self, a: &[u32], b: &[u32]) -> Elem {
        let k = self.rank();
        let mut out = vec![0u32; k];
        for i in 0..k {
            if a[i] == 0 {
                continue;
            }
            for j in 0..k {
                if b[j] == 0 {
                    continue;
                }
                let coef = (a[i] as u64 * b[j] as u64) as u32;
                self.acc_scaled(&mut out, &self.table[i * k + j], coef);
            }
        }
        self.elem(&out)
    }

    pub fn moduli(&self) -> &[u32] {
        &self.moduli
    }

    /// Number of cyclic summands in the additive presentation.
    pub fn rank(&self) -> usize {
        self.moduli.len()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn zero(&self) -> Elem {
        0
    }

    /// Basis products `e_i * e_j` as a nested `k x k` grid.
    pub fn table_nested(&self) -> Vec<Vec<Vec<u32>>> {
        let k = self.rank();
        (0..k)
            .map(|i| (0..k).map(|j| self.table[i * k + j].clone()).collect())
            .collect()
    }

    pub fn product_coords(&self, i: usize, j: usize) -> &[u32] {
        &self.table[i * self.rank() + j]
    }

    /// Index of basis element `e_i`.
    pub fn basis(&self, i: usize) -> Elem {
        self.place[i]
    }

    pub fn coords(&self, x: Elem) -> Vec<u32> {
        self.place
            .iter()
            .zip(&self.moduli)
            .map(|(&p, &d)| ((x / p) % d as usize) as u32)
            .collect()
    }

    pub fn elem(&self, coords: &[u32]) -> Elem {
        coords
            .iter()
            .zip(&self.place)
            .zip(&self.moduli)
            .map(|((&c, &p), &d)| (c % d) as usize * p)
            .sum()
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        match &self.ops {
            Some(t) => t.add[a * self.order + b] as Elem,
            None => self.add_slow(&self.coords(a), &self.coords(b)),
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        match &self.ops {
            Some(t) => t.neg[a] as Elem,
            None => self.neg_slow(&self.coords(a)),
        }
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.ops {
            Some(t) => t.mul[a * self.order + b] as Elem,
            None => self.mul_slow(&self.coords(a), &self.coords(b)),
        }
    }

    /// `m * a` in the additive group.
    pub fn scalar(&self, m: u64, a: Elem) -> Elem {
        let v: Vec<u32> = self
            .coords(a)
            .iter()
            .zip(&self.moduli)
            .map(|(&c, &d)| ((c as u64 * m) % d as u64) as u32)
            .collect();
        self.elem(&v)
    }

    /// Additive order of an element.
    pub fn additive_order(&self, a: Elem) -> u32 {
        self.coords(a)
            .iter()
            .zip(&self.moduli)
            .map(|(&c, &d)| d / gcd(c, d))
            .fold(1, lcm)
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.order
    }

    pub fn is_commutative(&self) -> bool {
        let k = self.rank();
        (0..k).all(|i| (0..k).all(|j| self.table[i * k + j] == self.table[j * k + i]))
    }

    pub fn is_zero_ring(&self) -> bool {
        self.table.iter().all(|v| v.iter().all(|&c| c == 0))
    }

    /// The two-sided multiplicative identity, if there is one.
    pub fn identity(&self) -> Option<Elem> {
        let k = self.rank();
        self.elements().find(|&e| {
            (0..k).all(|i| {
                let b = self.basis(i);
                self.mul(e, b) == b && self.mul(b, e) == b
            })
        })
    }

    pub fn has_identity(&self) -> bool {
        self.identity().is_some()
    }

    /// Same additive group with reversed multiplication.
    pub fn opposite(&self) -> FiniteRing {
        let k = self.rank();
        let table = (0..k * k)
            .map(|idx| self.table[(idx % k) * k + idx / k].clone())
            .collect();
        FiniteRing::from_flat(self.moduli.clone(), table)
            .expect("opposite of a valid ring is valid")
    }

    /// The ideal `{r + r}`.
    pub fn two_r(&self) -> ElemSet {
        ElemSet::from_iter(self.order, self.elements().map(|r| self.add(r, r)))
    }

    /// `{a : aR = 0}` and `{a : Ra = 0}`.
    pub fn left_annihilator(&self) -> ElemSet {
        let k = self.rank();
        ElemSet::from_iter(
            self.order,
            self.elements()
                .filter(|&a| (0..k).all(|i| self.mul(a, self.basis(i)) == 0)),
        )
    }

    pub fn right_annihilator(&self) -> ElemSet {
        let k = self.rank();
        ElemSet::from_iter(
            self.order,
            self.elements()
                .filter(|&a| (0..k).all(|i| self.mul(self.basis(i), a) == 0)),
        )
    }

    /// Sizes of the left annihilator `{a : aR = 0}` and right annihilator `{a : Ra = 0}`.
    pub fn annihilator_sizes(&self) -> (usize, usize) {
        (
            self.left_annihilator().len(),
            self.right_annihilator().len(),
        )
    }

    /// Adjoins an identity `u`. The new summand `<u>` has order equal to the
    /// exponent of `(R,+)` (at least 2), so when `2R = 0` this is `R + <u>` with
    /// `u + u = 0` and the order doubles.
    ///
    /// Returns the new ring, the embedding of `R` (element indices are preserved)
    /// and the index of `u`.
    pub fn unitalize(&self) -> (FiniteRing, Vec<Elem>, Elem) {
        let k = self.rank();
        let m = self.moduli.iter().copied().fold(1, lcm).max(2);
        let mut moduli = self.moduli.clone();
        moduli.push(m);
        let unit_vec = |t: usize| {
            let mut v = vec![0u32; k + 1];
            v[t] = 1;
            v
        };
        let mut table = Vec::with_capacity((k + 1) * (k + 1));
        for i in 0..=k {
            for j in 0..=k {
                let v = if i < k && j < k {
                    let mut v = self.table[i * k + j].clone();
                    v.push(0);
                    v
                } else if i == k {
                    unit_vec(j)
                } else {
                    unit_vec(i)
                };
                table.push(v);
            }
        }
        let ring = FiniteRing::from_flat(moduli, table).expect("unitalization is a valid ring");
        let unit = ring.basis(k);
        (ring, self.elements().collect(), unit)
    }

    /// Componentwise ring on concatenated moduli. The pair `(a, b)` has index
    /// `a + |R1| * b`.
    pub fn direct_sum(&self, other: &FiniteRing) -> FiniteRing {
        let (k1, k2) = (self.rank(), other.rank());
        let k = k1 + k2;
        let mut moduli = self.moduli.clone();
        moduli.extend_from_slice(&other.moduli);
        let mut table = vec![vec![0u32; k]; k * k];
        for i in 0..k1 {
            for j in 0..k1 {
                table[i * k + j][..k1].copy_from_slice(&self.table[i * k1 + j]);
            }
        }
        for i in 0..k2 {
            for j in 0..k2 {
                table[(k1 + i) * k + k1 + j][k1..].copy_from_slice(&other.table[i * k2 + j]);
            }
        }
        FiniteRing::from_flat(moduli, table).expect("direct sum of valid rings is valid")
    }

    /// The ring with one element.
    pub fn trivial() -> FiniteRing {
        FiniteRing::from_flat(vec![], vec![]).expect("trivial ring")
    }

    pub fn to_file(&self) -> RingFile {
        RingFile {
            moduli: self.moduli.clone(),
            table: self.table_nested(),
        }
    }

    /// Canonical single-line JSON followed by a newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(&self.to_file()).expect("ring serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<FiniteRing> {
        let f: RingFile = serde_json::from_str(text)?;
        FiniteRing::from_file(&f)
    }

    pub fn from_file(f: &RingFile) -> Result<FiniteRing> {
        make_ring(f.moduli.clone(), f.table.clone())
    }

    pub fn format_elem(&self, x: Elem) -> String {
        let c: Vec<String> = self.coords(x).iter().map(|c| c.to_string()).collect();
        format!("({})", c.join(","))
    }

    /// Checks associativity on every element triple, independent of the basis check.
    pub fn is_associative_exhaustive(&self) -> bool {
        let n = self.order;
        (0..n).all(|a| {
            (0..n).all(|b| {
                let ab = self.mul(a, b);
                (0..n).all(|c| self.mul(ab, c) == self.mul(a, self.mul(b, c)))
            })
        })
    }
}

pub(crate) fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: u32, b: u32) -> u32 {
    a / gcd(a, b) * b
}

/// Builds a ring from an explicit finite subring of some ambient ring.
///
/// `elements` must be closed under `add` and `mul` and contain `zero`. Returns the
/// ring and, for each input position, the index of the corresponding element.
pub fn ring_from_elements<T, A, M>(
    elements: &[T],
    zero: &T,
    add: A,
    mul: M,
) -> Result<(FiniteRing, Vec<Elem>)>
where
    T: Clone + Eq + Hash + fmt::Debug,
    A: Fn(&T, &T) -> T,
    M: Fn(&T, &T) -> T,
{
    let n = elements.len();
    let pos: HashMap<&T, usize> = elements.iter().enumerate().map(|(i, t)| (t, i)).collect();
    if pos.len() != n {
        return Err(Error::NotClosed("element list contains duplicates".into()));
    }
    let zero_pos = *pos
        .get(zero)
        .ok_or_else(|| Error::NotClosed("zero is missing".into()))?;
    let mut add_t = vec![0usize; n * n];
    let mut mul_t = vec![0usize; n * n];
    for a in 0..n {
        for b in 0..n {
            let s = add(&elements[a], &elements[b]);
            add_t[a * n + b] = *pos.get(&s).ok_or_else(|| {
                Error::NotClosed(format!("{:?} + {:?}", elements[a], elements[b]))
            })?;
            let p = mul(&elements[a], &elements[b]);
            mul_t[a * n + b] = *pos.get(&p).ok_or_else(|| {
                Error::NotClosed(format!("{:?} * {:?}", elements[a], elements[b]))
            })?;
        }
    }
    ring_from_tables(n, zero_pos, &add_t, &mul_t)
}

/// As [`ring_from_elements`], with elements given by position and operation tables.
pub(crate) fn ring_from_tables(
    n: usize,
    zero: usize,
    add_t: &[usize],
    mul_t: &[usize],
) -> Result<(FiniteRing, Vec<Elem>)> {
    let basis = crate::abelian::abelian_basis(n, zero, |a, b| add_t[a * n + b]);
    let moduli: Vec<u32> = basis.iter().map(|&(_, d)| d).collect();
    // Position of every coefficient vector, enumerated in mixed-radix order.
    let mut by_index = vec![zero; 1];
    for &(g, d) in &basis {
        let prev = by_index.clone();
        let mut multiple = zero;
        for _ in 1..d {
            multiple = add_t[multiple * n + g];
            by_index.extend(prev.iter().map(|&h| add_t[h * n + multiple]));
        }
    }
    if by_index.len() != n {
        return Err(Error::IllFormed("additive basis does not span".into()));
    }
    let mut index_of = vec![usize::MAX; n];
    for (idx, &p) in by_index.iter().enumerate() {
        if index_of[p] != usize::MAX {
            return Err(Error::IllFormed("additive basis is not independent".into()));
        }
        index_of[p] = idx;
    }
    let probe = FiniteRing::from_flat(
        moduli.clone(),
        vec![vec![0; basis.len()]; basis.len() * basis.len()],
    )?;
    let k = basis.len();
    let mut table = Vec::with_capacity(k * k);
    for &(gi, _) in &basis {
        for &(gj, _) in &basis {
            table.push(probe.coords(index_of[mul_t[gi * n + gj]]));
        }
    }
    let ring = FiniteRing::from_flat(moduli, table)?;
    for a in 0..n {
        for b in 0..n {
            if ring.mul(index_of[a], index_of[b]) != index_of[mul_t[a * n + b]]
                || ring.add(index_of[a], index_of[b]) != index_of[add_t[a * n + b]]
            {
                return Err(Error::IllFormed("operation tables are not a ring".into()));
            }
        }
    }
    Ok((ring, index_of))
}
