//! Exhaustive classification of good rings of order 4 and 8.
//!
//! Multiplication tables on `(Z/2)^k` are enumerated entry by entry with
//! associativity checked on every basis triple as soon as it is determined.
//! Surviving tables are reduced to a canonical form over all bases and tested
//! for goodness with a bitmask check; each isomorphism class is then re-tested
//! with the generic subring machinery. The other additive groups of the same
//! order are enumerated too.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::covering::{good_triples_exhaustive, good_tuples, GoodTuple};
use crate::error::{Error, Result};
use crate::lattice::{canonical_form, is_isomorphic, DEFAULT_BOUND};
use crate::ring::{make_ring, FiniteRing};

/// Multiplication table on `(Z/2)^k`: entry `i*k + j` is `e_i e_j` as a bitmask.
type Table = Vec<u8>;

fn bits(x: u8) -> impl Iterator<Item = usize> {
    (0..8).filter(move |&i| x >> i & 1 == 1)
}

fn mul(t: &[u8], k: usize, a: u8, b: u8) -> u8 {
    let mut r = 0;
    for i in bits(a) {
        for j in bits(b) {
            r ^= t[i * k + j];
        }
    }
    r
}

/// `(e_i e_j) e_l == e_i (e_j e_l)` on every triple whose entries are all among
/// the first `assigned` table positions.
fn associative_so_far(t: &[u8], k: usize, assigned: usize) -> bool {
    let known = |i: usize, j: usize| i * k + j < assigned;
    for i in 0..k {
        for j in 0..k {
            if !known(i, j) {
                continue;
            }
            let ij = t[i * k + j];
            for l in 0..k {
                if !known(j, l) {
                    continue;
                }
                let jl = t[j * k + l];
                if !bits(ij).all(|s| known(s, l)) || !bits(jl).all(|s| known(i, s)) {
                    continue;
                }
                let left = bits(ij).fold(0, |acc, s| acc ^ t[s * k + l]);
                let right = bits(jl).fold(0, |acc, s| acc ^ t[i * k + s]);
                if left != right {
                    return false;
                }
            }
        }
    }
    true
}

fn parity(x: u8) -> bool {
    x.count_ones() % 2 == 1
}

/// Bitmask goodness test. Three index-2 subgroups cover `(Z/2)^k` exactly when
/// their defining functionals sum to zero.
fn fast_is_good(t: &[u8], k: usize) -> bool {
    let n = 1u8 << k;
    let hyper = |f: u8| (0..n).filter(move |&x| !parity(f & x));
    let is_subring = |f: u8| hyper(f).all(|a| hyper(f).all(|b| !parity(f & mul(t, k, a, b))));
    let subring_fns: Vec<u8> = (1..n).filter(|&f| is_subring(f)).collect();
    for (ai, &f1) in subring_fns.iter().enumerate() {
        for &f2 in &subring_fns[ai + 1..] {
            let f3 = f1 ^ f2;
            if f3 < f2 || !subring_fns.contains(&f3) {
                continue;
            }
            let core: Vec<u8> = (0..n)
                .filter(|&x| !parity(f1 & x) && !parity(f2 & x))
                .collect();
            let in_core = |x: u8| core.contains(&x);
            let ideal_free = core.iter().filter(|&&s| s != 0).all(|&s| {
                let mut ideal: u32 = 1 | 1 << s;
                let mut frontier = vec![s];
                while let Some(z) = frontier.pop() {
                    let mut next: Vec<u8> = (0..k)
                        .flat_map(|i| [mul(t, k, 1 << i, z), mul(t, k, z, 1 << i)])
                        .collect();
                    next.extend((0..n).filter(|&w| ideal >> w & 1 == 1).map(|w| w ^ z));
                    for v in next {
                        if ideal >> v & 1 == 0 {
                            ideal |= 1 << v;
                            frontier.push(v);
                        }
                    }
                }
                (0..n).any(|v| ideal >> v & 1 == 1 && !in_core(v))
            });
            if ideal_free {
                return true;
            }
        }
    }
    false
}

/// All ordered bases of `(Z/2)^k` as lists of bitmasks.
fn bases(k: usize) -> Vec<Vec<u8>> {
    fn extend(k: usize, cur: &mut Vec<u8>, span: u32, out: &mut Vec<Vec<u8>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in 1u8..1 << k {
            if span >> v & 1 == 1 {
                continue;
            }
            let mut grown = span;
            for w in 0u8..1 << k {
                if span >> w & 1 == 1 {
                    grown |= 1 << (w ^ v);
                }
            }
            cur.push(v);
            extend(k, cur, grown, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    extend(k, &mut Vec::new(), 1, &mut out);
    out
}

/// Lexicographically least table over all changes of basis.
fn canonical(t: &[u8], k: usize, all_bases: &[Vec<u8>]) -> Table {
    let n = 1usize << k;
    let mut best: Option<Table> = None;
    let mut coords = vec![0u8; n];
    for b in all_bases {
        for c in 0..n as u8 {
            let v = bits(c).fold(0u8, |acc, i| acc ^ b[i]);
            coords[usize::from(v)] = c;
        }
        let mut cand = Vec::with_capacity(k * k);
        let mut worse = false;
        for i in 0..k {
            for j in 0..k {
                let v = coords[usize::from(mul(t, k, b[i], b[j]))];
                if !worse {
                    if let Some(bt) = &best {
                        let pos = cand.len();
                        if v > bt[pos] && cand[..] == bt[..pos] {
                            worse = true;
                        }
                    }
                }
                cand.push(v);
            }
            if worse {
                break;
            }
        }
        if !worse && best.as_ref().is_none_or(|bt| cand < *bt) {
            best = Some(cand);
        }
    }
    best.expect("at least one basis")
}

fn table_to_ring(t: &[u8], k: usize) -> FiniteRing {
    let table = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| (0..k).map(|b| u32::from(t[i * k + j] >> b & 1)).collect())
                .collect()
        })
        .collect();
    make_ring(vec![2; k], table).expect("enumerated tables are associative")
}

#[derive(Clone, Debug)]
struct ClassAcc {
    tables: u64,
    good: bool,
}

fn enumerate_prefix(
    k: usize,
    prefix: &[u8],
    all_bases: &[Vec<u8>],
) -> (u64, BTreeMap<Table, ClassAcc>) {
    fn descend(
        k: usize,
        t: &mut Vec<u8>,
        all_bases: &[Vec<u8>],
        nodes: &mut u64,
        out: &mut BTreeMap<Table, ClassAcc>,
    ) {
        *nodes += 1;
        if t.len() == k * k {
            let key = canonical(t, k, all_bases);
            let good = fast_is_good(t, k);
            let acc = out.entry(key).or_insert(ClassAcc { tables: 0, good });
            assert_eq!(
                acc.good, good,
                "goodness must be invariant under change of basis"
            );
            acc.tables += 1;
            return;
        }
        for v in 0u8..1 << k {
            t.push(v);
            if associative_so_far(t, k, t.len()) {
                descend(k, t, all_bases, nodes, out);
            }
            t.pop();
        }
    }
    let mut t = prefix.to_vec();
    let mut nodes = 0;
    let mut out = BTreeMap::new();
    if associative_so_far(&t, k, t.len()) {
        descend(k, &mut t, all_bases, &mut nodes, &mut out);
    }
    (nodes, out)
}

/// A good isomorphism class with a representative and one of its good tuples.
#[derive(Clone, Debug)]
pub struct GoodClass {
    pub ring: FiniteRing,
    pub tuple: GoodTuple,
    /// Number of enumerated tables in the class.
    pub tables: u64,
    /// Matching catalog entry id.
    pub catalog: Option<u8>,
}

/// Summary of one additive group's enumeration.
#[derive(Clone, Debug)]
pub struct GroupScan {
    pub moduli: Vec<u32>,
    pub tables_tried: u64,
    pub rings: u64,
    pub good: u64,
    /// One ring per isomorphism class.
    pub classes: Vec<FiniteRing>,
}

#[derive(Clone, Debug)]
pub struct ClassifyReport {
    pub order: usize,
    /// Search-tree nodes visited on `(Z/2)^k`.
    pub nodes: u64,
    pub associative_tables: u64,
    /// Isomorphism classes of all rings on `(Z/2)^k`.
    pub ring_classes: usize,
    /// One ring per isomorphism class on `(Z/2)^k`.
    pub all_classes: Vec<FiniteRing>,
    pub classes: Vec<GoodClass>,
    pub other_groups: Vec<GroupScan>,
    /// The bitmask and generic goodness tests agree on every class.
    pub fast_check_agrees: bool,
    /// The index-2 search finds the same good triples as the all-subrings search.
    pub index_two_agrees: bool,
}

impl ClassifyReport {
    /// Catalog ids matched, in class order.
    pub fn matched_ids(&self) -> Vec<Option<u8>> {
        self.classes.iter().map(|c| c.catalog).collect()
    }
}

fn other_groups(order: usize) -> Vec<Vec<u32>> {
    match order {
        4 => vec![vec![4]],
        8 => vec![vec![4, 2], vec![8]],
        _ => Vec::new(),
    }
}

/// Coordinate vectors annihilated by `d`.
fn killed_by(moduli: &[u32], d: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for &m in moduli {
        let step = m / crate::ring::gcd(m, d);
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..m).filter(move |c| c % step == 0).map(move |c| {
                    let mut w = v.clone();
                    w.push(c);
                    w
                })
            })
            .collect();
    }
    out
}

fn scan_group(moduli: &[u32]) -> Result<GroupScan> {
    let k = moduli.len();
    let choices: Vec<Vec<Vec<u32>>> = (0..k * k)
        .map(|p| killed_by(moduli, crate::ring::gcd(moduli[p / k], moduli[p % k])))
        .collect();
    let total: u64 = choices.iter().map(|c| c.len() as u64).product();
    let mut scan = GroupScan {
        moduli: moduli.to_vec(),
        tables_tried: total,
        rings: 0,
        good: 0,
        classes: Vec::new(),
    };
    let mut seen = BTreeSet::new();
    for mut idx in 0..total {
        let mut flat = Vec::with_capacity(k * k);
        for c in &choices {
            flat.push(c[(idx % c.len() as u64) as usize].clone());
            idx /= c.len() as u64;
        }
        let table = flat.chunks(k).map(|row| row.to_vec()).collect();
        let Ok(r) = make_ring(moduli.to_vec(), table) else {
            continue;
        };
        scan.rings += 1;
        if !good_tuples(&r, DEFAULT_BOUND)?.is_empty() {
            scan.good += 1;
        }
        if seen.insert(canonical_form(&r, DEFAULT_BOUND)?) {
            scan.classes.push(r);
        }
    }
    Ok(scan)
}

/// All good rings of order 4 or 8 up to isomorphism, matched against the catalog.
pub fn classify_good_rings(order: usize) -> Result<ClassifyReport> {
    let k = match order {
        4 => 2,
        8 => 3,
        _ => {
            return Err(Error::IllFormed(format!(
                "classification is available for orders 4 and 8, not {order}"
            )))
        }
    };
    let all_bases = bases(k);
    let prefixes: Vec<Vec<u8>> = (0u8..1 << k)
        .flat_map(|a| (0u8..1 << k).map(move |b| vec![a, b]))
        .collect();
    let parts: Vec<(u64, BTreeMap<Table, ClassAcc>)> = prefixes
        .par_iter()
        .map(|p| enumerate_prefix(k, p, &all_bases))
        .collect();
    let mut nodes = 0;
    let mut classes: BTreeMap<Table, ClassAcc> = BTreeMap::new();
    for (n, part) in parts {
        nodes += n;
        for (key, acc) in part {
            let e = classes.entry(key).or_insert(ClassAcc {
                tables: 0,
                good: acc.good,
            });
            e.tables += acc.tables;
        }
    }
    let associative_tables = classes.values().map(|c| c.tables).sum();
    let checked: Vec<Result<(bool, bool, Option<GoodTuple>)>> = classes
        .par_iter()
        .map(|(key, acc)| {
            let r = table_to_ring(key, k);
            let tuples = good_tuples(&r, DEFAULT_BOUND)?;
            let mut index_two: Vec<_> = crate::covering::index_two_subrings(&r, DEFAULT_BOUND)?
                .into_iter()
                .map(|s| s.into_members())
                .collect();
            index_two.sort();
            let mut from_index = crate::covering::good_triples_among(&r, &index_two)
                .iter()
                .map(GoodTuple::sorted_members)
                .collect::<Vec<_>>();
            let mut from_all: Vec<_> = good_triples_exhaustive(&r, DEFAULT_BOUND)?
                .iter()
                .map(GoodTuple::sorted_members)
                .collect();
            from_index.sort();
            from_all.sort();
            Ok((
                acc.good == !tuples.is_empty(),
                from_index == from_all,
                tuples.into_iter().next(),
            ))
        })
        .collect();
    let mut fast_check_agrees = true;
    let mut index_two_agrees = true;
    let mut good = Vec::new();
    for ((key, acc), res) in classes.iter().zip(checked) {
        let (fast_ok, index_ok, tuple) = res?;
        fast_check_agrees &= fast_ok;
        index_two_agrees &= index_ok;
        if let Some(tuple) = tuple {
            let ring = table_to_ring(key, k);
            let catalog = crate::catalog::all()
                .iter()
                .find(|e| {
                    e.ring.order() == order
                        && matches!(is_isomorphic(&ring, &e.ring, DEFAULT_BOUND), Ok(Some(_)))
                })
                .map(|e| e.id);
            good.push(GoodClass {
                ring,
                tuple,
                tables: acc.tables,
                catalog,
            });
        }
    }
    good.sort_by_key(|c| (c.catalog.is_none(), c.catalog));
    let other_groups = other_groups(order)
        .iter()
        .map(|m| scan_group(m))
        .collect::<Result<Vec<_>>>()?;
    Ok(ClassifyReport {
        order,
        nodes,
        associative_tables,
        ring_classes: classes.len(),
        all_classes: classes.keys().map(|key| table_to_ring(key, k)).collect(),
        classes: good,
        other_groups,
        fast_check_agrees,
        index_two_agrees,
    })
}

/// For each class, the index of the class containing its opposite ring.
pub fn opposite_permutation(classes: &[GoodClass]) -> Result<Vec<Option<usize>>> {
    classes
        .iter()
        .map(|c| {
            let op = c.ring.opposite();
            for (j, d) in classes.iter().enumerate() {
                if is_isomorphic(&op, &d.ring, DEFAULT_BOUND)?.is_some() {
                    return Ok(Some(j));
                }
            }
            Ok(None)
        })
        .collect()
}
