#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ringcover::catalog;
use ringcover::classify::classify_good_rings;
use ringcover::lattice::{canonical_form, DEFAULT_BOUND};
use ringcover::matring::field_ring;
use ringcover::ring::ring_from_elements;
use ringcover::FiniteRing;

/// 3x3 matrices over Z/2 as 9-bit masks, bit `3i + j` = entry (i, j).
fn m3_mul(a: u16, b: u16) -> u16 {
    let mut out = 0;
    for i in 0..3 {
        for j in 0..3 {
            let mut s = 0;
            for k in 0..3 {
                s ^= (a >> (3 * i + k)) & (b >> (3 * k + j)) & 1;
            }
            out |= s << (3 * i + j);
        }
    }
    out
}

/// Subring of `M_3(Z/2)` generated by `gens`, or `None` once it exceeds `cap` elements.
fn m3_closure(gens: &[u16], cap: usize) -> Option<Vec<u16>> {
    let mut set: BTreeSet<u16> = BTreeSet::from([0]);
    set.extend(gens);
    loop {
        let cur: Vec<u16> = set.iter().copied().collect();
        let mut grew = false;
        for &a in &cur {
            for &b in &cur {
                for c in [a ^ b, m3_mul(a, b)] {
                    grew |= set.insert(c);
                }
            }
        }
        if set.len() > cap {
            return None;
        }
        if !grew {
            return Some(set.into_iter().collect());
        }
    }
}

/// `count` pairwise non-isomorphic subrings of `M_3(Z/2)` of order 16 from random generators.
pub fn random_order16(count: usize, seed: u64) -> Vec<FiniteRing> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    while out.len() < count {
        let gens: Vec<u16> = (0..rng.gen_range(2..=3))
            .map(|_| rng.gen_range(1..512))
            .collect();
        let Some(elems) = m3_closure(&gens, 16) else {
            continue;
        };
        if elems.len() != 16 {
            continue;
        }
        let (r, _) = ring_from_elements(&elems, &0, |a, b| a ^ b, |a, b| m3_mul(*a, *b))
            .expect("closed set");
        if seen.insert(canonical_form(&r, DEFAULT_BOUND).expect("small ring")) {
            out.push(r);
        }
    }
    out
}

/// One ring from every isomorphism class of order 4 and 8.
pub fn all_small_rings() -> Vec<FiniteRing> {
    let mut out = Vec::new();
    for order in [4, 8] {
        let rep = classify_good_rings(order).expect("classification runs");
        out.extend(rep.all_classes);
        for g in rep.other_groups {
            out.extend(g.classes);
        }
    }
    out
}

/// Enumerated good rings, the catalog, two semisimple rings and random order-16 rings.
pub fn corpus() -> Vec<(String, FiniteRing)> {
    let mut out = Vec::new();
    for order in [4, 8] {
        for (i, c) in classify_good_rings(order)
            .expect("classification runs")
            .classes
            .into_iter()
            .enumerate()
        {
            out.push((format!("good order {order} class {}", i + 1), c.ring));
        }
    }
    out.extend(catalog::all().iter().map(|e| (e.label(), e.ring.clone())));
    out.push(("GF(8)".into(), field_ring(8).expect("field")));
    out.push((
        "GF(4)+GF(2)".into(),
        field_ring(4)
            .expect("field")
            .direct_sum(&field_ring(2).expect("field")),
    ));
    for (i, r) in random_order16(10, 7).into_iter().enumerate() {
        out.push((format!("random order 16 #{}", i + 1), r));
    }
    out
}
