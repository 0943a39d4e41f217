mod common;

use std::sync::OnceLock;

use proptest::prelude::*;
use ringcover::catalog;
use ringcover::lattice::{
    ideals, is_ideal, is_isomorphic, is_subring, jacobson_radical, quotient, subrings,
    DEFAULT_BOUND,
};
use ringcover::{make_ring, FiniteRing};

fn corpus() -> &'static [FiniteRing] {
    static CORPUS: OnceLock<Vec<FiniteRing>> = OnceLock::new();
    CORPUS.get_or_init(|| {
        let mut v = common::all_small_rings();
        v.extend(catalog::all().iter().map(|e| e.ring.clone()));
        v.extend(common::random_order16(6, 11));
        v
    })
}

/// Product of coordinate vectors from the structure constants, computed independently.
fn raw_mul(moduli: &[u32], table: &[Vec<Vec<u32>>], a: &[u32], b: &[u32]) -> Vec<u32> {
    let k = moduli.len();
    let mut out = vec![0u64; k];
    for i in 0..k {
        for j in 0..k {
            for t in 0..k {
                out[t] += u64::from(a[i]) * u64::from(b[j]) * u64::from(table[i][j][t]);
            }
        }
    }
    out.iter()
        .zip(moduli)
        .map(|(&v, &m)| (v % u64::from(m)) as u32)
        .collect()
}

fn raw_associative(moduli: &[u32], table: &[Vec<Vec<u32>>]) -> bool {
    let k = moduli.len();
    let e = |i: usize| {
        let mut v = vec![0; k];
        v[i] = 1;
        v
    };
    (0..k).all(|i| {
        (0..k).all(|j| {
            (0..k).all(|l| {
                let ab = raw_mul(moduli, table, &e(i), &e(j));
                let bc = raw_mul(moduli, table, &e(j), &e(l));
                raw_mul(moduli, table, &ab, &e(l)) == raw_mul(moduli, table, &e(i), &bc)
            })
        })
    })
}

fn ring_strategy() -> impl Strategy<Value = FiniteRing> {
    (0..corpus().len()).prop_map(|i| corpus()[i].clone())
}

fn table_strategy() -> impl Strategy<Value = (Vec<u32>, Vec<Vec<Vec<u32>>>)> {
    prop_oneof![
        Just(vec![2u32, 2]),
        Just(vec![2u32, 2, 2]),
        Just(vec![4u32, 2]),
        Just(vec![3u32, 3])
    ]
    .prop_flat_map(|moduli| {
        let k = moduli.len();
        let m = moduli.clone();
        let entry = m.iter().map(|&d| 0..d).collect::<Vec<_>>();
        (
            Just(moduli),
            proptest::collection::vec(proptest::collection::vec(entry, k), k),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn basis_validation_matches_structure_constants((moduli, table) in table_strategy()) {
        // well-definedness: e_i e_j must be killed by gcd of the two orders
        let k = moduli.len();
        let well_defined = (0..k).all(|i| (0..k).all(|j| {
            let g = num_integer::gcd(moduli[i], moduli[j]);
            table[i][j].iter().zip(&moduli).all(|(&c, &m)| (u64::from(c) * u64::from(g)) % u64::from(m) == 0)
        }));
        let expected = well_defined && raw_associative(&moduli, &table);
        let built = make_ring(moduli, table);
        prop_assert_eq!(built.is_ok(), expected);
        if let Ok(r) = built {
            prop_assert!(r.is_associative_exhaustive());
        }
    }

    #[test]
    fn opposite_is_an_involution(r in ring_strategy()) {
        prop_assert_eq!(r.opposite().opposite().to_file(), r.to_file());
    }

    #[test]
    fn annihilator_sizes_swap_under_opposite(r in ring_strategy()) {
        let (l, rt) = r.annihilator_sizes();
        prop_assert_eq!(r.opposite().annihilator_sizes(), (rt, l));
    }

    #[test]
    fn two_r_is_an_ideal(r in ring_strategy()) {
        prop_assert!(is_ideal(&r, &r.two_r()));
    }

    #[test]
    fn unitalization_adds_identity(r in ring_strategy()) {
        let (star, embed, u) = r.unitalize();
        prop_assert_eq!(star.identity(), Some(u));
        prop_assert!(star.elements().all(|x| star.mul(u, x) == x && star.mul(x, u) == x));
        for a in r.elements() {
            for b in r.elements() {
                prop_assert_eq!(embed[r.add(a, b)], star.add(embed[a], embed[b]));
                prop_assert_eq!(embed[r.mul(a, b)], star.mul(embed[a], embed[b]));
            }
        }
        let image = ringcover::ElemSet::from_iter(star.order(), embed.iter().copied());
        prop_assert!(is_ideal(&star, &image));
        if r.two_r().len() == 1 {
            prop_assert_eq!(star.order(), 2 * r.order());
        }
    }

    #[test]
    fn subrings_and_ideals_are_closed(r in ring_strategy()) {
        let subs = subrings(&r, DEFAULT_BOUND).unwrap();
        prop_assert!(subs.iter().all(|s| is_subring(&r, s.members())));
        let ids = ideals(&r, DEFAULT_BOUND).unwrap();
        prop_assert!(ids.iter().all(|i| is_ideal(&r, i.members())));
        for i in &ids {
            let (q, proj) = quotient(&r, i.members()).unwrap();
            prop_assert_eq!(r.order(), i.len() * q.order());
            for a in r.elements() {
                for b in r.elements() {
                    prop_assert_eq!(proj[r.mul(a, b)], q.mul(proj[a], proj[b]));
                }
            }
        }
        prop_assert_eq!(subrings(&r.opposite(), DEFAULT_BOUND).unwrap().len(), subs.len());
    }

    #[test]
    fn radical_of_semisimple_quotient_is_zero(r in ring_strategy()) {
        let j = jacobson_radical(&r, DEFAULT_BOUND).unwrap();
        let (q, _) = quotient(&r, j.members()).unwrap();
        prop_assert_eq!(jacobson_radical(&q, DEFAULT_BOUND).unwrap().len(), 1);
    }

    #[test]
    fn isomorphism_is_reflexive_symmetric_and_transports_tables(i in 0..corpus().len(), j in 0..corpus().len()) {
        let (a, b) = (&corpus()[i], &corpus()[j]);
        let fwd = is_isomorphic(a, b, DEFAULT_BOUND).unwrap();
        let back = is_isomorphic(b, a, DEFAULT_BOUND).unwrap();
        prop_assert_eq!(fwd.is_some(), back.is_some());
        prop_assert!(is_isomorphic(a, a, DEFAULT_BOUND).unwrap().is_some());
        if let Some(m) = fwd {
            for x in a.elements() {
                for y in a.elements() {
                    prop_assert_eq!(m.apply(a.mul(x, y)), b.mul(m.apply(x), m.apply(y)));
                    prop_assert_eq!(m.apply(a.add(x, y)), b.add(m.apply(x), m.apply(y)));
                }
            }
        }
    }
}

#[test]
fn ring_counts_by_order() {
    let (mut four, mut eight) = (0, 0);
    for r in common::all_small_rings() {
        match r.order() {
            4 => four += 1,
            8 => eight += 1,
            o => panic!("unexpected order {o}"),
        }
    }
    assert_eq!((four, eight), (11, 52));
}

#[test]
fn json_round_trip_over_corpus() {
    for r in corpus() {
        let back = FiniteRing::from_json(&r.to_json()).unwrap();
        assert_eq!(back.to_json(), r.to_json());
    }
}
