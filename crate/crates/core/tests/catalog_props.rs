use ringcover::catalog::{self, example};
use ringcover::lattice::{is_isomorphic, jacobson_radical, DEFAULT_BOUND};
use ringcover::FiniteRing;

fn ring(id: u8) -> &'static FiniteRing {
    &example(id).unwrap().ring
}

fn iso(a: &FiniteRing, b: &FiniteRing) -> bool {
    is_isomorphic(a, b, DEFAULT_BOUND).unwrap().is_some()
}

#[test]
fn matrices_realize_the_ring_operations() {
    for e in catalog::all() {
        assert_eq!(e.matrices.len(), e.ring.order());
        for a in e.ring.elements() {
            for b in e.ring.elements() {
                assert_eq!(
                    e.index_of(&e.matrices[a].add(&e.matrices[b])),
                    Some(e.ring.add(a, b)),
                    "{}",
                    e.label()
                );
                assert_eq!(
                    e.index_of(&e.matrices[a].mul(&e.matrices[b])),
                    Some(e.ring.mul(a, b)),
                    "{}",
                    e.label()
                );
            }
        }
        assert_eq!(e.unital, e.ring.has_identity());
        assert_eq!(e.commutative, e.ring.is_commutative());
    }
}

#[test]
fn orders_and_labels() {
    let orders: Vec<usize> = catalog::all().iter().map(|e| e.ring.order()).collect();
    assert_eq!(orders, [4, 4, 4, 4, 8, 8, 8, 8, 8, 16]);
    assert_eq!(example(10).unwrap().label(), "2.10");
    assert!(example(11).is_none());
}

#[test]
fn entries_are_pairwise_non_isomorphic() {
    let all = catalog::all();
    for i in 0..all.len() {
        for j in i + 1..all.len() {
            assert!(
                !iso(&all[i].ring, &all[j].ring),
                "{} vs {}",
                all[i].label(),
                all[j].label()
            );
        }
    }
}

#[test]
fn opposites() {
    assert!(iso(ring(3), &ring(4).opposite()));
    assert!(iso(ring(8), &ring(9).opposite()));
    assert!(iso(ring(7), &ring(7).opposite()));
    assert!(iso(ring(10), &ring(10).opposite()));
}

#[test]
fn unitalizations() {
    assert!(iso(&ring(2).unitalize().0, ring(6)));
    assert!(iso(&ring(8).unitalize().0, ring(10)));
    assert!(iso(&ring(9).unitalize().0, ring(10)));
}

#[test]
fn radical_sizes_of_unital_entries() {
    let size = |id| jacobson_radical(ring(id), DEFAULT_BOUND).unwrap().len();
    assert_eq!([size(5), size(7), size(6)], [1, 2, 4]);
}

#[test]
fn factor_ring_claims() {
    let claims = catalog::verify_section6();
    assert_eq!(claims.len(), 6);
    for c in claims {
        assert!(c.passed, "{}: {}", c.name, c.detail);
    }
}

#[test]
fn ring_files_round_trip() {
    for e in catalog::all() {
        let back = FiniteRing::from_json(&e.ring.to_json()).unwrap();
        assert!(iso(&back, &e.ring));
    }
}
