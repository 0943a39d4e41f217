use std::collections::HashSet;

use num_bigint::BigUint;
use proptest::prelude::*;
use ringcover::counting::{count_n, euler_phi, gaussian_binomial, gl_order};
use ringcover::gf::{field_of_order, make_field, poly, FElem, FieldCtx};
use ringcover::matrix::{kernel, rref, subspaces, Mat, Subspace};
use ringcover::Error;

/// Reference product: schoolbook polynomial multiplication over Z/p, then
/// reduction by the field's defining polynomial.
fn reference_mul(f: &FieldCtx, a: FElem, b: FElem) -> FElem {
    let p = f.p();
    let d = f.degree() as usize;
    let digits = |mut v: u32| {
        (0..d)
            .map(|_| {
                let c = v % p;
                v /= p;
                c
            })
            .collect::<Vec<u32>>()
    };
    let (x, y) = (digits(a), digits(b));
    let mut prod = vec![0u32; 2 * d];
    for i in 0..d {
        for j in 0..d {
            prod[i + j] = (prod[i + j] + x[i] * y[j]) % p;
        }
    }
    let m = f.poly();
    for top in (d..2 * d).rev() {
        let c = prod[top];
        if c != 0 {
            for (k, &mk) in m.iter().enumerate() {
                prod[top - d + k] = (prod[top - d + k] + p * p - c * mk % p) % p;
            }
        }
    }
    prod[..d].iter().rev().fold(0, |acc, &c| acc * p + c)
}

fn reference_add(f: &FieldCtx, mut a: FElem, mut b: FElem) -> FElem {
    let p = f.p();
    let (mut out, mut scale) = (0, 1);
    for _ in 0..f.degree() {
        out += ((a % p + b % p) % p) * scale;
        a /= p;
        b /= p;
        scale *= p;
    }
    out
}

fn check_axioms(f: &FieldCtx, a: FElem, b: FElem, c: FElem) -> Result<(), TestCaseError> {
    prop_assert_eq!(f.add(a, b), reference_add(f, a, b));
    prop_assert_eq!(f.mul(a, b), reference_mul(f, a, b));
    prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
    prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
    prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
    prop_assert_eq!(f.add(a, f.neg(a)), 0);
    prop_assert_eq!(f.sub(f.add(a, b), b), a);
    if a != 0 {
        let inv = f.inv(a).unwrap();
        prop_assert_eq!(f.mul(a, inv), 1);
        prop_assert_eq!(f.div(b, a).map(|x| f.mul(x, a)), Some(b));
    } else {
        prop_assert!(f.inv(0).is_none());
    }
    Ok(())
}

#[test]
fn small_fields_satisfy_axioms_exhaustively() {
    for q in [2u64, 3, 4, 5, 7, 8, 9] {
        let f = field_of_order(q).unwrap();
        for a in f.elements() {
            for b in f.elements() {
                for c in f.elements() {
                    check_axioms(&f, a, b, c).unwrap();
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn larger_fields_satisfy_axioms(
        q in prop::sample::select(vec![16u64, 25, 27, 32, 49, 64, 81, 121, 125, 243, 256, 343, 625, 1024, 2187]),
        seed in any::<(u32, u32, u32)>(),
    ) {
        let f = field_of_order(q).unwrap();
        let n = f.order();
        check_axioms(&f, seed.0 % n, seed.1 % n, seed.2 % n)?;
    }

    #[test]
    fn kernel_dimension_is_nullity(rows in proptest::collection::vec(proptest::collection::vec(0u32..3, 4), 4)) {
        let f = field_of_order(3).unwrap();
        let m = Mat::from_rows(&rows);
        let ker = kernel(&f, &m);
        prop_assert_eq!(ker.len() + m.rank(&f), 4);
        for v in &ker {
            prop_assert!(m.apply(&f, v).iter().all(|&c| c == 0));
        }
        let r = rref(&f, rows.clone());
        prop_assert_eq!(r.len(), m.rank(&f));
    }

    #[test]
    fn inverse_and_char_poly(code in 0u64..3u64.pow(9)) {
        let f = field_of_order(3).unwrap();
        let m = Mat::from_code(&f, 3, code);
        prop_assert_eq!(m.code(&f), code);
        let cp = m.char_poly(&f);
        prop_assert_eq!(cp.len(), 4);
        prop_assert_eq!(cp[3], 1);
        prop_assert!(m.eval_poly(&f, &cp).is_zero());
        for t in f.elements() {
            prop_assert_eq!(poly::eval(&f, &cp, t), leibniz_det(&f, &Mat::scalar(3, t).sub(&f, &m)));
        }
        match m.inverse(&f) {
            Some(inv) => prop_assert_eq!(m.mul(&f, &inv), Mat::identity(3)),
            None => prop_assert_eq!(leibniz_det(&f, &m), 0),
        }
    }
}

/// Determinant by permutation expansion.
fn leibniz_det(f: &FieldCtx, m: &Mat) -> FElem {
    let n = m.n();
    let mut total = 0;
    let mut perm: Vec<usize> = (0..n).collect();
    permutations(&mut perm, 0, &mut |p| {
        let inversions = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| p[i] > p[j])
            .count();
        let mut term = 1;
        for (i, &j) in p.iter().enumerate() {
            term = f.mul(term, m.get(i, j));
        }
        total = if inversions % 2 == 0 {
            f.add(total, term)
        } else {
            f.sub(total, term)
        };
    });
    total
}

fn permutations(p: &mut Vec<usize>, k: usize, visit: &mut dyn FnMut(&[usize])) {
    if k == p.len() {
        visit(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permutations(p, k + 1, visit);
        p.swap(k, i);
    }
}

#[test]
fn defining_polynomials() {
    let expect: [(u64, &[u32]); 5] = [
        (2, &[1, 1]),
        (4, &[1, 1, 1]),
        (8, &[1, 1, 0, 1]),
        (3, &[1, 1]),
        (5, &[2, 1]),
    ];
    for (q, p) in expect {
        assert_eq!(field_of_order(q).unwrap().poly(), p, "GF({q})");
    }
    assert!(matches!(field_of_order(6), Err(Error::NotPrime(6))));
    assert!(matches!(make_field(4, 1), Err(Error::NotPrime(4))));
}

#[test]
fn primitive_elements_generate_units() {
    for q in [2u64, 3, 4, 5, 7, 8, 9, 16, 25, 27] {
        let f = field_of_order(q).unwrap();
        let g = f.primitive();
        let powers: HashSet<FElem> = (0..q - 1).map(|e| f.pow(g, e)).collect();
        assert_eq!(powers.len() as u64, q - 1);
        assert_eq!(f.elem_order(g), Some(q - 1));
    }
}

#[test]
fn irreducible_counts_match_necklace_formula() {
    // number of monic irreducibles of degree d over GF(q): (1/d) Σ_{e|d} μ(e) q^{d/e}
    let mobius = |n: u64| -> i64 {
        let mut n = n;
        let mut sign = 1;
        let mut p = 2;
        while p * p <= n {
            if n.is_multiple_of(p) {
                n /= p;
                if n.is_multiple_of(p) {
                    return 0;
                }
                sign = -sign;
            }
            p += 1;
        }
        if n > 1 {
            sign = -sign;
        }
        sign
    };
    for q in [2u64, 3, 4, 5] {
        let f = field_of_order(q).unwrap();
        for d in 1..=4u64 {
            let sum: i64 = (1..=d)
                .filter(|e| d % e == 0)
                .map(|e| mobius(e) * (q.pow((d / e) as u32) as i64))
                .sum();
            assert_eq!(
                poly::irreducibles(&f, d as usize).len() as i64,
                sum / d as i64,
                "q={q} d={d}"
            );
            let prim = poly::primitive(&f, d as usize);
            assert!(poly::is_irreducible(&f, &prim));
        }
    }
}

#[test]
fn factorization_multiplies_back() {
    let f = field_of_order(3).unwrap();
    for code in 0..3u64.pow(4) {
        let a = poly::monic_from_code(&f, 4, code);
        let back = poly::factor(&f, &a).iter().fold(vec![1], |acc, (g, e)| {
            poly::mul(&f, &acc, &poly::pow(&f, g, *e))
        });
        assert_eq!(back, a);
    }
}

#[test]
fn subspace_enumeration_matches_gaussian_binomial() {
    for (n, q) in [
        (2usize, 2u64),
        (3, 2),
        (4, 2),
        (2, 3),
        (3, 3),
        (4, 3),
        (2, 4),
        (3, 5),
    ] {
        let f = field_of_order(q).unwrap();
        for k in 0..=n {
            let subs = subspaces(&f, n, k, 1_000_000).unwrap();
            assert_eq!(
                BigUint::from(subs.len()),
                gaussian_binomial(n as u32, k as u32, q)
            );
            let distinct: HashSet<&Subspace> = subs.iter().collect();
            assert_eq!(distinct.len(), subs.len());
            for s in &subs {
                assert_eq!(s.dim(), k);
                assert_eq!(Subspace::span(&f, n, s.basis().to_vec()), *s);
            }
        }
    }
    let f = field_of_order(2).unwrap();
    assert!(matches!(
        subspaces(&f, 8, 4, 1000),
        Err(Error::BudgetExceeded(_))
    ));
}

#[test]
fn counting_identities() {
    for q in [2u64, 3, 4, 5] {
        for n in 0..=12u32 {
            for k in 0..=n {
                assert_eq!(gaussian_binomial(n, k, q), gaussian_binomial(n, n - k, q));
            }
        }
        for m in 1..=8u32 {
            assert!(BigUint::from(q).pow(m * m) <= gl_order(m, q) * (m + 1));
        }
        for a in 1..=12u32 {
            for k in 1..=12u32 {
                let lhs = num_integer::gcd(
                    BigUint::from(q).pow(a) - 1u32,
                    BigUint::from(q).pow(k) - 1u32,
                );
                assert_eq!(lhs, BigUint::from(q).pow(num_integer::gcd(a, k)) - 1u32);
            }
        }
    }
    assert_eq!(count_n(4, 2).1, BigUint::from(15u32));
    for m in 1..200u64 {
        let brute = (1..=m).filter(|&i| num_integer::gcd(i, m) == 1).count() as u64;
        assert_eq!(euler_phi(m), brute);
    }
}

#[test]
fn gl_order_matches_scan() {
    for (n, q) in [(2usize, 2u64), (2, 3), (3, 2), (2, 4)] {
        let f = field_of_order(q).unwrap();
        let total = q.pow((n * n) as u32);
        let count = (0..total)
            .filter(|&c| Mat::from_code(&f, n, c).is_invertible(&f))
            .count();
        assert_eq!(BigUint::from(count), gl_order(n as u32, q));
    }
}
