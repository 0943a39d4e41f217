//! Acceptance run: one PASS/FAIL line per criterion with its time limit.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::One;
use ringcover::catalog::{self, example};
use ringcover::classify::classify_good_rings;
use ringcover::counting::{gaussian_binomial, gl_order};
use ringcover::covering::{dedup_tuples, is_good_tuple, theorem2_decide, two_cover, GoodTuple};
use ringcover::gf::field_of_order;
use ringcover::lattice::{
    additive_subgroups, automorphisms, is_isomorphic, is_subring, DEFAULT_BOUND,
};
use ringcover::matring::{
    brute_force_sigma, build_cover, check_unbeatable, conjugate_count, sigma_formula, MatRing,
    UnbeatabilityMode, Verification,
};
use ringcover::matrix::subspaces;
use ringcover::{Budget, FiniteRing};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn iso(a: &FiniteRing, b: &FiniteRing) -> bool {
    matches!(is_isomorphic(a, b, DEFAULT_BOUND), Ok(Some(_)))
}

fn ring(id: u8) -> FiniteRing {
    example(id).expect("catalog entry").ring.clone()
}

fn matring(n: usize, q: u64) -> MatRing {
    MatRing::new(n, q, Budget::default()).expect("valid parameters")
}

fn criterion_1() -> Outcome {
    let mr = matring(2, 2);
    let formula = sigma_formula(2, 2);
    let cert = build_cover(&mr).map_err(|e| e.to_string())?;
    ensure(
        cert.verified
            && cert.verification
                == Verification::FullScan {
                    checked: 16,
                    covered: 16,
                },
        format!("cover certificate {:?}", cert.verification),
    )?;
    let brute = brute_force_sigma(&mr).map_err(|e| e.to_string())?;
    let members = mr
        .maximal_subrings()
        .map_err(|e| e.to_string())?
        .descriptors();
    let f = mr.field();
    let mut three_covers = 0;
    for i in 0..members.len() {
        for j in i + 1..members.len() {
            for k in j + 1..members.len() {
                let covers = (0..16).all(|c| {
                    let x = mr.matrix(c);
                    [i, j, k].iter().any(|&t| members[t].contains(f, &x))
                });
                three_covers += usize::from(covers);
            }
        }
    }
    ensure(formula == BigUint::from(4u32), format!("formula {formula}"))?;
    ensure(cert.size == formula, format!("cover size {}", cert.size))?;
    ensure(brute.size() == 4, format!("brute force {}", brute.size()))?;
    ensure(
        three_covers == 0,
        format!("{three_covers} covers by three maximal subrings"),
    )?;
    Ok(format!(
        "formula 4, full-scan cover 4, brute force 4, {} maximal subrings, no 3-subset covers",
        members.len()
    ))
}

fn criterion_2() -> Outcome {
    let mut details = Vec::new();
    for (n, q, expected, candidates, elements) in [(2, 3, 7u32, 7, 81), (3, 2, 15, 22, 512)] {
        let formula = sigma_formula(n as u32, q);
        let brute = brute_force_sigma(&matring(n, q)).map_err(|e| e.to_string())?;
        ensure(
            formula == BigUint::from(expected),
            format!("formula({n},{q}) = {formula}"),
        )?;
        ensure(
            brute.size() as u32 == expected,
            format!("brute force({n},{q}) = {}", brute.size()),
        )?;
        ensure(
            brute.candidates == candidates && brute.elements == elements,
            "candidate or element count",
        )?;
        details.push(format!(
            "M_{n}({q}) = {expected} ({candidates} candidates, {elements} elements)"
        ));
    }
    Ok(details.join("; "))
}

fn classification(order: usize, ids: std::ops::RangeInclusive<u8>) -> Outcome {
    let rep = classify_good_rings(order).map_err(|e| e.to_string())?;
    let mut matched: Vec<u8> = rep.matched_ids().into_iter().flatten().collect();
    matched.sort_unstable();
    let expected: Vec<u8> = ids.collect();
    ensure(
        rep.classes.len() == expected.len(),
        format!("{} classes", rep.classes.len()),
    )?;
    ensure(matched == expected, format!("matched {matched:?}"))?;
    ensure(
        rep.fast_check_agrees && rep.index_two_agrees,
        "internal cross-checks disagree",
    )?;
    Ok(format!(
        "{} classes matched {:?}, {} ring classes on the elementary group",
        rep.classes.len(),
        matched,
        rep.ring_classes
    ))
}

fn criterion_5() -> Outcome {
    let r = ring(10);
    let groups = additive_subgroups(&r, DEFAULT_BOUND).map_err(|e| e.to_string())?;
    ensure(
        groups.len() == 67,
        format!("{} additive subgroups", groups.len()),
    )?;
    let proper: Vec<_> = groups
        .into_iter()
        .filter(|s| s.len() < r.order() && is_subring(&r, s))
        .collect();
    let mut tuples: Vec<GoodTuple> = Vec::new();
    for i in 0..proper.len() {
        for j in i + 1..proper.len() {
            for k in j + 1..proper.len() {
                if let Ok(t) = is_good_tuple(&r, [&proper[i], &proper[j], &proper[k]]) {
                    tuples.push(t);
                }
            }
        }
    }
    let found = tuples.len();
    let auts = automorphisms(&r, DEFAULT_BOUND).map_err(|e| e.to_string())?;
    let classes = dedup_tuples(&auts, tuples);
    ensure(
        classes.len() == 1,
        format!("{} good tuples up to symmetry", classes.len()),
    )?;
    Ok(format!("67 subgroups, {} proper subrings, {found} good triples, 1 up to Aut x S3 ({} automorphisms)", proper.len(), auts.len()))
}

fn criterion_6() -> Outcome {
    let (u2, _, _) = ring(2).unitalize();
    ensure(iso(&u2, &ring(6)), "unitalization of 2.2 is not 2.6")?;
    let (u8_, _, _) = ring(8).unitalize();
    let (u9, _, _) = ring(9).unitalize();
    ensure(
        iso(&u8_, &ring(10)) && iso(&u9, &ring(10)),
        "unitalizations of 2.8 and 2.9 are not 2.10",
    )?;
    for (a, b) in [(3, 4), (8, 9)] {
        let (ra, rb) = (ring(a), ring(b));
        ensure(!iso(&ra, &rb), format!("2.{a} and 2.{b} are isomorphic"))?;
        ensure(iso(&ra.opposite(), &rb), format!("2.{a}^op is not 2.{b}"))?;
        let (la, ra_) = ra.annihilator_sizes();
        let (lb, rb_) = rb.annihilator_sizes();
        ensure(
            la == rb_ && ra_ == lb && la != ra_,
            format!(
                "annihilator sizes 2.{a} {:?}, 2.{b} {:?}",
                (la, ra_),
                (lb, rb_)
            ),
        )?;
    }
    for id in [7, 10] {
        ensure(
            iso(&ring(id).opposite(), &ring(id)),
            format!("2.{id} is not self-opposite"),
        )?;
    }
    Ok("2.2* = 2.6, 2.8* = 2.9* = 2.10, opposite pairs 2.3/2.4 and 2.8/2.9, 2.7 and 2.10 self-opposite".into())
}

fn criterion_7() -> Outcome {
    let corpus = common::corpus();
    for (name, r) in &corpus {
        let v = theorem2_decide(r, DEFAULT_BOUND).map_err(|e| format!("{name}: {e}"))?;
        ensure(
            v.agree(),
            format!(
                "{name}: three-cover {} but good quotient {}",
                v.coverable(),
                v.via_quotient.is_some()
            ),
        )?;
    }
    let claims = catalog::verify_section6();
    let failed: Vec<_> = claims
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.name.clone())
        .collect();
    ensure(
        failed.is_empty(),
        format!("factor-ring claims failed: {failed:?}"),
    )?;
    Ok(format!(
        "{} corpus rings agree, {} factor-ring claims pass",
        corpus.len(),
        claims.len()
    ))
}

fn criterion_8() -> Outcome {
    let mut rings: Vec<(String, FiniteRing)> = common::corpus();
    rings.extend(
        common::all_small_rings()
            .into_iter()
            .enumerate()
            .map(|(i, r)| (format!("small ring {i}"), r)),
    );
    rings.push((
        "M_2(2)".into(),
        matring(2, 2).to_finite_ring().map_err(|e| e.to_string())?,
    ));
    for (name, r) in &rings {
        let c = two_cover(r, DEFAULT_BOUND).map_err(|e| e.to_string())?;
        ensure(
            c.is_none(),
            format!("{name} is a union of two proper subrings"),
        )?;
    }
    Ok(format!(
        "{} rings, none a union of two proper subrings",
        rings.len()
    ))
}

fn criterion_9() -> Outcome {
    let mut parts = Vec::new();
    for (n, q) in [(2, 2), (2, 3), (3, 2)] {
        let rep = check_unbeatable(&matring(n, q), UnbeatabilityMode::Elementwise)
            .map_err(|e| e.to_string())?;
        for c in &rep.conditions {
            ensure(
                c.passed,
                format!("({n},{q}) condition {}: {}", c.index, c.detail),
            )?;
        }
        for (name, ok) in &rep.checks {
            ensure(*ok, format!("({n},{q}) {name}"))?;
        }
        ensure(
            rep.inequalities.is_empty(),
            "prime-power n has no inequalities",
        )?;
        parts.push(format!("({n},{q}) {} checks", rep.checks.len()));
    }
    for (n, q) in [(6, 2), (6, 3)] {
        let rep = check_unbeatable(&matring(n, q), UnbeatabilityMode::Counting)
            .map_err(|e| e.to_string())?;
        ensure(
            rep.inequalities.len() == 3,
            format!("({n},{q}) has {} inequalities", rep.inequalities.len()),
        )?;
        for i in &rep.inequalities {
            ensure(
                i.holds,
                format!("({n},{q}) {}: {} >= {}", i.shape, i.lhs, i.rhs),
            )?;
        }
        parts.push(format!("({n},{q}) 3 inequalities"));
    }
    Ok(parts.join(", "))
}

fn criterion_10() -> Outcome {
    let mut checked = 0u64;
    for n in 2..=12u32 {
        for q in [2u64, 3, 4, 5] {
            let b = ringcover::matring::prime_divisors(n)[0];
            let qn = BigUint::from(q).pow(n);
            let product: BigUint = (1..n)
                .filter(|i| i % b != 0)
                .map(|i| &qn - BigUint::from(q).pow(i))
                .product();
            let count = conjugate_count(n, q, b).map_err(|e| e.to_string())?;
            ensure(
                product == count * b,
                format!("product term vs conjugate count at ({n},{q})"),
            )?;
            checked += 1;
        }
    }
    for n in 0..=12u32 {
        for k in 0..=n {
            for q in [2u64, 3, 4, 5] {
                ensure(
                    gaussian_binomial(n, k, q) == gaussian_binomial(n, n - k, q),
                    format!("symmetry [{n},{k}]_{q}"),
                )?;
                checked += 1;
            }
        }
    }
    for (n, q) in [
        (2, 2),
        (3, 2),
        (4, 2),
        (2, 3),
        (3, 3),
        (4, 3),
        (2, 4),
        (3, 4),
        (2, 5),
    ] {
        let f = field_of_order(q).map_err(|e| e.to_string())?;
        for k in 0..=n {
            let listed = subspaces(&f, n, k, 1_000_000)
                .map_err(|e| e.to_string())?
                .len();
            ensure(
                BigUint::from(listed) == gaussian_binomial(n as u32, k as u32, q),
                format!("enumeration [{n},{k}]_{q}"),
            )?;
            checked += 1;
        }
    }
    for q in [2u64, 3, 4, 5] {
        for a in 1..=12u32 {
            for k in 1..=12u32 {
                let g = num_integer::gcd(a, k);
                let lhs = num_integer::gcd(
                    BigUint::from(q).pow(a) - 1u32,
                    BigUint::from(q).pow(k) - 1u32,
                );
                ensure(
                    lhs == BigUint::from(q).pow(g) - 1u32,
                    format!("gcd identity ({q},{a},{k})"),
                )?;
                checked += 1;
            }
        }
        for m in 1..=8u32 {
            let bound = BigUint::from(q).pow(m * m);
            ensure(
                bound <= gl_order(m, q) * (m + 1),
                format!("GL lower bound ({m},{q})"),
            )?;
            ensure(gl_order(m, q) >= BigUint::one(), "positive order")?;
            checked += 1;
        }
    }
    Ok(format!("{checked} exact identities"))
}

fn main() {
    let criteria: Vec<(u8, Duration, fn() -> Outcome)> = vec![
        (1, Duration::from_secs(5), criterion_1),
        (2, Duration::from_secs(600), criterion_2),
        (3, Duration::from_secs(10), || classification(4, 1..=4)),
        (4, Duration::from_secs(1800), || classification(8, 5..=9)),
        (5, Duration::from_secs(60), criterion_5),
        (6, Duration::from_secs(60), criterion_6),
        (7, Duration::from_secs(300), criterion_7),
        (8, Duration::from_secs(600), criterion_8),
        (9, Duration::from_secs(600), criterion_9),
        (10, Duration::from_secs(600), criterion_10),
    ];
    let mut failures = 0;
    for (id, limit, run) in criteria {
        let start = Instant::now();
        let outcome =
            catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if elapsed <= limit => (true, d),
            Ok(d) => (false, format!("{d}; exceeded time limit")),
            Err(e) => (false, e),
        };
        failures += usize::from(!ok);
        println!(
            "criterion {id}: {} ({detail}) [{:.2}s, limit {}s]",
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
    }
    if failures > 0 {
        std::process::exit(1);
    }
}
