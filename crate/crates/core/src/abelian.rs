//! Cyclic decomposition of a finite abelian group given by its addition table.

/// Returns generators with their orders such that `(c_1, ..., c_k) -> sum c_i g_i`
/// is a bijection from `Z/d_1 x ... x Z/d_k` onto the group. Orders are prime
/// powers, grouped by prime (ascending) and non-increasing within a prime.
pub fn abelian_basis<F>(n: usize, zero: usize, add: F) -> Vec<(usize, u32)>
where
    F: Fn(usize, usize) -> usize,
{
    let order_of = |g: usize| -> u32 {
        let mut x = g;
        let mut m = 1u32;
        while x != zero {
            x = add(x, g);
            m += 1;
        }
        m
    };
    let orders: Vec<u32> = (0..n).map(order_of).collect();
    let mut basis = Vec::new();
    for p in prime_factors(n as u64) {
        let p = p as u32;
        let members: Vec<usize> = (0..n).filter(|&g| is_power_of(orders[g], p)).collect();
        let mut candidates = members.clone();
        candidates.retain(|&g| g != zero);
        // Larger orders first, then by index, so the search is deterministic.
        candidates.sort_by(|&a, &b| orders[b].cmp(&orders[a]).then(a.cmp(&b)));
        let mut in_h = vec![false; n];
        in_h[zero] = true;
        let mut chosen = Vec::new();
        let found = extend(
            &candidates,
            &orders,
            &add,
            zero,
            &mut in_h,
            vec![zero],
            members.len(),
            u32::MAX,
            &mut chosen,
        );
        assert!(
            found,
            "every finite abelian p-group has a cyclic decomposition"
        );
        basis.extend(chosen.into_iter().map(|g| (g, orders[g])));
    }
    basis
}

#[allow(clippy::too_many_arguments)]
fn extend<F>(
    candidates: &[usize],
    orders: &[u32],
    add: &F,
    zero: usize,
    in_h: &mut Vec<bool>,
    h: Vec<usize>,
    target: usize,
    max_order: u32,
    chosen: &mut Vec<usize>,
) -> bool
where
    F: Fn(usize, usize) -> usize,
{
    if h.len() == target {
        return true;
    }
    for &g in candidates {
        let d = orders[g];
        if d > max_order || in_h[g] || h.len() * d as usize > target {
            continue;
        }
        // <g> must meet H trivially.
        let mut cyc = vec![zero];
        let mut x = g;
        let mut ok = true;
        while x != zero {
            if in_h[x] {
                ok = false;
                break;
            }
            cyc.push(x);
            x = add(x, g);
        }
        if !ok {
            continue;
        }
        let mut next = Vec::with_capacity(h.len() * cyc.len());
        for &c in &cyc {
            for &y in &h {
                next.push(add(y, c));
            }
        }
        let mut new_h = in_h.clone();
        for &y in &next {
            new_h[y] = true;
        }
        chosen.push(g);
        let mut new_h_ref = new_h;
        if extend(
            candidates,
            orders,
            add,
            zero,
            &mut new_h_ref,
            next,
            target,
            d,
            chosen,
        ) {
            *in_h = new_h_ref;
            return true;
        }
        chosen.pop();
    }
    false
}

fn is_power_of(mut x: u32, p: u32) -> bool {
    while x.is_multiple_of(p) {
        x /= p;
    }
    x == 1
}

/// Distinct prime factors, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}
