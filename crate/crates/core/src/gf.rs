//! Finite fields `GF(p^d)` and polynomials over them.
//!
//! Elements are integers `0..q`; element `v` is the polynomial `Σ c_i x^i` with
//! `v = Σ c_i p^i`, reduced modulo the defining polynomial. The defining
//! polynomial is the primitive polynomial with the least coefficient code, so
//! `x` (element `p`, or the primitive root for `d = 1`) generates the units.

use crate::abelian::prime_factors;
use crate::error::{Error, Result};

pub type FElem = u32;

/// Largest field order handled with lookup tables.
pub const MAX_FIELD_ORDER: u32 = 1 << 16;

#[derive(Clone)]
pub struct FieldCtx {
    p: u32,
    d: u32,
    q: u32,
    /// Monic defining polynomial over `Z/p`, lowest coefficient first.
    poly: Vec<u32>,
    exp: Vec<FElem>,
    log: Vec<u32>,
}

impl std::fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GF({}^{}) mod {:?}", self.p, self.d, self.poly)
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, o: &FieldCtx) -> bool {
        self.p == o.p && self.d == o.d && self.poly == o.poly
    }
}

impl Eq for FieldCtx {}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|i| i * i <= n).all(|i| !n.is_multiple_of(i))
}

/// `(p, d)` with `q = p^d`, if `q` is a prime power.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    let f = prime_factors(q);
    if f.len() != 1 {
        return None;
    }
    let p = f[0];
    let mut d = 0;
    let mut m = q;
    while m.is_multiple_of(p) {
        m /= p;
        d += 1;
    }
    Some((p as u32, d))
}

/// Arithmetic needed to search for defining polynomials before tables exist.
trait Arith {
    fn order(&self) -> u32;
    fn add(&self, a: FElem, b: FElem) -> FElem;
    fn neg(&self, a: FElem) -> FElem;
    fn mul(&self, a: FElem, b: FElem) -> FElem;
}

struct PrimeArith(u32);

impl Arith for PrimeArith {
    fn order(&self) -> u32 {
        self.0
    }
    fn add(&self, a: FElem, b: FElem) -> FElem {
        (a + b) % self.0
    }
    fn neg(&self, a: FElem) -> FElem {
        (self.0 - a) % self.0
    }
    fn mul(&self, a: FElem, b: FElem) -> FElem {
        ((u64::from(a) * u64::from(b)) % u64::from(self.0)) as u32
    }
}

impl Arith for FieldCtx {
    fn order(&self) -> u32 {
        self.q
    }
    fn add(&self, a: FElem, b: FElem) -> FElem {
        FieldCtx::add(self, a, b)
    }
    fn neg(&self, a: FElem) -> FElem {
        FieldCtx::neg(self, a)
    }
    fn mul(&self, a: FElem, b: FElem) -> FElem {
        FieldCtx::mul(self, a, b)
    }
}

fn trim(mut a: Vec<FElem>) -> Vec<FElem> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_mul_mod<A: Arith>(f: &A, a: &[FElem], b: &[FElem], m: &[FElem]) -> Vec<FElem> {
    let mut prod = vec![0; (a.len() + b.len()).saturating_sub(1)];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = f.add(prod[i + j], f.mul(x, y));
        }
    }
    poly_rem_monic(f, prod, m)
}

/// Remainder modulo a monic polynomial.
fn poly_rem_monic<A: Arith>(f: &A, mut a: Vec<FElem>, m: &[FElem]) -> Vec<FElem> {
    let dm = m.len() - 1;
    while a.len() > dm {
        let lead = *a.last().expect("non-empty");
        let shift = a.len() - 1 - dm;
        if lead != 0 {
            for (i, &c) in m.iter().enumerate() {
                a[shift + i] = f.add(a[shift + i], f.neg(f.mul(lead, c)));
            }
        }
        a.pop();
    }
    trim(a)
}

fn x_pow_mod<A: Arith>(f: &A, mut e: u64, m: &[FElem]) -> Vec<FElem> {
    let mut result = poly_rem_monic(f, vec![1], m);
    let mut base = poly_rem_monic(f, vec![0, 1], m);
    while e > 0 {
        if e & 1 == 1 {
            result = poly_mul_mod(f, &result, &base, m);
        }
        base = poly_mul_mod(f, &base, &base, m);
        e >>= 1;
    }
    result
}

/// Monic `m` of degree `deg` with nonzero constant term is primitive iff `x` has
/// multiplicative order exactly `r^deg - 1` modulo `m`.
fn is_primitive_poly<A: Arith>(f: &A, m: &[FElem]) -> bool {
    let deg = (m.len() - 1) as u32;
    if m[0] == 0 {
        return false;
    }
    let n = u64::from(f.order()).pow(deg) - 1;
    if x_pow_mod(f, n, m) != vec![1] {
        return false;
    }
    prime_factors(n)
        .iter()
        .all(|&r| x_pow_mod(f, n / r, m) != vec![1])
}

/// Monic polynomial of degree `deg` whose lower coefficients have base-`r` code `code`.
fn monic_from_code(r: u32, deg: usize, mut code: u64) -> Vec<FElem> {
    let mut m = Vec::with_capacity(deg + 1);
    for _ in 0..deg {
        m.push((code % u64::from(r)) as u32);
        code /= u64::from(r);
    }
    m.push(1);
    m
}

fn first_primitive<A: Arith>(f: &A, deg: usize) -> Vec<FElem> {
    let r = u64::from(f.order());
    (0..r.pow(deg as u32))
        .map(|code| monic_from_code(f.order(), deg, code))
        .find(|m| is_primitive_poly(f, m))
        .expect("primitive polynomials exist in every degree")
}

/// `GF(p^d)` defined by its least primitive polynomial.
pub fn make_field(p: u32, d: u32) -> Result<FieldCtx> {
    if !is_prime(u64::from(p)) {
        return Err(Error::NotPrime(u64::from(p)));
    }
    if d == 0 {
        return Err(Error::IllFormed("field degree must be at least 1".into()));
    }
    let q = u64::from(p)
        .checked_pow(d)
        .filter(|&q| q <= u64::from(MAX_FIELD_ORDER));
    let Some(q) = q else {
        return Err(Error::BudgetExceeded(format!(
            "field order {p}^{d} exceeds {MAX_FIELD_ORDER}"
        )));
    };
    let q = q as u32;
    let base = PrimeArith(p);
    let poly = first_primitive(&base, d as usize);
    let mut exp = Vec::with_capacity(q as usize);
    let mut log = vec![0u32; q as usize];
    let mut cur = vec![1u32];
    for i in 0..q - 1 {
        let v = cur.iter().rev().fold(0u32, |acc, &c| acc * p + c);
        log[v as usize] = i;
        exp.push(v);
        cur = poly_mul_mod(&base, &cur, &[0, 1], &poly);
    }
    Ok(FieldCtx {
        p,
        d,
        q,
        poly,
        exp,
        log,
    })
}

/// `GF(q)` for a prime power `q`.
pub fn field_of_order(q: u64) -> Result<FieldCtx> {
    match prime_power(q) {
        Some((p, d)) => make_field(p, d),
        None => Err(Error::NotPrime(q)),
    }
}

impl FieldCtx {
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Defining polynomial over `Z/p`, lowest coefficient first.
    pub fn poly(&self) -> &[u32] {
        &self.poly
    }

    pub fn elements(&self) -> std::ops::Range<FElem> {
        0..self.q
    }

    /// Generator of the multiplicative group.
    pub fn primitive(&self) -> FElem {
        self.exp[1 % self.exp.len()]
    }

    pub fn add(&self, a: FElem, b: FElem) -> FElem {
        if self.p == 2 {
            return a ^ b;
        }
        if self.d == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b, mut out, mut place) = (a, b, 0, 1);
        while a > 0 || b > 0 {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn neg(&self, a: FElem) -> FElem {
        if self.p == 2 {
            return a;
        }
        let (mut a, mut out, mut place) = (a, 0, 1);
        while a > 0 {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn sub(&self, a: FElem, b: FElem) -> FElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FElem, b: FElem) -> FElem {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.q - 1;
        self.exp[((self.log[a as usize] + self.log[b as usize]) % n) as usize]
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: FElem) -> Option<FElem> {
        if a == 0 {
            return None;
        }
        let n = self.q - 1;
        Some(self.exp[((n - self.log[a as usize]) % n) as usize])
    }

    pub fn div(&self, a: FElem, b: FElem) -> Option<FElem> {
        self.inv(b).map(|ib| self.mul(a, ib))
    }

    pub fn pow(&self, a: FElem, e: u64) -> FElem {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let n = u64::from(self.q - 1);
        self.exp[((u64::from(self.log[a as usize]) * (e % n)) % n) as usize]
    }

    /// Multiplicative order of a nonzero element.
    pub fn elem_order(&self, a: FElem) -> Option<u64> {
        if a == 0 {
            return None;
        }
        let n = u64::from(self.q - 1);
        let l = u64::from(self.log[a as usize]);
        Some(n / num_integer::gcd(n, l))
    }
}

/// Polynomials over a field, lowest coefficient first, no trailing zeros.
pub mod poly {
    use super::{trim, FElem, FieldCtx};

    pub type Poly = Vec<FElem>;

    pub fn degree(a: &[FElem]) -> Option<usize> {
        a.iter().rposition(|&c| c != 0)
    }

    pub fn normalize(a: Poly) -> Poly {
        trim(a)
    }

    pub fn add(f: &FieldCtx, a: &[FElem], b: &[FElem]) -> Poly {
        let n = a.len().max(b.len());
        let c = (0..n)
            .map(|i| {
                f.add(
                    a.get(i).copied().unwrap_or(0),
                    b.get(i).copied().unwrap_or(0),
                )
            })
            .collect();
        trim(c)
    }

    pub fn sub(f: &FieldCtx, a: &[FElem], b: &[FElem]) -> Poly {
        let nb: Poly = b.iter().map(|&c| f.neg(c)).collect();
        add(f, a, &nb)
    }

    pub fn mul(f: &FieldCtx, a: &[FElem], b: &[FElem]) -> Poly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut c = vec![0; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                c[i + j] = f.add(c[i + j], f.mul(x, y));
            }
        }
        trim(c)
    }

    pub fn scale(f: &FieldCtx, a: &[FElem], s: FElem) -> Poly {
        trim(a.iter().map(|&c| f.mul(c, s)).collect())
    }

    /// Quotient and remainder; `b` must be nonzero.
    pub fn divrem(f: &FieldCtx, a: &[FElem], b: &[FElem]) -> (Poly, Poly) {
        let db = degree(b).expect("division by the zero polynomial");
        let inv_lead = f.inv(b[db]).expect("nonzero leading coefficient");
        let mut r: Poly = trim(a.to_vec());
        let mut qt = vec![0; r.len().saturating_sub(db).max(1)];
        while let Some(dr) = degree(&r) {
            if dr < db {
                break;
            }
            let c = f.mul(r[dr], inv_lead);
            qt[dr - db] = c;
            for i in 0..=db {
                r[dr - db + i] = f.sub(r[dr - db + i], f.mul(c, b[i]));
            }
            r = trim(r);
        }
        (trim(qt), r)
    }

    pub fn rem(f: &FieldCtx, a: &[FElem], b: &[FElem]) -> Poly {
        divrem(f, a, b).1
    }

    pub fn monic(f: &FieldCtx, a: &[FElem]) -> Poly {
        match degree(a) {
            Some(d) => scale(f, a, f.inv(a[d]).expect("nonzero")),
            None => Vec::new(),
        }
    }

    pub fn gcd(f: &FieldCtx, a: &[FElem], b: &[FElem]) -> Poly {
        let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
        while !b.is_empty() {
            let r = rem(f, &a, &b);
            a = b;
            b = r;
        }
        monic(f, &a)
    }

    pub fn pow(f: &FieldCtx, a: &[FElem], mut e: u32) -> Poly {
        let mut result = vec![1];
        let mut base = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                result = mul(f, &result, &base);
            }
            base = mul(f, &base, &base);
            e >>= 1;
        }
        result
    }

    pub fn eval(f: &FieldCtx, a: &[FElem], x: FElem) -> FElem {
        a.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Monic polynomial of degree `deg` whose lower coefficients have base-`q` code `code`.
    pub fn monic_from_code(f: &FieldCtx, deg: usize, code: u64) -> Poly {
        super::monic_from_code(f.order(), deg, code)
    }

    /// Irreducibility by trial division with every monic polynomial of degree at
    /// most half the degree.
    pub fn is_irreducible(f: &FieldCtx, a: &[FElem]) -> bool {
        let Some(d) = degree(a) else { return false };
        if d == 0 {
            return false;
        }
        smallest_factor(f, a).is_none_or(|g| degree(&g) == Some(d))
    }

    /// Least-degree monic divisor of positive degree, scanning degrees up to half.
    fn smallest_factor(f: &FieldCtx, a: &[FElem]) -> Option<Poly> {
        let d = degree(a)?;
        let q = u64::from(f.order());
        for k in 1..=d / 2 {
            for code in 0..q.pow(k as u32) {
                let g = monic_from_code(f, k, code);
                if rem(f, a, &g).is_empty() {
                    return Some(g);
                }
            }
        }
        (d > 0).then(|| monic(f, a))
    }

    /// Monic irreducible factors with multiplicities, sorted by degree then code.
    pub fn factor(f: &FieldCtx, a: &[FElem]) -> Vec<(Poly, u32)> {
        let mut rest = monic(f, a);
        let mut out: Vec<(Poly, u32)> = Vec::new();
        while degree(&rest).is_some_and(|d| d > 0) {
            let g = smallest_factor(f, &rest).expect("positive degree");
            let mut e = 0;
            loop {
                let (qt, r) = divrem(f, &rest, &g);
                if !r.is_empty() {
                    break;
                }
                rest = qt;
                e += 1;
            }
            out.push((g, e));
        }
        out
    }

    /// Every monic irreducible polynomial of degree `deg`, in code order.
    pub fn irreducibles(f: &FieldCtx, deg: usize) -> Vec<Poly> {
        let q = u64::from(f.order());
        (0..q.pow(deg as u32))
            .map(|code| monic_from_code(f, deg, code))
            .filter(|g| is_irreducible(f, g))
            .collect()
    }

    /// Least primitive polynomial of degree `deg` over `f`.
    pub fn primitive(f: &FieldCtx, deg: usize) -> Poly {
        super::first_primitive(f, deg)
    }

    /// Human-readable form, e.g. `x^2 + x + 1`.
    pub fn display(a: &[FElem]) -> String {
        let mut terms = Vec::new();
        for (i, &c) in a.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let coef = if c == 1 && i > 0 {
                String::new()
            } else {
                c.to_string()
            };
            let t = match i {
                0 => format!("{c}"),
                1 => format!("{coef}x"),
                _ => format!("{coef}x^{i}"),
            };
            terms.push(t);
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defining_polynomials() {
        assert_eq!(make_field(2, 1).unwrap().poly(), &[1, 1]);
        assert_eq!(make_field(2, 2).unwrap().poly(), &[1, 1, 1]);
        assert_eq!(make_field(2, 3).unwrap().poly(), &[1, 1, 0, 1]);
        assert_eq!(make_field(3, 1).unwrap().poly(), &[1, 1]);
        assert_eq!(make_field(5, 1).unwrap().poly(), &[2, 1]);
        assert!(matches!(make_field(4, 1), Err(Error::NotPrime(4))));
    }

    #[test]
    fn gf4_arithmetic() {
        let f = make_field(2, 2).unwrap();
        // x = 2, x^2 = x + 1 = 3
        assert_eq!(f.mul(2, 2), 3);
        assert_eq!(f.mul(2, 3), 1);
        assert_eq!(f.inv(3), Some(2));
        assert_eq!(f.primitive(), 2);
    }

    #[test]
    fn factor_and_irreducibility() {
        let f = make_field(2, 1).unwrap();
        assert!(poly::is_irreducible(&f, &[1, 1, 1]));
        assert!(!poly::is_irreducible(&f, &[1, 0, 1]));
        assert_eq!(poly::factor(&f, &[1, 0, 1]), vec![(vec![1, 1], 2)]);
        assert_eq!(poly::irreducibles(&f, 3).len(), 2);
        let f9 = make_field(3, 2).unwrap();
        assert_eq!(poly::irreducibles(&f9, 2).len(), (81 - 9) / 2);
    }
}
