//! Square matrices and subspaces over `GF(q)`.
//!
//! Matrices act on column vectors. A matrix has the integer code `Σ e_t q^t` over
//! its row-major entries, which is how full matrix rings are scanned.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{poly, FElem, FieldCtx};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "Vec<Vec<FElem>>", try_from = "Vec<Vec<FElem>>")]
pub struct Mat {
    n: usize,
    e: Vec<FElem>,
}

impl From<Mat> for Vec<Vec<FElem>> {
    fn from(m: Mat) -> Self {
        m.rows()
    }
}

impl TryFrom<Vec<Vec<FElem>>> for Mat {
    type Error = String;
    fn try_from(rows: Vec<Vec<FElem>>) -> std::result::Result<Mat, String> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err("matrix rows must form a square".into());
        }
        Ok(Mat {
            n,
            e: rows.concat(),
        })
    }
}

impl std::fmt::Debug for Mat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}", self.rows())
    }
}

impl Mat {
    pub fn zero(n: usize) -> Mat {
        Mat {
            n,
            e: vec![0; n * n],
        }
    }

    pub fn identity(n: usize) -> Mat {
        Mat::scalar(n, 1)
    }

    pub fn scalar(n: usize, s: FElem) -> Mat {
        let mut m = Mat::zero(n);
        for i in 0..n {
            m.e[i * n + i] = s;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<FElem>]) -> Mat {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        Mat {
            n,
            e: rows.concat(),
        }
    }

    /// Matrix whose columns are `cols`.
    pub fn from_cols(cols: &[Vec<FElem>]) -> Mat {
        let n = cols.len();
        let mut m = Mat::zero(n);
        for (j, c) in cols.iter().enumerate() {
            for i in 0..n {
                m.e[i * n + j] = c[i];
            }
        }
        m
    }

    pub fn from_code(f: &FieldCtx, n: usize, mut code: u64) -> Mat {
        let q = u64::from(f.order());
        let e = (0..n * n)
            .map(|_| {
                let v = (code % q) as FElem;
                code /= q;
                v
            })
            .collect();
        Mat { n, e }
    }

    pub fn code(&self, f: &FieldCtx) -> u64 {
        let q = u64::from(f.order());
        self.e
            .iter()
            .rev()
            .fold(0, |acc, &v| acc * q + u64::from(v))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> FElem {
        self.e[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: FElem) {
        self.e[i * self.n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<FElem>> {
        self.e.chunks(self.n.max(1)).map(|r| r.to_vec()).collect()
    }

    pub fn col(&self, j: usize) -> Vec<FElem> {
        (0..self.n).map(|i| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.e.iter().all(|&v| v == 0)
    }

    pub fn add(&self, f: &FieldCtx, o: &Mat) -> Mat {
        Mat {
            n: self.n,
            e: self
                .e
                .iter()
                .zip(&o.e)
                .map(|(&a, &b)| f.add(a, b))
                .collect(),
        }
    }

    pub fn sub(&self, f: &FieldCtx, o: &Mat) -> Mat {
        Mat {
            n: self.n,
            e: self
                .e
                .iter()
                .zip(&o.e)
                .map(|(&a, &b)| f.sub(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, f: &FieldCtx, s: FElem) -> Mat {
        Mat {
            n: self.n,
            e: self.e.iter().map(|&a| f.mul(a, s)).collect(),
        }
    }

    pub fn mul(&self, f: &FieldCtx, o: &Mat) -> Mat {
        let n = self.n;
        let mut e = vec![0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    e[i * n + j] = f.add(e[i * n + j], f.mul(a, o.get(k, j)));
                }
            }
        }
        Mat { n, e }
    }

    pub fn apply(&self, f: &FieldCtx, v: &[FElem]) -> Vec<FElem> {
        (0..self.n)
            .map(|i| (0..self.n).fold(0, |acc, j| f.add(acc, f.mul(self.get(i, j), v[j]))))
            .collect()
    }

    pub fn pow(&self, f: &FieldCtx, mut e: u64) -> Mat {
        let mut result = Mat::identity(self.n);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(f, &base);
            }
            base = base.mul(f, &base);
            e >>= 1;
        }
        result
    }

    pub fn transpose(&self) -> Mat {
        let n = self.n;
        let mut m = Mat::zero(n);
        for i in 0..n {
            for j in 0..n {
                m.e[j * n + i] = self.get(i, j);
            }
        }
        m
    }

    pub fn commutes(&self, f: &FieldCtx, o: &Mat) -> bool {
        self.mul(f, o) == o.mul(f, self)
    }

    pub fn rank(&self, f: &FieldCtx) -> usize {
        rref(f, self.rows()).len()
    }

    pub fn is_invertible(&self, f: &FieldCtx) -> bool {
        self.rank(f) == self.n
    }

    /// Inverse by Gauss-Jordan elimination.
    pub fn inverse(&self, f: &FieldCtx) -> Option<Mat> {
        let n = self.n;
        let mut a: Vec<Vec<FElem>> = self
            .rows()
            .into_iter()
            .enumerate()
            .map(|(i, mut r)| {
                r.extend((0..n).map(|j| u32::from(i == j)));
                r
            })
            .collect();
        for c in 0..n {
            let p = (c..n).find(|&r| a[r][c] != 0)?;
            a.swap(c, p);
            let inv = f.inv(a[c][c]).expect("pivot");
            for v in a[c].iter_mut() {
                *v = f.mul(*v, inv);
            }
            for r in 0..n {
                if r != c && a[r][c] != 0 {
                    let t = a[r][c];
                    for j in 0..2 * n {
                        a[r][j] = f.sub(a[r][j], f.mul(t, a[c][j]));
                    }
                }
            }
        }
        Some(Mat::from_rows(
            &a.into_iter().map(|r| r[n..].to_vec()).collect::<Vec<_>>(),
        ))
    }

    /// `g⁻¹ self g`.
    pub fn conjugate(&self, f: &FieldCtx, g: &Mat, g_inv: &Mat) -> Mat {
        g_inv.mul(f, self).mul(f, g)
    }

    /// Multiplicative order of an invertible matrix whose order divides `bound`.
    pub fn order_dividing(&self, f: &FieldCtx, bound: u64) -> Option<u64> {
        let id = Mat::identity(self.n);
        if self.pow(f, bound) != id {
            return None;
        }
        let mut ord = bound;
        for r in crate::abelian::prime_factors(bound) {
            while ord.is_multiple_of(r) && self.pow(f, ord / r) == id {
                ord /= r;
            }
        }
        Some(ord)
    }

    /// Evaluates a polynomial at this matrix.
    pub fn eval_poly(&self, f: &FieldCtx, p: &[FElem]) -> Mat {
        let mut acc = Mat::zero(self.n);
        for &c in p.iter().rev() {
            acc = acc.mul(f, self).add(f, &Mat::scalar(self.n, c));
        }
        acc
    }

    /// Companion matrix of a monic polynomial: ones below the diagonal and the
    /// negated coefficients in the last column.
    pub fn companion(f: &FieldCtx, p: &[FElem]) -> Mat {
        let d = p.len() - 1;
        let mut m = Mat::zero(d);
        for i in 1..d {
            m.set(i, i - 1, 1);
        }
        for i in 0..d {
            m.set(i, d - 1, f.neg(p[i]));
        }
        m
    }

    pub fn block_diag(blocks: &[Mat]) -> Mat {
        let n = blocks.iter().map(|b| b.n).sum();
        let mut m = Mat::zero(n);
        let mut off = 0;
        for b in blocks {
            for i in 0..b.n {
                for j in 0..b.n {
                    m.set(off + i, off + j, b.get(i, j));
                }
            }
            off += b.n;
        }
        m
    }

    /// Monic characteristic polynomial via reduction to Hessenberg form.
    pub fn char_poly(&self, f: &FieldCtx) -> Vec<FElem> {
        let n = self.n;
        let mut h = self.clone();
        for c in 0..n.saturating_sub(2) {
            let Some(piv) = (c + 1..n).find(|&r| h.get(r, c) != 0) else {
                continue;
            };
            if piv != c + 1 {
                for j in 0..n {
                    let (a, b) = (h.get(piv, j), h.get(c + 1, j));
                    h.set(piv, j, b);
                    h.set(c + 1, j, a);
                }
                for i in 0..n {
                    let (a, b) = (h.get(i, piv), h.get(i, c + 1));
                    h.set(i, piv, b);
                    h.set(i, c + 1, a);
                }
            }
            let inv = f.inv(h.get(c + 1, c)).expect("pivot");
            for i in c + 2..n {
                let t = f.mul(h.get(i, c), inv);
                if t == 0 {
                    continue;
                }
                for j in 0..n {
                    let v = f.sub(h.get(i, j), f.mul(t, h.get(c + 1, j)));
                    h.set(i, j, v);
                }
                for r in 0..n {
                    let v = f.add(h.get(r, c + 1), f.mul(t, h.get(r, i)));
                    h.set(r, c + 1, v);
                }
            }
        }
        // p_m = (x - h_mm) p_{m-1} - Σ_{i<m} h_im (Π_{j=i+1..m} h_{j,j-1}) p_{i-1}
        let mut ps: Vec<Vec<FElem>> = vec![vec![1]];
        for m in 0..n {
            let mut pm = poly::mul(f, &[f.neg(h.get(m, m)), 1], &ps[m]);
            let mut prod = 1;
            for i in (0..m).rev() {
                prod = f.mul(prod, h.get(i + 1, i));
                let coef = f.mul(h.get(i, m), prod);
                if coef != 0 {
                    pm = poly::sub(f, &pm, &poly::scale(f, &ps[i], coef));
                }
            }
            ps.push(pm);
        }
        let mut out = ps.pop().expect("n + 1 entries");
        out.resize(n + 1, 0);
        out
    }
}

/// Rows of the reduced row echelon form, zero rows dropped.
pub fn rref(f: &FieldCtx, mut rows: Vec<Vec<FElem>>) -> Vec<Vec<FElem>> {
    let width = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..width {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, p);
        let inv = f.inv(rows[r][c]).expect("pivot");
        for v in rows[r].iter_mut() {
            *v = f.mul(*v, inv);
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let t = rows[i][c];
                for j in 0..width {
                    rows[i][j] = f.sub(rows[i][j], f.mul(t, rows[r][j]));
                }
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    rows
}

/// Basis of the null space of `m` (vectors `v` with `m v = 0`).
pub fn kernel(f: &FieldCtx, m: &Mat) -> Vec<Vec<FElem>> {
    let n = m.n();
    let red = rref(f, m.rows());
    let pivots: Vec<usize> = red
        .iter()
        .map(|r| r.iter().position(|&v| v != 0).expect("nonzero row"))
        .collect();
    (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![0; n];
            v[free] = 1;
            for (row, &pc) in red.iter().zip(&pivots) {
                v[pc] = f.neg(row[free]);
            }
            v
        })
        .collect()
}

/// A subspace of `GF(q)^n`, identified by its reduced echelon basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Subspace {
    n: usize,
    basis: Vec<Vec<FElem>>,
}

impl Subspace {
    pub fn span(f: &FieldCtx, n: usize, vectors: Vec<Vec<FElem>>) -> Subspace {
        let basis = if vectors.is_empty() {
            Vec::new()
        } else {
            rref(f, vectors)
        };
        Subspace { n, basis }
    }

    /// Rebuilds from a stored basis, checking it is already in reduced echelon form.
    pub fn from_echelon(f: &FieldCtx, n: usize, basis: Vec<Vec<FElem>>) -> Result<Subspace> {
        if basis
            .iter()
            .any(|v| v.len() != n || v.iter().any(|&c| c >= f.order()))
        {
            return Err(Error::Format(
                "basis vectors have the wrong length or entries".into(),
            ));
        }
        let s = Subspace::span(f, n, basis.clone());
        if s.basis != basis {
            return Err(Error::Format("basis is not in reduced echelon form".into()));
        }
        Ok(s)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> &[Vec<FElem>] {
        &self.basis
    }

    pub fn contains(&self, f: &FieldCtx, v: &[FElem]) -> bool {
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        rref(f, rows).len() == self.dim()
    }

    /// `x U ⊆ U`.
    pub fn is_invariant(&self, f: &FieldCtx, x: &Mat) -> bool {
        let mut rows = self.basis.clone();
        rows.extend(self.basis.iter().map(|b| x.apply(f, b)));
        rref(f, rows).len() == self.dim()
    }

    pub fn is_complement(&self, f: &FieldCtx, o: &Subspace) -> bool {
        if self.dim() + o.dim() != self.n {
            return false;
        }
        let mut rows = self.basis.clone();
        rows.extend(o.basis.iter().cloned());
        rref(f, rows).len() == self.n
    }
}

/// All `k`-dimensional subspaces of `GF(q)^n` in canonical order, built directly
/// as reduced echelon matrices.
pub fn subspaces(f: &FieldCtx, n: usize, k: usize, budget: u64) -> Result<Vec<Subspace>> {
    if k > n {
        return Ok(Vec::new());
    }
    let count = crate::counting::gaussian_binomial(n as u32, k as u32, u64::from(f.order()));
    if count > num_bigint::BigUint::from(budget) {
        return Err(Error::BudgetExceeded(format!(
            "{count} subspaces of dimension {k} in GF({})^{n}",
            f.order()
        )));
    }
    let q = u64::from(f.order());
    let mut out = Vec::new();
    for pivots in combinations(n, k) {
        // free positions: row r, columns after pivot r that are not pivots
        let free: Vec<(usize, usize)> = (0..k)
            .flat_map(|r| {
                ((pivots[r] + 1)..n)
                    .filter(|c| !pivots.contains(c))
                    .map(move |c| (r, c))
            })
            .collect();
        for mut code in 0..q.pow(free.len() as u32) {
            let mut basis = vec![vec![0; n]; k];
            for (r, &p) in pivots.iter().enumerate() {
                basis[r][p] = 1;
            }
            for &(r, c) in &free {
                basis[r][c] = (code % q) as FElem;
                code /= q;
            }
            out.push(Subspace { n, basis });
        }
    }
    out.sort();
    Ok(out)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Vector with code `Σ v_i q^i`.
pub fn vector_from_code(f: &FieldCtx, n: usize, mut code: u64) -> Vec<FElem> {
    let q = u64::from(f.order());
    (0..n)
        .map(|_| {
            let v = (code % q) as FElem;
            code /= q;
            v
        })
        .collect()
}

pub fn vector_code(f: &FieldCtx, v: &[FElem]) -> u64 {
    let q = u64::from(f.order());
    v.iter().rev().fold(0, |acc, &c| acc * q + u64::from(c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;

    #[test]
    fn char_poly_small_cases() {
        let f = make_field(2, 1).unwrap();
        assert_eq!(Mat::identity(2).char_poly(&f), vec![1, 0, 1]);
        assert_eq!(Mat::zero(3).char_poly(&f), vec![0, 0, 0, 1]);
        let c = Mat::companion(&f, &[1, 1, 1]);
        assert_eq!(c.char_poly(&f), vec![1, 1, 1]);
    }

    #[test]
    fn inverse_round_trip() {
        let f = make_field(3, 1).unwrap();
        let m = Mat::from_rows(&[vec![1, 2], vec![0, 1]]);
        let inv = m.inverse(&f).unwrap();
        assert_eq!(m.mul(&f, &inv), Mat::identity(2));
        assert!(Mat::from_rows(&[vec![1, 2], vec![2, 1]])
            .inverse(&f)
            .is_none());
    }

    #[test]
    fn subspace_counts() {
        let f = make_field(2, 1).unwrap();
        assert_eq!(subspaces(&f, 2, 1, 1000).unwrap().len(), 3);
        assert_eq!(subspaces(&f, 3, 2, 1000).unwrap().len(), 7);
        assert_eq!(subspaces(&f, 4, 4, 1000).unwrap().len(), 1);
    }

    #[test]
    fn kernel_is_annihilated() {
        let f = make_field(3, 1).unwrap();
        let m = Mat::from_rows(&[vec![1, 2, 0], vec![2, 1, 0], vec![0, 0, 0]]);
        let k = kernel(&f, &m);
        assert_eq!(k.len(), 2);
        for v in k {
            assert!(m.apply(&f, &v).iter().all(|&c| c == 0));
        }
    }
}
