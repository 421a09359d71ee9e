//! Dense exact linear algebra over any [`QField`].

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::scalar::{QField, ScalarError};

#[derive(Clone, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: QField> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self[(r, c)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl<S> std::ops::Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    fn index(&self, (r, c): (usize, usize)) -> &S {
        &self.data[r * self.cols + c]
    }
}

impl<S> std::ops::IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut S {
        &mut self.data[r * self.cols + c]
    }
}

impl<S: QField> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        Matrix { rows: r, cols: c, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[S] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<S> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| {
                    let x = &self[(r, c)];
                    if r == c {
                        *x == S::one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = &other[(k, c)];
                    if !b.is_zero() {
                        let p = a.mul_ref(b);
                        out[(r, c)] += &p;
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (x, y) in out.data.iter_mut().zip(&other.data) {
            *x += y;
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (x, y) in out.data.iter_mut().zip(&other.data) {
            *x -= y;
        }
        out
    }

    pub fn scale(&self, c: &S) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.mul_ref(c)).collect(),
        }
    }

    pub fn apply(&self, v: &[S]) -> Vec<S> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                let mut acc = S::zero();
                for (c, x) in v.iter().enumerate() {
                    let a = &self[(r, c)];
                    if !a.is_zero() && !x.is_zero() {
                        acc += &a.mul_ref(x);
                    }
                }
                acc
            })
            .collect()
    }

    /// Kronecker product; row index of the result is `a * other.rows + b`.
    pub fn kron(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for r1 in 0..self.rows {
            for c1 in 0..self.cols {
                let a = &self[(r1, c1)];
                if a.is_zero() {
                    continue;
                }
                for r2 in 0..other.rows {
                    for c2 in 0..other.cols {
                        let b = &other[(r2, c2)];
                        if !b.is_zero() {
                            out[(r1 * other.rows + r2, c1 * other.cols + c2)] = a.mul_ref(b);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        let mut out = Self::zeros(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out[(r, c)] = self[(r, c)].clone();
            }
            for c in 0..other.cols {
                out[(r, self.cols + c)] = other[(r, c)].clone();
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Reduced row echelon form in place, pivoting only in the first
    /// `pivot_cols` columns. Returns the pivot columns in order.
    pub fn rref_limited(&mut self, pivot_cols: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..pivot_cols.min(self.cols) {
            if r == self.rows {
                break;
            }
            let best = (r..self.rows)
                .filter(|&i| !self[(i, c)].is_zero())
                .min_by_key(|&i| self[(i, c)].weight());
            let Some(p) = best else { continue };
            self.swap_rows(r, p);
            let inv = self[(r, c)].inv().expect("nonzero pivot");
            for cc in c..self.cols {
                if !self[(r, cc)].is_zero() {
                    let v = self[(r, cc)].mul_ref(&inv);
                    self[(r, cc)] = v;
                }
            }
            let prow: Vec<S> = self.row(r).to_vec();
            for i in 0..self.rows {
                if i == r || self[(i, c)].is_zero() {
                    continue;
                }
                let f = self[(i, c)].clone();
                for cc in c..self.cols {
                    if !prow[cc].is_zero() {
                        let d = f.mul_ref(&prow[cc]);
                        self[(i, cc)] -= &d;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rref(&mut self) -> Vec<usize> {
        let c = self.cols;
        self.rref_limited(c)
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    pub fn inverse(&self) -> Result<Self, ScalarError> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let mut aug = self.hstack(&Self::identity(n));
        let piv = aug.rref_limited(n);
        if piv.len() < n {
            return Err(ScalarError::DivisionByZero);
        }
        let mut out = Self::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                out[(r, c)] = aug[(r, n + c)].clone();
            }
        }
        Ok(out)
    }

    /// Some solution of `self · x = b`, or `None` when inconsistent.
    pub fn solve(&self, b: &[S]) -> Option<Vec<S>> {
        assert_eq!(b.len(), self.rows);
        let rhs = Matrix { rows: self.rows, cols: 1, data: b.to_vec() };
        let mut aug = self.hstack(&rhs);
        let piv = aug.rref_limited(self.cols);
        for r in piv.len()..self.rows {
            if !aug[(r, self.cols)].is_zero() {
                return None;
            }
        }
        let mut x = vec![S::zero(); self.cols];
        for (r, &c) in piv.iter().enumerate() {
            x[c] = aug[(r, self.cols)].clone();
        }
        Some(x)
    }

    /// Basis of the right kernel.
    pub fn nullspace(&self) -> Vec<Vec<S>> {
        let mut m = self.clone();
        let piv = m.rref();
        let mut out = Vec::new();
        for free in 0..self.cols {
            if piv.contains(&free) {
                continue;
            }
            let mut v = vec![S::zero(); self.cols];
            v[free] = S::one();
            for (r, &c) in piv.iter().enumerate() {
                v[c] = -m[(r, free)].clone();
            }
            out.push(v);
        }
        out
    }
}

/// Incrementally maintained echelon basis of a subspace of `S^n`.
///
/// Used to test membership and to grow spanning sets one vector at a time.
#[derive(Clone, Debug)]
pub struct EchelonSpan<S> {
    dim: usize,
    rows: Vec<(usize, Vec<S>)>,
}

impl<S: QField> EchelonSpan<S> {
    pub fn new(dim: usize) -> Self {
        EchelonSpan { dim, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    /// Pivot columns of the echelon basis, sorted.
    pub fn pivots(&self) -> Vec<usize> {
        let mut p: Vec<usize> = self.rows.iter().map(|(c, _)| *c).collect();
        p.sort_unstable();
        p
    }

    fn reduce(&self, v: &mut [S]) {
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let f = v[*p].clone();
            for (x, y) in v.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x -= &f.mul_ref(y);
                }
            }
        }
    }

    pub fn contains(&self, v: &[S]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|x| x.is_zero())
    }

    /// Adds `v`; returns true when it was independent of the span.
    pub fn insert(&mut self, v: &[S]) -> bool {
        assert_eq!(v.len(), self.dim);
        let mut w = v.to_vec();
        self.reduce(&mut w);
        let Some(p) = (0..self.dim).find(|&i| !w[i].is_zero()) else {
            return false;
        };
        let inv = w[p].inv().expect("nonzero");
        for x in w.iter_mut() {
            if !x.is_zero() {
                *x = x.mul_ref(&inv);
            }
        }
        for (_, row) in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let f = row[p].clone();
            for (x, y) in row.iter_mut().zip(&w) {
                if !y.is_zero() {
                    *x -= &f.mul_ref(y);
                }
            }
        }
        self.rows.push((p, w));
        true
    }
}

/// Largest prime below 2^62, used for modular rank certificates.
pub const DEFAULT_PRIME: u64 = 4_611_686_018_427_387_847;

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

/// Image of a rational in Z/p; `None` when p divides the denominator.
pub fn rational_mod_p(x: &BigRational, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let n = x.numer().mod_floor(&pb).to_u64()?;
    let d = x.denom().mod_floor(&pb).to_u64()?;
    if d == 0 {
        return None;
    }
    Some(mul_mod(n, pow_mod(d, p - 2, p), p))
}

/// Sparse row echelon form over Z/p, grown one row at a time.
#[derive(Clone, Debug)]
pub struct ModSpan {
    p: u64,
    pivots: BTreeMap<usize, BTreeMap<usize, u64>>,
}

impl ModSpan {
    pub fn new(p: u64) -> Self {
        ModSpan { p, pivots: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Adds a sparse row; returns true when it was independent.
    pub fn insert(&mut self, row: impl IntoIterator<Item = (usize, u64)>) -> bool {
        let p = self.p;
        let mut v: BTreeMap<usize, u64> = BTreeMap::new();
        for (c, x) in row {
            let e = v.entry(c).or_insert(0);
            *e = (*e + x % p) % p;
        }
        v.retain(|_, x| *x != 0);
        loop {
            let Some((&c, &lead)) = v.iter().next() else {
                return false;
            };
            match self.pivots.get(&c) {
                Some(prow) => {
                    for (&k, &y) in prow {
                        let e = v.entry(k).or_insert(0);
                        *e = (*e + p - mul_mod(lead, y, p)) % p;
                        if *e == 0 {
                            v.remove(&k);
                        }
                    }
                }
                None => {
                    let inv = pow_mod(lead, p - 2, p);
                    for x in v.values_mut() {
                        *x = mul_mod(*x, inv, p);
                    }
                    self.pivots.insert(c, v);
                    return true;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{EvalQ, ScalarQ};
    use num_traits::{One, Zero};

    fn q() -> ScalarQ {
        ScalarQ::q_int_pow(1, 1)
    }

    #[test]
    fn inverse_round_trip() {
        let m = Matrix::from_rows(vec![
            vec![q(), ScalarQ::one()],
            vec![ScalarQ::one(), q().inv().unwrap()],
        ]);
        // det = 1 - 1 = 0: singular
        assert!(m.inverse().is_err());
        let m = Matrix::from_rows(vec![
            vec![q(), ScalarQ::one()],
            vec![ScalarQ::zero(), q()],
        ]);
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
    }

    #[test]
    fn nullspace_and_solve() {
        let m = Matrix::from_rows(vec![
            vec![EvalQ::from_int(1), EvalQ::from_int(2), EvalQ::from_int(3)],
            vec![EvalQ::from_int(2), EvalQ::from_int(4), EvalQ::from_int(6)],
        ]);
        assert_eq!(m.rank(), 1);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(m.apply(v).iter().all(|x| x.is_zero()));
        }
        let x = m.solve(&[EvalQ::from_int(1), EvalQ::from_int(2)]).unwrap();
        assert_eq!(m.apply(&x), vec![EvalQ::from_int(1), EvalQ::from_int(2)]);
        assert!(m.solve(&[EvalQ::from_int(1), EvalQ::from_int(3)]).is_none());
    }

    #[test]
    fn echelon_span_membership() {
        let mut sp = EchelonSpan::<EvalQ>::new(3);
        assert!(sp.insert(&[EvalQ::from_int(1), EvalQ::from_int(1), EvalQ::zero()]));
        assert!(sp.insert(&[EvalQ::zero(), EvalQ::from_int(1), EvalQ::from_int(1)]));
        assert!(!sp.insert(&[EvalQ::from_int(1), EvalQ::zero(), EvalQ::from_int(-1)]));
        assert!(sp.contains(&[EvalQ::from_int(2), EvalQ::from_int(3), EvalQ::from_int(1)]));
        assert_eq!(sp.rank(), 2);
    }

    #[test]
    fn mod_span_rank() {
        let p = 101;
        let mut sp = ModSpan::new(p);
        assert!(sp.insert([(0, 1), (1, 2)]));
        assert!(sp.insert([(1, 1), (2, 1)]));
        assert!(!sp.insert([(0, 1), (1, 3), (2, 1)]));
        assert!(sp.insert([(2, 5)]));
        assert_eq!(sp.rank(), 3);
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(rational_mod_p(&half, p), Some(51));
    }

    #[test]
    fn kron_indexing() {
        let a = Matrix::from_rows(vec![vec![EvalQ::from_int(1), EvalQ::from_int(2)]]);
        let b = Matrix::from_rows(vec![vec![EvalQ::from_int(3)], vec![EvalQ::from_int(5)]]);
        let k = a.kron(&b);
        assert_eq!((k.rows(), k.cols()), (2, 2));
        assert_eq!(k[(1, 1)], EvalQ::from_int(10));
    }
}
