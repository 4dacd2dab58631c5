//! Exact linear algebra over a [`Field`].
//!
//! [`Echelon`] is an incremental sparse row-echelon form: rows are inserted one
//! at a time, reduced against the existing pivots in increasing column order,
//! and kept if a nonzero remainder survives. Pivot choice is the leading column
//! of the remainder, so the result depends only on the insertion order.
//! [`Matrix`] covers the small dense systems (kernels, inverses).

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::field::Field;
use crate::scalar::Scalar;

/// Sparse vector: strictly increasing column indices, no stored zeros.
pub type SparseVec<F> = Vec<(usize, F)>;

/// Builds a sparse vector from unsorted `(col, value)` pairs, summing repeats.
pub fn sparse_from_pairs<F: Field>(mut pairs: Vec<(usize, F)>) -> SparseVec<F> {
    pairs.sort_by_key(|p| p.0);
    let mut out: SparseVec<F> = Vec::with_capacity(pairs.len());
    for (c, v) in pairs {
        match out.last_mut() {
            Some((lc, lv)) if *lc == c => *lv = lv.add(&v),
            _ => out.push((c, v)),
        }
    }
    out.retain(|(_, v)| !v.is_zero());
    out
}

pub fn sparse_from_dense<F: Field>(dense: &[F]) -> SparseVec<F> {
    dense
        .iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(i, v)| (i, v.clone()))
        .collect()
}

pub fn sparse_to_dense<F: Field>(v: &[(usize, F)], n: usize) -> Vec<F> {
    let mut out = vec![F::zero(); n];
    for (c, x) in v {
        out[*c] = x.clone();
    }
    out
}

/// `a + factor·b`.
pub fn axpy<F: Field>(a: &[(usize, F)], factor: &F, b: &[(usize, F)]) -> SparseVec<F> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, factor.mul(&b[j].1)));
            j += 1;
        } else {
            let v = a[i].1.add(&factor.mul(&b[j].1));
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn sparse_scale<F: Field>(v: &[(usize, F)], s: &F) -> SparseVec<F> {
    if s.is_zero() {
        return Vec::new();
    }
    v.iter().map(|(c, x)| (*c, x.mul(s))).collect()
}

const NO_PIVOT: u32 = u32::MAX;

/// Incremental row-echelon form of a subspace of `F^ncols`.
#[derive(Clone, Debug)]
pub struct Echelon<F: Field> {
    ncols: usize,
    rows: Vec<SparseVec<F>>,
    pivot_row: Vec<u32>,
    reduced: bool,
}

impl<F: Field> Echelon<F> {
    pub fn new(ncols: usize) -> Self {
        Echelon {
            ncols,
            rows: Vec::new(),
            pivot_row: vec![NO_PIVOT; ncols],
            reduced: true,
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ncols
    }

    pub fn rows(&self) -> &[SparseVec<F>] {
        &self.rows
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_row[col] != NO_PIVOT
    }

    /// Pivot columns in increasing order.
    pub fn pivots(&self) -> Vec<usize> {
        (0..self.ncols).filter(|&c| self.is_pivot(c)).collect()
    }

    /// Non-pivot columns in increasing order; a basis of the quotient.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.ncols).filter(|&c| !self.is_pivot(c)).collect()
    }

    /// Remainder of `v` after reduction against the current pivots.
    pub fn reduce(&self, v: SparseVec<F>) -> SparseVec<F> {
        let mut r = v;
        let mut cursor = 0;
        while cursor < r.len() {
            let (col, coef) = (r[cursor].0, r[cursor].1.clone());
            let pr = self.pivot_row[col];
            if pr == NO_PIVOT {
                cursor += 1;
                continue;
            }
            r = axpy(&r, &coef.neg(), &self.rows[pr as usize]);
        }
        r
    }

    /// Inserts `v`; returns whether it enlarged the span.
    pub fn insert(&mut self, v: SparseVec<F>) -> bool {
        if self.is_full() {
            return false;
        }
        let r = self.reduce(v);
        if r.is_empty() {
            return false;
        }
        let lead = r[0].0;
        let inv = r[0].1.inv().expect("nonzero leading entry");
        let r = sparse_scale(&r, &inv);
        self.pivot_row[lead] = self.rows.len() as u32;
        self.rows.push(r);
        self.reduced = false;
        true
    }

    pub fn contains(&self, v: SparseVec<F>) -> bool {
        self.reduce(v).is_empty()
    }

    /// Back-substitutes so every row is zero on all other pivot columns.
    pub fn fully_reduce(&mut self) {
        if self.reduced {
            return;
        }
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(self.rows[i][0].0));
        for i in order {
            let row = std::mem::take(&mut self.rows[i]);
            let tail = self.reduce_tail(&row[1..]);
            let mut acc: SparseVec<F> = vec![row[0].clone()];
            acc.extend(tail);
            self.rows[i] = acc;
        }
        self.reduced = true;
    }

    /// Normal form of `v` modulo the span, supported on free columns.
    /// Requires [`Echelon::fully_reduce`] to have been called.
    pub fn normal_form(&self, v: &[(usize, F)]) -> SparseVec<F> {
        assert!(self.reduced, "normal_form needs a fully reduced echelon");
        self.reduce_tail(v)
    }

    // Rows referenced through pivot entries of `v` must already be fully reduced.
    fn reduce_tail(&self, v: &[(usize, F)]) -> SparseVec<F> {
        let mut out: SparseVec<F> = Vec::new();
        let mut free: SparseVec<F> = Vec::new();
        for (c, x) in v {
            let pr = self.pivot_row[*c];
            if pr == NO_PIVOT {
                free.push((*c, x.clone()));
            } else {
                out = axpy(&out, &x.neg(), &self.rows[pr as usize][1..]);
            }
        }
        axpy(&free, &F::one(), &out)
    }

    /// Basis of the right kernel `{x : row·x = 0 for every row}` as dense
    /// vectors, one per free column.
    pub fn kernel(&mut self) -> Vec<Vec<F>> {
        self.fully_reduce();
        let mut out = Vec::new();
        for f in self.free_columns() {
            let mut x = vec![F::zero(); self.ncols];
            x[f] = F::one();
            for row in &self.rows {
                if let Ok(pos) = row.binary_search_by_key(&f, |e| e.0) {
                    x[row[0].0] = row[pos].1.neg();
                }
            }
            out.push(x);
        }
        out
    }
}

/// Rank of a family of sparse rows.
pub fn sparse_rank<F: Field, I: IntoIterator<Item = SparseVec<F>>>(ncols: usize, rows: I) -> usize {
    let mut e = Echelon::new(ncols);
    for r in rows {
        e.insert(r);
        if e.is_full() {
            break;
        }
    }
    e.rank()
}

const MODULUS: u64 = (1 << 61) - 1;

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % MODULUS as u128) as u64
}

fn powmod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a);
        }
        a = mulmod(a, a);
        e >>= 1;
    }
    r
}

fn reduce_mod(x: &Scalar) -> Option<u64> {
    let m = BigInt::from(MODULUS);
    let residue = |b: BigInt| -> u64 { ((b % &m + &m) % &m).to_u64().expect("below modulus") };
    let den = residue(x.denom());
    if den == 0 {
        return None;
    }
    Some(mulmod(residue(x.numer()), powmod(den, MODULUS - 2)))
}

/// Rank modulo the prime `2^61 − 1`. This is a lower bound for the rank over Q,
/// so it is exact whenever it reaches `min(rows, ncols)`. `None` if some
/// denominator vanishes modulo the prime.
pub fn modular_rank(ncols: usize, rows: &[SparseVec<Scalar>]) -> Option<usize> {
    let mut pivots: Vec<Option<Vec<u64>>> = vec![None; ncols];
    let mut rank = 0;
    for row in rows {
        let mut v = vec![0u64; ncols];
        for (c, x) in row {
            v[*c] = reduce_mod(x)?;
        }
        for c in 0..ncols {
            if v[c] == 0 {
                continue;
            }
            match &pivots[c] {
                Some(p) => {
                    let f = MODULUS - v[c];
                    for j in c..ncols {
                        if p[j] != 0 {
                            v[j] = (v[j] + mulmod(f, p[j])) % MODULUS;
                        }
                    }
                }
                None => {
                    let inv = powmod(v[c], MODULUS - 2);
                    for x in v.iter_mut().skip(c) {
                        *x = mulmod(*x, inv);
                    }
                    pivots[c] = Some(v);
                    rank += 1;
                    break;
                }
            }
        }
        if rank == ncols {
            break;
        }
    }
    Some(rank)
}

/// Exact rank over Q, trying the modular bound first.
pub fn rational_rank(ncols: usize, rows: Vec<SparseVec<Scalar>>) -> usize {
    if let Some(r) = modular_rank(ncols, &rows) {
        if r == rows.len().min(ncols) {
            return r;
        }
    }
    bareiss_rank(ncols, &rows)
}

/// Fraction-free elimination on the rows cleared of denominators. Entries stay
/// bounded by minors of the input, unlike plain rational elimination.
pub fn bareiss_rank(ncols: usize, rows: &[SparseVec<Scalar>]) -> usize {
    let mut a: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|row| {
            let l = crate::scalar::lcm_of_denominators(row.iter().map(|(_, x)| x));
            let mut v = vec![BigInt::zero(); ncols];
            for (c, x) in row {
                v[*c] = x.numer() * (&l / x.denom());
            }
            v
        })
        .collect();
    let mut prev = BigInt::one();
    let mut rank = 0;
    for c in 0..ncols {
        let Some(p) = (rank..a.len()).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(rank, p);
        let (top, rest) = a.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        let pivot = &pivot_row[c];
        for row in rest.iter_mut() {
            let f = std::mem::take(&mut row[c]);
            for j in c + 1..ncols {
                let mut x = &row[j] * pivot;
                if !f.is_zero() && !pivot_row[j].is_zero() {
                    x -= &f * &pivot_row[j];
                }
                row[j] = if prev.is_one() { x } else { x / &prev };
            }
        }
        prev = pivot.clone();
        rank += 1;
        if rank == a.len() {
            break;
        }
    }
    rank
}

/// Dense row-major matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix<F: Field> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<F>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = F::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * other.cols + j;
                        out.data[idx] = out.data[idx].add(&a.mul(b));
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(F::zero(), |acc, (a, b)| acc.add(&a.mul(b)))
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn scale(&self, s: &F) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a.mul(s)).collect() }
    }

    fn echelon(&self) -> Echelon<F> {
        let mut e = Echelon::new(self.cols);
        for i in 0..self.rows {
            e.insert(sparse_from_dense(self.row(i)));
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.echelon().rank()
    }

    /// Basis of `{x : self·x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<F>> {
        self.echelon().kernel()
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, F::one());
        }
        let mut e = aug.echelon();
        e.fully_reduce();
        if e.pivots().iter().take_while(|&&c| c < n).count() < n {
            return None;
        }
        let mut inv = Self::zeros(n, n);
        for row in e.rows() {
            let lead = row[0].0;
            if lead >= n {
                return None;
            }
            for (c, v) in row.iter().skip(1) {
                if *c >= n {
                    inv.set(lead, c - n, v.clone());
                }
            }
        }
        Some(inv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn echelon_rank_and_normal_form() {
        let mut e: Echelon<Scalar> = Echelon::new(3);
        assert!(e.insert(vec![(0, s(1)), (1, s(1))]));
        assert!(e.insert(vec![(1, s(1)), (2, s(1))]));
        assert!(!e.insert(vec![(0, s(1)), (1, s(2)), (2, s(1))]));
        assert_eq!(e.rank(), 2);
        e.fully_reduce();
        // (0,0,1) ≡ (1,0,0)·? : normal form supported on the single free column
        let nf = e.normal_form(&[(0, s(1))]);
        assert_eq!(nf, vec![(2, s(1))]);
        assert_eq!(e.free_columns(), vec![2]);
    }

    #[test]
    fn kernel_and_inverse() {
        let m = Matrix::from_rows(vec![vec![s(1), s(2), s(3)], vec![s(2), s(4), s(6)]]);
        let k = m.kernel();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(m.mul_vec(v).iter().all(|x| x.is_zero()));
        }
        let a = Matrix::from_rows(vec![vec![s(2), s(1)], vec![s(1), s(1)]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(2));
        assert!(Matrix::from_rows(vec![vec![s(1), s(1)], vec![s(1), s(1)]]).inverse().is_none());
    }

    proptest! {
        #[test]
        fn rank_routines_agree(
            entries in proptest::collection::vec((0usize..9, -4i64..=4, 1i64..=3), 0..40),
            nrows in 1usize..9,
        ) {
            let mut rows: Vec<SparseVec<Scalar>> = vec![Vec::new(); nrows];
            for (k, (c, n, d)) in entries.into_iter().enumerate() {
                rows[k % nrows].push((c, Scalar::new(n, d)));
            }
            let rows: Vec<SparseVec<Scalar>> = rows.into_iter().map(sparse_from_pairs).collect();
            let exact = sparse_rank(9, rows.clone());
            prop_assert_eq!(bareiss_rank(9, &rows), exact);
            prop_assert_eq!(rational_rank(9, rows.clone()), exact);
            prop_assert!(modular_rank(9, &rows).unwrap() <= exact);
        }
    }
}
