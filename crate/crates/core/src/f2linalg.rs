//! Dense linear algebra over F2 with rows packed into `u64` words.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

fn words_for(cols: usize) -> usize {
    cols.div_ceil(64)
}

#[inline]
pub fn bit(row: &[u64], j: usize) -> bool {
    row[j / 64] >> (j % 64) & 1 == 1
}

#[inline]
pub fn flip(row: &mut [u64], j: usize) {
    row[j / 64] ^= 1 << (j % 64);
}

#[inline]
fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct F2Matrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl core::fmt::Debug for F2Matrix {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        writeln!(f, "F2Matrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            for j in 0..self.cols {
                f.write_str(if self.get(i, j) { "1" } else { "0" })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl F2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        F2Matrix { rows, cols, stride, data: vec![0; rows * stride] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Build from rows of 0/1 entries.
    pub fn from_rows(cols: usize, rows: &[Vec<u8>]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "row {i} has the wrong length");
            for (j, &x) in r.iter().enumerate() {
                m.set(i, j, x & 1 == 1);
            }
        }
        m
    }

    /// A one-row matrix from packed words.
    pub fn from_words(cols: usize, row: &[u64]) -> Self {
        let mut m = F2Matrix::zeros(0, cols);
        m.push_row(row);
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        bit(self.row(i), j)
    }

    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        if self.get(i, j) != v {
            flip(self.row_mut(i), j);
        }
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.stride..(i + 1) * self.stride]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.data[i * self.stride..(i + 1) * self.stride]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[u64]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    /// Column indices of the nonzero entries of row `i`.
    pub fn row_support(&self, i: usize) -> Vec<usize> {
        (0..self.cols).filter(|&j| self.get(i, j)).collect()
    }

    pub fn push_row(&mut self, row: &[u64]) {
        assert_eq!(row.len(), self.stride);
        self.data.extend_from_slice(row);
        self.rows += 1;
    }

    pub fn empty_row(&self) -> Vec<u64> {
        vec![0; self.stride]
    }

    pub fn transpose(&self) -> F2Matrix {
        let mut t = F2Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self.get(i, j) {
                    t.set(j, i, true);
                }
            }
        }
        t
    }

    /// Stack the rows of `other` under `self`.
    pub fn stacked(&self, other: &F2Matrix) -> F2Matrix {
        assert_eq!(self.cols, other.cols);
        let mut m = self.clone();
        m.data.extend_from_slice(&other.data);
        m.rows += other.rows;
        m
    }

    /// Reduced row-echelon form. Zero rows are dropped from the result, so
    /// the returned matrix has exactly `rank` rows.
    pub fn row_reduce(&self) -> Echelon {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| m.get(i, col)) else {
                continue;
            };
            m.swap_rows(r, p);
            let pivot_row = m.row(r).to_vec();
            for i in 0..m.rows {
                if i != r && m.get(i, col) {
                    xor_into(m.row_mut(i), &pivot_row);
                }
            }
            pivots.push(col);
            r += 1;
        }
        m.data.truncate(r * m.stride);
        m.rows = r;
        Echelon { rank: r, matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.row_reduce().rank
    }

    /// Basis (as rows) of the null space `{x : M x = 0}`.
    pub fn kernel(&self) -> F2Matrix {
        let e = self.row_reduce();
        let mut k = F2Matrix::zeros(0, self.cols);
        let mut is_pivot = vec![false; self.cols];
        for &p in &e.pivots {
            is_pivot[p] = true;
        }
        for free in (0..self.cols).filter(|&j| !is_pivot[j]) {
            let mut v = k.empty_row();
            flip(&mut v, free);
            for (i, &p) in e.pivots.iter().enumerate() {
                if e.matrix.get(i, free) {
                    flip(&mut v, p);
                }
            }
            k.push_row(&v);
        }
        k
    }

    /// Basis (as rows) of `{y : y M = 0}`.
    pub fn left_kernel(&self) -> F2Matrix {
        self.transpose().kernel()
    }

    /// The product of a row vector with this matrix.
    pub fn row_times(&self, v: &[u64]) -> Vec<u64> {
        let mut out = self.empty_row();
        for i in 0..self.rows {
            if bit(v, i) {
                xor_into(&mut out, self.row(i));
            }
        }
        out
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &F2Matrix) -> F2Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = F2Matrix::zeros(0, other.cols);
        for i in 0..self.rows {
            out.push_row(&other.row_times(self.row(i)));
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|w| *w == 0)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for k in 0..self.stride {
                self.data.swap(a * self.stride + k, b * self.stride + k);
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct Echelon {
    pub matrix: F2Matrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

/// A subspace held in reduced row-echelon form.
#[derive(Debug, Clone)]
pub struct RowSpace {
    basis: F2Matrix,
    pivots: Vec<usize>,
}

impl RowSpace {
    pub fn new(m: &F2Matrix) -> Self {
        let e = m.row_reduce();
        RowSpace { basis: e.matrix, pivots: e.pivots }
    }

    pub fn zero(cols: usize) -> Self {
        RowSpace { basis: F2Matrix::zeros(0, cols), pivots: Vec::new() }
    }

    pub fn full(cols: usize) -> Self {
        RowSpace { basis: F2Matrix::identity(cols), pivots: (0..cols).collect() }
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn cols(&self) -> usize {
        self.basis.cols
    }

    pub fn basis(&self) -> &F2Matrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Clear the pivot positions of `v`; returns the coefficients used.
    pub fn reduce(&self, v: &mut [u64]) -> Vec<bool> {
        let mut coeffs = vec![false; self.dim()];
        for (i, &p) in self.pivots.iter().enumerate() {
            if bit(v, p) {
                xor_into(v, self.basis.row(i));
                coeffs[i] = true;
            }
        }
        coeffs
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|x| *x == 0)
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the span.
    pub fn express(&self, v: &[u64]) -> Option<Vec<bool>> {
        let mut w = v.to_vec();
        let c = self.reduce(&mut w);
        w.iter().all(|x| *x == 0).then_some(c)
    }

    pub fn sum(&self, other: &F2Matrix) -> RowSpace {
        RowSpace::new(&self.basis.stacked(other))
    }
}

/// Coset representatives for `cycles / boundaries`, as rows.
///
/// Cycle rows are reduced against the echelon form of the boundaries and
/// then echelonized themselves. Every representative vanishes on the
/// boundary pivots and has its own leading column, which is the smallest
/// column not already explained by a boundary. With columns sorted by the
/// monomial order this makes the choice deterministic.
pub fn subquotient_basis(cycles: &F2Matrix, boundaries: &F2Matrix) -> Result<F2Matrix> {
    let z = RowSpace::new(cycles);
    let b = RowSpace::new(boundaries);
    if b.basis.row_iter().any(|r| !z.contains(r)) {
        return Err(Error::Containment);
    }
    let mut reduced = F2Matrix::zeros(0, cycles.cols);
    for r in z.basis.row_iter() {
        let mut v = r.to_vec();
        b.reduce(&mut v);
        reduced.push_row(&v);
    }
    let mut reps = reduced.row_reduce().matrix;
    // a final pass keeps the boundary pivots clear after echelonization
    for i in 0..reps.rows {
        let mut v = reps.row(i).to_vec();
        b.reduce(&mut v);
        reps.row_mut(i).copy_from_slice(&v);
    }
    Ok(reps)
}
