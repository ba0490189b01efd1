use std::fmt;
use std::ops::{Index, IndexMut};

use rand::Rng;

use super::field::PrimeField;
use crate::error::{Error, Result};

/// Dense row-major matrix over a prime field.
///
/// Matrices act on column vectors: a linear map from a `d`-dimensional
/// space to an `e`-dimensional one is an `e x d` matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub reduced: Matrix,
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

impl Matrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Self {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % field.p();
        }
        m
    }

    pub fn scalar(field: PrimeField, n: usize, c: u32) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = c;
        }
        m
    }

    /// Build from raw residues; entries are reduced mod p.
    pub fn from_vec(field: PrimeField, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must be rows * cols");
        let p = field.p();
        let data = data.into_iter().map(|v| v % p).collect();
        Self {
            field,
            rows,
            cols,
            data,
        }
    }

    /// Build from integer rows (any sign). Panics on ragged input.
    pub fn from_rows(field: PrimeField, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix literal");
            data.extend(row.iter().map(|&v| field.reduce(v)));
        }
        Self {
            field,
            rows: r,
            cols: c,
            data,
        }
    }

    /// Matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(field: PrimeField, rows: usize, columns: &[Vec<u32>]) -> Self {
        let mut m = Self::zeros(field, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for i in 0..rows {
                m.data[i * m.cols + j] = col[i] % field.p();
            }
        }
        m
    }

    pub fn random<R: Rng + ?Sized>(field: PrimeField, rows: usize, cols: usize, rng: &mut R) -> Self {
        let data = (0..rows * cols).map(|_| field.random(rng)).collect();
        Self {
            field,
            rows,
            cols,
            data,
        }
    }

    /// A uniformly random invertible matrix (rejection sampling).
    pub fn random_invertible<R: Rng + ?Sized>(field: PrimeField, n: usize, rng: &mut R) -> Self {
        loop {
            let m = Self::random(field, n, n, rng);
            if m.rank() == n {
                return m;
            }
        }
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self[(i, j)] == u32::from(i == j)))
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self.data[i * self.cols + j]).collect()
    }

    pub fn columns(&self) -> Vec<Vec<u32>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(
            self.cols, rhs.rows,
            "cannot multiply {}x{} by {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        let f = self.field;
        let p = f.p() as u64;
        let mut out = Matrix::zeros(f, self.rows, rhs.cols);
        let mut acc = vec![0u64; rhs.cols];
        for i in 0..self.rows {
            acc.iter_mut().for_each(|a| *a = 0);
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k] as u64;
                if a == 0 {
                    continue;
                }
                let rrow = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                for (slot, &b) in acc.iter_mut().zip(rrow) {
                    *slot = (*slot + a * b as u64) % p;
                }
            }
            for (j, &v) in acc.iter().enumerate() {
                out.data[i * rhs.cols + j] = v as u32;
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(self.cols, v.len());
        let f = self.field;
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0u32, |acc, (&a, &b)| f.mul_add(acc, a, b))
            })
            .collect()
    }

    pub fn add(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.shape(), rhs.shape());
        let f = self.field;
        let data = self.data.iter().zip(&rhs.data).map(|(&a, &b)| f.add(a, b)).collect();
        Matrix { data, ..*self }
    }

    pub fn sub(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.shape(), rhs.shape());
        let f = self.field;
        let data = self.data.iter().zip(&rhs.data).map(|(&a, &b)| f.sub(a, b)).collect();
        Matrix { data, ..*self }
    }

    pub fn scale(&self, c: u32) -> Matrix {
        let f = self.field;
        let data = self.data.iter().map(|&a| f.mul(a, c)).collect();
        Matrix { data, ..*self }
    }

    /// `self += c * rhs`
    pub fn add_scaled(&mut self, rhs: &Matrix, c: u32) {
        assert_eq!(self.shape(), rhs.shape());
        if c == 0 {
            return;
        }
        let f = self.field;
        for (a, &b) in self.data.iter_mut().zip(&rhs.data) {
            *a = f.mul_add(*a, b, c);
        }
    }

    pub fn pow(&self, mut e: u64) -> Matrix {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Matrix::identity(self.field, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn trace(&self) -> u32 {
        assert!(self.is_square());
        (0..self.rows).fold(0, |acc, i| self.field.add(acc, self[(i, i)]))
    }

    /// `[self | rhs]`
    pub fn hstack(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.rows, rhs.rows);
        let mut out = Matrix::zeros(self.field, self.rows, self.cols + rhs.cols);
        for i in 0..self.rows {
            out.data[i * out.cols..i * out.cols + self.cols].copy_from_slice(self.row(i));
            out.data[i * out.cols + self.cols..(i + 1) * out.cols].copy_from_slice(rhs.row(i));
        }
        out
    }

    /// `[self ; rhs]`
    pub fn vstack(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&rhs.data);
        Matrix {
            field: self.field,
            rows: self.rows + rhs.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn block_diag(field: PrimeField, blocks: &[&Matrix]) -> Matrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(field, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            out.set_block(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Matrix) {
        assert!(r0 + b.rows <= self.rows && c0 + b.cols <= self.cols);
        for i in 0..b.rows {
            let dst = (r0 + i) * self.cols + c0;
            self.data[dst..dst + b.cols].copy_from_slice(b.row(i));
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols);
        let mut out = Matrix::zeros(self.field, rows, cols);
        for i in 0..rows {
            let src = (r0 + i) * self.cols + c0;
            out.data[i * cols..(i + 1) * cols].copy_from_slice(&self.data[src..src + cols]);
        }
        out
    }

    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.field, self.rows, cols.len());
        for i in 0..self.rows {
            for (jj, &j) in cols.iter().enumerate() {
                out.data[i * cols.len() + jj] = self.data[i * self.cols + j];
            }
        }
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.field, rows.len(), self.cols);
        for (ii, &i) in rows.iter().enumerate() {
            out.data[ii * self.cols..(ii + 1) * self.cols].copy_from_slice(self.row(i));
        }
        out
    }

    /// Reduced row echelon form: leftmost pivots, each pivot scaled to 1.
    pub fn rref(&self) -> Echelon {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        Echelon { reduced: m, pivots }
    }

    /// In-place RREF; returns pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let f = self.field;
        let p = f.p() as u64;
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(piv) = (r..rows).find(|&i| self.data[i * cols + c] != 0) else {
                continue;
            };
            if piv != r {
                for j in 0..cols {
                    self.data.swap(piv * cols + j, r * cols + j);
                }
            }
            let inv = f.inv(self.data[r * cols + c]) as u64;
            for j in c..cols {
                let v = &mut self.data[r * cols + j];
                *v = ((*v as u64 * inv) % p) as u32;
            }
            let (before, rest) = self.data.split_at_mut(r * cols);
            let (pivot_row, after) = rest.split_at_mut(cols);
            let eliminate = |row: &mut [u32]| {
                let factor = row[c];
                if factor == 0 {
                    return;
                }
                let neg = p - factor as u64;
                for j in c..cols {
                    let pv = pivot_row[j];
                    if pv != 0 {
                        row[j] = ((row[j] as u64 + neg * pv as u64) % p) as u32;
                    }
                }
            };
            for row in before.chunks_mut(cols) {
                eliminate(row);
            }
            for row in after.chunks_mut(cols) {
                eliminate(row);
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.rref().rank()
    }

    /// Columns form a basis of the null space `{v : self * v = 0}`.
    pub fn kernel_basis(&self) -> Matrix {
        let ech = self.rref();
        kernel_from_echelon(&ech, self.cols)
    }

    /// Deterministic particular solution of `self * x = b` with free
    /// variables set to zero.
    pub fn solve(&self, b: &Matrix) -> Result<Matrix> {
        if self.rows != b.rows {
            return Err(Error::DimensionMismatch(format!(
                "solve: {} rows vs {} rows",
                self.rows, b.rows
            )));
        }
        let aug = self.hstack(b);
        let ech = aug.rref();
        let n = self.cols;
        if ech.pivots.iter().any(|&c| c >= n) {
            return Err(Error::NoSolution);
        }
        let mut x = Matrix::zeros(self.field, n, b.cols);
        for (r, &c) in ech.pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.data[c * b.cols + j] = ech.reduced[(r, n + j)];
            }
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        self.solve(&Matrix::identity(self.field, self.rows)).ok()
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// The original columns at pivot positions: a basis of the column space.
    pub fn column_space_basis(&self) -> Matrix {
        let ech = self.rref();
        self.select_columns(&ech.pivots)
    }

    pub fn has_full_column_rank(&self) -> bool {
        self.rank() == self.cols
    }
}

/// Kernel basis read off an echelon form of a matrix with `cols` columns.
pub fn kernel_from_echelon(ech: &Echelon, cols: usize) -> Matrix {
    let f = ech.reduced.field;
    let mut is_pivot = vec![false; cols];
    for &c in &ech.pivots {
        is_pivot[c] = true;
    }
    let free: Vec<usize> = (0..cols).filter(|&c| !is_pivot[c]).collect();
    let mut k = Matrix::zeros(f, cols, free.len());
    for (j, &fc) in free.iter().enumerate() {
        k.data[fc * free.len() + j] = 1 % f.p();
        for (r, &pc) in ech.pivots.iter().enumerate() {
            let v = ech.reduced[(r, fc)];
            k.data[pc * free.len() + j] = f.neg(v);
        }
    }
    k
}

impl Index<(usize, usize)> for Matrix {
    type Output = u32;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &u32 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut u32 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix<{}>{}x{}", self.field, self.rows, self.cols)?;
        f.debug_list().entries(self.to_rows()).finish()
    }
}
