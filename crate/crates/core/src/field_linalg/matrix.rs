use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};

use super::field::{Fe, PrimeField};

/// Row-major dense matrix over a prime field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Fe>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix { rows, cols, data: vec![Fe::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Fe::ONE;
        }
        m
    }

    /// An empty matrix with a fixed column count, to be grown with [`push_row`](Self::push_row).
    pub fn with_cols(cols: usize) -> Self {
        DenseMatrix { rows: 0, cols, data: Vec::new() }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Fe>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(DenseMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<Fe>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::with_cols(cols);
        for r in rows {
            m.push_row(r)?;
        }
        Ok(m)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Fe] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [Fe] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[Fe]> {
        // chunks_exact panics on zero width.
        let width = self.cols.max(1);
        self.data.chunks_exact(width).take(if self.cols == 0 { 0 } else { self.rows })
    }

    pub fn entries(&self) -> &[Fe] {
        &self.data
    }

    pub fn push_row(&mut self, row: &[Fe]) -> Result<()> {
        if row.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "row of length {} pushed onto a matrix with {} columns",
                row.len(),
                self.cols
            )));
        }
        self.data.extend_from_slice(row);
        self.rows += 1;
        Ok(())
    }

    /// Appends all rows of `other` below `self`.
    pub fn stack(&mut self, other: &DenseMatrix) -> Result<()> {
        if other.cols != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot stack {} columns under {}",
                other.cols, self.cols
            )));
        }
        self.data.extend_from_slice(&other.data);
        self.rows += other.rows;
        Ok(())
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut t = DenseMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    /// Checks `M[i][j] = -M[j][i]` with a zero diagonal; returns the first violating cell.
    pub fn skew_violation(&self, field: &PrimeField) -> Option<(usize, usize)> {
        if self.rows != self.cols {
            return Some((0, 0));
        }
        for i in 0..self.rows {
            if !self[(i, i)].is_zero() {
                return Some((i, i));
            }
            for j in 0..i {
                if self[(i, j)] != field.neg(self[(j, i)]) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn scale(&self, field: &PrimeField, c: Fe) -> DenseMatrix {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| field.mul(x, c)).collect(),
        }
    }

    pub fn add(&self, field: &PrimeField, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} + {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| field.add(a, b)).collect(),
        })
    }

    /// Rank by ordinary Gaussian elimination on a private copy.
    pub fn rank(&self, field: &PrimeField) -> usize {
        let mut work = self.clone();
        work.echelonize(field)
    }

    /// Reduces `self` in place to row-echelon form and returns the rank.
    fn echelonize(&mut self, field: &PrimeField) -> usize {
        let (rows, cols) = (self.rows, self.cols);
        let mut rank = 0;
        for col in 0..cols {
            if rank == rows {
                break;
            }
            let Some(pivot) = (rank..rows).find(|&r| !self[(r, col)].is_zero()) else {
                continue;
            };
            if pivot != rank {
                self.swap_rows(pivot, rank);
            }
            let inv = field.inv(self[(rank, col)]).expect("pivot is nonzero");
            for x in &mut self.row_mut(rank)[col..] {
                *x = field.mul(*x, inv);
            }
            let (head, tail) = self.data.split_at_mut((rank + 1) * cols);
            let pivot_row = &head[rank * cols..];
            for r in tail.chunks_exact_mut(cols) {
                let factor = r[col];
                if factor.is_zero() {
                    continue;
                }
                for (x, &p) in r[col..].iter_mut().zip(&pivot_row[col..]) {
                    *x = field.sub_mul(*x, factor, p);
                }
            }
            rank += 1;
        }
        rank
    }

    /// Determinant of a square matrix.
    pub fn det(&self, field: &PrimeField) -> Result<Fe> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "determinant of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut det = Fe::ONE;
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !a[(r, col)].is_zero()) else {
                return Ok(Fe::ZERO);
            };
            if pivot != col {
                a.swap_rows(pivot, col);
                det = field.neg(det);
            }
            let p = a[(col, col)];
            det = field.mul(det, p);
            let inv = field.inv(p).expect("pivot is nonzero");
            for r in col + 1..n {
                let factor = field.mul(a[(r, col)], inv);
                if factor.is_zero() {
                    continue;
                }
                for c in col..n {
                    let v = field.sub_mul(a[(r, c)], factor, a[(col, c)]);
                    a[(r, c)] = v;
                }
            }
        }
        Ok(det)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let cols = self.cols;
        let (lo, hi) = (a.min(b), a.max(b));
        let (head, tail) = self.data.split_at_mut(hi * cols);
        head[lo * cols..(lo + 1) * cols].swap_with_slice(&mut tail[..cols]);
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = Fe;

    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &Fe {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Fe {
        &mut self.data[r * self.cols + c]
    }
}

/// A row space maintained in echelon form, grown one generator at a time.
///
/// Each stored row is normalized to a leading 1 and is zero left of its pivot, so
/// inserting a vector costs `O(rank * cols)`. Used where a family of nested
/// configurations is scanned (adding tangent spaces one point at a time).
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    field: PrimeField,
    cols: usize,
    rows: Vec<Vec<Fe>>,
    pivot_of_col: Vec<Option<usize>>,
}

impl EchelonBasis {
    pub fn new(field: PrimeField, cols: usize) -> Self {
        EchelonBasis { field, cols, rows: Vec::new(), pivot_of_col: vec![None; cols] }
    }

    #[inline]
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.cols
    }

    /// Adds `row` to the spanning set; returns whether the rank grew.
    pub fn insert(&mut self, row: &[Fe]) -> Result<bool> {
        if row.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "row of length {} inserted into a {}-column basis",
                row.len(),
                self.cols
            )));
        }
        if self.is_full() {
            return Ok(false);
        }
        let f = self.field;
        let mut v = row.to_vec();
        for c in 0..self.cols {
            let coeff = v[c];
            if coeff.is_zero() {
                continue;
            }
            match self.pivot_of_col[c] {
                Some(idx) => {
                    let basis_row = &self.rows[idx];
                    for (x, &b) in v[c..].iter_mut().zip(&basis_row[c..]) {
                        *x = f.sub_mul(*x, coeff, b);
                    }
                }
                None => {
                    let inv = f.inv(coeff).expect("nonzero");
                    for x in &mut v[c..] {
                        *x = f.mul(*x, inv);
                    }
                    self.pivot_of_col[c] = Some(self.rows.len());
                    self.rows.push(v);
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }

    /// Inserts every row of `m`; returns the number of rows that raised the rank.
    pub fn insert_matrix(&mut self, m: &DenseMatrix) -> Result<usize> {
        let mut grew = 0;
        for r in 0..m.rows() {
            if self.insert(m.row(r))? {
                grew += 1;
            }
        }
        Ok(grew)
    }
}
