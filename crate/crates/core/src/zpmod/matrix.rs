use serde::{Deserialize, Serialize};

use super::ring::RingSpec;

/// Dense row-major matrix of residues. The ring is supplied by the caller
/// for every arithmetic operation; entries are kept in `[0, p^s)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<u64>>", into = "Vec<Vec<u64>>")]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl TryFrom<Vec<Vec<u64>>> for Matrix {
    type Error = String;
    fn try_from(rows: Vec<Vec<u64>>) -> Result<Self, String> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err("ragged matrix".into());
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }
}

impl From<Matrix> for Vec<Vec<u64>> {
    fn from(m: Matrix) -> Self {
        m.to_rows()
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    /// Builds a matrix from rows, reducing every entry into the ring.
    pub fn from_rows(ring: &RingSpec, rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        Matrix {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().map(|&a| ring.from_i64(a)).collect(),
        }
    }

    /// Builds a matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<u64>]) -> Self {
        let mut m = Matrix::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for (i, &a) in c.iter().enumerate() {
                m[(i, j)] = a;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&a| a == 0)
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, ring: &RingSpec, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Matrix::zeros(self.rows, other.cols);
        let m = ring.modulus() as u128;
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other[(k, j)];
                    if b != 0 {
                        let c = &mut out.data[i * other.cols + j];
                        *c = ((*c as u128 + a as u128 * b as u128) % m) as u64;
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, ring: &RingSpec, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| ring.add(acc, ring.mul(a, b)))
            })
            .collect()
    }

    /// Every entry reduced modulo `modulus`.
    pub fn reduced(&self, modulus: u64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a % modulus).collect(),
        }
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        let mut m = Matrix::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)];
            }
            for j in 0..other.cols {
                m[(i, self.cols + j)] = other[(i, j)];
            }
        }
        m
    }

    /// The first `n` rows.
    pub fn top_rows(&self, n: usize) -> Matrix {
        Matrix {
            rows: n,
            cols: self.cols,
            data: self.data[..n * self.cols].to_vec(),
        }
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    pub(crate) fn scale_row(&mut self, ring: &RingSpec, i: usize, c: u64) {
        for j in 0..self.cols {
            let x = &mut self.data[i * self.cols + j];
            *x = ring.mul(*x, c);
        }
    }

    pub(crate) fn scale_col(&mut self, ring: &RingSpec, j: usize, c: u64) {
        for i in 0..self.rows {
            let x = &mut self.data[i * self.cols + j];
            *x = ring.mul(*x, c);
        }
    }

    /// row[dst] += c · row[src]
    pub(crate) fn add_row_multiple(&mut self, ring: &RingSpec, dst: usize, src: usize, c: u64) {
        if c == 0 {
            return;
        }
        for j in 0..self.cols {
            let s = self.data[src * self.cols + j];
            if s != 0 {
                let x = &mut self.data[dst * self.cols + j];
                *x = ring.add(*x, ring.mul(c, s));
            }
        }
    }

    /// col[dst] += c · col[src]
    pub(crate) fn add_col_multiple(&mut self, ring: &RingSpec, dst: usize, src: usize, c: u64) {
        if c == 0 {
            return;
        }
        for i in 0..self.rows {
            let s = self.data[i * self.cols + src];
            if s != 0 {
                let x = &mut self.data[i * self.cols + dst];
                *x = ring.add(*x, ring.mul(c, s));
            }
        }
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = u64;
    fn index(&self, (i, j): (usize, usize)) -> &u64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut u64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}
