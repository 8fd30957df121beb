//! Dense max-plus matrices.

use std::fmt;
use std::ops::{Index, IndexMut};

use rayon::prelude::*;

use super::scalar::{Rational, Scalar, UpperScalar};
use super::MaxPlusError;

/// Below this many scalar products `times` stays on the calling thread.
const PARALLEL_WORK: usize = 1 << 16;

/// Row-major dense matrix. Defaults to max-plus scalars; residuation
/// results use `Matrix<UpperScalar>`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T = Scalar> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type UpperMatrix = Matrix<UpperScalar>;

impl<T: Copy> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self, MaxPlusError> {
        if data.len() != rows * cols {
            return Err(MaxPlusError::BadShape {
                rows,
                cols,
                len: data.len(),
            });
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn filled(rows: usize, cols: usize, value: T) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    /// Builds a matrix from row vectors. An empty list gives a 0×0 matrix.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, MaxPlusError> {
        let cols = rows.first().map_or(0, Vec::len);
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(MaxPlusError::BadShape {
                rows: n,
                cols,
                len: bad.len(),
            });
        }
        Ok(Matrix {
            rows: n,
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn column_vector(values: &[T]) -> Self {
        Matrix {
            rows: values.len(),
            cols: 1,
            data: values.to_vec(),
        }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: T) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j));
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    /// Sub-matrix on the given row and column indices, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for &i in rows {
            for &j in cols {
                data.push(self.get(i, j));
            }
        }
        Matrix {
            rows: rows.len(),
            cols: cols.len(),
            data,
        }
    }

    /// Applies a symmetric permutation: entry `(a, b)` of the result is
    /// entry `(order[a], order[b])` of `self`.
    pub fn permuted(&self, order: &[usize]) -> Self {
        self.select(order, order)
    }

    pub fn stack_vertical(&self, below: &Self) -> Result<Self, MaxPlusError> {
        if self.cols != below.cols {
            return Err(MaxPlusError::dims(
                "stack_vertical",
                self.shape(),
                below.shape(),
            ));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&below.data);
        Ok(Matrix {
            rows: self.rows + below.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn stack_horizontal(&self, right: &Self) -> Result<Self, MaxPlusError> {
        if self.rows != right.rows {
            return Err(MaxPlusError::dims(
                "stack_horizontal",
                self.shape(),
                right.shape(),
            ));
        }
        let mut data = Vec::with_capacity(self.data.len() + right.data.len());
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(right.row(i));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols + right.cols,
            data,
        })
    }

    pub fn map<U: Copy>(&self, f: impl Fn(T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    fn zip_with(
        &self,
        other: &Self,
        op: &'static str,
        f: impl Fn(T, T) -> T,
    ) -> Result<Self, MaxPlusError> {
        if self.shape() != other.shape() {
            return Err(MaxPlusError::dims(op, self.shape(), other.shape()));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }
}

impl<T: Copy + Ord> Matrix<T> {
    /// Entrywise minimum `A ∧ B`.
    pub fn meet(&self, other: &Self) -> Result<Self, MaxPlusError> {
        self.zip_with(other, "meet", |a, b| a.min(b))
    }

    /// Entrywise comparison `A ≤ B`.
    pub fn leq(&self, other: &Self) -> Result<bool, MaxPlusError> {
        if self.shape() != other.shape() {
            return Err(MaxPlusError::dims("leq", self.shape(), other.shape()));
        }
        Ok(self.data.iter().zip(&other.data).all(|(a, b)| a <= b))
    }
}

impl Matrix<Scalar> {
    /// The zero matrix `O`.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::filled(rows, cols, Scalar::ZERO)
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::ONE);
        }
        m
    }

    pub fn from_ints(rows: &[&[Option<i64>]]) -> Self {
        let rows = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|v| v.map_or(Scalar::Bottom, Scalar::int))
                    .collect()
            })
            .collect();
        Matrix::from_rows(rows).expect("ragged integer matrix")
    }

    /// Entrywise maximum `A ⊕ B`.
    pub fn plus(&self, other: &Self) -> Result<Self, MaxPlusError> {
        self.zip_with(other, "plus", Scalar::plus)
    }

    /// Max-plus product: `(AB)_{ij} = max_k (a_ik + b_kj)`.
    pub fn times(&self, other: &Self) -> Result<Self, MaxPlusError> {
        if self.cols != other.rows {
            return Err(MaxPlusError::dims("times", self.shape(), other.shape()));
        }
        let (n, q) = (self.rows, other.cols);
        let mut data = vec![Scalar::ZERO; n * q];
        if q == 0 {
            return Ok(Matrix {
                rows: n,
                cols: q,
                data,
            });
        }
        let fill_row = |i: usize, out: &mut [Scalar]| {
            for (k, &a) in self.row(i).iter().enumerate() {
                if a.is_bottom() {
                    continue;
                }
                for (slot, &b) in out.iter_mut().zip(other.row(k)) {
                    if b.is_finite() {
                        let candidate = a.times(b);
                        if candidate > *slot {
                            *slot = candidate;
                        }
                    }
                }
            }
        };
        if n * self.cols * q >= PARALLEL_WORK {
            data.par_chunks_mut(q)
                .enumerate()
                .for_each(|(i, out)| fill_row(i, out));
        } else {
            data.chunks_mut(q)
                .enumerate()
                .for_each(|(i, out)| fill_row(i, out));
        }
        Ok(Matrix {
            rows: n,
            cols: q,
            data,
        })
    }

    /// Matrix-vector product on a plain slice.
    pub fn apply(&self, x: &[Scalar]) -> Result<Vec<Scalar>, MaxPlusError> {
        if x.len() != self.cols {
            return Err(MaxPlusError::dims("apply", self.shape(), (x.len(), 1)));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .map(|(&a, &b)| a.times(b))
                    .max()
                    .unwrap_or(Scalar::ZERO)
            })
            .collect())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Matrix::identity(self.rows)
    }

    /// True when row `i` is the canonical basis row `e_i`.
    pub fn row_is_unit(&self, i: usize) -> bool {
        self.row(i).iter().enumerate().all(|(j, &v)| {
            if j == i {
                v == Scalar::ONE
            } else {
                v.is_bottom()
            }
        })
    }

    /// Largest absolute value among finite entries, zero if none.
    pub fn max_abs_entry(&self) -> Rational {
        self.data
            .iter()
            .filter_map(|v| v.value())
            .map(|v| if v < Rational::from_integer(0) { -v } else { v })
            .max()
            .unwrap_or_else(|| Rational::from_integer(0))
    }
}

impl Matrix<UpperScalar> {
    /// Replaces every `+∞` by `cap`.
    pub fn clamp(&self, cap: Rational) -> Matrix<Scalar> {
        self.map(|v| v.clamp(cap))
    }

    /// `None` when some entry is `+∞`.
    pub fn to_lower(&self) -> Option<Matrix<Scalar>> {
        let data = self
            .data
            .iter()
            .map(|v| v.to_scalar())
            .collect::<Option<Vec<_>>>()?;
        Some(Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn has_top(&self) -> bool {
        self.data.iter().any(|v| v.is_top())
    }
}

impl From<&Matrix<Scalar>> for Matrix<UpperScalar> {
    fn from(m: &Matrix<Scalar>) -> Self {
        m.map(UpperScalar::from)
    }
}

impl<T: Copy> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T: Copy> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Copy + fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.data.iter().map(|v| v.to_string()).collect();
        let width = cells.iter().map(String::len).max().unwrap_or(0);
        for i in 0..self.rows {
            let line: Vec<String> = (0..self.cols)
                .map(|j| format!("{:>width$}", cells[i * self.cols + j]))
                .collect();
            writeln!(f, "[ {} ]", line.join("  "))?;
        }
        Ok(())
    }
}

impl<T: Copy + fmt::Display> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} ", self.rows, self.cols)?;
        let rows: Vec<String> = (0..self.rows)
            .map(|i| {
                let r: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
                format!("[{}]", r.join(", "))
            })
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}
