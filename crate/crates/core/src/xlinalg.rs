//! Small dense exact linear algebra.
//!
//! Matrices here are tiny (at most a few dozen rows), so storage is a flat
//! row-major `Vec`. Determinants use Bareiss fraction-free elimination; the
//! signature of a symmetric matrix is read off its characteristic polynomial
//! with Descartes' rule of signs, which is exact because every root is real.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::scalar::{Field, OrderedField, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("dimension mismatch: {left:?} vs {right:?}")]
    DimensionMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("matrix is not symmetric (entry ({row}, {col}))")]
    NotSymmetric { row: usize, col: usize },
    #[error("ragged rows: row {row} has {found} entries, expected {expected}")]
    Ragged { row: usize, found: usize, expected: usize },
}

pub type Result<T> = std::result::Result<T, LinalgError>;

/// Dense `rows x cols` matrix.
#[derive(Clone, PartialEq, Debug)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

/// Inertia of a symmetric matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Signature {
    pub positives: usize,
    pub negatives: usize,
    pub zeros: usize,
}

impl Signature {
    pub fn new(positives: usize, negatives: usize, zeros: usize) -> Self {
        Signature {
            positives,
            negatives,
            zeros,
        }
    }

    pub fn dimension(&self) -> usize {
        self.positives + self.negatives + self.zeros
    }

    /// Signature `(1, n-1, 0)`.
    pub fn is_lorentzian(&self) -> bool {
        self.positives == 1 && self.zeros == 0 && self.negatives + 1 == self.dimension()
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.positives, self.negatives, self.zeros)
    }
}

impl<T: Scalar> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch {
                left: (rows, cols),
                right: (data.len(), 1),
            });
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != c {
                return Err(LinalgError::Ragged {
                    row: i,
                    found: row.len(),
                    expected: c,
                });
            }
            data.extend(row);
        }
        Ok(Matrix { rows: r, cols: c, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = T::one();
        }
        m
    }

    pub fn diagonal(entries: &[T]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            m.data[i * n + i] = e.clone();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|x| x.clone() * s.clone())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        Ok(Self::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).fold(T::zero(), |acc, k| {
                acc + self.get(i, k).clone() * other.get(k, j).clone()
            })
        }))
    }

    pub fn mul_vec(&self, v: &[T]) -> Result<Vec<T>> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (v.len(), 1),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect())
    }

    /// Bilinear form `u^T M v`.
    pub fn bilinear(&self, u: &[T], v: &[T]) -> Result<T> {
        let mv = self.mul_vec(v)?;
        if u.len() != self.rows {
            return Err(LinalgError::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (u.len(), 1),
            });
        }
        Ok(u.iter()
            .zip(&mv)
            .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone()))
    }

    pub fn trace(&self) -> Result<T> {
        self.check_square()?;
        Ok((0..self.rows).fold(T::zero(), |acc, i| acc + self.get(i, i).clone()))
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetry_violation().is_none()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(T::is_zero)
    }

    fn symmetry_violation(&self) -> Option<(usize, usize)> {
        if !self.is_square() {
            return Some((0, 0));
        }
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                if self.get(i, j) != self.get(j, i) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    fn check_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(LinalgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.rows == other.rows && self.cols == other.cols {
            Ok(())
        } else {
            Err(LinalgError::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            })
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl<T: Field> Matrix<T> {
    /// Determinant by Bareiss fraction-free elimination (every division is exact).
    pub fn determinant(&self) -> Result<T> {
        self.check_square()?;
        let n = self.rows;
        if n == 0 {
            return Ok(T::one());
        }
        let mut m = self.clone();
        let mut negate = false;
        let mut prev = T::one();
        for k in 0..n.saturating_sub(1) {
            if m.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !m.get(i, k).is_zero()) {
                    Some(i) => {
                        m.swap_rows(i, k);
                        negate = !negate;
                    }
                    None => return Ok(T::zero()),
                }
            }
            let pivot = m.get(k, k).clone();
            for i in (k + 1)..n {
                let lead = m.get(i, k).clone();
                for j in (k + 1)..n {
                    let v = (m.get(i, j).clone() * pivot.clone() - lead.clone() * m.get(k, j).clone()) / prev.clone();
                    m.set(i, j, v);
                }
                m.set(i, k, T::zero());
            }
            prev = pivot;
        }
        let det = m.get(n - 1, n - 1).clone();
        Ok(if negate { -det } else { det })
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(p, r);
            let inv = T::one() / m.get(r, c).clone();
            for j in c..m.cols {
                let v = m.get(r, j).clone() * inv.clone();
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let factor = m.get(i, c).clone();
                for j in c..m.cols {
                    let v = m.get(i, j).clone() - factor.clone() * m.get(r, j).clone();
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel, one vector per free column (free variable set to 1),
    /// ordered by free column index.
    pub fn nullspace(&self) -> Vec<Vec<T>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![T::zero(); self.cols];
                v[fc] = T::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -r.get(row, fc).clone();
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self) -> Result<Self> {
        self.check_square()?;
        let n = self.rows;
        let aug = Self::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else if j - n == i {
                T::one()
            } else {
                T::zero()
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(LinalgError::Singular);
        }
        Ok(Self::from_fn(n, n, |i, j| r.get(i, j + n).clone()))
    }

    /// Coefficients `c_0..c_n` of `det(lambda I - M)` (ascending powers), by the
    /// Faddeev-LeVerrier recurrence.
    pub fn characteristic_polynomial(&self) -> Result<Vec<T>> {
        self.check_square()?;
        let n = self.rows;
        let mut coeffs = vec![T::zero(); n + 1];
        coeffs[n] = T::one();
        let mut aux = Self::zeros(n, n);
        for k in 1..=n {
            // aux <- M * aux + c_{n-k+1} I
            let mut next = self.try_mul(&aux)?;
            for i in 0..n {
                let v = next.get(i, i).clone() + coeffs[n - k + 1].clone();
                next.set(i, i, v);
            }
            aux = next;
            let t = self.try_mul(&aux)?.trace()?;
            coeffs[n - k] = -(t / T::from_i64(k as i64));
        }
        Ok(coeffs)
    }
}

impl<T: OrderedField> Matrix<T> {
    /// Inertia of a symmetric matrix via Descartes' rule on its characteristic polynomial.
    pub fn signature(&self) -> Result<Signature> {
        self.check_square()?;
        if let Some((row, col)) = self.symmetry_violation() {
            return Err(LinalgError::NotSymmetric { row, col });
        }
        let coeffs = self.characteristic_polynomial()?;
        let zeros = coeffs.iter().take_while(|c| c.is_zero()).count();
        let nonzero = &coeffs[zeros..];
        let positives = sign_changes(nonzero);
        let flipped: Vec<T> = nonzero
            .iter()
            .enumerate()
            .map(|(k, c)| if k % 2 == 1 { -c.clone() } else { c.clone() })
            .collect();
        let negatives = sign_changes(&flipped);
        Ok(Signature {
            positives,
            negatives,
            zeros,
        })
    }
}

fn sign_changes<T: OrderedField>(coeffs: &[T]) -> usize {
    let mut last: Option<bool> = None;
    let mut changes = 0;
    for c in coeffs.iter().filter(|c| !c.is_zero()) {
        let s = c.is_positive();
        if let Some(prev) = last {
            if prev != s {
                changes += 1;
            }
        }
        last = Some(s);
    }
    changes
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat, Rational};

    fn m(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()).unwrap()
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(Matrix::<Rational>::identity(3).determinant().unwrap(), int(1));
        // Hessian of xyz(x+y+z) at (1,1,1).
        let h = m(&[&[2, 5, 5], &[5, 2, 5], &[5, 5, 2]]);
        assert_eq!(h.determinant().unwrap(), int(108));
        let rep = m(&[&[1, 2, 3], &[4, 5, 6], &[1, 2, 3]]);
        assert_eq!(rep.determinant().unwrap(), int(0));
        // needs a row swap
        let swap = m(&[&[0, 1], &[1, 0]]);
        assert_eq!(swap.determinant().unwrap(), int(-1));
        assert!(matches!(
            m(&[&[1, 2, 3]]).determinant(),
            Err(LinalgError::NotSquare { .. })
        ));
    }

    #[test]
    fn inverse_examples() {
        let id = Matrix::<Rational>::identity(4);
        assert_eq!(id.inverse().unwrap(), id);
        let neg = Matrix::diagonal(&[int(-1), int(-1), int(-1)]);
        assert_eq!(neg.inverse().unwrap(), neg);
        let a = m(&[&[2, 1], &[7, 4]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.try_mul(&inv).unwrap(), Matrix::identity(2));
        assert_eq!(m(&[&[1, 2], &[2, 4]]).inverse(), Err(LinalgError::Singular));
    }

    #[test]
    fn nullspace_examples() {
        let z = Matrix::<Rational>::zeros(2, 2);
        assert_eq!(z.nullspace(), vec![vec![int(1), int(0)], vec![int(0), int(1)]]);
        assert!(Matrix::<Rational>::identity(3).nullspace().is_empty());
        let a = m(&[&[1, 2, 3], &[2, 4, 6]]);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(a.mul_vec(v).unwrap().iter().all(|x| *x == int(0)));
        }
    }

    #[test]
    fn signature_examples() {
        let h = m(&[&[2, 5, 5], &[5, 2, 5], &[5, 5, 2]]);
        assert_eq!(h.signature().unwrap(), Signature::new(1, 2, 0));
        let d = m(&[&[2, 0, 0], &[0, 0, 0], &[0, 0, -5]]);
        assert_eq!(d.signature().unwrap(), Signature::new(1, 1, 1));
        assert!(matches!(
            m(&[&[1, 2], &[3, 4]]).signature(),
            Err(LinalgError::NotSymmetric { .. })
        ));
    }

    #[test]
    fn characteristic_polynomial_2x2() {
        // lambda^2 - 5 lambda - 2 for [[1,2],[3,4]]
        let a = m(&[&[1, 2], &[3, 4]]);
        assert_eq!(a.characteristic_polynomial().unwrap(), vec![int(-2), int(-5), int(1)]);
        let half = Matrix::diagonal(&[rat(1, 2)]);
        assert_eq!(half.characteristic_polynomial().unwrap(), vec![rat(-1, 2), int(1)]);
    }

    #[test]
    fn works_over_floats() {
        let a = Matrix::from_rows(vec![vec![4.0, 1.0], vec![2.0, 3.0]]).unwrap();
        assert!((a.determinant().unwrap() - 10.0f64).abs() < 1e-12);
    }
}
