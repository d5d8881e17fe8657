//! Dense exact matrices.
//!
//! Ranks go through fraction-free (Bareiss) elimination; rational matrices are
//! first scaled row by row to integer matrices. Kernels, solves and inverses over
//! a field use Gauss-Jordan elimination with first-nonzero pivoting, which makes
//! the returned bases deterministic. Determinants and characteristic polynomials
//! over a general commutative ring (parameter polynomials) use the division-free
//! Berkowitz algorithm.

use crate::error::{Error, Result};
use crate::ring::{Domain, Field, Ring};
use crate::scalars::{Rational, Scalar, Tower};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Ring> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn diag(entries: Vec<T>) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, e) in entries.into_iter().enumerate() {
            m[(i, i)] = e;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_cols(rows: usize, cols: &[Vec<T>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, v) in c.iter().enumerate() {
                m[(i, j)] = v.clone();
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

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn try_map<U: Ring>(&self, f: impl Fn(&T) -> Result<U>) -> Result<Matrix<U>> {
        Ok(Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect::<Result<_>>()? })
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "matrix product shape");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] = out[(i, j)].add(&a.mul(b));
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len());
        (0..self.rows).map(|i| self.row(i).iter().zip(v).fold(T::zero(), |acc, (a, b)| acc.add(&a.mul(b)))).collect()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|x| x.mul(s))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Ring::is_zero)
    }

    /// Leading `k x k` submatrix.
    pub fn leading(&self, k: usize) -> Self {
        let mut m = Self::zeros(k, k);
        for i in 0..k {
            for j in 0..k {
                m[(i, j)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn is_lower_triangular(&self) -> bool {
        (0..self.rows).all(|i| (i + 1..self.cols).all(|j| self[(i, j)].is_zero()))
    }

    /// Coefficients `[1, c1, ..., cn]` of `det(x I - A) = x^n + c1 x^{n-1} + ... + cn`,
    /// computed without division (Berkowitz).
    pub fn char_poly(&self) -> Vec<T> {
        assert!(self.is_square(), "characteristic polynomial of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return vec![T::one()];
        }
        // coefficients of the characteristic polynomial of the leading r x r block
        let mut poly = vec![T::one(), self[(0, 0)].neg()];
        for r in 1..n {
            // A_r = [[M, col], [row, a]] with M the leading r x r block
            let a = self[(r, r)].clone();
            let row: Vec<T> = (0..r).map(|j| self[(r, j)].clone()).collect();
            let col: Vec<T> = (0..r).map(|i| self[(i, r)].clone()).collect();
            // Toeplitz entries: 1, -a, -row·col, -row·M·col, ...
            let mut t = Vec::with_capacity(r + 2);
            t.push(T::one());
            t.push(a.neg());
            let mut v = col;
            for _ in 0..r {
                let s = row.iter().zip(&v).fold(T::zero(), |acc, (x, y)| acc.add(&x.mul(y)));
                t.push(s.neg());
                v = (0..r).map(|i| (0..r).fold(T::zero(), |acc, k| acc.add(&self[(i, k)].mul(&v[k])))).collect();
            }
            // new_poly = T · poly with T lower triangular Toeplitz of size (r+2) x (r+1)
            let mut next = vec![T::zero(); r + 2];
            for (i, slot) in next.iter_mut().enumerate() {
                for (j, p) in poly.iter().enumerate() {
                    if i >= j {
                        *slot = slot.add(&t[i - j].mul(p));
                    }
                }
            }
            poly = next;
        }
        poly
    }

    /// Determinant over any commutative ring.
    pub fn det(&self) -> T {
        let n = self.rows;
        let cp = self.char_poly();
        let c = cp[n].clone();
        if n.is_multiple_of(2) {
            c
        } else {
            c.neg()
        }
    }

    /// Leading principal minors `det(A_1), ..., det(A_n)`.
    pub fn leading_minors(&self) -> Vec<T> {
        (1..=self.rows).map(|k| self.leading(k).det()).collect()
    }

    /// `adj(A)` via Cayley-Hamilton: `adj(A) = (-1)^{n-1} (A^{n-1} + c1 A^{n-2} + ... + c_{n-1} I)`.
    pub fn adjugate(&self) -> Self {
        let n = self.rows;
        let cp = self.char_poly();
        let mut acc = Self::identity(n);
        for c in cp.iter().take(n).skip(1) {
            acc = self.mul(&acc).add(&Self::identity(n).scale(c));
        }
        if n.is_multiple_of(2) {
            acc.scale(&T::one().neg())
        } else {
            acc
        }
    }
}

impl<T> std::ops::Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Domain> Matrix<T> {
    /// Fraction-free Gaussian elimination; returns the rank and the pivot columns.
    /// Pivots are the first nonzero entry in column order, scanning rows top-down.
    pub fn bareiss_rank(&self) -> (usize, Vec<usize>) {
        let mut m = self.clone();
        let mut prev = T::one();
        let mut r = 0;
        let mut pivots = Vec::new();
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let piv = m[(r, c)].clone();
            for i in r + 1..m.rows {
                let lead = m[(i, c)].clone();
                for j in c + 1..m.cols {
                    let v = piv.mul(&m[(i, j)]).sub(&lead.mul(&m[(r, j)]));
                    m[(i, j)] = v.exact_div(&prev);
                }
                m[(i, c)] = T::zero();
            }
            prev = piv;
            pivots.push(c);
            r += 1;
        }
        (r, pivots)
    }
}

impl<T: Field> Matrix<T> {
    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m[(r, c)].inv();
            for j in c..m.cols {
                m[(r, j)] = m[(r, j)].mul(&inv);
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    let v = m[(i, j)].sub(&f.mul(&m[(r, j)]));
                    m[(i, j)] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    /// Basis of the null space, one vector per free column (in column order),
    /// each with a 1 in its free column.
    pub fn kernel(&self) -> Vec<Vec<T>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![T::zero(); self.cols];
                v[f] = T::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = r[(row, f)].neg();
                }
                v
            })
            .collect()
    }

    /// Some solution of `A x = b`, or `None` when inconsistent.
    pub fn solve(&self, b: &[T]) -> Option<Vec<T>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![T::zero(); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = r[(row, self.cols)].clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Result<Self> {
        assert!(self.is_square());
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = T::one();
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = r[(i, n + j)].clone();
            }
        }
        Ok(inv)
    }
}

fn all_rational(m: &Matrix<Tower>) -> bool {
    m.data.iter().all(|t| t.as_rational().is_some())
}

fn to_rational(m: &Matrix<Tower>) -> Matrix<Rational> {
    m.map(|t| t.as_rational().expect("rational entry").clone())
}

fn from_rational(m: &Matrix<Rational>) -> Matrix<Tower> {
    m.map(|r| Tower::from_rational(r.clone()))
}

/// Clears denominators row by row; the row space (hence rank) is unchanged.
pub fn integer_rows(m: &Matrix<Rational>) -> Matrix<BigInt> {
    let mut out = Matrix::<BigInt>::zeros(m.rows, m.cols);
    for i in 0..m.rows {
        let l = m.row(i).iter().fold(<BigInt as One>::one(), |acc, r| acc.lcm(r.denom()));
        for j in 0..m.cols {
            let v = &m[(i, j)] * Rational::from_integer(l.clone());
            out[(i, j)] = v.to_integer();
        }
    }
    out
}

impl Matrix<Tower> {
    /// Exact rank: integer Bareiss when all entries are rational, tower Bareiss otherwise.
    pub fn rank(&self) -> usize {
        if all_rational(self) {
            integer_rows(&to_rational(self)).bareiss_rank().0
        } else {
            self.bareiss_rank().0
        }
    }

    /// Pivot columns of the row echelon form (first-nonzero pivoting).
    pub fn pivot_columns(&self) -> Vec<usize> {
        if all_rational(self) {
            integer_rows(&to_rational(self)).bareiss_rank().1
        } else {
            self.bareiss_rank().1
        }
    }

    pub fn null_space(&self) -> Vec<Vec<Tower>> {
        if all_rational(self) {
            to_rational(self).kernel().into_iter().map(|v| v.into_iter().map(Tower::from_rational).collect()).collect()
        } else {
            self.kernel()
        }
    }

    pub fn solve_tower(&self, b: &[Tower]) -> Option<Vec<Tower>> {
        if all_rational(self) && b.iter().all(|t| t.as_rational().is_some()) {
            let rb: Vec<Rational> = b.iter().map(|t| t.as_rational().unwrap().clone()).collect();
            to_rational(self).solve(&rb).map(|x| x.into_iter().map(Tower::from_rational).collect())
        } else {
            self.solve(b)
        }
    }

    pub fn inverse_tower(&self) -> Result<Self> {
        if all_rational(self) {
            Ok(from_rational(&to_rational(self).inverse()?))
        } else {
            self.inverse()
        }
    }
}

impl Matrix<Scalar> {
    /// Entrywise constant values.
    pub fn constant(&self) -> Result<Matrix<Tower>> {
        self.try_map(Scalar::constant)
    }

    pub fn from_tower(m: &Matrix<Tower>) -> Self {
        m.map(|t| Scalar::from_tower(t.clone()))
    }

    /// Inverse over the parameter polynomial ring; requires a nonzero constant determinant.
    pub fn inverse_poly(&self) -> Result<Self> {
        let det = self.det();
        if det.is_zero() {
            return Err(Error::Singular);
        }
        let dinv = det.invert()?;
        Ok(self.adjugate().scale(&dinv))
    }

    pub fn conjugate(&self) -> Self {
        self.map(Scalar::conjugate)
    }
}
