//! Dense matrices over a [`Scalar`] field.
//!
//! Fixtures live in dimension at most sixteen, so there is no blocking or
//! allocation reuse here. Row reduction uses exact zero tests in exact mode
//! and magnitude pivoting in float mode.

use crate::scalar::Scalar;
use crate::{Error, Result};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn scale(&self, s: &S) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)].clone() * s.clone())
    }

    pub fn map<T: Scalar>(&self, f: impl FnMut(&S) -> T) -> Matrix<T> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn col(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn mul_vec(&self, v: &[S]) -> Result<Vec<S>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = S::zero();
                for j in 0..self.cols {
                    acc += self[(i, j)].clone() * v[j].clone();
                }
                acc
            })
            .collect())
    }

    pub fn trace(&self) -> S {
        assert_eq!(self.rows, self.cols);
        let mut acc = S::zero();
        for i in 0..self.rows {
            acc += self[(i, i)].clone();
        }
        acc
    }

    /// Largest entry magnitude; the residual norm used in reports.
    pub fn max_magnitude(&self) -> f64 {
        self.data.iter().map(|x| x.magnitude()).fold(0.0, f64::max)
    }

    pub fn is_zero_within(&self, tol: f64) -> bool {
        self.data.iter().all(|x| x.check_zero(tol))
    }

    /// Gaussian elimination to reduced row-echelon form.
    /// Returns the reduced matrix and the pivot column indices.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            // In float mode pick the largest-magnitude pivot for stability;
            // in exact mode any nonzero entry works.
            let mut best: Option<usize> = None;
            for r in row..m.rows {
                if !m[(r, col)].is_zero() {
                    match best {
                        None => best = Some(r),
                        Some(b) => {
                            if !S::exact_mode()
                                && m[(r, col)].magnitude() > m[(b, col)].magnitude()
                            {
                                best = Some(r);
                            }
                        }
                    }
                }
            }
            let Some(p) = best else { continue };
            m.swap_rows(row, p);
            let inv = S::one() / m[(row, col)].clone();
            for j in col..m.cols {
                let v = m[(row, j)].clone() * inv.clone();
                m[(row, j)] = v;
            }
            for r in 0..m.rows {
                if r != row && !m[(r, col)].is_zero() {
                    let factor = m[(r, col)].clone();
                    for j in col..m.cols {
                        let v = m[(r, j)].clone() - factor.clone() * m[(row, j)].clone();
                        m[(r, j)] = v;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the null space, one column vector per free variable.
    pub fn kernel(&self) -> Vec<Vec<S>> {
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivots.contains(&free) {
                continue;
            }
            let mut v = vec![S::zero(); self.cols];
            v[free] = S::one();
            for (prow, &pcol) in pivots.iter().enumerate() {
                v[pcol] = -r[(prow, free)].clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Basis of the column space, as columns of the returned matrix.
    pub fn column_space(&self) -> Matrix<S> {
        let (_, pivots) = self.rref();
        Matrix::from_fn(self.rows, pivots.len(), |i, k| self[(i, pivots[k])].clone())
    }

    /// Solve `self · x = b`; errors if the system is inconsistent
    /// or underdetermined.
    pub fn solve(&self, b: &[S]) -> Result<Vec<S>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                got: b.len(),
            });
        }
        let mut aug = Matrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let (r, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return Err(Error::Precondition("inconsistent linear system".into()));
        }
        if pivots.len() < self.cols {
            return Err(Error::Precondition("underdetermined linear system".into()));
        }
        let mut x = vec![S::zero(); self.cols];
        for (prow, &pcol) in pivots.iter().enumerate() {
            x[pcol] = r[(prow, self.cols)].clone();
        }
        Ok(x)
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        })
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self * other - other * self
    }
}

impl<S> std::ops::Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.cols + j]
    }
}

impl<S> std::ops::IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.cols + j]
    }
}

impl<S: Scalar> Add for &Matrix<S> {
    type Output = Matrix<S>;
    fn add(self, rhs: Self) -> Matrix<S> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| {
            self[(i, j)].clone() + rhs[(i, j)].clone()
        })
    }
}

impl<S: Scalar> Sub for &Matrix<S> {
    type Output = Matrix<S>;
    fn sub(self, rhs: Self) -> Matrix<S> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| {
            self[(i, j)].clone() - rhs[(i, j)].clone()
        })
    }
}

impl<S: Scalar> Mul for &Matrix<S> {
    type Output = Matrix<S>;
    fn mul(self, rhs: Self) -> Matrix<S> {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let add = a.clone() * rhs[(k, j)].clone();
                    out[(i, j)] += add;
                }
            }
        }
        out
    }
}

impl<S: Scalar> Neg for &Matrix<S> {
    type Output = Matrix<S>;
    fn neg(self) -> Matrix<S> {
        Matrix::from_fn(self.rows, self.cols, |i, j| -self[(i, j)].clone())
    }
}

macro_rules! forward_owned {
    ($trait:ident, $method:ident) => {
        impl<S: Scalar> $trait for Matrix<S> {
            type Output = Matrix<S>;
            fn $method(self, rhs: Self) -> Matrix<S> {
                (&self).$method(&rhs)
            }
        }
        impl<S: Scalar> $trait<&Matrix<S>> for Matrix<S> {
            type Output = Matrix<S>;
            fn $method(self, rhs: &Matrix<S>) -> Matrix<S> {
                (&self).$method(rhs)
            }
        }
        impl<S: Scalar> $trait<Matrix<S>> for &Matrix<S> {
            type Output = Matrix<S>;
            fn $method(self, rhs: Matrix<S>) -> Matrix<S> {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<S: Scalar> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| format!("{}", self[(i, j)])).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl<S: Scalar> Matrix<S> {
    /// Solve `self · x = b` where `self` has full column rank but may have
    /// more rows than columns; errors if `b` is outside the column span.
    pub fn solve_in_span(&self, b: &[S]) -> Result<Vec<S>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                got: b.len(),
            });
        }
        let mut aug = Matrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let (r, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return Err(Error::Precondition(
                "vector outside the column span".into(),
            ));
        }
        let mut x = vec![S::zero(); self.cols];
        for (prow, &pcol) in pivots.iter().enumerate() {
            x[pcol] = r[(prow, self.cols)].clone();
        }
        Ok(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use crate::scalar::Exact;

    fn m(rows: Vec<Vec<i64>>) -> Matrix<Exact> {
        Matrix::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(Exact::from_int).collect())
                .collect(),
        )
    }

    #[test]
    fn kernel_of_singular_matrix() {
        let a = m(vec![vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]]);
        let basis = a.kernel();
        assert_eq!(basis.len(), 1);
        for v in &basis {
            let image = a.mul_vec(v).unwrap();
            assert!(image.iter().all(|x| x.is_zero()));
        }
        assert_eq!(a.rank(), 2);
    }

    #[test]
    fn solve_exact_system() {
        let a = m(vec![vec![2, 1], vec![1, 3]]);
        let b = vec![Exact::from_int(5), Exact::from_int(10)];
        let x = a.solve(&b).unwrap();
        assert_eq!(a.mul_vec(&x).unwrap(), b);
        assert_eq!(x[0], Exact::from_int(1));
        assert_eq!(x[1], Exact::from_int(3));
    }

    #[test]
    fn column_space_spans_image() {
        let a = m(vec![vec![1, 2, 3], vec![2, 4, 6], vec![0, 0, 1]]);
        let c = a.column_space();
        assert_eq!(c.ncols(), 2);
        // each original column solves against the basis
        for j in 0..3 {
            let col = a.col(j);
            c.solve_in_span(&col).unwrap();
        }
    }

    #[test]
    fn identity_is_multiplicative_unit() {
        let a = m(vec![vec![3, -1], vec![7, 2]]);
        let id = Matrix::<Exact>::identity(2);
        assert_eq!(&a * &id, a);
        assert_eq!(&id * &a, a);
    }
}
