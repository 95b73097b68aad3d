//! Small dense linear algebra over exact rationals or doubles.
//!
//! Subspaces are represented by matrices whose columns span them.

use std::fmt::Debug;

use super::scalar::ExactScalar;
use crate::error::{Error, Result};

/// The scalar operations Gaussian elimination needs.
pub trait Field: Clone + Debug + PartialEq + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn from_i64(n: i64) -> Self;
    /// Magnitude used for pivot selection.
    fn magnitude(&self) -> f64;
    /// Whether a pivot candidate counts as zero, given the matrix scale.
    fn negligible(&self, scale: f64) -> bool;
    fn to_f64(&self) -> f64;
}

impl Field for ExactScalar {
    fn zero() -> Self {
        ExactScalar::zero()
    }
    fn one() -> Self {
        ExactScalar::one()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_i64(n: i64) -> Self {
        ExactScalar::from_int(n)
    }
    fn magnitude(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            1.0
        }
    }
    fn negligible(&self, _scale: f64) -> bool {
        self.is_zero()
    }
    fn to_f64(&self) -> f64 {
        ExactScalar::to_f64(self)
    }
}

/// Relative pivot threshold for floating-point elimination.
pub const F64_RANK_TOL: f64 = 1e-9;

impl Field for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_i64(n: i64) -> Self {
        n as f64
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn negligible(&self, scale: f64) -> bool {
        self.abs() <= F64_RANK_TOL * scale.max(1e-300)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_columns(rows: usize, cols: &[Vec<F>]) -> Self {
        let mut m = Matrix::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length");
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
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

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "matrix product shape");
        let mut out: Matrix<F> = Matrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let x = self.get(i, k);
                if x.negligible(0.0) {
                    continue;
                }
                for j in 0..o.cols {
                    let v = out.get(i, j).add(&x.mul(o.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "matrix sum shape");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(x, y)| x.add(y)).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "matrix difference shape");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(x, y)| x.sub(y)).collect(),
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        self.map(|x| x.mul(c))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Matrix::identity(self.rows);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// `Σ_k M^k / k!` for a nilpotent `M`.
    pub fn exp_nilpotent(&self) -> Self {
        let mut out = Matrix::identity(self.rows);
        let mut term = Matrix::identity(self.rows);
        for k in 1..=self.rows {
            term = term.mul(self).scale(&F::one().div(&F::from_i64(k as i64)));
            out = out.add(&term);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.negligible(0.0))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.to_f64().abs()).fold(0.0, f64::max)
    }

    pub fn hstack(&self, o: &Self) -> Self {
        assert_eq!(self.rows, o.rows, "hstack rows");
        let mut out = Matrix::zeros(self.rows, self.cols + o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..o.cols {
                out.set(i, self.cols + j, o.get(i, j).clone());
            }
        }
        out
    }

    pub fn select_columns(&self, idx: &[usize]) -> Self {
        let cols: Vec<Vec<F>> = idx.iter().map(|&j| self.column(j)).collect();
        Matrix::from_columns(self.rows, &cols)
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        Matrix::from_rows(
            idx.iter()
                .map(|&i| (0..self.cols).map(|j| self.get(i, j).clone()).collect())
                .collect(),
        )
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let scale = self.data.iter().map(F::magnitude).fold(0.0, f64::max);
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let best = (row..m.rows)
                .max_by(|&a, &b| {
                    m.get(a, col)
                        .magnitude()
                        .partial_cmp(&m.get(b, col).magnitude())
                        .unwrap()
                })
                .unwrap();
            if m.get(best, col).negligible(scale) {
                continue;
            }
            for j in 0..m.cols {
                m.data.swap(row * m.cols + j, best * m.cols + j);
            }
            let p = m.get(row, col).clone();
            for j in 0..m.cols {
                let v = m.get(row, j).div(&p);
                m.set(row, j, v);
            }
            for i in 0..m.rows {
                if i == row {
                    continue;
                }
                let f = m.get(i, col).clone();
                if f.negligible(0.0) {
                    continue;
                }
                for j in 0..m.cols {
                    let v = m.get(i, j).sub(&f.mul(m.get(row, j)));
                    m.set(i, j, v);
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

    /// Basis of the kernel, as columns.
    pub fn nullspace(&self) -> Self {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|j| !pivots.contains(j)).collect();
        let mut basis = Matrix::zeros(self.cols, free.len());
        for (k, &f) in free.iter().enumerate() {
            basis.set(f, k, F::one());
            for (row, &p) in pivots.iter().enumerate() {
                basis.set(p, k, r.get(row, f).neg());
            }
        }
        basis
    }

    /// Linearly independent columns spanning the same space.
    pub fn column_basis(&self) -> Self {
        let (_, pivots) = self.rref();
        self.select_columns(&pivots)
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let (r, pivots) = self.hstack(&Matrix::identity(n)).rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::NonUnit("singular matrix".into()));
        }
        let idx: Vec<usize> = (n..2 * n).collect();
        Ok(r.select_columns(&idx))
    }

    /// Solves `A x = b`. Fails when the system is inconsistent or the
    /// solution is not unique.
    pub fn solve_unique(&self, b: &[F]) -> std::result::Result<Vec<F>, SolveFailure> {
        let aug = self.hstack(&Matrix::from_columns(self.rows, &[b.to_vec()]));
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Err(SolveFailure::Inconsistent);
        }
        if pivots.len() < self.cols {
            return Err(SolveFailure::Singular { rank: pivots.len() });
        }
        Ok((0..self.cols).map(|i| r.get(i, self.cols).clone()).collect())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SolveFailure {
    Inconsistent,
    Singular { rank: usize },
}

/// Operations on subspaces given by spanning columns.
pub mod subspace {
    use super::{Field, Matrix};

    pub fn dim<F: Field>(u: &Matrix<F>) -> usize {
        u.rank()
    }

    pub fn sum<F: Field>(u: &Matrix<F>, w: &Matrix<F>) -> Matrix<F> {
        u.hstack(w).column_basis()
    }

    pub fn intersection<F: Field>(u: &Matrix<F>, w: &Matrix<F>) -> Matrix<F> {
        let u = u.column_basis();
        let w = w.column_basis();
        if u.cols() == 0 || w.cols() == 0 {
            return Matrix::zeros(u.rows(), 0);
        }
        let k = u.hstack(&w.scale(&F::one().neg())).nullspace();
        let idx: Vec<usize> = (0..u.cols()).collect();
        let coeffs = k.select_rows(&idx);
        u.mul(&coeffs).column_basis()
    }

    /// `w ⊆ u`.
    pub fn contains<F: Field>(u: &Matrix<F>, w: &Matrix<F>) -> bool {
        u.hstack(w).rank() == u.rank()
    }

    pub fn equal<F: Field>(u: &Matrix<F>, w: &Matrix<F>) -> bool {
        contains(u, w) && contains(w, u)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::scalar::rat;

    fn q(rows: &[&[i64]]) -> Matrix<ExactScalar> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| ExactScalar::from_int(x)).collect())
                .collect(),
        )
    }

    #[test]
    fn rank_and_nullspace() {
        let m = q(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        let k = m.nullspace();
        assert_eq!(k.cols(), 1);
        assert!(m.mul(&k).is_zero());
    }

    #[test]
    fn exact_inverse() {
        let m = q(&[&[2, 1], &[1, 1]]);
        let mi = m.inverse().unwrap();
        assert_eq!(m.mul(&mi), Matrix::identity(2));
        assert!(q(&[&[1, 2], &[2, 4]]).inverse().is_err());
    }

    #[test]
    fn overdetermined_consistent_solve() {
        let m = q(&[&[1, 0], &[0, 1], &[1, 1]]);
        let b = vec![rat(1, 2), rat(1, 3), rat(5, 6)];
        assert_eq!(m.solve_unique(&b).unwrap(), vec![rat(1, 2), rat(1, 3)]);
        let bad = vec![rat(1, 2), rat(1, 3), rat(1, 1)];
        assert_eq!(m.solve_unique(&bad), Err(SolveFailure::Inconsistent));
        let sing = q(&[&[1, 1], &[2, 2]]);
        assert!(matches!(
            sing.solve_unique(&[rat(1, 1), rat(2, 1)]),
            Err(SolveFailure::Singular { rank: 1 })
        ));
    }

    #[test]
    fn subspace_intersection() {
        // span(e1, e2) ∩ span(e2, e3) = span(e2)
        let u = q(&[&[1, 0], &[0, 1], &[0, 0]]);
        let w = q(&[&[0, 0], &[1, 0], &[0, 1]]);
        let i = subspace::intersection(&u, &w);
        assert!(subspace::equal(&i, &q(&[&[0], &[1], &[0]])));
        assert_eq!(subspace::dim(&subspace::sum(&u, &w)), 3);
    }

    #[test]
    fn float_rank_uses_tolerance() {
        let m = Matrix::from_rows(vec![vec![1.0, 1.0], vec![1.0, 1.0 + 1e-14]]);
        assert_eq!(m.rank(), 1);
        let m = Matrix::from_rows(vec![vec![1.0, 1.0], vec![1.0, 1.1]]);
        assert_eq!(m.rank(), 2);
    }
}
