//! Square matrices of [`BiSeries`] (loop-group elements) and of single
//! [`ZLoop`] coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::apoly::owned_binop;
use super::biseries::BiSeries;
use super::zloop::ZLoop;
use crate::error::{Error, Result};

/// A `dim x dim` matrix of Laurent loops: one `(n, m)` coefficient of a
/// [`LoopMatrix`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ZMatrix {
    dim: usize,
    entries: Vec<ZLoop>,
}

impl ZMatrix {
    pub fn zero(dim: usize) -> Self {
        ZMatrix {
            dim,
            entries: vec![ZLoop::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = ZMatrix::zero(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = ZLoop::one();
        }
        m
    }

    /// Row-major entries.
    pub fn from_rows(dim: usize, entries: Vec<ZLoop>) -> Self {
        assert_eq!(entries.len(), dim * dim, "ZMatrix needs dim^2 entries");
        ZMatrix { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &ZLoop {
        &self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: ZLoop) {
        self.entries[i * self.dim + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(ZLoop::is_zero)
    }

    pub fn map(&self, f: impl Fn(&ZLoop) -> ZLoop) -> ZMatrix {
        ZMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    /// Entrywise split into strictly positive and non-positive `z`-parts.
    pub fn z_split(&self) -> (ZMatrix, ZMatrix) {
        let (pos, nonpos): (Vec<_>, Vec<_>) = self.entries.iter().map(ZLoop::z_split).unzip();
        (
            ZMatrix::from_rows(self.dim, pos),
            ZMatrix::from_rows(self.dim, nonpos),
        )
    }

    pub fn transpose(&self) -> ZMatrix {
        let d = self.dim;
        let mut out = ZMatrix::zero(d);
        for i in 0..d {
            for j in 0..d {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    /// Cofactor expansion; fine for the small dimensions used here.
    pub fn det(&self) -> ZLoop {
        let d = self.dim;
        match d {
            0 => ZLoop::one(),
            1 => self.entries[0].clone(),
            _ => {
                let mut acc = ZLoop::zero();
                for j in 0..d {
                    let term = self.get(0, j) * &self.minor(0, j).det();
                    acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
                }
                acc
            }
        }
    }

    fn minor(&self, row: usize, col: usize) -> ZMatrix {
        let d = self.dim;
        let entries = (0..d)
            .filter(|&i| i != row)
            .flat_map(|i| (0..d).filter(move |&j| j != col).map(move |j| (i, j)))
            .map(|(i, j)| self.get(i, j).clone())
            .collect();
        ZMatrix::from_rows(d - 1, entries)
    }

    /// Inverse over `Q[z, 1/z, a, 1/a]`: requires a monomial determinant.
    pub fn inv(&self) -> Result<ZMatrix> {
        let det_inv = self
            .det()
            .inv()
            .map_err(|_| Error::NonUnit(format!("matrix with determinant {}", self.det())))?;
        let d = self.dim;
        if d == 1 {
            return Ok(ZMatrix::from_rows(1, vec![det_inv]));
        }
        let mut out = ZMatrix::zero(d);
        for i in 0..d {
            for j in 0..d {
                let cof = self.minor(j, i).det();
                let cof = if (i + j) % 2 == 0 { cof } else { -cof };
                out.set(i, j, &cof * &det_inv);
            }
        }
        Ok(out)
    }
}

impl<'a> Mul<&'a ZMatrix> for &'a ZMatrix {
    type Output = ZMatrix;
    fn mul(self, rhs: &'a ZMatrix) -> ZMatrix {
        assert_eq!(self.dim, rhs.dim, "ZMatrix dimension mismatch");
        let d = self.dim;
        let mut out = ZMatrix::zero(d);
        for i in 0..d {
            for j in 0..d {
                let mut acc = ZLoop::zero();
                for k in 0..d {
                    let (x, y) = (self.get(i, k), rhs.get(k, j));
                    if !x.is_zero() && !y.is_zero() {
                        acc = &acc + &(x * y);
                    }
                }
                out.set(i, j, acc);
            }
        }
        out
    }
}

impl<'a> Add<&'a ZMatrix> for &'a ZMatrix {
    type Output = ZMatrix;
    fn add(self, rhs: &'a ZMatrix) -> ZMatrix {
        assert_eq!(self.dim, rhs.dim, "ZMatrix dimension mismatch");
        ZMatrix {
            dim: self.dim,
            entries: self.entries.iter().zip(&rhs.entries).map(|(x, y)| x + y).collect(),
        }
    }
}

impl<'a> Sub<&'a ZMatrix> for &'a ZMatrix {
    type Output = ZMatrix;
    fn sub(self, rhs: &'a ZMatrix) -> ZMatrix {
        assert_eq!(self.dim, rhs.dim, "ZMatrix dimension mismatch");
        ZMatrix {
            dim: self.dim,
            entries: self.entries.iter().zip(&rhs.entries).map(|(x, y)| x - y).collect(),
        }
    }
}

owned_binop!(Add, add, ZMatrix);
owned_binop!(Sub, sub, ZMatrix);
owned_binop!(Mul, mul, ZMatrix);

impl fmt::Debug for ZMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ZMatrix {}x{}", self.dim, self.dim)?;
        for i in 0..self.dim {
            for j in 0..self.dim {
                writeln!(f, "  [{i},{j}] {}", self.get(i, j))?;
            }
        }
        Ok(())
    }
}

/// A `dim x dim` matrix of truncated biseries.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LoopMatrix {
    dim: usize,
    entries: Vec<BiSeries>,
}

impl LoopMatrix {
    pub fn zero(dim: usize, truncation: u32) -> Self {
        LoopMatrix {
            dim,
            entries: vec![BiSeries::zero(truncation); dim * dim],
        }
    }

    pub fn identity(dim: usize, truncation: u32) -> Self {
        LoopMatrix::constant(&ZMatrix::identity(dim), truncation)
    }

    /// Row-major entries, all with the same truncation.
    pub fn from_rows(dim: usize, entries: Vec<BiSeries>) -> Result<Self> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for dimension {dim}",
                entries.len()
            )));
        }
        let n = entries[0].truncation();
        if let Some(bad) = entries.iter().find(|e| e.truncation() != n) {
            return Err(Error::TruncationMismatch {
                left: n,
                right: bad.truncation(),
            });
        }
        Ok(LoopMatrix { dim, entries })
    }

    /// A matrix independent of `q` and `q̄`.
    pub fn constant(m: &ZMatrix, truncation: u32) -> Self {
        LoopMatrix {
            dim: m.dim(),
            entries: m
                .entries
                .iter()
                .map(|z| BiSeries::constant(z.clone(), truncation))
                .collect(),
        }
    }

    /// Assembles `Σ M_{n,m} q^n q̄^m` from coefficient matrices.
    pub fn from_coeffs<'a, I>(dim: usize, truncation: u32, coeffs: I) -> Self
    where
        I: IntoIterator<Item = ((u32, u32), &'a ZMatrix)>,
    {
        let mut out = LoopMatrix::zero(dim, truncation);
        for ((n, m), mat) in coeffs {
            for (e, z) in out.entries.iter_mut().zip(&mat.entries) {
                e.add_term(n, m, z);
            }
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn truncation(&self) -> u32 {
        self.entries[0].truncation()
    }

    pub fn get(&self, i: usize, j: usize) -> &BiSeries {
        &self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BiSeries) {
        assert_eq!(v.truncation(), self.truncation(), "LoopMatrix truncation");
        self.entries[i * self.dim + j] = v;
    }

    pub fn entries(&self) -> &[BiSeries] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(BiSeries::is_zero)
    }

    /// The `(n, m)` coefficient matrix.
    pub fn coeff(&self, n: u32, m: u32) -> ZMatrix {
        ZMatrix::from_rows(self.dim, self.entries.iter().map(|e| e.coeff(n, m)).collect())
    }

    /// Column `j` as a vector of series.
    pub fn column(&self, j: usize) -> Vec<BiSeries> {
        (0..self.dim).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn map(&self, f: impl Fn(&BiSeries) -> BiSeries + Sync) -> LoopMatrix {
        LoopMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> LoopMatrix {
        let d = self.dim;
        let mut entries = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                entries.push(self.get(j, i).clone());
            }
        }
        LoopMatrix { dim: d, entries }
    }

    pub fn bar(&self) -> LoopMatrix {
        self.map(BiSeries::bar)
    }

    pub fn negate_z(&self) -> LoopMatrix {
        self.map(BiSeries::negate_z)
    }

    fn check(&self, other: &LoopMatrix) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(format!("{} vs {}", self.dim, other.dim)));
        }
        if self.truncation() != other.truncation() {
            return Err(Error::TruncationMismatch {
                left: self.truncation(),
                right: other.truncation(),
            });
        }
        Ok(())
    }

    pub fn checked_mul(&self, other: &LoopMatrix) -> Result<LoopMatrix> {
        use rayon::prelude::*;
        self.check(other)?;
        let d = self.dim;
        let n = self.truncation();
        let entries = (0..d * d)
            .into_par_iter()
            .map(|idx| {
                let (i, j) = (idx / d, idx % d);
                let mut acc = BiSeries::zero(n);
                for k in 0..d {
                    let (x, y) = (self.get(i, k), other.get(k, j));
                    if !x.is_zero() && !y.is_zero() {
                        acc = &acc + &(x * y);
                    }
                }
                acc
            })
            .collect();
        Ok(LoopMatrix { dim: d, entries })
    }

    pub fn checked_add(&self, other: &LoopMatrix) -> Result<LoopMatrix> {
        self.check(other)?;
        Ok(LoopMatrix {
            dim: self.dim,
            entries: self.entries.iter().zip(&other.entries).map(|(x, y)| x + y).collect(),
        })
    }

    pub fn checked_sub(&self, other: &LoopMatrix) -> Result<LoopMatrix> {
        self.check(other)?;
        Ok(LoopMatrix {
            dim: self.dim,
            entries: self.entries.iter().zip(&other.entries).map(|(x, y)| x - y).collect(),
        })
    }

    /// Series inverse `Σ_k (-M₀⁻¹ N)^k M₀⁻¹` where `M₀` is the constant
    /// coefficient; `M₀` must have a monomial determinant.
    pub fn inv(&self) -> Result<LoopMatrix> {
        let n = self.truncation();
        let m0 = self.coeff(0, 0);
        let m0_inv = LoopMatrix::constant(&m0.inv()?, n);
        let rest = self.map(|e| {
            let mut e = e.clone();
            let c = e.coeff(0, 0);
            e.add_term(0, 0, &-c);
            e
        });
        let step = -(m0_inv.checked_mul(&rest)?);
        let mut out = m0_inv.clone();
        let mut term = m0_inv;
        for _ in 0..n {
            term = step.checked_mul(&term)?;
            if term.is_zero() {
                break;
            }
            out = out.checked_add(&term)?;
        }
        Ok(out)
    }

    /// Applies the matrix to a column vector.
    pub fn apply(&self, v: &[BiSeries]) -> Result<Vec<BiSeries>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch(format!("{} vs {}", v.len(), self.dim)));
        }
        (0..self.dim)
            .map(|i| {
                let mut acc = BiSeries::zero(self.truncation());
                for (k, x) in v.iter().enumerate() {
                    acc = acc.checked_add(&self.get(i, k).checked_mul(x)?)?;
                }
                Ok(acc)
            })
            .collect()
    }
}

impl<'a> Mul<&'a LoopMatrix> for &'a LoopMatrix {
    type Output = LoopMatrix;
    fn mul(self, rhs: &'a LoopMatrix) -> LoopMatrix {
        self.checked_mul(rhs).expect("LoopMatrix mul")
    }
}

impl<'a> Add<&'a LoopMatrix> for &'a LoopMatrix {
    type Output = LoopMatrix;
    fn add(self, rhs: &'a LoopMatrix) -> LoopMatrix {
        self.checked_add(rhs).expect("LoopMatrix add")
    }
}

impl<'a> Sub<&'a LoopMatrix> for &'a LoopMatrix {
    type Output = LoopMatrix;
    fn sub(self, rhs: &'a LoopMatrix) -> LoopMatrix {
        self.checked_sub(rhs).expect("LoopMatrix sub")
    }
}

impl Neg for &LoopMatrix {
    type Output = LoopMatrix;
    fn neg(self) -> LoopMatrix {
        self.map(|e| -e)
    }
}

impl Neg for LoopMatrix {
    type Output = LoopMatrix;
    fn neg(self) -> LoopMatrix {
        -&self
    }
}

owned_binop!(Add, add, LoopMatrix);
owned_binop!(Sub, sub, LoopMatrix);
owned_binop!(Mul, mul, LoopMatrix);

impl fmt::Debug for LoopMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "LoopMatrix {}x{}", self.dim, self.dim)?;
        for i in 0..self.dim {
            for j in 0..self.dim {
                writeln!(f, "  [{i},{j}] {}", self.get(i, j))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::apoly::APoly;
    use crate::exact::scalar::rat;

    #[test]
    fn constant_inverse_with_laurent_entries() {
        // C = [[0, 1/a], [a, -1/z]] has determinant -1.
        let c = ZMatrix::from_rows(
            2,
            vec![
                ZLoop::zero(),
                ZLoop::term(0, -1, rat(1, 1)),
                ZLoop::from_apoly(APoly::a()),
                ZLoop::term(-1, 0, rat(-1, 1)),
            ],
        );
        let ci = c.inv().unwrap();
        assert_eq!(&c * &ci, ZMatrix::identity(2));
        assert_eq!(&ci * &c, ZMatrix::identity(2));
    }

    #[test]
    fn series_inverse_of_unipotent_matrix() {
        let n = 4;
        let mut m = LoopMatrix::identity(2, n);
        m.set(0, 1, BiSeries::q(n).scale(&ZLoop::z()));
        m.set(1, 0, BiSeries::qbar(n));
        let mi = m.inv().unwrap();
        assert_eq!(&m * &mi, LoopMatrix::identity(2, n));
        assert_eq!(&mi * &m, LoopMatrix::identity(2, n));
    }

    #[test]
    fn singular_constant_term_is_rejected() {
        let m = LoopMatrix::zero(2, 2);
        assert!(m.inv().is_err());
    }

    #[test]
    fn mixed_truncations_rejected() {
        let a = LoopMatrix::identity(2, 2);
        let b = LoopMatrix::identity(2, 3);
        assert!(a.checked_mul(&b).is_err());
        assert!(LoopMatrix::from_rows(2, vec![BiSeries::zero(1), BiSeries::zero(2), BiSeries::zero(1), BiSeries::zero(1)]).is_err());
    }
}
