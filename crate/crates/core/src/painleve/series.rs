//! Series in `s = qq̄` with `a`-polynomial coefficients and the recursion
//! for `F_n` coming from `∂₁∂̄₁ log h = -h⁻² + s h²`.
//!
//! Multiplying by `h²` gives the inverse-free form
//!
//! ```text
//! P(h) = h ∂∂̄h - ∂h ∂̄h + 1 - s h⁴ = 0.
//! ```
//!
//! On `sⁿaᵏ` both `∂₁` and `∂̄₁` act as `n - d/da`. With `F₀ = a`, the
//! unknown `F_n` enters the `sⁿ` coefficient of `P` linearly through
//! `L_n = a(n - D)² + 2(n - D)`, so each step is an exact linear solve.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::linalg::SolveFailure;
use crate::exact::{APoly, ExactScalar, Matrix};

/// `Σ_{n ≤ N} c_n(a) sⁿ`, stored densely in `n`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SSeries {
    coeffs: Vec<APoly>,
}

impl SSeries {
    pub fn zero(truncation: u32) -> Self {
        SSeries {
            coeffs: vec![APoly::zero(); truncation as usize + 1],
        }
    }

    pub fn one(truncation: u32) -> Self {
        let mut s = SSeries::zero(truncation);
        s.coeffs[0] = APoly::one();
        s
    }

    /// `Σ F_n sⁿ`, padded with zeros up to `truncation`.
    pub fn from_coeffs(f: &[APoly], truncation: u32) -> Self {
        let mut s = SSeries::zero(truncation);
        for (n, p) in f.iter().enumerate().take(truncation as usize + 1) {
            s.coeffs[n] = p.clone();
        }
        s
    }

    pub fn truncation(&self) -> u32 {
        self.coeffs.len() as u32 - 1
    }

    pub fn coeff(&self, n: u32) -> &APoly {
        &self.coeffs[n as usize]
    }

    pub fn coeffs(&self) -> &[APoly] {
        &self.coeffs
    }

    pub fn add(&self, o: &SSeries) -> SSeries {
        SSeries {
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn sub(&self, o: &SSeries) -> SSeries {
        SSeries {
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(x, y)| x - y).collect(),
        }
    }

    pub fn mul(&self, o: &SSeries) -> SSeries {
        let n = self.coeffs.len().min(o.coeffs.len());
        let mut out = vec![APoly::zero(); n];
        for (i, x) in self.coeffs.iter().enumerate().take(n) {
            if x.is_zero() {
                continue;
            }
            for (j, y) in o.coeffs.iter().enumerate().take(n - i) {
                if !y.is_zero() {
                    out[i + j] = &out[i + j] + &(x * y);
                }
            }
        }
        SSeries { coeffs: out }
    }

    /// Multiplication by `s`.
    pub fn shift(&self) -> SSeries {
        let mut coeffs = vec![APoly::zero()];
        coeffs.extend(self.coeffs[..self.coeffs.len() - 1].iter().cloned());
        SSeries { coeffs }
    }

    /// `∂₁` (equal to `∂̄₁` on functions of `s` and `a`): `sⁿaᵏ ↦ n sⁿaᵏ - k sⁿaᵏ⁻¹`.
    pub fn d(&self) -> SSeries {
        SSeries {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(n, p)| &p.scale(&ExactScalar::from_int(n as i64)) - &p.derivative())
                .collect(),
        }
    }
}

/// `P(h) = h ∂∂̄h - ∂h ∂̄h + 1 - s h⁴`.
pub fn pde_residual(h: &SSeries) -> SSeries {
    let n = h.truncation();
    let dh = h.d();
    let h2 = h.mul(h);
    let h4 = h2.mul(&h2);
    h.mul(&dh.d())
        .sub(&dh.mul(&dh))
        .add(&SSeries::one(n))
        .sub(&h4.shift())
}

/// `L_n(aʲ) = a(n - D)²aʲ + 2(n - D)aʲ`.
pub fn linear_operator(n: u32, p: &APoly) -> APoly {
    let nn = ExactScalar::from_int(n as i64);
    let step = |q: &APoly| &q.scale(&nn) - &q.derivative();
    let once = step(p);
    let twice = step(&once);
    &(&APoly::a() * &twice) + &once.scale(&ExactScalar::from_int(2))
}

/// Outcome of one order of the recursion.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleStep {
    pub n: u32,
    pub unknowns: usize,
    pub equations: usize,
    pub rank: usize,
    pub f: APoly,
}

/// Solves for `F_1, …, F_order` with the ansatz `F_n = Σ_{j=-neg}^{2n+1} c_j aʲ`.
/// A rank deficit is reported as [`Error::SingularSystem`], never patched.
pub fn oracle_steps(order: u32, neg: i32) -> Result<Vec<OracleStep>> {
    let mut f = vec![APoly::a()];
    let mut steps = Vec::new();
    for n in 1..=order {
        let known = SSeries::from_coeffs(&f, n);
        let rhs = -pde_residual(&known).coeff(n).clone();
        let exps: Vec<i32> = (-neg..=2 * n as i32 + 1).collect();
        let cols: Vec<APoly> = exps
            .iter()
            .map(|&j| linear_operator(n, &APoly::monomial(j, ExactScalar::one())))
            .collect();
        let lo = cols
            .iter()
            .chain(std::iter::once(&rhs))
            .filter_map(APoly::min_exp)
            .min()
            .unwrap_or(0);
        let hi = cols
            .iter()
            .chain(std::iter::once(&rhs))
            .filter_map(APoly::max_exp)
            .max()
            .unwrap_or(0);
        let rows: Vec<Vec<ExactScalar>> = (lo..=hi)
            .map(|e| cols.iter().map(|c| c.coeff(e)).collect())
            .collect();
        let b: Vec<ExactScalar> = (lo..=hi).map(|e| rhs.coeff(e)).collect();
        let system = Matrix::from_rows(rows);
        let rank = system.rank();
        let sol = system.solve_unique(&b).map_err(|e| match e {
            SolveFailure::Singular { rank } => Error::SingularSystem {
                order: n as usize,
                rank,
                unknowns: exps.len(),
            },
            SolveFailure::Inconsistent => Error::InconsistentSystem { order: n as usize },
        })?;
        let fn_ = APoly::from_terms(exps.iter().copied().zip(sol));
        steps.push(OracleStep {
            n,
            unknowns: exps.len(),
            equations: (hi - lo + 1) as usize,
            rank,
            f: fn_.clone(),
        });
        f.push(fn_);
    }
    Ok(steps)
}

/// `F_0, …, F_order` from the PDE recursion with the polynomial ansatz.
pub fn oracle_fn(order: u32) -> Result<Vec<APoly>> {
    let mut out = vec![APoly::a()];
    out.extend(oracle_steps(order, 0)?.into_iter().map(|s| s.f));
    Ok(out)
}
