//! Small quantum cohomology of `P¹`: quantum product, grading data, the
//! J-function and the fundamental solution matrix `Q(q, z)`.
//!
//! Vectors are columns in the basis `(1, ω)` and matrices act from the
//! left. Only `τ = t¹ω` is used; `q = e^{t¹}`. The gauge factor
//! `e^{t¹ω/z}` is never materialised: `log q` is not an element of the
//! series ring, so identities are stated for `Q` directly.

use crate::error::Result;
use crate::exact::{rat, BiSeries, ExactScalar, LoopMatrix, Matrix, ZLoop, ZMatrix};

/// Matrices of `1∘` and `ω∘` in the basis `(1, ω)`.
#[derive(Clone, Debug)]
pub struct QuantumProductData {
    pub unit_matrix: Matrix<ExactScalar>,
    truncation: u32,
}

impl QuantumProductData {
    pub fn new(truncation: u32) -> Self {
        QuantumProductData {
            unit_matrix: Matrix::identity(2),
            truncation,
        }
    }

    /// `ω∘ = [[0, q], [1, 0]]`.
    pub fn omega_matrix(&self) -> LoopMatrix {
        omega_product(self.truncation)
    }
}

pub fn omega_product(truncation: u32) -> LoopMatrix {
    let mut m = LoopMatrix::zero(2, truncation);
    m.set(0, 1, BiSeries::q(truncation));
    m.set(1, 0, BiSeries::one(truncation));
    m
}

/// Classical cup product by `ω`: `[[0, 0], [1, 0]]`.
pub fn omega_cup(truncation: u32) -> LoopMatrix {
    let mut m = LoopMatrix::zero(2, truncation);
    m.set(1, 0, BiSeries::one(truncation));
    m
}

/// Hodge grading `μ`, `ρ = c₁(TP¹)` and the Poincaré pairing.
#[derive(Clone, Debug)]
pub struct GradingData {
    pub mu: Matrix<ExactScalar>,
    pub rho: Matrix<ExactScalar>,
    pub poincare_g: Matrix<ExactScalar>,
}

impl Default for GradingData {
    fn default() -> Self {
        let i = |n: i64| ExactScalar::from_int(n);
        GradingData {
            mu: Matrix::from_rows(vec![vec![rat(-1, 2), i(0)], vec![i(0), rat(1, 2)]]),
            rho: Matrix::from_rows(vec![vec![i(0), i(0)], vec![i(2), i(0)]]),
            poincare_g: poincare_g(),
        }
    }
}

impl GradingData {
    /// `g μ + μᵀ g`, which vanishes because `μ` is anti-self-adjoint.
    pub fn mu_adjointness_residual(&self) -> Matrix<ExactScalar> {
        self.poincare_g
            .mul(&self.mu)
            .add(&self.mu.transpose().mul(&self.poincare_g))
    }
}

pub fn poincare_g() -> Matrix<ExactScalar> {
    let i = |n: i64| ExactScalar::from_int(n);
    Matrix::from_rows(vec![vec![i(0), i(1)], vec![i(1), i(0)]])
}

fn g_loop(truncation: u32) -> LoopMatrix {
    let mut g = LoopMatrix::zero(2, truncation);
    g.set(0, 1, BiSeries::one(truncation));
    g.set(1, 0, BiSeries::one(truncation));
    g
}

/// Harmonic number `H_k = Σ_{m=1}^k 1/m`.
pub fn harmonic(k: u32) -> ExactScalar {
    (1..=k as i64).map(|m| rat(1, m)).sum()
}

fn factorial(k: u32) -> ExactScalar {
    (1..=k as i64).map(ExactScalar::from_int).product()
}

/// `J = e^{t¹ω/z}(J₀ 1 + J₁ ω/z)`, obtained by expanding
/// `Π_{m=1}^k (ω + mz)^{-2} = (k!)^{-2} z^{-2k} (1 - 2 H_k ω/z)` with `ω² = 0`.
/// Both series are truncated at `q^order`.
pub fn j_coeffs(order: u32) -> (BiSeries, BiSeries) {
    let mut j0 = BiSeries::zero(order);
    let mut j1 = BiSeries::zero(order);
    for k in 0..=order {
        let w = factorial(k).pow(-2);
        let z = -2 * k as i32;
        j0.add_term(k, 0, &ZLoop::term(z, 0, w.clone()));
        let h = harmonic(k) * w * ExactScalar::from_int(-2);
        j1.add_term(k, 0, &ZLoop::term(z, 0, h));
    }
    (j0, j1)
}

/// The fundamental solution `Q = [[J₀, z∂₁J₀], [J₁/z, J₀ + ∂₁J₁]]`.
#[derive(Clone, Debug, PartialEq)]
pub struct FundamentalMatrix {
    pub q: LoopMatrix,
}

impl FundamentalMatrix {
    pub fn from_j(j0: &BiSeries, j1: &BiSeries) -> Self {
        let n = j0.truncation();
        let z = ZLoop::z();
        let zinv = ZLoop::term(-1, 0, ExactScalar::one());
        let entries = vec![
            j0.clone(),
            j0.d1().scale(&z),
            j1.scale(&zinv),
            j0 + &j1.d1(),
        ];
        let q = LoopMatrix::from_rows(2, entries).expect("2x2 entries of one truncation");
        debug_assert_eq!(q.truncation(), n);
        FundamentalMatrix { q }
    }

    /// `Q⁻¹ = g⁻¹ Q(-z)ᵀ g` (the adjoint of `Q(-z)`).
    pub fn inverse_via_adjoint(&self) -> LoopMatrix {
        let n = self.q.truncation();
        let g = g_loop(n);
        // g is its own inverse
        &(&g * &self.q.negate_z().transpose()) * &g
    }
}

pub fn fundamental_matrix(order: u32) -> FundamentalMatrix {
    let (j0, j1) = j_coeffs(order);
    FundamentalMatrix::from_j(&j0, &j1)
}

/// `g⁻¹ Q(-z)ᵀ g Q(z) - 1` for a given `Q`.
pub fn unitarity_residual(q: &FundamentalMatrix) -> LoopMatrix {
    let n = q.q.truncation();
    &(&q.inverse_via_adjoint() * &q.q) - &LoopMatrix::identity(2, n)
}

pub fn verify_unitarity(order: u32) -> LoopMatrix {
    unitarity_residual(&fundamental_matrix(order))
}

/// `(ω∘)² - q·1`.
pub fn quantum_ring_relation(order: u32) -> LoopMatrix {
    let w = omega_product(order);
    let mut qid = LoopMatrix::zero(2, order);
    qid.set(0, 0, BiSeries::q(order));
    qid.set(1, 1, BiSeries::q(order));
    &(&w * &w) - &qid
}

/// Flatness of `𝕁 = e^{t¹ω/z} Q`: `z∂₁𝕁 = 𝕁 (ω∘)`. After stripping the
/// gauge factor this reads `ω∪Q + z∂₁Q - Q (ω∘) = 0`, which is returned.
pub fn qde_residual(q: &FundamentalMatrix) -> Result<LoopMatrix> {
    let n = q.q.truncation();
    let zd = q.q.map(|e| e.d1().scale(&ZLoop::z()));
    let lhs = omega_cup(n).checked_mul(&q.q)?.checked_add(&zd)?;
    lhs.checked_sub(&q.q.checked_mul(&omega_product(n))?)
}

/// `ZMatrix` of the constant term of `Q`; identity by the large-radius limit.
pub fn large_radius_limit(q: &FundamentalMatrix) -> ZMatrix {
    q.q.coeff(0, 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_zero_is_trivial() {
        let (j0, j1) = j_coeffs(0);
        assert_eq!(j0, BiSeries::one(0));
        assert!(j1.is_zero());
        assert_eq!(fundamental_matrix(0).q, LoopMatrix::identity(2, 0));
    }

    /// Brute-force oracle: expand `Π_{m=1}^k (ω + mz)^{-2}` in `Q[z, 1/z][ω]/(ω²)`
    /// factor by factor, tracking (1-part, ω-part).
    fn brute_force_product(k: u32) -> (ZLoop, ZLoop) {
        let mut one = ZLoop::one();
        let mut om = ZLoop::zero();
        for m in 1..=k as i64 {
            // (ω + mz)^{-1} = (mz)^{-1} - ω (mz)^{-2}
            let c0 = ZLoop::term(-1, 0, rat(1, m));
            let c1 = ZLoop::term(-2, 0, rat(-1, m * m));
            for _ in 0..2 {
                let new_one = &one * &c0;
                let new_om = &(&om * &c0) + &(&one * &c1);
                one = new_one;
                om = new_om;
            }
        }
        (one, om)
    }

    #[test]
    fn j_coefficients_match_brute_force_expansion() {
        let order = 6;
        let (j0, j1) = j_coeffs(order);
        for k in 0..=order {
            let (one, om) = brute_force_product(k);
            assert_eq!(j0.coeff(k, 0), one, "J0 at q^{k}");
            // J carries ω/z, so J₁ = z · (ω-coefficient)
            assert_eq!(j1.coeff(k, 0), om.shift(1), "J1 at q^{k}");
        }
    }

    #[test]
    fn first_and_second_coefficients() {
        let (j0, j1) = j_coeffs(2);
        assert_eq!(j0.coeff(1, 0), ZLoop::term(-2, 0, rat(1, 1)));
        assert_eq!(j1.coeff(1, 0), ZLoop::term(-2, 0, rat(-2, 1)));
        // -2 H_2 / (2!)^2 = -2 (3/2) / 4 = -3/4
        assert_eq!(j0.coeff(2, 0), ZLoop::term(-4, 0, rat(1, 4)));
        assert_eq!(j1.coeff(2, 0), ZLoop::term(-4, 0, rat(-3, 4)));
    }

    #[test]
    fn fundamental_matrix_entries_at_order_one() {
        let q = fundamental_matrix(1).q;
        assert_eq!(q.get(1, 0).coeff(1, 0), ZLoop::term(-3, 0, rat(-2, 1)));
        assert_eq!(q.get(0, 1).coeff(1, 0), ZLoop::term(-1, 0, rat(1, 1)));
    }

    #[test]
    fn unitarity_holds_and_detects_corruption() {
        assert!(verify_unitarity(0).is_zero());
        assert!(verify_unitarity(4).is_zero());
        let (j0, j1) = j_coeffs(4);
        let bad = FundamentalMatrix::from_j(&j0, &(&j1 + &BiSeries::q(4)));
        assert!(!unitarity_residual(&bad).is_zero());
    }

    #[test]
    fn ring_relation_and_product_on_basis() {
        assert!(quantum_ring_relation(5).is_zero());
        let w = omega_product(3);
        let one = vec![BiSeries::one(3), BiSeries::zero(3)];
        let om = vec![BiSeries::zero(3), BiSeries::one(3)];
        assert_eq!(w.apply(&one).unwrap(), om);
        assert_eq!(w.apply(&om).unwrap(), vec![BiSeries::q(3), BiSeries::zero(3)]);
    }

    #[test]
    fn fundamental_solution_is_flat() {
        assert!(qde_residual(&fundamental_matrix(6)).unwrap().is_zero());
    }

    #[test]
    fn mu_is_anti_self_adjoint() {
        assert!(GradingData::default().mu_adjointness_residual().is_zero());
    }
}
