//! The loop matrix `S` and its recursive Birkhoff factorization `S = B̃C̃`.
//!
//! # Eliminating γ
//!
//! The real involution on the loop space is
//! `κ_ℋ = [[z, 0], [-4γ, -z⁻¹]] ∘ conj`, and the frame is gauged by
//! `κ_ℋ^τ = e^{-(t¹+t̄¹)ω/z} κ_ℋ`. In the basis `(1, ω)` the gauge factor is
//! `[[1, 0], [-(t¹+t̄¹)/z, 1]]`, and with `a = -t¹ - t̄¹ - 4γ`
//!
//! ```text
//! [[1, 0], [(a + 4γ)/z, 1]] · [[z, 0], [-4γ, -z⁻¹]] = [[z, 0], [a, -z⁻¹]].
//! ```
//!
//! So `κ_ℋ^τ = K ∘ bar` with `K = [[z, 0], [a, -z⁻¹]]`, and `γ` only
//! survives inside `a`. [`gamma_cancellation_residual`] re-checks this
//! identity symbolically for a given rational stand-in for `γ`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::{APoly, BiSeries, ExactScalar, LoopMatrix, ZLoop, ZMatrix};
use crate::qde::{fundamental_matrix, FundamentalMatrix};

fn zl(zexp: i32, aexp: i32, c: i64) -> ZLoop {
    ZLoop::term(zexp, aexp, ExactScalar::from_int(c))
}

/// `κ_ℋ^τ = K ∘ bar`, `K = [[z, 0], [a, -z⁻¹]]`.
#[derive(Clone, Debug)]
pub struct GaugedInvolution {
    pub matrix: ZMatrix,
}

impl Default for GaugedInvolution {
    fn default() -> Self {
        GaugedInvolution {
            matrix: ZMatrix::from_rows(
                2,
                vec![zl(1, 0, 1), ZLoop::zero(), zl(0, 1, 1), zl(-1, 0, -1)],
            ),
        }
    }
}

impl GaugedInvolution {
    pub fn apply(&self, m: &LoopMatrix) -> Result<LoopMatrix> {
        LoopMatrix::constant(&self.matrix, m.truncation()).checked_mul(&m.bar())
    }

    pub fn apply_vector(&self, v: &[BiSeries]) -> Result<Vec<BiSeries>> {
        let n = v.first().map(BiSeries::truncation).unwrap_or(0);
        let barred: Vec<BiSeries> = v.iter().map(BiSeries::bar).collect();
        LoopMatrix::constant(&self.matrix, n).apply(&barred)
    }
}

/// `(1 + (a + 4γ)ω/z) · [[z, 0], [-4γ, -z⁻¹]] - K` for a rational `γ`.
pub fn gamma_cancellation_residual(gamma: &ExactScalar) -> ZMatrix {
    let four_gamma = gamma * &ExactScalar::from_int(4);
    let gauge = ZMatrix::from_rows(
        2,
        vec![
            ZLoop::one(),
            ZLoop::zero(),
            ZLoop::monomial(-1, &APoly::a() + &APoly::constant(four_gamma.clone())),
            ZLoop::one(),
        ],
    );
    let kappa_h = ZMatrix::from_rows(
        2,
        vec![
            zl(1, 0, 1),
            ZLoop::zero(),
            ZLoop::scalar(-four_gamma),
            zl(-1, 0, -1),
        ],
    );
    &(&gauge * &kappa_h) - &GaugedInvolution::default().matrix
}

/// `B = [[1, z/a], [0, 1]]` and `C = [[0, 1/a], [a, -1/z]]`, with `BC = K`.
#[derive(Clone, Debug)]
pub struct ConstantFactors {
    pub b: ZMatrix,
    pub c: ZMatrix,
}

impl Default for ConstantFactors {
    fn default() -> Self {
        ConstantFactors {
            b: ZMatrix::from_rows(2, vec![ZLoop::one(), zl(1, -1, 1), ZLoop::zero(), ZLoop::one()]),
            c: ZMatrix::from_rows(2, vec![ZLoop::zero(), zl(0, -1, 1), zl(0, 1, 1), zl(-1, 0, -1)]),
        }
    }
}

impl ConstantFactors {
    /// `BC - K`.
    pub fn residual(&self) -> ZMatrix {
        &(&self.b * &self.c) - &GaugedInvolution::default().matrix
    }
}

/// `S = B⁻¹ Q⁻¹ κ_ℋ^τ(Q) C⁻¹` with `Q⁻¹ = g⁻¹Q(-z)ᵀg`.
pub fn s_matrix_from(q: &FundamentalMatrix) -> Result<LoopMatrix> {
    let n = q.q.truncation();
    let f = ConstantFactors::default();
    let b_inv = LoopMatrix::constant(&f.b.inv()?, n);
    let c_inv = LoopMatrix::constant(&f.c.inv()?, n);
    let kq = GaugedInvolution::default().apply(&q.q)?;
    b_inv
        .checked_mul(&q.inverse_via_adjoint())?
        .checked_mul(&kq)?
        .checked_mul(&c_inv)
}

pub fn s_matrix(order: u32) -> Result<LoopMatrix> {
    s_matrix_from(&fundamental_matrix(order))
}

/// Entrywise transcription of the closed form of `S` in terms of `J₀`, `J₁`,
/// `∂₁J₀`, `∂₁J₁` and their conjugates (conjugation is [`BiSeries::bar`]).
/// Independent of [`s_matrix`]; the two are compared in tests.
pub fn s_matrix_closed_form(j0: &BiSeries, j1: &BiSeries) -> Result<LoopMatrix> {
    let n = j0.truncation();
    let d0 = j0.d1();
    let d1 = j1.d1();
    let (j0b, j1b, d0b, d1b) = (j0.bar(), j1.bar(), d0.bar(), d1.bar());
    // 2 Re(x ȳ) = x ȳ + x̄ y
    let two_re = |x: &BiSeries, xb: &BiSeries, y: &BiSeries, yb: &BiSeries| &(x * yb) + &(xb * y);
    let a_pow = |k: i32| ZLoop::term(0, k, ExactScalar::one());
    let z_pow = |k: i32| ZLoop::term(k, 0, ExactScalar::one());

    let re01 = two_re(j0, &j0b, j1, &j1b);
    let abs0 = j0 * &j0b;

    let s11 = {
        let mixed = &two_re(&d0, &d0b, j1, &j1b) + &two_re(j0, &j0b, &d1, &d1b);
        let t = &re01.scale(&a_pow(-1)) + &abs0;
        let t = &t + &mixed;
        let t = &t + &two_re(&d0, &d0b, &d1, &d1b).scale(&a_pow(1));
        &t - &(&d0 * &d0b).scale(&a_pow(2))
    };
    let s12 = {
        let t = re01.scale(&a_pow(-2));
        let t = &t + &(&(&d0 * &j1b) + &(&j0b * &d1)).scale(&a_pow(-1));
        (&t - &(&d0 * &j0b)).scale(&z_pow(1))
    };
    let s21 = {
        let t = -&re01;
        let t = &t - &(&(&d0b * j1) + &(j0 * &d1b)).scale(&a_pow(1));
        (&t + &(j0 * &d0b).scale(&a_pow(2))).scale(&z_pow(-1))
    };
    let s22 = {
        let re10 = two_re(j1, &j1b, j0, &j0b);
        &(-&re10.scale(&a_pow(-1))) + &abs0
    };
    let out = LoopMatrix::from_rows(2, vec![s11, s12, s21, s22])?;
    debug_assert_eq!(out.truncation(), n);
    Ok(out)
}

/// The factors of `S = B̃C̃`.
#[derive(Clone, Debug, PartialEq)]
pub struct BirkhoffFactors {
    pub btilde: LoopMatrix,
    pub ctilde: LoopMatrix,
}

/// Solves `B̃_{n,m} + C̃_{n,m} = S_{n,m} - Σ' B̃_{i,j}C̃_{n-i,m-j}` degree by
/// degree, putting `z^{≥1}` into `B̃` and `z^{≤0}` into `C̃`. Coefficients of
/// equal total degree are independent and computed in parallel.
pub fn birkhoff_factorize(s: &LoopMatrix) -> Result<BirkhoffFactors> {
    let dim = s.dim();
    let n = s.truncation();
    let s00 = s.coeff(0, 0);
    if s00 != ZMatrix::identity(dim) {
        return Err(Error::NonIdentityConstant(format!("{s00:?}")));
    }
    let side = n as usize + 1;
    let idx = |i: u32, j: u32| i as usize * side + j as usize;
    let mut bt: Vec<ZMatrix> = vec![ZMatrix::zero(dim); side * side];
    let mut ct: Vec<ZMatrix> = vec![ZMatrix::zero(dim); side * side];
    bt[0] = ZMatrix::identity(dim);
    ct[0] = ZMatrix::identity(dim);

    for deg in 1..=n {
        let solved: Vec<(u32, ZMatrix, ZMatrix)> = (0..=deg)
            .into_par_iter()
            .map(|nn| {
                let mm = deg - nn;
                let mut r = s.coeff(nn, mm);
                for i in 0..=nn {
                    for j in 0..=mm {
                        if (i, j) == (0, 0) || (i, j) == (nn, mm) {
                            continue;
                        }
                        let (x, y) = (&bt[idx(i, j)], &ct[idx(nn - i, mm - j)]);
                        if x.is_zero() || y.is_zero() {
                            continue;
                        }
                        r = &r - &(x * y);
                    }
                }
                let (pos, nonpos) = r.z_split();
                (nn, pos, nonpos)
            })
            .collect();
        for (nn, pos, nonpos) in solved {
            bt[idx(nn, deg - nn)] = pos;
            ct[idx(nn, deg - nn)] = nonpos;
        }
    }

    let coeffs = |v: &[ZMatrix]| {
        LoopMatrix::from_coeffs(
            dim,
            n,
            (0..=n).flat_map(|i| (0..=n - i).map(move |j| (i, j))).map(|(i, j)| ((i, j), &v[idx(i, j)])),
        )
    };
    Ok(BirkhoffFactors {
        btilde: coeffs(&bt),
        ctilde: coeffs(&ct),
    })
}

/// `B·B̃` and the frame `QBB̃`, whose columns span `F' ∩ κ_ℋ^τ(F')`.
#[derive(Clone, Debug)]
pub struct Frame {
    pub q: FundamentalMatrix,
    pub s: LoopMatrix,
    pub factors: BirkhoffFactors,
    pub b_btilde: LoopMatrix,
    pub phi: LoopMatrix,
}

impl Frame {
    pub fn compute(order: u32) -> Result<Frame> {
        let q = fundamental_matrix(order);
        let s = s_matrix_from(&q)?;
        let factors = birkhoff_factorize(&s)?;
        let b = LoopMatrix::constant(&ConstantFactors::default().b, order);
        let b_btilde = b.checked_mul(&factors.btilde)?;
        let phi = q.q.checked_mul(&b_btilde)?;
        Ok(Frame {
            q,
            s,
            factors,
            b_btilde,
            phi,
        })
    }

    /// `C̃·C`, which has only non-positive powers of `z`.
    pub fn ctilde_c(&self) -> Result<LoopMatrix> {
        let c = LoopMatrix::constant(&ConstantFactors::default().c, self.s.truncation());
        self.factors.ctilde.checked_mul(&c)
    }
}

/// `QBB̃` (the gauge factor `e^{t¹ω/z}` is left implicit).
pub fn frame_phi(order: u32) -> Result<LoopMatrix> {
    Ok(Frame::compute(order)?.phi)
}

/// Largest and smallest `z`-exponent over all entries of a loop matrix.
pub fn z_range(m: &LoopMatrix) -> Option<(i32, i32)> {
    let mut range: Option<(i32, i32)> = None;
    for e in m.entries() {
        for (_, c) in e.terms() {
            if let (Some(lo), Some(hi)) = (c.min_exp(), c.max_exp()) {
                range = Some(match range {
                    None => (lo, hi),
                    Some((l, h)) => (l.min(lo), h.max(hi)),
                });
            }
        }
    }
    range
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::qde::j_coeffs;

    #[test]
    fn gamma_cancels_for_rational_stand_ins() {
        assert!(gamma_cancellation_residual(&rat(1, 3)).is_zero());
        assert!(gamma_cancellation_residual(&rat(-7, 5)).is_zero());
    }

    #[test]
    fn constant_factorization() {
        assert!(ConstantFactors::default().residual().is_zero());
    }

    #[test]
    fn gauged_involution_is_involutive() {
        let k = GaugedInvolution::default();
        let q = fundamental_matrix(3).q;
        let once = k.apply(&q).unwrap();
        assert_ne!(once, q);
        assert_eq!(k.apply(&once).unwrap(), q);
    }

    #[test]
    fn s_at_order_zero_is_identity() {
        assert_eq!(s_matrix(0).unwrap(), LoopMatrix::identity(2, 0));
    }

    #[test]
    fn s_paths_agree() {
        for order in 0..=3 {
            let (j0, j1) = j_coeffs(order);
            let closed = s_matrix_closed_form(&j0, &j1).unwrap();
            assert_eq!(s_matrix(order).unwrap(), closed, "order {order}");
        }
    }

    #[test]
    fn factorizing_identity_and_positive_perturbation() {
        let id = LoopMatrix::identity(2, 3);
        let f = birkhoff_factorize(&id).unwrap();
        assert_eq!(f.btilde, id);
        assert_eq!(f.ctilde, id);

        let m = ZMatrix::from_rows(2, vec![zl(1, 0, 2), zl(1, 1, -1), zl(1, -1, 3), ZLoop::zero()]);
        let pert = LoopMatrix::from_coeffs(2, 3, [((0, 1), &m)]);
        let s = &id + &pert;
        let f = birkhoff_factorize(&s).unwrap();
        assert_eq!(f.btilde, s);
        assert_eq!(f.ctilde, id);
    }

    #[test]
    fn rejects_non_identity_constant() {
        let s = LoopMatrix::constant(&ConstantFactors::default().b, 2);
        assert!(matches!(birkhoff_factorize(&s), Err(Error::NonIdentityConstant(_))));
    }

    #[test]
    fn factorization_residual_vanishes() {
        let s = s_matrix(5).unwrap();
        let f = birkhoff_factorize(&s).unwrap();
        assert!((&s - &(&f.btilde * &f.ctilde)).is_zero());
        let (lo, _) = z_range(&(&f.btilde - &LoopMatrix::identity(2, 5))).unwrap();
        assert!(lo >= 1);
        let (_, hi) = z_range(&f.ctilde).unwrap();
        assert!(hi <= 0);
    }

    #[test]
    fn frame_normalization() {
        let fr = Frame::compute(4).unwrap();
        let (_, hi) = z_range(&fr.ctilde_c().unwrap()).unwrap();
        assert!(hi <= 0);
        let bb0 = fr.b_btilde.map(|e| e.map_coeffs(|_, _, c| ZLoop::from_apoly(c.coeff(0))));
        assert_eq!(bb0, LoopMatrix::identity(2, 4));
        let (lo, _) = z_range(&fr.b_btilde).unwrap();
        assert_eq!(lo, 0);
        // Q itself carries negative z-powers, so QBB̃ is only normalized
        // relative to the Q-frame.
        let phi0 = fr.phi.map(|e| e.map_coeffs(|_, _, c| ZLoop::from_apoly(c.coeff(0))));
        assert_ne!(phi0, LoopMatrix::identity(2, 4));
    }
}
