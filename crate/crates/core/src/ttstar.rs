//! The Hermitian metric `h_{0̄0}` and the Cecotti–Vafa data of `P¹`.
//!
//! # From `Φ_τ(1)` to the gauged frame
//!
//! Write `Φ_τ(1) = e^{t¹ω/z} v` with `v` the first column of `QBB̃`. On the
//! unit circle `conj(t¹/z) = t̄¹z`, and a direct 2×2 computation gives
//! `κ_ℋ ∘ e^{t¹ω/z} = e^{-t̄¹ω/z} ∘ κ_ℋ`. Since `κ_ℋ = e^{(t¹+t̄¹)ω/z} κ_ℋ^τ`,
//!
//! ```text
//! κ_ℋ(Φ_τ(1)) = e^{-t̄¹ω/z} e^{(t¹+t̄¹)ω/z} κ_ℋ^τ(v) = e^{t¹ω/z} κ_ℋ^τ(v).
//! ```
//!
//! The pairing obeys `(f(-z)s₁, s₂)_ℋ = (s₁, f(z)s₂)_ℋ` for `f` built from
//! the self-adjoint operator `ω∪`. With `f(z) = e^{-t¹ω/z}`, so that
//! `f(-z) = e^{t¹ω/z}`,
//!
//! ```text
//! h_{0̄0} = (e^{t¹ω/z}κ_ℋ^τ(v), e^{t¹ω/z}v)_ℋ
//!        = (κ_ℋ^τ(v), e^{-t¹ω/z}e^{t¹ω/z}v)_ℋ = (κ_ℋ^τ(v), v)_ℋ,
//! ```
//!
//! where `(α, β)_ℋ = α(-z)ᵀ g β(z)`. Every quantity on the right lies in the
//! series ring, so `h` is computed without ever forming `log q`.
//!
//! # Truncation
//!
//! `metric_h(order)` returns `F_0, …, F_order`; the coefficient of
//! `(qq̄)^n` has total degree `2n`, so the frame is computed at truncation
//! `2·order`, and all CV data below live at that truncation.

use serde::Serialize;

use crate::birkhoff::{Frame, GaugedInvolution};
use crate::error::{Error, Result};
use crate::exact::{APoly, BiSeries, ExactScalar, LoopMatrix, ZLoop, ZMatrix};
use crate::qde::{omega_product, poincare_g};

/// `h_{0̄0} = Σ F_n (qq̄)^n`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MetricSeries {
    pub order: u32,
    pub h: BiSeries,
    pub f: Vec<APoly>,
}

impl MetricSeries {
    /// Builds `h` from given `F_n`; the truncation is `2·(len - 1)`.
    pub fn from_f(f: Vec<APoly>) -> Self {
        let order = f.len().saturating_sub(1) as u32;
        let mut h = BiSeries::zero(2 * order);
        for (n, p) in f.iter().enumerate() {
            h.add_term(n as u32, n as u32, &ZLoop::from_apoly(p.clone()));
        }
        MetricSeries { order, h, f }
    }

    pub fn truncation(&self) -> u32 {
        self.h.truncation()
    }
}

/// `(κ_ℋ^τ(v), v)_ℋ` for a column `v` of the gauged frame.
pub fn hermitian_norm(v: &[BiSeries]) -> Result<BiSeries> {
    let kv = GaugedInvolution::default().apply_vector(v)?;
    let (a0, a1) = (kv[0].negate_z(), kv[1].negate_z());
    // g = [[0, 1], [1, 0]]
    a0.checked_mul(&v[1])?.checked_add(&a1.checked_mul(&v[0])?)
}

/// Reads `F_n` off a computed `h`, rejecting `z`-dependence and `n ≠ m` terms.
pub fn metric_from_series(h: BiSeries) -> Result<MetricSeries> {
    for ((n, m), c) in h.terms() {
        if !c.is_z_free() {
            return Err(Error::ZDependence { n, m });
        }
        if n != m {
            return Err(Error::OffDiagonal { n, m });
        }
    }
    let order = h.truncation() / 2;
    let f = (0..=order).map(|n| h.coeff(n, n).coeff(0)).collect();
    let h = h.truncate(2 * order);
    Ok(MetricSeries { order, h, f })
}

pub fn metric_from_frame(frame: &Frame) -> Result<MetricSeries> {
    metric_from_series(hermitian_norm(&frame.phi.column(0))?)
}

pub fn metric_h(order: u32) -> Result<MetricSeries> {
    metric_from_frame(&Frame::compute(2 * order)?)
}

/// Per-`n` structural facts about `F_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FnShape {
    pub n: u32,
    pub polynomial: bool,
    pub monic: bool,
    pub degree: Option<i32>,
}

impl FnShape {
    pub fn of(n: u32, p: &APoly) -> Self {
        FnShape {
            n,
            polynomial: p.is_polynomial(),
            monic: p.leading_coeff().is_some_and(ExactScalar::is_one),
            degree: p.max_exp(),
        }
    }

    /// `F_n ∈ Q[a]`, monic, of degree `2n + 1`.
    pub fn expected(&self) -> bool {
        self.polynomial && self.monic && self.degree == Some(2 * self.n as i32 + 1)
    }
}

pub fn shapes(m: &MetricSeries) -> Vec<FnShape> {
    m.f.iter().enumerate().map(|(n, p)| FnShape::of(n as u32, p)).collect()
}

fn z_free(p: APoly, n: u32) -> BiSeries {
    BiSeries::constant(ZLoop::from_apoly(p), n)
}

fn diag(x: &BiSeries, y: &BiSeries) -> LoopMatrix {
    let n = x.truncation();
    LoopMatrix::from_rows(2, vec![x.clone(), BiSeries::zero(n), BiSeries::zero(n), y.clone()])
        .expect("2x2")
}

fn offdiag(x12: &BiSeries, x21: &BiSeries) -> LoopMatrix {
    let n = x12.truncation();
    LoopMatrix::from_rows(2, vec![BiSeries::zero(n), x12.clone(), x21.clone(), BiSeries::zero(n)])
        .expect("2x2")
}

/// Cecotti–Vafa data along `t¹`, in the trivialization of `K` by `(1, ω)`.
///
/// Antilinear maps are stored as their matrix part: `κ = kappa ∘ bar`.
/// Connections are stored as connection matrices: `D₁ = ∂₁ + d1`,
/// `D̄₁ = ∂̄₁ + d1bar`.
#[derive(Clone, Debug)]
pub struct CVData {
    pub metric: MetricSeries,
    pub h_inv: BiSeries,
    /// `∂₁ log h = ∂₁h / h`.
    pub dlog_h: BiSeries,
    pub g: LoopMatrix,
    pub kappa: LoopMatrix,
    pub d1: LoopMatrix,
    pub d1bar: LoopMatrix,
    pub c1: LoopMatrix,
    pub c1bar: LoopMatrix,
    pub u: LoopMatrix,
    pub ubar: LoopMatrix,
    pub qop: LoopMatrix,
    pub mu: LoopMatrix,
}

impl CVData {
    pub fn new(metric: MetricSeries) -> Result<CVData> {
        let n = metric.truncation();
        let h = &metric.h;
        let h_inv = h.inv()?;
        let h2 = h.checked_mul(h)?;
        let h_inv2 = h_inv.checked_mul(&h_inv)?;
        let dlog_h = h.d1().checked_mul(&h_inv)?;
        let two = ExactScalar::from_int(2);
        let half = |s: i64| z_free(APoly::constant(ExactScalar::new(s, 2)), n);

        let g = LoopMatrix::constant(&ZMatrix::from_rows(2, poincare_g_zloops()), n);
        let kappa = offdiag(&h_inv, h);
        let d1 = diag(&dlog_h, &-&dlog_h);
        let d1bar = LoopMatrix::zero(2, n);
        let c1 = omega_product(n);
        let c1bar = offdiag(&h_inv2, &BiSeries::qbar(n).checked_mul(&h2)?);
        let u = c1.map(|e| e.scale_scalar(&two));
        let ubar = c1bar.map(|e| e.scale_scalar(&two));
        let two_dlog = dlog_h.scale_scalar(&two);
        let qop = diag(&(&half(-1) - &two_dlog), &(&half(1) + &two_dlog));
        let mu = diag(&half(-1), &half(1));
        Ok(CVData {
            metric,
            h_inv,
            dlog_h,
            g,
            kappa,
            d1,
            d1bar,
            c1,
            c1bar,
            u,
            ubar,
            qop,
            mu,
        })
    }

    pub fn truncation(&self) -> u32 {
        self.metric.truncation()
    }

    /// `D₁X = ∂₁X + [A₁, X]` for an endomorphism `X`.
    fn cov_d1(&self, x: &LoopMatrix) -> LoopMatrix {
        &x.map(BiSeries::d1) + &comm(&self.d1, x)
    }

    fn cov_d1bar(&self, x: &LoopMatrix) -> LoopMatrix {
        &x.map(BiSeries::d1bar) + &comm(&self.d1bar, x)
    }

    /// `κ X κ` as a matrix: `K · bar(X) · bar(K)`.
    pub fn conjugate_by_kappa(&self, x: &LoopMatrix) -> LoopMatrix {
        &(&self.kappa * &x.bar()) * &self.kappa.bar()
    }

    /// Connection matrix of `κ D₁ κ`: `K ∂̄₁(bar K) + K bar(A₁) bar(K)`.
    fn kappa_d1_kappa(&self) -> LoopMatrix {
        let kb = self.kappa.bar();
        &(&self.kappa * &kb.map(BiSeries::d1bar)) + &(&(&self.kappa * &self.d1.bar()) * &kb)
    }

    /// The Hermitian metric `h(u₁, u₂) = g(κu₁, u₂)` as a matrix: `Kᵀ g`.
    pub fn hermitian_matrix(&self) -> LoopMatrix {
        &self.kappa.transpose() * &self.g
    }
}

fn poincare_g_zloops() -> Vec<ZLoop> {
    let g = poincare_g();
    (0..2)
        .flat_map(|i| (0..2).map(move |j| (i, j)))
        .map(|(i, j)| ZLoop::scalar(g.get(i, j).clone()))
        .collect()
}

fn comm(x: &LoopMatrix, y: &LoopMatrix) -> LoopMatrix {
    &(x * y) - &(y * x)
}

/// `Xᵀg - gX`: vanishes iff `X` is `g`-symmetric.
fn g_sym(g: &LoopMatrix, x: &LoopMatrix) -> LoopMatrix {
    &(&x.transpose() * g) - &(g * x)
}

/// `Xᵀg + gX`: vanishes iff `X` is `g`-antisymmetric.
fn g_antisym(g: &LoopMatrix, x: &LoopMatrix) -> LoopMatrix {
    &(&x.transpose() * g) + &(g * x)
}

/// One identity of the CV structure and its residual.
#[derive(Clone, Debug)]
pub struct CvResidual {
    pub name: &'static str,
    pub residual: LoopMatrix,
}

impl CvResidual {
    pub fn is_zero(&self) -> bool {
        self.residual.is_zero()
    }

    /// Largest absolute value of any rational coefficient of the residual.
    pub fn max_abs(&self) -> f64 {
        let mut worst = 0.0f64;
        for e in self.residual.entries() {
            for (_, c) in e.terms() {
                for (_, p) in c.terms() {
                    for (_, r) in p.terms() {
                        worst = worst.max(r.to_f64().abs());
                    }
                }
            }
        }
        worst
    }
}

/// Evaluates every tt*-equation along the single coordinate `t¹`
/// (`i = j = 1`, Euler field `E = 2∂₁` on `H²`), all `g`-compatibilities,
/// the `κ`-reality conditions, and the metric normalizations.
pub fn check_cv_equations(d: &CVData) -> Result<Vec<CvResidual>> {
    let n = d.truncation();
    let id = LoopMatrix::identity(2, n);
    let r = |name, residual| CvResidual { name, residual };

    // Curvatures of D = ∂ + A along (1,1), (1̄,1̄), (1,1̄).
    let f11 = &(&d.d1.map(BiSeries::d1) - &d.d1.map(BiSeries::d1)) + &comm(&d.d1, &d.d1);
    let f1b1b = &(&d.d1bar.map(BiSeries::d1bar) - &d.d1bar.map(BiSeries::d1bar)) + &comm(&d.d1bar, &d.d1bar);
    let f11b = &(&d.d1bar.map(BiSeries::d1) - &d.d1.map(BiSeries::d1bar)) + &comm(&d.d1, &d.d1bar);

    let mut out = vec![
        r("[D_1,D_1]", f11),
        r("D_1C_1-D_1C_1", &d.cov_d1(&d.c1) - &d.cov_d1(&d.c1)),
        r("[C_1,C_1]", comm(&d.c1, &d.c1)),
        r("[D_1b,D_1b]", f1b1b),
        r("D_1bCt_1b-D_1bCt_1b", &d.cov_d1bar(&d.c1bar) - &d.cov_d1bar(&d.c1bar)),
        r("[Ct_1b,Ct_1b]", comm(&d.c1bar, &d.c1bar)),
        r("D_1Ct_1b", d.cov_d1(&d.c1bar)),
        r("D_1bC_1", d.cov_d1bar(&d.c1)),
        r("[D_1,D_1b]+[C_1,Ct_1b]", &f11b + &comm(&d.c1, &d.c1bar)),
        r("D_1Ubar", d.cov_d1(&d.ubar)),
        r("D_1Q-[Ubar,C_1]", &d.cov_d1(&d.qop) - &comm(&d.ubar, &d.c1)),
        r("D_1U-C_1+[Q,C_1]", &(&d.cov_d1(&d.u) - &d.c1) + &comm(&d.qop, &d.c1)),
        r("[U,C_1]", comm(&d.u, &d.c1)),
        r("D_1bU", d.cov_d1bar(&d.u)),
        r("D_1bQ+[U,Ct_1b]", &d.cov_d1bar(&d.qop) + &comm(&d.u, &d.c1bar)),
        r("D_1bUbar-Ct_1b-[Q,Ct_1b]", &(&d.cov_d1bar(&d.ubar) - &d.c1bar) - &comm(&d.qop, &d.c1bar)),
        r("[Ubar,Ct_1b]", comm(&d.ubar, &d.c1bar)),
        // metric compatibilities (g is constant, so ∂g = 0)
        r("g(D_1u,v)+g(u,D_1v)", g_antisym(&d.g, &d.d1)),
        r("g(D_1bu,v)+g(u,D_1bv)", g_antisym(&d.g, &d.d1bar)),
        r("g(C_1u,v)-g(u,C_1v)", g_sym(&d.g, &d.c1)),
        r("g(Ct_1bu,v)-g(u,Ct_1bv)", g_sym(&d.g, &d.c1bar)),
        r("g(Uu,v)-g(u,Uv)", g_sym(&d.g, &d.u)),
        r("g(Ubaru,v)-g(u,Ubarv)", g_sym(&d.g, &d.ubar)),
        r("g(Qu,v)+g(u,Qv)", g_antisym(&d.g, &d.qop)),
        // reality with respect to κ
        r("kappa^2-1", &(&d.kappa * &d.kappa.bar()) - &id),
        r("g(ku,kv)-conj g(u,v)", &(&d.kappa.transpose() * &(&d.g * &d.kappa)) - &d.g),
        r("Ct_1b-kC_1k", &d.c1bar - &d.conjugate_by_kappa(&d.c1)),
        r("Ubar-kUk", &d.ubar - &d.conjugate_by_kappa(&d.u)),
        r("D_1b-kD_1k", &d.d1bar - &d.kappa_d1_kappa()),
        r("Qk+kQ", &(&d.qop * &d.kappa) + &(&d.kappa * &d.qop.bar())),
        r("U-2C_1", &d.u - &d.c1.map(|e| e.scale_scalar(&ExactScalar::from_int(2)))),
        r("h-diag(h,1/h)", &d.hermitian_matrix() - &diag(&d.metric.h, &d.h_inv)),
        r("h real", diag(&d.metric.h.bar().checked_sub(&d.metric.h)?, &BiSeries::zero(n))),
        r("det h-1", diag(&(&(&d.metric.h * &d.h_inv) - &BiSeries::one(n)), &BiSeries::zero(n))),
        r("Q(0)-mu", {
            let q0 = d.qop.map(|e| BiSeries::constant(e.coeff(0, 0), n));
            let mu0 = d.mu.map(|e| BiSeries::constant(e.coeff(0, 0), n));
            // the constant term of ∂₁ log a = -1/a is -a⁻¹, so compare after
            // dropping the a-dependent part
            let strip = |m: &LoopMatrix| m.map(|e| e.map_coeffs(|_, _, c| c.map_apoly(|p| APoly::constant(p.coeff(0)))));
            &strip(&q0) - &mu0
        }),
    ];
    out.push(r("scalar tt* equation", diag(&tt_star_scalar_residual(&d.metric.h)?, &BiSeries::zero(n))));
    Ok(out)
}

/// `∂₁∂̄₁ log h + h⁻² - qq̄h²`, with `∂₁∂̄₁ log h = ∂̄₁(∂₁h / h)`.
pub fn tt_star_scalar_residual(h: &BiSeries) -> Result<BiSeries> {
    let n = h.truncation();
    let h_inv = h.inv()?;
    let lap = h.d1().checked_mul(&h_inv)?.d1bar();
    let h2 = h.checked_mul(h)?;
    let s = BiSeries::q(n).checked_mul(&BiSeries::qbar(n))?;
    lap.checked_add(&h_inv.checked_mul(&h_inv)?)?.checked_sub(&s.checked_mul(&h2)?)
}

pub fn cv_data(order: u32) -> Result<CVData> {
    CVData::new(metric_h(order)?)
}

/// `K = -(2/h)(1 - qq̄h⁴)`, the Gauss curvature of `h⁻¹|dt¹|²`.
pub fn curvature_series(m: &MetricSeries) -> Result<BiSeries> {
    let n = m.truncation();
    let h = &m.h;
    let h2 = h.checked_mul(h)?;
    let h4 = h2.checked_mul(&h2)?;
    let s = BiSeries::q(n).checked_mul(&BiSeries::qbar(n))?;
    let inner = BiSeries::one(n).checked_sub(&s.checked_mul(&h4)?)?;
    Ok(h.inv()?.checked_mul(&inner)?.scale_scalar(&ExactScalar::from_int(-2)))
}

/// `-2h ∂₁∂̄₁ log(h⁻¹)`, the same curvature computed from the metric
/// directly rather than through the tt* equation.
pub fn curvature_from_laplacian(m: &MetricSeries) -> Result<BiSeries> {
    let h = &m.h;
    let h_inv = h.inv()?;
    let lap = h_inv.d1().checked_mul(h)?.d1bar();
    Ok(h.checked_mul(&lap)?.scale_scalar(&ExactScalar::from_int(-2)))
}
