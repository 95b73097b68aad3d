//! The Γ̂-integral structure of `P¹`.
//!
//! Cohomology vectors are complex pairs `(x₁, x_ω)` in the basis `(1, ω)`.
//! Transcendentals (`γ`, `π`, `i`) live only here, in `f64`; the symbolic
//! pipeline eliminates `γ` exactly (see [`crate::birkhoff`]).

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// A class in `K(P¹) = Z[𝒪] ⊕ Z[𝒪_pt]`, stored as rank and degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct KClass {
    pub rank: i64,
    pub degree: i64,
}

impl KClass {
    pub const fn new(rank: i64, degree: i64) -> Self {
        KClass { rank, degree }
    }

    /// `[𝒪(n)] = [𝒪] + n[𝒪_pt]`.
    pub const fn line(n: i64) -> Self {
        KClass::new(1, n)
    }

    pub const fn structure_sheaf() -> Self {
        KClass::line(0)
    }

    pub const fn point() -> Self {
        KClass::new(0, 1)
    }

    pub fn dual(self) -> Self {
        KClass::new(self.rank, -self.degree)
    }

    pub fn tensor(self, o: KClass) -> Self {
        KClass::new(self.rank * o.rank, self.rank * o.degree + self.degree * o.rank)
    }

    /// Coefficients in the basis `{[𝒪], [𝒪(1)]}`: `V = (r - d)[𝒪] + d[𝒪(1)]`.
    fn line_coords(self) -> [(i64, i64); 2] {
        [(0, self.rank - self.degree), (1, self.degree)]
    }
}

impl Add for KClass {
    type Output = KClass;
    fn add(self, o: KClass) -> KClass {
        KClass::new(self.rank + o.rank, self.degree + o.degree)
    }
}

impl Sub for KClass {
    type Output = KClass;
    fn sub(self, o: KClass) -> KClass {
        KClass::new(self.rank - o.rank, self.degree - o.degree)
    }
}

impl Neg for KClass {
    type Output = KClass;
    fn neg(self) -> KClass {
        KClass::new(-self.rank, -self.degree)
    }
}

impl Mul<KClass> for i64 {
    type Output = KClass;
    fn mul(self, v: KClass) -> KClass {
        KClass::new(self * v.rank, self * v.degree)
    }
}

/// A vector of `H*(P¹; C)` in the basis `(1, ω)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CohVectorC(pub [Complex64; 2]);

impl CohVectorC {
    pub fn new(one: Complex64, omega: Complex64) -> Self {
        CohVectorC([one, omega])
    }

    pub fn conj(self) -> Self {
        CohVectorC([self.0[0].conj(), self.0[1].conj()])
    }

    pub fn dist(self, o: CohVectorC) -> f64 {
        (self.0[0] - o.0[0]).norm().max((self.0[1] - o.0[1]).norm())
    }
}

impl Add for CohVectorC {
    type Output = CohVectorC;
    fn add(self, o: CohVectorC) -> CohVectorC {
        CohVectorC([self.0[0] + o.0[0], self.0[1] + o.0[1]])
    }
}

impl Mul<CohVectorC> for Complex64 {
    type Output = CohVectorC;
    fn mul(self, v: CohVectorC) -> CohVectorC {
        CohVectorC([self * v.0[0], self * v.0[1]])
    }
}

/// 2×2 complex matrix acting on [`CohVectorC`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Mat2C(pub [[Complex64; 2]; 2]);

impl Mat2C {
    pub fn apply(&self, v: CohVectorC) -> CohVectorC {
        let m = &self.0;
        CohVectorC([
            m[0][0] * v.0[0] + m[0][1] * v.0[1],
            m[1][0] * v.0[0] + m[1][1] * v.0[1],
        ])
    }

    pub fn mul(&self, o: &Mat2C) -> Mat2C {
        let (a, b) = (&self.0, &o.0);
        let e = |i: usize, j: usize| a[i][0] * b[0][j] + a[i][1] * b[1][j];
        Mat2C([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }

    pub fn conj(&self) -> Mat2C {
        let m = &self.0;
        Mat2C([
            [m[0][0].conj(), m[0][1].conj()],
            [m[1][0].conj(), m[1][1].conj()],
        ])
    }

    pub fn identity() -> Mat2C {
        let (o, z) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        Mat2C([[o, z], [z, o]])
    }

    pub fn max_abs_diff(&self, o: &Mat2C) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                worst = worst.max((self.0[i][j] - o.0[i][j]).norm());
            }
        }
        worst
    }
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `Ψ(V) = (2π)^{-1/2} Γ̂(TP¹) ∪ (2πi)^{deg/2} ch(V)`.
///
/// With `Γ̂(TP¹) = Γ(1 + 2ω) = 1 - 2γω` and `ch(V) = r + dω` this is
/// `(2π)^{-1/2} (r, 2πi d - 2γ r)`.
pub fn psi_map(v: KClass) -> CohVectorC {
    let c = 1.0 / (2.0 * PI).sqrt();
    let gamma_hat = [re(1.0), re(-2.0 * EULER_GAMMA)];
    let ch = [re(v.rank as f64), 2.0 * PI * I * v.degree as f64];
    // cup product in H*(P¹): (x₁, x_ω)(y₁, y_ω) = (x₁y₁, x₁y_ω + x_ωy₁)
    let one = gamma_hat[0] * ch[0];
    let om = gamma_hat[0] * ch[1] + gamma_hat[1] * ch[0];
    re(c) * CohVectorC::new(one, om)
}

/// Euler characteristic on `P¹`, from `χ(𝒪(n)) = n + 1` extended linearly
/// over the line bundle basis.
fn chi_via_lines(v: KClass) -> i64 {
    v.line_coords().iter().map(|&(n, c)| c * (n + 1)).sum()
}

/// `([V₁], [V₂]) = χ(V₂^∨ ⊗ V₁)`, expanding both classes in `{𝒪, 𝒪(1)}` and
/// using `𝒪(m)^∨ ⊗ 𝒪(n) = 𝒪(n - m)`.
pub fn mukai_pairing(v1: KClass, v2: KClass) -> i64 {
    let mut total = 0;
    for (n, c1) in v1.line_coords() {
        for (m, c2) in v2.line_coords() {
            total += c1 * c2 * chi_via_lines(KClass::line(n - m));
        }
    }
    total
}

/// `e^{πiρ}` with `ρ = 2ω`, i.e. `1 + 2πiω`.
pub fn exp_pi_i_rho() -> Mat2C {
    let z = re(0.0);
    Mat2C([[re(1.0), z], [2.0 * PI * I, re(1.0)]])
}

/// `e^{πiμ}` with `μ = diag(-1/2, 1/2)`.
pub fn exp_pi_i_mu() -> Mat2C {
    let z = re(0.0);
    Mat2C([[-I, z], [z, I]])
}

/// Poincaré pairing `∫ x ∪ y = x₁y_ω + x_ωy₁` (bilinear).
pub fn orbifold_pairing(x: CohVectorC, y: CohVectorC) -> Complex64 {
    x.0[0] * y.0[1] + x.0[1] * y.0[0]
}

/// `(α, β)_𝒱 = (e^{πiρ}α, e^{πiμ}β)_orb`.
pub fn pairing_v(alpha: CohVectorC, beta: CohVectorC) -> Complex64 {
    orbifold_pairing(exp_pi_i_rho().apply(alpha), exp_pi_i_mu().apply(beta))
}

/// `G^𝒱(ω) = e^{-2πiω}`.
pub fn galois_matrix() -> Mat2C {
    let z = re(0.0);
    Mat2C([[re(1.0), z], [-2.0 * PI * I, re(1.0)]])
}

/// `|Ψ(V ⊗ 𝒪(-1)) - G^𝒱(ω) Ψ(V)|`.
pub fn galois_check(v: KClass) -> f64 {
    let lhs = psi_map(v.tensor(KClass::line(-1)));
    let rhs = galois_matrix().apply(psi_map(v));
    lhs.dist(rhs)
}

/// Matrix part of `κ_𝒱 = [[1, 0], [-4γ, -1]] ∘ conj`.
pub fn kappa_v_matrix() -> Mat2C {
    let z = re(0.0);
    Mat2C([[re(1.0), z], [re(-4.0 * EULER_GAMMA), re(-1.0)]])
}

pub fn kappa_v(v: CohVectorC) -> CohVectorC {
    kappa_v_matrix().apply(v.conj())
}

/// Matrix part of `κ_ℋ = [[z, 0], [-4γ, -z⁻¹]] ∘ conj` at a point `z` of
/// the unit circle.
pub fn kappa_h_matrix(z: Complex64) -> Mat2C {
    Mat2C([[z, re(0.0)], [re(-4.0 * EULER_GAMMA), -z.inv()]])
}

/// `κ_𝒱²` as a matrix: `M · conj(M)`.
pub fn kappa_v_square() -> Mat2C {
    let m = kappa_v_matrix();
    m.mul(&m.conj())
}

/// `κ_ℋ²` evaluated pointwise at `z`: `M(z) · conj(M(z))`. This is the
/// identity exactly when `|z| = 1`.
pub fn kappa_h_square(z: Complex64) -> Mat2C {
    kappa_h_matrix(z).mul(&kappa_h_matrix(z).conj())
}

/// Gram matrix of `pairing_v` on the integral basis `{Ψ(𝒪), Ψ(𝒪_pt)}`.
pub fn gram_matrix_v() -> [[Complex64; 2]; 2] {
    let basis = [psi_map(KClass::structure_sheaf()), psi_map(KClass::point())];
    let mut g = [[re(0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            g[i][j] = pairing_v(basis[i], basis[j]);
        }
    }
    g
}

/// Mukai Gram matrix on `{𝒪, 𝒪_pt}`, exact.
pub fn gram_matrix_mukai() -> [[i64; 2]; 2] {
    let basis = [KClass::structure_sheaf(), KClass::point()];
    let mut g = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            g[i][j] = mukai_pairing(basis[i], basis[j]);
        }
    }
    g
}

/// Summary of the Γ̂-structure checks.
#[derive(Clone, Debug, Serialize)]
pub struct GammaReport {
    pub gram_mukai: [[i64; 2]; 2],
    pub gram_pairing: [[[f64; 2]; 2]; 2],
    pub gram_rounded: [[i64; 2]; 2],
    pub gram_residual: f64,
    pub determinant: i64,
    pub galois_residual: f64,
    pub kappa_v_fixes_lattice: f64,
    pub kappa_v_involution: f64,
    pub kappa_h_involution: f64,
}

impl GammaReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.gram_rounded == self.gram_mukai
            && self.gram_residual < tol
            && self.determinant.abs() == 1
            && self.galois_residual < tol
            && self.kappa_v_fixes_lattice < tol
            && self.kappa_v_involution < tol
            && self.kappa_h_involution < tol
    }
}

/// Runs every Γ̂-structure check over `{𝒪(n) : |n| ≤ range} ∪ {𝒪_pt}`.
pub fn gamma_report(range: i64) -> GammaReport {
    let gram_mukai = gram_matrix_mukai();
    let g = gram_matrix_v();
    let mut gram_pairing = [[[0.0; 2]; 2]; 2];
    let mut gram_rounded = [[0; 2]; 2];
    let mut gram_residual = 0.0f64;
    for i in 0..2 {
        for j in 0..2 {
            gram_pairing[i][j] = [g[i][j].re, g[i][j].im];
            gram_rounded[i][j] = g[i][j].re.round() as i64;
            gram_residual = gram_residual.max((g[i][j] - re(gram_rounded[i][j] as f64)).norm());
        }
    }
    let determinant = gram_rounded[0][0] * gram_rounded[1][1] - gram_rounded[0][1] * gram_rounded[1][0];

    let mut classes: Vec<KClass> = (-range..=range).map(KClass::line).collect();
    classes.push(KClass::point());
    let mut galois_residual = 0.0f64;
    for &v in &classes {
        galois_residual = galois_residual.max(galois_check(v));
        for &w in &classes {
            let d = (pairing_v(psi_map(v), psi_map(w)) - re(mukai_pairing(v, w) as f64)).norm();
            gram_residual = gram_residual.max(d);
        }
    }

    let mut kappa_v_fixes_lattice = 0.0f64;
    for v in classes.iter().chain([KClass::new(3, -2), KClass::new(-1, 7)].iter()) {
        let p = psi_map(*v);
        kappa_v_fixes_lattice = kappa_v_fixes_lattice.max(kappa_v(p).dist(p));
    }

    let mut kappa_h_involution = 0.0f64;
    for k in 0..16 {
        let z = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / 16.0);
        kappa_h_involution = kappa_h_involution.max(kappa_h_square(z).max_abs_diff(&Mat2C::identity()));
    }

    GammaReport {
        gram_mukai,
        gram_pairing,
        gram_rounded,
        gram_residual,
        determinant,
        galois_residual,
        kappa_v_fixes_lattice,
        kappa_v_involution: kappa_v_square().max_abs_diff(&Mat2C::identity()),
        kappa_h_involution,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const TOL: f64 = 1e-10;

    /// Closed form of the Mukai pairing: `χ((r₂, -d₂) ⊗ (r₁, d₁)) = r₁r₂ + r₂d₁ - r₁d₂`.
    fn mukai_closed_form(v1: KClass, v2: KClass) -> i64 {
        v1.rank * v2.rank + v2.rank * v1.degree - v1.rank * v2.degree
    }

    #[test]
    fn psi_of_basis() {
        let c = 1.0 / (2.0 * PI).sqrt();
        let o = psi_map(KClass::structure_sheaf());
        assert!(o.dist(CohVectorC::new(re(c), re(-2.0 * EULER_GAMMA * c))) < TOL);
        let pt = psi_map(KClass::point());
        assert!(pt.dist(CohVectorC::new(re(0.0), I * (2.0 * PI).sqrt())) < TOL);
        let o1 = psi_map(KClass::line(1));
        assert!(o1.dist(o + pt) < TOL);
    }

    #[test]
    fn mukai_values() {
        let (o, pt) = (KClass::structure_sheaf(), KClass::point());
        assert_eq!(mukai_pairing(o, o), 1);
        assert_eq!(mukai_pairing(o, pt), -1);
        assert_eq!(mukai_pairing(pt, o), 1);
        assert_eq!(mukai_pairing(pt, pt), 0);
        assert_eq!(gram_matrix_mukai(), [[1, -1], [1, 0]]);
    }

    #[test]
    fn pairing_matches_mukai_on_basis() {
        let (o, pt) = (psi_map(KClass::structure_sheaf()), psi_map(KClass::point()));
        assert!((pairing_v(o, o) - re(1.0)).norm() < TOL);
        assert!((pairing_v(pt, o) - re(1.0)).norm() < TOL);
        assert!((pairing_v(pt, pt)).norm() < TOL);
        assert!((pairing_v(o, pt) - re(-1.0)).norm() < TOL);
    }

    #[test]
    fn galois_on_examples() {
        for v in [KClass::structure_sheaf(), KClass::point(), KClass::line(1)] {
            assert!(galois_check(v) < TOL, "{v:?}");
        }
    }

    #[test]
    fn full_report_passes() {
        let r = gamma_report(5);
        assert!(r.passes(TOL), "{r:?}");
        assert_eq!(r.determinant, 1);
    }

    #[test]
    fn kappa_h_is_not_involutive_off_the_circle() {
        let z = Complex64::new(2.0, 0.0);
        assert!(kappa_h_square(z).max_abs_diff(&Mat2C::identity()) > 0.1);
    }

    proptest! {
        #[test]
        fn mukai_matches_closed_form(r1 in -6i64..6, d1 in -6i64..6, r2 in -6i64..6, d2 in -6i64..6) {
            let (v1, v2) = (KClass::new(r1, d1), KClass::new(r2, d2));
            prop_assert_eq!(mukai_pairing(v1, v2), mukai_closed_form(v1, v2));
        }

        #[test]
        fn mukai_is_bilinear(r1 in -4i64..4, d1 in -4i64..4, r2 in -4i64..4, d2 in -4i64..4,
                             r3 in -4i64..4, d3 in -4i64..4, k in -3i64..3) {
            let (u, v, w) = (KClass::new(r1, d1), KClass::new(r2, d2), KClass::new(r3, d3));
            prop_assert_eq!(mukai_pairing(u + k * v, w), mukai_pairing(u, w) + k * mukai_pairing(v, w));
            prop_assert_eq!(mukai_pairing(w, u + k * v), mukai_pairing(w, u) + k * mukai_pairing(w, v));
        }

        #[test]
        fn pairing_is_bilinear_on_lattice(r1 in -4i64..4, d1 in -4i64..4, r2 in -4i64..4, d2 in -4i64..4) {
            let (v1, v2) = (KClass::new(r1, d1), KClass::new(r2, d2));
            let p = pairing_v(psi_map(v1), psi_map(v2));
            prop_assert!((p - re(mukai_pairing(v1, v2) as f64)).norm() < 1e-9);
        }

        #[test]
        fn galois_on_random_classes(r in -5i64..5, d in -5i64..5) {
            prop_assert!(galois_check(KClass::new(r, d)) < 1e-9);
        }
    }
}
