//! Finite-dimensional Lefschetz toolkit: graded spaces with a degree-2
//! nilpotent `𝔞`, the `sl₂`-triple it generates, weight filtrations, the
//! `e^{-𝔞}e^{𝔞†}` lemma and the transversality map near `t = ∞`.
//!
//! Basis vectors are grouped by degree `0, 2, …, 2n` (real degrees, `n`
//! the complex dimension); the grading operator is `deg - n`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::linalg::{subspace, Field};
use crate::exact::{ExactScalar, Matrix};
use crate::gamma::EULER_GAMMA;

type QMat = Matrix<ExactScalar>;

fn q(n: i64) -> ExactScalar {
    ExactScalar::from_int(n)
}

fn factorial(n: u32) -> ExactScalar {
    (1..=n as i64).map(q).product()
}

/// A graded space `⊕ H^{2p}` with the operator `𝔞`.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedSpace {
    dims: Vec<usize>,
    raising: QMat,
}

impl GradedSpace {
    /// Validates the block structure, nilpotency and hard Lefschetz.
    pub fn new(dims: Vec<usize>, raising: QMat) -> Result<Self> {
        let total: usize = dims.iter().sum();
        if dims.is_empty() || raising.rows() != total || raising.cols() != total {
            return Err(Error::DimensionMismatch(format!(
                "{total}-dimensional grading for a {}x{} operator",
                raising.rows(),
                raising.cols()
            )));
        }
        let v = GradedSpace { dims, raising };
        for i in 0..total {
            for j in 0..total {
                if !v.raising.get(i, j).is_zero() && v.slice_of(i) != v.slice_of(j) + 1 {
                    return Err(Error::InvalidArgument(format!(
                        "operator entry ({i}, {j}) does not raise degree by 2"
                    )));
                }
            }
        }
        if !v.raising.pow(total as u32 + 1).is_zero() {
            return Err(Error::NotNilpotent);
        }
        v.check_hard_lefschetz()?;
        Ok(v)
    }

    /// `H*(Pⁿ) = Q[ω]/(ωⁿ⁺¹)` with `𝔞 = ω∪`.
    pub fn projective_space(n: usize) -> Self {
        let mut a = QMat::zeros(n + 1, n + 1);
        for i in 0..n {
            a.set(i + 1, i, q(1));
        }
        GradedSpace::new(vec![1; n + 1], a).expect("Pⁿ satisfies hard Lefschetz")
    }

    /// Künneth product with `𝔞 = 𝔞₁⊗1 + 1⊗𝔞₂`.
    pub fn tensor(&self, o: &GradedSpace) -> Result<Self> {
        let n1 = self.dim();
        let n2 = o.dim();
        // pairs (i, j) ordered by total degree so that slices stay contiguous
        let mut pairs: Vec<(usize, usize)> = (0..n1).flat_map(|i| (0..n2).map(move |j| (i, j))).collect();
        pairs.sort_by_key(|&(i, j)| (self.slice_of(i) + o.slice_of(j), i, j));
        let pos = |i: usize, j: usize| pairs.iter().position(|&p| p == (i, j)).unwrap();
        let mut dims = vec![0; self.dims.len() + o.dims.len() - 1];
        for &(i, j) in &pairs {
            dims[self.slice_of(i) + o.slice_of(j)] += 1;
        }
        let mut a = QMat::zeros(n1 * n2, n1 * n2);
        for &(i, j) in &pairs {
            let col = pos(i, j);
            for r in 0..n1 {
                let c = self.raising.get(r, i);
                if !c.is_zero() {
                    let row = pos(r, j);
                    a.set(row, col, a.get(row, col) + c);
                }
            }
            for r in 0..n2 {
                let c = o.raising.get(r, j);
                if !c.is_zero() {
                    let row = pos(i, r);
                    a.set(row, col, a.get(row, col) + c);
                }
            }
        }
        GradedSpace::new(dims, a)
    }

    pub fn p1_times_p1() -> Self {
        let p1 = GradedSpace::projective_space(1);
        p1.tensor(&p1).expect("P¹×P¹ satisfies hard Lefschetz")
    }

    pub fn dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// Complex dimension `n`.
    pub fn n(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn raising(&self) -> &QMat {
        &self.raising
    }

    /// Index `p` of the slice `H^{2p}` containing basis vector `i`.
    pub fn slice_of(&self, i: usize) -> usize {
        let mut acc = 0;
        for (p, d) in self.dims.iter().enumerate() {
            acc += d;
            if i < acc {
                return p;
            }
        }
        panic!("basis index {i} out of range")
    }

    /// Basis indices spanning `H^{2p}`.
    pub fn slice(&self, p: usize) -> std::ops::Range<usize> {
        let start: usize = self.dims[..p.min(self.dims.len())].iter().sum();
        start..start + self.dims.get(p).copied().unwrap_or(0)
    }

    fn span_where<F: Field>(&self, keep: impl Fn(i64) -> bool) -> Matrix<F> {
        let idx: Vec<usize> = (0..self.dim())
            .filter(|&i| keep(2 * self.slice_of(i) as i64))
            .collect();
        Matrix::<F>::identity(self.dim()).select_columns(&idx)
    }

    /// `H^{≤d}` (real degree) as spanning columns.
    pub fn leq<F: Field>(&self, d: i64) -> Matrix<F> {
        self.span_where(|deg| deg <= d)
    }

    /// `H^{≥d}`.
    pub fn geq<F: Field>(&self, d: i64) -> Matrix<F> {
        self.span_where(|deg| deg >= d)
    }

    /// `H^{d}`.
    pub fn degree<F: Field>(&self, d: i64) -> Matrix<F> {
        self.span_where(|deg| deg == d)
    }

    /// `deg - n` as a diagonal matrix.
    pub fn grading(&self) -> QMat {
        let mut h = QMat::zeros(self.dim(), self.dim());
        for i in 0..self.dim() {
            h.set(i, i, q(2 * self.slice_of(i) as i64 - self.n() as i64));
        }
        h
    }

    fn check_hard_lefschetz(&self) -> Result<()> {
        let n = self.n();
        for p in 0..=n / 2 {
            let k = n - 2 * p;
            if self.dims[p] != self.dims[n - p] {
                return Err(Error::HardLefschetz(format!(
                    "dim H^{} = {} but dim H^{} = {}",
                    2 * p,
                    self.dims[p],
                    2 * (n - p),
                    self.dims[n - p]
                )));
            }
            let block = self
                .raising
                .pow(k as u32)
                .select_columns(&self.slice(p).collect::<Vec<_>>());
            if block.rank() != self.dims[p] {
                return Err(Error::HardLefschetz(format!(
                    "𝔞^{k} is not injective on H^{}",
                    2 * p
                )));
            }
        }
        Ok(())
    }

    /// Basis of `PH^{2p} = Ker 𝔞^{k+1} ∩ H^{2p}`, `k = n - 2p`.
    pub fn primitive(&self, p: usize) -> QMat {
        let k = self.n() as i64 - 2 * p as i64;
        let incl = QMat::identity(self.dim()).select_columns(&self.slice(p).collect::<Vec<_>>());
        if k < 0 {
            return QMat::zeros(self.dim(), 0);
        }
        let kernel = self.raising.pow(k as u32 + 1).mul(&incl).nullspace();
        incl.mul(&kernel)
    }

    /// The pieces `𝔞ˡφ` of the Lefschetz decomposition: `(p, φ, l, 𝔞ˡφ)`.
    fn lefschetz_basis(&self) -> Vec<LefschetzVector> {
        let mut out = Vec::new();
        for p in 0..=self.n() / 2 {
            let k = self.n() - 2 * p;
            let prim = self.primitive(p);
            for c in 0..prim.cols() {
                let phi = prim.select_columns(&[c]);
                let mut v = phi.clone();
                for l in 0..=k {
                    out.push(LefschetzVector {
                        k: k as u32,
                        l: l as u32,
                        phi: phi.clone(),
                        vector: v.clone(),
                    });
                    v = self.raising.mul(&v);
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
struct LefschetzVector {
    k: u32,
    l: u32,
    phi: QMat,
    vector: QMat,
}

fn commutator(x: &QMat, y: &QMat) -> QMat {
    x.mul(y).sub(&y.mul(x))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Sl2Triple {
    pub raising: QMat,
    pub lowering: QMat,
    pub grading: QMat,
}

impl Sl2Triple {
    /// `([𝔞,𝔞†] - h, [h,𝔞] - 2𝔞, [h,𝔞†] + 2𝔞†)`.
    pub fn residuals(&self) -> [QMat; 3] {
        let (a, b, h) = (&self.raising, &self.lowering, &self.grading);
        [
            commutator(a, b).sub(h),
            commutator(h, a).sub(&a.scale(&q(2))),
            commutator(h, b).add(&b.scale(&q(2))),
        ]
    }

    pub fn holds(&self) -> bool {
        self.residuals().iter().all(Matrix::is_zero)
    }
}

/// Builds `𝔞†` from `𝔞†𝔞ˡφ = l(k+1-l)𝔞ˡ⁻¹φ` on primitive `φ ∈ PH^{n-k}`.
pub fn lefschetz_triple(v: &GradedSpace) -> Result<Sl2Triple> {
    let basis = v.lefschetz_basis();
    if basis.len() != v.dim() {
        return Err(Error::HardLefschetz(format!(
            "Lefschetz decomposition has {} vectors in dimension {}",
            basis.len(),
            v.dim()
        )));
    }
    let columns: Vec<Vec<ExactScalar>> = basis.iter().map(|b| b.vector.column(0)).collect();
    let images: Vec<Vec<ExactScalar>> = basis
        .iter()
        .map(|b| {
            if b.l == 0 {
                vec![q(0); v.dim()]
            } else {
                let c = q(b.l as i64 * (b.k as i64 + 1 - b.l as i64));
                v.raising.pow(b.l - 1).mul(&b.phi).scale(&c).column(0)
            }
        })
        .collect();
    let m = QMat::from_columns(v.dim(), &columns);
    let minv = m
        .inverse()
        .map_err(|_| Error::HardLefschetz("Lefschetz vectors are dependent".into()))?;
    let lowering = QMat::from_columns(v.dim(), &images).mul(&minv);
    let triple = Sl2Triple {
        raising: v.raising.clone(),
        lowering,
        grading: v.grading(),
    };
    if !triple.holds() {
        return Err(Error::HardLefschetz("commutation relations fail".into()));
    }
    Ok(triple)
}

/// Increasing filtration `W_k`, `k ∈ [lo, hi]`; below `lo` it is zero and
/// from `hi` on it is everything.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightFiltration {
    pub dim: usize,
    pub lo: i32,
    pub hi: i32,
    pub spaces: Vec<QMat>,
}

impl WeightFiltration {
    pub fn w(&self, k: i32) -> QMat {
        let dim = self.dim;
        if k < self.lo {
            QMat::zeros(dim, 0)
        } else if k >= self.hi {
            QMat::identity(dim)
        } else {
            self.spaces[(k - self.lo) as usize].clone()
        }
    }

    /// `N W_k ⊂ W_{k-2}` and `N^k : Gr_k ≅ Gr_{-k}` for `k ≥ 0`.
    pub fn satisfies_defining_conditions(&self, nil: &QMat) -> bool {
        let m = self.hi.max(-self.lo) + 1;
        for k in -m..=m {
            if !subspace::contains(&self.w(k - 2), &nil.mul(&self.w(k))) {
                return false;
            }
        }
        for k in 0..=m {
            let gr = |j: i32| subspace::dim(&self.w(j)) - subspace::dim(&self.w(j - 1));
            if gr(k) != gr(-k) {
                return false;
            }
            let image = subspace::sum(&nil.pow(k as u32).mul(&self.w(k)), &self.w(-k - 1));
            if subspace::dim(&image) != subspace::dim(&self.w(-k)) {
                return false;
            }
        }
        true
    }
}

/// `W_k = Σ_j Ker N^{j+1} ∩ Im N^{max(0, j-k)}`.
pub fn weight_filtration(nil: &QMat) -> Result<WeightFiltration> {
    let dim = nil.rows();
    if !nil.pow(dim as u32 + 1).is_zero() {
        return Err(Error::NotNilpotent);
    }
    let mut m = 0;
    while !nil.pow(m + 1).is_zero() {
        m += 1;
    }
    let m = m as i32;
    let powers: Vec<QMat> = (0..=m + 1).map(|e| nil.pow(e as u32)).collect();
    let kernels: Vec<QMat> = powers.iter().map(Matrix::nullspace).collect();
    let images: Vec<QMat> = powers.iter().map(Matrix::column_basis).collect();
    let spaces = (-m..m)
        .map(|k| {
            (0..=m).fold(QMat::zeros(dim, 0), |acc, j| {
                let e = (j - k).max(0);
                if e > m + 1 {
                    return acc;
                }
                let piece = subspace::intersection(&kernels[j as usize + 1], &images[e as usize]);
                subspace::sum(&acc, &piece)
            })
        })
        .collect();
    Ok(WeightFiltration {
        dim,
        lo: -m,
        hi: m,
        spaces,
    })
}

/// Whether `W(𝔞)_k = H^{≥n-k}` and `W(𝔞†)_k = H^{≤n+k}` for all `k`.
pub fn weight_filtrations_match_degrees(v: &GradedSpace, triple: &Sl2Triple) -> Result<bool> {
    let wa = weight_filtration(&triple.raising)?;
    let wb = weight_filtration(&triple.lowering)?;
    let n = v.n() as i64;
    let r = n as i32 + 2;
    Ok((-r..=r).all(|k| {
        subspace::equal(&wa.w(k), &v.geq::<ExactScalar>(n - k as i64))
            && subspace::equal(&wb.w(k), &v.leq::<ExactScalar>(n + k as i64))
    }))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LeadingTermCheck {
    /// `u ∈ 𝔞ʲ PH^{n-k-2j} ⊂ H^{n-k}`.
    pub k: i32,
    pub j: u32,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExpLemmaReport {
    pub intertwining: bool,
    /// `(k, e^{-𝔞}e^{𝔞†} H^{≥n-k} = H^{≤n+k})`.
    pub image: Vec<(i32, bool)>,
    pub leading: Vec<LeadingTermCheck>,
}

impl ExpLemmaReport {
    pub fn passes(&self) -> bool {
        self.intertwining
            && self.image.iter().all(|(_, ok)| *ok)
            && self.leading.iter().all(|c| c.holds)
    }
}

/// Exhaustive check of the image statement and the leading coefficient
/// `(-1)^{k+j} j!/(k+j)!` for every vector of the Lefschetz basis.
pub fn exp_lemma_check(v: &GradedSpace, triple: &Sl2Triple) -> ExpLemmaReport {
    let e = triple
        .raising
        .scale(&q(-1))
        .exp_nilpotent()
        .mul(&triple.lowering.exp_nilpotent());
    let intertwining = e.mul(&triple.raising) == triple.lowering.scale(&q(-1)).mul(&e);
    let n = v.n() as i64;
    let image = (-(n as i32)..=n as i32)
        .map(|k| {
            let src = v.geq::<ExactScalar>(n - k as i64);
            let img = e.mul(&src);
            let ok = img.rank() == src.cols()
                && subspace::equal(&img, &v.leq::<ExactScalar>(n + k as i64));
            (k, ok)
        })
        .collect();
    let leading = v
        .lefschetz_basis()
        .into_iter()
        .map(|b| {
            // u = 𝔞ʲφ with φ primitive of degree n - k', k' = b.k
            let j = b.l;
            let k = b.k as i32 - 2 * j as i32;
            let sign = if (k + j as i32).rem_euclid(2) == 0 { q(1) } else { q(-1) };
            let c = sign * factorial(j) / factorial((k + j as i32) as u32);
            let expected = triple.raising.pow((k + j as i32) as u32).mul(&b.phi).scale(&c);
            let diff = e.mul(&b.vector).sub(&expected);
            let top = n + k as i64;
            let holds = (0..v.dim())
                .filter(|&i| 2 * v.slice_of(i) as i64 >= top)
                .all(|i| diff.get(i, 0).is_zero());
            LeadingTermCheck { k, j, holds }
        })
        .collect();
    ExpLemmaReport {
        intertwining,
        image,
        leading,
    }
}

const ZETA_3: f64 = 1.202_056_903_159_594;
const ZETA_5: f64 = 1.036_927_755_143_37;
const ZETA_7: f64 = 1.008_349_277_381_922_8;

/// Degree-compatible real involutions `κ = D·f(𝔞)∘conj` with
/// `D = (-1)^{deg/2}` and `f(𝔞)f(-𝔞) = 1`; each anticommutes with `𝔞` and
/// has leading term `(-1)^p` on `H^{2p}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum KappaModel {
    /// `f = 1`.
    Diagonal,
    /// `f = exp(𝔞/2 - 𝔞³/3 + 2𝔞⁵/7)`, exact.
    Rational,
    /// `f = (Γ(1-𝔞)/Γ(1+𝔞))^{c₁}`, in floating point.
    Gamma { c1: f64 },
}

impl KappaModel {
    pub fn name(&self) -> String {
        match self {
            KappaModel::Diagonal => "diagonal".into(),
            KappaModel::Rational => "rational".into(),
            KappaModel::Gamma { c1 } => format!("gamma(c1={c1})"),
        }
    }

    fn sign(v: &GradedSpace) -> QMat {
        let mut d = QMat::zeros(v.dim(), v.dim());
        for i in 0..v.dim() {
            d.set(i, i, q(if v.slice_of(i).is_multiple_of(2) { 1 } else { -1 }));
        }
        d
    }

    pub fn exact_matrix(&self, v: &GradedSpace) -> Option<QMat> {
        let a = &v.raising;
        match self {
            KappaModel::Diagonal => Some(Self::sign(v)),
            KappaModel::Rational => {
                let odd = a
                    .scale(&ExactScalar::new(1, 2))
                    .sub(&a.pow(3).scale(&ExactScalar::new(1, 3)))
                    .add(&a.pow(5).scale(&ExactScalar::new(2, 7)));
                Some(Self::sign(v).mul(&odd.exp_nilpotent()))
            }
            KappaModel::Gamma { .. } => None,
        }
    }

    pub fn float_matrix(&self, v: &GradedSpace) -> Matrix<f64> {
        match self {
            KappaModel::Gamma { c1 } => {
                // log Γ(1-x) - log Γ(1+x) = 2γx + Σ_{k odd ≥ 3} 2ζ(k)xᵏ/k
                let a = v.raising.map(ExactScalar::to_f64);
                let mut odd = a.scale(&(2.0 * EULER_GAMMA));
                for (k, z) in [(3, ZETA_3), (5, ZETA_5), (7, ZETA_7)] {
                    odd = odd.add(&a.pow(k).scale(&(2.0 * z / k as f64)));
                }
                let s = Self::sign(v).map(ExactScalar::to_f64);
                s.mul(&odd.scale(c1).exp_nilpotent())
            }
            _ => self.exact_matrix(v).expect("exact model").map(ExactScalar::to_f64),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TransversalityPoint {
    pub t: f64,
    /// Target degree is `n - k`.
    pub k: i32,
    pub intersection_dim: usize,
    pub projection_rank: usize,
    pub expected: usize,
    /// `max_u |lift(u) - e^{𝔞†}u|` in the rescaled frame.
    pub lift_error: Option<f64>,
}

impl TransversalityPoint {
    pub fn full(&self) -> bool {
        self.intersection_dim == self.expected && self.projection_rank == self.expected
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TransversalityReport {
    pub model: String,
    pub points: Vec<TransversalityPoint>,
    /// Smallest requested `t` from which every larger requested `t` is full rank.
    pub t0: Option<f64>,
    /// The `t = ∞` map is an isomorphism with inverse `u ↦ e^{𝔞†}u` (exact).
    pub limit_inverse_holds: bool,
}

impl TransversalityReport {
    pub fn full_at_largest_t(&self) -> bool {
        let tmax = self.points.iter().map(|p| p.t).fold(f64::NEG_INFINITY, f64::max);
        self.points.iter().filter(|p| p.t == tmax).all(TransversalityPoint::full)
    }
}

/// Divides each column by its largest entry.
fn normalize_columns<F: Field>(m: &Matrix<F>) -> Matrix<F> {
    let mut out = m.clone();
    for c in 0..m.cols() {
        let pivot = (0..m.rows())
            .map(|r| m.get(r, c))
            .max_by(|a, b| a.to_f64().abs().total_cmp(&b.to_f64().abs()))
            .cloned();
        if let Some(p) = pivot.filter(|p| p.to_f64() != 0.0) {
            for r in 0..m.rows() {
                out.set(r, c, m.get(r, c).div(&p));
            }
        }
    }
    out
}

/// Rescaled form `H^{≤n-k} ∩ e^{𝔞} κ_t H^{≤n+k}`, `κ_t = (2t)^{-deg/2} κ (2t)^{deg/2}`;
/// the rescaling is an isomorphism commuting with the projection.
fn transversality_point<F: Field>(
    v: &GradedSpace,
    kappa: &Matrix<F>,
    lowering: &Matrix<F>,
    exp_a: &Matrix<F>,
    two_t: F,
    t: f64,
    k: i32,
) -> TransversalityPoint {
    let n = v.n() as i64;
    let dim = v.dim();
    let mut s = Matrix::<F>::identity(dim);
    let mut sinv = Matrix::<F>::identity(dim);
    for i in 0..dim {
        let mut w = F::one();
        for _ in 0..v.slice_of(i) {
            w = w.mul(&two_t);
        }
        sinv.set(i, i, F::one().div(&w));
        s.set(i, i, w);
    }
    let kappa_t = sinv.mul(kappa).mul(&s);
    let x = normalize_columns(&exp_a.mul(&kappa_t).mul(&v.leq::<F>(n + k as i64)));
    let inter = normalize_columns(&subspace::intersection(&v.leq::<F>(n - k as i64), &x));
    let target: Vec<usize> = v.slice(((n - k as i64) / 2) as usize).collect();
    let proj = inter.select_rows(&target);
    let rank = proj.rank();
    let expected = target.len();
    let lift_error = (rank == expected && inter.cols() == expected).then(|| {
        let mut worst: f64 = 0.0;
        for (c, &i) in target.iter().enumerate() {
            let mut u = vec![F::zero(); expected];
            u[c] = F::one();
            let Ok(coef) = proj.solve_unique(&u) else {
                return f64::INFINITY;
            };
            let lift = inter.mul(&Matrix::from_columns(inter.cols(), &[coef]));
            let unit = Matrix::<F>::identity(dim).select_columns(&[i]);
            let reference = lowering.exp_nilpotent().mul(&unit);
            worst = worst.max(lift.sub(&reference).max_abs());
        }
        worst
    });
    TransversalityPoint {
        t,
        k,
        intersection_dim: inter.cols(),
        projection_rank: rank,
        expected,
        lift_error,
    }
}

fn limit_inverse_holds(v: &GradedSpace, triple: &Sl2Triple) -> bool {
    let n = v.n() as i64;
    let ea = triple.raising.exp_nilpotent();
    let eb = triple.lowering.exp_nilpotent();
    (0..=v.n()).all(|p| {
        let k = n - 2 * p as i64;
        let inter = subspace::intersection(&v.leq::<ExactScalar>(n - k), &ea.mul(&v.leq(n + k)));
        let lifts = eb.mul(&v.degree::<ExactScalar>(n - k));
        // lifts lie in the intersection, project to the identity and span it
        let proj = lifts.select_rows(&v.slice(p).collect::<Vec<_>>());
        subspace::equal(&inter, &lifts) && proj == QMat::identity(v.dims[p])
    })
}

/// Runs the transversality map for every `k` with `n - k ∈ {0, 2, …, 2n}`
/// and every requested `t > 0`.
pub fn transversality_rank(
    v: &GradedSpace,
    model: KappaModel,
    t_values: &[f64],
) -> Result<TransversalityReport> {
    if let Some(t) = t_values.iter().find(|&&t| !(t > 0.0 && t.is_finite())) {
        return Err(Error::InvalidArgument(format!("t = {t} must be positive")));
    }
    let triple = lefschetz_triple(v)?;
    let n = v.n() as i32;
    let ks: Vec<i32> = (0..=n).map(|p| n - 2 * p).collect();
    let mut points = Vec::new();
    match model.exact_matrix(v) {
        Some(kappa) => {
            let ea = v.raising.exp_nilpotent();
            for &t in t_values {
                let two_t = ExactScalar::from_f64(2.0 * t)
                    .ok_or_else(|| Error::InvalidArgument(format!("t = {t}")))?;
                for &k in &ks {
                    points.push(transversality_point(
                        v, &kappa, &triple.lowering, &ea, two_t.clone(), t, k,
                    ));
                }
            }
        }
        None => {
            let kappa = model.float_matrix(v);
            let ea = v.raising.map(ExactScalar::to_f64).exp_nilpotent();
            let lowering = triple.lowering.map(ExactScalar::to_f64);
            for &t in t_values {
                for &k in &ks {
                    points.push(transversality_point(v, &kappa, &lowering, &ea, 2.0 * t, t, k));
                }
            }
        }
    }
    let mut ts: Vec<f64> = t_values.to_vec();
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    let full_at = |t: f64| points.iter().filter(|p| p.t == t).all(TransversalityPoint::full);
    let mut t0 = None;
    for &t in ts.iter().rev() {
        if full_at(t) {
            t0 = Some(t);
        } else {
            break;
        }
    }
    Ok(TransversalityReport {
        model: model.name(),
        points,
        t0,
        limit_inverse_holds: limit_inverse_holds(v, &triple),
    })
}

/// All checks on one space.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Sl2Report {
    pub dims: Vec<usize>,
    pub commutation: bool,
    pub annihilates_primitive: bool,
    pub weight_filtrations: bool,
    pub weight_conditions: bool,
    pub exp_lemma: ExpLemmaReport,
}

impl Sl2Report {
    pub fn passes(&self) -> bool {
        self.commutation
            && self.annihilates_primitive
            && self.weight_filtrations
            && self.weight_conditions
            && self.exp_lemma.passes()
    }
}

pub fn sl2_report(v: &GradedSpace) -> Result<Sl2Report> {
    let triple = lefschetz_triple(v)?;
    let annihilates_primitive =
        (0..=v.n() / 2).all(|p| triple.lowering.mul(&v.primitive(p)).is_zero());
    let wa = weight_filtration(&triple.raising)?;
    let wb = weight_filtration(&triple.lowering)?;
    Ok(Sl2Report {
        dims: v.dims.clone(),
        commutation: triple.holds(),
        annihilates_primitive,
        weight_filtrations: weight_filtrations_match_degrees(v, &triple)?,
        weight_conditions: wa.satisfies_defining_conditions(&triple.raising)
            && wb.satisfies_defining_conditions(&triple.lowering),
        exp_lemma: exp_lemma_check(v, &triple),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(dim: usize, i: usize) -> QMat {
        QMat::identity(dim).select_columns(&[i])
    }

    #[test]
    fn lowering_on_p1_and_p2() {
        let t1 = lefschetz_triple(&GradedSpace::projective_space(1)).unwrap();
        assert_eq!(t1.lowering.mul(&unit(2, 1)), unit(2, 0));
        let t2 = lefschetz_triple(&GradedSpace::projective_space(2)).unwrap();
        assert_eq!(t2.lowering.mul(&unit(3, 1)), unit(3, 0).scale(&q(2)));
        assert_eq!(t2.lowering.mul(&unit(3, 2)), unit(3, 1).scale(&q(2)));
    }

    #[test]
    fn commutator_on_p6_is_the_grading() {
        let v = GradedSpace::projective_space(6);
        let t = lefschetz_triple(&v).unwrap();
        assert_eq!(commutator(&t.raising, &t.lowering), v.grading());
        assert_eq!(*v.grading().get(0, 0), q(-6));
    }

    #[test]
    fn full_suite_on_test_family() {
        let mut spaces: Vec<GradedSpace> = (0..=6).map(GradedSpace::projective_space).collect();
        spaces.push(GradedSpace::p1_times_p1());
        spaces.push(GradedSpace::projective_space(1).tensor(&GradedSpace::projective_space(2)).unwrap());
        for v in spaces {
            let r = sl2_report(&v).unwrap();
            assert!(r.passes(), "{:?}: {r:?}", v.dims());
        }
    }

    #[test]
    fn p1_times_p1_shape() {
        let v = GradedSpace::p1_times_p1();
        assert_eq!(v.dims(), &[1, 2, 1]);
        assert_eq!(v.primitive(1).cols(), 1);
    }

    #[test]
    fn exp_lemma_examples() {
        let v = GradedSpace::projective_space(1);
        let t = lefschetz_triple(&v).unwrap();
        let e = t.raising.scale(&q(-1)).exp_nilpotent().mul(&t.lowering.exp_nilpotent());
        // e^{-𝔞}e^{𝔞†}1 = 1 - ω
        assert_eq!(e.mul(&unit(2, 0)), unit(2, 0).sub(&unit(2, 1)));
        let v = GradedSpace::projective_space(2);
        let t = lefschetz_triple(&v).unwrap();
        let e = t.raising.scale(&q(-1)).exp_nilpotent().mul(&t.lowering.exp_nilpotent());
        // e^{-𝔞}e^{𝔞†}ω = 2 - ω
        assert_eq!(e.mul(&unit(3, 1)), unit(3, 0).scale(&q(2)).sub(&unit(3, 1)));
    }

    #[test]
    fn rejects_bad_inputs() {
        let mut a = QMat::zeros(3, 3);
        a.set(1, 0, q(1));
        // ω² = 0 on a three-dimensional space breaks hard Lefschetz
        assert!(matches!(GradedSpace::new(vec![1, 1, 1], a), Err(Error::HardLefschetz(_))));
        let mut b = QMat::zeros(2, 2);
        b.set(0, 1, q(1));
        assert!(GradedSpace::new(vec![1, 1], b).is_err());
        let mut c = QMat::identity(2);
        c.set(0, 1, q(1));
        assert_eq!(weight_filtration(&c), Err(Error::NotNilpotent));
    }

    #[test]
    fn weight_filtration_examples() {
        let w = weight_filtration(&QMat::zeros(2, 2)).unwrap();
        assert_eq!(subspace::dim(&w.w(-1)), 0);
        assert_eq!(subspace::dim(&w.w(0)), 2);
        let block = GradedSpace::projective_space(2).raising().clone();
        let w = weight_filtration(&block).unwrap();
        let dims: Vec<usize> = (-3..=3).map(|k| subspace::dim(&w.w(k))).collect();
        assert_eq!(dims, vec![0, 1, 1, 2, 2, 3, 3]);
    }

    #[test]
    fn gamma_model_reproduces_p1_involution() {
        let v = GradedSpace::projective_space(1);
        let k = KappaModel::Gamma { c1: 2.0 }.float_matrix(&v);
        let m = crate::gamma::kappa_v_matrix().0;
        for i in 0..2 {
            for j in 0..2 {
                assert!((k.get(i, j) - m[i][j].re).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn models_are_anticommuting_involutions() {
        let v = GradedSpace::projective_space(4);
        for m in [KappaModel::Diagonal, KappaModel::Rational] {
            let k = m.exact_matrix(&v).unwrap();
            assert_eq!(k.mul(&k), QMat::identity(5));
            assert!(k.mul(v.raising()).add(&v.raising().mul(&k)).is_zero());
        }
        let k = KappaModel::Gamma { c1: 5.0 }.float_matrix(&v);
        let a = v.raising().map(ExactScalar::to_f64);
        assert!(k.mul(&k).sub(&Matrix::identity(5)).max_abs() < 1e-9);
        assert!(k.mul(&a).add(&a.mul(&k)).max_abs() < 1e-9);
    }

    #[test]
    fn transversality_reaches_full_rank() {
        let ts = [0.1, 1.0, 10.0, 100.0];
        let spaces = [
            (GradedSpace::projective_space(1), 2.0),
            (GradedSpace::projective_space(3), 4.0),
            (GradedSpace::p1_times_p1(), 2.0),
        ];
        for (v, c1) in spaces {
            for m in [KappaModel::Diagonal, KappaModel::Rational, KappaModel::Gamma { c1 }] {
                let r = transversality_rank(&v, m, &ts).unwrap();
                assert!(r.full_at_largest_t(), "{:?} {}", v.dims(), r.model);
                assert!(r.limit_inverse_holds);
            }
        }
    }

    #[test]
    fn lift_converges_like_one_over_t() {
        let v = GradedSpace::projective_space(3);
        let r = transversality_rank(&v, KappaModel::Rational, &[10.0, 100.0, 1000.0]).unwrap();
        for k in [1, -1] {
            let errs: Vec<f64> = r.points.iter().filter(|p| p.k == k).map(|p| p.lift_error.unwrap()).collect();
            assert!(errs[1] < errs[0] / 5.0 && errs[2] < errs[1] / 5.0, "k = {k}: {errs:?}");
        }
    }
}
