//! Radial Painlevé III: `u'' + u'/x = 4 sinh u` with `x = 4|q|^{1/2}` and
//! `h = e^{u/2}|q|^{-1/2}`.
//!
//! The wanted solution decays like `K₀(2x)` at infinity, while a generic
//! perturbation grows like `I₀(2x)`, so shooting outward from the series
//! loses every digit by `x ≈ 18`. Instead the solution is started on the
//! decaying mode at `x_far`, integrated inward (the stable direction) and
//! its amplitude is fixed by matching `u` against the exact series at
//! `x_match`. The series slope at `x_match` is not imposed and serves as a
//! consistency check.

use serde::Serialize;

use super::dopri::{integrate, StepStats, Tolerances};
use super::series::oracle_fn;
use crate::error::{Error, Result};
use crate::exact::APoly;
use crate::gamma::EULER_GAMMA;

pub fn x_of_q(q_abs: f64) -> f64 {
    4.0 * q_abs.sqrt()
}

pub fn q_of_x(x: f64) -> f64 {
    x * x / 16.0
}

/// `a = -log(qq̄) - 4γ` at real `|q|`.
pub fn a_of_q(q_abs: f64) -> f64 {
    -2.0 * q_abs.ln() - 4.0 * EULER_GAMMA
}

pub fn h_of_u(u: f64, q_abs: f64) -> f64 {
    (0.5 * u).exp() / q_abs.sqrt()
}

/// `|q|^{-1/2}(1 - e^{-8|q|^{1/2}} / (2√π |q|^{1/4}))`.
pub fn asymptotic_h(q_abs: f64) -> f64 {
    let corr = (-8.0 * q_abs.sqrt()).exp() / (2.0 * std::f64::consts::PI.sqrt() * q_abs.powf(0.25));
    (1.0 - corr) / q_abs.sqrt()
}

/// Floating-point evaluation of `h = Σ F_n(a) |q|^{2n}`.
#[derive(Clone, Debug)]
pub struct SeriesEval {
    f: Vec<APoly>,
    df: Vec<APoly>,
}

impl SeriesEval {
    pub fn new(f: Vec<APoly>) -> Self {
        let df = f.iter().map(APoly::derivative).collect();
        SeriesEval { f, df }
    }

    pub fn from_oracle(order: u32) -> Result<Self> {
        Ok(SeriesEval::new(oracle_fn(order)?))
    }

    pub fn order(&self) -> usize {
        self.f.len() - 1
    }

    /// `h` at given `a` and `s = |q|²`.
    pub fn h_at(&self, a: f64, s: f64) -> f64 {
        self.f.iter().rev().fold(0.0, |acc, p| acc * s + p.eval_f64(a))
    }

    pub fn h(&self, q_abs: f64) -> f64 {
        self.h_at(a_of_q(q_abs), q_abs * q_abs)
    }

    /// `dh/d|q|`.
    pub fn dh(&self, q_abs: f64) -> f64 {
        let a = a_of_q(q_abs);
        let s = q_abs * q_abs;
        let mut total = 0.0;
        let mut sn = 1.0;
        for (n, (p, dp)) in self.f.iter().zip(&self.df).enumerate() {
            total += -2.0 / q_abs * dp.eval_f64(a) * sn;
            if n > 0 {
                total += 2.0 * n as f64 * p.eval_f64(a) * sn / q_abs;
            }
            sn *= s;
        }
        total
    }

    /// `(u, du/dx)` at `x`.
    pub fn u_state(&self, x: f64) -> [f64; 2] {
        let q = q_of_x(x);
        let h = self.h(q);
        let u = 2.0 * h.ln() + q.ln();
        let du = (2.0 * self.dh(q) / h + 1.0 / q) * x / 8.0;
        [u, du]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OdeConfig {
    pub match_q: f64,
    pub series_order: u32,
    pub x_far: f64,
    pub rtol: f64,
}

impl Default for OdeConfig {
    fn default() -> Self {
        OdeConfig {
            match_q: 0.05,
            series_order: 10,
            x_far: 40.0,
            rtol: 1e-12,
        }
    }
}

impl OdeConfig {
    fn tol(&self) -> Tolerances {
        Tolerances {
            rtol: self.rtol,
            atol: 1e-300,
        }
    }

    pub fn x_match(&self) -> f64 {
        x_of_q(self.match_q)
    }

    pub fn max_q(&self) -> f64 {
        q_of_x(self.x_far)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OdeSample {
    pub q_abs: f64,
    pub x: f64,
    pub u: f64,
    pub du: f64,
    pub h: f64,
}

/// Samples sorted by increasing `|q|`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OdeSolution {
    pub samples: Vec<OdeSample>,
}

/// `K₁(z)/K₀(z)` from the large-argument expansions.
fn bessel_k_ratio(z: f64) -> f64 {
    let series = |nu: f64| {
        let mu = 4.0 * nu * nu;
        let (mut term, mut sum) = (1.0, 1.0);
        for k in 1..12 {
            let j = (2 * k - 1) as f64;
            term *= (mu - j * j) / (k as f64 * 8.0 * z);
            sum += term;
        }
        sum
    };
    series(1.0) / series(0.0)
}

fn rhs(x: f64, y: &[f64; 3]) -> [f64; 3] {
    let s = y[0].sinh();
    [y[1], 4.0 * s - y[1] / x, x * s]
}

fn diverged(y: &[f64; 3]) -> bool {
    !(y[0].is_finite() && y[1].is_finite()) || y[0] < -60.0 || y[0] > 60.0
}

/// The decaying solution, identified by the amplitude `u(x_far) = -e^σ`.
#[derive(Clone, Debug, Serialize)]
pub struct PainleveIII {
    pub config: OdeConfig,
    #[serde(skip)]
    series: SeriesEval,
    pub sigma: f64,
    pub shooting_iterations: usize,
    /// ODE slope minus series slope at `x_match`.
    pub slope_mismatch: f64,
}

impl PainleveIII {
    fn far_state(&self, sigma: f64) -> [f64; 3] {
        far_state(&self.config, sigma)
    }

    pub fn solve(config: OdeConfig) -> Result<Self> {
        if !(config.match_q > 0.0 && config.x_far > config.x_match()) {
            return Err(Error::InvalidArgument(format!("{config:?}")));
        }
        let series = SeriesEval::from_oracle(config.series_order)?;
        let xm = config.x_match();
        let target = series.u_state(xm);
        // u at x_match, or -∞ when the inward trajectory blows up
        let shoot = |sigma: f64| -> Result<[f64; 3]> {
            let y0 = far_state(&config, sigma);
            match integrate(rhs, config.x_far, y0, &[xm], config.tol(), diverged) {
                Ok((ys, _)) => Ok(ys[0]),
                Err(Error::Divergence { .. }) | Err(Error::StepSizeUnderflow { .. }) => {
                    Ok([f64::NEG_INFINITY, f64::NAN, f64::NAN])
                }
                Err(e) => Err(e),
            }
        };
        let phi = |sigma: f64| -> Result<f64> { Ok(shoot(sigma)?[0] - target[0]) };
        let mut lo = -2.0 * config.x_far;
        let mut hi = lo;
        let mut iterations = 0;
        // φ decreases in σ
        let (mut flo, mut fhi) = (phi(lo)?, phi(hi)?);
        while flo <= 0.0 {
            lo -= 2.0;
            flo = phi(lo)?;
            iterations += 1;
            if iterations > 200 {
                return Err(Error::NonConvergent("no lower shooting bracket".into()));
            }
        }
        while fhi > 0.0 {
            hi += 2.0;
            fhi = phi(hi)?;
            iterations += 1;
            if iterations > 200 {
                return Err(Error::NonConvergent("no upper shooting bracket".into()));
            }
        }
        while hi - lo > 1e-13 * hi.abs().max(1.0) {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if phi(mid)? > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            iterations += 1;
        }
        let sigma = 0.5 * (lo + hi);
        let end = shoot(sigma)?;
        if !end[0].is_finite() {
            return Err(Error::NonConvergent("shooting landed on a divergent trajectory".into()));
        }
        Ok(PainleveIII {
            config,
            series,
            sigma,
            shooting_iterations: iterations,
            slope_mismatch: end[1] - target[1],
        })
    }

    pub fn series(&self) -> &SeriesEval {
        &self.series
    }

    fn run(&self, xs_desc: &[f64]) -> Result<(Vec<[f64; 3]>, StepStats)> {
        integrate(
            rhs,
            self.config.x_far,
            self.far_state(self.sigma),
            xs_desc,
            self.config.tol(),
            diverged,
        )
    }

    /// Samples at the requested `|q|` (any order, `0 < |q| ≤ max_q`).
    pub fn sample(&self, q_abs: &[f64]) -> Result<OdeSolution> {
        let max_q = self.config.max_q();
        if let Some(bad) = q_abs.iter().find(|&&q| !(q > 0.0 && q <= max_q)) {
            return Err(Error::InvalidArgument(format!(
                "|q| = {bad} outside (0, {max_q}]"
            )));
        }
        let mut qs = q_abs.to_vec();
        qs.sort_by(|a, b| b.total_cmp(a));
        qs.dedup();
        let xs: Vec<f64> = qs.iter().map(|&q| x_of_q(q)).collect();
        let (ys, _) = self.run(&xs)?;
        let mut samples: Vec<OdeSample> = qs
            .iter()
            .zip(xs)
            .zip(ys)
            .map(|((&q, x), y)| OdeSample {
                q_abs: q,
                x,
                u: y[0],
                du: y[1],
                h: h_of_u(y[0], q),
            })
            .collect();
        samples.reverse();
        Ok(OdeSolution { samples })
    }

    pub fn h(&self, q_abs: f64) -> Result<f64> {
        Ok(self.sample(&[q_abs])?.samples[0].h)
    }

    /// `∫K dA` over the `q`-plane for `K = -(2/h)(1 - qq̄h⁴)` and
    /// `dA = h⁻¹ dx dy`, `t = x + iy = log q`, `y ∈ [0, 2π)`.
    ///
    /// In the ODE variable the integrand is `π x sinh u dx`. The piece
    /// `x ≤ x_match` is taken from the series in the variable `1/a`, where
    /// the integrand is smooth up to `|q| = 0`.
    pub fn total_curvature(&self) -> Result<CurvatureIntegral> {
        let xm = self.config.x_match();
        let (ys, _) = self.run(&[xm])?;
        let ode_part = -std::f64::consts::PI * ys[0][2];
        let y_far = self.far_state(self.sigma);
        let far_tail = std::f64::consts::PI * y_far[0] * self.config.x_far / 2.0;
        let small_tail = self.small_tail()?;
        Ok(CurvatureIntegral {
            total: ode_part + small_tail + far_tail,
            ode_part,
            small_tail,
            far_tail,
        })
    }

    fn small_tail(&self) -> Result<f64> {
        let t1 = 1.0 / a_of_q(self.config.match_q);
        let series = &self.series;
        let g = move |t: f64, _y: &[f64; 1]| {
            if t <= 0.0 {
                return [1.0];
            }
            let a = 1.0 / t;
            let q = (-(a + 4.0 * EULER_GAMMA) / 2.0).exp();
            let s = q * q;
            let h = series.h_at(a, s);
            [(1.0 - s * h.powi(4)) / (h * h * t * t)]
        };
        let tol = Tolerances {
            rtol: self.config.rtol,
            atol: 1e-300,
        };
        let (ys, _) = integrate(g, 0.0, [0.0], &[t1], tol, |y| !y[0].is_finite())?;
        Ok(-2.0 * std::f64::consts::PI * ys[0][0])
    }
}

fn far_state(config: &OdeConfig, sigma: f64) -> [f64; 3] {
    let u = -sigma.exp();
    [u, -2.0 * bessel_k_ratio(2.0 * config.x_far) * u, 0.0]
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CurvatureIntegral {
    pub total: f64,
    pub ode_part: f64,
    pub small_tail: f64,
    pub far_tail: f64,
}

/// Total curvature at two tolerances; fails if they disagree beyond `agree`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CurvatureReport {
    pub integral: CurvatureIntegral,
    pub halved_tolerance_total: f64,
}

pub fn total_curvature(config: OdeConfig, agree: f64) -> Result<CurvatureReport> {
    let integral = PainleveIII::solve(config)?.total_curvature()?;
    let halved = PainleveIII::solve(OdeConfig {
        rtol: config.rtol / 2.0,
        ..config
    })?
    .total_curvature()?
    .total;
    if !integral.total.is_finite() || (integral.total - halved).abs() > agree {
        return Err(Error::NonConvergent(format!(
            "total curvature {} vs {} at halved tolerance",
            integral.total, halved
        )));
    }
    Ok(CurvatureReport {
        integral,
        halved_tolerance_total: halved,
    })
}

/// `h` at one point with the default configuration.
pub fn ode_h(q_abs: f64) -> Result<f64> {
    PainleveIII::solve(OdeConfig::default())?.h(q_abs)
}

/// Naive outward integration from the series at `x_match`. Accurate only
/// while the growing mode stays below the working precision.
pub fn integrate_outward(config: OdeConfig, q_abs: &[f64]) -> Result<OdeSolution> {
    let series = SeriesEval::from_oracle(config.series_order)?;
    let xm = config.x_match();
    let [u, du] = series.u_state(xm);
    let mut qs = q_abs.to_vec();
    qs.sort_by(f64::total_cmp);
    if qs.first().is_some_and(|&q| q < config.match_q) {
        return Err(Error::InvalidArgument("outward targets must lie beyond match_q".into()));
    }
    let xs: Vec<f64> = qs.iter().map(|&q| x_of_q(q)).collect();
    let blowup = |y: &[f64; 3]| diverged(y) || y[0] > 0.0;
    let (ys, _) = integrate(rhs, xm, [u, du, 0.0], &xs, config.tol(), blowup)?;
    let samples = qs
        .iter()
        .zip(xs)
        .zip(ys)
        .map(|((&q, x), y)| OdeSample {
            q_abs: q,
            x,
            u: y[0],
            du: y[1],
            h: h_of_u(y[0], q),
        })
        .collect();
    Ok(OdeSolution { samples })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solver() -> PainleveIII {
        PainleveIII::solve(OdeConfig::default()).unwrap()
    }

    #[test]
    fn bessel_ratio_tends_to_one() {
        let z = 80.0;
        assert!((bessel_k_ratio(z) - (1.0 + 0.5 / z - 0.125 / (z * z))).abs() < 1e-6);
    }

    #[test]
    fn series_derivative_matches_difference_quotient() {
        let s = SeriesEval::from_oracle(6).unwrap();
        let q = 0.03;
        let eps = 1e-6;
        let fd = (s.h(q + eps) - s.h(q - eps)) / (2.0 * eps);
        assert!((fd - s.dh(q)).abs() < 1e-6 * s.dh(q).abs());
    }

    #[test]
    fn matches_series_near_zero() {
        let p = solver();
        assert!(p.slope_mismatch.abs() < 1e-8, "{}", p.slope_mismatch);
        for q in [0.001, 0.01, 0.03, 0.05] {
            let ode = p.h(q).unwrap();
            let ser = p.series().h(q);
            assert!(((ode - ser) / ser).abs() < 1e-8, "|q| = {q}");
        }
    }

    #[test]
    fn matches_asymptotics_at_large_q() {
        let p = solver();
        for q in [4.0, 9.0, 25.0] {
            let ode = p.h(q).unwrap();
            assert!(((ode - asymptotic_h(q)) / ode).abs() < 1e-6, "|q| = {q}");
        }
    }

    #[test]
    fn outward_shooting_diverges_far_out() {
        let c = OdeConfig::default();
        let near = integrate_outward(c, &[0.5]).unwrap();
        let p = solver();
        assert!((near.samples[0].h - p.h(0.5).unwrap()).abs() < 1e-6);
        assert!(integrate_outward(c, &[25.0]).is_err());
    }

    #[test]
    fn rejects_out_of_range_points() {
        assert!(matches!(solver().h(0.0), Err(Error::InvalidArgument(_))));
    }
}
