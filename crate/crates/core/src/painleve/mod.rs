//! The scalar tt* equation for `h` as a PDE in `s = qq̄`, its exact series
//! solution and the radial Painlevé III numerics.

pub mod dopri;
pub mod piii;
pub mod series;

use serde::Serialize;

pub use piii::{
    asymptotic_h, integrate_outward, ode_h, total_curvature, CurvatureIntegral, CurvatureReport,
    OdeConfig, OdeSample, OdeSolution, PainleveIII, SeriesEval,
};
pub use series::{oracle_fn, oracle_steps, pde_residual, OracleStep, SSeries};

use crate::birkhoff::Frame;
use crate::error::Result;
use crate::exact::{APoly, LoopMatrix, ZLoop};
use crate::ttstar::{metric_from_frame, metric_h};

/// `F_n` from the Birkhoff pipeline against `F_n` from the PDE recursion.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrossCheck {
    pub order: u32,
    pub birkhoff: Vec<APoly>,
    pub oracle: Vec<APoly>,
    pub mismatches: Vec<u32>,
    /// Whether a frame with a perturbed `B̃` is caught (error or mismatch).
    pub corrupted_detected: bool,
}

impl CrossCheck {
    pub fn passes(&self) -> bool {
        self.mismatches.is_empty() && self.corrupted_detected
    }
}

pub fn cross_check(order: u32) -> Result<CrossCheck> {
    let birkhoff = metric_h(order)?.f;
    let oracle = oracle_fn(order)?;
    let mismatches = compare(&birkhoff, &oracle);
    Ok(CrossCheck {
        order,
        corrupted_detected: corrupted_detected(order, &oracle)?,
        birkhoff,
        oracle,
        mismatches,
    })
}

fn compare(x: &[APoly], y: &[APoly]) -> Vec<u32> {
    (0..x.len().max(y.len()))
        .filter(|&n| x.get(n) != y.get(n))
        .map(|n| n as u32)
        .collect()
}

/// Perturbs the first column of `B̃` by `z·q̄` and reruns the metric extraction.
fn corrupted_detected(order: u32, oracle: &[APoly]) -> Result<bool> {
    let mut frame = Frame::compute(2 * order.max(1))?;
    let n = frame.s.truncation();
    let mut e = frame.factors.btilde.get(1, 0).clone();
    e.add_term(0, 1, &ZLoop::z());
    frame.factors.btilde.set(1, 0, e);
    frame.b_btilde = LoopMatrix::constant(&crate::birkhoff::ConstantFactors::default().b, n)
        .checked_mul(&frame.factors.btilde)?;
    frame.phi = frame.q.q.checked_mul(&frame.b_btilde)?;
    Ok(match metric_from_frame(&frame) {
        Err(_) => true,
        Ok(m) => !compare(&m.f, oracle).is_empty(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn birkhoff_and_pde_agree() {
        let c = cross_check(4).unwrap();
        assert!(c.mismatches.is_empty());
        assert!(c.corrupted_detected);
        assert!(c.passes());
    }

    #[test]
    fn corruption_caught_at_low_order() {
        for order in 0..=3 {
            assert!(cross_check(order).unwrap().passes(), "order {order}");
        }
    }
}
