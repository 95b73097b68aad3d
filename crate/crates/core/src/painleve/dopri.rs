//! Dormand–Prince 5(4) with adaptive step size and exact landing on
//! requested output points. Integration may run in either direction.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            rtol: 1e-12,
            atol: 1e-300,
        }
    }
}

const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A2: [f64; 1] = [1.0 / 5.0];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0];
const A6: [f64; 5] = [
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
];
const B: [f64; 6] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

fn combine<const N: usize>(y: &[f64; N], h: f64, ks: &[[f64; N]], w: &[f64]) -> [f64; N] {
    let mut out = *y;
    for (k, &wi) in ks.iter().zip(w) {
        if wi != 0.0 {
            for i in 0..N {
                out[i] += h * wi * k[i];
            }
        }
    }
    out
}

/// Counts of accepted and rejected steps.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
}

/// Integrates `y' = f(x, y)` from `(x0, y0)` through each of `targets`
/// (monotone in the direction of integration) and returns the state at each.
/// `blowup` flags a state as divergent; the integration stops with
/// [`Error::Divergence`] at the first such state.
pub fn integrate<const N: usize>(
    f: impl Fn(f64, &[f64; N]) -> [f64; N],
    x0: f64,
    y0: [f64; N],
    targets: &[f64],
    tol: Tolerances,
    blowup: impl Fn(&[f64; N]) -> bool,
) -> Result<(Vec<[f64; N]>, StepStats)> {
    let mut out = Vec::with_capacity(targets.len());
    let mut stats = StepStats::default();
    let (mut x, mut y) = (x0, y0);
    let Some(&last) = targets.last() else {
        return Ok((out, stats));
    };
    let dir = if last >= x0 { 1.0 } else { -1.0 };
    let mut h = dir * (1e-3 * (last - x0).abs()).max(1e-8);
    let mut k1 = f(x, &y);
    for &t in targets {
        if (t - x) * dir < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "output point {t} lies behind the integrator at {x}"
            )));
        }
        while (t - x) * dir > 0.0 {
            let landing = (x + h - t) * dir >= 0.0;
            let hs = if landing { t - x } else { h };
            if hs.abs() < 1e-14 * x.abs().max(1.0) {
                return Err(Error::StepSizeUnderflow { x });
            }
            let k2 = f(x + C[0] * hs, &combine(&y, hs, &[k1], &A2));
            let k3 = f(x + C[1] * hs, &combine(&y, hs, &[k1, k2], &A3));
            let k4 = f(x + C[2] * hs, &combine(&y, hs, &[k1, k2, k3], &A4));
            let k5 = f(x + C[3] * hs, &combine(&y, hs, &[k1, k2, k3, k4], &A5));
            let k6 = f(x + C[4] * hs, &combine(&y, hs, &[k1, k2, k3, k4, k5], &A6));
            let ynew = combine(&y, hs, &[k1, k2, k3, k4, k5, k6], &B);
            let k7 = f(x + hs, &ynew);
            let ks = [k1, k2, k3, k4, k5, k6, k7];
            let mut err: f64 = 0.0;
            for i in 0..N {
                let e: f64 = ks.iter().zip(E).map(|(k, w)| w * k[i]).sum::<f64>() * hs;
                let sc = tol.atol + tol.rtol * y[i].abs().max(ynew[i].abs());
                err = err.max(e.abs() / sc);
            }
            if !err.is_finite() {
                stats.rejected += 1;
                h = hs * 0.2;
                continue;
            }
            let factor = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            if err <= 1.0 {
                stats.accepted += 1;
                x = if landing { t } else { x + hs };
                y = ynew;
                k1 = k7;
                if blowup(&y) {
                    return Err(Error::Divergence { x });
                }
                if !landing || factor > 1.0 {
                    h = hs * factor;
                }
            } else {
                stats.rejected += 1;
                h = hs * factor.min(1.0);
            }
        }
        out.push(y);
    }
    Ok((out, stats))
}
