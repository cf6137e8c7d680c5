//! Exact particle creation in a single mode with a time-dependent frequency.
//!
//! Integrates `x'' + (W^2 + DeltaOmega2(t)) x = 0` from the in-solution
//! `x = exp(-i W t)` before the window and decomposes the result after it as
//! `alpha exp(-i W t) + beta exp(+i W t)`. The created number is `|beta|^2`.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::ode::{integrate, Tolerances};
use crate::trajectory::Trajectory;

/// Largest tolerated `| |alpha|^2 - |beta|^2 - 1 |`.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScatteringResult {
    pub omega0: f64,
    pub alpha_sq: f64,
    pub beta_sq: f64,
    /// `|beta|^2`.
    pub n_exact: f64,
    /// Largest relative drift of the Wronskian `x x'* - x* x'` along the run.
    pub wronskian_drift: f64,
    pub normalization_residual: f64,
    pub steps: usize,
}

/// Scatters the in-solution of frequency `omega0` through `delta_omega_sq`
/// on `[t0, t1]`.
pub fn scatter<F>(delta_omega_sq: F, omega0: f64, t0: f64, t1: f64) -> Result<ScatteringResult>
where
    F: Fn(f64) -> f64,
{
    if !(omega0 > 0.0) {
        return Err(Error::Domain(format!("rest frequency must be positive, got {omega0}")));
    }
    if !(t1 > t0) {
        return Err(Error::Domain("scattering window must have positive length".into()));
    }
    let w2 = omega0 * omega0;
    let x0 = Complex64::from_polar(1.0, -omega0 * t0);
    let v0 = Complex64::new(0.0, -omega0) * x0;
    let y0 = [x0.re, x0.im, v0.re, v0.im];
    let wronskian = |y: &[f64]| {
        let x = Complex64::new(y[0], y[1]);
        let v = Complex64::new(y[2], y[3]);
        x * v.conj() - x.conj() * v
    };
    let w_start = wronskian(&y0);
    let mut drift: f64 = 0.0;
    let tol = Tolerances {
        rtol: 1e-12,
        atol: 1e-14,
        max_step: 0.05 * 2.0 * PI / omega0,
        ..Tolerances::default()
    };
    let (y, stats) = integrate(
        |t, y, dy| {
            let k = w2 + delta_omega_sq(t);
            dy[0] = y[2];
            dy[1] = y[3];
            dy[2] = -k * y[0];
            dy[3] = -k * y[1];
        },
        t0,
        t1,
        &y0,
        tol,
        |_, y| {
            drift = drift.max((wronskian(y) / w_start - 1.0).norm());
        },
    )?;
    let x = Complex64::new(y[0], y[1]);
    let v = Complex64::new(y[2], y[3]);
    let i_v_over_w = Complex64::new(0.0, 1.0) * v / omega0;
    let alpha = Complex64::from_polar(1.0, omega0 * t1) * (x + i_v_over_w) * 0.5;
    let beta = Complex64::from_polar(1.0, -omega0 * t1) * (x - i_v_over_w) * 0.5;
    let (alpha_sq, beta_sq) = (alpha.norm_sqr(), beta.norm_sqr());
    let residual = alpha_sq - beta_sq - 1.0;
    if residual.abs() > NORMALIZATION_TOLERANCE {
        return Err(Error::Normalization { residual });
    }
    Ok(ScatteringResult {
        omega0,
        alpha_sq,
        beta_sq,
        n_exact: beta_sq,
        wronskian_drift: drift,
        normalization_residual: residual,
        steps: stats.accepted,
    })
}

/// Exact squeezing-only count of longitudinal mode `n` with rest frequency
/// `omega0` along `traj`.
pub fn scattering_n(traj: &Trajectory, n: u32, omega0: f64) -> Result<ScatteringResult> {
    scatter(
        |t| traj.delta_omega_sq_at(n, t).expect("integrator stays inside the window"),
        omega0,
        0.0,
        traj.duration(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_mode_is_not_scattered() {
        let r = scatter(|_| 0.0, 1.7, 0.0, 20.0).unwrap();
        assert!(r.beta_sq < 1e-20);
        assert!((r.alpha_sq - 1.0).abs() < 1e-9);
        assert!(r.wronskian_drift < 1e-9);
    }

    #[test]
    fn sudden_step_matches_closed_form() {
        // frequency W1 on [0, tau]: |beta|^2 = ((W1^2 - W0^2) / (2 W0 W1))^2 sin^2(W1 tau)
        let (w0, w1, tau) = (1.0f64, 1.5f64, 2.3f64);
        let r = scatter(|t| if t < tau { w1 * w1 - w0 * w0 } else { 0.0 }, w0, 0.0, tau).unwrap();
        let expect = ((w1 * w1 - w0 * w0) / (2.0 * w0 * w1)).powi(2) * (w1 * tau).sin().powi(2);
        assert!((r.beta_sq - expect).abs() < 1e-9, "{} vs {}", r.beta_sq, expect);
    }
}
