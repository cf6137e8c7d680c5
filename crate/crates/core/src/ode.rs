//! Adaptive Dormand–Prince 5(4) integration of `y' = f(t, y)` for real state vectors.
//!
//! Complex systems are integrated as interleaved `(re, im)` pairs.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
    /// Upper bound on the step; keeps the controller from stepping over
    /// short-lived features after long quiet stretches.
    pub max_step: f64,
    pub max_steps: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { rtol: 1e-11, atol: 1e-13, max_step: f64::INFINITY, max_steps: 50_000_000 }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Stats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;

const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;

// difference between the 5th- and 4th-order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Integrates from `t0` to `t1`, calling `observe(t, y)` after every accepted step.
pub fn integrate<F, O>(
    mut f: F,
    t0: f64,
    t1: f64,
    y0: &[f64],
    tol: Tolerances,
    mut observe: O,
) -> Result<(Vec<f64>, Stats)>
where
    F: FnMut(f64, &[f64], &mut [f64]),
    O: FnMut(f64, &[f64]),
{
    let n = y0.len();
    let mut y = y0.to_vec();
    let mut stats = Stats::default();
    if t1 == t0 {
        return Ok((y, stats));
    }
    if t1 < t0 {
        return Err(Error::Integrator("backward integration is not supported".into()));
    }
    let mut k: Vec<Vec<f64>> = vec![vec![0.0; n]; 7];
    let mut tmp = vec![0.0; n];
    let mut y_new = vec![0.0; n];

    let mut t = t0;
    f(t, &y, &mut k[0]);
    stats.evaluations += 1;
    let span = t1 - t0;
    let mut h = initial_step(&y, &k[0], tol, span).min(tol.max_step);

    while t < t1 {
        if stats.accepted + stats.rejected >= tol.max_steps {
            return Err(Error::Integrator(format!("step budget of {} exhausted at t = {t}", tol.max_steps)));
        }
        let last = t + h >= t1;
        if last {
            h = t1 - t;
        }
        stage(&y, &k, h, &[A21], &mut tmp);
        f(t + C2 * h, &tmp, &mut k[1]);
        stage(&y, &k, h, &[A31, A32], &mut tmp);
        f(t + C3 * h, &tmp, &mut k[2]);
        stage(&y, &k, h, &[A41, A42, A43], &mut tmp);
        f(t + C4 * h, &tmp, &mut k[3]);
        stage(&y, &k, h, &[A51, A52, A53, A54], &mut tmp);
        f(t + C5 * h, &tmp, &mut k[4]);
        stage(&y, &k, h, &[A61, A62, A63, A64, A65], &mut tmp);
        f(t + h, &tmp, &mut k[5]);
        for i in 0..n {
            y_new[i] = y[i] + h * (B1 * k[0][i] + B3 * k[2][i] + B4 * k[3][i] + B5 * k[4][i] + B6 * k[5][i]);
        }
        f(t + h, &y_new, &mut k[6]);
        stats.evaluations += 6;

        let mut err = 0.0;
        for i in 0..n {
            let e = h
                * (E1 * k[0][i] + E3 * k[2][i] + E4 * k[3][i] + E5 * k[4][i] + E6 * k[5][i] + E7 * k[6][i]);
            let sc = tol.atol + tol.rtol * y[i].abs().max(y_new[i].abs());
            err += (e / sc) * (e / sc);
        }
        let err = (err / n as f64).sqrt();
        if !err.is_finite() {
            return Err(Error::Integrator(format!("non-finite error estimate at t = {t}")));
        }

        if err <= 1.0 {
            t = if last { t1 } else { t + h };
            std::mem::swap(&mut y, &mut y_new);
            k.swap(0, 6);
            stats.accepted += 1;
            observe(t, &y);
            let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            h = (h * factor).min(tol.max_step);
        } else {
            stats.rejected += 1;
            h *= (0.9 * err.powf(-0.2)).max(0.1);
            if h < 1e-14 * span {
                return Err(Error::Integrator(format!("step size underflow at t = {t}")));
            }
        }
    }
    Ok((y, stats))
}

fn stage(y: &[f64], k: &[Vec<f64>], h: f64, a: &[f64], out: &mut [f64]) {
    for i in 0..y.len() {
        let mut s = 0.0;
        for (j, aj) in a.iter().enumerate() {
            s += aj * k[j][i];
        }
        out[i] = y[i] + h * s;
    }
}

fn initial_step(y: &[f64], dy: &[f64], tol: Tolerances, span: f64) -> f64 {
    let mut d0 = 0.0;
    let mut d1 = 0.0;
    for i in 0..y.len() {
        let sc = tol.atol + tol.rtol * y[i].abs();
        d0 += (y[i] / sc).powi(2);
        d1 += (dy[i] / sc).powi(2);
    }
    let h = if d0 < 1e-10 || d1 < 1e-10 { 1e-6 } else { 0.01 * (d0 / d1).sqrt() };
    h.min(span).max(1e-12 * span)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator_phase() {
        let w = 3.0;
        let (y, stats) = integrate(
            |_, y, dy| {
                dy[0] = y[1];
                dy[1] = -w * w * y[0];
            },
            0.0,
            10.0,
            &[1.0, 0.0],
            Tolerances::default(),
            |_, _| {},
        )
        .unwrap();
        assert!((y[0] - (w * 10.0).cos()).abs() < 1e-9);
        assert!((y[1] + w * (w * 10.0).sin()).abs() < 1e-8);
        assert!(stats.accepted > 0);
    }

    #[test]
    fn exponential_decay() {
        let (y, _) = integrate(|_, y, dy| dy[0] = -2.0 * y[0], 0.0, 3.0, &[1.0], Tolerances::default(), |_, _| {})
            .unwrap();
        assert!((y[0] - (-6.0f64).exp()).abs() < 1e-12);
    }
}
