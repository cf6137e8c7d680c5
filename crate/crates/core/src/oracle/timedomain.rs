//! Second-order counts from the double time integral
//!
//! ```text
//! N_a = int int dt dt' [ DeltaOmega2_a(t) DeltaOmega2_a(t') exp(2i W_a (t' - t)) / (4 W_a^2)
//!                       + sum_b S_ab(t) S_ab(t') exp(i (W_a + W_b)(t' - t)) ]
//! ```
//!
//! On a uniform grid with weights `w`, `g_i = w_i f(t_i)` and the double sum
//! collapses onto lags: `sum_k C(k) exp(i omega k dt)` with the
//! autocorrelation `C(k) = sum_i g_i g_(i+k)`. Inputs are rebuilt from the
//! boundary state at each grid time rather than from the sampled series the
//! spectral path uses.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::coupling::{coupling_matrix, geometric_matrices, s_matrix};
use crate::error::{Error, Result};
use crate::geometry::{build_spectrum_with_size, Geometry, ModeIndex};
use crate::trajectory::Trajectory;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimeDomainResult {
    pub mode: ModeIndex,
    pub omega0: f64,
    pub n_squeeze: f64,
    pub n_accel: f64,
    /// Largest `|Im| / |Re|` over the double integrals of this mode.
    pub imag_residue: f64,
}

impl TimeDomainResult {
    pub fn n_total(&self) -> f64 {
        self.n_squeeze + self.n_accel
    }
}

fn autocorrelation(g: &[f64]) -> Vec<f64> {
    let n = g.len();
    (0..n)
        .map(|k| g[..n - k].iter().zip(&g[k..]).map(|(a, b)| a * b).sum())
        .collect()
}

/// `sum_i sum_j g_i g_j exp(i omega (t_j - t_i))` through lags; positive and
/// negative lags are accumulated separately so the imaginary residue is a
/// genuine measurement.
fn lag_sum(c: &[f64], omega: f64, dt: f64) -> Complex64 {
    let mut pos = Complex64::new(0.0, 0.0);
    let mut neg = Complex64::new(0.0, 0.0);
    for (k, ck) in c.iter().enumerate().skip(1) {
        let (s, co) = (omega * k as f64 * dt).sin_cos();
        pos += Complex64::new(ck * co, ck * s);
        neg += Complex64::new(ck * co, -ck * s);
    }
    Complex64::new(c[0], 0.0) + pos + neg
}

fn residue(z: Complex64) -> f64 {
    if z.re == 0.0 {
        z.im.abs()
    } else {
        (z.im / z.re).abs()
    }
}

/// Time-domain counts for every mode of the lowest-`k` basis.
pub fn timedomain_spectrum(traj: &Trajectory, geometry: &Geometry, k: usize) -> Result<Vec<TimeDomainResult>> {
    let basis = build_spectrum_with_size(geometry, k)?;
    let w = basis.omega0();
    let top = w.iter().copied().fold(0.0, f64::max);
    traj.check_sampling(2.0 * top).map_err(|e| Error::QuadratureResolution(e.to_string()))?;
    let gm = geometric_matrices(&basis)?;
    let weights = traj.weights();
    let n = traj.len();

    // S(t_i) rebuilt from the instantaneous boundary state
    let s_samples: Result<Vec<_>> = (0..n)
        .into_par_iter()
        .map(|i| s_matrix(&coupling_matrix(&gm, traj, traj.time(i))?, w))
        .collect();
    let s_samples = s_samples?;

    let pairs: Vec<(usize, usize)> = (0..k)
        .flat_map(|a| (a + 1..k).map(move |b| (a, b)))
        .filter(|&(a, b)| s_samples.iter().any(|s| s[[a, b]] != 0.0))
        .collect();
    let pair_values: Vec<((usize, usize), Complex64)> = pairs
        .par_iter()
        .map(|&(a, b)| {
            let g: Vec<f64> = (0..n).map(|i| weights[i] * s_samples[i][[a, b]]).collect();
            ((a, b), lag_sum(&autocorrelation(&g), w[a] + w[b], traj.dt()))
        })
        .collect();

    let squeeze: Result<Vec<(f64, f64)>> = basis
        .basis()
        .par_iter()
        .zip(w.par_iter())
        .map(|(mode, &wa)| {
            let g: Result<Vec<f64>> = (0..n)
                .map(|i| Ok(weights[i] * traj.delta_omega_sq_at(mode.n, traj.time(i))?))
                .collect();
            let z = lag_sum(&autocorrelation(&g?), 2.0 * wa, traj.dt()) / (4.0 * wa * wa);
            Ok((z.re, residue(z)))
        })
        .collect();
    let squeeze = squeeze?;

    Ok(basis
        .basis()
        .iter()
        .enumerate()
        .map(|(a, mode)| {
            let mut accel = 0.0;
            let mut res = squeeze[a].1;
            for ((p, q), z) in &pair_values {
                if *p == a || *q == a {
                    accel += z.re;
                    res = res.max(residue(*z));
                }
            }
            TimeDomainResult {
                mode: *mode,
                omega0: w[a],
                n_squeeze: squeeze[a].0,
                n_accel: accel,
                imag_residue: res,
            }
        })
        .collect())
}

/// Time-domain counts of one mode of the lowest-`k` basis.
pub fn n_timedomain(mode: &ModeIndex, traj: &Trajectory, geometry: &Geometry, k: usize) -> Result<TimeDomainResult> {
    timedomain_spectrum(traj, geometry, k)?
        .into_iter()
        .find(|r| &r.mode == mode)
        .ok_or_else(|| Error::Domain(format!("mode {mode} is not among the lowest {k} modes")))
}
