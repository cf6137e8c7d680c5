//! Second-order particle creation.
//!
//! For a cavity that starts and ends at rest, the number of particles found
//! in mode `a` after the motion is
//!
//! ```text
//! N_a = |DeltaOmega2_a~(2 W_a)|^2 / (4 W_a^2)  +  sum_b |S_ab~(W_a + W_b)|^2
//!     = N_squeeze + N_accel
//! ```
//!
//! where `~` is the windowed transform over the motion and `W` are the rest
//! frequencies. The two contributions do not interfere at this order.

use log::warn;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

use crate::coupling::{geometric_matrices, CouplingSet};
use crate::error::{Error, Result};
use crate::geometry::{build_spectrum, build_spectrum_with_size, Geometry, ModeIndex, ModeSpectrum};
use crate::quadrature::simpson_weights;
use crate::trajectory::{Component, Profile, Trajectory};

/// Fraction of the acceleration sum above which the last-octave tail is flagged.
pub const TAIL_WARNING_FRACTION: f64 = 0.01;

/// Largest relative tail allowed in the single-mirror integrals.
pub const MIRROR_TAIL_LIMIT: f64 = 1e-3;

fn mode_frequency(mode: &ModeIndex, spectrum: &ModeSpectrum) -> Result<f64> {
    spectrum
        .omega_of(mode)
        .ok_or_else(|| Error::Domain(format!("mode {mode} is not in the basis")))
}

/// Squeezing contribution of one mode.
pub fn n_squeeze(mode: &ModeIndex, traj: &Trajectory, spectrum: &ModeSpectrum) -> Result<f64> {
    let w = mode_frequency(mode, spectrum)?;
    let shift = traj.samples(Component::DeltaOmegaSq(mode.n))?;
    let ft = traj.transform(&shift, 2.0 * w)?;
    Ok(ft.norm_sqr() / (4.0 * w * w))
}

/// Acceleration contribution of one mode with its convergence record.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AccelTerm {
    pub value: f64,
    /// Contribution of partner modes in the top octave of the truncated basis.
    pub tail_estimate: f64,
    pub partners: usize,
    pub tail_warning: bool,
}

/// Acceleration contribution of mode `mode`, summed over the coupling basis.
pub fn n_accel(mode: &ModeIndex, traj: &Trajectory, coupling: &CouplingSet) -> Result<AccelTerm> {
    let spectrum = coupling.geometric().spectrum();
    let a = spectrum
        .position(mode)
        .ok_or_else(|| Error::Domain(format!("mode {mode} is not in the coupling basis")))?;
    let w = spectrum.omega0();
    let top = w.iter().copied().fold(0.0, f64::max);
    traj.check_sampling(w[a] + top)?;

    let mut value = 0.0;
    let mut tail = 0.0;
    let mut partners = 0;
    for b in 0..spectrum.len() {
        if coupling.entry_is_zero(a, b) {
            continue;
        }
        let series = coupling.s_series(a, b);
        let term = traj.transform(&series, w[a] + w[b])?.norm_sqr();
        value += term;
        partners += 1;
        if w[b] > 0.5 * top {
            tail += term;
        }
    }
    let tail_warning = value > 0.0 && tail > TAIL_WARNING_FRACTION * value;
    if tail_warning {
        warn!(
            "acceleration sum for mode {mode}: last-octave tail {tail:.3e} exceeds {}% of {value:.3e}",
            TAIL_WARNING_FRACTION * 100.0
        );
    }
    Ok(AccelTerm { value, tail_estimate: tail, partners, tail_warning })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeCreation {
    pub mode: ModeIndex,
    pub omega0: f64,
    pub n_squeeze: f64,
    pub n_accel: f64,
    pub n_total: f64,
    pub tail_estimate: f64,
    pub tail_warning: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CreationSpectrum {
    pub modes: Vec<ModeCreation>,
    /// Size of the basis the acceleration sums run over.
    pub coupling_modes: usize,
    /// Frequency cutoff applied to the mode-summed total, if any.
    pub cutoff: Option<f64>,
    pub total_squeeze: f64,
    pub total_accel: f64,
    pub total: f64,
    /// `sum_a N_a exp(-W_a / cutoff)`, equal to `total` without a cutoff.
    pub total_weighted: f64,
    /// Largest last-octave tail relative to its mode's acceleration sum.
    pub max_relative_tail: f64,
}

impl CreationSpectrum {
    pub fn get(&self, mode: &ModeIndex) -> Option<&ModeCreation> {
        self.modes.iter().find(|m| &m.mode == mode)
    }

    pub fn any_tail_warning(&self) -> bool {
        self.modes.iter().any(|m| m.tail_warning)
    }
}

/// Per-mode spectrum for all modes with `W <= omega_max`; acceleration sums
/// run over the lowest `k` modes of the geometry.
pub fn spectrum_full(
    traj: &Trajectory,
    geometry: &Geometry,
    omega_max: f64,
    k: usize,
    cutoff: Option<f64>,
) -> Result<CreationSpectrum> {
    let reported = build_spectrum(geometry, omega_max)?;
    if k < reported.len() {
        return Err(Error::Domain(format!(
            "coupling basis size {k} is smaller than the {} reported modes",
            reported.len()
        )));
    }
    if let Some(c) = cutoff {
        if !(c > 0.0) {
            return Err(Error::Domain(format!("cutoff must be positive, got {c}")));
        }
    }
    let basis = build_spectrum_with_size(geometry, k)?;
    if basis.basis()[..reported.len()] != *reported.basis() {
        return Err(Error::Domain("reported modes are not a prefix of the coupling basis".into()));
    }
    let top = basis.omega0().iter().copied().fold(0.0, f64::max);
    traj.check_sampling((2.0 * omega_max).max(omega_max + top))?;

    let coupling = CouplingSet::new(geometric_matrices(&basis)?, traj)?;
    let modes: Result<Vec<ModeCreation>> = reported
        .basis()
        .par_iter()
        .zip(reported.omega0().par_iter())
        .map(|(mode, &w)| {
            let s = n_squeeze(mode, traj, &reported)?;
            let a = n_accel(mode, traj, &coupling)?;
            Ok(ModeCreation {
                mode: *mode,
                omega0: w,
                n_squeeze: s,
                n_accel: a.value,
                n_total: s + a.value,
                tail_estimate: a.tail_estimate,
                tail_warning: a.tail_warning,
            })
        })
        .collect();
    let modes = modes?;

    let total_squeeze = modes.iter().map(|m| m.n_squeeze).sum();
    let total_accel = modes.iter().map(|m| m.n_accel).sum();
    let total = modes.iter().map(|m| m.n_total).sum();
    let total_weighted = match cutoff {
        Some(c) => modes.iter().map(|m| m.n_total * (-m.omega0 / c).exp()).sum(),
        None => total,
    };
    let max_relative_tail = modes
        .iter()
        .filter(|m| m.n_accel > 0.0)
        .map(|m| m.tail_estimate / m.n_accel)
        .fold(0.0, f64::max);
    Ok(CreationSpectrum {
        modes,
        coupling_modes: basis.len(),
        cutoff,
        total_squeeze,
        total_accel,
        total,
        total_weighted,
        max_relative_tail,
    })
}

/// Frequency lattice for single-mirror integrals: step fine enough to
/// resolve structure of width `~1/T` in the transform.
fn mirror_step(traj: &Trajectory) -> f64 {
    PI / (8.0 * traj.duration())
}

fn relative_tail(values: &[f64], weights: &[f64]) -> f64 {
    let total: f64 = values.iter().zip(weights).map(|(v, w)| v * w).sum();
    if total == 0.0 {
        return 0.0;
    }
    let start = values.len() - values.len() / 10 - 1;
    let tail: f64 = values[start..].iter().zip(&weights[start..]).map(|(v, w)| v * w).sum();
    (tail / total).abs()
}

/// Spectral density of particles radiated by a single mirror into the
/// half-line, at frequency `omega_a`:
/// `(1/pi^2) int_0^omega_b_max W_a W_b |eta~(W_a + W_b)|^2 dW_b`.
pub fn single_mirror_spectrum(traj: &Trajectory, omega_a: f64, omega_b_max: f64) -> Result<f64> {
    if !(omega_a >= 0.0 && omega_b_max > 0.0) {
        return Err(Error::Domain("single-mirror frequencies must be non-negative".into()));
    }
    traj.check_sampling(omega_a + omega_b_max)?;
    let n = ((omega_b_max / mirror_step(traj)).ceil() as usize).max(8);
    let h = omega_b_max / n as f64;
    let eta = traj.samples(Component::Eta)?;
    let vals: Result<Vec<f64>> = (0..=n)
        .into_par_iter()
        .map(|j| {
            let wb = j as f64 * h;
            Ok(omega_a * wb * traj.transform(&eta, omega_a + wb)?.norm_sqr())
        })
        .collect();
    let vals = vals?;
    let w = simpson_weights(n + 1, h);
    let tail = relative_tail(&vals, &w);
    if tail > MIRROR_TAIL_LIMIT {
        return Err(Error::TailBound(format!(
            "integrand beyond 0.9 x {omega_b_max} carries {tail:.3e} of the integral (limit {MIRROR_TAIL_LIMIT:.0e})"
        )));
    }
    Ok(vals.iter().zip(&w).map(|(v, w)| v * w).sum::<f64>() / (PI * PI))
}

/// Single-mirror spectrum on a lattice with the energy it carries.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadiationResult {
    pub omegas: Vec<f64>,
    pub density: Vec<f64>,
    /// `int W N(W) dW` over the lattice.
    pub energy_spectral: f64,
    /// `(1/12 pi) int eta_ddot^2 dt`.
    pub energy_time_domain: f64,
    pub tail_fraction: f64,
}

impl RadiationResult {
    pub fn closure_error(&self) -> f64 {
        if self.energy_time_domain == 0.0 {
            return self.energy_spectral.abs();
        }
        (self.energy_spectral - self.energy_time_domain).abs() / self.energy_time_domain
    }
}

/// Spectral density on `[0, omega_max]` and both energy routes.
///
/// The transform is tabulated once on the lattice `k h`, `k <= 2n`, so
/// every `W_a + W_b` lands on a lattice point.
pub fn radiate(traj: &Trajectory, omega_max: f64) -> Result<RadiationResult> {
    if !(omega_max > 0.0) {
        return Err(Error::Domain(format!("omega_max must be positive, got {omega_max}")));
    }
    traj.check_sampling(2.0 * omega_max)?;
    let n = {
        let n = ((omega_max / mirror_step(traj)).ceil() as usize).max(8);
        n + n % 2
    };
    let h = omega_max / n as f64;
    let eta = traj.samples(Component::Eta)?;
    let power: Result<Vec<f64>> = (0..=2 * n)
        .into_par_iter()
        .map(|k| Ok(traj.transform(&eta, k as f64 * h)?.norm_sqr()))
        .collect();
    let power = power?;
    let w = simpson_weights(n + 1, h);
    let omegas: Vec<f64> = (0..=n).map(|j| j as f64 * h).collect();
    let density: Vec<f64> = (0..=n)
        .map(|j| {
            let wa = omegas[j];
            let s: f64 = (0..=n).map(|k| w[k] * omegas[k] * power[j + k]).sum();
            wa * s / (PI * PI)
        })
        .collect();
    let integrand: Vec<f64> = omegas.iter().zip(&density).map(|(a, d)| a * d).collect();
    let energy_spectral = integrand.iter().zip(&w).map(|(v, w)| v * w).sum();
    let tail_fraction = relative_tail(&integrand, &w);
    if tail_fraction > MIRROR_TAIL_LIMIT {
        return Err(Error::TailBound(format!(
            "radiated-energy integrand beyond 0.9 x {omega_max} carries {tail_fraction:.3e} of the total"
        )));
    }
    Ok(RadiationResult {
        omegas,
        density,
        energy_spectral,
        energy_time_domain: radiated_energy(traj)?,
        tail_fraction,
    })
}

/// Energy radiated to one side of a single mirror, `(1/12 pi) int eta_ddot^2 dt`.
pub fn radiated_energy(traj: &Trajectory) -> Result<f64> {
    if traj.second_derivative_is_noisy() {
        warn!("second derivative of the sampled trajectory looks noisy; radiated energy may be unreliable");
    }
    Ok(traj.square_integral(Component::EtaDdot)? / (12.0 * PI))
}

/// Two-sided radiated energy in the velocity form `(6 pi)^-1 int V_dot^2 dt`
/// with `V = eta_dot`, differentiating the sampled velocity numerically.
pub fn ford_vilenkin_energy(traj: &Trajectory) -> Result<f64> {
    let v = traj.samples(Component::EtaDot)?;
    let h = traj.dt();
    let n = v.len();
    let mut acc = vec![0.0; n];
    for i in 1..n - 1 {
        acc[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
    }
    acc[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
    acc[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
    let integral: f64 = traj.weights().iter().zip(&acc).map(|(w, a)| w * a * a).sum();
    Ok(integral / (6.0 * PI))
}

/// Closed-form resonant count `(epsilon omega1 T)^2 / 4` with its validity flags.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResonantEstimate {
    pub n1: f64,
    /// `epsilon omega1 T` is small.
    pub weak_drive: bool,
    /// `omega1 T` is large.
    pub long_window: bool,
}

/// Thresholds for the validity flags of [`resonant_n1`].
pub const WEAK_DRIVE_MAX: f64 = 0.3;
pub const LONG_WINDOW_MIN: f64 = 10.0 * PI;

pub fn resonant_n1(epsilon: f64, omega1: f64, duration: f64) -> ResonantEstimate {
    let x = epsilon * omega1 * duration;
    ResonantEstimate {
        n1: 0.25 * x * x,
        weak_drive: x.abs() <= WEAK_DRIVE_MAX,
        long_window: omega1 * duration >= LONG_WINDOW_MIN,
    }
}

/// Resonant estimate for a harmonic-length trajectory, if it is one.
pub fn resonant_reference(traj: &Trajectory) -> Option<ResonantEstimate> {
    match *traj.profile() {
        Profile::HarmonicLength { epsilon, omega1 } => Some(resonant_n1(epsilon, omega1, traj.duration())),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Geometry;
    use approx::assert_relative_eq;

    #[test]
    fn resonant_closed_form() {
        assert_eq!(resonant_n1(0.0, PI, 10.0).n1, 0.0);
        let r = resonant_n1(1e-3, PI, 100.0 / PI);
        assert_relative_eq!(r.n1, 2.5e-3, max_relative = 1e-12);
        assert!(r.weak_drive && r.long_window);
        assert!(!resonant_n1(0.1, PI, 100.0 / PI).weak_drive);
    }

    #[test]
    fn static_cavity_creates_nothing() {
        let g = Geometry::interval(1.0).unwrap();
        let tr = Trajectory::gaussian(1.0, 0.0, 1.0, 10.0, 20.0, 4000).unwrap();
        let s = spectrum_full(&tr, &g, 3.5 * PI, 6, Some(20.0)).unwrap();
        assert_eq!(s.modes.len(), 3);
        assert!(s.modes.iter().all(|m| m.n_total == 0.0));
        assert_eq!(s.total_weighted, 0.0);
    }

    #[test]
    fn harmonic_resonance() {
        let w1 = PI;
        let t = 100.0 / w1;
        let tr = Trajectory::harmonic_length(1.0, 1e-3, w1, t, 20000).unwrap();
        let g = Geometry::interval(1.0).unwrap();
        let spec = build_spectrum(&g, 2.5 * PI).unwrap();
        let n1 = n_squeeze(&ModeIndex::longitudinal(1).unwrap(), &tr, &spec).unwrap();
        assert!((n1 / 2.5e-3 - 1.0).abs() < 0.05, "N1 = {n1}");
    }

    #[test]
    fn undersized_coupling_basis_rejected() {
        let g = Geometry::interval(1.0).unwrap();
        let tr = Trajectory::gaussian(1.0, 1e-3, 1.0, 10.0, 20.0, 4000).unwrap();
        assert!(spectrum_full(&tr, &g, 3.5 * PI, 2, None).is_err());
    }

    #[test]
    fn mirror_spectrum_of_rest_is_zero() {
        let tr = Trajectory::gaussian(1.0, 0.0, 1.0, 10.0, 20.0, 2000).unwrap();
        assert_eq!(single_mirror_spectrum(&tr, 1.0, 8.0).unwrap(), 0.0);
        assert_eq!(radiated_energy(&tr).unwrap(), 0.0);
    }
}
