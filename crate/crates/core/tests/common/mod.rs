//! Shared scenarios and helpers for the integration tests.
#![allow(dead_code)]

use std::path::PathBuf;

use dynamical_casimir::{Geometry, Trajectory};

/// Rest length, pulse width, window and grid of the rigid-translation scenario.
pub const RIGID_L0: f64 = 10.0;
pub const RIGID_TAU: f64 = 1.0;
pub const RIGID_T: f64 = 20.0;
pub const RIGID_STEPS: usize = 4000;

/// Gaussian translation of an interval of length 10, centred in a window of length 20.
pub fn rigid_translation(amplitude: f64) -> (Geometry, Trajectory) {
    let g = Geometry::interval(RIGID_L0).unwrap();
    let t = Trajectory::gaussian(RIGID_L0, amplitude, RIGID_TAU, 0.5 * RIGID_T, RIGID_T, RIGID_STEPS).unwrap();
    (g, t)
}

/// Harmonic length modulation at the first resonance of a unit interval.
pub fn resonant_cavity(epsilon: f64, omega1_t: f64, steps: usize) -> (Geometry, Trajectory) {
    let omega1 = std::f64::consts::PI;
    let g = Geometry::interval(1.0).unwrap();
    let t = Trajectory::harmonic_length(1.0, epsilon, omega1, omega1_t / omega1, steps).unwrap();
    (g, t)
}

pub fn relative(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

pub fn scenario(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(format!("{name}.json"))
}
