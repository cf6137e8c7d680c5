//! Boundary motion, its evaluation, and the windowed transform.

use std::f64::consts::PI;
use std::io::Write;

use approx::assert_relative_eq;
use dynamical_casimir::quadrature::simpson_weights;
use dynamical_casimir::{Component, Error, Trajectory};
use num_complex::Complex64;
use proptest::prelude::*;

fn gaussian(amplitude: f64, t_center: f64) -> Trajectory {
    Trajectory::gaussian(1.0, amplitude, 1.0, t_center, 20.0, 4000).unwrap()
}

#[test]
fn harmonic_length_start() {
    let traj = Trajectory::harmonic_length(1.0, 0.01, PI, 10.0, 2000).unwrap();
    let s = traj.eval(0.0).unwrap();
    assert_eq!(s.l, 1.0);
    assert_eq!(s.eta, 0.0);
    assert_relative_eq!(s.l_dot, 0.02 * PI, max_relative = 1e-14);
}

#[test]
fn gaussian_extremum_and_rest() {
    let traj = gaussian(1e-3, 10.0);
    let s = traj.eval(10.0).unwrap();
    assert_relative_eq!(s.eta, 1e-3, max_relative = 1e-14);
    assert!(s.eta_dot.abs() < 1e-18);
    for t in [0.0, 20.0] {
        let s = traj.eval(t).unwrap();
        assert!(s.eta.abs() <= 1e-12 * 1e-3 * 1e2);
        assert_eq!(s.l, 1.0);
    }
    assert!(matches!(traj.eval(20.5), Err(Error::Domain(_))));
    assert!(matches!(traj.eval(-0.1), Err(Error::Domain(_))));
}

#[test]
fn sine_transform_approaches_half_window() {
    let (w0, duration) = (5.0, 200.0);
    let traj = Trajectory::gaussian(1.0, 0.0, 1.0, 100.0, duration, 40_000).unwrap();
    let values: Vec<f64> = traj.times().iter().map(|t| (w0 * t).sin()).collect();
    let ft = traj.transform(&values, w0).unwrap();
    let bound = 2.0 / (w0 * duration);
    assert!((ft.norm() - 0.5 * duration).abs() / (0.5 * duration) <= bound);
}

#[test]
fn gaussian_transform_magnitude() {
    let traj = gaussian(1e-3, 10.0);
    let ft = traj.windowed_ft(Component::Eta, 1.0).unwrap();
    let expect = 1e-3 * (2.0 * PI).sqrt() * (-0.5f64).exp();
    assert_relative_eq!(ft.norm(), expect, max_relative = 1e-9);
    assert_relative_eq!(ft.norm(), 1.5203e-3, max_relative = 1e-4);
    assert!(traj.window_truncation_bound() <= (-12.5f64).exp());
}

#[test]
fn zero_motion_transforms_to_zero() {
    let traj = gaussian(0.0, 10.0);
    for w in [0.0, 0.7, 3.0, 30.0] {
        assert_eq!(traj.windowed_ft(Component::Eta, w).unwrap(), Complex64::new(0.0, 0.0));
    }
}

#[test]
fn parseval() {
    let traj = gaussian(1e-2, 10.0);
    let energy = traj.square_integral(Component::Eta).unwrap();
    let (w_max, n) = (10.0, 2000);
    let h = w_max / n as f64;
    let weights = simpson_weights(n + 1, h);
    let spectral: f64 = (0..=n)
        .map(|j| weights[j] * traj.windowed_ft(Component::Eta, j as f64 * h).unwrap().norm_sqr())
        .sum::<f64>()
        / PI;
    assert_relative_eq!(spectral, energy, max_relative = 1e-8);
}

#[test]
fn time_shift_is_a_phase() {
    let early = gaussian(1e-3, 8.0);
    let late = gaussian(1e-3, 12.0);
    for w in [0.3, 1.0, 2.5] {
        let a = early.windowed_ft(Component::Eta, w).unwrap();
        let b = late.windowed_ft(Component::Eta, w).unwrap();
        let shifted = a * Complex64::from_polar(1.0, 4.0 * w);
        assert!((b - shifted).norm() <= 1e-10 * a.norm());
        assert_relative_eq!(a.norm(), b.norm(), max_relative = 1e-10);
    }
}

#[test]
fn sampling_guard_refuses_aliased_queries() {
    let traj = gaussian(1e-3, 10.0);
    let limit = traj.max_resolvable_frequency();
    assert!(traj.windowed_ft(Component::Eta, 0.99 * limit).is_ok());
    let err = traj.windowed_ft(Component::Eta, 1.01 * limit).unwrap_err();
    assert!(err.is_numerical_guard());
    assert!(matches!(err, Error::SamplingGuard { min_steps, .. } if min_steps > 4000));
}

#[test]
fn csv_round_trip() {
    let traj = gaussian(1e-3, 10.0);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("motion.csv");
    traj.write_csv(&path).unwrap();
    let back = Trajectory::from_csv(&path).unwrap();
    assert_eq!(back.len(), traj.len());
    let a = traj.windowed_ft(Component::Eta, 1.0).unwrap();
    let b = back.windowed_ft(Component::Eta, 1.0).unwrap();
    assert!((a - b).norm() <= 1e-9 * a.norm());
}

fn csv_error(body: &str) -> Error {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(body.as_bytes()).unwrap();
    Trajectory::from_csv(file.path()).unwrap_err()
}

fn row_of(e: &Error) -> usize {
    match e {
        Error::TrajectoryFile { row, .. } => *row,
        other => panic!("expected a trajectory-file error, got {other}"),
    }
}

#[test]
fn csv_errors_name_the_row() {
    let good = "t,eta,l\n0,0,1\n0.1,0,1\n0.2,0,1\n0.3,0,1\n0.4,0,1\n";
    assert!(Trajectory::from_csv({
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(good.as_bytes()).unwrap();
        f.into_temp_path()
    })
    .is_ok());

    assert_eq!(row_of(&csv_error("time,eta,l\n0,0,1\n")), 1);
    assert_eq!(row_of(&csv_error("t,eta,l\n0,0,1\n0.1,x,1\n0.2,0,1\n0.3,0,1\n")), 3);
    assert_eq!(row_of(&csv_error("t,eta,l\n0,0,1\n0.1,0,1\n0.25,0,1\n0.3,0,1\n0.4,0,1\n")), 4);
    assert_eq!(row_of(&csv_error("t,eta,l\n0,0,1\n0.1,0,1\n0.1,0,1\n0.3,0,1\n")), 4);
    assert_eq!(row_of(&csv_error("t,eta,l\n0,0,1\n0.1,0,-1\n0.2,0,1\n0.3,0,1\n")), 3);
    // nonzero displacement at the final row breaks the rest condition
    let e = csv_error("t,eta,l\n0,0,1\n0.1,0,1\n0.2,0,1\n0.3,0.5,1\n");
    assert!(matches!(e, Error::TrajectoryFile { .. }));
    assert!(!e.is_numerical_guard());
}

proptest! {
    #[test]
    fn transform_is_linear(a in -3.0f64..3.0, b in -3.0f64..3.0, w in 0.0f64..20.0) {
        let traj = gaussian(1.0, 10.0);
        let phi: Vec<f64> = traj.times().iter().map(|t| (-(t - 9.0).powi(2)).exp()).collect();
        let psi: Vec<f64> = traj.times().iter().map(|t| (0.7 * t).sin() * (-(t - 11.0).powi(2)).exp()).collect();
        let mix: Vec<f64> = phi.iter().zip(&psi).map(|(x, y)| a * x + b * y).collect();
        let lhs = traj.transform(&mix, w).unwrap();
        let rhs = traj.transform(&phi, w).unwrap() * a + traj.transform(&psi, w).unwrap() * b;
        // roundoff is set by the L1 norms of the inputs, not by the size of the result
        let l1 = |v: &[f64]| v.iter().map(|x| x.abs()).sum::<f64>() * traj.dt();
        let scale = a.abs() * l1(&phi) + b.abs() * l1(&psi);
        prop_assert!((lhs - rhs).norm() <= 1e-14 * scale);
    }
}
