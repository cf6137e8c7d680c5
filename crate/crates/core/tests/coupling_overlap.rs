//! Geometric matrices, coupling, squeeze-coupling and single-mirror kernel.

mod common;

use approx::assert_relative_eq;
use dynamical_casimir::coupling::{
    coupling_matrix, geometric_matrices, s_matrix, single_mirror_kernel, CouplingSet,
};
use dynamical_casimir::geometry::{build_spectrum, build_spectrum_with_size, omega_total};
use dynamical_casimir::{Error, Geometry, ModeIndex, Trajectory};
use proptest::prelude::*;
use std::f64::consts::PI;

fn interval_matrices(k: usize) -> dynamical_casimir::coupling::GeometricMatrices {
    let g = Geometry::interval(1.0).unwrap();
    geometric_matrices(&build_spectrum_with_size(&g, k).unwrap()).unwrap()
}

#[test]
fn closed_form_entries() {
    let m = interval_matrices(3);
    assert_relative_eq!(m.a()[[0, 1]], -8.0 / 3.0, max_relative = 1e-15);
    assert_relative_eq!(m.g()[[0, 1]], -4.0 / 3.0, max_relative = 1e-15);
    assert_eq!(m.a()[[0, 2]], 0.0);
    assert_relative_eq!(m.g()[[0, 2]], 0.75, max_relative = 1e-15);
    for i in 0..3 {
        assert_eq!(m.a()[[i, i]], 0.0);
        assert_eq!(m.g()[[i, i]], 0.0);
    }
}

#[test]
fn slab_couples_only_equal_transverse_labels() {
    let g = Geometry::slab(1.0, 1.0, 1.0).unwrap();
    let spec = build_spectrum(&g, 4.0 * PI).unwrap();
    let m = geometric_matrices(&spec).unwrap();
    let basis = spec.basis();
    let mut coupled = 0;
    for i in 0..basis.len() {
        for j in 0..basis.len() {
            let nonzero = m.a()[[i, j]] != 0.0 || m.g()[[i, j]] != 0.0;
            if !basis[i].same_transverse(&basis[j]) {
                assert!(!nonzero, "{} and {} must not couple", basis[i], basis[j]);
            }
            coupled += nonzero as usize;
        }
    }
    assert!(coupled > 0);
    let top = ModeIndex::slab(1, 1, 1).unwrap();
    assert_relative_eq!(omega_total(&top, &g, 1.0).unwrap(), PI * 3f64.sqrt(), max_relative = 1e-15);
}

#[test]
fn static_boundary_gives_zero_coupling() {
    let m = interval_matrices(6);
    let traj = Trajectory::gaussian(1.0, 0.0, 1.0, 10.0, 20.0, 2000).unwrap();
    let c = coupling_matrix(&m, &traj, 7.3).unwrap();
    assert!(c.iter().all(|x| *x == 0.0));
}

#[test]
fn length_rate_entry() {
    // l(0) = 1 and l_dot(0) = 2 epsilon omega1 = 0.1 for this modulation.
    let eps = 0.1 / (2.0 * PI);
    let traj = Trajectory::harmonic_length(1.0, eps, PI, 10.0, 4000).unwrap();
    let c = coupling_matrix(&interval_matrices(3), &traj, 0.0).unwrap();
    assert_relative_eq!(c[[0, 1]], 0.1 * (-4.0 / 3.0), max_relative = 1e-12);
}

#[test]
fn rigid_translation_is_pure_translation_coupling() {
    let (g, traj) = common::rigid_translation(0.05);
    let geom = geometric_matrices(&build_spectrum_with_size(&g, 5).unwrap()).unwrap();
    let t = 9.4;
    let state = traj.eval(t).unwrap();
    let c = coupling_matrix(&geom, &traj, t).unwrap();
    let expect = geom.a() * (state.eta_dot / state.l);
    for (x, y) in c.iter().zip(expect.iter()) {
        assert_relative_eq!(*x, *y, max_relative = 1e-12, epsilon = 1e-300);
    }
}

#[test]
fn squeeze_coupling_example() {
    let m = interval_matrices(2).a() * 0.01;
    let s = s_matrix(&m, &[PI, 2.0 * PI]).unwrap();
    let expect = 0.5 * (0.01 * (-8.0 / 3.0)) * (2f64.sqrt() - 1.0 / 2f64.sqrt());
    assert_relative_eq!(s[[0, 1]], expect, max_relative = 1e-14);
    assert_relative_eq!(s[[0, 1]], -9.428e-3, max_relative = 1e-3);
    assert_eq!(s[[0, 1]], s[[1, 0]]);
    assert!(s_matrix(&m, &[PI, 0.0]).is_err());
}

#[test]
fn degenerate_frequencies_do_not_squeeze() {
    let m = interval_matrices(2).g().clone();
    let s = s_matrix(&m, &[3.0, 3.0]).unwrap();
    assert!(s.iter().all(|x| *x == 0.0));
}

#[test]
fn coupling_set_checks_rest_length() {
    let geom = interval_matrices(4);
    let (_, traj) = common::rigid_translation(0.01);
    assert!(CouplingSet::new(geom, &traj).is_err());
}

#[test]
fn kernel_values() {
    assert_relative_eq!(single_mirror_kernel(2.0, 1.0, 1.0).unwrap(), 0.42441, max_relative = 1e-5);
    assert_eq!(single_mirror_kernel(2.0, 1.0, 0.0).unwrap(), 0.0);
    assert!(matches!(single_mirror_kernel(1.0, 1.0, 1.0), Err(Error::PrincipalValue { .. })));
    assert!(single_mirror_kernel(-1.0, 1.0, 1.0).is_err());
}

proptest! {
    #[test]
    fn coupling_is_antisymmetric(k in 2usize..24, t in 0.5f64..19.5, amp in -0.2f64..0.2) {
        let (g, traj) = common::rigid_translation(amp);
        let geom = geometric_matrices(&build_spectrum_with_size(&g, k).unwrap()).unwrap();
        let m = coupling_matrix(&geom, &traj, t).unwrap();
        let scale = m.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        for i in 0..k {
            for j in 0..k {
                prop_assert!((m[[i, j]] + m[[j, i]]).abs() <= 1e-12 * scale);
            }
        }
        let w: Vec<f64> = geom.spectrum().omega0().to_vec();
        let s = s_matrix(&m, &w).unwrap();
        for i in 0..k {
            prop_assert_eq!(s[[i, i]], 0.0);
            for j in 0..k {
                prop_assert!((s[[i, j]] - s[[j, i]]).abs() <= 1e-12 * scale);
            }
        }
    }

    #[test]
    fn kernel_is_antisymmetric(a in 0.1f64..10.0, b in 0.1f64..10.0, v in -1.0f64..1.0) {
        prop_assume!((a - b).abs() > 0.05 * a.max(b));
        let x = single_mirror_kernel(a, b, v).unwrap();
        let y = single_mirror_kernel(b, a, v).unwrap();
        prop_assert!((x + y).abs() <= 1e-14 * x.abs().max(1e-300));
    }
}
