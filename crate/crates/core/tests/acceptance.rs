//! Acceptance suite: one pass/fail line per criterion.
//!
//! Built without the libtest harness so the lines are always printed;
//! the process exits nonzero when any criterion fails.

mod common;

use std::f64::consts::PI;
use std::process::{Command as Process, ExitCode};
use std::time::{Duration, Instant};

use dynamical_casimir::cli::{Command, ScenarioConfig, Status};
use dynamical_casimir::coupling::{coupling_matrix, geometric_matrices};
use dynamical_casimir::geometry::{build_spectrum, build_spectrum_with_size};
use dynamical_casimir::oracle::{fock_propagate, scatter, timedomain_spectrum};
use dynamical_casimir::quadrature::CompositeGauss;
use dynamical_casimir::response::{ford_vilenkin_energy, radiate, radiated_energy, spectrum_full};
use dynamical_casimir::statics::{casimir_force, parabolic_strength, zero_point_energy};
use dynamical_casimir::{Component, Geometry, Trajectory};

use common::{relative, resonant_cavity, rigid_translation, scenario};

// Criterion 1: resonant cavity.
const RESONANT_EPSILON: f64 = 1e-3;
const RESONANT_OMEGA1_T: f64 = 100.0;
const RESONANT_N1: f64 = 2.5e-3;
const RESONANT_TOLERANCE: f64 = 0.05;
const RESONANT_BUDGET: Duration = Duration::from_secs(10);

// Criteria 2 and 3: single Gaussian mirror.
const MIRROR_AMPLITUDE: f64 = 1e-3;
const MIRROR_TAU: f64 = 1.0;
const MIRROR_T: f64 = 20.0;
const MIRROR_ENERGY_REFERENCE: f64 = 3.527e-8;
const MIRROR_TOLERANCE: f64 = 0.01;
const MIRROR_BUDGET: Duration = Duration::from_secs(30);
const TWO_SIDED_TOLERANCE: f64 = 0.01;

// Criterion 4: spectral versus time-domain.
const ORACLE_MODES: usize = 10;
const ORACLE_TOLERANCE: f64 = 1e-6;
const ORACLE_AMPLITUDE: f64 = 0.05;
const ORACLE_BUDGET: Duration = Duration::from_secs(60);

// Criterion 5: reflectionless bump.
const BUMP_RATIOS: [f64; 4] = [0.5, 1.0, 2.0, 5.0];
const BUMP_LIMIT: f64 = 1e-8;

// Criterion 6: Fock propagation.
const FOCK_MODES: usize = 2;
const FOCK_N_MAX: usize = 6;
const FOCK_AMPLITUDES: [f64; 3] = [0.2, 0.1, 0.05];
const FOCK_MIN_SHRINK: f64 = 4.0;
/// Relative allowance below `FOCK_MIN_SHRINK` for the quartic correction,
/// which has the opposite sign to the leading term for every rigid
/// translation tried; the factor then approaches 4 from below.
const FOCK_SHRINK_SLACK: f64 = 0.01;
const FOCK_BUDGET: Duration = Duration::from_secs(300);

// Criterion 7: coupling matrix.
const OVERLAP_MAX_N: u32 = 8;
const OVERLAP_TOLERANCE: f64 = 1e-8;
const ANTISYMMETRY_TOLERANCE: f64 = 1e-12;

// Criterion 8: statics.
const STATICS_CUTOFF: f64 = 200.0;
const STATICS_TOLERANCE: f64 = 0.01;
const PARABOLIC_EXPONENT: f64 = 2.0;
const PARABOLIC_EXPONENT_TOLERANCE: f64 = 0.1;

// Criterion 9: property suite through `verify`.
const PROPERTY_CHECKS: [&str; 6] = [
    "nonnegativity",
    "additivity",
    "amplitude_scaling",
    "s_symmetry_hollow",
    "fock_norm_drift",
    "bogoliubov_normalization",
];

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let (g, t) = resonant_cavity(RESONANT_EPSILON, RESONANT_OMEGA1_T, 8000);
    let s = spectrum_full(&t, &g, PI, 10, None).unwrap();
    let n1 = s.modes[0].n_total;
    let elapsed = start.elapsed();
    let dev = (n1 - RESONANT_N1).abs() / RESONANT_N1;
    outcome(
        dev <= RESONANT_TOLERANCE && elapsed < RESONANT_BUDGET,
        format!("N1 = {n1:.6e}, deviation {dev:.2e} (tol {RESONANT_TOLERANCE}), {elapsed:.2?}"),
    )
}

fn mirror() -> Trajectory {
    Trajectory::gaussian(1.0, MIRROR_AMPLITUDE, MIRROR_TAU, 0.5 * MIRROR_T, MIRROR_T, 4000).unwrap()
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let t = mirror();
    let r = radiate(&t, 8.0).unwrap();
    let exact = MIRROR_AMPLITUDE.powi(2) / (16.0 * PI.sqrt() * MIRROR_TAU.powi(3));
    let elapsed = start.elapsed();
    let dev = (r.energy_spectral - exact).abs() / exact;
    let closure = r.closure_error();
    let reference = (exact - MIRROR_ENERGY_REFERENCE).abs() / MIRROR_ENERGY_REFERENCE;
    outcome(
        dev <= MIRROR_TOLERANCE && closure <= MIRROR_TOLERANCE && reference <= 1e-3 && elapsed < MIRROR_BUDGET,
        format!(
            "spectral {:.6e} vs a^2/(16 sqrt(pi) tau^3) = {exact:.6e}: deviation {dev:.2e}, closure {closure:.2e} (tol {MIRROR_TOLERANCE}), {elapsed:.2?}",
            r.energy_spectral
        ),
    )
}

fn criterion_3() -> Outcome {
    let t = mirror();
    let one_sided = radiated_energy(&t).unwrap();
    let two_sided = ford_vilenkin_energy(&t).unwrap();
    let dev = relative(2.0 * one_sided, two_sided);
    outcome(
        dev <= TWO_SIDED_TOLERANCE,
        format!("2 x {one_sided:.6e} vs (6 pi)^-1 int V_dot^2 = {two_sided:.6e}: deviation {dev:.2e} (tol {TWO_SIDED_TOLERANCE})"),
    )
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let (g, t) = rigid_translation(ORACLE_AMPLITUDE);
    let basis = build_spectrum_with_size(&g, ORACLE_MODES).unwrap();
    let omega_max = basis.omega0()[ORACLE_MODES - 1];
    let spectral = spectrum_full(&t, &g, omega_max, ORACLE_MODES, None).unwrap();
    let td = timedomain_spectrum(&t, &g, ORACLE_MODES).unwrap();
    let elapsed = start.elapsed();
    let mut worst: f64 = 0.0;
    let mut all_positive = true;
    for (s, d) in spectral.modes.iter().zip(&td) {
        worst = worst.max(relative(s.n_squeeze, d.n_squeeze)).max(relative(s.n_accel, d.n_accel));
        all_positive &= s.n_squeeze == 0.0 && s.n_accel > 0.0;
    }
    outcome(
        worst <= ORACLE_TOLERANCE && all_positive && elapsed < ORACLE_BUDGET,
        format!(
            "largest per-mode relative gap {worst:.2e} over {ORACLE_MODES} modes (tol {ORACLE_TOLERANCE}), N_S = 0 and N_A > 0: {all_positive}, {elapsed:.2?}"
        ),
    )
}

fn criterion_5() -> Outcome {
    let nu = 1.0;
    let t = Trajectory::sech_squared_bump(1.0, nu, 40.0, 80.0, 16000).unwrap();
    let mut worst: f64 = 0.0;
    let mut born = Vec::new();
    for ratio in BUMP_RATIOS {
        let w = ratio * nu;
        let r = scatter(|s| t.delta_omega_sq_at(1, s).unwrap(), w, 0.0, t.duration()).unwrap();
        worst = worst.max(r.n_exact);
        let first_order = t.windowed_ft(Component::DeltaOmegaSq(1), 2.0 * w).unwrap().norm_sqr() / (4.0 * w * w);
        born.push(format!("{ratio}: {first_order:.3e}"));
    }
    outcome(
        worst <= BUMP_LIMIT,
        format!("largest exact N {worst:.2e} (limit {BUMP_LIMIT}); first-order residuals by W/nu [{}]", born.join(", ")),
    )
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let mut deviations = Vec::new();
    for a in FOCK_AMPLITUDES {
        let (g, t) = rigid_translation(a);
        let basis = build_spectrum_with_size(&g, FOCK_MODES).unwrap();
        let pert = spectrum_full(&t, &g, basis.omega0()[FOCK_MODES - 1], FOCK_MODES, None).unwrap();
        let fock = fock_propagate(&t, &g, FOCK_MODES, FOCK_N_MAX).unwrap();
        let dev = pert
            .modes
            .iter()
            .zip(&fock.occupations)
            .map(|(p, f)| (f - p.n_accel).abs() / p.n_accel)
            .fold(0.0, f64::max);
        deviations.push(dev);
    }
    let elapsed = start.elapsed();
    let shrink: Vec<f64> = deviations.windows(2).map(|w| w[0] / w[1]).collect();
    let floor = FOCK_MIN_SHRINK * (1.0 - FOCK_SHRINK_SLACK);
    let converging = shrink.windows(2).all(|w| (w[1] - FOCK_MIN_SHRINK).abs() <= (w[0] - FOCK_MIN_SHRINK).abs());
    let ok = shrink.iter().all(|s| *s >= floor) && converging && elapsed < FOCK_BUDGET;
    outcome(
        ok,
        format!(
            "relative deviations {:?} at amplitudes {:?}, shrink factors {:?} (min {FOCK_MIN_SHRINK} less {FOCK_SHRINK_SLACK} relative, converging to it: {converging}), {elapsed:.2?}",
            deviations.iter().map(|d| format!("{d:.3e}")).collect::<Vec<_>>(),
            FOCK_AMPLITUDES,
            shrink.iter().map(|s| format!("{s:.3}")).collect::<Vec<_>>()
        ),
    )
}

/// `int (d f_n / dt) f_m dz` by Gauss-Legendre quadrature for unit rates.
fn overlap(n: u32, m: u32, l: f64, eta_dot: f64, l_dot: f64) -> f64 {
    let rule = CompositeGauss::new(20, 16);
    let norm = (2.0 / l).sqrt();
    let (kn, km) = (n as f64 * PI / l, m as f64 * PI / l);
    rule.integrate(0.0, l, |x| {
        let f_m = norm * (km * x).sin();
        let d_eta = -norm * kn * (kn * x).cos();
        let d_l = -norm * (kn * x).sin() / (2.0 * l) - norm * (kn * x).cos() * kn * x / l;
        (eta_dot * d_eta + l_dot * d_l) * f_m
    })
}

fn criterion_7() -> Outcome {
    let l = 1.3;
    let g = Geometry::interval(l).unwrap();
    let spectrum = build_spectrum(&g, OVERLAP_MAX_N as f64 * PI / l).unwrap();
    let gm = geometric_matrices(&spectrum).unwrap();
    let (eta_dot, l_dot) = (0.37, -0.21);
    let closed = gm.g() * (l_dot / l) + gm.a() * (eta_dot / l);
    let mut worst: f64 = 0.0;
    let mut anti: f64 = 0.0;
    for i in 0..spectrum.len() {
        for j in 0..spectrum.len() {
            let (n, m) = (spectrum.basis()[i].n, spectrum.basis()[j].n);
            let q = overlap(n, m, l, eta_dot, l_dot);
            let c = closed[[i, j]];
            let gap = if c == 0.0 { q.abs() } else { relative(q, c) };
            worst = worst.max(gap);
            anti = anti.max((c + closed[[j, i]]).abs());
        }
    }
    let t = Trajectory::gaussian(l, 0.01, 1.0, 10.0, 20.0, 400).unwrap();
    for k in 0..40 {
        let m = coupling_matrix(&gm, &t, 0.5 * k as f64).unwrap();
        anti = anti.max((&m + &m.t()).iter().fold(0.0f64, |acc, x| acc.max(x.abs())));
    }
    outcome(
        worst <= OVERLAP_TOLERANCE && anti <= ANTISYMMETRY_TOLERANCE,
        format!(
            "n, m <= {OVERLAP_MAX_N}: largest overlap gap {worst:.2e} (tol {OVERLAP_TOLERANCE}), antisymmetry residual {anti:.1e} (tol {ANTISYMMETRY_TOLERANCE})"
        ),
    )
}

fn criterion_8() -> Outcome {
    let l = 1.0;
    let e = zero_point_energy(l, STATICS_CUTOFF).unwrap();
    let f = casimir_force(l, STATICS_CUTOFF).unwrap();
    let p = parabolic_strength(l, STATICS_CUTOFF).unwrap();
    let e_dev = relative(e.finite_part, -PI / 24.0);
    let f_dev = relative(f.force.abs(), PI / (24.0 * l * l));
    let p_dev = (p.exponent - PARABOLIC_EXPONENT).abs();
    outcome(
        e_dev <= STATICS_TOLERANCE && f_dev <= STATICS_TOLERANCE && p_dev <= PARABOLIC_EXPONENT_TOLERANCE,
        format!(
            "finite energy {:.8} (dev {e_dev:.1e}), |force| {:.8} (dev {f_dev:.1e}), parabolic exponent {:.4} (tol {STATICS_TOLERANCE}, {PARABOLIC_EXPONENT} +/- {PARABOLIC_EXPONENT_TOLERANCE})",
            e.finite_part,
            f.force.abs(),
            p.exponent
        ),
    )
}

fn criterion_9() -> Outcome {
    let config = ScenarioConfig::load(scenario("gaussian_mirror")).unwrap();
    let scenario_obj = config.validate(Command::Verify).unwrap();
    let report = dynamical_casimir::cli::verify_report(&scenario_obj).unwrap();
    let mut missing = Vec::new();
    for name in PROPERTY_CHECKS {
        match report.checks.iter().find(|c| c.name == name) {
            Some(c) if c.status == Status::Pass => {}
            _ => missing.push(name),
        }
    }
    let dir = tempfile::tempdir().unwrap();
    let exe = env!("CARGO_BIN_EXE_dce");
    let code = |config: &std::path::Path| {
        Process::new(exe)
            .args(["verify", "--config"])
            .arg(config)
            .arg("--out")
            .arg(dir.path())
            .output()
            .unwrap()
            .status
            .code()
    };
    let pass_code = code(&scenario("gaussian_mirror"));
    let coarse = dir.path().join("coarse.json");
    let mut coarse_config = config.clone();
    if let Some(dynamical_casimir::cli::TrajectoryConfig::Analytic { steps, .. }) = &mut coarse_config.trajectory {
        *steps = 100;
    }
    std::fs::write(&coarse, coarse_config.to_json().unwrap()).unwrap();
    let guard_code = code(&coarse);
    outcome(
        missing.is_empty() && report.passed && pass_code == Some(0) && guard_code == Some(3),
        format!(
            "property checks failing: {missing:?}; verify exit {pass_code:?} (want 0), coarse grid exit {guard_code:?} (want 3)"
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("resonant cavity N1", criterion_1),
        ("single-mirror energy closure", criterion_2),
        ("two-sided energy factor", criterion_3),
        ("spectral vs time-domain oracle", criterion_4),
        ("reflectionless scattering", criterion_5),
        ("Fock propagation cross-check", criterion_6),
        ("coupling-matrix overlap oracle", criterion_7),
        ("statics", criterion_8),
        ("property suite via verify", criterion_9),
    ];
    let mut failed = Vec::new();
    for (i, (title, run)) in criteria.iter().enumerate() {
        let o = run();
        println!("criterion {} {}: {} - {}", i + 1, if o.passed { "PASS" } else { "FAIL" }, title, o.detail);
        if !o.passed {
            failed.push(i + 1);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria pass", criteria.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
