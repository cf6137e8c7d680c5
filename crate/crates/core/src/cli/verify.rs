//! The `verify` driver: a machine-readable pass/fail report that runs the
//! response module against the three oracles and its structural properties.

use std::f64::consts::PI;

use serde::Serialize;

use super::config::{Command, Scenario, ScenarioConfig};
use super::output::{csv_string, format_number, json_string, write_file};
use super::run::{embedded_config, RunOptions, RunOutput};
use crate::coupling::{coupling_matrix, geometric_matrices, s_matrix};
use crate::error::{Error, Result};
use crate::geometry::{build_spectrum, build_spectrum_with_size, Geometry, ModeSpectrum};
use crate::oracle::{fock_propagate, scatter, scattering_n, timedomain_spectrum, FockResult, ScatteringResult};
use crate::response::{ford_vilenkin_energy, n_squeeze, radiate, spectrum_full, CreationSpectrum};
use crate::trajectory::{Component, Profile, Trajectory};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    /// Measured quantity compared against `tolerance`.
    pub value: Option<f64>,
    pub tolerance: Option<f64>,
    pub detail: String,
    /// Error class when the check could not be evaluated.
    pub error: Option<String>,
    /// True when the failure came from a numerical guard.
    pub guard: bool,
}

impl CheckResult {
    fn measured(name: &str, value: f64, tolerance: f64, detail: String) -> Self {
        let ok = value.is_finite() && value <= tolerance;
        CheckResult {
            name: name.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            value: Some(value),
            tolerance: Some(tolerance),
            detail,
            error: None,
            guard: false,
        }
    }

    fn skipped(name: &str, reason: impl Into<String>) -> Self {
        CheckResult {
            name: name.into(),
            status: Status::Skip,
            value: None,
            tolerance: None,
            detail: reason.into(),
            error: None,
            guard: false,
        }
    }

    fn errored(name: &str, e: &Error) -> Self {
        CheckResult {
            name: name.into(),
            status: Status::Fail,
            value: None,
            tolerance: None,
            detail: e.to_string(),
            error: Some(e.kind().into()),
            guard: e.is_numerical_guard(),
        }
    }
}

/// Propagated and perturbative counts of one mode.
#[derive(Debug, Clone, Serialize)]
pub struct FockRecord {
    pub mode: String,
    pub omega0: f64,
    pub n_perturbative: f64,
    pub n_propagated: f64,
    /// Whether this mode entered the pass/fail comparison.
    pub asserted: bool,
}

/// Exact and first-order counts for one rest frequency of a reflectionless bump.
#[derive(Debug, Clone, Serialize)]
pub struct ReflectionlessRecord {
    pub omega0_over_nu: f64,
    pub n_exact: f64,
    pub normalization_residual: f64,
    pub wronskian_drift: f64,
    /// First-order count from the windowed transform of the bump.
    pub n_born: f64,
    /// `4 pi^2 / sinh^2(pi W / nu)`, the same first-order count on the whole line.
    pub n_born_closed_form: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub command: Command,
    pub name: Option<String>,
    pub passed: bool,
    pub guard_failure: bool,
    pub checks: Vec<CheckResult>,
    pub reflectionless: Vec<ReflectionlessRecord>,
    pub fock: Vec<FockRecord>,
    pub config: ScenarioConfig,
}

impl VerifyReport {
    pub fn failed(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }
}

fn relative_gap(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// Spectrum over a prefix of at least `k` modes that does not split a degenerate level.
fn spectrum_prefix(traj: &Trajectory, geometry: &Geometry, k: usize) -> Result<(ModeSpectrum, CreationSpectrum)> {
    let basis = build_spectrum_with_size(geometry, k)?;
    let omega_max = basis.omega0().iter().copied().fold(0.0, f64::max);
    let reported = build_spectrum(geometry, omega_max)?;
    let spectrum = spectrum_full(traj, geometry, omega_max, reported.len(), None)?;
    Ok((reported, spectrum))
}

/// Same motion with half the displacement, on the same grid.
fn halved(traj: &Trajectory) -> Result<Option<Trajectory>> {
    match *traj.profile() {
        Profile::GaussianDisplacement { amplitude, tau, t_center } => Ok(Some(Trajectory::gaussian(
            traj.rest_length(),
            0.5 * amplitude,
            tau,
            t_center,
            traj.duration(),
            traj.len() - 1,
        )?)),
        Profile::Custom => {
            let eta: Vec<f64> = traj.samples(Component::Eta)?.iter().map(|v| 0.5 * v).collect();
            let l = traj.samples(Component::Length)?;
            Ok(Some(Trajectory::from_samples(&traj.times(), &eta, &l)?))
        }
        _ => Ok(None),
    }
}

struct Runner<'a> {
    scenario: &'a Scenario,
    traj: &'a Trajectory,
    checks: Vec<CheckResult>,
    reflectionless: Vec<ReflectionlessRecord>,
    fock: Vec<FockRecord>,
}

impl Runner<'_> {
    fn record(&mut self, name: &str, outcome: Result<CheckResult>) {
        let check = outcome.unwrap_or_else(|e| CheckResult::errored(name, &e));
        log::info!("{}: {:?} {}", check.name, check.status, check.detail);
        self.checks.push(check);
    }

    fn spectral_block(&mut self) {
        let v = &self.scenario.config.computation.verify;
        let (traj, geometry) = (self.traj, &self.scenario.geometry);
        let outcome = (|| -> Result<(CreationSpectrum, Vec<crate::oracle::TimeDomainResult>)> {
            let (reported, spectral) = spectrum_prefix(traj, geometry, v.timedomain_modes)?;
            let td = timedomain_spectrum(traj, geometry, reported.len())?;
            Ok((spectral, td))
        })();
        let (spectral, td) = match outcome {
            Ok(x) => x,
            Err(e) => {
                for name in ["spectral_vs_timedomain", "timedomain_imaginary_residue", "nonnegativity", "additivity"] {
                    self.checks.push(CheckResult::errored(name, &e));
                }
                self.amplitude_scaling(None);
                return;
            }
        };
        let worst = spectral
            .modes
            .iter()
            .zip(&td)
            .map(|(s, t)| relative_gap(s.n_squeeze, t.n_squeeze).max(relative_gap(s.n_accel, t.n_accel)))
            .fold(0.0, f64::max);
        self.record(
            "spectral_vs_timedomain",
            Ok(CheckResult::measured(
                "spectral_vs_timedomain",
                worst,
                v.timedomain_tolerance,
                format!("largest relative per-mode gap over {} modes", spectral.modes.len()),
            )),
        );
        let residue = td.iter().map(|t| t.imag_residue).fold(0.0, f64::max);
        self.record(
            "timedomain_imaginary_residue",
            Ok(CheckResult::measured(
                "timedomain_imaginary_residue",
                residue,
                1e-12,
                "largest |Im|/|Re| of the double integrals".into(),
            )),
        );
        let min = spectral.modes.iter().flat_map(|m| [m.n_squeeze, m.n_accel]).fold(f64::INFINITY, f64::min);
        self.record(
            "nonnegativity",
            Ok(CheckResult::measured("nonnegativity", (-min).max(0.0), 0.0, format!("smallest count {min:e}"))),
        );
        let split = spectral
            .modes
            .iter()
            .map(|m| (m.n_total - (m.n_squeeze + m.n_accel)).abs())
            .fold(0.0, f64::max);
        self.record(
            "additivity",
            Ok(CheckResult::measured("additivity", split, 0.0, "largest |N - N_S - N_A|".into())),
        );
        self.amplitude_scaling(Some(&spectral));
    }

    fn amplitude_scaling(&mut self, base: Option<&CreationSpectrum>) {
        const NAME: &str = "amplitude_scaling";
        let v = &self.scenario.config.computation.verify;
        if self.traj.is_frequency_profile() {
            self.checks.push(CheckResult::skipped(NAME, "the frequency profile has no displacement amplitude"));
            return;
        }
        if !self.traj.is_rigid() {
            self.checks.push(CheckResult::skipped(
                NAME,
                "the length changes, so the frequency shifts are not linear in the amplitude",
            ));
            return;
        }
        let Some(base) = base else {
            self.checks.push(CheckResult::skipped(NAME, "no baseline spectrum"));
            return;
        };
        let outcome = (|| -> Result<CheckResult> {
            let Some(half) = halved(self.traj)? else {
                return Ok(CheckResult::skipped(NAME, "profile cannot be rescaled"));
            };
            let (_, scaled) = spectrum_prefix(&half, &self.scenario.geometry, v.timedomain_modes)?;
            let worst = base
                .modes
                .iter()
                .zip(&scaled.modes)
                .filter(|(b, _)| b.n_total > 0.0)
                .map(|(b, s)| (b.n_total / (4.0 * s.n_total) - 1.0).abs())
                .fold(0.0, f64::max);
            Ok(CheckResult::measured(
                NAME,
                worst,
                v.scaling_tolerance,
                "largest |N(a) / (4 N(a/2)) - 1|".into(),
            ))
        })();
        self.record(NAME, outcome);
    }

    fn scattering_block(&mut self) {
        let v = self.scenario.config.computation.verify.clone();
        let traj = self.traj;
        let mut residuals: Vec<f64> = Vec::new();
        if let Profile::SechSquaredFrequencyBump { nu, .. } = *traj.profile() {
            let outcome = (|| -> Result<CheckResult> {
                let mut worst: f64 = 0.0;
                for &ratio in &v.reflectionless_ratios {
                    let omega0 = ratio * nu;
                    let r: ScatteringResult = scatter(
                        |t| traj.delta_omega_sq_at(1, t).expect("integrator stays inside the window"),
                        omega0,
                        0.0,
                        traj.duration(),
                    )?;
                    let born = traj.windowed_ft(Component::DeltaOmegaSq(1), 2.0 * omega0)?.norm_sqr()
                        / (4.0 * omega0 * omega0);
                    let s = (PI * omega0 / nu).sinh();
                    self.reflectionless.push(ReflectionlessRecord {
                        omega0_over_nu: ratio,
                        n_exact: r.n_exact,
                        normalization_residual: r.normalization_residual,
                        wronskian_drift: r.wronskian_drift,
                        n_born: born,
                        n_born_closed_form: 4.0 * PI * PI / (s * s),
                    });
                    residuals.push(r.normalization_residual.abs());
                    worst = worst.max(r.n_exact);
                }
                Ok(CheckResult::measured(
                    "scattering_reflectionless",
                    worst,
                    v.reflectionless_limit,
                    format!(
                        "largest exact count over W/nu in {:?}; first-order counts are listed under `reflectionless`",
                        v.reflectionless_ratios
                    ),
                ))
            })();
            self.record("scattering_reflectionless", outcome);
        } else {
            let outcome = (|| -> Result<CheckResult> {
                let basis = build_spectrum_with_size(&self.scenario.geometry, v.scattering_modes)?;
                let mut worst: f64 = 0.0;
                for (mode, w) in basis.iter() {
                    let r = scattering_n(traj, mode.n, w)?;
                    let ns = n_squeeze(mode, traj, &basis)?;
                    residuals.push(r.normalization_residual.abs());
                    if ns.max(r.n_exact) >= v.min_count {
                        worst = worst.max(relative_gap(ns, r.n_exact));
                    }
                }
                Ok(CheckResult::measured(
                    "scattering_vs_squeeze",
                    worst,
                    v.scattering_tolerance,
                    format!("largest relative gap between exact and first-order squeezing counts over {} modes", basis.len()),
                ))
            })();
            self.record("scattering_vs_squeeze", outcome);
        }
        if residuals.is_empty() {
            self.checks.push(CheckResult::skipped("bogoliubov_normalization", "no scattering run completed"));
        } else {
            let worst = residuals.iter().copied().fold(0.0, f64::max);
            self.record(
                "bogoliubov_normalization",
                Ok(CheckResult::measured(
                    "bogoliubov_normalization",
                    worst,
                    v.normalization_tolerance,
                    format!("largest ||alpha|^2 - |beta|^2 - 1| over {} runs", residuals.len()),
                )),
            );
        }
    }

    fn fock_block(&mut self) {
        let v = self.scenario.config.computation.verify.clone();
        let (traj, geometry) = (self.traj, &self.scenario.geometry);
        let perturbative = spectrum_prefix(traj, geometry, v.fock_modes);
        let (_, pert) = match perturbative {
            Ok(x) => x,
            Err(e) => {
                self.checks.push(CheckResult::errored("fock", &e));
                self.checks.push(CheckResult::errored("fock_norm_drift", &e));
                return;
            }
        };
        let largest = pert.modes.iter().map(|m| m.n_total).fold(0.0, f64::max);
        let reason = if largest < v.min_count {
            Some(format!("perturbative counts ({largest:e}) are below {:e}", v.min_count))
        } else if largest > v.fock_max_count {
            Some(format!("perturbative counts ({largest:e}) exceed {:e}; the motion is not small", v.fock_max_count))
        } else {
            None
        };
        if let Some(reason) = reason {
            self.checks.push(CheckResult::skipped("fock", reason.clone()));
            self.checks.push(CheckResult::skipped("fock_norm_drift", reason));
            return;
        }
        let result: Result<FockResult> = fock_propagate(traj, geometry, pert.modes.len(), v.fock_n_max);
        match result {
            Ok(f) => {
                let floor = v.min_count.max(v.fock_relative_floor * largest);
                let mut asserted = 0;
                let mut worst: f64 = 0.0;
                for (m, n) in pert.modes.iter().zip(&f.occupations) {
                    self.fock.push(FockRecord {
                        mode: m.mode.to_string(),
                        omega0: m.omega0,
                        n_perturbative: m.n_total,
                        n_propagated: *n,
                        asserted: m.n_total >= floor,
                    });
                    if m.n_total >= floor {
                        asserted += 1;
                        worst = worst.max((n - m.n_total).abs() / m.n_total);
                    }
                }
                self.record(
                    "fock",
                    Ok(CheckResult::measured(
                        "fock",
                        worst,
                        v.fock_tolerance,
                        format!(
                            "largest relative gap between propagated and perturbative counts over {asserted} of {} modes, n_max = {}",
                            f.occupations.len(),
                            v.fock_n_max
                        ),
                    )),
                );
                self.record(
                    "fock_norm_drift",
                    Ok(CheckResult::measured(
                        "fock_norm_drift",
                        f.norm_drift,
                        v.norm_drift_tolerance,
                        format!("largest ||psi|^2 - 1| over {} steps", f.steps),
                    )),
                );
            }
            Err(e) => {
                self.checks.push(CheckResult::errored("fock", &e));
                self.checks.push(CheckResult::skipped("fock_norm_drift", "propagation did not complete"));
            }
        }
    }

    fn energy_block(&mut self) {
        let c = &self.scenario.config.computation;
        if self.traj.is_frequency_profile() {
            self.checks.push(CheckResult::skipped("energy_closure", "the boundaries do not move"));
            self.checks.push(CheckResult::skipped("two_sided_energy", "the boundaries do not move"));
            return;
        }
        let tol = c.verify.closure_tolerance;
        match radiate(self.traj, c.radiate_omega_max) {
            Ok(r) => {
                self.record(
                    "energy_closure",
                    Ok(CheckResult::measured(
                        "energy_closure",
                        r.closure_error(),
                        tol,
                        format!("spectral {:e} vs time-domain {:e}", r.energy_spectral, r.energy_time_domain),
                    )),
                );
                if r.energy_time_domain == 0.0 {
                    self.checks.push(CheckResult::skipped("two_sided_energy", "no radiated energy"));
                } else {
                    let outcome = ford_vilenkin_energy(self.traj).map(|fv| {
                        CheckResult::measured(
                            "two_sided_energy",
                            relative_gap(fv, 2.0 * r.energy_time_domain),
                            tol,
                            format!("velocity form {fv:e} vs twice the one-sided energy"),
                        )
                    });
                    self.record("two_sided_energy", outcome);
                }
            }
            Err(e) => {
                self.checks.push(CheckResult::errored("energy_closure", &e));
                self.checks.push(CheckResult::skipped("two_sided_energy", "radiation run did not complete"));
            }
        }
    }

    fn matrix_block(&mut self) {
        let v = &self.scenario.config.computation.verify;
        let traj = self.traj;
        let outcome = (|| -> Result<(f64, f64)> {
            let basis = build_spectrum_with_size(&self.scenario.geometry, v.timedomain_modes)?;
            let gm = geometric_matrices(&basis)?;
            let mut anti: f64 = 0.0;
            for m in [gm.a(), gm.g()] {
                anti = anti.max((m + &m.t()).iter().fold(0.0f64, |acc, x| acc.max(x.abs())));
            }
            let mut sym: f64 = 0.0;
            let stride = (traj.len() / 64).max(1);
            for i in (0..traj.len()).step_by(stride) {
                let m = coupling_matrix(&gm, traj, traj.time(i))?;
                let scale = m.iter().fold(0.0f64, |acc, x| acc.max(x.abs())).max(f64::MIN_POSITIVE);
                anti = anti.max((&m + &m.t()).iter().fold(0.0f64, |acc, x| acc.max(x.abs())) / scale);
                let s = s_matrix(&m, basis.omega0())?;
                let s_scale = s.iter().fold(0.0f64, |acc, x| acc.max(x.abs())).max(f64::MIN_POSITIVE);
                let asym = (&s - &s.t()).iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
                let diag = s.diag().iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
                sym = sym.max(asym.max(diag) / s_scale);
            }
            Ok((anti, sym))
        })();
        match outcome {
            Ok((anti, sym)) => {
                let tol = v.antisymmetry_tolerance;
                self.record(
                    "antisymmetry",
                    Ok(CheckResult::measured("antisymmetry", anti, tol, "largest |M + M^T| relative to max |M|".into())),
                );
                self.record(
                    "s_symmetry_hollow",
                    Ok(CheckResult::measured(
                        "s_symmetry_hollow",
                        sym,
                        tol,
                        "largest |S - S^T| or |S_aa| relative to max |S|".into(),
                    )),
                );
            }
            Err(e) => {
                self.checks.push(CheckResult::errored("antisymmetry", &e));
                self.checks.push(CheckResult::errored("s_symmetry_hollow", &e));
            }
        }
    }
}

/// Runs every check on the scenario and collects the report.
pub fn verify_report(scenario: &Scenario) -> Result<VerifyReport> {
    let traj = scenario.trajectory()?;
    let mut runner = Runner { scenario, traj, checks: Vec::new(), reflectionless: Vec::new(), fock: Vec::new() };
    runner.spectral_block();
    runner.scattering_block();
    runner.fock_block();
    runner.energy_block();
    runner.matrix_block();
    let passed = runner.checks.iter().all(|c| c.status != Status::Fail);
    let guard_failure = runner.checks.iter().any(|c| c.status == Status::Fail && c.guard);
    Ok(VerifyReport {
        command: Command::Verify,
        name: scenario.config.name.clone(),
        passed,
        guard_failure,
        checks: runner.checks,
        reflectionless: runner.reflectionless,
        fock: runner.fock,
        config: embedded_config(&scenario.config),
    })
}

/// Writes `verify.json` and `verify.csv` and returns the report.
pub fn run_verify(scenario: &Scenario, opts: &RunOptions) -> Result<(VerifyReport, RunOutput)> {
    let report = verify_report(scenario)?;
    let d = opts.precision;
    let opt = |x: Option<f64>| x.map(|v| format_number(v, d)).unwrap_or_default();
    let rows: Vec<Vec<String>> = report
        .checks
        .iter()
        .map(|c| {
            let status = match c.status {
                Status::Pass => "pass",
                Status::Fail => "fail",
                Status::Skip => "skip",
            };
            vec![c.name.clone(), status.into(), opt(c.value), opt(c.tolerance), c.detail.clone()]
        })
        .collect();
    let mut files = Vec::new();
    if opts.format.csv() {
        let text = csv_string(&["check", "status", "value", "tolerance", "detail"], &rows)?;
        files.push(write_file(&opts.out_dir, "verify.csv", &text)?);
    }
    let text = json_string(&report, d)?;
    if opts.format.json() {
        files.push(write_file(&opts.out_dir, "verify.json", &text)?);
    }
    let summary = serde_json::from_str(&text).map_err(|e| Error::Config(e.to_string()))?;
    Ok((report, RunOutput { files, summary }))
}
