//! Drivers for the `spectrum`, `radiate` and `statics` subcommands.

use std::path::{Path, PathBuf};

use serde::Serialize;

use super::config::{Command, OutputFormat, Scenario, ScenarioConfig};
use super::output::{csv_string, format_number, json_string, write_file};
use crate::error::{Error, Result};
use crate::response::{
    ford_vilenkin_energy, radiate, resonant_reference, spectrum_full, CreationSpectrum, ModeCreation,
};
use crate::statics::{casimir_force, parabolic_strength, two_sided_force, zero_point_energy};

pub const SPECTRUM_HEADER: [&str; 7] =
    ["mode_n", "transverse_p", "transverse_q", "omega0", "N_squeeze", "N_accel", "N_total"];

/// Above this per-mode count the second-order result is flagged as outside its regime.
pub const PERTURBATIVE_LIMIT: f64 = 0.1;

/// Where and how a run writes its files.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    pub out_dir: PathBuf,
    pub format: OutputFormat,
    pub precision: usize,
}

impl RunOptions {
    /// Command-line values win over the config's output block.
    pub fn resolve(config: &ScenarioConfig, out: Option<&Path>, format: Option<OutputFormat>) -> Self {
        RunOptions {
            out_dir: out
                .map(Path::to_path_buf)
                .or_else(|| config.output.dir.clone())
                .unwrap_or_else(|| PathBuf::from(".")),
            format: format.unwrap_or(config.output.format),
            precision: config.output.precision,
        }
    }
}

/// Files written by a run and its JSON summary.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub files: Vec<PathBuf>,
    pub summary: serde_json::Value,
}

/// The config as embedded in summaries: without the output directory, so
/// that the same run written to two places produces identical files.
pub fn embedded_config(config: &ScenarioConfig) -> ScenarioConfig {
    let mut c = config.clone();
    c.output.dir = None;
    c
}

fn emit<T: Serialize>(
    opts: &RunOptions,
    stem: &str,
    summary: &T,
    csv: Option<(&[&str], Vec<Vec<String>>)>,
) -> Result<RunOutput> {
    let mut files = Vec::new();
    if opts.format.csv() {
        if let Some((header, rows)) = csv {
            files.push(write_file(&opts.out_dir, &format!("{stem}.csv"), &csv_string(header, &rows)?)?);
        }
    }
    let text = json_string(summary, opts.precision)?;
    if opts.format.json() {
        files.push(write_file(&opts.out_dir, &format!("{stem}.json"), &text)?);
    }
    let summary = serde_json::from_str(&text).map_err(|e| Error::Config(e.to_string()))?;
    Ok(RunOutput { files, summary })
}

#[derive(Debug, Clone, Serialize)]
pub struct Totals {
    pub squeeze: f64,
    pub accel: f64,
    pub total: f64,
    /// Total with the exponential cutoff applied; equal to `total` without one.
    pub total_weighted: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Convergence {
    pub reported_modes: usize,
    pub coupling_modes: usize,
    pub max_relative_tail: f64,
    pub tail_warning: bool,
    pub window_truncation_bound: f64,
    pub steps: usize,
    pub dt: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResonantCheck {
    pub n1_closed_form: f64,
    pub n1_spectral: f64,
    pub relative_deviation: f64,
    pub weak_drive: bool,
    pub long_window: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Validity {
    /// Every per-mode count is below the perturbative limit.
    pub perturbative: bool,
    pub resonant: Option<ResonantCheck>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumSummary {
    pub command: Command,
    pub name: Option<String>,
    pub totals: Totals,
    pub cutoff: Option<f64>,
    pub convergence: Convergence,
    pub validity: Validity,
    pub modes: Vec<ModeCreation>,
    pub config: ScenarioConfig,
}

pub fn spectrum_rows(spectrum: &CreationSpectrum, digits: usize) -> Vec<Vec<String>> {
    spectrum
        .modes
        .iter()
        .map(|m| {
            let (p, q) = match m.mode.transverse {
                Some((p, q)) => (p.to_string(), q.to_string()),
                None => (String::new(), String::new()),
            };
            vec![
                m.mode.n.to_string(),
                p,
                q,
                format_number(m.omega0, digits),
                format_number(m.n_squeeze, digits),
                format_number(m.n_accel, digits),
                format_number(m.n_total, digits),
            ]
        })
        .collect()
}

/// Per-mode creation spectrum with totals, convergence metadata and validity flags.
pub fn run_spectrum(scenario: &Scenario, opts: &RunOptions) -> Result<RunOutput> {
    let traj = scenario.trajectory()?;
    let c = &scenario.config.computation;
    let omega_max = c
        .omega_max
        .ok_or_else(|| Error::Config("`computation.omega_max` is required for spectrum".into()))?;
    let spectrum = spectrum_full(traj, &scenario.geometry, omega_max, c.modes, c.cutoff)?;
    let resonant = resonant_reference(traj).map(|r| {
        let n1 = spectrum.modes.first().map(|m| m.n_total).unwrap_or(0.0);
        ResonantCheck {
            n1_closed_form: r.n1,
            n1_spectral: n1,
            relative_deviation: (n1 - r.n1).abs() / r.n1.abs().max(f64::MIN_POSITIVE),
            weak_drive: r.weak_drive,
            long_window: r.long_window,
        }
    });
    let summary = SpectrumSummary {
        command: Command::Spectrum,
        name: scenario.config.name.clone(),
        totals: Totals {
            squeeze: spectrum.total_squeeze,
            accel: spectrum.total_accel,
            total: spectrum.total,
            total_weighted: spectrum.total_weighted,
        },
        cutoff: spectrum.cutoff,
        convergence: Convergence {
            reported_modes: spectrum.modes.len(),
            coupling_modes: spectrum.coupling_modes,
            max_relative_tail: spectrum.max_relative_tail,
            tail_warning: spectrum.any_tail_warning(),
            window_truncation_bound: traj.window_truncation_bound(),
            steps: traj.len() - 1,
            dt: traj.dt(),
        },
        validity: Validity {
            perturbative: spectrum.modes.iter().all(|m| m.n_total < PERTURBATIVE_LIMIT),
            resonant,
        },
        modes: spectrum.modes.clone(),
        config: embedded_config(&scenario.config),
    };
    let rows = spectrum_rows(&spectrum, opts.precision);
    emit(opts, "spectrum", &summary, Some((&SPECTRUM_HEADER, rows)))
}

#[derive(Debug, Clone, Serialize)]
pub struct RadiateSummary {
    pub command: Command,
    pub name: Option<String>,
    pub omega_max: f64,
    pub energy_spectral: f64,
    pub energy_time_domain: f64,
    pub closure_error: f64,
    /// Two-sided energy from the velocity form, twice the one-sided value.
    pub energy_two_sided: f64,
    pub tail_fraction: f64,
    pub window_truncation_bound: f64,
    pub config: ScenarioConfig,
}

/// Single-mirror spectrum and radiated energy.
pub fn run_radiate(scenario: &Scenario, opts: &RunOptions) -> Result<RunOutput> {
    let traj = scenario.trajectory()?;
    let omega_max = scenario.config.computation.radiate_omega_max;
    let r = radiate(traj, omega_max)?;
    let summary = RadiateSummary {
        command: Command::Radiate,
        name: scenario.config.name.clone(),
        omega_max,
        energy_spectral: r.energy_spectral,
        energy_time_domain: r.energy_time_domain,
        closure_error: r.closure_error(),
        energy_two_sided: ford_vilenkin_energy(traj)?,
        tail_fraction: r.tail_fraction,
        window_truncation_bound: traj.window_truncation_bound(),
        config: embedded_config(&scenario.config),
    };
    let d = opts.precision;
    let rows = r
        .omegas
        .iter()
        .zip(&r.density)
        .map(|(w, n)| vec![format_number(*w, d), format_number(*n, d)])
        .collect();
    emit(opts, "radiate", &summary, Some((&["omega", "N_density"], rows)))
}

#[derive(Debug, Clone, Serialize)]
pub struct StaticsRow {
    pub length: f64,
    pub cutoff: f64,
    pub raw_energy: f64,
    pub divergent_coefficient: f64,
    pub finite_energy: f64,
    pub finite_energy_reference: f64,
    pub force: f64,
    pub force_reference: f64,
    pub two_sided_force: Option<f64>,
    pub parabolic_strength: f64,
    pub parabolic_exponent: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct StaticsSummary {
    pub command: Command,
    pub name: Option<String>,
    pub rows: Vec<StaticsRow>,
    pub config: ScenarioConfig,
}

const STATICS_HEADER: [&str; 11] = [
    "length",
    "cutoff",
    "raw_energy",
    "divergent_coefficient",
    "finite_energy",
    "finite_energy_reference",
    "force",
    "force_reference",
    "two_sided_force",
    "parabolic_strength",
    "parabolic_exponent",
];

/// Regularized zero-point energy, Casimir force and parabolic strength for each length.
pub fn run_statics(scenario: &Scenario, opts: &RunOptions) -> Result<RunOutput> {
    use std::f64::consts::PI;
    let s = &scenario.config.computation.statics;
    let lengths = if s.lengths.is_empty() { vec![scenario.geometry.rest_length()] } else { s.lengths.clone() };
    let rows: Result<Vec<StaticsRow>> = lengths
        .iter()
        .map(|&l| {
            let e = zero_point_energy(l, s.cutoff)?;
            let f = casimir_force(l, s.cutoff)?;
            let two = s.box_length.map(|b| two_sided_force(l, b, s.cutoff)).transpose()?;
            let p = parabolic_strength(l, s.cutoff)?;
            Ok(StaticsRow {
                length: l,
                cutoff: s.cutoff,
                raw_energy: e.raw,
                divergent_coefficient: e.divergent_coefficient,
                finite_energy: e.finite_part,
                finite_energy_reference: -PI / (24.0 * l),
                force: f.force,
                force_reference: -PI / (24.0 * l * l),
                two_sided_force: two.map(|t| t.force),
                parabolic_strength: p.value,
                parabolic_exponent: p.exponent,
            })
        })
        .collect();
    let rows = rows?;
    let d = opts.precision;
    let csv_rows = rows
        .iter()
        .map(|r| {
            vec![
                format_number(r.length, d),
                format_number(r.cutoff, d),
                format_number(r.raw_energy, d),
                format_number(r.divergent_coefficient, d),
                format_number(r.finite_energy, d),
                format_number(r.finite_energy_reference, d),
                format_number(r.force, d),
                format_number(r.force_reference, d),
                r.two_sided_force.map(|v| format_number(v, d)).unwrap_or_default(),
                format_number(r.parabolic_strength, d),
                format_number(r.parabolic_exponent, d),
            ]
        })
        .collect();
    let summary = StaticsSummary {
        command: Command::Statics,
        name: scenario.config.name.clone(),
        rows,
        config: embedded_config(&scenario.config),
    };
    emit(opts, "statics", &summary, Some((&STATICS_HEADER, csv_rows)))
}
