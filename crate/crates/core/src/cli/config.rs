//! JSON scenario configuration.
//!
//! ```json
//! {
//!   "name": "gaussian_mirror",
//!   "geometry": { "kind": "interval_1d", "l0": 10.0 },
//!   "trajectory": {
//!     "profile": "gaussian_displacement", "amplitude": 0.05, "tau": 1.0, "t_center": 10.0,
//!     "duration": 20.0, "steps": 4000
//!   },
//!   "computation": { "omega_max": 3.2, "modes": 10 },
//!   "output": { "format": "both", "precision": 12 }
//! }
//! ```
//!
//! A sampled trajectory replaces the profile block with `{ "csv": "path/to/file.csv" }`;
//! relative paths resolve against the directory of the config file. Lengths
//! are in the unit declared by `length_unit` and times in the same unit
//! divided by `c`; see the README for the conversion recipe.
//!
//! A JSON summary written by any subcommand embeds the config under
//! `"config"` and is accepted here as a config in its own right.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{build_spectrum, build_spectrum_with_size, Geometry};
use crate::trajectory::{check_sampling, Profile, Trajectory};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Json,
    #[default]
    Both,
}

impl OutputFormat {
    pub fn csv(self) -> bool {
        matches!(self, OutputFormat::Csv | OutputFormat::Both)
    }

    pub fn json(self) -> bool {
        matches!(self, OutputFormat::Json | OutputFormat::Both)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TrajectoryConfig {
    File {
        csv: PathBuf,
    },
    Analytic {
        #[serde(flatten)]
        profile: Profile,
        duration: f64,
        steps: usize,
    },
}

fn default_modes() -> usize {
    10
}

fn default_radiate_omega_max() -> f64 {
    8.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComputationConfig {
    /// Modes with rest frequency up to this value are reported by `spectrum`.
    #[serde(default)]
    pub omega_max: Option<f64>,
    /// Size of the coupling basis the acceleration sums run over.
    #[serde(default = "default_modes")]
    pub modes: usize,
    /// Exponential frequency cutoff applied to mode-summed totals.
    #[serde(default)]
    pub cutoff: Option<f64>,
    /// Upper frequency of the single-mirror spectrum.
    #[serde(default = "default_radiate_omega_max")]
    pub radiate_omega_max: f64,
    #[serde(default)]
    pub statics: StaticsConfig,
    #[serde(default)]
    pub verify: VerifyConfig,
}

impl Default for ComputationConfig {
    fn default() -> Self {
        ComputationConfig {
            omega_max: None,
            modes: default_modes(),
            cutoff: None,
            radiate_omega_max: default_radiate_omega_max(),
            statics: StaticsConfig::default(),
            verify: VerifyConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StaticsConfig {
    /// Plate separations to evaluate; defaults to the rest length.
    #[serde(default)]
    pub lengths: Vec<f64>,
    #[serde(default = "default_statics_cutoff")]
    pub cutoff: f64,
    /// Outer wall position for the two-sided force; omitted means one-sided only.
    #[serde(default)]
    pub box_length: Option<f64>,
}

fn default_statics_cutoff() -> f64 {
    200.0
}

impl Default for StaticsConfig {
    fn default() -> Self {
        StaticsConfig { lengths: Vec::new(), cutoff: default_statics_cutoff(), box_length: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VerifyConfig {
    /// Coupling-basis size for the spectral versus time-domain comparison.
    pub timedomain_modes: usize,
    pub timedomain_tolerance: f64,
    /// Rest frequencies, in units of the bump rate, for the reflectionless check.
    pub reflectionless_ratios: Vec<f64>,
    pub reflectionless_limit: f64,
    pub scattering_modes: usize,
    pub scattering_tolerance: f64,
    pub fock_modes: usize,
    pub fock_n_max: usize,
    pub fock_tolerance: f64,
    /// Counts below this value are too small to compare in relative terms.
    pub min_count: f64,
    /// Above this perturbative count the motion is not small and the Fock comparison is skipped.
    pub fock_max_count: f64,
    /// Modes whose perturbative count is below this fraction of the largest
    /// one are reported but not asserted: higher orders fed by the dominant
    /// mode outweigh their second-order value.
    pub fock_relative_floor: f64,
    pub closure_tolerance: f64,
    pub antisymmetry_tolerance: f64,
    pub scaling_tolerance: f64,
    pub norm_drift_tolerance: f64,
    pub normalization_tolerance: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            timedomain_modes: 10,
            timedomain_tolerance: 1e-6,
            reflectionless_ratios: vec![0.5, 1.0, 2.0, 5.0],
            reflectionless_limit: 1e-8,
            scattering_modes: 4,
            scattering_tolerance: 5e-2,
            fock_modes: 2,
            fock_n_max: 6,
            fock_tolerance: 1e-2,
            min_count: 1e-10,
            fock_max_count: 0.1,
            fock_relative_floor: 1e-3,
            closure_tolerance: 1e-2,
            antisymmetry_tolerance: 1e-12,
            scaling_tolerance: 1e-6,
            norm_drift_tolerance: 1e-8,
            normalization_tolerance: 1e-6,
        }
    }
}

fn default_precision() -> usize {
    12
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<PathBuf>,
    #[serde(default)]
    pub format: OutputFormat,
    /// Significant digits of every number written.
    #[serde(default = "default_precision")]
    pub precision: usize,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig { dir: None, format: OutputFormat::Both, precision: default_precision() }
    }
}

fn default_unit() -> String {
    "m".into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default)]
    pub name: Option<String>,
    /// Length unit of every length in the config; times use the same unit over `c`.
    #[serde(default = "default_unit")]
    pub length_unit: String,
    pub geometry: Geometry,
    #[serde(default)]
    pub trajectory: Option<TrajectoryConfig>,
    #[serde(default)]
    pub computation: ComputationConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

/// Subcommand a config is validated for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Spectrum,
    Radiate,
    Statics,
    Verify,
}

/// A validated config together with the objects it describes.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub config: ScenarioConfig,
    pub geometry: Geometry,
    pub trajectory: Option<Trajectory>,
}

impl Scenario {
    pub fn trajectory(&self) -> Result<&Trajectory> {
        self.trajectory
            .as_ref()
            .ok_or_else(|| Error::Config("this subcommand needs a `trajectory` block".into()))
    }
}

impl ScenarioConfig {
    /// Parses a config or a JSON summary that embeds one.
    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::Config(format!("invalid JSON: {e}")))?;
        let value = match value.get("config") {
            Some(inner) if value.get("geometry").is_none() => inner.clone(),
            _ => value,
        };
        serde_json::from_value(value).map_err(|e| Error::Config(e.to_string()))
    }

    /// Reads a config file; relative trajectory paths resolve against its directory.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut config = Self::from_json(&text)?;
        if let Some(TrajectoryConfig::File { csv }) = &mut config.trajectory {
            if csv.is_relative() {
                if let Some(dir) = path.parent() {
                    *csv = dir.join(&*csv);
                }
            }
        }
        Ok(config)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Config(e.to_string()))
    }

    /// Builds the geometry and trajectory and checks every precondition of
    /// `command` up front, including the sampling guards.
    pub fn validate(&self, command: Command) -> Result<Scenario> {
        self.geometry.validate().map_err(as_config)?;
        let c = &self.computation;
        if !(1..=17).contains(&self.output.precision) {
            return Err(Error::Config(format!("output precision must be in 1..=17, got {}", self.output.precision)));
        }
        let trajectory = match &self.trajectory {
            None => None,
            Some(TrajectoryConfig::File { csv }) => Some(Trajectory::from_csv(csv)?),
            Some(TrajectoryConfig::Analytic { profile, duration, steps }) => {
                Some(build_analytic(&self.geometry, *profile, *duration, *steps)?)
            }
        };
        if let Some(t) = &trajectory {
            let (l0, rest) = (self.geometry.rest_length(), t.rest_length());
            if (l0 - rest).abs() > 1e-12 * l0 {
                return Err(Error::Config(format!(
                    "trajectory rest length {rest} differs from the geometry rest length {l0}"
                )));
            }
        }
        let scenario = Scenario { config: self.clone(), geometry: self.geometry, trajectory };
        match command {
            Command::Spectrum => {
                let traj = scenario.trajectory()?;
                let omega_max = c
                    .omega_max
                    .ok_or_else(|| Error::Config("`computation.omega_max` is required for spectrum".into()))?;
                if !(omega_max > 0.0) {
                    return Err(Error::Config(format!("omega_max must be positive, got {omega_max}")));
                }
                let reported = build_spectrum(&self.geometry, omega_max).map_err(as_config)?;
                if c.modes < reported.len() {
                    return Err(Error::Config(format!(
                        "`computation.modes` = {} is smaller than the {} modes below omega_max",
                        c.modes,
                        reported.len()
                    )));
                }
                let basis = build_spectrum_with_size(&self.geometry, c.modes).map_err(as_config)?;
                let top = basis.omega0().iter().copied().fold(0.0, f64::max);
                check_sampling(traj.duration(), traj.dt(), (2.0 * omega_max).max(omega_max + top))?;
                if let Some(cut) = c.cutoff {
                    if !(cut > 0.0) {
                        return Err(Error::Config(format!("cutoff must be positive, got {cut}")));
                    }
                }
            }
            Command::Radiate => {
                let traj = scenario.trajectory()?;
                if !(c.radiate_omega_max > 0.0) {
                    return Err(Error::Config("`computation.radiate_omega_max` must be positive".into()));
                }
                check_sampling(traj.duration(), traj.dt(), 2.0 * c.radiate_omega_max)?;
            }
            Command::Statics => {
                let s = &c.statics;
                if !(s.cutoff > 0.0) {
                    return Err(Error::Config(format!("statics cutoff must be positive, got {}", s.cutoff)));
                }
                if let Some(l) = s.lengths.iter().find(|l| !(**l > 0.0)) {
                    return Err(Error::Config(format!("statics lengths must be positive, got {l}")));
                }
            }
            Command::Verify => {
                let traj = scenario.trajectory()?;
                let v = &c.verify;
                if v.timedomain_modes == 0 || v.fock_modes == 0 || v.fock_n_max == 0 {
                    return Err(Error::Config("verify mode counts must be positive".into()));
                }
                let k = v.timedomain_modes.max(v.fock_modes).max(v.scattering_modes);
                let basis = build_spectrum_with_size(&self.geometry, k).map_err(as_config)?;
                let top = basis.omega0().iter().copied().fold(0.0, f64::max);
                check_sampling(traj.duration(), traj.dt(), 2.0 * top)?;
                if !traj.is_frequency_profile() {
                    check_sampling(traj.duration(), traj.dt(), 2.0 * c.radiate_omega_max)?;
                }
            }
        }
        Ok(scenario)
    }
}

fn as_config(e: Error) -> Error {
    match e {
        Error::Domain(m) => Error::Config(m),
        Error::EmptyBasis { omega_max } => Error::Config(format!("no mode with frequency <= {omega_max}")),
        other => other,
    }
}

fn build_analytic(geometry: &Geometry, profile: Profile, duration: f64, steps: usize) -> Result<Trajectory> {
    let l0 = geometry.rest_length();
    match profile {
        Profile::HarmonicLength { epsilon, omega1 } => Trajectory::harmonic_length(l0, epsilon, omega1, duration, steps),
        Profile::GaussianDisplacement { amplitude, tau, t_center } => {
            Trajectory::gaussian(l0, amplitude, tau, t_center, duration, steps)
        }
        Profile::SechSquaredFrequencyBump { nu, t_center } => {
            Trajectory::sech_squared_bump(l0, nu, t_center, duration, steps)
        }
        Profile::Custom => Err(Error::Config("a custom trajectory needs a `csv` path".into())),
    }
    .map_err(as_config)
}
