use thiserror::Error;

/// Errors raised by the numerics and the scenario front end.
///
/// Variants fall into two families: input problems (bad geometry, malformed
/// configuration or trajectory files) and numerical guards that refuse to
/// return a result whose accuracy cannot be vouched for.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("empty mode basis: no mode with frequency <= {omega_max}")]
    EmptyBasis { omega_max: f64 },

    #[error(
        "sampling guard: frequency {omega} needs dt <= {max_dt:.6e} but grid has dt = {dt:.6e} \
         (minimal compliant grid: {min_steps} steps over the window)"
    )]
    SamplingGuard {
        omega: f64,
        dt: f64,
        max_dt: f64,
        min_steps: usize,
    },

    #[error("rest condition violated: {0}")]
    RestCondition(String),

    #[error("principal-value misuse: |{omega_a} - {omega_b}| is inside the exclusion width {width}")]
    PrincipalValue {
        omega_a: f64,
        omega_b: f64,
        width: f64,
    },

    #[error("tail bound: {0}")]
    TailBound(String),

    #[error("fit quality: {0}")]
    FitQuality(String),

    #[error("step-size instability: {0}")]
    StepInstability(String),

    #[error("Bogoliubov normalization violated: |alpha|^2 - |beta|^2 - 1 = {residual:.3e}")]
    Normalization { residual: f64 },

    #[error("Fock truncation leakage: boundary population {population:.3e} exceeds {limit:.1e}")]
    TruncationLeakage { population: f64, limit: f64 },

    #[error("integrator failure: {0}")]
    Integrator(String),

    #[error("quadrature resolution: {0}")]
    QuadratureResolution(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("trajectory file {path}, row {row}: {message}")]
    TrajectoryFile {
        path: String,
        row: usize,
        message: String,
    },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors raised by a numerical guard rather than by bad input.
    pub fn is_numerical_guard(&self) -> bool {
        matches!(
            self,
            Error::SamplingGuard { .. }
                | Error::PrincipalValue { .. }
                | Error::TailBound(_)
                | Error::FitQuality(_)
                | Error::StepInstability(_)
                | Error::Normalization { .. }
                | Error::TruncationLeakage { .. }
                | Error::Integrator(_)
                | Error::QuadratureResolution(_)
        )
    }

    /// Short machine-readable name of the guard or error class.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::EmptyBasis { .. } => "empty_basis",
            Error::SamplingGuard { .. } => "sampling_guard",
            Error::RestCondition(_) => "rest_condition",
            Error::PrincipalValue { .. } => "principal_value",
            Error::TailBound(_) => "tail_bound",
            Error::FitQuality(_) => "fit_quality",
            Error::StepInstability(_) => "step_instability",
            Error::Normalization { .. } => "bogoliubov_normalization",
            Error::TruncationLeakage { .. } => "truncation_leakage",
            Error::Integrator(_) => "integrator",
            Error::QuadratureResolution(_) => "quadrature_resolution",
            Error::Config(_) => "config",
            Error::TrajectoryFile { .. } => "trajectory_file",
            Error::Io(_) => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
