//! Boundary motion on the window `[0, T]`.
//!
//! A [`Trajectory`] carries the displacement `eta(t)` of the cavity as a whole
//! and its length `l(t)`, sampled on a uniform grid together with their time
//! derivatives. Outside the window the boundaries are at rest
//! (`eta = 0`, `l = l0`), so every transform over the window is exact for
//! the physics.
//!
//! Transforms use the convention `phi~(omega) = int_0^T phi(t) exp(+i omega t) dt`
//! evaluated with composite Simpson weights on the sample grid. Queries at
//! frequencies the grid cannot resolve (fewer than 20 samples per period)
//! are refused.

use std::borrow::Cow;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::path::Path;
use std::sync::Mutex;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry;
use crate::quadrature::{fourier_sum, simpson_weights};

/// Minimum number of samples per period of the highest queried frequency.
pub const SAMPLES_PER_PERIOD: f64 = 20.0;

/// Relative tolerance of the rest condition at the window edges.
pub const REST_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "profile", rename_all = "snake_case")]
pub enum Profile {
    /// `l(t) = l0 [1 + epsilon sin(2 omega1 t)]`, `eta = 0`.
    HarmonicLength { epsilon: f64, omega1: f64 },
    /// `eta(t) = a exp(-(t - t_center)^2 / (2 tau^2))`, `l = l0`.
    GaussianDisplacement { amplitude: f64, tau: f64, t_center: f64 },
    /// A frequency profile `Delta Omega^2(t) = 2 nu^2 / cosh^2(nu (t - t_center))`
    /// applied to every mode; the boundaries themselves stay at rest.
    SechSquaredFrequencyBump { nu: f64, t_center: f64 },
    /// Sampled motion ingested from arrays or a CSV file.
    Custom,
}

impl Profile {
    pub fn tag(&self) -> &'static str {
        match self {
            Profile::HarmonicLength { .. } => "harmonic_length",
            Profile::GaussianDisplacement { .. } => "gaussian_displacement",
            Profile::SechSquaredFrequencyBump { .. } => "sech_squared_frequency_bump",
            Profile::Custom => "custom",
        }
    }
}

/// Scalar series that can be transformed over the window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Component {
    Eta,
    EtaDot,
    EtaDdot,
    Length,
    /// `xi = l0^2 / l^2 - 1`.
    Xi,
    /// `l_dot / l`, the weight of the length-change coupling.
    LengthRate,
    /// `eta_dot / l`, the weight of the translation coupling.
    DisplacementRate,
    /// `Delta Omega^2` of longitudinal mode `n`.
    DeltaOmegaSq(u32),
}

/// Instantaneous boundary state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryState {
    pub eta: f64,
    pub l: f64,
    pub eta_dot: f64,
    pub l_dot: f64,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    profile: Profile,
    l0: f64,
    duration: f64,
    dt: f64,
    eta: Vec<f64>,
    eta_dot: Vec<f64>,
    eta_ddot: Vec<f64>,
    l: Vec<f64>,
    l_dot: Vec<f64>,
    weights: Vec<f64>,
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be positive and finite, got {v}")))
    }
}

impl Trajectory {
    fn analytic(profile: Profile, l0: f64, duration: f64, steps: usize) -> Result<Self> {
        positive("l0", l0)?;
        positive("duration", duration)?;
        if steps < 2 {
            return Err(Error::Domain("a trajectory needs at least 2 grid steps".into()));
        }
        let dt = duration / steps as f64;
        let n = steps + 1;
        let mut traj = Trajectory {
            profile,
            l0,
            duration,
            dt,
            eta: vec![0.0; n],
            eta_dot: vec![0.0; n],
            eta_ddot: vec![0.0; n],
            l: vec![l0; n],
            l_dot: vec![0.0; n],
            weights: simpson_weights(n, dt),
        };
        for i in 0..n {
            let s = traj.analytic_state(i as f64 * dt);
            traj.eta[i] = s.0.eta;
            traj.eta_dot[i] = s.0.eta_dot;
            traj.eta_ddot[i] = s.1;
            traj.l[i] = s.0.l;
            traj.l_dot[i] = s.0.l_dot;
        }
        traj.check_positive_length()?;
        traj.check_rest_condition()?;
        Ok(traj)
    }

    pub fn harmonic_length(l0: f64, epsilon: f64, omega1: f64, duration: f64, steps: usize) -> Result<Self> {
        positive("omega1", omega1)?;
        if !(epsilon.is_finite() && epsilon.abs() < 1.0) {
            return Err(Error::Domain(format!("|epsilon| must be < 1, got {epsilon}")));
        }
        Self::analytic(Profile::HarmonicLength { epsilon, omega1 }, l0, duration, steps)
    }

    pub fn gaussian(l0: f64, amplitude: f64, tau: f64, t_center: f64, duration: f64, steps: usize) -> Result<Self> {
        positive("tau", tau)?;
        if !amplitude.is_finite() {
            return Err(Error::Domain("amplitude must be finite".into()));
        }
        Self::analytic(
            Profile::GaussianDisplacement { amplitude, tau, t_center },
            l0,
            duration,
            steps,
        )
    }

    pub fn sech_squared_bump(l0: f64, nu: f64, t_center: f64, duration: f64, steps: usize) -> Result<Self> {
        positive("nu", nu)?;
        Self::analytic(Profile::SechSquaredFrequencyBump { nu, t_center }, l0, duration, steps)
    }

    /// Sampled motion on a uniform grid starting at `t[0] = 0`.
    ///
    /// Derivatives use centered differences with second-order one-sided
    /// stencils at the ends.
    pub fn from_samples(t: &[f64], eta: &[f64], l: &[f64]) -> Result<Self> {
        let n = t.len();
        if n < 4 || eta.len() != n || l.len() != n {
            return Err(Error::Domain(
                "custom trajectory needs at least 4 rows with matching t, eta, l columns".into(),
            ));
        }
        if t[0].abs() > 1e-12 * t[n - 1].abs().max(1.0) {
            return Err(Error::Domain(format!("custom trajectory must start at t = 0, got {}", t[0])));
        }
        let dt = (t[n - 1] - t[0]) / (n - 1) as f64;
        if !(dt > 0.0) {
            return Err(Error::Domain("time column must be strictly increasing".into()));
        }
        if let Some(i) = uniform_violation(t, dt) {
            return Err(Error::Domain(format!("time grid is not uniform at sample {i}")));
        }
        let l0 = l[0];
        positive("l(0)", l0)?;
        let traj = Trajectory {
            profile: Profile::Custom,
            l0,
            duration: t[n - 1] - t[0],
            dt,
            eta: eta.to_vec(),
            eta_dot: first_derivative(eta, dt),
            eta_ddot: second_derivative(eta, dt),
            l: l.to_vec(),
            l_dot: first_derivative(l, dt),
            weights: simpson_weights(n, dt),
        };
        traj.check_positive_length()?;
        traj.check_rest_condition()?;
        Ok(traj)
    }

    /// Reads a CSV file with header `t,eta,l`.
    pub fn from_csv(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let label = path.display().to_string();
        let file_err = |row: usize, message: String| Error::TrajectoryFile {
            path: label.clone(),
            row,
            message,
        };
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_path(path)
            .map_err(|e| file_err(0, e.to_string()))?;
        let headers = reader.headers().map_err(|e| file_err(1, e.to_string()))?.clone();
        let names: Vec<&str> = headers.iter().collect();
        if names != ["t", "eta", "l"] {
            return Err(file_err(1, format!("header must be `t,eta,l`, found `{}`", names.join(","))));
        }
        let (mut t, mut eta, mut l) = (Vec::new(), Vec::new(), Vec::new());
        for (i, rec) in reader.records().enumerate() {
            // row numbers count the header as row 1
            let row = i + 2;
            let rec = rec.map_err(|e| file_err(row, e.to_string()))?;
            if rec.len() != 3 {
                return Err(file_err(row, format!("expected 3 fields, found {}", rec.len())));
            }
            let mut vals = [0.0; 3];
            for (k, field) in rec.iter().enumerate() {
                vals[k] = field
                    .parse::<f64>()
                    .map_err(|_| file_err(row, format!("cannot parse `{field}` as a number")))?;
            }
            t.push(vals[0]);
            eta.push(vals[1]);
            l.push(vals[2]);
        }
        if t.len() < 4 {
            return Err(file_err(t.len() + 1, "need at least 4 data rows".into()));
        }
        for i in 1..t.len() {
            if t[i] <= t[i - 1] {
                return Err(file_err(i + 2, format!("t = {} is not strictly increasing", t[i])));
            }
        }
        let dt = (t[t.len() - 1] - t[0]) / (t.len() - 1) as f64;
        if let Some(i) = uniform_violation(&t, dt) {
            return Err(file_err(
                i + 2,
                format!("non-uniform time grid: t = {} deviates from the uniform step {dt}", t[i]),
            ));
        }
        if let Some(i) = l.iter().position(|v| !(*v > 0.0)) {
            return Err(file_err(i + 2, format!("length must be positive, got {}", l[i])));
        }
        Self::from_samples(&t, &eta, &l).map_err(|e| match e {
            Error::RestCondition(m) => Error::TrajectoryFile { path: label.clone(), row: 0, message: m },
            Error::Domain(m) => Error::TrajectoryFile { path: label.clone(), row: 0, message: m },
            other => other,
        })
    }

    /// Writes the sampled motion as `t,eta,l`.
    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut w = csv::Writer::from_path(path).map_err(|e| Error::Io(e.into()))?;
        w.write_record(["t", "eta", "l"]).map_err(|e| Error::Io(e.into()))?;
        for i in 0..self.len() {
            w.write_record([
                format!("{:.17e}", self.time(i)),
                format!("{:.17e}", self.eta[i]),
                format!("{:.17e}", self.l[i]),
            ])
            .map_err(|e| Error::Io(e.into()))?;
        }
        w.flush()?;
        Ok(())
    }

    fn analytic_state(&self, t: f64) -> (BoundaryState, f64) {
        let l0 = self.l0;
        match self.profile {
            Profile::HarmonicLength { epsilon, omega1 } => {
                let ph = 2.0 * omega1 * t;
                (
                    BoundaryState {
                        eta: 0.0,
                        l: l0 * (1.0 + epsilon * ph.sin()),
                        eta_dot: 0.0,
                        l_dot: 2.0 * epsilon * omega1 * l0 * ph.cos(),
                    },
                    0.0,
                )
            }
            Profile::GaussianDisplacement { amplitude, tau, t_center } => {
                let x = (t - t_center) / tau;
                let g = amplitude * (-0.5 * x * x).exp();
                (
                    BoundaryState { eta: g, l: l0, eta_dot: -g * x / tau, l_dot: 0.0 },
                    g * (x * x - 1.0) / (tau * tau),
                )
            }
            Profile::SechSquaredFrequencyBump { .. } | Profile::Custom => (
                BoundaryState { eta: 0.0, l: l0, eta_dot: 0.0, l_dot: 0.0 },
                0.0,
            ),
        }
    }

    fn check_positive_length(&self) -> Result<()> {
        if let Some(i) = self.l.iter().position(|v| !(*v > 0.0)) {
            return Err(Error::Domain(format!("l(t) must stay positive; l = {} at t = {}", self.l[i], self.time(i))));
        }
        Ok(())
    }

    /// `eta = 0` and `l = l0` at both window edges, up to `REST_TOLERANCE * l0`.
    ///
    /// The harmonic length profile is switched on and off abruptly at the
    /// window edges, so only its start is checked.
    fn check_rest_condition(&self) -> Result<()> {
        let tol = REST_TOLERANCE * self.l0;
        let last = self.len() - 1;
        let edges: &[usize] = match self.profile {
            Profile::HarmonicLength { .. } => &[0],
            _ => &[0, last],
        };
        for &i in edges {
            if self.eta[i].abs() > tol || (self.l[i] - self.l0).abs() > tol {
                return Err(Error::RestCondition(format!(
                    "at t = {}: eta = {:e}, l - l0 = {:e} (tolerance {:e})",
                    self.time(i),
                    self.eta[i],
                    self.l[i] - self.l0,
                    tol
                )));
            }
        }
        if let Profile::SechSquaredFrequencyBump { nu, .. } = self.profile {
            let peak = 2.0 * nu * nu;
            for &i in &[0, last] {
                let v = self.bump(self.time(i));
                if v > REST_TOLERANCE * peak {
                    return Err(Error::RestCondition(format!(
                        "frequency bump has not decayed at t = {}: {:e} > {:e}",
                        self.time(i),
                        v,
                        REST_TOLERANCE * peak
                    )));
                }
            }
        }
        Ok(())
    }

    fn bump(&self, t: f64) -> f64 {
        match self.profile {
            Profile::SechSquaredFrequencyBump { nu, t_center } => {
                let c = (nu * (t - t_center)).cosh();
                2.0 * nu * nu / (c * c)
            }
            _ => 0.0,
        }
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    pub fn rest_length(&self) -> f64 {
        self.l0
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Number of grid points (steps + 1).
    pub fn len(&self) -> usize {
        self.eta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eta.is_empty()
    }

    pub fn time(&self, i: usize) -> f64 {
        i as f64 * self.dt
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.time(i)).collect()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// True when the length never changes (pure translation or frequency bump).
    pub fn is_rigid(&self) -> bool {
        self.l.iter().all(|v| *v == self.l0)
    }

    /// True when the profile drives the mode frequencies directly instead of
    /// through the geometry.
    pub fn is_frequency_profile(&self) -> bool {
        matches!(self.profile, Profile::SechSquaredFrequencyBump { .. })
    }

    /// Boundary state at time `t`: analytic where the profile allows,
    /// otherwise cubic interpolation of the samples and their differences.
    pub fn eval(&self, t: f64) -> Result<BoundaryState> {
        let slack = 1e-12 * self.duration;
        if !(t >= -slack && t <= self.duration + slack) {
            return Err(Error::Domain(format!("t = {t} outside the window [0, {}]", self.duration)));
        }
        let t = t.clamp(0.0, self.duration);
        if self.profile != Profile::Custom {
            return Ok(self.analytic_state(t).0);
        }
        Ok(BoundaryState {
            eta: self.interpolate(&self.eta, t),
            l: self.interpolate(&self.l, t),
            eta_dot: self.interpolate(&self.eta_dot, t),
            l_dot: self.interpolate(&self.l_dot, t),
        })
    }

    /// `Delta Omega^2` of longitudinal mode `n` at time `t`.
    pub fn delta_omega_sq_at(&self, n: u32, t: f64) -> Result<f64> {
        if self.is_frequency_profile() {
            self.eval(t)?;
            return Ok(self.bump(t.clamp(0.0, self.duration)));
        }
        let s = self.eval(t)?;
        geometry::delta_omega_sq(n, s.l, self.l0)
    }

    fn interpolate(&self, values: &[f64], t: f64) -> f64 {
        let n = values.len();
        let x = t / self.dt;
        let i = (x.floor() as usize).min(n - 2);
        let start = i.saturating_sub(1).min(n - 4);
        let nodes = [start, start + 1, start + 2, start + 3];
        let mut acc = 0.0;
        for &j in &nodes {
            let mut basis = 1.0;
            for &k in &nodes {
                if k != j {
                    basis *= (x - k as f64) / (j as f64 - k as f64);
                }
            }
            acc += basis * values[j];
        }
        acc
    }

    /// Samples of a component on the grid.
    pub fn samples(&self, component: Component) -> Result<Cow<'_, [f64]>> {
        Ok(match component {
            Component::Eta => Cow::Borrowed(&self.eta),
            Component::EtaDot => Cow::Borrowed(&self.eta_dot),
            Component::EtaDdot => Cow::Borrowed(&self.eta_ddot),
            Component::Length => Cow::Borrowed(&self.l),
            Component::Xi => Cow::Owned(self.l.iter().map(|l| geometry::xi(*l, self.l0)).collect()),
            Component::LengthRate => {
                Cow::Owned(self.l_dot.iter().zip(&self.l).map(|(d, l)| d / l).collect())
            }
            Component::DisplacementRate => {
                Cow::Owned(self.eta_dot.iter().zip(&self.l).map(|(d, l)| d / l).collect())
            }
            Component::DeltaOmegaSq(n) => {
                if self.is_frequency_profile() {
                    Cow::Owned(self.times().into_iter().map(|t| self.bump(t)).collect())
                } else {
                    let v: Result<Vec<f64>> =
                        self.l.iter().map(|l| geometry::delta_omega_sq(n, *l, self.l0)).collect();
                    Cow::Owned(v?)
                }
            }
        })
    }

    /// Largest frequency the grid resolves with the sampling guard.
    pub fn max_resolvable_frequency(&self) -> f64 {
        2.0 * PI / (SAMPLES_PER_PERIOD * self.dt)
    }

    /// Refuses `omega` if the grid has fewer than 20 samples per period.
    pub fn check_sampling(&self, omega: f64) -> Result<()> {
        check_sampling(self.duration, self.dt, omega)
    }

    /// Windowed transform of an arbitrary series sampled on this grid.
    pub fn transform(&self, values: &[f64], omega: f64) -> Result<Complex64> {
        if omega < 0.0 {
            return Err(Error::Domain(format!("transform frequency must be >= 0, got {omega}")));
        }
        if values.len() != self.len() {
            return Err(Error::Domain("series length does not match the trajectory grid".into()));
        }
        self.check_sampling(omega)?;
        Ok(fourier_sum(&self.weights, values, 0.0, self.dt, omega))
    }

    pub fn windowed_ft(&self, component: Component, omega: f64) -> Result<Complex64> {
        let v = self.samples(component)?;
        self.transform(&v, omega)
    }

    /// `int_0^T phi(t)^2 dt` of a component, by the same Simpson rule.
    pub fn square_integral(&self, component: Component) -> Result<f64> {
        let v = self.samples(component)?;
        Ok(self.weights.iter().zip(v.iter()).map(|(w, x)| w * x * x).sum())
    }

    /// Relative bound on the part of an analytic profile cut off by the window.
    /// Zero when the motion vanishes identically outside the window.
    pub fn window_truncation_bound(&self) -> f64 {
        match self.profile {
            Profile::GaussianDisplacement { tau, t_center, .. } => {
                let d = t_center.min(self.duration - t_center).max(0.0);
                (-(d / tau).powi(2) / 2.0).exp()
            }
            Profile::SechSquaredFrequencyBump { nu, t_center } => {
                let d = t_center.min(self.duration - t_center).max(0.0);
                let c = (nu * d).cosh();
                1.0 / (c * c)
            }
            _ => 0.0,
        }
    }

    /// True when a custom trajectory is too coarse for a trustworthy second
    /// derivative: the second difference is dominated by grid-scale wiggle.
    pub fn second_derivative_is_noisy(&self) -> bool {
        if self.profile != Profile::Custom {
            return false;
        }
        let dd = &self.eta_ddot;
        let scale = dd.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if scale == 0.0 {
            return false;
        }
        let mut sign_changes = 0usize;
        for w in dd.windows(2) {
            if w[0] * w[1] < 0.0 {
                sign_changes += 1;
            }
        }
        sign_changes * 4 > dd.len()
    }
}

pub fn check_sampling(duration: f64, dt: f64, omega: f64) -> Result<()> {
    if omega <= 0.0 {
        return Ok(());
    }
    let max_dt = 2.0 * PI / (SAMPLES_PER_PERIOD * omega);
    if dt > max_dt * (1.0 + 1e-12) {
        return Err(Error::SamplingGuard {
            omega,
            dt,
            max_dt,
            min_steps: minimal_steps(duration, omega),
        });
    }
    Ok(())
}

/// Smallest number of grid steps over `duration` that resolves `omega`.
pub fn minimal_steps(duration: f64, omega: f64) -> usize {
    (duration * SAMPLES_PER_PERIOD * omega / (2.0 * PI)).ceil() as usize
}

fn uniform_violation(t: &[f64], dt: f64) -> Option<usize> {
    let tol = 1e-6 * dt;
    t.iter()
        .enumerate()
        .find(|(i, ti)| (**ti - (t[0] + *i as f64 * dt)).abs() > tol)
        .map(|(i, _)| i)
}

fn first_derivative(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    let mut d = vec![0.0; n];
    for i in 1..n - 1 {
        d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
    }
    d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
    d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
    d
}

fn second_derivative(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    let h2 = h * h;
    let mut d = vec![0.0; n];
    for i in 1..n - 1 {
        d[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) / h2;
    }
    d[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / h2;
    d[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) / h2;
    d
}

/// Memoized transform of one component. Safe to query from several threads.
#[derive(Debug)]
pub struct WindowedFt<'a> {
    trajectory: &'a Trajectory,
    component: Component,
    samples: Vec<f64>,
    cache: Mutex<HashMap<u64, Complex64>>,
}

impl<'a> WindowedFt<'a> {
    pub fn new(trajectory: &'a Trajectory, component: Component) -> Result<Self> {
        let samples = trajectory.samples(component)?.into_owned();
        Ok(WindowedFt { trajectory, component, samples, cache: Mutex::new(HashMap::new()) })
    }

    pub fn component(&self) -> Component {
        self.component
    }

    pub fn at(&self, omega: f64) -> Result<Complex64> {
        let key = omega.to_bits();
        if let Some(v) = self.cache.lock().expect("transform cache poisoned").get(&key) {
            return Ok(*v);
        }
        let v = self.trajectory.transform(&self.samples, omega)?;
        self.cache.lock().expect("transform cache poisoned").insert(key, v);
        Ok(v)
    }

    pub fn cached_len(&self) -> usize {
        self.cache.lock().expect("transform cache poisoned").len()
    }
}
