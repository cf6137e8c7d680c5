//! Cavity geometries, mode labels and eigenfrequencies.
//!
//! Two geometries are supported: a one-dimensional interval of rest length
//! `l0`, and a slab `interval x rectangle` whose transverse rectangle has
//! Dirichlet walls. Modes factorize into a longitudinal sine with quantum
//! number `n` and a transverse rectangle mode `(p, q)`, and the squared
//! frequency is the sum of the two parts:
//!
//! ```text
//! Omega^2 = (Omega_perp)^2 + (n pi / l)^2,   Omega_perp = pi sqrt((p/Lx)^2 + (q/Ly)^2)
//! ```

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative slack used when testing `Omega <= omega_max`, so that a mode whose
/// frequency equals the ceiling up to rounding is kept.
const CEILING_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Geometry {
    #[serde(rename = "interval_1d")]
    Interval1D { l0: f64 },
    SlabProduct { l0: f64, lx: f64, ly: f64 },
}

impl Geometry {
    pub fn interval(l0: f64) -> Result<Self> {
        let g = Geometry::Interval1D { l0 };
        g.validate()?;
        Ok(g)
    }

    pub fn slab(l0: f64, lx: f64, ly: f64) -> Result<Self> {
        let g = Geometry::SlabProduct { l0, lx, ly };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        let check = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::Domain(format!("{name} must be positive and finite, got {v}")))
            }
        };
        match *self {
            Geometry::Interval1D { l0 } => check("l0", l0),
            Geometry::SlabProduct { l0, lx, ly } => {
                check("l0", l0)?;
                check("lx", lx)?;
                check("ly", ly)
            }
        }
    }

    pub fn rest_length(&self) -> f64 {
        match *self {
            Geometry::Interval1D { l0 } | Geometry::SlabProduct { l0, .. } => l0,
        }
    }

    pub fn has_transverse(&self) -> bool {
        matches!(self, Geometry::SlabProduct { .. })
    }

    /// Transverse frequency of `alpha`; zero for the interval.
    pub fn omega_transverse(&self, alpha: &ModeIndex) -> Result<f64> {
        match (*self, alpha.transverse) {
            (Geometry::Interval1D { .. }, None) => Ok(0.0),
            (Geometry::SlabProduct { lx, ly, .. }, Some((p, q))) => {
                let (a, b) = (p as f64 / lx, q as f64 / ly);
                Ok(PI * (a * a + b * b).sqrt())
            }
            (Geometry::Interval1D { .. }, Some(_)) => Err(Error::Domain(format!(
                "mode {alpha} carries a transverse label but the geometry is a 1D interval"
            ))),
            (Geometry::SlabProduct { .. }, None) => Err(Error::Domain(format!(
                "mode {alpha} lacks the transverse label required by the slab geometry"
            ))),
        }
    }
}

/// Multi-index `(n, r)` of a cavity mode.
///
/// The derived ordering is lexicographic in `(n, transverse)`. Bases are
/// ordered by frequency first; see [`ModeSpectrum`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ModeIndex {
    pub n: u32,
    pub transverse: Option<(u32, u32)>,
}

impl ModeIndex {
    pub fn longitudinal(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("longitudinal quantum number must be >= 1".into()));
        }
        Ok(ModeIndex { n, transverse: None })
    }

    pub fn slab(n: u32, p: u32, q: u32) -> Result<Self> {
        if n == 0 || p == 0 || q == 0 {
            return Err(Error::Domain(format!("mode indices must be >= 1, got ({n}, {p}, {q})")));
        }
        Ok(ModeIndex { n, transverse: Some((p, q)) })
    }

    /// True when both modes share the transverse label (the `delta(r, s)` factor).
    pub fn same_transverse(&self, other: &ModeIndex) -> bool {
        self.transverse == other.transverse
    }
}

impl fmt::Display for ModeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.transverse {
            None => write!(f, "(n={})", self.n),
            Some((p, q)) => write!(f, "(n={}, p={}, q={})", self.n, p, q),
        }
    }
}

fn check_length(name: &str, l: f64) -> Result<()> {
    if l.is_finite() && l > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be positive, got {l}")))
    }
}

/// Longitudinal frequency `n pi / l`.
pub fn omega_parallel(n: u32, l: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("longitudinal quantum number must be >= 1".into()));
    }
    check_length("l", l)?;
    Ok(n as f64 * PI / l)
}

/// Full mode frequency at instantaneous cavity length `l`.
pub fn omega_total(alpha: &ModeIndex, geometry: &Geometry, l: f64) -> Result<f64> {
    let perp = geometry.omega_transverse(alpha)?;
    let par = omega_parallel(alpha.n, l)?;
    if perp == 0.0 {
        Ok(par)
    } else {
        Ok((perp * perp + par * par).sqrt())
    }
}

/// `n^2 pi^2 (1/l_t^2 - 1/l0^2)`, the shift of the squared longitudinal frequency.
pub fn delta_omega_sq(n: u32, l_t: f64, l0: f64) -> Result<f64> {
    check_length("l_t", l_t)?;
    check_length("l0", l0)?;
    if n == 0 {
        return Err(Error::Domain("longitudinal quantum number must be >= 1".into()));
    }
    let k = n as f64 * PI;
    Ok(k * k * (1.0 / (l_t * l_t) - 1.0 / (l0 * l0)))
}

/// Relative squared-length modulation `xi = l0^2 / l^2 - 1`.
pub fn xi(l_t: f64, l0: f64) -> f64 {
    (l0 * l0) / (l_t * l_t) - 1.0
}

/// Truncated, frequency-ordered mode basis of a geometry at rest.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSpectrum {
    geometry: Geometry,
    basis: Vec<ModeIndex>,
    omega0: Vec<f64>,
}

impl ModeSpectrum {
    pub fn geometry(&self) -> &Geometry {
        &self.geometry
    }

    pub fn basis(&self) -> &[ModeIndex] {
        &self.basis
    }

    pub fn omega0(&self) -> &[f64] {
        &self.omega0
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn position(&self, mode: &ModeIndex) -> Option<usize> {
        self.basis.iter().position(|m| m == mode)
    }

    pub fn omega_of(&self, mode: &ModeIndex) -> Option<f64> {
        self.position(mode).map(|i| self.omega0[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ModeIndex, f64)> {
        self.basis.iter().zip(self.omega0.iter().copied())
    }

    /// The first `k` modes of this basis.
    pub fn truncated(&self, k: usize) -> ModeSpectrum {
        let k = k.min(self.len());
        ModeSpectrum {
            geometry: self.geometry,
            basis: self.basis[..k].to_vec(),
            omega0: self.omega0[..k].to_vec(),
        }
    }
}

/// All modes of `geometry` at rest with `Omega0 <= omega_max`, ordered by
/// frequency, then by `(n, p, q)`.
pub fn build_spectrum(geometry: &Geometry, omega_max: f64) -> Result<ModeSpectrum> {
    geometry.validate()?;
    if !(omega_max.is_finite() && omega_max > 0.0) {
        return Err(Error::Domain(format!("omega_max must be positive, got {omega_max}")));
    }
    let ceiling = omega_max * (1.0 + CEILING_SLACK);
    let l0 = geometry.rest_length();
    let n_max = (ceiling * l0 / PI).floor() as u32;

    let mut modes: Vec<(ModeIndex, f64)> = Vec::new();
    match *geometry {
        Geometry::Interval1D { .. } => {
            for n in 1..=n_max {
                let m = ModeIndex { n, transverse: None };
                modes.push((m, omega_total(&m, geometry, l0)?));
            }
        }
        Geometry::SlabProduct { lx, ly, .. } => {
            let p_max = (ceiling * lx / PI).floor() as u32;
            let q_max = (ceiling * ly / PI).floor() as u32;
            for n in 1..=n_max {
                for p in 1..=p_max {
                    for q in 1..=q_max {
                        let m = ModeIndex { n, transverse: Some((p, q)) };
                        let w = omega_total(&m, geometry, l0)?;
                        if w <= ceiling {
                            modes.push((m, w));
                        }
                    }
                }
            }
        }
    }
    if modes.is_empty() {
        return Err(Error::EmptyBasis { omega_max });
    }
    modes.sort_by(|(ma, wa), (mb, wb)| match wa.total_cmp(wb) {
        Ordering::Equal => ma.cmp(mb),
        o => o,
    });
    let (basis, omega0) = modes.into_iter().unzip();
    Ok(ModeSpectrum { geometry: *geometry, basis, omega0 })
}

/// Smallest basis containing at least `k` modes: the ceiling is raised
/// until the basis is large enough, then truncated to exactly `k`.
pub fn build_spectrum_with_size(geometry: &Geometry, k: usize) -> Result<ModeSpectrum> {
    if k == 0 {
        return Err(Error::Domain("basis size must be >= 1".into()));
    }
    let lowest = omega_total(&lowest_mode(geometry), geometry, geometry.rest_length())?;
    let mut omega_max = lowest;
    loop {
        let s = build_spectrum(geometry, omega_max)?;
        if s.len() >= k {
            return Ok(s.truncated(k));
        }
        omega_max *= 1.25;
    }
}

pub fn lowest_mode(geometry: &Geometry) -> ModeIndex {
    ModeIndex {
        n: 1,
        transverse: geometry.has_transverse().then_some((1, 1)),
    }
}
