//! Truncated Fock-space propagation in the interaction picture.
//!
//! With `H = E0 + H1(t)` and operators evolving under `E0`,
//!
//! ```text
//! H1(t) = (1/2) DeltaOmega2_a(t) q_a(t)^2 + p_a(t) M_ab(t) q_b(t)
//! q_a(t) = (a_a e^{-i W_a t} + a_a^+ e^{i W_a t}) / sqrt(2 W_a)
//! p_a(t) = i sqrt(W_a / 2) (a_a^+ e^{i W_a t} - a_a e^{-i W_a t})
//! ```
//!
//! and the state obeys `d psi/dt = -i H1(t) psi`. The basis holds all
//! occupation vectors with total occupation `<= n_max`. Ladder operators are
//! projected onto the basis and the products are symmetrized, so the
//! truncated generator stays Hermitian.

use std::collections::HashMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::coupling::{coupling_matrix, geometric_matrices, GeometricMatrices};
use crate::error::{Error, Result};
use crate::geometry::{build_spectrum_with_size, Geometry, ModeIndex};
use crate::ode::{integrate, Tolerances};
use crate::trajectory::Trajectory;

/// Largest tolerated population on the truncation boundary.
pub const LEAKAGE_LIMIT: f64 = 1e-6;

/// Occupation-number basis with at most `n_max` quanta in total.
#[derive(Debug, Clone)]
pub struct FockSpace {
    modes: usize,
    n_max: usize,
    states: Vec<Vec<u8>>,
    /// `lower[a][s] = Some(t)` when `a_a |s> = sqrt(n_a) |t>`.
    lower: Vec<Vec<Option<usize>>>,
}

impl FockSpace {
    pub fn new(modes: usize, n_max: usize) -> Result<Self> {
        if modes == 0 || n_max == 0 {
            return Err(Error::Domain("Fock space needs at least one mode and one quantum".into()));
        }
        if n_max > u8::MAX as usize {
            return Err(Error::Domain(format!("n_max = {n_max} is too large")));
        }
        let mut states = Vec::new();
        for total in 0..=n_max {
            let mut level = Vec::new();
            compositions(modes, total, &mut vec![0u8; modes], 0, &mut level);
            level.sort();
            level.reverse();
            states.extend(level);
        }
        let index: HashMap<Vec<u8>, usize> = states.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        let lower = (0..modes)
            .map(|a| {
                states
                    .iter()
                    .map(|s| {
                        (s[a] > 0).then(|| {
                            let mut t = s.clone();
                            t[a] -= 1;
                            index[&t]
                        })
                    })
                    .collect()
            })
            .collect();
        Ok(FockSpace { modes, n_max, states, lower })
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn state(&self, i: usize) -> &[u8] {
        &self.states[i]
    }

    pub fn index_of(&self, occupation: &[u8]) -> Option<usize> {
        self.states.iter().position(|s| s == occupation)
    }

    pub fn vacuum(&self) -> Vec<Complex64> {
        let mut v = vec![Complex64::new(0.0, 0.0); self.dim()];
        v[0] = Complex64::new(1.0, 0.0);
        v
    }

    fn total(&self, i: usize) -> usize {
        self.states[i].iter().map(|n| *n as usize).sum()
    }

    /// `a_a psi`
    fn apply_lower(&self, a: usize, psi: &[Complex64], out: &mut [Complex64]) {
        out.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
        for (s, target) in self.lower[a].iter().enumerate() {
            if let Some(t) = target {
                out[*t] += psi[s] * (self.states[s][a] as f64).sqrt();
            }
        }
    }

    /// Projected `a_a^+ psi`, the transpose of the projected lowering operator.
    fn apply_raise(&self, a: usize, psi: &[Complex64], out: &mut [Complex64]) {
        out.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
        for (s, target) in self.lower[a].iter().enumerate() {
            if let Some(t) = target {
                out[s] += psi[*t] * (self.states[s][a] as f64).sqrt();
            }
        }
    }

    /// `c_minus a_a psi + c_plus a_a^+ psi`.
    fn apply_combo(&self, a: usize, c_minus: Complex64, c_plus: Complex64, psi: &[Complex64], scratch: &mut [Complex64], out: &mut [Complex64]) {
        self.apply_lower(a, psi, scratch);
        for (o, s) in out.iter_mut().zip(scratch.iter()) {
            *o = c_minus * s;
        }
        self.apply_raise(a, psi, scratch);
        for (o, s) in out.iter_mut().zip(scratch.iter()) {
            *o += c_plus * s;
        }
    }

    fn q_coeffs(omega: f64, t: f64) -> (Complex64, Complex64) {
        let phase = Complex64::from_polar(1.0, -omega * t);
        let s = 1.0 / (2.0 * omega).sqrt();
        (phase * s, phase.conj() * s)
    }

    fn p_coeffs(omega: f64, t: f64) -> (Complex64, Complex64) {
        let phase = Complex64::from_polar(1.0, -omega * t);
        let s = (omega / 2.0).sqrt();
        let i = Complex64::new(0.0, 1.0);
        (-i * phase * s, i * phase.conj() * s)
    }

    /// `H1(t) psi` for given shifts `DeltaOmega2_a`, coupling `M_ab` and rest frequencies.
    pub fn apply_h1(
        &self,
        t: f64,
        omega0: &[f64],
        delta_omega_sq: &[f64],
        m: &ndarray::Array2<f64>,
        psi: &[Complex64],
    ) -> Vec<Complex64> {
        let d = self.dim();
        let zero = Complex64::new(0.0, 0.0);
        let mut out = vec![zero; d];
        let mut scratch = vec![zero; d];
        let mut first = vec![zero; d];
        let mut second = vec![zero; d];
        for a in 0..self.modes {
            if delta_omega_sq[a] != 0.0 {
                let (cm, cp) = Self::q_coeffs(omega0[a], t);
                self.apply_combo(a, cm, cp, psi, &mut scratch, &mut first);
                self.apply_combo(a, cm, cp, &first, &mut scratch, &mut second);
                let f = 0.5 * delta_omega_sq[a];
                for (o, s) in out.iter_mut().zip(&second) {
                    *o += s * f;
                }
            }
        }
        for a in 0..self.modes {
            for b in 0..self.modes {
                let mab = m[[a, b]];
                if a == b || mab == 0.0 {
                    continue;
                }
                let (qm, qp) = Self::q_coeffs(omega0[b], t);
                let (pm, pp) = Self::p_coeffs(omega0[a], t);
                // (p_a q_b + q_b p_a) / 2
                self.apply_combo(b, qm, qp, psi, &mut scratch, &mut first);
                self.apply_combo(a, pm, pp, &first, &mut scratch, &mut second);
                for (o, s) in out.iter_mut().zip(&second) {
                    *o += s * (0.5 * mab);
                }
                self.apply_combo(a, pm, pp, psi, &mut scratch, &mut first);
                self.apply_combo(b, qm, qp, &first, &mut scratch, &mut second);
                for (o, s) in out.iter_mut().zip(&second) {
                    *o += s * (0.5 * mab);
                }
            }
        }
        out
    }

    pub fn occupation(&self, psi: &[Complex64], a: usize) -> f64 {
        psi.iter().zip(&self.states).map(|(c, s)| c.norm_sqr() * s[a] as f64).sum()
    }

    /// Population of states with total occupation exactly `n_max`.
    pub fn boundary_population(&self, psi: &[Complex64]) -> f64 {
        psi.iter()
            .enumerate()
            .filter(|(i, _)| self.total(*i) == self.n_max)
            .map(|(_, c)| c.norm_sqr())
            .sum()
    }
}

fn compositions(modes: usize, remaining: usize, current: &mut Vec<u8>, pos: usize, out: &mut Vec<Vec<u8>>) {
    if pos == modes - 1 {
        current[pos] = remaining as u8;
        out.push(current.clone());
        return;
    }
    for k in 0..=remaining {
        current[pos] = k as u8;
        compositions(modes, remaining - k, current, pos + 1, out);
    }
}

#[derive(Debug, Clone)]
pub struct FockState {
    pub amplitudes: Vec<Complex64>,
    pub time: f64,
    pub modes: usize,
    pub n_max: usize,
}

impl FockState {
    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FockResult {
    pub modes: Vec<ModeIndex>,
    pub omega0: Vec<f64>,
    /// `<N_a>` at the end of the window.
    pub occupations: Vec<f64>,
    /// Largest `| |psi|^2 - 1 |` along the run.
    pub norm_drift: f64,
    /// Largest population on the truncation boundary along the run.
    pub boundary_population: f64,
    pub steps: usize,
    #[serde(skip)]
    pub state: Option<FockState>,
}

/// Evolves the vacuum of the lowest `k` modes through the window.
pub fn fock_propagate(traj: &Trajectory, geometry: &Geometry, k: usize, n_max: usize) -> Result<FockResult> {
    let basis = build_spectrum_with_size(geometry, k)?;
    let gm = geometric_matrices(&basis)?;
    let space = FockSpace::new(k, n_max)?;
    propagate_in(&space, &gm, traj)
}

fn propagate_in(space: &FockSpace, gm: &GeometricMatrices, traj: &Trajectory) -> Result<FockResult> {
    let basis = gm.spectrum();
    let omega0 = basis.omega0().to_vec();
    let ns: Vec<u32> = basis.basis().iter().map(|m| m.n).collect();
    let d = space.dim();
    let psi0 = space.vacuum();
    let y0: Vec<f64> = psi0.iter().flat_map(|c| [c.re, c.im]).collect();

    let top = omega0.iter().copied().fold(0.0, f64::max);
    let tol = Tolerances {
        rtol: 1e-11,
        atol: 1e-14,
        max_step: (0.05 * 2.0 * std::f64::consts::PI / (2.0 * top)).min(traj.duration() / 50.0),
        ..Tolerances::default()
    };
    let mut failure: Option<Error> = None;
    let mut norm_drift: f64 = 0.0;
    let mut boundary: f64 = 0.0;
    let to_complex = |y: &[f64]| -> Vec<Complex64> { y.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect() };

    let (y, stats) = integrate(
        |t, y, dy| {
            let psi = to_complex(y);
            let coefficients = (|| -> Result<_> {
                let shifts: Result<Vec<f64>> = ns.iter().map(|n| traj.delta_omega_sq_at(*n, t)).collect();
                Ok((shifts?, coupling_matrix(gm, traj, t)?))
            })();
            match coefficients {
                Ok((shifts, m)) => {
                    let h = space.apply_h1(t, &omega0, &shifts, &m, &psi);
                    // -i H psi
                    for (i, v) in h.iter().enumerate() {
                        dy[2 * i] = v.im;
                        dy[2 * i + 1] = -v.re;
                    }
                }
                Err(e) => {
                    failure.get_or_insert(e);
                    dy.iter_mut().for_each(|v| *v = 0.0);
                }
            }
        },
        0.0,
        traj.duration(),
        &y0,
        tol,
        |_, y| {
            let psi = to_complex(y);
            let norm: f64 = psi.iter().map(|c| c.norm_sqr()).sum();
            norm_drift = norm_drift.max((norm - 1.0).abs());
            boundary = boundary.max(space.boundary_population(&psi));
        },
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    if boundary > LEAKAGE_LIMIT {
        return Err(Error::TruncationLeakage { population: boundary, limit: LEAKAGE_LIMIT });
    }
    let psi = to_complex(&y);
    debug_assert_eq!(psi.len(), d);
    let occupations = (0..space.modes()).map(|a| space.occupation(&psi, a)).collect();
    Ok(FockResult {
        modes: basis.basis().to_vec(),
        omega0,
        occupations,
        norm_drift,
        boundary_population: boundary,
        steps: stats.accepted,
        state: Some(FockState { amplitudes: psi, time: traj.duration(), modes: space.modes(), n_max: space.n_max() }),
    })
}
