//! Inter-mode coupling induced by moving plates.
//!
//! For plates at `z = eta(t)` and `z = eta(t) + l(t)` the overlap of the time
//! derivative of one instantaneous mode with another is
//!
//! ```text
//! M_ab(t) = (l_dot / l) G_ab + (eta_dot / l) A_ab
//! A_ab = [(-1)^(m+n) - 1] 2mn / (m^2 - n^2) delta(r, s)
//! G_ab = (-1)^(m+n) 2mn / (m^2 - n^2) delta(r, s)
//! ```
//!
//! with `a = (n, r)`, `b = (m, s)` and zero diagonals. The two-particle
//! creation amplitude is governed by the symmetric matrix
//! `S_ab = M_ab (sqrt(W_b / W_a) - sqrt(W_a / W_b)) / 2` built from the rest
//! frequencies `W`.

use ndarray::Array2;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::ModeSpectrum;
use crate::quadrature::{principal_value, CompositeGauss};
use crate::trajectory::{Component, Trajectory};

/// Relative half-width around `omega_a = omega_b` inside which the
/// single-mirror kernel refuses pointwise evaluation.
pub const PV_EXCLUSION: f64 = 1e-9;

/// The dimensionless matrices `A` and `G` on a truncated basis.
#[derive(Debug, Clone)]
pub struct GeometricMatrices {
    spectrum: ModeSpectrum,
    a: Array2<f64>,
    g: Array2<f64>,
}

impl GeometricMatrices {
    pub fn spectrum(&self) -> &ModeSpectrum {
        &self.spectrum
    }

    pub fn a(&self) -> &Array2<f64> {
        &self.a
    }

    pub fn g(&self) -> &Array2<f64> {
        &self.g
    }

    pub fn dim(&self) -> usize {
        self.spectrum.len()
    }
}

pub fn geometric_matrices(spectrum: &ModeSpectrum) -> Result<GeometricMatrices> {
    if spectrum.is_empty() {
        return Err(Error::EmptyBasis { omega_max: 0.0 });
    }
    let k = spectrum.len();
    let basis = spectrum.basis();
    let mut a = Array2::zeros((k, k));
    let mut g = Array2::zeros((k, k));
    for i in 0..k {
        for j in 0..k {
            let (ai, bj) = (&basis[i], &basis[j]);
            if ai.n == bj.n || !ai.same_transverse(bj) {
                continue;
            }
            let (n, m) = (ai.n as f64, bj.n as f64);
            let sign = if (ai.n + bj.n) % 2 == 0 { 1.0 } else { -1.0 };
            let base = 2.0 * m * n / (m * m - n * n);
            a[[i, j]] = (sign - 1.0) * base;
            g[[i, j]] = sign * base;
        }
    }
    Ok(GeometricMatrices { spectrum: spectrum.clone(), a, g })
}

/// `M(t)` from the instantaneous boundary state at time `t`.
pub fn coupling_matrix(geom: &GeometricMatrices, traj: &Trajectory, t: f64) -> Result<Array2<f64>> {
    let s = traj.eval(t)?;
    Ok(combine(geom, s.l_dot / s.l, s.eta_dot / s.l))
}

fn combine(geom: &GeometricMatrices, length_rate: f64, displacement_rate: f64) -> Array2<f64> {
    &geom.g * length_rate + &geom.a * displacement_rate
}

/// `(sqrt(w_b / w_a) - sqrt(w_a / w_b)) / 2`.
pub fn s_factor(w_a: f64, w_b: f64) -> f64 {
    0.5 * ((w_b / w_a).sqrt() - (w_a / w_b).sqrt())
}

pub fn s_matrix(m: &Array2<f64>, omega0: &[f64]) -> Result<Array2<f64>> {
    let k = omega0.len();
    if m.dim() != (k, k) {
        return Err(Error::Domain(format!("M is {:?} but {} frequencies were given", m.dim(), k)));
    }
    if let Some(w) = omega0.iter().find(|w| !(**w > 0.0)) {
        return Err(Error::Domain(format!("rest frequencies must be positive, got {w}")));
    }
    let mut s = Array2::zeros((k, k));
    for i in 0..k {
        for j in 0..k {
            if i != j {
                s[[i, j]] = m[[i, j]] * s_factor(omega0[i], omega0[j]);
            }
        }
    }
    Ok(s)
}

/// Coupling of a truncated basis along a sampled trajectory.
#[derive(Debug, Clone)]
pub struct CouplingSet {
    geom: GeometricMatrices,
    length_rate: Vec<f64>,
    displacement_rate: Vec<f64>,
}

impl CouplingSet {
    pub fn new(geom: GeometricMatrices, traj: &Trajectory) -> Result<Self> {
        if (geom.spectrum().geometry().rest_length() - traj.rest_length()).abs()
            > 1e-12 * traj.rest_length()
        {
            return Err(Error::Domain("geometry and trajectory disagree on the rest length".into()));
        }
        Ok(CouplingSet {
            length_rate: traj.samples(Component::LengthRate)?.into_owned(),
            displacement_rate: traj.samples(Component::DisplacementRate)?.into_owned(),
            geom,
        })
    }

    pub fn geometric(&self) -> &GeometricMatrices {
        &self.geom
    }

    pub fn omega0(&self) -> &[f64] {
        self.geom.spectrum().omega0()
    }

    pub fn len_samples(&self) -> usize {
        self.length_rate.len()
    }

    /// `M` at grid point `i`.
    pub fn m_at(&self, i: usize) -> Array2<f64> {
        combine(&self.geom, self.length_rate[i], self.displacement_rate[i])
    }

    /// `S` at grid point `i`.
    pub fn s_at(&self, i: usize) -> Array2<f64> {
        s_matrix(&self.m_at(i), self.omega0()).expect("basis frequencies are positive")
    }

    /// True if `S_ab` vanishes identically along the trajectory.
    pub fn entry_is_zero(&self, a: usize, b: usize) -> bool {
        a == b || (self.geom.a[[a, b]] == 0.0 && self.geom.g[[a, b]] == 0.0)
    }

    /// Time series of `M_ab`.
    pub fn m_series(&self, a: usize, b: usize) -> Vec<f64> {
        let (ga, aa) = (self.geom.g[[a, b]], self.geom.a[[a, b]]);
        self.length_rate
            .iter()
            .zip(&self.displacement_rate)
            .map(|(u, v)| u * ga + v * aa)
            .collect()
    }

    /// Time series of `S_ab`.
    pub fn s_series(&self, a: usize, b: usize) -> Vec<f64> {
        if a == b {
            return vec![0.0; self.len_samples()];
        }
        let w = self.omega0();
        let f = s_factor(w[a], w[b]);
        self.m_series(a, b).into_iter().map(|m| m * f).collect()
    }
}

/// Kernel of a single mirror bounding a half-line:
/// `eta_dot (2/pi) W_a W_b / (W_a^2 - W_b^2)`.
///
/// The kernel is a principal-value distribution; evaluating it on the
/// diagonal is an error.
pub fn single_mirror_kernel(omega_a: f64, omega_b: f64, eta_dot: f64) -> Result<f64> {
    if !(omega_a > 0.0 && omega_b > 0.0) {
        return Err(Error::Domain(format!("frequencies must be positive, got {omega_a}, {omega_b}")));
    }
    let width = PV_EXCLUSION * omega_a.max(omega_b);
    if (omega_a - omega_b).abs() <= width {
        return Err(Error::PrincipalValue { omega_a, omega_b, width });
    }
    Ok(kernel_unchecked(omega_a, omega_b, eta_dot))
}

fn kernel_unchecked(omega_a: f64, omega_b: f64, eta_dot: f64) -> f64 {
    eta_dot * std::f64::consts::FRAC_2_PI * omega_a * omega_b / (omega_a * omega_a - omega_b * omega_b)
}

/// Smeared form of the kernel-product identity for unit mirror velocity:
///
/// ```text
/// PV int dW_c K(W_a, W_c) [ PV int dW_b K(W_b, W_c) g(W_b) ]  ->  W_a^2 g(W_a)
/// ```
///
/// The inner integral runs over `[0, g_support]`, outside which `g` must be
/// negligible; the outer one over `[0, outer_cutoff]` plus an asymptotic
/// `1/W_c^2` tail estimate. `panels` sets the quadrature resolution of both.
pub fn smeared_kernel_product<G>(g: G, g_support: f64, omega_a: f64, outer_cutoff: f64, panels: usize) -> f64
where
    G: Fn(f64) -> f64 + Sync,
{
    let rule = CompositeGauss::new(10, panels);
    let inner = |gamma: f64| -> f64 {
        let integrand = |b: f64| kernel_unchecked(b, gamma, 1.0) * g(b);
        if gamma < g_support {
            principal_value(&rule, 0.0, g_support, gamma, integrand)
        } else {
            rule.integrate(0.0, g_support, integrand)
        }
    };
    // Outer PV over [0, outer_cutoff], singular at omega_a. Split so the
    // regular stretch beyond 2 omega_a gets its own panels.
    let d = omega_a;
    let core_rule = CompositeGauss::new(10, panels);
    let core = core_rule.integrate(0.0, d, |u| {
        kernel_unchecked(omega_a, omega_a + u, 1.0) * inner(omega_a + u)
            + kernel_unchecked(omega_a, omega_a - u, 1.0) * inner(omega_a - u)
    });
    let far_rule = CompositeGauss::new(10, 4 * panels);
    let nodes: Vec<f64> = {
        let mut xs = Vec::new();
        far_rule.integrate(2.0 * omega_a, outer_cutoff, |x| {
            xs.push(x);
            0.0
        });
        xs
    };
    let values: Vec<f64> = nodes
        .par_iter()
        .map(|x| kernel_unchecked(omega_a, *x, 1.0) * inner(*x))
        .collect();
    let mut it = values.into_iter();
    let far = far_rule.integrate(2.0 * omega_a, outer_cutoff, |_| it.next().expect("node count"));
    let tail = outer_cutoff * kernel_unchecked(omega_a, outer_cutoff, 1.0) * inner(outer_cutoff);
    core + far + tail
}
