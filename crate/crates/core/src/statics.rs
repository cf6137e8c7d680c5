//! Static vacuum energy of a 1D Dirichlet interval of length `l`.
//!
//! Mode sums are regularized by the exponential cutoff `exp(-W / Lambda)`.
//! For `W_n = n pi / l` and `s = pi / (l Lambda)`,
//!
//! ```text
//! E_Z = (1/2) sum_n W_n exp(-W_n / Lambda) = l Lambda^2 / (2 pi) - pi / (24 l) + O(Lambda^-2)
//! ```
//!
//! The cutoff-independent piece is extracted by fitting a sweep of cutoffs,
//! not by inserting the expansion.

use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Smallest `l Lambda / pi` accepted: the sums must contain many modes
/// below the cutoff for the asymptotic form to hold.
pub const MIN_MODES_BELOW_CUTOFF: f64 = 10.0;

/// Points of the cutoff sweep `[Lambda, 2 Lambda]` used by the fits.
const SWEEP_POINTS: usize = 9;

/// Largest rms fit residual relative to the finite part.
const FIT_TOLERANCE: f64 = 1e-7;

fn check(l: f64, cutoff: f64) -> Result<()> {
    if !(l.is_finite() && l > 0.0) {
        return Err(Error::Domain(format!("length must be positive, got {l}")));
    }
    if !(cutoff.is_finite() && cutoff > 0.0) {
        return Err(Error::Domain(format!("cutoff must be positive, got {cutoff}")));
    }
    if l * cutoff / PI < MIN_MODES_BELOW_CUTOFF {
        return Err(Error::FitQuality(format!(
            "cutoff {cutoff} is too small for length {l}: need l Lambda / pi >= {MIN_MODES_BELOW_CUTOFF}"
        )));
    }
    Ok(())
}

/// Sums `f(n)` for `n = 1, 2, ...` until the exponential weight drops below `1e-18`.
fn mode_sum(l: f64, cutoff: f64, f: impl Fn(f64) -> f64) -> f64 {
    let s = PI / (l * cutoff);
    let n_max = (45.0 / s).ceil() as usize + 10;
    // smallest terms first
    (1..=n_max).rev().map(|n| f(n as f64) * (-(n as f64) * s).exp()).sum()
}

/// `(1/2) sum_n (n pi / l) exp(-n pi / (l Lambda))`.
pub fn raw_zero_point_energy(l: f64, cutoff: f64) -> f64 {
    mode_sum(l, cutoff, |n| 0.5 * n * PI / l)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegularizedEnergy {
    pub length: f64,
    pub cutoff: f64,
    pub raw: f64,
    /// `c2` in the divergent part `c2 l Lambda^2`.
    pub divergent_coefficient: f64,
    pub finite_part: f64,
    /// Change of the finite part between a two- and three-term fit.
    pub remainder_estimate: f64,
    /// Log-log slope of `raw - finite_part` over the sweep.
    pub divergence_exponent: f64,
}

/// Least squares for `y = sum_j c_j x^p_j` with small dense normal equations.
fn fit_powers(xs: &[f64], ys: &[f64], powers: &[i32]) -> (Vec<f64>, f64) {
    let m = powers.len();
    let mut ata = vec![vec![0.0; m]; m];
    let mut aty = vec![0.0; m];
    for (x, y) in xs.iter().zip(ys) {
        let row: Vec<f64> = powers.iter().map(|p| x.powi(*p)).collect();
        for i in 0..m {
            aty[i] += row[i] * y;
            for j in 0..m {
                ata[i][j] += row[i] * row[j];
            }
        }
    }
    let c = solve(ata, aty);
    let rms = (xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let model: f64 = powers.iter().zip(&c).map(|(p, c)| c * x.powi(*p)).sum();
            (model - y).powi(2)
        })
        .sum::<f64>()
        / xs.len() as f64)
        .sqrt();
    (c, rms)
}

fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap();
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|k| a[i][k] * x[k]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    x
}

fn sweep(cutoff: f64) -> Vec<f64> {
    (0..SWEEP_POINTS)
        .map(|k| cutoff * (1.0 + k as f64 / (SWEEP_POINTS - 1) as f64))
        .collect()
}

fn log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let num: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    num / den
}

/// Regularized zero-point energy with its divergent and finite parts.
pub fn zero_point_energy(l: f64, cutoff: f64) -> Result<RegularizedEnergy> {
    check(l, cutoff)?;
    let lambdas = sweep(cutoff);
    let energies: Vec<f64> = lambdas.iter().map(|c| raw_zero_point_energy(l, *c)).collect();
    // fit in the scaled variable x = Lambda / cutoff for conditioning
    let xs: Vec<f64> = lambdas.iter().map(|c| c / cutoff).collect();
    let (c3, rms3) = fit_powers(&xs, &energies, &[2, 0, -2]);
    let (c2, _) = fit_powers(&xs, &energies, &[2, 0]);
    let finite_part = c3[1];
    let scale = finite_part.abs().max(1e-300);
    if !(rms3 / scale <= FIT_TOLERANCE) {
        return Err(Error::FitQuality(format!(
            "three-term fit of the zero-point energy leaves rms residual {rms3:.3e} (finite part {finite_part:.6e})"
        )));
    }
    let divergent_coefficient = c3[0] / (cutoff * cutoff * l);
    let divergent: Vec<f64> = energies.iter().map(|e| e - finite_part).collect();
    Ok(RegularizedEnergy {
        length: l,
        cutoff,
        raw: energies[0],
        divergent_coefficient,
        finite_part,
        remainder_estimate: (c3[1] - c2[1]).abs(),
        divergence_exponent: log_slope(&lambdas, &divergent),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CasimirForce {
    pub length: f64,
    pub cutoff: f64,
    /// `-dE_finite / dl`; negative means attractive.
    pub force: f64,
    /// Difference between Richardson estimates at step `h` and `h/2`.
    pub step_error: f64,
    pub step: f64,
}

/// Richardson-extrapolated central difference of `f` at `x`, also returning
/// the change when the step is halved.
fn richardson_derivative(f: impl Fn(f64) -> Result<f64>, x: f64, h: f64) -> Result<(f64, f64)> {
    let central = |h: f64| -> Result<f64> { Ok((f(x + h)? - f(x - h)?) / (2.0 * h)) };
    let (d1, d2, d3) = (central(h)?, central(h / 2.0)?, central(h / 4.0)?);
    let r1 = (4.0 * d2 - d1) / 3.0;
    let r2 = (4.0 * d3 - d2) / 3.0;
    Ok((r2, (r2 - r1).abs()))
}

/// Relative disagreement between Richardson estimates that counts as unstable.
const STEP_TOLERANCE: f64 = 1e-3;

/// Static Casimir force from the finite part of the zero-point energy.
pub fn casimir_force(l: f64, cutoff: f64) -> Result<CasimirForce> {
    check(l, cutoff)?;
    let h = 0.05 * l;
    check(l - h, cutoff)?;
    let (deriv, err) = richardson_derivative(|x| Ok(zero_point_energy(x, cutoff)?.finite_part), l, h)?;
    if err > STEP_TOLERANCE * deriv.abs() {
        return Err(Error::StepInstability(format!(
            "Richardson estimates of dE/dl differ by {err:.3e} (value {deriv:.6e})"
        )));
    }
    Ok(CasimirForce { length: l, cutoff, force: -deriv, step_error: err, step: h })
}

/// Force on a mirror at distance `l` from one wall of a box of length
/// `box_length`, differentiating the raw regularized sums of both sides.
/// The cutoff-divergent parts of the two cavities cancel in the derivative.
pub fn two_sided_force(l: f64, box_length: f64, cutoff: f64) -> Result<CasimirForce> {
    if !(box_length > l) {
        return Err(Error::Domain(format!("box length {box_length} must exceed the mirror position {l}")));
    }
    check(l, cutoff)?;
    check(box_length - l, cutoff)?;
    let h = 0.05 * l.min(box_length - l);
    let total = |x: f64| Ok(raw_zero_point_energy(x, cutoff) + raw_zero_point_energy(box_length - x, cutoff));
    let (deriv, err) = richardson_derivative(total, l, h)?;
    if err > STEP_TOLERANCE * deriv.abs().max(1e-300) {
        return Err(Error::StepInstability(format!(
            "two-sided Richardson estimates differ by {err:.3e} (value {deriv:.6e})"
        )));
    }
    Ok(CasimirForce { length: l, cutoff, force: -deriv, step_error: err, step: h })
}

/// Single term `(dW_n/dl)^2 / (2 W_n) exp(-W_n / Lambda) = n pi / (2 l^3) exp(-n pi / (l Lambda))`
/// written through the frequency derivative.
pub fn parabolic_term(n: u32, l: f64, cutoff: f64) -> f64 {
    let w = n as f64 * PI / l;
    let dw = -w / l;
    dw * dw / (2.0 * w) * (-w / cutoff).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParabolicStrength {
    pub length: f64,
    pub cutoff: f64,
    /// Vacuum expectation of the second shape derivative of the particle energy.
    pub value: f64,
    /// Log-log slope of the strength over the cutoff sweep.
    pub exponent: f64,
}

/// Curvature that the vacuum energy acquires beyond the second derivative of
/// its expectation value; grows without bound as the cutoff is removed.
pub fn parabolic_strength(l: f64, cutoff: f64) -> Result<ParabolicStrength> {
    check(l, cutoff)?;
    let strength = |c: f64| mode_sum(l, c, |n| n * PI / (2.0 * l * l * l));
    let lambdas = sweep(cutoff);
    let values: Vec<f64> = lambdas.iter().map(|c| strength(*c)).collect();
    Ok(ParabolicStrength {
        length: l,
        cutoff,
        value: values[0],
        exponent: log_slope(&lambdas, &values),
    })
}

/// `<0|d^2 E/dl^2|0> - d^2 <0|E|0>/dl^2`, the strictly positive gap left by
/// the non-commuting derivative and vacuum expectation.
pub fn curvature_gap(l: f64, cutoff: f64) -> Result<f64> {
    Ok(parabolic_strength(l, cutoff)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn raw_sum_matches_geometric_series() {
        let (l, c) = (1.3, 40.0);
        let s = PI / (l * c);
        let closed = PI / (2.0 * l) * (-s).exp() / (1.0 - (-s).exp()).powi(2);
        assert_relative_eq!(raw_zero_point_energy(l, c), closed, max_relative = 1e-13);
    }

    #[test]
    fn parabolic_terms() {
        let (l, c) = (0.8f64, 30.0);
        for n in 1..6u32 {
            let expect = n as f64 * PI / (2.0 * l.powi(3)) * (-(n as f64) * PI / (l * c)).exp();
            assert_relative_eq!(parabolic_term(n, l, c), expect, max_relative = 1e-14);
        }
    }

    #[test]
    fn small_cutoff_rejected() {
        assert!(matches!(zero_point_energy(1.0, 5.0), Err(Error::FitQuality(_))));
        assert!(zero_point_energy(-1.0, 50.0).is_err());
    }

    #[test]
    fn finite_part_scales_inversely() {
        let a = zero_point_energy(1.0, 100.0).unwrap().finite_part;
        let b = zero_point_energy(2.0, 100.0).unwrap().finite_part;
        assert_relative_eq!(b, 0.5 * a, max_relative = 1e-6);
    }
}
