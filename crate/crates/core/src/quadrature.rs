//! Quadrature rules on uniform grids and on intervals.

use num_complex::Complex64;

/// Composite Simpson weights for `n_points` equally spaced samples with step `h`.
///
/// An odd number of intervals is handled by closing the last three intervals
/// with the Simpson 3/8 rule; two points fall back to the trapezoid rule.
pub fn simpson_weights(n_points: usize, h: f64) -> Vec<f64> {
    let mut w = vec![0.0; n_points];
    if n_points < 2 {
        return w;
    }
    let intervals = n_points - 1;
    if intervals == 1 {
        w[0] = 0.5 * h;
        w[1] = 0.5 * h;
        return w;
    }
    let simpson_intervals = if intervals % 2 == 0 { intervals } else { intervals - 3 };
    if simpson_intervals > 0 {
        for i in 0..=simpson_intervals {
            let c = if i == 0 || i == simpson_intervals {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            w[i] += c * h / 3.0;
        }
    }
    if simpson_intervals != intervals {
        let s = simpson_intervals;
        for (j, c) in [1.0, 3.0, 3.0, 1.0].into_iter().enumerate() {
            w[s + j] += c * 3.0 * h / 8.0;
        }
    }
    w
}

/// `sum_i w_i f_i` for precomputed weights.
pub fn weighted_sum(weights: &[f64], values: &[f64]) -> f64 {
    weights.iter().zip(values).map(|(w, v)| w * v).sum()
}

/// `sum_i w_i f_i exp(+i omega t_i)` with `t_i = t0 + i h`.
pub fn fourier_sum(weights: &[f64], values: &[f64], t0: f64, h: f64, omega: f64) -> Complex64 {
    let mut re = 0.0;
    let mut im = 0.0;
    for (i, (w, v)) in weights.iter().zip(values).enumerate() {
        if *v == 0.0 {
            continue;
        }
        let (s, c) = (omega * (t0 + i as f64 * h)).sin_cos();
        let g = w * v;
        re += g * c;
        im += g * s;
    }
    Complex64::new(re, im)
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(order >= 1);
    let n = order;
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let mut p0 = 1.0;
            let mut p1 = 0.0;
            for j in 0..n {
                let p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) as f64 * z * p1 - j as f64 * p2) / (j + 1) as f64;
            }
            dp = n as f64 * (z * p0 - p1) / (z * z - 1.0);
            let dz = p0 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// Composite Gauss–Legendre rule: `panels` equal panels of `order` points.
#[derive(Debug, Clone)]
pub struct CompositeGauss {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    panels: usize,
}

impl CompositeGauss {
    pub fn new(order: usize, panels: usize) -> Self {
        let (nodes, weights) = gauss_legendre(order);
        CompositeGauss { nodes, weights, panels: panels.max(1) }
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        if a == b {
            return 0.0;
        }
        let h = (b - a) / self.panels as f64;
        let mut total = 0.0;
        for p in 0..self.panels {
            let mid = a + (p as f64 + 0.5) * h;
            let half = 0.5 * h;
            let mut s = 0.0;
            for (x, w) in self.nodes.iter().zip(&self.weights) {
                s += w * f(mid + half * x);
            }
            total += s * half;
        }
        total
    }
}

/// Principal value of `int_a^b f(x) dx` where `f` has a simple pole at
/// `c in (a, b)`.
///
/// Symmetric-pair rule: on `[c - d, c + d]` the integrand is folded as
/// `f(c + u) + f(c - u)`, which is regular, and integrated over `u in (0, d]`
/// without ever sampling `u = 0`. The remainder of `[a, b]` is integrated
/// directly.
pub fn principal_value<F: FnMut(f64) -> f64>(
    rule: &CompositeGauss,
    a: f64,
    b: f64,
    c: f64,
    mut f: F,
) -> f64 {
    debug_assert!(a < c && c < b);
    let d = (c - a).min(b - c);
    let core = rule.integrate(0.0, d, |u| f(c + u) + f(c - u));
    let left = if c - d > a { rule.integrate(a, c - d, &mut f) } else { 0.0 };
    let right = if c + d < b { rule.integrate(c + d, b, &mut f) } else { 0.0 };
    core + left + right
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn simpson_is_exact_for_cubics() {
        for n in [2usize, 3, 4, 5, 6, 7, 10, 11] {
            let h = 1.0 / (n - 1) as f64;
            let w = simpson_weights(n, h);
            let v: Vec<f64> = (0..n).map(|i| (i as f64 * h).powi(2)).collect();
            let exact = 1.0 / 3.0;
            if n == 2 {
                assert_relative_eq!(weighted_sum(&w, &v), 0.5, epsilon = 1e-15);
            } else {
                assert_relative_eq!(weighted_sum(&w, &v), exact, epsilon = 1e-14);
                let c: Vec<f64> = (0..n).map(|i| (i as f64 * h).powi(3)).collect();
                assert_relative_eq!(weighted_sum(&w, &c), 0.25, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(8);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(14)).sum();
        assert_relative_eq!(s, 2.0 / 15.0, epsilon = 1e-14);
        assert_relative_eq!(w.iter().sum::<f64>(), 2.0, epsilon = 1e-14);
    }

    #[test]
    fn principal_value_of_reciprocal() {
        // PV int_0^3 dx / (x - 1) = ln 2
        let rule = CompositeGauss::new(10, 8);
        let v = principal_value(&rule, 0.0, 3.0, 1.0, |x| 1.0 / (x - 1.0));
        assert_relative_eq!(v, 2f64.ln(), epsilon = 1e-12);
        // PV int_0^1 e^x / (x - 0.3) dx against a subtraction-based reference
        let reference = {
            let r = CompositeGauss::new(12, 40);
            let c: f64 = 0.3;
            r.integrate(0.0, 1.0, |x| (x.exp() - c.exp()) / (x - c)) + c.exp() * (0.7f64 / 0.3).ln()
        };
        let v = principal_value(&rule, 0.0, 1.0, 0.3, |x| x.exp() / (x - 0.3));
        assert_relative_eq!(v, reference, epsilon = 1e-11);
    }
}
