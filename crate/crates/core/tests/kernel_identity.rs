//! Product of two single-mirror kernels integrated against a smooth test
//! function collapses onto the diagonal as the resolution grows.

mod common;

use common::relative;
use dynamical_casimir::coupling::smeared_kernel_product;

fn bump(b: f64) -> f64 {
    (-(b - 2.0).powi(2) / (2.0 * 0.3f64.powi(2))).exp()
}

#[test]
fn smeared_product_tends_to_the_diagonal() {
    let resolutions = [(40.0, 8), (80.0, 16), (160.0, 32), (320.0, 64)];
    for wa in [1.5, 2.0, 2.4] {
        let target = wa * wa * bump(wa);
        let errors: Vec<f64> = resolutions
            .iter()
            .map(|(cut, panels)| relative(smeared_kernel_product(bump, 5.0, wa, *cut, *panels), target))
            .collect();
        for w in errors.windows(2) {
            assert!(w[1] < 0.5 * w[0], "errors {errors:?} at {wa} do not shrink with resolution");
        }
        assert!(errors[3] < 1e-6, "final error {:.3e} at {wa}", errors[3]);
    }
}
