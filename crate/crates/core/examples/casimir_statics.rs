//! Regularized zero-point energy of an interval, the Casimir force and the
//! cutoff-divergent curvature of the vacuum energy.
//!
//! ```bash
//! cargo run --release --example casimir_statics
//! ```

use std::f64::consts::PI;

use dynamical_casimir::statics::{casimir_force, parabolic_strength, two_sided_force, zero_point_energy};
use dynamical_casimir::Result;

fn main() -> Result<()> {
    let cutoff = 200.0;
    println!("{:>6} {:>14} {:>14} {:>14} {:>14}", "l", "finite part", "-pi/(24 l)", "force", "-pi/(24 l^2)");
    for l in [0.5, 1.0, 2.0, 4.0] {
        let e = zero_point_energy(l, cutoff)?;
        let f = casimir_force(l, cutoff)?;
        println!(
            "{l:>6.2} {:>14.8} {:>14.8} {:>14.8} {:>14.8}",
            e.finite_part,
            -PI / (24.0 * l),
            f.force,
            -PI / (24.0 * l * l)
        );
    }
    let two = two_sided_force(1.0, 10.0, cutoff)?;
    println!("\nmirror at 1 inside a box of 10: force {:.8}", two.force);
    println!("\n{:>8} {:>14} {:>10}", "cutoff", "curvature", "exponent");
    for c in [50.0, 100.0, 200.0, 400.0] {
        let p = parabolic_strength(1.0, c)?;
        println!("{c:>8.0} {:>14.6e} {:>10.4}", p.value, p.exponent);
    }
    Ok(())
}
