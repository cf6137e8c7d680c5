//! Parametric resonance: a unit interval whose length oscillates at twice
//! the fundamental frequency pumps quanta into the first mode.
//!
//! ```bash
//! cargo run --release --example resonant_cavity
//! ```

use std::f64::consts::PI;

use dynamical_casimir::response::{resonant_n1, spectrum_full};
use dynamical_casimir::{Geometry, Result, Trajectory};

fn main() -> Result<()> {
    let (l0, epsilon, omega1) = (1.0, 1e-3, PI);
    let geometry = Geometry::interval(l0)?;
    println!("{:>8} {:>14} {:>14} {:>14}", "w1 T", "N1 spectral", "N1 closed", "N2 / N1");
    for w1t in [25.0, 50.0, 100.0, 200.0] {
        let duration = w1t / omega1;
        let steps = (80.0 * w1t) as usize;
        let traj = Trajectory::harmonic_length(l0, epsilon, omega1, duration, steps)?;
        let spec = spectrum_full(&traj, &geometry, 2.5 * PI, 10, None)?;
        let closed = resonant_n1(epsilon, omega1, duration);
        println!(
            "{w1t:>8.0} {:>14.6e} {:>14.6e} {:>14.3e}",
            spec.modes[0].n_total,
            closed.n1,
            spec.modes[1].n_total / spec.modes[0].n_total
        );
    }
    Ok(())
}
