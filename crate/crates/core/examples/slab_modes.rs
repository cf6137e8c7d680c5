//! Mode structure of a three-dimensional slab: frequencies, the transverse
//! selection rule of the coupling, and creation by a length modulation
//! tuned to the lowest mode.
//!
//! ```bash
//! cargo run --release --example slab_modes
//! ```

use dynamical_casimir::coupling::geometric_matrices;
use dynamical_casimir::response::spectrum_full;
use dynamical_casimir::{build_spectrum, Geometry, Result, Trajectory};

fn main() -> Result<()> {
    let geometry = Geometry::slab(1.0, 2.0, 3.0)?;
    let spectrum = build_spectrum(&geometry, 8.0)?;
    let coupling = geometric_matrices(&spectrum)?;
    let basis = spectrum.basis();
    let w = spectrum.omega0();
    println!("{} modes below 8; coupled pairs (G, A):", spectrum.len());
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            let (g, a) = (coupling.g()[[i, j]], coupling.a()[[i, j]]);
            if g != 0.0 || a != 0.0 {
                println!(
                    "{:>16} {:>8.4}  <->  {:>16} {:>8.4}   {g:>8.4} {a:>8.4}",
                    basis[i].to_string(),
                    w[i],
                    basis[j].to_string(),
                    w[j]
                );
            }
        }
    }

    let lowest = spectrum.omega0()[0];
    let omega1 = lowest;
    let duration = 100.0 / omega1;
    let traj = Trajectory::harmonic_length(1.0, 1e-3, omega1, duration, 16_000)?;
    let created = spectrum_full(&traj, &geometry, 6.0, spectrum.len(), None)?;
    println!("\nmodulation at twice {lowest:.5}:");
    for m in &created.modes {
        println!("{:>14} {:>14.6e}", m.mode.to_string(), m.n_total);
    }
    Ok(())
}
