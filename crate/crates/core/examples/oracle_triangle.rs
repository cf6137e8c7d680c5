//! A rigidly translated cavity evaluated three independent ways: the
//! spectral formula, the time-domain double integral and Fock-space
//! propagation of the two lowest modes.
//!
//! ```bash
//! cargo run --release --example oracle_triangle
//! ```

use dynamical_casimir::geometry::build_spectrum_with_size;
use dynamical_casimir::oracle::fock::fock_propagate;
use dynamical_casimir::oracle::timedomain::timedomain_spectrum;
use dynamical_casimir::response::spectrum_full;
use dynamical_casimir::{Geometry, Result, Trajectory};

fn main() -> Result<()> {
    let l0 = 10.0;
    let geometry = Geometry::interval(l0)?;
    let traj = Trajectory::gaussian(l0, 0.05, 1.0, 10.0, 20.0, 4000)?;

    let k = 6;
    let top = build_spectrum_with_size(&geometry, k)?.omega0()[k - 1];
    let spectral = spectrum_full(&traj, &geometry, top, k, None)?;
    let timedomain = timedomain_spectrum(&traj, &geometry, k)?;
    println!("{:>6} {:>16} {:>16} {:>10}", "mode", "spectral", "time domain", "rel gap");
    for (s, t) in spectral.modes.iter().zip(&timedomain) {
        let gap = (s.n_total - t.n_total()).abs() / s.n_total;
        println!("{:>6} {:>16.9e} {:>16.9e} {:>10.2e}", s.mode.n, s.n_total, t.n_total(), gap);
    }

    let two = spectrum_full(&traj, &geometry, build_spectrum_with_size(&geometry, 2)?.omega0()[1], 2, None)?;
    let fock = fock_propagate(&traj, &geometry, 2, 6)?;
    println!("\nFock space, two modes, up to 6 quanta (norm drift {:.1e})", fock.norm_drift);
    for (s, f) in two.modes.iter().zip(&fock.occupations) {
        println!("{:>6} {:>16.9e} {:>16.9e} {:>10.2e}", s.mode.n, s.n_total, f, (f - s.n_total).abs() / s.n_total);
    }
    Ok(())
}
