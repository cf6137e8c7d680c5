//! Nonperturbative check: the Fock-space occupation approaches the
//! second-order count as the amplitude shrinks, with a relative deviation
//! quadratic in the amplitude.
//!
//! ```bash
//! cargo run --release --example fock_crosscheck
//! ```

use dynamical_casimir::geometry::build_spectrum_with_size;
use dynamical_casimir::oracle::fock::fock_propagate;
use dynamical_casimir::response::spectrum_full;
use dynamical_casimir::{Geometry, Result, Trajectory};

fn main() -> Result<()> {
    let l0 = 10.0;
    let geometry = Geometry::interval(l0)?;
    let top = build_spectrum_with_size(&geometry, 2)?.omega0()[1];
    let mut previous: Option<f64> = None;
    println!("{:>8} {:>14} {:>14} {:>12} {:>8}", "a", "perturbative", "Fock", "rel dev", "shrink");
    for a in [0.2, 0.1, 0.05, 0.025] {
        let traj = Trajectory::gaussian(l0, a, 1.0, 10.0, 20.0, 4000)?;
        let pert = spectrum_full(&traj, &geometry, top, 2, None)?.modes[0].n_total;
        let fock = fock_propagate(&traj, &geometry, 2, 6)?.occupations[0];
        let dev = (fock - pert).abs() / pert;
        let shrink = previous.map(|p| format!("{:.3}", p / dev)).unwrap_or_default();
        println!("{a:>8.3} {pert:>14.6e} {fock:>14.6e} {dev:>12.3e} {shrink:>8}");
        previous = Some(dev);
    }
    Ok(())
}
