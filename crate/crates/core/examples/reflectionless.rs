//! A sech-squared frequency bump is reflectionless: exact scattering creates
//! no quanta, while the first-order formula leaves a small residual.
//!
//! ```bash
//! cargo run --release --example reflectionless
//! ```

use std::f64::consts::PI;

use dynamical_casimir::oracle::scattering::scattering_n;
use dynamical_casimir::response::n_squeeze;
use dynamical_casimir::geometry::build_spectrum_with_size;
use dynamical_casimir::{Geometry, ModeIndex, Result, Trajectory};

fn main() -> Result<()> {
    let (l0, nu) = (2.0 * PI, 1.0);
    let geometry = Geometry::interval(l0)?;
    let traj = Trajectory::sech_squared_bump(l0, nu, 40.0, 80.0, 16_000)?;
    let spectrum = build_spectrum_with_size(&geometry, 10)?;
    println!("{:>8} {:>14} {:>14} {:>14}", "W / nu", "exact N", "first order", "4pi^2/sinh^2");
    for n in [1, 2, 4, 10] {
        let w = n as f64 * PI / l0;
        let exact = scattering_n(&traj, n, w)?;
        let born = n_squeeze(&ModeIndex::longitudinal(n)?, &traj, &spectrum)?;
        let closed = 4.0 * PI * PI / (PI * w / nu).sinh().powi(2);
        println!("{:>8.2} {:>14.3e} {:>14.6e} {:>14.6e}", w / nu, exact.n_exact, born, closed);
    }
    Ok(())
}
