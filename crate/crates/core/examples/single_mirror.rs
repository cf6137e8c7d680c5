//! Spectrum and energy radiated by a single mirror with a Gaussian
//! excursion, compared with the time-domain energy formulas.
//!
//! ```bash
//! cargo run --release --example single_mirror
//! ```

use dynamical_casimir::response::{ford_vilenkin_energy, radiate};
use dynamical_casimir::{Result, Trajectory};

fn main() -> Result<()> {
    let traj = Trajectory::gaussian(1.0, 1e-3, 1.0, 10.0, 20.0, 4000)?;
    let r = radiate(&traj, 8.0)?;
    println!("{:>8} {:>14}", "omega", "N(omega)");
    for (w, n) in r.omegas.iter().zip(&r.density).step_by(r.omegas.len() / 16) {
        println!("{w:>8.3} {n:>14.6e}");
    }
    println!("\none-sided energy, spectral     {:.6e}", r.energy_spectral);
    println!("one-sided energy, time domain  {:.6e}", r.energy_time_domain);
    println!("relative closure error         {:.2e}", r.closure_error());
    println!("two-sided energy, velocity form {:.6e}", ford_vilenkin_energy(&traj)?);
    Ok(())
}
