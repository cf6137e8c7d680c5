//! Reference computations that check the spectral response independently.
//!
//! - [`timedomain`]: the second-order count as a double time integral,
//!   evaluated through lag autocorrelations instead of transforms.
//! - [`scattering`]: exact Bogoliubov coefficients of a single mode whose
//!   frequency changes in time (squeezing only, no inter-mode coupling).
//! - [`fock`]: Schrödinger propagation of the full quadratic Hamiltonian in a
//!   truncated occupation-number basis.

pub mod fock;
pub mod scattering;
pub mod timedomain;

pub use fock::{fock_propagate, FockResult, FockSpace, FockState};
pub use scattering::{scatter, scattering_n, ScatteringResult};
pub use timedomain::{n_timedomain, timedomain_spectrum, TimeDomainResult};
