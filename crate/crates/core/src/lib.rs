//! Vacuum particle creation in cavities with moving boundaries.
//!
//! The crate evaluates, to second order in the boundary displacement, the
//! number of particles a scalar field acquires in each cavity mode when the
//! boundaries move during a finite window `(0, T)` and come back to rest.
//! Each mode's count splits into a *squeezing* part, driven by the change of
//! the mode frequency, and an *acceleration* part, driven by the inter-mode
//! coupling that boundary motion induces.
//!
//! Modules, bottom up:
//!
//! - [`geometry`]: cavity shapes, mode labels, eigenfrequencies.
//! - [`trajectory`]: boundary motion on the window and its windowed transform.
//! - [`coupling`]: the inter-mode coupling matrices and the single-mirror kernel.
//! - [`response`]: per-mode creation spectra, single-mirror radiation, the
//!   resonant-cavity closed form.
//! - [`statics`]: regularized zero-point energy, Casimir force, and the
//!   cutoff-divergent curvature of the vacuum energy.
//! - [`oracle`]: three independent reference computations (time-domain
//!   double integral, exact mode scattering, truncated Fock propagation).
//! - [`cli`]: JSON scenario configs, CSV/JSON writers, and the `spectrum`,
//!   `radiate`, `statics` and `verify` drivers behind the `dce` binary.
//!
//! Natural units (`hbar = c = 1`) throughout.

// `!(x > 0.0)` is used on purpose so that NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod coupling;
pub mod error;
pub mod geometry;
pub mod ode;
pub mod oracle;
pub mod quadrature;
pub mod response;
pub mod statics;
pub mod trajectory;

pub use error::{Error, Result};
pub use geometry::{build_spectrum, Geometry, ModeIndex, ModeSpectrum};
pub use trajectory::{Component, Profile, Trajectory};
