//! Pseudospectral laboratory for a derivative nonlinear Schrodinger equation
//! with a Hilbert-transform (kinetic) derivative term on a large periodic box:
//!
//! `i u_t + u_xx = i alpha d_x(|u|^2 u) + i beta d_x(H(|u|^2) u)`.
//!
//! The crate provides the spectral toolbox, an integrating-factor RK4 solver
//! for the free-evolution profile, the frequency-localized gauge transform,
//! long-time phase/scattering extraction, and the diagnostic and verification
//! suites behind the `kdnls` command-line tool.

pub mod diagnostics;
pub mod error;
pub mod gauge;
pub mod io;
pub mod scattering;
pub mod solver;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
