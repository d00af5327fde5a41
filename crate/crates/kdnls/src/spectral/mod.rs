//! Grids, discrete Fourier transforms, and the Fourier-multiplier and
//! anti-derivative operators everything else is built from.

pub mod antideriv;
pub mod field;
pub mod grid;
pub mod ops;
pub mod products;
pub mod project;
pub mod transform;

pub use antideriv::{antiderivative_left, antiderivative_psi, PsiBump};
pub use field::{Field, Spectrum};
pub use grid::Grid;
pub use ops::{
    apply_multiplier, d_abs, d_dx, d_half, free_propagate, from_profile, half_bracket, hilbert,
    jbracket, to_profile,
};
pub use products::{abs2_dealiased, guard_band_fraction, product, DealiasPolicy};
pub use project::{dyadic_levels, project, q_pm, Projection, Sign};
pub use transform::{forward, inverse};
