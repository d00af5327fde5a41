//! One-sided anti-derivatives computed by trapezoid cumulative sums in
//! physical space. The symbol `1/(i xi)` is singular at the origin and the
//! operators here are genuinely one-sided, so no multiplier route is used.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::field::Field;
use crate::spectral::grid::Grid;

/// Fraction of leftmost nodes inspected by the decay precondition.
pub const LEFT_DECAY_FRACTION: f64 = 0.05;

/// Default tolerance on the left-boundary samples of the integrand.
pub const LEFT_DECAY_TOL: f64 = 1e-8;

/// Smooth compactly supported unit-mass bump `psi` used by the averaged
/// anti-derivative. Raised cosine, normalized discretely so the grid
/// quadrature of `psi` is exactly 1.
#[derive(Debug, Clone)]
pub struct PsiBump {
    pub center: f64,
    pub halfwidth: f64,
}

impl PsiBump {
    pub fn new(center: f64, halfwidth: f64) -> Result<PsiBump> {
        if !(halfwidth > 0.0) {
            return Err(Error::InvalidPsi(format!(
                "halfwidth = {halfwidth} must be positive"
            )));
        }
        Ok(PsiBump { center, halfwidth })
    }

    /// Default bump for a grid: centered at 0 with halfwidth `L/20`.
    pub fn default_for(grid: &Grid) -> PsiBump {
        PsiBump {
            center: 0.0,
            halfwidth: grid.length() / 20.0,
        }
    }

    fn raw(&self, x: f64) -> f64 {
        let r = (x - self.center) / self.halfwidth;
        if r.abs() >= 1.0 {
            0.0
        } else {
            0.5 * (1.0 + (std::f64::consts::PI * r).cos()) / self.halfwidth
        }
    }

    /// Samples on the grid, discretely normalized to unit mass.
    pub fn samples(&self, grid: &Arc<Grid>) -> Result<Vec<f64>> {
        let half = 0.5 * grid.length();
        if self.center - self.halfwidth <= -half || self.center + self.halfwidth >= half {
            return Err(Error::InvalidPsi(format!(
                "support [{}, {}] not inside the grid interior",
                self.center - self.halfwidth,
                self.center + self.halfwidth
            )));
        }
        let mut vals: Vec<f64> = grid.nodes().map(|x| self.raw(x)).collect();
        let mass: f64 = vals.iter().sum::<f64>() * grid.dx();
        if mass <= 0.0 {
            return Err(Error::InvalidPsi("bump not resolved by the grid".into()));
        }
        for v in &mut vals {
            *v /= mass;
        }
        Ok(vals)
    }

    /// Discrete first moment `sum x_j psi(x_j) dx`.
    pub fn mean(&self, grid: &Arc<Grid>) -> Result<f64> {
        let s = self.samples(grid)?;
        Ok(grid
            .nodes()
            .zip(&s)
            .map(|(x, &p)| x * p)
            .sum::<f64>()
            * grid.dx())
    }
}

/// Trapezoid cumulative integral from the left boundary, approximating
/// `(d/dx)^{-1} f(x) = int_{-inf}^x f`. Returns the integral field together
/// with a warning flag set when the integrand fails the left-decay
/// precondition.
pub fn antiderivative_left(f: &Field, tol: f64) -> (Field, bool) {
    let n = f.n();
    let dx = f.grid.dx();
    let m = ((n as f64 * LEFT_DECAY_FRACTION).ceil() as usize).max(1);
    let left_sup = f.values[..m]
        .iter()
        .map(|v| v.norm())
        .fold(0.0, f64::max);
    let warn = left_sup > tol;

    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for j in 1..n {
        out[j] = out[j - 1] + 0.5 * dx * (f.values[j - 1] + f.values[j]);
    }
    (
        Field {
            grid: f.grid.clone(),
            values: out,
        },
        warn,
    )
}

/// Averaged anti-derivative `g -> int psi(z) int_z^x g(y) dy dz`, which
/// satisfies `d/dx out = g` and `sum_j psi(x_j) out(x_j) dx = 0`.
pub fn antiderivative_psi(f: &Field, psi: &PsiBump) -> Result<Field> {
    let psi_samples = psi.samples(&f.grid)?;
    let dx = f.grid.dx();
    let n = f.n();
    // Cumulative integral from the left boundary as base point; shifting by
    // the psi-average makes the base point irrelevant.
    let mut cum = vec![Complex64::new(0.0, 0.0); n];
    for j in 1..n {
        cum[j] = cum[j - 1] + 0.5 * dx * (f.values[j - 1] + f.values[j]);
    }
    let avg: Complex64 = cum
        .iter()
        .zip(&psi_samples)
        .map(|(&c, &p)| c * p)
        .sum::<Complex64>()
        * dx;
    for c in &mut cum {
        *c -= avg;
    }
    Ok(Field {
        grid: f.grid.clone(),
        values: cum,
    })
}
