//! Frequency projections: sharp half-line cutoffs `P+-`, the high-frequency
//! variants `Q+- = P+- P_{>1}`, and smooth dyadic Littlewood-Paley blocks.

use num_complex::Complex64;

use crate::spectral::field::Field;
use crate::spectral::ops::{apply_odd_multiplier, apply_multiplier};
use crate::spectral::transform::{forward, inverse};

/// Sign of the half-line cutoff.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_f64(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Projection {
    /// Sharp cutoff to `+- xi > 0`.
    Half(Sign),
    /// `Q+- = P+- P_{>1}`.
    HighHalf(Sign),
    /// Dyadic block `P_N`, `N` a power of two.
    Band(f64),
    /// Smooth low-pass `P_{<=N}`.
    LowPass(f64),
    /// Smooth high-pass `P_{>N}`.
    HighPass(f64),
}

/// Smooth Littlewood-Paley bump: `1` for `|xi| <= 1`, `0` for `|xi| >= 2`,
/// C-infinity transition built from `exp(-1/x)` in between. Identified in run
/// metadata as "smoothstep-exp" (any smooth bump with this support works).
pub fn lp_bump(xi: f64) -> f64 {
    let r = xi.abs();
    if r <= 1.0 {
        1.0
    } else if r >= 2.0 {
        0.0
    } else {
        let a = cinf_step(2.0 - r);
        let b = cinf_step(r - 1.0);
        a / (a + b)
    }
}

fn cinf_step(x: f64) -> f64 {
    if x > 0.0 {
        (-1.0 / x).exp()
    } else {
        0.0
    }
}

/// `rho_N(xi) = rho(xi/N) - rho(2 xi/N)`.
pub fn lp_band(xi: f64, n_dyadic: f64) -> f64 {
    lp_bump(xi / n_dyadic) - lp_bump(2.0 * xi / n_dyadic)
}

/// Multiplier value of a projection at frequency `xi`. The sharp half-line
/// cutoffs use `sgn` conventions matching the Hilbert transform: `xi = 0`
/// belongs to neither half.
pub fn projection_symbol(p: Projection, xi: f64) -> f64 {
    match p {
        Projection::Half(s) => {
            if s.as_f64() * xi > 0.0 {
                1.0
            } else {
                0.0
            }
        }
        Projection::HighHalf(s) => {
            projection_symbol(Projection::Half(s), xi) * (1.0 - lp_bump(xi))
        }
        Projection::Band(n) => lp_band(xi, n),
        Projection::LowPass(n) => lp_bump(xi / n),
        Projection::HighPass(n) => 1.0 - lp_bump(xi / n),
    }
}

/// Apply a projection to a field. Half-line projections zero the Nyquist
/// mode (they are built from the odd symbol `sgn`); smooth even symbols
/// keep it.
pub fn project(f: &Field, p: Projection) -> Field {
    let s = forward(f);
    let s = match p {
        Projection::Half(_) | Projection::HighHalf(_) => {
            apply_odd_multiplier(&s, |xi| Complex64::new(projection_symbol(p, xi), 0.0))
        }
        _ => apply_multiplier(&s, |xi| Complex64::new(projection_symbol(p, xi), 0.0)),
    };
    inverse(&s)
}

/// Shorthand for `Q+-`.
pub fn q_pm(f: &Field, sign: Sign) -> Field {
    project(f, Projection::HighHalf(sign))
}

/// Dyadic levels `N = 2, 4, ...` needed to cover the grid's frequency range
/// (so that `P_{<=1} + sum P_N = Id` on represented modes).
pub fn dyadic_levels(max_freq: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut n = 2.0;
    // Blocks up to 2 * max_freq: rho(xi/N) = 1 on the whole grid once N >= max_freq.
    while n / 2.0 < max_freq {
        out.push(n);
        n *= 2.0;
    }
    out
}
