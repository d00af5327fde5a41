//! Discrete Fourier transforms matching the continuum convention
//! `u_hat(xi) = (2 pi)^{-1/2} \int e^{-i x xi} u(x) dx` on the periodic box.
//!
//! With nodes `x_j = -L/2 + j dx` the quadrature weight is `dx / sqrt(2 pi)`
//! and the shift to a box centred at zero contributes `e^{i L xi_k / 2} = (-1)^k`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::Result;
use crate::spectral::field::{Field, Spectrum};

const SQRT_2PI: f64 = 2.5066282746310002;

struct PlanCache {
    planner: FftPlanner<f64>,
    forward: HashMap<usize, Arc<dyn Fft<f64>>>,
    inverse: HashMap<usize, Arc<dyn Fft<f64>>>,
}

fn cache() -> &'static Mutex<PlanCache> {
    static CACHE: OnceLock<Mutex<PlanCache>> = OnceLock::new();
    CACHE.get_or_init(|| {
        Mutex::new(PlanCache {
            planner: FftPlanner::new(),
            forward: HashMap::new(),
            inverse: HashMap::new(),
        })
    })
}

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    let mut c = cache().lock().unwrap();
    let PlanCache {
        planner,
        forward,
        inverse: inv,
    } = &mut *c;
    let map = if inverse { inv } else { forward };
    map.entry(n)
        .or_insert_with(|| {
            if inverse {
                planner.plan_fft_inverse(n)
            } else {
                planner.plan_fft_forward(n)
            }
        })
        .clone()
}

/// Forward transform: `coeffs[k] = (dx / sqrt(2 pi)) sum_j u_j e^{-i x_j xi_k}`.
pub fn forward(f: &Field) -> Spectrum {
    let n = f.n();
    let mut buf = f.values.clone();
    plan(n, false).process(&mut buf);
    let scale = f.grid.dx() / SQRT_2PI;
    for (j, c) in buf.iter_mut().enumerate() {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        *c *= scale * sign;
    }
    Spectrum {
        grid: f.grid.clone(),
        coeffs: buf,
    }
}

/// Exact discrete left-inverse of [`forward`].
pub fn inverse(s: &Spectrum) -> Field {
    let n = s.n();
    let scale = s.grid.dxi() / SQRT_2PI;
    let mut buf: Vec<Complex64> = s
        .coeffs
        .iter()
        .enumerate()
        .map(|(j, &c)| {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            c * (scale * sign)
        })
        .collect();
    plan(n, true).process(&mut buf);
    Field {
        grid: s.grid.clone(),
        values: buf,
    }
}

/// Round trip helper used by tests and the dealiased products.
pub fn resample(f: &Field) -> Field {
    inverse(&forward(f))
}

/// Discrete Parseval check value: `sum |u_j|^2 dx - sum |c_k|^2 dxi`.
pub fn parseval_defect(f: &Field) -> Result<f64> {
    let s = forward(f);
    Ok(f.l2_norm().powi(2) - s.l2_norm().powi(2))
}
