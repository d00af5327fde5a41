//! Modified-scattering analysis: the accumulated phase correction
//! `B(t, xi) = B1 + B2`, extraction of the limit profile `W` and limit phase
//! `Phi`, the resonant/remainder split of the profile equation, the
//! asymptotic-profile reconstruction, and the mass-limit `D_inf` analysis.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::project::lp_band;
use crate::spectral::{half_bracket, hilbert, Field, Grid, Spectrum};

/// Hilbert transform along the frequency axis: the xi-grid is reinterpreted
/// as a physical grid for the spectral Hilbert operator. Input and output are
/// in FFT storage order.
pub fn hilbert_in_frequency(grid: &Arc<Grid>, values_fft_order: &[f64]) -> Result<Vec<f64>> {
    let n = grid.n();
    let dual = Grid::new(n, n as f64 * grid.dxi())?;
    let mut sorted = vec![Complex64::new(0.0, 0.0); n];
    for (pos, j) in grid.ascending_freq_order().enumerate() {
        sorted[pos] = Complex64::new(values_fft_order[j], 0.0);
    }
    let h = hilbert(&Field {
        grid: dual,
        values: sorted,
    });
    let mut out = vec![0.0; n];
    for (pos, j) in grid.ascending_freq_order().enumerate() {
        out[j] = h.values[pos].re;
    }
    Ok(out)
}

/// Accumulated phase arrays `B1(t, xi)`, `B2(t, xi)` (FFT storage order),
/// integrated by trapezoid from `t = 1`.
#[derive(Debug, Clone)]
pub struct PhaseState {
    pub grid: Arc<Grid>,
    pub t_last: f64,
    pub b1: Vec<f64>,
    pub b2: Vec<f64>,
    last_integrand1: Option<Vec<f64>>,
    last_integrand2: Option<Vec<f64>>,
}

impl PhaseState {
    pub fn new(grid: &Arc<Grid>, t0: f64) -> PhaseState {
        let n = grid.n();
        PhaseState {
            grid: grid.clone(),
            t_last: t0,
            b1: vec![0.0; n],
            b2: vec![0.0; n],
            last_integrand1: None,
            last_integrand2: None,
        }
    }

    pub fn b(&self) -> Vec<f64> {
        self.b1.iter().zip(&self.b2).map(|(a, b)| a + b).collect()
    }

    fn integrands(
        &self,
        f_hat: &Spectrum,
        t: f64,
        alpha: f64,
        beta: f64,
    ) -> Result<(Vec<f64>, Vec<f64>)> {
        let abs2 = f_hat.abs2();
        let i1: Vec<f64> = abs2
            .iter()
            .zip(self.grid.freqs())
            .map(|(&a, &xi)| alpha / (2.0 * t) * xi * a)
            .collect();
        let i2 = if beta == 0.0 {
            vec![0.0; abs2.len()]
        } else {
            let h = hilbert_in_frequency(&self.grid, &abs2)?;
            h.iter()
                .zip(self.grid.freqs())
                .map(|(&hv, &xi)| beta / (2.0 * t) * xi * hv)
                .collect()
        };
        Ok((i1, i2))
    }

    /// Trapezoid update from `t_last` to `t_new`. A call with
    /// `t_new == t_last` seeds the stored integrand without advancing.
    pub fn accumulate(
        &mut self,
        f_hat: &Spectrum,
        t_new: f64,
        alpha: f64,
        beta: f64,
    ) -> Result<()> {
        if t_new < self.t_last - 1e-12 {
            return Err(Error::NonMonotoneTime(format!(
                "phase accumulation at t = {t_new} after t_last = {}",
                self.t_last
            )));
        }
        self.grid.check_same(&f_hat.grid)?;
        let (i1, i2) = self.integrands(f_hat, t_new.max(self.t_last), alpha, beta)?;
        if t_new <= self.t_last + 1e-15 {
            self.last_integrand1 = Some(i1);
            self.last_integrand2 = Some(i2);
            return Ok(());
        }
        let (p1, p2) = match (&self.last_integrand1, &self.last_integrand2) {
            (Some(a), Some(b)) => (a.clone(), b.clone()),
            _ => {
                return Err(Error::NonMonotoneTime(
                    "phase state not seeded at t_last".into(),
                ))
            }
        };
        let h = t_new - self.t_last;
        for j in 0..self.b1.len() {
            self.b1[j] += 0.5 * h * (p1[j] + i1[j]);
            self.b2[j] += 0.5 * h * (p2[j] + i2[j]);
        }
        self.t_last = t_new;
        self.last_integrand1 = Some(i1);
        self.last_integrand2 = Some(i2);
        Ok(())
    }
}

/// Scattering outputs serialized into the run summary.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RateFit {
    pub exponent: f64,
    pub stderr: f64,
    pub window: (f64, f64),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScatteringResult {
    /// Frequencies (ascending) on which W and Phi are reported.
    pub xi: Vec<f64>,
    pub w_re: Vec<f64>,
    pub w_im: Vec<f64>,
    /// Limit phase; NaN where |W| is below the reporting mask.
    pub phi: Vec<f64>,
    pub d_infty: f64,
    pub d_infty_rate: Option<RateFit>,
    pub remainder_rate: Option<RateFit>,
    pub corrected_difference_rate: Option<RateFit>,
    pub correction_necessity_factor: Option<f64>,
}

/// `W_T = e^{-i B(T)} f_hat(T)` and
/// `Phi_T = B(T) - [(alpha/2) xi |W_T|^2 + (beta/2) xi H(|W_T|^2)] log T`,
/// both in FFT storage order. `phi` entries where `|W|` is below
/// `mask_rel * max|W|` are NaN (the phase of a vanishing amplitude is noise).
pub fn extract_profile(
    f_hat: &Spectrum,
    phase_b: &[f64],
    t: f64,
    alpha: f64,
    beta: f64,
    mask_rel: f64,
) -> Result<(Vec<Complex64>, Vec<f64>)> {
    if t < 1.0 {
        return Err(Error::InvalidArgument(format!(
            "profile extraction requires t >= 1, got {t}"
        )));
    }
    let grid = &f_hat.grid;
    let w: Vec<Complex64> = f_hat
        .coeffs
        .iter()
        .zip(phase_b)
        .map(|(&c, &b)| c * Complex64::new(0.0, -b).exp())
        .collect();
    let w_abs2: Vec<f64> = w.iter().map(|c| c.norm_sqr()).collect();
    let h = hilbert_in_frequency(grid, &w_abs2)?;
    let wmax = w.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let logt = t.ln();
    let phi: Vec<f64> = (0..w.len())
        .map(|j| {
            if w[j].norm() < mask_rel * wmax {
                f64::NAN
            } else {
                let xi = grid.freq(j);
                phase_b[j] - (0.5 * alpha * xi * w_abs2[j] + 0.5 * beta * xi * h[j]) * logt
            }
        })
        .collect();
    Ok((w, phi))
}

/// Remainder `R1 + R2 = d f_hat/dt - i [(alpha/2t) xi |f_hat|^2
/// + (beta/2t) xi H(|f_hat|^2)] f_hat`, plus the weighted sup
/// `max (1+|xi|)^{1/2} |R1+R2|` over the central band `|xi| <= band`.
pub fn resonant_remainder(
    t: f64,
    f_hat: &Spectrum,
    f_hat_dot: &Spectrum,
    alpha: f64,
    beta: f64,
    band: f64,
) -> Result<(Vec<Complex64>, f64)> {
    if t < 1.0 {
        return Err(Error::InvalidArgument(format!(
            "resonant split normalized from t = 1, got {t}"
        )));
    }
    f_hat.grid.check_same(&f_hat_dot.grid)?;
    let abs2 = f_hat.abs2();
    let h = if beta == 0.0 {
        vec![0.0; abs2.len()]
    } else {
        hilbert_in_frequency(&f_hat.grid, &abs2)?
    };
    let grid = &f_hat.grid;
    let mut rem = Vec::with_capacity(abs2.len());
    let mut wsup = 0.0_f64;
    for j in 0..abs2.len() {
        let xi = grid.freq(j);
        let resonant = Complex64::new(0.0, 1.0)
            * (0.5 * alpha / t * xi * abs2[j] + 0.5 * beta / t * xi * h[j])
            * f_hat.coeffs[j];
        let r = f_hat_dot.coeffs[j] - resonant;
        if xi.abs() <= band {
            wsup = wsup.max(half_bracket(xi) * r.norm());
        }
        rem.push(r);
    }
    Ok((rem, wsup))
}

/// Cubic (Catmull-Rom) interpolation of uniformly spaced samples.
/// `samples` are indexed ascending in xi starting at `xi0` with spacing `dxi`.
fn cubic_interp(samples: &[f64], xi0: f64, dxi: f64, x: f64) -> Option<f64> {
    let pos = (x - xi0) / dxi;
    let i = pos.floor() as isize;
    if i < 1 || (i + 2) as usize >= samples.len() {
        return None;
    }
    let i = i as usize;
    let s = pos - i as f64;
    let (p0, p1, p2, p3) = (samples[i - 1], samples[i], samples[i + 1], samples[i + 2]);
    if !(p0.is_finite() && p1.is_finite() && p2.is_finite() && p3.is_finite()) {
        return None;
    }
    Some(
        p1 + 0.5
            * s
            * (p2 - p0
                + s * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 + s * (3.0 * (p1 - p2) + p3 - p0))),
    )
}

/// Predicted field from the asymptotic expansion:
/// `u(t,x) ~ (2it)^{-1/2} e^{i x^2/4t} W(x/2t)
///   exp(i [ (alpha x/4t)|W|^2 + (beta x/4t) H(|W|^2) ](x/2t) log t + i Phi(x/2t))`.
/// Grid nodes whose `x/2t` falls outside the sampled xi-range are zeroed and
/// counted in the second return value.
pub fn asymptotic_profile(
    t: f64,
    w: &[Complex64],
    phi: &[f64],
    freq_grid: &Arc<Grid>,
    out_grid: &Arc<Grid>,
    alpha: f64,
    beta: f64,
) -> Result<(Field, usize)> {
    if t < 1.0 {
        return Err(Error::InvalidArgument(format!(
            "asymptotic profile requires t >= 1, got {t}"
        )));
    }
    let n = freq_grid.n();
    if w.len() != n || phi.len() != n {
        return Err(Error::InvalidArgument("W/Phi length mismatch".into()));
    }
    // Sort into ascending-xi order for interpolation.
    let mut w_re = vec![0.0; n];
    let mut w_im = vec![0.0; n];
    let mut w_abs2 = vec![0.0; n];
    let mut phi_sorted = vec![0.0; n];
    for (pos, j) in freq_grid.ascending_freq_order().enumerate() {
        w_re[pos] = w[j].re;
        w_im[pos] = w[j].im;
        w_abs2[pos] = w[j].norm_sqr();
        phi_sorted[pos] = phi[j];
    }
    let h_abs2_fft = hilbert_in_frequency(freq_grid, &{
        let mut tmp = vec![0.0; n];
        for (pos, j) in freq_grid.ascending_freq_order().enumerate() {
            tmp[j] = w_abs2[pos];
        }
        tmp
    })?;
    let mut h_abs2 = vec![0.0; n];
    for (pos, j) in freq_grid.ascending_freq_order().enumerate() {
        h_abs2[pos] = h_abs2_fft[j];
    }

    let xi0 = -freq_grid.max_freq();
    let dxi = freq_grid.dxi();
    let logt = t.ln();
    let amp = Complex64::new(0.0, -std::f64::consts::FRAC_PI_4).exp() / (2.0 * t).sqrt();
    let mut excluded = 0usize;
    let values = out_grid
        .nodes()
        .map(|x| {
            let xi = x / (2.0 * t);
            let interp = (|| {
                let wr = cubic_interp(&w_re, xi0, dxi, xi)?;
                let wi = cubic_interp(&w_im, xi0, dxi, xi)?;
                let a2 = cubic_interp(&w_abs2, xi0, dxi, xi)?;
                let ha = cubic_interp(&h_abs2, xi0, dxi, xi)?;
                let ph = cubic_interp(&phi_sorted, xi0, dxi, xi).unwrap_or(0.0);
                Some((Complex64::new(wr, wi), a2, ha, ph))
            })();
            match interp {
                Some((wv, a2, ha, ph)) => {
                    let log_phase = (0.25 * alpha * x / t * a2 + 0.25 * beta * x / t * ha) * logt;
                    let phase = log_phase + ph + x * x / (4.0 * t);
                    amp * wv * Complex64::new(0.0, phase).exp()
                }
                None => {
                    excluded += 1;
                    Complex64::new(0.0, 0.0)
                }
            }
        })
        .collect();
    Ok((
        Field {
            grid: out_grid.clone(),
            values,
        },
        excluded,
    ))
}

/// Richardson-extrapolated limit of the mass series `||u(t)||_{L2}` and a
/// log-log fit of the approach rate.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MassLimit {
    pub d_infty: f64,
    pub rate: Option<RateFit>,
    pub monotone_matches_beta: bool,
}

pub fn mass_limit(series: &[(f64, f64)], beta: f64, drift_tol: f64) -> Result<MassLimit> {
    let t_end = series.last().ok_or_else(|| Error::InvalidArgument("empty mass series".into()))?.0;
    if t_end < 100.0 {
        return Err(Error::InvalidArgument(format!(
            "mass-limit analysis needs >= 2 decades past t = 1 (t_end = {t_end})"
        )));
    }
    let value_at = |t: f64| -> f64 {
        series
            .iter()
            .min_by(|a, b| (a.0 - t).abs().partial_cmp(&(b.0 - t).abs()).unwrap())
            .unwrap()
            .1
    };
    // Monotonicity check against sgn(beta), within solver drift.
    let mut monotone = true;
    for w in series.windows(2) {
        let dv = w[1].1 - w[0].1;
        if beta < 0.0 && dv > drift_tol {
            monotone = false;
        }
        if beta > 0.0 && dv < -drift_tol {
            monotone = false;
        }
    }
    // Richardson on a geometric triple t, 2t, 4t assuming m(t) = D + C t^-p.
    let (m1, m2, m4) = (value_at(t_end / 4.0), value_at(t_end / 2.0), value_at(t_end));
    let num = m1 - m2;
    let den = m2 - m4;
    let d_infty = if num.abs() > 1e-300 && den.abs() > 1e-300 && num / den > 1.0 {
        let ratio = num / den; // 2^p
        m4 - den / (ratio - 1.0)
    } else {
        m4
    };
    // Fit |m(t) - D| ~ t^rate on the middle era.
    let fit_pts: Vec<(f64, f64)> = series
        .iter()
        .filter(|&&(t, v)| t >= 10.0 && t <= t_end / 2.0 && (v - d_infty).abs() > 1e-14)
        .map(|&(t, v)| (t, (v - d_infty).abs()))
        .collect();
    let rate = crate::diagnostics::decay_fit(&fit_pts, (10.0, t_end / 2.0)).ok();
    Ok(MassLimit {
        d_infty,
        rate,
        monotone_matches_beta: monotone,
    })
}

/// Weighted sup distance `max (1+|xi|)^{1/2} |a - b|` between two spectral
/// vectors in FFT order.
fn weighted_sup_diff(grid: &Grid, a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .zip(grid.freqs())
        .map(|((&x, &y), &xi)| half_bracket(xi) * (x - y).norm())
        .fold(0.0, f64::max)
}

/// Full scattering analysis over the trajectory's phase-carrying snapshots at
/// `checkpoint_times`. Reports the limit profile `W` and phase `Phi` at the
/// last checkpoint (ascending xi), the mass limit, the decay rate of the
/// corrected differences `e^{-iB}f_hat` between consecutive checkpoints, the
/// resonant-remainder decay over the checkpoints, and the ratio by which the
/// phase correction shrinks the (20, 200)-style endpoint difference.
pub fn analyze_trajectory(
    traj: &crate::solver::Trajectory,
    checkpoint_times: &[f64],
    mask_rel: f64,
) -> Result<ScatteringResult> {
    let mut times: Vec<f64> = checkpoint_times.iter().copied().filter(|&t| t >= 1.0).collect();
    times.sort_by(|a, b| a.partial_cmp(b).unwrap());
    times.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    if times.is_empty() {
        return Err(Error::InvalidArgument(
            "scattering analysis needs checkpoints with t >= 1".into(),
        ));
    }
    let grid = &traj.grid;
    let mut corrected: Vec<(f64, Vec<Complex64>)> = Vec::new();
    let mut raw: Vec<(f64, Vec<Complex64>)> = Vec::new();
    let mut remainder_series: Vec<(f64, f64)> = Vec::new();
    for &t in &times {
        let snap = traj.snapshot_at(t, 1e-6 * (1.0 + t))?;
        let b = snap
            .phase_b
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument(format!("no accumulated phase at t = {t}")))?;
        let w: Vec<Complex64> = snap
            .f_hat
            .coeffs
            .iter()
            .zip(b)
            .map(|(&c, &bv)| c * Complex64::new(0.0, -bv).exp())
            .collect();
        corrected.push((t, w));
        raw.push((t, snap.f_hat.coeffs.clone()));
        let f_dot = crate::solver::rhs_profile(t, &snap.f_hat, traj.alpha, traj.beta, traj.dealias)?;
        let (_, wsup) = resonant_remainder(t, &snap.f_hat, &f_dot, traj.alpha, traj.beta, 1.0)?;
        remainder_series.push((t, wsup));
    }

    let corrected_diffs: Vec<(f64, f64)> = corrected
        .windows(2)
        .map(|w| (w[0].0, weighted_sup_diff(grid, &w[0].1, &w[1].1)))
        .collect();
    let corrected_difference_rate = crate::diagnostics::decay_fit(
        &corrected_diffs,
        (times[0], *times.last().unwrap()),
    )
    .ok();
    let remainder_rate =
        crate::diagnostics::decay_fit(&remainder_series, (times[0], *times.last().unwrap())).ok();

    let correction_necessity_factor = if corrected.len() >= 2 {
        let first = 0;
        let last = corrected.len() - 1;
        let with = weighted_sup_diff(grid, &corrected[first].1, &corrected[last].1);
        let without = weighted_sup_diff(grid, &raw[first].1, &raw[last].1);
        (with > 0.0).then(|| without / with)
    } else {
        None
    };

    let mass = mass_limit(&traj.mass_series(), traj.beta, 1e-10).ok();
    let (d_infty, d_infty_rate) = match mass {
        Some(m) => (m.d_infty, m.rate),
        None => (traj.final_state.f_hat.l2_norm(), None),
    };

    let t_last = *times.last().unwrap();
    let snap = traj.snapshot_at(t_last, 1e-6 * (1.0 + t_last))?;
    let (w_fft, phi_fft) = extract_profile(
        &snap.f_hat,
        snap.phase_b.as_ref().unwrap(),
        t_last,
        traj.alpha,
        traj.beta,
        mask_rel,
    )?;
    let n = grid.n();
    let mut xi = vec![0.0; n];
    let mut w_re = vec![0.0; n];
    let mut w_im = vec![0.0; n];
    let mut phi = vec![0.0; n];
    for (pos, j) in grid.ascending_freq_order().enumerate() {
        xi[pos] = grid.freq(j);
        w_re[pos] = w_fft[j].re;
        w_im[pos] = w_fft[j].im;
        phi[pos] = phi_fft[j];
    }
    Ok(ScatteringResult {
        xi,
        w_re,
        w_im,
        phi,
        d_infty,
        d_infty_rate,
        remainder_rate,
        corrected_difference_rate,
        correction_necessity_factor,
    })
}

/// Dyadic-band envelope of the weighted Fourier sup:
/// `(N, max_xi rho_N(xi) (1+|xi|)^{1/2} |f_hat|)` for the implemented levels.
pub fn band_envelope(f_hat: &Spectrum) -> Vec<(f64, f64)> {
    let grid = &f_hat.grid;
    crate::spectral::dyadic_levels(grid.max_freq())
        .into_iter()
        .map(|n_dyadic| {
            let sup = f_hat
                .coeffs
                .iter()
                .zip(grid.freqs())
                .map(|(c, &xi)| lp_band(xi, n_dyadic) * half_bracket(xi) * c.norm())
                .fold(0.0, f64::max);
            (n_dyadic, sup)
        })
        .collect()
}
