//! Solver tests: nonlinearity closed forms and self-convergence, profile
//! right-hand side properties, RK4 step behavior, and full-run invariants
//! (free-flow decay, dealiasing guard band, time-reversal structure,
//! resolution self-convergence).

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use kdnls::solver::{nonlinearity, rhs_profile, run, step_rk4, SolverConfig, SolverState};
use kdnls::spectral::{
    forward, guard_band_fraction, inverse, Field, Grid, Spectrum, DealiasPolicy,
};

const I: Complex64 = Complex64::new(0.0, 1.0);
const PAD: DealiasPolicy = DealiasPolicy::Pad;

fn grid(n: usize, length: f64) -> Arc<Grid> {
    Grid::new(n, length).unwrap()
}

fn random_spectrum(g: &Arc<Grid>, cut: f64, seed: u64) -> Spectrum {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = Spectrum::zeros(g.clone());
    for j in 0..g.n() {
        if j != g.nyquist_index() && g.freq(j).abs() <= cut {
            s.coeffs[j] = Complex64::new(rng.gen_range(-0.1..0.1), rng.gen_range(-0.1..0.1));
        }
    }
    s
}

// ---- nonlinearity ----

#[test]
fn nonlinearity_of_zero_is_zero() {
    let g = grid(128, 50.0);
    let n = nonlinearity(&Field::zeros(g), 1.0, -1.0, PAD).unwrap();
    assert!(n.sup_norm() == 0.0);
}

#[test]
fn plane_wave_closed_form_without_nonlocal_term() {
    // For u = e^{i w x}: |u|^2 u = u, so N(u) = alpha d_x u = i alpha w u.
    let g = grid(256, 2.0 * PI * 16.0);
    let (alpha, w) = (0.8, 3.0);
    let u = Field::from_fn(g.clone(), |x| (I * w * x).exp());
    let n = nonlinearity(&u, alpha, 0.0, PAD).unwrap();
    let exact = u.scale(I * alpha * w);
    assert!(n.sub(&exact).unwrap().sup_norm() < 1e-10);
}

#[test]
fn nonlocal_term_self_converges_under_refinement() {
    // alpha = 0 leaves only the Hilbert-product term; compare against the
    // same quantity computed at doubled resolution (common nodes coincide).
    let nl_at = |n: usize| -> (Arc<Grid>, Field) {
        let g = grid(n, 60.0);
        let u = Field::from_real_fn(g.clone(), |x| 0.5 * (-0.5 * x * x).exp());
        (g.clone(), nonlinearity(&u, 0.0, -1.0, PAD).unwrap())
    };
    let (g1, n1) = nl_at(1024);
    let (_, n2) = nl_at(2048);
    let (_, n4) = nl_at(4096);
    let scale = n1.sup_norm();
    let diff = |coarse: &Field, fine: &Field, stride: usize| -> f64 {
        (0..g1.n())
            .map(|j| (coarse.values[j] - fine.values[stride * j]).norm())
            .fold(0.0, f64::max)
    };
    assert!(diff(&n1, &n2, 2) < 1e-8 * scale, "resolved at base grid");
    assert!(diff(&n2, &n4, 2).max(diff(&n1, &n4, 4)) < 1e-8 * scale, "oracle converged");
}

// ---- profile right-hand side ----

#[test]
fn rhs_profile_basics() {
    let g = grid(256, 60.0);
    let zero = Spectrum::zeros(g.clone());
    assert!(rhs_profile(3.0, &zero, 1.0, -1.0, PAD).unwrap().l2_norm() == 0.0);

    // At t = 0 the propagator is the identity: rhs = F[N(u0)].
    let f = random_spectrum(&g, 6.0, 11);
    let direct = forward(&nonlinearity(&inverse(&f), 1.0, -0.5, PAD).unwrap());
    let viarhs = rhs_profile(0.0, &f, 1.0, -0.5, PAD).unwrap();
    assert!(viarhs.sub(&direct).unwrap().l2_norm() < 1e-13 * direct.l2_norm());
}

#[test]
fn rhs_profile_is_linear_in_the_couplings() {
    let g = grid(256, 60.0);
    let f = random_spectrum(&g, 6.0, 12);
    let base = rhs_profile(2.0, &f, 1.0, -0.7, PAD).unwrap();
    let scaled = rhs_profile(2.0, &f, 3.0, -2.1, PAD).unwrap();
    let err = scaled
        .sub(&base.scale(Complex64::new(3.0, 0.0)))
        .unwrap()
        .l2_norm();
    assert!(err < 1e-12 * scaled.l2_norm(), "homogeneity defect {err:.2e}");
}

// ---- RK4 step ----

#[test]
fn free_step_keeps_profile_constant_and_reverses_exactly() {
    let g = grid(256, 60.0);
    let f = random_spectrum(&g, 6.0, 13);
    let state = SolverState { t: 0.3, f_hat: f.clone() };
    let fwd = step_rk4(&state, 0.25, 0.0, 0.0, PAD).unwrap();
    assert!(fwd.f_hat.sub(&f).unwrap().l2_norm() == 0.0, "profile frozen when N = 0");
    let back = step_rk4(&fwd, -0.25, 0.0, 0.0, PAD).unwrap();
    assert!(back.f_hat.sub(&f).unwrap().l2_norm() < 1e-14);
    assert!((back.t - 0.3).abs() < 1e-15);
}

#[test]
fn halving_dt_reduces_error_about_sixteen_fold() {
    let g = grid(256, 100.0);
    let advance = |dt: f64| -> Spectrum {
        let phi = Field::from_real_fn(g.clone(), |x| 0.5 * (-x * x / 8.0).exp());
        let mut state = SolverState { t: 0.0, f_hat: forward(&phi) };
        let steps = (1.0 / dt).round() as usize;
        for _ in 0..steps {
            state = step_rk4(&state, dt, 4.0, -3.0, PAD).unwrap();
        }
        state.f_hat
    };
    let reference = advance(0.0125);
    let e1 = advance(0.1).sub(&reference).unwrap().l2_norm();
    let e2 = advance(0.05).sub(&reference).unwrap().l2_norm();
    let ratio = e1 / e2;
    assert!((10.0..=24.0).contains(&ratio), "error ratio {ratio:.1} (expect ~16)");
}

// ---- full runs ----

#[test]
fn free_run_matches_closed_form_gaussian_decay() {
    // With alpha = beta = 0, a width-w Gaussian's sup norm follows
    // A (1 + 4t^2/w^4)^{-1/4}; A is the rescaled initial amplitude.
    let width = 1.0;
    let mut cfg = SolverConfig::new(0.0, 0.0, 1024, 300.0, 0.05, 8.0);
    cfg.initial = kdnls::solver::InitialData::gaussian(1.0, width);
    cfg.snapshot_times = vec![0.0, 2.0, 4.0, 8.0];
    let traj = run(&cfg).unwrap();
    let a0 = traj.snapshot_at(0.0, 1e-9).unwrap().field().sup_norm();
    for snap in traj.snapshots.iter().filter(|s| s.t > 0.0) {
        let predicted = a0 * (1.0 + 4.0 * snap.t * snap.t / width.powi(4)).powf(-0.25);
        let measured = snap.field().sup_norm();
        assert!(
            (measured - predicted).abs() < 1e-6 * a0,
            "t = {}: sup {measured} vs closed form {predicted}",
            snap.t
        );
    }
}

#[test]
fn guard_band_stays_clean_on_resolved_runs() {
    let mut cfg = SolverConfig::new(1.0, -1.0, 512, 200.0, 0.05, 5.0);
    cfg.initial = kdnls::solver::InitialData::gaussian(0.1, 2.5);
    cfg.snapshot_times = vec![5.0];
    let traj = run(&cfg).unwrap();
    let frac = guard_band_fraction(&traj.final_state.field());
    assert!(frac < 1e-10, "guard-band energy fraction {frac:.2e}");
}

fn reflect_conj(f: &Field) -> Field {
    let n = f.n();
    let values = (0..n).map(|j| f.values[(n - j) % n].conj()).collect();
    Field { grid: f.grid.clone(), values }
}

#[test]
fn spatial_reflection_flips_the_local_coupling() {
    // x -> -x maps solutions of (alpha, beta) to solutions of (-alpha, beta):
    // evolving phi(-x) with (-alpha, beta) mirrors the original run exactly.
    let n = 512;
    let t_end = 3.0;
    let base = |alpha: f64| -> SolverConfig {
        let mut cfg = SolverConfig::new(alpha, -0.8, n, 200.0, 0.02, t_end);
        cfg.initial = kdnls::solver::InitialData::gaussian(0.2, 2.0);
        cfg.initial.chirp = Some(0.1); // even phase: phi(-x) = phi(x)
        cfg.snapshot_times = vec![t_end];
        cfg
    };
    let u = run(&base(1.0)).unwrap().final_state.field();
    let ut = run(&base(-1.0)).unwrap().final_state.field();
    let err = (0..n)
        .map(|j| (u.values[j] - ut.values[(n - j) % n]).norm())
        .fold(0.0, f64::max);
    assert!(err < 1e-12 * u.sup_norm(), "reflection defect {err:.2e}");
}

#[test]
fn conjugation_reflection_reverses_time_with_beta_flipped() {
    // The equation has no plain time-reversal symmetry: conjugation plus
    // x -> -x maps the (alpha, beta) flow to the *backward* (alpha, -beta)
    // flow. Forward-evolving the conjugate-reflected final state with
    // (alpha, -beta) therefore plays the run back to its initial data.
    let g = grid(256, 100.0);
    let phi = Field::from_fn(g.clone(), |x| {
        Complex64::new(0.2, 0.0) * (Complex64::new(-x * x / 8.0, 0.1 * x * x)).exp()
    });
    let (alpha, beta, dt, t_end) = (1.0_f64, -0.8_f64, 0.01_f64, 2.0_f64);
    let steps = (t_end / dt).round() as usize;
    let evolve = |start: &Field, b: f64| -> Field {
        let mut s = SolverState { t: 0.0, f_hat: kdnls::spectral::to_profile(start, 0.0) };
        for _ in 0..steps {
            s = step_rk4(&s, dt, alpha, b, PAD).unwrap();
        }
        s.field()
    };
    let u_end = evolve(&phi, beta);
    let played_back = evolve(&reflect_conj(&u_end), -beta);
    let err = played_back.sub(&reflect_conj(&phi)).unwrap().sup_norm();
    assert!(err < 1e-12 * phi.sup_norm(), "playback defect {err:.2e}");
}

#[test]
fn trajectory_self_converges_under_doubled_resolution() {
    let make = |n: usize, dt: f64| -> SolverConfig {
        let mut cfg = SolverConfig::new(1.0, -1.0, n, 200.0, dt, 5.0);
        cfg.initial = kdnls::solver::InitialData::gaussian(0.1, 2.5);
        cfg.snapshot_times = vec![5.0];
        cfg
    };
    let coarse = run(&make(512, 0.05)).unwrap().final_state.field();
    let fine = run(&make(1024, 0.025)).unwrap().final_state.field();
    let err = {
        let mut sq = 0.0;
        for j in 0..512 {
            sq += (coarse.values[j] - fine.values[2 * j]).norm_sqr();
        }
        (sq * coarse.grid.dx()).sqrt()
    };
    assert!(err < 1e-6, "L2 self-convergence error {err:.2e}");
}
