//! CSV emission. Headers are fixed and versioned; floats are printed with 17
//! significant digits so re-parsing reproduces the bits.

use std::fmt::Write as _;

use crate::diagnostics::DiagnosticsRecord;
use crate::solver::Snapshot;

pub const DIAGNOSTICS_CSV_VERSION: &str = "kdnls-diagnostics-csv-1";
pub const SNAPSHOT_CSV_VERSION: &str = "kdnls-snapshot-csv-1";

/// 17 significant digits; round-trips f64 exactly.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn diagnostics_csv(records: &[DiagnosticsRecord], config_hash: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# {DIAGNOSTICS_CSV_VERSION}");
    let _ = writeln!(out, "# config_sha256 = {config_hash}");
    let _ = writeln!(
        out,
        "t,l2,h1,h2,w1inf,xf_h1,hilbert_sup,weighted_fourier_sup,null_residual,dissipation_rate,boundary_mass,guard_band_fraction,config_hash"
    );
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            fmt_f64(r.t),
            fmt_f64(r.l2),
            fmt_f64(r.h1),
            fmt_f64(r.h2),
            fmt_f64(r.w1inf),
            fmt_f64(r.xf_h1),
            fmt_f64(r.hilbert_sup),
            fmt_f64(r.weighted_fourier_sup),
            fmt_f64(r.null_residual),
            fmt_f64(r.dissipation_rate),
            fmt_f64(r.boundary_mass),
            fmt_f64(r.guard_band_fraction),
            &config_hash[..config_hash.len().min(12)],
        );
    }
    out
}

/// Snapshot spectrum as CSV, ascending in frequency.
pub fn snapshot_csv(snap: &Snapshot) -> String {
    let grid = &snap.f_hat.grid;
    let mut out = String::new();
    let _ = writeln!(out, "# {SNAPSHOT_CSV_VERSION}");
    let _ = writeln!(
        out,
        "# n = {}, length = {}, t = {}",
        grid.n(),
        fmt_f64(grid.length()),
        fmt_f64(snap.t)
    );
    let _ = writeln!(out, "xi,re,im");
    for j in grid.ascending_freq_order() {
        let c = snap.f_hat.coeffs[j];
        let _ = writeln!(
            out,
            "{},{},{}",
            fmt_f64(grid.freq(j)),
            fmt_f64(c.re),
            fmt_f64(c.im)
        );
    }
    out
}

/// Human-oriented rendering of a snapshot: header plus modulus summary.
pub fn snapshot_text(snap: &Snapshot) -> String {
    let grid = &snap.f_hat.grid;
    let max_mod = snap
        .f_hat
        .coeffs
        .iter()
        .map(|c| c.norm())
        .fold(0.0, f64::max);
    let mut out = String::new();
    let _ = writeln!(out, "snapshot at t = {}", snap.t);
    let _ = writeln!(
        out,
        "grid: n = {}, length = {}, dxi = {:.6e}",
        grid.n(),
        grid.length(),
        grid.dxi()
    );
    let _ = writeln!(out, "spectrum l2 = {:.6e}", snap.f_hat.l2_norm());
    let _ = writeln!(out, "spectrum sup = {max_mod:.6e}");
    let _ = writeln!(out, "xi  |f_hat|  (64-bin downsample)");
    let n = grid.n();
    let stride = (n / 64).max(1);
    let order: Vec<usize> = grid.ascending_freq_order().collect();
    for chunk in order.chunks(stride) {
        let xi = grid.freq(chunk[0]);
        let peak = chunk
            .iter()
            .map(|&j| snap.f_hat.coeffs[j].norm())
            .fold(0.0, f64::max);
        let bar_len = if max_mod > 0.0 {
            ((peak / max_mod) * 40.0).round() as usize
        } else {
            0
        };
        let _ = writeln!(out, "{xi:>12.4e}  {peak:.6e}  {}", "#".repeat(bar_len));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_round_trips() {
        for v in [0.1, -3.25e-17, 1.0 / 3.0, 123456.789, f64::MIN_POSITIVE] {
            let s = fmt_f64(v);
            assert_eq!(s.parse::<f64>().unwrap(), v, "{s}");
        }
    }

    #[test]
    fn header_is_versioned() {
        let out = diagnostics_csv(&[], "deadbeef");
        assert!(out.starts_with(&format!("# {DIAGNOSTICS_CSV_VERSION}\n")));
        assert!(out.contains("deadbeef"));
    }
}
