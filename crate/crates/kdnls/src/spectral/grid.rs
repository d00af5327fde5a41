use std::sync::Arc;

use crate::error::{Error, Result};

/// Uniform periodic spatial grid on `[-L/2, L/2)` together with its dual
/// frequency grid `xi_k = 2 pi k / L`, `k = -n/2 .. n/2 - 1`.
///
/// Frequencies are stored in FFT order: index `j` carries `k = j` for
/// `j < n/2` and `k = j - n` otherwise, so index `n/2` is the lone Nyquist
/// mode `k = -n/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    n: usize,
    length: f64,
    freqs: Vec<f64>,
}

impl Grid {
    pub fn new(n: usize, length: f64) -> Result<Arc<Grid>> {
        if n < 16 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "n = {n} must be a power of two with n >= 16"
            )));
        }
        if !(length > 0.0) || !length.is_finite() {
            return Err(Error::InvalidGrid(format!("length = {length} must be positive")));
        }
        let freqs = (0..n)
            .map(|j| {
                let k = if j < n / 2 { j as i64 } else { j as i64 - n as i64 };
                2.0 * std::f64::consts::PI * k as f64 / length
            })
            .collect();
        Ok(Arc::new(Grid { n, length, freqs }))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn dx(&self) -> f64 {
        self.length / self.n as f64
    }

    /// Frequency spacing `2 pi / L`.
    pub fn dxi(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.length
    }

    /// Node `x_j = -L/2 + j dx`.
    pub fn node(&self, j: usize) -> f64 {
        -0.5 * self.length + j as f64 * self.dx()
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(|j| self.node(j))
    }

    /// Frequency at storage index `j` (FFT order).
    pub fn freq(&self, j: usize) -> f64 {
        self.freqs[j]
    }

    pub fn freqs(&self) -> &[f64] {
        &self.freqs
    }

    /// Storage index of the Nyquist mode `k = -n/2`.
    pub fn nyquist_index(&self) -> usize {
        self.n / 2
    }

    /// Largest represented frequency magnitude `pi n / L`.
    pub fn max_freq(&self) -> f64 {
        std::f64::consts::PI * self.n as f64 / self.length
    }

    /// Storage indices sorted by ascending frequency.
    pub fn ascending_freq_order(&self) -> impl Iterator<Item = usize> + '_ {
        (self.n / 2..self.n).chain(0..self.n / 2)
    }

    pub fn same_as(&self, other: &Grid) -> bool {
        self.n == other.n && self.length == other.length
    }

    pub(crate) fn check_same(&self, other: &Grid) -> Result<()> {
        if self.same_as(other) {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!(
                "({}, L={}) vs ({}, L={})",
                self.n, self.length, other.n, other.length
            )))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_sizes() {
        assert!(Grid::new(8, 10.0).is_err());
        assert!(Grid::new(100, 10.0).is_err());
        assert!(Grid::new(64, -1.0).is_err());
        assert!(Grid::new(64, 10.0).is_ok());
    }

    #[test]
    fn frequency_layout() {
        let g = Grid::new(16, 2.0 * std::f64::consts::PI).unwrap();
        // L = 2 pi so xi_k = k.
        assert_eq!(g.freq(0), 0.0);
        assert_eq!(g.freq(1), 1.0);
        assert_eq!(g.freq(15), -1.0);
        assert_eq!(g.freq(8), -8.0);
        assert_eq!(g.nyquist_index(), 8);
        let sorted: Vec<f64> = g.ascending_freq_order().map(|j| g.freq(j)).collect();
        for w in sorted.windows(2) {
            assert!(w[0] < w[1]);
        }
    }

    #[test]
    fn nodes_span_box() {
        let g = Grid::new(32, 8.0).unwrap();
        assert_eq!(g.node(0), -4.0);
        assert!((g.node(31) - (4.0 - g.dx())).abs() < 1e-14);
    }
}
