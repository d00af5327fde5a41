use std::sync::Arc;

use num_complex::Complex64;

use crate::error::Result;
use crate::spectral::grid::Grid;

/// Complex samples `u(x_j)` on a [`Grid`].
#[derive(Debug, Clone)]
pub struct Field {
    pub grid: Arc<Grid>,
    pub values: Vec<Complex64>,
}

/// Fourier coefficients `coeffs[k] ~ u_hat(xi_k)` under the convention
/// `u_hat(xi) = (2 pi)^{-1/2} \int e^{-i x xi} u(x) dx`, stored in FFT order.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub grid: Arc<Grid>,
    pub coeffs: Vec<Complex64>,
}

impl Field {
    pub fn zeros(grid: Arc<Grid>) -> Field {
        let n = grid.n();
        Field {
            grid,
            values: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    pub fn from_fn(grid: Arc<Grid>, f: impl Fn(f64) -> Complex64) -> Field {
        let values = grid.nodes().map(f).collect();
        Field { grid, values }
    }

    pub fn from_real_fn(grid: Arc<Grid>, f: impl Fn(f64) -> f64) -> Field {
        Field::from_fn(grid, |x| Complex64::new(f(x), 0.0))
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn check_same_grid(&self, other: &Field) -> Result<()> {
        self.grid.check_same(&other.grid)
    }

    /// Discrete L2 norm `(sum |u_j|^2 dx)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        let dx = self.grid.dx();
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * dx).sqrt()
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn max_imag(&self) -> f64 {
        self.values.iter().map(|v| v.im.abs()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }

    pub fn conj(&self) -> Field {
        self.map(|v| v.conj())
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Field {
        Field {
            grid: self.grid.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Field {
        self.map(|v| c * v)
    }

    /// Pointwise product (no dealiasing; see `products` for the dealiased one).
    pub fn pointwise_mul(&self, other: &Field) -> Result<Field> {
        self.check_same_grid(other)?;
        Ok(Field {
            grid: self.grid.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| a * b)
                .collect(),
        })
    }

    pub fn add(&self, other: &Field) -> Result<Field> {
        self.check_same_grid(other)?;
        Ok(Field {
            grid: self.grid.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Field) -> Result<Field> {
        self.check_same_grid(other)?;
        Ok(Field {
            grid: self.grid.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| a - b)
                .collect(),
        })
    }

    /// Pointwise `|u|^2` as a real-valued field.
    pub fn abs2(&self) -> Field {
        self.map(|v| Complex64::new(v.norm_sqr(), 0.0))
    }

    /// Fraction of L2 mass within `frac * L/2` of either boundary.
    pub fn boundary_mass_fraction(&self, frac: f64) -> f64 {
        let half = 0.5 * self.grid.length();
        let cutoff = (1.0 - frac) * half;
        let mut near = 0.0;
        let mut total = 0.0;
        for (j, v) in self.values.iter().enumerate() {
            let m = v.norm_sqr();
            total += m;
            if self.grid.node(j).abs() >= cutoff {
                near += m;
            }
        }
        if total == 0.0 {
            0.0
        } else {
            near / total
        }
    }
}

impl Spectrum {
    pub fn zeros(grid: Arc<Grid>) -> Spectrum {
        let n = grid.n();
        Spectrum {
            grid,
            coeffs: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    pub fn n(&self) -> usize {
        self.coeffs.len()
    }

    /// Discrete L2 norm `(sum |c_k|^2 dxi)^{1/2}`; equals the physical-side
    /// L2 norm by Parseval.
    pub fn l2_norm(&self) -> f64 {
        let dxi = self.grid.dxi();
        (self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>() * dxi).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Spectrum {
        Spectrum {
            grid: self.grid.clone(),
            coeffs: self.coeffs.iter().map(|&c| f(c)).collect(),
        }
    }

    pub fn sub(&self, other: &Spectrum) -> Result<Spectrum> {
        self.grid.check_same(&other.grid)?;
        Ok(Spectrum {
            grid: self.grid.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| a - b)
                .collect(),
        })
    }

    pub fn add(&self, other: &Spectrum) -> Result<Spectrum> {
        self.grid.check_same(&other.grid)?;
        Ok(Spectrum {
            grid: self.grid.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| a + b)
                .collect(),
        })
    }

    pub fn scale(&self, c: Complex64) -> Spectrum {
        self.map(|v| c * v)
    }

    /// `|c_k|^2` in FFT storage order.
    pub fn abs2(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.norm_sqr()).collect()
    }
}
