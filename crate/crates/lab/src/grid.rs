use std::f64::consts::PI;

use crate::error::{LabError, Result};

/// Relative tolerance for FFT round-trips and other exact spectral identities.
pub const EPS_FFT: f64 = 1e-10;

/// Absolute tolerance below which imaginary parts count as zero.
pub const EPS_REAL: f64 = 1e-9;

/// Uniform grid `x_j = 2*pi*j/N` on `[0, 2*pi)` with `N` a power of two.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Grid {
    n: usize,
}

impl Grid {
    pub fn new(n: usize) -> Result<Self> {
        if n < 8 || !n.is_power_of_two() {
            return Err(LabError::BadGridSize(n));
        }
        Ok(Grid { n })
    }

    /// Smallest admissible grid oversampling `max_freq` by at least 4x.
    pub fn for_max_freq(max_freq: usize) -> Grid {
        let n = max_freq.max(2).saturating_mul(4).next_power_of_two().max(8);
        Grid { n }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn point(&self, j: usize) -> f64 {
        2.0 * PI * (j as f64) / (self.n as f64)
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |j| self.point(j))
    }

    /// Quadrature weight of the rectangle rule, `2*pi/N`.
    pub fn weight(&self) -> f64 {
        2.0 * PI / (self.n as f64)
    }

    /// Largest frequency representable without aliasing, `N/2 - 1`.
    pub fn capacity(&self) -> usize {
        self.n / 2 - 1
    }
}
