use num_complex::Complex64;

use crate::error::{LabError, Result};
use crate::grid::{Grid, EPS_REAL};

/// Samples of a periodic function on a uniform grid over `[0, 2*pi)`.
#[derive(Debug, Clone)]
pub struct PeriodicSignal {
    grid: Grid,
    values: Vec<Complex64>,
}

impl PeriodicSignal {
    pub fn new(grid: Grid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(LabError::parameter(
                "values",
                format!("expected {} samples, got {}", grid.len(), values.len()),
            ));
        }
        Ok(PeriodicSignal { grid, values })
    }

    pub fn from_real(grid: Grid, values: Vec<f64>) -> Result<Self> {
        let values = values.into_iter().map(|v| Complex64::new(v, 0.0)).collect();
        Self::new(grid, values)
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Self {
        let values = grid.points().map(|x| Complex64::new(f(x), 0.0)).collect();
        PeriodicSignal { grid, values }
    }

    pub fn zero(grid: Grid) -> Self {
        PeriodicSignal {
            grid,
            values: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    /// True when every imaginary part is below the absolute tolerance.
    pub fn is_real(&self, tol: f64) -> bool {
        self.values.iter().all(|v| v.im.abs() <= tol)
    }

    /// Real parts, after checking the signal is real to [`EPS_REAL`]
    /// relative to the peak magnitude.
    pub fn real_values(&self) -> Result<Vec<f64>> {
        let scale = self
            .values
            .iter()
            .map(|v| v.norm())
            .fold(0.0f64, f64::max)
            .max(1.0);
        if !self.is_real(EPS_REAL * scale) {
            return Err(LabError::parameter(
                "signal",
                "imaginary parts exceed the real-signal tolerance",
            ));
        }
        Ok(self.values.iter().map(|v| v.re).collect())
    }
}
