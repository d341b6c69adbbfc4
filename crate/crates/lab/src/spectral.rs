use std::cell::RefCell;
use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{LabError, Result};
use crate::grid::Grid;
use crate::signal::PeriodicSignal;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

pub(crate) fn fft_forward(buf: &mut [Complex64]) {
    PLANNER.with(|p| p.borrow_mut().plan_fft_forward(buf.len()).process(buf));
}

pub(crate) fn fft_inverse(buf: &mut [Complex64]) {
    PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(buf.len()).process(buf));
}

/// Which convention a fractional derivative follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivativeMode {
    /// `(-Laplace)^(alpha/2)`: multiplier `|k|^alpha`, constants killed.
    Laplacian,
    /// Weyl derivative `(ik)^alpha` with the principal branch; equals the
    /// classical derivative for integer `alpha`.
    Signed,
}

/// Finite table of Fourier coefficients `c_k`, `|k| <= K`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralRep {
    /// Coefficients indexed `k + K` for `k = -K..=K`.
    coeffs: Vec<Complex64>,
}

impl SpectralRep {
    pub fn zero(max_freq: usize) -> Self {
        SpectralRep {
            coeffs: vec![Complex64::new(0.0, 0.0); 2 * max_freq + 1],
        }
    }

    pub fn from_coeffs(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len().is_multiple_of(2) {
            return Err(LabError::parameter(
                "coeffs",
                "coefficient table must have odd length 2K+1",
            ));
        }
        Ok(SpectralRep { coeffs })
    }

    /// `a*cos(kx)` as a spectral table.
    pub fn cosine(k: usize, a: f64) -> Self {
        let mut rep = SpectralRep::zero(k);
        if k == 0 {
            rep.set(0, Complex64::new(a, 0.0));
        } else {
            rep.set(k as i64, Complex64::new(a / 2.0, 0.0));
            rep.set(-(k as i64), Complex64::new(a / 2.0, 0.0));
        }
        rep
    }

    /// `b*sin(kx)` as a spectral table.
    pub fn sine(k: usize, b: f64) -> Self {
        let mut rep = SpectralRep::zero(k);
        if k > 0 {
            rep.set(k as i64, Complex64::new(0.0, -b / 2.0));
            rep.set(-(k as i64), Complex64::new(0.0, b / 2.0));
        }
        rep
    }

    /// Real trigonometric polynomial `sum a_k cos(kx) + b_k sin(kx)`.
    pub fn from_cos_sin(cos: &[(usize, f64)], sin: &[(usize, f64)]) -> Self {
        let kmax = cos
            .iter()
            .chain(sin.iter())
            .map(|&(k, _)| k)
            .max()
            .unwrap_or(0);
        let mut rep = SpectralRep::zero(kmax);
        for &(k, a) in cos {
            if k == 0 {
                *rep.at_mut(0) += Complex64::new(a, 0.0);
            } else {
                *rep.at_mut(k as i64) += Complex64::new(a / 2.0, 0.0);
                *rep.at_mut(-(k as i64)) += Complex64::new(a / 2.0, 0.0);
            }
        }
        for &(k, b) in sin {
            if k > 0 {
                *rep.at_mut(k as i64) += Complex64::new(0.0, -b / 2.0);
                *rep.at_mut(-(k as i64)) += Complex64::new(0.0, b / 2.0);
            }
        }
        rep
    }

    pub fn max_freq(&self) -> usize {
        (self.coeffs.len() - 1) / 2
    }

    pub fn coeff(&self, k: i64) -> Complex64 {
        let kk = self.max_freq() as i64;
        if k.abs() > kk {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[(k + kk) as usize]
        }
    }

    fn at_mut(&mut self, k: i64) -> &mut Complex64 {
        let kk = self.max_freq() as i64;
        &mut self.coeffs[(k + kk) as usize]
    }

    pub fn set(&mut self, k: i64, value: Complex64) {
        *self.at_mut(k) = value;
    }

    /// Iterate `(k, c_k)` over the stored band.
    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let kk = self.max_freq() as i64;
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(i, &c)| (i as i64 - kk, c))
    }

    /// New table with `c_k` replaced by `m(k) * c_k`.
    pub fn map_multiplier(&self, m: impl Fn(i64) -> Complex64) -> SpectralRep {
        let kk = self.max_freq() as i64;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| m(i as i64 - kk) * c)
            .collect();
        SpectralRep { coeffs }
    }

    /// Keep frequencies `|k| <= max_freq`, dropping the rest.
    pub fn truncated(&self, max_freq: usize) -> SpectralRep {
        let mut out = SpectralRep::zero(max_freq.min(self.max_freq()));
        let kk = out.max_freq() as i64;
        for k in -kk..=kk {
            out.set(k, self.coeff(k));
        }
        out
    }

    /// Smallest `K'` such that all coefficients beyond `K'` vanish (to `tol`).
    pub fn effective_max_freq(&self, tol: f64) -> usize {
        let kk = self.max_freq() as i64;
        for m in (1..=kk).rev() {
            if self.coeff(m).norm() > tol || self.coeff(-m).norm() > tol {
                return m as usize;
            }
        }
        0
    }

    pub fn add(&self, other: &SpectralRep) -> SpectralRep {
        let kk = self.max_freq().max(other.max_freq()) as i64;
        let mut out = SpectralRep::zero(kk as usize);
        for k in -kk..=kk {
            out.set(k, self.coeff(k) + other.coeff(k));
        }
        out
    }

    pub fn sub(&self, other: &SpectralRep) -> SpectralRep {
        let kk = self.max_freq().max(other.max_freq()) as i64;
        let mut out = SpectralRep::zero(kk as usize);
        for k in -kk..=kk {
            out.set(k, self.coeff(k) - other.coeff(k));
        }
        out
    }

    pub fn scale(&self, s: f64) -> SpectralRep {
        self.map_multiplier(|_| Complex64::new(s, 0.0))
    }

    /// Hermitian symmetry check: `c_{-k} = conj(c_k)` within `tol`.
    pub fn is_real_valued(&self, tol: f64) -> bool {
        let kk = self.max_freq() as i64;
        (0..=kk).all(|k| (self.coeff(-k) - self.coeff(k).conj()).norm() <= tol)
    }

    /// `L_2` norm by Parseval: `sqrt(2*pi * sum |c_k|^2)`.
    pub fn l2_norm(&self) -> f64 {
        (2.0 * PI * self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>()).sqrt()
    }

    /// Evaluate `sum c_k e^{ikx}` at an arbitrary point (Horner in `e^{ix}`).
    pub fn eval_at(&self, x: f64) -> Complex64 {
        let z = Complex64::new(x.cos(), x.sin());
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        // acc = sum_{k} c_k z^{k+K}; peel off the z^K factor.
        let kk = self.max_freq() as f64;
        let back = Complex64::new((kk * x).cos(), -(kk * x).sin());
        acc * back
    }

    pub fn eval_at_real(&self, x: f64) -> f64 {
        self.eval_at(x).re
    }

    /// Shift by `h`: `c_k -> c_k e^{ikh}`. Exact for any real `h`.
    pub fn translate(&self, h: f64) -> SpectralRep {
        self.map_multiplier(|k| {
            let kh = k as f64 * h;
            Complex64::new(kh.cos(), kh.sin())
        })
    }

    /// Fractional derivative of positive order in the requested convention.
    pub fn fractional_derivative(&self, alpha: f64, mode: DerivativeMode) -> Result<SpectralRep> {
        if !(alpha > 0.0) {
            return Err(LabError::parameter(
                "alpha",
                "derivative order must be positive",
            ));
        }
        Ok(match mode {
            DerivativeMode::Laplacian => {
                self.map_multiplier(|k| Complex64::new((k.abs() as f64).powf(alpha), 0.0))
            }
            DerivativeMode::Signed => self.map_multiplier(|k| {
                if k == 0 {
                    return Complex64::new(0.0, 0.0);
                }
                let magnitude = (k.abs() as f64).powf(alpha);
                let phase = alpha * PI / 2.0 * (k.signum() as f64);
                Complex64::new(phase.cos(), phase.sin()) * magnitude
            }),
        })
    }

    /// Pointwise values of `sum c_k e^{ikx}` on the grid (inverse FFT).
    pub fn synthesize(&self, grid: Grid) -> Result<PeriodicSignal> {
        let n = grid.len();
        let kk = self.max_freq();
        if n < 2 * kk + 2 {
            return Err(LabError::Aliasing { grid: n, freq: kk });
        }
        let mut bins = vec![Complex64::new(0.0, 0.0); n];
        for (k, c) in self.iter() {
            let idx = k.rem_euclid(n as i64) as usize;
            bins[idx] += c;
        }
        fft_inverse(&mut bins);
        PeriodicSignal::new(grid, bins)
    }

    /// Synthesize onto the default 4x-oversampled grid for this band.
    pub fn synthesize_oversampled(&self) -> PeriodicSignal {
        let grid = Grid::for_max_freq(self.max_freq());
        self.synthesize(grid).expect("grid sized for this band")
    }
}

/// Discrete Fourier analysis: `c_k = (1/N) sum_j v_j e^{-ik x_j}`, `|k| <= N/2 - 1`.
pub fn analyze(signal: &PeriodicSignal) -> SpectralRep {
    let n = signal.grid().len();
    let mut buf = signal.values().to_vec();
    fft_forward(&mut buf);
    let kk = n / 2 - 1;
    let scale = 1.0 / n as f64;
    let mut rep = SpectralRep::zero(kk);
    for k in -(kk as i64)..=(kk as i64) {
        let idx = k.rem_euclid(n as i64) as usize;
        rep.set(k, buf[idx] * scale);
    }
    rep
}

/// Round-trip guard used by tests and callers that expect band-limited data.
pub fn reanalyze_error(rep: &SpectralRep, grid: Grid) -> Result<f64> {
    let back = analyze(&rep.synthesize(grid)?);
    let mut err: f64 = 0.0;
    let kk = rep.max_freq().max(back.max_freq()) as i64;
    for k in -kk..=kk {
        err = err.max((rep.coeff(k) - back.coeff(k)).norm());
    }
    Ok(err)
}
