//! Best approximation by trigonometric polynomials in `L_p`, `1 < p < inf`,
//! via damped IRLS on the discretized norm. The weighted normal matrix is
//! Toeplitz in the exponential basis and is assembled from one FFT of the
//! weight vector per iteration.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{LabError, Result};
use crate::norm::NormExponent;
use crate::signal::PeriodicSignal;
use crate::solver::{irls, ConvexSolveSettings, InitStrategy, SolveDiagnostics, SolveError};
use crate::spectral::{analyze, fft_forward, SpectralRep};

/// Result of a best-approximation solve.
#[derive(Debug, Clone)]
pub struct TrigFit {
    pub rep: SpectralRep,
    /// Achieved discretized `L_p` error `||f - T||_p`.
    pub error: f64,
    pub diagnostics: SolveDiagnostics,
}

fn coeffs_to_rep(coeffs: &[Complex64], degree: usize) -> SpectralRep {
    let mut rep = SpectralRep::zero(degree);
    for (i, &c) in coeffs.iter().enumerate() {
        rep.set(i as i64 - degree as i64, c);
    }
    rep
}

fn rep_to_coeffs(rep: &SpectralRep, degree: usize) -> Vec<Complex64> {
    (-(degree as i64)..=degree as i64)
        .map(|k| rep.coeff(k))
        .collect()
}

/// Minimize `||f - T||_p` over trigonometric polynomials of degree <= n.
///
/// Requires `1 < p < inf` (strict convexity gives the unique minimizer) and
/// a grid oversampling the degree by 4x. An exhausted iteration budget
/// returns the best iterate inside [`SolveError::Stalled`].
pub fn best_trig(
    signal: &PeriodicSignal,
    degree: usize,
    p: NormExponent,
    settings: &ConvexSolveSettings,
    warm: Option<&SpectralRep>,
) -> std::result::Result<TrigFit, SolveError<TrigFit>> {
    let p = match p {
        NormExponent::Finite(q) if q > 1.0 => q,
        other => {
            return Err(LabError::UnsupportedExponent {
                p: other.value(),
                reason: "best_trig needs 1 < p < inf; use vp_eta as a near-best substitute",
            }
            .into())
        }
    };
    let grid = signal.grid();
    let n = grid.len();
    if n < 4 * degree.max(2) {
        return Err(LabError::Aliasing {
            grid: n,
            freq: degree,
        }
        .into());
    }

    let f: Vec<Complex64> = signal.values().to_vec();
    let quad = grid.weight();
    let bins = 2 * degree + 1;

    let init: Vec<Complex64> = match warm {
        Some(rep) => rep_to_coeffs(rep, degree),
        None => match settings.init {
            InitStrategy::PartialSum => rep_to_coeffs(&analyze(signal), degree),
            InitStrategy::Zero => vec![Complex64::new(0.0, 0.0); bins],
        },
    };

    let residual_values = |coeffs: &Vec<Complex64>| -> Vec<Complex64> {
        let synth = coeffs_to_rep(coeffs, degree)
            .synthesize(grid)
            .expect("grid oversamples the degree");
        f.iter().zip(synth.values()).map(|(a, b)| a - b).collect()
    };

    let weighted_solve = |weights: &[f64]| -> Result<Vec<Complex64>> {
        // T_{kl} = sum_j w_j e^{i(l-k)x_j} -> FFT of the weights
        let mut wbuf: Vec<Complex64> = weights.iter().map(|&w| Complex64::new(w, 0.0)).collect();
        fft_forward(&mut wbuf);
        let mut wf: Vec<Complex64> = weights
            .iter()
            .zip(&f)
            .map(|(&w, &v)| Complex64::new(w, 0.0) * v)
            .collect();
        fft_forward(&mut wf);

        let matrix = DMatrix::from_fn(bins, bins, |row, col| {
            let m = col as i64 - row as i64; // frequency difference l - k
            wbuf[(-m).rem_euclid(n as i64) as usize]
        });
        let rhs = DVector::from_fn(bins, |row, _| {
            let k = row as i64 - degree as i64;
            wf[k.rem_euclid(n as i64) as usize]
        });
        if let Some(chol) = matrix.clone().cholesky() {
            Ok(chol.solve(&rhs).iter().copied().collect())
        } else {
            matrix
                .lu()
                .solve(&rhs)
                .map(|v| v.iter().copied().collect())
                .ok_or(LabError::LinearSolve(
                    "weighted normal equations are singular",
                ))
        }
    };

    let data_scale = f.iter().map(|v| v.norm()).fold(0.0f64, f64::max);
    let (coeffs, diagnostics) = irls(
        p,
        quad,
        data_scale,
        settings,
        init,
        weighted_solve,
        |c| residual_values(c).iter().map(|r| r.norm()).collect(),
        |a, b, s| {
            a.iter()
                .zip(b)
                .map(|(x, y)| x + (y - x) * Complex64::new(s, 0.0))
                .collect()
        },
        |c, p_used| {
            // gradient of sum w |r_j|^p over real/imag coefficient parts
            let resid = residual_values(c);
            let mut u: Vec<Complex64> = resid
                .iter()
                .map(|r| {
                    let m = r.norm();
                    if m == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        r * m.powf(p_used - 2.0)
                    }
                })
                .collect();
            fft_forward(&mut u);
            let sq: f64 = (-(degree as i64)..=degree as i64)
                .map(|k| u[k.rem_euclid(n as i64) as usize].norm_sqr())
                .sum();
            p_used * quad * sq.sqrt()
        },
    )?;

    let err_vals = residual_values(&coeffs);
    let error = if p == 2.0 {
        (quad * err_vals.iter().map(|r| r.norm_sqr()).sum::<f64>()).sqrt()
    } else {
        (quad * err_vals.iter().map(|r| r.norm().powf(p)).sum::<f64>()).powf(1.0 / p)
    };
    let fit = TrigFit {
        rep: coeffs_to_rep(&coeffs, degree),
        error,
        diagnostics,
    };
    if fit.diagnostics.converged {
        Ok(fit)
    } else {
        Err(SolveError::Stalled(fit))
    }
}
