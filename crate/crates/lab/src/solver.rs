//! Iteratively reweighted least squares for strictly convex `L_p`
//! minimization, shared by the trigonometric and spline fitters.

use std::fmt;

use crate::error::{LabError, Result};

/// Default cap on the exponent; conditioning of the reweighted systems
/// degrades toward p = 1 and for very large p.
pub const P_MIN: f64 = 1.1;
pub const P_MAX: f64 = 16.0;

/// Where the iteration starts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InitStrategy {
    /// Initialize from the L2 projection (partial sum / least squares).
    #[default]
    PartialSum,
    Zero,
}

#[derive(Debug, Clone)]
pub struct ConvexSolveSettings {
    pub grad_tol: f64,
    pub obj_tol: f64,
    pub max_iter: usize,
    pub init: InitStrategy,
}

impl Default for ConvexSolveSettings {
    fn default() -> Self {
        // grad_tol is the certificate threshold reachable across the whole
        // capped exponent range: near p = 1 the reweighted systems are
        // ill-conditioned and the gradient terms |r|^{p-1} amplify f64
        // noise at residual sign crossings.
        ConvexSolveSettings {
            grad_tol: 1e-5,
            obj_tol: 1e-15,
            max_iter: 300,
            init: InitStrategy::PartialSum,
        }
    }
}

impl ConvexSolveSettings {
    pub fn validate(&self) -> Result<()> {
        if !(self.grad_tol > 0.0) || !(self.obj_tol > 0.0) {
            return Err(LabError::parameter(
                "tolerance",
                "solver tolerances must be positive",
            ));
        }
        if self.max_iter == 0 {
            return Err(LabError::parameter(
                "max_iter",
                "at least one iteration required",
            ));
        }
        Ok(())
    }
}

/// First-order certificate and conditioning report for a finished solve.
#[derive(Debug, Clone)]
pub struct SolveDiagnostics {
    pub iterations: usize,
    pub grad_norm: f64,
    /// f64 noise floor of the gradient measurement itself: residuals at
    /// machine zeros contribute `|r|^{p-1}` terms that cannot cancel below
    /// this level for p < 2.
    pub grad_noise_floor: f64,
    pub objective: f64,
    /// Dynamic range of the final IRLS weights (conditioning indicator).
    pub weight_spread: f64,
    /// Exponent actually used after clamping to `[P_MIN, P_MAX]`.
    pub p_used: f64,
    pub converged: bool,
}

/// Non-convergence carrying the best iterate found.
#[derive(Debug)]
pub enum SolveError<F> {
    Lab(LabError),
    Stalled(F),
}

impl<F> From<LabError> for SolveError<F> {
    fn from(e: LabError) -> Self {
        SolveError::Lab(e)
    }
}

impl<F: fmt::Debug> fmt::Display for SolveError<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveError::Lab(e) => write!(f, "{e}"),
            SolveError::Stalled(_) => write!(f, "solver exhausted its iteration budget"),
        }
    }
}

impl<F: fmt::Debug> std::error::Error for SolveError<F> {}

/// Damped IRLS with an annealed smoothing parameter and backtracking line
/// search on the true objective `quad_weight * sum |r_j|^p`.
///
/// The callbacks keep the basis-specific parts out of the loop:
/// `weighted_solve` returns the minimizer of the weighted least-squares
/// surrogate, `residual_magnitudes` evaluates `|f - Ac|` on the sample grid,
/// `lerp(a, b, s)` forms `a + s (b - a)`, and `gradient_norm` the Euclidean
/// norm of the exact objective gradient.
#[allow(clippy::too_many_arguments)]
pub(crate) fn irls<C: Clone>(
    p: f64,
    quad_weight: f64,
    data_scale: f64,
    settings: &ConvexSolveSettings,
    init: C,
    mut weighted_solve: impl FnMut(&[f64]) -> Result<C>,
    residual_magnitudes: impl Fn(&C) -> Vec<f64>,
    lerp: impl Fn(&C, &C, f64) -> C,
    gradient_norm: impl Fn(&C, f64) -> f64,
) -> Result<(C, SolveDiagnostics)> {
    settings.validate()?;
    let p = p.clamp(P_MIN, P_MAX);
    let objective = |r: &[f64]| quad_weight * r.iter().map(|&v| v.powf(p)).sum::<f64>();
    // absolute f64 error of a computed residual
    let eta = 4e-15 * data_scale.max(1e-300);
    let gradient_floor = |r: &[f64]| -> f64 {
        let sq: f64 = r
            .iter()
            .map(|&v| {
                let noise = if v <= eta {
                    eta.powf(p - 1.0)
                } else {
                    (p - 1.0) * v.powf(p - 2.0) * eta
                };
                noise * noise
            })
            .sum();
        4.0 * p * quad_weight * sq.sqrt()
    };

    let mut coeffs = init;
    let mut resid = residual_magnitudes(&coeffs);
    let mut obj = objective(&resid);
    let scale = resid.iter().fold(0.0f64, |a, &b| a.max(b)).max(1e-30);
    let mut eps = 1e-2 * scale;
    let mut spread = 1.0;
    let mut grad = gradient_norm(&coeffs, p);
    let mut iterations = 0;
    let mut flat_streak = 0usize;
    let mut prev_obj = obj;

    for iter in 1..=settings.max_iter {
        iterations = iter;
        // smoothing floor tied to the current residual scale: bounds the
        // weight spread (hence the conditioning of the normal equations)
        // while leaving transversal sign crossings unsmoothed
        let r_max = resid.iter().fold(0.0f64, |a, &b| a.max(b));
        let eps_floor = (1e-10 * r_max).max(1e-13 * scale).max(1e-300);
        if eps < eps_floor {
            eps = eps_floor;
        }
        let weights: Vec<f64> = resid
            .iter()
            .map(|&r| (r * r + eps * eps).powf((p - 2.0) / 2.0))
            .collect();
        let (wmin, wmax) = weights
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), &w| {
                (lo.min(w), hi.max(w))
            });
        spread = if wmin > 0.0 {
            wmax / wmin
        } else {
            f64::INFINITY
        };

        let proposal = weighted_solve(&weights)?;
        // the IRLS fixed-point map contracts like (p-2)/(p-1) for p > 2;
        // extrapolating the step toward p-1 restores Newton-like progress
        let mut step = (p - 1.0).clamp(1.0, 8.0);
        let mut improved = false;
        while step > 1e-8 {
            let trial = lerp(&coeffs, &proposal, step);
            let trial_resid = residual_magnitudes(&trial);
            let trial_obj = objective(&trial_resid);
            if trial_obj < obj {
                coeffs = trial;
                resid = trial_resid;
                obj = trial_obj;
                improved = true;
                break;
            }
            step *= 0.5;
        }

        grad = gradient_norm(&coeffs, p);
        let at_floor = eps <= eps_floor * 1.0001;
        if grad <= settings.grad_tol * (1.0 + obj) + gradient_floor(&resid) && at_floor {
            break;
        }
        if !improved && at_floor {
            // no descent direction resolvable at the smoothing floor
            break;
        }
        // the objective flattens quadratically at the minimizer, so a
        // plateau only counts after several consecutive stagnant steps
        if at_floor && improved && (prev_obj - obj) <= settings.obj_tol * obj.max(1e-300) {
            flat_streak += 1;
            if flat_streak >= 5 {
                break;
            }
        } else {
            flat_streak = 0;
        }
        prev_obj = obj;
        eps = (eps * 0.05).max(eps_floor);
    }

    let grad_noise_floor = gradient_floor(&resid);
    let converged = grad <= settings.grad_tol * (1.0 + obj) + grad_noise_floor;
    Ok((
        coeffs,
        SolveDiagnostics {
            iterations,
            grad_norm: grad,
            grad_noise_floor,
            objective: obj,
            weight_spread: spread,
            p_used: p,
            converged,
        },
    ))
}
