//! Best uniform-knot spline approximation on `[0, 1]`, the truncated-power
//! form of a spline, p-variation of step functions, and the restricted
//! modulus of smoothness on the interval.

use nalgebra::{DMatrix, DVector};

use crate::error::{LabError, Result};
use crate::solver::{irls, ConvexSolveSettings, InitStrategy, SolveDiagnostics, SolveError};

/// Samples of a function on the midpoint grid `x_i = (i + 1/2)/m` of `[0, 1]`.
#[derive(Debug, Clone)]
pub struct UnitSamples {
    values: Vec<f64>,
}

impl UnitSamples {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 8 {
            return Err(LabError::parameter(
                "values",
                "need at least 8 samples on [0,1]",
            ));
        }
        Ok(UnitSamples { values })
    }

    pub fn from_fn(m: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new((0..m).map(|i| f((i as f64 + 0.5) / m as f64)).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn point(&self, i: usize) -> f64 {
        (i as f64 + 0.5) / self.values.len() as f64
    }
}

/// Open-uniform B-spline basis of order `r` (degree `r - 1`) on knots `j/n`.
#[derive(Debug, Clone)]
pub struct BSplineBasis {
    order: usize,
    segments: usize,
    knots: Vec<f64>,
}

impl BSplineBasis {
    pub fn new(order: usize, segments: usize) -> Result<Self> {
        if order == 0 {
            return Err(LabError::parameter(
                "order",
                "spline order must be at least 1",
            ));
        }
        if segments == 0 {
            return Err(LabError::parameter(
                "segments",
                "need at least one knot interval",
            ));
        }
        let mut knots = vec![0.0; order];
        for j in 1..segments {
            knots.push(j as f64 / segments as f64);
        }
        knots.extend(std::iter::repeat_n(1.0, order));
        Ok(BSplineBasis {
            order,
            segments,
            knots,
        })
    }

    pub fn dim(&self) -> usize {
        self.segments + self.order - 1
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn segments(&self) -> usize {
        self.segments
    }

    fn span(&self, x: f64) -> usize {
        let cell = ((x * self.segments as f64) as usize).min(self.segments - 1);
        self.order - 1 + cell
    }

    /// Nonzero basis values at `x`: `(first_index, values)` with
    /// `values.len() == order` (Cox-de Boor recursion).
    pub fn eval(&self, x: f64) -> (usize, Vec<f64>) {
        let r = self.order;
        let s = self.span(x);
        let mut vals = vec![0.0; r];
        vals[0] = 1.0;
        let mut left = vec![0.0; r];
        let mut right = vec![0.0; r];
        for d in 1..r {
            left[d] = x - self.knots[s + 1 - d];
            right[d] = self.knots[s + d] - x;
            let mut saved = 0.0;
            for i in 0..d {
                let denom = right[i + 1] + left[d - i];
                let tmp = if denom == 0.0 { 0.0 } else { vals[i] / denom };
                vals[i] = saved + right[i + 1] * tmp;
                saved = left[d - i] * tmp;
            }
            vals[d] = saved;
        }
        (s + 1 - r, vals)
    }

    pub fn value(&self, coeffs: &[f64], x: f64) -> f64 {
        let (first, vals) = self.eval(x);
        vals.iter()
            .enumerate()
            .map(|(i, v)| coeffs[first + i] * v)
            .sum()
    }
}

/// Solve a small Vandermonde system for the monomial coefficients (in the
/// scaled local variable) of the polynomial interpolating `(u_i, y_i)`.
fn local_polynomial(us: &[f64], ys: &[f64]) -> Result<Vec<f64>> {
    let r = us.len();
    let v = DMatrix::from_fn(r, r, |row, col| us[row].powi(col as i32));
    let rhs = DVector::from_column_slice(ys);
    v.lu()
        .solve(&rhs)
        .map(|c| c.iter().copied().collect())
        .ok_or(LabError::LinearSolve("degenerate local interpolation"))
}

/// Rebase a polynomial given in `u = (x - c)/w` onto monomials in `x`.
fn rebase_polynomial(local: &[f64], center: f64, halfwidth: f64) -> Vec<f64> {
    // Horner with polynomial coefficients: acc(x) = acc(x) * (x - c)/w + a_d
    let mut acc: Vec<f64> = vec![];
    for &a in local.iter().rev() {
        let mut next = vec![0.0; acc.len() + 1];
        for (i, &ci) in acc.iter().enumerate() {
            next[i + 1] += ci / halfwidth;
            next[i] -= ci * center / halfwidth;
        }
        next[0] += a;
        while next.len() > 1 && *next.last().unwrap() == 0.0 {
            next.pop();
        }
        acc = next;
    }
    acc
}

/// A fitted spline in both B-spline and truncated-power coordinates:
/// `S(x) = P(x) + sum_j a_j (x - t_j)_+^{r-1}`.
#[derive(Debug, Clone)]
pub struct SplineFit {
    pub basis: BSplineBasis,
    pub coeffs: Vec<f64>,
    /// Monomial coefficients of `P` (low degree first, length <= r).
    pub poly: Vec<f64>,
    /// Truncated-power coefficients `a_1..a_{n-1}` at the interior knots.
    pub trunc_powers: Vec<f64>,
    /// Achieved discretized `L_p` error.
    pub error: f64,
    pub diagnostics: SolveDiagnostics,
}

impl SplineFit {
    pub fn order(&self) -> usize {
        self.basis.order()
    }

    pub fn knot_count(&self) -> usize {
        self.basis.segments()
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.basis.value(&self.coeffs, x)
    }

    pub fn eval_truncated_powers(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for &c in self.poly.iter().rev() {
            acc = acc * x + c;
        }
        let r = self.order();
        let n = self.knot_count();
        for (j, &a) in self.trunc_powers.iter().enumerate() {
            let t = (j + 1) as f64 / n as f64;
            if x > t {
                acc += a * (x - t).powi(r as i32 - 1);
            }
        }
        acc
    }
}

/// Recover `P` and the `a_j` from the B-spline form by interpolating the
/// polynomial piece on every knot interval.
fn truncated_power_form(basis: &BSplineBasis, coeffs: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let r = basis.order();
    let n = basis.segments();
    let halfwidth = 0.5 / n as f64;
    // interpolation abscissas in the scaled local variable
    let us: Vec<f64> = (0..r)
        .map(|q| {
            if r == 1 {
                0.0
            } else {
                -0.8 + 1.6 * q as f64 / (r - 1) as f64
            }
        })
        .collect();

    let mut leading = Vec::with_capacity(n);
    let mut first_piece = Vec::new();
    for seg in 0..n {
        let center = (seg as f64 + 0.5) / n as f64;
        let ys: Vec<f64> = us
            .iter()
            .map(|&u| basis.value(coeffs, center + u * halfwidth))
            .collect();
        let local = local_polynomial(&us, &ys)?;
        let lead_local = local.get(r - 1).copied().unwrap_or(0.0);
        leading.push(lead_local / halfwidth.powi(r as i32 - 1));
        if seg == 0 {
            first_piece = rebase_polynomial(&local, center, halfwidth);
            first_piece.resize(r, 0.0);
        }
    }
    let trunc: Vec<f64> = leading.windows(2).map(|w| w[1] - w[0]).collect();
    Ok((first_piece, trunc))
}

/// Best `L_p[0,1]` approximation by splines of order `r` on knots `j/n`.
/// For `p = 2` this is the linear least-squares solution.
#[allow(clippy::result_large_err)] // the stalled branch carries the best iterate
pub fn best_spline(
    samples: &UnitSamples,
    order: usize,
    segments: usize,
    p: f64,
    settings: &ConvexSolveSettings,
) -> std::result::Result<SplineFit, SolveError<SplineFit>> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(LabError::UnsupportedExponent {
            p,
            reason: "best_spline needs 1 < p < inf",
        }
        .into());
    }
    let basis = BSplineBasis::new(order, segments)?;
    let m = samples.len();
    if m < 8 * segments {
        return Err(LabError::parameter(
            "samples",
            format!(
                "need at least {} samples for {} knot intervals",
                8 * segments,
                segments
            ),
        )
        .into());
    }
    let dim = basis.dim();
    let quad = 1.0 / m as f64;
    let rows: Vec<(usize, Vec<f64>)> = (0..m).map(|i| basis.eval(samples.point(i))).collect();
    let f = samples.values();

    let residuals = |coeffs: &Vec<f64>| -> Vec<f64> {
        rows.iter()
            .zip(f)
            .map(|((first, vals), &fv)| {
                let s: f64 = vals
                    .iter()
                    .enumerate()
                    .map(|(i, v)| coeffs[first + i] * v)
                    .sum();
                fv - s
            })
            .collect()
    };

    let weighted_solve = |weights: &[f64]| -> Result<Vec<f64>> {
        let mut h = DMatrix::zeros(dim, dim);
        let mut rhs = DVector::zeros(dim);
        for ((first, vals), (&w, &fv)) in rows.iter().zip(weights.iter().zip(f)) {
            for (i, &vi) in vals.iter().enumerate() {
                rhs[first + i] += w * fv * vi;
                for (j, &vj) in vals.iter().enumerate() {
                    h[(first + i, first + j)] += w * vi * vj;
                }
            }
        }
        if let Some(chol) = h.clone().cholesky() {
            Ok(chol.solve(&rhs).iter().copied().collect())
        } else {
            h.lu()
                .solve(&rhs)
                .map(|v| v.iter().copied().collect())
                .ok_or(LabError::LinearSolve(
                    "spline normal equations are singular",
                ))
        }
    };

    let init = match settings.init {
        InitStrategy::PartialSum => weighted_solve(&vec![1.0; m]).map_err(SolveError::Lab)?,
        InitStrategy::Zero => vec![0.0; dim],
    };

    let data_scale = f.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    let (coeffs, diagnostics) = irls(
        p,
        quad,
        data_scale,
        settings,
        init,
        weighted_solve,
        |c| residuals(c).iter().map(|r| r.abs()).collect(),
        |a, b, s| a.iter().zip(b).map(|(x, y)| x + s * (y - x)).collect(),
        |c, p_used| {
            let resid = residuals(c);
            let mut grad = vec![0.0; dim];
            for ((first, vals), &r) in rows.iter().zip(&resid) {
                let factor = if r == 0.0 {
                    0.0
                } else {
                    p_used * quad * r.abs().powf(p_used - 1.0) * r.signum()
                };
                for (i, &vi) in vals.iter().enumerate() {
                    grad[first + i] -= factor * vi;
                }
            }
            grad.iter().map(|g| g * g).sum::<f64>().sqrt()
        },
    )?;

    let resid = residuals(&coeffs);
    let error = (quad * resid.iter().map(|r| r.abs().powf(p)).sum::<f64>()).powf(1.0 / p);
    let (poly, trunc_powers) = truncated_power_form(&basis, &coeffs)?;
    let fit = SplineFit {
        basis,
        coeffs,
        poly,
        trunc_powers,
        error,
        diagnostics,
    };
    if fit.diagnostics.converged {
        Ok(fit)
    } else {
        Err(SolveError::Stalled(fit))
    }
}

/// `(sum_j |jump_j|^p)^{1/p}`: p-variation of a step function for `p >= 1`,
/// where the supremum over partitions is realized by sampling adjacent to
/// every jump point.
pub fn pvariation_step(jumps: &[f64], p: f64) -> Result<f64> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(LabError::UnsupportedExponent {
            p,
            reason: "step-function p-variation as a jump sum needs p >= 1",
        });
    }
    Ok(jumps
        .iter()
        .map(|j| j.abs().powf(p))
        .sum::<f64>()
        .powf(1.0 / p))
}

/// Jumps of `S^{(r-1)}` at the interior knots, equal to `(r-1)! a_j`.
pub fn spline_jump_data(fit: &SplineFit) -> Vec<f64> {
    let factorial: f64 = (1..fit.order()).map(|v| v as f64).product();
    fit.trunc_powers.iter().map(|a| factorial * a).collect()
}

/// Restricted modulus `sup_{0 < h <= delta} ||Delta_h^r f||_{L_p[0, 1-rh]}`
/// with `h` snapped to multiples of the sample spacing.
pub fn spline_modulus(
    samples: &UnitSamples,
    order: usize,
    delta: f64,
    p: f64,
    shifts: usize,
) -> Result<f64> {
    if order == 0 {
        return Err(LabError::parameter(
            "order",
            "difference order must be at least 1",
        ));
    }
    if !(delta > 0.0) || order as f64 * delta >= 1.0 {
        return Err(LabError::parameter(
            "delta",
            "need r*delta < 1 on the unit interval",
        ));
    }
    if !(p >= 1.0) {
        return Err(LabError::parameter("p", "need p >= 1 (p = inf allowed)"));
    }
    let m = samples.len();
    let f = samples.values();
    let max_steps = ((delta * m as f64) + 1e-9).floor() as usize;
    if max_steps == 0 {
        return Ok(0.0);
    }
    let mut step_sizes: Vec<usize> = (1..=shifts)
        .map(|i| ((delta * i as f64 / shifts as f64) * m as f64).round() as usize)
        .map(|s| s.clamp(1, max_steps))
        .collect();
    step_sizes.sort_unstable();
    step_sizes.dedup();

    let binom: Vec<f64> = {
        let r = order;
        let mut b = vec![0.0; r + 1];
        b[0] = 1.0;
        for q in 0..r {
            b[q + 1] = b[q] * (r - q) as f64 / (q + 1) as f64;
        }
        b
    };

    let mut best = 0.0f64;
    for steps in step_sizes {
        let window = m.saturating_sub(order * steps);
        if window == 0 {
            continue;
        }
        let mut acc = 0.0f64;
        let mut sup = 0.0f64;
        for i in 0..window {
            let mut d = 0.0;
            for q in 0..=order {
                let sign = if (order - q).is_multiple_of(2) {
                    1.0
                } else {
                    -1.0
                };
                d += sign * binom[q] * f[i + q * steps];
            }
            if p.is_finite() {
                acc += d.abs().powf(p);
            } else {
                sup = sup.max(d.abs());
            }
        }
        let val = if p.is_finite() {
            (acc / m as f64).powf(1.0 / p)
        } else {
            sup
        };
        if val > best {
            best = val;
        }
    }
    Ok(best)
}
