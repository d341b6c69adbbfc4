//! Integer and fractional moduli of smoothness, K-functional realizations,
//! Besov seminorms, and the Hardy-Littlewood oracle for monotone cosine
//! coefficients.

use num_complex::Complex64;

use crate::error::{LabError, Result};
use crate::multiplier::vp_eta;
use crate::norm::{lp_norm_spectral, NormExponent};
use crate::process::ApproxProcess;
use crate::spectral::{DerivativeMode, SpectralRep};
use crate::window::VpProfile;

/// How a fractional difference is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DifferenceMode {
    /// Exact multiplier `e^{ik*alpha*h} (1 - e^{-ikh})^alpha` (principal branch).
    Symbol,
    /// Truncated binomial series of translates, `nu_max + 1` terms.
    Binomial { nu_max: usize },
}

/// A fractional difference together with truncation metadata.
#[derive(Debug, Clone)]
pub struct FracDifference {
    pub rep: SpectralRep,
    /// Estimated l^1 tail of the dropped binomial coefficients (0 in symbol
    /// mode and for integer orders).
    pub tail_bound: f64,
    /// Set when the tail estimate exceeds the configured tolerance.
    pub precision_warning: bool,
}

/// `binom(alpha, nu)` for real `alpha`.
fn binomial(alpha: f64, nu: usize) -> f64 {
    let mut b = 1.0;
    for j in 0..nu {
        b *= (alpha - j as f64) / (j as f64 + 1.0);
    }
    b
}

/// Difference of fractional order `alpha` with step `h`:
/// `sum_nu (-1)^nu binom(alpha, nu) f(. + (alpha - nu) h)`.
pub fn fractional_difference(
    rep: &SpectralRep,
    h: f64,
    alpha: f64,
    mode: DifferenceMode,
    eps_binom: f64,
) -> Result<FracDifference> {
    if !(alpha > 0.0) {
        return Err(LabError::parameter(
            "alpha",
            "difference order must be positive",
        ));
    }
    match mode {
        DifferenceMode::Symbol => {
            let out = rep.map_multiplier(|k| {
                let kh = k as f64 * h;
                let inner = Complex64::new(1.0 - (-kh).cos(), -(-kh).sin());
                if inner.norm() == 0.0 {
                    return Complex64::new(0.0, 0.0);
                }
                let akh = alpha * kh;
                Complex64::new(akh.cos(), akh.sin()) * inner.powf(alpha)
            });
            Ok(FracDifference {
                rep: out,
                tail_bound: 0.0,
                precision_warning: false,
            })
        }
        DifferenceMode::Binomial { nu_max } => {
            let mut acc = SpectralRep::zero(rep.max_freq());
            let mut coef = 1.0; // (-1)^nu binom(alpha, nu), starting at nu = 0
            for nu in 0..=nu_max {
                if coef != 0.0 {
                    let term = rep.translate((alpha - nu as f64) * h);
                    acc = acc.add(&term.scale(coef));
                }
                coef *= -(alpha - nu as f64) / (nu as f64 + 1.0);
            }
            // |binom(alpha, nu)| ~ nu^{-alpha-1}; integral comparison bound.
            let tail_bound = if alpha.fract() == 0.0 && (alpha as usize) <= nu_max {
                0.0
            } else {
                binomial(alpha, nu_max + 1).abs() * (nu_max as f64 + 1.0) / alpha
            };
            Ok(FracDifference {
                rep: acc,
                tail_bound,
                precision_warning: tail_bound > eps_binom,
            })
        }
    }
}

/// Parameters of the modulus-of-smoothness evaluation.
#[derive(Debug, Clone)]
pub struct ModulusSpec {
    pub alpha: f64,
    pub p: NormExponent,
    /// Trial shifts per octave of the h-grid (the endpoint `delta` is always
    /// included).
    pub shifts: usize,
    /// Binomial truncation, used only by the oracle difference mode.
    pub nu_max: usize,
    pub eps_binom: f64,
}

impl ModulusSpec {
    pub fn new(alpha: f64, p: NormExponent) -> Result<Self> {
        if !(alpha > 0.0) {
            return Err(LabError::parameter(
                "alpha",
                "modulus order must be positive",
            ));
        }
        Ok(ModulusSpec {
            alpha,
            p,
            shifts: 64,
            nu_max: 200,
            eps_binom: 1e-8,
        })
    }

    pub fn with_shifts(mut self, shifts: usize) -> Result<Self> {
        if shifts < 16 {
            return Err(LabError::parameter(
                "shifts",
                "h-grid resolution must be at least 16",
            ));
        }
        self.shifts = shifts;
        Ok(self)
    }
}

// Shift floor making the dyadic h-grids exactly nested across delta -> delta/2.
const H_FLOOR: f64 = 1e-12;

/// Trial shifts for `sup_{0 < h <= delta}`: one layer of `M` points per
/// octave, descending while the band can still resolve the shift. The grids
/// for `delta` and `delta/2` are nested, so the dyadic modulus is monotone
/// by construction. Ties in the maximum resolve toward smaller `h`.
fn shift_grid(delta: f64, max_freq: usize, shifts: usize) -> Vec<f64> {
    let mut hs = Vec::new();
    for i in 1..=shifts {
        hs.push(delta * i as f64 / shifts as f64);
    }
    let mut scale = delta;
    while scale * (max_freq.max(1) as f64) > 0.5 && scale > H_FLOOR {
        scale /= 2.0;
        let mut i = 1;
        while i < shifts {
            hs.push(scale * i as f64 / shifts as f64);
            i += 2;
        }
    }
    hs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    hs
}

/// `omega_alpha(f, delta)_p`: maximum of `||Delta_h^alpha f||_p` over the
/// trial shifts.
pub fn modulus(rep: &SpectralRep, delta: f64, spec: &ModulusSpec) -> Result<f64> {
    if !(delta > 0.0) {
        return Err(LabError::parameter(
            "delta",
            "modulus scale must be positive",
        ));
    }
    let mut best = 0.0f64;
    for h in shift_grid(delta, rep.max_freq(), spec.shifts) {
        let diff =
            fractional_difference(rep, h, spec.alpha, DifferenceMode::Symbol, spec.eps_binom)?;
        let val = lp_norm_spectral(&diff.rep, spec.p);
        if val > best {
            best = val;
        }
    }
    Ok(best)
}

/// The two terms of the K-functional realization at dyadic level `n`:
/// `||f - eta_{2^n} f||_p` and `2^{-n*alpha} ||(-Lap)^{alpha/2} eta_{2^n} f||_p`.
#[derive(Debug, Clone)]
pub struct RealizationResult {
    pub level: usize,
    pub approx_error: f64,
    pub derivative_term: f64,
}

impl RealizationResult {
    pub fn total(&self) -> f64 {
        self.approx_error + self.derivative_term
    }
}

pub fn realization(
    rep: &SpectralRep,
    alpha: f64,
    level: usize,
    p: NormExponent,
    profile: VpProfile,
) -> Result<RealizationResult> {
    if !(alpha > 0.0) {
        return Err(LabError::parameter(
            "alpha",
            "realization order must be positive",
        ));
    }
    let n = 1usize << level;
    let smooth_part = vp_eta(rep, n, profile)?;
    let approx_error = lp_norm_spectral(&rep.sub(&smooth_part), p);
    let derivative = smooth_part.fractional_derivative(alpha, DerivativeMode::Laplacian)?;
    let derivative_term = (n as f64).powf(-alpha) * lp_norm_spectral(&derivative, p);
    Ok(RealizationResult {
        level,
        approx_error,
        derivative_term,
    })
}

/// What drives the dyadic Besov sum.
pub enum BesovSource<'a> {
    /// `2^{s q k} omega_{alpha_ref}(f, 2^{-k})_p^q`
    Modulus { alpha_ref: f64 },
    /// `2^{(s - alpha) q k} ||(-Lap)^{alpha/2} P_{2^k} f||_p^q`
    Derivative {
        process: &'a dyn ApproxProcess,
        alpha: f64,
    },
}

/// Besov seminorm over levels `k = 1..=levels`; `q = inf` takes the sup.
pub fn besov_seminorm(
    rep: &SpectralRep,
    s: f64,
    q: f64,
    source: BesovSource<'_>,
    levels: usize,
    p: NormExponent,
) -> Result<f64> {
    if !(s > 0.0) {
        return Err(LabError::parameter(
            "s",
            "Besov smoothness must be positive",
        ));
    }
    if !(q > 0.0) {
        return Err(LabError::parameter(
            "q",
            "Besov integrability must be positive",
        ));
    }
    let mut terms = Vec::with_capacity(levels);
    match source {
        BesovSource::Modulus { alpha_ref } => {
            let spec = ModulusSpec::new(alpha_ref, p)?;
            for k in 1..=levels {
                let w = modulus(rep, (2.0f64).powi(-(k as i32)), &spec)?;
                terms.push((2.0f64).powf(s * k as f64) * w);
            }
        }
        BesovSource::Derivative { process, alpha } => {
            if s >= alpha {
                return Err(LabError::parameter(
                    "s",
                    format!(
                        "derivative-based Besov sources need s < alpha, got s={s}, alpha={alpha}"
                    ),
                ));
            }
            let mut warm = None;
            for k in 1..=levels {
                let out = process.apply(rep, 1usize << k, warm.as_ref())?;
                let d = out
                    .rep
                    .fractional_derivative(alpha, DerivativeMode::Laplacian)?;
                terms.push((2.0f64).powf((s - alpha) * k as f64) * lp_norm_spectral(&d, p));
                warm = Some(out.rep);
            }
        }
    }
    if q.is_infinite() {
        Ok(terms.into_iter().fold(0.0, f64::max))
    } else {
        Ok(terms
            .into_iter()
            .map(|t| t.powf(q))
            .sum::<f64>()
            .powf(1.0 / q))
    }
}

/// Hardy-Littlewood two-sum surrogate for `omega_alpha(f, 1/n)_p` of a cosine
/// series with nonincreasing nonnegative coefficients `a_1..a_M`:
/// `n^{-alpha} (sum_{k<=n} a_k^p k^{p*alpha+p-2})^{1/p} + (sum_{k>n} a_k^p k^{p-2})^{1/p}`.
pub fn hl_modulus_oracle(coeffs: &[f64], p: f64, alpha: f64, n: usize) -> Result<f64> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(LabError::UnsupportedExponent {
            p,
            reason: "Hardy-Littlewood oracle needs 1 < p < inf",
        });
    }
    if !(alpha > 0.0) {
        return Err(LabError::parameter("alpha", "order must be positive"));
    }
    if n == 0 || n > coeffs.len() {
        return Err(LabError::parameter(
            "n",
            format!("level must satisfy 1 <= n <= {}", coeffs.len()),
        ));
    }
    for (i, w) in coeffs.windows(2).enumerate() {
        if w[0] < 0.0 || w[1] > w[0] + 1e-15 {
            return Err(LabError::parameter(
                "coeffs",
                format!(
                    "oracle requires nonincreasing nonnegative coefficients (violated at index {})",
                    i + 1
                ),
            ));
        }
    }
    let head: f64 = coeffs
        .iter()
        .take(n)
        .enumerate()
        .map(|(i, &a)| {
            let k = (i + 1) as f64;
            a.powf(p) * k.powf(p * alpha + p - 2.0)
        })
        .sum();
    let tail: f64 = coeffs
        .iter()
        .enumerate()
        .skip(n)
        .map(|(i, &a)| {
            let k = (i + 1) as f64;
            a.powf(p) * k.powf(p - 2.0)
        })
        .sum();
    Ok((n as f64).powf(-alpha) * head.powf(1.0 / p) + tail.powf(1.0 / p))
}
