//! Optimality experiments: lacunary and general-monotone equivalences, the
//! endpoint counterexamples, and log-log slope fits of the separating
//! quantities.

use std::ops::RangeInclusive;

use crate::error::{LabError, Result};
use crate::family::{CoeffRule, Lacunary, MonotoneSeries, TestFunction};
use crate::harness::{smoothness_sequence, weighted_tail_sum, TailExponent, TailMode, XiWeight};
use crate::norm::NormExponent;
use crate::process::MeanProcess;
use crate::smoothness::{hl_modulus_oracle, modulus, ModulusSpec};
use crate::spectral::{DerivativeMode, SpectralRep};
use crate::window::{Indicator, VpProfile, VpWindow};

/// Ordinary least-squares slope of `ln y` against `ln x`.
pub fn fit_loglog(points: &[(f64, f64)]) -> Result<f64> {
    let data: Vec<(f64, f64)> = points
        .iter()
        .filter(|&&(x, y)| x > 0.0 && y > 0.0 && y.is_finite())
        .map(|&(x, y)| (x.ln(), y.ln()))
        .collect();
    if data.len() < 4 {
        return Err(LabError::parameter(
            "levels",
            format!(
                "slope fit needs at least 4 usable points, got {}",
                data.len()
            ),
        ));
    }
    let n = data.len() as f64;
    let sx: f64 = data.iter().map(|d| d.0).sum();
    let sy: f64 = data.iter().map(|d| d.1).sum();
    let sxx: f64 = data.iter().map(|d| d.0 * d.0).sum();
    let sxy: f64 = data.iter().map(|d| d.0 * d.1).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-300 {
        return Err(LabError::parameter(
            "levels",
            "degenerate abscissas in slope fit",
        ));
    }
    Ok((n * sxy - sx * sy) / denom)
}

/// Max over min of a positive series; infinity when any entry vanishes.
pub fn stability_spread(values: &[f64]) -> f64 {
    let max = values.iter().cloned().fold(0.0f64, f64::max);
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    if min <= 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// A fitted slope compared against a predicted exponent.
#[derive(Debug, Clone)]
pub struct SharpnessVerdict {
    pub id: String,
    pub fitted_slope: f64,
    pub expected_slope: f64,
    /// Absolute tolerance on the slope.
    pub tolerance: f64,
    pub pass: bool,
}

impl SharpnessVerdict {
    fn within(id: impl Into<String>, fitted: f64, expected: f64, tolerance: f64) -> Self {
        SharpnessVerdict {
            id: id.into(),
            fitted_slope: fitted,
            expected_slope: expected,
            tolerance,
            pass: (fitted - expected).abs() <= tolerance,
        }
    }

    fn positive(id: impl Into<String>, fitted: f64, expected: f64) -> Self {
        SharpnessVerdict {
            id: id.into(),
            fitted_slope: fitted,
            expected_slope: expected,
            tolerance: f64::NAN,
            pass: fitted > 0.0,
        }
    }
}

/// A labelled data series for reports and external plotting.
#[derive(Debug, Clone)]
pub struct ExperimentSeries {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone)]
pub struct SharpnessOutcome {
    pub id: String,
    pub series: Vec<ExperimentSeries>,
    pub verdicts: Vec<SharpnessVerdict>,
}

/// The experiment catalogue.
#[derive(Debug, Clone)]
pub enum SharpnessKind {
    /// Lacunary two-sided equivalence with exponent 2 on both sides,
    /// `1 < p < inf`, partial sums.
    LacunaryP { p: f64 },
    /// The `n^{-1/2}` modulus decay vs the `(2+eps)`-sum decay
    /// `n^{-(1+eps)/(2+eps)}` for `a_{2^j} = 1/j`.
    RemarkOpt1 { p: f64, epsilon: f64 },
    /// Lacunary equivalence at p = 1 (exponent 2, de la Vallee Poussin means).
    LacunaryL1,
    /// Lacunary equivalence at p = inf (plain sum, exponent 1).
    LacunaryLinf,
    /// General-monotone equivalence with exponent p on both sides, plus the
    /// Hardy-Littlewood oracle cross-check.
    Gm {
        rule: CoeffRule,
        p: f64,
        terms: usize,
    },
    /// Endpoint failure of the lower estimate: the `l^q` sum outgrows the
    /// modulus like `n^{1/q}`.
    CounterexampleEndpoint { infinity: bool, gamma: f64, q: f64 },
    /// p = 1 failure of the upper estimate with exponent q > 1: the modulus
    /// of `f_N` outgrows the sum like `log^{1 - 1/q} N`.
    CounterexampleL1 { gamma: f64, q: f64 },
}

impl SharpnessKind {
    pub fn label(&self) -> &'static str {
        match self {
            SharpnessKind::LacunaryP { .. } => "lacunary-p",
            SharpnessKind::RemarkOpt1 { .. } => "remark-opt1",
            SharpnessKind::LacunaryL1 => "lacunary-L1",
            SharpnessKind::LacunaryLinf => "lacunary-Linf",
            SharpnessKind::Gm { .. } => "gm",
            SharpnessKind::CounterexampleEndpoint { .. } => "counterexample-endpoint",
            SharpnessKind::CounterexampleL1 { .. } => "counterexample-L1",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SharpnessConfig {
    pub kind: SharpnessKind,
    /// Smoothness order of the derivative norms and the modulus.
    pub alpha: f64,
    /// Dyadic level range `n` (reused as the `log2 N` sweep for the
    /// counterexample-L1 family).
    pub levels: RangeInclusive<usize>,
    pub shifts: usize,
}

fn require_levels(cfg: &SharpnessConfig) -> Result<Vec<usize>> {
    let levels: Vec<usize> = cfg.levels.clone().collect();
    if levels.len() < 4 {
        return Err(LabError::parameter(
            "levels",
            format!(
                "sharpness experiments need at least 4 levels, got {}",
                levels.len()
            ),
        ));
    }
    Ok(levels)
}

/// Sum `(sum_{k >= n} (2^{-alpha k} b_k)^q)^{1/q}` of a level sequence
/// produced by `process` applied to `f`, with saturated analytic tail.
#[allow(clippy::too_many_arguments)]
fn derivative_tail(
    f: &SpectralRep,
    indicator: bool,
    p: NormExponent,
    alpha: f64,
    mode: DerivativeMode,
    q: f64,
    n_from: usize,
    k_max: usize,
) -> Result<f64> {
    let process = MeanProcess {
        window: if indicator {
            std::sync::Arc::new(Indicator)
        } else {
            std::sync::Arc::new(VpWindow {
                profile: VpProfile::Smooth,
            })
        },
    };
    let seq = smoothness_sequence(f, &process, p, alpha, mode, 0..=k_max)?;
    // sums in the optimality statements start at k = n
    Ok(weighted_tail_sum(
        &seq,
        TailExponent::Finite(q),
        alpha,
        n_from.saturating_sub(1),
        XiWeight::None,
        TailMode::AnalyticSaturated,
    ))
}

fn modulus_series(
    f: &SpectralRep,
    p: NormExponent,
    alpha: f64,
    levels: &[usize],
    shifts: usize,
) -> Result<Vec<f64>> {
    let spec = ModulusSpec::new(alpha, p)?.with_shifts(shifts)?;
    levels
        .iter()
        .map(|&n| modulus(f, (2.0f64).powi(-(n as i32)), &spec))
        .collect()
}

pub fn sharpness_experiment(cfg: &SharpnessConfig) -> Result<SharpnessOutcome> {
    let levels = require_levels(cfg)?;
    let alpha = cfg.alpha;
    match &cfg.kind {
        SharpnessKind::LacunaryP { p } => {
            let pe = NormExponent::new(*p)?;
            if !pe.is_strict() {
                return Err(LabError::UnsupportedExponent {
                    p: *p,
                    reason: "lacunary-p needs 1 < p < inf",
                });
            }
            let j_top = (levels.last().unwrap() + 6).max(12);
            let f = Lacunary::inverse_power(1.0, j_top)?.spectrum();
            let k_max = j_top + 4;
            let omegas = modulus_series(&f, pe, alpha, &levels, cfg.shifts)?;
            let mut ratio = Vec::new();
            for (&n, &w) in levels.iter().zip(&omegas) {
                let sum2 = derivative_tail(
                    &f,
                    true,
                    pe,
                    alpha,
                    DerivativeMode::Laplacian,
                    2.0,
                    n,
                    k_max,
                )?;
                ratio.push((n as f64, sum2 / w));
            }
            let slope = fit_loglog(&ratio)?;
            Ok(SharpnessOutcome {
                id: format!("lacunary-p(p={p},alpha={alpha})"),
                series: vec![ExperimentSeries {
                    label: "exp2-sum/modulus".into(),
                    points: ratio,
                }],
                verdicts: vec![SharpnessVerdict::within("exp2-ratio-flat", slope, 0.0, 0.1)],
            })
        }
        SharpnessKind::RemarkOpt1 { p, epsilon } => {
            let pe = NormExponent::new(*p)?;
            // the truncation level drives the slope bias (~ n/(J - n) on the
            // modulus decay), so take the deepest band the grids support
            let j_top = (levels.last().unwrap() + 6).max(12);
            let f = Lacunary::inverse_power(1.0, j_top)?.spectrum();
            let k_max = j_top + 4;
            let omegas = modulus_series(&f, pe, alpha, &levels, cfg.shifts)?;
            let omega_pts: Vec<(f64, f64)> = levels
                .iter()
                .zip(&omegas)
                .map(|(&n, &w)| (n as f64, w))
                .collect();
            let q = 2.0 + epsilon;
            let mut sum_pts = Vec::new();
            for &n in &levels {
                let s =
                    derivative_tail(&f, true, pe, alpha, DerivativeMode::Laplacian, q, n, k_max)?;
                sum_pts.push((n as f64, s));
            }
            let slope_w = fit_loglog(&omega_pts)?;
            let slope_s = fit_loglog(&sum_pts)?;
            let expected_s = -(1.0 + epsilon) / (2.0 + epsilon);
            Ok(SharpnessOutcome {
                id: format!("remark-opt1(p={p},eps={epsilon},alpha={alpha})"),
                series: vec![
                    ExperimentSeries {
                        label: "modulus".into(),
                        points: omega_pts,
                    },
                    ExperimentSeries {
                        label: format!("sum-q={q}"),
                        points: sum_pts,
                    },
                ],
                verdicts: vec![
                    SharpnessVerdict::within("modulus-decay", slope_w, -0.5, 0.15 * 0.5),
                    SharpnessVerdict::within(
                        "sum-decay",
                        slope_s,
                        expected_s,
                        0.15 * expected_s.abs(),
                    ),
                ],
            })
        }
        SharpnessKind::LacunaryL1 | SharpnessKind::LacunaryLinf => {
            let at_infinity = matches!(cfg.kind, SharpnessKind::LacunaryLinf);
            let pe = if at_infinity {
                NormExponent::infinity()
            } else {
                NormExponent::new(1.0)?
            };
            let q = if at_infinity { 1.0 } else { 2.0 };
            let j_top = (levels.last().unwrap() + 6).max(12);
            let f = Lacunary::inverse_power(1.0, j_top)?.spectrum();
            let k_max = j_top + 5;
            let omegas = modulus_series(&f, pe, alpha, &levels, cfg.shifts)?;
            let mut ratio = Vec::new();
            for (&n, &w) in levels.iter().zip(&omegas) {
                let s = derivative_tail(&f, false, pe, alpha, DerivativeMode::Signed, q, n, k_max)?;
                ratio.push((n as f64, s / w));
            }
            let slope = fit_loglog(&ratio)?;
            Ok(SharpnessOutcome {
                id: format!("{}(alpha={alpha})", cfg.kind.label()),
                series: vec![ExperimentSeries {
                    label: format!("exp{q}-sum/modulus"),
                    points: ratio,
                }],
                verdicts: vec![SharpnessVerdict::within("ratio-flat", slope, 0.0, 0.1)],
            })
        }
        SharpnessKind::Gm { rule, p, terms } => {
            let pe = NormExponent::new(*p)?;
            if !pe.is_strict() {
                return Err(LabError::UnsupportedExponent {
                    p: *p,
                    reason: "gm needs 1 < p < inf",
                });
            }
            let family = MonotoneSeries {
                rule: *rule,
                terms: *terms,
                sine: false,
            };
            let top = *levels.last().unwrap();
            if (1usize << top) >= *terms {
                return Err(LabError::parameter(
                    "levels",
                    format!("2^{top} reaches past the {terms}-term series"),
                ));
            }
            let f = family.spectrum();
            let k_max = (*terms as f64).log2().ceil() as usize + 4;
            let omegas = modulus_series(&f, pe, alpha, &levels, cfg.shifts)?;
            let coeffs = family.coefficients();
            let mut ratio = Vec::new();
            let mut oracle_ratio = Vec::new();
            for (&n, &w) in levels.iter().zip(&omegas) {
                let s =
                    derivative_tail(&f, true, pe, alpha, DerivativeMode::Laplacian, *p, n, k_max)?;
                ratio.push((n as f64, s / w));
                let oracle = hl_modulus_oracle(&coeffs, *p, alpha, 1usize << n)?;
                oracle_ratio.push((n as f64, oracle / w));
            }
            let slope = fit_loglog(&ratio)?;
            let oracle_slope = fit_loglog(&oracle_ratio)?;
            Ok(SharpnessOutcome {
                id: format!("gm({rule:?},p={p},alpha={alpha})"),
                series: vec![
                    ExperimentSeries {
                        label: "expp-sum/modulus".into(),
                        points: ratio,
                    },
                    ExperimentSeries {
                        label: "hl-oracle/modulus".into(),
                        points: oracle_ratio,
                    },
                ],
                verdicts: vec![
                    SharpnessVerdict::within("expp-ratio-flat", slope, 0.0, 0.1),
                    SharpnessVerdict::within("oracle-ratio-flat", oracle_slope, 0.0, 0.15),
                ],
            })
        }
        SharpnessKind::CounterexampleEndpoint { infinity, gamma, q } => {
            if !(*gamma > 1.0) {
                return Err(LabError::parameter(
                    "gamma",
                    "endpoint counterexamples need gamma > 1 for integrability",
                ));
            }
            if !(*q > 0.0) {
                return Err(LabError::parameter("q", "sum exponent must be positive"));
            }
            let pe = if *infinity {
                NormExponent::infinity()
            } else {
                NormExponent::new(1.0)?
            };
            let terms = 2047usize;
            let family = if *infinity {
                MonotoneSeries {
                    rule: CoeffRule::LogPower { gamma: *gamma },
                    terms,
                    sine: true,
                }
            } else {
                MonotoneSeries {
                    rule: CoeffRule::InvLog { gamma: *gamma },
                    terms,
                    sine: false,
                }
            };
            let f = family.spectrum();
            let k_max = (terms as f64).log2().ceil() as usize + 4;
            let omegas = modulus_series(&f, pe, alpha, &levels, cfg.shifts)?;
            let mut ratio = Vec::new();
            for (&n, &w) in levels.iter().zip(&omegas) {
                // this construction sums strictly past the level, k > n
                let s = derivative_tail(
                    &f,
                    false,
                    pe,
                    alpha,
                    DerivativeMode::Signed,
                    *q,
                    n + 1,
                    k_max,
                )?;
                ratio.push((n as f64, s / w));
            }
            let slope = fit_loglog(&ratio)?;
            let expected = 1.0 / q;
            Ok(SharpnessOutcome {
                id: format!(
                    "counterexample-endpoint(p={},gamma={gamma},q={q},alpha={alpha})",
                    if *infinity { "inf" } else { "1" }
                ),
                series: vec![ExperimentSeries {
                    label: "sum/modulus".into(),
                    points: ratio,
                }],
                verdicts: vec![SharpnessVerdict::within(
                    "divergence-rate",
                    slope,
                    expected,
                    0.2 * expected,
                )],
            })
        }
        SharpnessKind::CounterexampleL1 { gamma, q } => {
            if !(*q > 1.0) {
                return Err(LabError::parameter(
                    "q",
                    "this construction separates q > 1",
                ));
            }
            if !(*gamma > 0.0 && *gamma < 1.0 / q) {
                return Err(LabError::parameter(
                    "gamma",
                    format!("need 0 < gamma < 1/q = {}", 1.0 / q),
                ));
            }
            let pe = NormExponent::new(1.0)?;
            let n0 = 1usize;
            let mut ratio = Vec::new();
            for &j in &levels {
                let terms = (1usize << j) - 1;
                let family = MonotoneSeries {
                    rule: CoeffRule::InvLog { gamma: *gamma },
                    terms,
                    sine: true,
                };
                let f = family.spectrum();
                let spec = ModulusSpec::new(alpha, pe)?.with_shifts(cfg.shifts)?;
                let w = modulus(&f, (2.0f64).powi(-(n0 as i32)), &spec)?;
                let k_max = j + 4;
                let s =
                    derivative_tail(&f, false, pe, alpha, DerivativeMode::Signed, *q, n0, k_max)?;
                // abscissa log N so the fit runs in log log N
                ratio.push(((terms as f64).ln(), w / s));
            }
            let slope = fit_loglog(&ratio)?;
            let expected = 1.0 - 1.0 / q;
            Ok(SharpnessOutcome {
                id: format!("counterexample-L1(gamma={gamma},q={q},alpha={alpha})"),
                series: vec![ExperimentSeries {
                    label: "modulus/sum vs log N".into(),
                    points: ratio,
                }],
                verdicts: vec![SharpnessVerdict::positive(
                    "loglog-divergence",
                    slope,
                    expected,
                )],
            })
        }
    }
}
