//! Approximation processes `P_n` behind a common trait: best `L_p`
//! approximants, Fourier multiplier means, and the interpolation operator.
//! Selected by name at runtime.

use std::sync::Arc;

use crate::error::{LabError, Result};
use crate::grid::Grid;
use crate::multiplier::{apply_mean, vp_interpolant, vp_nodes};
use crate::norm::NormExponent;
use crate::solver::{ConvexSolveSettings, SolveDiagnostics, SolveError};
use crate::spectral::SpectralRep;
use crate::trig_approx::best_trig;
use crate::window::{build_window, Window, WindowParams};

/// One level of an approximation process.
pub struct ProcessOutput {
    pub rep: SpectralRep,
    pub diagnostics: Option<SolveDiagnostics>,
    /// Set when a solve exhausted its budget; the best iterate is returned.
    pub stalled: bool,
}

impl ProcessOutput {
    fn exact(rep: SpectralRep) -> Self {
        ProcessOutput {
            rep,
            diagnostics: None,
            stalled: false,
        }
    }
}

/// A family `P_n : L_p -> T_n` evaluated at integer levels.
pub trait ApproxProcess: Send + Sync {
    /// Name with parameters, echoed into reports.
    fn id(&self) -> String;

    /// `P_n(f)`. `warm` optionally carries the previous dyadic level's
    /// output for solver warm starts.
    fn apply(&self, f: &SpectralRep, n: usize, warm: Option<&SpectralRep>)
        -> Result<ProcessOutput>;

    /// Smallest `n` at which `P_n` reproduces every polynomial of degree
    /// `max_freq` exactly, if the process is reproducing at all.
    fn reproducing_level(&self, max_freq: usize) -> Option<usize>;
}

/// Fourier multiplier means `Psi_n`.
pub struct MeanProcess {
    pub window: Arc<dyn Window>,
}

impl ApproxProcess for MeanProcess {
    fn id(&self) -> String {
        format!("mean({})", self.window.id())
    }

    fn apply(
        &self,
        f: &SpectralRep,
        n: usize,
        _warm: Option<&SpectralRep>,
    ) -> Result<ProcessOutput> {
        Ok(ProcessOutput::exact(apply_mean(
            f,
            self.window.as_ref(),
            n,
        )?))
    }

    fn reproducing_level(&self, max_freq: usize) -> Option<usize> {
        let plateau = self.window.plateau();
        if plateau <= 0.0 {
            return None;
        }
        Some(((max_freq as f64) / plateau).ceil() as usize)
    }
}

/// Best approximation by trigonometric polynomials in `L_p`, `1 < p < inf`.
pub struct BestTrigProcess {
    pub p: NormExponent,
    pub settings: ConvexSolveSettings,
}

impl ApproxProcess for BestTrigProcess {
    fn id(&self) -> String {
        format!("best(p={})", self.p.value())
    }

    fn apply(
        &self,
        f: &SpectralRep,
        n: usize,
        warm: Option<&SpectralRep>,
    ) -> Result<ProcessOutput> {
        // Band-limited saturation: once T_n contains f, the minimizer is f.
        if n >= f.max_freq() {
            return Ok(ProcessOutput::exact(f.clone()));
        }
        let grid = Grid::for_max_freq(f.max_freq().max(n));
        let signal = f.synthesize(grid)?;
        match best_trig(&signal, n, self.p, &self.settings, warm) {
            Ok(fit) => Ok(ProcessOutput {
                rep: fit.rep,
                diagnostics: Some(fit.diagnostics),
                stalled: false,
            }),
            Err(SolveError::Stalled(fit)) => Ok(ProcessOutput {
                rep: fit.rep,
                diagnostics: Some(fit.diagnostics),
                stalled: true,
            }),
            Err(SolveError::Lab(e)) => Err(e),
        }
    }

    fn reproducing_level(&self, max_freq: usize) -> Option<usize> {
        Some(max_freq)
    }
}

/// Interpolation analogue `V_n` of the de la Vallee Poussin means.
pub struct VpInterpProcess;

impl ApproxProcess for VpInterpProcess {
    fn id(&self) -> String {
        "interp-vp".into()
    }

    fn apply(
        &self,
        f: &SpectralRep,
        n: usize,
        _warm: Option<&SpectralRep>,
    ) -> Result<ProcessOutput> {
        if n == 0 {
            return Err(LabError::parameter(
                "n",
                "interpolation level must be at least 1",
            ));
        }
        let samples: Vec<f64> = vp_nodes(n).iter().map(|&x| f.eval_at_real(x)).collect();
        Ok(ProcessOutput::exact(vp_interpolant(&samples, n)?))
    }

    fn reproducing_level(&self, max_freq: usize) -> Option<usize> {
        // V_n reproduces T_{2n}
        Some(max_freq.div_ceil(2).max(1))
    }
}

/// Flat parameter bag for building processes from configuration.
#[derive(Debug, Clone, Default)]
pub struct ProcessParams {
    pub p: Option<f64>,
    pub window: Option<String>,
    pub window_params: WindowParams,
    pub settings: Option<ConvexSolveSettings>,
}

pub const PROCESS_NAMES: &[&str] = &["best", "mean", "interp-vp"];

/// Build a registered process by kind name.
pub fn build_process(kind: &str, params: &ProcessParams) -> Result<Arc<dyn ApproxProcess>> {
    match kind {
        "best" => {
            let p = NormExponent::new(params.p.ok_or_else(|| {
                LabError::parameter("p", "best-approximation process needs a norm exponent `p`")
            })?)?;
            if !p.is_strict() {
                return Err(LabError::UnsupportedExponent {
                    p: p.value(),
                    reason: "best process needs 1 < p < inf; use mean(vp) as near-best",
                });
            }
            Ok(Arc::new(BestTrigProcess {
                p,
                settings: params.settings.clone().unwrap_or_default(),
            }))
        }
        "mean" => {
            let name = params.window.as_deref().ok_or_else(|| {
                LabError::parameter("window", "mean process needs a `window` name")
            })?;
            Ok(Arc::new(MeanProcess {
                window: build_window(name, &params.window_params)?,
            }))
        }
        "interp-vp" => Ok(Arc::new(VpInterpProcess)),
        other => Err(LabError::Unknown {
            kind: "process",
            name: other.to_string(),
            known: PROCESS_NAMES.join(", "),
        }),
    }
}
