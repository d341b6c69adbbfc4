//! Run configuration: flat TOML with nested sections for the function,
//! process, solver, and command-specific knobs. Every default that a run
//! uses is echoed back into the report header.

use std::collections::BTreeMap;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context};
use serde::Deserialize;
use smoothness_lab::family::{build_family, FamilyParams, TestFunction};
use smoothness_lab::harness::{MiddleKind, XiWeight};
use smoothness_lab::norm::NormExponent;
use smoothness_lab::process::{build_process, ApproxProcess, ProcessParams};
use smoothness_lab::solver::{ConvexSolveSettings, InitStrategy};
use smoothness_lab::spectral::DerivativeMode;
use smoothness_lab::window::build_window;
use smoothness_lab::window::WindowParams;

/// `p` or `q` values that may be the string "inf".
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Exponent {
    Number(f64),
    Name(String),
}

impl Exponent {
    pub fn resolve(&self) -> anyhow::Result<f64> {
        match self {
            Exponent::Number(v) => Ok(*v),
            Exponent::Name(s) if s == "inf" || s == "infinity" => Ok(f64::INFINITY),
            Exponent::Name(s) => bail!("expected a number or \"inf\", got `{s}`"),
        }
    }
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct FunctionSection {
    pub family: Option<String>,
    pub k: Option<usize>,
    pub cos: Option<Vec<(usize, f64)>>,
    pub sin: Option<Vec<(usize, f64)>>,
    pub coeffs: Option<Vec<f64>>,
    pub rule: Option<String>,
    pub exponent: Option<f64>,
    pub gamma: Option<f64>,
    pub terms: Option<usize>,
    pub alpha: Option<f64>,
    /// Center of the kink for the unit-interval `kink` family.
    pub center: Option<f64>,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct ProcessSection {
    pub kind: Option<String>,
    pub window: Option<String>,
    pub profile: Option<String>,
    pub beta: Option<f64>,
    pub delta: Option<f64>,
    pub p: Option<Exponent>,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct LevelsSection {
    pub start: Option<usize>,
    pub end: Option<usize>,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct ModulusSection {
    pub shifts: Option<usize>,
    pub nu_max: Option<usize>,
    pub eps_binom: Option<f64>,
    pub delta: Option<f64>,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct BesovSection {
    pub s: Option<f64>,
    pub q: Option<Exponent>,
    pub source: Option<String>,
    pub alpha_ref: Option<f64>,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct VerifySection {
    pub middle: Option<String>,
    pub xi: Option<String>,
    pub mode: Option<String>,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct SharpnessSection {
    pub kind: Option<String>,
    pub gamma: Option<f64>,
    pub q: Option<f64>,
    pub epsilon: Option<f64>,
    pub p: Option<Exponent>,
    pub rule: Option<String>,
    pub exponent: Option<f64>,
    pub terms: Option<usize>,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct SplineSection {
    pub order: Option<usize>,
    pub samples: Option<usize>,
    pub form: Option<String>,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    pub grad_tol: Option<f64>,
    pub obj_tol: Option<f64>,
    pub max_iter: Option<usize>,
    pub init: Option<String>,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub path: Option<PathBuf>,
    pub format: Option<String>,
}

/// Raw deserialized configuration before validation.
#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub command: Option<String>,
    pub grid: Option<usize>,
    pub seed: Option<u64>,
    pub alpha: Option<f64>,
    pub p: Option<Exponent>,
    #[serde(default)]
    pub function: FunctionSection,
    #[serde(default)]
    pub process: ProcessSection,
    #[serde(default)]
    pub levels: LevelsSection,
    #[serde(default)]
    pub modulus: ModulusSection,
    #[serde(default)]
    pub besov: BesovSection,
    #[serde(default)]
    pub verify: VerifySection,
    #[serde(default)]
    pub sharpness: SharpnessSection,
    #[serde(default)]
    pub spline: SplineSection,
    #[serde(default)]
    pub solver: SolverSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Modulus,
    Means,
    BestApprox,
    Realization,
    Besov,
    Verify,
    Sharpness,
    SplineVerify,
}

impl Command {
    pub fn parse(name: &str) -> anyhow::Result<Self> {
        Ok(match name {
            "modulus" => Command::Modulus,
            "means" => Command::Means,
            "best-approx" => Command::BestApprox,
            "realization" => Command::Realization,
            "besov" => Command::Besov,
            "verify" => Command::Verify,
            "sharpness" => Command::Sharpness,
            "spline-verify" => Command::SplineVerify,
            other => bail!(
                "key `command`: unknown command `{other}` (known: modulus, means, best-approx, \
                 realization, besov, verify, sharpness, spline-verify)"
            ),
        })
    }

    pub fn label(&self) -> &'static str {
        match self {
            Command::Modulus => "modulus",
            Command::Means => "means",
            Command::BestApprox => "best-approx",
            Command::Realization => "realization",
            Command::Besov => "besov",
            Command::Verify => "verify",
            Command::Sharpness => "sharpness",
            Command::SplineVerify => "spline-verify",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Validated configuration with all defaults filled; `echo` carries every
/// effective key/value pair for the report header.
pub struct RunConfig {
    pub command: Command,
    pub grid: usize,
    pub seed: u64,
    pub alpha: f64,
    pub p: NormExponent,
    pub levels: std::ops::RangeInclusive<usize>,
    pub shifts: usize,
    pub nu_max: usize,
    pub eps_binom: f64,
    pub single_delta: Option<f64>,
    pub raw: RawConfig,
    pub settings: ConvexSolveSettings,
    pub out_path: Option<PathBuf>,
    pub format: OutputFormat,
    pub echo: BTreeMap<String, String>,
}

fn echo_num(echo: &mut BTreeMap<String, String>, key: &str, value: f64) {
    let text = if value.is_infinite() {
        "inf".to_string()
    } else if value == value.trunc() && value.abs() < 1e15 {
        format!("{}", value as i64)
    } else {
        format!("{value}")
    };
    echo.insert(key.to_string(), text);
}

impl RunConfig {
    pub fn from_raw(raw: RawConfig) -> anyhow::Result<Self> {
        let command = Command::parse(
            raw.command
                .as_deref()
                .ok_or_else(|| anyhow!("key `command`: required"))?,
        )?;
        let mut echo = BTreeMap::new();
        echo.insert("command".into(), command.label().to_string());

        let grid = raw.grid.unwrap_or(256);
        if grid < 8 || !grid.is_power_of_two() {
            bail!("key `grid`: {grid} is not a power of two >= 8");
        }
        let seed = raw.seed.unwrap_or(0);
        let alpha = raw.alpha.unwrap_or(1.0);
        // NaN-rejecting comparison
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(alpha > 0.0) {
            bail!("key `alpha`: order must be positive");
        }
        let p_val = raw
            .p
            .as_ref()
            .map(|e| e.resolve())
            .transpose()
            .map_err(|e| anyhow!("key `p`: {e}"))?
            .unwrap_or(2.0);
        let p = NormExponent::new(p_val).map_err(|e| anyhow!("key `p`: {e}"))?;

        let start = raw.levels.start.unwrap_or(1);
        let end = raw.levels.end.unwrap_or(6);
        if end < start {
            bail!("key `levels.end`: range {start}..{end} is empty");
        }
        if end > 32 {
            bail!("key `levels.end`: dyadic level {end} is far past any supported grid");
        }
        // grid capacity invariant: N >= 4 * 2^k_max for sampled torus input
        if command != Command::SplineVerify && command != Command::Sharpness {
            let need = 4usize.saturating_mul(1usize << end);
            if grid < need {
                bail!("key `grid`: N = {grid} cannot carry dyadic level {end} (need N >= {need})");
            }
        }

        let shifts = raw.modulus.shifts.unwrap_or(64);
        if shifts < 16 {
            bail!("key `modulus.shifts`: h-grid resolution must be at least 16");
        }
        let nu_max = raw.modulus.nu_max.unwrap_or(200);
        let eps_binom = raw.modulus.eps_binom.unwrap_or(1e-8);

        let base = ConvexSolveSettings::default();
        let settings = ConvexSolveSettings {
            grad_tol: raw.solver.grad_tol.unwrap_or(base.grad_tol),
            obj_tol: raw.solver.obj_tol.unwrap_or(base.obj_tol),
            max_iter: raw.solver.max_iter.unwrap_or(base.max_iter),
            init: match raw.solver.init.as_deref().unwrap_or("partial-sum") {
                "partial-sum" => InitStrategy::PartialSum,
                "zero" => InitStrategy::Zero,
                other => bail!("key `solver.init`: unknown strategy `{other}`"),
            },
        };
        settings
            .validate()
            .map_err(|e| anyhow!("key `solver`: {e}"))?;

        let format = match raw.output.format.as_deref().unwrap_or("csv") {
            "csv" => OutputFormat::Csv,
            "json" => OutputFormat::Json,
            other => bail!("key `output.format`: expected csv or json, got `{other}`"),
        };

        echo_num(&mut echo, "grid", grid as f64);
        echo.insert("seed".into(), seed.to_string());
        echo_num(&mut echo, "alpha", alpha);
        echo_num(&mut echo, "p", p.value());
        echo_num(&mut echo, "levels.start", start as f64);
        echo_num(&mut echo, "levels.end", end as f64);
        echo_num(&mut echo, "modulus.shifts", shifts as f64);
        echo_num(&mut echo, "modulus.nu_max", nu_max as f64);
        echo_num(&mut echo, "modulus.eps_binom", eps_binom);
        echo_num(&mut echo, "solver.grad_tol", settings.grad_tol);
        echo_num(&mut echo, "solver.obj_tol", settings.obj_tol);
        echo_num(&mut echo, "solver.max_iter", settings.max_iter as f64);
        echo.insert(
            "solver.init".into(),
            match settings.init {
                InitStrategy::PartialSum => "partial-sum".into(),
                InitStrategy::Zero => "zero".into(),
            },
        );
        echo.insert(
            "output.format".into(),
            if format == OutputFormat::Csv {
                "csv".into()
            } else {
                "json".into()
            },
        );

        Ok(RunConfig {
            command,
            grid,
            seed,
            alpha,
            p,
            levels: start..=end,
            shifts,
            nu_max,
            eps_binom,
            single_delta: raw.modulus.delta,
            settings,
            out_path: raw.output.path.clone(),
            format,
            raw,
            echo,
        })
    }

    /// Build the torus test function named in `[function]`, defaulting to
    /// `harmonic(k=3)`, and record the resolved choice in the echo map.
    pub fn torus_function(&mut self) -> anyhow::Result<Box<dyn TestFunction>> {
        let name = self
            .raw
            .function
            .family
            .clone()
            .unwrap_or_else(|| "harmonic".into());
        let params = FamilyParams {
            k: self.raw.function.k.or(Some(3)),
            cos: self.raw.function.cos.clone().unwrap_or_default(),
            sin: self.raw.function.sin.clone().unwrap_or_default(),
            coeffs: self.raw.function.coeffs.clone().unwrap_or_default(),
            rule: self.raw.function.rule.clone(),
            exponent: self.raw.function.exponent,
            gamma: self.raw.function.gamma,
            terms: self.raw.function.terms,
            alpha: self.raw.function.alpha,
            seed: Some(self.seed),
        };
        let family =
            build_family(&name, &params).map_err(|e| anyhow!("key `function.family`: {e}"))?;
        self.echo.insert("function".into(), family.id());
        Ok(family)
    }

    /// Build the `[process]` section, defaulting to `mean(vp(smooth))`.
    pub fn process(&mut self) -> anyhow::Result<std::sync::Arc<dyn ApproxProcess>> {
        let kind = self
            .raw
            .process
            .kind
            .clone()
            .unwrap_or_else(|| "mean".into());
        let p_override = match &self.raw.process.p {
            Some(e) => Some(e.resolve().context("key `process.p`")?),
            None => match self.p {
                NormExponent::Finite(v) => Some(v),
                NormExponent::Infinity => None,
            },
        };
        let params = ProcessParams {
            p: p_override,
            window: Some(
                self.raw
                    .process
                    .window
                    .clone()
                    .unwrap_or_else(|| "vp".into()),
            ),
            window_params: WindowParams {
                beta: self.raw.process.beta,
                delta: self.raw.process.delta,
                profile: self.raw.process.profile.clone(),
            },
            settings: Some(self.settings.clone()),
        };
        let process = build_process(&kind, &params).map_err(|e| anyhow!("key `process`: {e}"))?;
        self.echo.insert("process".into(), process.id());
        if kind == "mean" {
            let window = build_window(
                params.window.as_deref().unwrap_or("vp"),
                &params.window_params,
            )
            .map_err(|e| anyhow!("key `process.window`: {e}"))?;
            self.echo.insert(
                "window.inverse_scale".into(),
                window.inverse_scale().to_string(),
            );
            if params.window.as_deref() == Some("riesz") {
                if let (Some(beta), Some(delta)) = (self.raw.process.beta, self.raw.process.delta) {
                    // vacuous for the supported p range, surfaced anyway
                    let margin = smoothness_lab::window::Riesz::new(beta, delta)
                        .map_err(|e| anyhow!("key `process`: {e}"))?
                        .boundedness_margin(p_override.unwrap_or(f64::INFINITY));
                    self.echo
                        .insert("window.riesz_margin".into(), format!("{margin}"));
                }
            }
        }
        Ok(process)
    }

    pub fn middle(&mut self) -> anyhow::Result<MiddleKind> {
        let kind = match self.raw.verify.middle.as_deref().unwrap_or("modulus") {
            "modulus" => MiddleKind::Modulus,
            "realization" => MiddleKind::Realization,
            other => bail!("key `verify.middle`: expected modulus or realization, got `{other}`"),
        };
        self.echo
            .insert("verify.middle".into(), kind.label().to_string());
        Ok(kind)
    }

    pub fn xi(&mut self) -> anyhow::Result<XiWeight> {
        let xi = match self.raw.verify.xi.as_deref().unwrap_or("none") {
            "none" => XiWeight::None,
            "log" => XiWeight::Log,
            other => bail!("key `verify.xi`: expected none or log, got `{other}`"),
        };
        self.echo.insert("verify.xi".into(), xi.label().to_string());
        Ok(xi)
    }

    pub fn derivative_mode(&mut self) -> anyhow::Result<DerivativeMode> {
        let mode = match self.raw.verify.mode.as_deref().unwrap_or("laplacian") {
            "laplacian" => DerivativeMode::Laplacian,
            "signed" => DerivativeMode::Signed,
            other => bail!("key `verify.mode`: expected laplacian or signed, got `{other}`"),
        };
        self.echo.insert(
            "verify.mode".into(),
            if mode == DerivativeMode::Laplacian {
                "laplacian"
            } else {
                "signed"
            }
            .to_string(),
        );
        Ok(mode)
    }
}
