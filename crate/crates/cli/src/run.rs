//! Command dispatch: maps each CLI command onto the corresponding library
//! operation and collects typed report rows.

use anyhow::{anyhow, bail};
use smoothness_lab::family::CoeffRule;
use smoothness_lab::grid::Grid;
use smoothness_lab::harness::{
    spline_verify, verify_two_sided, InequalityRow, SplineForm, VerifyOptions,
};
use smoothness_lab::multiplier::apply_mean;
use smoothness_lab::norm::{lp_norm_spectral, NormExponent};
use smoothness_lab::sharpness::{
    sharpness_experiment, SharpnessConfig, SharpnessKind, SharpnessOutcome,
};
use smoothness_lab::smoothness::{besov_seminorm, modulus, realization, BesovSource, ModulusSpec};
use smoothness_lab::solver::SolveError;
use smoothness_lab::spline::UnitSamples;
use smoothness_lab::trig_approx::best_trig;
use smoothness_lab::window::{build_window, WindowParams};

use crate::config::{Command, RunConfig};
use crate::report::{Cell, Report};

pub struct RunOutcome {
    pub report: Report,
    pub flagged_rows: usize,
    pub solver_errors: usize,
}

pub fn run_command(cfg: &mut RunConfig) -> anyhow::Result<RunOutcome> {
    match cfg.command {
        Command::Modulus => run_modulus(cfg),
        Command::Means => run_means(cfg),
        Command::BestApprox => run_best_approx(cfg),
        Command::Realization => run_realization(cfg),
        Command::Besov => run_besov(cfg),
        Command::Verify => run_verify(cfg),
        Command::Sharpness => run_sharpness(cfg),
        Command::SplineVerify => run_spline_verify(cfg),
    }
}

fn check_band(cfg: &RunConfig, max_freq: usize) -> anyhow::Result<()> {
    let grid = Grid::new(cfg.grid).map_err(|e| anyhow!("key `grid`: {e}"))?;
    if max_freq > grid.capacity() {
        bail!(
            "key `grid`: the configured function reaches frequency {max_freq}, \
             beyond the N = {} aliasing limit",
            cfg.grid
        );
    }
    Ok(())
}

fn run_modulus(cfg: &mut RunConfig) -> anyhow::Result<RunOutcome> {
    let family = cfg.torus_function()?;
    check_band(cfg, family.max_freq())?;
    let f = family.spectrum();
    let spec = ModulusSpec {
        alpha: cfg.alpha,
        p: cfg.p,
        shifts: cfg.shifts,
        nu_max: cfg.nu_max,
        eps_binom: cfg.eps_binom,
    };
    let deltas: Vec<(Option<usize>, f64)> = match cfg.single_delta {
        Some(d) => vec![(None, d)],
        None => cfg
            .levels
            .clone()
            .map(|n| (Some(n), (2.0f64).powi(-(n as i32))))
            .collect(),
    };
    let mut report = Report::new(
        vec!["n", "delta", "alpha", "p", "shifts", "value"],
        cfg.echo.clone(),
    );
    for (n, delta) in deltas {
        let value = modulus(&f, delta, &spec)?;
        report.push(vec![
            n.map(|v| Cell::Int(v as i64))
                .unwrap_or(Cell::Text(String::new())),
            Cell::Num(delta),
            Cell::Num(cfg.alpha),
            Cell::Num(cfg.p.value()),
            Cell::Int(cfg.shifts as i64),
            Cell::Num(value),
        ]);
    }
    Ok(RunOutcome {
        report,
        flagged_rows: 0,
        solver_errors: 0,
    })
}

fn run_means(cfg: &mut RunConfig) -> anyhow::Result<RunOutcome> {
    let family = cfg.torus_function()?;
    check_band(cfg, family.max_freq())?;
    let f = family.spectrum();
    let window = build_window(
        cfg.raw.process.window.as_deref().unwrap_or("vp"),
        &WindowParams {
            beta: cfg.raw.process.beta,
            delta: cfg.raw.process.delta,
            profile: cfg.raw.process.profile.clone(),
        },
    )
    .map_err(|e| anyhow!("key `process.window`: {e}"))?;
    cfg.echo.insert("window".into(), window.id());
    let mut report = Report::new(vec!["n", "window", "p", "norm", "error"], cfg.echo.clone());
    for n in cfg.levels.clone() {
        let mean = apply_mean(&f, window.as_ref(), 1 << n)?;
        report.push(vec![
            Cell::Int(n as i64),
            Cell::Text(window.id()),
            Cell::Num(cfg.p.value()),
            Cell::Num(lp_norm_spectral(&mean, cfg.p)),
            Cell::Num(lp_norm_spectral(&f.sub(&mean), cfg.p)),
        ]);
    }
    Ok(RunOutcome {
        report,
        flagged_rows: 0,
        solver_errors: 0,
    })
}

fn run_best_approx(cfg: &mut RunConfig) -> anyhow::Result<RunOutcome> {
    let family = cfg.torus_function()?;
    check_band(cfg, family.max_freq())?;
    if !cfg.p.is_strict() {
        bail!("key `p`: best-approx needs 1 < p < inf");
    }
    let grid = Grid::new(cfg.grid).map_err(|e| anyhow!("key `grid`: {e}"))?;
    let signal = smoothness_lab::family::sample(family.as_ref(), grid)?;
    let f = family.spectrum();
    let mut report = Report::new(
        vec![
            "n",
            "degree",
            "p",
            "error",
            "partial_sum_error",
            "iterations",
            "grad_norm",
            "converged",
        ],
        cfg.echo.clone(),
    );
    let mut solver_errors = 0usize;
    let mut warm = None;
    for n in cfg.levels.clone() {
        let degree = 1usize << n;
        if cfg.grid < 4 * degree {
            bail!(
                "key `grid`: N = {} cannot oversample degree {degree}",
                cfg.grid
            );
        }
        let partial = f.truncated(degree);
        let partial_err = lp_norm_spectral(&f.sub(&partial), cfg.p);
        let (fit, stalled) = match best_trig(&signal, degree, cfg.p, &cfg.settings, warm.as_ref()) {
            Ok(fit) => (fit, false),
            Err(SolveError::Stalled(fit)) => (fit, true),
            Err(SolveError::Lab(e)) => return Err(e.into()),
        };
        if stalled {
            solver_errors += 1;
        }
        report.push(vec![
            Cell::Int(n as i64),
            Cell::Int(degree as i64),
            Cell::Num(cfg.p.value()),
            Cell::Num(fit.error),
            Cell::Num(partial_err),
            Cell::Int(fit.diagnostics.iterations as i64),
            Cell::Num(fit.diagnostics.grad_norm),
            Cell::Text(
                if fit.diagnostics.converged {
                    "true"
                } else {
                    "false"
                }
                .into(),
            ),
        ]);
        warm = Some(fit.rep);
    }
    Ok(RunOutcome {
        report,
        flagged_rows: 0,
        solver_errors,
    })
}

fn run_realization(cfg: &mut RunConfig) -> anyhow::Result<RunOutcome> {
    let family = cfg.torus_function()?;
    check_band(cfg, family.max_freq())?;
    let f = family.spectrum();
    let mut report = Report::new(
        vec![
            "n",
            "alpha",
            "p",
            "approx_error",
            "derivative_term",
            "total",
        ],
        cfg.echo.clone(),
    );
    for n in cfg.levels.clone() {
        let r = realization(
            &f,
            cfg.alpha,
            n,
            cfg.p,
            smoothness_lab::window::VpProfile::Smooth,
        )?;
        report.push(vec![
            Cell::Int(n as i64),
            Cell::Num(cfg.alpha),
            Cell::Num(cfg.p.value()),
            Cell::Num(r.approx_error),
            Cell::Num(r.derivative_term),
            Cell::Num(r.total()),
        ]);
    }
    Ok(RunOutcome {
        report,
        flagged_rows: 0,
        solver_errors: 0,
    })
}

fn run_besov(cfg: &mut RunConfig) -> anyhow::Result<RunOutcome> {
    let family = cfg.torus_function()?;
    check_band(cfg, family.max_freq())?;
    let f = family.spectrum();
    let s = cfg.raw.besov.s.unwrap_or(1.0);
    let q = match &cfg.raw.besov.q {
        Some(e) => e.resolve().map_err(|e| anyhow!("key `besov.q`: {e}"))?,
        None => 2.0,
    };
    let source_name = cfg
        .raw
        .besov
        .source
        .clone()
        .unwrap_or_else(|| "modulus".into());
    let levels = *cfg.levels.end();
    let value = match source_name.as_str() {
        "modulus" => {
            let alpha_ref = cfg.raw.besov.alpha_ref.unwrap_or(cfg.alpha.max(s + 1.0));
            besov_seminorm(&f, s, q, BesovSource::Modulus { alpha_ref }, levels, cfg.p)?
        }
        "best" | "mean" => {
            cfg.raw.process.kind = Some(source_name.clone());
            let process = cfg.process()?;
            besov_seminorm(
                &f,
                s,
                q,
                BesovSource::Derivative {
                    process: process.as_ref(),
                    alpha: cfg.alpha,
                },
                levels,
                cfg.p,
            )?
        }
        other => bail!("key `besov.source`: expected modulus, best, or mean, got `{other}`"),
    };
    let mut report = Report::new(
        vec!["s", "q", "source", "alpha", "p", "levels", "value"],
        cfg.echo.clone(),
    );
    report.push(vec![
        Cell::Num(s),
        Cell::Num(q),
        Cell::Text(source_name),
        Cell::Num(cfg.alpha),
        Cell::Num(cfg.p.value()),
        Cell::Int(levels as i64),
        Cell::Num(value),
    ]);
    Ok(RunOutcome {
        report,
        flagged_rows: 0,
        solver_errors: 0,
    })
}

fn push_inequality_rows(report: &mut Report, rows: &[InequalityRow]) -> (usize, usize) {
    let mut flagged = 0usize;
    let mut solver = 0usize;
    for row in rows {
        if !row.is_clean() {
            flagged += 1;
        }
        if row
            .flags
            .iter()
            .any(|f| matches!(f, smoothness_lab::harness::RowFlag::SolverStalled))
        {
            solver += 1;
        }
        let flags: Vec<&str> = row.flags.iter().map(|f| f.label()).collect();
        report.push(vec![
            Cell::Int(row.n as i64),
            Cell::Num(row.left),
            Cell::Num(row.middle),
            Cell::Num(row.right),
            Cell::Num(row.ratio_left_middle),
            Cell::Num(row.ratio_middle_right),
            Cell::Int(row.k_max as i64),
            Cell::Text(row.tail.label().into()),
            Cell::Text(row.xi.label().into()),
            Cell::Text(flags.join(";")),
        ]);
    }
    (flagged, solver)
}

const INEQUALITY_COLUMNS: [&str; 10] = [
    "n",
    "left",
    "middle",
    "right",
    "ratio_left_middle",
    "ratio_middle_right",
    "k_max",
    "tail",
    "xi",
    "flags",
];

fn run_verify(cfg: &mut RunConfig) -> anyhow::Result<RunOutcome> {
    let family = cfg.torus_function()?;
    check_band(cfg, family.max_freq())?;
    let f = family.spectrum();
    let process = cfg.process()?;
    let opts = VerifyOptions {
        middle: cfg.middle()?,
        derivative_mode: cfg.derivative_mode()?,
        xi: cfg.xi()?,
        shifts: cfg.shifts,
        ..Default::default()
    };
    let rows = verify_two_sided(
        &f,
        cfg.p,
        cfg.alpha,
        cfg.levels.clone(),
        process.as_ref(),
        &opts,
    )?;
    let mut report = Report::new(INEQUALITY_COLUMNS.to_vec(), cfg.echo.clone());
    let (flagged_rows, solver_errors) = push_inequality_rows(&mut report, &rows);
    Ok(RunOutcome {
        report,
        flagged_rows,
        solver_errors,
    })
}

fn sharpness_kind(cfg: &mut RunConfig) -> anyhow::Result<SharpnessKind> {
    let name = cfg
        .raw
        .sharpness
        .kind
        .clone()
        .unwrap_or_else(|| "counterexample-endpoint".into());
    let p_of = |cfg: &RunConfig| -> f64 {
        cfg.raw
            .sharpness
            .p
            .as_ref()
            .and_then(|e| e.resolve().ok())
            .unwrap_or(cfg.p.value())
    };
    let kind = match name.as_str() {
        "lacunary-p" => SharpnessKind::LacunaryP { p: p_of(cfg) },
        "remark-opt1" => SharpnessKind::RemarkOpt1 {
            p: p_of(cfg),
            epsilon: cfg.raw.sharpness.epsilon.unwrap_or(1.0),
        },
        "lacunary-L1" => SharpnessKind::LacunaryL1,
        "lacunary-Linf" => SharpnessKind::LacunaryLinf,
        "gm" => {
            let rule = CoeffRule::parse(
                cfg.raw.sharpness.rule.as_deref().unwrap_or("power"),
                cfg.raw.sharpness.exponent.or(Some(1.5)),
                cfg.raw.sharpness.gamma,
            )
            .map_err(|e| anyhow!("key `sharpness.rule`: {e}"))?;
            SharpnessKind::Gm {
                rule,
                p: p_of(cfg),
                terms: cfg.raw.sharpness.terms.unwrap_or(256),
            }
        }
        "counterexample-endpoint" => {
            let p = cfg
                .raw
                .sharpness
                .p
                .as_ref()
                .map(|e| e.resolve())
                .transpose()?
                .unwrap_or(f64::INFINITY);
            SharpnessKind::CounterexampleEndpoint {
                infinity: p.is_infinite(),
                gamma: cfg.raw.sharpness.gamma.unwrap_or(2.0),
                q: cfg.raw.sharpness.q.unwrap_or(2.0),
            }
        }
        "counterexample-L1" => SharpnessKind::CounterexampleL1 {
            gamma: cfg.raw.sharpness.gamma.unwrap_or(0.4),
            q: cfg.raw.sharpness.q.unwrap_or(2.0),
        },
        other => bail!(
            "key `sharpness.kind`: unknown experiment `{other}` (known: lacunary-p, remark-opt1, \
             lacunary-L1, lacunary-Linf, gm, counterexample-endpoint, counterexample-L1)"
        ),
    };
    Ok(kind)
}

fn run_sharpness(cfg: &mut RunConfig) -> anyhow::Result<RunOutcome> {
    let kind = sharpness_kind(cfg)?;
    let experiment = SharpnessConfig {
        kind,
        alpha: cfg.alpha,
        levels: cfg.levels.clone(),
        shifts: cfg.shifts,
    };
    let outcome: SharpnessOutcome = sharpness_experiment(&experiment)?;
    cfg.echo.insert("sharpness.id".into(), outcome.id.clone());
    let mut report = Report::new(
        vec![
            "record",
            "series",
            "x",
            "y",
            "verdict",
            "fitted_slope",
            "expected_slope",
            "tolerance",
            "pass",
        ],
        cfg.echo.clone(),
    );
    let blank = || Cell::Text(String::new());
    for series in &outcome.series {
        for &(x, y) in &series.points {
            report.push(vec![
                Cell::Text("series".into()),
                Cell::Text(series.label.clone()),
                Cell::Num(x),
                Cell::Num(y),
                blank(),
                blank(),
                blank(),
                blank(),
                blank(),
            ]);
        }
    }
    for v in &outcome.verdicts {
        report.push(vec![
            Cell::Text("verdict".into()),
            blank(),
            blank(),
            blank(),
            Cell::Text(v.id.clone()),
            Cell::Num(v.fitted_slope),
            Cell::Num(v.expected_slope),
            Cell::Num(v.tolerance),
            Cell::Text(if v.pass { "true" } else { "false" }.into()),
        ]);
    }
    Ok(RunOutcome {
        report,
        flagged_rows: 0,
        solver_errors: 0,
    })
}

fn unit_function(cfg: &mut RunConfig) -> anyhow::Result<Box<dyn Fn(f64) -> f64>> {
    let name = cfg
        .raw
        .function
        .family
        .clone()
        .unwrap_or_else(|| "kink".into());
    let id;
    let f: Box<dyn Fn(f64) -> f64> = match name.as_str() {
        "kink" => {
            let c = cfg.raw.function.center.unwrap_or(1.0 / 3.0);
            id = format!("kink(center={c})");
            Box::new(move |x: f64| (x - c).abs())
        }
        "power" => {
            let s = cfg.raw.function.exponent.unwrap_or(2.0);
            id = format!("power(exponent={s})");
            Box::new(move |x: f64| x.powf(s))
        }
        "sine" => {
            let k = cfg.raw.function.k.unwrap_or(1) as f64;
            id = format!("sine(k={k})");
            Box::new(move |x: f64| (std::f64::consts::PI * k * x).sin())
        }
        other => bail!(
            "key `function.family`: unknown unit-interval family `{other}` (known: kink, power, sine)"
        ),
    };
    cfg.echo.insert("function".into(), id);
    Ok(f)
}

fn run_spline_verify(cfg: &mut RunConfig) -> anyhow::Result<RunOutcome> {
    let order = cfg.raw.spline.order.unwrap_or(2);
    let m = cfg.raw.spline.samples.unwrap_or(512);
    let form = match cfg.raw.spline.form.as_deref().unwrap_or("tau-theta") {
        "tau-theta" => SplineForm::TauTheta,
        "lambda" => SplineForm::Lambda,
        other => bail!("key `spline.form`: expected tau-theta or lambda, got `{other}`"),
    };
    let p = match cfg.p {
        NormExponent::Finite(v) => v,
        NormExponent::Infinity => bail!("key `p`: spline-verify needs finite p"),
    };
    let f = unit_function(cfg)?;
    cfg.echo.insert("spline.order".into(), order.to_string());
    cfg.echo.insert("spline.samples".into(), m.to_string());
    let samples = UnitSamples::from_fn(m, &f)?;
    let rows = spline_verify(
        &samples,
        order,
        p,
        cfg.levels.clone(),
        form,
        &cfg.settings,
        cfg.shifts,
    )?;
    let mut report = Report::new(INEQUALITY_COLUMNS.to_vec(), cfg.echo.clone());
    let (flagged_rows, solver_errors) = push_inequality_rows(&mut report, &rows);
    Ok(RunOutcome {
        report,
        flagged_rows,
        solver_errors,
    })
}
