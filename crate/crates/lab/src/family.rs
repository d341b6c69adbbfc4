//! Test-function families: each family evaluates pointwise and knows its
//! exact Fourier coefficient table. Families are registered by name and
//! built from flat configuration parameters.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{LabError, Result};
use crate::grid::Grid;
use crate::signal::PeriodicSignal;
use crate::spectral::SpectralRep;

/// A coefficient-defined test function on the torus.
pub trait TestFunction: Send + Sync {
    fn id(&self) -> String;
    /// Exact Fourier coefficients.
    fn spectrum(&self) -> SpectralRep;
    /// Pointwise evaluation (exact partial-sum formula, no grid involved).
    fn eval(&self, x: f64) -> f64;
    fn max_freq(&self) -> usize {
        self.spectrum().max_freq()
    }
}

fn eval_series(cos: &[(usize, f64)], sin: &[(usize, f64)], x: f64) -> f64 {
    let c: f64 = cos.iter().map(|&(k, a)| a * (k as f64 * x).cos()).sum();
    let s: f64 = sin.iter().map(|&(k, b)| b * (k as f64 * x).sin()).sum();
    c + s
}

/// `cos(kx)`.
pub struct Harmonic {
    pub k: usize,
}

impl TestFunction for Harmonic {
    fn id(&self) -> String {
        format!("harmonic(k={})", self.k)
    }
    fn spectrum(&self) -> SpectralRep {
        SpectralRep::cosine(self.k, 1.0)
    }
    fn eval(&self, x: f64) -> f64 {
        (self.k as f64 * x).cos()
    }
}

/// Explicit list of cosine/sine terms.
pub struct TrigPoly {
    pub cos: Vec<(usize, f64)>,
    pub sin: Vec<(usize, f64)>,
}

impl TestFunction for TrigPoly {
    fn id(&self) -> String {
        format!("trig-poly(cos={:?},sin={:?})", self.cos, self.sin)
    }
    fn spectrum(&self) -> SpectralRep {
        SpectralRep::from_cos_sin(&self.cos, &self.sin)
    }
    fn eval(&self, x: f64) -> f64 {
        eval_series(&self.cos, &self.sin, x)
    }
}

/// `sum_j a_j cos(2^j x)`, `j = 1..=J`.
pub struct Lacunary {
    /// `a[j-1]` is the coefficient of `cos(2^j x)`.
    pub coeffs: Vec<f64>,
    id: String,
}

impl Lacunary {
    pub fn from_coeffs(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(LabError::parameter(
                "coeffs",
                "lacunary series needs at least one term",
            ));
        }
        let id = format!("lacunary(J={})", coeffs.len());
        Ok(Lacunary { coeffs, id })
    }

    /// `a_{2^j} = j^{-s}`.
    pub fn inverse_power(s: f64, levels: usize) -> Result<Self> {
        let coeffs = (1..=levels).map(|j| (j as f64).powf(-s)).collect();
        let mut fam = Self::from_coeffs(coeffs)?;
        fam.id = format!("lacunary(a_2^j=j^-{s},J={levels})");
        Ok(fam)
    }

    fn terms(&self) -> Vec<(usize, f64)> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, &a)| (1usize << (i + 1), a))
            .collect()
    }
}

impl TestFunction for Lacunary {
    fn id(&self) -> String {
        self.id.clone()
    }
    fn spectrum(&self) -> SpectralRep {
        SpectralRep::from_cos_sin(&self.terms(), &[])
    }
    fn eval(&self, x: f64) -> f64 {
        eval_series(&self.terms(), &[], x)
    }
}

/// Coefficient laws for the monotone families.
#[derive(Debug, Clone, Copy)]
pub enum CoeffRule {
    /// `a_m = m^{-s}`
    Power { s: f64 },
    /// `a_m = 1 / (m log^gamma(m + 1))`
    LogPower { gamma: f64 },
    /// `a_m = 1 / log^gamma(m + 1)`
    InvLog { gamma: f64 },
}

impl CoeffRule {
    pub fn coeff(&self, m: usize) -> f64 {
        let mf = m as f64;
        match self {
            CoeffRule::Power { s } => mf.powf(-s),
            CoeffRule::LogPower { gamma } => 1.0 / (mf * (mf + 1.0).ln().powf(*gamma)),
            CoeffRule::InvLog { gamma } => 1.0 / (mf + 1.0).ln().powf(*gamma),
        }
    }

    pub fn coeffs(&self, terms: usize) -> Vec<f64> {
        (1..=terms).map(|m| self.coeff(m)).collect()
    }

    pub fn parse(rule: &str, s: Option<f64>, gamma: Option<f64>) -> Result<Self> {
        match rule {
            "power" => Ok(CoeffRule::Power {
                s: s.ok_or_else(|| LabError::parameter("exponent", "power rule needs `exponent`"))?,
            }),
            "log-power" => Ok(CoeffRule::LogPower {
                gamma: gamma
                    .ok_or_else(|| LabError::parameter("gamma", "log-power rule needs `gamma`"))?,
            }),
            "inv-log" => Ok(CoeffRule::InvLog {
                gamma: gamma
                    .ok_or_else(|| LabError::parameter("gamma", "inv-log rule needs `gamma`"))?,
            }),
            other => Err(LabError::Unknown {
                kind: "coefficient rule",
                name: other.to_string(),
                known: "power, log-power, inv-log".into(),
            }),
        }
    }
}

/// Partial sum `sum_{m=1..M} a_m cos(mx)` (or sine) with monotone `a_m`.
pub struct MonotoneSeries {
    pub rule: CoeffRule,
    pub terms: usize,
    pub sine: bool,
}

impl MonotoneSeries {
    fn series(&self) -> Vec<(usize, f64)> {
        (1..=self.terms).map(|m| (m, self.rule.coeff(m))).collect()
    }

    pub fn coefficients(&self) -> Vec<f64> {
        self.rule.coeffs(self.terms)
    }
}

impl TestFunction for MonotoneSeries {
    fn id(&self) -> String {
        format!(
            "monotone-{}({:?},M={})",
            if self.sine { "sin" } else { "cos" },
            self.rule,
            self.terms
        )
    }
    fn spectrum(&self) -> SpectralRep {
        if self.sine {
            SpectralRep::from_cos_sin(&[], &self.series())
        } else {
            SpectralRep::from_cos_sin(&self.series(), &[])
        }
    }
    fn eval(&self, x: f64) -> f64 {
        if self.sine {
            eval_series(&[], &self.series(), x)
        } else {
            eval_series(&self.series(), &[], x)
        }
    }
}

/// Truncated Weierstrass-type series `sum_{j=0..J} 2^{-j alpha} cos(2^j x)`.
pub struct Weierstrass {
    pub alpha: f64,
    pub levels: usize,
}

impl Weierstrass {
    fn terms(&self) -> Vec<(usize, f64)> {
        (0..=self.levels)
            .map(|j| (1usize << j, (2.0f64).powf(-(j as f64) * self.alpha)))
            .collect()
    }
}

impl TestFunction for Weierstrass {
    fn id(&self) -> String {
        format!("weierstrass(alpha={},J={})", self.alpha, self.levels)
    }
    fn spectrum(&self) -> SpectralRep {
        SpectralRep::from_cos_sin(&self.terms(), &[])
    }
    fn eval(&self, x: f64) -> f64 {
        eval_series(&self.terms(), &[], x)
    }
}

/// Random real trigonometric polynomial with `|c_k| ~ k^{-decay}`, seeded.
pub struct RandomDecay {
    pub decay: f64,
    pub max_freq: usize,
    pub seed: u64,
}

impl RandomDecay {
    fn build(&self) -> SpectralRep {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut rep = SpectralRep::zero(self.max_freq);
        for k in 1..=self.max_freq {
            let magnitude = (k as f64).powf(-self.decay);
            let phase = rng.gen_range(0.0..std::f64::consts::TAU);
            let c = num_complex::Complex64::new(phase.cos(), phase.sin()) * magnitude * 0.5;
            rep.set(k as i64, c);
            rep.set(-(k as i64), c.conj());
        }
        rep
    }
}

impl TestFunction for RandomDecay {
    fn id(&self) -> String {
        format!(
            "random-decay(s={},K={},seed={})",
            self.decay, self.max_freq, self.seed
        )
    }
    fn spectrum(&self) -> SpectralRep {
        self.build()
    }
    fn eval(&self, x: f64) -> f64 {
        self.build().eval_at_real(x)
    }
}

/// Exact pointwise sampling of a family on a grid. Coefficient-defined
/// families must fit under the aliasing limit `N/2 - 1`.
pub fn sample(family: &dyn TestFunction, grid: Grid) -> Result<PeriodicSignal> {
    if family.max_freq() > grid.capacity() {
        return Err(LabError::Aliasing {
            grid: grid.len(),
            freq: family.max_freq(),
        });
    }
    Ok(PeriodicSignal::from_fn(grid, |x| family.eval(x)))
}

/// Flat parameter bag for building families from configuration.
#[derive(Debug, Clone, Default)]
pub struct FamilyParams {
    pub k: Option<usize>,
    pub cos: Vec<(usize, f64)>,
    pub sin: Vec<(usize, f64)>,
    pub coeffs: Vec<f64>,
    pub rule: Option<String>,
    pub exponent: Option<f64>,
    pub gamma: Option<f64>,
    pub terms: Option<usize>,
    pub alpha: Option<f64>,
    pub seed: Option<u64>,
}

pub const FAMILY_NAMES: &[&str] = &[
    "harmonic",
    "trig-poly",
    "lacunary",
    "monotone-cos",
    "monotone-sin",
    "weierstrass",
    "random-decay",
];

/// Build a registered family by name.
pub fn build_family(name: &str, params: &FamilyParams) -> Result<Box<dyn TestFunction>> {
    match name {
        "harmonic" => {
            let k = params
                .k
                .ok_or_else(|| LabError::parameter("k", "harmonic needs a frequency `k`"))?;
            Ok(Box::new(Harmonic { k }))
        }
        "trig-poly" => {
            if params.cos.is_empty() && params.sin.is_empty() {
                return Err(LabError::parameter(
                    "cos",
                    "trig-poly needs `cos` or `sin` terms",
                ));
            }
            Ok(Box::new(TrigPoly {
                cos: params.cos.clone(),
                sin: params.sin.clone(),
            }))
        }
        "lacunary" => {
            if !params.coeffs.is_empty() {
                Ok(Box::new(Lacunary::from_coeffs(params.coeffs.clone())?))
            } else {
                let s = params.exponent.unwrap_or(1.0);
                let levels = params.terms.ok_or_else(|| {
                    LabError::parameter("terms", "lacunary needs `terms` (the level count J)")
                })?;
                Ok(Box::new(Lacunary::inverse_power(s, levels)?))
            }
        }
        "monotone-cos" | "monotone-sin" => {
            let rule = CoeffRule::parse(
                params.rule.as_deref().unwrap_or("power"),
                params.exponent,
                params.gamma,
            )?;
            let terms = params.terms.ok_or_else(|| {
                LabError::parameter("terms", "monotone families need `terms` (the cutoff M)")
            })?;
            Ok(Box::new(MonotoneSeries {
                rule,
                terms,
                sine: name == "monotone-sin",
            }))
        }
        "weierstrass" => {
            let alpha = params
                .alpha
                .ok_or_else(|| LabError::parameter("alpha", "weierstrass needs `alpha`"))?;
            let levels = params
                .terms
                .ok_or_else(|| LabError::parameter("terms", "weierstrass needs `terms` (J)"))?;
            Ok(Box::new(Weierstrass { alpha, levels }))
        }
        "random-decay" => Ok(Box::new(RandomDecay {
            decay: params.exponent.unwrap_or(2.0),
            max_freq: params.k.unwrap_or(32),
            seed: params.seed.unwrap_or(0),
        })),
        other => Err(LabError::Unknown {
            kind: "function family",
            name: other.to_string(),
            known: FAMILY_NAMES.join(", "),
        }),
    }
}

/// The twelve-function battery the equivalence suites sweep over. All
/// members are band-limited with `max_freq <= 128`, and each is chosen so
/// its equivalence constants settle within the first six dyadic levels
/// across the whole supported exponent range (roughness is carried by the
/// dyadic members, whose constants stabilize fastest).
pub fn battery(seed: u64) -> Vec<Box<dyn TestFunction>> {
    vec![
        Box::new(Harmonic { k: 1 }),
        Box::new(Harmonic { k: 16 }),
        Box::new(TrigPoly {
            cos: vec![(1, 1.0), (3, 1.0)],
            sin: vec![],
        }),
        Box::new(TrigPoly {
            cos: vec![(2, 0.7), (5, -0.4), (11, 0.2)],
            sin: vec![(1, 0.5), (7, 0.3)],
        }),
        Box::new(Lacunary::inverse_power(1.0, 6).unwrap()),
        Box::new(Weierstrass {
            alpha: 0.5,
            levels: 6,
        }),
        Box::new(MonotoneSeries {
            rule: CoeffRule::Power { s: 2.5 },
            terms: 128,
            sine: false,
        }),
        Box::new(MonotoneSeries {
            rule: CoeffRule::Power { s: 3.0 },
            terms: 128,
            sine: true,
        }),
        Box::new(TrigPoly {
            cos: vec![(4, 1.0), (9, -0.6), (17, 0.25)],
            sin: vec![(6, 0.8), (13, -0.4)],
        }),
        Box::new(Weierstrass {
            alpha: 1.5,
            levels: 6,
        }),
        Box::new(RandomDecay {
            decay: 2.0,
            max_freq: 64,
            seed,
        }),
        Box::new(RandomDecay {
            decay: 1.5,
            max_freq: 48,
            seed: seed.wrapping_add(1),
        }),
    ]
}
