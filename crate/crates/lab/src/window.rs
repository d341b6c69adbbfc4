//! Catalogue of Fourier-multiplier windows `psi` with `psi(0) = 1` and
//! support in `[0, 1]`. Each kind sits behind the [`Window`] trait and is
//! selected by name at runtime.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{LabError, Result};

/// A summability window evaluated on `[0, inf)`.
pub trait Window: Send + Sync {
    /// Name with parameters, echoed into reports.
    fn id(&self) -> String;

    /// `psi(x)` for `x >= 0`.
    fn value(&self, x: f64) -> f64;

    /// Left end of the plateau: largest `t` with `psi == 1` on `[0, t]`
    /// (0 when there is no plateau). Drives exact-reproduction detection.
    fn plateau(&self) -> f64 {
        0.0
    }

    /// Minimal `m` with `psi != 0` on `[0, 2^-m]`, used by the
    /// inverse-operator construction.
    fn inverse_scale(&self) -> u32 {
        1
    }
}

/// Checked evaluation; negative arguments are a parameter error.
pub fn window_value(window: &dyn Window, x: f64) -> Result<f64> {
    if x < 0.0 {
        return Err(LabError::parameter(
            "x",
            format!("window argument must be nonnegative, got {x}"),
        ));
    }
    Ok(window.value(x))
}

/// Partial sums: `psi = 1` on `[0, 1]`.
pub struct Indicator;

impl Window for Indicator {
    fn id(&self) -> String {
        "indicator".into()
    }
    fn value(&self, x: f64) -> f64 {
        if x <= 1.0 {
            1.0
        } else {
            0.0
        }
    }
    fn plateau(&self) -> f64 {
        1.0
    }
    fn inverse_scale(&self) -> u32 {
        0
    }
}

/// Fejer means: `psi(x) = (1 - x)_+`.
pub struct Fejer;

impl Window for Fejer {
    fn id(&self) -> String {
        "fejer".into()
    }
    fn value(&self, x: f64) -> f64 {
        (1.0 - x).max(0.0)
    }
}

/// Riesz means: `psi(x) = (1 - x^beta)_+^delta`, `beta, delta > 0`.
pub struct Riesz {
    pub beta: f64,
    pub delta: f64,
}

impl Riesz {
    pub fn new(beta: f64, delta: f64) -> Result<Self> {
        if !(beta > 0.0) {
            return Err(LabError::parameter("beta", "Riesz beta must be positive"));
        }
        if !(delta > 0.0) {
            return Err(LabError::parameter("delta", "Riesz delta must be positive"));
        }
        Ok(Riesz { beta, delta })
    }

    /// The d = 1 multiplier-boundedness bound `delta > |1/p - 1/2| - 1/2`,
    /// reported (vacuous for 1 <= p <= inf, but still surfaced).
    pub fn boundedness_margin(&self, p: f64) -> f64 {
        let half_dev = if p.is_infinite() {
            0.5
        } else {
            (1.0 / p - 0.5).abs()
        };
        self.delta - (half_dev - 0.5)
    }
}

impl Window for Riesz {
    fn id(&self) -> String {
        format!("riesz(beta={},delta={})", self.beta, self.delta)
    }
    fn value(&self, x: f64) -> f64 {
        let t = 1.0 - x.powf(self.beta);
        if t <= 0.0 {
            0.0
        } else {
            t.powf(self.delta)
        }
    }
}

/// Rogosinski means: `psi(x) = cos(pi x / 2)` on `[0, 1]`.
pub struct Rogosinski;

impl Window for Rogosinski {
    fn id(&self) -> String {
        "rogosinski".into()
    }
    fn value(&self, x: f64) -> f64 {
        if x <= 1.0 {
            (PI * x / 2.0).cos()
        } else {
            0.0
        }
    }
}

/// Centered cubic B-spline `M = (1-|.|)_+ * (1-|.|)_+` on `[-2, 2]`.
pub(crate) fn triangle_self_convolution(t: f64) -> f64 {
    let t = t.abs();
    if t <= 1.0 {
        2.0 / 3.0 - t * t + t * t * t / 2.0
    } else if t <= 2.0 {
        let u = 2.0 - t;
        u * u * u / 6.0
    } else {
        0.0
    }
}

/// Jackson means rescaled to unit support: `psi(x) = (3/2) M(2x)`.
pub struct Jackson;

impl Window for Jackson {
    fn id(&self) -> String {
        "jackson".into()
    }
    fn value(&self, x: f64) -> f64 {
        1.5 * triangle_self_convolution(2.0 * x)
    }
}

/// Plateau profile of the de la Vallee Poussin cutoff `eta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VpProfile {
    /// `C^inf` partition bump between the plateaus.
    Smooth,
    /// `eta(x) = min(1, 2(1-x)_+)`, the classical `2*sigma_{2n} - sigma_n`.
    Linear,
}

impl VpProfile {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "smooth" => Ok(VpProfile::Smooth),
            "linear" => Ok(VpProfile::Linear),
            other => Err(LabError::Unknown {
                kind: "vp profile",
                name: other.to_string(),
                known: "smooth, linear".into(),
            }),
        }
    }
}

/// De la Vallee Poussin cutoff: 1 on `[0, 1/2]`, 0 on `[1, inf)`.
pub struct VpWindow {
    pub profile: VpProfile,
}

fn bump(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        (-1.0 / t).exp()
    }
}

impl Window for VpWindow {
    fn id(&self) -> String {
        match self.profile {
            VpProfile::Smooth => "vp(smooth)".into(),
            VpProfile::Linear => "vp(linear)".into(),
        }
    }

    fn value(&self, x: f64) -> f64 {
        if x <= 0.5 {
            return 1.0;
        }
        if x >= 1.0 {
            return 0.0;
        }
        match self.profile {
            VpProfile::Smooth => {
                let up = bump(2.0 - 2.0 * x);
                let down = bump(2.0 * x - 1.0);
                up / (up + down)
            }
            VpProfile::Linear => 2.0 * (1.0 - x),
        }
    }

    fn plateau(&self) -> f64 {
        0.5
    }
}

/// Loose parameter bag used when constructing windows from configuration.
#[derive(Debug, Clone, Default)]
pub struct WindowParams {
    pub beta: Option<f64>,
    pub delta: Option<f64>,
    pub profile: Option<String>,
}

pub const WINDOW_NAMES: &[&str] = &["indicator", "fejer", "riesz", "rogosinski", "jackson", "vp"];

/// Build a window by catalogue name.
pub fn build_window(name: &str, params: &WindowParams) -> Result<Arc<dyn Window>> {
    match name {
        "indicator" => Ok(Arc::new(Indicator)),
        "fejer" => Ok(Arc::new(Fejer)),
        "riesz" => {
            let beta = params
                .beta
                .ok_or_else(|| LabError::parameter("beta", "riesz window requires `beta`"))?;
            let delta = params
                .delta
                .ok_or_else(|| LabError::parameter("delta", "riesz window requires `delta`"))?;
            Ok(Arc::new(Riesz::new(beta, delta)?))
        }
        "rogosinski" => Ok(Arc::new(Rogosinski)),
        "jackson" => Ok(Arc::new(Jackson)),
        "vp" => {
            let profile = VpProfile::parse(params.profile.as_deref().unwrap_or("smooth"))?;
            Ok(Arc::new(VpWindow { profile }))
        }
        other => Err(LabError::Unknown {
            kind: "window",
            name: other.to_string(),
            known: WINDOW_NAMES.join(", "),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn all_windows() -> Vec<Arc<dyn Window>> {
        vec![
            Arc::new(Indicator),
            Arc::new(Fejer),
            Arc::new(Riesz::new(2.0, 1.0).unwrap()),
            Arc::new(Rogosinski),
            Arc::new(Jackson),
            Arc::new(VpWindow {
                profile: VpProfile::Smooth,
            }),
            Arc::new(VpWindow {
                profile: VpProfile::Linear,
            }),
        ]
    }

    #[test]
    fn all_kinds_are_normalized_with_unit_support() {
        for w in all_windows() {
            assert_relative_eq!(w.value(0.0), 1.0, epsilon = 1e-12);
            for x in [1.0 + 1e-9, 1.5, 10.0] {
                assert_eq!(w.value(x), 0.0, "{} not supported in [0,1]", w.id());
            }
        }
    }

    #[test]
    fn catalogue_point_values() {
        assert_relative_eq!(Fejer.value(0.5), 0.5);
        assert_relative_eq!(Riesz::new(2.0, 1.0).unwrap().value(0.5), 0.75);
        assert_relative_eq!(Jackson.value(0.0), 1.0, epsilon = 1e-12);
        assert_relative_eq!(Rogosinski.value(0.5), (PI / 4.0).cos());
    }

    #[test]
    fn negative_argument_is_rejected() {
        assert!(window_value(&Fejer, -0.1).is_err());
        assert!(window_value(&Fejer, 0.0).is_ok());
    }

    /// The piecewise cubic for `M = (1-|.|)_+ * (1-|.|)_+` against direct
    /// numerical convolution (Simpson quadrature).
    #[test]
    fn jackson_kernel_matches_numerical_convolution() {
        let tri = |x: f64| (1.0 - x.abs()).max(0.0);
        let convolve = |t: f64| {
            // integrate tri(s) * tri(t - s) over s in [-1, 1]
            let steps = 20_000;
            let h = 2.0 / steps as f64;
            let mut acc = 0.0;
            for i in 0..=steps {
                let s = -1.0 + i as f64 * h;
                let coef = if i == 0 || i == steps {
                    1.0
                } else if i % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
                acc += coef * tri(s) * tri(t - s);
            }
            acc * h / 3.0
        };
        for t in [0.0, 0.25, 0.5, 0.9, 1.0, 1.3, 1.7, 2.0] {
            assert_relative_eq!(
                triangle_self_convolution(t),
                convolve(t),
                epsilon = 1e-7,
                max_relative = 1e-6
            );
        }
    }

    #[test]
    fn vp_profiles_have_plateaus() {
        for profile in [VpProfile::Smooth, VpProfile::Linear] {
            let w = VpWindow { profile };
            assert_eq!(w.value(0.5), 1.0);
            assert_eq!(w.value(0.25), 1.0);
            assert_eq!(w.value(1.0), 0.0);
            // strictly decreasing through the transition band
            let mut last = 1.0;
            for i in 1..20 {
                let x = 0.5 + 0.5 * i as f64 / 20.0;
                let v = w.value(x);
                assert!(v <= last + 1e-12 && (0.0..=1.0).contains(&v));
                last = v;
            }
        }
        // smooth profile is symmetric under x -> 3/2 - x in the band
        let w = VpWindow {
            profile: VpProfile::Smooth,
        };
        assert_relative_eq!(w.value(0.75), 0.5, epsilon = 1e-12);
        assert_relative_eq!(w.value(0.6) + w.value(0.9), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn registry_builds_by_name() {
        let params = WindowParams {
            beta: Some(2.0),
            delta: Some(1.5),
            profile: None,
        };
        assert_eq!(
            build_window("riesz", &params).unwrap().id(),
            "riesz(beta=2,delta=1.5)"
        );
        assert!(build_window("fejerr", &WindowParams::default()).is_err());
        assert!(build_window("riesz", &WindowParams::default()).is_err());
    }
}
