use crate::error::{LabError, Result};
use crate::signal::PeriodicSignal;
use crate::spectral::SpectralRep;

/// Norm exponent `p` with the pair `(tau, theta) = (max(2,p), min(2,p))`
/// attached for finite `p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormExponent {
    Finite(f64),
    Infinity,
}

impl NormExponent {
    pub fn new(p: f64) -> Result<Self> {
        if p.is_infinite() && p > 0.0 {
            return Ok(NormExponent::Infinity);
        }
        if !p.is_finite() || p < 1.0 {
            return Err(LabError::parameter(
                "p",
                format!("norm exponent must satisfy 1 <= p <= inf, got {p}"),
            ));
        }
        Ok(NormExponent::Finite(p))
    }

    pub fn infinity() -> Self {
        NormExponent::Infinity
    }

    pub fn value(&self) -> f64 {
        match self {
            NormExponent::Finite(p) => *p,
            NormExponent::Infinity => f64::INFINITY,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, NormExponent::Finite(_))
    }

    /// Strictly between 1 and infinity.
    pub fn is_strict(&self) -> bool {
        matches!(self, NormExponent::Finite(p) if *p > 1.0)
    }

    /// `tau = max(2, p)` for finite `p`.
    pub fn tau(&self) -> Result<f64> {
        match self {
            NormExponent::Finite(p) => Ok(p.max(2.0)),
            NormExponent::Infinity => Err(LabError::UnsupportedExponent {
                p: f64::INFINITY,
                reason: "tau/theta pair is defined for finite p",
            }),
        }
    }

    /// `theta = min(2, p)` for finite `p`.
    pub fn theta(&self) -> Result<f64> {
        match self {
            NormExponent::Finite(p) => Ok(p.min(2.0)),
            NormExponent::Infinity => Err(LabError::UnsupportedExponent {
                p: f64::INFINITY,
                reason: "tau/theta pair is defined for finite p",
            }),
        }
    }
}

/// `L_p` norm by the rectangle rule: `(2*pi/N * sum |v_j|^p)^(1/p)`, or the
/// grid maximum for `p = inf`. Spectrally accurate on oversampled bands.
pub fn lp_norm(signal: &PeriodicSignal, p: NormExponent) -> f64 {
    let vals = signal.values();
    match p {
        NormExponent::Infinity => vals.iter().map(|v| v.norm()).fold(0.0, f64::max),
        NormExponent::Finite(p) => {
            let w = signal.grid().weight();
            if p == 2.0 {
                (w * vals.iter().map(|v| v.norm_sqr()).sum::<f64>()).sqrt()
            } else {
                (w * vals.iter().map(|v| v.norm().powf(p)).sum::<f64>()).powf(1.0 / p)
            }
        }
    }
}

/// `L_p` norm of a spectral table, synthesized on its own oversampled grid.
/// Takes the Parseval shortcut at `p = 2`; sup norms get an extra octave of
/// oversampling to tame the grid-maximum bias. For large finite `p` the
/// grid tracks the degree `p * K` of the integrand `|g|^p`, which the
/// rectangle rule must resolve to stay alias-free.
pub fn lp_norm_spectral(rep: &SpectralRep, p: NormExponent) -> f64 {
    let k = rep.max_freq().max(1);
    match p {
        NormExponent::Infinity => {
            let grid = crate::grid::Grid::for_max_freq(2 * k);
            lp_norm(&rep.synthesize(grid).expect("grid sized for this band"), p)
        }
        NormExponent::Finite(q) => {
            if q == 2.0 {
                return rep.l2_norm();
            }
            let band = ((1.25 * q * k as f64 / 4.0).ceil() as usize).max(k);
            let grid = crate::grid::Grid::for_max_freq(band);
            lp_norm(&rep.synthesize(grid).expect("grid sized for this band"), p)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn exponent_pairs() {
        let p = NormExponent::new(4.0).unwrap();
        assert_eq!(p.tau().unwrap(), 4.0);
        assert_eq!(p.theta().unwrap(), 2.0);
        let p = NormExponent::new(1.5).unwrap();
        assert_eq!(p.tau().unwrap(), 2.0);
        assert_eq!(p.theta().unwrap(), 1.5);
        // tau * theta = 2p for finite p
        for q in [1.0, 1.25, 2.0, 3.0, 8.0] {
            let e = NormExponent::new(q).unwrap();
            assert_relative_eq!(e.tau().unwrap() * e.theta().unwrap(), 2.0 * q);
        }
        assert!(NormExponent::new(0.5).is_err());
        assert!(NormExponent::new(f64::NAN).is_err());
        assert!(NormExponent::new(f64::INFINITY).is_ok());
    }

    #[test]
    fn norm_of_constant_and_cosine() {
        let grid = Grid::new(64).unwrap();
        let one = PeriodicSignal::from_fn(grid, |_| 1.0);
        assert_relative_eq!(
            lp_norm(&one, NormExponent::new(2.0).unwrap()),
            (2.0 * PI).sqrt(),
            epsilon = 1e-12
        );

        let cos = PeriodicSignal::from_fn(grid, f64::cos);
        assert_relative_eq!(
            lp_norm(&cos, NormExponent::new(2.0).unwrap()),
            PI.sqrt(),
            epsilon = 1e-12
        );
        // closed form: int_0^{2pi} cos^4 = 3*pi/4
        assert_relative_eq!(
            lp_norm(&cos, NormExponent::new(4.0).unwrap()),
            (3.0 * PI / 4.0).powf(0.25),
            epsilon = 1e-12
        );
        assert_relative_eq!(lp_norm(&cos, NormExponent::Infinity), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn averaged_norms_nondecreasing_in_p() {
        let grid = Grid::new(128).unwrap();
        let sig = PeriodicSignal::from_fn(grid, |x| (3.0 * x).cos() + 0.4 * (7.0 * x).sin());
        let mut last = 0.0;
        for q in [1.0, 1.5, 2.0, 3.0, 4.0, 8.0] {
            let val = lp_norm(&sig, NormExponent::new(q).unwrap()) / (2.0 * PI).powf(1.0 / q);
            assert!(val >= last - 1e-12, "normalized norm decreased at p={q}");
            last = val;
        }
        let sup = lp_norm(&sig, NormExponent::Infinity);
        assert!(sup >= last - 1e-12);
    }

    #[test]
    fn parseval_matches_quadrature() {
        let rep = SpectralRep::from_cos_sin(&[(2, 1.0), (5, -0.3)], &[(1, 0.7)]);
        let direct = lp_norm(
            &rep.synthesize(Grid::new(64).unwrap()).unwrap(),
            NormExponent::new(2.0).unwrap(),
        );
        assert_relative_eq!(direct, rep.l2_norm(), epsilon = 1e-12);
    }
}
