//! Fourier multiplier means, the de la Vallee Poussin cutoff, dyadic
//! Littlewood-Paley blocks, the square function, and the interpolation
//! operator `V_n`.

use num_complex::Complex64;

use crate::error::{LabError, Result};
use crate::grid::Grid;
use crate::norm::{lp_norm, NormExponent};
use crate::signal::PeriodicSignal;
use crate::spectral::{fft_forward, SpectralRep};
use crate::window::{VpProfile, VpWindow, Window};

/// `Psi_n f`: multiply `c_k` by `psi(|k|/n)`. The output band is `min(K, n)`.
pub fn apply_mean(rep: &SpectralRep, window: &dyn Window, n: usize) -> Result<SpectralRep> {
    if n == 0 {
        return Err(LabError::parameter("n", "mean order must be at least 1"));
    }
    let scaled = rep
        .map_multiplier(|k| Complex64::new(window.value(k.unsigned_abs() as f64 / n as f64), 0.0));
    Ok(scaled.truncated(n))
}

/// De la Vallee Poussin mean `eta_n f`; fixes every band `<= n/2`, kills `>= n`.
pub fn vp_eta(rep: &SpectralRep, n: usize, profile: VpProfile) -> Result<SpectralRep> {
    apply_mean(rep, &VpWindow { profile }, n)
}

/// Dyadic blocks `theta_0 = eta_1 f`, `theta_j = eta_{2^j} f - eta_{2^{j-1}} f`.
#[derive(Debug, Clone)]
pub struct BlockDecomposition {
    pub blocks: Vec<SpectralRep>,
    pub source_max_freq: usize,
}

impl BlockDecomposition {
    /// Telescoping sum of all blocks, equal to `eta_{2^J} f` exactly.
    pub fn telescoped(&self) -> SpectralRep {
        let mut acc = SpectralRep::zero(0);
        for b in &self.blocks {
            acc = acc.add(b);
        }
        acc
    }
}

pub fn lp_blocks(
    rep: &SpectralRep,
    levels: usize,
    profile: VpProfile,
) -> Result<BlockDecomposition> {
    let mut blocks = Vec::with_capacity(levels + 1);
    let mut prev = vp_eta(rep, 1, profile)?;
    blocks.push(prev.clone());
    for j in 1..=levels {
        let cur = vp_eta(rep, 1 << j, profile)?;
        blocks.push(cur.sub(&prev));
        prev = cur;
    }
    Ok(BlockDecomposition {
        blocks,
        source_max_freq: rep.max_freq(),
    })
}

/// Number of block levels that fully cover a band of width `max_freq`.
pub fn covering_levels(max_freq: usize) -> usize {
    let mut j = 0;
    // eta_{2^j} is the identity on the band once 2^(j-1) >= max_freq.
    while (1usize << j) < 2 * max_freq.max(1) {
        j += 1;
    }
    j
}

/// Weighted square function `|| (sum_j (2^{j*alpha} theta_j f)^2)^(1/2) ||_p`,
/// computed pointwise on an oversampled grid. Requires `1 < p < inf`; the
/// Littlewood-Paley equivalence fails at the endpoints.
pub fn square_function_norm(
    rep: &SpectralRep,
    p: NormExponent,
    levels: usize,
    alpha_weight: f64,
    profile: VpProfile,
) -> Result<f64> {
    if !p.is_strict() {
        return Err(LabError::UnsupportedExponent {
            p: p.value(),
            reason: "square function equivalence needs 1 < p < inf",
        });
    }
    if alpha_weight < 0.0 {
        return Err(LabError::parameter(
            "alpha_weight",
            "weight exponent must be >= 0",
        ));
    }
    let decomposition = lp_blocks(rep, levels, profile)?;
    let grid = Grid::for_max_freq(rep.max_freq());
    let mut sq = vec![0.0f64; grid.len()];
    for (j, block) in decomposition.blocks.iter().enumerate() {
        if j == 0 && alpha_weight > 0.0 {
            // the weighted form starts at j = 1
            continue;
        }
        let weight = (2.0f64).powf(j as f64 * alpha_weight);
        let vals = block.synthesize(grid)?;
        for (s, v) in sq.iter_mut().zip(vals.values()) {
            let t = weight * v.norm();
            *s += t * t;
        }
    }
    let pointwise: Vec<Complex64> = sq.iter().map(|s| Complex64::new(s.sqrt(), 0.0)).collect();
    Ok(lp_norm(&PeriodicSignal::new(grid, pointwise)?, p))
}

/// Parseval route for the plain square function at `p = 2`:
/// `(2*pi * sum_j sum_k |theta_j^(k)|^2)^(1/2)`. Exact cross-check.
pub fn square_function_l2_by_parseval(
    rep: &SpectralRep,
    levels: usize,
    profile: VpProfile,
) -> Result<f64> {
    let decomposition = lp_blocks(rep, levels, profile)?;
    let total: f64 = decomposition
        .blocks
        .iter()
        .map(|b| b.iter().map(|(_, c)| c.norm_sqr()).sum::<f64>())
        .sum();
    Ok((2.0 * std::f64::consts::PI * total).sqrt())
}

/// Interpolation analogue of the de la Vallee Poussin means, from samples at
/// `t_k = pi*k/(3n)`, `k = 0..6n-1`. Evaluated in coefficient space: the
/// kernel's cosine weights are 1 up to `2n` and decay linearly to 0 at `4n`.
pub fn vp_interpolant(samples: &[f64], n: usize) -> Result<SpectralRep> {
    if n == 0 {
        return Err(LabError::parameter(
            "n",
            "interpolation order must be at least 1",
        ));
    }
    if samples.len() != 6 * n {
        return Err(LabError::parameter(
            "samples",
            format!(
                "expected exactly {} samples at t_k = pi*k/(3n), got {}",
                6 * n,
                samples.len()
            ),
        ));
    }
    let m = 6 * n;
    let mut buf: Vec<Complex64> = samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft_forward(&mut buf);
    let scale = 1.0 / m as f64;

    let deg = 4 * n - 1;
    let mut rep = SpectralRep::zero(deg);
    for k in -(deg as i64)..=(deg as i64) {
        let kernel_weight = {
            let a = k.unsigned_abs() as usize;
            if a <= 2 * n {
                1.0
            } else {
                (4 * n - a) as f64 / (2 * n) as f64
            }
        };
        let idx = k.rem_euclid(m as i64) as usize;
        rep.set(k, buf[idx] * scale * kernel_weight);
    }
    Ok(rep)
}

/// Nodes `t_k = pi*k/(3n)` the interpolation operator samples at.
pub fn vp_nodes(n: usize) -> Vec<f64> {
    (0..6 * n)
        .map(|k| std::f64::consts::PI * k as f64 / (3.0 * n as f64))
        .collect()
}
