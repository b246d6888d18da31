//! Error measures and executable error-bound oracles.
//!
//! The bound oracles need the full spectrum of every unfolding, which is only
//! affordable at moderate sizes. They exist to check the pipelines, not to run
//! alongside them at scale.

pub mod oracle;

use crate::error::{Error, Result};
use crate::tensor::DenseTensor;
use crate::tucker::ApproxConfig;

/// `||x - xhat||_F / ||x||_F`.
pub fn relative_error(x: &DenseTensor, xhat: &DenseTensor) -> Result<f64> {
    let reference = x.norm_sq();
    if reference == 0.0 {
        return Err(Error::ZeroReference);
    }
    Ok((x.distance_sq(xhat)? / reference).sqrt())
}

/// Peak signal-to-noise ratio in dB; `+inf` when the inputs coincide.
pub fn psnr(x: &DenseTensor, xhat: &DenseTensor, peak: f64) -> Result<f64> {
    if peak.is_nan() || peak <= 0.0 {
        return Err(Error::Parameter(format!("peak must be positive, got {peak}")));
    }
    let mse = x.distance_sq(xhat)? / x.len() as f64;
    if mse == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (peak * peak / mse).log10())
}

/// `tau_j^2 = sum_{i >= j} sigma_i^2` for 1-based `j`; zero past the end.
pub fn tail_energy(sigma: &[f64], j: usize) -> f64 {
    let start = j.saturating_sub(1).min(sigma.len());
    sigma[start..].iter().map(|s| s * s).sum()
}

/// `f(s, t) = s / (t - s - 1)`, defined for `t > s + 1 > 1`. Returns `+inf`
/// on the boundary `t = s + 1`.
pub fn f_factor(s: usize, t: usize) -> Result<f64> {
    if s == 0 || t < s + 1 {
        return Err(Error::Parameter(format!("f(s, t) needs t > s + 1 > 1, got s={s}, t={t}")));
    }
    if t == s + 1 {
        return Ok(f64::INFINITY);
    }
    Ok(s as f64 / (t - s - 1) as f64)
}

/// Singular value gap `sigma_{k+1} / sigma_k` (1-based), zero when `sigma_k = 0`.
pub fn gap_ratio(sigma: &[f64], k: usize) -> f64 {
    let sk = sigma.get(k.wrapping_sub(1)).copied().unwrap_or(0.0);
    if sk == 0.0 {
        return 0.0;
    }
    sigma.get(k).copied().unwrap_or(0.0) / sk
}

/// Full singular spectra of every mode unfolding.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumSummary {
    pub dims: Vec<usize>,
    /// `modes[n - 1]` holds `sigma(X_(n))`, nonincreasing.
    pub modes: Vec<Vec<f64>>,
}

impl SpectrumSummary {
    pub fn compute(x: &DenseTensor) -> Result<Self> {
        let modes = (1..=x.order())
            .map(|n| Ok(oracle::singular_values(&x.unfold(n)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            dims: x.dims().to_vec(),
            modes,
        })
    }

    pub fn spectrum(&self, mode: usize) -> Result<&[f64]> {
        self.modes
            .get(mode.wrapping_sub(1))
            .map(|v| v.as_slice())
            .ok_or(Error::ModeOutOfRange {
                mode,
                order: self.modes.len(),
            })
    }
}

/// `Delta_n^2 = tau_{r_n + 1}^2(X_(n))`.
pub fn mode_tail_delta(summary: &SpectrumSummary, mode: usize, rank: usize) -> Result<f64> {
    Ok(tail_energy(summary.spectrum(mode)?, rank + 1))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundVariant {
    Thosvd,
    Sthosvd,
    Sketch,
    /// Sketch with `q` power iterations.
    SubSketch { q: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModeBound {
    pub delta_sq: f64,
    /// Minimizing index of the inner minimum, when the variant has one.
    pub rho: Option<usize>,
    pub term: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub modes: Vec<ModeBound>,
    pub total: f64,
}

/// Right-hand side of the error bound for `variant`, from the spectra of `x`.
pub fn bound_oracle(x: &DenseTensor, cfg: &ApproxConfig, variant: BoundVariant) -> Result<BoundReport> {
    bound_from_summary(&SpectrumSummary::compute(x)?, cfg, variant)
}

/// [`bound_oracle`] on a precomputed spectrum summary.
///
/// - deterministic variants: `sum_n Delta_n^2`
/// - sketch: `sum_n r/(l-r-1) * min_rho r/(r-rho-1) * Delta_n^2`
/// - sub-sketch: `sum_n (1 + f(r,l)) * min_rho (1 + f(rho,r) w^{4q}) * tau_{rho+1}^2`,
///   `w = sigma_{r+1} / sigma_r`
///
/// The inner minima run over `1 <= rho < r - 1`; when that range is empty
/// (`r <= 2`) the mode's term is `+inf`.
pub fn bound_from_summary(
    summary: &SpectrumSummary,
    cfg: &ApproxConfig,
    variant: BoundVariant,
) -> Result<BoundReport> {
    if cfg.target_ranks.len() != summary.modes.len() {
        return Err(Error::InvalidRank(format!(
            "{} ranks for an order-{} tensor",
            cfg.target_ranks.len(),
            summary.modes.len()
        )));
    }
    let mut modes = Vec::with_capacity(summary.modes.len());
    for (idx, &r) in cfg.target_ranks.iter().enumerate() {
        let mode = idx + 1;
        let sigma = summary.spectrum(mode)?;
        let delta_sq = tail_energy(sigma, r + 1);
        let l = cfg.sketch_size(mode, Some(summary.dims[idx]));
        let bound = match variant {
            BoundVariant::Thosvd | BoundVariant::Sthosvd => ModeBound {
                delta_sq,
                rho: None,
                term: delta_sq,
            },
            BoundVariant::Sketch => {
                let lead = f_factor(r, l)?;
                let best = (1..r.saturating_sub(1))
                    .map(|rho| (rho, r as f64 / (r - rho - 1) as f64))
                    .min_by(|a, b| a.1.total_cmp(&b.1));
                minimized(mode, delta_sq, best.map(|(rho, m)| (rho, lead, m, delta_sq)))
            }
            BoundVariant::SubSketch { q } => {
                let lead = 1.0 + f_factor(r, l)?;
                let gap = gap_ratio(sigma, r).powi(4 * q as i32);
                let best = (1..r.saturating_sub(1))
                    .map(|rho| {
                        let inner = 1.0 + f_factor(rho, r).expect("rho < r - 1") * gap;
                        (rho, inner * tail_energy(sigma, rho + 1))
                    })
                    .min_by(|a, b| a.1.total_cmp(&b.1));
                minimized(mode, delta_sq, best.map(|(rho, v)| (rho, lead, 1.0, v)))
            }
        };
        modes.push(bound);
    }
    let total = modes.iter().map(|m| m.term).sum();
    Ok(BoundReport { modes, total })
}

/// `(rho, lead, multiplier, energy)` -> term `lead * multiplier * energy`, with
/// a zero energy always giving a zero term.
fn minimized(mode: usize, delta_sq: f64, best: Option<(usize, f64, f64, f64)>) -> ModeBound {
    match best {
        None => {
            log::warn!("mode {mode}: empty minimization range (rank <= 2), bound is vacuous");
            ModeBound {
                delta_sq,
                rho: None,
                term: f64::INFINITY,
            }
        }
        Some((rho, lead, mult, energy)) => ModeBound {
            delta_sq,
            rho: Some(rho),
            term: if energy == 0.0 { 0.0 } else { lead * mult * energy },
        },
    }
}
