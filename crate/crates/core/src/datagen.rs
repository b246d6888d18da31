//! Test-tensor families and noise models.

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::tensor::DenseTensor;

/// Highest SNR honoured by [`add_awgn`]; larger requests are clamped.
pub const MAX_SNR_DB: f64 = 300.0;

/// `x[i_1..i_N] = 1 / (i_1 + ... + i_N)` with 1-based indices.
pub fn hilbert_tensor(dims: &[usize]) -> Result<DenseTensor> {
    DenseTensor::from_fn(dims, |idx| {
        let s: usize = idx.iter().map(|i| i + 1).sum();
        1.0 / s as f64
    })
}

pub fn gaussian_tensor(dims: &[usize], rng: &mut RngStream) -> Result<DenseTensor> {
    DenseTensor::from_fn(dims, |_| rng.next_gaussian())
}

/// `x + delta * K` with `K` a standard Gaussian tensor.
pub fn add_scaled_noise(x: &DenseTensor, delta: f64, rng: &mut RngStream) -> Result<DenseTensor> {
    if !delta.is_finite() || delta < 0.0 {
        return Err(Error::Parameter(format!("noise level must be finite and >= 0, got {delta}")));
    }
    let mut out = x.clone();
    if delta == 0.0 {
        return Ok(out);
    }
    for v in out.data_mut() {
        *v += delta * rng.next_gaussian();
    }
    Ok(out)
}

/// White Gaussian noise at `snr_db` relative to the measured signal power
/// (mean squared entry). A zero signal is returned unchanged.
pub fn add_awgn(x: &DenseTensor, snr_db: f64, rng: &mut RngStream) -> Result<DenseTensor> {
    if snr_db.is_nan() {
        return Err(Error::Parameter("SNR must not be NaN".into()));
    }
    let snr_db = snr_db.min(MAX_SNR_DB);
    let power = x.norm_sq() / x.len() as f64;
    if power == 0.0 {
        log::warn!("awgn: zero signal power, returning the input unchanged");
        return Ok(x.clone());
    }
    let sigma = (power / 10f64.powf(snr_db / 10.0)).sqrt();
    add_scaled_noise(x, sigma, rng)
}

/// Sparse vector in coordinate form.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseVector {
    pub len: usize,
    pub indices: Vec<usize>,
    pub values: Vec<f64>,
}

impl SparseVector {
    /// `ceil(density * len)` distinct positions, values uniform on (0, 1).
    pub fn random(len: usize, density: f64, rng: &mut RngStream) -> SparseVector {
        let count = ((density * len as f64).ceil() as usize).min(len);
        let indices = rng.sample_distinct(len, count);
        let values = indices.iter().map(|_| rng.next_uniform()).collect();
        SparseVector { len, indices, values }
    }

    pub fn unit(len: usize, at: usize) -> SparseVector {
        SparseVector {
            len,
            indices: vec![at],
            values: vec![1.0],
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SparseGenConfig {
    /// Side length of the cubic tensor.
    pub n: usize,
    /// Weight multiplier of the leading terms; controls the spectral gap.
    pub gamma: f64,
    /// Fraction of nonzeros per factor vector.
    pub density: f64,
    pub leading_terms: usize,
    pub total_terms: usize,
    pub seed: u64,
}

impl SparseGenConfig {
    pub fn new(n: usize, gamma: f64, seed: u64) -> Self {
        Self {
            n,
            gamma,
            density: 0.05,
            leading_terms: 10,
            total_terms: 200,
            seed,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidDims("side length must be positive".into()));
        }
        if self.gamma.is_nan() || self.gamma <= 0.0 {
            return Err(Error::Parameter(format!("gamma must be positive, got {}", self.gamma)));
        }
        if !(self.density > 0.0 && self.density <= 1.0) {
            return Err(Error::Parameter(format!("density must lie in (0, 1], got {}", self.density)));
        }
        Ok(())
    }

    /// Weight of term `i` (1-based): `gamma / i^2` for the leading terms, `1 / i^2` after.
    pub fn weight(&self, i: usize) -> f64 {
        let base = 1.0 / (i * i) as f64;
        if i <= self.leading_terms {
            self.gamma * base
        } else {
            base
        }
    }
}

/// Weighted sum of outer products of sparse vectors, `sum_i w_i x_i ∘ y_i ∘ z_i`.
pub fn sparse_outer_sum(n: usize, terms: &[(f64, [SparseVector; 3])]) -> Result<DenseTensor> {
    let mut t = DenseTensor::zeros(&[n, n, n])?;
    let data = t.data_mut();
    for (w, [x, y, z]) in terms {
        for (&k, &zv) in z.indices.iter().zip(&z.values) {
            for (&j, &yv) in y.indices.iter().zip(&y.values) {
                let base = n * (j + n * k);
                let s = w * yv * zv;
                for (&i, &xv) in x.indices.iter().zip(&x.values) {
                    data[i + base] += s * xv;
                }
            }
        }
    }
    Ok(t)
}

/// Cubic tensor with a gap after the leading terms, built from sparse random
/// factor vectors drawn from `RngStream::new(cfg.seed)`.
pub fn sparse_lowrank_tensor(cfg: &SparseGenConfig) -> Result<DenseTensor> {
    cfg.validate()?;
    let mut rng = RngStream::new(cfg.seed);
    let terms: Vec<(f64, [SparseVector; 3])> = (1..=cfg.total_terms)
        .map(|i| {
            let x = SparseVector::random(cfg.n, cfg.density, &mut rng);
            let y = SparseVector::random(cfg.n, cfg.density, &mut rng);
            let z = SparseVector::random(cfg.n, cfg.density, &mut rng);
            (cfg.weight(i), [x, y, z])
        })
        .collect();
    sparse_outer_sum(cfg.n, &terms)
}
