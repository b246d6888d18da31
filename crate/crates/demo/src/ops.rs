//! The demo operations as plain functions.

use tucker_sketch::datagen::{hilbert_tensor, sparse_lowrank_tensor, SparseGenConfig};
use tucker_sketch::metrics::{psnr, relative_error};
use tucker_sketch::{decompose, Algorithm, ApproxConfig, DenseTensor, Result};

/// Relative error of every algorithm on an `n x n x n` Hilbert tensor for
/// ranks `1..=max_rank`. Row-major: one row of `max_rank` values per entry of
/// [`Algorithm::ALL`].
pub fn hilbert_curves(n: usize, max_rank: usize, seed: u64) -> Result<Vec<f64>> {
    let x = hilbert_tensor(&[n, n, n])?;
    let mut out = Vec::with_capacity(Algorithm::ALL.len() * max_rank);
    for algorithm in Algorithm::ALL {
        for r in 1..=max_rank {
            let cfg = ApproxConfig::new(vec![r; 3]).with_seed(seed);
            let model = decompose(&x, algorithm, &cfg)?;
            out.push(relative_error(&x, &model.reconstruct())?);
        }
    }
    Ok(out)
}

pub struct Compressed {
    pub rgba: Vec<u8>,
    pub psnr: f64,
    pub rel_error: f64,
    /// Stored values of the model over pixel values.
    pub ratio: f64,
}

/// Tensor `height x width x 3` from canvas RGBA bytes; alpha is dropped.
pub fn rgba_to_tensor(rgba: &[u8], width: usize, height: usize) -> Result<DenseTensor> {
    if rgba.len() != width * height * 4 {
        return Err(tucker_sketch::Error::Parameter(format!(
            "expected {} RGBA bytes for {width}x{height}, got {}",
            width * height * 4,
            rgba.len()
        )));
    }
    DenseTensor::from_fn(&[height, width, 3], |i| rgba[(i[0] * width + i[1]) * 4 + i[2]] as f64)
}

pub fn tensor_to_rgba(x: &DenseTensor) -> Vec<u8> {
    let (h, w) = (x.dims()[0], x.dims()[1]);
    let mut out = vec![255u8; h * w * 4];
    for i in 0..h {
        for j in 0..w {
            for c in 0..3 {
                let v = x.get(&[i, j, c]);
                out[(i * w + j) * 4 + c] = if v.is_nan() { 0 } else { v.clamp(0.0, 255.0).round() as u8 };
            }
        }
    }
    out
}

pub fn compress_rgba(
    rgba: &[u8],
    width: usize,
    height: usize,
    ranks: [usize; 3],
    algorithm: Algorithm,
    seed: u64,
) -> Result<Compressed> {
    let x = rgba_to_tensor(rgba, width, height)?;
    let cfg = ApproxConfig::new(ranks.to_vec()).with_seed(seed);
    let model = decompose(&x, algorithm, &cfg)?;
    let xhat = model.reconstruct();
    let stored = model.core.data().len() + model.factors.iter().map(|u| u.nrows() * u.ncols()).sum::<usize>();
    Ok(Compressed {
        rgba: tensor_to_rgba(&xhat),
        psnr: psnr(&x, &xhat, 255.0)?,
        rel_error: relative_error(&x, &xhat)?,
        ratio: stored as f64 / x.data().len() as f64,
    })
}

/// Errors of Sketch-STHOSVD followed by sub-Sketch-STHOSVD at `q = 1..=max_q`
/// on a sparse tensor with spectral gap `gamma`.
pub fn power_sweep(n: usize, rank: usize, gamma: f64, max_q: usize, seed: u64) -> Result<Vec<f64>> {
    let x = sparse_lowrank_tensor(&SparseGenConfig::new(n, gamma, seed))?;
    let base = ApproxConfig::new(vec![rank; 3]).with_seed(seed);
    let mut out = Vec::with_capacity(max_q + 1);
    let sketch = decompose(&x, Algorithm::SketchSthosvd, &base)?;
    out.push(relative_error(&x, &sketch.reconstruct())?);
    for q in 1..=max_q {
        let model = decompose(&x, Algorithm::SubSketchSthosvd, &base.clone().with_power_q(q))?;
        out.push(relative_error(&x, &model.reconstruct())?);
    }
    Ok(out)
}
