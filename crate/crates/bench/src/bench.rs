//! Experiment descriptors and the sweep runner.

use std::path::PathBuf;
use std::time::Instant;

use tucker_sketch::datagen::{add_awgn, add_scaled_noise, gaussian_tensor, hilbert_tensor, sparse_lowrank_tensor, SparseGenConfig};
use tucker_sketch::metrics::{psnr, relative_error};
use tucker_sketch::{decompose, Algorithm, ApproxConfig, DenseTensor, RngStream};

use crate::error::{BenchError, Result};
use crate::image::{load_image_tensor, PEAK};
use crate::report::{BenchReport, BenchRow};
use crate::tensor_io::load_tensor;

/// Stream id of the noise generator, disjoint from the pipelines' streams.
const NOISE_STREAM: u64 = 0x006e_6f69_7365;

#[derive(Clone, Debug, PartialEq)]
pub enum Source {
    Hilbert { dims: Vec<usize> },
    Sparse(SparseGenConfig),
    Gaussian { dims: Vec<usize>, seed: u64 },
    Image(PathBuf),
    TensorFile(PathBuf),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Noise {
    None,
    /// `X + delta * K`.
    Scaled(f64),
    /// White noise at the given SNR in dB.
    Awgn(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchDescriptor {
    pub experiment: String,
    pub source: Source,
    pub noise: Noise,
    /// Rank tuples to sweep.
    pub ranks: Vec<Vec<usize>>,
    pub algorithms: Vec<Algorithm>,
    pub trials: usize,
    pub base_seed: u64,
    pub order: Option<Vec<usize>>,
    pub oversampling: Option<usize>,
    pub sketch_extra: Option<usize>,
    pub q: Option<usize>,
}

impl BenchDescriptor {
    pub fn new(experiment: impl Into<String>, source: Source, ranks: Vec<Vec<usize>>) -> Self {
        Self {
            experiment: experiment.into(),
            source,
            noise: Noise::None,
            ranks,
            algorithms: Algorithm::ALL.to_vec(),
            trials: 1,
            base_seed: 0,
            order: None,
            oversampling: None,
            sketch_extra: None,
            q: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.experiment.is_empty() || self.experiment.contains([',', '\n', '\r']) {
            return Err(BenchError::Usage(format!(
                "experiment id {:?} must be non-empty without commas or newlines",
                self.experiment
            )));
        }
        if self.trials == 0 {
            return Err(BenchError::Usage("trials must be at least 1".into()));
        }
        if self.ranks.is_empty() || self.algorithms.is_empty() {
            return Err(BenchError::Usage("need at least one rank tuple and one algorithm".into()));
        }
        Ok(())
    }

    /// Pipeline configuration for one rank tuple and trial seed.
    pub fn config(&self, ranks: &[usize], seed: u64) -> ApproxConfig {
        let mut cfg = ApproxConfig::new(ranks.to_vec()).with_seed(seed);
        if let Some(order) = &self.order {
            cfg = cfg.with_order(order.clone());
        }
        if let Some(p) = self.oversampling {
            cfg = cfg.with_oversampling(p);
        }
        if let Some(extra) = self.sketch_extra {
            cfg = cfg.with_sketch_extra(extra);
        }
        if let Some(q) = self.q {
            cfg = cfg.with_power_q(q);
        }
        cfg
    }

    pub fn is_image(&self) -> bool {
        matches!(self.source, Source::Image(_))
    }
}

/// Materializes the source and applies the noise model. Noise draws come
/// from a dedicated stream of `seed`.
pub fn prepare_input(source: &Source, noise: Noise, seed: u64) -> Result<DenseTensor> {
    let clean = match source {
        Source::Hilbert { dims } => hilbert_tensor(dims)?,
        Source::Sparse(cfg) => sparse_lowrank_tensor(cfg)?,
        Source::Gaussian { dims, seed } => gaussian_tensor(dims, &mut RngStream::new(*seed))?,
        Source::Image(path) => load_image_tensor(path)?,
        Source::TensorFile(path) => load_tensor(path)?,
    };
    let mut rng = RngStream::with_stream(seed, NOISE_STREAM);
    Ok(match noise {
        Noise::None => clean,
        Noise::Scaled(delta) => add_scaled_noise(&clean, delta, &mut rng)?,
        Noise::Awgn(snr) => add_awgn(&clean, snr, &mut rng)?,
    })
}

/// Runs every (rank tuple, algorithm, trial) in that nesting order. Trial `t`
/// uses seed `base_seed ^ t`; only the decomposition call is timed. Errors are
/// measured against the tensor handed to the pipelines.
pub fn run_bench(desc: &BenchDescriptor) -> Result<BenchReport> {
    desc.validate()?;
    let x = prepare_input(&desc.source, desc.noise, desc.base_seed)?;
    run_on(desc, &x)
}

/// As [`run_bench`] with an already materialized input.
pub fn run_on(desc: &BenchDescriptor, x: &DenseTensor) -> Result<BenchReport> {
    run_on_with(desc, x, |_, _| Ok(()))
}

/// As [`run_on`], handing every row and its reconstruction to `visit`.
pub fn run_on_with(
    desc: &BenchDescriptor,
    x: &DenseTensor,
    mut visit: impl FnMut(&BenchRow, &DenseTensor) -> Result<()>,
) -> Result<BenchReport> {
    desc.validate()?;
    let mut rows = Vec::new();
    for ranks in &desc.ranks {
        for &algorithm in &desc.algorithms {
            for trial in 0..desc.trials {
                let seed = desc.base_seed ^ trial as u64;
                let cfg = desc.config(ranks, seed);
                let start = Instant::now();
                let model = decompose(x, algorithm, &cfg)?;
                let wall_ms = start.elapsed().as_secs_f64() * 1e3;
                let xhat = model.reconstruct();
                let rel_error = relative_error(x, &xhat)?;
                let psnr = if desc.is_image() {
                    Some(psnr(x, &xhat, PEAK)?)
                } else {
                    None
                };
                let sketch_sizes = algorithm.uses_sketch_sizes().then(|| {
                    (1..=ranks.len())
                        .map(|n| cfg.sketch_size(n, x.dims().get(n - 1).copied()))
                        .collect()
                });
                let row = BenchRow {
                    experiment: desc.experiment.clone(),
                    algorithm,
                    ranks: ranks.clone(),
                    sketch_sizes,
                    q: (algorithm == Algorithm::SubSketchSthosvd).then(|| cfg.power_q_or_default()),
                    seed: Some(seed),
                    rel_error,
                    psnr,
                    wall_ms,
                };
                log::debug!("{} {} seed {}: rel_error {:e} in {:.1} ms", algorithm, row.experiment, seed, rel_error, wall_ms);
                visit(&row, &xhat)?;
                rows.push(row);
            }
        }
    }
    Ok(BenchReport { rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_cardinality_and_seeds() {
        let mut d = BenchDescriptor::new("card", Source::Hilbert { dims: vec![8, 8, 8] }, vec![vec![2, 2, 2], vec![3, 3, 3]]);
        d.algorithms = vec![Algorithm::Sthosvd, Algorithm::SketchSthosvd];
        d.trials = 3;
        d.base_seed = 5;
        let r = run_bench(&d).unwrap();
        assert_eq!(r.rows.len(), 12);
        let seeds: Vec<u64> = r.rows[..3].iter().map(|row| row.seed.unwrap()).collect();
        assert_eq!(seeds, vec![5, 4, 7]);
        assert!(r.rows.iter().all(|row| row.wall_ms > 0.0 && row.psnr.is_none()));
        assert_eq!(r.rows[3].sketch_sizes, Some(vec![4, 4, 4]));
        assert_eq!(r.rows[0].sketch_sizes, None);
    }

    #[test]
    fn error_columns_are_reproducible() {
        let mut d = BenchDescriptor::new("rep", Source::Sparse(SparseGenConfig::new(20, 10.0, 2)), vec![vec![4, 4, 4]]);
        d.noise = Noise::Scaled(1e-3);
        d.trials = 2;
        let a = run_bench(&d).unwrap();
        let b = run_bench(&d).unwrap();
        for (x, y) in a.rows.iter().zip(&b.rows) {
            assert_eq!(x.rel_error.to_bits(), y.rel_error.to_bits());
        }
    }

    #[test]
    fn descriptor_errors() {
        let mut d = BenchDescriptor::new("a,b", Source::Hilbert { dims: vec![4, 4] }, vec![vec![2, 2]]);
        assert!(matches!(run_bench(&d), Err(BenchError::Usage(_))));
        d.experiment = "ok".into();
        d.trials = 0;
        assert!(matches!(run_bench(&d), Err(BenchError::Usage(_))));
        d.trials = 1;
        d.ranks = vec![vec![9, 2]];
        assert!(matches!(run_bench(&d), Err(BenchError::Numeric(_))));
        let missing = BenchDescriptor::new("img", Source::Image("/nonexistent/x.ppm".into()), vec![vec![1, 1, 1]]);
        assert!(matches!(run_bench(&missing), Err(BenchError::Io { .. })));
    }
}
