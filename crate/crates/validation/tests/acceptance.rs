//! Acceptance criteria. Each check prints one PASS/FAIL line with its
//! measurements; the process exits non-zero when any check fails.

use std::time::Instant;

use tucker_bench::image::{load_image_tensor, save_image_tensor, PEAK};
use tucker_sketch::datagen::{add_scaled_noise, hilbert_tensor, sparse_lowrank_tensor, SparseGenConfig};
use tucker_sketch::linalg::{gaussian_matrix, orthonormalize, sketch, sub_sketch};
use tucker_sketch::metrics::{bound_oracle, oracle, psnr, relative_error, tail_energy, BoundVariant};
use tucker_sketch::tucker::sthosvd;
use tucker_validation::{outcome, run_suite, Criterion, Invocation, Outcome};
use tucker_sketch::{decompose, Algorithm, ApproxConfig, DenseMatrix, DenseTensor, RngStream, TuckerModel};


fn random_tucker(dims: &[usize], ranks: &[usize], seed: u64) -> DenseTensor {
    let mut rng = RngStream::new(seed);
    let core = DenseTensor::from_fn(ranks, |_| rng.next_gaussian()).unwrap();
    let factors = dims
        .iter()
        .zip(ranks)
        .map(|(&d, &r)| orthonormalize(&gaussian_matrix(&mut rng, d, r)))
        .collect();
    TuckerModel::new(core, factors).unwrap().reconstruct()
}

fn rel_err(x: &DenseTensor, algo: Algorithm, cfg: &ApproxConfig) -> f64 {
    relative_error(x, &decompose(x, algo, cfg).unwrap().reconstruct()).unwrap()
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len();
    if n % 2 == 1 {
        s[n / 2]
    } else {
        (s[n / 2 - 1] + s[n / 2]) / 2.0
    }
}

fn exact_rank_recovery() -> Outcome {
    let x = random_tucker(&[30, 30, 30], &[2, 2, 2], 1);
    let cfg = ApproxConfig::new(vec![2, 2, 2])
        .with_sketch_sizes(vec![4, 4, 4])
        .with_oversampling(2)
        .with_power_q(1);
    let errs: Vec<(Algorithm, f64)> = Algorithm::ALL.iter().map(|&a| (a, rel_err(&x, a, &cfg))).collect();
    let worst = errs.iter().map(|e| e.1).fold(0.0, f64::max);
    outcome(worst <= 1e-10, format!("max relative error {worst:.3e} (limit 1e-10)"))
}

fn deterministic_bounds() -> Outcome {
    let x = hilbert_tensor(&[50, 50, 50]).unwrap();
    let spectra: Vec<Vec<f64>> = (1..=3).map(|n| oracle::singular_values(&x.unfold(n).unwrap())).collect();
    let slack = 1e-10 * x.norm_sq();
    let mut worst_ratio: f64 = 0.0;
    let mut pass = true;
    for r in 1..=10 {
        let bound: f64 = spectra.iter().map(|s| tail_energy(s, r + 1)).sum();
        for algo in [Algorithm::Thosvd, Algorithm::Sthosvd] {
            let m = decompose(&x, algo, &ApproxConfig::new(vec![r; 3])).unwrap();
            let err = x.distance_sq(&m.reconstruct()).unwrap();
            pass &= err <= bound + slack;
            worst_ratio = worst_ratio.max(err / (bound + slack));
        }
    }
    outcome(pass, format!("max error/bound ratio {worst_ratio:.4} over r = 1..10"))
}

fn decomposition_identity() -> Outcome {
    let mut worst: f64 = 0.0;
    for seed in 0..20 {
        let a = gaussian_matrix(&mut RngStream::with_stream(seed, 3), 80, 60);
        let s = sketch(&a, 10, 15, &RngStream::new(seed)).unwrap();
        let qta = s.q.transpose() * &a;
        let lhs = (&a - s.approximation()).norm_squared();
        let rhs = (&a - &s.q * &qta).norm_squared() + (&s.xc - &qta).norm_squared();
        worst = worst.max((lhs - rhs).abs() / a.norm_squared());
    }
    outcome(worst <= 1e-10, format!("max relative gap {worst:.3e} over 20 matrices (limit 1e-10)"))
}

fn sketch_bound_monte_carlo() -> Outcome {
    let x = sparse_lowrank_tensor(&SparseGenConfig::new(100, 10.0, 0)).unwrap();
    let cfg = ApproxConfig::new(vec![10, 10, 10]).with_sketch_sizes(vec![12, 12, 12]);
    let bound = bound_oracle(&x, &cfg, BoundVariant::Sketch).unwrap().total;
    let errs: Vec<f64> = (0..200)
        .map(|seed| {
            let m = decompose(&x, Algorithm::SketchSthosvd, &cfg.clone().with_seed(seed)).unwrap();
            x.distance_sq(&m.reconstruct()).unwrap()
        })
        .collect();
    let m = mean(&errs);
    outcome(
        m <= 1.10 * bound,
        format!("mean squared error {m:.4e} vs 1.1 x bound {:.4e} (median {:.4e})", 1.10 * bound, median(&errs)),
    )
}

fn hilbert_magnitudes() -> Outcome {
    let x = hilbert_tensor(&[100, 100, 100]).unwrap();
    let cfg = ApproxConfig::new(vec![10, 10, 10]);
    let thosvd = rel_err(&x, Algorithm::Thosvd, &cfg);
    let sthosvd = rel_err(&x, Algorithm::Sthosvd, &cfg);
    let over_seeds = |algo| {
        let v: Vec<f64> = (0..10).map(|s| rel_err(&x, algo, &cfg.clone().with_seed(s))).collect();
        mean(&v)
    };
    let sub = over_seeds(Algorithm::SubSketchSthosvd);
    let sk = over_seeds(Algorithm::SketchSthosvd);
    let pass = thosvd <= 5e-6 && sthosvd <= 5e-6 && sub <= 2.0 * sthosvd && sk <= 1e-4;
    outcome(
        pass,
        format!(
            "THOSVD {thosvd:.4e}, STHOSVD {sthosvd:.4e} (limit 5e-6); sub-Sketch mean {sub:.4e} = {:.2}x STHOSVD (limit 2x); Sketch mean {sk:.4e} (limit 1e-4)",
            sub / sthosvd
        ),
    )
}

fn speed_ordering() -> Outcome {
    let signal = random_tucker(&[200, 200, 200], &[20, 20, 20], 6);
    let x = add_scaled_noise(&signal, 1e-3, &mut RngStream::new(7)).unwrap();
    let cfg = ApproxConfig::new(vec![20, 20, 20]);
    // Best of three runs per pipeline.
    let time = |algo| {
        (0..3)
            .map(|_| {
                let start = Instant::now();
                decompose(&x, algo, &cfg).unwrap();
                start.elapsed().as_secs_f64()
            })
            .fold(f64::INFINITY, f64::min)
    };
    let st = time(Algorithm::Sthosvd);
    let r = time(Algorithm::RSthosvd);
    let sk = time(Algorithm::SketchSthosvd);
    let sub = time(Algorithm::SubSketchSthosvd);
    let pass = sk <= 0.5 * st && r <= 0.5 * st && sub <= st;
    outcome(
        pass,
        format!("STHOSVD {st:.3}s, R-STHOSVD {r:.3}s, Sketch {sk:.3}s, sub-Sketch {sub:.3}s"),
    )
}

fn power_iteration_benefit() -> Outcome {
    let n = 500;
    let u = orthonormalize(&gaussian_matrix(&mut RngStream::new(1), n, n));
    let v = orthonormalize(&gaussian_matrix(&mut RngStream::new(2), n, n));
    let sigma = DenseMatrix::from_fn(n, n, |i, j| if i == j { ((i + 1) as f64).powf(-0.5) } else { 0.0 });
    let a = &u * sigma * v.transpose();
    let mut plain = Vec::new();
    let mut powered = Vec::new();
    for seed in 0..50 {
        let rng = RngStream::new(seed);
        plain.push((&a - sketch(&a, 10, 12, &rng).unwrap().approximation()).norm());
        powered.push((&a - sub_sketch(&a, 10, 12, 2, &rng).unwrap().approximation()).norm());
    }
    let (p, q) = (median(&plain), median(&powered));
    outcome(q <= p, format!("median error q=2 {q:.4} vs sketch {p:.4}"))
}

fn processing_order_invariance() -> Outcome {
    let x = hilbert_tensor(&[20; 5]).unwrap();
    let mut rng = RngStream::new(8);
    let errs: Vec<f64> = (0..5)
        .map(|_| {
            let order: Vec<usize> = rng.sample_distinct(5, 5).into_iter().map(|m| m + 1).collect();
            let m = sthosvd(&x, &ApproxConfig::new(vec![5; 5]).with_order(order)).unwrap();
            relative_error(&x, &m.reconstruct()).unwrap()
        })
        .collect();
    let lo = errs.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = errs.iter().cloned().fold(0.0, f64::max);
    let spread = (hi - lo) / lo;
    outcome(spread <= 1e-10, format!("relative spread {spread:.3e} across 5 orders (error {lo:.4e})"))
}

fn gap_tensors() -> Vec<(f64, DenseTensor)> {
    [2.0, 10.0, 200.0]
        .into_iter()
        .map(|g| (g, sparse_lowrank_tensor(&SparseGenConfig::new(100, g, 0)).unwrap()))
        .collect()
}

fn gap_sensitivity() -> Outcome {
    let cfg = ApproxConfig::new(vec![20, 20, 20]);
    let errs: Vec<f64> = gap_tensors().iter().map(|(_, x)| rel_err(x, Algorithm::Sthosvd, &cfg)).collect();
    let pass = errs.windows(2).all(|w| w[1] < w[0]);
    outcome(pass, format!("STHOSVD errors for gamma 2/10/200: {:.4e} {:.4e} {:.4e}", errs[0], errs[1], errs[2]))
}

fn noise_floor() -> Outcome {
    let (_, x) = gap_tensors().pop().unwrap();
    let noisy = add_scaled_noise(&x, 1e-3, &mut RngStream::new(0)).unwrap();
    let cfg = ApproxConfig::new(vec![20, 20, 20]);
    let st = rel_err(&noisy, Algorithm::Sthosvd, &cfg);
    let subs: Vec<f64> = (0..10)
        .map(|s| rel_err(&noisy, Algorithm::SubSketchSthosvd, &cfg.clone().with_seed(s)))
        .collect();
    let sub = mean(&subs);
    outcome(
        sub <= 1.5 * st,
        format!("gamma 200: sub-Sketch mean {sub:.4e} = {:.2}x STHOSVD {st:.4e} (limit 1.5x)", sub / st),
    )
}

/// Deterministic 8-bit RGB scene: gradients, soft discs and mild texture.
fn synthetic_image(h: usize, w: usize) -> DenseTensor {
    let mut rng = RngStream::new(2024);
    let discs: Vec<(f64, f64, f64, [f64; 3])> = (0..40)
        .map(|_| {
            let (y, x) = (rng.next_uniform() * h as f64, rng.next_uniform() * w as f64);
            let r = 5.0 + rng.next_uniform() * 40.0;
            (y, x, r, [rng.next_uniform(), rng.next_uniform(), rng.next_uniform()])
        })
        .collect();
    let mut grain = RngStream::new(7);
    DenseTensor::from_fn(&[h, w, 3], |i| {
        let (y, x, c) = (i[0] as f64, i[1] as f64, i[2]);
        let mut v = 60.0 + 80.0 * y / h as f64 + 40.0 * (x / 23.0).sin() * (y / 31.0).cos();
        for (cy, cx, r, col) in &discs {
            let d2 = ((y - cy).powi(2) + (x - cx).powi(2)) / (r * r);
            if d2 < 1.0 {
                v += 120.0 * (col[c] - 0.5) * (1.0 - d2).sqrt();
            }
        }
        (v + 6.0 * grain.next_gaussian()).clamp(0.0, PEAK).round()
    })
    .unwrap()
}

fn image_pipeline() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scene.ppm");
    save_image_tensor(&synthetic_image(256, 256), &path).unwrap();
    let img = load_image_tensor(&path).unwrap();
    let cfg = ApproxConfig::new(vec![50, 50, 3]);
    let median_psnr = |algo| {
        let v: Vec<f64> = (0..10)
            .map(|s| {
                let m = decompose(&img, algo, &cfg.clone().with_seed(s)).unwrap();
                psnr(&img, &m.reconstruct(), PEAK).unwrap()
            })
            .collect();
        median(&v)
    };
    let sub = median_psnr(Algorithm::SubSketchSthosvd);
    let sk = median_psnr(Algorithm::SketchSthosvd);
    let r = median_psnr(Algorithm::RSthosvd);
    let pass = sub >= sk - 0.1 && sub >= r - 0.1;
    outcome(
        pass,
        format!("median PSNR sub-Sketch {sub:.2} dB, Sketch {sk:.2} dB, R-STHOSVD {r:.2} dB"),
    )
}

fn reproducibility() -> Outcome {
    let x = sparse_lowrank_tensor(&SparseGenConfig::new(40, 10.0, 3)).unwrap();
    let cfg = ApproxConfig::new(vec![6, 6, 6]).with_seed(42);
    let same = Algorithm::ALL
        .into_iter()
        .filter(|a| a.is_randomized())
        .all(|a| decompose(&x, a, &cfg).unwrap().to_bytes() == decompose(&x, a, &cfg).unwrap().to_bytes());
    outcome(same, "R-STHOSVD, Sketch, sub-Sketch serializations compared byte for byte")
}

fn main() {
    let criteria = [
        Criterion::new("exact-rank recovery", exact_rank_recovery, 5),
        Criterion::new("deterministic tail bounds", deterministic_bounds, 30),
        Criterion::new("sketch error decomposition identity", decomposition_identity, 5),
        Criterion::new("sketch expected-error bound", sketch_bound_monte_carlo, 60),
        Criterion::new("Hilbert error magnitudes", hilbert_magnitudes, 60),
        Criterion::new("speed ordering", speed_ordering, 180),
        Criterion::new("power-iteration benefit", power_iteration_benefit, 30),
        Criterion::new("processing-order invariance", processing_order_invariance, 30),
        Criterion::new("gap sensitivity", gap_sensitivity, 60),
        Criterion::new("noise floor", noise_floor, 60),
        Criterion::new("image pipeline", image_pipeline, 60),
        Criterion::new("reproducibility", reproducibility, 60),
    ];
    let inv = Invocation::parse(std::env::args().skip(1));
    let ok = run_suite(&criteria, &inv, &mut std::io::stdout().lock()).expect("stdout");
    if !ok {
        std::process::exit(1);
    }
}
