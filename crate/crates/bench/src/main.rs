use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use tucker_bench::image::{load_image_tensor, save_image_tensor, PEAK};
use tucker_bench::report::{join_dims, parse_dims};
use tucker_bench::tensor_io::{load_tensor, save_tensor};
use tucker_bench::{prepare_input, run_bench, run_on, run_on_with, BenchDescriptor, BenchError, BenchReport, Noise, Result, Source};
use tucker_sketch::datagen::SparseGenConfig;
use tucker_sketch::metrics::{psnr, relative_error};
use tucker_sketch::{decompose, Algorithm};

#[derive(Parser)]
#[command(name = "tucker-bench", version, about = "Randomized Tucker approximation experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a Hilbert tensor to a TNSR file.
    GenHilbert {
        #[arg(long, value_parser = dims_arg)]
        dims: Dims,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write a sparse tensor with a spectral gap (cubic dims) to a TNSR file.
    GenSparse {
        #[arg(long, value_parser = dims_arg)]
        dims: Dims,
        #[arg(long, default_value_t = 10.0)]
        gamma: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Add `delta * K` Gaussian noise.
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Decompose a TNSR file or PPM/PGM image and print one CSV row per algorithm.
    Decompose {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_parser = dims_arg)]
        ranks: Dims,
        #[arg(long, value_parser = algo_arg, default_value = "sthosvd")]
        algo: AlgoSet,
        #[command(flatten)]
        pipeline: PipelineArgs,
        /// Save the model (single algorithm only).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep ranks, algorithms and seeds and emit a CSV report.
    Bench {
        #[arg(long, value_enum, default_value_t = SourceKind::Hilbert)]
        source: SourceKind,
        /// Input file for the `image` and `file` sources.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, value_parser = dims_arg)]
        dims: Option<Dims>,
        /// Comma-separated rank tuples, e.g. `10x10x10,20x20x20`.
        #[arg(long, value_parser = rank_list_arg)]
        ranks: RankList,
        #[arg(long, value_parser = algo_arg, default_value = "all")]
        algo: AlgoSet,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        #[arg(long, default_value_t = 10.0)]
        gamma: f64,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        snr: Option<f64>,
        #[arg(long, value_enum)]
        aggregate: Option<Aggregate>,
        #[arg(long)]
        experiment: Option<String>,
        #[command(flatten)]
        pipeline: PipelineArgs,
        /// CSV destination; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compress an image and write the reconstruction.
    ImageCompress {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_parser = dims_arg)]
        ranks: Dims,
        #[arg(long, value_parser = algo_arg, default_value = "subsketch")]
        algo: AlgoSet,
        #[arg(long)]
        snr: Option<f64>,
        #[command(flatten)]
        pipeline: PipelineArgs,
        /// Reconstructed image (single algorithm only).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the CSV rows here.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Args, Clone)]
struct PipelineArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Processing order, e.g. `3,1,2`.
    #[arg(long, value_delimiter = ',')]
    order: Option<Vec<usize>>,
    #[arg(long)]
    oversample: Option<usize>,
    /// Sketch size `l_n = r_n + extra`.
    #[arg(long)]
    sketch_extra: Option<usize>,
    #[arg(long)]
    q: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SourceKind {
    Hilbert,
    Sparse,
    Gaussian,
    Image,
    File,
}

#[derive(Clone, Copy, ValueEnum)]
enum Aggregate {
    Mean,
}

#[derive(Clone)]
struct AlgoSet(Vec<Algorithm>);

#[derive(Clone)]
struct Dims(Vec<usize>);

#[derive(Clone)]
struct RankList(Vec<Vec<usize>>);

fn dims_arg(s: &str) -> std::result::Result<Dims, String> {
    parse_dims(s).map(Dims).ok_or_else(|| format!("expected sizes like 10x10x10, got {s:?}"))
}

fn rank_list_arg(s: &str) -> std::result::Result<RankList, String> {
    s.split(',').map(|t| dims_arg(t).map(|d| d.0)).collect::<std::result::Result<_, _>>().map(RankList)
}

fn algo_arg(s: &str) -> std::result::Result<AlgoSet, String> {
    if s == "all" {
        return Ok(AlgoSet(Algorithm::ALL.to_vec()));
    }
    s.parse::<Algorithm>().map(|a| AlgoSet(vec![a])).map_err(|e| e.to_string())
}

fn descriptor(experiment: &str, source: Source, ranks: Vec<Vec<usize>>, algos: &AlgoSet, p: &PipelineArgs) -> BenchDescriptor {
    let mut d = BenchDescriptor::new(experiment, source, ranks);
    d.algorithms = algos.0.clone();
    d.base_seed = p.seed;
    d.order = p.order.clone();
    d.oversampling = p.oversample;
    d.sketch_extra = p.sketch_extra;
    d.q = p.q;
    d
}

fn is_image_path(path: &Path) -> bool {
    matches!(
        path.extension().and_then(|e| e.to_str()).map(|e| e.to_ascii_lowercase()).as_deref(),
        Some("ppm" | "pgm")
    )
}

fn single(algos: &AlgoSet, what: &str) -> Result<Algorithm> {
    match algos.0.as_slice() {
        [a] => Ok(*a),
        _ => Err(BenchError::Usage(format!("{what} needs a single --algo"))),
    }
}

fn emit(report: &BenchReport, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => report.write_csv(path),
        None => {
            print!("{}", report.to_csv());
            Ok(())
        }
    }
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("input")
        .replace([',', '\n', '\r'], "_")
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::GenHilbert { dims: Dims(dims), out } => {
            let x = prepare_input(&Source::Hilbert { dims }, Noise::None, 0)?;
            save_tensor(&x, &out)
        }
        Command::GenSparse { dims: Dims(dims), gamma, seed, delta, out } => {
            let n = match dims.as_slice() {
                [a, b, c] if a == b && b == c => *a,
                _ => return Err(BenchError::Usage(format!("sparse tensors are cubic, got {}", join_dims(&dims)))),
            };
            let noise = delta.map_or(Noise::None, Noise::Scaled);
            let x = prepare_input(&Source::Sparse(SparseGenConfig::new(n, gamma, seed)), noise, seed)?;
            save_tensor(&x, &out)
        }
        Command::Decompose { input, ranks: Dims(ranks), algo, pipeline, out } => {
            let image = is_image_path(&input);
            let x = if image { load_image_tensor(&input)? } else { load_tensor(&input)? };
            if let Some(path) = &out {
                let a = single(&algo, "--out")?;
                let cfg = descriptor("decompose", Source::TensorFile(input.clone()), vec![ranks.clone()], &algo, &pipeline)
                    .config(&ranks, pipeline.seed);
                let model = decompose(&x, a, &cfg)?;
                std::fs::write(path, model.to_bytes()).map_err(|e| BenchError::io(path, e))?;
                let xhat = model.reconstruct();
                let err = relative_error(&x, &xhat)?;
                match image {
                    true => eprintln!("{}: rel_error {:e}, psnr {:.2} dB", a, err, psnr(&x, &xhat, PEAK)?),
                    false => eprintln!("{}: rel_error {:e}", a, err),
                }
                return Ok(());
            }
            let source = if image { Source::Image(input.clone()) } else { Source::TensorFile(input.clone()) };
            let d = descriptor(&stem(&input), source, vec![ranks], &algo, &pipeline);
            emit(&run_on(&d, &x)?, None)
        }
        Command::Bench {
            source,
            input,
            dims,
            ranks,
            algo,
            trials,
            gamma,
            delta,
            snr,
            aggregate,
            experiment,
            pipeline,
            out,
        } => {
            let need_dims = || dims.clone().map(|d| d.0).ok_or_else(|| BenchError::Usage("--dims is required for this source".into()));
            let need_input = || input.clone().ok_or_else(|| BenchError::Usage("--input is required for this source".into()));
            let (name, src) = match source {
                SourceKind::Hilbert => ("hilbert", Source::Hilbert { dims: need_dims()? }),
                SourceKind::Sparse => {
                    let d = need_dims()?;
                    if d.len() != 3 || d.iter().any(|&v| v != d[0]) {
                        return Err(BenchError::Usage("sparse tensors are cubic (--dims NxNxN)".into()));
                    }
                    ("sparse", Source::Sparse(SparseGenConfig::new(d[0], gamma, pipeline.seed)))
                }
                SourceKind::Gaussian => ("gaussian", Source::Gaussian { dims: need_dims()?, seed: pipeline.seed }),
                SourceKind::Image => ("image", Source::Image(need_input()?)),
                SourceKind::File => ("file", Source::TensorFile(need_input()?)),
            };
            let noise = match (delta, snr) {
                (Some(_), Some(_)) => return Err(BenchError::Usage("--delta and --snr are exclusive".into())),
                (Some(d), None) => Noise::Scaled(d),
                (None, Some(s)) => Noise::Awgn(s),
                (None, None) => Noise::None,
            };
            let mut d = descriptor(experiment.as_deref().unwrap_or(name), src, ranks.0, &algo, &pipeline);
            d.trials = trials;
            d.noise = noise;
            let report = run_bench(&d)?;
            let report = match aggregate {
                Some(Aggregate::Mean) => report.aggregate_mean(),
                None => report,
            };
            emit(&report, out.as_deref())
        }
        Command::ImageCompress { input, ranks: Dims(ranks), algo, snr, pipeline, out, csv } => {
            let noise = snr.map_or(Noise::None, Noise::Awgn);
            let x = prepare_input(&Source::Image(input.clone()), noise, pipeline.seed)?;
            let d = descriptor(&stem(&input), Source::Image(input.clone()), vec![ranks], &algo, &pipeline);
            if out.is_some() {
                single(&algo, "--out")?;
            }
            let mut saved = false;
            let report = run_on_with(&d, &x, |_, xhat| {
                if let (Some(path), false) = (&out, saved) {
                    save_image_tensor(xhat, path)?;
                    saved = true;
                }
                Ok(())
            })?;
            emit(&report, csv.as_deref())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
