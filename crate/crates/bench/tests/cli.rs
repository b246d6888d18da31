use std::path::Path;
use std::process::{Command, Output};

use tucker_bench::image::{load_image_tensor, save_image_tensor};
use tucker_bench::tensor_io::load_tensor;
use tucker_bench::{BenchReport, CSV_HEADER};
use tucker_sketch::metrics::psnr;
use tucker_sketch::{DenseTensor, TuckerModel};

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tucker-bench"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn usage_errors_exit_with_one() {
    assert_eq!(code(&cli(&[])), 1);
    assert_eq!(code(&cli(&["frobnicate"])), 1);
    assert_eq!(code(&cli(&["gen-hilbert", "--dims", "10x?x3", "--out", "x"])), 1);
    assert_eq!(code(&cli(&["bench", "--ranks", "2x2", "--algo", "magic"])), 1);
    assert_eq!(code(&cli(&["bench", "--source", "hilbert", "--ranks", "2x2"])), 1);
    assert_eq!(code(&cli(&["--help"])), 0);
}

#[test]
fn io_errors_exit_with_two() {
    let out = cli(&["decompose", "--input", "/nonexistent/t.tnsr", "--ranks", "2x2x2"]);
    assert_eq!(code(&out), 2);
    let dir = tempfile::tempdir().unwrap();
    let junk = dir.path().join("junk.tnsr");
    std::fs::write(&junk, b"not a tensor").unwrap();
    assert_eq!(code(&cli(&["decompose", "--input", path_str(&junk), "--ranks", "2"])), 2);
}

#[test]
fn numerical_violations_exit_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("h.tnsr");
    assert_eq!(code(&cli(&["gen-hilbert", "--dims", "6x6x6", "--out", path_str(&t)])), 0);
    let over = cli(&["decompose", "--input", path_str(&t), "--ranks", "7x2x2"]);
    assert_eq!(code(&over), 3);
    let bad_sketch = cli(&[
        "decompose", "--input", path_str(&t), "--ranks", "2x2x2", "--algo", "sketch", "--sketch-extra", "0",
    ]);
    assert_eq!(code(&bad_sketch), 3);
    let bad_order = cli(&["decompose", "--input", path_str(&t), "--ranks", "2x2x2", "--order", "1,1,2"]);
    assert_eq!(code(&bad_order), 3);
    let bad_delta = cli(&[
        "gen-sparse", "--dims", "10x10x10", "--delta=-1", "--out", path_str(&dir.path().join("s.tnsr")),
    ]);
    assert_eq!(code(&bad_delta), 3);
}

#[test]
fn generate_then_decompose() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("sparse.tnsr");
    let out = cli(&["gen-sparse", "--dims", "20x20x20", "--gamma", "10", "--seed", "4", "--out", path_str(&t)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let x = load_tensor(&t).unwrap();
    assert_eq!(x.dims(), &[20, 20, 20]);

    let out = cli(&["decompose", "--input", path_str(&t), "--ranks", "5x5x5", "--algo", "all", "--seed", "3"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let report = BenchReport::parse_csv(&text, Path::new("stdout")).unwrap();
    assert_eq!(report.rows.len(), 5);
    assert!(report.rows.iter().all(|r| r.experiment == "sparse" && r.seed == Some(3)));

    let model = dir.path().join("m.tuck");
    let out = cli(&[
        "decompose", "--input", path_str(&t), "--ranks", "5x4x3", "--algo", "subsketch", "--q", "2", "--out",
        path_str(&model),
    ]);
    assert_eq!(code(&out), 0);
    let m = TuckerModel::from_bytes(&std::fs::read(&model).unwrap()).unwrap();
    assert_eq!(m.ranks(), vec![5, 4, 3]);
    assert_eq!(m.dims(), vec![20, 20, 20]);
}

#[test]
fn bench_writes_csv_and_aggregates() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("r.csv");
    let out = cli(&[
        "bench", "--source", "hilbert", "--dims", "12x12x12", "--ranks", "2x2x2,4x4x4", "--algo", "all", "--trials",
        "3", "--seed", "1", "--out", path_str(&csv),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with(&format!("{CSV_HEADER}\n")));
    let raw = BenchReport::parse_csv(&text, &csv).unwrap();
    assert_eq!(raw.rows.len(), 2 * 5 * 3);
    assert!(raw.rows.iter().all(|r| r.ranks.len() == 3 && r.wall_ms > 0.0));

    let out = cli(&[
        "bench", "--source", "hilbert", "--dims", "12x12x12", "--ranks", "2x2x2,4x4x4", "--trials", "3", "--seed",
        "1", "--aggregate", "mean",
    ]);
    assert_eq!(code(&out), 0);
    let agg = BenchReport::parse_csv(&String::from_utf8(out.stdout).unwrap(), Path::new("stdout")).unwrap();
    assert_eq!(agg.rows.len(), 10);
    assert!(agg.rows.iter().all(|r| r.seed.is_none()));
    // Error columns are reproducible; the deterministic rows agree with the raw run.
    assert_eq!(format!("{:.6e}", agg.rows[0].rel_error), format!("{:.6e}", raw.rows[0].rel_error));
}

#[test]
fn bench_errors_descend_with_rank() {
    let out = cli(&[
        "bench", "--source", "hilbert", "--dims", "30x30x30", "--ranks", "2x2x2,4x4x4,6x6x6,8x8x8", "--algo",
        "sthosvd",
    ]);
    assert_eq!(code(&out), 0);
    let r = BenchReport::parse_csv(&String::from_utf8(out.stdout).unwrap(), Path::new("stdout")).unwrap();
    assert!(r.rows.windows(2).all(|w| w[1].rel_error < w[0].rel_error));
}

#[test]
fn image_compress_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.ppm");
    let img = DenseTensor::from_fn(&[24, 32, 3], |i| ((i[0] * 9 + i[1] * 5 + i[2] * 70) % 256) as f64).unwrap();
    save_image_tensor(&img, &input).unwrap();
    let recon = dir.path().join("out.ppm");
    let csv = dir.path().join("img.csv");
    let out = cli(&[
        "image-compress", "--input", path_str(&input), "--ranks", "8x8x3", "--algo", "rsthosvd", "--seed", "2",
        "--out", path_str(&recon), "--csv", path_str(&csv),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let back = load_image_tensor(&recon).unwrap();
    assert_eq!(back.dims(), &[24, 32, 3]);
    let report = BenchReport::read_csv(&csv).unwrap();
    assert_eq!(report.rows.len(), 1);
    let reported = report.rows[0].psnr.unwrap();
    // The reported value is for the unrounded reconstruction; the saved file is quantized.
    let saved = psnr(&img, &back, 255.0).unwrap();
    assert!(reported.is_finite() && (reported - saved).abs() < 0.5, "{reported} vs {saved}");

    let full = cli(&["image-compress", "--input", path_str(&input), "--ranks", "24x32x3", "--algo", "sthosvd"]);
    let r = BenchReport::parse_csv(&String::from_utf8(full.stdout).unwrap(), Path::new("stdout")).unwrap();
    let p = r.rows[0].psnr.unwrap();
    assert!(p.is_infinite() || p > 250.0, "full rank psnr {p}");

    let two = cli(&["image-compress", "--input", path_str(&input), "--ranks", "8x8x3", "--algo", "all", "--out", "x.ppm"]);
    assert_eq!(code(&two), 1);
}
