//! Result rows and their CSV form.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use tucker_sketch::Algorithm;

use crate::error::{BenchError, Result};

pub const CSV_HEADER: &str = "experiment,algorithm,ranks,sketch_sizes,q,seed,rel_error,psnr,wall_ms";

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub experiment: String,
    pub algorithm: Algorithm,
    pub ranks: Vec<usize>,
    /// Only for the sketch pipelines.
    pub sketch_sizes: Option<Vec<usize>>,
    /// Only for the power-iteration pipeline.
    pub q: Option<usize>,
    /// Blank in aggregated rows.
    pub seed: Option<u64>,
    pub rel_error: f64,
    pub psnr: Option<f64>,
    pub wall_ms: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
}

/// `%.6e` with a signed exponent of at least two digits (`1.500000e-03`).
pub fn format_sci(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let s = format!("{v:.6e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

pub fn join_dims(v: &[usize]) -> String {
    v.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("x")
}

/// Parses `10x10x10`.
pub fn parse_dims(s: &str) -> Option<Vec<usize>> {
    let dims: Option<Vec<usize>> = s.split('x').map(|t| t.trim().parse().ok()).collect();
    dims.filter(|d| !d.is_empty())
}

fn optional(s: &str) -> Option<&str> {
    (!s.is_empty()).then_some(s)
}

fn algorithm_by_name(name: &str) -> Option<Algorithm> {
    Algorithm::ALL.into_iter().find(|a| a.name() == name)
}

impl BenchReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                r.experiment,
                r.algorithm.name(),
                join_dims(&r.ranks),
                r.sketch_sizes.as_deref().map(join_dims).unwrap_or_default(),
                r.q.map(|q| q.to_string()).unwrap_or_default(),
                r.seed.map(|s| s.to_string()).unwrap_or_default(),
                format_sci(r.rel_error),
                r.psnr.map(format_sci).unwrap_or_default(),
                format_sci(r.wall_ms),
            );
        }
        out
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_csv()).map_err(|e| BenchError::io(path, e))
    }

    pub fn parse_csv(text: &str, source: &Path) -> Result<BenchReport> {
        let mut lines = text.lines();
        if lines.next() != Some(CSV_HEADER) {
            return Err(BenchError::format(source, "missing or unexpected CSV header"));
        }
        let mut rows = Vec::new();
        for (i, line) in lines.enumerate().filter(|(_, l)| !l.is_empty()) {
            let bad = |what: &str| BenchError::format(source, format!("line {}: bad {what}", i + 2));
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 9 {
                return Err(bad("field count"));
            }
            rows.push(BenchRow {
                experiment: f[0].to_string(),
                algorithm: algorithm_by_name(f[1]).ok_or_else(|| bad("algorithm"))?,
                ranks: parse_dims(f[2]).ok_or_else(|| bad("ranks"))?,
                sketch_sizes: optional(f[3])
                    .map(|s| parse_dims(s).ok_or_else(|| bad("sketch sizes")))
                    .transpose()?,
                q: optional(f[4]).map(|s| s.parse().map_err(|_| bad("q"))).transpose()?,
                seed: optional(f[5]).map(|s| s.parse().map_err(|_| bad("seed"))).transpose()?,
                rel_error: f[6].parse().map_err(|_| bad("rel_error"))?,
                psnr: optional(f[7]).map(|s| s.parse().map_err(|_| bad("psnr"))).transpose()?,
                wall_ms: f[8].parse().map_err(|_| bad("wall_ms"))?,
            });
        }
        Ok(BenchReport { rows })
    }

    pub fn read_csv(path: impl AsRef<Path>) -> Result<BenchReport> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| BenchError::io(path, e))?;
        Self::parse_csv(&text, path)
    }

    /// One row per (experiment, algorithm, ranks, sketch sizes, q) in
    /// first-seen order, with error, PSNR and time averaged over trials.
    pub fn aggregate_mean(&self) -> BenchReport {
        let mut groups: Vec<(BenchRow, usize)> = Vec::new();
        for r in &self.rows {
            let key = |g: &BenchRow| {
                g.experiment == r.experiment
                    && g.algorithm == r.algorithm
                    && g.ranks == r.ranks
                    && g.sketch_sizes == r.sketch_sizes
                    && g.q == r.q
            };
            match groups.iter_mut().find(|(g, _)| key(g)) {
                Some((g, n)) => {
                    g.rel_error += r.rel_error;
                    g.wall_ms += r.wall_ms;
                    g.psnr = g.psnr.zip(r.psnr).map(|(a, b)| a + b);
                    *n += 1;
                }
                None => groups.push((BenchRow { seed: None, ..r.clone() }, 1)),
            }
        }
        let rows = groups
            .into_iter()
            .map(|(mut g, n)| {
                let n = n as f64;
                g.rel_error /= n;
                g.wall_ms /= n;
                g.psnr = g.psnr.map(|p| p / n);
                g
            })
            .collect();
        BenchReport { rows }
    }
}
