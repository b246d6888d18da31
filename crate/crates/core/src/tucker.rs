//! Tucker models and the five approximation pipelines.
//!
//! All sequential pipelines share one driver: the current core `G` starts as
//! `X`; for each mode `n` in the processing order, a factor `U` and a
//! coefficient block `C` (rows = `r_n`) are computed from `G_(n)`, and the core
//! is re-materialized as `fold_n(C)`. They differ only in the per-mode
//! factorization: truncated SVD, randomized SVD, sketch, or sketch with
//! subspace power iteration.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{rsvd, sketch, sub_sketch, truncated_svd};
use crate::rng::RngStream;
use crate::tensor::{DenseMatrix, DenseTensor};

pub const DEFAULT_OVERSAMPLING: usize = 5;
pub const DEFAULT_SKETCH_EXTRA: usize = 2;
pub const DEFAULT_POWER_ITERATIONS: usize = 1;

#[derive(Clone, Debug, PartialEq)]
pub struct TuckerModel {
    pub core: DenseTensor,
    /// Factor `n` is `I_n x r_n` with orthonormal columns.
    pub factors: Vec<DenseMatrix>,
}

impl TuckerModel {
    pub fn new(core: DenseTensor, factors: Vec<DenseMatrix>) -> Result<Self> {
        if core.order() != factors.len() {
            return Err(Error::ShapeMismatch(format!(
                "core has order {} but {} factors were given",
                core.order(),
                factors.len()
            )));
        }
        for (n, (f, &r)) in factors.iter().zip(core.dims()).enumerate() {
            if f.ncols() != r || f.nrows() == 0 {
                return Err(Error::ShapeMismatch(format!(
                    "factor {} is {}x{} but the core has {} slices along that mode",
                    n + 1,
                    f.nrows(),
                    f.ncols(),
                    r
                )));
            }
        }
        Ok(Self { core, factors })
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.core.dims().to_vec()
    }

    /// Dimensions of the tensor the model represents.
    pub fn dims(&self) -> Vec<usize> {
        self.factors.iter().map(|f| f.nrows()).collect()
    }

    /// `G x_1 U1 x_2 U2 ... x_N UN`.
    pub fn reconstruct(&self) -> DenseTensor {
        let mut t = self.core.clone();
        for (n, f) in self.factors.iter().enumerate() {
            t = t
                .mode_product(f, n + 1)
                .expect("model invariants guarantee matching shapes");
        }
        t
    }

    /// Number of stored scalars (core plus factors).
    pub fn storage(&self) -> usize {
        self.core.len() + self.factors.iter().map(|f| f.len()).sum::<usize>()
    }

    /// Serializes into the `TUCK` container: magic, version (u32), order N
    /// (u32), N dims and N ranks (u64), core entries, then the factors in mode
    /// order. Everything little-endian, matrices column-major.
    pub fn to_bytes(&self) -> Vec<u8> {
        let n = self.core.order();
        let mut out = Vec::with_capacity(12 + 16 * n + 8 * self.storage());
        out.extend_from_slice(MODEL_MAGIC);
        out.extend_from_slice(&MODEL_VERSION.to_le_bytes());
        out.extend_from_slice(&(n as u32).to_le_bytes());
        for d in self.dims() {
            out.extend_from_slice(&(d as u64).to_le_bytes());
        }
        for r in self.ranks() {
            out.extend_from_slice(&(r as u64).to_le_bytes());
        }
        for v in self.core.data() {
            out.extend_from_slice(&v.to_le_bytes());
        }
        for f in &self.factors {
            for v in f.as_slice() {
                out.extend_from_slice(&v.to_le_bytes());
            }
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut rd = ByteReader { bytes, pos: 0 };
        if rd.take(4)? != MODEL_MAGIC {
            return Err(Error::Format("missing TUCK magic".into()));
        }
        let version = rd.u32()?;
        if version != MODEL_VERSION {
            return Err(Error::Format(format!("unsupported version {version}")));
        }
        let n = rd.u32()? as usize;
        if n == 0 {
            return Err(Error::Format("order must be at least 1".into()));
        }
        let dims = (0..n).map(|_| rd.usize()).collect::<Result<Vec<_>>>()?;
        let ranks = (0..n).map(|_| rd.usize()).collect::<Result<Vec<_>>>()?;
        let core_len = checked_product(&ranks)?;
        let core = DenseTensor::new(ranks.clone(), rd.f64s(core_len)?)?;
        let mut factors = Vec::with_capacity(n);
        for (&d, &r) in dims.iter().zip(&ranks) {
            let len = d
                .checked_mul(r)
                .ok_or_else(|| Error::Format("factor size overflows".into()))?;
            factors.push(DenseMatrix::from_vec(d, r, rd.f64s(len)?));
        }
        if rd.pos != bytes.len() {
            return Err(Error::Format(format!(
                "{} trailing bytes",
                bytes.len() - rd.pos
            )));
        }
        TuckerModel::new(core, factors)
    }
}

const MODEL_MAGIC: &[u8; 4] = b"TUCK";
const MODEL_VERSION: u32 = 1;

fn checked_product(v: &[usize]) -> Result<usize> {
    v.iter().try_fold(1usize, |acc, &x| acc.checked_mul(x)).ok_or_else(|| Error::Format("size overflows".into()))
}

struct ByteReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> ByteReader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self
            .pos
            .checked_add(n)
            .filter(|&e| e <= self.bytes.len())
            .ok_or_else(|| Error::Format("truncated container".into()))?;
        let s = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn usize(&mut self) -> Result<usize> {
        let v = u64::from_le_bytes(self.take(8)?.try_into().unwrap());
        usize::try_from(v).map_err(|_| Error::Format("dimension does not fit in usize".into()))
    }

    fn f64s(&mut self, n: usize) -> Result<Vec<f64>> {
        let len = n
            .checked_mul(8)
            .ok_or_else(|| Error::Format("size overflows".into()))?;
        Ok(self
            .take(len)?
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Thosvd,
    Sthosvd,
    RSthosvd,
    SketchSthosvd,
    SubSketchSthosvd,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::Thosvd,
        Algorithm::Sthosvd,
        Algorithm::RSthosvd,
        Algorithm::SketchSthosvd,
        Algorithm::SubSketchSthosvd,
    ];

    /// Display name used in reports.
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Thosvd => "THOSVD",
            Algorithm::Sthosvd => "STHOSVD",
            Algorithm::RSthosvd => "R-STHOSVD",
            Algorithm::SketchSthosvd => "Sketch-STHOSVD",
            Algorithm::SubSketchSthosvd => "sub-Sketch-STHOSVD",
        }
    }

    pub fn is_randomized(self) -> bool {
        !matches!(self, Algorithm::Thosvd | Algorithm::Sthosvd)
    }

    pub fn uses_sketch_sizes(self) -> bool {
        matches!(self, Algorithm::SketchSthosvd | Algorithm::SubSketchSthosvd)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "thosvd" => Ok(Algorithm::Thosvd),
            "sthosvd" => Ok(Algorithm::Sthosvd),
            "rsthosvd" | "r-sthosvd" => Ok(Algorithm::RSthosvd),
            "sketch" | "sketch-sthosvd" => Ok(Algorithm::SketchSthosvd),
            "subsketch" | "sub-sketch-sthosvd" => Ok(Algorithm::SubSketchSthosvd),
            other => Err(Error::Parameter(format!("unknown algorithm '{other}'"))),
        }
    }
}

/// Target ranks plus the optional knobs of the randomized pipelines.
/// Unset knobs resolve to `p = 5`, `l_n = r_n + 2`, `q = 1` and the natural
/// processing order.
#[derive(Clone, Debug, PartialEq)]
pub struct ApproxConfig {
    pub target_ranks: Vec<usize>,
    /// Permutation of `1..=N`.
    pub processing_order: Option<Vec<usize>>,
    pub oversampling: Option<usize>,
    pub sketch_sizes: Option<Vec<usize>>,
    pub power_q: Option<usize>,
    pub seed: u64,
}

impl ApproxConfig {
    pub fn new(target_ranks: Vec<usize>) -> Self {
        Self {
            target_ranks,
            processing_order: None,
            oversampling: None,
            sketch_sizes: None,
            power_q: None,
            seed: 0,
        }
    }

    pub fn with_order(mut self, order: Vec<usize>) -> Self {
        self.processing_order = Some(order);
        self
    }

    pub fn with_oversampling(mut self, p: usize) -> Self {
        self.oversampling = Some(p);
        self
    }

    pub fn with_sketch_sizes(mut self, l: Vec<usize>) -> Self {
        self.sketch_sizes = Some(l);
        self
    }

    /// `l_n = r_n + extra` for every mode.
    pub fn with_sketch_extra(self, extra: usize) -> Self {
        let l = self.target_ranks.iter().map(|r| r + extra).collect();
        self.with_sketch_sizes(l)
    }

    pub fn with_power_q(mut self, q: usize) -> Self {
        self.power_q = Some(q);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn order(&self) -> Vec<usize> {
        self.processing_order
            .clone()
            .unwrap_or_else(|| (1..=self.target_ranks.len()).collect())
    }

    pub fn oversampling_or_default(&self) -> usize {
        self.oversampling.unwrap_or(DEFAULT_OVERSAMPLING)
    }

    pub fn power_q_or_default(&self) -> usize {
        self.power_q.unwrap_or(DEFAULT_POWER_ITERATIONS)
    }

    /// Sketch size of a mode (1-based). The default `r_n + 2` is capped at `I_n`
    /// when the tensor dimension is known.
    pub fn sketch_size(&self, mode: usize, dim: Option<usize>) -> usize {
        match &self.sketch_sizes {
            Some(l) => l[mode - 1],
            None => {
                let l = self.target_ranks[mode - 1] + DEFAULT_SKETCH_EXTRA;
                dim.map_or(l, |d| l.min(d))
            }
        }
    }

    /// Checks ranks, order and sketch sizes against the tensor dimensions.
    pub fn validate(&self, dims: &[usize]) -> Result<()> {
        let n = dims.len();
        if self.target_ranks.len() != n {
            return Err(Error::InvalidRank(format!(
                "{} ranks given for an order-{} tensor",
                self.target_ranks.len(),
                n
            )));
        }
        for (k, (&r, &d)) in self.target_ranks.iter().zip(dims).enumerate() {
            if r == 0 || r > d {
                return Err(Error::InvalidRank(format!(
                    "rank {} of mode {} must lie in 1..={}",
                    r,
                    k + 1,
                    d
                )));
            }
        }
        let order = self.order();
        let mut seen = vec![false; n];
        if order.len() != n {
            return Err(Error::InvalidOrder(format!("{:?} is not a permutation of 1..={}", order, n)));
        }
        for &m in &order {
            if m == 0 || m > n || seen[m - 1] {
                return Err(Error::InvalidOrder(format!(
                    "{:?} is not a permutation of 1..={}",
                    order, n
                )));
            }
            seen[m - 1] = true;
        }
        if let Some(l) = &self.sketch_sizes {
            if l.len() != n {
                return Err(Error::Parameter(format!(
                    "{} sketch sizes given for an order-{} tensor",
                    l.len(),
                    n
                )));
            }
        }
        Ok(())
    }

    fn validate_sketch(&self, dims: &[usize]) -> Result<()> {
        for (k, (&r, &d)) in self.target_ranks.iter().zip(dims).enumerate() {
            if r == d {
                continue;
            }
            let l = self.sketch_size(k + 1, Some(d));
            if l <= r {
                return Err(Error::Parameter(format!(
                    "mode {}: sketch size {} must exceed rank {}",
                    k + 1,
                    l,
                    r
                )));
            }
            if l > d {
                return Err(Error::Parameter(format!(
                    "mode {}: sketch size {} exceeds dimension {}",
                    k + 1,
                    l,
                    d
                )));
            }
            if l == r + 1 {
                log::warn!(
                    "mode {}: sketch size l = r + 1 makes the expected-error bound infinite",
                    k + 1
                );
            }
        }
        Ok(())
    }
}

/// One factor and the coefficient block that replaces the unfolding.
struct ModeStep {
    factor: DenseMatrix,
    coeffs: DenseMatrix,
}

fn svd_step(g: &DenseMatrix, r: usize) -> Result<ModeStep> {
    let t = truncated_svd(g, r)?;
    let coeffs = t.s_vt();
    Ok(ModeStep {
        factor: t.u,
        coeffs,
    })
}

fn sequential(
    x: &DenseTensor,
    cfg: &ApproxConfig,
    mut step: impl FnMut(usize, &DenseMatrix, usize) -> Result<ModeStep>,
) -> Result<TuckerModel> {
    cfg.validate(x.dims())?;
    let n = x.order();
    let mut factors: Vec<Option<DenseMatrix>> = vec![None; n];
    let mut core = x.clone();
    for mode in cfg.order() {
        let r = cfg.target_ranks[mode - 1];
        let unfolding = core.unfold(mode)?;
        let ModeStep { factor, coeffs } = step(mode, &unfolding, r)?;
        let mut dims = core.dims().to_vec();
        dims[mode - 1] = r;
        core = DenseTensor::fold(&coeffs, mode, &dims)?;
        factors[mode - 1] = Some(factor);
    }
    TuckerModel::new(core, factors.into_iter().map(|f| f.unwrap()).collect())
}

/// Truncated HOSVD: every factor from the unfolding of `X` itself, then the
/// core `X x_1 U1^T ... x_N UN^T`.
pub fn thosvd(x: &DenseTensor, cfg: &ApproxConfig) -> Result<TuckerModel> {
    cfg.validate(x.dims())?;
    let factors = (1..=x.order())
        .map(|n| Ok(truncated_svd(&x.unfold(n)?, cfg.target_ranks[n - 1])?.u))
        .collect::<Result<Vec<_>>>()?;
    let mut core = x.clone();
    for (n, f) in factors.iter().enumerate() {
        core = core.mode_product_transposed(f, n + 1)?;
    }
    TuckerModel::new(core, factors)
}

/// Sequentially truncated HOSVD.
pub fn sthosvd(x: &DenseTensor, cfg: &ApproxConfig) -> Result<TuckerModel> {
    sequential(x, cfg, |_, g, r| svd_step(g, r))
}

/// STHOSVD with a randomized SVD per mode. The oversampling is reduced when
/// `r_n + p` would exceed the current unfolding's smaller dimension.
pub fn r_sthosvd(x: &DenseTensor, cfg: &ApproxConfig, rng: &RngStream) -> Result<TuckerModel> {
    let p = cfg.oversampling_or_default();
    sequential(x, cfg, |mode, g, r| {
        let limit = g.nrows().min(g.ncols());
        if r >= limit {
            return svd_step(g, r);
        }
        let t = rsvd(g, r, p.min(limit - r), &rng.substream(mode as u64))?;
        let coeffs = t.s_vt();
        Ok(ModeStep {
            factor: t.u,
            coeffs,
        })
    })
}

fn sketch_pipeline(x: &DenseTensor, cfg: &ApproxConfig, rng: &RngStream, q: usize) -> Result<TuckerModel> {
    cfg.validate(x.dims())?;
    cfg.validate_sketch(x.dims())?;
    let dims = x.dims().to_vec();
    sequential(x, cfg, |mode, g, r| {
        // Modes kept at full rank (or wider than the remaining columns) are exact.
        if r >= g.nrows() || r >= g.ncols() {
            return svd_step(g, r);
        }
        let l = cfg.sketch_size(mode, Some(dims[mode - 1]));
        let mode_rng = rng.substream(mode as u64);
        let s = if q == 0 {
            sketch(g, r, l, &mode_rng)?
        } else {
            sub_sketch(g, r, l, q, &mode_rng)?
        };
        Ok(ModeStep {
            factor: s.q,
            coeffs: s.xc,
        })
    })
}

/// STHOSVD driven by the two-sided sketch with `k = r_n` and `l = l_n`.
pub fn sketch_sthosvd(x: &DenseTensor, cfg: &ApproxConfig, rng: &RngStream) -> Result<TuckerModel> {
    sketch_pipeline(x, cfg, rng, 0)
}

/// STHOSVD driven by the two-sided sketch with `q >= 1` rounds of subspace
/// power iteration.
pub fn sub_sketch_sthosvd(x: &DenseTensor, cfg: &ApproxConfig, rng: &RngStream) -> Result<TuckerModel> {
    let q = cfg.power_q_or_default();
    if q == 0 {
        return Err(Error::Parameter("power iteration count q must be at least 1".into()));
    }
    sketch_pipeline(x, cfg, rng, q)
}

/// Runs `algo`; randomized pipelines draw from `RngStream::new(cfg.seed)`.
pub fn decompose(x: &DenseTensor, algo: Algorithm, cfg: &ApproxConfig) -> Result<TuckerModel> {
    let rng = RngStream::new(cfg.seed);
    match algo {
        Algorithm::Thosvd => thosvd(x, cfg),
        Algorithm::Sthosvd => sthosvd(x, cfg),
        Algorithm::RSthosvd => r_sthosvd(x, cfg, &rng),
        Algorithm::SketchSthosvd => sketch_sthosvd(x, cfg, &rng),
        Algorithm::SubSketchSthosvd => sub_sketch_sthosvd(x, cfg, &rng),
    }
}
