//! Dense factorization kernels and randomized low-rank matrix approximations.
//!
//! The deterministic kernels (thin QR, thin SVD) sit on nalgebra's Householder
//! QR and Golub–Kahan SVD. Strongly rectangular inputs are QR-reduced first so
//! the SVD only ever runs on a square factor.
//!
//! The randomized routines are:
//! - [`rsvd`]: range finder with oversampling followed by an SVD of the projection.
//! - [`sketch`]: two-sided sketch `A ≈ Q X` with `Y = AΩ`, `W = ΨA`, `X = (ΨQ)^† W`.
//! - [`sub_sketch`]: the same two-sided sketch with `q` rounds of re-orthonormalized
//!   subspace power iteration on the column sketch.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::tensor::DenseMatrix;

const EPS: f64 = f64::EPSILON;

#[derive(Clone, Debug)]
pub struct SvdTriple {
    pub u: DenseMatrix,
    /// Nonincreasing, nonnegative.
    pub s: Vec<f64>,
    pub v: DenseMatrix,
}

impl SvdTriple {
    /// `diag(s) * v^T`, the coefficient block that replaces an unfolding in the
    /// sequential pipelines.
    pub fn s_vt(&self) -> DenseMatrix {
        let k = self.s.len();
        DenseMatrix::from_fn(k, self.v.nrows(), |i, j| self.s[i] * self.v[(j, i)])
    }

    pub fn reconstruct(&self) -> DenseMatrix {
        &self.u * self.s_vt()
    }
}

#[derive(Clone, Debug)]
pub struct SketchResult {
    /// Orthonormal basis, `m x k`.
    pub q: DenseMatrix,
    /// Correction factor, `k x n`; the approximation is `q * xc`.
    pub xc: DenseMatrix,
    /// Set when `ΨQ` was numerically rank deficient and the solve fell back to
    /// the minimum-norm solution.
    pub rank_deficient_solve: bool,
}

impl SketchResult {
    pub fn approximation(&self) -> DenseMatrix {
        &self.q * &self.xc
    }
}

pub fn gaussian_matrix(rng: &mut RngStream, rows: usize, cols: usize) -> DenseMatrix {
    let mut data = vec![0.0; rows * cols];
    rng.fill_gaussian(&mut data);
    DenseMatrix::from_vec(rows, cols, data)
}

/// Economy QR with a nonnegative diagonal in `R`.
///
/// For `rows >= cols`, `Q` is `rows x cols`; otherwise `Q` is square and `R`
/// is `rows x cols` upper trapezoidal.
pub fn thin_qr(a: &DenseMatrix) -> (DenseMatrix, DenseMatrix) {
    let qr = a.clone().qr();
    let mut q = qr.q();
    let mut r = qr.r();
    for i in 0..r.nrows().min(r.ncols()) {
        if r[(i, i)] < 0.0 {
            r.row_mut(i).neg_mut();
            q.column_mut(i).neg_mut();
        }
    }
    (q, r)
}

/// Orthonormal basis for the column space of `a`, sized to its numerical rank.
pub fn orthonormalize(a: &DenseMatrix) -> DenseMatrix {
    let (m, n) = a.shape();
    if m == 0 || n == 0 {
        return DenseMatrix::zeros(m, 0);
    }
    let (q, r) = thin_qr(a);
    let k = r.nrows().min(r.ncols());
    let largest = (0..k).map(|i| r[(i, i)].abs()).fold(0.0, f64::max);
    if largest == 0.0 {
        return DenseMatrix::zeros(m, 0);
    }
    let tol = m.max(n) as f64 * EPS * largest;
    if (0..k).all(|i| r[(i, i)].abs() > tol) {
        return q;
    }
    // Unpivoted QR is not rank revealing; let the SVD decide.
    let svd = thin_svd(a);
    let cut = m.max(n) as f64 * EPS * svd.s[0];
    let rank = svd.s.iter().take_while(|&&s| s > cut).count();
    svd.u.columns(0, rank).into_owned()
}

/// Thin SVD: `min(m, n)` triplets, singular values sorted nonincreasing.
pub fn thin_svd(a: &DenseMatrix) -> SvdTriple {
    let (m, n) = a.shape();
    if m == 0 || n == 0 {
        return SvdTriple {
            u: DenseMatrix::zeros(m, 0),
            s: Vec::new(),
            v: DenseMatrix::zeros(n, 0),
        };
    }
    if n >= 2 * m {
        let t = thin_svd(&a.transpose());
        return SvdTriple {
            u: t.v,
            s: t.s,
            v: t.u,
        };
    }
    if m >= 2 * n {
        let (q, r) = thin_qr(a);
        let inner = square_svd(&r);
        return SvdTriple {
            u: q * inner.u,
            s: inner.s,
            v: inner.v,
        };
    }
    square_svd(a)
}

fn square_svd(a: &DenseMatrix) -> SvdTriple {
    let svd = a.clone().svd(true, true);
    let u = svd.u.expect("left singular vectors requested");
    let vt = svd.v_t.expect("right singular vectors requested");
    let s = svd.singular_values;
    let k = s.len();
    let mut perm: Vec<usize> = (0..k).collect();
    perm.sort_by(|&i, &j| s[j].total_cmp(&s[i]));
    SvdTriple {
        u: DMatrix::from_fn(u.nrows(), k, |r, c| u[(r, perm[c])]),
        s: perm.iter().map(|&i| s[i].max(0.0)).collect(),
        v: DMatrix::from_fn(vt.ncols(), k, |r, c| vt[(perm[c], r)]),
    }
}

/// Extends the orthonormal columns of `u` to `target` orthonormal columns.
pub(crate) fn complete_basis(u: &DenseMatrix, target: usize) -> DenseMatrix {
    let m = u.nrows();
    assert!(target <= m, "cannot fit {target} orthonormal columns in R^{m}");
    let mut cols: Vec<nalgebra::DVector<f64>> = u.column_iter().map(|c| c.into_owned()).collect();
    let mut e = 0;
    while cols.len() < target && e < m {
        let mut v = nalgebra::DVector::zeros(m);
        v[e] = 1.0;
        e += 1;
        for _ in 0..2 {
            for c in &cols {
                let d = c.dot(&v);
                v.axpy(-d, c, 1.0);
            }
        }
        let norm = v.norm();
        if norm > 0.5 {
            cols.push(v / norm);
        }
    }
    DenseMatrix::from_columns(&cols)
}

/// The `r` leading singular triplets of `a`.
///
/// When `r > min(m, n)` the triple is padded with zero singular values, `U` is
/// completed to `r` orthonormal columns, and `V` is completed as far as its row
/// count allows (remaining columns are zero; they only meet zero singular
/// values). `r` may not exceed the row count.
pub fn truncated_svd(a: &DenseMatrix, r: usize) -> Result<SvdTriple> {
    let (m, n) = a.shape();
    if r == 0 {
        return Err(Error::InvalidRank("truncation rank must be at least 1".into()));
    }
    if r > m {
        return Err(Error::InvalidRank(format!(
            "rank {r} exceeds the {m} rows of the matrix"
        )));
    }
    let full = thin_svd(a);
    let k = m.min(n);
    if r <= k {
        return Ok(SvdTriple {
            u: full.u.columns(0, r).into_owned(),
            s: full.s[..r].to_vec(),
            v: full.v.columns(0, r).into_owned(),
        });
    }
    let u = complete_basis(&full.u, r);
    let v_basis = complete_basis(&full.v, r.min(n));
    let mut v = DenseMatrix::zeros(n, r);
    v.columns_mut(0, v_basis.ncols()).copy_from(&v_basis);
    let mut s = full.s;
    s.resize(r, 0.0);
    Ok(SvdTriple { u, s, v })
}

/// Randomized SVD with oversampling `p`: `Ω ~ N(0,1)^{n x (r+p)}`, `Q = qr(AΩ)`,
/// SVD of `Q^T A` truncated to rank `r`.
pub fn rsvd(a: &DenseMatrix, r: usize, p: usize, rng: &RngStream) -> Result<SvdTriple> {
    let (m, n) = a.shape();
    if r == 0 {
        return Err(Error::InvalidRank("rsvd rank must be at least 1".into()));
    }
    if r + p > m.min(n) {
        return Err(Error::Parameter(format!(
            "rsvd needs r + p <= min(m, n), got r={r}, p={p} for a {m}x{n} matrix"
        )));
    }
    let omega = gaussian_matrix(&mut rng.substream(0), n, r + p);
    let y = a * omega;
    let (q, _) = thin_qr(&y);
    let b = q.transpose() * a;
    let small = thin_svd(&b);
    Ok(SvdTriple {
        u: &q * small.u.columns(0, r),
        s: small.s[..r].to_vec(),
        v: small.v.columns(0, r).into_owned(),
    })
}

fn check_sketch_sizes(m: usize, n: usize, k: usize, l: usize) -> Result<()> {
    if k == 0 || l == 0 {
        return Err(Error::Parameter("sketch sizes k and l must be positive".into()));
    }
    if k > l.min(n) {
        return Err(Error::Parameter(format!(
            "sketch needs k <= min(l, n), got k={k}, l={l}, n={n}"
        )));
    }
    if l > m {
        return Err(Error::Parameter(format!(
            "sketch needs l <= m, got l={l}, m={m}"
        )));
    }
    Ok(())
}

/// Two-sided sketch `A ≈ Q X` with column sketch size `k` and row sketch size `l`.
///
/// Draws `Ω` from `rng.substream(0)` and `Ψ` from `rng.substream(1)`; both are
/// orthonormalized before use.
pub fn sketch(a: &DenseMatrix, k: usize, l: usize, rng: &RngStream) -> Result<SketchResult> {
    two_sided(a, k, l, 0, rng)
}

/// [`sketch`] with `q` rounds of subspace power iteration applied to the
/// column basis. `q = 0` performs exactly the same computation as [`sketch`].
pub fn sub_sketch(
    a: &DenseMatrix,
    k: usize,
    l: usize,
    q: usize,
    rng: &RngStream,
) -> Result<SketchResult> {
    two_sided(a, k, l, q, rng)
}

fn two_sided(a: &DenseMatrix, k: usize, l: usize, power: usize, rng: &RngStream) -> Result<SketchResult> {
    let (m, n) = a.shape();
    check_sketch_sizes(m, n, k, l)?;
    let omega = orthonormalize(&gaussian_matrix(&mut rng.substream(0), n, k));
    let psi = orthonormalize(&gaussian_matrix(&mut rng.substream(1), m, l)).transpose();
    let y = a * &omega;
    let w = &psi * a;
    let (mut q, _) = thin_qr(&y);
    for _ in 0..power {
        let (q_hat, _) = thin_qr(&(a.tr_mul(&q)));
        let (q_next, _) = thin_qr(&(a * &q_hat));
        q = q_next;
    }
    let (xc, rank_deficient_solve) = least_squares(&(&psi * &q), &w);
    if rank_deficient_solve {
        log::warn!("sketch: ΨQ is numerically rank deficient, using the minimum-norm solve");
    }
    Ok(SketchResult {
        q,
        xc,
        rank_deficient_solve,
    })
}

/// Solves `min ||B X - W||_F` for tall `B` through its QR factorization.
/// Falls back to the minimum-norm SVD solution when `B` is rank deficient;
/// the flag reports the fallback.
pub fn least_squares(b: &DenseMatrix, w: &DenseMatrix) -> (DenseMatrix, bool) {
    let (rows, k) = b.shape();
    debug_assert_eq!(rows, w.nrows());
    if rows >= k && k > 0 {
        let (q, r) = thin_qr(b);
        let largest = (0..k).map(|i| r[(i, i)].abs()).fold(0.0, f64::max);
        let tol = rows.max(k) as f64 * EPS * largest;
        if largest > 0.0 && (0..k).all(|i| r[(i, i)].abs() > tol) {
            let qtw = q.tr_mul(w);
            if let Some(x) = r.solve_upper_triangular(&qtw) {
                return (x, false);
            }
        }
    }
    let svd = thin_svd(b);
    let cut = rows.max(k) as f64 * EPS * svd.s.first().copied().unwrap_or(0.0);
    let utw = svd.u.tr_mul(w);
    let mut x = DenseMatrix::zeros(k, w.ncols());
    for (i, &s) in svd.s.iter().enumerate() {
        if s > cut && s > 0.0 {
            let coeff = utw.row(i) / s;
            x += svd.v.column(i) * coeff;
        }
    }
    (x, true)
}
