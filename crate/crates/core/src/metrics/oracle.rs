//! Reference singular values, computed without the production kernels.
//!
//! Householder QR reduces the (transposed if wide) matrix to a square upper
//! triangle, then one-sided Jacobi rotations orthogonalize its columns; the
//! column norms are the singular values. Jacobi delivers high relative
//! accuracy, so small trailing singular values (and hence tail energies) are
//! reliable.

use crate::tensor::DenseMatrix;

/// All `min(m, n)` singular values of `a`, nonincreasing.
pub fn singular_values(a: &DenseMatrix) -> Vec<f64> {
    let (m, n) = a.shape();
    if m == 0 || n == 0 {
        return Vec::new();
    }
    // Tall orientation: rows >= cols.
    let (rows, cols, mut data) = if m >= n {
        (m, n, a.as_slice().to_vec())
    } else {
        (n, m, a.transpose().as_slice().to_vec())
    };
    householder_triangularize(rows, cols, &mut data);
    let mut r = vec![0.0; cols * cols];
    for j in 0..cols {
        for i in 0..=j {
            r[i + cols * j] = data[i + rows * j];
        }
    }
    let mut s = jacobi_column_norms(cols, &mut r);
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

/// Overwrites the upper triangle of the column-major `rows x cols` buffer with R.
fn householder_triangularize(rows: usize, cols: usize, a: &mut [f64]) {
    let mut v = vec![0.0; rows];
    for j in 0..cols {
        let col = &a[rows * j..rows * (j + 1)];
        let norm = col[j..].iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let alpha = if col[j] > 0.0 { -norm } else { norm };
        let len = rows - j;
        v[..len].copy_from_slice(&col[j..]);
        v[0] -= alpha;
        let vnorm_sq: f64 = v[..len].iter().map(|x| x * x).sum();
        if vnorm_sq == 0.0 {
            continue;
        }
        for c in j..cols {
            let target = &mut a[rows * c + j..rows * (c + 1)];
            let dot: f64 = target.iter().zip(&v[..len]).map(|(x, y)| x * y).sum();
            let scale = 2.0 * dot / vnorm_sq;
            for (t, vi) in target.iter_mut().zip(&v[..len]) {
                *t -= scale * vi;
            }
        }
    }
}

/// Hestenes one-sided Jacobi on a square column-major buffer; returns column norms.
fn jacobi_column_norms(n: usize, a: &mut [f64]) -> Vec<f64> {
    const MAX_SWEEPS: usize = 80;
    let tol = f64::EPSILON * n as f64;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (alpha, beta, gamma) = {
                    let cp = &a[n * p..n * (p + 1)];
                    let cq = &a[n * q..n * (q + 1)];
                    let mut alpha = 0.0;
                    let mut beta = 0.0;
                    let mut gamma = 0.0;
                    for (x, y) in cp.iter().zip(cq) {
                        alpha += x * x;
                        beta += y * y;
                        gamma += x * y;
                    }
                    (alpha, beta, gamma)
                };
                if gamma == 0.0 || gamma.abs() <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..n {
                    let x = a[n * p + i];
                    let y = a[n * q + i];
                    a[n * p + i] = c * x - s * y;
                    a[n * q + i] = s * x + c * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    (0..n)
        .map(|j| a[n * j..n * (j + 1)].iter().map(|x| x * x).sum::<f64>().sqrt())
        .collect()
}
