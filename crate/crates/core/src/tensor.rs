//! Dense N-way tensors and the multilinear primitives the pipelines are built on.
//!
//! Storage is column-major (first index fastest). With that layout the mode-n
//! unfolding places element `(i_1, ..., i_N)` at row `i_n` and column
//! `sum_{k != n} i_k * prod_{m < k, m != n} I_m` (0-based), so the mode-1
//! unfolding is the storage itself.
//!
//! Mode indices are 1-based everywhere in the public API; element index tuples
//! are 0-based.

use nalgebra::{DMatrix, DMatrixView, DMatrixViewMut};

use crate::error::{Error, Result};

pub type DenseMatrix = DMatrix<f64>;

#[derive(Clone, Debug, PartialEq)]
pub struct DenseTensor {
    dims: Vec<usize>,
    data: Vec<f64>,
}

fn check_dims(dims: &[usize]) -> Result<usize> {
    if dims.is_empty() {
        return Err(Error::InvalidDims("a tensor needs at least one mode".into()));
    }
    if let Some(pos) = dims.iter().position(|&d| d == 0) {
        return Err(Error::InvalidDims(format!("mode {} has size 0", pos + 1)));
    }
    Ok(dims.iter().product())
}

impl DenseTensor {
    pub fn new(dims: Vec<usize>, data: Vec<f64>) -> Result<Self> {
        let len = check_dims(&dims)?;
        if data.len() != len {
            return Err(Error::ShapeMismatch(format!(
                "dims {:?} need {} entries, got {}",
                dims,
                len,
                data.len()
            )));
        }
        Ok(Self { dims, data })
    }

    pub fn zeros(dims: &[usize]) -> Result<Self> {
        let len = check_dims(dims)?;
        Ok(Self {
            dims: dims.to_vec(),
            data: vec![0.0; len],
        })
    }

    /// Builds a tensor by evaluating `f` at every 0-based multi-index, in storage order.
    pub fn from_fn(dims: &[usize], mut f: impl FnMut(&[usize]) -> f64) -> Result<Self> {
        let len = check_dims(dims)?;
        let mut data = Vec::with_capacity(len);
        let mut idx = vec![0usize; dims.len()];
        for _ in 0..len {
            data.push(f(&idx));
            for (k, i) in idx.iter_mut().enumerate() {
                *i += 1;
                if *i < dims[k] {
                    break;
                }
                *i = 0;
            }
        }
        Ok(Self {
            dims: dims.to_vec(),
            data,
        })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn order(&self) -> usize {
        self.dims.len()
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn offset(&self, index: &[usize]) -> usize {
        debug_assert_eq!(index.len(), self.dims.len());
        let mut off = 0;
        let mut stride = 1;
        for (&i, &d) in index.iter().zip(&self.dims) {
            debug_assert!(i < d);
            off += i * stride;
            stride *= d;
        }
        off
    }

    pub fn get(&self, index: &[usize]) -> f64 {
        self.data[self.offset(index)]
    }

    pub fn set(&mut self, index: &[usize], value: f64) {
        let off = self.offset(index);
        self.data[off] = value;
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn norm_sq(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum()
    }

    /// Squared Frobenius distance `||self - other||_F^2`.
    pub fn distance_sq(&self, other: &DenseTensor) -> Result<f64> {
        self.same_shape(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b) * (a - b))
            .sum())
    }

    pub fn sub(&self, other: &DenseTensor) -> Result<DenseTensor> {
        self.same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(DenseTensor {
            dims: self.dims.clone(),
            data,
        })
    }

    pub fn add(&self, other: &DenseTensor) -> Result<DenseTensor> {
        self.same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(DenseTensor {
            dims: self.dims.clone(),
            data,
        })
    }

    pub fn scaled(&self, factor: f64) -> DenseTensor {
        self.map(|v| v * factor)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> DenseTensor {
        DenseTensor {
            dims: self.dims.clone(),
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    fn same_shape(&self, other: &DenseTensor) -> Result<()> {
        if self.dims != other.dims {
            return Err(Error::ShapeMismatch(format!(
                "{:?} vs {:?}",
                self.dims, other.dims
            )));
        }
        Ok(())
    }

    fn check_mode(&self, mode: usize) -> Result<()> {
        if mode == 0 || mode > self.dims.len() {
            return Err(Error::ModeOutOfRange {
                mode,
                order: self.dims.len(),
            });
        }
        Ok(())
    }

    /// (product of dims before `mode`, dim of `mode`, product after `mode`).
    fn split(dims: &[usize], mode: usize) -> (usize, usize, usize) {
        let left = dims[..mode - 1].iter().product();
        let size = dims[mode - 1];
        let right = dims[mode..].iter().product();
        (left, size, right)
    }

    /// Mode-`mode` unfolding, an `I_n x prod_{k != n} I_k` matrix.
    pub fn unfold(&self, mode: usize) -> Result<DenseMatrix> {
        self.check_mode(mode)?;
        let (left, size, right) = Self::split(&self.dims, mode);
        let cols = left * right;
        if left == 1 {
            return Ok(DenseMatrix::from_column_slice(size, cols, &self.data));
        }
        let mut out = vec![0.0; self.data.len()];
        for r in 0..right {
            for i in 0..size {
                let src = &self.data[left * (i + size * r)..][..left];
                let col0 = left * r;
                for (l, &v) in src.iter().enumerate() {
                    out[i + size * (col0 + l)] = v;
                }
            }
        }
        Ok(DenseMatrix::from_vec(size, cols, out))
    }

    /// Inverse of [`DenseTensor::unfold`]: tensorizes a mode-`mode` unfolding into `dims`.
    pub fn fold(matrix: &DenseMatrix, mode: usize, dims: &[usize]) -> Result<DenseTensor> {
        let len = check_dims(dims)?;
        if mode == 0 || mode > dims.len() {
            return Err(Error::ModeOutOfRange {
                mode,
                order: dims.len(),
            });
        }
        let (left, size, right) = Self::split(dims, mode);
        if matrix.nrows() != size || matrix.ncols() != left * right {
            return Err(Error::ShapeMismatch(format!(
                "a {}x{} matrix cannot fold along mode {} into {:?}",
                matrix.nrows(),
                matrix.ncols(),
                mode,
                dims
            )));
        }
        let src = matrix.as_slice();
        if left == 1 {
            return Ok(DenseTensor {
                dims: dims.to_vec(),
                data: src.to_vec(),
            });
        }
        let mut data = vec![0.0; len];
        for r in 0..right {
            for i in 0..size {
                let dst = &mut data[left * (i + size * r)..][..left];
                let col0 = left * r;
                for (l, v) in dst.iter_mut().enumerate() {
                    *v = src[i + size * (col0 + l)];
                }
            }
        }
        Ok(DenseTensor {
            dims: dims.to_vec(),
            data,
        })
    }

    /// Mode-n product `self x_n a`, replacing `I_n` by `a.nrows()`.
    pub fn mode_product(&self, a: &DenseMatrix, mode: usize) -> Result<DenseTensor> {
        self.check_mode(mode)?;
        let (left, size, right) = Self::split(&self.dims, mode);
        if a.ncols() != size {
            return Err(Error::ShapeMismatch(format!(
                "mode-{} product needs a matrix with {} columns, got {}x{}",
                mode,
                size,
                a.nrows(),
                a.ncols()
            )));
        }
        let k = a.nrows();
        let mut dims = self.dims.clone();
        dims[mode - 1] = k;
        if k == 0 {
            return Err(Error::InvalidDims("mode product with an empty matrix".into()));
        }
        let mut data = vec![0.0; left * k * right];
        if left == 1 {
            let x = DMatrixView::from_slice(&self.data, size, right);
            let mut y = DMatrixViewMut::from_slice(&mut data, k, right);
            y.gemm(1.0, a, &x, 0.0);
        } else {
            let at = a.transpose();
            for r in 0..right {
                let x = DMatrixView::from_slice(&self.data[left * size * r..][..left * size], left, size);
                let mut y = DMatrixViewMut::from_slice(&mut data[left * k * r..][..left * k], left, k);
                y.gemm(1.0, &x, &at, 0.0);
            }
        }
        Ok(DenseTensor { dims, data })
    }

    /// Mode-n product with the transpose of `a`, i.e. `self x_n a^T`.
    pub fn mode_product_transposed(&self, a: &DenseMatrix, mode: usize) -> Result<DenseTensor> {
        self.mode_product(&a.transpose(), mode)
    }
}

/// Kronecker product `a ⊗ b`; block `(i, j)` is `a[(i, j)] * b`.
pub fn kronecker(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    a.kronecker(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;

    fn random_tensor(dims: &[usize], seed: u64) -> DenseTensor {
        let mut rng = RngStream::new(seed);
        DenseTensor::from_fn(dims, |_| rng.next_gaussian()).unwrap()
    }

    /// Direct transcription of the 1-based unfolding column formula.
    fn column_index_one_based(idx1: &[usize], dims: &[usize], n: usize) -> usize {
        let mut j = 1;
        for k in 1..=dims.len() {
            if k == n {
                continue;
            }
            let prod: usize = (1..k).filter(|&m| m != n).map(|m| dims[m - 1]).product();
            j += (idx1[k - 1] - 1) * prod;
        }
        j
    }

    #[test]
    fn unfold_places_element_by_index_formula() {
        let dims = [2, 3, 2];
        let x = DenseTensor::from_fn(&dims, |i| (100 * i[0] + 10 * i[1] + i[2]) as f64).unwrap();
        let m = x.unfold(2).unwrap();
        assert_eq!((m.nrows(), m.ncols()), (3, 4));
        // element (2,3,1) in 1-based indexing
        assert_eq!(column_index_one_based(&[2, 3, 1], &dims, 2), 2);
        assert_eq!(m[(2, 1)], x.get(&[1, 2, 0]));

        for n in 1..=3 {
            let m = x.unfold(n).unwrap();
            for a in 0..2 {
                for b in 0..3 {
                    for c in 0..2 {
                        let idx = [a, b, c];
                        let one = [a + 1, b + 1, c + 1];
                        let j = column_index_one_based(&one, &dims, n);
                        assert_eq!(m[(idx[n - 1], j - 1)], x.get(&idx));
                    }
                }
            }
        }
    }

    #[test]
    fn first_order_unfold_is_column() {
        let x = DenseTensor::new(vec![4], vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let m = x.unfold(1).unwrap();
        assert_eq!((m.nrows(), m.ncols()), (4, 1));
        assert_eq!(m.as_slice(), x.data());
    }

    #[test]
    fn unfold_fold_round_trip_exact() {
        let dims = [3, 4, 5];
        let x = DenseTensor::from_fn(&dims, {
            let mut c = 0.0;
            move |_| {
                c += 1.0;
                c - 1.0
            }
        })
        .unwrap();
        for n in 1..=3 {
            let back = DenseTensor::fold(&x.unfold(n).unwrap(), n, &dims).unwrap();
            assert_eq!(back, x);
        }
        let y = random_tensor(&[4, 3, 2], 5);
        let back = DenseTensor::fold(&y.unfold(2).unwrap(), 2, y.dims()).unwrap();
        assert_eq!(back, y);
    }

    #[test]
    fn fold_edge_cases() {
        let m = DenseMatrix::from_column_slice(2, 1, &[1.5, -2.0]);
        let t = DenseTensor::fold(&m, 1, &[2]).unwrap();
        assert_eq!(t.data(), &[1.5, -2.0]);

        let z = DenseTensor::fold(&DenseMatrix::zeros(2, 6), 1, &[2, 3, 2]).unwrap();
        assert!(z.data().iter().all(|&v| v == 0.0));
        assert_eq!(z.dims(), &[2, 3, 2]);

        assert!(matches!(
            DenseTensor::fold(&DenseMatrix::zeros(2, 5), 1, &[2, 3, 2]),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn mode_out_of_range() {
        let x = random_tensor(&[2, 2], 1);
        assert!(matches!(x.unfold(0), Err(Error::ModeOutOfRange { .. })));
        assert!(matches!(x.unfold(3), Err(Error::ModeOutOfRange { .. })));
    }

    #[test]
    fn invalid_construction() {
        assert!(DenseTensor::new(vec![2, 2], vec![0.0; 3]).is_err());
        assert!(DenseTensor::new(vec![], vec![]).is_err());
        assert!(DenseTensor::zeros(&[2, 0]).is_err());
    }

    #[test]
    fn mode_product_identity_and_ones() {
        let x = random_tensor(&[3, 4, 2], 2);
        for n in 1..=3 {
            let id = DenseMatrix::identity(x.dims()[n - 1], x.dims()[n - 1]);
            assert_eq!(x.mode_product(&id, n).unwrap(), x);
        }
        let ones = DenseTensor::from_fn(&[2, 2, 2], |_| 1.0).unwrap();
        let y = ones.mode_product(&DenseMatrix::from_element(1, 2, 1.0), 1).unwrap();
        assert_eq!(y.dims(), &[1, 2, 2]);
        assert!(y.data().iter().all(|&v| v == 2.0));
    }

    #[test]
    fn mode_product_matches_triple_loop() {
        let x = random_tensor(&[3, 4, 5], 3);
        let mut rng = RngStream::new(4);
        let a = DenseMatrix::from_fn(2, 4, |_, _| rng.next_gaussian());
        let y = x.mode_product(&a, 2).unwrap();
        assert_eq!(y.dims(), &[3, 2, 5]);
        let mut max_diff: f64 = 0.0;
        for i in 0..3 {
            for k in 0..2 {
                for l in 0..5 {
                    let mut s = 0.0;
                    for j in 0..4 {
                        s += x.get(&[i, j, l]) * a[(k, j)];
                    }
                    max_diff = max_diff.max((s - y.get(&[i, k, l])).abs());
                }
            }
        }
        assert!(max_diff < 1e-13);
        let via_unfold = DenseTensor::fold(&(&a * x.unfold(2).unwrap()), 2, &[3, 2, 5]).unwrap();
        assert!(via_unfold.distance_sq(&y).unwrap().sqrt() < 1e-13);
    }

    #[test]
    fn mode_product_shape_error() {
        let x = random_tensor(&[3, 4], 3);
        assert!(matches!(
            x.mode_product(&DenseMatrix::zeros(2, 3), 2),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn frobenius_norm_cases() {
        let ones = DenseTensor::from_fn(&[2, 2, 2], |_| 1.0).unwrap();
        assert_eq!(ones.frobenius_norm(), 8f64.sqrt());
        assert_eq!(DenseTensor::zeros(&[3, 3]).unwrap().frobenius_norm(), 0.0);
        let x = random_tensor(&[3, 4, 5], 8);
        // same entries, different summation order
        for n in 1..=3 {
            let m = x.unfold(n).unwrap().norm();
            assert!((m - x.frobenius_norm()).abs() <= 1e-14 * m);
        }
    }

    #[test]
    fn kronecker_small_cases() {
        let i2 = DenseMatrix::identity(2, 2);
        assert_eq!(kronecker(&i2, &i2), DenseMatrix::identity(4, 4));
        let a = DenseMatrix::from_row_slice(2, 3, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        assert_eq!(kronecker(&a, &DenseMatrix::from_element(1, 1, 1.0)), a);
        let b = DenseMatrix::from_row_slice(1, 2, &[1.0, -1.0]);
        let k = kronecker(&a, &b);
        assert_eq!((k.nrows(), k.ncols()), (2, 6));
        assert_eq!(k[(1, 4)], 6.0);
        assert_eq!(k[(1, 5)], -6.0);
    }
}
