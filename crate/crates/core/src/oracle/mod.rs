//! Dense brute-force reference implementations.
//!
//! Everything here evaluates the defining sums literally over the full
//! index space in double precision. Nothing calls into the sparse kernels;
//! the only shared pieces are the tensor and matrix containers. Sizes are
//! capped at [`SIZE_LIMIT`] elements.

use crate::error::{Error, Result};
use crate::kernels::{ElementOp, ScalarOp};
use crate::tensor::{DenseMatrix, Index, SparseTensor};
use crate::value::Value;

/// Largest dense tensor the oracles will materialize.
pub const SIZE_LIMIT: u128 = 10_000_000;

/// Dense double-precision tensor, row-major with the last mode fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseTensor {
    dims: Vec<usize>,
    data: Vec<f64>,
}

impl DenseTensor {
    pub fn zeros(dims: &[usize]) -> Result<Self> {
        let size = dims.iter().map(|&d| d as u128).product::<u128>();
        if size > SIZE_LIMIT {
            return Err(Error::SizeGuard {
                size,
                limit: SIZE_LIMIT,
            });
        }
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::InvalidTensor(format!("dense shape {dims:?}")));
        }
        Ok(DenseTensor {
            dims: dims.to_vec(),
            data: vec![0.0; size as usize],
        })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn order(&self) -> usize {
        self.dims.len()
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn offset(&self, idx: &[usize]) -> usize {
        idx.iter()
            .zip(&self.dims)
            .fold(0, |acc, (&i, &d)| acc * d + i)
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        self.data[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: f64) {
        let o = self.offset(idx);
        self.data[o] = v;
    }

    /// Element-wise absolute value.
    pub fn abs(&self) -> Self {
        DenseTensor {
            dims: self.dims.clone(),
            data: self.data.iter().map(|v| v.abs()).collect(),
        }
    }

    /// Value at `idx`, or zero outside the tensor's shape.
    fn get_padded(&self, idx: &[usize]) -> f64 {
        if idx.iter().zip(&self.dims).all(|(&i, &d)| i < d) {
            self.get(idx)
        } else {
            0.0
        }
    }
}

/// Calls `f` on every multi-index of `dims` in row-major order.
fn for_each_index(dims: &[usize], mut f: impl FnMut(&[usize])) {
    if dims.contains(&0) {
        return;
    }
    let mut idx = vec![0usize; dims.len()];
    loop {
        f(&idx);
        let mut d = dims.len();
        loop {
            if d == 0 {
                return;
            }
            d -= 1;
            idx[d] += 1;
            if idx[d] < dims[d] {
                break;
            }
            idx[d] = 0;
        }
    }
}

/// Accumulates all stored entries (duplicates add up).
pub fn densify<V: Value>(t: &SparseTensor<V>) -> Result<DenseTensor> {
    let mut d = DenseTensor::zeros(t.dims())?;
    for m in 0..t.nnz() {
        let idx: Vec<usize> = t.indices().iter().map(|inds| inds[m] as usize).collect();
        let o = d.offset(&idx);
        d.data[o] += t.values()[m].as_f64();
    }
    Ok(d)
}

/// Extracts the non-zero elements, sorted in ascending mode order.
pub fn sparsify<V: Value>(d: &DenseTensor) -> Result<SparseTensor<V>> {
    let mut entries = Vec::new();
    for_each_index(&d.dims, |idx| {
        let v = d.get(idx);
        if v != 0.0 {
            let tuple: Vec<Index> = idx.iter().map(|&i| i as Index).collect();
            entries.push((tuple, V::from_f64(v)));
        }
    });
    let ascending: Vec<usize> = (0..d.order()).collect();
    SparseTensor::from_entries(d.dims.clone(), entries)?.sorted(&ascending)
}

/// Element-wise operation on the union shape (per-mode maxima), treating
/// elements outside either operand as zero. `0 / 0` is taken as an implicit
/// zero.
pub fn dense_tew(x: &DenseTensor, y: &DenseTensor, op: ElementOp) -> Result<DenseTensor> {
    if x.order() != y.order() {
        return Err(Error::ShapeMismatch("orders differ".into()));
    }
    let dims: Vec<usize> = x
        .dims
        .iter()
        .zip(&y.dims)
        .map(|(&a, &b)| a.max(b))
        .collect();
    let mut z = DenseTensor::zeros(&dims)?;
    for_each_index(&dims, |idx| {
        let (a, b) = (x.get_padded(idx), y.get_padded(idx));
        let v = match op {
            ElementOp::Add => a + b,
            ElementOp::Sub => a - b,
            ElementOp::Mul => a * b,
            ElementOp::Div if a == 0.0 && b == 0.0 => 0.0,
            ElementOp::Div => a / b,
        };
        let o = z.offset(idx);
        z.data[o] = v;
    });
    Ok(z)
}

/// Applies the scalar to the non-zero elements only.
pub fn dense_ts(x: &DenseTensor, s: f64, op: ScalarOp) -> DenseTensor {
    let data = x
        .data
        .iter()
        .map(|&v| match op {
            _ if v == 0.0 => 0.0,
            ScalarOp::Add => v + s,
            ScalarOp::Mul => v * s,
        })
        .collect();
    DenseTensor {
        dims: x.dims.clone(),
        data,
    }
}

fn check_mode(x: &DenseTensor, mode: usize) -> Result<()> {
    if mode >= x.order() {
        return Err(Error::InvalidMode {
            mode,
            order: x.order(),
        });
    }
    Ok(())
}

/// `y[.., i_{n-1}, i_{n+1}, ..] = sum_{i_n} x[.., i_n, ..] * v[i_n]`.
pub fn dense_ttv(x: &DenseTensor, v: &[f64], mode: usize) -> Result<DenseTensor> {
    check_mode(x, mode)?;
    if x.order() < 2 || v.len() != x.dims[mode] {
        return Err(Error::ShapeMismatch("dense_ttv operand shapes".into()));
    }
    let out_dims: Vec<usize> = (0..x.order())
        .filter(|&d| d != mode)
        .map(|d| x.dims[d])
        .collect();
    let mut y = DenseTensor::zeros(&out_dims)?;
    for_each_index(&out_dims, |oidx| {
        let mut full: Vec<usize> = oidx.to_vec();
        full.insert(mode, 0);
        let mut sum = 0.0;
        for (i, &w) in v.iter().enumerate() {
            full[mode] = i;
            sum += x.get(&full) * w;
        }
        y.set(oidx, sum);
    });
    Ok(y)
}

/// `y[.., r, ..] = sum_{i_n} x[.., i_n, ..] * u[i_n, r]` with `u` of shape
/// `I_n x R`.
pub fn dense_ttm(x: &DenseTensor, u: &DenseMatrix<f64>, mode: usize) -> Result<DenseTensor> {
    check_mode(x, mode)?;
    if u.rows() != x.dims[mode] {
        return Err(Error::ShapeMismatch("dense_ttm operand shapes".into()));
    }
    let mut out_dims = x.dims.clone();
    out_dims[mode] = u.cols();
    let mut y = DenseTensor::zeros(&out_dims)?;
    for_each_index(&out_dims, |oidx| {
        let r = oidx[mode];
        let mut full = oidx.to_vec();
        let mut sum = 0.0;
        for i in 0..x.dims[mode] {
            full[mode] = i;
            sum += x.get(&full) * u.get(i, r);
        }
        y.set(oidx, sum);
    });
    Ok(y)
}

/// `out[i_n, r] = sum over all other indices of x[..] * prod_{d != n} U_d[i_d, r]`,
/// evaluated over the full index space.
pub fn dense_mttkrp(
    x: &DenseTensor,
    factors: &[DenseMatrix<f64>],
    mode: usize,
) -> Result<DenseMatrix<f64>> {
    check_mode(x, mode)?;
    let rank = check_dense_factors(x, factors, mode)?;
    let mut out = DenseMatrix::zeros(x.dims[mode], rank);
    for_each_index(&x.dims, |idx| {
        let v = x.get(idx);
        for r in 0..rank {
            let mut term = v;
            for (d, f) in factors.iter().enumerate() {
                if d != mode {
                    term *= f.get(idx[d], r);
                }
            }
            let cur = out.get(idx[mode], r);
            out.set(idx[mode], r, cur + term);
        }
    });
    Ok(out)
}

fn check_dense_factors(
    x: &DenseTensor,
    factors: &[DenseMatrix<f64>],
    mode: usize,
) -> Result<usize> {
    let rank = factors
        .iter()
        .enumerate()
        .find(|&(d, _)| d != mode)
        .map(|(_, f)| f.cols())
        .ok_or_else(|| Error::ShapeMismatch("no factor matrices".into()))?;
    let ok = factors.len() == x.order()
        && factors
            .iter()
            .enumerate()
            .all(|(d, f)| d == mode || (f.rows() == x.dims[d] && f.cols() == rank));
    if ok {
        Ok(rank)
    } else {
        Err(Error::ShapeMismatch("dense_mttkrp factor shapes".into()))
    }
}

/// Dense mode-`mode` matricization: rows linearize the other modes in
/// ascending order (first slowest), columns are the mode-`mode` index.
pub fn matricize_dense(x: &DenseTensor, mode: usize) -> Result<DenseMatrix<f64>> {
    check_mode(x, mode)?;
    let cols = x.dims[mode];
    let rows = x.data.len() / cols;
    let others: Vec<usize> = (0..x.order()).filter(|&d| d != mode).collect();
    let mut m = DenseMatrix::zeros(rows, cols);
    for_each_index(&x.dims, |idx| {
        let row = others.iter().fold(0, |acc, &d| acc * x.dims[d] + idx[d]);
        m.set(row, idx[mode], x.get(idx));
    });
    Ok(m)
}

/// Inverse of [`matricize_dense`].
pub fn tensorize_dense(m: &DenseMatrix<f64>, dims: &[usize], mode: usize) -> Result<DenseTensor> {
    let mut t = DenseTensor::zeros(dims)?;
    check_mode(&t, mode)?;
    let others: Vec<usize> = (0..dims.len()).filter(|&d| d != mode).collect();
    let rows: usize = others.iter().map(|&d| dims[d]).product();
    if m.rows() != rows || m.cols() != dims[mode] {
        return Err(Error::ShapeMismatch("tensorize_dense shapes".into()));
    }
    for_each_index(dims, |idx| {
        let row = others.iter().fold(0, |acc, &d| acc * dims[d] + idx[d]);
        t.set(idx, m.get(row, idx[mode]));
    });
    Ok(t)
}

pub fn matmul(a: &DenseMatrix<f64>, b: &DenseMatrix<f64>) -> Result<DenseMatrix<f64>> {
    if a.cols() != b.rows() {
        return Err(Error::ShapeMismatch(format!(
            "cannot multiply {}x{} by {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    Ok(DenseMatrix::from_fn(a.rows(), b.cols(), |i, j| {
        (0..a.cols()).map(|k| a.get(i, k) * b.get(k, j)).sum()
    }))
}

pub fn transpose<V: Value>(a: &DenseMatrix<V>) -> DenseMatrix<V> {
    DenseMatrix::from_fn(a.cols(), a.rows(), |i, j| a.get(j, i))
}

/// Kronecker product: block `(i, j)` of the `IK x JL` result is `a[i, j] * b`.
pub fn kronecker<V: Value>(a: &DenseMatrix<V>, b: &DenseMatrix<V>) -> DenseMatrix<V> {
    let (k, l) = (b.rows(), b.cols());
    DenseMatrix::from_fn(a.rows() * k, a.cols() * l, |row, col| {
        a.get(row / k, col / l) * b.get(row % k, col % l)
    })
}

/// Khatri-Rao product: column `r` of the `IJ x R` result is the Kronecker
/// product of column `r` of `a` and column `r` of `b`.
pub fn khatri_rao<V: Value>(a: &DenseMatrix<V>, b: &DenseMatrix<V>) -> Result<DenseMatrix<V>> {
    if a.cols() != b.cols() {
        return Err(Error::ShapeMismatch(format!(
            "Khatri-Rao operands have {} and {} columns",
            a.cols(),
            b.cols()
        )));
    }
    let j = b.rows();
    Ok(DenseMatrix::from_fn(a.rows() * j, a.cols(), |row, r| {
        a.get(row / j, r) * b.get(row % j, r)
    }))
}

/// Tensor-times-matrix through the matricized product `X_(n) U`, folded
/// back into a tensor.
pub fn ttm_via_matmul(x: &DenseTensor, u: &DenseMatrix<f64>, mode: usize) -> Result<DenseTensor> {
    let y = matmul(&matricize_dense(x, mode)?, u)?;
    let mut dims = x.dims.clone();
    dims[mode] = u.cols();
    tensorize_dense(&y, &dims, mode)
}

/// MTTKRP as `X_(n)^T (U_a ⊙ U_b ⊙ ...)` over the non-`mode` factors in
/// ascending mode order, which matches the row linearization of
/// [`matricize_dense`].
pub fn mttkrp_via_khatri_rao(
    x: &DenseTensor,
    factors: &[DenseMatrix<f64>],
    mode: usize,
) -> Result<DenseMatrix<f64>> {
    check_mode(x, mode)?;
    check_dense_factors(x, factors, mode)?;
    let kr = factors
        .iter()
        .enumerate()
        .filter(|&(d, _)| d != mode)
        .map(|(_, f)| f.clone())
        .try_fold(None::<DenseMatrix<f64>>, |acc, f| match acc {
            None => Ok(Some(f)),
            Some(a) => khatri_rao(&a, &f).map(Some),
        })?
        .expect("at least one non-mode factor");
    matmul(&transpose(&matricize_dense(x, mode)?), &kr)
}
