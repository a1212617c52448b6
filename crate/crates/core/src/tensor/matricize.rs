use super::{Index, SparseTensor};
use crate::error::{Error, Result};
use crate::value::Value;

/// Sparse matrix in coordinate form, as produced by [`matricize`].
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix<V> {
    pub rows: usize,
    pub cols: usize,
    pub row: Vec<Index>,
    pub col: Vec<Index>,
    pub values: Vec<V>,
}

/// Mode-`mode` matricization.
///
/// The column index is the mode-`mode` index. The row index linearizes the
/// remaining modes in ascending mode number, first remaining mode
/// slowest-varying. Entries keep the tensor's storage order.
pub fn matricize<V: Value>(t: &SparseTensor<V>, mode: usize) -> Result<SparseMatrix<V>> {
    if mode >= t.order() {
        return Err(Error::InvalidMode {
            mode,
            order: t.order(),
        });
    }
    let others: Vec<usize> = (0..t.order()).filter(|&d| d != mode).collect();
    let rows = others
        .iter()
        .try_fold(1u64, |acc, &d| acc.checked_mul(t.dims()[d] as u64))
        .filter(|&r| r <= Index::MAX as u64 + 1)
        .ok_or_else(|| Error::IndexOverflow(format!("mode-{mode} matricized row count")))?;

    let mut row = vec![0 as Index; t.nnz()];
    for &d in &others {
        let dim = t.dims()[d] as u64;
        for (r, &i) in row.iter_mut().zip(t.mode_indices(d)) {
            *r = (*r as u64 * dim + i as u64) as Index;
        }
    }
    Ok(SparseMatrix {
        rows: rows as usize,
        cols: t.dims()[mode],
        row,
        col: t.mode_indices(mode).to_vec(),
        values: t.values().to_vec(),
    })
}

impl<V: Value> SparseMatrix<V> {
    /// Inverse of [`matricize`]: splits rows back into the non-`mode` indices.
    pub fn tensorize(&self, dims: &[usize], mode: usize) -> Result<SparseTensor<V>> {
        if mode >= dims.len() || dims[mode] != self.cols {
            return Err(Error::ShapeMismatch(format!(
                "{}-column matrix cannot fold into mode {mode} of {dims:?}",
                self.cols
            )));
        }
        let rows: usize = dims
            .iter()
            .enumerate()
            .filter(|&(d, _)| d != mode)
            .map(|(_, &n)| n)
            .product();
        if rows != self.rows {
            return Err(Error::ShapeMismatch(format!(
                "{} rows cannot fold into {dims:?} around mode {mode}",
                self.rows
            )));
        }
        let mut indices = vec![Vec::with_capacity(self.values.len()); dims.len()];
        let mut rem: Vec<u64> = self.row.iter().map(|&r| r as u64).collect();
        for d in (0..dims.len()).rev().filter(|&d| d != mode) {
            let dim = dims[d] as u64;
            indices[d] = rem.iter().map(|&r| (r % dim) as Index).collect();
            rem.iter_mut().for_each(|r| *r /= dim);
        }
        indices[mode] = self.col.clone();
        SparseTensor::new(dims.to_vec(), indices, self.values.clone())
    }
}
