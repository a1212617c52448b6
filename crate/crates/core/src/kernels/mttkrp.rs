use std::ops::Range;

use crate::analysis::flops;
use crate::error::{Error, Result};
use crate::tensor::{DenseMatrix, SparseTensor};
use crate::value::Value;

/// Mode-`mode` matricized tensor times Khatri-Rao product.
///
/// `factors` holds one matrix per mode; `factors[mode]` is ignored and may
/// have any shape. Every other factor must have `dims[d]` rows and a shared
/// column count `R`. Returns the `dims[mode] x R` result. Any sort order is
/// accepted; non-zeros are accumulated in storage order.
pub fn mttkrp<V: Value>(
    x: &SparseTensor<V>,
    factors: &[DenseMatrix<V>],
    mode: usize,
) -> Result<DenseMatrix<V>> {
    let rank = check_factors(x, factors, mode)?;
    let mut out = DenseMatrix::zeros(x.dims()[mode], rank);
    let data = out.data_mut();
    mttkrp_accumulate(x, factors, mode, 0..x.nnz(), |p, v| data[p] += v);
    Ok(out)
}

/// Validates factor shapes and returns the shared rank.
pub(crate) fn check_factors<V: Value>(
    x: &SparseTensor<V>,
    factors: &[DenseMatrix<V>],
    mode: usize,
) -> Result<usize> {
    if mode >= x.order() {
        return Err(Error::InvalidMode {
            mode,
            order: x.order(),
        });
    }
    if x.order() < 2 {
        return Err(Error::ShapeMismatch(
            "MTTKRP needs a tensor of order 2 or more".into(),
        ));
    }
    if factors.len() != x.order() {
        return Err(Error::ShapeMismatch(format!(
            "{} factor matrices for an order-{} tensor",
            factors.len(),
            x.order()
        )));
    }
    let first = if mode == 0 { 1 } else { 0 };
    let rank = factors[first].cols();
    for (d, f) in factors.iter().enumerate().filter(|&(d, _)| d != mode) {
        if f.rows() != x.dims()[d] {
            return Err(Error::ShapeMismatch(format!(
                "factor {d} has {} rows but mode {d} has size {}",
                f.rows(),
                x.dims()[d]
            )));
        }
        if f.cols() != rank {
            return Err(Error::ShapeMismatch(format!(
                "factor {d} has rank {} but factor {first} has rank {rank}",
                f.cols()
            )));
        }
    }
    Ok(rank)
}

/// Feeds `value * prod_d factors[d][i_d, r]` for every non-zero in `range`
/// to `sink(i_mode * R + r, term)`.
///
/// Factor rows are multiplied in descending mode order, so a third-order
/// mode-0 update reads `value * C[k, r] * B[j, r]`.
#[inline]
pub(crate) fn mttkrp_accumulate<V: Value>(
    x: &SparseTensor<V>,
    factors: &[DenseMatrix<V>],
    mode: usize,
    range: Range<usize>,
    mut sink: impl FnMut(usize, V),
) {
    let rank = if mode == 0 {
        factors[1].cols()
    } else {
        factors[0].cols()
    };
    let others: Vec<(usize, &DenseMatrix<V>)> = (0..x.order())
        .rev()
        .filter(|&d| d != mode)
        .map(|d| (d, &factors[d]))
        .collect();
    let out_rows = x.mode_indices(mode);
    let xv = x.values();
    let mut scratch = vec![V::zero(); rank];
    for m in range.clone() {
        scratch.fill(xv[m]);
        for &(d, f) in &others {
            let row = f.row(x.mode_indices(d)[m] as usize);
            scratch.iter_mut().zip(row).for_each(|(s, &w)| *s = *s * w);
        }
        let base = out_rows[m] as usize * rank;
        for (r, &s) in scratch.iter().enumerate() {
            sink(base + r, s);
        }
    }
    flops::record((x.order() * rank * range.len()) as u64);
}
