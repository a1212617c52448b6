use crate::analysis::flops;
use crate::error::{Error, Result};
use crate::tensor::{build_fiber_index, DenseVector, FiberIndex, Index, SparseTensor};
use crate::value::Value;

/// Mode-`mode` tensor-times-vector product.
///
/// `x` must be sorted with `mode` as its last key. The result has order
/// `N - 1` and one entry per fiber, laid out in fiber order.
pub fn ttv<V: Value>(
    x: &SparseTensor<V>,
    v: &DenseVector<V>,
    mode: usize,
) -> Result<SparseTensor<V>> {
    check_ttv(x, v, mode)?;
    ttv_with_fibers(x, v, &build_fiber_index(x, mode)?)
}

/// [`ttv`] with the fiber index built beforehand, so that preprocessing
/// can be timed or reused on its own. The mode is taken from `fibers`.
pub fn ttv_with_fibers<V: Value>(
    x: &SparseTensor<V>,
    v: &DenseVector<V>,
    fibers: &FiberIndex,
) -> Result<SparseTensor<V>> {
    let mode = fibers.mode();
    check_ttv(x, v, mode)?;
    fibers.validate(x)?;
    let nf = fibers.nfibs();
    let mut out_inds: Vec<Vec<Index>> = vec![vec![0; nf]; x.order() - 1];
    let mut out_vals = vec![V::zero(); nf];
    {
        let mut slices: Vec<&mut [Index]> = out_inds.iter_mut().map(|v| v.as_mut_slice()).collect();
        ttv_fiber_block(x, v.as_slice(), fibers, 0, &mut slices, &mut out_vals);
    }
    Ok(SparseTensor::from_parts(
        ttv_output_dims(x.dims(), mode),
        out_inds,
        out_vals,
        ttv_output_sort_order(x, mode),
        true,
    ))
}

pub(crate) fn check_ttv<V: Value>(
    x: &SparseTensor<V>,
    v: &DenseVector<V>,
    mode: usize,
) -> Result<()> {
    if x.order() < 2 {
        return Err(Error::ShapeMismatch(
            "tensor-times-vector needs a tensor of order 2 or more".into(),
        ));
    }
    if mode < x.order() && v.len() != x.dims()[mode] {
        return Err(Error::ShapeMismatch(format!(
            "vector length {} does not match mode-{mode} size {}",
            v.len(),
            x.dims()[mode]
        )));
    }
    Ok(())
}

pub(crate) fn ttv_output_dims(dims: &[usize], mode: usize) -> Vec<usize> {
    dims.iter()
        .enumerate()
        .filter(|&(d, _)| d != mode)
        .map(|(_, &n)| n)
        .collect()
}

/// The input order with `mode` removed and later modes renumbered.
pub(crate) fn ttv_output_sort_order<V: Value>(
    x: &SparseTensor<V>,
    mode: usize,
) -> Option<Vec<usize>> {
    x.sort_order().map(|o| {
        o.iter()
            .filter(|&&d| d != mode)
            .map(|&d| if d > mode { d - 1 } else { d })
            .collect()
    })
}

/// Computes fibers `first .. first + out_vals.len()` into output slices that
/// cover exactly those fibers.
pub(crate) fn ttv_fiber_block<V: Value>(
    x: &SparseTensor<V>,
    v: &[V],
    fibers: &FiberIndex,
    first: usize,
    out_inds: &mut [&mut [Index]],
    out_vals: &mut [V],
) {
    let mode = fibers.mode();
    let others: Vec<&[Index]> = (0..x.order())
        .filter(|&d| d != mode)
        .map(|d| x.mode_indices(d))
        .collect();
    let k = x.mode_indices(mode);
    let xv = x.values();
    let mut work = 0u64;
    for (local, val) in out_vals.iter_mut().enumerate() {
        let range = fibers.fiber(first + local);
        for (o, inds) in out_inds.iter_mut().zip(&others) {
            o[local] = inds[range.start];
        }
        let mut acc = V::zero();
        for m in range.clone() {
            acc += xv[m] * v[k[m] as usize];
        }
        *val = acc;
        work += 2 * range.len() as u64;
    }
    flops::record(work);
}
