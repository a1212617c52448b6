use crate::error::Result;
use crate::kernels::{
    check_ttm, check_ttv, ttm_fiber_block, ttv_fiber_block, ttv_output_sort_order,
};
use crate::tensor::{build_fiber_index, DenseMatrix, DenseVector, FiberIndex, Index, SparseTensor};
use crate::value::Value;

use super::{chunk_bounds, fork_join, resolve_threads, split_at_bounds};

/// Parallel tensor-times-vector. Fibers are chunked statically across
/// threads and each fiber is reduced by one thread in storage order.
pub fn par_ttv<V: Value>(
    x: &SparseTensor<V>,
    v: &DenseVector<V>,
    mode: usize,
    nthreads: usize,
) -> Result<SparseTensor<V>> {
    check_ttv(x, v, mode)?;
    par_ttv_with_fibers(x, v, &build_fiber_index(x, mode)?, nthreads)
}

/// [`par_ttv`] with a prebuilt fiber index.
pub fn par_ttv_with_fibers<V: Value>(
    x: &SparseTensor<V>,
    v: &DenseVector<V>,
    fibers: &FiberIndex,
    nthreads: usize,
) -> Result<SparseTensor<V>> {
    let mode = fibers.mode();
    check_ttv(x, v, mode)?;
    fibers.validate(x)?;
    let nf = fibers.nfibs();
    let bounds = chunk_bounds(nf, resolve_threads(nthreads));
    let mut out_inds: Vec<Vec<Index>> = vec![vec![0; nf]; x.order() - 1];
    let mut out_vals = vec![V::zero(); nf];
    let items = fiber_items(&mut out_vals, &mut out_inds, &bounds, 1);
    fork_join(items, |(c, vals, mut inds)| {
        ttv_fiber_block(x, v.as_slice(), fibers, bounds[c], &mut inds, vals);
    });
    let dims = x
        .dims()
        .iter()
        .enumerate()
        .filter(|&(d, _)| d != mode)
        .map(|(_, &n)| n)
        .collect();
    Ok(SparseTensor::from_parts(
        dims,
        out_inds,
        out_vals,
        ttv_output_sort_order(x, mode),
        true,
    ))
}

/// Parallel tensor-times-matrix, chunked over fibers like [`par_ttv`].
pub fn par_ttm<V: Value>(
    x: &SparseTensor<V>,
    u: &DenseMatrix<V>,
    mode: usize,
    nthreads: usize,
) -> Result<SparseTensor<V>> {
    check_ttm(x, u, mode)?;
    par_ttm_with_fibers(x, u, &build_fiber_index(x, mode)?, nthreads)
}

/// [`par_ttm`] with a prebuilt fiber index.
pub fn par_ttm_with_fibers<V: Value>(
    x: &SparseTensor<V>,
    u: &DenseMatrix<V>,
    fibers: &FiberIndex,
    nthreads: usize,
) -> Result<SparseTensor<V>> {
    let mode = fibers.mode();
    check_ttm(x, u, mode)?;
    fibers.validate(x)?;
    let rank = u.cols();
    let len = fibers.nfibs() * rank;
    let bounds = chunk_bounds(fibers.nfibs(), resolve_threads(nthreads));
    let mut out_inds: Vec<Vec<Index>> = vec![vec![0; len]; x.order()];
    let mut out_vals = vec![V::zero(); len];
    let items = fiber_items(&mut out_vals, &mut out_inds, &bounds, rank);
    fork_join(items, |(c, vals, mut inds)| {
        ttm_fiber_block(x, u, fibers, bounds[c], &mut inds, vals);
    });
    let mut dims = x.dims().to_vec();
    dims[mode] = rank;
    Ok(SparseTensor::from_parts(
        dims,
        out_inds,
        out_vals,
        x.sort_order().map(<[usize]>::to_vec),
        true,
    ))
}

type FiberItem<'a, V> = (usize, &'a mut [V], Vec<&'a mut [Index]>);

/// Splits the outputs at fiber cut points scaled by `per_fiber` entries.
fn fiber_items<'a, V>(
    values: &'a mut [V],
    indices: &'a mut [Vec<Index>],
    fiber_bounds: &[usize],
    per_fiber: usize,
) -> Vec<FiberItem<'a, V>> {
    let bounds: Vec<usize> = fiber_bounds.iter().map(|&b| b * per_fiber).collect();
    let mut per_mode: Vec<_> = indices
        .iter_mut()
        .map(|v| split_at_bounds(v, &bounds).into_iter())
        .collect();
    split_at_bounds(values, &bounds)
        .into_iter()
        .enumerate()
        .map(|(c, vals)| {
            let inds = per_mode
                .iter_mut()
                .map(|it| it.next().expect("one chunk per bound"))
                .collect();
            (c, vals, inds)
        })
        .collect()
}
