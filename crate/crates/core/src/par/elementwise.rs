use crate::error::{Error, Result};
use crate::kernels::{
    check_tew_eq, merge_range, prepare_pair, tew_eq_block, ts_block, ElementOp, ScalarOp,
};
use crate::tensor::{Index, SparseTensor};
use crate::value::Value;

use super::{chunk_bounds, fork_join, partition_for_tew, resolve_threads, split_at_bounds};

/// Parallel same-pattern element-wise operation over contiguous chunks of
/// the non-zeros. On invalid input the error reported is the one at the
/// lowest entry, as in the sequential kernel.
pub fn par_tew_eq<V: Value>(
    x: &SparseTensor<V>,
    y: &SparseTensor<V>,
    op: ElementOp,
    nthreads: usize,
) -> Result<SparseTensor<V>> {
    check_tew_eq(x, y)?;
    let bounds = chunk_bounds(x.nnz(), resolve_threads(nthreads));
    let mut values = vec![V::zero(); x.nnz()];
    let mut indices: Vec<Vec<Index>> = vec![vec![0; x.nnz()]; x.order()];
    let items = chunk_items(&mut values, &mut indices, &bounds);
    let results = fork_join(items, |(c, vals, inds)| {
        let range = bounds[c]..bounds[c + 1];
        for (o, src) in inds.into_iter().zip(x.indices()) {
            o.copy_from_slice(&src[range.clone()]);
        }
        tew_eq_block(x, y, op, range, vals)
    });
    if let Some(err) = results
        .into_iter()
        .filter_map(Result::err)
        .min_by_key(error_entry)
    {
        return Err(err);
    }
    Ok(SparseTensor::from_parts(
        x.dims().to_vec(),
        indices,
        values,
        x.sort_order().map(<[usize]>::to_vec),
        x.is_coalesced(),
    ))
}

/// Parallel tensor-scalar operation over contiguous chunks of the
/// non-zeros.
pub fn par_ts<V: Value>(
    x: &SparseTensor<V>,
    s: V,
    op: ScalarOp,
    nthreads: usize,
) -> SparseTensor<V> {
    let bounds = chunk_bounds(x.nnz(), resolve_threads(nthreads));
    let mut values = vec![V::zero(); x.nnz()];
    let mut indices: Vec<Vec<Index>> = vec![vec![0; x.nnz()]; x.order()];
    let items = chunk_items(&mut values, &mut indices, &bounds);
    fork_join(items, |(c, vals, inds)| {
        let range = bounds[c]..bounds[c + 1];
        for (o, src) in inds.into_iter().zip(x.indices()) {
            o.copy_from_slice(&src[range.clone()]);
        }
        ts_block(x, s, op, range, vals);
    });
    SparseTensor::from_parts(
        x.dims().to_vec(),
        indices,
        values,
        x.sort_order().map(<[usize]>::to_vec),
        x.is_coalesced(),
    )
}

/// Parallel general element-wise operation.
///
/// Both operands are split into slice-aligned partitions with no shared
/// slice index ([`partition_for_tew`]); each thread merges its partition
/// into a local buffer and the buffers are concatenated in partition order.
pub fn par_tew<V: Value>(
    x: &SparseTensor<V>,
    y: &SparseTensor<V>,
    op: ElementOp,
    nthreads: usize,
) -> Result<SparseTensor<V>> {
    let (x, y, order) = prepare_pair(x, y, op)?;
    let (x, y) = (x.as_ref(), y.as_ref());
    let partition = partition_for_tew(x, y, resolve_threads(nthreads))?;
    let items: Vec<usize> = (0..partition.len()).collect();
    let locals = fork_join(items, |p| {
        let mut inds = vec![Vec::new(); x.order()];
        let mut vals = Vec::new();
        merge_range(
            x,
            partition.x_ranges[p].clone(),
            y,
            partition.y_ranges[p].clone(),
            op,
            &order,
            &mut inds,
            &mut vals,
        );
        (inds, vals)
    });

    let total: usize = locals.iter().map(|(_, v)| v.len()).sum();
    let mut indices: Vec<Vec<Index>> = vec![Vec::with_capacity(total); x.order()];
    let mut values = Vec::with_capacity(total);
    for (inds, vals) in locals {
        for (o, i) in indices.iter_mut().zip(inds) {
            o.extend(i);
        }
        values.extend(vals);
    }
    let dims = x
        .dims()
        .iter()
        .zip(y.dims())
        .map(|(&a, &b)| a.max(b))
        .collect();
    Ok(SparseTensor::from_parts(
        dims,
        indices,
        values,
        Some(order),
        true,
    ))
}

type ChunkItem<'a, V> = (usize, &'a mut [V], Vec<&'a mut [Index]>);

fn chunk_items<'a, V>(
    values: &'a mut [V],
    indices: &'a mut [Vec<Index>],
    bounds: &[usize],
) -> Vec<ChunkItem<'a, V>> {
    let mut per_mode: Vec<_> = indices
        .iter_mut()
        .map(|v| split_at_bounds(v, bounds).into_iter())
        .collect();
    split_at_bounds(values, bounds)
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

fn error_entry(e: &Error) -> usize {
    match e {
        Error::PatternMismatch { entry } | Error::DivideByZero { entry } => *entry,
        _ => usize::MAX,
    }
}
