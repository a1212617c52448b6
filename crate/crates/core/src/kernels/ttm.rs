use crate::analysis::flops;
use crate::error::{Error, Result};
use crate::tensor::{build_fiber_index, DenseMatrix, FiberIndex, Index, SparseTensor};
use crate::value::Value;

/// Mode-`mode` tensor-times-matrix product with `u` of shape `I_mode x R`.
///
/// `x` must be sorted with `mode` as its last key. The output keeps order
/// `N` with `dims[mode] = R` and holds `nfibs * R` entries: for fiber `f`
/// and column `r`, entry `f * R + r` carries the fiber's indices with `r`
/// on `mode`. The output is sorted in `x`'s order.
pub fn ttm<V: Value>(
    x: &SparseTensor<V>,
    u: &DenseMatrix<V>,
    mode: usize,
) -> Result<SparseTensor<V>> {
    check_ttm(x, u, mode)?;
    ttm_with_fibers(x, u, &build_fiber_index(x, mode)?)
}

/// [`ttm`] with a prebuilt fiber index; the mode is taken from `fibers`.
pub fn ttm_with_fibers<V: Value>(
    x: &SparseTensor<V>,
    u: &DenseMatrix<V>,
    fibers: &FiberIndex,
) -> Result<SparseTensor<V>> {
    let mode = fibers.mode();
    check_ttm(x, u, mode)?;
    fibers.validate(x)?;
    let len = fibers.nfibs() * u.cols();
    let mut out_inds: Vec<Vec<Index>> = vec![vec![0; len]; x.order()];
    let mut out_vals = vec![V::zero(); len];
    {
        let mut slices: Vec<&mut [Index]> = out_inds.iter_mut().map(|v| v.as_mut_slice()).collect();
        ttm_fiber_block(x, u, fibers, 0, &mut slices, &mut out_vals);
    }
    Ok(SparseTensor::from_parts(
        ttm_output_dims(x.dims(), mode, u.cols()),
        out_inds,
        out_vals,
        x.sort_order().map(<[usize]>::to_vec),
        true,
    ))
}

pub(crate) fn check_ttm<V: Value>(
    x: &SparseTensor<V>,
    u: &DenseMatrix<V>,
    mode: usize,
) -> Result<()> {
    if mode < x.order() && u.rows() != x.dims()[mode] {
        return Err(Error::ShapeMismatch(format!(
            "matrix has {} rows but mode {mode} has size {}",
            u.rows(),
            x.dims()[mode]
        )));
    }
    if u.cols() as u64 > Index::MAX as u64 + 1 {
        return Err(Error::IndexOverflow(format!("rank {}", u.cols())));
    }
    Ok(())
}

pub(crate) fn ttm_output_dims(dims: &[usize], mode: usize, rank: usize) -> Vec<usize> {
    let mut out = dims.to_vec();
    out[mode] = rank;
    out
}

/// Computes fibers `first ..` into output slices covering exactly
/// `out_vals.len() / R` fibers.
pub(crate) fn ttm_fiber_block<V: Value>(
    x: &SparseTensor<V>,
    u: &DenseMatrix<V>,
    fibers: &FiberIndex,
    first: usize,
    out_inds: &mut [&mut [Index]],
    out_vals: &mut [V],
) {
    let mode = fibers.mode();
    let rank = u.cols();
    let k = x.mode_indices(mode);
    let xv = x.values();
    let mut work = 0u64;
    for (local, vals) in out_vals.chunks_exact_mut(rank).enumerate() {
        let range = fibers.fiber(first + local);
        let base = local * rank;
        for (d, o) in out_inds.iter_mut().enumerate() {
            let slot = &mut o[base..base + rank];
            if d == mode {
                slot.iter_mut()
                    .enumerate()
                    .for_each(|(r, s)| *s = r as Index);
            } else {
                slot.fill(x.mode_indices(d)[range.start]);
            }
        }
        for m in range.clone() {
            let value = xv[m];
            for (acc, &w) in vals.iter_mut().zip(u.row(k[m] as usize)) {
                *acc += value * w;
            }
        }
        work += 2 * (range.len() * rank) as u64;
    }
    flops::record(work);
}
