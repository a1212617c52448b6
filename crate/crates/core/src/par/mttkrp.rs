use crate::error::Result;
use crate::kernels::{check_factors, mttkrp, mttkrp_accumulate};
use crate::tensor::{DenseMatrix, SparseTensor};
use crate::value::{AtomicValue, Value};

use super::{chunk_bounds, fork_join, resolve_threads, split_at_bounds, MttkrpStrategy};

/// Parallel MTTKRP over contiguous chunks of the non-zeros.
///
/// Threads may hit the same output row, so updates go either through
/// private per-thread buffers that are summed afterwards (row-parallel) or
/// through atomic adds on a shared output. With one thread this is the
/// sequential kernel.
pub fn par_mttkrp<V: Value>(
    x: &SparseTensor<V>,
    factors: &[DenseMatrix<V>],
    mode: usize,
    nthreads: usize,
    strategy: MttkrpStrategy,
) -> Result<DenseMatrix<V>> {
    let rank = check_factors(x, factors, mode)?;
    let nthreads = resolve_threads(nthreads);
    if nthreads == 1 {
        return mttkrp(x, factors, mode);
    }
    let rows = x.dims()[mode];
    let bounds = chunk_bounds(x.nnz(), nthreads);
    let chunks: Vec<usize> = (0..nthreads).collect();
    let data = match strategy {
        MttkrpStrategy::Privatize => {
            let buffers = fork_join(chunks, |c| {
                let mut local = vec![V::zero(); rows * rank];
                mttkrp_accumulate(x, factors, mode, bounds[c]..bounds[c + 1], |p, v| {
                    local[p] += v
                });
                local
            });
            let mut out = vec![V::zero(); rows * rank];
            let row_bounds: Vec<usize> = chunk_bounds(rows, nthreads)
                .into_iter()
                .map(|b| b * rank)
                .collect();
            let items: Vec<_> = split_at_bounds(&mut out, &row_bounds)
                .into_iter()
                .enumerate()
                .collect();
            fork_join(items, |(c, block)| {
                let offset = row_bounds[c];
                for buf in &buffers {
                    let src = &buf[offset..offset + block.len()];
                    block.iter_mut().zip(src).for_each(|(o, &v)| *o += v);
                }
            });
            out
        }
        MttkrpStrategy::Atomic => {
            let cells: Vec<V::Atomic> = (0..rows * rank)
                .map(|_| V::Atomic::new(V::zero()))
                .collect();
            fork_join(chunks, |c| {
                mttkrp_accumulate(x, factors, mode, bounds[c]..bounds[c + 1], |p, v| {
                    cells[p].fetch_add(v)
                });
            });
            cells.iter().map(AtomicValue::load).collect()
        }
    };
    DenseMatrix::new(rows, rank, data)
}
