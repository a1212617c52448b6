use std::ops::Range;

use crate::error::{Error, Result};
use crate::tensor::SparseTensor;
use crate::value::Value;

/// Slice-aligned split of two tensors sorted in the same mode order.
///
/// Partition `p` owns the slices `boundaries[p]..boundaries[p + 1]` of
/// `mode` (the leading key of the sort order) together with the entries of
/// both tensors that fall in them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlicePartition {
    pub mode: usize,
    pub boundaries: Vec<usize>,
    pub x_ranges: Vec<Range<usize>>,
    pub y_ranges: Vec<Range<usize>>,
}

impl SlicePartition {
    pub fn len(&self) -> usize {
        self.x_ranges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x_ranges.is_empty()
    }
}

/// Splits `x` into at most `nthreads` partitions of whole slices, greedily
/// balancing `x`'s non-zeros, and locates the matching ranges of `y` by
/// binary search on the same cut points.
///
/// Each partition is closed once it reaches its share of the non-zeros
/// still unassigned; a slice is never split, so one heavy slice can leave
/// fewer than `nthreads` partitions.
pub fn partition_for_tew<V: Value>(
    x: &SparseTensor<V>,
    y: &SparseTensor<V>,
    nthreads: usize,
) -> Result<SlicePartition> {
    let order = match (x.sort_order(), y.sort_order()) {
        (Some(a), Some(b)) if a == b => a,
        _ => {
            return Err(Error::ShapeMismatch(
                "both tensors must be sorted in the same mode order".into(),
            ))
        }
    };
    let mode = order[0];
    let parts = nthreads.max(1);
    let xi = x.mode_indices(mode);
    let yi = y.mode_indices(mode);
    let limit = x.dims()[mode].max(y.dims()[mode]);
    let nnz = x.nnz();

    let mut boundaries = vec![0usize];
    let mut x_cuts = vec![0usize];
    let mut start = 0;
    while start < nnz {
        let closed = boundaries.len() - 1;
        if closed + 1 == parts {
            break;
        }
        let remaining = nnz - start;
        let target = remaining.div_ceil(parts - closed);
        let mut end = start;
        while end < nnz && end - start < target {
            // Advance over one whole slice.
            let slice = xi[end];
            end += xi[end..].partition_point(|&i| i == slice);
        }
        if end == nnz {
            break;
        }
        boundaries.push(xi[end - 1] as usize + 1);
        x_cuts.push(end);
        start = end;
    }
    boundaries.push(limit);
    x_cuts.push(nnz);

    let y_cuts: Vec<usize> = boundaries
        .iter()
        .map(|&b| yi.partition_point(|&i| (i as usize) < b))
        .collect();
    let ranges = |cuts: &[usize]| cuts.windows(2).map(|w| w[0]..w[1]).collect();
    Ok(SlicePartition {
        mode,
        x_ranges: ranges(&x_cuts),
        y_ranges: ranges(&y_cuts),
        boundaries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn slices(counts: &[usize]) -> SparseTensor<f32> {
        let dims = vec![counts.len(), 128];
        let entries = counts
            .iter()
            .enumerate()
            .flat_map(|(s, &c)| (0..c as u32).map(move |j| ([s as u32, j], 1.0f32)));
        SparseTensor::from_entries(dims, entries)
            .unwrap()
            .sorted(&[0, 1])
            .unwrap()
    }

    #[test]
    fn uniform_slices_balance_evenly() {
        let x = slices(&[10; 8]);
        let p = partition_for_tew(&x, &x, 4).unwrap();
        assert_eq!(p.boundaries, vec![0, 2, 4, 6, 8]);
        assert!(p.x_ranges.iter().all(|r| r.len() == 20));
        assert_eq!(p.x_ranges, p.y_ranges);
    }

    #[test]
    fn heavy_slice_stands_alone() {
        let x = slices(&[90, 2, 2, 2, 2, 2]);
        let p = partition_for_tew(&x, &x, 4).unwrap();
        assert_eq!(p.boundaries[..2], [0, 1]);
        assert_eq!(p.x_ranges[0], 0..90);
        assert_eq!(p.len(), 4);
        assert_eq!(p.x_ranges.last().unwrap().end, 100);
    }

    #[test]
    fn degenerate_inputs() {
        let x = slices(&[5, 5]);
        let p = partition_for_tew(&x, &x, 8).unwrap();
        assert_eq!(p.len(), 2);
        let p = partition_for_tew(&x, &x, 1).unwrap();
        assert_eq!(p.x_ranges, vec![0..10]);

        let e = SparseTensor::<f32>::empty(vec![2, 128])
            .unwrap()
            .sorted(&[0, 1])
            .unwrap();
        let p = partition_for_tew(&e, &x, 4).unwrap();
        assert_eq!(p.boundaries, vec![0, 2]);
        assert_eq!(p.y_ranges, vec![0..10]);

        let unsorted = SparseTensor::<f32>::empty(vec![2, 128]).unwrap();
        assert!(partition_for_tew(&unsorted, &x, 2).is_err());
    }
}
