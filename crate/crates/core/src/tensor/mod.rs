//! Coordinate-format sparse tensors and the dense operands the kernels use.

mod dense;
mod fiber;
mod matricize;

use std::cmp::Ordering;

pub use dense::{DenseMatrix, DenseVector};
pub use fiber::{build_fiber_index, FiberIndex};
pub use matricize::{matricize, SparseMatrix};

use crate::error::{Error, Result};
use crate::value::Value;

/// Mode index type. Stored indices are 0-based.
pub type Index = u32;

/// Order-N sparse tensor in coordinate (COO) format.
///
/// Entries are stored as `N` parallel index arrays plus one value array.
/// Duplicate index tuples are allowed until [`SparseTensor::coalesce`] is
/// called; explicit zeros are kept and counted as stored entries.
///
/// The tensor remembers the mode order of its last lexicographic sort.
/// Kernels that walk fibers or merge two tensors rely on that record
/// instead of re-checking the layout.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseTensor<V> {
    dims: Vec<usize>,
    indices: Vec<Vec<Index>>,
    values: Vec<V>,
    sort_order: Option<Vec<usize>>,
    coalesced: bool,
}

impl<V: Value> SparseTensor<V> {
    /// Builds a tensor from per-mode index arrays and values.
    pub fn new(dims: Vec<usize>, indices: Vec<Vec<Index>>, values: Vec<V>) -> Result<Self> {
        validate_dims(&dims)?;
        if indices.len() != dims.len() {
            return Err(Error::InvalidTensor(format!(
                "{} index arrays for {} modes",
                indices.len(),
                dims.len()
            )));
        }
        for (d, inds) in indices.iter().enumerate() {
            if inds.len() != values.len() {
                return Err(Error::InvalidTensor(format!(
                    "mode {d} has {} indices but there are {} values",
                    inds.len(),
                    values.len()
                )));
            }
            if let Some((entry, &index)) = inds
                .iter()
                .enumerate()
                .find(|(_, &i)| i as usize >= dims[d])
            {
                return Err(Error::IndexOutOfBounds {
                    entry,
                    mode: d,
                    index: index as u64,
                    dim: dims[d],
                });
            }
        }
        let coalesced = values.len() <= 1;
        Ok(SparseTensor {
            dims,
            indices,
            values,
            sort_order: None,
            coalesced,
        })
    }

    /// Tensor with no stored entries.
    pub fn empty(dims: Vec<usize>) -> Result<Self> {
        let order = dims.len();
        Self::new(dims, vec![Vec::new(); order], Vec::new())
    }

    /// Builds a tensor from `(index tuple, value)` pairs.
    pub fn from_entries<I, T>(dims: Vec<usize>, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (T, V)>,
        T: AsRef<[Index]>,
    {
        let order = dims.len();
        let mut indices = vec![Vec::new(); order];
        let mut values = Vec::new();
        for (m, (tuple, v)) in entries.into_iter().enumerate() {
            let tuple = tuple.as_ref();
            if tuple.len() != order {
                return Err(Error::InvalidTensor(format!(
                    "entry {m} has {} indices, expected {order}",
                    tuple.len()
                )));
            }
            for (d, &i) in tuple.iter().enumerate() {
                indices[d].push(i);
            }
            values.push(v);
        }
        Self::new(dims, indices, values)
    }

    /// Assembles kernel output whose invariants hold by construction.
    pub(crate) fn from_parts(
        dims: Vec<usize>,
        indices: Vec<Vec<Index>>,
        values: Vec<V>,
        sort_order: Option<Vec<usize>>,
        coalesced: bool,
    ) -> Self {
        debug_assert_eq!(dims.len(), indices.len());
        debug_assert!(indices.iter().all(|i| i.len() == values.len()));
        debug_assert!(indices
            .iter()
            .zip(&dims)
            .all(|(inds, &d)| inds.iter().all(|&i| (i as usize) < d)));
        SparseTensor {
            dims,
            indices,
            values,
            sort_order,
            coalesced,
        }
    }

    pub fn order(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn indices(&self) -> &[Vec<Index>] {
        &self.indices
    }

    pub fn mode_indices(&self, mode: usize) -> &[Index] {
        &self.indices[mode]
    }

    pub fn values(&self) -> &[V] {
        &self.values
    }

    /// Values may be rewritten freely; the index structure is unaffected.
    pub fn values_mut(&mut self) -> &mut [V] {
        &mut self.values
    }

    /// Mode order of the last lexicographic sort, if the tensor is sorted.
    pub fn sort_order(&self) -> Option<&[usize]> {
        self.sort_order.as_deref()
    }

    /// True when no two stored entries share an index tuple.
    pub fn is_coalesced(&self) -> bool {
        self.coalesced
    }

    pub fn is_sorted_by(&self, mode_order: &[usize]) -> bool {
        self.sort_order.as_deref() == Some(mode_order)
    }

    /// Index tuple of entry `m`.
    pub fn index_tuple(&self, m: usize) -> Vec<Index> {
        self.indices.iter().map(|inds| inds[m]).collect()
    }

    /// Iterates `(index tuple, value)` pairs in storage order.
    pub fn entries(&self) -> impl Iterator<Item = (Vec<Index>, V)> + '_ {
        (0..self.nnz()).map(move |m| (self.index_tuple(m), self.values[m]))
    }

    /// Converts the element type, rounding where needed.
    pub fn cast<W: Value>(&self) -> SparseTensor<W> {
        SparseTensor {
            dims: self.dims.clone(),
            indices: self.indices.clone(),
            values: self
                .values
                .iter()
                .map(|v| W::from_f64(v.as_f64()))
                .collect(),
            sort_order: self.sort_order.clone(),
            coalesced: self.coalesced,
        }
    }

    /// Sorts entries in place so that index tuples read in `mode_order` are
    /// lexicographically non-decreasing. The sort is stable, so duplicate
    /// tuples keep their relative order.
    pub fn sort_lexicographic(&mut self, mode_order: &[usize]) -> Result<()> {
        validate_permutation(mode_order, self.order())?;
        if !self.is_sorted_by(mode_order) {
            let mut perm: Vec<usize> = (0..self.nnz()).collect();
            perm.sort_by(|&a, &b| compare_entries(&self.indices, a, &self.indices, b, mode_order));
            for inds in &mut self.indices {
                *inds = perm.iter().map(|&m| inds[m]).collect();
            }
            self.values = perm.iter().map(|&m| self.values[m]).collect();
            self.sort_order = Some(mode_order.to_vec());
        }
        self.coalesced = !self.has_adjacent_duplicates();
        Ok(())
    }

    /// Consuming form of [`SparseTensor::sort_lexicographic`].
    pub fn sorted(mut self, mode_order: &[usize]) -> Result<Self> {
        self.sort_lexicographic(mode_order)?;
        Ok(self)
    }

    /// Sums entries that share an index tuple.
    ///
    /// An unsorted tensor is first sorted in ascending mode order; an
    /// already sorted tensor keeps its order. Duplicates are summed in
    /// storage order.
    pub fn coalesce(mut self) -> Self {
        if self.sort_order.is_none() {
            let ascending: Vec<usize> = (0..self.order()).collect();
            self.sort_lexicographic(&ascending)
                .expect("ascending order is a valid permutation");
        }
        if self.coalesced {
            return self;
        }
        let order = self.order();
        let mut indices: Vec<Vec<Index>> = vec![Vec::with_capacity(self.nnz()); order];
        let mut values: Vec<V> = Vec::with_capacity(self.nnz());
        for m in 0..self.nnz() {
            let dup = m > 0 && self.indices.iter().all(|inds| inds[m] == inds[m - 1]);
            if dup {
                *values.last_mut().expect("a previous entry exists") += self.values[m];
            } else {
                for (out, inds) in indices.iter_mut().zip(&self.indices) {
                    out.push(inds[m]);
                }
                values.push(self.values[m]);
            }
        }
        self.indices = indices;
        self.values = values;
        self.coalesced = true;
        self
    }

    fn has_adjacent_duplicates(&self) -> bool {
        (1..self.nnz()).any(|m| self.indices.iter().all(|inds| inds[m] == inds[m - 1]))
    }
}

fn validate_dims(dims: &[usize]) -> Result<()> {
    if dims.is_empty() {
        return Err(Error::InvalidTensor("order must be at least 1".into()));
    }
    if let Some(d) = dims.iter().position(|&d| d == 0) {
        return Err(Error::InvalidTensor(format!("mode {d} has size 0")));
    }
    if let Some(d) = dims.iter().position(|&d| d as u64 > Index::MAX as u64 + 1) {
        return Err(Error::IndexOverflow(format!(
            "size {} of mode {d}",
            dims[d]
        )));
    }
    Ok(())
}

pub(crate) fn validate_permutation(mode_order: &[usize], order: usize) -> Result<()> {
    let mut seen = vec![false; order];
    let ok = mode_order.len() == order
        && mode_order
            .iter()
            .all(|&d| d < order && !std::mem::replace(&mut seen[d], true));
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidPermutation {
            order: mode_order.to_vec(),
            expected: order,
        })
    }
}

/// Compares entry `a` of one index set with entry `b` of another, reading
/// modes in `mode_order`.
#[inline]
pub(crate) fn compare_entries(
    xa: &[Vec<Index>],
    a: usize,
    xb: &[Vec<Index>],
    b: usize,
    mode_order: &[usize],
) -> Ordering {
    for &d in mode_order {
        match xa[d][a].cmp(&xb[d][b]) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}
