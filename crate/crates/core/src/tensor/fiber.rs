use std::ops::Range;

use super::SparseTensor;
use crate::error::{Error, Result};
use crate::value::Value;

/// Mode-`n` fiber boundaries of a sorted tensor.
///
/// Entries in `fptr[f]..fptr[f + 1]` share every index except the one on
/// `mode`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberIndex {
    mode: usize,
    fptr: Vec<usize>,
}

impl FiberIndex {
    /// Cheap consistency check that this index was built for `t`: the
    /// orientation matches and the fiber ranges span all of `t`'s entries.
    pub fn validate<V: Value>(&self, t: &SparseTensor<V>) -> Result<()> {
        check_orientation(t, self.mode)?;
        if self.fptr.last() != Some(&t.nnz()) {
            return Err(Error::InvalidTensor(format!(
                "fiber index covers {} entries but the tensor has {}",
                self.fptr.last().copied().unwrap_or(0),
                t.nnz()
            )));
        }
        Ok(())
    }

    pub fn mode(&self) -> usize {
        self.mode
    }

    pub fn nfibs(&self) -> usize {
        self.fptr.len() - 1
    }

    pub fn fptr(&self) -> &[usize] {
        &self.fptr
    }

    /// Entry range of fiber `f`.
    pub fn fiber(&self, f: usize) -> Range<usize> {
        self.fptr[f]..self.fptr[f + 1]
    }

    pub fn fibers(&self) -> impl Iterator<Item = Range<usize>> + '_ {
        self.fptr.windows(2).map(|w| w[0]..w[1])
    }
}

/// Locates the mode-`mode` fibers of `t`.
///
/// `t` must have been sorted with `mode` as its last (fastest-varying) key;
/// the other modes may appear in any order before it.
pub fn build_fiber_index<V: Value>(t: &SparseTensor<V>, mode: usize) -> Result<FiberIndex> {
    check_orientation(t, mode)?;
    let others: Vec<&[u32]> = (0..t.order())
        .filter(|&d| d != mode)
        .map(|d| t.mode_indices(d))
        .collect();
    let mut fptr = Vec::with_capacity(t.nnz() / 2 + 1);
    fptr.push(0);
    for m in 1..t.nnz() {
        if others.iter().any(|inds| inds[m] != inds[m - 1]) {
            fptr.push(m);
        }
    }
    if t.nnz() > 0 {
        fptr.push(t.nnz());
    }
    Ok(FiberIndex { mode, fptr })
}

fn check_orientation<V: Value>(t: &SparseTensor<V>, mode: usize) -> Result<()> {
    if mode >= t.order() {
        return Err(Error::InvalidMode {
            mode,
            order: t.order(),
        });
    }
    match t.sort_order() {
        Some(order) if order.last() == Some(&mode) => Ok(()),
        found => Err(Error::NotSorted {
            mode,
            found: found.map(<[usize]>::to_vec),
        }),
    }
}
