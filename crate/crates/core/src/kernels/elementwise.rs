use std::borrow::Cow;
use std::cmp::Ordering;
use std::ops::Range;

use super::{ElementOp, ScalarOp};
use crate::analysis::flops;
use crate::error::{Error, Result};
use crate::tensor::{compare_entries, Index, SparseTensor};
use crate::value::Value;

/// Element-wise operation between two tensors with the same shape and the
/// same stored index tuples in the same storage order.
///
/// The output reuses `x`'s index arrays. Division by a stored zero in `y`
/// is an error rather than an infinity.
pub fn tew_eq<V: Value>(
    x: &SparseTensor<V>,
    y: &SparseTensor<V>,
    op: ElementOp,
) -> Result<SparseTensor<V>> {
    check_tew_eq(x, y)?;
    let mut values = vec![V::zero(); x.nnz()];
    tew_eq_block(x, y, op, 0..x.nnz(), &mut values)?;
    Ok(SparseTensor::from_parts(
        x.dims().to_vec(),
        x.indices().to_vec(),
        values,
        x.sort_order().map(<[usize]>::to_vec),
        x.is_coalesced(),
    ))
}

pub(crate) fn check_tew_eq<V: Value>(x: &SparseTensor<V>, y: &SparseTensor<V>) -> Result<()> {
    if x.dims() != y.dims() {
        return Err(Error::ShapeMismatch(format!(
            "dims {:?} and {:?} differ",
            x.dims(),
            y.dims()
        )));
    }
    if x.nnz() != y.nnz() {
        return Err(Error::ShapeMismatch(format!(
            "nnz {} and {} differ",
            x.nnz(),
            y.nnz()
        )));
    }
    Ok(())
}

/// Validates and computes entries `range` of a same-pattern operation into
/// `out` (which covers exactly `range`). Reports the first offending entry.
pub(crate) fn tew_eq_block<V: Value>(
    x: &SparseTensor<V>,
    y: &SparseTensor<V>,
    op: ElementOp,
    range: Range<usize>,
    out: &mut [V],
) -> Result<()> {
    let (xv, yv) = (x.values(), y.values());
    for m in range.clone() {
        if x.indices()
            .iter()
            .zip(y.indices())
            .any(|(a, b)| a[m] != b[m])
        {
            return Err(Error::PatternMismatch { entry: m });
        }
        if op == ElementOp::Div && yv[m] == V::zero() {
            return Err(Error::DivideByZero { entry: m });
        }
    }
    for (o, m) in out.iter_mut().zip(range.clone()) {
        *o = op.apply(xv[m], yv[m]);
    }
    flops::record(range.len() as u64);
    Ok(())
}

/// Applies a scalar to every stored entry. Implicit zeros stay implicit,
/// even for addition.
pub fn ts<V: Value>(x: &SparseTensor<V>, s: V, op: ScalarOp) -> SparseTensor<V> {
    let mut values = vec![V::zero(); x.nnz()];
    ts_block(x, s, op, 0..x.nnz(), &mut values);
    SparseTensor::from_parts(
        x.dims().to_vec(),
        x.indices().to_vec(),
        values,
        x.sort_order().map(<[usize]>::to_vec),
        x.is_coalesced(),
    )
}

pub(crate) fn ts_block<V: Value>(
    x: &SparseTensor<V>,
    s: V,
    op: ScalarOp,
    range: Range<usize>,
    out: &mut [V],
) {
    for (o, &v) in out.iter_mut().zip(&x.values()[range.clone()]) {
        *o = op.apply(v, s);
    }
    flops::record(range.len() as u64);
}

/// Element-wise operation between two tensors of the same order but
/// arbitrary shapes and non-zero patterns.
///
/// The output shape is the per-mode maximum of the inputs. Both operands
/// are walked as sorted streams: equal tuples combine through `op`;
/// unmatched entries pass through for `Add`, pass through negated from `y`
/// for `Sub`, and are dropped for `Mul`. Division is rejected because
/// implicit zeros make it undefined. Computed zeros are kept.
///
/// Inputs already sorted in a common mode order and coalesced are merged
/// in that order. Anything else is merged on sorted, coalesced copies in
/// ascending mode order. The output is sorted in the merge order and
/// coalesced.
pub fn tew<V: Value>(
    x: &SparseTensor<V>,
    y: &SparseTensor<V>,
    op: ElementOp,
) -> Result<SparseTensor<V>> {
    let (x, y, order) = prepare_pair(x, y, op)?;
    let dims = union_dims(&x, &y);
    let mut indices = vec![Vec::new(); dims.len()];
    let mut values = Vec::new();
    merge_range(
        &x,
        0..x.nnz(),
        &y,
        0..y.nnz(),
        op,
        &order,
        &mut indices,
        &mut values,
    );
    Ok(SparseTensor::from_parts(
        dims,
        indices,
        values,
        Some(order),
        true,
    ))
}

pub(crate) fn union_dims<V: Value>(x: &SparseTensor<V>, y: &SparseTensor<V>) -> Vec<usize> {
    x.dims()
        .iter()
        .zip(y.dims())
        .map(|(&a, &b)| a.max(b))
        .collect()
}

type Prepared<'a, V> = (
    Cow<'a, SparseTensor<V>>,
    Cow<'a, SparseTensor<V>>,
    Vec<usize>,
);

/// Brings both operands into a common sort order with no duplicates.
pub(crate) fn prepare_pair<'a, V: Value>(
    x: &'a SparseTensor<V>,
    y: &'a SparseTensor<V>,
    op: ElementOp,
) -> Result<Prepared<'a, V>> {
    if op == ElementOp::Div {
        return Err(Error::UnsupportedOp {
            kernel: "tew",
            op: op.to_string(),
        });
    }
    if x.order() != y.order() {
        return Err(Error::ShapeMismatch(format!(
            "orders {} and {} differ",
            x.order(),
            y.order()
        )));
    }
    if let (Some(ox), Some(oy)) = (x.sort_order(), y.sort_order()) {
        if ox == oy && x.is_coalesced() && y.is_coalesced() {
            return Ok((Cow::Borrowed(x), Cow::Borrowed(y), ox.to_vec()));
        }
    }
    let ascending: Vec<usize> = (0..x.order()).collect();
    let prep = |t: &'a SparseTensor<V>| -> Result<Cow<'a, SparseTensor<V>>> {
        if t.is_sorted_by(&ascending) && t.is_coalesced() {
            Ok(Cow::Borrowed(t))
        } else {
            Ok(Cow::Owned(t.clone().sorted(&ascending)?.coalesce()))
        }
    };
    Ok((prep(x)?, prep(y)?, ascending))
}

/// Sorted two-pointer merge of `x[xr]` and `y[yr]`, appending to the
/// output buffers.
#[allow(clippy::too_many_arguments)]
pub(crate) fn merge_range<V: Value>(
    x: &SparseTensor<V>,
    xr: Range<usize>,
    y: &SparseTensor<V>,
    yr: Range<usize>,
    op: ElementOp,
    order: &[usize],
    out_inds: &mut [Vec<Index>],
    out_vals: &mut Vec<V>,
) {
    let keep_unmatched = op != ElementOp::Mul;
    let hint = if keep_unmatched {
        xr.len() + yr.len()
    } else {
        xr.len().min(yr.len())
    };
    out_vals.reserve(hint);
    out_inds.iter_mut().for_each(|v| v.reserve(hint));

    let push =
        |src: &SparseTensor<V>, m: usize, v: V, inds: &mut [Vec<Index>], vals: &mut Vec<V>| {
            for (o, i) in inds.iter_mut().zip(src.indices()) {
                o.push(i[m]);
            }
            vals.push(v);
        };
    let unmatched_y = |v: V| if op == ElementOp::Sub { -v } else { v };

    let (xv, yv) = (x.values(), y.values());
    let (mut a, mut b) = (xr.start, yr.start);
    let mut matched = 0u64;
    while a < xr.end && b < yr.end {
        match compare_entries(x.indices(), a, y.indices(), b, order) {
            Ordering::Equal => {
                push(x, a, op.apply(xv[a], yv[b]), out_inds, out_vals);
                matched += 1;
                a += 1;
                b += 1;
            }
            Ordering::Less => {
                if keep_unmatched {
                    push(x, a, xv[a], out_inds, out_vals);
                }
                a += 1;
            }
            Ordering::Greater => {
                if keep_unmatched {
                    push(y, b, unmatched_y(yv[b]), out_inds, out_vals);
                }
                b += 1;
            }
        }
    }
    if keep_unmatched {
        for m in a..xr.end {
            push(x, m, xv[m], out_inds, out_vals);
        }
        for m in b..yr.end {
            push(y, m, unmatched_y(yv[m]), out_inds, out_vals);
        }
    }
    flops::record(matched);
}
