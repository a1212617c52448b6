use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::tensor::{DenseMatrix, DenseVector, Index, SparseTensor};
use crate::value::Value;

/// How non-zero coordinates are spread over the index space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Distribution {
    Uniform,
    /// `fraction` of the non-zeros land in slice 0 of mode 0, the rest are
    /// uniform over the other slices.
    SliceSkewed {
        fraction: f64,
    },
}

/// Draws a tensor with exactly `nnz` distinct coordinates and non-zero
/// values in `±[0.1, 1)`. The same `(dims, nnz, seed, dist)` always gives
/// the same tensor. The result is sorted ascending and coalesced.
pub fn gen_synthetic<V: Value>(
    dims: &[usize],
    nnz: usize,
    seed: u64,
    dist: Distribution,
) -> Result<SparseTensor<V>> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::InvalidTensor(format!(
            "dims {dims:?} must be positive"
        )));
    }
    if let Some((d, &n)) = dims
        .iter()
        .enumerate()
        .find(|&(_, &n)| n as u64 > Index::MAX as u64 + 1)
    {
        return Err(Error::IndexOverflow(format!(
            "mode {d} size {n} exceeds the 32-bit index range"
        )));
    }
    let capacity = dims
        .iter()
        .fold(1u128, |acc, &d| acc.saturating_mul(d as u128));
    if nnz as u128 > capacity {
        return Err(Error::InfeasibleNnz { nnz, capacity });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let linear = match dist {
        Distribution::Uniform => sample_range(&mut rng, 0, capacity, nnz),
        Distribution::SliceSkewed { fraction } => {
            if !(0.0..=1.0).contains(&fraction) {
                return Err(Error::InvalidTensor(format!(
                    "slice fraction {fraction} must lie in [0, 1]"
                )));
            }
            let slice = capacity / dims[0] as u128;
            let hot = ((fraction * nnz as f64).round() as usize).min(nnz);
            let cold = nnz - hot;
            if hot as u128 > slice || cold as u128 > capacity - slice {
                return Err(Error::InfeasibleNnz { nnz, capacity });
            }
            let mut l = sample_range(&mut rng, 0, slice, hot);
            l.extend(sample_range(&mut rng, slice, capacity, cold));
            l
        }
    };

    let mut indices: Vec<Vec<Index>> = vec![Vec::with_capacity(nnz); dims.len()];
    let mut values = Vec::with_capacity(nnz);
    for mut lin in linear {
        for d in (0..dims.len()).rev() {
            indices[d].push((lin % dims[d] as u128) as Index);
            lin /= dims[d] as u128;
        }
        values.push(V::from_f64(nonzero_value(&mut rng)));
    }
    Ok(SparseTensor::new(dims.to_vec(), indices, values)?.coalesce())
}

/// Dense matrix with entries uniform in `[-1, 1)`.
pub fn random_matrix<V: Value>(rows: usize, cols: usize, seed: u64) -> Result<DenseMatrix<V>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data = (0..rows * cols)
        .map(|_| V::from_f64(rng.gen_range(-1.0..1.0)))
        .collect();
    DenseMatrix::new(rows, cols, data)
}

/// Dense vector with entries uniform in `[-1, 1)`.
pub fn random_vector<V: Value>(len: usize, seed: u64) -> Result<DenseVector<V>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    DenseVector::new(
        (0..len)
            .map(|_| V::from_f64(rng.gen_range(-1.0..1.0)))
            .collect(),
    )
}

fn nonzero_value(rng: &mut ChaCha8Rng) -> f64 {
    let mag = rng.gen_range(0.1..1.0);
    if rng.gen::<bool>() {
        mag
    } else {
        -mag
    }
}

/// `amount` distinct values from `[lo, hi)`.
fn sample_range(rng: &mut ChaCha8Rng, lo: u128, hi: u128, amount: usize) -> Vec<u128> {
    let len = hi - lo;
    match usize::try_from(len) {
        Ok(len) => index::sample(rng, len, amount)
            .into_iter()
            .map(|i| lo + i as u128)
            .collect(),
        Err(_) => {
            // Astronomically large space: collisions are negligible, reject them.
            let mut seen = std::collections::HashSet::with_capacity(amount);
            while seen.len() < amount {
                seen.insert(rng.gen_range(0..len));
            }
            let mut out: Vec<u128> = seen.into_iter().map(|i| lo + i).collect();
            out.sort_unstable();
            out
        }
    }
}
