#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sptk_core::io::{gen_synthetic, random_matrix, Distribution};
use sptk_core::oracle::{densify, DenseTensor};
use sptk_core::{DenseMatrix, Index, SparseTensor, Value};

pub const SINGLE_TTV_TOL: f64 = 1e-5;
pub const SINGLE_TTM_TOL: f64 = 1e-4;
pub const SINGLE_MTTKRP_TOL: f64 = 1e-4;
pub const DOUBLE_TOL: f64 = 1e-10;

/// Random coalesced tensor of order 3 or 4 with dims in `2..=16` and
/// density in `[0.05, 0.5]`, plus a rank drawn from {1, 8, 16}.
pub fn random_instance<V: Value>(seed: u64) -> (SparseTensor<V>, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let order = if rng.gen::<bool>() { 3 } else { 4 };
    let dims: Vec<usize> = (0..order).map(|_| rng.gen_range(2..=16)).collect();
    let cap: usize = dims.iter().product();
    let density = rng.gen_range(0.05..=0.5);
    let nnz = ((density * cap as f64).round() as usize).max(1);
    let rank = [1, 8, 16][rng.gen_range(0..3)];
    let x = gen_synthetic(&dims, nnz, seed ^ 0x5eed, Distribution::Uniform).unwrap();
    (x, rank)
}

/// One factor per mode, `dims[d] x rank`, uniform in `[-1, 1)`.
pub fn random_factors<V: Value>(dims: &[usize], rank: usize, seed: u64) -> Vec<DenseMatrix<V>> {
    dims.iter()
        .enumerate()
        .map(|(d, &n)| {
            random_matrix(n, rank, seed.wrapping_mul(31).wrapping_add(d as u64)).unwrap()
        })
        .collect()
}

/// Sort order with `mode` last and the other modes ascending.
pub fn mode_last(order: usize, mode: usize) -> Vec<usize> {
    (0..order).filter(|&d| d != mode).chain([mode]).collect()
}

pub fn sorted_for<V: Value>(x: &SparseTensor<V>, mode: usize) -> SparseTensor<V> {
    x.clone().sorted(&mode_last(x.order(), mode)).unwrap()
}

pub fn to_f64(m: &DenseMatrix<impl Value>) -> DenseMatrix<f64> {
    m.cast()
}

pub fn abs_matrix(m: &DenseMatrix<f64>) -> DenseMatrix<f64> {
    DenseMatrix::from_fn(m.rows(), m.cols(), |i, j| m.get(i, j).abs())
}

/// Checks that a kernel result equals the double-precision oracle rounded
/// once to the kernel's precision. Single rounding of an exactly computed
/// add, sub, mul or div is what an IEEE kernel produces.
pub fn check_exact<V: Value>(got: &SparseTensor<V>, want: &DenseTensor) -> Result<(), String> {
    let got = densify(got).map_err(|e| e.to_string())?;
    check_exact_dense::<V>(got.data(), want.data())
}

pub fn check_exact_dense<V: Value>(got: &[f64], want: &[f64]) -> Result<(), String> {
    if got.len() != want.len() {
        return Err(format!("sizes differ: {} vs {}", got.len(), want.len()));
    }
    for (e, (&g, &w)) in got.iter().zip(want).enumerate() {
        let w = V::from_f64(w).as_f64();
        if g.to_bits() != w.to_bits() && !(g == 0.0 && w == 0.0) {
            return Err(format!("element {e}: got {g:e}, want {w:e}"));
        }
    }
    Ok(())
}

/// Largest relative error of `got` against `want`, where each element's
/// error is measured against `scale`: the same contraction evaluated on
/// absolute values, i.e. the sum of the magnitudes of the summed terms.
/// Elements with zero scale must be exactly zero.
pub fn max_rel_error(got: &[f64], want: &[f64], scale: &[f64]) -> Result<f64, String> {
    if got.len() != want.len() || got.len() != scale.len() {
        return Err(format!(
            "sizes differ: {} / {} / {}",
            got.len(),
            want.len(),
            scale.len()
        ));
    }
    let mut worst = 0.0f64;
    for (e, ((&g, &w), &s)) in got.iter().zip(want).zip(scale).enumerate() {
        if s == 0.0 {
            if g != 0.0 || w != 0.0 {
                return Err(format!(
                    "element {e}: got {g:e}, want {w:e} with zero scale"
                ));
            }
            continue;
        }
        worst = worst.max((g - w).abs() / s);
    }
    Ok(worst)
}

pub fn check_close(got: &[f64], want: &[f64], scale: &[f64], tol: f64) -> Result<(), String> {
    let err = max_rel_error(got, want, scale)?;
    if err <= tol {
        Ok(())
    } else {
        Err(format!("relative error {err:e} exceeds {tol:e}"))
    }
}

/// Bitwise equality of two tensors, including layout and metadata.
pub fn check_identical<V: Value>(a: &SparseTensor<V>, b: &SparseTensor<V>) -> Result<(), String> {
    if a.dims() != b.dims() || a.indices() != b.indices() || a.sort_order() != b.sort_order() {
        return Err("layouts differ".into());
    }
    let bits = |t: &SparseTensor<V>| {
        t.values()
            .iter()
            .map(|v| v.as_f64().to_bits())
            .collect::<Vec<_>>()
    };
    if bits(a) != bits(b) {
        return Err("values differ".into());
    }
    Ok(())
}

pub fn check_identical_matrix<V: Value>(
    a: &DenseMatrix<V>,
    b: &DenseMatrix<V>,
) -> Result<(), String> {
    let bits = |m: &DenseMatrix<V>| {
        m.data()
            .iter()
            .map(|v| v.as_f64().to_bits())
            .collect::<Vec<_>>()
    };
    if (a.rows(), a.cols()) != (b.rows(), b.cols()) || bits(a) != bits(b) {
        return Err("matrices differ".into());
    }
    Ok(())
}

/// Tolerance on a pair of dense matrices, scaled by `scale` as in
/// [`max_rel_error`].
pub fn matrix_close(
    got: &DenseMatrix<impl Value>,
    want: &DenseMatrix<f64>,
    scale: &DenseMatrix<f64>,
    tol: f64,
) -> Result<(), String> {
    let got: DenseMatrix<f64> = got.cast();
    check_close(got.data(), want.data(), scale.data(), tol)
}

/// Two coalesced tensors over `dims` with `nnz` entries each, sharing
/// `round(overlap * nnz)` index tuples. Entries are left unsorted.
pub fn overlap_pair<V: Value>(
    dims: &[usize],
    nnz: usize,
    overlap: f64,
    seed: u64,
) -> (SparseTensor<V>, SparseTensor<V>) {
    use rand::seq::SliceRandom;
    let shared = (overlap * nnz as f64).round() as usize;
    let pool: SparseTensor<V> =
        gen_synthetic(dims, 2 * nnz - shared, seed, Distribution::Uniform).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed.rotate_left(17));
    let mut entries: Vec<_> = pool.entries().collect();
    entries.shuffle(&mut rng);
    let (both, rest) = entries.split_at(shared);
    let (only_x, only_y) = rest.split_at(nnz - shared);
    let mut xs: Vec<_> = both.iter().chain(only_x).cloned().collect();
    let mut ys: Vec<_> = both
        .iter()
        .map(|(i, v)| (i.clone(), *v * V::from_f64(-1.5)))
        .chain(only_y.iter().cloned())
        .collect();
    xs.shuffle(&mut rng);
    ys.shuffle(&mut rng);
    (
        SparseTensor::from_entries(dims.to_vec(), xs).unwrap(),
        SparseTensor::from_entries(dims.to_vec(), ys).unwrap(),
    )
}

/// Same pattern and storage order as `x`, fresh non-zero values.
pub fn matched_partner<V: Value>(x: &SparseTensor<V>, seed: u64) -> SparseTensor<V> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (0..x.nnz())
        .map(|_| {
            let v: f64 = rng.gen_range(0.1..2.0);
            V::from_f64(if rng.gen::<bool>() { v } else { -v })
        })
        .collect();
    SparseTensor::new(x.dims().to_vec(), x.indices().to_vec(), values).unwrap()
}

pub fn abs_values(x: &SparseTensor<f64>) -> SparseTensor<f64> {
    let mut x = x.clone();
    x.values_mut().iter_mut().for_each(|v| *v = v.abs());
    x
}

/// Malformed inputs with the line the parser must blame.
pub const MALFORMED: [(&str, &str, usize); 10] = [
    ("short line", "1 1 1 1.0\n1 1 2.0\n", 2),
    ("long line", "1 1 1 1.0\n# ok\n1 1 1 1 2.0\n", 3),
    ("non-numeric index", "1 a 1 1.0\n", 1),
    ("zero index", "\n\n1 1 0 1.0\n", 3),
    ("negative index", "1 1 1 1.0\n-1 1 1 1.0\n", 2),
    ("fractional index", "1 1.5 1 1.0\n", 1),
    ("bad value", "# header\n1 1 1 abc\n", 2),
    ("bad exponent", "1 1 1 1.0\n2 2 2 1e\n", 2),
    ("lone token", "7\n", 1),
    ("index too wide", "1 1 1 1.0\n1 5000000000 1 1.0\n", 2),
];

/// Sorted `(tuple, value bits)` pairs.
pub fn multiset<V: Value>(t: &SparseTensor<V>) -> Vec<(Vec<Index>, u64)> {
    let mut v: Vec<_> = t
        .entries()
        .map(|(i, v)| (i, v.as_f64().to_bits()))
        .collect();
    v.sort();
    v
}

/// Arbitrary tensor of order 1 to 5 with values spanning many binades;
/// may contain duplicates and is left unsorted.
pub fn random_tensor<V: Value>(seed: u64) -> SparseTensor<V> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let order = rng.gen_range(1..=5);
    let dims: Vec<usize> = (0..order).map(|_| rng.gen_range(1..40)).collect();
    let n = rng.gen_range(0..200);
    let entries: Vec<(Vec<Index>, V)> = (0..n)
        .map(|_| {
            let idx = dims.iter().map(|&d| rng.gen_range(0..d as Index)).collect();
            let mag = rng.gen_range(-30.0..30.0f64).exp2();
            let v = V::from_f64(if rng.gen::<bool>() { mag } else { -mag } * rng.gen::<f64>());
            (idx, v)
        })
        .collect();
    SparseTensor::from_entries(dims, entries).unwrap()
}
