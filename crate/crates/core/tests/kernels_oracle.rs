mod common;

use std::collections::HashSet;

use common::*;
use proptest::prelude::*;
use sptk_core::io::{gen_synthetic, random_matrix, random_vector, Distribution};
use sptk_core::kernels::{mttkrp, tew, tew_eq, ts, ttm, ttv, ElementOp, ScalarOp};
use sptk_core::oracle::{
    dense_mttkrp, dense_tew, dense_ts, dense_ttm, dense_ttv, densify, mttkrp_via_khatri_rao,
    ttm_via_matmul, DenseTensor,
};
use sptk_core::{DenseMatrix, DenseVector, Error, Index, SparseTensor, Value};

fn abs_tensor<V: Value>(x: &SparseTensor<V>) -> DenseTensor {
    densify(x).unwrap().abs()
}

#[test]
fn tew_eq_matches_dense_oracle_for_every_op() {
    let x: SparseTensor<f32> =
        gen_synthetic(&[20, 20, 20], 1000, 1, Distribution::Uniform).unwrap();
    let y = matched_partner(&x, 2);
    let (dx, dy) = (densify(&x).unwrap(), densify(&y).unwrap());
    for op in ElementOp::ALL {
        let z = tew_eq(&x, &y, op).unwrap();
        assert_eq!(z.indices(), x.indices());
        check_exact::<f32>(&z, &dense_tew(&dx, &dy, op).unwrap()).unwrap();
    }
}

#[test]
fn tew_eq_identities() {
    let x: SparseTensor<f32> = gen_synthetic(&[6, 7, 8], 90, 3, Distribution::Uniform).unwrap();
    let doubled = tew_eq(&x, &x, ElementOp::Add).unwrap();
    assert!(doubled
        .values()
        .iter()
        .zip(x.values())
        .all(|(&d, &v)| d == 2.0 * v));
    let ones =
        SparseTensor::new(x.dims().to_vec(), x.indices().to_vec(), vec![1.0; x.nnz()]).unwrap();
    assert_eq!(
        tew_eq(&x, &ones, ElementOp::Mul).unwrap().values(),
        x.values()
    );
}

#[test]
fn tew_with_partial_overlap_matches_dense_oracle() {
    let (x, y) = overlap_pair::<f32>(&[30, 30, 30], 2000, 0.3, 4);
    let (dx, dy) = (densify(&x).unwrap(), densify(&y).unwrap());
    for op in [ElementOp::Add, ElementOp::Sub, ElementOp::Mul] {
        let z = tew(&x, &y, op).unwrap();
        assert!(z.is_coalesced() && z.is_sorted_by(&[0, 1, 2]));
        let expected_nnz = if op == ElementOp::Mul { 600 } else { 3400 };
        assert_eq!(z.nnz(), expected_nnz, "{op}");
        check_exact::<f32>(&z, &dense_tew(&dx, &dy, op).unwrap()).unwrap();
    }
}

#[test]
fn tew_add_is_commutative() {
    let (x, y) = overlap_pair::<f64>(&[9, 5, 7], 100, 0.5, 5);
    let a: HashSet<_> = tew(&x, &y, ElementOp::Add)
        .unwrap()
        .entries()
        .map(|(i, v)| (i, v.to_bits()))
        .collect();
    let b: HashSet<_> = tew(&y, &x, ElementOp::Add)
        .unwrap()
        .entries()
        .map(|(i, v)| (i, v.to_bits()))
        .collect();
    assert_eq!(a, b);
}

#[test]
fn ts_matches_per_entry_map() {
    let x: SparseTensor<f32> = gen_synthetic(&[10, 11, 12], 300, 6, Distribution::Uniform).unwrap();
    let dx = densify(&x).unwrap();
    for op in [ScalarOp::Add, ScalarOp::Mul] {
        let z = ts(&x, 2.5, op);
        assert_eq!(z.indices(), x.indices());
        check_exact::<f32>(&z, &dense_ts(&dx, 2.5, op)).unwrap();
    }
    assert_eq!(ts(&x, 1.0, ScalarOp::Mul), x);
    assert_eq!(ts(&x, 0.0, ScalarOp::Add), x);
}

#[test]
fn ttv_matches_dense_contraction_in_every_mode() {
    let x: SparseTensor<f32> = gen_synthetic(&[8, 9, 7], 50, 7, Distribution::Uniform).unwrap();
    for mode in 0..3 {
        let v: DenseVector<f32> = random_vector(x.dims()[mode], 8 + mode as u64).unwrap();
        let xs = sorted_for(&x, mode);
        let y = ttv(&xs, &v, mode).unwrap();
        let fibers: HashSet<Vec<Index>> = x
            .entries()
            .map(|(mut i, _)| {
                i.remove(mode);
                i
            })
            .collect();
        assert_eq!(y.nnz(), fibers.len());

        let v64: Vec<f64> = v.as_slice().iter().map(|&a| a as f64).collect();
        let abs_v: Vec<f64> = v64.iter().map(|a| a.abs()).collect();
        let want = dense_ttv(&densify(&x).unwrap(), &v64, mode).unwrap();
        let scale = dense_ttv(&abs_tensor(&x), &abs_v, mode).unwrap();
        let got = densify(&y).unwrap();
        check_close(got.data(), want.data(), scale.data(), SINGLE_TTV_TOL).unwrap();
    }
}

#[test]
fn ttm_matches_matricized_product_in_every_mode() {
    let x: SparseTensor<f32> = gen_synthetic(&[8, 9, 7], 50, 9, Distribution::Uniform).unwrap();
    for mode in 0..3 {
        let u: DenseMatrix<f32> = random_matrix(x.dims()[mode], 16, 10 + mode as u64).unwrap();
        let y = ttm(&sorted_for(&x, mode), &u, mode).unwrap();
        assert_eq!(y.nnz() % 16, 0);
        let u64m = to_f64(&u);
        let want = ttm_via_matmul(&densify(&x).unwrap(), &u64m, mode).unwrap();
        let scale = ttm_via_matmul(&abs_tensor(&x), &abs_matrix(&u64m), mode).unwrap();
        let got = densify(&y).unwrap();
        check_close(got.data(), want.data(), scale.data(), SINGLE_TTM_TOL).unwrap();
    }
}

#[test]
fn mttkrp_matches_khatri_rao_formulation_in_every_mode() {
    let x: SparseTensor<f32> = gen_synthetic(&[8, 9, 7], 50, 11, Distribution::Uniform).unwrap();
    let factors: Vec<DenseMatrix<f32>> = random_factors(x.dims(), 16, 12);
    let f64s: Vec<DenseMatrix<f64>> = factors.iter().map(to_f64).collect();
    let abs: Vec<DenseMatrix<f64>> = f64s.iter().map(abs_matrix).collect();
    for mode in 0..3 {
        let got = mttkrp(&x, &factors, mode).unwrap();
        let want = mttkrp_via_khatri_rao(&densify(&x).unwrap(), &f64s, mode).unwrap();
        let scale = mttkrp_via_khatri_rao(&abs_tensor(&x), &abs, mode).unwrap();
        matrix_close(&got, &want, &scale, SINGLE_MTTKRP_TOL).unwrap();
    }
}

#[test]
fn mttkrp_ignores_factor_of_the_target_mode() {
    let x: SparseTensor<f64> = gen_synthetic(&[4, 5, 6], 30, 13, Distribution::Uniform).unwrap();
    let mut factors: Vec<DenseMatrix<f64>> = random_factors(x.dims(), 3, 14);
    let a = mttkrp(&x, &factors, 1).unwrap();
    factors[1] = DenseMatrix::zeros(1, 1);
    assert_eq!(mttkrp(&x, &factors, 1).unwrap(), a);
}

#[test]
fn kernels_reject_bad_operands() {
    let x: SparseTensor<f32> = gen_synthetic(&[4, 5, 6], 30, 15, Distribution::Uniform).unwrap();
    let v = DenseVector::filled(4, 1.0f32);
    assert!(matches!(ttv(&x, &v, 2), Err(Error::ShapeMismatch(_))));
    assert!(matches!(ttv(&x, &v, 0), Err(Error::NotSorted { .. })));
    let u = DenseMatrix::filled(5, 2, 1.0f32);
    assert!(matches!(
        ttm(&sorted_for(&x, 0), &u, 0),
        Err(Error::ShapeMismatch(_))
    ));
    let factors: Vec<DenseMatrix<f32>> = random_factors(&[4, 5, 7], 2, 1);
    assert!(matches!(
        mttkrp(&x, &factors, 0),
        Err(Error::ShapeMismatch(_))
    ));
    let y: SparseTensor<f32> = gen_synthetic(&[4, 5], 3, 1, Distribution::Uniform).unwrap();
    assert!(matches!(
        tew(&x, &y, ElementOp::Add),
        Err(Error::ShapeMismatch(_))
    ));
}

fn small_tensor() -> impl Strategy<Value = SparseTensor<f64>> {
    (
        prop::collection::vec(1usize..6, 3..=4),
        any::<u64>(),
        0.05f64..0.6,
    )
        .prop_map(|(dims, seed, density)| {
            let cap: usize = dims.iter().product();
            let nnz = ((density * cap as f64) as usize).max(1);
            gen_synthetic(&dims, nnz, seed, Distribution::Uniform).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ttv_and_ttm_emit_one_entry_per_fiber(x in small_tensor(), r in 1usize..5) {
        for mode in 0..x.order() {
            let xs = sorted_for(&x, mode);
            let nf = sptk_core::tensor::build_fiber_index(&xs, mode).unwrap().nfibs();
            let v = DenseVector::filled(x.dims()[mode], 1.0);
            prop_assert_eq!(ttv(&xs, &v, mode).unwrap().nnz(), nf);
            let u = DenseMatrix::filled(x.dims()[mode], r, 1.0);
            prop_assert_eq!(ttm(&xs, &u, mode).unwrap().nnz(), nf * r);
        }
    }

    #[test]
    fn single_column_ttm_equals_ttv(x in small_tensor(), seed in any::<u64>()) {
        for mode in 0..x.order() {
            let xs = sorted_for(&x, mode);
            let v: DenseVector<f64> = random_vector(x.dims()[mode], seed).unwrap();
            let u = DenseMatrix::new(v.len(), 1, v.as_slice().to_vec()).unwrap();
            let a = ttv(&xs, &v, mode).unwrap();
            let b = ttm(&xs, &u, mode).unwrap();
            prop_assert_eq!(a.values(), b.values());
            prop_assert!(b.mode_indices(mode).iter().all(|&i| i == 0));
        }
    }

    #[test]
    fn sequential_kernels_match_dense_oracles(x in small_tensor(), seed in any::<u64>(), r in 1usize..4) {
        let dx = densify(&x).unwrap();
        let ax = dx.abs();
        let factors: Vec<DenseMatrix<f64>> = random_factors(x.dims(), r, seed);
        let abs: Vec<DenseMatrix<f64>> = factors.iter().map(abs_matrix).collect();
        for mode in 0..x.order() {
            let xs = sorted_for(&x, mode);
            let v: Vec<f64> = factors[mode].data().iter().step_by(r).copied().collect();
            let av: Vec<f64> = v.iter().map(|a| a.abs()).collect();
            let y = ttv(&xs, &DenseVector::new(v.clone()).unwrap(), mode).unwrap();
            let got = densify(&y).unwrap();
            let want = dense_ttv(&dx, &v, mode).unwrap();
            let scale = dense_ttv(&ax, &av, mode).unwrap();
            prop_assert!(check_close(got.data(), want.data(), scale.data(), DOUBLE_TOL).is_ok());

            let y = ttm(&xs, &factors[mode], mode).unwrap();
            let got = densify(&y).unwrap();
            let want = dense_ttm(&dx, &factors[mode], mode).unwrap();
            let scale = dense_ttm(&ax, &abs[mode], mode).unwrap();
            prop_assert!(check_close(got.data(), want.data(), scale.data(), DOUBLE_TOL).is_ok());

            let m = mttkrp(&x, &factors, mode).unwrap();
            let want = dense_mttkrp(&dx, &factors, mode).unwrap();
            let scale = dense_mttkrp(&ax, &abs, mode).unwrap();
            prop_assert!(matrix_close(&m, &want, &scale, DOUBLE_TOL).is_ok());
        }
    }
}
