mod common;

use common::*;
use proptest::prelude::*;
use sptk_core::analysis::flops::{measured_flops, ENABLED};
use sptk_core::analysis::{estimate, CostKernel, CostParams};
use sptk_core::io::{gen_synthetic, random_matrix, random_vector, Distribution};
use sptk_core::kernels::{mttkrp, tew, tew_eq, ts, ttm, ttv, ElementOp, ScalarOp};
use sptk_core::par::{par_mttkrp, par_ttv, MttkrpStrategy};
use sptk_core::tensor::build_fiber_index;
use sptk_core::{DenseMatrix, SparseTensor};

/// Storage, work and traffic written out independently for each row.
fn table(kernel: CostKernel, nnz: u64, nf: u64, i: u64, r: u64) -> (u64, u64, u64) {
    match kernel {
        CostKernel::Tew => (48 * nnz, nnz, 36 * nnz),
        CostKernel::Ts => (32 * nnz, nnz, 32 * nnz),
        CostKernel::Ttv => (16 * nnz + 12 * nf, 2 * nnz, 12 * nnz + 20 * nf),
        CostKernel::Ttm => (
            16 * nnz + 16 * nf * r + 4 * i * r,
            2 * nnz * r,
            4 * nnz * r + 8 * nnz + 12 * nf * r + 8 * nf,
        ),
        CostKernel::Mttkrp => (16 * nnz + 12 * i * r, 3 * nnz * r, 12 * nnz * r + 16 * nnz),
    }
}

fn params(nnz: u64, nf: u64, i: u64, r: u64) -> CostParams {
    CostParams::new(nnz).nfibs(nf).dim(i).rank(r)
}

#[test]
fn published_rows() {
    let e = estimate(CostKernel::Tew, CostParams::new(1000)).unwrap();
    assert_eq!(
        (e.storage_bytes, e.work_flops, e.traffic_bytes),
        (48_000, 1000, 36_000)
    );
    let e = estimate(CostKernel::Mttkrp, CostParams::new(1000).dim(100).rank(16)).unwrap();
    assert_eq!((e.work_flops, e.traffic_bytes), (48_000, 208_000));
    let e = estimate(
        CostKernel::Ttv,
        CostParams::new(10_000_000).nfibs(1_000_000),
    )
    .unwrap();
    assert!((e.arithmetic_intensity - 1.0 / 7.0).abs() < 1e-12);
}

#[test]
fn measured_flops_match_the_work_column() {
    assert!(ENABLED, "flop counters are compiled out of this build");
    let x: SparseTensor<f32> = gen_synthetic(&[7, 8, 9], 100, 1, Distribution::Uniform).unwrap();
    let nnz = 100u64;
    let y = matched_partner(&x, 2);
    let work =
        |k: CostKernel, nf: u64, r: u64| estimate(k, params(nnz, nf, 9, r)).unwrap().work_flops;

    assert_eq!(
        measured_flops(|| tew_eq(&x, &y, ElementOp::Add).unwrap()).1,
        Some(work(CostKernel::Tew, 1, 1))
    );
    assert_eq!(
        measured_flops(|| tew(&x, &y, ElementOp::Mul).unwrap()).1,
        Some(work(CostKernel::Tew, 1, 1))
    );
    assert_eq!(
        measured_flops(|| ts(&x, 1.0, ScalarOp::Mul)).1,
        Some(work(CostKernel::Ts, 1, 1))
    );
    for mode in 0..3 {
        let xs = sorted_for(&x, mode);
        let nf = build_fiber_index(&xs, mode).unwrap().nfibs() as u64;
        let v = random_vector::<f32>(x.dims()[mode], 3).unwrap();
        assert_eq!(
            measured_flops(|| ttv(&xs, &v, mode).unwrap()).1,
            Some(work(CostKernel::Ttv, nf, 1))
        );
        let u: DenseMatrix<f32> = random_matrix(x.dims()[mode], 16, 4).unwrap();
        assert_eq!(measured_flops(|| ttm(&xs, &u, mode).unwrap()).1, Some(3200));
        assert_eq!(work(CostKernel::Ttm, nf, 16), 3200);
        let f: Vec<DenseMatrix<f32>> = random_factors(x.dims(), 16, 5);
        assert_eq!(
            measured_flops(|| mttkrp(&x, &f, mode).unwrap()).1,
            Some(work(CostKernel::Mttkrp, nf, 16))
        );
        // Worker threads count on their own counters, so only the
        // single-threaded path is visible here.
        assert_eq!(
            measured_flops(|| par_mttkrp(&x, &f, mode, 1, MttkrpStrategy::Atomic).unwrap()).1,
            Some(3 * nnz * 16)
        );
        assert_eq!(
            measured_flops(|| par_ttv(&xs, &v, mode, 1).unwrap()).1,
            Some(2 * nnz)
        );
    }
}

#[test]
fn every_kernel_is_memory_bound_at_large_scale() {
    for k in CostKernel::ALL {
        let e = estimate(k, params(26_021_945, 1_000_000, 165_427, 16)).unwrap();
        assert!(e.arithmetic_intensity < 1.0, "{}", k.name());
    }
}

proptest! {
    #[test]
    fn rows_reproduce_symbolically(nnz in 1u64..1 << 30, nf in 1u64..1 << 20, i in 1u64..1 << 20, r in 1u64..64) {
        for k in CostKernel::ALL {
            let e = estimate(k, params(nnz, nf, i, r)).unwrap();
            let (s, w, t) = table(k, nnz, nf, i, r);
            prop_assert_eq!((e.storage_bytes, e.work_flops, e.traffic_bytes), (s, w, t));
            prop_assert_eq!(e.arithmetic_intensity, w as f64 / t as f64);
            prop_assert!(e.arithmetic_intensity < 1.0);
        }
    }
}
