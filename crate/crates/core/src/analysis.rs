//! Analytical cost model for third-order cubical tensors with 32-bit
//! indices and single-precision values, plus debug-build flop counters.
//!
//! The memory-traffic terms ignore cache reuse. Every kernel's arithmetic
//! intensity stays below one flop per byte.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Kernel rows of the cost model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CostKernel {
    Tew,
    Ts,
    Ttv,
    Ttm,
    Mttkrp,
}

impl CostKernel {
    pub const ALL: [CostKernel; 5] = [
        CostKernel::Tew,
        CostKernel::Ts,
        CostKernel::Ttv,
        CostKernel::Ttm,
        CostKernel::Mttkrp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CostKernel::Tew => "TEW",
            CostKernel::Ts => "TS",
            CostKernel::Ttv => "TTV",
            CostKernel::Ttm => "TTM",
            CostKernel::Mttkrp => "MTTKRP",
        }
    }
}

/// Model inputs. `nfibs`, `dim` (the cubical mode size I) and `rank` are
/// only required by the rows that use them.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CostParams {
    pub nnz: u64,
    pub nfibs: Option<u64>,
    pub dim: Option<u64>,
    pub rank: Option<u64>,
}

impl CostParams {
    pub fn new(nnz: u64) -> Self {
        CostParams {
            nnz,
            ..Default::default()
        }
    }

    pub fn nfibs(mut self, nfibs: u64) -> Self {
        self.nfibs = Some(nfibs);
        self
    }

    pub fn dim(mut self, dim: u64) -> Self {
        self.dim = Some(dim);
        self
    }

    pub fn rank(mut self, rank: u64) -> Self {
        self.rank = Some(rank);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostEstimate {
    pub storage_bytes: u64,
    pub work_flops: u64,
    pub traffic_bytes: u64,
    /// `work_flops / traffic_bytes`.
    pub arithmetic_intensity: f64,
}

impl CostEstimate {
    fn new(storage_bytes: u64, work_flops: u64, traffic_bytes: u64) -> Self {
        CostEstimate {
            storage_bytes,
            work_flops,
            traffic_bytes,
            arithmetic_intensity: work_flops as f64 / traffic_bytes as f64,
        }
    }
}

pub fn estimate(kernel: CostKernel, p: CostParams) -> Result<CostEstimate> {
    let name = kernel.name();
    let need = |v: Option<u64>, param: &'static str| -> Result<u64> {
        match v {
            None => Err(Error::MissingParameter {
                kernel: name,
                param,
            }),
            Some(0) => Err(Error::NonPositiveParameter { param }),
            Some(v) => Ok(v),
        }
    };
    let nnz = need(Some(p.nnz), "nnz")?;
    let est = match kernel {
        CostKernel::Tew => CostEstimate::new(48 * nnz, nnz, 36 * nnz),
        CostKernel::Ts => CostEstimate::new(32 * nnz, nnz, 32 * nnz),
        CostKernel::Ttv => {
            let nf = need(p.nfibs, "nfibs")?;
            CostEstimate::new(16 * nnz + 12 * nf, 2 * nnz, 12 * nnz + 20 * nf)
        }
        CostKernel::Ttm => {
            let nf = need(p.nfibs, "nfibs")?;
            let i = need(p.dim, "dim")?;
            let r = need(p.rank, "rank")?;
            CostEstimate::new(
                16 * nnz + 16 * nf * r + 4 * i * r,
                2 * nnz * r,
                4 * nnz * r + 8 * nnz + 12 * nf * r + 8 * nf,
            )
        }
        CostKernel::Mttkrp => {
            let i = need(p.dim, "dim")?;
            let r = need(p.rank, "rank")?;
            CostEstimate::new(16 * nnz + 12 * i * r, 3 * nnz * r, 12 * nnz * r + 16 * nnz)
        }
    };
    Ok(est)
}

/// Per-thread flop counters, compiled in only with debug assertions.
///
/// Kernels record their floating-point operations at the loop that
/// performs them. Counters are thread-local, so only work executed on the
/// calling thread is observed; use the sequential kernels to cross-check
/// the model.
pub mod flops {
    #[cfg(debug_assertions)]
    use std::cell::Cell;

    /// Whether this build records flops.
    pub const ENABLED: bool = cfg!(debug_assertions);

    #[cfg(debug_assertions)]
    thread_local! {
        static COUNTER: Cell<u64> = const { Cell::new(0) };
    }

    #[inline(always)]
    #[allow(unused_variables)]
    pub(crate) fn record(n: u64) {
        #[cfg(debug_assertions)]
        COUNTER.with(|c| c.set(c.get() + n));
    }

    /// Runs `f` and returns its result with the number of flops it
    /// performed on this thread, or `None` when counters are compiled out.
    pub fn measured_flops<R>(f: impl FnOnce() -> R) -> (R, Option<u64>) {
        #[cfg(debug_assertions)]
        {
            let before = COUNTER.with(Cell::get);
            let out = f();
            let after = COUNTER.with(Cell::get);
            (out, Some(after - before))
        }
        #[cfg(not(debug_assertions))]
        {
            (f(), None)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tew_row() {
        let e = estimate(CostKernel::Tew, CostParams::new(1000)).unwrap();
        assert_eq!(
            (e.storage_bytes, e.work_flops, e.traffic_bytes),
            (48000, 1000, 36000)
        );
        assert_eq!(e.arithmetic_intensity, 1.0 / 36.0);
    }

    #[test]
    fn mttkrp_row() {
        let e = estimate(CostKernel::Mttkrp, CostParams::new(1000).dim(100).rank(16)).unwrap();
        assert_eq!(e.work_flops, 48_000);
        assert_eq!(e.traffic_bytes, 208_000);
        assert_eq!(e.storage_bytes, 16_000 + 12 * 100 * 16);
    }

    #[test]
    fn ttv_intensity_limit() {
        // nfibs = nnz / 10: 2 nnz / (12 nnz + 2 nnz) = 1/7 exactly.
        let e = estimate(
            CostKernel::Ttv,
            CostParams::new(10_000_000).nfibs(1_000_000),
        )
        .unwrap();
        assert!((e.arithmetic_intensity - 1.0 / 7.0).abs() < 1e-15);
    }

    #[test]
    fn missing_and_zero_parameters() {
        assert!(matches!(
            estimate(CostKernel::Ttm, CostParams::new(10).nfibs(2).dim(3)),
            Err(Error::MissingParameter { param: "rank", .. })
        ));
        assert!(matches!(
            estimate(CostKernel::Ttv, CostParams::new(10)),
            Err(Error::MissingParameter { param: "nfibs", .. })
        ));
        assert!(matches!(
            estimate(CostKernel::Ts, CostParams::new(0)),
            Err(Error::NonPositiveParameter { param: "nnz" })
        ));
        // Unused parameters are ignored.
        assert!(estimate(CostKernel::Ts, CostParams::new(5).rank(3)).is_ok());
    }
}
