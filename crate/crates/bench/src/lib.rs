//! Benchmark harness for the sptk kernels: per-kernel, per-mode timing
//! averaged over repeated runs, sequential/parallel comparison, and JSON,
//! CSV or plain-text reports.

pub mod config;
pub mod report;
pub mod runner;

pub use config::{
    BenchConfig, Format, InputSpec, KernelKind, ModeSel, Precision, SyntheticSpec, Variant,
};
pub use report::{emit_report, BenchReport, EnvInfo, CSV_HEADER};
pub use runner::{run_bench, BenchError};
