use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use sptk_core::analysis::CostEstimate;

use crate::config::Format;

/// One timed kernel configuration. Field order is the output order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub tensor: String,
    pub dims: Vec<usize>,
    pub nnz: usize,
    pub kernel: String,
    pub op: Option<String>,
    /// Mode index, `all` for the per-mode sum, or `-` for mode-free kernels.
    pub mode: String,
    pub variant: String,
    pub strategy: Option<String>,
    pub threads: usize,
    pub rank: Option<usize>,
    pub runs: usize,
    /// Seconds per timed run, after one untimed warm-up.
    pub times: Vec<f64>,
    pub mean_time: f64,
    /// Sorting and coalescing, not included in `times`.
    pub sort_time: f64,
    /// Fiber index construction, not included in `times`.
    pub preprocess_time: f64,
    pub flops: u64,
    pub gflops: f64,
    /// Present for third-order tensors only.
    pub cost: Option<CostEstimate>,
    /// Set when both variants ran: whether they agree per the kernel's
    /// determinism class.
    pub cross_check: Option<bool>,
    pub env: EnvInfo,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvInfo {
    pub threads: usize,
    pub precision: String,
    pub host: String,
}

/// Flat CSV projection of a report.
#[derive(Debug, Serialize)]
struct CsvRow<'a> {
    tensor: &'a str,
    dims: String,
    nnz: usize,
    kernel: &'a str,
    op: &'a str,
    mode: &'a str,
    variant: &'a str,
    strategy: &'a str,
    threads: usize,
    rank: Option<usize>,
    runs: usize,
    times: String,
    mean_time: f64,
    sort_time: f64,
    preprocess_time: f64,
    flops: u64,
    gflops: f64,
    cost_storage_bytes: Option<u64>,
    cost_work_flops: Option<u64>,
    cost_traffic_bytes: Option<u64>,
    cost_arithmetic_intensity: Option<f64>,
    cross_check: Option<bool>,
    env_threads: usize,
    env_precision: &'a str,
    env_host: &'a str,
}

pub const CSV_HEADER: [&str; 25] = [
    "tensor",
    "dims",
    "nnz",
    "kernel",
    "op",
    "mode",
    "variant",
    "strategy",
    "threads",
    "rank",
    "runs",
    "times",
    "mean_time",
    "sort_time",
    "preprocess_time",
    "flops",
    "gflops",
    "cost_storage_bytes",
    "cost_work_flops",
    "cost_traffic_bytes",
    "cost_arithmetic_intensity",
    "cross_check",
    "env_threads",
    "env_precision",
    "env_host",
];

impl<'a> From<&'a BenchReport> for CsvRow<'a> {
    fn from(r: &'a BenchReport) -> Self {
        let join = |v: &[String]| v.join(";");
        CsvRow {
            tensor: &r.tensor,
            dims: join(&r.dims.iter().map(ToString::to_string).collect::<Vec<_>>()),
            nnz: r.nnz,
            kernel: &r.kernel,
            op: r.op.as_deref().unwrap_or(""),
            mode: &r.mode,
            variant: &r.variant,
            strategy: r.strategy.as_deref().unwrap_or(""),
            threads: r.threads,
            rank: r.rank,
            runs: r.runs,
            times: join(&r.times.iter().map(ToString::to_string).collect::<Vec<_>>()),
            mean_time: r.mean_time,
            sort_time: r.sort_time,
            preprocess_time: r.preprocess_time,
            flops: r.flops,
            gflops: r.gflops,
            cost_storage_bytes: r.cost.as_ref().map(|c| c.storage_bytes),
            cost_work_flops: r.cost.as_ref().map(|c| c.work_flops),
            cost_traffic_bytes: r.cost.as_ref().map(|c| c.traffic_bytes),
            cost_arithmetic_intensity: r.cost.as_ref().map(|c| c.arithmetic_intensity),
            cross_check: r.cross_check,
            env_threads: r.env.threads,
            env_precision: &r.env.precision,
            env_host: &r.env.host,
        }
    }
}

pub fn emit_report(reports: &[BenchReport], format: Format) -> Result<String, String> {
    match format {
        Format::Json => serde_json::to_string_pretty(reports)
            .map(|mut s| {
                s.push('\n');
                s
            })
            .map_err(|e| e.to_string()),
        Format::Csv => emit_csv(reports),
        Format::Human => Ok(emit_human(reports)),
    }
}

fn emit_csv(reports: &[BenchReport]) -> Result<String, String> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    w.write_record(CSV_HEADER).map_err(|e| e.to_string())?;
    for r in reports {
        w.serialize(CsvRow::from(r)).map_err(|e| e.to_string())?;
    }
    let bytes = w.into_inner().map_err(|e| e.to_string())?;
    String::from_utf8(bytes).map_err(|e| e.to_string())
}

fn emit_human(reports: &[BenchReport]) -> String {
    let mut out = String::new();
    for r in reports {
        let dims: Vec<String> = r.dims.iter().map(ToString::to_string).collect();
        let _ = write!(
            out,
            "{:<8} mode {:<3} {:<3} thr {:<3} {} [{}] nnz {}",
            r.kernel,
            r.mode,
            r.variant,
            r.threads,
            r.tensor,
            dims.join("x"),
            r.nnz
        );
        if let Some(op) = &r.op {
            let _ = write!(out, " op {op}");
        }
        if let Some(rank) = r.rank {
            let _ = write!(out, " R {rank}");
        }
        if let Some(s) = &r.strategy {
            let _ = write!(out, " {s}");
        }
        let _ = write!(
            out,
            "\n  mean {:.6e} s over {} runs | sort {:.3e} s | preprocess {:.3e} s | {:.3} GFLOP/s",
            r.mean_time, r.runs, r.sort_time, r.preprocess_time, r.gflops
        );
        if let Some(c) = &r.cost {
            let _ = write!(out, " | model AI {:.4}", c.arithmetic_intensity);
        }
        match r.cross_check {
            Some(true) => out.push_str(" | seq/par agree"),
            Some(false) => out.push_str(" | SEQ/PAR MISMATCH"),
            None => {}
        }
        out.push('\n');
    }
    out
}
