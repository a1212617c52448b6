use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use sptk_bench::{
    emit_report, run_bench, BenchConfig, Format, InputSpec, KernelKind, ModeSel, Precision,
    SyntheticSpec, Variant,
};
use sptk_core::kernels::ElementOp;
use sptk_core::par::MttkrpStrategy;

/// Times sparse tensor kernels on a `.tns` file or a synthetic tensor.
#[derive(Debug, Parser)]
#[command(name = "bench", version)]
struct Cli {
    #[arg(long, value_enum)]
    kernel: KernelKind,
    /// Element-wise operation (tew-eq, tew, ts).
    #[arg(long, default_value = "add")]
    op: ElementOp,
    /// Scalar operand for ts.
    #[arg(long, default_value_t = 2.0)]
    scalar: f64,
    /// Input tensor in FROSTT `.tns` format.
    #[arg(
        long,
        conflicts_with = "synthetic",
        required_unless_present = "synthetic"
    )]
    input: Option<PathBuf>,
    /// Second operand for tew-eq and tew; defaults to the first input.
    #[arg(long, requires = "input")]
    input2: Option<PathBuf>,
    /// Generated input as DIMS:NNZ:SEED, e.g. 64x64x64:10000:1.
    #[arg(long)]
    synthetic: Option<SyntheticSpec>,
    /// Mode index, or `all` for every mode plus a summed row.
    #[arg(long, default_value = "all")]
    mode: ModeSel,
    #[arg(long, default_value_t = 16)]
    rank: usize,
    /// Worker threads for the parallel variant; 0 uses SPTK_NUM_THREADS or
    /// the hardware parallelism.
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Timed runs per configuration, after one untimed warm-up.
    #[arg(long, default_value_t = 5)]
    runs: usize,
    #[arg(long, value_enum, default_value = "both")]
    variant: Variant,
    /// Update strategy for parallel MTTKRP.
    #[arg(long, default_value = "privatize")]
    strategy: MttkrpStrategy,
    #[arg(long, value_enum, default_value = "f32")]
    precision: Precision,
    #[arg(long, value_enum, default_value = "human")]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

const USAGE_ERROR: u8 = 1;
const CROSS_CHECK_FAILED: u8 = 2;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(USAGE_ERROR)
            } else {
                ExitCode::SUCCESS
            };
        }
    };

    let input = match (cli.input, cli.synthetic) {
        (Some(first), None) => InputSpec::Files {
            first,
            second: cli.input2,
        },
        (None, Some(spec)) => InputSpec::Synthetic(spec),
        _ => unreachable!("clap enforces exactly one input source"),
    };
    let cfg = BenchConfig {
        op: cli.op,
        scalar: cli.scalar,
        mode: cli.mode,
        rank: cli.rank,
        threads: cli.threads,
        runs: cli.runs,
        variant: cli.variant,
        strategy: cli.strategy,
        precision: cli.precision,
        ..BenchConfig::new(cli.kernel, input)
    };

    let reports = match run_bench(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("bench: {e}");
            return ExitCode::from(USAGE_ERROR);
        }
    };
    let text = match emit_report(&reports, cli.format) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("bench: cannot format report: {e}");
            return ExitCode::from(USAGE_ERROR);
        }
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("bench: cannot write {}: {e}", path.display());
                return ExitCode::from(USAGE_ERROR);
            }
        }
        None => print!("{text}"),
    }

    if reports.iter().any(|r| r.cross_check == Some(false)) {
        eprintln!("bench: sequential and parallel results disagree");
        return ExitCode::from(CROSS_CHECK_FAILED);
    }
    ExitCode::SUCCESS
}
