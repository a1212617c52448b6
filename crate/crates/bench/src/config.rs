use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::ValueEnum;
use sptk_core::kernels::ElementOp;
use sptk_core::par::MttkrpStrategy;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KernelKind {
    TewEq,
    Tew,
    Ts,
    Ttv,
    Ttm,
    Mttkrp,
}

impl KernelKind {
    pub fn name(self) -> &'static str {
        match self {
            KernelKind::TewEq => "tew-eq",
            KernelKind::Tew => "tew",
            KernelKind::Ts => "ts",
            KernelKind::Ttv => "ttv",
            KernelKind::Ttm => "ttm",
            KernelKind::Mttkrp => "mttkrp",
        }
    }

    /// Whether the kernel contracts or accumulates along a chosen mode.
    pub fn has_mode(self) -> bool {
        matches!(self, KernelKind::Ttv | KernelKind::Ttm | KernelKind::Mttkrp)
    }

    pub fn uses_rank(self) -> bool {
        matches!(self, KernelKind::Ttm | KernelKind::Mttkrp)
    }

    /// Every kernel but MTTKRP gives bit-identical parallel results.
    pub fn is_deterministic(self) -> bool {
        self != KernelKind::Mttkrp
    }
}

impl fmt::Display for KernelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Variant {
    Seq,
    Par,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Precision {
    F32,
    F64,
}

impl Precision {
    pub fn name(self) -> &'static str {
        match self {
            Precision::F32 => "f32",
            Precision::F64 => "f64",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Human,
}

/// A single mode or every mode followed by a summed row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeSel {
    One(usize),
    All,
}

impl FromStr for ModeSel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "all" {
            return Ok(ModeSel::All);
        }
        s.parse()
            .map(ModeSel::One)
            .map_err(|_| format!("mode must be a non-negative integer or `all`, got `{s}`"))
    }
}

/// `DIMS:NNZ:SEED`, with dims separated by `x` or `,` (e.g. `64x64x64:10000:1`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntheticSpec {
    pub dims: Vec<usize>,
    pub nnz: usize,
    pub seed: u64,
}

impl FromStr for SyntheticSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || {
            format!(
                "synthetic spec must look like DIMS:NNZ:SEED (e.g. 64x64x64:10000:1), got `{s}`"
            )
        };
        let parts: Vec<&str> = s.split(':').collect();
        let [dims, nnz, seed] = parts[..] else {
            return Err(bad());
        };
        let dims: Vec<usize> = dims
            .split(['x', ','])
            .map(|d| d.trim().parse().ok().filter(|&d: &usize| d > 0))
            .collect::<Option<_>>()
            .ok_or_else(bad)?;
        Ok(SyntheticSpec {
            dims,
            nnz: nnz.trim().parse().map_err(|_| bad())?,
            seed: seed.trim().parse().map_err(|_| bad())?,
        })
    }
}

impl fmt::Display for SyntheticSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dims: Vec<String> = self.dims.iter().map(usize::to_string).collect();
        write!(f, "synthetic-{}-{}-{}", dims.join("x"), self.nnz, self.seed)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InputSpec {
    Files {
        first: PathBuf,
        second: Option<PathBuf>,
    },
    Synthetic(SyntheticSpec),
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub kernel: KernelKind,
    pub op: ElementOp,
    /// Scalar operand of TS.
    pub scalar: f64,
    pub input: InputSpec,
    pub mode: ModeSel,
    pub rank: usize,
    /// `0` resolves to `SPTK_NUM_THREADS` or the hardware parallelism.
    pub threads: usize,
    pub runs: usize,
    pub variant: Variant,
    pub strategy: MttkrpStrategy,
    pub precision: Precision,
}

impl BenchConfig {
    /// Defaults: five timed runs, rank 16, all modes.
    pub fn new(kernel: KernelKind, input: InputSpec) -> Self {
        BenchConfig {
            kernel,
            op: ElementOp::Add,
            scalar: 2.0,
            input,
            mode: ModeSel::All,
            rank: 16,
            threads: 0,
            runs: 5,
            variant: Variant::Both,
            strategy: MttkrpStrategy::Privatize,
            precision: Precision::F32,
        }
    }
}
