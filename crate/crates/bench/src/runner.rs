use std::time::Instant;

use sptk_core::analysis::{estimate, CostEstimate, CostKernel, CostParams};
use sptk_core::io::{gen_synthetic, random_matrix, random_vector, read_tns, Distribution};
use sptk_core::kernels::{
    mttkrp, tew, tew_eq, ts, ttm_with_fibers, ttv_with_fibers, ElementOp, ScalarOp,
};
use sptk_core::par::{
    par_mttkrp, par_tew, par_tew_eq, par_ts, par_ttm_with_fibers, par_ttv_with_fibers,
    resolve_threads,
};
use sptk_core::tensor::build_fiber_index;
use sptk_core::{DenseMatrix, DenseVector, FiberIndex, SparseTensor, Value};

use crate::config::{BenchConfig, InputSpec, KernelKind, ModeSel, Precision, Variant};
use crate::report::{BenchReport, EnvInfo};

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Kernel(#[from] sptk_core::Error),
}

type Result<T> = std::result::Result<T, BenchError>;

/// Runs every requested kernel x mode x variant combination.
///
/// Each row times `runs` repetitions after one untimed warm-up. Loading,
/// sorting and fiber preprocessing happen outside the timed region and
/// are reported in their own fields. With `mode = all` every mode is run
/// and a summed row follows for each variant.
pub fn run_bench(cfg: &BenchConfig) -> Result<Vec<BenchReport>> {
    if cfg.runs == 0 {
        return Err(BenchError::Config("runs must be at least 1".into()));
    }
    if cfg.kernel.uses_rank() && cfg.rank == 0 {
        return Err(BenchError::Config("rank must be at least 1".into()));
    }
    if cfg.kernel == KernelKind::Tew && cfg.op == ElementOp::Div {
        return Err(BenchError::Config(
            "division is only defined for tew-eq (same non-zero pattern)".into(),
        ));
    }
    if cfg.kernel == KernelKind::Ts && !matches!(cfg.op, ElementOp::Add | ElementOp::Mul) {
        return Err(BenchError::Config("ts supports only add and mul".into()));
    }
    match cfg.precision {
        Precision::F32 => Runner::<f32>::new(cfg)?.run(),
        Precision::F64 => Runner::<f64>::new(cfg)?.run(),
    }
}

enum Output<V> {
    Tensor(SparseTensor<V>),
    Matrix(DenseMatrix<V>),
}

/// Operands for one mode, already in the layout the kernel expects.
struct Prepared<V> {
    x: SparseTensor<V>,
    y: Option<SparseTensor<V>>,
    fibers: Option<FiberIndex>,
    vector: Option<DenseVector<V>>,
    sort_time: f64,
    preprocess_time: f64,
}

struct Runner<'a, V> {
    cfg: &'a BenchConfig,
    name: String,
    x: SparseTensor<V>,
    y: Option<SparseTensor<V>>,
    coalesce_time: f64,
    factors: Vec<DenseMatrix<V>>,
    threads: usize,
    host: String,
}

impl<'a, V: Value> Runner<'a, V> {
    fn new(cfg: &'a BenchConfig) -> Result<Self> {
        let (name, x, y) = load::<V>(cfg)?;
        let start = Instant::now();
        let x = x.coalesce();
        let y = y.map(SparseTensor::coalesce);
        let coalesce_time = start.elapsed().as_secs_f64();

        if let ModeSel::One(m) = cfg.mode {
            if cfg.kernel.has_mode() && m >= x.order() {
                return Err(BenchError::Config(format!(
                    "mode {m} is out of range for an order-{} tensor",
                    x.order()
                )));
            }
        }
        if cfg.kernel.has_mode() && x.order() < 2 {
            return Err(BenchError::Config(format!(
                "{} needs a tensor of order 2 or more",
                cfg.kernel
            )));
        }
        let factors = if cfg.kernel.uses_rank() {
            x.dims()
                .iter()
                .enumerate()
                .map(|(d, &n)| random_matrix(n, cfg.rank, 100 + d as u64))
                .collect::<std::result::Result<_, _>>()?
        } else {
            Vec::new()
        };
        Ok(Runner {
            cfg,
            name,
            x,
            y,
            coalesce_time,
            factors,
            threads: resolve_threads(cfg.threads),
            host: host_tag(),
        })
    }

    fn run(&self) -> Result<Vec<BenchReport>> {
        let modes: Vec<Option<usize>> = match (self.cfg.kernel.has_mode(), self.cfg.mode) {
            (false, _) => vec![None],
            (true, ModeSel::One(m)) => vec![Some(m)],
            (true, ModeSel::All) => (0..self.x.order()).map(Some).collect(),
        };
        let variants: &[Variant] = match self.cfg.variant {
            Variant::Both => &[Variant::Seq, Variant::Par],
            Variant::Seq => &[Variant::Seq],
            Variant::Par => &[Variant::Par],
        };

        let mut rows = Vec::new();
        let mut per_variant: Vec<Vec<BenchReport>> = vec![Vec::new(); variants.len()];
        for &mode in &modes {
            let prep = self.prepare(mode)?;
            let mut outputs = Vec::new();
            let mut mode_rows = Vec::new();
            for &variant in variants {
                let (times, out) = time_runs(self.cfg.runs, || self.execute(&prep, mode, variant))?;
                mode_rows.push(self.report(&prep, mode, variant, times, &out));
                outputs.push(out);
            }
            if let [seq, par] = &outputs[..] {
                let ok = self.agree(seq, par);
                mode_rows.iter_mut().for_each(|r| r.cross_check = Some(ok));
            }
            for (k, r) in mode_rows.into_iter().enumerate() {
                per_variant[k].push(r.clone());
                rows.push(r);
            }
        }
        if self.cfg.kernel.has_mode() && self.cfg.mode == ModeSel::All {
            rows.extend(per_variant.iter().map(|rs| sum_row(rs)));
        }
        Ok(rows)
    }

    fn prepare(&self, mode: Option<usize>) -> Result<Prepared<V>> {
        let mut x = self.x.clone();
        let mut y = None;
        let mut fibers = None;
        let mut vector = None;
        let mut sort_time = self.coalesce_time;
        let mut preprocess_time = 0.0;
        match self.cfg.kernel {
            KernelKind::TewEq | KernelKind::Tew => {
                let mut other = self.y.clone().unwrap_or_else(|| x.clone());
                let start = Instant::now();
                let ascending: Vec<usize> = (0..x.order()).collect();
                if x.sort_order() != Some(&ascending[..]) {
                    x.sort_lexicographic(&ascending)?;
                }
                if other.order() == x.order() && other.sort_order() != Some(&ascending[..]) {
                    other.sort_lexicographic(&ascending)?;
                }
                sort_time += start.elapsed().as_secs_f64();
                y = Some(other);
            }
            KernelKind::Ttv | KernelKind::Ttm => {
                let mode = mode.expect("mode kernels run per mode");
                let order: Vec<usize> = (0..x.order())
                    .filter(|&d| d != mode)
                    .chain([mode])
                    .collect();
                let start = Instant::now();
                x.sort_lexicographic(&order)?;
                sort_time += start.elapsed().as_secs_f64();
                let start = Instant::now();
                fibers = Some(build_fiber_index(&x, mode)?);
                preprocess_time = start.elapsed().as_secs_f64();
                if self.cfg.kernel == KernelKind::Ttv {
                    vector = Some(random_vector(x.dims()[mode], 200 + mode as u64)?);
                }
            }
            KernelKind::Ts | KernelKind::Mttkrp => {}
        }
        Ok(Prepared {
            x,
            y,
            fibers,
            vector,
            sort_time,
            preprocess_time,
        })
    }

    fn execute(&self, p: &Prepared<V>, mode: Option<usize>, variant: Variant) -> Result<Output<V>> {
        let par = variant == Variant::Par;
        let n = self.threads;
        let op = self.cfg.op;
        let out = match self.cfg.kernel {
            KernelKind::TewEq => {
                let y = p.y.as_ref().expect("prepared");
                Output::Tensor(if par {
                    par_tew_eq(&p.x, y, op, n)?
                } else {
                    tew_eq(&p.x, y, op)?
                })
            }
            KernelKind::Tew => {
                let y = p.y.as_ref().expect("prepared");
                Output::Tensor(if par {
                    par_tew(&p.x, y, op, n)?
                } else {
                    tew(&p.x, y, op)?
                })
            }
            KernelKind::Ts => {
                let op = if op == ElementOp::Mul {
                    ScalarOp::Mul
                } else {
                    ScalarOp::Add
                };
                let s = V::from_f64(self.cfg.scalar);
                Output::Tensor(if par {
                    par_ts(&p.x, s, op, n)
                } else {
                    ts(&p.x, s, op)
                })
            }
            KernelKind::Ttv => {
                let (v, f) = (
                    p.vector.as_ref().expect("prepared"),
                    p.fibers.as_ref().expect("prepared"),
                );
                Output::Tensor(if par {
                    par_ttv_with_fibers(&p.x, v, f, n)?
                } else {
                    ttv_with_fibers(&p.x, v, f)?
                })
            }
            KernelKind::Ttm => {
                let f = p.fibers.as_ref().expect("prepared");
                let u = &self.factors[f.mode()];
                Output::Tensor(if par {
                    par_ttm_with_fibers(&p.x, u, f, n)?
                } else {
                    ttm_with_fibers(&p.x, u, f)?
                })
            }
            KernelKind::Mttkrp => {
                let mode = mode.expect("mode kernels run per mode");
                Output::Matrix(if par {
                    par_mttkrp(&p.x, &self.factors, mode, n, self.cfg.strategy)?
                } else {
                    mttkrp(&p.x, &self.factors, mode)?
                })
            }
        };
        Ok(out)
    }

    /// Seq/par agreement per determinism class: bit-identical tensors for
    /// every kernel but MTTKRP, which is compared within the reassociation
    /// tolerance of its precision.
    fn agree(&self, a: &Output<V>, b: &Output<V>) -> bool {
        match (a, b) {
            (Output::Tensor(a), Output::Tensor(b)) => {
                a.dims() == b.dims()
                    && a.indices() == b.indices()
                    && a.values()
                        .iter()
                        .zip(b.values())
                        .all(|(p, q)| p.as_f64().to_bits() == q.as_f64().to_bits())
            }
            (Output::Matrix(a), Output::Matrix(b)) => {
                let tol = if V::BYTES == 4 { 1e-4 } else { 1e-10 };
                let scale = a.data().iter().fold(0.0f64, |m, v| m.max(v.as_f64().abs()));
                (a.rows(), a.cols()) == (b.rows(), b.cols())
                    && a.data()
                        .iter()
                        .zip(b.data())
                        .all(|(p, q)| (p.as_f64() - q.as_f64()).abs() <= tol * scale)
            }
            _ => false,
        }
    }

    fn report(
        &self,
        p: &Prepared<V>,
        mode: Option<usize>,
        variant: Variant,
        times: Vec<f64>,
        out: &Output<V>,
    ) -> BenchReport {
        let cfg = self.cfg;
        let nnz = self.x.nnz() as u64;
        let rank = cfg.kernel.uses_rank().then_some(cfg.rank);
        let r = cfg.rank as u64;
        let flops = match (cfg.kernel, out) {
            (KernelKind::TewEq | KernelKind::Ts, _) => nnz,
            (KernelKind::Tew, Output::Tensor(z)) => {
                let y = p.y.as_ref().map_or(0, |y| y.nnz()) as u64;
                if cfg.op == ElementOp::Mul {
                    z.nnz() as u64
                } else {
                    nnz + y - z.nnz() as u64
                }
            }
            (KernelKind::Ttv, _) => 2 * nnz,
            (KernelKind::Ttm, _) => 2 * nnz * r,
            (KernelKind::Mttkrp, _) => self.x.order() as u64 * nnz * r,
            _ => 0,
        };
        let mean_time = times.iter().sum::<f64>() / times.len() as f64;
        let op = match cfg.kernel {
            KernelKind::TewEq | KernelKind::Tew | KernelKind::Ts => Some(cfg.op.name().to_string()),
            _ => None,
        };
        BenchReport {
            tensor: self.name.clone(),
            dims: self.x.dims().to_vec(),
            nnz: self.x.nnz(),
            kernel: cfg.kernel.name().into(),
            op,
            mode: mode.map_or_else(|| "-".into(), |m| m.to_string()),
            variant: if variant == Variant::Par {
                "par"
            } else {
                "seq"
            }
            .into(),
            strategy: (variant == Variant::Par && cfg.kernel == KernelKind::Mttkrp)
                .then(|| cfg.strategy.name().to_string()),
            threads: if variant == Variant::Par {
                self.threads
            } else {
                1
            },
            rank,
            runs: times.len(),
            times,
            mean_time,
            sort_time: p.sort_time,
            preprocess_time: p.preprocess_time,
            flops,
            gflops: if mean_time > 0.0 {
                flops as f64 / mean_time / 1e9
            } else {
                0.0
            },
            cost: self.cost(p, mode),
            cross_check: None,
            env: EnvInfo {
                threads: self.threads,
                precision: cfg.precision.name().into(),
                host: self.host.clone(),
            },
        }
    }

    /// Cost model estimate; the model covers third-order tensors only.
    fn cost(&self, p: &Prepared<V>, mode: Option<usize>) -> Option<CostEstimate> {
        if self.x.order() != 3 || self.x.nnz() == 0 {
            return None;
        }
        let mut params = CostParams::new(self.x.nnz() as u64).rank(self.cfg.rank as u64);
        if let Some(m) = mode {
            params = params.dim(self.x.dims()[m] as u64);
        }
        if let Some(f) = &p.fibers {
            params = params.nfibs(f.nfibs() as u64);
        }
        let kernel = match self.cfg.kernel {
            KernelKind::TewEq | KernelKind::Tew => CostKernel::Tew,
            KernelKind::Ts => CostKernel::Ts,
            KernelKind::Ttv => CostKernel::Ttv,
            KernelKind::Ttm => CostKernel::Ttm,
            KernelKind::Mttkrp => CostKernel::Mttkrp,
        };
        estimate(kernel, params).ok()
    }
}

fn load<V: Value>(cfg: &BenchConfig) -> Result<(String, SparseTensor<V>, Option<SparseTensor<V>>)> {
    match &cfg.input {
        InputSpec::Files { first, second } => {
            let x = read_tns(first)?;
            let y = second.as_ref().map(read_tns).transpose()?;
            let name = first.file_stem().map_or_else(
                || first.display().to_string(),
                |s| s.to_string_lossy().into_owned(),
            );
            Ok((name, x, y))
        }
        InputSpec::Synthetic(spec) => {
            let x = gen_synthetic(&spec.dims, spec.nnz, spec.seed, Distribution::Uniform)?;
            // The general element-wise kernel gets an independently drawn
            // partner; every other kernel pairs the tensor with itself.
            let y = (cfg.kernel == KernelKind::Tew)
                .then(|| {
                    gen_synthetic(
                        &spec.dims,
                        spec.nnz,
                        spec.seed.wrapping_add(1),
                        Distribution::Uniform,
                    )
                })
                .transpose()?;
            Ok((spec.to_string(), x, y))
        }
    }
}

/// One untimed warm-up call followed by `runs` timed calls. Returns the
/// per-run seconds and the last output.
fn time_runs<T>(runs: usize, mut f: impl FnMut() -> Result<T>) -> Result<(Vec<f64>, T)> {
    let mut out = f()?;
    let mut times = Vec::with_capacity(runs);
    for _ in 0..runs {
        let start = Instant::now();
        let r = f()?;
        times.push(start.elapsed().as_secs_f64());
        out = r;
    }
    Ok((times, out))
}

/// Per-mode sum of a variant's rows, run by run.
fn sum_row(rows: &[BenchReport]) -> BenchReport {
    let mut total = rows[0].clone();
    total.mode = "all".into();
    total.times = (0..total.runs)
        .map(|i| rows.iter().map(|r| r.times[i]).sum())
        .collect();
    total.mean_time = total.times.iter().sum::<f64>() / total.runs as f64;
    total.sort_time = rows.iter().map(|r| r.sort_time).sum();
    total.preprocess_time = rows.iter().map(|r| r.preprocess_time).sum();
    total.flops = rows.iter().map(|r| r.flops).sum();
    total.gflops = if total.mean_time > 0.0 {
        total.flops as f64 / total.mean_time / 1e9
    } else {
        0.0
    };
    total.cost = None;
    total.cross_check = rows
        .iter()
        .map(|r| r.cross_check)
        .collect::<Option<Vec<bool>>>()
        .map(|v| v.iter().all(|&ok| ok));
    total
}

fn host_tag() -> String {
    let name = std::env::var("HOSTNAME")
        .ok()
        .or_else(|| std::fs::read_to_string("/proc/sys/kernel/hostname").ok())
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .unwrap_or_else(|| "unknown".into());
    format!("{name}/{}-{}", std::env::consts::OS, std::env::consts::ARCH)
}
