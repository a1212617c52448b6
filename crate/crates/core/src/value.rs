//! Floating-point element types supported by the kernels.

use std::fmt::{Debug, Display};
use std::str::FromStr;
use std::sync::atomic::{AtomicU32, AtomicU64, Ordering};

use num_traits::Float;

/// Element type of tensors and dense operands.
///
/// Implemented for `f32` (the default working precision, matching the
/// 32-bit accounting used by the cost model) and `f64`.
pub trait Value:
    Float + std::ops::AddAssign + Default + Debug + Display + FromStr + Send + Sync + 'static
{
    /// Storage size in bytes.
    const BYTES: usize;
    /// Short name used in reports (`f32` / `f64`).
    const NAME: &'static str;

    /// Cell supporting atomic read-modify-write accumulation.
    type Atomic: AtomicValue<Self>;

    fn as_f64(self) -> f64;
    /// Rounds to the nearest representable value.
    fn from_f64(v: f64) -> Self;
}

/// An atomically updatable cell holding a [`Value`].
pub trait AtomicValue<V>: Send + Sync {
    fn new(v: V) -> Self;
    fn fetch_add(&self, v: V);
    fn load(&self) -> V;
}

impl Value for f32 {
    const BYTES: usize = 4;
    const NAME: &'static str = "f32";
    type Atomic = AtomicF32;

    fn as_f64(self) -> f64 {
        self as f64
    }

    fn from_f64(v: f64) -> Self {
        v as f32
    }
}

impl Value for f64 {
    const BYTES: usize = 8;
    const NAME: &'static str = "f64";
    type Atomic = AtomicF64;

    fn as_f64(self) -> f64 {
        self
    }

    fn from_f64(v: f64) -> Self {
        v
    }
}

#[derive(Debug)]
pub struct AtomicF32(AtomicU32);

impl AtomicValue<f32> for AtomicF32 {
    fn new(v: f32) -> Self {
        AtomicF32(AtomicU32::new(v.to_bits()))
    }

    fn fetch_add(&self, v: f32) {
        let mut cur = self.0.load(Ordering::Relaxed);
        loop {
            let next = (f32::from_bits(cur) + v).to_bits();
            match self
                .0
                .compare_exchange_weak(cur, next, Ordering::Relaxed, Ordering::Relaxed)
            {
                Ok(_) => return,
                Err(actual) => cur = actual,
            }
        }
    }

    fn load(&self) -> f32 {
        f32::from_bits(self.0.load(Ordering::Relaxed))
    }
}

#[derive(Debug)]
pub struct AtomicF64(AtomicU64);

impl AtomicValue<f64> for AtomicF64 {
    fn new(v: f64) -> Self {
        AtomicF64(AtomicU64::new(v.to_bits()))
    }

    fn fetch_add(&self, v: f64) {
        let mut cur = self.0.load(Ordering::Relaxed);
        loop {
            let next = (f64::from_bits(cur) + v).to_bits();
            match self
                .0
                .compare_exchange_weak(cur, next, Ordering::Relaxed, Ordering::Relaxed)
            {
                Ok(_) => return,
                Err(actual) => cur = actual,
            }
        }
    }

    fn load(&self) -> f64 {
        f64::from_bits(self.0.load(Ordering::Relaxed))
    }
}
