//! Sequential COO kernels.
//!
//! All kernels are order-generic. Accumulation follows storage order, which
//! makes the sequential result the reference the parallel variants are
//! checked against.

mod elementwise;
mod mttkrp;
mod ttm;
mod ttv;

use std::fmt;
use std::str::FromStr;

pub use elementwise::{tew, tew_eq, ts};
pub use mttkrp::mttkrp;
pub use ttm::{ttm, ttm_with_fibers};
pub use ttv::{ttv, ttv_with_fibers};

pub(crate) use elementwise::{check_tew_eq, merge_range, prepare_pair, tew_eq_block, ts_block};
pub(crate) use mttkrp::{check_factors, mttkrp_accumulate};
pub(crate) use ttm::{check_ttm, ttm_fiber_block};
pub(crate) use ttv::{check_ttv, ttv_fiber_block, ttv_output_sort_order};

/// Element-wise binary operation between two tensors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ElementOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl ElementOp {
    pub const ALL: [ElementOp; 4] = [
        ElementOp::Add,
        ElementOp::Sub,
        ElementOp::Mul,
        ElementOp::Div,
    ];

    #[inline(always)]
    pub fn apply<V: crate::Value>(self, a: V, b: V) -> V {
        match self {
            ElementOp::Add => a + b,
            ElementOp::Sub => a - b,
            ElementOp::Mul => a * b,
            ElementOp::Div => a / b,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ElementOp::Add => "add",
            ElementOp::Sub => "sub",
            ElementOp::Mul => "mul",
            ElementOp::Div => "div",
        }
    }
}

impl fmt::Display for ElementOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ElementOp {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ElementOp::ALL
            .into_iter()
            .find(|op| op.name() == s)
            .ok_or_else(|| format!("unknown operation `{s}` (expected add, sub, mul or div)"))
    }
}

/// Tensor-scalar operation. Subtraction and division reduce to these by
/// negating or inverting the scalar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScalarOp {
    Add,
    Mul,
}

impl ScalarOp {
    #[inline(always)]
    pub fn apply<V: crate::Value>(self, a: V, s: V) -> V {
        match self {
            ScalarOp::Add => a + s,
            ScalarOp::Mul => a * s,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ScalarOp::Add => "add",
            ScalarOp::Mul => "mul",
        }
    }
}

impl fmt::Display for ScalarOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
