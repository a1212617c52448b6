//! Order-generic sparse tensor kernels in coordinate (COO) format.
//!
//! The crate provides the element-wise (same-pattern and general),
//! tensor-scalar, tensor-times-vector, tensor-times-matrix and MTTKRP
//! kernels, each in a sequential reference form ([`kernels`]) and a
//! multicore form ([`par`]). Dense brute-force implementations in
//! [`oracle`] serve as ground truth, [`analysis`] evaluates the analytical
//! cost model and [`io`] reads and writes FROSTT `.tns` files.
#![forbid(unsafe_code)]

pub mod analysis;
mod error;
pub mod io;
pub mod kernels;
pub mod oracle;
pub mod par;
pub mod tensor;
mod value;

pub use error::{Error, Result};
pub use tensor::{DenseMatrix, DenseVector, FiberIndex, Index, SparseMatrix, SparseTensor};
pub use value::{AtomicF32, AtomicF64, AtomicValue, Value};
