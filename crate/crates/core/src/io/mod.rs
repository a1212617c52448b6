//! Tensor file formats, dataset manifests and synthetic tensors.

mod manifest;
mod synth;
mod tns;

pub use manifest::{file_checksum, DatasetManifest, DatasetRecord, DENSITY_TOLERANCE};
pub use synth::{gen_synthetic, random_matrix, random_vector, Distribution};
pub use tns::{parse_tns, read_tns, read_tns_with_dims, write_tns, write_tns_to};
