use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::tns::read_tns_with_dims;
use crate::error::{Error, Result};
use crate::tensor::SparseTensor;
use crate::value::Value;

/// Relative tolerance between a record's density and `nnz / prod(dims)`.
pub const DENSITY_TOLERANCE: f64 = 0.05;

/// A collection of dataset records, stored as TOML:
///
/// ```toml
/// [[tensor]]
/// name = "vast"
/// order = 3
/// dims = [165427, 11374, 2]
/// nnz = 26021945
/// density = 6.9e-3
/// source = "vast-2015-mc1-3d.tns"
/// checksum = "sha256:…"   # optional
/// ```
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifest {
    #[serde(rename = "tensor", default)]
    pub tensors: Vec<DatasetRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetRecord {
    pub name: String,
    pub order: usize,
    pub dims: Vec<usize>,
    pub nnz: u64,
    pub density: f64,
    /// Path of the `.tns` file (relative to the manifest) or a URL.
    pub source: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checksum: Option<String>,
}

impl DatasetManifest {
    pub fn from_toml(text: &str) -> Result<Self> {
        let m: DatasetManifest =
            toml::from_str(text).map_err(|e| Error::Manifest(e.to_string()))?;
        m.validate()?;
        Ok(m)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Manifest(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        self.tensors.iter().try_for_each(DatasetRecord::validate)
    }

    pub fn find(&self, name: &str) -> Option<&DatasetRecord> {
        self.tensors.iter().find(|r| r.name == name)
    }
}

impl DatasetRecord {
    /// Describes an in-memory tensor.
    pub fn describe<V: Value>(name: &str, t: &SparseTensor<V>, source: &str) -> Self {
        DatasetRecord {
            name: name.to_string(),
            order: t.order(),
            dims: t.dims().to_vec(),
            nnz: t.nnz() as u64,
            density: density(t.nnz() as u64, t.dims()),
            source: source.to_string(),
            checksum: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Manifest(format!("{}: {msg}", self.name)));
        if self.order != self.dims.len() {
            return fail(format!(
                "order {} does not match {} dims",
                self.order,
                self.dims.len()
            ));
        }
        if self.dims.is_empty() || self.dims.contains(&0) {
            return fail(format!("dims {:?} must be positive", self.dims));
        }
        let actual = density(self.nnz, &self.dims);
        if (actual - self.density).abs() > DENSITY_TOLERANCE * actual {
            return fail(format!(
                "density {} differs from nnz/prod(dims) = {actual:.3e} by more than {}%",
                self.density,
                DENSITY_TOLERANCE * 100.0
            ));
        }
        Ok(())
    }

    /// Resolves `source` against the manifest's directory.
    pub fn source_path(&self, manifest_dir: &Path) -> PathBuf {
        manifest_dir.join(&self.source)
    }

    /// Compares the file's SHA-256 digest with the recorded checksum, if any.
    pub fn verify_checksum(&self, path: &Path) -> Result<()> {
        let Some(expected) = &self.checksum else {
            return Ok(());
        };
        let actual = file_checksum(path)?;
        if &actual != expected {
            return Err(Error::Manifest(format!(
                "{}: checksum mismatch (recorded {expected}, file {actual})",
                self.name
            )));
        }
        Ok(())
    }

    /// Loads the tensor with the recorded dims pinned and checks nnz.
    pub fn load<V: Value>(&self, manifest_dir: &Path) -> Result<SparseTensor<V>> {
        let path = self.source_path(manifest_dir);
        self.verify_checksum(&path)?;
        let t = read_tns_with_dims(&path, Some(&self.dims))?;
        if t.nnz() as u64 != self.nnz {
            return Err(Error::Manifest(format!(
                "{}: file holds {} entries, record says {}",
                self.name,
                t.nnz(),
                self.nnz
            )));
        }
        Ok(t)
    }
}

/// `sha256:<hex>` digest of a file.
pub fn file_checksum(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(format!("sha256:{}", hex::encode(Sha256::digest(&bytes))))
}

fn density(nnz: u64, dims: &[usize]) -> f64 {
    dims.iter().fold(nnz as f64, |acc, &d| acc / d as f64)
}
