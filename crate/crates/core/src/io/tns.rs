use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::tensor::{Index, SparseTensor};
use crate::value::Value;

/// Reads a FROSTT `.tns` file, inferring dims from the per-mode maxima.
pub fn read_tns<V: Value>(path: impl AsRef<Path>) -> Result<SparseTensor<V>> {
    read_tns_with_dims(path, None)
}

/// Reads a `.tns` file. When `dims` is given it fixes both the order and the
/// mode sizes (so empty trailing slices survive) and indices beyond it are
/// rejected.
pub fn read_tns_with_dims<V: Value>(
    path: impl AsRef<Path>,
    dims: Option<&[usize]>,
) -> Result<SparseTensor<V>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_tns(BufReader::new(file), path, dims)
}

/// Streaming `.tns` parser over any buffered reader; `origin` names the
/// source in error messages.
///
/// Each data line holds `N` 1-based integer indices followed by a value.
/// Blank lines and lines starting with `#` are skipped. `N` is fixed by the
/// first data line. The tensor is returned unsorted and may contain
/// duplicates.
pub fn parse_tns<V: Value, R: BufRead>(
    mut reader: R,
    origin: &Path,
    dims: Option<&[usize]>,
) -> Result<SparseTensor<V>> {
    let mut order = dims.map(<[usize]>::len);
    let mut indices: Vec<Vec<Index>> = order.map(|n| vec![Vec::new(); n]).unwrap_or_default();
    let mut maxima: Vec<usize> = order.map(|n| vec![0; n]).unwrap_or_default();
    let mut values = Vec::new();
    let mut line = String::new();
    let mut lineno = 0usize;

    let parse_err = |line: usize, message: String| Error::Parse {
        path: origin.to_path_buf(),
        line,
        message,
    };

    loop {
        line.clear();
        let read = reader
            .read_line(&mut line)
            .map_err(|e| Error::io(origin, e))?;
        if read == 0 {
            break;
        }
        lineno += 1;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = text.split_whitespace().collect();
        let n = match order {
            Some(n) => n,
            None => {
                if tokens.len() < 2 {
                    return Err(parse_err(
                        lineno,
                        format!(
                            "expected at least one index and a value, found {} token(s)",
                            tokens.len()
                        ),
                    ));
                }
                let n = tokens.len() - 1;
                order = Some(n);
                indices = vec![Vec::new(); n];
                maxima = vec![0; n];
                n
            }
        };
        if tokens.len() != n + 1 {
            return Err(parse_err(
                lineno,
                format!(
                    "expected {} tokens ({n} indices and a value), found {}",
                    n + 1,
                    tokens.len()
                ),
            ));
        }
        for (d, tok) in tokens[..n].iter().enumerate() {
            let i: u64 = tok
                .parse()
                .map_err(|_| parse_err(lineno, format!("non-numeric index `{tok}` in mode {d}")))?;
            if i == 0 {
                return Err(parse_err(
                    lineno,
                    format!("index in mode {d} must be at least 1"),
                ));
            }
            if i > Index::MAX as u64 + 1 {
                return Err(parse_err(
                    lineno,
                    format!("index {i} in mode {d} exceeds the 32-bit index range"),
                ));
            }
            if let Some(dims) = dims {
                if i as usize > dims[d] {
                    return Err(parse_err(
                        lineno,
                        format!(
                            "index {i} in mode {d} exceeds the declared size {}",
                            dims[d]
                        ),
                    ));
                }
            }
            maxima[d] = maxima[d].max(i as usize);
            indices[d].push((i - 1) as Index);
        }
        let tok = tokens[n];
        let v: V = tok
            .parse()
            .map_err(|_| parse_err(lineno, format!("unparsable value `{tok}`")))?;
        values.push(v);
    }

    let dims = match (dims, order) {
        (Some(d), _) => d.to_vec(),
        (None, Some(_)) => maxima,
        (None, None) => {
            return Err(parse_err(
                lineno,
                "no entries and no dimensions supplied; cannot determine the tensor order".into(),
            ))
        }
    };
    SparseTensor::new(dims, indices, values)
}

/// Writes `t` in `.tns` form: one entry per line, 1-based indices, single
/// spaces, `\n` line endings, values in shortest round-trip decimal form.
pub fn write_tns<V: Value>(t: &SparseTensor<V>, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    write_tns_to(t, &mut w).map_err(|e| Error::io(path, e))?;
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn write_tns_to<V: Value, W: Write>(t: &SparseTensor<V>, w: &mut W) -> std::io::Result<()> {
    for m in 0..t.nnz() {
        for inds in t.indices() {
            write!(w, "{} ", inds[m] as u64 + 1)?;
        }
        writeln!(w, "{}", t.values()[m])?;
    }
    Ok(())
}
