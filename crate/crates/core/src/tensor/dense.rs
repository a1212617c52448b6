use crate::error::{Error, Result};
use crate::value::Value;

/// Row-major dense matrix. Element `(i, r)` lives at `i * cols + r`.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<V> {
    rows: usize,
    cols: usize,
    data: Vec<V>,
}

impl<V: Value> DenseMatrix<V> {
    pub fn new(rows: usize, cols: usize, data: Vec<V>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::ShapeMismatch(format!(
                "matrix shape {rows}x{cols} must be positive"
            )));
        }
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{} elements for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(DenseMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::filled(rows, cols, V::zero())
    }

    pub fn filled(rows: usize, cols: usize, v: V) -> Self {
        assert!(rows > 0 && cols > 0, "matrix shape must be positive");
        DenseMatrix {
            rows,
            cols,
            data: vec![v; rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> V) -> Self {
        assert!(rows > 0 && cols > 0, "matrix shape must be positive");
        let data = (0..rows * cols).map(|p| f(p / cols, p % cols)).collect();
        DenseMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, r: usize) -> V {
        self.data[i * self.cols + r]
    }

    pub fn set(&mut self, i: usize, r: usize, v: V) {
        self.data[i * self.cols + r] = v;
    }

    pub fn row(&self, i: usize) -> &[V] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn data(&self) -> &[V] {
        &self.data
    }

    pub(crate) fn data_mut(&mut self) -> &mut [V] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<V> {
        self.data
    }

    pub fn cast<W: Value>(&self) -> DenseMatrix<W> {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| W::from_f64(v.as_f64())).collect(),
        }
    }
}

/// Dense vector operand.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseVector<V> {
    data: Vec<V>,
}

impl<V: Value> DenseVector<V> {
    pub fn new(data: Vec<V>) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::ShapeMismatch(
                "vector length must be positive".into(),
            ));
        }
        Ok(DenseVector { data })
    }

    pub fn filled(len: usize, v: V) -> Self {
        assert!(len > 0, "vector length must be positive");
        DenseVector { data: vec![v; len] }
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_slice(&self) -> &[V] {
        &self.data
    }

    pub fn cast<W: Value>(&self) -> DenseVector<W> {
        DenseVector {
            data: self.data.iter().map(|v| W::from_f64(v.as_f64())).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_major_layout() {
        let m = DenseMatrix::new(2, 3, vec![1.0f32, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        assert_eq!(m.get(1, 0), 4.0);
        assert_eq!(m.row(0), &[1.0, 2.0, 3.0]);
        assert!(DenseMatrix::new(2, 3, vec![1.0f32; 5]).is_err());
        assert!(DenseVector::<f32>::new(vec![]).is_err());
    }
}
