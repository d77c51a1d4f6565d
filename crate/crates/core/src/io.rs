//! Dense matrix export: one JSON header line, then row-major little-endian
//! `f64` pairs `(re, im)`.

use std::io::{BufRead, Write};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Version tag carried by every JSON document this crate emits.
pub const SCHEMA_VERSION: u32 = 1;

const DTYPE: &str = "complex128-le";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DenseHeader {
    pub schema_version: u32,
    pub rows: usize,
    pub cols: usize,
    pub dtype: String,
    /// Spinor multiplicity of each lattice index, 1 for scalar matrices.
    pub spinor_dim: usize,
}

pub fn write_dense<W: Write>(mut w: W, m: &DMatrix<Complex64>, spinor_dim: usize) -> Result<()> {
    let header = DenseHeader {
        schema_version: SCHEMA_VERSION,
        rows: m.nrows(),
        cols: m.ncols(),
        dtype: DTYPE.into(),
        spinor_dim,
    };
    serde_json::to_writer(&mut w, &header)?;
    w.write_all(b"\n")?;
    let mut buf = Vec::with_capacity(16 * m.len());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            buf.extend_from_slice(&m[(i, j)].re.to_le_bytes());
            buf.extend_from_slice(&m[(i, j)].im.to_le_bytes());
        }
    }
    w.write_all(&buf)?;
    Ok(())
}

pub fn read_dense<R: BufRead>(mut r: R) -> Result<(DenseHeader, DMatrix<Complex64>)> {
    let mut line = String::new();
    r.read_line(&mut line)?;
    let header: DenseHeader = serde_json::from_str(line.trim_end())?;
    if header.dtype != DTYPE {
        return Err(Error::invalid(format!("unsupported dtype {}", header.dtype)));
    }
    let len = header.rows.checked_mul(header.cols).and_then(|n| n.checked_mul(16)).ok_or(Error::Overflow)?;
    let mut bytes = vec![0u8; len];
    r.read_exact(&mut bytes)?;
    let mut rest = [0u8; 1];
    if r.read(&mut rest)? != 0 {
        return Err(Error::invalid("trailing bytes after matrix data"));
    }
    let f = |k: usize| f64::from_le_bytes(bytes[8 * k..8 * k + 8].try_into().expect("8 bytes"));
    let m = DMatrix::from_fn(header.rows, header.cols, |i, j| {
        let k = 2 * (i * header.cols + j);
        Complex64::new(f(k), f(k + 1))
    });
    Ok((header, m))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let m = DMatrix::from_fn(3, 2, |i, j| Complex64::new(i as f64 - 0.5, j as f64 * 1e-300));
        let mut buf = Vec::new();
        write_dense(&mut buf, &m, 1).unwrap();
        let (h, back) = read_dense(buf.as_slice()).unwrap();
        assert_eq!((h.rows, h.cols, h.spinor_dim), (3, 2, 1));
        assert_eq!(back, m);
    }

    #[test]
    fn truncated_data_rejected() {
        let m = DMatrix::from_element(2, 2, Complex64::new(1.0, 0.0));
        let mut buf = Vec::new();
        write_dense(&mut buf, &m, 1).unwrap();
        buf.pop();
        assert!(read_dense(buf.as_slice()).is_err());
        let mut extra = Vec::new();
        write_dense(&mut extra, &m, 1).unwrap();
        extra.push(0);
        assert!(read_dense(extra.as_slice()).is_err());
    }
}
