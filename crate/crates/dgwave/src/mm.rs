//! MatrixMarket output for debugging dumps.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use nalgebra::{DMatrix, DVector};

use crate::error::DgError;

/// Write a dense matrix in coordinate format, skipping exact zeros.
pub fn write_matrix(m: &DMatrix<f64>, path: impl AsRef<Path>) -> Result<(), DgError> {
    let path = path.as_ref();
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    let mut w = BufWriter::new(File::create(path)?);
    let nnz = m.iter().filter(|&&v| v != 0.0).count();
    writeln!(w, "%%MatrixMarket matrix coordinate real general")?;
    writeln!(w, "{} {} {}", m.nrows(), m.ncols(), nnz)?;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let v = m[(i, j)];
            if v != 0.0 {
                writeln!(w, "{} {} {:.17e}", i + 1, j + 1, v)?;
            }
        }
    }
    Ok(())
}

/// Write a vector in array format.
pub fn write_vector(v: &DVector<f64>, path: impl AsRef<Path>) -> Result<(), DgError> {
    let path = path.as_ref();
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "%%MatrixMarket matrix array real general")?;
    writeln!(w, "{} 1", v.len())?;
    for x in v.iter() {
        writeln!(w, "{x:.17e}")?;
    }
    Ok(())
}
