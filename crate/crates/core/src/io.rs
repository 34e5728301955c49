//! Plain CSV (de)serialization of dense matrices and vectors, row-major with
//! no header.

use std::path::Path;

use ndarray::{Array1, Array2, ArrayView1, ArrayView2};

use crate::error::{Error, Result};

pub fn write_matrix_csv(path: impl AsRef<Path>, m: ArrayView2<'_, f64>) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_path(path)?;
    for row in m.rows() {
        w.write_record(row.iter().map(|v| v.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_matrix_csv(path: impl AsRef<Path>) -> Result<Array2<f64>> {
    let mut r = csv::ReaderBuilder::new().has_headers(false).from_path(path)?;
    let mut data = Vec::new();
    let mut cols = None;
    let mut rows = 0;
    for record in r.records() {
        let record = record?;
        match cols {
            None => cols = Some(record.len()),
            Some(c) if c != record.len() => {
                return Err(Error::DimensionMismatch { expected: c, found: record.len() })
            }
            _ => {}
        }
        for field in record.iter() {
            data.push(parse_f64(field)?);
        }
        rows += 1;
    }
    let cols = cols.unwrap_or(0);
    Ok(Array2::from_shape_vec((rows, cols), data).expect("row lengths checked"))
}

/// One value per line.
pub fn write_vector_csv(path: impl AsRef<Path>, v: ArrayView1<'_, f64>) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_path(path)?;
    for x in v {
        w.write_record([x.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_vector_csv(path: impl AsRef<Path>) -> Result<Array1<f64>> {
    let m = read_matrix_csv(path)?;
    if m.ncols() > 1 {
        return Err(Error::DimensionMismatch { expected: 1, found: m.ncols() });
    }
    let n = m.len();
    Ok(m.into_shape_with_order(n).expect("single column"))
}

fn parse_f64(field: &str) -> Result<f64> {
    field
        .trim()
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("not a number: {field:?}")))
}
