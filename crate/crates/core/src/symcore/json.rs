//! Row-major JSON layout for matrices; complex entries as `[re, im]`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A matrix as nested row arrays.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RowMatrix(pub Vec<Vec<f64>>);

impl RowMatrix {
    pub fn to_matrix(&self) -> Result<DMatrix<f64>> {
        rows_to_matrix(&self.0)
    }
}

impl From<&DMatrix<f64>> for RowMatrix {
    fn from(m: &DMatrix<f64>) -> Self {
        RowMatrix(matrix_to_rows(m))
    }
}

pub fn matrix_to_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

pub fn rows_to_matrix(rows: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let r = rows.len();
    let c = rows.first().map_or(0, |row| row.len());
    if let Some(bad) = rows.iter().find(|row| row.len() != c) {
        return Err(Error::InvalidInput(format!(
            "ragged matrix: row of length {} where {c} expected",
            bad.len()
        )));
    }
    Ok(DMatrix::from_fn(r, c, |i, j| rows[i][j]))
}

pub fn complex_to_rows(m: &DMatrix<Complex64>) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

pub fn rows_to_complex(rows: &[Vec<[f64; 2]>]) -> Result<DMatrix<Complex64>> {
    let r = rows.len();
    let c = rows.first().map_or(0, |row| row.len());
    if rows.iter().any(|row| row.len() != c) {
        return Err(Error::InvalidInput("ragged complex matrix".into()));
    }
    Ok(DMatrix::from_fn(r, c, |i, j| {
        Complex64::new(rows[i][j][0], rows[i][j][1])
    }))
}

/// `#[serde(with = "real_rows")]` for `DMatrix<f64>` fields.
pub mod real_rows {
    use super::*;

    pub fn serialize<S: Serializer>(m: &DMatrix<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
        matrix_to_rows(m).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<DMatrix<f64>, D::Error> {
        let rows = Vec::<Vec<f64>>::deserialize(d)?;
        rows_to_matrix(&rows).map_err(serde::de::Error::custom)
    }
}

/// `#[serde(with = "real_rows_vec")]` for `Vec<DMatrix<f64>>` fields.
pub mod real_rows_vec {
    use super::*;

    pub fn serialize<S: Serializer>(m: &[DMatrix<f64>], s: S) -> std::result::Result<S::Ok, S::Error> {
        m.iter().map(matrix_to_rows).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<DMatrix<f64>>, D::Error> {
        let all = Vec::<Vec<Vec<f64>>>::deserialize(d)?;
        all.iter()
            .map(|rows| rows_to_matrix(rows).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// `#[serde(with = "complex_rows")]` for `DMatrix<Complex64>` fields.
pub mod complex_rows {
    use super::*;

    pub fn serialize<S: Serializer>(
        m: &DMatrix<Complex64>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        complex_to_rows(m).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<DMatrix<Complex64>, D::Error> {
        let rows = Vec::<Vec<[f64; 2]>>::deserialize(d)?;
        rows_to_complex(&rows).map_err(serde::de::Error::custom)
    }
}
