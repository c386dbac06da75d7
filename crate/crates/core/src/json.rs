//! Serde adapters: complex numbers as `[re, im]`, matrices as nested rows.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::linalg::{ComplexMatrix, C64};

pub fn to_pairs(v: &[C64]) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

pub fn from_pairs(v: &[[f64; 2]]) -> Vec<C64> {
    v.iter().map(|p| C64::new(p[0], p[1])).collect()
}

pub fn matrix_rows(m: &ComplexMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.rows()).map(|i| to_pairs(&m.row(i))).collect()
}

/// Rows must be non-empty and of equal length.
pub fn matrix_from_rows(rows: &[Vec<[f64; 2]>]) -> Result<ComplexMatrix, String> {
    let r = rows.len();
    let c = rows.first().map(Vec::len).unwrap_or(0);
    if r == 0 || c == 0 {
        return Err("matrix is empty".into());
    }
    if let Some(i) = rows.iter().position(|row| row.len() != c) {
        return Err(format!("row {i} has {} entries, expected {c}", rows[i].len()));
    }
    let data = rows.iter().flat_map(|row| from_pairs(row)).collect();
    ComplexMatrix::from_vec(r, c, data).map_err(|e| e.to_string())
}

pub mod matrix {
    use super::*;

    pub fn serialize<S: Serializer>(m: &ComplexMatrix, s: S) -> Result<S::Ok, S::Error> {
        matrix_rows(m).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<ComplexMatrix, D::Error> {
        let rows = Vec::<Vec<[f64; 2]>>::deserialize(d)?;
        matrix_from_rows(&rows).map_err(serde::de::Error::custom)
    }
}

pub mod vectors {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Vec<C64>], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|x| to_pairs(x)).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<C64>>, D::Error> {
        let raw = Vec::<Vec<[f64; 2]>>::deserialize(d)?;
        Ok(raw.iter().map(|x| from_pairs(x)).collect())
    }
}
