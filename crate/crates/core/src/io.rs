//! Dense matrix I/O.
//!
//! Two layouts are supported:
//!
//! * MatrixMarket `array` format (`%%MatrixMarket matrix array real general`),
//!   entries listed column by column as the format prescribes;
//! * JSON `{"rows": r, "cols": c, "data": [...]}` with `data` in row-major order.
//!
//! Values are written with 17 significant digits.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixData {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl From<&Matrix> for MatrixData {
    fn from(m: &Matrix) -> Self {
        MatrixData {
            rows: m.nrows(),
            cols: m.ncols(),
            data: m.transpose().iter().copied().collect(),
        }
    }
}

impl TryFrom<MatrixData> for Matrix {
    type Error = Error;

    fn try_from(d: MatrixData) -> Result<Matrix> {
        if d.rows == 0 || d.cols == 0 {
            return Err(Error::Parse("matrix dimensions must be positive".into()));
        }
        if d.data.len() != d.rows * d.cols {
            return Err(Error::Parse(format!(
                "expected {} entries for {}x{}, found {}",
                d.rows * d.cols,
                d.rows,
                d.cols,
                d.data.len()
            )));
        }
        if d.data.iter().any(|v| !v.is_finite()) {
            return Err(Error::Parse("non-finite entry".into()));
        }
        Ok(Matrix::from_row_slice(d.rows, d.cols, &d.data))
    }
}

/// `#[serde(with = ...)]` adapter for [`Matrix`] fields.
pub mod matrix_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &Matrix, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixData::from(m).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Matrix, D::Error> {
        let data = MatrixData::deserialize(d)?;
        Matrix::try_from(data).map_err(serde::de::Error::custom)
    }
}

pub fn to_json(m: &Matrix) -> String {
    serde_json::to_string(&MatrixData::from(m)).expect("matrix data always serializes")
}

pub fn from_json(text: &str) -> Result<Matrix> {
    let data: MatrixData = serde_json::from_str(text)?;
    Matrix::try_from(data)
}

pub fn to_matrix_market(m: &Matrix) -> String {
    let mut out = String::from("%%MatrixMarket matrix array real general\n");
    out.push_str(&format!("{} {}\n", m.nrows(), m.ncols()));
    // nalgebra storage is column-major, matching the array format.
    for v in m.iter() {
        out.push_str(&format!("{v:.16e}\n"));
    }
    out
}

pub fn from_matrix_market(text: &str) -> Result<Matrix> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty input".into()))?
        .to_ascii_lowercase();
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() < 5 || fields[0] != "%%matrixmarket" || fields[1] != "matrix" {
        return Err(Error::Parse("missing %%MatrixMarket matrix header".into()));
    }
    if fields[2] != "array" || fields[3] != "real" || fields[4] != "general" {
        return Err(Error::Parse(format!(
            "only `array real general` is supported, found `{} {} {}`",
            fields[2], fields[3], fields[4]
        )));
    }
    let mut tokens = lines
        .filter(|l| !l.trim_start().starts_with('%'))
        .flat_map(str::split_whitespace);
    let mut dim = || -> Result<usize> {
        tokens
            .next()
            .ok_or_else(|| Error::Parse("missing size line".into()))?
            .parse()
            .map_err(|e| Error::Parse(format!("bad dimension: {e}")))
    };
    let rows = dim()?;
    let cols = dim()?;
    let values = tokens
        .map(|t| t.parse::<f64>().map_err(|e| Error::Parse(format!("bad entry `{t}`: {e}"))))
        .collect::<Result<Vec<f64>>>()?;
    if rows == 0 || cols == 0 || values.len() != rows * cols {
        return Err(Error::Parse(format!(
            "expected {} entries for {rows}x{cols}, found {}",
            rows * cols,
            values.len()
        )));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Parse("non-finite entry".into()));
    }
    Ok(Matrix::from_column_slice(rows, cols, &values))
}

/// Reads a matrix, choosing the layout by extension (`.json` or MatrixMarket otherwise).
pub fn read_matrix(path: impl AsRef<Path>) -> Result<Matrix> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
        from_json(&text)
    } else {
        from_matrix_market(&text)
    }
}

pub fn write_matrix(path: impl AsRef<Path>, m: &Matrix) -> Result<()> {
    let path = path.as_ref();
    let text = if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
        to_json(m)
    } else {
        to_matrix_market(m)
    };
    fs::write(path, text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn json_is_row_major() {
        let m = Matrix::from_row_slice(2, 3, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        assert_eq!(to_json(&m), r#"{"rows":2,"cols":3,"data":[1.0,2.0,3.0,4.0,5.0,6.0]}"#);
    }

    #[test]
    fn matrix_market_is_column_major() {
        let m = Matrix::from_row_slice(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        let text = to_matrix_market(&m);
        let body: Vec<f64> = text.lines().skip(2).map(|l| l.parse().unwrap()).collect();
        assert_eq!(body, vec![1.0, 3.0, 2.0, 4.0]);
    }

    #[test]
    fn malformed_inputs() {
        assert!(from_json(r#"{"rows":2,"cols":2,"data":[1.0]}"#).is_err());
        assert!(from_json(r#"{"rows":2,"data":[1.0]}"#).is_err());
        assert!(from_matrix_market("%%MatrixMarket matrix coordinate real general\n1 1 1\n1 1 2.0\n").is_err());
        assert!(from_matrix_market("%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n").is_err());
        assert!(from_matrix_market("1 1\n1.0\n").is_err());
    }

    #[test]
    fn comments_are_skipped() {
        let text = "%%MatrixMarket matrix array real general\n% generated\n1 2\n0.5\n-1e3\n";
        let m = from_matrix_market(text).unwrap();
        assert_eq!(m, Matrix::from_row_slice(1, 2, &[0.5, -1e3]));
    }

    proptest! {
        #[test]
        fn both_layouts_round_trip(rows in 1usize..6, cols in 1usize..6,
                                   seed in proptest::collection::vec(-1e6f64..1e6, 36)) {
            let m = Matrix::from_fn(rows, cols, |i, j| seed[i * 6 + j] / 7.0);
            prop_assert_eq!(from_json(&to_json(&m)).unwrap(), m.clone());
            prop_assert_eq!(from_matrix_market(&to_matrix_market(&m)).unwrap(), m);
        }
    }
}
