//! Matrix file formats.
//!
//! The canonical format is a JSON object
//! `{"rows": m, "cols": n, "field": "real"|"complex", "data": [[...], ...]}`
//! where a complex entry is a two-element array `[re, im]` and a real entry
//! is a plain number. Real matrices may alternatively be given as CSV with
//! one row per line. Complex matrices have no CSV form.

use crate::error::{Error, Result};
use crate::matrix::{Field, Matrix};
use num_complex::Complex64;
use serde::de::{Deserializer, Error as DeError};
use serde::ser::{SerializeSeq, SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};
use std::fs;
use std::path::Path;

struct DataRows<'a>(&'a Matrix);
struct DataRow<'a>(&'a Matrix, usize);

impl Serialize for DataRow<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let DataRow(m, i) = *self;
        let mut seq = serializer.serialize_seq(Some(m.cols()))?;
        for j in 0..m.cols() {
            let v = m.get(i, j);
            match m.field() {
                Field::Real => seq.serialize_element(&v.re)?,
                Field::Complex => seq.serialize_element(&[v.re, v.im])?,
            }
        }
        seq.end()
    }
}

impl Serialize for DataRows<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.0.rows()))?;
        for i in 0..self.0.rows() {
            seq.serialize_element(&DataRow(self.0, i))?;
        }
        seq.end()
    }
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("Matrix", 4)?;
        st.serialize_field("rows", &self.rows())?;
        st.serialize_field("cols", &self.cols())?;
        st.serialize_field("field", &self.field().to_string())?;
        st.serialize_field("data", &DataRows(self))?;
        st.end()
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum EntryDoc {
    Num(f64),
    Pair(Vec<f64>),
}

#[derive(Deserialize)]
struct MatrixDoc {
    rows: usize,
    cols: usize,
    field: String,
    data: Vec<Vec<EntryDoc>>,
}

impl MatrixDoc {
    fn build(self) -> Result<Matrix> {
        let field = match self.field.as_str() {
            "real" => Field::Real,
            "complex" => Field::Complex,
            other => return Err(Error::Format(format!("unknown field tag {other:?}"))),
        };
        if self.rows == 0 || self.cols == 0 {
            return Err(Error::Format("rows and cols must be positive".into()));
        }
        if self.data.len() != self.rows {
            return Err(Error::Format(format!(
                "expected {} rows of data, found {}",
                self.rows,
                self.data.len()
            )));
        }
        let mut m = Matrix::zeros(self.rows, self.cols, field);
        for (i, row) in self.data.iter().enumerate() {
            if row.len() != self.cols {
                return Err(Error::Format(format!(
                    "row {i} has {} entries, expected {}",
                    row.len(),
                    self.cols
                )));
            }
            for (j, entry) in row.iter().enumerate() {
                let v = match entry {
                    EntryDoc::Num(x) => Complex64::new(*x, 0.0),
                    EntryDoc::Pair(p) if p.len() == 2 => Complex64::new(p[0], p[1]),
                    EntryDoc::Pair(p) => {
                        return Err(Error::Format(format!(
                            "entry ({i},{j}) has {} components, expected [re, im]",
                            p.len()
                        )))
                    }
                };
                if field == Field::Real && v.im != 0.0 {
                    return Err(Error::Format(format!(
                        "real matrix with complex entry at ({i},{j})"
                    )));
                }
                m.set(i, j, v);
            }
        }
        Ok(m)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Matrix, D::Error> {
        let doc = MatrixDoc::deserialize(deserializer)?;
        doc.build().map_err(D::Error::custom)
    }
}

pub fn matrix_to_json(m: &Matrix) -> String {
    serde_json::to_string(m).expect("matrix serialization cannot fail")
}

pub fn matrix_from_json(text: &str) -> Result<Matrix> {
    serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
}

/// CSV form, real matrices only.
pub fn matrix_to_csv(m: &Matrix) -> Result<String> {
    if m.field() != Field::Real {
        return Err(Error::Format("CSV supports real matrices only".into()));
    }
    let mut out = String::new();
    for i in 0..m.rows() {
        let row: Vec<String> = (0..m.cols()).map(|j| m.get(i, j).re.to_string()).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    Ok(out)
}

pub fn matrix_from_csv(text: &str) -> Result<Matrix> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut row = Vec::new();
        for cell in line.split(',') {
            let v: f64 = cell
                .trim()
                .parse()
                .map_err(|_| Error::Format(format!("line {}: bad number {cell:?}", ln + 1)))?;
            row.push(v);
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Format("empty CSV matrix".into()));
    }
    let cols = rows[0].len();
    if rows.iter().any(|r| r.len() != cols) {
        return Err(Error::Format("ragged CSV rows".into()));
    }
    let refs: Vec<&[f64]> = rows.iter().map(|r| r.as_slice()).collect();
    Ok(Matrix::real(&refs))
}

/// Read a matrix from disk, dispatching on the `.csv` extension.
pub fn read_matrix(path: &Path) -> Result<Matrix> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
    if path.extension().is_some_and(|e| e == "csv") {
        matrix_from_csv(&text)
    } else {
        matrix_from_json(&text)
    }
}
