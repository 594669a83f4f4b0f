//! JSON serialization for maps, operators, vectors, and symmetry
//! operations, plus small file helpers.
//!
//! Superoperator files carry `"format": "hermmap-v1"` and name the
//! coordinate basis; operators and vectors are bare `{n, re, im}` objects.

use std::path::Path;

use nalgebra::{DMatrix, DVector};
use serde_json::{json, Value};

use crate::herm::HermitianOperator;
use crate::map::HermMap;
use crate::symmetry::{Flag, SymmetryOp};
use crate::{C64, Error, Result};

pub const MAP_FORMAT: &str = "hermmap-v1";
pub const BASIS_NAME: &str = "ggm-v1";

fn bad(msg: impl Into<String>) -> Error {
    Error::Format(msg.into())
}

fn get<'v>(v: &'v Value, key: &str) -> Result<&'v Value> {
    v.get(key).ok_or_else(|| bad(format!("missing key \"{key}\"")))
}

fn get_usize(v: &Value, key: &str) -> Result<usize> {
    get(v, key)?
        .as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| bad(format!("key \"{key}\" must be a non-negative integer")))
}

fn get_str<'v>(v: &'v Value, key: &str) -> Result<&'v str> {
    get(v, key)?
        .as_str()
        .ok_or_else(|| bad(format!("key \"{key}\" must be a string")))
}

fn real_grid(v: &Value, key: &str, rows: usize, cols: usize) -> Result<Vec<Vec<f64>>> {
    let arr = get(v, key)?
        .as_array()
        .ok_or_else(|| bad(format!("key \"{key}\" must be an array of rows")))?;
    if arr.len() != rows {
        return Err(bad(format!(
            "key \"{key}\" has {} rows, expected {rows}",
            arr.len()
        )));
    }
    let mut out = Vec::with_capacity(rows);
    for (i, row) in arr.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| bad(format!("row {i} of \"{key}\" must be an array")))?;
        if row.len() != cols {
            return Err(bad(format!(
                "row {i} of \"{key}\" has {} entries, expected {cols}",
                row.len()
            )));
        }
        let mut nums = Vec::with_capacity(cols);
        for (j, x) in row.iter().enumerate() {
            nums.push(
                x.as_f64()
                    .ok_or_else(|| bad(format!("entry ({i},{j}) of \"{key}\" must be a number")))?,
            );
        }
        out.push(nums);
    }
    Ok(out)
}

fn grid_of(m: &DMatrix<f64>) -> Value {
    let rows: Vec<Value> = (0..m.nrows())
        .map(|i| Value::from((0..m.ncols()).map(|j| m[(i, j)]).collect::<Vec<f64>>()))
        .collect();
    Value::from(rows)
}

fn complex_grids(m: &DMatrix<C64>) -> (Value, Value) {
    let re: Vec<Value> = (0..m.nrows())
        .map(|i| Value::from((0..m.ncols()).map(|j| m[(i, j)].re).collect::<Vec<f64>>()))
        .collect();
    let im: Vec<Value> = (0..m.nrows())
        .map(|i| Value::from((0..m.ncols()).map(|j| m[(i, j)].im).collect::<Vec<f64>>()))
        .collect();
    (Value::from(re), Value::from(im))
}

fn complex_matrix(v: &Value, n: usize) -> Result<DMatrix<C64>> {
    let re = real_grid(v, "re", n, n)?;
    let im = real_grid(v, "im", n, n)?;
    Ok(DMatrix::from_fn(n, n, |i, j| C64::new(re[i][j], im[i][j])))
}

pub fn map_to_json(f: &HermMap) -> Value {
    json!({
        "format": MAP_FORMAT,
        "n": f.dim(),
        "basis": BASIS_NAME,
        "matrix": grid_of(f.matrix()),
    })
}

pub fn map_from_json(v: &Value) -> Result<HermMap> {
    let format = get_str(v, "format")?;
    if format != MAP_FORMAT {
        return Err(bad(format!(
            "unsupported format \"{format}\", expected \"{MAP_FORMAT}\""
        )));
    }
    let basis = get_str(v, "basis")?;
    if basis != BASIS_NAME {
        return Err(bad(format!(
            "unsupported basis \"{basis}\", expected \"{BASIS_NAME}\""
        )));
    }
    let n = get_usize(v, "n")?;
    if n < 2 {
        return Err(Error::DimensionTooSmall(n));
    }
    let grid = real_grid(v, "matrix", n * n, n * n)?;
    let mat = DMatrix::from_fn(n * n, n * n, |i, j| grid[i][j]);
    HermMap::from_matrix(n, mat)
}

pub fn operator_to_json(a: &HermitianOperator) -> Value {
    let (re, im) = complex_grids(a.matrix());
    json!({ "n": a.dim(), "re": re, "im": im })
}

/// Load an operator, symmetrizing it and reporting the Frobenius norm of
/// the discarded skew part.
pub fn operator_from_json(v: &Value) -> Result<(HermitianOperator, f64)> {
    let n = get_usize(v, "n")?;
    if n < 2 {
        return Err(Error::DimensionTooSmall(n));
    }
    HermitianOperator::new_with_defect(complex_matrix(v, n)?)
}

pub fn vector_to_json(v: &DVector<C64>) -> Value {
    json!({
        "n": v.len(),
        "re": v.iter().map(|z| z.re).collect::<Vec<f64>>(),
        "im": v.iter().map(|z| z.im).collect::<Vec<f64>>(),
    })
}

pub fn vector_from_json(v: &Value) -> Result<DVector<C64>> {
    let n = get_usize(v, "n")?;
    let read = |key: &str| -> Result<Vec<f64>> {
        let arr = get(v, key)?
            .as_array()
            .ok_or_else(|| bad(format!("key \"{key}\" must be an array")))?;
        if arr.len() != n {
            return Err(bad(format!(
                "key \"{key}\" has {} entries, expected {n}",
                arr.len()
            )));
        }
        arr.iter()
            .enumerate()
            .map(|(i, x)| {
                x.as_f64()
                    .ok_or_else(|| bad(format!("entry {i} of \"{key}\" must be a number")))
            })
            .collect()
    };
    let re = read("re")?;
    let im = read("im")?;
    Ok(DVector::from_fn(n, |i, _| C64::new(re[i], im[i])))
}

pub fn symmetry_to_json(s: &SymmetryOp) -> Value {
    let (re, im) = complex_grids(s.unitary());
    let flag = match s.flag() {
        Flag::Unitary => "unitary",
        Flag::Antiunitary => "antiunitary",
    };
    json!({ "flag": flag, "n": s.dim(), "re": re, "im": im })
}

pub fn symmetry_from_json(v: &Value) -> Result<SymmetryOp> {
    let flag = match get_str(v, "flag")? {
        "unitary" => Flag::Unitary,
        "antiunitary" => Flag::Antiunitary,
        other => return Err(bad(format!("unknown flag \"{other}\""))),
    };
    let n = get_usize(v, "n")?;
    if n < 2 {
        return Err(Error::DimensionTooSmall(n));
    }
    SymmetryOp::new(flag, complex_matrix(v, n)?)
}

pub fn read_json_file(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

/// Pretty-printed with sorted keys and a trailing newline, so identical
/// values produce byte-identical files.
pub fn write_json_file(path: &Path, value: &Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}
