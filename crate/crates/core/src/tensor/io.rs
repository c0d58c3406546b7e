//! Plain-text tensor format.
//!
//! ```text
//! tensor3 n=3
//! 1 1 1 0.5
//! 2 1 1 0.5
//! ...
//! ```
//!
//! One `i j k value` line per nonzero, indices 1-based, `#` starts a comment.
//! The writer emits entries sorted by `(k, j, i)`.

use std::io::{BufRead, Write};

use super::{DenseTensor3, SparseTensor3, StochasticVector};
use crate::error::{Error, Result};

type Entries = (usize, Vec<(usize, usize, usize, f64)>);

fn parse_entries<R: BufRead>(reader: R) -> Result<Entries> {
    let mut n = None;
    let mut entries = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let parse_err = |message: String| Error::Parse {
            line: lineno,
            message,
        };
        let Some(dim) = n else {
            let rest = content
                .strip_prefix("tensor3")
                .ok_or_else(|| parse_err("expected header `tensor3 n=<n>`".into()))?;
            let value = rest
                .trim()
                .strip_prefix("n=")
                .ok_or_else(|| parse_err("expected `n=<n>` in header".into()))?;
            let dim: usize = value
                .trim()
                .parse()
                .map_err(|e| parse_err(format!("bad dimension: {e}")))?;
            if dim == 0 {
                return Err(parse_err("dimension must be positive".into()));
            }
            n = Some(dim);
            continue;
        };
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(parse_err(format!(
                "expected `i j k value`, found {} fields",
                fields.len()
            )));
        }
        let mut idx3 = [0usize; 3];
        for (slot, f) in idx3.iter_mut().zip(&fields[..3]) {
            let v: usize = f
                .parse()
                .map_err(|e| parse_err(format!("bad index `{f}`: {e}")))?;
            if v == 0 || v > dim {
                return Err(parse_err(format!("index {v} outside 1..={dim}")));
            }
            *slot = v - 1;
        }
        let value: f64 = fields[3]
            .parse()
            .map_err(|e| parse_err(format!("bad value `{}`: {e}", fields[3])))?;
        entries.push((idx3[0], idx3[1], idx3[2], value));
    }
    let n = n.ok_or(Error::Parse {
        line: 0,
        message: "missing header".into(),
    })?;
    Ok((n, entries))
}

/// Reads a dense tensor; absent entries are zero. The result is not marked
/// stochastic; call [`DenseTensor3::into_stochastic`] to validate.
pub fn read_dense<R: BufRead>(reader: R) -> Result<DenseTensor3> {
    let (n, entries) = parse_entries(reader)?;
    dense_from(n, entries)
}

fn dense_from(n: usize, entries: Vec<(usize, usize, usize, f64)>) -> Result<DenseTensor3> {
    let mut t = DenseTensor3::zeros(n)?;
    let mut seen = std::collections::HashSet::new();
    for (i, j, k, v) in entries {
        if !seen.insert((i, j, k)) {
            return Err(Error::invalid(format!(
                "duplicate entry ({}, {}, {})",
                i + 1,
                j + 1,
                k + 1
            )));
        }
        t.set(i, j, k, v);
    }
    Ok(t)
}

/// A tensor read by [`read_auto`].
#[derive(Debug, Clone)]
pub enum LoadedTensor {
    Dense(DenseTensor3),
    Sparse(SparseTensor3),
}

impl LoadedTensor {
    pub fn n(&self) -> usize {
        match self {
            LoadedTensor::Dense(t) => t.n(),
            LoadedTensor::Sparse(t) => t.n(),
        }
    }
}

/// Dense and validated as stochastic for `n <= dense_limit`, otherwise
/// sparse with uniform dangling columns.
pub fn read_auto<R: BufRead>(reader: R, dense_limit: usize) -> Result<LoadedTensor> {
    let (n, entries) = parse_entries(reader)?;
    if n > dense_limit {
        let t = SparseTensor3::from_entries(n, entries, StochasticVector::uniform(n))?;
        return Ok(LoadedTensor::Sparse(t));
    }
    Ok(LoadedTensor::Dense(
        dense_from(n, entries)?.into_stochastic()?,
    ))
}

/// Reads a sparse tensor whose unstored columns default to uniform.
pub fn read_sparse<R: BufRead>(reader: R) -> Result<SparseTensor3> {
    let (n, entries) = parse_entries(reader)?;
    SparseTensor3::from_entries(n, entries, StochasticVector::uniform(n))
}

pub fn write_dense<W: Write>(t: &DenseTensor3, mut w: W) -> Result<()> {
    let n = t.n();
    writeln!(w, "tensor3 n={n}")?;
    for k in 0..n {
        for j in 0..n {
            for i in 0..n {
                let v = t.get(i, j, k);
                if v != 0.0 {
                    writeln!(w, "{} {} {} {v:?}", i + 1, j + 1, k + 1)?;
                }
            }
        }
    }
    Ok(())
}

/// Writes stored entries only; dangling columns are implied by the reader.
pub fn write_sparse<W: Write>(t: &SparseTensor3, mut w: W) -> Result<()> {
    writeln!(w, "tensor3 n={}", t.n())?;
    for ((j, k), rows, vals) in t.stored_columns() {
        for (&i, &v) in rows.iter().zip(vals) {
            writeln!(w, "{} {} {} {v:?}", i + 1, j + 1, k + 1)?;
        }
    }
    Ok(())
}
