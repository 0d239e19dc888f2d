//! Plain-text matrix format.
//!
//! First line is `n`; then `n` rows of `n` whitespace-separated entries written
//! as `re+imi` with 17 significant digits, so every `f64` survives a round trip.

use std::fs;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matcore::ComplexMatrix;

pub fn format_entry(z: Complex64) -> String {
    format!("{:.16e}{:+.16e}i", z.re, z.im)
}

pub fn format_matrix(m: &ComplexMatrix) -> String {
    let n = m.n();
    let mut out = format!("{n}\n");
    for i in 0..n {
        let row: Vec<String> = (0..n).map(|j| format_entry(m.get(i, j))).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Two matrices back to back, as dumped for counterexamples.
pub fn format_pair(a: &ComplexMatrix, b: &ComplexMatrix) -> String {
    format!("{}{}", format_matrix(a), format_matrix(b))
}

/// Parses `re`, `imi`, or `re±imi`.
pub fn parse_entry(s: &str) -> std::result::Result<Complex64, String> {
    let bad = || format!("bad complex entry {s:?}");
    let Some(body) = s.strip_suffix('i') else {
        return s.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (body[..k].parse::<f64>().map_err(|_| bad())?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "+" | "" => 1.0,
        "-" => -1.0,
        x => x.parse::<f64>().map_err(|_| bad())?,
    };
    Ok(Complex64::new(re, im))
}

pub fn parse_matrix(text: &str) -> std::result::Result<ComplexMatrix, String> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let header = lines.next().ok_or("empty input")?;
    let n: usize = header.parse().map_err(|_| format!("bad dimension line {header:?}"))?;
    if n == 0 {
        return Err("dimension must be positive".into());
    }
    let mut rows = Vec::with_capacity(n);
    for r in 0..n {
        let line = lines.next().ok_or(format!("expected {n} rows, found {r}"))?;
        let row = line
            .split_whitespace()
            .map(parse_entry)
            .collect::<std::result::Result<Vec<_>, _>>()?;
        if row.len() != n {
            return Err(format!("row {} has {} entries, expected {n}", r + 1, row.len()));
        }
        rows.push(row);
    }
    if let Some(extra) = lines.next() {
        return Err(format!("unexpected trailing line {extra:?}"));
    }
    ComplexMatrix::from_rows(&rows).map_err(|e| e.to_string())
}

pub fn read_matrix(path: &Path) -> Result<ComplexMatrix> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_matrix(&text).map_err(|msg| Error::Parse {
        path: path.to_path_buf(),
        msg,
    })
}

pub fn write_matrix(path: &Path, m: &ComplexMatrix) -> Result<()> {
    fs::write(path, format_matrix(m)).map_err(|e| Error::io(path, e))
}
