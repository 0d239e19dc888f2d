use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::functionals::{make_witness, ratio, WitnessPair};
use crate::matfile::write_matrix;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessRecord {
    pub n: usize,
    pub q: f64,
    pub c_q: f64,
    pub eps1: f64,
    pub eps2: f64,
    pub expected_ratio: f64,
    pub ratio: f64,
}

pub struct WitnessFiles {
    pub a: PathBuf,
    pub b: PathBuf,
    pub record: PathBuf,
}

pub fn witness_record(w: &WitnessPair) -> Result<WitnessRecord> {
    let p = w.params;
    Ok(WitnessRecord {
        n: w.a.n(),
        q: p.q(),
        c_q: p.c(),
        eps1: p.eps1(),
        eps2: p.eps2(),
        expected_ratio: p.c(),
        ratio: ratio(&w.a, &w.b, p.q())?,
    })
}

/// Writes `A.txt`, `B.txt` and `witness.json` into `dir`, creating it if needed.
pub fn write_witness(q: f64, n: usize, dir: &Path) -> Result<(WitnessRecord, WitnessFiles)> {
    let w = make_witness(q, n)?;
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let files = WitnessFiles {
        a: dir.join("A.txt"),
        b: dir.join("B.txt"),
        record: dir.join("witness.json"),
    };
    write_matrix(&files.a, &w.a)?;
    write_matrix(&files.b, &w.b)?;
    let record = witness_record(&w)?;
    let json = serde_json::to_string_pretty(&record).map_err(|e| Error::Serialize(e.to_string()))?;
    fs::write(&files.record, json + "\n").map_err(|e| Error::io(&files.record, e))?;
    Ok((record, files))
}
