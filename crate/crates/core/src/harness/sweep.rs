use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::{map_indexed, with_workers, Schedule};
use crate::functionals::bound_c;
use crate::matcore::ComplexMatrix;
use crate::matfile::format_pair;
use crate::optimizer::{optimize_cell, OptimizeConfig};
use crate::rng::derive_seed;

/// A cell whose best ratio exceeds `c(q)` by more than this is a counterexample.
pub const VIOLATION_TOL: f64 = 1e-6;

/// One `(n, q)` cell. Field order is the CSV column order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRecord {
    pub n: usize,
    pub q: f64,
    pub best_ratio: f64,
    pub c_q: f64,
    /// `c_q − best_ratio`.
    pub gap: f64,
    pub iterations: usize,
    pub restarts: usize,
    pub converged: bool,
    /// Seed that reproduces this cell through `optimize_cell` alone.
    pub seed: u64,
}

impl SweepRecord {
    pub fn is_violation(&self) -> bool {
        self.gap.is_nan() || self.gap < -VIOLATION_TOL
    }
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub ns: Vec<usize>,
    pub qs: Vec<f64>,
    pub restarts: usize,
    pub max_iters: usize,
    pub tol: f64,
    pub seed: u64,
    pub workers: Option<usize>,
    pub schedule: Schedule,
}

impl SweepConfig {
    /// Dimensions and q range of the reference sweep: n ∈ {2, 5, 10, 15}, q ∈ [−2, 3] step 0.25.
    pub fn reference(seed: u64) -> Self {
        Self {
            ns: vec![2, 5, 10, 15],
            qs: q_range(-2.0, 3.0, 0.25).expect("static range"),
            restarts: OptimizeConfig::DEFAULT_RESTARTS,
            max_iters: OptimizeConfig::DEFAULT_MAX_ITERS,
            tol: OptimizeConfig::DEFAULT_TOL,
            seed,
            workers: None,
            schedule: Schedule::Parallel,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.ns.is_empty() || self.qs.is_empty() {
            return Err(Error::InvalidParameter("sweep needs at least one n and one q".into()));
        }
        if let Some(&n) = self.ns.iter().find(|&&n| n < 2) {
            return Err(Error::InvalidParameter(format!("n must be >= 2, got {n}")));
        }
        self.cell_config(self.ns[0], 0).validate()
    }

    pub fn cell_config(&self, n: usize, q_index: usize) -> OptimizeConfig {
        OptimizeConfig {
            n,
            q: self.qs[q_index],
            restarts: self.restarts,
            max_iters: self.max_iters,
            tol: self.tol,
            seed: derive_seed(self.seed, &[n as u64, q_index as u64]),
            record_trace: false,
        }
    }
}

/// `q_min, q_min + step, …` up to and including `q_max` (within rounding).
pub fn q_range(q_min: f64, q_max: f64, step: f64) -> Result<Vec<f64>> {
    if step.is_nan() || step <= 0.0 || !q_min.is_finite() || !q_max.is_finite() || q_max < q_min {
        return Err(Error::InvalidParameter(format!(
            "bad q range [{q_min}, {q_max}] step {step}"
        )));
    }
    let count = ((q_max - q_min) / step + 1e-9).floor() as usize;
    Ok((0..=count).map(|k| q_min + k as f64 * step).collect())
}

/// A cell that beat `c(q)`, with the pair that did it.
#[derive(Clone, Debug)]
pub struct Violation {
    pub record: SweepRecord,
    pub a: ComplexMatrix,
    pub b: ComplexMatrix,
}

#[derive(Clone, Debug)]
pub struct SweepOutcome {
    /// Ordered by `(n, q)` as given in the config.
    pub records: Vec<SweepRecord>,
    pub violations: Vec<Violation>,
}

impl SweepOutcome {
    /// `n ↦ max |gap|`.
    pub fn max_abs_gap(&self) -> BTreeMap<usize, f64> {
        let mut out = BTreeMap::new();
        for r in &self.records {
            let e = out.entry(r.n).or_insert(0.0f64);
            *e = e.max(r.gap.abs());
        }
        out
    }
}

pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepOutcome> {
    cfg.validate()?;
    let cells: Vec<(usize, usize)> = cfg
        .ns
        .iter()
        .flat_map(|&n| (0..cfg.qs.len()).map(move |k| (n, k)))
        .collect();
    let results = with_workers(cfg.workers, || {
        map_indexed(cells.len(), cfg.schedule, |idx| {
            let (n, k) = cells[idx];
            let cell = cfg.cell_config(n, k);
            let res = optimize_cell(&cell)?;
            let c_q = bound_c(cell.q)?.c();
            let record = SweepRecord {
                n,
                q: cell.q,
                best_ratio: res.best_ratio,
                c_q,
                gap: c_q - res.best_ratio,
                iterations: res.iterations_used,
                restarts: res.restarts_used,
                converged: res.converged,
                seed: cell.seed,
            };
            Ok((record, res.a_opt, res.b_opt))
        })
    });

    let mut records = Vec::with_capacity(results.len());
    let mut violations = Vec::new();
    for r in results {
        let (record, a, b) = r?;
        if record.is_violation() {
            violations.push(Violation {
                record: record.clone(),
                a,
                b,
            });
        }
        records.push(record);
    }
    Ok(SweepOutcome { records, violations })
}

pub fn write_csv<W: Write>(records: &[SweepRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r).map_err(|e| Error::Serialize(e.to_string()))?;
    }
    w.flush().map_err(|e| Error::Serialize(e.to_string()))
}

pub fn write_jsonl<W: Write>(records: &[SweepRecord], mut out: W) -> Result<()> {
    for r in records {
        let line = serde_json::to_string(r).map_err(|e| Error::Serialize(e.to_string()))?;
        writeln!(out, "{line}").map_err(|e| Error::Serialize(e.to_string()))?;
    }
    Ok(())
}

/// Writes each violating pair to `dir/n{n}_q{q}.txt`, creating `dir` if needed.
///
/// Each file starts with a `#` header line followed by A and B in the matrix
/// text format.
pub fn write_violations(dir: &Path, violations: &[Violation]) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut paths = Vec::with_capacity(violations.len());
    for v in violations {
        let r = &v.record;
        let path = dir.join(format!("n{}_q{}.txt", r.n, r.q));
        let body = format!(
            "# n={} q={} best_ratio={:.17e} c_q={:.17e} seed={}\n{}",
            r.n,
            r.q,
            r.best_ratio,
            r.c_q,
            r.seed,
            format_pair(&v.a, &v.b)
        );
        fs::write(&path, body).map_err(|e| Error::io(&path, e))?;
        paths.push(path);
    }
    Ok(paths)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_range_brackets_special_points() {
        let qs = q_range(-2.0, 3.0, 0.25).unwrap();
        assert_eq!(qs.len(), 21);
        for special in [-1.0, 0.0, 1.0] {
            assert!(qs.contains(&special));
        }
        assert_eq!(*qs.last().unwrap(), 3.0);
        assert!(q_range(0.0, 1.0, 0.0).is_err());
        assert!(q_range(1.0, 0.0, 0.1).is_err());
        assert_eq!(q_range(0.5, 0.5, 0.1).unwrap(), vec![0.5]);
    }

    #[test]
    fn csv_header_order() {
        let rec = SweepRecord {
            n: 2,
            q: 1.0,
            best_ratio: 2.0,
            c_q: 2.0,
            gap: 0.0,
            iterations: 1,
            restarts: 16,
            converged: true,
            seed: 7,
        };
        let mut buf = Vec::new();
        write_csv(std::slice::from_ref(&rec), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text.lines().next().unwrap(),
            "n,q,best_ratio,c_q,gap,iterations,restarts,converged,seed"
        );
        assert_eq!(text.lines().nth(1).unwrap(), "2,1.0,2.0,2.0,0.0,1,16,true,7");
        let mut buf = Vec::new();
        write_jsonl(&[rec], &mut buf).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v["best_ratio"], 2.0);
    }

    #[test]
    fn violation_threshold() {
        let mut rec = SweepRecord {
            n: 3,
            q: 0.0,
            best_ratio: 1.0,
            c_q: 1.0,
            gap: -0.9e-6,
            iterations: 1,
            restarts: 1,
            converged: true,
            seed: 0,
        };
        assert!(!rec.is_violation());
        rec.gap = -1.1e-6;
        assert!(rec.is_violation());
        rec.gap = f64::NAN;
        assert!(rec.is_violation());
    }

    #[test]
    fn config_rejects_small_n() {
        let mut cfg = SweepConfig::reference(0);
        cfg.ns = vec![1];
        assert!(run_sweep(&cfg).is_err());
    }
}
