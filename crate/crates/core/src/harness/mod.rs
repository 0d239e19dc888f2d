//! Command-line front end and the file formats it reads and writes.

pub mod cli;
mod eval;
mod sweep;
mod witness;

pub use eval::{evaluate, EvalRecord};
pub use sweep::{
    q_range, run_sweep, write_csv, write_jsonl, write_violations, SweepConfig, SweepOutcome, SweepRecord, Violation,
    VIOLATION_TOL,
};
pub use witness::{witness_record, write_witness, WitnessFiles, WitnessRecord};
