//! Benchmark harness: runs a workload against one table space design and
//! reports node counts, bytes and load times.

pub mod report;
pub mod runner;

pub use report::{compare, write_report, Format, CSV_HEADER};
pub use runner::{run, store, LoadMode, NodeCounts, RunError, RunOptions, RunReport, Timings};

use tabling_core::WorkloadSpec;

/// Default term count for a workload family when `--n` is not given.
pub fn default_n(spec: &WorkloadSpec) -> usize {
    match spec {
        WorkloadSpec::Table1(_) => 100,
        WorkloadSpec::Table2 { .. } => 50_000,
        WorkloadSpec::Random(_) => 200,
        WorkloadSpec::FactFile(_) => usize::MAX,
    }
}
