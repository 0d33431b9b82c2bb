use std::fmt::Write as _;
use std::io::Write;
use std::str::FromStr;

use serde::Serialize;

use crate::runner::RunReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format '{other}' (expected json or csv)")),
        }
    }
}

/// Flat row for CSV output. Column order is part of the output contract.
#[derive(Serialize)]
struct CsvRow<'a> {
    design: &'a str,
    workload: &'a str,
    n: usize,
    runs: usize,
    nodes_subgoal: usize,
    nodes_answer: usize,
    nodes_gt: usize,
    hash_buckets: usize,
    bytes_total: usize,
    answers_total: usize,
    store_ms: f64,
    load_bottomup_ms: Option<f64>,
    load_compiled_ms: Option<f64>,
    oracle_verified: bool,
}

pub const CSV_HEADER: &str = "design,workload,n,runs,nodes_subgoal,nodes_answer,nodes_gt,hash_buckets,bytes_total,\
answers_total,store_ms,load_bottomup_ms,load_compiled_ms,oracle_verified";

pub fn write_report<W: Write>(out: W, reports: &[RunReport], format: Format) -> anyhow::Result<()> {
    match format {
        Format::Json => {
            let mut out = out;
            if let [single] = reports {
                serde_json::to_writer_pretty(&mut out, single)?;
            } else {
                serde_json::to_writer_pretty(&mut out, reports)?;
            }
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for r in reports {
                w.serialize(CsvRow {
                    design: r.design.name(),
                    workload: &r.workload,
                    n: r.n,
                    runs: r.runs,
                    nodes_subgoal: r.nodes.subgoal,
                    nodes_answer: r.nodes.answer,
                    nodes_gt: r.nodes.gt,
                    hash_buckets: r.nodes.hash_buckets,
                    bytes_total: r.bytes_total,
                    answers_total: r.answers_total,
                    store_ms: r.times_ms.store,
                    load_bottomup_ms: r.times_ms.load_bottomup,
                    load_compiled_ms: r.times_ms.load_compiled,
                    oracle_verified: r.oracle_verified,
                })?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

pub fn ratio(num: f64, den: f64) -> Option<f64> {
    (den != 0.0).then(|| num / den)
}

/// Side-by-side table of `candidate / baseline` for counts and times.
pub fn compare(baseline: &RunReport, candidate: &RunReport) -> String {
    let mut rows: Vec<(&str, f64, f64)> = vec![
        ("nodes_subgoal", baseline.nodes.subgoal as f64, candidate.nodes.subgoal as f64),
        ("nodes_answer", baseline.nodes.answer as f64, candidate.nodes.answer as f64),
        ("nodes_gt", baseline.nodes.gt as f64, candidate.nodes.gt as f64),
        ("nodes_total", baseline.total_nodes() as f64, candidate.total_nodes() as f64),
        ("bytes_total", baseline.bytes_total as f64, candidate.bytes_total as f64),
        ("store_ms", baseline.times_ms.store, candidate.times_ms.store),
    ];
    if let (Some(a), Some(b)) = (baseline.times_ms.load_bottomup, candidate.times_ms.load_bottomup) {
        rows.push(("load_bottomup_ms", a, b));
    }
    if let (Some(a), Some(b)) = (baseline.times_ms.load_compiled, candidate.times_ms.load_compiled) {
        rows.push(("load_compiled_ms", a, b));
    }

    let mut out = String::new();
    let _ =
        writeln!(out, "{} on {} vs {} on {}", candidate.design, candidate.workload, baseline.design, baseline.workload);
    let _ =
        writeln!(out, "{:<18}{:>14}{:>14}{:>8}", "metric", baseline.design.name(), candidate.design.name(), "ratio");
    for (name, a, b) in rows {
        let r = ratio(b, a).map_or_else(|| "n/a".to_string(), |r| format!("{r:.2}"));
        let _ = writeln!(out, "{name:<18}{a:>14.2}{b:>14.2}{r:>8}");
    }
    out
}
