use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use tabling_core::{
    oracle_counts, snapshot, standardize, Design, FrameRef, MemoryReport, OracleCount, TableSpace, Term, Workload,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LoadMode {
    Bottomup,
    Compiled,
    Both,
}

impl LoadMode {
    fn bottom_up(self) -> bool {
        matches!(self, LoadMode::Bottomup | LoadMode::Both)
    }

    fn compiled(self) -> bool {
        matches!(self, LoadMode::Compiled | LoadMode::Both)
    }
}

impl FromStr for LoadMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bottomup" => Ok(LoadMode::Bottomup),
            "compiled" => Ok(LoadMode::Compiled),
            "both" => Ok(LoadMode::Both),
            other => Err(format!("unknown load mode '{other}' (expected bottomup, compiled or both)")),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct RunOptions {
    pub design: Design,
    pub runs: usize,
    pub load: LoadMode,
    pub word_bytes: usize,
    pub verify_oracle: bool,
}

impl RunOptions {
    pub fn new(design: Design) -> RunOptions {
        RunOptions {
            design,
            runs: 1,
            load: LoadMode::Both,
            word_bytes: tabling_core::stats::DEFAULT_WORD_BYTES,
            verify_oracle: true,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeCounts {
    pub subgoal: usize,
    pub answer: usize,
    pub gt: usize,
    pub hash_buckets: usize,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub store: f64,
    pub load_bottomup: Option<f64>,
    pub load_compiled: Option<f64>,
}

/// Result of one experiment. Serializes to the JSON report schema; the full
/// memory breakdown and mean timings are kept for in-process use.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub design: Design,
    pub workload: String,
    pub n: usize,
    pub runs: usize,
    pub nodes: NodeCounts,
    pub bytes_total: usize,
    pub answers_total: usize,
    pub times_ms: Timings,
    pub oracle_verified: bool,
    #[serde(skip)]
    pub memory: MemoryReport,
    #[serde(skip)]
    pub mean_ms: Timings,
}

impl RunReport {
    pub fn total_nodes(&self) -> usize {
        self.nodes.subgoal + self.nodes.answer + self.nodes.gt
    }
}

#[derive(Debug)]
pub enum RunError {
    OracleMismatch { expected: OracleCount, found: MemoryReport },
    Refcounts(String),
    Loader { frame: FrameRef, detail: String },
    Table(tabling_core::TableError),
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::OracleMismatch { expected, found } => {
                writeln!(f, "node counts differ from the reference model")?;
                writeln!(f, "  category   expected      found")?;
                for (name, e, g) in [
                    ("subgoal", expected.nodes_subgoal, found.nodes_subgoal),
                    ("answer", expected.nodes_answer, found.nodes_answer),
                    ("gt", expected.nodes_gt, found.nodes_gt),
                ] {
                    let mark = if e == g { "" } else { "  <--" };
                    writeln!(f, "  {name:<8} {e:>10} {g:>10}{mark}")?;
                }
                Ok(())
            }
            RunError::Refcounts(msg) => write!(f, "reference counts inconsistent: {msg}"),
            RunError::Loader { frame, detail } => write!(f, "loader mismatch on {frame:?}: {detail}"),
            RunError::Table(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for RunError {}

impl From<tabling_core::TableError> for RunError {
    fn from(e: tabling_core::TableError) -> Self {
        RunError::Table(e)
    }
}

fn answer_hash(answer: &[Term]) -> u64 {
    let mut h = DefaultHasher::new();
    answer.hash(&mut h);
    h.finish()
}

/// Hashes of the new answers of each frame, in insertion order.
type AnswerLog = HashMap<FrameRef, Vec<u64>>;

/// Stores every call and answer; returns the number of new answers.
pub fn store(space: &mut TableSpace, workload: &Workload, mut log: Option<&mut AnswerLog>) -> Result<usize, RunError> {
    let design = space.design();
    let mut answers = 0;
    for query in &workload.queries {
        let te = space.table_entry(query.call.name, query.call.arity(), design)?;
        let (frame, _) = space.subgoal_check_insert(te, &query.call)?;
        for answer in query.answers() {
            let (_, new) = space.answer_check_insert(frame, &answer)?;
            if new {
                answers += 1;
                if let Some(log) = log.as_deref_mut() {
                    log.entry(frame).or_default().push(answer_hash(&standardize(&answer).0));
                }
            }
        }
    }
    Ok(answers)
}

fn ms(since: Instant) -> f64 {
    since.elapsed().as_secs_f64() * 1e3
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let mid = xs.len() / 2;
    if xs.len().is_multiple_of(2) {
        (xs[mid - 1] + xs[mid]) / 2.0
    } else {
        xs[mid]
    }
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn check_loaders(space: &TableSpace, log: &AnswerLog, load: LoadMode) -> Result<(), RunError> {
    let stored: usize = log.values().map(Vec::len).sum();
    let frames = space.frame_refs();
    let mut seen = 0;
    for &f in &frames {
        let expected = log.get(&f).map(Vec::as_slice).unwrap_or(&[]);
        seen += expected.len();
        let bottom_up: Vec<u64> = space.load_answers_bottom_up(f).map(|a| answer_hash(&a)).collect();
        if load.bottom_up() && bottom_up != expected {
            return Err(RunError::Loader {
                frame: f,
                detail: format!(
                    "bottom-up loader returned {} answers out of insertion order or content",
                    bottom_up.len()
                ),
            });
        }
        if load.compiled() {
            let mut compiled: Vec<u64> = space.load_answers_compiled(f)?.map(|a| answer_hash(&a)).collect();
            let mut reference = expected.to_vec();
            compiled.sort_unstable();
            reference.sort_unstable();
            if compiled != reference {
                return Err(RunError::Loader {
                    frame: f,
                    detail: format!("compiled loader returned {} answers, {} stored", compiled.len(), reference.len()),
                });
            }
        }
    }
    if seen != stored {
        let frame = log.keys().find(|f| !frames.contains(f)).expect("a logged frame is missing");
        return Err(RunError::Loader { frame: *frame, detail: "frame not reachable from the table space".into() });
    }
    Ok(())
}

/// Runs the store pass and the selected load passes `runs` times. Node counts
/// come from the first run, which is also where the reference model, the
/// reference counts and loader equivalence are checked.
pub fn run(workload: &Workload, n: usize, opts: RunOptions) -> Result<RunReport, RunError> {
    let runs = opts.runs.max(1);
    let mut store_ms = Vec::with_capacity(runs);
    let mut bottom_ms = Vec::new();
    let mut compiled_ms = Vec::new();
    let mut memory = MemoryReport::default();
    let mut answers_total = 0;
    let mut oracle_verified = false;

    for r in 0..runs {
        let first = r == 0;
        let mut space = TableSpace::new(opts.design);
        let mut log = AnswerLog::new();
        let start = Instant::now();
        answers_total = store(&mut space, workload, first.then_some(&mut log))?;
        store_ms.push(ms(start));

        if first {
            memory = snapshot(&space, opts.word_bytes);
            if opts.verify_oracle {
                let expected = oracle_counts(workload, opts.design);
                if !expected.matches(&memory) {
                    return Err(RunError::OracleMismatch { expected, found: memory });
                }
                oracle_verified = true;
            }
            space.check_refcounts().map_err(RunError::Refcounts)?;
        }

        let frames = space.frame_refs();
        if opts.load.bottom_up() {
            let start = Instant::now();
            let mut loaded = 0usize;
            for f in &frames {
                for answer in space.load_answers_bottom_up(*f) {
                    loaded += answer.len() + 1;
                }
            }
            bottom_ms.push(ms(start));
            std::hint::black_box(loaded);
        }
        if opts.load.compiled() {
            for f in &frames {
                space.compile_answer_trie(*f);
            }
            let start = Instant::now();
            let mut loaded = 0usize;
            for f in &frames {
                for answer in space.load_answers_compiled(*f)? {
                    loaded += answer.len() + 1;
                }
            }
            compiled_ms.push(ms(start));
            std::hint::black_box(loaded);
        }
        if first {
            check_loaders(&space, &log, opts.load)?;
        }
    }

    let opt = |xs: &Vec<f64>, f: fn(&[f64]) -> f64| (!xs.is_empty()).then(|| f(xs));
    let med = |xs: &[f64]| median(xs.to_vec());
    Ok(RunReport {
        design: opts.design,
        workload: workload.name.clone(),
        n,
        runs,
        nodes: NodeCounts {
            subgoal: memory.nodes_subgoal,
            answer: memory.nodes_answer,
            gt: memory.nodes_gt,
            hash_buckets: memory.hash_buckets,
        },
        bytes_total: memory.bytes_total,
        answers_total,
        times_ms: Timings {
            store: med(&store_ms),
            load_bottomup: opt(&bottom_ms, med),
            load_compiled: opt(&compiled_ms, med),
        },
        mean_ms: Timings {
            store: mean(&store_ms),
            load_bottomup: opt(&bottom_ms, mean),
            load_compiled: opt(&compiled_ms, mean),
        },
        oracle_verified,
        memory,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use tabling_core::workload::{gen_table1, gen_table2, Table1Kind};

    #[test]
    fn median_of_runs() {
        assert_eq!(median(vec![3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(vec![4.0, 1.0, 2.0, 3.0]), 2.5);
    }

    #[test]
    fn table1_int_answers() {
        let w = gen_table1(Table1Kind::Int, 100, false);
        let mut opts = RunOptions::new(Design::Original);
        opts.load = LoadMode::Bottomup;
        let report = run(&w, 100, opts).unwrap();
        assert_eq!(report.answers_total, 5 * 100 + 4 * 100 * 100);
        assert!(report.oracle_verified);
        assert_eq!(report.times_ms.load_compiled, None);

        let report = run(&w, 100, RunOptions::new(Design::GtT)).unwrap();
        assert_eq!(report.nodes.gt, 0);
    }

    #[test]
    fn repeated_runs_report_identical_counts() {
        let w = gen_table2(2, 3, 200);
        let mut opts = RunOptions::new(Design::GtSt);
        opts.runs = 3;
        let a = run(&w, 200, opts).unwrap();
        let b = run(&w, 200, opts).unwrap();
        assert_eq!(a.runs, 3);
        assert_eq!(a.nodes, b.nodes);
        assert_eq!(a.memory, b.memory);
        assert_eq!(a.answers_total, 200);
    }

    #[test]
    fn oracle_mismatch_is_reported_as_a_diff() {
        let err = RunError::OracleMismatch {
            expected: OracleCount { nodes_subgoal: 1, nodes_answer: 2, nodes_gt: 3 },
            found: MemoryReport { nodes_subgoal: 1, nodes_answer: 2, nodes_gt: 4, ..Default::default() },
        };
        let text = err.to_string();
        assert!(text.contains("gt"));
        assert!(text.lines().any(|l| l.contains("<--") && l.contains('3') && l.contains('4')));
    }
}
