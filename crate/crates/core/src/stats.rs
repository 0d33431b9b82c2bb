//! Node accounting for a table space and the reference counts it is checked
//! against.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::table::{Design, TableSpace};
use crate::term::{standardize, tokenize, CallSignature, Term, Token};
use crate::trie::{Category, TrieCounts};
use crate::workload::Workload;

/// Default word size of the byte estimate.
pub const DEFAULT_WORD_BYTES: usize = 8;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MemoryReport {
    pub nodes_subgoal: usize,
    pub nodes_answer: usize,
    pub nodes_gt: usize,
    pub hash_buckets: usize,
    pub word_bytes: usize,
    pub bytes_subgoal: usize,
    pub bytes_answer: usize,
    pub bytes_gt: usize,
    pub bytes_hash: usize,
    pub bytes_total: usize,
}

impl MemoryReport {
    pub fn from_counts(subgoal: TrieCounts, answer: TrieCounts, gt: TrieCounts, word_bytes: usize) -> MemoryReport {
        let bytes = |nodes: usize, cat: Category| nodes * cat.fields() * word_bytes;
        let hash_buckets = subgoal.hash_buckets + answer.hash_buckets + gt.hash_buckets;
        let bytes_subgoal = bytes(subgoal.nodes, Category::Subgoal);
        let bytes_answer = bytes(answer.nodes, Category::Answer);
        let bytes_gt = bytes(gt.nodes, Category::Global);
        let bytes_hash = hash_buckets * word_bytes;
        MemoryReport {
            nodes_subgoal: subgoal.nodes,
            nodes_answer: answer.nodes,
            nodes_gt: gt.nodes,
            hash_buckets,
            word_bytes,
            bytes_subgoal,
            bytes_answer,
            bytes_gt,
            bytes_hash,
            bytes_total: bytes_subgoal + bytes_answer + bytes_gt + bytes_hash,
        }
    }

    pub fn total_nodes(&self) -> usize {
        self.nodes_subgoal + self.nodes_answer + self.nodes_gt
    }
}

fn add(a: TrieCounts, b: TrieCounts) -> TrieCounts {
    TrieCounts {
        nodes: a.nodes + b.nodes,
        hash_buckets: a.hash_buckets + b.hash_buckets,
        max_depth: a.max_depth.max(b.max_depth),
    }
}

/// Exact counts by walking every trie of the space.
pub fn snapshot(space: &TableSpace, word_bytes: usize) -> MemoryReport {
    let mut subgoal = TrieCounts::default();
    let mut answer = TrieCounts::default();
    for entry in space.tables() {
        subgoal = add(subgoal, entry.subgoal_trie().count());
        for frame in entry.frames() {
            answer = add(answer, frame.answer_trie().count());
        }
    }
    let gt = space.global_trie().map(|gt| gt.trie().count()).unwrap_or_default();
    MemoryReport::from_counts(subgoal, answer, gt, word_bytes)
}

/// Expected node counts of a workload under one design.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleCount {
    pub nodes_subgoal: usize,
    pub nodes_answer: usize,
    pub nodes_gt: usize,
}

impl OracleCount {
    pub fn total(&self) -> usize {
        self.nodes_subgoal + self.nodes_answer + self.nodes_gt
    }

    pub fn matches(&self, report: &MemoryReport) -> bool {
        self.nodes_subgoal == report.nodes_subgoal
            && self.nodes_answer == report.nodes_answer
            && self.nodes_gt == report.nodes_gt
    }
}

/// Edge label of the reference model. A reference is named by the prefix id
/// of the referenced path, so two references are equal iff they name the same
/// stored term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Label {
    Tok(Token),
    Ref(u32),
}

/// A set of label sequences closed under prefixes. A prefix is identified by
/// its parent prefix and last label; the number of distinct non-empty prefixes
/// is the node count of a trie holding the sequences.
#[derive(Default)]
struct PrefixSet {
    ids: HashMap<(u32, Label), u32>,
}

impl PrefixSet {
    const EMPTY: u32 = 0;

    fn extend(&mut self, from: u32, labels: &[Label]) -> u32 {
        labels.iter().fold(from, |prefix, label| {
            let next = self.ids.len() as u32 + 1;
            *self.ids.entry((prefix, *label)).or_insert(next)
        })
    }

    fn len(&self) -> usize {
        self.ids.len()
    }
}

/// Reference model of the table space: explicit sets of label sequences per
/// trie, with each design's interning rules applied directly to terms.
pub struct Oracle {
    design: Design,
    subgoals: HashMap<(crate::symbol::Symbol, usize), PrefixSet>,
    answers: HashMap<((crate::symbol::Symbol, usize), u32), PrefixSet>,
    gt: PrefixSet,
}

/// Identifies one distinct call in the oracle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct OracleCall(((crate::symbol::Symbol, usize), u32));

impl Oracle {
    pub fn new(design: Design) -> Oracle {
        Oracle { design, subgoals: HashMap::new(), answers: HashMap::new(), gt: PrefixSet::default() }
    }

    fn tokens(term: &Term) -> Vec<Label> {
        tokenize(term).into_iter().map(Label::Tok).collect()
    }

    /// Path of a compound term in the global trie; returns its last prefix.
    fn gt_path(&mut self, term: &Term) -> u32 {
        let labels = match self.design {
            Design::GtSt => {
                let mut out = Vec::new();
                self.subterm_labels(term, true, &mut out);
                out
            }
            _ => Self::tokens(term),
        };
        self.gt.extend(PrefixSet::EMPTY, &labels)
    }

    fn subterm_labels(&mut self, term: &Term, top: bool, out: &mut Vec<Label>) {
        match term {
            Term::Compound(name, args) if top => {
                out.push(Label::Tok(Token::Functor(*name, args.len() as u32)));
                for arg in args {
                    self.subterm_labels(arg, false, out);
                }
            }
            Term::Compound(..) => {
                let id = self.gt_path(term);
                out.push(Label::Ref(id));
            }
            Term::List(elems) if !elems.is_empty() => {
                for elem in elems {
                    out.push(Label::Tok(Token::List));
                    self.subterm_labels(elem, false, out);
                }
                out.push(Label::Tok(Token::Nil));
            }
            simple => out.extend(Self::tokens(simple)),
        }
    }

    fn local_labels(&mut self, terms: &[Term]) -> Vec<Label> {
        let mut out = Vec::new();
        for term in terms {
            if self.design == Design::Original || term.is_simple() {
                out.extend(Self::tokens(term));
            } else {
                let id = self.gt_path(term);
                out.push(Label::Ref(id));
            }
        }
        out
    }

    pub fn add_call(&mut self, call: &CallSignature) -> OracleCall {
        let labels = self.local_labels(&call.args);
        let key = (call.name, call.arity());
        let leaf = self.subgoals.entry(key).or_default().extend(PrefixSet::EMPTY, &labels);
        OracleCall((key, leaf))
    }

    pub fn add_answer(&mut self, call: OracleCall, subs: &[Term]) {
        let (subs, _) = standardize(subs);
        let labels = self.local_labels(&subs);
        self.answers.entry(call.0).or_default().extend(PrefixSet::EMPTY, &labels);
    }

    pub fn counts(&self) -> OracleCount {
        OracleCount {
            nodes_subgoal: self.subgoals.values().map(PrefixSet::len).sum(),
            nodes_answer: self.answers.values().map(PrefixSet::len).sum(),
            nodes_gt: self.gt.len(),
        }
    }
}

/// Expected counts after storing every call and answer of `workload`.
pub fn oracle_counts(workload: &Workload, design: Design) -> OracleCount {
    let mut oracle = Oracle::new(design);
    for query in &workload.queries {
        let call = oracle.add_call(&query.call);
        for answer in query.answers() {
            oracle.add_answer(call, &answer);
        }
    }
    oracle.counts()
}
