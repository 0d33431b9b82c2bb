//! Table space organizations for tabled logic programs.
//!
//! Three designs share one trie substrate ([`trie`]):
//!
//! * [`Design::Original`]: every subgoal trie and answer trie stores the full
//!   token sequence of its terms.
//! * [`Design::GtT`]: compound argument and substitution terms are stored once
//!   in a [`GlobalTrie`]; local tries hold one reference node per term.
//! * [`Design::GtSt`]: as GT-T, but compound subterms are also stored once,
//!   as paths of their own referenced from the enclosing term's path.
//!
//! [`stats`] counts nodes exactly and carries an independent reference model
//! used to check those counts; [`workload`] generates the benchmark programs.
//!
//! ```
//! use tabling_core::{parse_term, CallSignature, Design, TableSpace};
//!
//! # fn main() -> Result<(), Box<dyn std::error::Error>> {
//! let mut space = TableSpace::new(Design::GtSt);
//! let te = space.table_entry("t", 2, Design::GtSt)?;
//! let call = CallSignature::new("t", &[parse_term("X")?, parse_term("Y")?]);
//! let (frame, _) = space.subgoal_check_insert(te, &call)?;
//! space.answer_check_insert(frame, &[parse_term("f(g(1),g(1))")?, parse_term("a")?])?;
//! assert_eq!(space.load_answers_bottom_up(frame).count(), 1);
//! assert_eq!(space.global_trie().unwrap().node_count(), 5);
//! # Ok(())
//! # }
//! ```

pub mod global;
pub mod parse;
pub mod stats;
pub mod symbol;
pub mod table;
pub mod term;
pub mod trie;
pub mod workload;

pub use global::{GlobalTrie, GtLeafRef, GtMode};
pub use parse::{parse_fact_file, parse_term, ParseError, ParseErrorKind};
pub use stats::{oracle_counts, snapshot, MemoryReport, Oracle, OracleCount};
pub use symbol::Symbol;
pub use table::{CompiledAnswers, Design, FrameRef, SubgoalFrame, TableEntry, TableError, TableId, TableSpace};
pub use term::{format_term, standardize, standardize_term, tokenize, CallSignature, Term, Token};
pub use trie::{AnswerInstruction, Category, ChoiceOp, NodeId, SubsKind, Trie, TrieCounts};
pub use workload::{Query, Table1Kind, Workload, WorkloadSpec};
