//! Table entries, subgoal tries, subgoal frames and answer tries for the three
//! table space designs.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::global::{GlobalTrie, GtLeafRef, GtMode};
use crate::symbol::Symbol;
use crate::term::{decode_term, standardize, tokenize, CallSignature, Term, Token};
use crate::trie::{AnswerInstruction, Category, ChoiceOp, NodeId, SubsKind, Trie, DEFAULT_HASH_THRESHOLD};

/// Table space organization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Design {
    /// Two levels of tries holding full token sequences.
    #[serde(rename = "original")]
    Original,
    /// Global trie for terms.
    #[serde(rename = "gt-t")]
    GtT,
    /// Global trie for subterms.
    #[serde(rename = "gt-st")]
    GtSt,
}

impl Design {
    pub const ALL: [Design; 3] = [Design::Original, Design::GtT, Design::GtSt];

    pub fn gt_mode(self) -> Option<GtMode> {
        match self {
            Design::Original => None,
            Design::GtT => Some(GtMode::Terms),
            Design::GtSt => Some(GtMode::Subterms),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Design::Original => "original",
            Design::GtT => "gt-t",
            Design::GtSt => "gt-st",
        }
    }
}

impl fmt::Display for Design {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Design {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "original" => Ok(Design::Original),
            "gt-t" => Ok(Design::GtT),
            "gt-st" => Ok(Design::GtSt),
            other => Err(format!("unknown design '{other}' (expected original, gt-t or gt-st)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TableError {
    DesignMismatch { store: Design, requested: Design },
    ArityMismatch { expected: usize, found: usize },
    WrongPredicate { table: String, call: String },
    NotStandardized,
    NotCompiled,
}

impl fmt::Display for TableError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableError::DesignMismatch { store, requested } => {
                write!(f, "table space uses the {store} design, {requested} requested")
            }
            TableError::ArityMismatch { expected, found } => {
                write!(f, "expected {expected} terms, got {found}")
            }
            TableError::WrongPredicate { table, call } => write!(f, "call {call} does not belong to table {table}"),
            TableError::NotStandardized => f.write_str("terms contain unstandardized variables"),
            TableError::NotCompiled => f.write_str("answer trie has not been compiled"),
        }
    }
}

impl std::error::Error for TableError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TableId(usize);

/// Handle on one subgoal frame.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FrameRef {
    pub table: TableId,
    pub frame: usize,
}

/// Per-call anchor of an answer trie.
#[derive(Clone, Debug)]
pub struct SubgoalFrame {
    answer_trie: Trie,
    answer_order: Vec<NodeId>,
    free_var_count: usize,
    compiled: bool,
    call_leaf: NodeId,
}

impl SubgoalFrame {
    pub fn answer_trie(&self) -> &Trie {
        &self.answer_trie
    }

    /// Answer leaves in insertion order.
    pub fn answer_order(&self) -> &[NodeId] {
        &self.answer_order
    }

    pub fn answer_count(&self) -> usize {
        self.answer_order.len()
    }

    pub fn free_var_count(&self) -> usize {
        self.free_var_count
    }

    pub fn is_compiled(&self) -> bool {
        self.compiled
    }

    /// Leaf of the call's path in the subgoal trie.
    pub fn call_leaf(&self) -> NodeId {
        self.call_leaf
    }
}

/// Per-predicate anchor of a subgoal trie.
#[derive(Clone, Debug)]
pub struct TableEntry {
    name: Symbol,
    arity: usize,
    design: Design,
    subgoal_trie: Trie,
    frames: Vec<SubgoalFrame>,
}

impl TableEntry {
    pub fn name(&self) -> Symbol {
        self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn design(&self) -> Design {
        self.design
    }

    pub fn subgoal_trie(&self) -> &Trie {
        &self.subgoal_trie
    }

    pub fn frames(&self) -> &[SubgoalFrame] {
        &self.frames
    }
}

/// All tables of one program plus, for the global trie designs, the shared
/// global trie.
#[derive(Clone, Debug)]
pub struct TableSpace {
    design: Design,
    threshold: Option<usize>,
    gt: Option<GlobalTrie>,
    tables: Vec<TableEntry>,
    by_predicate: HashMap<(Symbol, usize), TableId>,
}

/// Inserts one term below `at` in a local trie. Compound terms go to the
/// global trie when there is one and are represented by a single reference
/// node; the leaf gains a reference only when that node is new.
fn insert_local(trie: &mut Trie, gt: Option<&mut GlobalTrie>, at: NodeId, term: &Term) -> NodeId {
    match gt {
        None => trie.insert_path(at, &tokenize(term)).0,
        Some(gt) => match Token::simple(term) {
            Some(tok) => trie.check_insert(at, tok).0,
            None => {
                let leaf = gt.intern(term);
                let (node, created) = trie.check_insert(at, Token::GtRef(leaf.node()));
                if created {
                    gt.retain(leaf);
                }
                node
            }
        },
    }
}

fn release_refs(trie: &Trie, gt: &mut Option<GlobalTrie>) {
    let Some(gt) = gt else { return };
    for n in trie.nodes() {
        if let Token::GtRef(leaf) = trie.token(n) {
            gt.release(GtLeafRef(leaf));
        }
    }
}

impl TableSpace {
    pub fn new(design: Design) -> TableSpace {
        TableSpace::with_threshold(design, Some(DEFAULT_HASH_THRESHOLD))
    }

    /// `threshold` applies to every trie in the space; `None` disables hashing.
    pub fn with_threshold(design: Design, threshold: Option<usize>) -> TableSpace {
        TableSpace {
            design,
            threshold,
            gt: design.gt_mode().map(|mode| GlobalTrie::with_threshold(mode, threshold)),
            tables: Vec::new(),
            by_predicate: HashMap::new(),
        }
    }

    pub fn design(&self) -> Design {
        self.design
    }

    pub fn global_trie(&self) -> Option<&GlobalTrie> {
        self.gt.as_ref()
    }

    pub fn tables(&self) -> &[TableEntry] {
        &self.tables
    }

    pub fn table_ids(&self) -> impl Iterator<Item = TableId> {
        (0..self.tables.len()).map(TableId)
    }

    pub fn table(&self, id: TableId) -> &TableEntry {
        &self.tables[id.0]
    }

    pub fn frame(&self, f: FrameRef) -> &SubgoalFrame {
        &self.tables[f.table.0].frames[f.frame]
    }

    /// All frames of all tables.
    pub fn frame_refs(&self) -> Vec<FrameRef> {
        self.tables
            .iter()
            .enumerate()
            .flat_map(|(t, entry)| (0..entry.frames.len()).map(move |frame| FrameRef { table: TableId(t), frame }))
            .collect()
    }

    /// Looks up or creates the table for `name/arity`.
    pub fn table_entry(
        &mut self,
        name: impl Into<Symbol>,
        arity: usize,
        design: Design,
    ) -> Result<TableId, TableError> {
        if design != self.design {
            return Err(TableError::DesignMismatch { store: self.design, requested: design });
        }
        let name = name.into();
        if let Some(id) = self.by_predicate.get(&(name, arity)) {
            return Ok(*id);
        }
        let id = TableId(self.tables.len());
        self.tables.push(TableEntry {
            name,
            arity,
            design,
            subgoal_trie: Trie::with_threshold(Category::Subgoal, self.threshold),
            frames: Vec::new(),
        });
        self.by_predicate.insert((name, arity), id);
        Ok(id)
    }

    /// Finds or inserts the call's path in the table's subgoal trie. The flag is
    /// true for a first call.
    pub fn subgoal_check_insert(&mut self, te: TableId, call: &CallSignature) -> Result<(FrameRef, bool), TableError> {
        let entry = &mut self.tables[te.0];
        if call.name != entry.name {
            return Err(TableError::WrongPredicate {
                table: format!("{}/{}", entry.name, entry.arity),
                call: call.to_string(),
            });
        }
        if call.arity() != entry.arity {
            return Err(TableError::ArityMismatch { expected: entry.arity, found: call.arity() });
        }
        if call.args.iter().any(Term::has_raw_vars) {
            return Err(TableError::NotStandardized);
        }
        let mut node = entry.subgoal_trie.root();
        for arg in &call.args {
            node = insert_local(&mut entry.subgoal_trie, self.gt.as_mut(), node, arg);
        }
        if let Some(frame) = entry.subgoal_trie.payload(node) {
            return Ok((FrameRef { table: te, frame: frame as usize }, false));
        }
        let frame = entry.frames.len();
        entry.subgoal_trie.set_payload(node, frame as u64);
        entry.frames.push(SubgoalFrame {
            answer_trie: Trie::with_threshold(Category::Answer, self.threshold),
            answer_order: Vec::new(),
            free_var_count: call.var_count(),
            compiled: false,
            call_leaf: node,
        });
        Ok((FrameRef { table: te, frame }, true))
    }

    /// Finds or inserts an answer (the substitution terms of the call's free
    /// variables). Variables are numbered per answer. The flag is false for a
    /// repeated answer, which allocates nothing.
    pub fn answer_check_insert(&mut self, f: FrameRef, subs: &[Term]) -> Result<(NodeId, bool), TableError> {
        let frame = &mut self.tables[f.table.0].frames[f.frame];
        if subs.len() != frame.free_var_count {
            return Err(TableError::ArityMismatch { expected: frame.free_var_count, found: subs.len() });
        }
        if subs.iter().any(Term::has_raw_vars) {
            return Err(TableError::NotStandardized);
        }
        let (subs, _) = standardize(subs);
        let mut node = frame.answer_trie.root();
        for s in &subs {
            node = insert_local(&mut frame.answer_trie, self.gt.as_mut(), node, s);
        }
        if frame.answer_trie.payload(node).is_some() {
            return Ok((node, false));
        }
        frame.answer_trie.set_payload(node, frame.answer_order.len() as u64);
        frame.answer_order.push(node);
        frame.compiled = false;
        Ok((node, true))
    }

    fn decode_answer(&self, tokens: &[Token], width: usize) -> Vec<Term> {
        let mut it = tokens.iter();
        let mut resolve =
            |leaf: NodeId| self.gt.as_ref().expect("reference token without a global trie").load(GtLeafRef(leaf));
        let answer: Vec<Term> =
            (0..width).map(|_| decode_term(&mut it, &mut resolve).expect("answer path does not decode")).collect();
        debug_assert!(it.next().is_none(), "answer path longer than its substitutions");
        answer
    }

    /// Answers in insertion order, each rebuilt by walking its leaf up to the
    /// answer trie root.
    pub fn load_answers_bottom_up(&self, f: FrameRef) -> impl Iterator<Item = Vec<Term>> + '_ {
        let frame = self.frame(f);
        frame
            .answer_order
            .iter()
            .map(move |leaf| self.decode_answer(&frame.answer_trie.path_tokens(*leaf), frame.free_var_count))
    }

    /// Marks the table complete and writes the do/try/retry/trust code of every
    /// answer node. Does nothing on an already compiled frame.
    pub fn compile_answer_trie(&mut self, f: FrameRef) {
        let frame = &mut self.tables[f.table.0].frames[f.frame];
        if frame.compiled {
            return;
        }
        let trie = &mut frame.answer_trie;
        let mut parents = vec![trie.root()];
        while let Some(p) = parents.pop() {
            let group: Vec<NodeId> = trie.children(p).collect();
            let last = group.len().saturating_sub(1);
            for (i, &n) in group.iter().enumerate() {
                let op = match (i, group.len()) {
                    (_, 1) => ChoiceOp::Do,
                    (0, _) => ChoiceOp::Try,
                    (i, _) if i == last => ChoiceOp::Trust,
                    _ => ChoiceOp::Retry,
                };
                let kind = if trie.token(n).opens_structure() { SubsKind::Compound } else { SubsKind::Simple };
                trie.set_code(n, AnswerInstruction { op, kind });
            }
            parents.extend(group);
        }
        frame.compiled = true;
    }

    /// Answers in trie order, produced by executing the compiled code top-down.
    pub fn load_answers_compiled(&self, f: FrameRef) -> Result<CompiledAnswers<'_>, TableError> {
        let frame = self.frame(f);
        if !frame.compiled {
            return Err(TableError::NotCompiled);
        }
        let trie = &frame.answer_trie;
        let root = trie.root();
        Ok(CompiledAnswers {
            space: self,
            frame,
            next: trie.first_child(root),
            empty_answer: frame.free_var_count == 0 && trie.payload(root).is_some(),
            path: Vec::new(),
            choices: Vec::new(),
        })
    }

    /// Frees the table's subgoal and answer tries, releasing every global trie
    /// reference they hold. The table entry itself stays registered.
    pub fn abolish_table(&mut self, te: TableId) {
        let entry = &mut self.tables[te.0];
        for frame in &entry.frames {
            release_refs(&frame.answer_trie, &mut self.gt);
        }
        release_refs(&entry.subgoal_trie, &mut self.gt);
        entry.frames.clear();
        entry.subgoal_trie.clear();
    }

    pub fn abolish_all(&mut self) {
        for t in 0..self.tables.len() {
            self.abolish_table(TableId(t));
        }
    }

    /// Verifies that every global trie leaf's count equals the number of
    /// reference tokens pointing at it from any trie.
    pub fn check_refcounts(&self) -> Result<(), String> {
        let Some(gt) = &self.gt else { return Ok(()) };
        let mut refs: HashMap<NodeId, u64> = HashMap::new();
        let mut count = |trie: &Trie| {
            for n in trie.nodes() {
                if let Token::GtRef(leaf) = trie.token(n) {
                    *refs.entry(leaf).or_default() += 1;
                }
            }
        };
        count(gt.trie());
        for entry in &self.tables {
            count(&entry.subgoal_trie);
            for frame in &entry.frames {
                count(&frame.answer_trie);
            }
        }
        for leaf in gt.leaves() {
            let held = gt.refcount(leaf);
            let found = refs.remove(&leaf.node()).unwrap_or(0);
            if held != found || held == 0 {
                return Err(format!("leaf {:?} holds {held} references, {found} tokens point at it", leaf.node()));
            }
        }
        match refs.into_iter().next() {
            Some((leaf, n)) => Err(format!("{n} tokens reference {leaf:?}, which is not a live leaf")),
            None => Ok(()),
        }
    }
}

/// Top-down interpreter over a compiled answer trie. Choice points hold the
/// next alternative node and the answer prefix length to restore.
pub struct CompiledAnswers<'a> {
    space: &'a TableSpace,
    frame: &'a SubgoalFrame,
    next: Option<NodeId>,
    empty_answer: bool,
    path: Vec<Token>,
    choices: Vec<(NodeId, usize)>,
}

impl Iterator for CompiledAnswers<'_> {
    type Item = Vec<Term>;

    fn next(&mut self) -> Option<Vec<Term>> {
        if std::mem::take(&mut self.empty_answer) {
            return Some(Vec::new());
        }
        let trie = &self.frame.answer_trie;
        loop {
            let node = self.next?;
            let code = trie.code(node).expect("answer node without code");
            match code.op {
                ChoiceOp::Do => {}
                ChoiceOp::Try => {
                    let alt = trie.next_alternative(node).expect("try without an alternative");
                    self.choices.push((alt, self.path.len()));
                }
                ChoiceOp::Retry => {
                    let alt = trie.next_alternative(node).expect("retry without an alternative");
                    self.choices.last_mut().expect("retry without a choice point").0 = alt;
                }
                ChoiceOp::Trust => {
                    self.choices.pop().expect("trust without a choice point");
                }
            }
            self.path.push(trie.token(node));
            if let Some(child) = trie.first_child(node) {
                self.next = Some(child);
                continue;
            }
            let answer = self.space.decode_answer(&self.path, self.frame.free_var_count);
            self.next = match self.choices.last() {
                Some(&(alt, len)) => {
                    self.path.truncate(len);
                    Some(alt)
                }
                None => None,
            };
            return Some(answer);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_term;

    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    fn call(name: &str, args: &[&str]) -> CallSignature {
        let args: Vec<Term> = args.iter().map(|a| t(a)).collect();
        CallSignature::new(name, &args)
    }

    #[test]
    fn table_entries_are_idempotent() {
        let mut space = TableSpace::new(Design::Original);
        let a = space.table_entry("t", 2, Design::Original).unwrap();
        let b = space.table_entry("t", 2, Design::Original).unwrap();
        let c = space.table_entry("t", 3, Design::Original).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(
            space.table_entry("t", 2, Design::GtT),
            Err(TableError::DesignMismatch { store: Design::Original, requested: Design::GtT })
        );
    }

    #[test]
    fn original_subgoal_nodes() {
        let mut space = TableSpace::new(Design::Original);
        let te = space.table_entry("t", 2, Design::Original).unwrap();
        let (f, new) = space.subgoal_check_insert(te, &call("t", &["f(1)", "Y"])).unwrap();
        assert!(new);
        assert_eq!(space.table(te).subgoal_trie().len(), 3);
        assert_eq!(space.frame(f).free_var_count(), 1);
        let (again, new) = space.subgoal_check_insert(te, &call("t", &["f(1)", "Y"])).unwrap();
        assert!(!new);
        assert_eq!(again, f);
    }

    #[test]
    fn gt_subgoal_nodes() {
        let mut space = TableSpace::new(Design::GtT);
        let te = space.table_entry("t", 2, Design::GtT).unwrap();
        space.subgoal_check_insert(te, &call("t", &["f(1)", "Y"])).unwrap();
        assert_eq!(space.table(te).subgoal_trie().len(), 2);
        assert_eq!(space.global_trie().unwrap().node_count(), 2);

        let mut space = TableSpace::new(Design::GtSt);
        let te = space.table_entry("t", 2, Design::GtSt).unwrap();
        space.subgoal_check_insert(te, &call("t", &["X", "Y"])).unwrap();
        assert_eq!(space.table(te).subgoal_trie().len(), 2);
        assert_eq!(space.global_trie().unwrap().node_count(), 0);
    }

    #[test]
    fn call_errors() {
        let mut space = TableSpace::new(Design::GtT);
        let te = space.table_entry("t", 2, Design::GtT).unwrap();
        assert!(matches!(
            space.subgoal_check_insert(te, &call("t", &["a"])),
            Err(TableError::ArityMismatch { expected: 2, found: 1 })
        ));
        assert!(matches!(
            space.subgoal_check_insert(te, &call("u", &["a", "b"])),
            Err(TableError::WrongPredicate { .. })
        ));
        let (f, _) = space.subgoal_check_insert(te, &call("t", &["a", "X"])).unwrap();
        assert!(matches!(space.answer_check_insert(f, &[]), Err(TableError::ArityMismatch { .. })));
        assert_eq!(space.answer_check_insert(f, &[t("Z")]), Err(TableError::NotStandardized));
        assert!(matches!(space.load_answers_compiled(f), Err(TableError::NotCompiled)));
    }

    fn four_answers(design: Design) -> (TableSpace, FrameRef) {
        let mut space = TableSpace::new(design);
        let te = space.table_entry("t", 2, design).unwrap();
        let (f, _) = space.subgoal_check_insert(te, &call("t", &["X", "Y"])).unwrap();
        for x in ["f(1)", "f(2)"] {
            for y in ["f(1)", "f(2)"] {
                let (_, new) = space.answer_check_insert(f, &[t(x), t(y)]).unwrap();
                assert!(new);
            }
        }
        (space, f)
    }

    #[test]
    fn nine_node_answer_trie() {
        let (mut space, f) = four_answers(Design::Original);
        assert_eq!(space.frame(f).answer_trie().len(), 9);
        let leaf = space.frame(f).answer_order()[0];
        assert_eq!(space.answer_check_insert(f, &[t("f(1)"), t("f(1)")]).unwrap(), (leaf, false));
        assert_eq!(space.frame(f).answer_trie().len(), 9);
    }

    #[test]
    fn gt_answer_tries_hold_one_node_per_substitution() {
        let (space, f) = four_answers(Design::GtT);
        let trie = space.frame(f).answer_trie();
        assert_eq!(trie.len(), 6);
        for leaf in space.frame(f).answer_order() {
            assert_eq!(trie.path_tokens(*leaf).len(), 2);
        }
        assert_eq!(space.global_trie().unwrap().node_count(), 3);
        space.check_refcounts().unwrap();
    }

    #[test]
    fn bottom_up_loading_is_chronological() {
        for design in Design::ALL {
            let (space, f) = four_answers(design);
            let loaded: Vec<Vec<Term>> = space.load_answers_bottom_up(f).collect();
            let expected: Vec<Vec<Term>> = [("f(1)", "f(1)"), ("f(1)", "f(2)"), ("f(2)", "f(1)"), ("f(2)", "f(2)")]
                .iter()
                .map(|(x, y)| vec![t(x), t(y)])
                .collect();
            assert_eq!(loaded, expected, "{design}");
        }
    }

    #[test]
    fn compiled_instructions() {
        let (mut space, f) = four_answers(Design::GtT);
        space.compile_answer_trie(f);
        let trie = space.frame(f).answer_trie();
        let top: Vec<AnswerInstruction> = trie.children(trie.root()).map(|n| trie.code(n).unwrap()).collect();
        assert_eq!(
            top,
            vec![
                AnswerInstruction { op: ChoiceOp::Try, kind: SubsKind::Compound },
                AnswerInstruction { op: ChoiceOp::Trust, kind: SubsKind::Compound },
            ]
        );
        let answers: Vec<Vec<Term>> = space.load_answers_compiled(f).unwrap().collect();
        assert_eq!(answers.len(), 4);
        // two choices for X, and for each X two choices for Y
        assert_eq!(answers[0][0], answers[1][0]);
        assert_eq!(answers[2][0], answers[3][0]);
        assert_ne!(answers[0][0], answers[2][0]);
    }

    #[test]
    fn compiled_single_and_triple_groups() {
        let mut space = TableSpace::new(Design::GtT);
        let te = space.table_entry("p", 1, Design::GtT).unwrap();
        let (f, _) = space.subgoal_check_insert(te, &call("p", &["X"])).unwrap();
        space.answer_check_insert(f, &[Term::Int(1)]).unwrap();
        space.compile_answer_trie(f);
        let trie = space.frame(f).answer_trie();
        let only = trie.first_child(trie.root()).unwrap();
        assert_eq!(trie.code(only).unwrap().to_string(), "do_subs_simple");
        assert_eq!(space.load_answers_compiled(f).unwrap().collect::<Vec<_>>(), vec![vec![Term::Int(1)]]);

        space.answer_check_insert(f, &[Term::Int(2)]).unwrap();
        space.answer_check_insert(f, &[Term::Int(3)]).unwrap();
        assert!(!space.frame(f).is_compiled());
        space.compile_answer_trie(f);
        let trie = space.frame(f).answer_trie();
        let ops: Vec<String> = trie.children(trie.root()).map(|n| trie.code(n).unwrap().to_string()).collect();
        assert_eq!(ops, ["try_subs_simple", "retry_subs_simple", "trust_subs_simple"]);
        let mut got: Vec<Vec<Term>> = space.load_answers_compiled(f).unwrap().collect();
        got.sort();
        assert_eq!(got, vec![vec![Term::Int(1)], vec![Term::Int(2)], vec![Term::Int(3)]]);
    }

    #[test]
    fn ground_calls_have_one_empty_answer() {
        for design in Design::ALL {
            let mut space = TableSpace::new(design);
            let te = space.table_entry("g", 1, design).unwrap();
            let (f, _) = space.subgoal_check_insert(te, &call("g", &["f(1)"])).unwrap();
            assert_eq!(space.load_answers_bottom_up(f).count(), 0);
            assert!(space.answer_check_insert(f, &[]).unwrap().1);
            assert!(!space.answer_check_insert(f, &[]).unwrap().1);
            space.compile_answer_trie(f);
            assert_eq!(space.load_answers_compiled(f).unwrap().collect::<Vec<_>>(), vec![Vec::<Term>::new()]);
            assert_eq!(space.load_answers_bottom_up(f).collect::<Vec<_>>(), vec![Vec::<Term>::new()]);
        }
    }

    #[test]
    fn non_ground_answers_are_numbered_per_answer() {
        let mut space = TableSpace::new(Design::GtSt);
        let te = space.table_entry("p", 2, Design::GtSt).unwrap();
        let (f, _) = space.subgoal_check_insert(te, &call("p", &["X", "Y"])).unwrap();
        let a = standardize(&[t("g(A)"), t("A")]).0;
        space.answer_check_insert(f, &a).unwrap();
        let loaded: Vec<Vec<Term>> = space.load_answers_bottom_up(f).collect();
        assert_eq!(loaded, vec![vec![Term::compound("g", vec![Term::StdVar(0)]), Term::StdVar(0)]]);
    }

    #[test]
    fn abolish_releases_global_references() {
        let mut space = TableSpace::new(Design::GtT);
        let t1 = space.table_entry("a", 1, Design::GtT).unwrap();
        let t2 = space.table_entry("b", 1, Design::GtT).unwrap();
        space.subgoal_check_insert(t1, &call("a", &["f(1)"])).unwrap();
        space.subgoal_check_insert(t2, &call("b", &["f(1)"])).unwrap();
        let gt = space.global_trie().unwrap();
        let leaf = gt.leaves()[0];
        assert_eq!(gt.refcount(leaf), 2);
        space.abolish_table(t1);
        let gt = space.global_trie().unwrap();
        assert_eq!(gt.refcount(leaf), 1);
        assert_eq!(gt.node_count(), 2);
        space.check_refcounts().unwrap();
        space.abolish_table(t2);
        assert_eq!(space.global_trie().unwrap().node_count(), 0);
        // abolishing an empty table is a no-op
        space.abolish_table(t2);
        assert_eq!(space.table(t2).subgoal_trie().len(), 0);
    }
}
