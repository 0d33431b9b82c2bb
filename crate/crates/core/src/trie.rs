//! Arena-backed tries with first-child / parent / next-sibling linking.
//!
//! Sibling lists are promoted to a hashed [`SiblingIndex`] once a node gets more
//! than `threshold` children. Promotion changes how children are found, never
//! which children exist.

use std::collections::HashSet;
use std::fmt;

use crate::term::Token;

/// Number of children a plain sibling list may hold before it is hashed.
pub const DEFAULT_HASH_THRESHOLD: usize = 8;
const INITIAL_BUCKETS: usize = 8;
/// Buckets double once entries exceed this multiple of the bucket count.
const MAX_LOAD: usize = 4;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Debug for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Category {
    Subgoal,
    Answer,
    Global,
}

impl Category {
    /// Words per node: token, child, parent, sibling, plus `code` on answer nodes.
    pub fn fields(self) -> usize {
        match self {
            Category::Answer => 5,
            Category::Subgoal | Category::Global => 4,
        }
    }
}

/// The overloaded child field.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Child {
    Empty,
    /// Head of a plain sibling list.
    First(NodeId),
    /// Slot of the sibling index holding the children.
    Hashed(u32),
    /// Leaf payload: a reference count in the global trie, a subgoal frame or
    /// answer number in local tries.
    Payload(u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ChoiceOp {
    Do,
    Try,
    Retry,
    Trust,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SubsKind {
    Simple,
    Compound,
}

/// Compiled-trie instruction stored in an answer node's code field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AnswerInstruction {
    pub op: ChoiceOp,
    pub kind: SubsKind,
}

impl fmt::Display for AnswerInstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.op {
            ChoiceOp::Do => "do",
            ChoiceOp::Try => "try",
            ChoiceOp::Retry => "retry",
            ChoiceOp::Trust => "trust",
        };
        let kind = match self.kind {
            SubsKind::Simple => "simple",
            SubsKind::Compound => "compound",
        };
        write!(f, "{op}_subs_{kind}")
    }
}

#[derive(Clone, Debug)]
struct Node {
    token: Token,
    child: Child,
    parent: Option<NodeId>,
    sibling: Option<NodeId>,
    code: Option<AnswerInstruction>,
}

/// Hash buckets over the children of one node. Buckets chain through the
/// nodes' sibling field.
#[derive(Clone, Debug)]
pub struct SiblingIndex {
    buckets: Vec<Option<NodeId>>,
    entries: usize,
}

impl SiblingIndex {
    pub fn bucket_count(&self) -> usize {
        self.buckets.len()
    }

    pub fn entries(&self) -> usize {
        self.entries
    }

    fn slot(&self, token: &Token) -> usize {
        (token_hash(token) as usize) & (self.buckets.len() - 1)
    }
}

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// 64-bit mix of the token kind and payload.
pub fn token_hash(token: &Token) -> u64 {
    let (kind, payload) = match *token {
        Token::Root => (0u64, 0u64),
        Token::Atom(s) => (1, s.id() as u64),
        Token::Int(i) => (2, i as u64),
        Token::Var(i) => (3, i as u64),
        Token::Functor(s, n) => (4, ((s.id() as u64) << 32) | n as u64),
        Token::List => (5, 0),
        Token::Nil => (6, 0),
        Token::GtRef(n) => (7, n.0 as u64),
    };
    mix64(payload ^ kind.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// Exact structural counts of one trie.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TrieCounts {
    /// Nodes excluding the root.
    pub nodes: usize,
    pub hash_buckets: usize,
    pub max_depth: usize,
}

#[derive(Clone, Debug)]
pub struct Trie {
    category: Category,
    threshold: Option<usize>,
    nodes: Vec<Node>,
    free: Vec<NodeId>,
    indexes: Vec<Option<SiblingIndex>>,
    free_indexes: Vec<u32>,
    live: usize,
}

impl Trie {
    pub fn new(category: Category) -> Trie {
        Trie::with_threshold(category, Some(DEFAULT_HASH_THRESHOLD))
    }

    /// `None` disables hashing entirely.
    pub fn with_threshold(category: Category, threshold: Option<usize>) -> Trie {
        let root = Node { token: Token::Root, child: Child::Empty, parent: None, sibling: None, code: None };
        Trie {
            category,
            threshold,
            nodes: vec![root],
            free: Vec::new(),
            indexes: Vec::new(),
            free_indexes: Vec::new(),
            live: 0,
        }
    }

    pub fn category(&self) -> Category {
        self.category
    }

    pub fn threshold(&self) -> Option<usize> {
        self.threshold
    }

    pub fn root(&self) -> NodeId {
        NodeId(0)
    }

    /// Live nodes, root excluded. Maintained incrementally.
    pub fn len(&self) -> usize {
        self.live
    }

    pub fn is_empty(&self) -> bool {
        self.live == 0
    }

    fn node(&self, n: NodeId) -> &Node {
        &self.nodes[n.index()]
    }

    fn node_mut(&mut self, n: NodeId) -> &mut Node {
        &mut self.nodes[n.index()]
    }

    pub fn token(&self, n: NodeId) -> Token {
        self.node(n).token
    }

    pub fn parent(&self, n: NodeId) -> Option<NodeId> {
        self.node(n).parent
    }

    pub fn child_field(&self, n: NodeId) -> Child {
        self.node(n).child
    }

    pub fn payload(&self, n: NodeId) -> Option<u64> {
        match self.node(n).child {
            Child::Payload(v) => Some(v),
            _ => None,
        }
    }

    /// Stores a leaf payload. Panics if `n` has children.
    pub fn set_payload(&mut self, n: NodeId, value: u64) {
        let node = self.node_mut(n);
        assert!(matches!(node.child, Child::Empty | Child::Payload(_)), "payload on a node with children");
        node.child = Child::Payload(value);
    }

    pub fn clear_payload(&mut self, n: NodeId) {
        let node = self.node_mut(n);
        if let Child::Payload(_) = node.child {
            node.child = Child::Empty;
        }
    }

    pub fn code(&self, n: NodeId) -> Option<AnswerInstruction> {
        self.node(n).code
    }

    pub fn set_code(&mut self, n: NodeId, code: AnswerInstruction) {
        debug_assert_eq!(self.category, Category::Answer, "code field only exists on answer nodes");
        self.node_mut(n).code = Some(code);
    }

    pub fn has_children(&self, n: NodeId) -> bool {
        matches!(self.node(n).child, Child::First(_) | Child::Hashed(_))
    }

    pub fn sibling_index(&self, n: NodeId) -> Option<&SiblingIndex> {
        match self.node(n).child {
            Child::Hashed(slot) => self.indexes[slot as usize].as_ref(),
            _ => None,
        }
    }

    pub fn first_child(&self, n: NodeId) -> Option<NodeId> {
        match self.node(n).child {
            Child::First(head) => Some(head),
            Child::Hashed(slot) => self.index(slot).buckets.iter().find_map(|b| *b),
            Child::Empty | Child::Payload(_) => None,
        }
    }

    /// The next child of `n`'s parent after `n`, in the parent's iteration order.
    pub fn next_alternative(&self, n: NodeId) -> Option<NodeId> {
        let node = self.node(n);
        let parent = node.parent?;
        match self.node(parent).child {
            Child::Hashed(slot) => node.sibling.or_else(|| {
                let index = self.index(slot);
                let from = index.slot(&node.token) + 1;
                index.buckets[from..].iter().find_map(|b| *b)
            }),
            _ => node.sibling,
        }
    }

    pub fn children(&self, n: NodeId) -> Children<'_> {
        Children { trie: self, next: self.first_child(n) }
    }

    pub fn child_count(&self, n: NodeId) -> usize {
        match self.node(n).child {
            Child::Hashed(slot) => self.index(slot).entries,
            _ => self.children(n).count(),
        }
    }

    fn index(&self, slot: u32) -> &SiblingIndex {
        self.indexes[slot as usize].as_ref().expect("dangling sibling index")
    }

    fn index_mut(&mut self, slot: u32) -> &mut SiblingIndex {
        self.indexes[slot as usize].as_mut().expect("dangling sibling index")
    }

    fn chain(&self, mut cur: Option<NodeId>, token: &Token) -> (Option<NodeId>, usize) {
        let mut seen = 0;
        while let Some(id) = cur {
            let node = self.node(id);
            if node.token == *token {
                return (Some(id), seen);
            }
            seen += 1;
            cur = node.sibling;
        }
        (None, seen)
    }

    /// Looks up the child of `n` labelled `token`.
    pub fn find_child(&self, n: NodeId, token: &Token) -> Option<NodeId> {
        match self.node(n).child {
            Child::First(head) => self.chain(Some(head), token).0,
            Child::Hashed(slot) => {
                let index = self.index(slot);
                self.chain(index.buckets[index.slot(token)], token).0
            }
            Child::Empty | Child::Payload(_) => None,
        }
    }

    fn alloc(&mut self, token: Token, parent: NodeId, sibling: Option<NodeId>) -> NodeId {
        let node = Node { token, child: Child::Empty, parent: Some(parent), sibling, code: None };
        self.live += 1;
        match self.free.pop() {
            Some(id) => {
                self.nodes[id.index()] = node;
                id
            }
            None => {
                let id = NodeId(u32::try_from(self.nodes.len()).expect("trie exceeds 2^32 nodes"));
                self.nodes.push(node);
                id
            }
        }
    }

    /// Returns the child of `n` labelled `token`, creating it at the head of
    /// the sibling list (or its hash bucket) when absent. The flag is true when
    /// a node was created.
    pub fn check_insert(&mut self, n: NodeId, token: Token) -> (NodeId, bool) {
        debug_assert_ne!(token, Token::Root);
        match self.node(n).child {
            Child::Empty => {
                let id = self.alloc(token, n, None);
                self.node_mut(n).child = Child::First(id);
                self.maybe_promote(n, 1);
                (id, true)
            }
            Child::First(head) => {
                let (found, seen) = self.chain(Some(head), &token);
                if let Some(id) = found {
                    return (id, false);
                }
                let id = self.alloc(token, n, Some(head));
                self.node_mut(n).child = Child::First(id);
                self.maybe_promote(n, seen + 1);
                (id, true)
            }
            Child::Hashed(slot) => {
                let index = self.index(slot);
                let bucket = index.slot(&token);
                let head = index.buckets[bucket];
                if let (Some(id), _) = self.chain(head, &token) {
                    return (id, false);
                }
                let id = self.alloc(token, n, head);
                let index = self.index_mut(slot);
                index.buckets[bucket] = Some(id);
                index.entries += 1;
                if index.entries > MAX_LOAD * index.buckets.len() {
                    let doubled = index.buckets.len() * 2;
                    self.rehash(slot, doubled);
                }
                (id, true)
            }
            Child::Payload(_) => panic!("check_insert below a payload-carrying leaf"),
        }
    }

    fn maybe_promote(&mut self, n: NodeId, count: usize) {
        let Some(threshold) = self.threshold else { return };
        if count <= threshold {
            return;
        }
        let index = SiblingIndex { buckets: vec![None; INITIAL_BUCKETS], entries: count };
        let slot = match self.free_indexes.pop() {
            Some(slot) => {
                self.indexes[slot as usize] = Some(index);
                slot
            }
            None => {
                self.indexes.push(Some(index));
                (self.indexes.len() - 1) as u32
            }
        };
        let mut buckets = INITIAL_BUCKETS;
        while count > MAX_LOAD * buckets {
            buckets *= 2;
        }
        // Children are relinked into buckets by rehash.
        let members: Vec<NodeId> = self.children(n).collect();
        self.node_mut(n).child = Child::Hashed(slot);
        self.relink(slot, members, buckets);
    }

    fn rehash(&mut self, slot: u32, buckets: usize) {
        let index = self.index(slot);
        let mut members = Vec::with_capacity(index.entries);
        for head in index.buckets.clone() {
            let mut cur = head;
            while let Some(id) = cur {
                members.push(id);
                cur = self.node(id).sibling;
            }
        }
        self.relink(slot, members, buckets);
    }

    fn relink(&mut self, slot: u32, members: Vec<NodeId>, buckets: usize) {
        let mut table = vec![None; buckets];
        let mask = buckets - 1;
        for id in members.iter().rev() {
            let b = (token_hash(&self.node(*id).token) as usize) & mask;
            self.node_mut(*id).sibling = table[b];
            table[b] = Some(*id);
        }
        let index = self.index_mut(slot);
        index.buckets = table;
        index.entries = members.len();
    }

    /// Tokens from the root (exclusive) down to `n` (inclusive).
    pub fn path_tokens(&self, n: NodeId) -> Vec<Token> {
        let mut out = Vec::new();
        let mut cur = n;
        while let Some(parent) = self.node(cur).parent {
            out.push(self.node(cur).token);
            cur = parent;
        }
        out.reverse();
        out
    }

    /// Inserts a whole token path below `from`; returns the last node and the
    /// number of nodes created.
    pub fn insert_path(&mut self, from: NodeId, tokens: &[Token]) -> (NodeId, usize) {
        let mut created = 0;
        let mut cur = from;
        for tok in tokens {
            let (next, new) = self.check_insert(cur, *tok);
            created += usize::from(new);
            cur = next;
        }
        (cur, created)
    }

    /// Unlinks and frees a childless non-root node. Returns its parent.
    pub fn remove_leaf(&mut self, n: NodeId) -> NodeId {
        assert!(!self.has_children(n), "remove_leaf on a node with children");
        let parent = self.node(n).parent.expect("cannot remove the root");
        let token = self.node(n).token;
        let sibling = self.node(n).sibling;
        match self.node(parent).child {
            Child::First(head) => {
                if head == n {
                    self.node_mut(parent).child = sibling.map_or(Child::Empty, Child::First);
                } else {
                    self.unlink_after(head, n, sibling);
                }
            }
            Child::Hashed(slot) => {
                let index = self.index(slot);
                let b = index.slot(&token);
                let head = index.buckets[b].expect("node missing from its bucket");
                if head == n {
                    self.index_mut(slot).buckets[b] = sibling;
                } else {
                    self.unlink_after(head, n, sibling);
                }
                let index = self.index_mut(slot);
                index.entries -= 1;
                if index.entries == 0 {
                    self.indexes[slot as usize] = None;
                    self.free_indexes.push(slot);
                    self.node_mut(parent).child = Child::Empty;
                }
            }
            Child::Empty | Child::Payload(_) => panic!("parent does not list its child"),
        }
        let node = self.node_mut(n);
        node.parent = None;
        node.sibling = None;
        node.child = Child::Empty;
        node.code = None;
        self.free.push(n);
        self.live -= 1;
        parent
    }

    fn unlink_after(&mut self, head: NodeId, n: NodeId, sibling: Option<NodeId>) {
        let mut cur = head;
        loop {
            let next = self.node(cur).sibling.expect("node missing from sibling chain");
            if next == n {
                self.node_mut(cur).sibling = sibling;
                return;
            }
            cur = next;
        }
    }

    /// Drops every node but the root.
    pub fn clear(&mut self) {
        let category = self.category;
        let threshold = self.threshold;
        *self = Trie::with_threshold(category, threshold);
    }

    /// All live nodes below the root, preorder.
    pub fn nodes(&self) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.live);
        let mut stack: Vec<NodeId> = self.children(self.root()).collect();
        while let Some(n) = stack.pop() {
            out.push(n);
            stack.extend(self.children(n));
        }
        out
    }

    /// Exact counts by a full walk from the root.
    pub fn count(&self) -> TrieCounts {
        let mut counts = TrieCounts::default();
        let mut stack = vec![(self.root(), 0usize)];
        while let Some((n, depth)) = stack.pop() {
            if n != self.root() {
                counts.nodes += 1;
            }
            counts.max_depth = counts.max_depth.max(depth);
            if let Some(index) = self.sibling_index(n) {
                counts.hash_buckets += index.bucket_count();
            }
            stack.extend(self.children(n).map(|c| (c, depth + 1)));
        }
        counts
    }

    /// Number of live sibling indexes.
    pub fn index_count(&self) -> usize {
        self.indexes.iter().filter(|i| i.is_some()).count()
    }

    /// Checks the structural invariants: distinct sibling tokens, parent links,
    /// index bookkeeping and the live-node counter.
    pub fn validate(&self) -> Result<(), String> {
        let mut seen = 0;
        let mut stack = vec![self.root()];
        while let Some(n) = stack.pop() {
            let mut tokens = HashSet::new();
            let mut count = 0;
            for c in self.children(n) {
                count += 1;
                if self.node(c).parent != Some(n) {
                    return Err(format!("{c:?} does not point back to parent {n:?}"));
                }
                if !tokens.insert(self.node(c).token) {
                    return Err(format!("duplicate token {} under {n:?}", self.node(c).token));
                }
                if self.find_child(n, &self.node(c).token) != Some(c) {
                    return Err(format!("{c:?} not reachable by lookup under {n:?}"));
                }
                stack.push(c);
            }
            if let Some(index) = self.sibling_index(n) {
                if index.entries != count {
                    return Err(format!("index under {n:?} records {} entries, has {count}", index.entries));
                }
                if index.entries > MAX_LOAD * index.buckets.len() {
                    return Err(format!("index under {n:?} exceeds its load bound"));
                }
            }
            seen += count;
        }
        if seen != self.live {
            return Err(format!("walk found {seen} nodes, counter says {}", self.live));
        }
        Ok(())
    }
}

pub struct Children<'a> {
    trie: &'a Trie,
    next: Option<NodeId>,
}

impl Iterator for Children<'_> {
    type Item = NodeId;

    fn next(&mut self) -> Option<NodeId> {
        let cur = self.next?;
        self.next = self.trie.next_alternative(cur);
        Some(cur)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::Symbol;
    use std::collections::BTreeSet;

    fn f1() -> Token {
        Token::Functor(Symbol::intern("f"), 1)
    }

    #[test]
    fn empty_trie_counts() {
        let t = Trie::new(Category::Subgoal);
        assert_eq!(t.count(), TrieCounts { nodes: 0, hash_buckets: 0, max_depth: 0 });
        assert!(t.path_tokens(t.root()).is_empty());
    }

    #[test]
    fn check_insert_is_idempotent() {
        let mut t = Trie::new(Category::Subgoal);
        let root = t.root();
        let (a, new_a) = t.check_insert(root, f1());
        assert!(new_a);
        assert_eq!(t.child_count(root), 1);
        let (b, new_b) = t.check_insert(root, f1());
        assert!(!new_b);
        assert_eq!(a, b);
        assert_eq!(t.len(), 1);
    }

    #[test]
    fn new_nodes_go_to_the_head() {
        let mut t = Trie::new(Category::Subgoal);
        let root = t.root();
        t.check_insert(root, Token::Int(1));
        t.check_insert(root, Token::Int(2));
        let order: Vec<Token> = t.children(root).map(|c| t.token(c)).collect();
        assert_eq!(order, vec![Token::Int(2), Token::Int(1)]);
    }

    #[test]
    fn shared_prefix_counts() {
        let mut t = Trie::new(Category::Answer);
        let root = t.root();
        t.insert_path(root, &[f1(), Token::Int(1)]);
        let (leaf, created) = t.insert_path(root, &[f1(), Token::Int(2)]);
        assert_eq!(created, 1);
        assert_eq!(t.count(), TrieCounts { nodes: 3, hash_buckets: 0, max_depth: 2 });
        assert_eq!(t.path_tokens(leaf), vec![f1(), Token::Int(2)]);
    }

    #[test]
    fn ninth_sibling_promotes_to_hash() {
        let mut t = Trie::new(Category::Global);
        let root = t.root();
        for i in 0..8 {
            t.check_insert(root, Token::Int(i));
        }
        assert!(t.sibling_index(root).is_none());
        t.check_insert(root, Token::Int(8));
        let index = t.sibling_index(root).expect("promoted");
        assert_eq!(index.entries(), 9);
        assert_eq!(index.bucket_count(), INITIAL_BUCKETS);
        assert_eq!(t.index_count(), 1);
        for i in 0..9 {
            assert!(t.find_child(root, &Token::Int(i)).is_some());
        }
        t.validate().unwrap();
    }

    #[test]
    fn hash_table_expands_under_load() {
        let mut t = Trie::new(Category::Global);
        let root = t.root();
        for i in 0..1000 {
            t.check_insert(root, Token::Int(i));
        }
        let index = t.sibling_index(root).unwrap();
        assert_eq!(index.entries(), 1000);
        assert!(index.entries() <= MAX_LOAD * index.bucket_count());
        assert_eq!(t.count().hash_buckets, index.bucket_count());
        assert_eq!(t.children(root).count(), 1000);
        t.validate().unwrap();
    }

    #[test]
    fn removal_restores_emptiness() {
        let mut t = Trie::new(Category::Global);
        let root = t.root();
        let leaves: Vec<NodeId> = (0..20).map(|i| t.check_insert(root, Token::Int(i)).0).collect();
        for (k, leaf) in leaves.into_iter().enumerate() {
            assert_eq!(t.remove_leaf(leaf), root);
            t.validate().unwrap();
            assert_eq!(t.len(), 19 - k);
        }
        assert_eq!(t.child_field(root), Child::Empty);
        assert_eq!(t.index_count(), 0);
    }

    #[test]
    fn freed_slots_are_reused() {
        let mut t = Trie::new(Category::Subgoal);
        let root = t.root();
        let (a, _) = t.check_insert(root, Token::Int(1));
        t.remove_leaf(a);
        let (b, _) = t.check_insert(root, Token::Int(2));
        assert_eq!(a, b);
        assert_eq!(t.token(b), Token::Int(2));
    }

    #[test]
    fn payload_lives_in_child_field() {
        let mut t = Trie::new(Category::Global);
        let (leaf, _) = t.insert_path(t.root(), &[f1(), Token::Int(1)]);
        t.set_payload(leaf, 3);
        assert_eq!(t.payload(leaf), Some(3));
        assert!(!t.has_children(leaf));
    }

    fn shape(t: &Trie) -> BTreeSet<(Vec<Token>, Token)> {
        t.nodes()
            .into_iter()
            .map(|n| {
                let mut p = t.path_tokens(n);
                let last = p.pop().unwrap();
                (p, last)
            })
            .collect()
    }

    #[test]
    fn hashing_does_not_change_shape() {
        let mut hashed = Trie::new(Category::Subgoal);
        let mut plain = Trie::with_threshold(Category::Subgoal, None);
        for i in 0..9 {
            let path = [Token::Int(i % 3), Token::Int(i)];
            hashed.insert_path(hashed.root(), &path);
            plain.insert_path(plain.root(), &path);
        }
        assert_eq!(shape(&hashed), shape(&plain));
        assert_eq!(plain.index_count(), 0);
        assert_eq!(hashed.index_count(), 0);
        hashed.check_insert(hashed.root(), Token::Int(100));
        assert_eq!(hashed.index_count(), 0);
    }

    #[test]
    fn instruction_names() {
        let i = AnswerInstruction { op: ChoiceOp::Retry, kind: SubsKind::Compound };
        assert_eq!(i.to_string(), "retry_subs_compound");
    }
}
