//! The global trie: a single trie in which compound terms are stored once and
//! referenced from subgoal and answer tries by leaf.
//!
//! In [`GtMode::Terms`] a term is stored as its flat token path. In
//! [`GtMode::Subterms`] every compound subterm is first stored as a path of
//! its own and the enclosing path holds a [`Token::GtRef`] to the subterm's
//! leaf. Leaves keep a reference count in their child field; a path is deleted
//! when its count drops to zero.

use crate::term::{decode_term, tokenize, Term, Token};
use crate::trie::{Category, NodeId, Trie, DEFAULT_HASH_THRESHOLD};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GtMode {
    /// Whole compound terms interned as flat token paths (GT-T).
    Terms,
    /// Compound subterms interned as individual paths (GT-ST).
    Subterms,
}

/// Reference to a global trie leaf.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GtLeafRef(pub NodeId);

impl GtLeafRef {
    pub fn node(self) -> NodeId {
        self.0
    }
}

#[derive(Clone, Debug)]
pub struct GlobalTrie {
    trie: Trie,
    mode: GtMode,
}

impl GlobalTrie {
    pub fn new(mode: GtMode) -> GlobalTrie {
        GlobalTrie::with_threshold(mode, Some(DEFAULT_HASH_THRESHOLD))
    }

    pub fn with_threshold(mode: GtMode, threshold: Option<usize>) -> GlobalTrie {
        GlobalTrie { trie: Trie::with_threshold(Category::Global, threshold), mode }
    }

    pub fn mode(&self) -> GtMode {
        self.mode
    }

    pub fn trie(&self) -> &Trie {
        &self.trie
    }

    pub fn root(&self) -> NodeId {
        self.trie.root()
    }

    pub fn node_count(&self) -> usize {
        self.trie.len()
    }

    pub fn refcount(&self, leaf: GtLeafRef) -> u64 {
        self.trie.payload(leaf.0).unwrap_or(0)
    }

    /// Leaves currently holding a reference count.
    pub fn leaves(&self) -> Vec<GtLeafRef> {
        self.trie.nodes().into_iter().filter(|n| self.trie.payload(*n).is_some()).map(GtLeafRef).collect()
    }

    /// GT-T insertion: stores the flat token path of `term` and takes one
    /// reference on its leaf.
    pub fn check_insert_flat(&mut self, term: &Term) -> GtLeafRef {
        assert_eq!(self.mode, GtMode::Terms, "flat insertion on a subterm global trie");
        let leaf = self.intern(term);
        self.retain(leaf);
        leaf
    }

    /// GT-ST insertion: stores `term` with its compound subterms interned
    /// separately and takes one reference on the term's leaf.
    pub fn check_insert_subterm(&mut self, term: &Term) -> GtLeafRef {
        assert_eq!(self.mode, GtMode::Subterms, "subterm insertion on a flat global trie");
        let leaf = self.intern(term);
        self.retain(leaf);
        leaf
    }

    /// Stores `term` according to the trie's mode without taking a reference
    /// on the returned leaf. References held by GT-ST subterm nodes are
    /// accounted for.
    ///
    /// Panics if `term` is simple or not standardized.
    pub fn intern(&mut self, term: &Term) -> GtLeafRef {
        assert!(!term.is_simple(), "only compound terms enter the global trie");
        let root = self.root();
        let leaf = match self.mode {
            GtMode::Terms => self.trie.insert_path(root, &tokenize(term)).0,
            GtMode::Subterms => self.term_check_insert(root, term),
        };
        if self.trie.payload(leaf).is_none() {
            self.trie.set_payload(leaf, 0);
        }
        GtLeafRef(leaf)
    }

    fn term_check_insert(&mut self, at: NodeId, term: &Term) -> NodeId {
        if let Some(tok) = Token::simple(term) {
            return self.trie.check_insert(at, tok).0;
        }
        match term {
            Term::Compound(name, args) if at == self.root() => {
                let mut node = self.trie.check_insert(at, Token::Functor(*name, args.len() as u32)).0;
                for arg in args {
                    node = self.term_check_insert(node, arg);
                }
                node
            }
            Term::Compound(..) => {
                let sub = self.intern(term);
                let (node, created) = self.trie.check_insert(at, Token::GtRef(sub.0));
                if created {
                    self.retain(sub);
                }
                node
            }
            // Lists stay inline at any depth; only their compound elements are
            // interned as subterms.
            Term::List(elems) => {
                let mut node = at;
                for elem in elems {
                    node = self.trie.check_insert(node, Token::List).0;
                    node = self.term_check_insert(node, elem);
                }
                self.trie.check_insert(node, Token::Nil).0
            }
            Term::Var(name) => panic!("variable {name} is not standardized"),
            _ => unreachable!("simple terms handled above"),
        }
    }

    pub fn retain(&mut self, leaf: GtLeafRef) {
        let count = self.trie.payload(leaf.0).expect("retain on a node that is not a global trie leaf");
        self.trie.set_payload(leaf.0, count + 1);
    }

    /// Drops one reference. At zero the path is deleted bottom-up until a node
    /// with other children (or the root) is reached; subterm references on the
    /// deleted part are released in turn.
    pub fn release(&mut self, leaf: GtLeafRef) {
        let count = match self.trie.payload(leaf.0) {
            Some(c) if c > 0 => c,
            _ => panic!("release of global trie leaf {:?} with no references", leaf.0),
        };
        if count > 1 {
            self.trie.set_payload(leaf.0, count - 1);
            return;
        }
        self.trie.clear_payload(leaf.0);
        let root = self.root();
        let mut targets = Vec::new();
        let mut node = leaf.0;
        loop {
            if let Token::GtRef(target) = self.trie.token(node) {
                targets.push(GtLeafRef(target));
            }
            let parent = self.trie.remove_leaf(node);
            if parent == root || self.trie.has_children(parent) {
                break;
            }
            node = parent;
        }
        // The path is gone before targets are touched: a target's path may
        // share ancestors with it.
        for target in targets {
            self.release(target);
        }
    }

    /// Rebuilds the term stored at `leaf`, loading referenced subterms first.
    ///
    /// Panics on a leaf without references.
    pub fn load(&self, leaf: GtLeafRef) -> Term {
        match self.trie.payload(leaf.0) {
            Some(c) if c > 0 => {}
            _ => panic!("dangling global trie reference {:?}", leaf.0),
        }
        let tokens = self.trie.path_tokens(leaf.0);
        let mut it = tokens.iter();
        decode_term(&mut it, &mut |r| self.load(GtLeafRef(r))).expect("global trie path does not decode")
    }
}
