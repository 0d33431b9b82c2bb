use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

use tabling_core::term::detokenize;
use tabling_core::workload::random_term;
use tabling_core::{
    format_term, parse_term, standardize, standardize_term, tokenize, Category, Design, GlobalTrie, GtMode, TableSpace,
    Term, Token, Trie,
};

fn leaf() -> impl Strategy<Value = Term> {
    prop_oneof![
        (-3i64..4).prop_map(Term::Int),
        prop::sample::select(vec!["a", "b", "nil"]).prop_map(Term::atom),
        prop::sample::select(vec!["X", "Y", "Z", "_W"]).prop_map(Term::var),
        Just(Term::List(vec![])),
    ]
}

/// Terms of depth ≤ 4 and arity ≤ 4, not standardized.
fn term() -> impl Strategy<Value = Term> {
    leaf().prop_recursive(4, 48, 4, |inner| {
        prop_oneof![
            (prop::sample::select(vec!["f", "g", "h"]), prop::collection::vec(inner.clone(), 1..=4))
                .prop_map(|(name, args)| Term::compound(name, args)),
            prop::collection::vec(inner, 1..=3).prop_map(Term::List),
        ]
    })
}

fn std_term() -> impl Strategy<Value = Term> {
    term().prop_map(|t| standardize_term(&t).0)
}

fn compound() -> impl Strategy<Value = Term> {
    std_term().prop_filter("compound terms only", |t| !t.is_simple())
}

fn any_token() -> impl Strategy<Value = Token> {
    prop_oneof![(0i64..40).prop_map(Token::Int), (0u32..6).prop_map(Token::Var), Just(Token::Nil), Just(Token::List)]
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

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn print_parse_round_trip(t in std_term()) {
        let reparsed = parse_term(&format_term(&t)).unwrap();
        prop_assert_eq!(standardize_term(&reparsed).0, t);
    }

    #[test]
    fn tokenize_is_invertible(t in std_term()) {
        let tokens = tokenize(&t);
        prop_assert_eq!(tokens.len(), t.token_len());
        prop_assert_eq!(detokenize(&tokens), Some(t));
    }

    #[test]
    fn tokenize_is_injective(a in std_term(), b in std_term()) {
        prop_assert_eq!(a == b, tokenize(&a) == tokenize(&b));
    }

    #[test]
    fn token_length_law(args in prop::collection::vec(std_term(), 1..4)) {
        let sum: usize = args.iter().map(|a| tokenize(a).len()).sum();
        prop_assert_eq!(tokenize(&Term::compound("k", args.clone())).len(), 1 + sum);
        prop_assert_eq!(tokenize(&Term::List(args.clone())).len(), args.len() + sum + 1);
    }

    #[test]
    fn standardize_is_idempotent(ts in prop::collection::vec(term(), 0..4)) {
        let (once, n) = standardize(&ts);
        let (twice, m) = standardize(&once);
        prop_assert_eq!(&once, &twice);
        prop_assert_eq!(n, m);
    }

    #[test]
    fn insert_then_find(paths in prop::collection::vec(prop::collection::vec(any_token(), 1..5), 1..60)) {
        let mut trie = Trie::new(Category::Answer);
        for path in &paths {
            let mut node = trie.root();
            for tok in path {
                let before = trie.len();
                let (next, created) = trie.check_insert(node, *tok);
                prop_assert_eq!(trie.len(), before + usize::from(created));
                prop_assert_eq!(trie.find_child(node, tok), Some(next));
                node = next;
            }
            prop_assert_eq!(&trie.path_tokens(node), path);
        }
        prop_assert!(trie.validate().is_ok());
    }

    #[test]
    fn hashing_is_transparent(paths in prop::collection::vec(prop::collection::vec(any_token(), 1..4), 1..120)) {
        let mut hashed = Trie::new(Category::Global);
        let mut plain = Trie::with_threshold(Category::Global, None);
        for path in &paths {
            hashed.insert_path(hashed.root(), path);
            plain.insert_path(plain.root(), path);
        }
        prop_assert_eq!(shape(&hashed), shape(&plain));
        prop_assert_eq!(hashed.count().nodes, plain.count().nodes);
        prop_assert!(hashed.validate().is_ok());
    }

    #[test]
    fn removal_keeps_structure_valid(paths in prop::collection::vec(prop::collection::vec(any_token(), 1..4), 1..80)) {
        let mut trie = Trie::new(Category::Global);
        let mut leaves = Vec::new();
        for path in &paths {
            let (leaf, _) = trie.insert_path(trie.root(), path);
            leaves.push(leaf);
        }
        // delete childless nodes until the trie is empty
        while !trie.is_empty() {
            let victim = trie.nodes().into_iter().find(|n| !trie.has_children(*n)).unwrap();
            trie.remove_leaf(victim);
            prop_assert!(trie.validate().is_ok());
        }
    }

    #[test]
    fn global_trie_round_trip(terms in prop::collection::vec(compound(), 1..20)) {
        for mode in [GtMode::Terms, GtMode::Subterms] {
            let mut gt = GlobalTrie::new(mode);
            let leaves: Vec<_> = terms.iter().map(|t| {
                let leaf = gt.intern(t);
                gt.retain(leaf);
                leaf
            }).collect();
            for (t, leaf) in terms.iter().zip(&leaves) {
                prop_assert_eq!(&gt.load(*leaf), t);
            }
            // distinct terms, distinct leaves
            let distinct: BTreeSet<&Term> = terms.iter().collect();
            let distinct_leaves: BTreeSet<_> = leaves.iter().collect();
            prop_assert_eq!(distinct.len(), distinct_leaves.len());
            for leaf in leaves {
                gt.release(leaf);
            }
            prop_assert_eq!(gt.node_count(), 0);
            prop_assert!(gt.trie().validate().is_ok());
        }
    }

    #[test]
    fn modes_agree_without_compound_subterms(
        terms in prop::collection::vec(
            (prop::sample::select(vec!["f", "g"]), prop::collection::vec(leaf(), 1..5))
                .prop_map(|(n, args)| standardize_term(&Term::compound(n, args)).0),
            1..30,
        )
    ) {
        let mut flat = GlobalTrie::new(GtMode::Terms);
        let mut sub = GlobalTrie::new(GtMode::Subterms);
        for t in &terms {
            let a = flat.check_insert_flat(t);
            let b = sub.check_insert_subterm(t);
            prop_assert_eq!(flat.trie().path_tokens(a.node()), sub.trie().path_tokens(b.node()));
        }
        prop_assert_eq!(flat.node_count(), sub.node_count());
    }

    #[test]
    fn path_length_law(calls in prop::collection::vec(prop::collection::vec(term(), 2), 1..10),
                       answers in prop::collection::vec(prop::collection::vec(term(), 4), 0..10)) {
        for design in [Design::GtT, Design::GtSt] {
            let mut space = TableSpace::new(design);
            let te = space.table_entry("p", 2, design).unwrap();
            for args in &calls {
                let call = tabling_core::CallSignature::new("p", args);
                let (f, _) = space.subgoal_check_insert(te, &call).unwrap();
                let width = space.frame(f).free_var_count();
                for raw in &answers {
                    let subs = standardize(&raw[..width.min(raw.len())]).0;
                    if subs.len() == width {
                        space.answer_check_insert(f, &subs).unwrap();
                    }
                }
                prop_assert!(space.check_refcounts().is_ok());
            }
            let entry = space.table(te);
            for frame in entry.frames() {
                prop_assert_eq!(entry.subgoal_trie().path_tokens(frame.call_leaf()).len(), 2);
                for leaf in frame.answer_order() {
                    prop_assert_eq!(frame.answer_trie().path_tokens(*leaf).len(), frame.free_var_count());
                }
            }
        }
    }
}

/// Load/insert round trip over 10,000 generated terms in both modes.
#[test]
fn ten_thousand_random_terms_round_trip() {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for mode in [GtMode::Terms, GtMode::Subterms] {
        let mut gt = GlobalTrie::new(mode);
        let mut stored = Vec::new();
        while stored.len() < 10_000 {
            let t = standardize_term(&random_term(&mut rng, true)).0;
            if t.is_simple() {
                continue;
            }
            let leaf = gt.intern(&t);
            gt.retain(leaf);
            stored.push((t, leaf));
        }
        for (t, leaf) in &stored {
            assert_eq!(&gt.load(*leaf), t);
        }
        gt.trie().validate().unwrap();
        for (_, leaf) in stored {
            gt.release(leaf);
        }
        assert_eq!(gt.node_count(), 0);
    }
}
