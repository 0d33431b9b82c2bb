//! Term values, variable standardization and the tokenized (trie) form of terms.

use std::collections::HashMap;
use std::fmt;

use crate::symbol::Symbol;
use crate::trie::NodeId;

/// A logic term.
///
/// `Var` only exists before standardization; tries and the global trie only
/// ever see `StdVar`. Lists are proper lists; `List(vec![])` is `[]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Atom(Symbol),
    Int(i64),
    Var(Symbol),
    StdVar(u32),
    Compound(Symbol, Vec<Term>),
    List(Vec<Term>),
}

impl Term {
    pub fn atom(name: &str) -> Term {
        Term::Atom(Symbol::intern(name))
    }

    pub fn var(name: &str) -> Term {
        Term::Var(Symbol::intern(name))
    }

    /// Builds a compound term. Panics on an empty argument list.
    pub fn compound(name: &str, args: Vec<Term>) -> Term {
        assert!(!args.is_empty(), "compound term {name} needs at least one argument");
        Term::Compound(Symbol::intern(name), args)
    }

    /// Atoms, integers, variables and `[]` occupy a single token.
    pub fn is_simple(&self) -> bool {
        match self {
            Term::Atom(_) | Term::Int(_) | Term::Var(_) | Term::StdVar(_) => true,
            Term::List(elems) => elems.is_empty(),
            Term::Compound(..) => false,
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) | Term::StdVar(_) => false,
            Term::Atom(_) | Term::Int(_) => true,
            Term::Compound(_, args) | Term::List(args) => args.iter().all(Term::is_ground),
        }
    }

    /// True if any raw (unstandardized) variable occurs in the term.
    pub fn has_raw_vars(&self) -> bool {
        match self {
            Term::Var(_) => true,
            Term::StdVar(_) | Term::Atom(_) | Term::Int(_) => false,
            Term::Compound(_, args) | Term::List(args) => args.iter().any(Term::has_raw_vars),
        }
    }

    /// Nesting depth; simple terms have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Term::Compound(_, args) | Term::List(args) if !args.is_empty() => {
                1 + args.iter().map(Term::depth).max().unwrap_or(0)
            }
            _ => 0,
        }
    }

    /// Number of tokens `tokenize` produces for this term.
    pub fn token_len(&self) -> usize {
        match self {
            Term::Compound(_, args) => 1 + args.iter().map(Term::token_len).sum::<usize>(),
            Term::List(elems) => elems.len() + elems.iter().map(Term::token_len).sum::<usize>() + 1,
            _ => 1,
        }
    }
}

/// One trie edge label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Token {
    /// Reserved label of trie roots; `tokenize` never produces it.
    Root,
    Atom(Symbol),
    Int(i64),
    Var(u32),
    Functor(Symbol, u32),
    /// List cell marker, followed by the element's tokens.
    List,
    Nil,
    /// Reference to a leaf of the global trie.
    GtRef(NodeId),
}

impl Token {
    /// Tokens that open a structure (used to pick compound-vs-simple instructions).
    pub fn opens_structure(self) -> bool {
        matches!(self, Token::Functor(..) | Token::List | Token::GtRef(_))
    }

    pub fn simple(term: &Term) -> Option<Token> {
        match *term {
            Term::Atom(s) => Some(Token::Atom(s)),
            Term::Int(i) => Some(Token::Int(i)),
            Term::StdVar(i) => Some(Token::Var(i)),
            Term::List(ref elems) if elems.is_empty() => Some(Token::Nil),
            _ => None,
        }
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Root => f.write_str("ROOT"),
            Token::Atom(s) => write!(f, "{s}"),
            Token::Int(i) => write!(f, "{i}"),
            Token::Var(i) => write!(f, "VAR{i}"),
            Token::Functor(s, n) => write!(f, "{s}/{n}"),
            Token::List => f.write_str("[|]"),
            Token::Nil => f.write_str("[]"),
            Token::GtRef(n) => write!(f, "@{}", n.index()),
        }
    }
}

/// Appends the preorder token sequence of a standardized term.
///
/// Panics if `term` still contains a raw `Var`.
pub fn tokenize_into(term: &Term, out: &mut Vec<Token>) {
    match term {
        Term::Atom(s) => out.push(Token::Atom(*s)),
        Term::Int(i) => out.push(Token::Int(*i)),
        Term::StdVar(i) => out.push(Token::Var(*i)),
        Term::Var(name) => panic!("tokenize: variable {name} is not standardized"),
        Term::Compound(name, args) => {
            out.push(Token::Functor(*name, args.len() as u32));
            for arg in args {
                tokenize_into(arg, out);
            }
        }
        Term::List(elems) => {
            for elem in elems {
                out.push(Token::List);
                tokenize_into(elem, out);
            }
            out.push(Token::Nil);
        }
    }
}

pub fn tokenize(term: &Term) -> Vec<Token> {
    let mut out = Vec::with_capacity(term.token_len());
    tokenize_into(term, &mut out);
    out
}

/// Reads one term back from a token stream. `GtRef` tokens are materialized
/// through `resolve`. Returns `None` on a truncated or malformed stream.
pub fn decode_term<'a, I, F>(tokens: &mut I, resolve: &mut F) -> Option<Term>
where
    I: Iterator<Item = &'a Token>,
    F: FnMut(NodeId) -> Term,
{
    match *tokens.next()? {
        Token::Atom(s) => Some(Term::Atom(s)),
        Token::Int(i) => Some(Term::Int(i)),
        Token::Var(i) => Some(Term::StdVar(i)),
        Token::Nil => Some(Term::List(Vec::new())),
        Token::GtRef(leaf) => Some(resolve(leaf)),
        Token::Functor(name, arity) => {
            let args = (0..arity).map(|_| decode_term(tokens, resolve)).collect::<Option<Vec<_>>>()?;
            Some(Term::Compound(name, args))
        }
        Token::List => {
            let mut elems = vec![decode_term(tokens, resolve)?];
            loop {
                match tokens.next()? {
                    Token::List => elems.push(decode_term(tokens, resolve)?),
                    Token::Nil => return Some(Term::List(elems)),
                    _ => return None,
                }
            }
        }
        Token::Root => None,
    }
}

/// Decodes a token sequence holding no global-trie references.
pub fn detokenize(tokens: &[Token]) -> Option<Term> {
    let mut it = tokens.iter();
    let term = decode_term(&mut it, &mut |_| panic!("unexpected global trie reference"))?;
    it.next().is_none().then_some(term)
}

#[derive(Default)]
struct Renamer {
    raw: HashMap<Symbol, u32>,
    std: HashMap<u32, u32>,
}

impl Renamer {
    fn next(&self) -> u32 {
        (self.raw.len() + self.std.len()) as u32
    }

    fn rename(&mut self, term: &Term) -> Term {
        match term {
            Term::Var(name) => {
                let next = self.next();
                Term::StdVar(*self.raw.entry(*name).or_insert(next))
            }
            Term::StdVar(i) => {
                let next = self.next();
                Term::StdVar(*self.std.entry(*i).or_insert(next))
            }
            Term::Compound(name, args) => Term::Compound(*name, args.iter().map(|a| self.rename(a)).collect()),
            Term::List(elems) => Term::List(elems.iter().map(|e| self.rename(e)).collect()),
            other => other.clone(),
        }
    }
}

/// Renames variables jointly across `terms` to `StdVar(0..k)` in order of first
/// appearance (left to right, depth first). Returns the renamed terms and `k`.
///
/// Already standardized variables are renumbered the same way, so the function
/// is idempotent on its own output.
pub fn standardize(terms: &[Term]) -> (Vec<Term>, usize) {
    let mut renamer = Renamer::default();
    let out = terms.iter().map(|t| renamer.rename(t)).collect();
    (out, renamer.raw.len() + renamer.std.len())
}

pub fn standardize_term(term: &Term) -> (Term, usize) {
    let (mut out, count) = standardize(std::slice::from_ref(term));
    (out.pop().expect("one term in, one term out"), count)
}

/// A tabled call with standardized arguments.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CallSignature {
    pub name: Symbol,
    pub args: Vec<Term>,
    var_count: usize,
}

impl CallSignature {
    /// Standardizes `args` jointly and builds the call.
    pub fn new(name: impl Into<Symbol>, args: &[Term]) -> CallSignature {
        let (args, var_count) = standardize(args);
        CallSignature { name: name.into(), args, var_count }
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    /// Number of distinct variables in the call (the answer tuple width).
    pub fn var_count(&self) -> usize {
        self.var_count
    }
}

impl fmt::Display for CallSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            write_seq(f, &self.args)?;
            f.write_str(")")?;
        }
        Ok(())
    }
}

fn write_seq(f: &mut fmt::Formatter<'_>, terms: &[Term]) -> fmt::Result {
    for (i, t) in terms.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{t}")?;
    }
    Ok(())
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Atom(s) | Term::Var(s) => write!(f, "{s}"),
            Term::Int(i) => write!(f, "{i}"),
            Term::StdVar(i) => write!(f, "_G{i}"),
            Term::Compound(name, args) => {
                write!(f, "{name}(")?;
                write_seq(f, args)?;
                f.write_str(")")
            }
            Term::List(elems) => {
                f.write_str("[")?;
                write_seq(f, elems)?;
                f.write_str("]")
            }
        }
    }
}

pub fn format_term(term: &Term) -> String {
    term.to_string()
}
