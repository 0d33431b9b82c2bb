//! Benchmark workloads: the `t/5` term-kind family, the `t/1` subterm family,
//! fact files and seeded random programs.
//!
//! A workload is a schedule of tabled calls, each with the answers that
//! evaluating it would produce.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::term::{standardize, CallSignature, Term};

/// Answers of one call.
#[derive(Clone, Debug)]
pub enum Answers {
    Explicit(Vec<Vec<Term>>),
    /// Every `width`-tuple over `domain`, leftmost position varying slowest.
    Product {
        domain: Arc<[Term]>,
        width: usize,
    },
}

#[derive(Clone, Debug)]
pub struct Query {
    pub call: CallSignature,
    pub answers: Answers,
}

impl Query {
    pub fn answers(&self) -> Box<dyn Iterator<Item = Vec<Term>> + '_> {
        match &self.answers {
            Answers::Explicit(list) => Box::new(list.iter().cloned()),
            Answers::Product { domain, width } => Box::new(Product::new(domain, *width)),
        }
    }

    pub fn answer_count(&self) -> usize {
        match &self.answers {
            Answers::Explicit(list) => list.len(),
            Answers::Product { domain, width } => domain.len().pow(*width as u32),
        }
    }
}

struct Product<'a> {
    domain: &'a [Term],
    digits: Vec<usize>,
    done: bool,
}

impl<'a> Product<'a> {
    fn new(domain: &'a [Term], width: usize) -> Self {
        Product { domain, digits: vec![0; width], done: domain.is_empty() && width > 0 }
    }
}

impl Iterator for Product<'_> {
    type Item = Vec<Term>;

    fn next(&mut self) -> Option<Vec<Term>> {
        if self.done {
            return None;
        }
        let item = self.digits.iter().map(|&d| self.domain[d].clone()).collect();
        // odometer increment, rightmost digit fastest
        self.done = true;
        for d in self.digits.iter_mut().rev() {
            *d += 1;
            if *d < self.domain.len() {
                self.done = false;
                break;
            }
            *d = 0;
        }
        Some(item)
    }
}

#[derive(Clone, Debug)]
pub struct Workload {
    pub name: String,
    pub queries: Vec<Query>,
}

impl Workload {
    pub fn answer_count(&self) -> usize {
        self.queries.iter().map(Query::answer_count).sum()
    }
}

/// Term kinds of the `t/5` family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Table1Kind {
    Int,
    Atom,
    /// `f(i,...,i)` with the given arity.
    Functor(u32),
    /// `[i,...,i]` with the given length.
    List(u32),
}

impl Table1Kind {
    /// Every kind, simple ones first, then functors and lists by size.
    pub const STANDARD: [Table1Kind; 9] = [
        Table1Kind::Int,
        Table1Kind::Atom,
        Table1Kind::Functor(1),
        Table1Kind::Functor(2),
        Table1Kind::Functor(4),
        Table1Kind::Functor(6),
        Table1Kind::List(1),
        Table1Kind::List(2),
        Table1Kind::List(4),
    ];

    pub fn fact(self, i: i64) -> Term {
        match self {
            Table1Kind::Int => Term::Int(i),
            Table1Kind::Atom => Term::atom(&format!("a{i}")),
            Table1Kind::Functor(k) => Term::compound("f", vec![Term::Int(i); k as usize]),
            Table1Kind::List(l) => Term::List(vec![Term::Int(i); l as usize]),
        }
    }
}

impl fmt::Display for Table1Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Table1Kind::Int => f.write_str("int"),
            Table1Kind::Atom => f.write_str("atom"),
            Table1Kind::Functor(k) => write!(f, "f/{k}"),
            Table1Kind::List(l) => write!(f, "list{l}"),
        }
    }
}

impl FromStr for Table1Kind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("unknown term kind '{s}' (expected int, atom, f/<k> or list<l>)");
        match s {
            "int" => Ok(Table1Kind::Int),
            "atom" => Ok(Table1Kind::Atom),
            _ => {
                if let Some(k) = s.strip_prefix("f/") {
                    match k.parse::<u32>() {
                        Ok(k) if k >= 1 => Ok(Table1Kind::Functor(k)),
                        _ => Err(bad()),
                    }
                } else if let Some(l) = s.strip_prefix("list") {
                    match l.parse::<u32>() {
                        Ok(l) if l >= 1 => Ok(Table1Kind::List(l)),
                        _ => Err(bad()),
                    }
                } else {
                    Err(bad())
                }
            }
        }
    }
}

fn call_with_free(name: &str, fixed: &Term, arity: usize, free: &[usize]) -> CallSignature {
    let args: Vec<Term> = (0..arity)
        .map(|p| match free.iter().position(|&q| q == p) {
            Some(v) => Term::var(&format!("V{v}")),
            None => fixed.clone(),
        })
        .collect();
    CallSignature::new(name, &args)
}

/// `t/5` over `n` facts of one kind: five calls with one free argument (the
/// others bound to the first fact), then calls with two free arguments at
/// adjacent positions (or at every pair with `all_pairs`).
pub fn gen_table1(kind: Table1Kind, n: usize, all_pairs: bool) -> Workload {
    let facts: Arc<[Term]> = (1..=n as i64).map(|i| kind.fact(i)).collect();
    let fixed = facts[0].clone();
    let mut queries = Vec::new();
    for p in 0..5 {
        queries.push(Query {
            call: call_with_free("t", &fixed, 5, &[p]),
            answers: Answers::Product { domain: facts.clone(), width: 1 },
        });
    }
    let pairs: Vec<(usize, usize)> = if all_pairs {
        (0..5).flat_map(|a| (a + 1..5).map(move |b| (a, b))).collect()
    } else {
        (0..4).map(|a| (a, a + 1)).collect()
    };
    for (a, b) in pairs {
        queries.push(Query {
            call: call_with_free("t", &fixed, 5, &[a, b]),
            answers: Answers::Product { domain: facts.clone(), width: 2 },
        });
    }
    Workload { name: format!("table1:{kind}"), queries }
}

/// `n` facts `f(g(i,..,i), ..., g(i,..,i))` with `outer` copies of a `g/inner`
/// subterm, all returned to one call `t(A)`.
pub fn gen_table2(outer: usize, inner: usize, n: usize) -> Workload {
    assert!(outer >= 1 && inner >= 1, "table2 needs outer and inner arity of at least 1");
    let facts: Arc<[Term]> = (1..=n as i64)
        .map(|i| {
            let g = Term::compound("g", vec![Term::Int(i); inner]);
            Term::compound("f", vec![g; outer])
        })
        .collect();
    from_facts(format!("table2:f{outer}.g{inner}"), facts)
}

/// One call `t(A)` answered by every fact.
pub fn from_facts(name: impl Into<String>, facts: impl Into<Arc<[Term]>>) -> Workload {
    let facts: Arc<[Term]> = facts.into();
    Workload {
        name: name.into(),
        queries: vec![Query {
            call: CallSignature::new("t", &[Term::var("A")]),
            answers: Answers::Product { domain: facts, width: 1 },
        }],
    }
}

const MAX_DEPTH: usize = 4;
const MAX_ARITY: usize = 4;

fn random_simple<R: Rng>(rng: &mut R, vars: bool) -> Term {
    match rng.gen_range(0..if vars { 5 } else { 4 }) {
        0 | 1 => Term::Int(rng.gen_range(0..4)),
        2 => Term::atom(["a", "b", "c"][rng.gen_range(0..3)]),
        3 => Term::List(Vec::new()),
        _ => Term::var(["X", "Y", "Z"][rng.gen_range(0..3)]),
    }
}

fn random_term_at<R: Rng>(rng: &mut R, depth: usize, vars: bool) -> Term {
    if depth == 0 || rng.gen_bool(0.35) {
        return random_simple(rng, vars);
    }
    if rng.gen_bool(0.2) {
        let len = rng.gen_range(1..=3);
        return Term::List((0..len).map(|_| random_term_at(rng, depth - 1, vars)).collect());
    }
    let name = ["f", "g", "h"][rng.gen_range(0..3)];
    let arity = rng.gen_range(1..=MAX_ARITY);
    Term::compound(name, (0..arity).map(|_| random_term_at(rng, depth - 1, vars)).collect())
}

/// A random term of depth at most 4 and arity at most 4 over small alphabets
/// (three functor names, four integers, three atoms and, when `vars` is set,
/// three variable names). Not standardized.
pub fn random_term<R: Rng>(rng: &mut R, vars: bool) -> Term {
    random_term_at(rng, MAX_DEPTH, vars)
}

/// A seeded random program of roughly `n_terms` call arguments and answer
/// substitutions over small alphabets (so that sharing is frequent). Calls and
/// answers may contain variables; repeated calls and answers occur.
pub fn random_workload(seed: u64, n_terms: usize) -> Workload {
    let mut rng = StdRng::seed_from_u64(seed);
    let preds: Vec<(&str, usize)> = vec![("p", 1), ("q", 2), ("r", 3), ("s", 0)];
    let mut queries = Vec::new();
    let mut budget = n_terms.max(1) as isize;
    while budget > 0 {
        let (name, arity) = preds[rng.gen_range(0..preds.len())];
        let args: Vec<Term> = (0..arity)
            .map(|_| {
                if rng.gen_bool(0.5) {
                    Term::var(["A", "B", "C"][rng.gen_range(0..3)])
                } else {
                    random_term(&mut rng, true)
                }
            })
            .collect();
        let call = CallSignature::new(name, &args);
        let width = call.var_count();
        let n_answers = rng.gen_range(0..=6);
        let answers: Vec<Vec<Term>> = (0..n_answers)
            .map(|_| {
                let raw: Vec<Term> = (0..width).map(|_| random_term(&mut rng, true)).collect();
                standardize(&raw).0
            })
            .collect();
        budget -= (arity + n_answers * width).max(1) as isize;
        queries.push(Query { call, answers: Answers::Explicit(answers) });
    }
    Workload { name: format!("random:{seed}"), queries }
}

/// Workload selector as written on the command line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WorkloadSpec {
    Table1(Table1Kind),
    Table2 { outer: usize, inner: usize },
    FactFile(std::path::PathBuf),
    Random(u64),
}

impl WorkloadSpec {
    /// Warning for table2 arities outside the reference grid.
    pub fn warning(&self) -> Option<String> {
        match self {
            WorkloadSpec::Table2 { outer, inner } if !(1..=3).contains(outer) || ![1, 3, 5].contains(inner) => {
                Some(format!("table2 f{outer}.g{inner} is outside the reference grid f1..f3 x g1,g3,g5"))
            }
            _ => None,
        }
    }

    pub fn build(&self, n: usize, all_pairs: bool) -> Result<Workload, String> {
        if n == 0 {
            return Err("workload size must be at least 1".into());
        }
        match self {
            WorkloadSpec::Table1(kind) => Ok(gen_table1(*kind, n, all_pairs)),
            WorkloadSpec::Table2 { outer, inner } => Ok(gen_table2(*outer, *inner, n)),
            WorkloadSpec::Random(seed) => Ok(random_workload(*seed, n)),
            WorkloadSpec::FactFile(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
                let mut facts = crate::parse::parse_fact_file(&text).map_err(|e| format!("{}: {e}", path.display()))?;
                facts.truncate(n);
                let facts: Vec<Term> = facts.iter().map(|t| crate::term::standardize_term(t).0).collect();
                Ok(from_facts(format!("factfile:{}", path.display()), facts))
            }
        }
    }
}

impl fmt::Display for WorkloadSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WorkloadSpec::Table1(kind) => write!(f, "table1:{kind}"),
            WorkloadSpec::Table2 { outer, inner } => write!(f, "table2:f{outer}.g{inner}"),
            WorkloadSpec::FactFile(path) => write!(f, "factfile:{}", path.display()),
            WorkloadSpec::Random(seed) => write!(f, "random:{seed}"),
        }
    }
}

impl FromStr for WorkloadSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (family, arg) = s.split_once(':').ok_or_else(|| format!("workload '{s}' must look like <family>:<arg>"))?;
        match family {
            "table1" => Ok(WorkloadSpec::Table1(arg.parse()?)),
            "table2" => {
                let parsed = arg
                    .strip_prefix('f')
                    .and_then(|r| r.split_once(".g"))
                    .and_then(|(a, b)| Some((a.parse::<usize>().ok()?, b.parse::<usize>().ok()?)));
                match parsed {
                    Some((outer, inner)) if outer >= 1 && inner >= 1 => Ok(WorkloadSpec::Table2 { outer, inner }),
                    _ => Err(format!("table2 workload '{arg}' must look like f<a>.g<b> with a, b >= 1")),
                }
            }
            "factfile" => Ok(WorkloadSpec::FactFile(arg.into())),
            "random" => arg.parse().map(WorkloadSpec::Random).map_err(|_| format!("bad random seed '{arg}'")),
            other => Err(format!("unknown workload family '{other}'")),
        }
    }
}
