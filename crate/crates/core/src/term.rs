//! Terms, literals and clauses.
//!
//! Terms are stored flattened in preorder. Every node records the length of
//! the subterm it roots, so skipping a whole argument is a single addition
//! and comparing two subterms is a slice comparison.

use std::collections::HashSet;
use std::fmt;

use crate::symbol::{FunId, PredId, SymbolTable, VarId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sym {
    Var(VarId),
    Fun(FunId),
}

/// One preorder node: a symbol and the number of nodes in its subterm.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Node {
    pub sym: Sym,
    pub len: u32,
}

/// Borrowed view of a flattened term.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct TermRef<'a> {
    nodes: &'a [Node],
}

impl<'a> TermRef<'a> {
    /// `nodes` must start at a subterm root; trailing nodes are ignored.
    pub fn new(nodes: &'a [Node]) -> Self {
        TermRef {
            nodes: &nodes[..nodes[0].len as usize],
        }
    }

    pub fn nodes(self) -> &'a [Node] {
        self.nodes
    }

    pub fn root(self) -> Sym {
        self.nodes[0].sym
    }

    pub fn as_var(self) -> Option<VarId> {
        match self.root() {
            Sym::Var(v) => Some(v),
            Sym::Fun(_) => None,
        }
    }

    pub fn args(self) -> Args<'a> {
        Args {
            rest: &self.nodes[1..],
        }
    }

    pub fn to_term(self) -> Term {
        Term {
            nodes: self.nodes.into(),
        }
    }

    pub fn display(self, symbols: &'a SymbolTable) -> impl fmt::Display + 'a {
        DisplayTerm {
            term: self,
            symbols,
        }
    }
}

impl fmt::Debug for TermRef<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.root() {
            Sym::Var(v) => write!(f, "x{}", v.0)?,
            Sym::Fun(g) => write!(f, "f{}", g.0)?,
        }
        let mut args = self.args().peekable();
        if args.peek().is_some() {
            f.write_str("(")?;
            for (k, a) in args.enumerate() {
                if k > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{a:?}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// Iterator over consecutive subterms of a flattened sequence.
#[derive(Clone)]
pub struct Args<'a> {
    rest: &'a [Node],
}

impl<'a> Args<'a> {
    pub fn over(nodes: &'a [Node]) -> Self {
        Args { rest: nodes }
    }
}

impl<'a> Iterator for Args<'a> {
    type Item = TermRef<'a>;

    fn next(&mut self) -> Option<TermRef<'a>> {
        let first = self.rest.first()?;
        let (head, tail) = self.rest.split_at(first.len as usize);
        self.rest = tail;
        Some(TermRef { nodes: head })
    }
}

/// Owned flattened term.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term {
    nodes: Box<[Node]>,
}

impl Term {
    pub fn var(v: VarId) -> Term {
        Term {
            nodes: Box::new([Node {
                sym: Sym::Var(v),
                len: 1,
            }]),
        }
    }

    pub fn constant(f: FunId) -> Term {
        Term::app(f, Vec::new())
    }

    pub fn app(f: FunId, args: Vec<Term>) -> Term {
        let len = 1 + args.iter().map(|a| a.nodes.len()).sum::<usize>();
        let mut nodes = Vec::with_capacity(len);
        nodes.push(Node {
            sym: Sym::Fun(f),
            len: len as u32,
        });
        for a in &args {
            nodes.extend_from_slice(&a.nodes);
        }
        Term {
            nodes: nodes.into(),
        }
    }

    pub fn as_ref(&self) -> TermRef<'_> {
        TermRef { nodes: &self.nodes }
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn display<'a>(&'a self, symbols: &'a SymbolTable) -> impl fmt::Display + 'a {
        self.as_ref().display(symbols)
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.as_ref().fmt(f)
    }
}

struct DisplayTerm<'a> {
    term: TermRef<'a>,
    symbols: &'a SymbolTable,
}

impl fmt::Display for DisplayTerm<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.term.root() {
            Sym::Var(v) => f.write_str(self.symbols.variable_name(v))?,
            Sym::Fun(g) => f.write_str(self.symbols.function_name(g))?,
        }
        write_args(f, self.term.args(), self.symbols)
    }
}

fn write_args(f: &mut fmt::Formatter<'_>, args: Args<'_>, symbols: &SymbolTable) -> fmt::Result {
    let mut args = args.peekable();
    if args.peek().is_none() {
        return Ok(());
    }
    f.write_str("(")?;
    for (k, a) in args.enumerate() {
        if k > 0 {
            f.write_str(",")?;
        }
        write!(f, "{}", a.display(symbols))?;
    }
    f.write_str(")")
}

/// A possibly negated atom. `args` holds the flattened arguments back to back.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pred: PredId,
    positive: bool,
    symmetric: bool,
    args: Box<[Node]>,
}

impl Literal {
    pub fn new(pred: PredId, positive: bool, symmetric: bool, args: Vec<Term>) -> Literal {
        let mut nodes = Vec::with_capacity(args.iter().map(|a| a.nodes.len()).sum());
        for a in &args {
            nodes.extend_from_slice(&a.nodes);
        }
        Literal {
            pred,
            positive,
            symmetric: symmetric && args.len() == 2,
            args: nodes.into(),
        }
    }

    pub(crate) fn from_nodes(pred: PredId, positive: bool, symmetric: bool, args: Box<[Node]>) -> Literal {
        Literal {
            pred,
            positive,
            symmetric,
            args,
        }
    }

    pub fn predicate(&self) -> PredId {
        self.pred
    }

    pub fn is_positive(&self) -> bool {
        self.positive
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn arg_nodes(&self) -> &[Node] {
        &self.args
    }

    pub fn args(&self) -> Args<'_> {
        Args::over(&self.args)
    }

    pub fn arity(&self) -> usize {
        self.args().count()
    }

    pub fn complement(&self) -> Literal {
        Literal {
            positive: !self.positive,
            ..self.clone()
        }
    }

    /// Same atom, opposite polarity.
    pub fn is_complement_of(&self, other: &Literal) -> bool {
        self.pred == other.pred && self.positive != other.positive && self.args == other.args
    }

    /// Both arguments exchanged; only meaningful for binary predicates.
    pub fn swapped(&self) -> Literal {
        let mut it = self.args();
        let (a, b) = (it.next().unwrap(), it.next().unwrap());
        let mut nodes = Vec::with_capacity(self.args.len());
        nodes.extend_from_slice(b.nodes());
        nodes.extend_from_slice(a.nodes());
        Literal {
            args: nodes.into(),
            ..self.clone()
        }
    }

    pub fn variables(&self) -> impl Iterator<Item = VarId> + '_ {
        self.args.iter().filter_map(|n| match n.sym {
            Sym::Var(v) => Some(v),
            Sym::Fun(_) => None,
        })
    }

    pub fn display<'a>(&'a self, symbols: &'a SymbolTable) -> impl fmt::Display + 'a {
        DisplayLiteral { lit: self, symbols }
    }
}

impl fmt::Debug for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.positive {
            f.write_str("~")?;
        }
        write!(f, "p{}", self.pred.0)?;
        f.debug_list().entries(self.args()).finish()
    }
}

struct DisplayLiteral<'a> {
    lit: &'a Literal,
    symbols: &'a SymbolTable,
}

impl fmt::Display for DisplayLiteral<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = self.symbols.predicate_name(self.lit.pred);
        if name == SymbolTable::EQUALITY {
            let mut it = self.lit.args();
            let (a, b) = (it.next().unwrap(), it.next().unwrap());
            let op = if self.lit.positive { "=" } else { "!=" };
            return write!(f, "{} {op} {}", a.display(self.symbols), b.display(self.symbols));
        }
        if !self.lit.positive {
            f.write_str("~")?;
        }
        f.write_str(name)?;
        write_args(f, self.lit.args(), self.symbols)
    }
}

/// A disjunction of distinct, non-complementary literals. Literal positions
/// are stable and serve as the clause-local literal indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Clause {
    literals: Vec<Literal>,
}

/// Outcome of [`normalize`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Normalized {
    Clause(Clause),
    Tautology,
}

impl Normalized {
    pub fn clause(self) -> Option<Clause> {
        match self {
            Normalized::Clause(c) => Some(c),
            Normalized::Tautology => None,
        }
    }
}

/// Removes duplicate literals (keeping first occurrences in order) and
/// detects tautologies.
pub fn normalize(literals: Vec<Literal>) -> Normalized {
    let mut seen: HashSet<&Literal> = HashSet::with_capacity(literals.len());
    let mut keep = Vec::with_capacity(literals.len());
    for (k, l) in literals.iter().enumerate() {
        if seen.contains(&l.complement()) {
            return Normalized::Tautology;
        }
        if seen.insert(l) {
            keep.push(k);
        }
    }
    drop(seen);
    if keep.len() == literals.len() {
        return Normalized::Clause(Clause { literals });
    }
    let mut out = Vec::with_capacity(keep.len());
    let mut next = keep.into_iter().peekable();
    for (k, l) in literals.into_iter().enumerate() {
        if next.peek() == Some(&k) {
            next.next();
            out.push(l);
        }
    }
    Normalized::Clause(Clause { literals: out })
}

impl Clause {
    pub fn empty() -> Clause {
        Clause::default()
    }

    /// Panics if the literals violate the no-duplicate assumption.
    pub fn from_literals(literals: Vec<Literal>) -> Clause {
        let n = literals.len();
        match normalize(literals) {
            Normalized::Clause(c) if c.len() == n => c,
            _ => panic!("literals contain duplicates or complementary pairs"),
        }
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    /// The clause with literal `index` removed.
    pub fn without(&self, index: usize) -> Clause {
        let mut literals = self.literals.clone();
        literals.remove(index);
        Clause { literals }
    }

    pub fn variables(&self) -> impl Iterator<Item = VarId> + '_ {
        self.literals.iter().flat_map(|l| l.variables())
    }

    /// Structural equality up to a consistent bijective renaming of variables.
    pub fn is_variant_of(&self, other: &Clause) -> bool {
        if self.len() != other.len() {
            return false;
        }
        let mut fwd = std::collections::HashMap::new();
        let mut bwd = std::collections::HashMap::new();
        for (a, b) in self.literals.iter().zip(&other.literals) {
            if a.pred != b.pred || a.positive != b.positive || a.args.len() != b.args.len() {
                return false;
            }
            for (x, y) in a.args.iter().zip(b.args.iter()) {
                if x.len != y.len {
                    return false;
                }
                match (x.sym, y.sym) {
                    (Sym::Fun(f), Sym::Fun(g)) if f == g => {}
                    (Sym::Var(u), Sym::Var(v)) => {
                        if *fwd.entry(u).or_insert(v) != v || *bwd.entry(v).or_insert(u) != u {
                            return false;
                        }
                    }
                    _ => return false,
                }
            }
        }
        true
    }

    pub fn display<'a>(&'a self, symbols: &'a SymbolTable) -> impl fmt::Display + 'a {
        DisplayClause {
            clause: self,
            symbols,
        }
    }
}

struct DisplayClause<'a> {
    clause: &'a Clause,
    symbols: &'a SymbolTable,
}

impl fmt::Display for DisplayClause<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.clause.is_empty() {
            return f.write_str("$false");
        }
        for (k, l) in self.clause.literals.iter().enumerate() {
            if k > 0 {
                f.write_str(" | ")?;
            }
            write!(f, "{}", l.display(self.symbols))?;
        }
        Ok(())
    }
}
