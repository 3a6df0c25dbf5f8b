//! Constraint systems for subsumption and subsumption resolution.
//!
//! Three encodings are built from a [`MatchSet`]:
//!
//! * subsumption: every side literal is matched positively, and no main
//!   literal is hit twice;
//! * direct resolution: pairwise clauses forbid negative matches to two
//!   different main literals;
//! * indirect resolution: one extra variable `c_j` per main literal that
//!   has negative matches, with an at-most-one over those.
//!
//! Substitution compatibility is not expanded into clauses. Each match
//! variable carries a [`Constraint::Binding`] that the solver enforces
//! natively.

use std::fmt::{self, Write as _};
use std::ops::Not;

use crate::error::EncodeError;
use crate::matching::{BoolVar, MatchSet, Polarity};
use crate::substitution::Substitution;
use crate::term::Clause;

/// Signed occurrence of a [`BoolVar`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit(u32);

impl Lit {
    pub fn pos(v: BoolVar) -> Lit {
        Lit(v.0 << 1)
    }

    pub fn neg(v: BoolVar) -> Lit {
        Lit(v.0 << 1 | 1)
    }

    pub fn var(self) -> BoolVar {
        BoolVar(self.0 >> 1)
    }

    pub fn is_negated(self) -> bool {
        self.0 & 1 == 1
    }

    /// Dense code, usable as an index into per-literal arrays.
    #[inline]
    pub fn code(self) -> usize {
        self.0 as usize
    }
}

impl Not for Lit {
    type Output = Lit;

    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_negated() {
            f.write_str("-")?;
        }
        write!(f, "{}", self.var().0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Constraint<'a> {
    /// Disjunction of literals.
    Clause(Vec<Lit>),
    /// At most one of the variables is true. Always has two or more members.
    AtMostOne(Vec<BoolVar>),
    /// If the variable is true, the substitution is part of the global one.
    Binding(BoolVar, &'a Substitution),
}

/// What a constraint expresses; kept for tests, traces and dumps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Role {
    PositiveCompatibility,
    NegativeCompatibility,
    Completeness,
    Multiplicity,
    Existence,
    Uniqueness,
    Coherence,
    Structurality,
    RevisedExistence,
    RevisedUniqueness,
    RevisedCoherence,
    /// Built by hand through [`ConstraintSystem::from_parts`].
    Custom,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EncodingKind {
    Subsumption,
    Direct,
    Indirect,
}

impl fmt::Display for EncodingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EncodingKind::Subsumption => "subsumption",
            EncodingKind::Direct => "direct",
            EncodingKind::Indirect => "indirect",
        })
    }
}

/// A constraint system over the match variables of one match set.
#[derive(Clone, Debug)]
pub struct ConstraintSystem<'a> {
    kind: EncodingKind,
    num_vars: usize,
    constraints: Vec<Constraint<'a>>,
    roles: Vec<Role>,
    /// `(j, c_j)` for the indirect encoding.
    resolution_vars: Vec<(usize, BoolVar)>,
}

impl<'a> ConstraintSystem<'a> {
    fn new(kind: EncodingKind, num_vars: usize) -> Self {
        ConstraintSystem {
            kind,
            num_vars,
            constraints: Vec::new(),
            roles: Vec::new(),
            resolution_vars: Vec::new(),
        }
    }

    /// A system assembled directly from constraints, for tests and tools
    /// that do not start from a match set. Vacuous groups are dropped as
    /// usual.
    pub fn from_parts(kind: EncodingKind, num_vars: usize, constraints: Vec<Constraint<'a>>) -> Self {
        let mut sys = ConstraintSystem::new(kind, num_vars);
        for c in constraints {
            sys.push(Role::Custom, c);
        }
        sys
    }

    fn push(&mut self, role: Role, c: Constraint<'a>) {
        if let Constraint::AtMostOne(group) = &c {
            if group.len() < 2 {
                return;
            }
        }
        self.constraints.push(c);
        self.roles.push(role);
    }

    pub fn kind(&self) -> EncodingKind {
        self.kind
    }

    /// Upper bound on variable indices used (exclusive).
    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn constraints(&self) -> &[Constraint<'a>] {
        &self.constraints
    }

    pub fn roles(&self) -> &[Role] {
        &self.roles
    }

    pub fn count(&self, role: Role) -> usize {
        self.roles.iter().filter(|r| **r == role).count()
    }

    pub fn resolution_vars(&self) -> &[(usize, BoolVar)] {
        &self.resolution_vars
    }

    /// Propositional projection in DIMACS format. At-most-one groups become
    /// pairwise binary clauses and bindings become one binary clause per
    /// pair of incompatible substitutions. Variable `v` is written as `v+1`.
    pub fn to_dimacs(&self) -> String {
        let mut clauses: Vec<Vec<Lit>> = Vec::new();
        let mut bindings: Vec<(BoolVar, &Substitution)> = Vec::new();
        for c in &self.constraints {
            match c {
                Constraint::Clause(lits) => clauses.push(lits.clone()),
                Constraint::AtMostOne(group) => {
                    for (a, &x) in group.iter().enumerate() {
                        for &y in &group[a + 1..] {
                            clauses.push(vec![Lit::neg(x), Lit::neg(y)]);
                        }
                    }
                }
                Constraint::Binding(v, sub) => bindings.push((*v, sub)),
            }
        }
        for (a, (x, sx)) in bindings.iter().enumerate() {
            for (y, sy) in &bindings[a + 1..] {
                if !sx.is_compatible(sy) {
                    clauses.push(vec![Lit::neg(*x), Lit::neg(*y)]);
                }
            }
        }
        let mut out = String::new();
        let _ = writeln!(out, "c {} encoding", self.kind);
        let _ = writeln!(out, "p cnf {} {}", self.num_vars, clauses.len());
        for c in clauses {
            for l in c {
                let v = l.var().0 as i64 + 1;
                let _ = write!(out, "{} ", if l.is_negated() { -v } else { v });
            }
            out.push_str("0\n");
        }
        out
    }
}

/// Encoding of subsumption: positive compatibility, partial completeness
/// and multiplicity conservation. Negative entries are ignored.
pub fn encode_subsumption(ms: &MatchSet) -> Result<ConstraintSystem<'_>, EncodeError> {
    let mut sys = ConstraintSystem::new(EncodingKind::Subsumption, ms.len());
    for e in ms.entries() {
        if e.polarity == Polarity::Positive && !e.sub.is_empty() {
            sys.push(Role::PositiveCompatibility, Constraint::Binding(e.var, &e.sub));
        }
    }
    for i in 0..ms.k() {
        let lits: Vec<Lit> = ms
            .side(i)
            .filter(|e| e.polarity == Polarity::Positive)
            .map(|e| Lit::pos(e.var))
            .collect();
        if lits.is_empty() {
            return Err(EncodeError::EmptyCompleteness { side: i });
        }
        sys.push(Role::Completeness, Constraint::Clause(lits));
    }
    for j in 0..ms.n() {
        let group = ms
            .main(j)
            .filter(|e| e.polarity == Polarity::Positive)
            .map(|e| e.var)
            .collect();
        sys.push(Role::Multiplicity, Constraint::AtMostOne(group));
    }
    Ok(sys)
}

fn push_bindings<'a>(sys: &mut ConstraintSystem<'a>, ms: &'a MatchSet) {
    for e in ms.entries() {
        if e.sub.is_empty() {
            continue;
        }
        let role = match e.polarity {
            Polarity::Positive => Role::PositiveCompatibility,
            Polarity::Negative => Role::NegativeCompatibility,
        };
        sys.push(role, Constraint::Binding(e.var, &e.sub));
    }
}

fn push_completeness(sys: &mut ConstraintSystem<'_>, ms: &MatchSet) -> Result<(), EncodeError> {
    for i in 0..ms.k() {
        let lits: Vec<Lit> = ms.side(i).map(|e| Lit::pos(e.var)).collect();
        if lits.is_empty() {
            return Err(EncodeError::EmptyCompleteness { side: i });
        }
        sys.push(Role::Completeness, Constraint::Clause(lits));
    }
    Ok(())
}

fn negatives(ms: &MatchSet) -> impl Iterator<Item = &crate::matching::Match> + '_ {
    ms.entries().iter().filter(|e| e.polarity == Polarity::Negative)
}

/// Direct encoding of subsumption resolution. With no negative entries the
/// existence clause is empty and the system is unsatisfiable.
pub fn encode_sr_direct(ms: &MatchSet) -> Result<ConstraintSystem<'_>, EncodeError> {
    let mut sys = ConstraintSystem::new(EncodingKind::Direct, ms.len());
    push_bindings(&mut sys, ms);
    let neg: Vec<_> = negatives(ms).collect();
    sys.push(
        Role::Existence,
        Constraint::Clause(neg.iter().map(|e| Lit::pos(e.var)).collect()),
    );
    for (a, x) in neg.iter().enumerate() {
        for y in &neg[a + 1..] {
            if x.main != y.main {
                sys.push(Role::Uniqueness, Constraint::Clause(vec![Lit::neg(x.var), Lit::neg(y.var)]));
            }
        }
    }
    push_completeness(&mut sys, ms)?;
    for j in 0..ms.n() {
        for p in ms.main(j).filter(|e| e.polarity == Polarity::Positive) {
            for n in ms.main(j).filter(|e| e.polarity == Polarity::Negative) {
                sys.push(Role::Coherence, Constraint::Clause(vec![Lit::neg(n.var), Lit::neg(p.var)]));
            }
        }
    }
    Ok(sys)
}

/// Indirect encoding of subsumption resolution. The variables `c_j` are
/// numbered after the match variables, in increasing `j`, and only exist for
/// main literals with at least one negative match.
pub fn encode_sr_indirect(ms: &MatchSet) -> Result<ConstraintSystem<'_>, EncodeError> {
    let mut resolution_vars = Vec::new();
    for j in 0..ms.n() {
        if ms.main(j).any(|e| e.polarity == Polarity::Negative) {
            resolution_vars.push((j, BoolVar((ms.len() + resolution_vars.len()) as u32)));
        }
    }
    let mut sys = ConstraintSystem::new(EncodingKind::Indirect, ms.len() + resolution_vars.len());
    push_bindings(&mut sys, ms);
    for &(j, c) in &resolution_vars {
        let mut lits = vec![Lit::neg(c)];
        lits.extend(ms.main(j).filter(|e| e.polarity == Polarity::Negative).map(|e| Lit::pos(e.var)));
        sys.push(Role::Structurality, Constraint::Clause(lits));
        for e in ms.main(j).filter(|e| e.polarity == Polarity::Negative) {
            sys.push(Role::Structurality, Constraint::Clause(vec![Lit::pos(c), Lit::neg(e.var)]));
        }
    }
    sys.push(
        Role::RevisedExistence,
        Constraint::Clause(resolution_vars.iter().map(|&(_, c)| Lit::pos(c)).collect()),
    );
    sys.push(
        Role::RevisedUniqueness,
        Constraint::AtMostOne(resolution_vars.iter().map(|&(_, c)| c).collect()),
    );
    push_completeness(&mut sys, ms)?;
    for &(j, c) in &resolution_vars {
        for p in ms.main(j).filter(|e| e.polarity == Polarity::Positive) {
            sys.push(Role::RevisedCoherence, Constraint::Clause(vec![Lit::neg(c), Lit::neg(p.var)]));
        }
    }
    sys.resolution_vars = resolution_vars;
    Ok(sys)
}

/// Encoding choice for subsumption resolution.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum EncodingChoice {
    Direct,
    Indirect,
    /// Decide per instance with a [`DecisionTree`].
    #[default]
    Dynamic,
}

/// Thresholds of the encoding selector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecisionTree {
    pub max_side: usize,
    pub small_main: usize,
    pub max_sparsity: f64,
    pub max_main: usize,
}

impl Default for DecisionTree {
    fn default() -> Self {
        DecisionTree {
            max_side: 3,
            small_main: 5,
            max_sparsity: 1.075,
            max_main: 9,
        }
    }
}

impl DecisionTree {
    /// Direct for short side premises with a small main premise, indirect
    /// otherwise.
    #[allow(clippy::if_same_then_else)]
    pub fn choose(&self, side_len: usize, main_len: usize, sparsity: f64) -> EncodingKind {
        if side_len <= self.max_side {
            if main_len <= self.small_main && sparsity <= self.max_sparsity {
                return EncodingKind::Direct;
            } else if main_len <= self.max_main {
                return EncodingKind::Direct;
            }
        }
        EncodingKind::Indirect
    }
}

/// Picks the resolution encoding for one instance.
pub fn choose_encoding(ms: &MatchSet, tree: &DecisionTree) -> EncodingKind {
    tree.choose(ms.k(), ms.n(), ms.sparsity())
}

/// Substitution and resolution literal read off a model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub sub: Substitution,
    /// Index of the main literal removed by subsumption resolution.
    pub resolution: Option<usize>,
}

impl Witness {
    /// The main premise without the resolution literal.
    pub fn conclusion(&self, main: &Clause) -> Option<Clause> {
        self.resolution.map(|j| main.without(j))
    }
}

/// Reads the witness of a model. `model[v]` is the value of variable `v`.
pub fn reconstruct(model: &[bool], ms: &MatchSet, kind: EncodingKind) -> Result<Witness, EncodeError> {
    let mut sub = Substitution::new();
    let mut resolution = None;
    for e in ms.entries() {
        if !model[e.var.index()] {
            continue;
        }
        match e.polarity {
            Polarity::Positive => {}
            Polarity::Negative if kind == EncodingKind::Subsumption => continue,
            Polarity::Negative => match resolution {
                None => resolution = Some(e.main),
                Some(j) if j == e.main => {}
                Some(_) => return Err(EncodeError::InternalInconsistency),
            },
        }
        sub = sub.compatible_union(&e.sub).ok_or(EncodeError::InternalInconsistency)?;
    }
    if kind != EncodingKind::Subsumption && resolution.is_none() {
        return Err(EncodeError::InternalInconsistency);
    }
    Ok(Witness { sub, resolution })
}
