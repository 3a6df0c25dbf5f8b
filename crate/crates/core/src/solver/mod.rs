//! A small CDCL solver for the constraint systems of [`crate::encoder`].
//!
//! Plain clauses use two watched literals. At-most-one groups and bindings
//! are propagated natively; their implied binary clauses `¬b ∨ ¬b'` are
//! only ever represented as a reason literal on the trail. Bindings are
//! propagated as soon as a variable becomes true, so the global
//! substitution never conflicts with a true variable.
//!
//! Work is measured in ticks:
//!
//! * one per watch-list entry visited during clause propagation,
//! * one per group member visited during at-most-one propagation,
//! * one per `Bindings(x)` entry visited during binding propagation,
//! * one per reason (including the conflict) visited in conflict analysis.
//!
//! The cutoff is compared with the tick count after every propagation
//! fixpoint, never inside one, so a run either finishes exactly as it would
//! without a cutoff or stops early.
//!
//! There are no restarts and no clause deletion. Decisions follow a
//! move-to-front queue and always try `false` first.

mod bindings;
mod vmtf;

use std::fmt;

use crate::encoder::{Constraint, ConstraintSystem, Lit};
use crate::matching::BoolVar;
use bindings::BindingIndex;
use vmtf::Vmtf;

/// Per-call solver settings.
#[derive(Clone, Debug, Default)]
pub struct SolverOptions {
    /// Stop once more than this many ticks have elapsed.
    pub cutoff: Option<u64>,
    /// Record a [`TraceEvent`] for every decision, propagation, conflict
    /// and learned clause.
    pub trace: bool,
    /// Recompute the global substitution at every fixpoint and compare it
    /// with the incremental one.
    pub check_invariants: bool,
    /// Decisions to take first, in order, while their variable is still
    /// unassigned. Lets tests steer the search.
    pub decisions: Vec<Lit>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// `model[v]` is the value of variable `v`. Variables that occur in no
    /// constraint are false.
    Satisfiable(Vec<bool>),
    Unsatisfiable,
    CutoffExceeded,
}

impl Outcome {
    pub fn is_sat(&self) -> bool {
        matches!(self, Outcome::Satisfiable(_))
    }

    pub fn model(&self) -> Option<&[bool]> {
        match self {
            Outcome::Satisfiable(m) => Some(m),
            _ => None,
        }
    }
}

/// Why a literal is on the trail.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reason {
    Decision,
    /// Index of a stored clause (original or learned).
    Clause(u32),
    /// Implied binary clause `l ∨ other`; `other` is false. Comes from an
    /// at-most-one group or from a binding.
    Binary(Lit),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceEvent {
    Decide { lit: Lit, level: u32 },
    Propagate { lit: Lit, reason: Reason },
    Conflict { clause: Vec<Lit> },
    Learn { clause: Vec<Lit>, backjump: u32 },
}

impl fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceEvent::Decide { lit, level } => write!(f, "decide {lit:?} @{level}"),
            TraceEvent::Propagate { lit, reason } => match reason {
                Reason::Decision => write!(f, "propagate {lit:?}"),
                Reason::Clause(c) => write!(f, "propagate {lit:?} by clause {c}"),
                Reason::Binary(other) => write!(f, "propagate {lit:?} by binary {lit:?} {other:?}"),
            },
            TraceEvent::Conflict { clause } => write!(f, "conflict {clause:?}"),
            TraceEvent::Learn { clause, backjump } => write!(f, "learn {clause:?} backjump @{backjump}"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SolverStats {
    pub decisions: u64,
    pub propagations: u64,
    pub conflicts: u64,
    pub learned: u64,
    pub invariant_checks: u64,
    pub invariant_failures: u64,
    pub binding_conflicts: u64,
}

/// Result of one [`Solver::solve`] call.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub outcome: Outcome,
    pub ticks: u64,
    pub stats: SolverStats,
    pub trace: Vec<TraceEvent>,
}

#[derive(Clone, Copy, Debug)]
struct Watch {
    clause: u32,
    blocker: Lit,
}

#[derive(Clone, Copy, Debug)]
struct ClauseRef {
    start: u32,
    len: u32,
}

enum Conflict {
    Clause(u32),
    Binary(Lit, Lit),
}

/// Reusable solver. Buffers are kept between calls and cleared, not freed.
#[derive(Default)]
pub struct Solver {
    num_vars: usize,
    arena: Vec<Lit>,
    clauses: Vec<ClauseRef>,
    watches: Vec<Vec<Watch>>,
    amo_members: Vec<BoolVar>,
    amo_groups: Vec<(u32, u32)>,
    amo_of: Vec<Vec<u32>>,
    bindings: BindingIndex,
    value: Vec<i8>,
    level: Vec<u32>,
    reason: Vec<Reason>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    vmtf: Vmtf,
    seen: Vec<bool>,
    falsify: Vec<BoolVar>,
    ticks: u64,
    stats: SolverStats,
    trace: Option<Vec<TraceEvent>>,
}

impl Solver {
    pub fn new() -> Self {
        Self::default()
    }

    /// Solves `system` from scratch.
    pub fn solve(&mut self, system: &ConstraintSystem<'_>, options: &SolverOptions) -> Report {
        self.reset(system.num_vars(), options.trace);
        let outcome = match self.load(system) {
            false => Outcome::Unsatisfiable,
            true => self.search(options),
        };
        Report {
            outcome,
            ticks: self.ticks,
            stats: std::mem::take(&mut self.stats),
            trace: self.trace.take().unwrap_or_default(),
        }
    }

    fn reset(&mut self, n: usize, trace: bool) {
        self.num_vars = n;
        self.arena.clear();
        self.clauses.clear();
        for w in self.watches.iter_mut() {
            w.clear();
        }
        self.watches.resize_with((2 * n).max(self.watches.len()), Vec::new);
        self.amo_members.clear();
        self.amo_groups.clear();
        for g in self.amo_of.iter_mut() {
            g.clear();
        }
        self.amo_of.resize_with(n.max(self.amo_of.len()), Vec::new);
        self.bindings.reset(n);
        self.value.clear();
        self.value.resize(n, 0);
        self.level.clear();
        self.level.resize(n, 0);
        self.reason.clear();
        self.reason.resize(n, Reason::Decision);
        self.seen.clear();
        self.seen.resize(n, false);
        self.trail.clear();
        self.trail_lim.clear();
        self.qhead = 0;
        self.vmtf.reset(n);
        self.falsify.clear();
        self.ticks = 0;
        self.stats = SolverStats::default();
        self.trace = trace.then(Vec::new);
    }

    /// Loads constraints; false if the system is trivially unsatisfiable.
    fn load(&mut self, system: &ConstraintSystem<'_>) -> bool {
        let mut used = vec![false; self.num_vars];
        let mut units = Vec::new();
        let mut ok = true;
        for c in system.constraints() {
            match c {
                Constraint::Clause(lits) => {
                    for l in lits {
                        used[l.var().index()] = true;
                    }
                    match lits.len() {
                        0 => ok = false,
                        1 => units.push(lits[0]),
                        _ => {
                            self.add_clause(lits);
                        }
                    }
                }
                Constraint::AtMostOne(group) => {
                    let id = self.amo_groups.len() as u32;
                    let start = self.amo_members.len() as u32;
                    self.amo_members.extend_from_slice(group);
                    self.amo_groups.push((start, group.len() as u32));
                    for v in group {
                        used[v.index()] = true;
                        self.amo_of[v.index()].push(id);
                    }
                }
                Constraint::Binding(v, _) => used[v.index()] = true,
            }
        }
        self.bindings.load(system.constraints().iter().filter_map(|c| match c {
            Constraint::Binding(v, s) => Some((*v, *s)),
            _ => None,
        }));
        for v in (0..self.num_vars).rev() {
            if used[v] {
                self.vmtf.enqueue(v as u32);
            }
        }
        if !ok {
            return false;
        }
        for l in units {
            match self.lit_value(l) {
                1 => {}
                -1 => return false,
                _ => {
                    let idx = self.clauses.len() as u32;
                    self.clauses.push(ClauseRef {
                        start: self.arena.len() as u32,
                        len: 1,
                    });
                    self.arena.push(l);
                    self.assign(l, Reason::Clause(idx));
                }
            }
        }
        true
    }

    fn add_clause(&mut self, lits: &[Lit]) -> u32 {
        let idx = self.clauses.len() as u32;
        self.clauses.push(ClauseRef {
            start: self.arena.len() as u32,
            len: lits.len() as u32,
        });
        self.arena.extend_from_slice(lits);
        if lits.len() >= 2 {
            self.watches[lits[0].code()].push(Watch {
                clause: idx,
                blocker: lits[1],
            });
            self.watches[lits[1].code()].push(Watch {
                clause: idx,
                blocker: lits[0],
            });
        }
        idx
    }

    fn clause(&self, idx: u32) -> &[Lit] {
        let c = self.clauses[idx as usize];
        &self.arena[c.start as usize..(c.start + c.len) as usize]
    }

    #[inline]
    fn lit_value(&self, l: Lit) -> i8 {
        let v = self.value[l.var().index()];
        if l.is_negated() {
            -v
        } else {
            v
        }
    }

    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    /// Puts `l` on the trail. Becoming true triggers binding propagation
    /// right away.
    fn assign(&mut self, l: Lit, reason: Reason) {
        let v = l.var();
        debug_assert_eq!(self.value[v.index()], 0);
        self.value[v.index()] = if l.is_negated() { -1 } else { 1 };
        self.level[v.index()] = self.decision_level();
        self.reason[v.index()] = reason;
        self.trail.push(l);
        if let Some(t) = self.trace.as_mut() {
            match reason {
                Reason::Decision => t.push(TraceEvent::Decide {
                    lit: l,
                    level: self.trail_lim.len() as u32,
                }),
                _ => t.push(TraceEvent::Propagate { lit: l, reason }),
            }
        }
        if reason != Reason::Decision {
            self.stats.propagations += 1;
        }
        if !l.is_negated() && self.bindings.has_bindings(v) {
            let mut falsify = std::mem::take(&mut self.falsify);
            self.bindings
                .assign_true(v, &self.value, &mut self.ticks, &mut falsify, &mut self.stats.binding_conflicts);
            for &w in &falsify {
                if self.value[w.index()] == 0 {
                    self.assign(Lit::neg(w), Reason::Binary(Lit::neg(v)));
                }
            }
            falsify.clear();
            self.falsify = falsify;
        }
    }

    fn propagate(&mut self) -> Option<Conflict> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            if let Some(c) = self.propagate_clauses(!p) {
                return Some(c);
            }
            if !p.is_negated() {
                if let Some(c) = self.propagate_amo(p.var()) {
                    return Some(c);
                }
            }
        }
        None
    }

    /// Visits clauses watching `false_lit`, which just became false.
    fn propagate_clauses(&mut self, false_lit: Lit) -> Option<Conflict> {
        let mut ws = std::mem::take(&mut self.watches[false_lit.code()]);
        let mut i = 0;
        let mut j = 0;
        let mut conflict = None;
        while i < ws.len() {
            let w = ws[i];
            i += 1;
            self.ticks += 1;
            if self.lit_value(w.blocker) == 1 {
                ws[j] = w;
                j += 1;
                continue;
            }
            let c = self.clauses[w.clause as usize];
            let base = c.start as usize;
            let len = c.len as usize;
            if self.arena[base] == false_lit {
                self.arena.swap(base, base + 1);
            }
            let first = self.arena[base];
            if first != w.blocker && self.lit_value(first) == 1 {
                ws[j] = Watch {
                    clause: w.clause,
                    blocker: first,
                };
                j += 1;
                continue;
            }
            let mut moved = false;
            for k in 2..len {
                let l = self.arena[base + k];
                if self.lit_value(l) != -1 {
                    self.arena.swap(base + 1, base + k);
                    self.watches[l.code()].push(Watch {
                        clause: w.clause,
                        blocker: first,
                    });
                    moved = true;
                    break;
                }
            }
            if moved {
                continue;
            }
            ws[j] = Watch {
                clause: w.clause,
                blocker: first,
            };
            j += 1;
            match self.lit_value(first) {
                -1 => {
                    conflict = Some(Conflict::Clause(w.clause));
                    while i < ws.len() {
                        ws[j] = ws[i];
                        j += 1;
                        i += 1;
                    }
                }
                0 => self.assign(first, Reason::Clause(w.clause)),
                _ => {}
            }
        }
        ws.truncate(j);
        debug_assert!(self.watches[false_lit.code()].is_empty());
        self.watches[false_lit.code()] = ws;
        conflict
    }

    /// `b` just became true: every other member of its groups goes false.
    fn propagate_amo(&mut self, b: BoolVar) -> Option<Conflict> {
        for g in 0..self.amo_of[b.index()].len() {
            let (start, len) = self.amo_groups[self.amo_of[b.index()][g] as usize];
            for k in start..start + len {
                let other = self.amo_members[k as usize];
                self.ticks += 1;
                if other == b {
                    continue;
                }
                match self.value[other.index()] {
                    1 => return Some(Conflict::Binary(Lit::neg(b), Lit::neg(other))),
                    0 => self.assign(Lit::neg(other), Reason::Binary(Lit::neg(b))),
                    _ => {}
                }
            }
        }
        None
    }

    fn conflict_lits(&self, c: &Conflict) -> Vec<Lit> {
        match *c {
            Conflict::Clause(idx) => self.clause(idx).to_vec(),
            Conflict::Binary(a, b) => vec![a, b],
        }
    }

    /// First-UIP analysis. Returns the learned clause (asserting literal
    /// first) and the backjump level.
    fn analyze(&mut self, conflict: Conflict) -> (Vec<Lit>, u32) {
        let current = self.decision_level();
        let mut learned = vec![Lit::pos(BoolVar(0))];
        let mut analyzed: Vec<BoolVar> = Vec::new();
        let mut pending = 0usize;
        let mut reason_lits = self.conflict_lits(&conflict);
        let mut idx = self.trail.len();
        let mut uip: Option<Lit> = None;
        loop {
            self.ticks += 1;
            for &q in &reason_lits {
                if Some(q) == uip {
                    continue;
                }
                let v = q.var();
                if self.seen[v.index()] || self.level[v.index()] == 0 {
                    continue;
                }
                self.seen[v.index()] = true;
                analyzed.push(v);
                if self.level[v.index()] == current {
                    pending += 1;
                } else {
                    learned.push(q);
                }
            }
            loop {
                idx -= 1;
                if self.seen[self.trail[idx].var().index()] {
                    break;
                }
            }
            let p = self.trail[idx];
            uip = Some(p);
            self.seen[p.var().index()] = false;
            pending -= 1;
            if pending == 0 {
                learned[0] = !p;
                break;
            }
            reason_lits = match self.reason[p.var().index()] {
                Reason::Clause(c) => self.clause(c).to_vec(),
                Reason::Binary(other) => vec![p, other],
                Reason::Decision => unreachable!("decision before the UIP"),
            };
        }
        for v in &analyzed {
            self.seen[v.index()] = false;
        }
        let mut backjump = 0;
        if learned.len() > 1 {
            let mut best = 1;
            for k in 2..learned.len() {
                if self.level[learned[k].var().index()] > self.level[learned[best].var().index()] {
                    best = k;
                }
            }
            learned.swap(1, best);
            backjump = self.level[learned[1].var().index()];
        }
        analyzed.sort_by_key(|v| self.vmtf.stamp(v.0));
        for v in analyzed {
            let assigned = self.value[v.index()] != 0;
            self.vmtf.bump(v.0, assigned);
        }
        (learned, backjump)
    }

    fn backtrack(&mut self, level: u32) {
        if self.decision_level() <= level {
            return;
        }
        let keep = self.trail_lim[level as usize];
        while self.trail.len() > keep {
            let l = self.trail.pop().unwrap();
            let v = l.var();
            if !l.is_negated() {
                self.bindings.unassign(v);
            }
            self.value[v.index()] = 0;
            self.vmtf.on_unassign(v.0);
        }
        self.trail_lim.truncate(level as usize);
        self.qhead = keep;
    }

    fn over_cutoff(&self, options: &SolverOptions) -> bool {
        options.cutoff.is_some_and(|c| self.ticks > c)
    }

    fn check_invariants(&mut self) {
        self.stats.invariant_checks += 1;
        self.stats.invariant_failures += self.bindings.check(&self.value);
    }

    fn search(&mut self, options: &SolverOptions) -> Outcome {
        let mut hints = options.decisions.iter();
        loop {
            let conflict = self.propagate();
            if options.check_invariants {
                self.check_invariants();
            }
            if self.over_cutoff(options) {
                return Outcome::CutoffExceeded;
            }
            if let Some(conflict) = conflict {
                self.stats.conflicts += 1;
                if let Some(t) = self.trace.as_mut() {
                    let clause = match &conflict {
                        Conflict::Clause(idx) => {
                            let c = self.clauses[*idx as usize];
                            self.arena[c.start as usize..(c.start + c.len) as usize].to_vec()
                        }
                        Conflict::Binary(a, b) => vec![*a, *b],
                    };
                    t.push(TraceEvent::Conflict { clause });
                }
                if self.decision_level() == 0 {
                    return Outcome::Unsatisfiable;
                }
                let (learned, backjump) = self.analyze(conflict);
                self.stats.learned += 1;
                if let Some(t) = self.trace.as_mut() {
                    t.push(TraceEvent::Learn {
                        clause: learned.clone(),
                        backjump,
                    });
                }
                self.backtrack(backjump);
                let idx = self.add_clause(&learned);
                self.assign(learned[0], Reason::Clause(idx));
                continue;
            }
            let next = hints
                .by_ref()
                .find(|l| self.value[l.var().index()] == 0)
                .copied()
                .or_else(|| {
                    let value = &self.value;
                    self.vmtf
                        .next_decision(|v| value[v as usize] != 0)
                        .map(|v| Lit::neg(BoolVar(v)))
                });
            let Some(lit) = next else {
                let model = self.value.iter().map(|&v| v == 1).collect();
                return Outcome::Satisfiable(model);
            };
            self.stats.decisions += 1;
            self.trail_lim.push(self.trail.len());
            self.assign(lit, Reason::Decision);
        }
    }
}

#[cfg(test)]
mod tests;
