//! Forward and backward simplification over a clause set.
//!
//! [`Simplifier::check_subsumption`] runs the cheap filters, builds the
//! match set (with negative matches while subsumption resolution is still
//! possible) and solves the subsumption encoding.
//! [`Simplifier::check_subsumption_resolution`] then reuses that match set
//! for the resolution encoding. Both share one [`CheckState`] per pair.
//!
//! Candidates are found by a linear scan of the clause set.

use std::fmt;

use crate::encoder::{
    choose_encoding, encode_sr_direct, encode_sr_indirect, encode_subsumption, reconstruct, ConstraintSystem,
    DecisionTree, EncodingChoice, EncodingKind,
};
use crate::filter::{prune_after_match_set, HeaderTable, PruneMode};
use crate::matching::MatchSet;
use crate::solver::{Outcome, Solver, SolverOptions};
use crate::substitution::Substitution;
use crate::term::Clause;

#[derive(Clone, Debug, PartialEq)]
pub struct SimplifyConfig {
    pub encoding: EncodingChoice,
    /// Tick budget per clause pair, shared by the subsumption and the
    /// subsumption resolution solver calls.
    pub cutoff: Option<u64>,
    pub tree: DecisionTree,
    /// Run the solver with its binding invariant checks enabled.
    pub check_invariants: bool,
    /// Keep a [`Call`] log of every step.
    pub record_calls: bool,
}

impl Default for SimplifyConfig {
    fn default() -> Self {
        SimplifyConfig {
            encoding: EncodingChoice::Dynamic,
            cutoff: None,
            tree: DecisionTree::default(),
            check_invariants: false,
            record_calls: false,
        }
    }
}

/// How far a pair got before it was decided.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stage {
    /// Rejected because a predicate of `S` is missing from `M`.
    #[default]
    PredicateSet,
    /// Passed the predicate set test; rejected by the multiset test.
    PredicateMultiset,
    /// Match set built; rejected by the match-set tests.
    MatchSet,
    /// Reached the solver.
    Solver,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::PredicateSet => "set",
            Stage::PredicateMultiset => "multiset",
            Stage::MatchSet => "match-set",
            Stage::Solver => "solver",
        })
    }
}

/// One step of a check, as recorded in the call log.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Call {
    PruneSubsumptionResolution,
    PruneSubsumption,
    BuildMatchSet { negatives: bool },
    PruneMatchSet,
    EncodeSubsumption,
    ChooseEncoding,
    EncodeResolution(EncodingKind),
    Solve,
    Reconstruct,
}

/// Per-pair state shared by the two checks.
#[derive(Clone, Debug, Default)]
pub struct CheckState {
    /// Subsumption is known to fail.
    pub f_s: bool,
    /// Subsumption resolution is known to fail.
    pub f_sr: bool,
    pub match_set: Option<MatchSet>,
    /// Encoding of the last solver call.
    pub encoding: Option<EncodingKind>,
    pub stage: Stage,
    /// Ticks spent on this pair so far.
    pub ticks: u64,
    /// The tick budget ran out.
    pub cutoff_hit: bool,
    /// Skip everything that only serves subsumption resolution.
    pub subsumption_only: bool,
}

impl CheckState {
    pub fn new() -> Self {
        Self::default()
    }

    /// State for a pair where subsumption resolution is not wanted, so no
    /// negative matches are built.
    pub fn subsumption_only() -> Self {
        CheckState {
            subsumption_only: true,
            ..Self::default()
        }
    }
}

/// A successful subsumption resolution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Resolution {
    pub sub: Substitution,
    /// Index of the removed literal of `M`.
    pub literal: usize,
    pub conclusion: Clause,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SimplifyStats {
    pub subsumption_checks: u64,
    /// Subsumption checks decided without the solver.
    pub subsumption_pruned: u64,
    pub resolution_checks: u64,
    /// Resolution checks decided without the solver.
    pub resolution_pruned: u64,
    pub match_set_builds: u64,
    pub solver_calls: u64,
    pub ticks: u64,
    pub cutoffs: u64,
    pub invariant_checks: u64,
    pub invariant_failures: u64,
    pub binding_conflicts: u64,
}

/// Clause store with stable indices. Removed clauses leave a tombstone.
#[derive(Clone, Debug, Default)]
pub struct ClauseSet {
    slots: Vec<Option<Clause>>,
}

impl ClauseSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, c: Clause) -> usize {
        self.slots.push(Some(c));
        self.slots.len() - 1
    }

    pub fn get(&self, idx: usize) -> Option<&Clause> {
        self.slots.get(idx).and_then(|c| c.as_ref())
    }

    pub fn remove(&mut self, idx: usize) -> Option<Clause> {
        self.slots.get_mut(idx).and_then(|c| c.take())
    }

    /// Number of live clauses.
    pub fn len(&self) -> usize {
        self.slots.iter().filter(|c| c.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of slots ever used, live or not.
    pub fn slots(&self) -> usize {
        self.slots.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Clause)> + '_ {
        self.slots.iter().enumerate().filter_map(|(i, c)| c.as_ref().map(|c| (i, c)))
    }
}

impl FromIterator<Clause> for ClauseSet {
    fn from_iter<T: IntoIterator<Item = Clause>>(iter: T) -> Self {
        ClauseSet {
            slots: iter.into_iter().map(Some).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ForwardOutcome {
    /// `M` was subsumed by the clause at `by` and removed.
    Deleted { by: usize, sub: Substitution },
    /// `M` was replaced by a resolution conclusion, stored at `index`.
    Replaced {
        by: usize,
        index: usize,
        resolution: Resolution,
    },
    Kept,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BackwardOutcome {
    Deleted(Substitution),
    /// The victim was replaced by the conclusion stored at `index`.
    Replaced { index: usize, resolution: Resolution },
}

/// Runs checks with shared scratch state: the predicate table and the
/// solver buffers live across pairs.
#[derive(Default)]
pub struct Simplifier {
    headers: HeaderTable,
    solver: Solver,
    config: SimplifyConfig,
    stats: SimplifyStats,
    calls: Vec<Call>,
}

impl Simplifier {
    pub fn new(config: SimplifyConfig) -> Self {
        Simplifier {
            config,
            ..Self::default()
        }
    }

    pub fn config(&self) -> &SimplifyConfig {
        &self.config
    }

    pub fn config_mut(&mut self) -> &mut SimplifyConfig {
        &mut self.config
    }

    pub fn stats(&self) -> &SimplifyStats {
        &self.stats
    }

    /// Returns and clears the call log.
    pub fn take_calls(&mut self) -> Vec<Call> {
        std::mem::take(&mut self.calls)
    }

    fn log(&mut self, call: Call) {
        if self.config.record_calls {
            self.calls.push(call);
        }
    }

    fn solve(&mut self, sys: &ConstraintSystem<'_>, st: &mut CheckState) -> Option<Vec<bool>> {
        if st.cutoff_hit {
            return None;
        }
        self.log(Call::Solve);
        st.stage = Stage::Solver;
        st.encoding = Some(sys.kind());
        let options = SolverOptions {
            cutoff: self.config.cutoff.map(|c| c.saturating_sub(st.ticks)),
            check_invariants: self.config.check_invariants,
            ..SolverOptions::default()
        };
        let report = self.solver.solve(sys, &options);
        st.ticks += report.ticks;
        self.stats.solver_calls += 1;
        self.stats.ticks += report.ticks;
        self.stats.invariant_checks += report.stats.invariant_checks;
        self.stats.invariant_failures += report.stats.invariant_failures;
        self.stats.binding_conflicts += report.stats.binding_conflicts;
        match report.outcome {
            Outcome::Satisfiable(model) => Some(model),
            Outcome::Unsatisfiable => None,
            Outcome::CutoffExceeded => {
                self.stats.cutoffs += 1;
                st.cutoff_hit = true;
                None
            }
        }
    }

    /// Decides whether `s` subsumes `m`, starting a fresh state for the
    /// pair. Also records in `st` whether subsumption resolution is already
    /// ruled out, and keeps the match set for
    /// [`check_subsumption_resolution`](Self::check_subsumption_resolution).
    pub fn check_subsumption(&mut self, s: &Clause, m: &Clause, st: &mut CheckState) -> Option<Substitution> {
        *st = CheckState {
            subsumption_only: st.subsumption_only,
            ..CheckState::default()
        };
        self.stats.subsumption_checks += 1;
        self.log(Call::PruneSubsumptionResolution);
        let set_pruned = self.headers.prune_subsumption_resolution(s, m);
        st.f_sr = set_pruned || st.subsumption_only;
        st.f_s = set_pruned || {
            self.log(Call::PruneSubsumption);
            self.headers.prune_subsumption(s, m)
        };
        if set_pruned {
            self.stats.subsumption_pruned += 1;
            return None;
        }
        st.stage = Stage::PredicateMultiset;
        if st.f_s && st.f_sr {
            self.stats.subsumption_pruned += 1;
            return None;
        }
        let negatives = !st.f_sr;
        self.log(Call::BuildMatchSet { negatives });
        self.stats.match_set_builds += 1;
        let ms = MatchSet::build(s, m, negatives);
        st.stage = Stage::MatchSet;
        self.log(Call::PruneMatchSet);
        st.f_s = st.f_s || prune_after_match_set(&ms, s, PruneMode::Subsumption);
        if negatives {
            st.f_sr = prune_after_match_set(&ms, s, PruneMode::Resolution);
        }
        let result = if st.f_s {
            self.stats.subsumption_pruned += 1;
            None
        } else {
            self.log(Call::EncodeSubsumption);
            let sys = encode_subsumption(&ms).expect("the match-set test guarantees a match for every side literal");
            self.solve(&sys, st).map(|model| {
                self.log(Call::Reconstruct);
                reconstruct(&model, &ms, EncodingKind::Subsumption)
                    .expect("model binds compatible substitutions")
                    .sub
            })
        };
        st.match_set = Some(ms);
        result
    }

    /// Subsumption resolution on a pair that already went through
    /// [`check_subsumption`](Self::check_subsumption) with `st`.
    pub fn check_subsumption_resolution(&mut self, s: &Clause, m: &Clause, st: &mut CheckState) -> Option<Resolution> {
        self.stats.resolution_checks += 1;
        if st.f_sr || st.subsumption_only {
            self.stats.resolution_pruned += 1;
            return None;
        }
        if st.cutoff_hit {
            return None;
        }
        let ms = st.match_set.take().expect("check_subsumption builds the match set");
        let result = self.resolve(s, m, &ms, st);
        st.match_set = Some(ms);
        result
    }

    fn resolve(&mut self, s: &Clause, m: &Clause, ms: &MatchSet, st: &mut CheckState) -> Option<Resolution> {
        debug_assert!(ms.includes_negatives());
        let kind = match self.config.encoding {
            EncodingChoice::Direct => EncodingKind::Direct,
            EncodingChoice::Indirect => EncodingKind::Indirect,
            EncodingChoice::Dynamic => {
                self.log(Call::ChooseEncoding);
                choose_encoding(ms, &self.config.tree)
            }
        };
        self.log(Call::EncodeResolution(kind));
        let sys = match kind {
            EncodingKind::Direct => encode_sr_direct(ms),
            _ => encode_sr_indirect(ms),
        }
        .expect("the match-set test guarantees a match for every side literal");
        let model = self.solve(&sys, st)?;
        self.log(Call::Reconstruct);
        let w = reconstruct(&model, ms, kind).expect("model binds compatible substitutions");
        let literal = w.resolution.expect("resolution models pick a literal");
        debug_assert_eq!(s.len(), ms.k());
        Some(Resolution {
            conclusion: m.without(literal),
            sub: w.sub,
            literal,
        })
    }

    /// Subsumption resolution without a preceding subsumption check: runs
    /// its own filters and builds its own match set.
    pub fn check_subsumption_resolution_alone(
        &mut self,
        s: &Clause,
        m: &Clause,
        st: &mut CheckState,
    ) -> Option<Resolution> {
        self.stats.resolution_checks += 1;
        if st.cutoff_hit {
            return None;
        }
        self.log(Call::PruneSubsumptionResolution);
        if self.headers.prune_subsumption_resolution(s, m) {
            self.stats.resolution_pruned += 1;
            return None;
        }
        st.stage = st.stage.max(Stage::PredicateMultiset);
        self.log(Call::BuildMatchSet { negatives: true });
        self.stats.match_set_builds += 1;
        let ms = MatchSet::build(s, m, true);
        self.log(Call::PruneMatchSet);
        st.stage = st.stage.max(Stage::MatchSet);
        if prune_after_match_set(&ms, s, PruneMode::Resolution) {
            self.stats.resolution_pruned += 1;
            return None;
        }
        self.resolve(s, m, &ms, st)
    }

    /// Simplifies the clause at `index` with every other live clause.
    /// Subsumption is searched over the whole set; the first resolution
    /// conclusion found is applied only if no clause subsumes `M`.
    pub fn forward_simplify(&mut self, index: usize, set: &mut ClauseSet) -> ForwardOutcome {
        let m = set.get(index).expect("forward_simplify on a removed clause").clone();
        let mut pending: Option<(usize, Resolution)> = None;
        let mut st = CheckState::new();
        for by in 0..set.slots() {
            if by == index {
                continue;
            }
            let Some(s) = set.get(by) else { continue };
            st.subsumption_only = pending.is_some();
            if let Some(sub) = self.check_subsumption(s, &m, &mut st) {
                set.remove(index);
                return ForwardOutcome::Deleted { by, sub };
            }
            if pending.is_none() {
                if let Some(r) = self.check_subsumption_resolution(s, &m, &mut st) {
                    pending = Some((by, r));
                }
            }
        }
        match pending {
            Some((by, resolution)) => {
                set.remove(index);
                let index = set.insert(resolution.conclusion.clone());
                ForwardOutcome::Replaced { by, index, resolution }
            }
            None => ForwardOutcome::Kept,
        }
    }

    /// Same contract as [`forward_simplify`](Self::forward_simplify), done
    /// in two passes: subsumption against every clause, then subsumption
    /// resolution against every clause with fresh match sets.
    pub fn forward_simplify_two_pass(&mut self, index: usize, set: &mut ClauseSet) -> ForwardOutcome {
        let m = set.get(index).expect("forward_simplify on a removed clause").clone();
        let mut st = CheckState::subsumption_only();
        let mut deleted = None;
        for (by, s) in set.iter() {
            if by == index {
                continue;
            }
            if let Some(sub) = self.check_subsumption(s, &m, &mut st) {
                deleted = Some((by, sub));
                break;
            }
        }
        if let Some((by, sub)) = deleted {
            set.remove(index);
            return ForwardOutcome::Deleted { by, sub };
        }
        let mut found = None;
        for (by, s) in set.iter() {
            if by == index {
                continue;
            }
            let mut st = CheckState::new();
            if let Some(r) = self.check_subsumption_resolution_alone(s, &m, &mut st) {
                found = Some((by, r));
                break;
            }
        }
        match found {
            Some((by, resolution)) => {
                set.remove(index);
                let index = set.insert(resolution.conclusion.clone());
                ForwardOutcome::Replaced { by, index, resolution }
            }
            None => ForwardOutcome::Kept,
        }
    }

    /// Uses `s` to simplify every live clause of `set` except `skip`.
    /// Subsumed clauses are removed; clauses simplified by subsumption
    /// resolution are replaced by their conclusion.
    pub fn backward_simplify(
        &mut self,
        s: &Clause,
        set: &mut ClauseSet,
        skip: Option<usize>,
    ) -> Vec<(usize, BackwardOutcome)> {
        let mut out = Vec::new();
        let mut st = CheckState::new();
        for victim in 0..set.slots() {
            if Some(victim) == skip {
                continue;
            }
            let Some(m) = set.get(victim).cloned() else { continue };
            if let Some(sub) = self.check_subsumption(s, &m, &mut st) {
                set.remove(victim);
                out.push((victim, BackwardOutcome::Deleted(sub)));
            } else if let Some(resolution) = self.check_subsumption_resolution(s, &m, &mut st) {
                set.remove(victim);
                let index = set.insert(resolution.conclusion.clone());
                out.push((victim, BackwardOutcome::Replaced { index, resolution }));
            }
        }
        out
    }
}
