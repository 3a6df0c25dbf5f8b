//! Cheap rejection tests run before (and while) building match sets.
//!
//! The predicate tests use a counter array indexed by predicate and
//! polarity. Instead of clearing it between calls, a time stamp `t` is
//! advanced so that every stale counter is below `t`.

use crate::matching::{MatchSet, Polarity};
use crate::term::{Clause, Literal};

/// Counter array shared by successive prune calls.
#[derive(Clone, Debug, Default)]
pub struct HeaderTable {
    /// `[0, N)` counts positive literals, `[N, 2N)` negative ones.
    counters: Vec<u64>,
    predicates: usize,
    stamp: u64,
    resets: u64,
}

impl HeaderTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn stamp(&self) -> u64 {
        self.stamp
    }

    /// Number of overflow resets so far.
    pub fn resets(&self) -> u64 {
        self.resets
    }

    /// Moves the stamp forward to `stamp`. Only useful to exercise the
    /// overflow path; moving forward never changes answers.
    pub fn advance_stamp_to(&mut self, stamp: u64) {
        assert!(stamp >= self.stamp, "the stamp can only move forward");
        self.stamp = stamp;
    }

    fn reset(&mut self) {
        self.counters.iter_mut().for_each(|c| *c = 0);
        self.stamp = 0;
        self.resets += 1;
    }

    /// Makes room for every predicate of both clauses. Growing keeps the
    /// old counters in place so the stamp invariant survives.
    fn ensure(&mut self, s: &Clause, m: &Clause) {
        let needed = s
            .literals()
            .iter()
            .chain(m.literals())
            .map(|l| l.predicate().index() + 1)
            .max()
            .unwrap_or(0);
        if needed <= self.predicates {
            return;
        }
        let n = needed.max(2 * self.predicates);
        let mut counters = vec![0; 2 * n];
        let old = self.predicates;
        counters[..old].copy_from_slice(&self.counters[..old]);
        counters[n..n + old].copy_from_slice(&self.counters[old..2 * old]);
        self.counters = counters;
        self.predicates = n;
    }

    fn header_index(&self, l: &Literal) -> usize {
        let p = l.predicate().index();
        if l.is_positive() {
            p
        } else {
            p + self.predicates
        }
    }

    /// True when the (predicate, polarity) multiset of `s` is not included
    /// in that of `m`, or `|s| > |m|`. A `true` answer rules out
    /// subsumption.
    pub fn prune_subsumption(&mut self, s: &Clause, m: &Clause) -> bool {
        if s.len() > m.len() {
            return true;
        }
        self.ensure(s, m);
        let width = m.len() as u64;
        if self.stamp.checked_add(width).is_none() {
            self.reset();
        }
        let t = self.stamp;
        for l in m.literals() {
            let idx = self.header_index(l);
            self.counters[idx] = self.counters[idx].max(t) + 1;
        }
        let mut pruned = false;
        for l in s.literals() {
            let idx = self.header_index(l);
            if self.counters[idx] <= t {
                pruned = true;
                break;
            }
            self.counters[idx] -= 1;
        }
        self.stamp = t + width;
        pruned
    }

    /// True when some predicate of `s` does not occur in `m` at all. A
    /// `true` answer rules out subsumption resolution (and subsumption).
    pub fn prune_subsumption_resolution(&mut self, s: &Clause, m: &Clause) -> bool {
        self.ensure(s, m);
        if self.stamp.checked_add(1).is_none() {
            self.reset();
        }
        self.stamp += 1;
        let t = self.stamp;
        for l in m.literals() {
            self.counters[l.predicate().index()] = t;
        }
        s.literals().iter().any(|l| self.counters[l.predicate().index()] != t)
    }
}

/// Which rule a match-set test is asked about.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PruneMode {
    Subsumption,
    Resolution,
}

/// Tests that only need the match set.
///
/// * subsumption: some side literal has no positive match;
/// * resolution: some side literal has no match at all, or there is no
///   negative match anywhere, or two side literals with different
///   predicates both lack positive matches.
pub fn prune_after_match_set(ms: &MatchSet, side: &Clause, mode: PruneMode) -> bool {
    let has_positive = |i: usize| ms.side(i).any(|e| e.polarity == Polarity::Positive);
    match mode {
        PruneMode::Subsumption => (0..ms.k()).any(|i| !has_positive(i)),
        PruneMode::Resolution => {
            debug_assert!(ms.includes_negatives());
            if ms.num_negative() == 0 {
                return true;
            }
            if (0..ms.k()).any(|i| ms.side(i).next().is_none()) {
                return true;
            }
            let mut lacking = None;
            for i in 0..ms.k() {
                if has_positive(i) {
                    continue;
                }
                let p = side.literals()[i].predicate();
                match lacking {
                    None => lacking = Some(p),
                    Some(q) if q != p => return true,
                    Some(_) => {}
                }
            }
            false
        }
    }
}
