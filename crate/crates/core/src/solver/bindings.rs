//! Native handling of substitution constraints.
//!
//! Every first-order variable `x` mentioned by a binding gets a slot with the
//! list `Bindings(x)` of (boolean variable, bound term). Terms are interned
//! so comparisons are integer comparisons. `current[x]` holds the value of
//! the global substitution on `x` together with the boolean variable that
//! set it.

use std::collections::HashMap;

use crate::matching::BoolVar;
use crate::substitution::Substitution;
use crate::symbol::VarId;
use crate::term::Term;

#[derive(Clone, Debug, Default)]
pub(crate) struct BindingIndex {
    /// Boolean variable -> (slot, term id).
    per_var: Vec<Vec<(u32, u32)>>,
    /// Slot -> `Bindings(x)`.
    watch: Vec<Vec<(BoolVar, u32)>>,
    /// Slot -> (term id, setter).
    current: Vec<Option<(u32, BoolVar)>>,
    slots: usize,
}

impl BindingIndex {
    pub fn reset(&mut self, num_vars: usize) {
        for l in self.per_var.iter_mut() {
            l.clear();
        }
        self.per_var.resize_with(num_vars.max(self.per_var.len()), Vec::new);
        for l in self.watch.iter_mut().take(self.slots) {
            l.clear();
        }
        self.slots = 0;
    }

    /// Registers every binding of a constraint system at once.
    pub fn load<'a>(&mut self, bindings: impl Iterator<Item = (BoolVar, &'a Substitution)>) {
        let mut slot_of: HashMap<VarId, u32> = HashMap::new();
        let mut term_id: HashMap<&'a Term, u32> = HashMap::new();
        for (b, sub) in bindings {
            for (x, t) in sub.iter() {
                let next_slot = slot_of.len() as u32;
                let slot = *slot_of.entry(x).or_insert(next_slot);
                let next_term = term_id.len() as u32;
                let tid = *term_id.entry(t).or_insert(next_term);
                if slot as usize == self.slots {
                    self.slots += 1;
                    if self.watch.len() < self.slots {
                        self.watch.push(Vec::new());
                    }
                }
                self.per_var[b.index()].push((slot, tid));
                self.watch[slot as usize].push((b, tid));
            }
        }
        self.current.clear();
        self.current.resize(self.slots, None);
    }

    pub fn has_bindings(&self, b: BoolVar) -> bool {
        !self.per_var[b.index()].is_empty()
    }

    /// Extends the global substitution with the bindings of `b`, which was
    /// just assigned true. Unassigned variables whose binding disagrees go to
    /// `falsify`. A true variable that disagrees counts as a binding
    /// conflict; the propagation order makes that impossible.
    pub fn assign_true(
        &mut self,
        b: BoolVar,
        value: &[i8],
        ticks: &mut u64,
        falsify: &mut Vec<BoolVar>,
        binding_conflicts: &mut u64,
    ) {
        for &(slot, tid) in &self.per_var[b.index()] {
            match self.current[slot as usize] {
                Some((t, _)) => {
                    if t != tid {
                        *binding_conflicts += 1;
                    }
                }
                None => {
                    self.current[slot as usize] = Some((tid, b));
                    for &(other, t) in &self.watch[slot as usize] {
                        *ticks += 1;
                        if t == tid {
                            continue;
                        }
                        match value[other.index()] {
                            0 => falsify.push(other),
                            1 => *binding_conflicts += 1,
                            _ => {}
                        }
                    }
                }
            }
        }
    }

    /// Undoes [`assign_true`](Self::assign_true) for `b`.
    pub fn unassign(&mut self, b: BoolVar) {
        for &(slot, _) in &self.per_var[b.index()] {
            if let Some((_, setter)) = self.current[slot as usize] {
                if setter == b {
                    self.current[slot as usize] = None;
                }
            }
        }
    }

    /// Recomputes the global substitution from the true variables and
    /// compares it with the incremental one. Also checks that no unassigned
    /// variable disagrees with it. Returns the number of violations.
    pub fn check(&self, value: &[i8]) -> u64 {
        let mut fresh: Vec<Option<u32>> = vec![None; self.slots];
        let mut failures = 0;
        for (v, list) in self.per_var.iter().enumerate().take(value.len()) {
            if value[v] != 1 {
                continue;
            }
            for &(slot, tid) in list {
                match fresh[slot as usize] {
                    None => fresh[slot as usize] = Some(tid),
                    Some(t) if t != tid => failures += 1,
                    Some(_) => {}
                }
            }
        }
        for (current, fresh) in self.current.iter().zip(&fresh).take(self.slots) {
            if current.map(|(t, _)| t) != *fresh {
                failures += 1;
            }
        }
        for (v, list) in self.per_var.iter().enumerate().take(value.len()) {
            if value[v] != 0 {
                continue;
            }
            for &(slot, tid) in list {
                if fresh[slot as usize].is_some_and(|t| t != tid) {
                    failures += 1;
                }
            }
        }
        failures
    }
}
