//! Variable move-to-front decision queue.
//!
//! Variables sit in a doubly linked list ordered by bump stamp. Bumping
//! moves a variable to the front. The search pointer never points past an
//! unassigned variable with a larger stamp, so picking the next decision
//! only walks over assigned variables.

const NIL: u32 = u32::MAX;

#[derive(Clone, Debug, Default)]
pub(crate) struct Vmtf {
    prev: Vec<u32>,
    next: Vec<u32>,
    stamp: Vec<u64>,
    queued: Vec<bool>,
    first: u32,
    last: u32,
    search: u32,
    counter: u64,
}

impl Vmtf {
    /// Empties the queue and sizes it for `num_vars` variables.
    pub fn reset(&mut self, num_vars: usize) {
        self.prev.clear();
        self.prev.resize(num_vars, NIL);
        self.next.clear();
        self.next.resize(num_vars, NIL);
        self.stamp.clear();
        self.stamp.resize(num_vars, 0);
        self.queued.clear();
        self.queued.resize(num_vars, false);
        self.first = NIL;
        self.last = NIL;
        self.search = NIL;
        self.counter = 0;
    }

    /// Puts `v` at the front. Variables enqueued later are decided first.
    pub fn enqueue(&mut self, v: u32) {
        if self.queued[v as usize] {
            return;
        }
        self.queued[v as usize] = true;
        self.push_front(v);
        self.search = v;
    }

    fn push_front(&mut self, v: u32) {
        self.counter += 1;
        self.stamp[v as usize] = self.counter;
        self.prev[v as usize] = self.last;
        self.next[v as usize] = NIL;
        if self.last == NIL {
            self.first = v;
        } else {
            self.next[self.last as usize] = v;
        }
        self.last = v;
    }

    fn unlink(&mut self, v: u32) {
        let (p, n) = (self.prev[v as usize], self.next[v as usize]);
        if p == NIL {
            self.first = n;
        } else {
            self.next[p as usize] = n;
        }
        if n == NIL {
            self.last = p;
        } else {
            self.prev[n as usize] = p;
        }
    }

    /// Moves `v` to the front. `assigned` tells whether `v` currently has a
    /// value; unassigned variables become the new search start.
    pub fn bump(&mut self, v: u32, assigned: bool) {
        if !self.queued[v as usize] {
            return;
        }
        if self.last != v {
            if self.search == v {
                self.search = self.prev[v as usize];
            }
            self.unlink(v);
            self.push_front(v);
        }
        if !assigned {
            self.search = v;
        }
    }

    /// Called when `v` loses its value during backtracking.
    pub fn on_unassign(&mut self, v: u32) {
        if !self.queued[v as usize] {
            return;
        }
        if self.search == NIL || self.stamp[v as usize] > self.stamp[self.search as usize] {
            self.search = v;
        }
    }

    /// Most recently bumped unassigned variable.
    pub fn next_decision(&mut self, is_assigned: impl Fn(u32) -> bool) -> Option<u32> {
        let mut v = self.search;
        while v != NIL && is_assigned(v) {
            v = self.prev[v as usize];
        }
        if v == NIL {
            // Every queued variable is assigned; keep the pointer at the
            // front so later unassignments compare against real stamps.
            self.search = self.last;
            return None;
        }
        self.search = v;
        Some(v)
    }

    pub fn stamp(&self, v: u32) -> u64 {
        self.stamp[v as usize]
    }

    /// Queue contents from front to back.
    #[cfg(test)]
    pub fn order(&self) -> Vec<u32> {
        let mut out = Vec::new();
        let mut v = self.last;
        while v != NIL {
            out.push(v);
            v = self.prev[v as usize];
        }
        out
    }
}
