//! Literal matching and match sets.
//!
//! Matching is one-directional: only variables of the side literal get
//! bound, and the main literal is treated as if it were ground. Side and
//! main premises are expected to be variable-disjoint (the parser opens a
//! fresh scope for every clause).

use crate::substitution::Substitution;
use crate::term::{Clause, Literal, Node, Sym, TermRef};
use crate::symbol::VarId;

/// Propositional variable of a constraint system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoolVar(pub u32);

impl BoolVar {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Polarity {
    /// `σ(s) = m`
    Positive,
    /// `σ(s) = ¬m`
    Negative,
}

/// One admissible pairing of a side literal with a main literal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Match {
    pub var: BoolVar,
    pub polarity: Polarity,
    /// Index into the side premise.
    pub side: usize,
    /// Index into the main premise.
    pub main: usize,
    /// 0 for the literal argument order, 1 for swapped arguments of a
    /// symmetric predicate.
    pub orientation: u8,
    pub sub: Substitution,
}

/// All matching substitutions between literals of `S` and `M`.
///
/// The boolean variable of each entry is its position in [`entries`]
/// (`MatchSet::entries`). Pairs without a match have no entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchSet {
    entries: Vec<Match>,
    by_side: Vec<Vec<u32>>,
    by_main: Vec<Vec<u32>>,
    with_negatives: bool,
    negatives: usize,
}

/// Substitutions `σ` with `σ(s) = m` (`polarity` positive) or `σ(s) = ¬m`
/// (negative), tagged with the argument orientation that produced them.
/// Symmetric predicates are tried in both orientations; duplicate
/// substitutions are reported once.
pub fn match_literal(s: &Literal, m: &Literal, polarity: Polarity) -> Vec<(u8, Substitution)> {
    let mut out = Vec::new();
    match_literal_into(s, m, polarity, &mut out);
    out
}

fn match_literal_into(
    s: &Literal,
    m: &Literal,
    polarity: Polarity,
    out: &mut Vec<(u8, Substitution)>,
) {
    let same = s.is_positive() == m.is_positive();
    if s.predicate() != m.predicate() || same != (polarity == Polarity::Positive) {
        return;
    }
    if let Some(sub) = match_nodes(s.arg_nodes(), m.arg_nodes()) {
        out.push((0, sub));
    }
    if s.is_symmetric() && m.is_symmetric() {
        let swapped = m.swapped();
        if let Some(sub) = match_nodes(s.arg_nodes(), swapped.arg_nodes()) {
            if out.iter().all(|(_, t)| *t != sub) {
                out.push((1, sub));
            }
        }
    }
}

/// Matches a sequence of pattern terms against target terms of the same
/// shape at the top level.
fn match_nodes(pattern: &[Node], target: &[Node]) -> Option<Substitution> {
    let mut bound = Vec::new();
    if !match_into(pattern, target, &mut bound) {
        return None;
    }
    let bindings = bound.into_iter().map(|(v, t)| (v, t.to_term())).collect();
    Some(Substitution::from_bindings(bindings).expect("bindings are consistent by construction"))
}

fn match_into<'t>(pattern: &[Node], target: &'t [Node], bound: &mut Vec<(VarId, TermRef<'t>)>) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < pattern.len() {
        let Some(t) = target.get(j) else { return false };
        match pattern[i].sym {
            Sym::Var(v) => {
                let sub = TermRef::new(&target[j..]);
                match bound.iter().find(|(w, _)| *w == v) {
                    Some((_, prev)) if prev.nodes() != sub.nodes() => return false,
                    Some(_) => {}
                    None => bound.push((v, sub)),
                }
                i += 1;
                j += t.len as usize;
            }
            Sym::Fun(_) => {
                if t.sym != pattern[i].sym {
                    return false;
                }
                i += 1;
                j += 1;
            }
        }
    }
    j == target.len()
}

impl MatchSet {
    /// Builds `Π(S, M)`. Negative matches are computed only when
    /// `need_negative` is set. Entries are ordered by side index, main
    /// index, polarity (positive first) and orientation.
    pub fn build(side: &Clause, main: &Clause, need_negative: bool) -> MatchSet {
        let mut entries = Vec::new();
        let mut by_side = vec![Vec::new(); side.len()];
        let mut by_main = vec![Vec::new(); main.len()];
        let mut negatives = 0;
        let mut found = Vec::new();
        for (i, s) in side.literals().iter().enumerate() {
            for (j, m) in main.literals().iter().enumerate() {
                if s.predicate() != m.predicate() {
                    continue;
                }
                let polarity = if s.is_positive() == m.is_positive() {
                    Polarity::Positive
                } else if need_negative {
                    Polarity::Negative
                } else {
                    continue;
                };
                found.clear();
                match_literal_into(s, m, polarity, &mut found);
                for (orientation, sub) in found.drain(..) {
                    let k = entries.len() as u32;
                    by_side[i].push(k);
                    by_main[j].push(k);
                    if polarity == Polarity::Negative {
                        negatives += 1;
                    }
                    entries.push(Match {
                        var: BoolVar(k),
                        polarity,
                        side: i,
                        main: j,
                        orientation,
                        sub,
                    });
                }
            }
        }
        MatchSet {
            entries,
            by_side,
            by_main,
            with_negatives: need_negative,
            negatives,
        }
    }

    pub fn entries(&self) -> &[Match] {
        &self.entries
    }

    pub fn entry(&self, v: BoolVar) -> &Match {
        &self.entries[v.index()]
    }

    /// Entries whose side literal is `i`, in variable order.
    pub fn side(&self, i: usize) -> impl Iterator<Item = &Match> + '_ {
        self.by_side[i].iter().map(|&k| &self.entries[k as usize])
    }

    /// Entries whose main literal is `j`, in variable order.
    pub fn main(&self, j: usize) -> impl Iterator<Item = &Match> + '_ {
        self.by_main[j].iter().map(|&k| &self.entries[k as usize])
    }

    /// `|S|`
    pub fn k(&self) -> usize {
        self.by_side.len()
    }

    /// `|M|`
    pub fn n(&self) -> usize {
        self.by_main.len()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Whether negative matches were computed.
    pub fn includes_negatives(&self) -> bool {
        self.with_negatives
    }

    pub fn num_negative(&self) -> usize {
        self.negatives
    }

    pub fn num_positive(&self) -> usize {
        self.entries.len() - self.negatives
    }

    /// `|Π| / (k·n)`; zero for an empty product. Can exceed 1 when
    /// symmetric predicates contribute two orientations.
    pub fn sparsity(&self) -> f64 {
        let cells = self.k() * self.n();
        if cells == 0 {
            return 0.0;
        }
        self.entries.len() as f64 / cells as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_clause;
    use crate::symbol::SymbolTable;

    fn clauses(t: &mut SymbolTable, s: &str, m: &str) -> (Clause, Clause) {
        (parse_clause(s, t).unwrap(), parse_clause(m, t).unwrap())
    }

    fn show(t: &SymbolTable, s: &Substitution) -> String {
        s.display(t).to_string()
    }

    #[test]
    fn opposite_polarity_match() {
        let mut t = SymbolTable::new();
        let (s, m) = clauses(&mut t, "p(f(X1),X2)", "~p(f(c),d)");
        let subs = match_literal(&s.literals()[0], &m.literals()[0], Polarity::Negative);
        assert_eq!(subs.len(), 1);
        assert_eq!(show(&t, &subs[0].1), "{X1↦c,X2↦d}");
        assert!(match_literal(&s.literals()[0], &m.literals()[0], Polarity::Positive).is_empty());
    }

    #[test]
    fn symmetric_predicates_match_both_ways() {
        let mut t = SymbolTable::new();
        let (s, m) = clauses(&mut t, "X = Y", "c = f(c)");
        let subs = match_literal(&s.literals()[0], &m.literals()[0], Polarity::Positive);
        let shown: Vec<_> = subs.iter().map(|(o, s)| (*o, show(&t, s))).collect();
        assert_eq!(shown, vec![(0, "{X↦c,Y↦f(c)}".to_string()), (1, "{X↦f(c),Y↦c}".to_string())]);
    }

    #[test]
    fn symmetric_duplicates_collapse() {
        let mut t = SymbolTable::new();
        let (s, m) = clauses(&mut t, "X = X", "c = c");
        assert_eq!(match_literal(&s.literals()[0], &m.literals()[0], Polarity::Positive).len(), 1);
    }

    #[test]
    fn different_predicates_never_match() {
        let mut t = SymbolTable::new();
        let (s, m) = clauses(&mut t, "p(c)", "q(c)");
        assert!(match_literal(&s.literals()[0], &m.literals()[0], Polarity::Positive).is_empty());
    }

    #[test]
    fn repeated_pattern_variables_must_agree() {
        let mut t = SymbolTable::new();
        let (s, m) = clauses(&mut t, "p(X,X) | p(X,f(X))", "p(c,d) | p(c,c) | p(c,f(c)) | p(d,f(c))");
        let ms = MatchSet::build(&s, &m, false);
        let cells: Vec<_> = ms.entries().iter().map(|e| (e.side, e.main)).collect();
        assert_eq!(cells, vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn match_set_of_the_resolution_example() {
        let mut t = SymbolTable::new();
        let (s, m) = clauses(&mut t, "p(f(X1),X2) | ~p(X2,X1) | p(f(X3),X1)", "~p(f(c),d) | ~p(d,c) | p(f(Y1),c)");
        let ms = MatchSet::build(&s, &m, true);
        let pos: Vec<_> = ms
            .entries()
            .iter()
            .filter(|e| e.polarity == Polarity::Positive)
            .map(|e| (e.side + 1, e.main + 1))
            .collect();
        let neg: Vec<_> = ms
            .entries()
            .iter()
            .filter(|e| e.polarity == Polarity::Negative)
            .map(|e| (e.side + 1, e.main + 1))
            .collect();
        assert_eq!(pos, vec![(1, 3), (2, 1), (2, 2), (3, 3)]);
        assert_eq!(neg, vec![(1, 1), (2, 3), (3, 1)]);
        assert!((ms.sparsity() - 7.0 / 9.0).abs() < 1e-12);
        let e = ms.entries().iter().find(|e| e.side == 1 && e.main == 2).unwrap();
        assert_eq!(show(&t, &e.sub), "{X1↦c,X2↦f(Y1)}");
        assert_eq!(ms, MatchSet::build(&s, &m, true));
    }

    #[test]
    fn negatives_are_skipped_when_not_needed() {
        let mut t = SymbolTable::new();
        let (s, m) = clauses(&mut t, "p(f(X1),X2) | ~p(X2,X1) | p(f(X3),X1)", "~p(f(c),d) | ~p(d,c) | p(f(Y1),c)");
        let ms = MatchSet::build(&s, &m, false);
        assert_eq!(ms.num_negative(), 0);
        assert_eq!(ms.len(), 4);
    }

    #[test]
    fn identical_units_give_an_empty_substitution() {
        let mut t = SymbolTable::new();
        let (s, m) = clauses(&mut t, "p(c)", "p(c)");
        let ms = MatchSet::build(&s, &m, true);
        assert_eq!(ms.len(), 1);
        assert!(ms.entries()[0].sub.is_empty());
    }

    #[test]
    fn missing_predicate_leaves_side_row_empty() {
        let mut t = SymbolTable::new();
        let (s, m) = clauses(&mut t, "p(X) | r(X)", "p(c)");
        let ms = MatchSet::build(&s, &m, true);
        assert_eq!(ms.side(1).count(), 0);
    }

    #[test]
    fn sparsity_of_symmetric_units() {
        let mut t = SymbolTable::new();
        let (s, m) = clauses(&mut t, "X = Y", "c = f(c)");
        assert_eq!(MatchSet::build(&s, &m, true).sparsity(), 2.0);
        let (s, m) = clauses(&mut t, "p(X)", "q(c)");
        assert_eq!(MatchSet::build(&s, &m, true).sparsity(), 0.0);
    }

    #[test]
    fn every_entry_maps_its_side_literal_onto_the_main_literal() {
        let mut t = SymbolTable::new();
        let (s, m) = clauses(
            &mut t,
            "p(f(X1),X2) | ~p(X2,X1) | p(f(X3),X1) | X1 = X3",
            "~p(f(c),d) | ~p(d,c) | p(f(Y1),c) | c != f(Y1)",
        );
        let ms = MatchSet::build(&s, &m, true);
        for e in ms.entries() {
            let image = e.sub.apply_literal(&s.literals()[e.side]);
            let target = match e.polarity {
                Polarity::Positive => m.literals()[e.main].clone(),
                Polarity::Negative => m.literals()[e.main].complement(),
            };
            let target = if e.orientation == 1 { target.swapped() } else { target };
            assert_eq!(image, target);
        }
    }
}
