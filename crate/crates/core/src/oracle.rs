//! Brute-force reference deciders.
//!
//! Nothing here shares code with the match set, the encoders or the solver.
//! Matching is a plain recursion over term trees, subsumption and
//! subsumption resolution are decided by exhaustive search over literal
//! assignments, and constraint systems are checked by a naive DPLL. All of
//! it is exponential and only meant for small instances.

use crate::encoder::{Constraint, ConstraintSystem};
use crate::error::OracleError;
use crate::matching::Polarity;
use crate::substitution::Substitution;
use crate::symbol::VarId;
use crate::term::{Clause, Literal, Sym, Term, TermRef};

/// Largest side premise the oracle accepts by default.
pub const DEFAULT_BOUND: usize = 8;

/// Largest number of variables [`dpll_reference`] accepts.
pub const DPLL_BOUND: usize = 20;

fn match_term(pattern: TermRef<'_>, target: TermRef<'_>, bound: &mut Vec<(VarId, Term)>) -> bool {
    match pattern.root() {
        Sym::Var(v) => {
            let t = target.to_term();
            match bound.iter().find(|(w, _)| *w == v) {
                Some((_, prev)) => *prev == t,
                None => {
                    bound.push((v, t));
                    true
                }
            }
        }
        Sym::Fun(f) => {
            if target.root() != Sym::Fun(f) {
                return false;
            }
            let mut targets = target.args();
            for p in pattern.args() {
                match targets.next() {
                    Some(t) if match_term(p, t, bound) => {}
                    _ => return false,
                }
            }
            targets.next().is_none()
        }
    }
}

fn match_args(s: &Literal, m: &Literal) -> Option<Substitution> {
    if s.predicate() != m.predicate() {
        return None;
    }
    let mut bound = Vec::new();
    let mut targets = m.args();
    for p in s.args() {
        match targets.next() {
            Some(t) if match_term(p, t, &mut bound) => {}
            _ => return None,
        }
    }
    if targets.next().is_some() {
        return None;
    }
    Substitution::from_bindings(bound)
}

/// Literal equality up to argument order of symmetric predicates.
pub fn equivalent(a: &Literal, b: &Literal) -> bool {
    a == b || (a.is_symmetric() && b.is_symmetric() && a.swapped() == *b)
}

/// Every `σ` with `σ(s) ≡ m` (positive) or `σ(s) ≡ ¬m` (negative), where `≡`
/// is [`equivalent`]. Each result is re-checked by application.
pub fn oracle_match(s: &Literal, m: &Literal, polarity: Polarity) -> Vec<Substitution> {
    let target = match polarity {
        Polarity::Positive => m.clone(),
        Polarity::Negative => m.complement(),
    };
    if s.is_positive() != target.is_positive() {
        return Vec::new();
    }
    let mut out: Vec<Substitution> = Vec::new();
    let mut candidates = vec![target.clone()];
    if target.is_symmetric() {
        candidates.push(target.swapped());
    }
    for t in candidates {
        if let Some(sub) = match_args(s, &t) {
            assert!(equivalent(&sub.apply_literal(s), &target));
            if !out.contains(&sub) {
                out.push(sub);
            }
        }
    }
    out
}

fn check_bound(size: usize, bound: usize) -> Result<(), OracleError> {
    if size > bound {
        return Err(OracleError::BoundExceeded { size, bound });
    }
    Ok(())
}

/// Decides subsumption with the default bound.
pub fn oracle_subsumes(s: &Clause, m: &Clause) -> Result<Option<Substitution>, OracleError> {
    oracle_subsumes_bounded(s, m, DEFAULT_BOUND)
}

/// Searches injective maps from `S` into `M` with compatible positive
/// matches. Returns the first witness found.
pub fn oracle_subsumes_bounded(s: &Clause, m: &Clause, bound: usize) -> Result<Option<Substitution>, OracleError> {
    check_bound(s.len(), bound)?;
    if s.len() > m.len() {
        return Ok(None);
    }
    let table: Vec<Vec<Vec<Substitution>>> = s
        .literals()
        .iter()
        .map(|a| m.literals().iter().map(|b| oracle_match(a, b, Polarity::Positive)).collect())
        .collect();
    let mut used = vec![false; m.len()];
    let found = injective(&table, 0, &mut used, Substitution::new());
    if let Some(sub) = &found {
        assert!(is_subsumption_witness(sub, s, m), "oracle produced an invalid witness");
    }
    Ok(found)
}

fn injective(table: &[Vec<Vec<Substitution>>], i: usize, used: &mut [bool], acc: Substitution) -> Option<Substitution> {
    if i == table.len() {
        return Some(acc);
    }
    for j in 0..used.len() {
        if used[j] {
            continue;
        }
        for sub in &table[i][j] {
            let Some(next) = acc.compatible_union(sub) else { continue };
            used[j] = true;
            let found = injective(table, i + 1, used, next);
            used[j] = false;
            if found.is_some() {
                return found;
            }
        }
    }
    None
}

/// Decides subsumption resolution with the default bound.
pub fn oracle_sr(s: &Clause, m: &Clause) -> Result<Option<(Substitution, usize)>, OracleError> {
    oracle_sr_bounded(s, m, DEFAULT_BOUND)
}

/// For every resolution literal `m_j` in ascending `j` and every non-empty
/// `S' ⊆ S` in ascending bitmask order, looks for `σ` with `σ(S') = {¬m_j}`
/// and `σ(S ∖ S') ⊆ M ∖ {m_j}`. Returns `(σ, j)` for the first hit.
pub fn oracle_sr_bounded(s: &Clause, m: &Clause, bound: usize) -> Result<Option<(Substitution, usize)>, OracleError> {
    check_bound(s.len(), bound)?;
    let k = s.len();
    let positive: Vec<Vec<Vec<Substitution>>> = s
        .literals()
        .iter()
        .map(|a| m.literals().iter().map(|b| oracle_match(a, b, Polarity::Positive)).collect())
        .collect();
    for j in 0..m.len() {
        let negative: Vec<Vec<Substitution>> = s
            .literals()
            .iter()
            .map(|a| oracle_match(a, &m.literals()[j], Polarity::Negative))
            .collect();
        for mask in 1u32..(1 << k) {
            let choices: Vec<Vec<&Substitution>> = (0..k)
                .map(|i| {
                    if mask & (1 << i) != 0 {
                        negative[i].iter().collect()
                    } else {
                        (0..m.len())
                            .filter(|&jj| jj != j)
                            .flat_map(|jj| positive[i][jj].iter())
                            .collect()
                    }
                })
                .collect();
            if choices.iter().any(|c| c.is_empty()) {
                continue;
            }
            if let Some(sub) = any_compatible(&choices, 0, Substitution::new()) {
                assert!(is_resolution_witness(&sub, j, s, m), "oracle produced an invalid witness");
                return Ok(Some((sub, j)));
            }
        }
    }
    Ok(None)
}

fn any_compatible(choices: &[Vec<&Substitution>], i: usize, acc: Substitution) -> Option<Substitution> {
    if i == choices.len() {
        return Some(acc);
    }
    for sub in &choices[i] {
        if let Some(next) = acc.compatible_union(sub) {
            if let Some(found) = any_compatible(choices, i + 1, next) {
                return Some(found);
            }
        }
    }
    None
}

fn canonical(l: &Literal) -> Literal {
    if l.is_symmetric() {
        let s = l.swapped();
        if s < *l {
            return s;
        }
    }
    l.clone()
}

/// `σ(S)` is a sub-multiset of `M`, literals compared with [`equivalent`].
pub fn is_subsumption_witness(sub: &Substitution, s: &Clause, m: &Clause) -> bool {
    let mut pool: Vec<Literal> = m.literals().iter().map(canonical).collect();
    for l in sub.apply_clause(s) {
        let l = canonical(&l);
        match pool.iter().position(|x| *x == l) {
            Some(at) => {
                pool.swap_remove(at);
            }
            None => return false,
        }
    }
    true
}

/// Some literals of `σ(S)` equal `¬m_j` and all others occur in
/// `M ∖ {m_j}`, literals compared with [`equivalent`].
pub fn is_resolution_witness(sub: &Substitution, j: usize, s: &Clause, m: &Clause) -> bool {
    let Some(resolved) = m.literals().get(j) else { return false };
    let complement = resolved.complement();
    let mut hits = 0;
    for l in sub.apply_clause(s) {
        if equivalent(&l, &complement) {
            hits += 1;
        } else if !m
            .literals()
            .iter()
            .enumerate()
            .any(|(jj, x)| jj != j && equivalent(&l, x))
        {
            return false;
        }
    }
    hits > 0
}

/// Whether `model` satisfies every constraint of `sys`.
pub fn satisfies(sys: &ConstraintSystem<'_>, model: &[bool]) -> bool {
    let value = |l: crate::encoder::Lit| model[l.var().index()] != l.is_negated();
    let mut active: Vec<&Substitution> = Vec::new();
    for c in sys.constraints() {
        match c {
            Constraint::Clause(lits) => {
                if !lits.iter().any(|&l| value(l)) {
                    return false;
                }
            }
            Constraint::AtMostOne(group) => {
                if group.iter().filter(|v| model[v.index()]).count() > 1 {
                    return false;
                }
            }
            Constraint::Binding(v, sub) => {
                if model[v.index()] {
                    active.push(sub);
                }
            }
        }
    }
    let mut union = Substitution::new();
    for sub in active {
        match union.compatible_union(sub) {
            Some(u) => union = u,
            None => return false,
        }
    }
    true
}

/// Naive DPLL over variables in index order, `false` tried first. Returns
/// a model if one exists.
pub fn dpll_reference(sys: &ConstraintSystem<'_>) -> Result<Option<Vec<bool>>, OracleError> {
    check_bound(sys.num_vars(), DPLL_BOUND)?;
    let mut value: Vec<Option<bool>> = vec![None; sys.num_vars()];
    Ok(dpll(sys, &mut value, 0))
}

fn violated(sys: &ConstraintSystem<'_>, value: &[Option<bool>]) -> bool {
    let mut active: Vec<&Substitution> = Vec::new();
    for c in sys.constraints() {
        match c {
            Constraint::Clause(lits) => {
                let all_false = lits
                    .iter()
                    .all(|l| value[l.var().index()].is_some_and(|v| v == l.is_negated()));
                if all_false {
                    return true;
                }
            }
            Constraint::AtMostOne(group) => {
                if group.iter().filter(|v| value[v.index()] == Some(true)).count() > 1 {
                    return true;
                }
            }
            Constraint::Binding(v, sub) => {
                if value[v.index()] == Some(true) {
                    active.push(sub);
                }
            }
        }
    }
    for (a, x) in active.iter().enumerate() {
        for y in &active[a + 1..] {
            if !x.is_compatible(y) {
                return true;
            }
        }
    }
    false
}

fn dpll(sys: &ConstraintSystem<'_>, value: &mut Vec<Option<bool>>, next: usize) -> Option<Vec<bool>> {
    if violated(sys, value) {
        return None;
    }
    if next == value.len() {
        return Some(value.iter().map(|v| v == &Some(true)).collect());
    }
    for b in [false, true] {
        value[next] = Some(b);
        if let Some(model) = dpll(sys, value, next + 1) {
            return Some(model);
        }
    }
    value[next] = None;
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoder::{encode_sr_direct, encode_subsumption, EncodingKind, Lit};
    use crate::matching::{BoolVar, MatchSet};
    use crate::parser::parse_clause;
    use crate::symbol::SymbolTable;

    const M: &str = "p(g(c,d)) | ~p(f(d)) | ~q(Y1)";

    fn pair(t: &mut SymbolTable, s: &str, m: &str) -> (Clause, Clause) {
        (parse_clause(s, t).unwrap(), parse_clause(m, t).unwrap())
    }

    #[test]
    fn first_example_subsumption_verdicts() {
        let mut t = SymbolTable::new();
        let (s1, m) = pair(&mut t, "p(g(X1,X2)) | ~q(X3)", M);
        let sub = oracle_subsumes(&s1, &m).unwrap().unwrap();
        assert_eq!(sub.display(&t).to_string(), "{X1↦c,X2↦d,X3↦Y1}");
        let (s2, m) = pair(&mut t, "p(g(X1,X2)) | ~q(X1)", M);
        assert_eq!(oracle_subsumes(&s2, &m).unwrap(), None);
        let (s3, m) = pair(&mut t, "p(g(X1,d)) | p(g(c,X2)) | ~q(X3)", M);
        assert_eq!(oracle_subsumes(&s3, &m).unwrap(), None);
        assert_eq!(oracle_subsumes(&Clause::empty(), &m).unwrap(), Some(Substitution::new()));
    }

    #[test]
    fn second_example_resolution_verdicts() {
        let mut t = SymbolTable::new();
        let (s4, m) = pair(&mut t, "~p(g(X1,X2)) | ~q(X3)", M);
        let (_, j) = oracle_sr(&s4, &m).unwrap().unwrap();
        assert_eq!(m.without(j).display(&t).to_string(), "~p(f(d)) | ~q(Y1)");
        let (s5, m) = pair(&mut t, "~p(g(X1,d)) | ~p(g(c,X2)) | ~q(X3)", M);
        assert_eq!(oracle_sr(&s5, &m).unwrap().unwrap().1, 0);
        for s in ["p(f(X1)) | q(X2)", "p(g(c,X1)) | p(f(X1)) | ~p(f(X2))", "p(g(c,X1)) | p(f(X1)) | r(X2)"] {
            let (s, m) = pair(&mut t, s, M);
            assert_eq!(oracle_sr(&s, &m).unwrap(), None);
        }
    }

    #[test]
    fn bound_is_enforced() {
        let mut t = SymbolTable::new();
        let (s, m) = pair(&mut t, "p(X) | q(X) | r(X)", "p(c)");
        assert_eq!(
            oracle_subsumes_bounded(&s, &m, 2),
            Err(OracleError::BoundExceeded { size: 3, bound: 2 })
        );
        assert!(oracle_sr_bounded(&s, &m, 2).is_err());
    }

    #[test]
    fn symmetric_matching_finds_both_orientations() {
        let mut t = SymbolTable::new();
        let (s, m) = pair(&mut t, "X = Y", "c = f(c)");
        let subs = oracle_match(&s.literals()[0], &m.literals()[0], Polarity::Positive);
        let shown: Vec<String> = subs.iter().map(|s| s.display(&t).to_string()).collect();
        assert_eq!(shown, ["{X↦c,Y↦f(c)}", "{X↦f(c),Y↦c}"]);
        let (s, m) = pair(&mut t, "f(X) != c", "c = f(d)");
        let subs = oracle_match(&s.literals()[0], &m.literals()[0], Polarity::Negative);
        assert_eq!(subs.len(), 1);
    }

    #[test]
    fn witnesses_are_checked_by_application() {
        let mut t = SymbolTable::new();
        let (s, m) = pair(&mut t, "p(X) | p(Y)", "p(c) | q(c)");
        let collapse = Substitution::from_bindings(vec![
            (s.literals()[0].variables().next().unwrap(), m.literals()[0].args().next().unwrap().to_term()),
            (s.literals()[1].variables().next().unwrap(), m.literals()[0].args().next().unwrap().to_term()),
        ])
        .unwrap();
        // Multiset inclusion fails: p(c) would be used twice.
        assert!(!is_subsumption_witness(&collapse, &s, &m));
        assert!(!is_resolution_witness(&collapse, 0, &s, &m));
    }

    #[test]
    fn dpll_agrees_on_the_examples() {
        let mut t = SymbolTable::new();
        let (s, m) = pair(&mut t, "q(X1) | p(X1,X2) | p(X2,X1)", "q(c) | p(c,d) | p(d,c)");
        let ms = MatchSet::build(&s, &m, false);
        let sys = encode_subsumption(&ms).unwrap();
        let model = dpll_reference(&sys).unwrap().unwrap();
        assert!(satisfies(&sys, &model));

        let (s, m) = pair(&mut t, "p(f(X1),X2) | ~p(X2,X1) | p(f(X3),X1)", "~p(f(c),d) | ~p(d,c) | p(f(Y1),c)");
        let ms = MatchSet::build(&s, &m, true);
        let sys = encode_sr_direct(&ms).unwrap();
        let model = dpll_reference(&sys).unwrap().unwrap();
        assert!(satisfies(&sys, &model));

        let empty = ConstraintSystem::from_parts(
            EncodingKind::Subsumption,
            1,
            vec![Constraint::Clause(vec![Lit::pos(BoolVar(0))]), Constraint::Clause(vec![])],
        );
        assert_eq!(dpll_reference(&empty).unwrap(), None);
        let wide = ConstraintSystem::from_parts(EncodingKind::Subsumption, 21, vec![]);
        assert!(dpll_reference(&wide).is_err());
    }
}
