use std::fmt;

use crate::symbol::{SymbolTable, VarId};
use crate::term::{Clause, Literal, Node, Sym, Term, TermRef};

/// Finite map from variables to terms, kept sorted by variable.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Substitution {
    bindings: Vec<(VarId, Term)>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a substitution from arbitrary-order bindings. Returns `None`
    /// if one variable is bound to two different terms. Identity bindings
    /// `x ↦ x` are dropped.
    pub fn from_bindings(mut bindings: Vec<(VarId, Term)>) -> Option<Self> {
        bindings.retain(|(v, t)| t.as_ref().as_var() != Some(*v));
        bindings.sort_by_key(|b| b.0);
        for w in bindings.windows(2) {
            if w[0].0 == w[1].0 && w[0].1 != w[1].1 {
                return None;
            }
        }
        bindings.dedup_by(|a, b| a.0 == b.0);
        Some(Substitution { bindings })
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn get(&self, v: VarId) -> Option<&Term> {
        self.bindings
            .binary_search_by(|(w, _)| w.cmp(&v))
            .ok()
            .map(|k| &self.bindings[k].1)
    }

    pub fn iter(&self) -> impl Iterator<Item = (VarId, &Term)> + '_ {
        self.bindings.iter().map(|(v, t)| (*v, t))
    }

    pub fn domain(&self) -> impl Iterator<Item = VarId> + '_ {
        self.bindings.iter().map(|(v, _)| *v)
    }

    /// No shared variable is mapped to different terms.
    pub fn is_compatible(&self, other: &Substitution) -> bool {
        let (mut a, mut b) = (self.bindings.iter().peekable(), other.bindings.iter().peekable());
        while let (Some(x), Some(y)) = (a.peek(), b.peek()) {
            match x.0.cmp(&y.0) {
                std::cmp::Ordering::Less => {
                    a.next();
                }
                std::cmp::Ordering::Greater => {
                    b.next();
                }
                std::cmp::Ordering::Equal => {
                    if x.1 != y.1 {
                        return false;
                    }
                    a.next();
                    b.next();
                }
            }
        }
        true
    }

    /// Union of two compatible substitutions, `None` when they clash.
    pub fn compatible_union(&self, other: &Substitution) -> Option<Substitution> {
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (mut a, mut b) = (self.bindings.iter().peekable(), other.bindings.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(x), Some(y)) => match x.0.cmp(&y.0) {
                    std::cmp::Ordering::Less => out.push(a.next().unwrap().clone()),
                    std::cmp::Ordering::Greater => out.push(b.next().unwrap().clone()),
                    std::cmp::Ordering::Equal => {
                        if x.1 != y.1 {
                            return None;
                        }
                        out.push(a.next().unwrap().clone());
                        b.next();
                    }
                },
                (Some(_), None) => out.push(a.next().unwrap().clone()),
                (None, Some(_)) => out.push(b.next().unwrap().clone()),
                (None, None) => break,
            }
        }
        Some(Substitution { bindings: out })
    }

    pub fn apply_term(&self, t: TermRef<'_>) -> Term {
        let mut out = Vec::with_capacity(t.nodes().len());
        self.apply_into(t, &mut out);
        TermRef::new(&out).to_term()
    }

    pub fn apply_literal(&self, l: &Literal) -> Literal {
        let mut out = Vec::with_capacity(l.arg_nodes().len());
        for a in l.args() {
            self.apply_into(a, &mut out);
        }
        Literal::from_nodes(l.predicate(), l.is_positive(), l.is_symmetric(), out.into())
    }

    /// Image of a clause as a literal multiset (order preserved). Distinct
    /// literals may collapse, so the result is not normalized.
    pub fn apply_clause(&self, c: &Clause) -> Vec<Literal> {
        c.literals().iter().map(|l| self.apply_literal(l)).collect()
    }

    fn apply_into(&self, t: TermRef<'_>, out: &mut Vec<Node>) {
        match t.root() {
            Sym::Var(v) => match self.get(v) {
                Some(bound) => out.extend_from_slice(bound.nodes()),
                None => out.push(t.nodes()[0]),
            },
            Sym::Fun(_) => {
                let start = out.len();
                out.push(t.nodes()[0]);
                for a in t.args() {
                    self.apply_into(a, out);
                }
                out[start].len = (out.len() - start) as u32;
            }
        }
    }

    pub fn display<'a>(&'a self, symbols: &'a SymbolTable) -> impl fmt::Display + 'a {
        DisplaySubstitution { sub: self, symbols }
    }
}

impl fmt::Debug for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.bindings.iter().map(|(v, t)| (format!("x{}", v.0), t)))
            .finish()
    }
}

struct DisplaySubstitution<'a> {
    sub: &'a Substitution,
    symbols: &'a SymbolTable,
}

impl fmt::Display for DisplaySubstitution<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, (v, t)) in self.sub.bindings.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}↦{}", self.symbols.variable_name(*v), t.display(self.symbols))?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::FunId;
    use proptest::prelude::*;

    fn c(k: u32) -> Term {
        Term::constant(FunId(k))
    }

    fn sub(pairs: &[(u32, Term)]) -> Substitution {
        Substitution::from_bindings(pairs.iter().map(|(v, t)| (VarId(*v), t.clone())).collect()).unwrap()
    }

    #[test]
    fn union_merges_agreeing_bindings() {
        let a = sub(&[(1, c(0))]);
        let b = sub(&[(1, c(0)), (2, c(1))]);
        assert_eq!(a.compatible_union(&b), Some(sub(&[(1, c(0)), (2, c(1))])));
    }

    #[test]
    fn union_rejects_clashes() {
        let a = sub(&[(1, c(0))]);
        let b = sub(&[(1, Term::var(VarId(9)))]);
        assert_eq!(a.compatible_union(&b), None);
        assert!(!a.is_compatible(&b));
    }

    #[test]
    fn empty_is_a_unit_for_union() {
        let b = sub(&[(4, c(3))]);
        assert_eq!(Substitution::new().compatible_union(&b), Some(b.clone()));
    }

    #[test]
    fn replacement_is_simultaneous() {
        // {x ↦ f(y)} applied to g(x, x)
        let f = FunId(5);
        let g = FunId(6);
        let x = VarId(0);
        let y = VarId(1);
        let s = sub(&[(0, Term::app(f, vec![Term::var(y)]))]);
        let t = Term::app(g, vec![Term::var(x), Term::var(x)]);
        let fy = Term::app(f, vec![Term::var(y)]);
        assert_eq!(s.apply_term(t.as_ref()), Term::app(g, vec![fy.clone(), fy]));
    }

    #[test]
    fn identity_bindings_are_dropped() {
        let s = Substitution::from_bindings(vec![(VarId(3), Term::var(VarId(3)))]).unwrap();
        assert!(s.is_empty());
    }

    fn arb_sub() -> impl Strategy<Value = Substitution> {
        proptest::collection::vec((0u32..4, 0u32..3), 0..4).prop_filter_map("clash", |v| {
            Substitution::from_bindings(v.into_iter().map(|(x, k)| (VarId(x), c(k))).collect())
        })
    }

    proptest! {
        #[test]
        fn union_is_commutative(a in arb_sub(), b in arb_sub()) {
            prop_assert_eq!(a.compatible_union(&b), b.compatible_union(&a));
            prop_assert_eq!(a.is_compatible(&b), a.compatible_union(&b).is_some());
        }

        #[test]
        fn union_is_associative(a in arb_sub(), b in arb_sub(), c in arb_sub()) {
            let left = a.compatible_union(&b).and_then(|ab| ab.compatible_union(&c));
            let right = b.compatible_union(&c).and_then(|bc| a.compatible_union(&bc));
            prop_assert_eq!(left, right);
        }

        #[test]
        fn ground_range_application_is_idempotent(s in arb_sub(), v in 0u32..4) {
            let g = FunId(7);
            let t = Term::app(g, vec![Term::var(VarId(v)), Term::var(VarId((v + 1) % 4))]);
            let once = s.apply_term(t.as_ref());
            prop_assert_eq!(s.apply_term(once.as_ref()), once);
        }
    }
}
