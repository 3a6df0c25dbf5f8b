use super::*;
use crate::encoder::{encode_sr_direct, encode_sr_indirect, encode_subsumption};
use crate::matching::{MatchSet, Polarity};
use crate::parser::parse_clause;
use crate::symbol::SymbolTable;

const S4: &str = "p(f(X1),X2) | ~p(X2,X1) | p(f(X3),X1)";
const M4: &str = "~p(f(c),d) | ~p(d,c) | p(f(Y1),c)";

fn match_set(s: &str, m: &str, need_negative: bool) -> MatchSet {
    let mut t = SymbolTable::new();
    let s = parse_clause(s, &mut t).unwrap();
    let m = parse_clause(m, &mut t).unwrap();
    MatchSet::build(&s, &m, need_negative)
}

fn var(ms: &MatchSet, i: usize, j: usize, pol: Polarity) -> BoolVar {
    ms.entries()
        .iter()
        .find(|e| e.side + 1 == i && e.main + 1 == j && e.polarity == pol)
        .unwrap()
        .var
}

fn system_of(constraints: Vec<Constraint<'static>>, num_vars: usize) -> ConstraintSystem<'static> {
    ConstraintSystem::from_parts(crate::encoder::EncodingKind::Subsumption, num_vars, constraints)
}

fn l(v: i32) -> Lit {
    let b = BoolVar(v.unsigned_abs() - 1);
    if v < 0 {
        Lit::neg(b)
    } else {
        Lit::pos(b)
    }
}

#[test]
fn permutation_example_has_the_expected_model() {
    let ms = match_set("q(X1) | p(X1,X2) | p(X2,X1)", "q(c) | p(c,d) | p(d,c)", false);
    let sys = encode_subsumption(&ms).unwrap();
    let report = Solver::new().solve(&sys, &SolverOptions::default());
    assert_eq!(
        report.outcome,
        Outcome::Satisfiable(vec![true, true, false, false, true])
    );
}

#[test]
fn resolution_example_follows_the_worked_trace() {
    let ms = match_set(S4, M4, true);
    let sys = encode_sr_direct(&ms).unwrap();
    use Polarity::*;
    let b13 = var(&ms, 1, 3, Positive);
    let options = SolverOptions {
        trace: true,
        decisions: vec![Lit::pos(b13)],
        ..SolverOptions::default()
    };
    let report = Solver::new().solve(&sys, &options);

    let mut expected = vec![false; ms.len()];
    for v in [var(&ms, 1, 1, Negative), var(&ms, 2, 2, Positive), var(&ms, 3, 3, Positive)] {
        expected[v.index()] = true;
    }
    assert_eq!(report.outcome, Outcome::Satisfiable(expected));
    assert_eq!(report.stats.decisions, 1);
    assert_eq!(report.stats.conflicts, 1);

    assert_eq!(report.trace[0], TraceEvent::Decide { lit: Lit::pos(b13), level: 1 });
    // Every other match variable binds X1 to something other than Y1.
    let falsified: Vec<Lit> = report.trace[1..7]
        .iter()
        .map(|e| match e {
            TraceEvent::Propagate { lit, reason } => {
                assert_eq!(*reason, Reason::Binary(Lit::neg(b13)));
                *lit
            }
            other => panic!("unexpected {other:?}"),
        })
        .collect();
    assert_eq!(falsified.len(), 6);
    let conflict = report
        .trace
        .iter()
        .find_map(|e| match e {
            TraceEvent::Conflict { clause } => Some(clause.clone()),
            _ => None,
        })
        .unwrap();
    assert!(conflict.iter().all(|q| q.is_negated() || *q != Lit::pos(b13)));
    let learn = report
        .trace
        .iter()
        .find(|e| matches!(e, TraceEvent::Learn { .. }))
        .unwrap();
    assert_eq!(
        *learn,
        TraceEvent::Learn {
            clause: vec![Lit::neg(b13)],
            backjump: 0
        }
    );
}

#[test]
fn worked_trace_golden_lines() {
    let ms = match_set(S4, M4, true);
    let sys = encode_sr_direct(&ms).unwrap();
    let options = SolverOptions {
        trace: true,
        decisions: vec![Lit::pos(var(&ms, 1, 3, Polarity::Positive))],
        ..SolverOptions::default()
    };
    let report = Solver::new().solve(&sys, &options);
    let lines: Vec<String> = report.trace.iter().map(|e| e.to_string()).collect();
    assert_eq!(
        lines,
        [
            "decide 1 @1",
            "propagate -0 by binary -0 -1",
            "propagate -2 by binary -2 -1",
            "propagate -3 by binary -3 -1",
            "propagate -4 by binary -4 -1",
            "propagate -5 by binary -5 -1",
            "propagate -6 by binary -6 -1",
            // The existence clause is the first falsified constraint found.
            "conflict [4, 0, 5]",
            "learn [-1] backjump @0",
            "propagate -1 by clause 10",
            "propagate 0 by clause 3",
            "propagate -2 by binary -2 -0",
            "propagate -5 by binary -5 -0",
            "propagate -4 by binary -4 -0",
            "propagate 3 by clause 4",
            "propagate 6 by clause 5",
        ]
    );
    assert_eq!(report.ticks, 39);
}

#[test]
fn both_resolution_encodings_are_satisfiable_on_the_example() {
    let ms = match_set(S4, M4, true);
    let mut solver = Solver::new();
    for sys in [encode_sr_direct(&ms).unwrap(), encode_sr_indirect(&ms).unwrap()] {
        let report = solver.solve(&sys, &SolverOptions::default());
        assert!(report.outcome.is_sat());
        assert_eq!(report.stats.binding_conflicts, 0);
    }
    let indirect = encode_sr_indirect(&ms).unwrap();
    let model = solver.solve(&indirect, &SolverOptions::default()).outcome;
    let model = model.model().unwrap();
    assert!(model[7]);
    assert!(!model[8]);
}

#[test]
fn empty_clause_is_unsatisfiable_without_work() {
    let sys = system_of(vec![Constraint::Clause(vec![l(1)]), Constraint::Clause(vec![])], 1);
    let report = Solver::new().solve(&sys, &SolverOptions::default());
    assert_eq!(report.outcome, Outcome::Unsatisfiable);
    assert_eq!(report.ticks, 0);
    assert_eq!(report.stats.decisions, 0);
}

#[test]
fn contradicting_units_are_unsatisfiable() {
    let sys = system_of(vec![Constraint::Clause(vec![l(1)]), Constraint::Clause(vec![l(-1)])], 1);
    assert_eq!(Solver::new().solve(&sys, &SolverOptions::default()).outcome, Outcome::Unsatisfiable);
}

#[test]
fn at_most_one_falsifies_the_rest() {
    let sys = system_of(
        vec![
            Constraint::AtMostOne(vec![BoolVar(0), BoolVar(1), BoolVar(2)]),
            Constraint::Clause(vec![l(1)]),
        ],
        3,
    );
    let report = Solver::new().solve(
        &sys,
        &SolverOptions {
            trace: true,
            ..SolverOptions::default()
        },
    );
    assert_eq!(report.outcome, Outcome::Satisfiable(vec![true, false, false]));
    assert!(report.trace.contains(&TraceEvent::Propagate {
        lit: l(-2),
        reason: Reason::Binary(l(-1))
    }));
    assert_eq!(report.stats.decisions, 0);
}

#[test]
fn at_most_one_conflict_on_the_implicit_binary() {
    // (1 ∨ 3) ∧ (2 ∨ 3) ∧ ¬3, with at most one of 1 and 2.
    let sys = system_of(
        vec![
            Constraint::AtMostOne(vec![BoolVar(0), BoolVar(1)]),
            Constraint::Clause(vec![l(1), l(3)]),
            Constraint::Clause(vec![l(2), l(3)]),
            Constraint::Clause(vec![l(-3)]),
        ],
        3,
    );
    assert_eq!(Solver::new().solve(&sys, &SolverOptions::default()).outcome, Outcome::Unsatisfiable);

    // Same shape but the conflict only shows up after a decision.
    let sys = system_of(
        vec![
            Constraint::AtMostOne(vec![BoolVar(0), BoolVar(1)]),
            Constraint::Clause(vec![l(1), l(3)]),
            Constraint::Clause(vec![l(2), l(3)]),
            Constraint::Clause(vec![l(-3), l(4)]),
            Constraint::Clause(vec![l(-3), l(-4)]),
        ],
        4,
    );
    let report = Solver::new().solve(&sys, &SolverOptions::default());
    assert_eq!(report.outcome, Outcome::Unsatisfiable);
}

#[test]
fn learned_clauses_drive_a_pigeonhole_refutation() {
    // Three pigeons, two holes.
    let p = |i: i32, h: i32| 2 * i + h + 1;
    let mut cs = Vec::new();
    for i in 0..3 {
        cs.push(Constraint::Clause(vec![l(p(i, 0)), l(p(i, 1))]));
    }
    for h in 0..2 {
        cs.push(Constraint::AtMostOne((0..3).map(|i| BoolVar((p(i, h) - 1) as u32)).collect()));
    }
    let sys = system_of(cs, 6);
    let report = Solver::new().solve(&sys, &SolverOptions::default());
    assert_eq!(report.outcome, Outcome::Unsatisfiable);
    assert!(report.stats.learned >= 1);
}

#[test]
fn unconstrained_variables_default_to_false() {
    let sys = system_of(vec![Constraint::Clause(vec![l(2), l(3)])], 4);
    let report = Solver::new().solve(&sys, &SolverOptions::default());
    let model = report.outcome.model().unwrap().to_vec();
    assert!(!model[0]);
    assert!(!model[3]);
    assert!(model[1] || model[2]);
}

#[test]
fn reuse_gives_identical_reports() {
    let ms = match_set(S4, M4, true);
    let sys = encode_sr_direct(&ms).unwrap();
    let small = match_set("p(X)", "p(c) | p(d) | q(c)", false);
    let small = encode_subsumption(&small).unwrap();
    let mut solver = Solver::new();
    let first = solver.solve(&sys, &SolverOptions::default());
    solver.solve(&small, &SolverOptions::default());
    let second = solver.solve(&sys, &SolverOptions::default());
    assert_eq!(first, second);
    assert_eq!(first, Solver::new().solve(&sys, &SolverOptions::default()));
}

#[test]
fn cutoff_stops_early_and_larger_cutoffs_agree() {
    let ms = match_set(S4, M4, true);
    let sys = encode_sr_direct(&ms).unwrap();
    let full = Solver::new().solve(&sys, &SolverOptions::default());
    assert!(full.ticks > 0);
    let capped = Solver::new().solve(
        &sys,
        &SolverOptions {
            cutoff: Some(0),
            ..SolverOptions::default()
        },
    );
    assert_eq!(capped.outcome, Outcome::CutoffExceeded);
    for c in full.ticks..full.ticks + 5 {
        let again = Solver::new().solve(
            &sys,
            &SolverOptions {
                cutoff: Some(c),
                ..SolverOptions::default()
            },
        );
        assert_eq!(again.outcome, full.outcome);
        assert_eq!(again.ticks, full.ticks);
    }
    let just_below = Solver::new().solve(
        &sys,
        &SolverOptions {
            cutoff: Some(full.ticks - 1),
            ..SolverOptions::default()
        },
    );
    assert_eq!(just_below.outcome, Outcome::CutoffExceeded);
}

#[test]
fn invariant_checks_pass_on_the_examples() {
    let ms = match_set(S4, M4, true);
    let options = SolverOptions {
        check_invariants: true,
        ..SolverOptions::default()
    };
    let mut solver = Solver::new();
    for sys in [encode_sr_direct(&ms).unwrap(), encode_sr_indirect(&ms).unwrap()] {
        let report = solver.solve(&sys, &options);
        assert!(report.stats.invariant_checks > 0);
        assert_eq!(report.stats.invariant_failures, 0);
        assert_eq!(report.stats.binding_conflicts, 0);
    }
}

#[test]
fn identical_substitutions_do_not_block_each_other() {
    let ms = match_set("p(X) | q(X)", "p(c) | q(c)", false);
    let sys = encode_subsumption(&ms).unwrap();
    let report = Solver::new().solve(&sys, &SolverOptions::default());
    assert_eq!(report.outcome, Outcome::Satisfiable(vec![true, true]));
}
