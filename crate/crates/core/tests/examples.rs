use subsat_core::{
    encode_sr_direct, encode_sr_indirect, encode_subsumption, parse_clause, reconstruct, BackwardOutcome, CheckState,
    Clause, ClauseSet, EncodingChoice, EncodingKind, ForwardOutcome, MatchSet, Outcome, Simplifier, SimplifyConfig,
    Solver, SolverOptions, SymbolTable,
};

const M12: &str = "p(g(c,d)) | ~p(f(d)) | ~q(Y1)";

fn parse(t: &mut SymbolTable, s: &str) -> Clause {
    parse_clause(s, t).unwrap()
}

fn verdicts(side: &str, main: &str, encoding: EncodingChoice) -> (Option<String>, Option<String>) {
    let mut t = SymbolTable::new();
    let s = parse(&mut t, side);
    let m = parse(&mut t, main);
    let mut simp = Simplifier::new(SimplifyConfig {
        encoding,
        check_invariants: true,
        ..SimplifyConfig::default()
    });
    let mut st = CheckState::new();
    let sub = simp.check_subsumption(&s, &m, &mut st);
    let res = simp.check_subsumption_resolution(&s, &m, &mut st);
    assert_eq!(simp.stats().invariant_failures, 0);
    (
        sub.map(|s| s.display(&t).to_string()),
        res.map(|r| r.conclusion.display(&t).to_string()),
    )
}

#[test]
fn subsumption_verdicts_of_the_first_example() {
    for enc in [EncodingChoice::Direct, EncodingChoice::Indirect, EncodingChoice::Dynamic] {
        let (sub, _) = verdicts("p(g(X1,X2)) | ~q(X3)", M12, enc);
        assert_eq!(sub.as_deref(), Some("{X1↦c,X2↦d,X3↦Y1}"));
        assert_eq!(verdicts("p(g(X1,X2)) | ~q(X1)", M12, enc).0, None);
        assert_eq!(verdicts("p(g(X1,d)) | p(g(c,X2)) | ~q(X3)", M12, enc).0, None);
    }
}

#[test]
fn resolution_verdicts_of_the_second_example() {
    for enc in [EncodingChoice::Direct, EncodingChoice::Indirect, EncodingChoice::Dynamic] {
        for side in ["~p(g(X1,X2)) | ~q(X3)", "~p(g(X1,d)) | ~p(g(c,X2)) | ~q(X3)"] {
            let (sub, res) = verdicts(side, M12, enc);
            assert_eq!(sub, None);
            assert_eq!(res.as_deref(), Some("~p(f(d)) | ~q(Y1)"), "{side}");
        }
        for side in [
            "p(f(X1)) | q(X2)",
            "p(g(c,X1)) | p(f(X1)) | ~p(f(X2))",
            "p(g(c,X1)) | p(f(X1)) | r(X2)",
        ] {
            assert_eq!(verdicts(side, M12, enc), (None, None), "{side}");
        }
    }
}

#[test]
fn permutation_example_reconstructs_its_substitution() {
    let mut t = SymbolTable::new();
    let s = parse(&mut t, "q(X1) | p(X1,X2) | p(X2,X1)");
    let m = parse(&mut t, "q(c) | p(c,d) | p(d,c)");
    let ms = MatchSet::build(&s, &m, false);
    let sys = encode_subsumption(&ms).unwrap();
    let report = Solver::new().solve(&sys, &SolverOptions::default());
    let Outcome::Satisfiable(model) = report.outcome else { panic!("expected a model") };
    let w = reconstruct(&model, &ms, EncodingKind::Subsumption).unwrap();
    assert_eq!(w.sub.display(&t).to_string(), "{X1↦c,X2↦d}");
    assert_eq!(w.resolution, None);
}

#[test]
fn resolution_example_reconstructs_under_both_encodings() {
    let mut t = SymbolTable::new();
    let s = parse(&mut t, "p(f(X1),X2) | ~p(X2,X1) | p(f(X3),X1)");
    let m = parse(&mut t, "~p(f(c),d) | ~p(d,c) | p(f(Y1),c)");
    let ms = MatchSet::build(&s, &m, true);
    for (kind, sys) in [
        (EncodingKind::Direct, encode_sr_direct(&ms).unwrap()),
        (EncodingKind::Indirect, encode_sr_indirect(&ms).unwrap()),
    ] {
        let report = Solver::new().solve(&sys, &SolverOptions::default());
        let model = report.outcome.model().expect("satisfiable").to_vec();
        let w = reconstruct(&model, &ms, kind).unwrap();
        assert_eq!(w.sub.display(&t).to_string(), "{X1↦c,X2↦d,X3↦Y1}");
        assert_eq!(w.resolution, Some(0));
        assert_eq!(m.without(0).display(&t).to_string(), "~p(d,c) | p(f(Y1),c)");
    }
}

#[test]
fn forward_loop_prefers_deletion_over_replacement() {
    let mut t = SymbolTable::new();
    let clauses = ["~p(g(X1,X2)) | ~q(X3)", "p(g(X1,X2)) | ~q(X3)", M12];
    let mut set: ClauseSet = clauses.iter().map(|c| parse(&mut t, c)).collect();
    let mut simp = Simplifier::new(SimplifyConfig::default());
    match simp.forward_simplify(2, &mut set) {
        ForwardOutcome::Deleted { by, sub } => {
            assert_eq!(by, 1);
            assert_eq!(sub.display(&t).to_string(), "{X1↦c,X2↦d,X3↦Y1}");
        }
        other => panic!("unexpected {other:?}"),
    }
    assert_eq!(set.len(), 2);
    assert!(set.get(2).is_none());
}

#[test]
fn forward_loop_replaces_with_the_conclusion() {
    let mut t = SymbolTable::new();
    let clauses = ["r(X)", "~p(g(X1,X2)) | ~q(X3)", M12];
    for two_pass in [false, true] {
        let mut set: ClauseSet = clauses.iter().map(|c| parse(&mut t, c)).collect();
        let mut simp = Simplifier::new(SimplifyConfig::default());
        let outcome = if two_pass {
            simp.forward_simplify_two_pass(2, &mut set)
        } else {
            simp.forward_simplify(2, &mut set)
        };
        let ForwardOutcome::Replaced { by, index, resolution } = outcome else { panic!("expected a replacement") };
        assert_eq!(by, 1);
        assert_eq!(index, 3);
        assert_eq!(resolution.literal, 0);
        assert_eq!(set.get(3).unwrap().display(&t).to_string(), "~p(f(d)) | ~q(Y1)");
        assert_eq!(set.len(), 3);
    }
}

#[test]
fn two_pass_loop_builds_more_match_sets() {
    let mut t = SymbolTable::new();
    let clauses = ["~p(g(X1,X2)) | q(X3)", "p(f(X1)) | ~q(X2)", "~p(g(X1,X2)) | ~q(X3)", M12];
    let mut builds = Vec::new();
    for two_pass in [false, true] {
        let mut set: ClauseSet = clauses.iter().map(|c| parse(&mut t, c)).collect();
        let mut simp = Simplifier::new(SimplifyConfig::default());
        let outcome = if two_pass {
            simp.forward_simplify_two_pass(3, &mut set)
        } else {
            simp.forward_simplify(3, &mut set)
        };
        assert!(matches!(outcome, ForwardOutcome::Replaced { by: 1, .. }));
        builds.push(simp.stats().match_set_builds);
    }
    assert!(builds[1] > builds[0], "{builds:?}");
}

#[test]
fn backward_loop_deletes_and_replaces() {
    let mut t = SymbolTable::new();
    let s = parse(&mut t, "~q(X)");
    let clauses = ["p(c) | ~q(d)", "q(c) | p(d)", "r(c)", "q(Y) | r(Y)"];
    let mut set: ClauseSet = clauses.iter().map(|c| parse(&mut t, c)).collect();
    let mut simp = Simplifier::new(SimplifyConfig::default());
    let out = simp.backward_simplify(&s, &mut set, None);
    assert_eq!(out.len(), 3);
    assert!(matches!(out[0], (0, BackwardOutcome::Deleted(_))));
    let (1, BackwardOutcome::Replaced { index, .. }) = &out[1] else { panic!("{:?}", out[1]) };
    assert_eq!(set.get(*index).unwrap().display(&t).to_string(), "p(d)");
    assert!(matches!(out[2], (3, BackwardOutcome::Replaced { .. })));
    assert_eq!(set.len(), 3);
    assert!(set.get(2).is_some());
}

#[test]
fn equality_is_matched_in_both_orientations() {
    let (sub, _) = verdicts("X = f(Y) | p(Y)", "f(c) = d | p(c) | f(d) = c", EncodingChoice::Dynamic);
    assert_eq!(sub.as_deref(), Some("{X↦d,Y↦c}"));
    let (sub, res) = verdicts("f(X) != Y", "c = f(d) | p(c)", EncodingChoice::Dynamic);
    assert_eq!(sub, None);
    assert_eq!(res.as_deref(), Some("p(c)"));
}
