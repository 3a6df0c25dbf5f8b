//! Seeded random clause pairs and engine-versus-oracle comparison.
//!
//! Pairs are produced as clause text so that every generated instance can
//! be written to a log and replayed. Most main premises are built from an
//! instance of the side premise, with a flipped literal now and then, so
//! that positive subsumption and subsumption resolution answers are common.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::encoder::EncodingChoice;
use crate::error::OracleError;
use crate::filter::HeaderTable;
use crate::oracle::{is_resolution_witness, is_subsumption_witness, oracle_sr, oracle_subsumes};
use crate::parser::parse_clause;
use crate::simplify::{CheckState, Simplifier, SimplifyConfig};
use crate::symbol::SymbolTable;
use crate::term::Clause;

/// Symbols available to the generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    /// Name and arity. The name `=` is printed infix.
    pub predicates: Vec<(String, u32)>,
    pub functions: Vec<(String, u32)>,
    /// Distinct variable names per clause.
    pub variables: u32,
    /// Maximal term depth; constants and variables have depth 0.
    pub max_depth: u32,
}

impl Signature {
    /// Three predicates (one of them equality) and three function symbols.
    pub fn standard() -> Self {
        Signature {
            predicates: vec![("p".into(), 2), ("q".into(), 1), ("=".into(), 2)],
            functions: vec![("f".into(), 1), ("c".into(), 0), ("d".into(), 0)],
            variables: 3,
            max_depth: 2,
        }
    }

    /// One unary predicate and one constant.
    pub fn degenerate() -> Self {
        Signature {
            predicates: vec![("p".into(), 1)],
            functions: vec![("c".into(), 0)],
            variables: 2,
            max_depth: 1,
        }
    }

    pub fn symbols(&self) -> usize {
        self.predicates.len() + self.functions.len()
    }
}

#[derive(Clone, Debug)]
enum GenTerm {
    Var(u32),
    App(usize, Vec<GenTerm>),
}

#[derive(Clone, Debug)]
struct GenLiteral {
    positive: bool,
    pred: usize,
    args: Vec<GenTerm>,
}

/// Deterministic stream of clause pairs.
pub struct PairGenerator {
    rng: ChaCha8Rng,
    sig: Signature,
    max_side: usize,
    max_main: usize,
    scratch: SymbolTable,
}

impl PairGenerator {
    pub fn new(seed: u64, sig: Signature, max_side: usize, max_main: usize) -> Self {
        assert!(!sig.predicates.is_empty(), "the signature needs a predicate");
        assert!(
            sig.functions.iter().any(|f| f.1 == 0) || sig.variables > 0,
            "the signature needs a constant or variables"
        );
        PairGenerator {
            rng: ChaCha8Rng::seed_from_u64(seed),
            sig,
            max_side,
            max_main,
            scratch: SymbolTable::new(),
        }
    }

    fn term(&mut self, depth: u32, vars: bool) -> GenTerm {
        let leaf_only = depth == 0;
        let use_var = vars && self.sig.variables > 0 && self.rng.gen_bool(0.5);
        if use_var {
            return GenTerm::Var(self.rng.gen_range(0..self.sig.variables));
        }
        let candidates: Vec<usize> = (0..self.sig.functions.len())
            .filter(|&f| !leaf_only || self.sig.functions[f].1 == 0)
            .collect();
        if candidates.is_empty() {
            return GenTerm::Var(self.rng.gen_range(0..self.sig.variables.max(1)));
        }
        let f = *candidates.choose(&mut self.rng).unwrap();
        let args = (0..self.sig.functions[f].1).map(|_| self.term(depth - 1, vars)).collect();
        GenTerm::App(f, args)
    }

    fn literal(&mut self, vars: bool) -> GenLiteral {
        let pred = self.rng.gen_range(0..self.sig.predicates.len());
        let depth = self.rng.gen_range(0..=self.sig.max_depth);
        let args = (0..self.sig.predicates[pred].1).map(|_| self.term(depth, vars)).collect();
        GenLiteral {
            positive: self.rng.gen_bool(0.5),
            pred,
            args,
        }
    }

    fn instantiate(&self, t: &GenTerm, sub: &[GenTerm]) -> GenTerm {
        match t {
            GenTerm::Var(v) => sub[*v as usize].clone(),
            GenTerm::App(f, args) => GenTerm::App(*f, args.iter().map(|a| self.instantiate(a, sub)).collect()),
        }
    }

    fn render_term(&self, t: &GenTerm, prefix: char, out: &mut String) {
        match t {
            GenTerm::Var(v) => {
                out.push(prefix);
                out.push_str(&v.to_string());
            }
            GenTerm::App(f, args) => {
                out.push_str(&self.sig.functions[*f].0);
                if !args.is_empty() {
                    out.push('(');
                    for (k, a) in args.iter().enumerate() {
                        if k > 0 {
                            out.push(',');
                        }
                        self.render_term(a, prefix, out);
                    }
                    out.push(')');
                }
            }
        }
    }

    fn render(&self, lits: &[GenLiteral], prefix: char) -> String {
        if lits.is_empty() {
            return "$false".into();
        }
        let mut out = String::new();
        for (k, l) in lits.iter().enumerate() {
            if k > 0 {
                out.push_str(" | ");
            }
            let name = &self.sig.predicates[l.pred].0;
            if name == "=" && l.args.len() == 2 {
                self.render_term(&l.args[0], prefix, &mut out);
                out.push_str(if l.positive { " = " } else { " != " });
                self.render_term(&l.args[1], prefix, &mut out);
                continue;
            }
            if !l.positive {
                out.push('~');
            }
            out.push_str(name);
            if !l.args.is_empty() {
                out.push('(');
                for (k, a) in l.args.iter().enumerate() {
                    if k > 0 {
                        out.push(',');
                    }
                    self.render_term(a, prefix, &mut out);
                }
                out.push(')');
            }
        }
        out
    }

    fn candidate(&mut self) -> (String, String) {
        let k = if self.rng.gen_ratio(1, 50) {
            0
        } else {
            self.rng.gen_range(1..=self.max_side.max(1))
        };
        let side: Vec<GenLiteral> = (0..k).map(|_| self.literal(true)).collect();
        let mut main: Vec<GenLiteral> = Vec::new();
        if self.rng.gen_ratio(1, 4) || side.is_empty() {
            let n = self.rng.gen_range(1..=self.max_main.max(1));
            main.extend((0..n).map(|_| self.literal(true)));
        } else {
            let sub: Vec<GenTerm> = (0..self.sig.variables.max(1))
                .map(|_| {
                    let depth = self.rng.gen_range(0..=1.min(self.sig.max_depth));
                    self.term(depth, true)
                })
                .collect();
            for l in &side {
                if self.rng.gen_ratio(5, 6) {
                    let mut args: Vec<GenTerm> = l.args.iter().map(|a| self.instantiate(a, &sub)).collect();
                    if self.sig.predicates[l.pred].0 == "=" && self.rng.gen_bool(0.5) {
                        args.reverse();
                    }
                    main.push(GenLiteral {
                        positive: l.positive,
                        pred: l.pred,
                        args,
                    });
                }
            }
            if !main.is_empty() && self.rng.gen_bool(0.5) {
                let at = self.rng.gen_range(0..main.len());
                main[at].positive = !main[at].positive;
            }
            let extra = self.rng.gen_range(0..=self.max_main.saturating_sub(main.len()).min(2));
            main.extend((0..extra).map(|_| self.literal(true)));
            main.shuffle(&mut self.rng);
            main.truncate(self.max_main.max(1));
            if main.is_empty() {
                main.push(self.literal(true));
            }
        }
        (self.render(&side, 'X'), self.render(&main, 'Y'))
    }

    /// Next pair of side and main premise text. Both parse to clauses
    /// (tautologies are skipped).
    pub fn next_pair(&mut self) -> (String, String) {
        loop {
            let (s, m) = self.candidate();
            let ok = parse_clause(&s, &mut self.scratch).is_ok() && parse_clause(&m, &mut self.scratch).is_ok();
            if ok {
                return (s, m);
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuzzConfig {
    pub seed: u64,
    pub count: usize,
    pub max_side: usize,
    pub max_main: usize,
    pub signature: Signature,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        FuzzConfig {
            seed: 1,
            count: 10_000,
            max_side: 4,
            max_main: 4,
            signature: Signature::standard(),
        }
    }
}

/// One way the engine and the oracle (or the engine and itself) differ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Finding {
    Subsumption { engine: bool, oracle: bool },
    Resolution { encoding: EncodingChoice, engine: bool, oracle: bool },
    EncodingsDisagree,
    UnsoundPrune { resolution: bool },
    PruneOrder,
    BadWitness { resolution: bool },
    Invariant,
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Finding::Subsumption { engine, oracle } => write!(f, "subsumption: engine {engine}, oracle {oracle}"),
            Finding::Resolution { encoding, engine, oracle } => {
                write!(f, "resolution ({encoding:?}): engine {engine}, oracle {oracle}")
            }
            Finding::EncodingsDisagree => f.write_str("direct and indirect encodings disagree"),
            Finding::UnsoundPrune { resolution: false } => f.write_str("subsumption pruned but applicable"),
            Finding::UnsoundPrune { resolution: true } => f.write_str("resolution pruned but applicable"),
            Finding::PruneOrder => f.write_str("predicate set test pruned but multiset test did not"),
            Finding::BadWitness { resolution: false } => f.write_str("subsumption witness fails re-application"),
            Finding::BadWitness { resolution: true } => f.write_str("resolution witness fails re-application"),
            Finding::Invariant => f.write_str("solver binding invariant violated"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Disagreement {
    pub side: String,
    pub main: String,
    pub finding: Finding,
}

/// Outcome of comparing one pair.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PairVerdict {
    pub subsumes: bool,
    pub resolves: bool,
    pub findings: Vec<Finding>,
}

/// Compares the engine with the oracle on one pair. The subsumption check
/// and both resolution encodings are run with solver invariant checks on.
pub struct Checker {
    simplifier: Simplifier,
    headers: HeaderTable,
}

impl Default for Checker {
    fn default() -> Self {
        Self::new()
    }
}

impl Checker {
    pub fn new() -> Self {
        Checker {
            simplifier: Simplifier::new(SimplifyConfig {
                check_invariants: true,
                ..SimplifyConfig::default()
            }),
            headers: HeaderTable::new(),
        }
    }

    pub fn simplifier(&self) -> &Simplifier {
        &self.simplifier
    }

    pub fn check(&mut self, s: &Clause, m: &Clause) -> Result<PairVerdict, OracleError> {
        let oracle_s = oracle_subsumes(s, m)?.is_some();
        let oracle_r = oracle_sr(s, m)?.is_some();
        let mut findings = Vec::new();

        let set = self.headers.prune_subsumption_resolution(s, m);
        let multiset = self.headers.prune_subsumption(s, m);
        if set && !multiset {
            findings.push(Finding::PruneOrder);
        }

        let before = self.simplifier.stats().invariant_failures + self.simplifier.stats().binding_conflicts;
        let mut answers = Vec::new();
        for encoding in [EncodingChoice::Direct, EncodingChoice::Indirect] {
            self.simplifier.config_mut().encoding = encoding;
            let mut st = CheckState::new();
            let sub = self.simplifier.check_subsumption(s, m, &mut st);
            let (f_s, f_sr) = (st.f_s, st.f_sr);
            let res = self.simplifier.check_subsumption_resolution(s, m, &mut st);
            if encoding == EncodingChoice::Direct {
                if sub.is_some() != oracle_s {
                    findings.push(Finding::Subsumption {
                        engine: sub.is_some(),
                        oracle: oracle_s,
                    });
                }
                if let Some(sub) = &sub {
                    if !is_subsumption_witness(sub, s, m) {
                        findings.push(Finding::BadWitness { resolution: false });
                    }
                }
                if f_s && oracle_s {
                    findings.push(Finding::UnsoundPrune { resolution: false });
                }
                if f_sr && oracle_r {
                    findings.push(Finding::UnsoundPrune { resolution: true });
                }
            }
            if res.is_some() != oracle_r {
                findings.push(Finding::Resolution {
                    encoding,
                    engine: res.is_some(),
                    oracle: oracle_r,
                });
            }
            if let Some(r) = &res {
                if !is_resolution_witness(&r.sub, r.literal, s, m) || r.conclusion != m.without(r.literal) {
                    findings.push(Finding::BadWitness { resolution: true });
                }
            }
            answers.push(res.is_some());
        }
        if answers[0] != answers[1] {
            findings.push(Finding::EncodingsDisagree);
        }
        let after = self.simplifier.stats().invariant_failures + self.simplifier.stats().binding_conflicts;
        if after != before {
            findings.push(Finding::Invariant);
        }
        Ok(PairVerdict {
            subsumes: oracle_s,
            resolves: oracle_r,
            findings,
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FuzzReport {
    pub pairs: usize,
    pub subsumption_positives: usize,
    pub resolution_positives: usize,
    pub disagreements: Vec<Disagreement>,
}

impl FuzzReport {
    /// The disagreement with the shortest clause text.
    pub fn minimal(&self) -> Option<&Disagreement> {
        self.disagreements.iter().min_by_key(|d| (d.side.len() + d.main.len(), d.side.clone(), d.main.clone()))
    }
}

impl fmt::Display for FuzzReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "pairs: {}", self.pairs)?;
        writeln!(f, "subsumption positives: {}", self.subsumption_positives)?;
        writeln!(f, "resolution positives: {}", self.resolution_positives)?;
        writeln!(f, "disagreements: {}", self.disagreements.len())?;
        if let Some(d) = self.minimal() {
            writeln!(f, "minimal: {} ; {}", d.side, d.main)?;
            writeln!(f, "  {}", d.finding)?;
        }
        Ok(())
    }
}

/// Generates `config.count` pairs and compares engine and oracle on each.
pub fn fuzz(config: &FuzzConfig) -> Result<FuzzReport, OracleError> {
    let mut generator = PairGenerator::new(config.seed, config.signature.clone(), config.max_side, config.max_main);
    let mut checker = Checker::new();
    let mut report = FuzzReport::default();
    for _ in 0..config.count {
        let (st, mt) = generator.next_pair();
        let mut symbols = SymbolTable::new();
        let s = parse_clause(&st, &mut symbols).expect("generated clauses parse");
        let m = parse_clause(&mt, &mut symbols).expect("generated clauses parse");
        let verdict = checker.check(&s, &m)?;
        report.pairs += 1;
        report.subsumption_positives += verdict.subsumes as usize;
        report.resolution_positives += verdict.resolves as usize;
        for finding in verdict.findings {
            report.disagreements.push(Disagreement {
                side: st.clone(),
                main: mt.clone(),
                finding,
            });
        }
    }
    Ok(report)
}

/// Dense matching instances: `size` side literals `p(Xi,Xj)` with `i ≠ j`
/// and `size` ground main literals over three constants. Every side
/// literal has at least two main literals of its polarity, and matches
/// each of them.
pub fn dense_pair(rng: &mut ChaCha8Rng, size: usize) -> (String, String) {
    let constants = ["a", "b", "c"];
    assert!((2..=9).contains(&size), "sizes run from 2 to the nine ground atoms");
    let vars = size / 2 + 2;
    loop {
        let mut side = std::collections::HashSet::new();
        while side.len() < size {
            let x = rng.gen_range(0..vars);
            let y = (x + rng.gen_range(1..vars)) % vars;
            let neg = rng.gen_ratio(1, 4);
            if !side.contains(&(x, y, !neg)) {
                side.insert((x, y, neg));
            }
        }
        let mut main = std::collections::HashSet::new();
        while main.len() < size {
            let (a, b) = (rng.gen_range(0..3), rng.gen_range(0..3));
            let neg = rng.gen_ratio(1, 4);
            if !main.contains(&(a, b, !neg)) {
                main.insert((a, b, neg));
            }
        }
        let per_polarity = |neg: bool| main.iter().filter(|m| m.2 == neg).count();
        if side.iter().any(|s| per_polarity(s.2) < 2) {
            continue;
        }
        let mut side: Vec<_> = side.into_iter().collect();
        let mut main: Vec<_> = main.into_iter().collect();
        side.sort_unstable();
        main.sort_unstable();
        side.shuffle(rng);
        main.shuffle(rng);
        let neg = |n: bool| if n { "~" } else { "" };
        let s: Vec<String> = side.iter().map(|&(x, y, n)| format!("{}p(X{x},X{y})", neg(n))).collect();
        let m: Vec<String> = main
            .iter()
            .map(|&(a, b, n)| format!("{}p({},{})", neg(n), constants[a], constants[b]))
            .collect();
        return (s.join(" | "), m.join(" | "));
    }
}
