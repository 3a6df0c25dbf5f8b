//! Check logs: reading, replaying and summarizing.
//!
//! A log holds one check per line, `side ; main [; tag]`, where the tag is
//! one of `S+`, `S-`, `SR+`, `SR-` and states the expected answer for
//! subsumption or subsumption resolution. `#` starts a comment. Replaying
//! runs every record through the simplification checks and produces one
//! [`StatsRow`] per record.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use crate::encoder::EncodingKind;
use crate::error::LogError;
use crate::fuzz::Checker;
use crate::oracle::{is_resolution_witness, is_subsumption_witness};
use crate::parser::parse_clause;
use crate::simplify::{CheckState, Simplifier, SimplifyConfig, SimplifyStats, Stage};
use crate::symbol::SymbolTable;

/// Expected answer attached to a record.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Expected {
    Subsumed,
    NotSubsumed,
    Resolved,
    NotResolved,
}

impl Expected {
    pub fn parse(tag: &str) -> Option<Expected> {
        match tag {
            "S+" => Some(Expected::Subsumed),
            "S-" | "S−" => Some(Expected::NotSubsumed),
            "SR+" => Some(Expected::Resolved),
            "SR-" | "SR−" => Some(Expected::NotResolved),
            _ => None,
        }
    }
}

impl fmt::Display for Expected {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Expected::Subsumed => "S+",
            Expected::NotSubsumed => "S-",
            Expected::Resolved => "SR+",
            Expected::NotResolved => "SR-",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckRecord {
    /// 1-based line in the log.
    pub line: usize,
    pub side: String,
    pub main: String,
    pub expected: Option<Expected>,
}

/// Splits a log into records. Malformed lines are reported and skipped.
pub fn parse_log(text: &str) -> (Vec<CheckRecord>, Vec<LogError>) {
    let mut records = Vec::new();
    let mut errors = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split(';').map(str::trim).collect();
        let expected = match fields.len() {
            2 => None,
            3 => match Expected::parse(fields[2]) {
                Some(e) => Some(e),
                None => {
                    errors.push(LogError::Format {
                        line,
                        message: format!("unknown tag `{}`", fields[2]),
                    });
                    continue;
                }
            },
            n => {
                errors.push(LogError::Format {
                    line,
                    message: format!("expected 2 or 3 fields separated by `;`, found {n}"),
                });
                continue;
            }
        };
        records.push(CheckRecord {
            line,
            side: fields[0].to_string(),
            main: fields[1].to_string(),
            expected,
        });
    }
    (records, errors)
}

/// Final answer for one record.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RecordOutcome {
    Subsumed,
    Resolved,
    /// Neither rule applies.
    Neither,
    /// The tick budget ran out before a rule was found.
    Cutoff,
}

impl RecordOutcome {
    pub fn is_positive(self) -> bool {
        matches!(self, RecordOutcome::Subsumed | RecordOutcome::Resolved)
    }
}

impl fmt::Display for RecordOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RecordOutcome::Subsumed => "subsumed",
            RecordOutcome::Resolved => "resolved",
            RecordOutcome::Neither => "none",
            RecordOutcome::Cutoff => "cutoff",
        })
    }
}

/// One CSV row. `ns` is wall time and only informative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StatsRow {
    pub id: usize,
    pub stage: Stage,
    pub encoding: Option<EncodingKind>,
    pub ticks: u64,
    pub outcome: RecordOutcome,
    pub ns: u128,
}

pub const CSV_HEADER: &str = "id,stage,encoding,ticks,outcome,ns";

impl StatsRow {
    pub fn csv(&self) -> String {
        let encoding = self.encoding.map_or("-".to_string(), |e| e.to_string());
        format!(
            "{},{},{},{},{},{}",
            self.id, self.stage, encoding, self.ticks, self.outcome, self.ns
        )
    }
}

/// Writes the header and all rows.
pub fn to_csv(rows: &[StatsRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.csv());
        out.push('\n');
    }
    out
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ReplayConfig {
    pub simplify: SimplifyConfig,
    /// Share the match set between the two checks. When off, subsumption
    /// resolution builds its own.
    pub optimized: bool,
    /// Compare every record with the brute-force oracle.
    pub oracle_verify: bool,
}

/// A record whose answer differs from its tag or from the oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub line: usize,
    pub message: String,
}

#[derive(Clone, Debug, Default)]
pub struct ReplaySummary {
    pub rows: Vec<StatsRow>,
    pub errors: Vec<LogError>,
    pub mismatches: Vec<Mismatch>,
    pub stats: SimplifyStats,
}

impl ReplaySummary {
    pub fn total_ticks(&self) -> u64 {
        self.rows.iter().map(|r| r.ticks).sum()
    }

    pub fn count(&self, outcome: RecordOutcome) -> usize {
        self.rows.iter().filter(|r| r.outcome == outcome).count()
    }

    /// Success rates of records that reached the solver, by tick bucket.
    pub fn histogram(&self) -> Histogram {
        let mut h = Histogram::default();
        for r in self.rows.iter().filter(|r| r.stage == Stage::Solver) {
            h.add(r.ticks, r.outcome.is_positive());
        }
        h
    }
}

impl fmt::Display for ReplaySummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "records: {}", self.rows.len())?;
        for o in [
            RecordOutcome::Subsumed,
            RecordOutcome::Resolved,
            RecordOutcome::Neither,
            RecordOutcome::Cutoff,
        ] {
            writeln!(f, "{o}: {}", self.count(o))?;
        }
        writeln!(f, "total ticks: {}", self.total_ticks())?;
        writeln!(f, "match sets built: {}", self.stats.match_set_builds)?;
        writeln!(f, "skipped lines: {}", self.errors.len())?;
        writeln!(f, "mismatches: {}", self.mismatches.len())
    }
}

/// Rounds down to two significant digits.
pub fn bucket(ticks: u64) -> u64 {
    let mut scale = 1;
    while ticks / scale >= 100 {
        scale *= 10;
    }
    ticks / scale * scale
}

/// Instances and positives per tick bucket.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Histogram {
    buckets: BTreeMap<u64, (u64, u64)>,
}

impl Histogram {
    pub fn add(&mut self, ticks: u64, positive: bool) {
        let e = self.buckets.entry(bucket(ticks)).or_default();
        e.0 += 1;
        e.1 += positive as u64;
    }

    /// `(bucket, instances, positives)` in increasing bucket order.
    pub fn rows(&self) -> impl Iterator<Item = (u64, u64, u64)> + '_ {
        self.buckets.iter().map(|(&b, &(n, p))| (b, n, p))
    }

    pub fn csv(&self) -> String {
        let mut out = String::from("bucket,instances,positive,rate\n");
        for (b, n, p) in self.rows() {
            out.push_str(&format!("{b},{n},{p},{:.4}\n", p as f64 / n as f64));
        }
        out
    }
}

/// Runs every record. Records whose clauses do not parse are reported in
/// `errors` and produce no row; row ids are record positions in `records`.
pub fn replay(records: &[CheckRecord], config: &ReplayConfig) -> ReplaySummary {
    let mut simplifier = Simplifier::new(config.simplify.clone());
    let mut checker = config.oracle_verify.then(Checker::new);
    let mut summary = ReplaySummary::default();
    for (id, rec) in records.iter().enumerate() {
        let mut symbols = SymbolTable::new();
        let parsed = parse_clause(&rec.side, &mut symbols).and_then(|s| Ok((s, parse_clause(&rec.main, &mut symbols)?)));
        let (s, m) = match parsed {
            Ok(p) => p,
            Err(source) => {
                summary.errors.push(LogError::Clause { line: rec.line, source });
                continue;
            }
        };
        let start = Instant::now();
        let mut st = if config.optimized {
            CheckState::new()
        } else {
            CheckState::subsumption_only()
        };
        let sub = simplifier.check_subsumption(&s, &m, &mut st);
        let mut resolution = None;
        if sub.is_none() {
            resolution = if config.optimized {
                simplifier.check_subsumption_resolution(&s, &m, &mut st)
            } else {
                simplifier.check_subsumption_resolution_alone(&s, &m, &mut st)
            };
        }
        let ns = start.elapsed().as_nanos();
        let outcome = if sub.is_some() {
            RecordOutcome::Subsumed
        } else if resolution.is_some() {
            RecordOutcome::Resolved
        } else if st.cutoff_hit {
            RecordOutcome::Cutoff
        } else {
            RecordOutcome::Neither
        };
        summary.rows.push(StatsRow {
            id,
            stage: st.stage,
            encoding: st.encoding,
            ticks: st.ticks,
            outcome,
            ns,
        });

        let mut mismatch = |message: String| {
            summary.mismatches.push(Mismatch {
                line: rec.line,
                message,
            })
        };
        if let Some(sub) = &sub {
            if !is_subsumption_witness(sub, &s, &m) {
                mismatch("subsumption witness fails re-application".into());
            }
        }
        if let Some(r) = &resolution {
            if !is_resolution_witness(&r.sub, r.literal, &s, &m) {
                mismatch("resolution witness fails re-application".into());
            }
        }
        let met = match rec.expected {
            None => true,
            Some(Expected::Subsumed) => sub.is_some(),
            Some(Expected::NotSubsumed) => sub.is_none() && !st.cutoff_hit,
            Some(Expected::Resolved) => resolution.is_some(),
            Some(Expected::NotResolved) => sub.is_none() && resolution.is_none() && !st.cutoff_hit,
        };
        if !met {
            mismatch(format!("expected {}, got {}", rec.expected.unwrap(), outcome));
        }
        if let Some(checker) = checker.as_mut() {
            match checker.check(&s, &m) {
                Ok(v) => {
                    for finding in v.findings {
                        mismatch(finding.to_string());
                    }
                    if !st.cutoff_hit && sub.is_some() != v.subsumes {
                        mismatch(format!("subsumption: replay {}, oracle {}", sub.is_some(), v.subsumes));
                    }
                    if !st.cutoff_hit && sub.is_none() && resolution.is_some() != v.resolves {
                        mismatch(format!("resolution: replay {}, oracle {}", resolution.is_some(), v.resolves));
                    }
                }
                Err(e) => mismatch(e.to_string()),
            }
        }
    }
    summary.stats = simplifier.stats().clone();
    summary
}
