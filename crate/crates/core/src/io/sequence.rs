//! Swap-sequence files, label sidecars and trace tables.
//!
//! ```text
//! pavls-seq 1
//! start <candidate indices>     (optional)
//! swap <out> <in>
//! ```
//!
//! ```text
//! pavls-labels 1
//! label <role> <candidate>
//! group <name> <ballot-class indices>
//! counterpart <class> <class>
//! ```

use std::collections::BTreeMap;
use std::fmt::Write;

use super::table::CsvTable;
use super::{parse_err, parse_index};
use crate::constructions::LabeledElection;
use crate::election::{approx_f64, fraction_string, Election, Swap, SwapSequence};
use crate::error::Result;
use crate::search::RunTrace;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SequenceFile {
    pub start: Option<Vec<usize>>,
    pub swaps: SwapSequence,
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn expect_header<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    magic: &str,
) -> Result<()> {
    match lines.next() {
        Some((_, h)) if h.split_whitespace().eq([magic, "1"]) => Ok(()),
        Some((no, _)) => parse_err(no, format!("expected header `{magic} 1`")),
        None => parse_err(1, "empty file"),
    }
}

fn indices(no: usize, tokens: &[&str]) -> Result<Vec<usize>> {
    tokens.iter().map(|t| parse_index(no, t)).collect()
}

pub fn serialize_sequence(file: &SequenceFile) -> String {
    let mut out = String::from("pavls-seq 1\n");
    if let Some(start) = &file.start {
        out.push_str("start");
        for c in start {
            write!(out, " {c}").unwrap();
        }
        out.push('\n');
    }
    for s in file.swaps.iter() {
        writeln!(out, "swap {} {}", s.out, s.add).unwrap();
    }
    out
}

pub fn parse_sequence(text: &str) -> Result<SequenceFile> {
    let mut lines = content_lines(text);
    expect_header(&mut lines, "pavls-seq")?;
    let mut file = SequenceFile::default();
    for (no, line) in lines {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens.as_slice() {
            ["start", rest @ ..] => {
                if file.start.is_some() || !file.swaps.is_empty() {
                    return parse_err(no, "`start` must appear once, before any swap");
                }
                file.start = Some(indices(no, rest)?);
            }
            ["swap", out, add] => file
                .swaps
                .push(Swap::new(parse_index(no, out)?, parse_index(no, add)?)),
            _ => return parse_err(no, format!("unrecognised line {line:?}")),
        }
    }
    Ok(file)
}

pub fn serialize_labels(le: &LabeledElection) -> String {
    let mut out = String::from("pavls-labels 1\n");
    let mut by_index: Vec<(&usize, &String)> =
        le.candidate_labels.iter().map(|(l, c)| (c, l)).collect();
    by_index.sort();
    for (c, label) in by_index {
        writeln!(out, "label {label} {c}").unwrap();
    }
    for (name, members) in &le.voter_groups {
        write!(out, "group {name}").unwrap();
        for i in members {
            write!(out, " {i}").unwrap();
        }
        out.push('\n');
    }
    if let Some(s) = &le.counterpart {
        for (v, &sv) in s.iter().enumerate() {
            if v < sv {
                writeln!(out, "counterpart {v} {sv}").unwrap();
            }
        }
    }
    out
}

/// Reattaches a label sidecar to its election and runs the structural
/// self-check.
pub fn parse_labels(text: &str, election: Election) -> Result<LabeledElection> {
    let mut labels = BTreeMap::new();
    let mut groups: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    let mut pairs = Vec::new();
    let mut lines = content_lines(text);
    expect_header(&mut lines, "pavls-labels")?;
    let mut last = 1;
    for (no, line) in lines {
        last = no;
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens.as_slice() {
            ["label", role, c] => {
                if labels
                    .insert(role.to_string(), parse_index(no, c)?)
                    .is_some()
                {
                    return parse_err(no, format!("duplicate label {role:?}"));
                }
            }
            ["group", name, rest @ ..] => groups
                .entry(name.to_string())
                .or_default()
                .extend(indices(no, rest)?),
            ["counterpart", a, b] => pairs.push((parse_index(no, a)?, parse_index(no, b)?)),
            _ => return parse_err(no, format!("unrecognised line {line:?}")),
        }
    }
    let counterpart = if pairs.is_empty() {
        None
    } else {
        let n = election.ballots().len();
        let mut s = vec![usize::MAX; n];
        for (a, b) in pairs {
            if a >= n || b >= n {
                return parse_err(last, format!("counterpart ({a}, {b}) out of range"));
            }
            s[a] = b;
            s[b] = a;
        }
        Some(s)
    };
    let le = LabeledElection {
        election,
        candidate_labels: labels,
        voter_groups: groups,
        counterpart,
    };
    le.self_check()
        .or_else(|e| parse_err(last, e.to_string()))?;
    Ok(le)
}

pub const TRACE_HEADERS: [&str; 6] = [
    "step",
    "out",
    "in",
    "delta",
    "delta_float",
    "cumulative_comparisons",
];

pub fn trace_table(trace: &RunTrace) -> CsvTable {
    let mut t = CsvTable::new(TRACE_HEADERS);
    for (i, (s, d)) in trace
        .executed_swaps
        .iter()
        .zip(&trace.step_deltas)
        .enumerate()
    {
        t.rows.push(vec![
            (i + 1).to_string(),
            s.out.to_string(),
            s.add.to_string(),
            fraction_string(d),
            format!("{:.6}", approx_f64(d)),
            trace.cumulative_comparisons[i].to_string(),
        ]);
    }
    t
}
