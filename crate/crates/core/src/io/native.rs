//! The native text format.
//!
//! ```text
//! pavls 1 <m> <k>
//! cand <index> <name>
//! ballot <weight>: <candidate indices, strictly increasing>
//! ```
//!
//! One `cand` line per candidate index in `0..m` (any order) and one
//! `ballot` line per class, kept in file order. Blank lines and lines
//! starting with `#` are ignored. Names run to the end of the line and are
//! trimmed.

use std::fmt::Write;

use super::{parse_err, parse_index};
use crate::election::{BallotClass, Election};
use crate::error::Result;

pub fn serialize_native(election: &Election) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "pavls 1 {} {}",
        election.candidate_count(),
        election.committee_size()
    )
    .unwrap();
    for (i, name) in election.candidate_names().iter().enumerate() {
        writeln!(out, "cand {i} {name}").unwrap();
    }
    for b in election.ballots() {
        write!(out, "ballot {}:", b.weight).unwrap();
        for c in &b.approvals {
            write!(out, " {c}").unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn parse_native(text: &str) -> Result<Election> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let Some((hline, header)) = lines.next() else {
        return parse_err(1, "empty file");
    };
    let fields: Vec<&str> = header.split_whitespace().collect();
    let (m, k) = match fields.as_slice() {
        ["pavls", "1", m, k] => (parse_index(hline, m)?, parse_index(hline, k)?),
        ["pavls", v, ..] if *v != "1" => {
            return parse_err(hline, format!("unsupported version {v}"))
        }
        _ => return parse_err(hline, "expected header `pavls 1 <m> <k>`"),
    };
    if m == 0 {
        return parse_err(hline, "m must be positive");
    }

    let mut names: Vec<Option<String>> = vec![None; m];
    let mut ballots = Vec::new();
    let mut last_line = hline;
    for (no, line) in lines {
        last_line = no;
        let (keyword, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match keyword {
            "cand" => {
                let (idx, name) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
                let idx = parse_index(no, idx)?;
                let name = name.trim();
                if idx >= m {
                    return parse_err(no, format!("candidate index {idx} outside [0, {m})"));
                }
                if name.is_empty() {
                    return parse_err(no, "candidate name missing");
                }
                if names[idx].is_some() {
                    return parse_err(no, format!("duplicate candidate index {idx}"));
                }
                names[idx] = Some(name.to_string());
            }
            "ballot" => {
                let Some((w, list)) = rest.split_once(':') else {
                    return parse_err(no, "expected `ballot <weight>: <indices>`");
                };
                let weight: u64 = w
                    .trim()
                    .parse()
                    .or_else(|_| parse_err(no, format!("bad weight {:?}", w.trim())))?;
                if weight == 0 {
                    return parse_err(no, "weight must be positive");
                }
                let mut approvals = Vec::new();
                for tok in list.split_whitespace() {
                    let c = parse_index(no, tok)?;
                    if c >= m {
                        return parse_err(no, format!("ballot entry {c} outside [0, {m})"));
                    }
                    if approvals.last().is_some_and(|&p| p >= c) {
                        return parse_err(no, "ballot entries must be strictly increasing");
                    }
                    approvals.push(c);
                }
                ballots.push(BallotClass { approvals, weight });
            }
            other => return parse_err(no, format!("unknown record {other:?}")),
        }
    }
    if let Some(missing) = names.iter().position(Option::is_none) {
        return parse_err(last_line, format!("candidate {missing} is never declared"));
    }
    let names: Vec<String> = names.into_iter().map(Option::unwrap).collect();
    Election::new(names, ballots, k).or_else(|e| parse_err(last_line, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::election::fixtures::blocs_and_singletons;
    use crate::error::Error;

    #[test]
    fn round_trip() {
        let e = blocs_and_singletons();
        let text = serialize_native(&e);
        let back = parse_native(&text).unwrap();
        assert_eq!(back, e);
        assert_eq!(serialize_native(&back), text);
    }

    #[test]
    fn small_file() {
        let text = "pavls 1 5 3\n# comment\ncand 0 a\ncand 1 b\ncand 2 c\ncand 3 d\ncand 4 e e\n\nballot 2: 0 1\nballot 1:\n";
        let e = parse_native(text).unwrap();
        assert_eq!(
            (e.candidate_count(), e.committee_size(), e.ballots().len()),
            (5, 3, 2)
        );
        assert_eq!(e.candidate_names()[4], "e e");
        assert!(e.ballots()[1].approvals.is_empty());
    }

    fn line_of(text: &str) -> usize {
        match parse_native(text) {
            Err(Error::Parse { line, .. }) => line,
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn errors_name_the_line() {
        assert_eq!(line_of("pavls 2 1 1\n"), 1);
        assert_eq!(line_of("pavls 1 2 1\ncand 0 a\ncand 0 b\n"), 3);
        assert_eq!(
            line_of("pavls 1 2 1\ncand 0 a\ncand 1 b\nballot 1: 0 2\n"),
            4
        );
        assert_eq!(
            line_of("pavls 1 2 1\ncand 0 a\ncand 1 b\nballot 1: 1 0\n"),
            4
        );
        assert_eq!(line_of("pavls 1 2 1\ncand 0 a\ncand 1 b\nballot 0: 1\n"), 4);
        assert_eq!(line_of("pavls 1 2 1\ncand 0 a\nballot 1: 1\n"), 3);
        assert_eq!(line_of("pavls 1 2 3\ncand 0 a\ncand 1 b\nballot 1: 1\n"), 4);
        assert_eq!(line_of(""), 1);
    }
}
