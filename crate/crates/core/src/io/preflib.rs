//! PrefLib categorical (`.cat`) files.
//!
//! Data lines read `<count>: <group>,<group>,…` where a group is `{i,j,…}`,
//! `{}` or a bare alternative number. Alternatives and categories are
//! 1-based in the file; alternatives become 0-based candidates.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use super::{parse_err, parse_index};
use crate::election::{BallotClass, Profile};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreflibData {
    pub profile: Profile,
    /// Category names by 1-based number, from metadata where given.
    pub categories: Vec<String>,
    /// Unknown metadata keys and count mismatches.
    pub warnings: Vec<String>,
}

impl PreflibData {
    /// Sum of `weight · |ballot|`.
    pub fn approval_total(&self) -> u64 {
        self.profile
            .ballots
            .iter()
            .map(|b| b.weight * b.approvals.len() as u64)
            .sum()
    }
}

const KNOWN_KEYS: &[&str] = &[
    "FILE NAME",
    "TITLE",
    "DESCRIPTION",
    "DATA TYPE",
    "MODIFICATION TYPE",
    "RELATES TO",
    "RELATED FILES",
    "PUBLICATION DATE",
    "MODIFICATION DATE",
    "NUMBER ALTERNATIVES",
    "NUMBER VOTERS",
    "NUMBER UNIQUE PREFERENCES",
    "NUMBER UNIQUE ORDERS",
    "NUMBER CATEGORIES",
];

/// `approved` holds 1-based category numbers.
pub fn parse_preflib_categorical(text: &str, approved: &BTreeSet<usize>) -> Result<PreflibData> {
    if approved.is_empty() {
        return Err(Error::InvalidParams("no approved categories".into()));
    }
    let mut meta: BTreeMap<String, (usize, String)> = BTreeMap::new();
    let mut alt_names: BTreeMap<usize, String> = BTreeMap::new();
    let mut cat_names: BTreeMap<usize, String> = BTreeMap::new();
    let mut warnings = Vec::new();
    let mut data: Vec<(usize, &str)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let no = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(body) = line.strip_prefix('#') {
            let Some((key, value)) = body.split_once(':') else {
                continue;
            };
            let (key, value) = (key.trim().to_uppercase(), value.trim().to_string());
            if let Some(n) = key.strip_prefix("ALTERNATIVE NAME ") {
                alt_names.insert(parse_index(no, n.trim())?, value);
            } else if let Some(n) = key.strip_prefix("CATEGORY NAME ") {
                cat_names.insert(parse_index(no, n.trim())?, value);
            } else {
                if !KNOWN_KEYS.contains(&key.as_str()) {
                    warnings.push(format!("line {no}: unknown metadata key {key:?}"));
                }
                meta.insert(key, (no, value));
            }
            continue;
        }
        data.push((no, line));
    }

    let declared = |key: &str| -> Result<Option<usize>> {
        match meta.get(key) {
            Some((no, v)) => parse_index(*no, v).map(Some),
            None => Ok(None),
        }
    };
    let declared_alts = declared("NUMBER ALTERNATIVES")?;
    let declared_cats = declared("NUMBER CATEGORIES")?;

    let mut rows = Vec::with_capacity(data.len());
    for &(no, line) in &data {
        let Some((count, rest)) = line.split_once(':') else {
            return parse_err(no, "expected `<count>: <groups>`");
        };
        let count: u64 = count
            .trim()
            .parse()
            .or_else(|_| parse_err(no, format!("bad count {:?}", count.trim())))?;
        if count == 0 {
            return parse_err(no, "count must be positive");
        }
        rows.push((no, count, split_groups(no, rest)?));
    }

    let cats = declared_cats
        .or_else(|| cat_names.keys().max().copied())
        .or_else(|| rows.iter().map(|r| r.2.len()).max())
        .unwrap_or(0);
    if let Some(&bad) = approved.iter().find(|&&c| c == 0 || c > cats) {
        return Err(Error::InvalidParams(format!(
            "unknown category {bad}; file has {cats}"
        )));
    }
    let max_seen = rows
        .iter()
        .flat_map(|r| r.2.iter().flatten())
        .copied()
        .max()
        .unwrap_or(0);
    let m = declared_alts.unwrap_or(max_seen.max(alt_names.keys().max().copied().unwrap_or(0)));
    if m == 0 {
        return parse_err(1, "no alternatives");
    }

    let mut ballots = Vec::with_capacity(rows.len());
    for (no, count, groups) in rows {
        if groups.len() > cats {
            return parse_err(no, format!("{} groups but {cats} categories", groups.len()));
        }
        let mut approvals = Vec::new();
        for (ci, group) in groups.iter().enumerate() {
            for &a in group {
                if a == 0 || a > m {
                    return parse_err(no, format!("alternative {a} outside [1, {m}]"));
                }
                if approved.contains(&(ci + 1)) {
                    approvals.push(a - 1);
                }
            }
        }
        ballots.push(BallotClass::new(approvals, count));
    }

    let mut used = HashSet::new();
    let names: Vec<String> = (1..=m)
        .map(|a| {
            let base = alt_names
                .get(&a)
                .cloned()
                .unwrap_or_else(|| format!("a{a}"));
            if used.insert(base.clone()) {
                base
            } else {
                let unique = format!("{base} #{a}");
                used.insert(unique.clone());
                unique
            }
        })
        .collect();
    let profile = Profile::new(names, ballots)?;

    if let Some(n) = declared("NUMBER VOTERS")? {
        if n as u64 != profile.voter_count() {
            warnings.push(format!(
                "declared {n} voters, counted {}",
                profile.voter_count()
            ));
        }
    }
    if let Some(n) = declared("NUMBER UNIQUE PREFERENCES")? {
        if n != profile.ballots.len() {
            warnings.push(format!(
                "declared {n} unique preferences, counted {}",
                profile.ballots.len()
            ));
        }
    }
    let categories = (1..=cats)
        .map(|c| {
            cat_names
                .get(&c)
                .cloned()
                .unwrap_or_else(|| format!("category {c}"))
        })
        .collect();
    Ok(PreflibData {
        profile,
        categories,
        warnings,
    })
}

fn split_groups(no: usize, text: &str) -> Result<Vec<Vec<usize>>> {
    let mut groups = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        if let Some(inner) = rest.strip_prefix('{') {
            let Some(end) = inner.find('}') else {
                return parse_err(no, "unclosed `{`");
            };
            let body = inner[..end].trim();
            let group = if body.is_empty() {
                Vec::new()
            } else {
                body.split(',')
                    .map(|t| parse_index(no, t.trim()))
                    .collect::<Result<_>>()?
            };
            groups.push(group);
            rest = inner[end + 1..].trim_start();
        } else {
            let end = rest.find(',').unwrap_or(rest.len());
            groups.push(vec![parse_index(no, rest[..end].trim())?]);
            rest = &rest[end..];
        }
        if let Some(after) = rest.strip_prefix(',') {
            rest = after.trim_start();
            if rest.is_empty() {
                return parse_err(no, "trailing comma");
            }
        } else if !rest.is_empty() {
            return parse_err(no, format!("unexpected text {rest:?}"));
        }
    }
    Ok(groups)
}
