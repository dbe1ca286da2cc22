//! Adversarial instance families and their swap sequences.
//!
//! * [`warmup`]: a quadratic-length sequence of `n/k²`-good swaps.
//! * [`atoms`]: the building blocks `F(j,k)`, `E(j,k)` and the chained `E^t(j,k)`.
//! * [`layered`]: columns of chained blocks whose recursive sequence has
//!   length `t(t(...)+1)`, certified per instance.
//! * [`hardened`]: the layered instance plus heavy blocker groups so that
//!   lexicographic better response follows the shortcut sequence `Z`.

pub mod atoms;
pub mod hardened;
pub mod layered;
pub mod warmup;

use std::collections::BTreeMap;

use indexmap::IndexMap;
use num_bigint::BigInt;
use num_traits::One;

use crate::election::{BallotClass, Election, Rational};
use crate::error::{Error, Result};

pub use atoms::{e_election, e_t_election, f_election};
pub use hardened::{
    build_z_sequence, certify_gamma, hardened_election, hardened_initial_committee, z_length,
    HardenedParams,
};
pub use layered::{
    build_x_sequence, for_each_x_swap, gain_holds, initial_committee as layered_initial_committee,
    layered_election, x_length, DummyReading, GainLevel, GainReport, LayeredParams,
};
pub use warmup::{warmup_election, warmup_initial_committee, warmup_sequence};

/// `δ(j,k) = j! / ∏_{i=0}^{j} (k − i)`, defined for `1 ≤ j < k`.
pub fn delta_formula(j: usize, k: usize) -> Result<Rational> {
    if j == 0 || j >= k {
        return Err(Error::UndefinedDelta { j, k });
    }
    let mut num = BigInt::one();
    for i in 2..=j {
        num *= BigInt::from(i);
    }
    let mut den = BigInt::one();
    for i in 0..=j {
        den *= BigInt::from(k - i);
    }
    Ok(Rational::new(num, den))
}

/// An election together with the names of its construction roles.
#[derive(Debug, Clone)]
pub struct LabeledElection {
    pub election: Election,
    /// Role name (`"c[2,5]"`, `"x"`, `"d3"`, ...) to candidate index.
    pub candidate_labels: BTreeMap<String, usize>,
    /// Group name (`"N2"`, `"S4"`, `"V1"`, ...) to ballot-class indices.
    pub voter_groups: BTreeMap<String, Vec<usize>>,
    /// The counterpart bijection on ballot classes, when the family has one.
    pub counterpart: Option<Vec<usize>>,
}

impl LabeledElection {
    /// Candidate index of a role; panics on unknown roles.
    pub fn candidate(&self, label: &str) -> usize {
        match self.candidate_labels.get(label) {
            Some(&c) => c,
            None => panic!("unknown candidate label {label:?}"),
        }
    }

    pub fn group(&self, name: &str) -> &[usize] {
        self.voter_groups
            .get(name)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// Label maps total, groups partition the ballot classes and the
    /// counterpart map is a fixpoint-free involution.
    pub fn self_check(&self) -> Result<()> {
        let m = self.election.candidate_count();
        let mut seen = vec![false; m];
        for (label, &c) in &self.candidate_labels {
            if c >= m || std::mem::replace(&mut seen[c], true) {
                return Err(Error::InvalidElection(format!(
                    "label {label} maps to bad index {c}"
                )));
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidElection("unlabelled candidate".into()));
        }
        let classes = self.election.ballots().len();
        let mut owner = vec![false; classes];
        for (name, members) in &self.voter_groups {
            for &i in members {
                if i >= classes || std::mem::replace(&mut owner[i], true) {
                    return Err(Error::InvalidElection(format!(
                        "group {name} overlaps or overflows at {i}"
                    )));
                }
            }
        }
        if owner.iter().any(|o| !o) {
            return Err(Error::InvalidElection(
                "ballot class outside every group".into(),
            ));
        }
        if let Some(s) = &self.counterpart {
            if s.len() != classes {
                return Err(Error::InvalidElection(
                    "counterpart map has wrong length".into(),
                ));
            }
            for (v, &sv) in s.iter().enumerate() {
                if sv >= classes || sv == v || s[sv] != v {
                    return Err(Error::InvalidElection(format!(
                        "counterpart not an involution at {v}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Accumulates labelled candidates and grouped ballots.
#[derive(Debug, Default)]
pub(crate) struct Builder {
    names: Vec<String>,
    labels: BTreeMap<String, usize>,
    ballots: Vec<BallotClass>,
    groups: BTreeMap<String, Vec<usize>>,
}

impl Builder {
    pub fn candidate(&mut self, label: impl Into<String>) -> usize {
        let label = label.into();
        let idx = self.names.len();
        self.names.push(label.clone());
        self.labels.insert(label, idx);
        idx
    }

    pub fn ballot(&mut self, group: &str, approvals: Vec<usize>, weight: u64) -> usize {
        let idx = self.ballots.len();
        self.ballots.push(BallotClass::new(approvals, weight));
        self.groups.entry(group.to_string()).or_default().push(idx);
        idx
    }

    /// Adds a group's ballots, merging identical approval sets into one
    /// weighted class (first-occurrence order).
    pub fn merged_group(&mut self, group: &str, ballots: impl IntoIterator<Item = Vec<usize>>) {
        let mut merged: IndexMap<Vec<usize>, u64> = IndexMap::new();
        for mut b in ballots {
            b.sort_unstable();
            b.dedup();
            *merged.entry(b).or_insert(0) += 1;
        }
        for (approvals, weight) in merged {
            self.ballot(group, approvals, weight);
        }
    }

    pub fn finish(self, k: usize, counterpart: Option<Vec<usize>>) -> Result<LabeledElection> {
        let election = Election::new(self.names, self.ballots, k)?;
        let labeled = LabeledElection {
            election,
            candidate_labels: self.labels,
            voter_groups: self.groups,
            counterpart,
        };
        labeled.self_check()?;
        Ok(labeled)
    }
}
