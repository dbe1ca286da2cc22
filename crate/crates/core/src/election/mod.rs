//! Approval elections, committees and swaps, plus exact PAV scoring.
//!
//! Voters with identical approval sets may be stored once as a weighted
//! ballot class; every score is linear in the weights so nothing changes.

mod epsilon;
mod score;
mod validate;

pub use epsilon::Epsilon;
pub use score::{harmonic, lcm_range, pav_score, pav_score_of, SatisfactionState, ScaledDelta};
pub use validate::{validate_sequence, validate_swaps, SequenceReport, StepRecord};

use std::collections::HashSet;
use std::fmt;

use num_rational::BigRational;

use crate::error::{Error, Result};

/// Exact arbitrary-precision fraction, always in lowest terms.
pub type Rational = BigRational;

/// Renders a rational as `num/den`, including integers (`112/1`).
pub fn fraction_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Lossy conversion used only for `_float` reporting columns.
pub fn approx_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
pub(crate) fn int(v: i64) -> Rational {
    Rational::from_integer(num_bigint::BigInt::from(v))
}

/// One group of voters sharing an approval set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BallotClass {
    /// Candidate indices, strictly increasing.
    pub approvals: Vec<usize>,
    pub weight: u64,
}

impl BallotClass {
    pub fn new(mut approvals: Vec<usize>, weight: u64) -> Self {
        approvals.sort_unstable();
        approvals.dedup();
        Self { approvals, weight }
    }

    pub fn approves(&self, c: usize) -> bool {
        self.approvals.binary_search(&c).is_ok()
    }
}

/// Candidates and ballots without a committee size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Profile {
    pub candidate_names: Vec<String>,
    pub ballots: Vec<BallotClass>,
}

impl Profile {
    pub fn new(candidate_names: Vec<String>, ballots: Vec<BallotClass>) -> Result<Self> {
        let m = candidate_names.len();
        if m == 0 {
            return Err(Error::InvalidElection("no candidates".into()));
        }
        let mut seen = HashSet::with_capacity(m);
        for name in &candidate_names {
            if !seen.insert(name.as_str()) {
                return Err(Error::InvalidElection(format!(
                    "duplicate candidate name {name:?}"
                )));
            }
        }
        if ballots.is_empty() {
            return Err(Error::InvalidElection("no ballots".into()));
        }
        for (i, b) in ballots.iter().enumerate() {
            if b.weight == 0 {
                return Err(Error::InvalidElection(format!(
                    "ballot class {i} has weight 0"
                )));
            }
            if b.approvals.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidElection(format!(
                    "ballot class {i} approvals not strictly increasing"
                )));
            }
            if let Some(&c) = b.approvals.iter().find(|&&c| c >= m) {
                return Err(Error::InvalidElection(format!(
                    "ballot class {i} approves candidate {c} outside [0, {m})"
                )));
            }
        }
        Ok(Self {
            candidate_names,
            ballots,
        })
    }

    /// Candidates named `c0`, `c1`, ...
    pub fn with_default_names(m: usize, ballots: Vec<BallotClass>) -> Result<Self> {
        Self::new((0..m).map(|i| format!("c{i}")).collect(), ballots)
    }

    pub fn candidate_count(&self) -> usize {
        self.candidate_names.len()
    }

    pub fn voter_count(&self) -> u64 {
        self.ballots.iter().map(|b| b.weight).sum()
    }

    /// Total approval weight per candidate.
    pub fn approval_counts(&self) -> Vec<u64> {
        let mut counts = vec![0u64; self.candidate_count()];
        for b in &self.ballots {
            for &c in &b.approvals {
                counts[c] += b.weight;
            }
        }
        counts
    }

    pub fn with_committee_size(self, k: usize) -> Result<Election> {
        Election::from_profile(self, k)
    }
}

/// An approval election: a profile plus a target committee size `k`.
#[derive(Debug, Clone)]
pub struct Election {
    profile: Profile,
    committee_size: usize,
    /// For each candidate, the sorted indices of ballot classes approving it.
    approvers: Vec<Vec<u32>>,
}

impl PartialEq for Election {
    fn eq(&self, other: &Self) -> bool {
        self.profile == other.profile && self.committee_size == other.committee_size
    }
}

impl Eq for Election {}

impl Election {
    pub fn new(candidate_names: Vec<String>, ballots: Vec<BallotClass>, k: usize) -> Result<Self> {
        Self::from_profile(Profile::new(candidate_names, ballots)?, k)
    }

    pub fn from_profile(profile: Profile, k: usize) -> Result<Self> {
        let m = profile.candidate_count();
        if k == 0 || k > m {
            return Err(Error::InvalidElection(format!(
                "committee size {k} outside [1, {m}]"
            )));
        }
        if profile.ballots.len() > u32::MAX as usize {
            return Err(Error::InvalidElection("too many ballot classes".into()));
        }
        let mut approvers = vec![Vec::new(); m];
        for (i, b) in profile.ballots.iter().enumerate() {
            for &c in &b.approvals {
                approvers[c].push(i as u32);
            }
        }
        Ok(Self {
            profile,
            committee_size: k,
            approvers,
        })
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    pub fn into_profile(self) -> Profile {
        self.profile
    }

    pub fn candidate_count(&self) -> usize {
        self.profile.candidate_count()
    }

    pub fn candidate_names(&self) -> &[String] {
        &self.profile.candidate_names
    }

    pub fn ballots(&self) -> &[BallotClass] {
        &self.profile.ballots
    }

    pub fn committee_size(&self) -> usize {
        self.committee_size
    }

    pub fn voter_count(&self) -> u64 {
        self.profile.voter_count()
    }

    pub fn approvers(&self, candidate: usize) -> &[u32] {
        &self.approvers[candidate]
    }

    /// Same profile with a different committee size.
    pub fn resized(&self, k: usize) -> Result<Self> {
        Self::from_profile(self.profile.clone(), k)
    }

    /// Expands weighted classes into unit-weight ballots.
    pub fn expanded(&self) -> Self {
        let ballots = self
            .ballots()
            .iter()
            .flat_map(|b| (0..b.weight).map(move |_| BallotClass::new(b.approvals.clone(), 1)))
            .collect();
        Self::new(
            self.candidate_names().to_vec(),
            ballots,
            self.committee_size,
        )
        .expect("expansion preserves validity")
    }
}

/// A set of exactly `k` distinct candidates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Committee {
    members: Vec<usize>,
}

impl Committee {
    pub fn new(election: &Election, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut members: Vec<usize> = members.into_iter().collect();
        members.sort_unstable();
        let len = members.len();
        members.dedup();
        if members.len() != len {
            return Err(Error::InvalidCommittee("duplicate member".into()));
        }
        let k = election.committee_size();
        if members.len() != k {
            return Err(Error::InvalidCommittee(format!(
                "size {} but committee size is {k}",
                members.len()
            )));
        }
        let m = election.candidate_count();
        if let Some(&c) = members.iter().find(|&&c| c >= m) {
            return Err(Error::InvalidCommittee(format!(
                "candidate {c} outside [0, {m})"
            )));
        }
        Ok(Self { members })
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, c: usize) -> bool {
        self.members.binary_search(&c).is_ok()
    }

    /// `(W ∪ {add}) \ {out}` without validation.
    pub fn swapped(&self, swap: Swap) -> Self {
        let mut members: Vec<usize> = self
            .members
            .iter()
            .copied()
            .filter(|&c| c != swap.out)
            .collect();
        let pos = members.binary_search(&swap.add).unwrap_or_else(|p| p);
        members.insert(pos, swap.add);
        Self { members }
    }
}

impl fmt::Display for Committee {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, c) in self.members.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "}}")
    }
}

/// Replace committee member `out` with non-member `add`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Swap {
    pub out: usize,
    pub add: usize,
}

impl Swap {
    pub fn new(out: usize, add: usize) -> Self {
        Self { out, add }
    }

    pub fn inverse(self) -> Self {
        Self {
            out: self.add,
            add: self.out,
        }
    }
}

impl fmt::Display for Swap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}->{})", self.out, self.add)
    }
}

/// An ordered list of swaps. Validity is relative to a start committee.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SwapSequence {
    swaps: Vec<Swap>,
}

impl SwapSequence {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, swap: Swap) {
        self.swaps.push(swap);
    }

    pub fn extend_from(&mut self, other: &SwapSequence) {
        self.swaps.extend_from_slice(&other.swaps);
    }

    /// `self ⊕ other`.
    pub fn concat(&self, other: &SwapSequence) -> Self {
        let mut out = self.clone();
        out.extend_from(other);
        out
    }

    /// Reverse order with each swap flipped.
    pub fn inverse(&self) -> Self {
        Self {
            swaps: self.swaps.iter().rev().map(|s| s.inverse()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.swaps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.swaps.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Swap> + '_ {
        self.swaps.iter().copied()
    }

    pub fn as_slice(&self) -> &[Swap] {
        &self.swaps
    }
}

impl From<Vec<Swap>> for SwapSequence {
    fn from(swaps: Vec<Swap>) -> Self {
        Self { swaps }
    }
}

impl FromIterator<Swap> for SwapSequence {
    fn from_iter<I: IntoIterator<Item = Swap>>(iter: I) -> Self {
        Self {
            swaps: iter.into_iter().collect(),
        }
    }
}

impl<'a> IntoIterator for &'a SwapSequence {
    type Item = Swap;
    type IntoIter = std::iter::Copied<std::slice::Iter<'a, Swap>>;

    fn into_iter(self) -> Self::IntoIter {
        self.swaps.iter().copied()
    }
}
