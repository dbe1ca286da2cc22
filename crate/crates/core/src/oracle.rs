//! Brute-force ground truth. Scores are always recomputed from scratch with
//! [`pav_score_of`], never through the incremental state.

use itertools::Itertools;
use num_traits::Zero;

use crate::constructions::{gain_holds, LayeredParams};
use crate::election::{pav_score_of, Committee, Election, Epsilon, Rational, Swap};
use crate::error::{Error, Result};

pub const DEFAULT_ENUMERATION_CAP: u128 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    pub optimum_score: Rational,
    /// All maximisers, in lexicographic order.
    pub optimal_committees: Vec<Committee>,
    pub enumerated: u128,
}

/// `C(n, r)`, saturating at `u128::MAX`.
pub fn binomial(n: usize, r: usize) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        // acc * (n - i) / (i + 1) stays integral at every step
        match acc.checked_mul((n - i) as u128) {
            Some(v) => acc = v / (i as u128 + 1),
            None => return u128::MAX,
        }
    }
    acc
}

pub fn brute_force_optimum(election: &Election, cap: Option<u128>) -> Result<OracleReport> {
    let (m, k) = (election.candidate_count(), election.committee_size());
    let cap = cap.unwrap_or(DEFAULT_ENUMERATION_CAP);
    let required = binomial(m, k);
    if required > cap {
        return Err(Error::EnumerationCap { required, cap });
    }
    let mut best: Option<Rational> = None;
    let mut winners = Vec::new();
    for members in (0..m).combinations(k) {
        let score = pav_score_of(election, &members);
        match best.as_ref().map(|b| score.cmp(b)) {
            Some(std::cmp::Ordering::Less) => {}
            Some(std::cmp::Ordering::Equal) => winners.push(members),
            _ => {
                best = Some(score);
                winners = vec![members];
            }
        }
    }
    Ok(OracleReport {
        optimum_score: best.unwrap_or_else(Rational::zero),
        optimal_committees: winners
            .into_iter()
            .map(|w| Committee::new(election, w))
            .collect::<Result<_>>()?,
        enumerated: required,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalOptimality {
    pub optimal: bool,
    /// The largest-gain swap (first in `(add, out)` order on ties) when it
    /// reaches `ε`.
    pub witness: Option<(Swap, Rational)>,
    pub scanned: usize,
}

pub fn is_locally_optimal(
    election: &Election,
    committee: &Committee,
    epsilon: &Epsilon,
) -> Result<LocalOptimality> {
    if committee.len() != election.committee_size() {
        return Err(Error::InvalidCommittee(format!(
            "committee has {} members, k = {}",
            committee.len(),
            election.committee_size()
        )));
    }
    let eps = epsilon.value(election);
    let base = pav_score_of(election, committee.members());
    let mut best: Option<(Swap, Rational)> = None;
    let mut scanned = 0;
    for add in (0..election.candidate_count()).filter(|c| !committee.contains(*c)) {
        for &out in committee.members() {
            let swap = Swap::new(out, add);
            let d = pav_score_of(election, committee.swapped(swap).members()) - &base;
            scanned += 1;
            if best.as_ref().is_none_or(|(_, b)| &d > b) {
                best = Some((swap, d));
            }
        }
    }
    let witness = best.filter(|(_, d)| d >= &eps);
    Ok(LocalOptimality {
        optimal: witness.is_none(),
        witness,
        scanned,
    })
}

/// How the level count is chosen for each `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LevelRule {
    /// `L = ⌈log₂ k⌉`.
    Log,
    Fixed(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GainOutcome {
    InvalidParams(String),
    /// Smallest `lhs − rhs` over the levels.
    Fails {
        worst_margin: Rational,
    },
    Passes,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GainSearchEntry {
    pub k: usize,
    pub levels: usize,
    pub outcome: GainOutcome,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GainSearchReport {
    pub entries: Vec<GainSearchEntry>,
    pub first_pass: Option<usize>,
}

/// Scans `ks` in ascending order and reports every `k` individually; no
/// monotonicity is assumed.
pub fn min_k_gain_search(rule: LevelRule, ks: impl IntoIterator<Item = usize>) -> GainSearchReport {
    let mut ks: Vec<usize> = ks.into_iter().collect();
    ks.sort_unstable();
    ks.dedup();
    let entries: Vec<GainSearchEntry> = ks
        .into_iter()
        .map(|k| {
            let levels = match rule {
                LevelRule::Log => LayeredParams::log_levels(k),
                LevelRule::Fixed(l) => l,
            };
            let outcome = match LayeredParams::new(levels, k) {
                Err(e) => GainOutcome::InvalidParams(e.to_string()),
                Ok(p) => {
                    let report = gain_holds(&p);
                    if report.passes() {
                        GainOutcome::Passes
                    } else {
                        let worst_margin = report
                            .levels
                            .iter()
                            .map(|l| l.margin())
                            .min()
                            .unwrap_or_else(Rational::zero);
                        GainOutcome::Fails { worst_margin }
                    }
                }
            };
            GainSearchEntry { k, levels, outcome }
        })
        .collect();
    let first_pass = entries
        .iter()
        .find(|e| e.outcome == GainOutcome::Passes)
        .map(|e| e.k);
    GainSearchReport {
        entries,
        first_pass,
    }
}
