//! ε-local search with pluggable pivot rules.
//!
//! Comparisons count every Δ evaluation, including the final full scan that
//! proves no qualifying swap remains. [`RunTrace::final_scan_comparisons`]
//! keeps that last scan separately so the other convention can be derived.

use num_traits::Zero;

use crate::election::{
    Committee, Election, Epsilon, Rational, SatisfactionState, ScaledDelta, Swap, SwapSequence,
};
use crate::error::{Error, Result};

/// How the next swap is chosen.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PivotRule {
    /// First qualifying pair `(add, remove)` in lexicographic order induced
    /// by `order`: outer loop over non-members, inner over members.
    LexicographicBetterResponse(CandidateOrder),
    /// Maximum Δ; ties go to the lexicographically first pair.
    BestResponse(CandidateOrder),
    /// Replay a fixed sequence, failing on any swap below ε.
    Scripted(SwapSequence),
}

impl PivotRule {
    pub fn lex(m: usize) -> Self {
        PivotRule::LexicographicBetterResponse(CandidateOrder::identity(m))
    }

    pub fn best(m: usize) -> Self {
        PivotRule::BestResponse(CandidateOrder::identity(m))
    }

    pub fn name(&self) -> &'static str {
        match self {
            PivotRule::LexicographicBetterResponse(_) => "lex-better",
            PivotRule::BestResponse(_) => "best",
            PivotRule::Scripted(_) => "scripted",
        }
    }
}

/// A total order over all candidates, stored as the candidates in rank order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateOrder {
    ranked: Vec<usize>,
}

impl CandidateOrder {
    pub fn identity(m: usize) -> Self {
        Self {
            ranked: (0..m).collect(),
        }
    }

    pub fn new(ranked: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; ranked.len()];
        for &c in &ranked {
            if c >= ranked.len() || std::mem::replace(&mut seen[c], true) {
                return Err(Error::InvalidParams(
                    "candidate order is not a permutation".into(),
                ));
            }
        }
        Ok(Self { ranked })
    }

    pub fn ranked(&self) -> &[usize] {
        &self.ranked
    }

    fn check(&self, election: &Election) -> Result<()> {
        if self.ranked.len() != election.candidate_count() {
            return Err(Error::InvalidParams(format!(
                "candidate order covers {} candidates, election has {}",
                self.ranked.len(),
                election.candidate_count()
            )));
        }
        Ok(())
    }
}

/// A selected swap with its exact gain and the Δ evaluations spent finding it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanResult {
    pub found: Option<(Swap, Rational)>,
    pub comparisons: u64,
}

/// Lexicographic better response: first pair with `Δ ≥ threshold`.
pub fn next_swap_lex(
    state: &SatisfactionState<'_>,
    order: &CandidateOrder,
    epsilon: &Epsilon,
) -> ScanResult {
    let threshold = state.scaled_threshold(&epsilon.value(state.election()));
    let (found, comparisons) = lex_scan(state, order, &threshold);
    ScanResult {
        found: found.map(|(s, d)| (s, state.to_rational(&d))),
        comparisons,
    }
}

fn lex_scan(
    state: &SatisfactionState<'_>,
    order: &CandidateOrder,
    threshold: &ScaledDelta,
) -> (Option<(Swap, ScaledDelta)>, u64) {
    let mut comparisons = 0u64;
    let members: Vec<usize> = order
        .ranked
        .iter()
        .copied()
        .filter(|&c| state.contains(c))
        .collect();
    for &add in order.ranked.iter().filter(|&&c| !state.contains(c)) {
        for &out in &members {
            let swap = Swap::new(out, add);
            let d = state.delta_scaled_unchecked(swap);
            comparisons += 1;
            if &d >= threshold {
                return (Some((swap, d)), comparisons);
            }
        }
    }
    (None, comparisons)
}

/// Best response over all `k(m−k)` pairs.
pub fn next_swap_best(
    state: &SatisfactionState<'_>,
    order: &CandidateOrder,
    epsilon: &Epsilon,
) -> ScanResult {
    let threshold = state.scaled_threshold(&epsilon.value(state.election()));
    let (found, comparisons) = best_scan(state, order, &threshold);
    ScanResult {
        found: found.map(|(s, d)| (s, state.to_rational(&d))),
        comparisons,
    }
}

fn best_scan(
    state: &SatisfactionState<'_>,
    order: &CandidateOrder,
    threshold: &ScaledDelta,
) -> (Option<(Swap, ScaledDelta)>, u64) {
    let mut comparisons = 0u64;
    let mut best: Option<(Swap, ScaledDelta)> = None;
    let members: Vec<usize> = order
        .ranked
        .iter()
        .copied()
        .filter(|&c| state.contains(c))
        .collect();
    for &add in order.ranked.iter().filter(|&&c| !state.contains(c)) {
        for &out in &members {
            let swap = Swap::new(out, add);
            let d = state.delta_scaled_unchecked(swap);
            comparisons += 1;
            if best.as_ref().is_none_or(|(_, b)| &d > b) {
                best = Some((swap, d));
            }
        }
    }
    (best.filter(|(_, d)| d >= threshold), comparisons)
}

/// Everything a run did.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunTrace {
    pub initial_committee: Committee,
    pub executed_swaps: SwapSequence,
    pub step_deltas: Vec<Rational>,
    /// Cumulative Δ evaluations after each executed swap.
    pub cumulative_comparisons: Vec<u64>,
    pub comparisons: u64,
    /// Evaluations spent in the last scan that found nothing (0 if none).
    pub final_scan_comparisons: u64,
    pub final_committee: Committee,
    /// No qualifying swap remained (or the script was exhausted).
    pub terminated: bool,
    pub epsilon: Rational,
}

impl RunTrace {
    pub fn swap_count(&self) -> usize {
        self.executed_swaps.len()
    }

    pub fn total_gain(&self) -> Rational {
        self.step_deltas
            .iter()
            .fold(Rational::zero(), |acc, d| acc + d)
    }

    pub fn comparisons_excluding_final_scan(&self) -> u64 {
        self.comparisons - self.final_scan_comparisons
    }
}

/// Runs ε-ls-PAV from `initial` until no swap qualifies or `step_cap` swaps
/// have been made.
pub fn run(
    election: &Election,
    initial: &Committee,
    epsilon: &Epsilon,
    rule: &PivotRule,
    step_cap: Option<usize>,
) -> Result<RunTrace> {
    let mut state = SatisfactionState::new(election, initial.clone())?;
    let eps_value = epsilon.value(election);
    let threshold = state.scaled_threshold(&eps_value);
    let mut trace = RunTrace {
        initial_committee: initial.clone(),
        executed_swaps: SwapSequence::new(),
        step_deltas: Vec::new(),
        cumulative_comparisons: Vec::new(),
        comparisons: 0,
        final_scan_comparisons: 0,
        final_committee: initial.clone(),
        terminated: false,
        epsilon: eps_value,
    };

    if let PivotRule::Scripted(seq) = rule {
        for (step, swap) in seq.iter().enumerate() {
            if step_cap.is_some_and(|cap| step >= cap) {
                trace.final_committee = state.committee().clone();
                return Ok(trace);
            }
            let d = state
                .delta_scaled(swap)
                .map_err(|e| Error::ScriptedSwapRejected {
                    step,
                    reason: e.to_string(),
                })?;
            trace.comparisons += 1;
            if d < threshold {
                return Err(Error::ScriptedSwapRejected {
                    step,
                    reason: format!(
                        "delta {} below epsilon {}",
                        state.to_rational(&d),
                        trace.epsilon
                    ),
                });
            }
            record(&mut trace, &mut state, swap, &d);
        }
        trace.terminated = true;
        trace.final_committee = state.committee().clone();
        return Ok(trace);
    }

    loop {
        if step_cap.is_some_and(|cap| trace.executed_swaps.len() >= cap) {
            break;
        }
        let (found, used) = match rule {
            PivotRule::LexicographicBetterResponse(order) => {
                order.check(election)?;
                lex_scan(&state, order, &threshold)
            }
            PivotRule::BestResponse(order) => {
                order.check(election)?;
                best_scan(&state, order, &threshold)
            }
            PivotRule::Scripted(_) => unreachable!(),
        };
        trace.comparisons += used;
        match found {
            Some((swap, d)) => record(&mut trace, &mut state, swap, &d),
            None => {
                trace.final_scan_comparisons = used;
                trace.terminated = true;
                break;
            }
        }
    }
    trace.final_committee = state.committee().clone();
    Ok(trace)
}

fn record(trace: &mut RunTrace, state: &mut SatisfactionState<'_>, swap: Swap, d: &ScaledDelta) {
    trace.step_deltas.push(state.to_rational(d));
    trace.executed_swaps.push(swap);
    trace.cumulative_comparisons.push(trace.comparisons);
    state.apply_unchecked(swap);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::election::fixtures::{blocs_and_singletons, two_blocs};
    use crate::election::{int, pav_score, BallotClass};

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn blocs_and_singletons_is_a_ten_fixpoint() {
        let e = blocs_and_singletons();
        let w = Committee::new(&e, [0, 1, 2]).unwrap();
        let eps = Epsilon::Custom(int(10));
        for rule in [PivotRule::lex(11), PivotRule::best(11)] {
            let t = run(&e, &w, &eps, &rule, None).unwrap();
            assert_eq!(t.swap_count(), 0);
            assert!(t.terminated);
            assert_eq!(t.comparisons, 3 * 8);
        }
    }

    #[test]
    fn two_blocs_threshold_swap_exists() {
        let e = two_blocs();
        let w = Committee::new(&e, [0, 1, 2]).unwrap();
        let s = SatisfactionState::new(&e, w).unwrap();
        let r = next_swap_lex(&s, &CandidateOrder::identity(5), &Epsilon::Threshold);
        let (swap, d) = r.found.unwrap();
        assert_eq!(d, int(10));
        assert_eq!(swap, Swap::new(0, 3));
        assert_eq!(r.comparisons, 1);
    }

    #[test]
    fn best_response_tie_break() {
        let e = two_blocs();
        let s = SatisfactionState::new(&e, Committee::new(&e, [0, 1, 2]).unwrap()).unwrap();
        // oracle: all six (c_i -> c4/c5) pairs share delta 30 - 20 = 10
        for out in 0..3 {
            for add in 3..5 {
                assert_eq!(s.delta(out, add).unwrap(), int(10));
            }
        }
        let r = next_swap_best(&s, &CandidateOrder::identity(5), &Epsilon::ZeroPlus);
        assert_eq!(r.found, Some((Swap::new(0, 3), int(10))));
        assert_eq!(r.comparisons, 6);
    }

    #[test]
    fn local_optimum_scans_everything() {
        let e = two_blocs();
        let w = Committee::new(&e, [0, 1, 3]).unwrap();
        let s = SatisfactionState::new(&e, w).unwrap();
        let order = CandidateOrder::identity(5);
        let lex = next_swap_lex(&s, &order, &Epsilon::ZeroPlus);
        let best = next_swap_best(&s, &order, &Epsilon::ZeroPlus);
        assert_eq!(lex.found, None);
        assert_eq!(best.found, None);
        assert_eq!(lex.comparisons, 6);
        assert_eq!(best.comparisons, 6);
    }

    #[test]
    fn trace_is_monotone_and_deterministic() {
        let names = (0..6).map(|i| format!("c{i}")).collect();
        let ballots = vec![
            BallotClass::new(vec![0, 1, 2], 7),
            BallotClass::new(vec![3, 4], 5),
            BallotClass::new(vec![5], 4),
            BallotClass::new(vec![2, 5], 3),
        ];
        let e = Election::new(names, ballots, 3).unwrap();
        let w = Committee::new(&e, [0, 1, 2]).unwrap();
        for rule in [PivotRule::lex(6), PivotRule::best(6)] {
            let t = run(&e, &w, &Epsilon::ZeroPlus, &rule, None).unwrap();
            assert_eq!(t, run(&e, &w, &Epsilon::ZeroPlus, &rule, None).unwrap());
            assert_eq!(t.executed_swaps.len(), t.step_deltas.len());
            let start = pav_score(&e, &w).unwrap();
            let end = pav_score(&e, &t.final_committee).unwrap();
            assert_eq!(end - start, t.total_gain());
            assert!(t.step_deltas.iter().all(|d| d >= &t.epsilon));
            assert!(t.terminated);
        }
    }

    #[test]
    fn scripted_rejects_bad_swap() {
        let e = blocs_and_singletons();
        let w = Committee::new(&e, [0, 1, 2]).unwrap();
        let seq: SwapSequence = vec![Swap::new(2, 3)].into();
        let err = run(
            &e,
            &w,
            &Epsilon::Custom(int(10)),
            &PivotRule::Scripted(seq.clone()),
            None,
        );
        assert!(matches!(
            err,
            Err(Error::ScriptedSwapRejected { step: 0, .. })
        ));
        let ok = run(&e, &w, &Epsilon::ZeroPlus, &PivotRule::Scripted(seq), None).unwrap();
        assert_eq!(ok.step_deltas, vec![q(28, 3)]);
        let bad: SwapSequence = vec![Swap::new(2, 3), Swap::new(2, 4)].into();
        let err = run(&e, &w, &Epsilon::ZeroPlus, &PivotRule::Scripted(bad), None);
        assert!(matches!(
            err,
            Err(Error::ScriptedSwapRejected { step: 1, .. })
        ));
    }

    #[test]
    fn step_cap_stops_early() {
        let e = two_blocs();
        let w = Committee::new(&e, [0, 1, 2]).unwrap();
        let t = run(&e, &w, &Epsilon::ZeroPlus, &PivotRule::lex(5), Some(0)).unwrap();
        assert!(!t.terminated);
        assert_eq!(t.swap_count(), 0);
    }
}
