use num_traits::Zero;

use super::{Committee, Election, Epsilon, Rational, SatisfactionState, Swap, SwapSequence};
use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepRecord {
    pub index: usize,
    pub swap: Swap,
    pub delta: Rational,
    pub good: bool,
}

/// Outcome of replaying a swap sequence.
#[derive(Debug, Clone)]
pub struct SequenceReport {
    /// Per-step records; empty when the replay was run without recording.
    pub steps: Vec<StepRecord>,
    pub steps_replayed: usize,
    /// First step whose swap was structurally invalid; replay stops there.
    pub structural_failure: Option<(usize, String)>,
    /// First step with `Δ < ε`.
    pub first_bad_step: Option<usize>,
    pub min_delta: Option<Rational>,
    pub max_delta: Option<Rational>,
    pub total_gain: Rational,
    pub final_committee: Committee,
}

impl SequenceReport {
    /// Structurally valid and every step good.
    pub fn certified(&self) -> bool {
        self.structural_failure.is_none() && self.first_bad_step.is_none()
    }
}

pub fn validate_sequence(
    election: &Election,
    start: &Committee,
    seq: &SwapSequence,
    epsilon: &Epsilon,
) -> Result<SequenceReport> {
    validate_swaps(election, start, seq.iter(), epsilon, true)
}

/// Streaming replay. With `record = false` only summary fields are kept.
pub fn validate_swaps(
    election: &Election,
    start: &Committee,
    swaps: impl IntoIterator<Item = Swap>,
    epsilon: &Epsilon,
    record: bool,
) -> Result<SequenceReport> {
    let mut state = SatisfactionState::new(election, start.clone())?;
    let threshold = state.scaled_threshold(&epsilon.value(election));
    let mut report = SequenceReport {
        steps: Vec::new(),
        steps_replayed: 0,
        structural_failure: None,
        first_bad_step: None,
        min_delta: None,
        max_delta: None,
        total_gain: Rational::zero(),
        final_committee: start.clone(),
    };
    let mut min_scaled = None;
    let mut max_scaled = None;
    let mut total = num_bigint::BigInt::zero();
    for (index, swap) in swaps.into_iter().enumerate() {
        let scaled = match state.delta_scaled(swap) {
            Ok(d) => d,
            Err(e) => {
                report.structural_failure = Some((index, e.to_string()));
                break;
            }
        };
        let good = scaled >= threshold;
        if !good && report.first_bad_step.is_none() {
            report.first_bad_step = Some(index);
        }
        if min_scaled.as_ref().is_none_or(|m| &scaled < m) {
            min_scaled = Some(scaled.clone());
        }
        if max_scaled.as_ref().is_none_or(|m| &scaled > m) {
            max_scaled = Some(scaled.clone());
        }
        total += scaled.numerator();
        if record {
            report.steps.push(StepRecord {
                index,
                swap,
                delta: state.to_rational(&scaled),
                good,
            });
        }
        state.apply_unchecked(swap);
        report.steps_replayed += 1;
    }
    report.min_delta = min_scaled.map(|d| state.to_rational(&d));
    report.max_delta = max_scaled.map(|d| state.to_rational(&d));
    report.total_gain = Rational::new(total, state.denominator().clone());
    report.final_committee = state.committee().clone();
    Ok(report)
}
