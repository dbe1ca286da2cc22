//! The layered instance plus `k` heavy blocker groups, under which
//! lexicographic better response follows the shortcut sequence `Z`.
//!
//! Blocker `i ≤ L` approves all of column `i`; blocker `i > L` approves
//! `d{i−L}`. Each has weight `⌈2γ⌉`, so any swap leaving a column (or
//! removing a dummy) loses at least `γ`.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::layered::{layered_builder, LayeredParams};
use super::LabeledElection;
use crate::election::{
    fraction_string, Committee, Rational, SatisfactionState, Swap, SwapSequence,
};
use crate::error::{Error, Result};
use crate::search::CandidateOrder;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HardenedParams {
    pub layered: LayeredParams,
    gamma: Rational,
    pub candidate_order: CandidateOrder,
}

impl HardenedParams {
    /// `γ = 8k²(k+1)` and the identity candidate order.
    pub fn new(layered: LayeredParams) -> Self {
        let k = BigInt::from(layered.k());
        let gamma = Rational::from_integer(BigInt::from(8) * &k * &k * (k + 1));
        Self {
            candidate_order: CandidateOrder::identity(layered.candidate_count()),
            layered,
            gamma,
        }
    }

    pub fn with_gamma(mut self, gamma: Rational) -> Result<Self> {
        if !gamma.is_positive() {
            return Err(Error::InvalidParams(format!(
                "gamma must be positive, got {}",
                fraction_string(&gamma)
            )));
        }
        self.gamma = gamma;
        Ok(self)
    }

    pub fn gamma(&self) -> &Rational {
        &self.gamma
    }

    /// `⌈2γ⌉`.
    pub fn blocker_weight(&self) -> Result<u64> {
        let w = (&self.gamma * Rational::from_integer(BigInt::from(2)))
            .ceil()
            .to_integer();
        w.to_u64()
            .filter(|&w| w > 0)
            .ok_or_else(|| Error::InvalidParams(format!("blocker weight {w} out of range")))
    }

    pub fn initial_members(&self) -> Vec<usize> {
        self.layered.initial_members()
    }
}

pub fn hardened_election(hp: &HardenedParams) -> Result<LabeledElection> {
    let p = &hp.layered;
    let weight = hp.blocker_weight()?;
    let mut b = layered_builder(p);
    for i in 1..=p.k() {
        let approvals = if i <= p.levels() {
            (1..=p.t() + 1).map(|j| p.column_candidate(i, j)).collect()
        } else {
            vec![p.dummy(i - p.levels())]
        };
        b.ballot(&format!("blocker[{i}]"), approvals, weight);
    }
    b.finish(p.k(), None)
}

pub fn hardened_initial_committee(hp: &HardenedParams, le: &LabeledElection) -> Result<Committee> {
    Committee::new(&le.election, hp.initial_members())
}

/// `Z¹_1 = X¹_1`, `Z⁰_l = (c[l,t+1], c[l,1])` and
/// `Z¹_i = ⊕_{j=1}^{t} ((c[i,j], c[i,j+1]) ⊕ Z^{(j−1) mod 2}_{i−1})`.
pub fn build_z_sequence(hp: &HardenedParams) -> SwapSequence {
    let mut out = SwapSequence::new();
    push_z(&hp.layered, hp.layered.levels(), &mut out);
    out
}

fn push_z(p: &LayeredParams, level: usize, out: &mut SwapSequence) {
    let t = p.t();
    for j in 1..=t {
        out.push(Swap::new(
            p.column_candidate(level, j),
            p.column_candidate(level, j + 1),
        ));
        if level > 1 {
            if j % 2 == 1 {
                out.push(Swap::new(
                    p.column_candidate(level - 1, t + 1),
                    p.column_candidate(level - 1, 1),
                ));
            } else {
                push_z(p, level - 1, out);
            }
        }
    }
}

/// `|Z¹_1| = t`, `|Z¹_i| = t + (t/2)(|Z¹_{i−1}| + 1)`.
pub fn z_length(hp: &HardenedParams) -> BigUint {
    let t = BigUint::from(hp.layered.t());
    let half = &t / 2u32;
    let mut len = BigUint::zero();
    for i in 1..=hp.layered.levels() {
        len = if i == 1 {
            t.clone()
        } else {
            &t + &half * (len + BigUint::one())
        };
    }
    len
}

/// Replays `Z` on the unhardened layered election and checks that no swap
/// available at any visited committee gains more than `γ`. Returns the
/// largest gain observed.
pub fn certify_gamma(hp: &HardenedParams) -> Result<Rational> {
    let p = &hp.layered;
    let le = super::layered::layered_election(p)?;
    let e = &le.election;
    let mut state = SatisfactionState::new(e, Committee::new(e, p.initial_members())?)?;
    let m = e.candidate_count();
    let mut observed: Option<Rational> = None;
    let z = build_z_sequence(hp);
    for step in 0..=z.len() {
        let mut best = None;
        for out in state.committee().members().to_vec() {
            for add in (0..m).filter(|&c| !state.contains(c)) {
                let d = state.delta_scaled_unchecked(Swap::new(out, add));
                if best.as_ref().is_none_or(|b| &d > b) {
                    best = Some(d);
                }
            }
        }
        if let Some(d) = best {
            let d = state.to_rational(&d);
            if d > hp.gamma {
                return Err(Error::GammaTooSmall {
                    step,
                    gamma: fraction_string(&hp.gamma),
                    observed: fraction_string(&d),
                });
            }
            if observed.as_ref().is_none_or(|o| &d > o) {
                observed = Some(d);
            }
        }
        if let Some(swap) = z.as_slice().get(step) {
            state
                .apply_swap(*swap)
                .map_err(|e| Error::ScriptedSwapRejected {
                    step,
                    reason: e.to_string(),
                })?;
        }
    }
    Ok(observed.unwrap_or_else(Rational::zero))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::election::Epsilon;
    use crate::search::{run, PivotRule};

    #[test]
    fn z_lengths() {
        let hp = HardenedParams::new(LayeredParams::new(2, 32).unwrap());
        assert_eq!(z_length(&hp), BigUint::from(560u32));
        assert_eq!(build_z_sequence(&hp).len(), 560);
        let small = HardenedParams::new(LayeredParams::new(1, 6).unwrap());
        assert_eq!(build_z_sequence(&small).len(), 6);
    }

    #[test]
    fn default_gamma_and_weights() {
        let hp = HardenedParams::new(LayeredParams::new(2, 12).unwrap());
        assert_eq!(
            hp.gamma(),
            &Rational::from_integer(BigInt::from(8 * 144 * 13))
        );
        assert_eq!(hp.blocker_weight().unwrap(), 2 * 8 * 144 * 13);
        let hp = hp.with_gamma(Rational::new(5.into(), 4.into())).unwrap();
        assert_eq!(hp.blocker_weight().unwrap(), 3);
        assert!(HardenedParams::new(LayeredParams::new(2, 12).unwrap())
            .with_gamma(Rational::zero())
            .is_err());
    }

    #[test]
    fn tiny_gamma_is_reported() {
        let hp = HardenedParams::new(LayeredParams::new(2, 12).unwrap())
            .with_gamma(Rational::new(1.into(), 1000.into()))
            .unwrap();
        assert!(matches!(
            certify_gamma(&hp),
            Err(Error::GammaTooSmall { step: 0, .. })
        ));
    }

    #[test]
    fn lex_follows_z_small() {
        let hp = HardenedParams::new(LayeredParams::new(2, 22).unwrap());
        certify_gamma(&hp).unwrap();
        let le = hardened_election(&hp).unwrap();
        let w0 = hardened_initial_committee(&hp, &le).unwrap();
        let rule = PivotRule::LexicographicBetterResponse(hp.candidate_order.clone());
        let trace = run(&le.election, &w0, &Epsilon::ZeroPlus, &rule, None).unwrap();
        assert_eq!(trace.executed_swaps, build_z_sequence(&hp));
    }
}
