//! The layered instance: `L` columns, column `i` structured as
//! `E^t(j_i, k₂+1)` with `j_i = 2L − 2(i−1)`.
//!
//! For column `i < L` the side candidates `x_i`/`y_i` are replaced by the odd
//! and even candidates of column `i+1`; column `L`'s `x` becomes the dummy
//! `d{k₂}` (or, with [`DummyReading::ExtraVoter`], is dropped and a single
//! voter approving `d{k₂}` is added).
//!
//! Candidate layout: `c[i,j]` at `(i−1)(t+1) + (j−1)`, then `d1..d{k₂}`, so
//! the identity order is the order used by lexicographic better response.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use super::atoms::chain_ballots;
use super::{delta_formula, Builder, LabeledElection};
use crate::election::{Committee, Rational, Swap, SwapSequence};
use crate::error::{Error, Result};

/// How the extra dummy `d{k₂}` of the last column is realised.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DummyReading {
    /// `x_L` is identified with the dummy candidate `d{k₂}`.
    #[default]
    Candidate,
    /// `x_L`/`y_L` are dropped and one extra voter approves `d{k₂}`.
    ExtraVoter,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LayeredParams {
    levels: usize,
    k: usize,
    t: usize,
    k2: usize,
    pub dummy_reading: DummyReading,
}

impl LayeredParams {
    pub fn new(levels: usize, k: usize) -> Result<Self> {
        if levels == 0 || levels >= k {
            return Err(Error::InvalidParams(format!(
                "need 1 <= L < k, got L = {levels}, k = {k}"
            )));
        }
        let k2 = k - levels;
        if 2 * levels > k2 {
            return Err(Error::InvalidParams(format!(
                "j_1 = {} must be < k2 + 1 = {}",
                2 * levels,
                k2 + 1
            )));
        }
        Ok(Self {
            levels,
            k,
            t: 2 * k.div_ceil(2),
            k2,
            dummy_reading: DummyReading::Candidate,
        })
    }

    /// `L = ⌈log₂ k⌉`.
    pub fn log_levels(k: usize) -> usize {
        if k <= 1 {
            0
        } else {
            (usize::BITS - (k - 1).leading_zeros()) as usize
        }
    }

    pub fn with_dummy_reading(mut self, reading: DummyReading) -> Self {
        self.dummy_reading = reading;
        self
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn k2(&self) -> usize {
        self.k2
    }

    /// `j_i = 2L − 2(i−1)` for `i ∈ [1, L]`.
    pub fn arity(&self, level: usize) -> usize {
        assert!((1..=self.levels).contains(&level));
        2 * self.levels - 2 * (level - 1)
    }

    pub fn candidate_count(&self) -> usize {
        self.k2 + self.levels * (self.t + 1)
    }

    /// Index of `c[i,j]` (both 1-based).
    pub fn column_candidate(&self, i: usize, j: usize) -> usize {
        debug_assert!((1..=self.levels).contains(&i) && (1..=self.t + 1).contains(&j));
        (i - 1) * (self.t + 1) + (j - 1)
    }

    /// Index of `d_l` (1-based).
    pub fn dummy(&self, l: usize) -> usize {
        debug_assert!((1..=self.k2).contains(&l));
        self.levels * (self.t + 1) + l - 1
    }

    /// `W₀ = (c[1,t+1], …, c[L−1,t+1], c[L,1], d1, …, d{k₂})`.
    pub fn initial_members(&self) -> Vec<usize> {
        let mut w: Vec<usize> = (1..self.levels)
            .map(|i| self.column_candidate(i, self.t + 1))
            .collect();
        w.push(self.column_candidate(self.levels, 1));
        w.extend((1..=self.k2).map(|l| self.dummy(l)));
        w
    }
}

pub fn layered_election(params: &LayeredParams) -> Result<LabeledElection> {
    layered_builder(params).finish(params.k, None)
}

pub(crate) fn layered_builder(params: &LayeredParams) -> Builder {
    let (levels, t, k2) = (params.levels, params.t, params.k2);
    let mut b = Builder::default();
    for i in 1..=levels {
        for j in 1..=t + 1 {
            b.candidate(format!("c[{i},{j}]"));
        }
    }
    for l in 1..=k2 {
        b.candidate(format!("d{l}"));
    }
    for i in 1..=levels {
        let ballots = chain_ballots(t, params.arity(i), k2 + 1)
            .into_iter()
            .map(|cb| {
                let mut approvals: Vec<usize> =
                    cb.dummies.iter().map(|&l| params.dummy(l)).collect();
                approvals.extend((cb.chain.0..=cb.chain.1).map(|j| params.column_candidate(i, j)));
                if i < levels {
                    let parity = if cb.x {
                        Some(1)
                    } else if cb.y {
                        Some(0)
                    } else {
                        None
                    };
                    if let Some(p) = parity {
                        approvals.extend(
                            (1..=t + 1)
                                .filter(|j| j % 2 == p)
                                .map(|j| params.column_candidate(i + 1, j)),
                        );
                    }
                } else if cb.x && params.dummy_reading == DummyReading::Candidate {
                    approvals.push(params.dummy(k2));
                }
                approvals
            });
        b.merged_group(&format!("N{i}"), ballots);
    }
    if params.dummy_reading == DummyReading::ExtraVoter {
        b.ballot("extra", vec![params.dummy(k2)], 1);
    }
    b
}

pub fn initial_committee(params: &LayeredParams, le: &LabeledElection) -> Result<Committee> {
    Committee::new(&le.election, params.initial_members())
}

/// One level of the gain check: `δ(j_i, k₂+1)` against `t·δ(j_{i−1}, k₂+1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GainLevel {
    pub level: usize,
    pub lhs: Rational,
    pub rhs: Rational,
    pub holds: bool,
}

impl GainLevel {
    pub fn margin(&self) -> Rational {
        &self.lhs - &self.rhs
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GainReport {
    pub levels: Vec<GainLevel>,
}

impl GainReport {
    pub fn passes(&self) -> bool {
        self.levels.iter().all(|l| l.holds)
    }
}

pub fn gain_holds(params: &LayeredParams) -> GainReport {
    let kk = params.k2 + 1;
    let t = Rational::from_integer(BigInt::from(params.t));
    let levels = (2..=params.levels)
        .map(|i| {
            // arity invariants were checked by LayeredParams::new
            let lhs = delta_formula(params.arity(i), kk).expect("valid arity");
            let rhs = &t * delta_formula(params.arity(i - 1), kk).expect("valid arity");
            GainLevel {
                level: i,
                holds: lhs > rhs,
                lhs,
                rhs,
            }
        })
        .collect();
    GainReport { levels }
}

/// `|X_1| = t`, `|X_i| = t(|X_{i−1}| + 1)`.
pub fn x_length(params: &LayeredParams, level: usize) -> BigUint {
    x_length_for(params.t, level)
}

pub(crate) fn x_length_for(t: usize, level: usize) -> BigUint {
    let t = BigUint::from(t);
    let mut len = BigUint::zero();
    for i in 1..=level {
        len = if i == 1 {
            t.clone()
        } else {
            &t * (len + BigUint::one())
        };
    }
    len
}

/// Streams `X^parity_level` to `f`.
pub fn for_each_x_swap(params: &LayeredParams, level: usize, parity: u8, f: &mut impl FnMut(Swap)) {
    let t = params.t;
    for j in 1..=t {
        let swap = if parity == 1 {
            Swap::new(
                params.column_candidate(level, j),
                params.column_candidate(level, j + 1),
            )
        } else {
            Swap::new(
                params.column_candidate(level, t - j + 2),
                params.column_candidate(level, t - j + 1),
            )
        };
        f(swap);
        if level > 1 {
            for_each_x_swap(params, level - 1, ((j - 1) % 2) as u8, f);
        }
    }
}

/// Materialises `X^parity_level`.
pub fn build_x_sequence(params: &LayeredParams, level: usize, parity: u8) -> SwapSequence {
    let mut swaps = Vec::new();
    for_each_x_swap(params, level, parity, &mut |s| swaps.push(s));
    swaps.into()
}
