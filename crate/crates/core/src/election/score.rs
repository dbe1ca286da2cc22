use std::cmp::Ordering;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Committee, Election, Rational, Swap};
use crate::error::{Error, Result};

/// `1 + 1/2 + ... + 1/t`, with `harmonic(0) = 0`.
pub fn harmonic(t: usize) -> Rational {
    let mut acc = Rational::zero();
    for j in 1..=t {
        acc += Rational::new(BigInt::one(), BigInt::from(j));
    }
    acc
}

/// Least common multiple of `1..=k`.
pub fn lcm_range(k: usize) -> BigUint {
    let mut acc = BigUint::one();
    for j in 2..=k {
        acc = acc.lcm(&BigUint::from(j));
    }
    acc
}

/// PAV score from scratch. The committee must belong to `election`.
pub fn pav_score(election: &Election, committee: &Committee) -> Result<Rational> {
    check_committee(election, committee)?;
    Ok(pav_score_of(election, committee.members()))
}

/// PAV score of an arbitrary candidate set (any size), from scratch.
pub fn pav_score_of(election: &Election, members: &[usize]) -> Rational {
    let max_hits = members.len();
    let table: Vec<Rational> = (0..=max_hits).map(harmonic).collect();
    let mut acc = Rational::zero();
    for b in election.ballots() {
        let hits = members.iter().filter(|&&c| b.approves(c)).count();
        if hits > 0 {
            acc += &table[hits] * BigInt::from(b.weight);
        }
    }
    acc
}

fn check_committee(election: &Election, committee: &Committee) -> Result<()> {
    let k = election.committee_size();
    if committee.len() != k {
        return Err(Error::InvalidCommittee(format!(
            "size {} but committee size is {k}",
            committee.len()
        )));
    }
    let m = election.candidate_count();
    if let Some(&c) = committee.members().iter().find(|&&c| c >= m) {
        return Err(Error::InvalidCommittee(format!(
            "candidate {c} outside [0, {m})"
        )));
    }
    Ok(())
}

/// A swap gain expressed over the election's fixed denominator `lcm(1..=k)`.
///
/// Every swap term is `w/(h+1)` or `-w/h` with the denominator in `1..=k`,
/// so all gains of one election share this denominator and compare as
/// integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScaledDelta {
    Small(i128),
    Big(BigInt),
}

impl ScaledDelta {
    pub fn numerator(&self) -> BigInt {
        match self {
            ScaledDelta::Small(v) => BigInt::from(*v),
            ScaledDelta::Big(v) => v.clone(),
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            ScaledDelta::Small(v) => *v > 0,
            ScaledDelta::Big(v) => v.is_positive(),
        }
    }
}

impl PartialOrd for ScaledDelta {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ScaledDelta {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ScaledDelta::Small(a), ScaledDelta::Small(b)) => a.cmp(b),
            _ => self.numerator().cmp(&other.numerator()),
        }
    }
}

/// Per-election scale factors `lcm(1..=k) / d` for `d` in `1..=k`.
#[derive(Debug, Clone)]
struct Scale {
    denominator: BigInt,
    small: Option<Vec<i128>>,
    big: Vec<BigInt>,
}

impl Scale {
    fn new(k: usize, total_weight: u64) -> Self {
        let denominator = BigInt::from(lcm_range(k));
        let big: Vec<BigInt> = (0..=k)
            .map(|d| {
                if d == 0 {
                    BigInt::zero()
                } else {
                    &denominator / BigInt::from(d)
                }
            })
            .collect();
        // |numerator| <= total_weight * denominator, keep a few bits of headroom
        let bits = denominator.bits() + 64 - u64::from(total_weight.max(1).leading_zeros());
        let small = (bits < 124).then(|| big.iter().map(|v| v.to_i128().unwrap()).collect());
        Self {
            denominator,
            small,
            big,
        }
    }
}

/// Committee membership plus per-class hit counts `|A_i ∩ W|`.
#[derive(Debug, Clone)]
pub struct SatisfactionState<'e> {
    election: &'e Election,
    committee: Committee,
    in_committee: Vec<bool>,
    hits: Vec<u32>,
    scale: Arc<Scale>,
}

impl<'e> SatisfactionState<'e> {
    pub fn new(election: &'e Election, committee: Committee) -> Result<Self> {
        check_committee(election, &committee)?;
        let scale = Scale::new(election.committee_size(), election.voter_count());
        let mut state = Self {
            election,
            committee,
            in_committee: Vec::new(),
            hits: Vec::new(),
            scale: Arc::new(scale),
        };
        state.rebuild();
        Ok(state)
    }

    fn rebuild(&mut self) {
        let e = self.election;
        self.in_committee = vec![false; e.candidate_count()];
        for &c in self.committee.members() {
            self.in_committee[c] = true;
        }
        self.hits = vec![0; e.ballots().len()];
        for &c in self.committee.members() {
            for &i in e.approvers(c) {
                self.hits[i as usize] += 1;
            }
        }
    }

    pub fn election(&self) -> &'e Election {
        self.election
    }

    pub fn committee(&self) -> &Committee {
        &self.committee
    }

    pub fn contains(&self, c: usize) -> bool {
        self.in_committee.get(c).copied().unwrap_or(false)
    }

    pub fn per_class_hits(&self) -> &[u32] {
        &self.hits
    }

    /// Common denominator of every [`ScaledDelta`] of this election.
    pub fn denominator(&self) -> &BigInt {
        &self.scale.denominator
    }

    pub fn score(&self) -> Rational {
        let table: Vec<Rational> = (0..=self.committee.len()).map(harmonic).collect();
        let mut acc = Rational::zero();
        for (b, &h) in self.election.ballots().iter().zip(&self.hits) {
            if h > 0 {
                acc += &table[h as usize] * BigInt::from(b.weight);
            }
        }
        acc
    }

    fn check_swap(&self, swap: Swap) -> Result<()> {
        let m = self.election.candidate_count();
        let fail = |reason: &str| {
            Err(Error::InvalidSwap {
                out: swap.out,
                add: swap.add,
                reason: reason.into(),
            })
        };
        if swap.out >= m || swap.add >= m {
            return fail("candidate out of range");
        }
        if swap.out == swap.add {
            return fail("out and in coincide");
        }
        if !self.in_committee[swap.out] {
            return fail("outgoing candidate not in committee");
        }
        if self.in_committee[swap.add] {
            return fail("incoming candidate already in committee");
        }
        Ok(())
    }

    /// Exact `pavsc(W ∪ {b} \ {a}) − pavsc(W)`.
    pub fn delta(&self, out: usize, add: usize) -> Result<Rational> {
        let scaled = self.delta_scaled(Swap::new(out, add))?;
        Ok(self.to_rational(&scaled))
    }

    pub fn to_rational(&self, d: &ScaledDelta) -> Rational {
        Rational::new(d.numerator(), self.scale.denominator.clone())
    }

    pub fn delta_scaled(&self, swap: Swap) -> Result<ScaledDelta> {
        self.check_swap(swap)?;
        Ok(self.delta_scaled_unchecked(swap))
    }

    /// Visits only the classes approving exactly one of the two candidates.
    pub(crate) fn delta_scaled_unchecked(&self, swap: Swap) -> ScaledDelta {
        let e = self.election;
        let k = self.committee.len();
        let ballots = e.ballots();
        let lose = e.approvers(swap.out);
        let gain = e.approvers(swap.add);
        let scale = &*self.scale;
        if let Some(small) = &scale.small {
            let mut acc: i128 = 0;
            walk_symmetric_difference(lose, gain, |class, gains| {
                let h = self.hits[class] as usize;
                let w = ballots[class].weight as i128;
                if gains {
                    assert!(h < k, "incoming term denominator {} exceeds k = {k}", h + 1);
                    acc += w * small[h + 1];
                } else {
                    acc -= w * small[h];
                }
            });
            ScaledDelta::Small(acc)
        } else {
            let mut per_denominator = vec![0i128; k + 1];
            walk_symmetric_difference(lose, gain, |class, gains| {
                let h = self.hits[class] as usize;
                let w = ballots[class].weight as i128;
                if gains {
                    assert!(h < k, "incoming term denominator {} exceeds k = {k}", h + 1);
                    per_denominator[h + 1] += w;
                } else {
                    per_denominator[h] -= w;
                }
            });
            let mut acc = BigInt::zero();
            for (d, &w) in per_denominator.iter().enumerate() {
                if w != 0 {
                    acc += &scale.big[d] * BigInt::from(w);
                }
            }
            ScaledDelta::Big(acc)
        }
    }

    /// Smallest scaled numerator that satisfies `Δ ≥ threshold`.
    pub fn scaled_threshold(&self, threshold: &Rational) -> ScaledDelta {
        let scaled = threshold * Rational::from_integer(self.scale.denominator.clone());
        let min = scaled.ceil().to_integer();
        match (&self.scale.small, min.to_i128()) {
            (Some(_), Some(v)) => ScaledDelta::Small(v),
            _ => ScaledDelta::Big(min),
        }
    }

    /// Apply a swap; on error the state is untouched.
    pub fn apply_swap(&mut self, swap: Swap) -> Result<()> {
        self.check_swap(swap)?;
        self.apply_unchecked(swap);
        Ok(())
    }

    pub(crate) fn apply_unchecked(&mut self, swap: Swap) {
        let e = self.election;
        for &i in e.approvers(swap.out) {
            self.hits[i as usize] -= 1;
        }
        for &i in e.approvers(swap.add) {
            self.hits[i as usize] += 1;
        }
        self.in_committee[swap.out] = false;
        self.in_committee[swap.add] = true;
        self.committee = self.committee.swapped(swap);
    }

    /// True iff hit counts match a from-scratch recount.
    pub fn is_consistent(&self) -> bool {
        let mut fresh = self.clone();
        fresh.rebuild();
        fresh.hits == self.hits && fresh.in_committee == self.in_committee
    }
}

/// Merge-walks two sorted approver lists, calling `f(class, approves_second)`
/// for classes in exactly one of them.
fn walk_symmetric_difference(first: &[u32], second: &[u32], mut f: impl FnMut(usize, bool)) {
    let (mut i, mut j) = (0, 0);
    while i < first.len() && j < second.len() {
        match first[i].cmp(&second[j]) {
            Ordering::Equal => {
                i += 1;
                j += 1;
            }
            Ordering::Less => {
                f(first[i] as usize, false);
                i += 1;
            }
            Ordering::Greater => {
                f(second[j] as usize, true);
                j += 1;
            }
        }
    }
    for &c in &first[i..] {
        f(c as usize, false);
    }
    for &c in &second[j..] {
        f(c as usize, true);
    }
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::{blocs_and_singletons, two_blocs};
    use super::super::{int, BallotClass};
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn harmonic_values() {
        assert_eq!(harmonic(0), int(0));
        assert_eq!(harmonic(1), int(1));
        assert_eq!(harmonic(3), q(11, 6));
    }

    /// Independent lcm: product of the largest prime power <= k.
    fn lcm_by_prime_powers(k: u64) -> u64 {
        let mut acc = 1u64;
        for p in 2..=k {
            if (2..p).all(|d| p % d != 0) {
                let mut pp = p;
                while pp * p <= k {
                    pp *= p;
                }
                acc *= pp;
            }
        }
        acc
    }

    #[test]
    fn lcm_range_values() {
        assert_eq!(lcm_range(1), BigUint::from(1u32));
        assert_eq!(lcm_range(6), BigUint::from(60u32));
        assert_eq!(lcm_range(10), BigUint::from(2520u32));
        for k in 1..=40 {
            assert_eq!(lcm_range(k as usize), BigUint::from(lcm_by_prime_powers(k)));
        }
    }

    #[test]
    fn blocs_and_singletons_scores() {
        let e = blocs_and_singletons();
        let w = Committee::new(&e, [0, 1, 2]).unwrap();
        assert_eq!(pav_score(&e, &w).unwrap(), q(308, 3));
        let w2 = Committee::new(&e, [0, 1, 3]).unwrap();
        assert_eq!(pav_score(&e, &w2).unwrap(), int(112));
        let state = SatisfactionState::new(&e, w).unwrap();
        assert_eq!(state.delta(2, 3).unwrap(), q(28, 3));
        let nobody = Election::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![BallotClass::new(vec![0], 2)],
            1,
        )
        .unwrap();
        let s = SatisfactionState::new(&nobody, Committee::new(&nobody, [1]).unwrap()).unwrap();
        assert_eq!(s.delta(1, 2).unwrap(), int(0));
        assert_eq!(s.score(), int(0));
    }

    #[test]
    fn apply_swap_updates_hits() {
        let e = blocs_and_singletons();
        let mut s = SatisfactionState::new(&e, Committee::new(&e, [0, 1, 2]).unwrap()).unwrap();
        assert_eq!(&s.per_class_hits()[..2], &[3, 0]);
        s.apply_swap(Swap::new(2, 3)).unwrap();
        assert_eq!(&s.per_class_hits()[..2], &[2, 1]);
        assert!(s.is_consistent());
        s.apply_swap(Swap::new(3, 2)).unwrap();
        assert_eq!(s.committee().members(), &[0, 1, 2]);
        assert_eq!(&s.per_class_hits()[..2], &[3, 0]);
    }

    #[test]
    fn invalid_swap_leaves_state() {
        let e = two_blocs();
        let mut s = SatisfactionState::new(&e, Committee::new(&e, [0, 1, 2]).unwrap()).unwrap();
        let before = s.per_class_hits().to_vec();
        assert!(s.apply_swap(Swap::new(3, 4)).is_err());
        assert!(s.apply_swap(Swap::new(0, 1)).is_err());
        assert!(s.delta(0, 0).is_err());
        assert_eq!(s.per_class_hits(), &before[..]);
    }

    #[test]
    fn big_path_matches_small_path() {
        // a heavy weight and a large lcm force the BigInt accumulator
        let m = 64;
        let k = 60;
        let ballots = vec![
            BallotClass::new((0..40).collect(), u64::MAX / 4),
            BallotClass::new(vec![61, 62], 3),
            BallotClass::new((30..63).collect(), 5),
        ];
        let e = Election::new((0..m).map(|i| i.to_string()).collect(), ballots, k).unwrap();
        let s = SatisfactionState::new(&e, Committee::new(&e, 0..k).unwrap()).unwrap();
        assert!(s.scale.small.is_none());
        for (out, add) in [(0, 61), (35, 62), (59, 60), (1, 63)] {
            let w = s.committee().swapped(Swap::new(out, add));
            let expect = pav_score_of(&e, w.members()) - pav_score_of(&e, s.committee().members());
            assert_eq!(s.delta(out, add).unwrap(), expect);
        }
    }

    fn arb_election() -> impl Strategy<Value = Election> {
        (2usize..=12)
            .prop_flat_map(|m| {
                let ballot = (prop::collection::vec(any::<bool>(), m), 1u64..5);
                (Just(m), 1..m, prop::collection::vec(ballot, 1..=50))
            })
            .prop_map(|(m, k, raw)| {
                let ballots = raw
                    .into_iter()
                    .map(|(bits, w)| {
                        BallotClass::new(
                            bits.iter()
                                .enumerate()
                                .filter(|(_, &b)| b)
                                .map(|(i, _)| i)
                                .collect(),
                            w,
                        )
                    })
                    .collect();
                Election::new((0..m).map(|i| format!("c{i}")).collect(), ballots, k).unwrap()
            })
    }

    fn arb_instance() -> impl Strategy<Value = (Election, Vec<usize>, usize, usize)> {
        arb_election()
            .prop_flat_map(|e| {
                let m = e.candidate_count();
                let k = e.committee_size();
                (
                    Just(e),
                    prop::sample::subsequence((0..m).collect::<Vec<_>>(), k),
                )
            })
            .prop_flat_map(|(e, w)| {
                let outside: Vec<usize> = (0..e.candidate_count())
                    .filter(|c| !w.contains(c))
                    .collect();
                (
                    Just(e),
                    Just(w.clone()),
                    prop::sample::select(w),
                    prop::sample::select(outside),
                )
            })
    }

    proptest! {
        #[test]
        fn incremental_delta_matches_from_scratch((e, w, a, b) in arb_instance()) {
            let committee = Committee::new(&e, w.clone()).unwrap();
            let s = SatisfactionState::new(&e, committee.clone()).unwrap();
            let after = committee.swapped(Swap::new(a, b));
            let expect = pav_score_of(&e, after.members()) - pav_score_of(&e, committee.members());
            let got = s.delta(a, b).unwrap();
            prop_assert_eq!(&got, &expect);

            // antisymmetry
            let mut s2 = s.clone();
            s2.apply_swap(Swap::new(a, b)).unwrap();
            prop_assert!(s2.is_consistent());
            prop_assert_eq!(s2.delta(b, a).unwrap(), -got.clone());

            // quantization: multiple of 1 / lcm(1..=k)
            let l = BigInt::from(lcm_range(e.committee_size()));
            let scaled = &got * Rational::from_integer(l.clone());
            prop_assert!(scaled.is_integer());
            if got > int(0) {
                prop_assert!(got >= Rational::new(BigInt::one(), l));
            }
        }

        #[test]
        fn score_invariant_under_class_split((e, w, _a, _b) in arb_instance(), split in 0usize..50) {
            let idx = split % e.ballots().len();
            let mut ballots = e.ballots().to_vec();
            let b = ballots[idx].clone();
            prop_assume!(b.weight >= 2);
            ballots[idx].weight = 1;
            ballots.push(BallotClass::new(b.approvals.clone(), b.weight - 1));
            let split_e = Election::new(e.candidate_names().to_vec(), ballots, e.committee_size()).unwrap();
            prop_assert_eq!(pav_score_of(&e, &w), pav_score_of(&split_e, &w));
        }
    }
}
