//! A quadratic-length sequence of `n/k²`-good swaps.
//!
//! Candidates `c[1,1..t+1]`, `c[2,1..k]`, `d1..d{k−2}` with `t = ⌊k/4⌋`.
//! Groups: `V1`, `V2` (t distinct ballots each), `S1..Sk` (one class of
//! weight t each), `U` (one class approving the dummies).

use super::{Builder, LabeledElection};
use crate::election::{Committee, Swap, SwapSequence};
use crate::error::{Error, Result};

fn check(k: usize) -> Result<usize> {
    if k < 4 {
        return Err(Error::UnsupportedSize(format!(
            "warm-up family needs k >= 4, got {k}"
        )));
    }
    Ok(k / 4)
}

pub fn warmup_election(k: usize) -> Result<LabeledElection> {
    let t = check(k)?;
    let mut b = Builder::default();
    let c1: Vec<usize> = (1..=t + 1)
        .map(|i| b.candidate(format!("c[1,{i}]")))
        .collect();
    let c2: Vec<usize> = (1..=k).map(|j| b.candidate(format!("c[2,{j}]"))).collect();
    let dummies: Vec<usize> = (1..=k - 2).map(|l| b.candidate(format!("d{l}"))).collect();
    let even: Vec<usize> = (1..=k).filter(|j| j % 2 == 0).map(|j| c2[j - 1]).collect();
    let odd: Vec<usize> = (1..=k).filter(|j| j % 2 == 1).map(|j| c2[j - 1]).collect();
    for i in 1..=t {
        let mut approvals = c1[i..].to_vec();
        approvals.extend(&even);
        b.ballot("V1", approvals, 1);
    }
    for i in 1..=t {
        let mut approvals = c1[..i].to_vec();
        approvals.extend(&odd);
        b.ballot("V2", approvals, 1);
    }
    for j in 1..=k {
        b.ballot(&format!("S{j}"), c2[j - 1..].to_vec(), t as u64);
    }
    let u = (k * k - 2 * k) / 4;
    b.ballot("U", dummies, u as u64);
    b.finish(k, None)
}

/// `W₀ = D_{k−2} ∪ {c[1,1], c[2,1]}`.
pub fn warmup_initial_committee(le: &LabeledElection) -> Result<Committee> {
    let k = le.election.committee_size();
    let mut members = vec![le.candidate("c[1,1]"), le.candidate("c[2,1]")];
    members.extend((1..=k - 2).map(|l| le.candidate(&format!("d{l}"))));
    Committee::new(&le.election, members)
}

/// `X = ⊕_{j=1}^{k−1} (Z_j ⊕ (c[2,j], c[2,j+1]))` with `Z_j = Y` for odd
/// `j` and `Y⁻¹` for even `j`, `Y = ⊕_{i=1}^{t} (c[1,i], c[1,i+1])`.
///
/// Candidate indices follow [`warmup_election`]'s layout.
pub fn warmup_sequence(k: usize) -> Result<SwapSequence> {
    let t = check(k)?;
    let c1 = |i: usize| i - 1;
    let c2 = |j: usize| t + 1 + j - 1;
    let y: SwapSequence = (1..=t).map(|i| Swap::new(c1(i), c1(i + 1))).collect();
    let y_inv = y.inverse();
    let mut x = SwapSequence::new();
    for j in 1..k {
        x.extend_from(if j % 2 == 1 { &y } else { &y_inv });
        x.push(Swap::new(c2(j), c2(j + 1)));
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::election::{validate_sequence, Epsilon, Rational};

    #[test]
    fn k4_sizes() {
        let le = warmup_election(4).unwrap();
        assert_eq!(le.election.voter_count(), 8);
        assert_eq!(le.election.candidate_count(), 8);
        assert_eq!(
            Epsilon::Threshold.value(&le.election),
            Rational::new(1.into(), 2.into())
        );
        assert_eq!(warmup_sequence(4).unwrap().len(), 6);
    }

    #[test]
    fn claims_hold_for_k8() {
        let k = 8;
        let t = k / 4;
        let le = warmup_election(k).unwrap();
        let w0 = warmup_initial_committee(&le).unwrap();
        let seq = warmup_sequence(k).unwrap();
        let r = validate_sequence(&le.election, &w0, &seq, &Epsilon::Threshold).unwrap();
        assert!(r.certified());
        let half = Rational::new(1.into(), 2.into());
        let column2 = Rational::new((t as i64).into(), 2.into());
        let c2_range = t + 1..t + 1 + k;
        for step in &r.steps {
            if c2_range.contains(&step.swap.out) {
                assert_eq!(step.delta, column2);
            } else {
                assert_eq!(step.delta, half);
            }
        }
    }

    #[test]
    fn small_k_rejected() {
        assert!(matches!(warmup_election(3), Err(Error::UnsupportedSize(_))));
        assert!(warmup_sequence(2).is_err());
    }
}
