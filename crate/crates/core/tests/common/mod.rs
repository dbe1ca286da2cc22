//! Reference implementations shared by the integration tests. Nothing here
//! goes through the library's scoring code.

#![allow(dead_code)]

use num_bigint::BigInt;
use pavls::election::{BallotClass, Election};
use pavls::{Committee, Rational, Swap};

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn harmonic(h: usize) -> Rational {
    let mut acc = q(0, 1);
    for i in 1..=h {
        acc += q(1, i as i64);
    }
    acc
}

/// Σ_v w_v · H(|A_v ∩ W|): weights are bucketed by satisfaction first,
/// then combined with the harmonic numbers.
pub fn score(e: &Election, members: &[usize]) -> Rational {
    let mut inside = vec![false; e.candidate_count()];
    for &c in members {
        inside[c] = true;
    }
    let mut by_h: Vec<u128> = vec![0; members.len() + 1];
    for b in e.ballots() {
        let h = b.approvals.iter().filter(|&&c| inside[c]).count();
        by_h[h] += b.weight as u128;
    }
    let mut acc = q(0, 1);
    for (h, &w) in by_h.iter().enumerate() {
        if w > 0 {
            acc += harmonic(h) * Rational::from_integer(BigInt::from(w));
        }
    }
    acc
}

pub fn delta(e: &Election, members: &[usize], swap: Swap) -> Rational {
    assert!(members.contains(&swap.out) && !members.contains(&swap.add));
    let after: Vec<usize> = members
        .iter()
        .map(|&c| if c == swap.out { swap.add } else { c })
        .collect();
    score(e, &after) - score(e, members)
}

/// `j! / ∏_{i=0}^{j} (k − i)`.
pub fn delta_formula(j: usize, k: usize) -> Rational {
    let mut r = q(1, 1);
    for i in 1..=j {
        r *= q(i as i64, 1);
    }
    for i in 0..=j {
        r /= q((k - i) as i64, 1);
    }
    r
}

pub fn two_blocs() -> Election {
    let names = (1..=5).map(|i| format!("c{i}")).collect();
    let ballots = vec![
        BallotClass::new(vec![0, 1, 2], 60),
        BallotClass::new(vec![3, 4], 30),
    ];
    Election::new(names, ballots, 3).unwrap()
}

pub fn blocs_and_singletons() -> Election {
    let names = (1..=11).map(|i| format!("c{i}")).collect();
    let mut ballots = vec![
        BallotClass::new(vec![0, 1, 2], 56),
        BallotClass::new(vec![3, 4], 28),
    ];
    ballots.extend((5..11).map(|c| BallotClass::new(vec![c], 1)));
    Election::new(names, ballots, 3).unwrap()
}

pub fn committee(e: &Election, members: &[usize]) -> Committee {
    Committee::new(e, members.iter().copied()).unwrap()
}
