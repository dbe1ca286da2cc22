//! The atomic elections `F(j,k)`, `E(j,k)` and the chain `E^t(j,k)`.

use super::{Builder, LabeledElection};
use crate::error::{Error, Result};

/// A ballot over abstract roles: dummies `d_1..`, pivot pair `a`/`b` and the
/// side candidates `x`/`y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct AtomBallot {
    /// 1-based dummy numbers, increasing.
    pub dummies: Vec<usize>,
    pub a: bool,
    pub b: bool,
    pub x: bool,
    pub y: bool,
}

impl AtomBallot {
    fn flipped(mut self) -> Self {
        std::mem::swap(&mut self.a, &mut self.b);
        self
    }
}

fn check_jk(j: usize, k: usize) -> Result<()> {
    if j == 0 || j >= k {
        return Err(Error::InvalidParams(format!(
            "need 1 <= j < k, got j = {j}, k = {k}"
        )));
    }
    Ok(())
}

/// Ballots of `F(j,k)` over `D_{k−1} ∪ {a, b}`. `F(0,k)` is the single
/// ballot `D_{k−1} ∪ {b}`, which makes the recursion yield the stated base
/// case `F(1,k) = {D_{k−1} ∪ {a}, D_{k−2} ∪ {b}}`.
pub(crate) fn f_ballots(j: usize, k: usize) -> Vec<AtomBallot> {
    debug_assert!(k >= 1);
    if j == 0 {
        return vec![AtomBallot {
            dummies: (1..k).collect(),
            a: false,
            b: true,
            x: false,
            y: false,
        }];
    }
    let mut out: Vec<AtomBallot> = f_ballots(j - 1, k)
        .into_iter()
        .map(AtomBallot::flipped)
        .collect();
    out.extend(f_ballots(j - 1, k - 1));
    out
}

/// Ballots of `E(j,k)` over `D_{k−2} ∪ {x, y, a, b}`; the first half
/// approves `x`, the second `y`, and voter `i` pairs with `i + 2^{j−1}`.
pub(crate) fn e_ballots(j: usize, k: usize) -> Vec<AtomBallot> {
    let base = f_ballots(j - 1, k - 1);
    let first = base.iter().cloned().map(|b| AtomBallot {
        x: true,
        ..b.flipped()
    });
    let second = base.iter().cloned().map(|b| AtomBallot { y: true, ..b });
    first.chain(second).collect()
}

/// `F(j,k)`: `2^j` unit-weight ballots, committee size `k`.
/// Candidates: `d1..d{k−1}`, `a`, `b`.
pub fn f_election(j: usize, k: usize) -> Result<LabeledElection> {
    check_jk(j, k)?;
    let mut builder = Builder::default();
    let dummies: Vec<usize> = (1..k).map(|l| builder.candidate(format!("d{l}"))).collect();
    let a = builder.candidate("a");
    let b = builder.candidate("b");
    for (v, ballot) in f_ballots(j, k).into_iter().enumerate() {
        let mut approvals: Vec<usize> = ballot.dummies.iter().map(|&l| dummies[l - 1]).collect();
        if ballot.a {
            approvals.push(a);
        }
        if ballot.b {
            approvals.push(b);
        }
        let group = if v < 1 << (j - 1) { "N1" } else { "N2" };
        builder.ballot(group, approvals, 1);
    }
    builder.finish(k, None)
}

/// `E(j,k)`: two merged copies of `F(j−1,k−1)` plus `x`/`y`.
/// Candidates: `d1..d{k−2}`, `x`, `y`, `a`, `b`.
pub fn e_election(j: usize, k: usize) -> Result<LabeledElection> {
    check_jk(j, k)?;
    let mut builder = Builder::default();
    let dummies: Vec<usize> = (1..k - 1)
        .map(|l| builder.candidate(format!("d{l}")))
        .collect();
    let x = builder.candidate("x");
    let y = builder.candidate("y");
    let a = builder.candidate("a");
    let b = builder.candidate("b");
    let ballots = e_ballots(j, k);
    let half = ballots.len() / 2;
    for (v, ballot) in ballots.into_iter().enumerate() {
        let mut approvals: Vec<usize> = ballot.dummies.iter().map(|&l| dummies[l - 1]).collect();
        for (flag, c) in [(ballot.a, a), (ballot.b, b), (ballot.x, x), (ballot.y, y)] {
            if flag {
                approvals.push(c);
            }
        }
        builder.ballot(if v < half { "N1" } else { "N2" }, approvals, 1);
    }
    let counterpart = (0..2 * half)
        .map(|v| if v < half { v + half } else { v - half })
        .collect();
    builder.finish(k, Some(counterpart))
}

/// One voter of `E^t(j,k)` over abstract roles: a contiguous run of chain
/// candidates `c_lo..=c_hi` (1-based), dummies and `x`/`y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct ChainBallot {
    pub copy: usize,
    pub dummies: Vec<usize>,
    pub chain: (usize, usize),
    pub x: bool,
    pub y: bool,
}

/// Copy `i` of `E(j,k)` has `a_i = c_i` and `b_i = c_{i+1}`, and after the
/// clone closure a voter approves `c_1..=c_i` or `c_{i+1}..=c_{t+1}`. Every
/// copy shares the same `x` and `y`.
pub(crate) fn chain_ballots(t: usize, j: usize, k: usize) -> Vec<ChainBallot> {
    let atoms = e_ballots(j, k);
    let mut out = Vec::with_capacity(t * atoms.len());
    for i in 1..=t {
        for atom in &atoms {
            debug_assert!(atom.a != atom.b);
            let chain = if atom.a { (1, i) } else { (i + 1, t + 1) };
            out.push(ChainBallot {
                copy: i,
                dummies: atom.dummies.clone(),
                chain,
                x: atom.x,
                y: atom.y,
            });
        }
    }
    out
}

/// `E^t(j,k)`: `t` chained copies of `E(j,k)`.
/// Candidates: `d1..d{k−2}`, `c1..c{t+1}`, `x`, `y`; groups `copy{i}`.
pub fn e_t_election(t: usize, j: usize, k: usize) -> Result<LabeledElection> {
    check_jk(j, k)?;
    if t == 0 {
        return Err(Error::InvalidParams("need t >= 1".into()));
    }
    let mut builder = Builder::default();
    let dummies: Vec<usize> = (1..k - 1)
        .map(|l| builder.candidate(format!("d{l}")))
        .collect();
    let chain: Vec<usize> = (1..=t + 1)
        .map(|i| builder.candidate(format!("c{i}")))
        .collect();
    let x = builder.candidate("x");
    let y = builder.candidate("y");
    let per_copy = 1usize << j;
    let half = per_copy / 2;
    for ballot in chain_ballots(t, j, k) {
        let mut approvals: Vec<usize> = ballot.dummies.iter().map(|&l| dummies[l - 1]).collect();
        approvals.extend((ballot.chain.0..=ballot.chain.1).map(|i| chain[i - 1]));
        if ballot.x {
            approvals.push(x);
        }
        if ballot.y {
            approvals.push(y);
        }
        builder.ballot(&format!("copy{}", ballot.copy), approvals, 1);
    }
    // counterpart pairs voters within each copy
    let counterpart = (0..t * per_copy)
        .map(|v| {
            let (base, off) = (v - v % per_copy, v % per_copy);
            if off < half {
                base + off + half
            } else {
                base + off - half
            }
        })
        .collect();
    builder.finish(k, Some(counterpart))
}
