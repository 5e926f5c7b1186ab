//! Four-pair adaptive check cascade: `ZZZZ`, then `XXXX` when it passes or a
//! `ZZ` check on two of the pairs when it fails.
//!
//! Per input group of four pairs:
//! - `b1 = 0, b2 = 0`: two correlated pairs survive and are hashed jointly;
//! - `b1 = 0, b2 = 1`: the two survivors are PPT and are discarded;
//! - `b1 = 1`: the `ZZ` fallback localizes the error to one half, and one
//!   pair survives with the distribution of a `Z`-recurrence accepted pair.

use serde::{Deserialize, Serialize};

use crate::channels::{PauliDist4, TwoPairDist};
use crate::pauli::PauliLabel;
use crate::recurrence::greedy_sequence;
use crate::vv::{vv_best_over_permutations, vv_yield_general};

/// Branch probabilities and post-selected states of one four-pair cascade.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AeppOutcome {
    pub prob_b1_0_b2_0: f64,
    /// `None` when the branch has zero probability.
    pub dist_b1_0_b2_0: Option<TwoPairDist>,
    /// Discarded branch.
    pub prob_b1_0_b2_1: f64,
    pub dist_b1_0_b2_1: Option<TwoPairDist>,
    pub prob_b1_1_b2p_0: f64,
    pub prob_b1_1_b2p_1: f64,
    /// State of the single surviving pair whenever `b1 = 1`.
    pub accepted_single: PauliDist4,
}

fn p_at(p: &[f64; 4], x: u8, z: u8) -> f64 {
    p[PauliLabel::from_bits(x == 1, z == 1).index()]
}

/// Probability of the outcome `(b1, b2)` and the normalized joint error
/// distribution `(r, t)` of the two surviving pairs.
///
/// The unnormalized weight of `(r, t)` sums over the first pair's error
/// `(x1, z1)`; the other three pairs are then fixed by `r`, `t`, `b1` and `b2`.
pub fn aepp_joint_distribution(d: &PauliDist4, b1: bool, b2: bool) -> (f64, Option<TwoPairDist>) {
    let p = d.probs();
    let (b1, b2) = (b1 as u8, b2 as u8);
    let mut q = [0.0; 16];
    for (ri, r) in PauliLabel::ALL.iter().enumerate() {
        let (rx, rz) = r.bits();
        let (rx, rz) = (rx as u8, rz as u8);
        for (ti, t) in PauliLabel::ALL.iter().enumerate() {
            let (tx, tz) = t.bits();
            let (tx, tz) = (tx as u8, tz as u8);
            let mut w = 0.0;
            for x1 in 0..2u8 {
                for z1 in 0..2u8 {
                    w += p_at(&p, x1, z1)
                        * p_at(&p, x1 ^ rx ^ tx, z1 ^ rz ^ tz)
                        * p_at(&p, x1 ^ rx, b2 ^ z1 ^ tz)
                        * p_at(&p, b1 ^ x1 ^ tx, z1 ^ rz);
                }
            }
            q[4 * ri + ti] = w;
        }
    }
    let mass: f64 = q.iter().sum();
    if mass > 0.0 {
        (mass, Some(TwoPairDist::from_array_unchecked(q.map(|w| w / mass))))
    } else {
        (0.0, None)
    }
}

/// Surviving pair after the `ZZ` fallback.
pub fn aepp_zz_fallback(d: &PauliDist4) -> PauliDist4 {
    let [pi, px, py, pz] = d.probs();
    let p_acc = (pi + pz).powi(2) + (px + py).powi(2);
    PauliDist4::from_array_unchecked([
        (pi * pi + pz * pz) / p_acc,
        (px * px + py * py) / p_acc,
        2.0 * py * px / p_acc,
        2.0 * pi * pz / p_acc,
    ])
}

pub fn aepp_outcome(d: &PauliDist4) -> AeppOutcome {
    let (prob_b1_0_b2_0, dist_b1_0_b2_0) = aepp_joint_distribution(d, false, false);
    let (prob_b1_0_b2_1, dist_b1_0_b2_1) = aepp_joint_distribution(d, false, true);
    // b2' is the x-parity of the first two pairs; with b1 = 1 the second half has the other parity
    let [pi, px, py, pz] = d.probs();
    let even = (pi + pz).powi(2) + (px + py).powi(2);
    let split = even * (1.0 - even);
    AeppOutcome {
        prob_b1_0_b2_0,
        dist_b1_0_b2_0,
        prob_b1_0_b2_1,
        dist_b1_0_b2_1,
        prob_b1_1_b2p_0: split,
        prob_b1_1_b2p_1: split,
        accepted_single: aepp_zz_fallback(d),
    }
}

/// Per-input-pair contributions of each branch to the cascade yield.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AeppYield {
    /// `P(0,0) * 2/4 * max(0, two-pair yield)`.
    pub branch_00: f64,
    /// `P(1, b2') * 1/4 * max(0, single-pair yield after n2 or n3 greedy rounds)`.
    pub fallback: [f64; 2],
    pub total: f64,
}

/// Yield of one surviving pair after `rounds` greedy recurrence rounds and
/// permutation-optimized hashing, per pair entering those rounds.
fn single_pair_yield(d: &PauliDist4, rounds: usize) -> f64 {
    let run = greedy_sequence(d, rounds);
    run.rate_factor() * vv_best_over_permutations(&run.output()).0
}

pub fn aepp_star4_breakdown(d: &PauliDist4, n2: usize, n3: usize) -> AeppYield {
    let out = aepp_outcome(d);
    let branch_00 = out
        .dist_b1_0_b2_0
        .map_or(0.0, |t| out.prob_b1_0_b2_0 * 0.5 * vv_yield_general(&t).yield_.max(0.0));
    let fallback = [
        out.prob_b1_1_b2p_0 * 0.25 * single_pair_yield(&out.accepted_single, n2).max(0.0),
        out.prob_b1_1_b2p_1 * 0.25 * single_pair_yield(&out.accepted_single, n3).max(0.0),
    ];
    AeppYield { branch_00, fallback, total: branch_00 + fallback[0] + fallback[1] }
}

/// Yield per input pair of the cascade followed by hashing on every surviving branch.
pub fn aepp_star4_yield(d: &PauliDist4, n2: usize, n3: usize) -> f64 {
    aepp_star4_breakdown(d, n2, n3).total
}
