//! Yield of the recurrence/hashing interpolation protocol on two-pair inputs.
//!
//! One `ZZ` parity check splits the two-pair state into an even branch (check
//! passes) and two odd branches told apart by a finite Bell measurement; each
//! branch is then hashed.

use serde::{Deserialize, Serialize};

use crate::channels::{PauliDist4, Perm4, PermutationGroup, TwoPairDist};
use crate::pauli::{entropy_bits, hb, PauliLabel, ProbVec};

use PauliLabel::{I, X, Y, Z};

/// Two-pair errors that commute with `ZZ`, in the order they are stored in the even distribution.
pub const P_EVEN: [(PauliLabel, PauliLabel); 8] = [(I, Z), (Z, I), (X, X), (Y, Y), (Z, Z), (I, I), (X, Y), (Y, X)];

/// Two-pair errors that anticommute with `ZZ`. The first four form the
/// `p0` branch, the last four the `p1` branch.
pub const P_ODD: [(PauliLabel, PauliLabel); 8] = [(Z, X), (I, X), (Z, Y), (I, Y), (X, Z), (Y, Z), (X, I), (Y, I)];

/// Each branch is a two-outcome distribution once the finite Bell measurement has fixed the rest.
const ODD0_GROUP: [(PauliLabel, PauliLabel); 2] = [(Z, X), (I, X)];
const ODD1_GROUP: [(PauliLabel, PauliLabel); 2] = [(X, Z), (Y, Z)];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvenOddSplit {
    pub p_even: f64,
    /// Renormalized over [`P_EVEN`]; empty when `p_even` is 0.
    pub even: ProbVec,
    pub p_odd: f64,
    /// Renormalized over [`P_ODD`]; empty when `p_odd` is 0.
    pub odd: ProbVec,
}

fn gather(t: &TwoPairDist, set: &[(PauliLabel, PauliLabel)]) -> (f64, ProbVec) {
    let w: Vec<f64> = set.iter().map(|&(a, b)| t.get(a, b)).collect();
    let mass: f64 = w.iter().sum();
    if mass > 0.0 {
        (mass, ProbVec::from_vec_unchecked(w.into_iter().map(|x| x / mass).collect()))
    } else {
        (0.0, ProbVec::from_vec_unchecked(Vec::new()))
    }
}

pub fn partition_even_odd(t: &TwoPairDist) -> EvenOddSplit {
    let (p_even, even) = gather(t, &P_EVEN);
    let (p_odd, odd) = gather(t, &P_ODD);
    EvenOddSplit { p_even, even, p_odd, odd }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VVBreakdown {
    pub p_even: f64,
    pub p_odd: f64,
    pub p0: f64,
    pub p1: f64,
    pub s_even: f64,
    pub s_odd0: f64,
    pub s_odd1: f64,
    /// Per input Bell pair; may be negative.
    #[serde(rename = "yield")]
    pub yield_: f64,
}

fn mass(t: &TwoPairDist, set: &[(PauliLabel, PauliLabel)]) -> f64 {
    set.iter().map(|&(a, b)| t.get(a, b)).sum()
}

/// Binary entropy of `part / whole`, with an empty branch contributing 0.
fn branch_entropy(part: f64, whole: f64) -> f64 {
    if whole > 0.0 {
        hb((part / whole).clamp(0.0, 1.0))
    } else {
        0.0
    }
}

pub fn vv_yield_general(t: &TwoPairDist) -> VVBreakdown {
    let split = partition_even_odd(t);
    let p0 = mass(t, &P_ODD[..4]);
    let p1 = mass(t, &P_ODD[4..]);
    let s_even = split.even.entropy();
    let s_odd0 = branch_entropy(mass(t, &ODD0_GROUP), p0);
    let s_odd1 = branch_entropy(mass(t, &ODD1_GROUP), p1);
    let yield_ = split.p_even * (1.0 - s_even / 2.0) - hb(split.p_even.clamp(0.0, 1.0)) / 2.0
        + p0 / 2.0 * (1.0 - s_odd0)
        + p1 / 2.0 * (1.0 - s_odd1);
    VVBreakdown { p_even: split.p_even, p_odd: split.p_odd, p0, p1, s_even, s_odd0, s_odd1, yield_ }
}

/// Hashing yield `1 - h(d)` of an i.i.d. channel.
pub fn hashing_yield(d: &PauliDist4) -> f64 {
    1.0 - d.entropy()
}

/// Hashing yield per pair of a correlated two-pair state, `1 - S(t)/2`.
pub fn hashing_yield_two_pair(t: &TwoPairDist) -> f64 {
    1.0 - t.entropy() / 2.0
}

/// Closed form of [`vv_yield_general`] on `d ⊗ d`.
pub fn vv_yield_iid(d: &PauliDist4) -> f64 {
    let [pi, px, py, pz] = d.probs();
    let (a, b) = (pi + pz, px + py);
    let p_odd = 2.0 * a * b;
    hashing_yield(d) + p_odd / 4.0 * (branch_entropy(pi, a) + branch_entropy(px, b))
}

pub fn vv_best_over_permutations(d: &PauliDist4) -> (f64, Perm4) {
    vv_best_in(d, PermutationGroup::Symmetric)
}

/// Best i.i.d. yield over the permutations of `d` reachable within `group`.
/// The first maximizer in the group's enumeration order wins ties.
pub fn vv_best_in(d: &PauliDist4, group: PermutationGroup) -> (f64, Perm4) {
    let mut best = (f64::NEG_INFINITY, Perm4::IDENTITY);
    for perm in group.elements() {
        let y = vv_yield_iid(&d.permuted(&perm));
        if y > best.0 {
            best = (y, perm);
        }
    }
    best
}

/// Entropy each odd branch gives up by hashing only its two-outcome grouping,
/// `(Δ0, Δ1)`. For swap-invariant inputs the gap between [`vv_yield_general`]
/// and two-pair hashing is `p0/2·Δ0 + p1/2·Δ1`.
pub fn odd_branch_deltas(t: &TwoPairDist) -> (f64, f64) {
    let split = |set: &[(PauliLabel, PauliLabel)], group: &[(PauliLabel, PauliLabel)]| {
        let m = mass(t, set);
        if m <= 0.0 {
            return 0.0;
        }
        let full: Vec<f64> = set.iter().map(|&(a, b)| t.get(a, b) / m).collect();
        entropy_bits(&full) - branch_entropy(mass(t, group), m)
    };
    (split(&P_ODD[..4], &ODD0_GROUP), split(&P_ODD[4..], &ODD1_GROUP))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::make_depolarizing;

    #[test]
    fn deltas() {
        let s = partition_even_odd(&TwoPairDist::delta(I, I));
        assert_eq!((s.p_even, s.p_odd), (1.0, 0.0));
        assert!(s.odd.is_empty());
        let s = partition_even_odd(&TwoPairDist::delta(X, I));
        assert_eq!((s.p_even, s.p_odd), (0.0, 1.0));
        assert_eq!(vv_yield_general(&TwoPairDist::delta(I, I)).yield_, 1.0);
    }

    #[test]
    fn sets_cover_all_sixteen() {
        let mut seen = [false; 16];
        for (a, b) in P_EVEN.iter().chain(P_ODD.iter()) {
            let k = 4 * a.index() + b.index();
            assert!(!seen[k]);
            seen[k] = true;
        }
    }

    #[test]
    fn iid_examples() {
        assert_eq!(vv_yield_iid(&PauliDist4::identity()), 1.0);
        let u = PauliDist4::new([0.25; 4]).unwrap();
        assert!((vv_yield_iid(&u) + 0.75).abs() < 1e-15);
        let d = make_depolarizing(0.2).unwrap();
        let g = vv_yield_general(&TwoPairDist::iid(&d));
        assert!((g.yield_ - vv_yield_iid(&d)).abs() < 1e-12);
        assert!((g.p0 - g.p1).abs() < 1e-15);
    }

    #[test]
    fn permutation_search() {
        let u = PauliDist4::new([0.25; 4]).unwrap();
        assert_eq!(vv_best_over_permutations(&u).1, Perm4::IDENTITY);
        let d = PauliDist4::new([0.6, 0.25, 0.1, 0.05]).unwrap();
        let (best, perm) = vv_best_over_permutations(&d);
        assert!(best >= vv_yield_iid(&d));
        assert_eq!(vv_yield_iid(&d.permuted(&perm)), best);
        let (restricted, _) = vv_best_in(&d, PermutationGroup::BilateralRotations);
        assert!(restricted <= best);
    }
}
