//! Two-pair `Q`-recurrence: one post-selected parity check that reshapes an
//! i.i.d. Pauli channel, plus the Greedy and Macchiavello round schedules.

use serde::{Deserialize, Serialize};

use crate::channels::PauliDist4;
use crate::error::{domain, Result};
use crate::mc::recurrence_map;
use crate::pauli::PauliLabel;

/// Outcome of one recurrence round on two i.i.d. pairs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RecurrenceStep {
    pub check: PauliLabel,
    pub accepted: PauliDist4,
    /// State left on the kept pair when the check fails; `None` if failure has zero probability.
    pub rejected: Option<PauliDist4>,
    pub p_pass: f64,
}

impl RecurrenceStep {
    /// Surviving pairs per input pair: one of two is consumed, and only passing blocks are kept.
    pub fn rate_factor(&self) -> f64 {
        self.p_pass / 2.0
    }
}

fn check_axis(q: PauliLabel) -> Result<usize> {
    match q {
        PauliLabel::I => Err(domain("recurrence check must be X, Y or Z")),
        // Q_0 = X, Q_1 = Y, Q_2 = Z
        other => Ok(other.index() - 1),
    }
}

/// Closed-form accepted distribution and pass probability of `Q`-recurrence.
pub fn accepted_closed_form(d: &PauliDist4, q: PauliLabel) -> Result<(PauliDist4, f64)> {
    let i = check_axis(q)?;
    let p = d.probs();
    let pq = |k: usize| p[1 + (k % 3)];
    let (p_i, p_q, p_q1, p_q2) = (p[0], pq(i), pq(i + 1), pq(i + 2));
    let p_pass = (p_i + p_q).powi(2) + (p_q1 + p_q2).powi(2);
    let mut out = [0.0; 4];
    out[0] = (p_i * p_i + p_q * p_q) / p_pass;
    out[1] = (p_q1 * p_q1 + p_q2 * p_q2) / p_pass;
    out[1 + (2 - i % 2)] = 2.0 * p_i * p_q / p_pass;
    out[1 + (1 + i % 2)] = 2.0 * p_q1 * p_q2 / p_pass;
    Ok((PauliDist4::from_array_unchecked(out), p_pass))
}

/// Joint enumeration over the 16 two-pair errors through the check circuit.
/// Returns unnormalized `(accepted, rejected)` weights on the kept pair.
pub(crate) fn enumerate_check(d: &PauliDist4, q: PauliLabel) -> ([f64; 4], [f64; 4]) {
    let p = d.probs();
    let mut acc = [0.0; 4];
    let mut rej = [0.0; 4];
    for e1 in PauliLabel::ALL {
        for e2 in PauliLabel::ALL {
            let w = p[e1.index()] * p[e2.index()];
            let (kept, measured) = recurrence_map(q, e1.bits(), e2.bits());
            let label = PauliLabel::from_bits(kept.0, kept.1).index();
            // equal local Z outcomes iff the measured pair has no X component
            if measured.0 {
                rej[label] += w;
            } else {
                acc[label] += w;
            }
        }
    }
    (acc, rej)
}

pub fn recurrence_step(d: &PauliDist4, q: PauliLabel) -> Result<RecurrenceStep> {
    let (accepted, p_pass) = accepted_closed_form(d, q)?;
    let (_, rej) = enumerate_check(d, q);
    let mass: f64 = rej.iter().sum();
    let rejected = (mass > 0.0).then(|| PauliDist4::from_array_unchecked(rej.map(|w| w / mass)));
    Ok(RecurrenceStep { check: q, accepted, rejected, p_pass })
}

/// Relative gap below which two error probabilities count as tied. Entries
/// that are equal in exact arithmetic can drift apart by a few ulps.
pub const GREEDY_TIE_TOL: f64 = 1e-12;

/// Check whose error probability is smallest; ties go to `Z`, then `Y`, then `X`.
pub fn greedy_choice(d: &PauliDist4) -> PauliLabel {
    let mut best = PauliLabel::Z;
    for q in [PauliLabel::Y, PauliLabel::X] {
        if d.get(best) - d.get(q) > GREEDY_TIE_TOL * d.get(best) {
            best = q;
        }
    }
    best
}

/// A schedule of recurrence rounds applied to the successive accepted states.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecurrenceRun {
    pub input: PauliDist4,
    pub steps: Vec<RecurrenceStep>,
    /// Set when the input fidelity is at most 1/2, where no improvement is guaranteed.
    pub fidelity_warning: bool,
}

impl RecurrenceRun {
    pub fn output(&self) -> PauliDist4 {
        self.steps.last().map_or(self.input, |s| s.accepted)
    }

    pub fn checks(&self) -> Vec<PauliLabel> {
        self.steps.iter().map(|s| s.check).collect()
    }

    /// Product of `p_pass / 2` over all rounds.
    pub fn rate_factor(&self) -> f64 {
        self.steps.iter().map(RecurrenceStep::rate_factor).product()
    }
}

fn run<F>(d: &PauliDist4, k: usize, mut pick: F) -> RecurrenceRun
where
    F: FnMut(usize, &PauliDist4) -> PauliLabel,
{
    let mut steps = Vec::with_capacity(k);
    let mut cur = *d;
    for round in 0..k {
        let q = pick(round, &cur);
        let step = recurrence_step(&cur, q).expect("schedule only picks X, Y or Z");
        cur = step.accepted;
        steps.push(step);
    }
    RecurrenceRun { input: *d, steps, fidelity_warning: d.fidelity() <= 0.5 }
}

pub fn greedy_sequence(d: &PauliDist4, k: usize) -> RecurrenceRun {
    run(d, k, |_, cur| greedy_choice(cur))
}

/// Z-recurrence rounds each followed by `B_x`, which amounts to alternating `Z` and `Y` checks.
pub fn macchiavello_sequence(d: &PauliDist4, k: usize) -> RecurrenceRun {
    run(d, k, |round, _| if round % 2 == 0 { PauliLabel::Z } else { PauliLabel::Y })
}
