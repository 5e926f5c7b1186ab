//! Monte-Carlo validation in the symplectic picture.
//!
//! Every check circuit used by the protocols acts on Bell strings as an affine
//! bit map, so a sampled Pauli error can be pushed through the circuit exactly
//! and the local measurement outcomes read off the measured pairs' bits. No
//! state vectors are involved.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::aepp::{aepp_joint_distribution, aepp_outcome};
use crate::channels::PauliDist4;
use crate::error::{domain, DistillError, Result};
use crate::pauli::{commutation_sign, BellString, PauliLabel};
use crate::recurrence::recurrence_step;

/// Symplectic bits `(x, z)` of one Bell pair.
pub type Bits = (bool, bool);

/// Name of the generator behind every simulation, recorded in reports.
pub const RNG_ALGORITHM: &str = "ChaCha20 (rand_chacha::ChaCha20Rng, seed_from_u64)";

/// Cells whose expected count falls below this are pooled within their group.
pub const MIN_EXPECTED_COUNT: f64 = 10.0;

/// Bilateral XOR with the first pair as control:
/// `|B_{x1,z1}>|B_{x2,z2}> -> |B_{x1,z1^z2}>|B_{x1^x2,z2}>`.
#[inline]
pub fn bxor_map(s1: Bits, s2: Bits) -> (Bits, Bits) {
    ((s1.0, s1.1 ^ s2.1), (s1.0 ^ s2.0, s2.1))
}

/// Hadamard on both halves: `|B_{x,z}> -> |B_{z,x}>`.
#[inline]
pub fn hadamard_map(s: Bits) -> Bits {
    (s.1, s.0)
}

/// Pushes the two-pair error through the `Q`-check circuit.
/// Returns `(kept pair, measured pair)`; the check passes iff the measured pair's x-bit is 0.
pub fn recurrence_map(q: PauliLabel, s1: Bits, s2: Bits) -> (Bits, Bits) {
    match q {
        PauliLabel::Z => bxor_map(s1, s2),
        PauliLabel::X => bxor_map(hadamard_map(s1), hadamard_map(s2)),
        PauliLabel::Y => {
            let (a, b) = bxor_map(s1, s2);
            let (a, b) = bxor_map(hadamard_map(a), b);
            (hadamard_map(a), b)
        }
        PauliLabel::I => (s1, s2),
    }
}

/// `ZZZZ` check circuit: bilateral XORs from pairs 1, 2, 3 onto pair 4 (which is measured).
pub fn zzzz_map(s: [Bits; 4]) -> [Bits; 4] {
    let mut out = s;
    for i in 0..3 {
        let (c, t) = bxor_map(out[i], out[3]);
        out[i] = c;
        out[3] = t;
    }
    out
}

/// `XXX` circuit applied after [`zzzz_map`]: XORs from pair 3 onto pairs 1 and 2,
/// then Hadamards on pair 3 (which is measured).
pub fn xxxx_after_zzzz_map(s: [Bits; 4]) -> [Bits; 4] {
    let mut out = s;
    for i in 0..2 {
        let (c, t) = bxor_map(out[2], out[i]);
        out[2] = c;
        out[i] = t;
    }
    out[2] = hadamard_map(out[2]);
    out
}

fn check_string(q: PauliLabel, n: usize, on: &[usize]) -> BellString {
    let mut s = BellString::identity(n).expect("small n");
    for &i in on {
        s.set(i, q);
    }
    s
}

fn error_string(bits: &[Bits]) -> BellString {
    BellString::from_pairs(bits).expect("small n")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McConfig {
    pub samples: u64,
    pub seed: u64,
    pub tolerance_sigmas: f64,
}

impl Default for McConfig {
    fn default() -> Self {
        Self { samples: 1_000_000, seed: 0x5EED_2024, tolerance_sigmas: 5.0 }
    }
}

impl McConfig {
    pub const MIN_SAMPLES: u64 = 1_000;

    pub fn validate(&self) -> Result<()> {
        if self.samples < Self::MIN_SAMPLES {
            return Err(DistillError::Config(format!(
                "{} samples is below the minimum of {}",
                self.samples,
                Self::MIN_SAMPLES
            )));
        }
        if !(self.tolerance_sigmas > 0.0) {
            return Err(DistillError::Config("tolerance_sigmas must be positive".into()));
        }
        Ok(())
    }
}

/// One tested frequency: `observed` hits out of `trials` against probability `expected`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McCell {
    pub group: String,
    pub label: String,
    pub observed: u64,
    pub trials: u64,
    pub expected: f64,
    pub z_score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McReport {
    pub rng: String,
    pub seed: u64,
    pub samples: u64,
    /// Empirical frequencies of the headline distribution (accepted state, or the
    /// `b1 = b2 = 0` branch table for the four-pair checks).
    pub empirical: Vec<f64>,
    pub analytic: Vec<f64>,
    pub p_pass_emp: f64,
    pub p_pass_ana: f64,
    pub cells: Vec<McCell>,
    pub max_z_score: f64,
    /// Samples where the circuit outcome disagreed with the symplectic commutation test.
    pub parity_mismatches: u64,
    pub tolerance_sigmas: f64,
    pub passed: bool,
}

/// Binomial z-score of `observed` successes in `trials` with success probability `p`.
pub fn binomial_z(observed: u64, trials: u64, p: f64) -> f64 {
    let n = trials as f64;
    let mean = n * p;
    let var = n * p * (1.0 - p);
    let diff = observed as f64 - mean;
    if var <= 0.0 {
        return if diff.abs() < 0.5 { 0.0 } else { f64::INFINITY };
    }
    diff / var.sqrt()
}

/// Builds the cells of one group, pooling the sparse ones.
fn group_cells(group: &str, labels: &[String], observed: &[u64], trials: u64, expected: &[f64]) -> Vec<McCell> {
    let mut cells = Vec::new();
    let (mut pool_obs, mut pool_p, mut pooled) = (0u64, 0.0f64, Vec::new());
    for ((label, &obs), &p) in labels.iter().zip(observed).zip(expected) {
        if trials as f64 * p < MIN_EXPECTED_COUNT {
            pool_obs += obs;
            pool_p += p;
            pooled.push(label.as_str());
        } else {
            cells.push(McCell {
                group: group.to_string(),
                label: label.clone(),
                observed: obs,
                trials,
                expected: p,
                z_score: binomial_z(obs, trials, p),
            });
        }
    }
    if !pooled.is_empty() {
        cells.push(McCell {
            group: group.to_string(),
            label: format!("pooled[{}]", pooled.join("+")),
            observed: pool_obs,
            trials,
            expected: pool_p.min(1.0),
            z_score: binomial_z(pool_obs, trials, pool_p.min(1.0)),
        });
    }
    cells
}

fn frequencies(counts: &[u64]) -> Vec<f64> {
    let total: u64 = counts.iter().sum();
    counts.iter().map(|&c| if total == 0 { 0.0 } else { c as f64 / total as f64 }).collect()
}

struct Sampler {
    rng: ChaCha20Rng,
    cdf: [f64; 4],
}

impl Sampler {
    fn new(d: &PauliDist4, seed: u64) -> Self {
        let p = d.probs();
        let mut cdf = [0.0; 4];
        let mut acc = 0.0;
        for i in 0..4 {
            acc += p[i];
            cdf[i] = acc;
        }
        cdf[3] = f64::INFINITY;
        Self { rng: ChaCha20Rng::seed_from_u64(seed), cdf }
    }

    #[inline]
    fn draw(&mut self) -> Bits {
        let u: f64 = self.rng.random();
        let i = self.cdf.iter().position(|&c| u < c).unwrap_or(3);
        PauliLabel::ALL[i].bits()
    }
}

fn label_names() -> Vec<String> {
    PauliLabel::ALL.iter().map(|l| l.to_string()).collect()
}

fn pair_names() -> Vec<String> {
    let mut v = Vec::with_capacity(16);
    for a in PauliLabel::ALL {
        for b in PauliLabel::ALL {
            v.push(format!("{a}{b}"));
        }
    }
    v
}

fn finish(mut report: McReport) -> McReport {
    report.max_z_score = report.cells.iter().map(|c| c.z_score.abs()).fold(0.0, f64::max);
    report.passed = report.max_z_score < report.tolerance_sigmas && report.parity_mismatches == 0;
    report
}

/// Samples two i.i.d. pairs per trial, applies the `Q`-check circuit, and
/// compares accepted/rejected statistics with the closed-form recurrence step.
pub fn simulate_recurrence(d: &PauliDist4, q: PauliLabel, cfg: &McConfig) -> Result<McReport> {
    cfg.validate()?;
    if q == PauliLabel::I {
        return Err(domain("recurrence check must be X, Y or Z"));
    }
    let analytic = recurrence_step(d, q)?;
    let check = check_string(q, 2, &[0, 1]);
    let mut sampler = Sampler::new(d, cfg.seed);
    let mut acc = [0u64; 4];
    let mut rej = [0u64; 4];
    let mut mismatches = 0u64;
    for _ in 0..cfg.samples {
        let (s1, s2) = (sampler.draw(), sampler.draw());
        let (kept, measured) = recurrence_map(q, s1, s2);
        let accepted = !measured.0;
        let commutes = commutation_sign(&error_string(&[s1, s2]), &check)? == 1;
        if accepted != commutes {
            mismatches += 1;
        }
        let idx = PauliLabel::from_bits(kept.0, kept.1).index();
        if accepted {
            acc[idx] += 1;
        } else {
            rej[idx] += 1;
        }
    }
    let n_acc: u64 = acc.iter().sum();
    let n_rej = cfg.samples - n_acc;
    let names = label_names();
    let mut cells = group_cells(
        "p_pass",
        &["pass".to_string()],
        &[n_acc],
        cfg.samples,
        &[analytic.p_pass],
    );
    cells.extend(group_cells("accepted", &names, &acc, n_acc, &analytic.accepted.probs()));
    if let Some(r) = analytic.rejected {
        cells.extend(group_cells("rejected", &names, &rej, n_rej, &r.probs()));
    } else if n_rej > 0 {
        cells.push(McCell {
            group: "rejected".into(),
            label: "impossible".into(),
            observed: n_rej,
            trials: cfg.samples,
            expected: 0.0,
            z_score: f64::INFINITY,
        });
    }
    Ok(finish(McReport {
        rng: RNG_ALGORITHM.to_string(),
        seed: cfg.seed,
        samples: cfg.samples,
        empirical: frequencies(&acc),
        analytic: analytic.accepted.probs().to_vec(),
        p_pass_emp: n_acc as f64 / cfg.samples as f64,
        p_pass_ana: analytic.p_pass,
        cells,
        max_z_score: 0.0,
        parity_mismatches: mismatches,
        tolerance_sigmas: cfg.tolerance_sigmas,
        passed: false,
    }))
}

/// Samples four i.i.d. pairs per trial and runs the `ZZZZ` check, then either
/// the `XXXX` check or the `ZZ` fallback, comparing every branch statistic
/// with the analytic four-pair distributions.
pub fn simulate_aepp_checks(d: &PauliDist4, cfg: &McConfig) -> Result<McReport> {
    cfg.validate()?;
    let zzzz = check_string(PauliLabel::Z, 4, &[0, 1, 2, 3]);
    let xxxx = check_string(PauliLabel::X, 4, &[0, 1, 2, 3]);
    let zzii = check_string(PauliLabel::Z, 4, &[0, 1]);
    let mut sampler = Sampler::new(d, cfg.seed);
    let mut branch = [0u64; 4];
    let mut joint = [[0u64; 16]; 2];
    let mut split = [0u64; 2];
    let mut survivor = [0u64; 4];
    let mut mismatches = 0u64;
    for _ in 0..cfg.samples {
        let s = [sampler.draw(), sampler.draw(), sampler.draw(), sampler.draw()];
        let err = error_string(&s);
        let s1 = zzzz_map(s);
        let b1 = s1[3].0;
        let s2 = xxxx_after_zzzz_map(s1);
        let b2 = s2[2].0;
        if b1 != (commutation_sign(&err, &zzzz)? == -1) || b2 != (commutation_sign(&err, &xxxx)? == -1) {
            mismatches += 1;
        }
        branch[2 * b1 as usize + b2 as usize] += 1;
        if !b1 {
            let r = PauliLabel::from_bits(s2[0].0, s2[0].1).index();
            let t = PauliLabel::from_bits(s2[1].0, s2[1].1).index();
            joint[b2 as usize][4 * r + t] += 1;
        } else {
            // ZZ on the first two pairs of the post-ZZZZ state
            let (first, second) = bxor_map(s1[0], s1[1]);
            let b2p = second.0;
            if b2p != (commutation_sign(&err, &zzii)? == -1) {
                mismatches += 1;
            }
            split[b2p as usize] += 1;
            let kept = if b2p { s1[2] } else { first };
            survivor[PauliLabel::from_bits(kept.0, kept.1).index()] += 1;
        }
    }

    let outcome = aepp_outcome(d);
    let masses: Vec<f64> = [(false, false), (false, true), (true, false), (true, true)]
        .iter()
        .map(|&(b1, b2)| aepp_joint_distribution(d, b1, b2).0)
        .collect();
    let tables: Vec<[f64; 16]> = [false, true]
        .iter()
        .map(|&b2| aepp_joint_distribution(d, false, b2).1.map_or([0.0; 16], |t| *t.probs()))
        .collect();

    let n_b1 = branch[2] + branch[3];
    let fallback_mass = outcome.prob_b1_1_b2p_0 + outcome.prob_b1_1_b2p_1;
    let split_ana = if fallback_mass > 0.0 {
        [outcome.prob_b1_1_b2p_0 / fallback_mass, outcome.prob_b1_1_b2p_1 / fallback_mass]
    } else {
        [0.5, 0.5]
    };
    let pairs = pair_names();
    let mut cells = group_cells(
        "branch",
        &["b1=0,b2=0", "b1=0,b2=1", "b1=1,b2=0", "b1=1,b2=1"].map(String::from),
        &branch,
        cfg.samples,
        &masses,
    );
    cells.extend(group_cells("joint b1=0,b2=0", &pairs, &joint[0], branch[0], &tables[0]));
    cells.extend(group_cells("joint b1=0,b2=1", &pairs, &joint[1], branch[1], &tables[1]));
    cells.extend(group_cells("fallback split", &["b2'=0", "b2'=1"].map(String::from), &split, n_b1, &split_ana));
    cells.extend(group_cells("fallback survivor", &label_names(), &survivor, n_b1, &outcome.accepted_single.probs()));

    Ok(finish(McReport {
        rng: RNG_ALGORITHM.to_string(),
        seed: cfg.seed,
        samples: cfg.samples,
        empirical: frequencies(&joint[0]),
        analytic: tables[0].to_vec(),
        p_pass_emp: branch[0] as f64 / cfg.samples as f64,
        p_pass_ana: masses[0],
        cells,
        max_z_score: 0.0,
        parity_mismatches: mismatches,
        tolerance_sigmas: cfg.tolerance_sigmas,
        passed: false,
    }))
}
