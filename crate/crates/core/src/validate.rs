//! Randomized property suites over the analytic results, with a serializable report.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::aepp::{aepp_joint_distribution, aepp_zz_fallback};
use crate::channels::{make_depolarizing, ppt_bell_diagonal, ppt_one_pair, PauliDist4, TwoPairDist};
use crate::error::{domain, DistillError, Result};
use crate::mc::{simulate_aepp_checks, simulate_recurrence, McConfig};
use crate::pauli::{binary_entropy, entropy_bits, entropy_of_direct_sum, grouping_gain, amgm_ratio_gap, PauliLabel};
use crate::recurrence::{accepted_closed_form, enumerate_check, greedy_choice, greedy_sequence, recurrence_step};
use crate::vv::{odd_branch_deltas, vv_yield_general, vv_yield_iid, P_ODD};

/// Uniform sample from the probability simplex of dimension `N`.
pub fn random_simplex<const N: usize, R: Rng + ?Sized>(rng: &mut R) -> [f64; N] {
    let mut w = [0.0; N];
    for x in w.iter_mut() {
        *x = -(1.0 - rng.random::<f64>()).ln();
    }
    let total: f64 = w.iter().sum();
    w.map(|x| x / total)
}

pub fn random_pauli<R: Rng + ?Sized>(rng: &mut R) -> PauliDist4 {
    PauliDist4::renormalize(random_simplex::<4, R>(rng)).expect("positive weights")
}

/// Random channel with `1/2 < p_I < 1`, the rest split uniformly at random.
pub fn random_pauli_high_fidelity<R: Rng + ?Sized>(rng: &mut R) -> PauliDist4 {
    let p_i = loop {
        let v = 0.5 + 0.5 * rng.random::<f64>();
        if v > 0.5 && v < 1.0 {
            break v;
        }
    };
    let rest = random_simplex::<3, R>(rng);
    PauliDist4::renormalize([p_i, (1.0 - p_i) * rest[0], (1.0 - p_i) * rest[1], (1.0 - p_i) * rest[2]])
        .expect("positive weights")
}

/// Random two-pair distribution symmetric under exchanging the pairs.
pub fn random_swap_invariant<R: Rng + ?Sized>(rng: &mut R) -> TwoPairDist {
    let w = random_simplex::<16, R>(rng);
    let mut q = [0.0; 16];
    for i in 0..4 {
        for j in 0..4 {
            q[4 * i + j] = 0.5 * (w[4 * i + j] + w[4 * j + i]);
        }
    }
    TwoPairDist::renormalize(q).expect("positive weights")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Theorems,
    Lemmas,
    Mc,
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Theorems => "theorems",
            Suite::Lemmas => "lemmas",
            Suite::Mc => "mc",
        })
    }
}

impl FromStr for Suite {
    type Err = DistillError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "theorems" => Ok(Suite::Theorems),
            "lemmas" => Ok(Suite::Lemmas),
            "mc" => Ok(Suite::Mc),
            other => Err(domain(format!("unknown suite '{other}' (expected theorems, lemmas or mc)"))),
        }
    }
}

/// Outcome of one property over all its cases.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyResult {
    pub name: String,
    pub cases: u64,
    pub failures: u64,
    /// Largest deviation seen, in the property's own metric (absolute error,
    /// shortfall below a bound, or `|z|` for Monte-Carlo cells).
    pub worst: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub suite: Suite,
    pub seed: u64,
    pub cases: usize,
    pub properties: Vec<PropertyResult>,
    pub passed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValidationConfig {
    pub cases: usize,
    pub seed: u64,
    pub mc: McConfig,
}

impl Default for ValidationConfig {
    fn default() -> Self {
        Self { cases: 10_000, seed: 2024, mc: McConfig::default() }
    }
}

/// Accumulates case outcomes for one property. A case fails when its
/// deviation exceeds the tolerance or is not a number.
struct Tally {
    result: PropertyResult,
}

impl Tally {
    fn new(name: impl Into<String>, tolerance: f64) -> Self {
        Self { result: PropertyResult { name: name.into(), cases: 0, failures: 0, worst: 0.0, tolerance } }
    }

    fn record(&mut self, deviation: f64) {
        self.result.cases += 1;
        if !(deviation <= self.result.tolerance) {
            self.result.failures += 1;
        }
        if deviation.is_nan() || deviation > self.result.worst {
            self.result.worst = deviation;
        }
    }

    fn finish(self) -> PropertyResult {
        self.result
    }
}

pub fn run_suite(suite: Suite, cfg: &ValidationConfig) -> Result<ValidationReport> {
    let properties = match suite {
        Suite::Theorems => theorems(cfg),
        Suite::Lemmas => lemmas(cfg),
        Suite::Mc => mc(cfg)?,
    };
    let passed = properties.iter().all(|p| p.failures == 0);
    Ok(ValidationReport { suite, seed: cfg.seed, cases: cfg.cases, properties, passed })
}

fn theorems(cfg: &ValidationConfig) -> Vec<PropertyResult> {
    let mut rng = ChaCha20Rng::seed_from_u64(cfg.seed);
    let mut closed_form = Tally::new("recurrence closed form matches enumeration", 1e-12);
    let mut rejected = Tally::new("rejected state symmetric and PPT", 1e-12);
    for _ in 0..cfg.cases {
        let d = random_pauli(&mut rng);
        for q in PauliLabel::CHECKS {
            let (acc, p_pass) = accepted_closed_form(&d, q).expect("check label");
            let (a, _) = enumerate_check(&d, q);
            let mass: f64 = a.iter().sum();
            let mut dev = (mass - p_pass).abs();
            for k in 0..4 {
                dev = dev.max((a[k] / mass - acc.probs()[k]).abs());
            }
            closed_form.record(dev);

            let step = recurrence_step(&d, q).expect("check label");
            let dev = match step.rejected {
                Some(r) => {
                    let r = r.probs();
                    let sym = (r[0] - r[1]).abs().max((r[2] - r[3]).abs());
                    if ppt_one_pair(&PauliDist4::renormalize(r).expect("valid")) {
                        sym
                    } else {
                        f64::INFINITY
                    }
                }
                None => 0.0,
            };
            rejected.record(dev);
        }
    }

    let mut t1 = Tally::new("greedy step strictly raises fidelity", 0.0);
    let mut t2 = Tally::new("greedy check maximizes accepted fidelity", 1e-12);
    for _ in 0..cfg.cases {
        let d = random_pauli_high_fidelity(&mut rng);
        let g = greedy_choice(&d);
        let f_g = recurrence_step(&d, g).expect("check label").accepted.fidelity();
        // a non-positive gain is recorded as a positive deviation
        t1.record(if f_g > d.fidelity() { 0.0 } else { d.fidelity() - f_g + f64::MIN_POSITIVE });
        let best_other = PauliLabel::CHECKS
            .iter()
            .map(|&q| recurrence_step(&d, q).expect("check label").accepted.fidelity())
            .fold(f64::NEG_INFINITY, f64::max);
        t2.record((best_other - f_g).max(0.0));
    }

    let mut t3 = Tally::new("depolarizing greedy sequence alternates Z,Y", 0.0);
    for i in 1..=101 {
        let p = 0.5 * i as f64 / 102.0;
        let run = greedy_sequence(&make_depolarizing(p).expect("p in range"), 8);
        let ok = run.checks().iter().enumerate().all(|(k, &q)| q == if k % 2 == 0 { PauliLabel::Z } else { PauliLabel::Y });
        t3.record(if ok { 0.0 } else { 1.0 });
    }

    let mut t4_bound = Tally::new("two-pair yield at least hashing on swap-invariant input", 1e-12);
    let mut t4_gap = Tally::new("two-pair yield gap equals odd-branch grouping loss", 1e-10);
    for _ in 0..cfg.cases {
        let t = random_swap_invariant(&mut rng);
        let b = vv_yield_general(&t);
        let hashing = 1.0 - t.entropy() / 2.0;
        t4_bound.record((hashing - b.yield_).max(0.0));
        let (d0, d1) = odd_branch_deltas(&t);
        t4_gap.record(((b.yield_ - hashing) - b.p_odd / 4.0 * (d0 + d1)).abs());
    }

    let mut iid = Tally::new("general yield on product input equals i.i.d. form", 1e-10);
    let mut aepp_norm = Tally::new("four-pair branch masses sum to one", 1e-12);
    let mut aepp_ppt = Tally::new("discarded four-pair branch is PPT", 0.0);
    let mut aepp_fallback = Tally::new("fallback survivor equals Z-recurrence output", 0.0);
    for _ in 0..cfg.cases {
        let d = random_pauli(&mut rng);
        iid.record((vv_yield_general(&TwoPairDist::iid(&d)).yield_ - vv_yield_iid(&d)).abs());
        let total: f64 = [(false, false), (false, true), (true, false), (true, true)]
            .iter()
            .map(|&(b1, b2)| aepp_joint_distribution(&d, b1, b2).0)
            .sum();
        aepp_norm.record((total - 1.0).abs());
        let ppt = aepp_joint_distribution(&d, false, true)
            .1
            .is_none_or(|t| ppt_bell_diagonal(&t.to_bell_diag()).expect("two pairs"));
        aepp_ppt.record(if ppt { 0.0 } else { 1.0 });
        let z = recurrence_step(&d, PauliLabel::Z).expect("check label").accepted;
        aepp_fallback.record(aepp_zz_fallback(&d).max_abs_diff(&z));
    }

    [closed_form, t1, t2, t3, rejected, t4_bound, t4_gap, iid, aepp_norm, aepp_ppt, aepp_fallback]
        .into_iter()
        .map(Tally::finish)
        .collect()
}

fn lemmas(cfg: &ValidationConfig) -> Vec<PropertyResult> {
    let mut rng = ChaCha20Rng::seed_from_u64(cfg.seed);

    let mut grouping = Tally::new("merging two outcomes never raises entropy", 1e-15);
    let mut grouping_zero = Tally::new("merging with an empty outcome loses nothing", 1e-15);
    for &(x, y) in &[(0.0, 0.0), (0.0, 0.5), (0.3, 0.0), (0.5, 0.5), (1.0, 0.0)] {
        let g = grouping_gain(x, y).expect("nonnegative");
        grouping.record((-g).max(0.0));
        if x == 0.0 || y == 0.0 {
            grouping_zero.record(g.abs());
        }
    }
    for _ in 0..cfg.cases {
        let [x, y, _] = random_simplex::<3, _>(&mut rng);
        grouping.record((-grouping_gain(x, y).expect("nonnegative")).max(0.0));
    }

    let mut amgm = Tally::new("ratio inequality for ordered a >= c >= d >= b", 1e-15);
    for _ in 0..cfg.cases {
        let mut v: [f64; 4] = std::array::from_fn(|_| rng.random::<f64>());
        v.sort_by(|a, b| b.total_cmp(a));
        let [a, c, d, b] = v;
        amgm.record((-amgm_ratio_gap(a, b, c, d)).max(0.0));
    }

    let mut direct_sum = Tally::new("entropy of a direct sum", 1e-10);
    for _ in 0..cfg.cases {
        let p0: f64 = rng.random();
        let a = random_simplex::<3, _>(&mut rng);
        let b = random_simplex::<5, _>(&mut rng);
        let joined: Vec<f64> = a.iter().map(|x| p0 * x).chain(b.iter().map(|x| (1.0 - p0) * x)).collect();
        let formula = entropy_of_direct_sum(p0, entropy_bits(&a), entropy_bits(&b)).expect("valid");
        direct_sum.record((entropy_bits(&joined) - formula).abs());
    }

    let mut bookkeeping = Tally::new("two-pair entropy splits into branch entropies", 1e-10);
    for _ in 0..cfg.cases {
        let t = TwoPairDist::renormalize(random_simplex::<16, _>(&mut rng)).expect("positive weights");
        let b = vv_yield_general(&t);
        let block = |set: &[(PauliLabel, PauliLabel)], m: f64| {
            let v: Vec<f64> = set.iter().map(|&(x, y)| t.get(x, y) / m).collect();
            entropy_bits(&v)
        };
        let s_odd = binary_entropy((b.p0 / b.p_odd).clamp(0.0, 1.0)).expect("ratio")
            + b.p0 / b.p_odd * block(&P_ODD[..4], b.p0)
            + b.p1 / b.p_odd * block(&P_ODD[4..], b.p1);
        let split = entropy_of_direct_sum(b.p_even, b.s_even, s_odd).expect("valid");
        bookkeeping.record((t.entropy() - split).abs());
    }

    [grouping, grouping_zero, amgm, direct_sum, bookkeeping].into_iter().map(Tally::finish).collect()
}

fn mc(cfg: &ValidationConfig) -> Result<Vec<PropertyResult>> {
    let mc_cfg = McConfig { seed: cfg.seed, ..cfg.mc };
    let mut out = Vec::new();
    for p in [0.1, 0.25, 0.4] {
        let d = make_depolarizing(p)?;
        for q in PauliLabel::CHECKS {
            let r = simulate_recurrence(&d, q, &mc_cfg)?;
            out.push(mc_result(format!("{q}-recurrence, depolarizing p={p}"), &r));
        }
        let r = simulate_aepp_checks(&d, &mc_cfg)?;
        out.push(mc_result(format!("four-pair checks, depolarizing p={p}"), &r));
    }
    Ok(out)
}

fn mc_result(name: String, r: &crate::mc::McReport) -> PropertyResult {
    let failures =
        r.cells.iter().filter(|c| !(c.z_score.abs() < r.tolerance_sigmas)).count() as u64 + r.parity_mismatches;
    PropertyResult { name, cases: r.cells.len() as u64, failures, worst: r.max_z_score, tolerance: r.tolerance_sigmas }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_pass_small() {
        let cfg = ValidationConfig { cases: 300, seed: 1, mc: McConfig { samples: 20_000, ..McConfig::default() } };
        for suite in [Suite::Theorems, Suite::Lemmas, Suite::Mc] {
            let r = run_suite(suite, &cfg).unwrap();
            assert!(r.passed, "{suite}: {:?}", r.properties);
        }
    }

    #[test]
    fn generators_respect_constraints() {
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let d = random_pauli_high_fidelity(&mut rng);
            assert!(d.fidelity() > 0.5 && d.fidelity() < 1.0);
            assert!(random_swap_invariant(&mut rng).is_swap_invariant(1e-15));
        }
    }

    #[test]
    fn suite_names() {
        assert_eq!("MC".parse::<Suite>().unwrap(), Suite::Mc);
        assert!("all".parse::<Suite>().is_err());
    }
}
