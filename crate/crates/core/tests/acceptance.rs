//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any fails.

use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use distill::ad::{rci_amp_damp, uniform_grid, yield_dual_rail, yield_hamming1, yield_hamming2, yield_hamming2_star4};
use distill::aepp::{aepp_joint_distribution, aepp_zz_fallback};
use distill::channels::{make_depolarizing, ppt_bell_diagonal, ppt_one_pair};
use distill::combined::{sweep_combined, Bounds, ChannelFamily};
use distill::mc::{simulate_aepp_checks, simulate_recurrence, McConfig};
use distill::recurrence::{greedy_choice, greedy_sequence, recurrence_step};
use distill::validate::{random_pauli, random_pauli_high_fidelity, random_swap_invariant};
use distill::vv::{vv_yield_general, vv_yield_iid};
use distill::{PauliDist4, PauliLabel, TwoPairDist};

const SEED: u64 = 20_240_601;

struct Outcome {
    ok: bool,
    detail: String,
}

fn check(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

// ---- independent oracles ----

fn h(p: &[f64]) -> f64 {
    p.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.log2()).sum()
}

fn hb(x: f64) -> f64 {
    h(&[x, 1.0 - x])
}

/// Maximizer of `h_b(x) - h_b(g x)` found by bisection on the derivative,
/// which is strictly decreasing on (0, 1).
fn rci_oracle(g: f64) -> f64 {
    let deriv = |x: f64| ((1.0 - x) / x).log2() - g * ((1.0 - g * x) / (g * x)).log2();
    let (mut lo, mut hi) = (1e-300, 1.0 - 1e-16);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if deriv(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let x = 0.5 * (lo + hi);
    hb(x) - hb(g * x)
}

type B = (u8, u8);

fn bits(l: usize) -> B {
    // I, X, Y, Z
    [(0, 0), (1, 0), (1, 1), (0, 1)][l]
}

fn idx((x, z): B) -> usize {
    match (x, z) {
        (0, 0) => 0,
        (1, 0) => 1,
        (1, 1) => 2,
        _ => 3,
    }
}

/// Check circuits as bit maps on `(kept, measured)`.
fn circuit(q: PauliLabel, (x1, z1): B, (x2, z2): B) -> (B, B) {
    match q {
        PauliLabel::Z => ((x1, z1 ^ z2), (x1 ^ x2, z2)),
        PauliLabel::X => ((z1, x1 ^ x2), (z1 ^ z2, x2)),
        PauliLabel::Y => ((x1 ^ z2, z1 ^ z2), (x1 ^ x2 ^ z1 ^ z2, z2)),
        PauliLabel::I => unreachable!(),
    }
}

/// Unnormalized accepted and rejected weights of the kept pair.
fn enumerate(d: &PauliDist4, q: PauliLabel) -> ([f64; 4], [f64; 4]) {
    let p = d.probs();
    let (mut acc, mut rej) = ([0.0; 4], [0.0; 4]);
    for a in 0..4 {
        for b in 0..4 {
            let (kept, meas) = circuit(q, bits(a), bits(b));
            if meas.0 == 0 {
                acc[idx(kept)] += p[a] * p[b];
            } else {
                rej[idx(kept)] += p[a] * p[b];
            }
        }
    }
    (acc, rej)
}

// ---- criteria ----

fn c1() -> Outcome {
    let g = 2.0 / 3.0;
    let dual = yield_dual_rail(g).unwrap();
    let rci = rci_amp_damp(g).unwrap();
    let oracle = rci_oracle(g);
    check(
        (dual - 1.0 / 6.0).abs() <= 1e-15 && rci < 0.16148 && (rci - oracle).abs() <= 1e-9,
        format!("Y_dual={dual}, RCI={rci}, oracle RCI={oracle}"),
    )
}

fn c2() -> Outcome {
    let f = |n: u64| (n as f64).log2() / n as f64;
    let argmax = (1..=10_000u64).max_by(|&a, &b| f(a).total_cmp(&f(b))).unwrap();
    let decreasing = (3..10_000u64).all(|n| f(n + 1) < f(n));
    let library = (3..10_000u64).all(|n| yield_hamming1(n + 1, 0.0).unwrap() < yield_hamming1(n, 0.0).unwrap())
        && (1..=10_000u64).all(|n| yield_hamming1(n, 0.0).unwrap() <= yield_hamming1(3, 0.0).unwrap());
    check(argmax == 3 && decreasing && library, format!("argmax n={argmax}, strictly decreasing from 3: {decreasing}"))
}

fn c3() -> Outcome {
    let tol = 1e-9;
    let grid = uniform_grid(0.0, 1.0, 2001);
    let (mut h6, mut h4, mut star) = (Vec::new(), 0, 0);
    for &g in &grid {
        let rci = rci_amp_damp(g).unwrap();
        if yield_hamming2(6, g).unwrap() - rci > tol {
            h6.push(g);
        }
        if yield_hamming2(4, g).unwrap() - rci > tol {
            h4 += 1;
        }
        if yield_hamming2_star4(g).unwrap() - rci > tol {
            star += 1;
        }
    }
    let interval = match (h6.first(), h6.last()) {
        (Some(a), Some(b)) => format!("[{a}, {b}] ({} points)", h6.len()),
        _ => "none".into(),
    };
    check(!h6.is_empty() && h4 == 0 && star == 0, format!("H2(6) advantage on {interval}; H2(4) wins {h4}, H2*(4) wins {star}"))
}

fn c4() -> Outcome {
    let mut rng = ChaCha20Rng::seed_from_u64(SEED);
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let d = random_pauli(&mut rng);
        for q in PauliLabel::CHECKS {
            let s = recurrence_step(&d, q).unwrap();
            let (acc, _) = enumerate(&d, q);
            let pass: f64 = acc.iter().sum();
            worst = worst.max((s.p_pass - pass).abs());
            for k in 0..4 {
                worst = worst.max((s.accepted.probs()[k] - acc[k] / pass).abs());
            }
        }
    }
    check(worst <= 1e-12, format!("max deviation {worst:e} over 30000 checks"))
}

fn c5() -> Outcome {
    let mut rng = ChaCha20Rng::seed_from_u64(SEED + 1);
    let (mut not_improved, mut not_best) = (0, 0);
    let mut worst_shortfall: f64 = 0.0;
    for _ in 0..100_000 {
        let d = random_pauli_high_fidelity(&mut rng);
        let fid = |q: PauliLabel| {
            let (acc, _) = enumerate(&d, q);
            acc[0] / acc.iter().sum::<f64>()
        };
        let g = greedy_choice(&d);
        let fg = fid(g);
        if !(fg > d.probs()[0]) {
            not_improved += 1;
        }
        let best = PauliLabel::CHECKS.iter().map(|&q| fid(q)).fold(f64::NEG_INFINITY, f64::max);
        worst_shortfall = worst_shortfall.max(best - fg);
        if fg < best - 1e-12 {
            not_best += 1;
        }
    }
    check(
        not_improved == 0 && not_best == 0,
        format!("100000 channels: {not_improved} without gain, {not_best} suboptimal (worst shortfall {worst_shortfall:e})"),
    )
}

fn c6() -> Outcome {
    use PauliLabel::{Y, Z};
    let expected = [Z, Y, Z, Y, Z, Y, Z, Y];
    let bad: Vec<f64> = (1..=101)
        .map(|i| 0.5 * i as f64 / 102.0)
        .filter(|&p| greedy_sequence(&make_depolarizing(p).unwrap(), 8).checks() != expected)
        .collect();
    check(bad.is_empty(), format!("{} of 101 points deviate from Z,Y,Z,Y,Z,Y,Z,Y {:?}", bad.len(), bad))
}

fn c7() -> Outcome {
    let mut rng = ChaCha20Rng::seed_from_u64(SEED + 2);
    let (mut worst, mut npt, mut mismatch): (f64, u32, f64) = (0.0, 0, 0.0);
    for _ in 0..10_000 {
        let d = random_pauli(&mut rng);
        for q in PauliLabel::CHECKS {
            let (_, rej) = enumerate(&d, q);
            let mass: f64 = rej.iter().sum();
            if mass == 0.0 {
                continue;
            }
            let r = recurrence_step(&d, q).unwrap().rejected.unwrap();
            let p = r.probs();
            for k in 0..4 {
                mismatch = mismatch.max((p[k] - rej[k] / mass).abs());
            }
            worst = worst.max((p[0] - p[1]).abs()).max((p[2] - p[3]).abs());
            if !ppt_one_pair(&r) {
                npt += 1;
            }
        }
    }
    check(
        worst <= 1e-12 && npt == 0 && mismatch <= 1e-12,
        format!("symmetry deviation {worst:e}, NPT count {npt}, oracle deviation {mismatch:e}"),
    )
}

fn c8() -> Outcome {
    let mut rng = ChaCha20Rng::seed_from_u64(SEED + 3);
    let (mut below, mut worst_gap): (u32, f64) = (0, 0.0);
    for _ in 0..10_000 {
        let t = random_swap_invariant(&mut rng);
        let q = t.probs();
        let at = |a: usize, b: usize| q[4 * a + b];
        let (i, x, y, z) = (0, 1, 2, 3);
        let odd0 = [at(z, x), at(i, x), at(z, y), at(i, y)];
        let odd1 = [at(x, z), at(y, z), at(x, i), at(y, i)];
        let p0: f64 = odd0.iter().sum();
        let p1: f64 = odd1.iter().sum();
        let delta = |v: &[f64; 4], m: f64| h(&v.map(|w| w / m)) - hb((v[0] + v[1]) / m);
        let (d0, d1) = (delta(&odd0, p0), delta(&odd1, p1));
        let hashing = 1.0 - h(q) / 2.0;
        let y_vv = vv_yield_general(&t).yield_;
        if y_vv < hashing - 1e-12 {
            below += 1;
        }
        worst_gap = worst_gap.max(((y_vv - hashing) - (p0 + p1) / 4.0 * (d0 + d1)).abs());
    }
    check(below == 0 && worst_gap <= 1e-10, format!("{below} below hashing; gap identity deviation {worst_gap:e}"))
}

fn c9() -> Outcome {
    let mut rng = ChaCha20Rng::seed_from_u64(SEED + 4);
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let d = random_pauli(&mut rng);
        worst = worst.max((vv_yield_general(&TwoPairDist::iid(&d)).yield_ - vv_yield_iid(&d)).abs());
    }
    check(worst <= 1e-10, format!("max deviation {worst:e}"))
}

fn c10() -> Outcome {
    let mut rng = ChaCha20Rng::seed_from_u64(SEED + 5);
    let (mut worst_sum, mut npt, mut inexact): (f64, u32, u32) = (0.0, 0, 0);
    for k in 0..10_000 {
        let d = if k == 0 { make_depolarizing(0.3).unwrap() } else { random_pauli(&mut rng) };
        let masses: Vec<f64> = [(false, false), (false, true), (true, false), (true, true)]
            .iter()
            .map(|&(b1, b2)| aepp_joint_distribution(&d, b1, b2).0)
            .collect();
        worst_sum = worst_sum.max((masses.iter().sum::<f64>() - 1.0).abs());
        if let Some(t) = aepp_joint_distribution(&d, false, true).1 {
            if !ppt_bell_diagonal(&t.to_bell_diag()).unwrap() {
                npt += 1;
            }
        }
        if aepp_zz_fallback(&d).probs() != recurrence_step(&d, PauliLabel::Z).unwrap().accepted.probs() {
            inexact += 1;
        }
    }
    check(
        worst_sum <= 1e-12 && npt == 0 && inexact == 0,
        format!("mass deviation {worst_sum:e}, NPT discarded states {npt}, fallback mismatches {inexact}"),
    )
}

fn c11() -> Outcome {
    let cfg = McConfig { samples: 1_000_000, seed: SEED, tolerance_sigmas: 5.0 };
    let (mut worst, mut cells, mut mismatches, mut failed) = (0.0f64, 0usize, 0u64, Vec::new());
    for p in [0.1, 0.25, 0.4] {
        let d = make_depolarizing(p).unwrap();
        let mut reports: Vec<(String, distill::mc::McReport)> = PauliLabel::CHECKS
            .iter()
            .map(|&q| (format!("{q} p={p}"), simulate_recurrence(&d, q, &cfg).unwrap()))
            .collect();
        reports.push((format!("four-pair p={p}"), simulate_aepp_checks(&d, &cfg).unwrap()));
        for (name, r) in reports {
            worst = worst.max(r.max_z_score);
            cells += r.cells.len();
            mismatches += r.parity_mismatches;
            if r.cells.iter().any(|c| !(c.z_score.abs() < 5.0)) {
                failed.push(name);
            }
        }
    }
    check(
        failed.is_empty() && mismatches == 0,
        format!("{cells} cells, max |z| = {worst:.3}, parity mismatches {mismatches}, failing runs {failed:?}"),
    )
}

fn c12() -> Outcome {
    let bounds = Bounds::default();
    let depol = sweep_combined(ChannelFamily::Depolarizing, &uniform_grid(0.2, 0.5, 101), &bounds).unwrap();
    let (mut dominated, mut strict) = (true, 0);
    for r in &depol.rows {
        let base = r[1].max(r[2]);
        dominated &= r[3] >= base - 1e-9;
        if r[3] > base + 1e-9 {
            strict += 1;
        }
    }
    let xz = sweep_combined(ChannelFamily::XZ, &uniform_grid(0.0, 0.5, 101), &bounds).unwrap();
    let greedy_ok = xz.rows.iter().all(|r| r[2] >= r[1] - 1e-9);
    let greedy_strict = xz.rows.iter().filter(|r| r[2] > r[1] + 1e-9).count();
    check(
        dominated && strict >= 1 && greedy_ok && greedy_strict >= 1,
        format!(
            "depolarizing [0.2,0.5]: dominance {dominated}, strict at {strict}/101; XZ [0,0.5]: Greedy >= Macchiavello {greedy_ok}, strict at {greedy_strict}/101"
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Duration); 12] = [
        ("dual-rail vs reverse coherent information at gamma=2/3", c1, Duration::from_secs(1)),
        ("(log2 n)/n peaks at n=3", c2, Duration::from_secs(1)),
        ("Hamming-2 advantage only for n=6", c3, Duration::MAX),
        ("recurrence closed form equals circuit enumeration", c4, Duration::MAX),
        ("greedy step improves and maximizes fidelity", c5, Duration::MAX),
        ("depolarizing greedy schedule is Z,Y,Z,Y,...", c6, Duration::MAX),
        ("rejected state is symmetric and PPT", c7, Duration::MAX),
        ("swap-invariant input: yield vs hashing gap", c8, Duration::MAX),
        ("general yield on product input equals i.i.d. form", c9, Duration::MAX),
        ("four-pair cascade normalization and PPT", c10, Duration::MAX),
        ("Monte-Carlo agreement", c11, Duration::from_secs(60)),
        ("combined-protocol and greedy dominance curves", c12, Duration::from_secs(300)),
    ];
    let mut all_ok = true;
    for (i, (name, run, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let ok = out.ok && elapsed < limit;
        all_ok &= ok;
        let budget = if limit == Duration::MAX { String::new() } else { format!(", limit {limit:?}") };
        println!(
            "{} {:>2}. {name}: {} ({:.3?}{budget})",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            out.detail,
            elapsed
        );
    }
    if !all_ok {
        std::process::exit(1);
    }
}
