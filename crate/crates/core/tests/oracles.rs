//! Library results checked against independent brute-force computations.

use distill::aepp::{aepp_joint_distribution, aepp_zz_fallback};
use distill::channels::{make_depolarizing, partial_transpose_diagonal, ppt_bell_diagonal, BellDiagDist};
use distill::pauli::{commutation_sign, shannon_entropy, symplectic_commutes};
use distill::recurrence::recurrence_step;
use distill::vv::{partition_even_odd, vv_best_over_permutations, vv_yield_iid};
use distill::{BellString, PauliDist4, PauliLabel, TwoPairDist};

// ---- dense Pauli matrices ----

#[derive(Clone, Copy, PartialEq, Debug)]
struct C(i8, i8);

impl C {
    fn mul(self, o: C) -> C {
        C(self.0 * o.0 - self.1 * o.1, self.0 * o.1 + self.1 * o.0)
    }
    fn add(self, o: C) -> C {
        C(self.0 + o.0, self.1 + o.1)
    }
}

type Mat = Vec<Vec<C>>;

fn pauli_matrix(l: PauliLabel) -> Mat {
    let (z, o, i) = (C(0, 0), C(1, 0), C(0, 1));
    match l {
        PauliLabel::I => vec![vec![o, z], vec![z, o]],
        PauliLabel::X => vec![vec![z, o], vec![o, z]],
        PauliLabel::Y => vec![vec![z, C(0, -1)], vec![i, z]],
        PauliLabel::Z => vec![vec![o, z], vec![z, C(-1, 0)]],
    }
}

fn kron(a: &Mat, b: &Mat) -> Mat {
    let (n, m) = (a.len(), b.len());
    let mut out = vec![vec![C(0, 0); n * m]; n * m];
    for i in 0..n {
        for j in 0..n {
            for k in 0..m {
                for l in 0..m {
                    out[i * m + k][j * m + l] = a[i][j].mul(b[k][l]);
                }
            }
        }
    }
    out
}

fn matmul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let mut out = vec![vec![C(0, 0); n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = C(0, 0);
            for k in 0..n {
                acc = acc.add(a[i][k].mul(b[k][j]));
            }
            out[i][j] = acc;
        }
    }
    out
}

fn dense(s: &BellString) -> Mat {
    let mut m = pauli_matrix(s.get(0));
    for i in 1..s.len() {
        m = kron(&m, &pauli_matrix(s.get(i)));
    }
    m
}

fn all_strings(n: usize) -> Vec<BellString> {
    (0..1usize << (2 * n)).map(|i| BellString::from_index(n, i).unwrap()).collect()
}

#[test]
fn symplectic_product_matches_matrix_commutator() {
    for n in 1..=3 {
        let strings = all_strings(n);
        let mats: Vec<Mat> = strings.iter().map(dense).collect();
        for (s, ms) in strings.iter().zip(&mats) {
            for (t, mt) in strings.iter().zip(&mats) {
                let commute = matmul(ms, mt) == matmul(mt, ms);
                assert_eq!(symplectic_commutes(s, t).unwrap() == 0, commute, "{s} vs {t}");
            }
        }
    }
}

#[test]
fn commutation_examples_from_matrices() {
    let sign = |a: &str, b: &str| {
        let (a, b): (BellString, BellString) = (a.parse().unwrap(), b.parse().unwrap());
        let (ma, mb) = (dense(&a), dense(&b));
        let oracle = if matmul(&ma, &mb) == matmul(&mb, &ma) { 1 } else { -1 };
        assert_eq!(commutation_sign(&a, &b).unwrap(), oracle);
        oracle
    };
    assert_eq!(sign("XZ", "ZZ"), -1);
    assert_eq!(sign("ZZZZ", "XIIX"), 1);
    assert_eq!(sign("Y", "Y"), 1);
    assert_eq!(sign("X", "Y"), -1);
}

#[test]
fn entropy_matches_careful_summation() {
    let p: [f64; 4] = [0.9, 0.1 / 3.0, 0.1 / 3.0, 0.1 / 3.0];
    // sum smallest terms first, in natural-log form converted at the end
    let mut terms: Vec<f64> = p.iter().map(|&x| -x * x.ln()).collect();
    terms.sort_by(|a, b| a.total_cmp(b));
    let nats: f64 = terms.iter().sum();
    assert!((shannon_entropy(&p).unwrap() - nats / std::f64::consts::LN_2).abs() < 1e-12);
}

// ---- circuit maps ----

type B = (u8, u8);

fn circuit_check(q: PauliLabel, (x1, z1): B, (x2, z2): B) -> (B, B) {
    match q {
        PauliLabel::Z => ((x1, z1 ^ z2), (x1 ^ x2, z2)),
        PauliLabel::X => ((z1, x1 ^ x2), (z1 ^ z2, x2)),
        PauliLabel::Y => ((x1 ^ z2, z1 ^ z2), (x1 ^ x2 ^ z1 ^ z2, z2)),
        PauliLabel::I => unreachable!(),
    }
}

fn bits(l: PauliLabel) -> B {
    let (x, z) = l.bits();
    (x as u8, z as u8)
}

fn label((x, z): B) -> usize {
    PauliLabel::from_bits(x == 1, z == 1).index()
}

fn enumerate(d: &PauliDist4, q: PauliLabel) -> ([f64; 4], [f64; 4]) {
    let p = d.probs();
    let (mut acc, mut rej) = ([0.0; 4], [0.0; 4]);
    for a in PauliLabel::ALL {
        for b in PauliLabel::ALL {
            let (kept, meas) = circuit_check(q, bits(a), bits(b));
            let w = p[a.index()] * p[b.index()];
            if meas.0 == 0 {
                acc[label(kept)] += w;
            } else {
                rej[label(kept)] += w;
            }
        }
    }
    (acc, rej)
}

#[test]
fn recurrence_matches_circuit_enumeration() {
    for d in [make_depolarizing(0.25).unwrap(), PauliDist4::new([0.61, 0.07, 0.2, 0.12]).unwrap()] {
        for q in PauliLabel::CHECKS {
            let step = recurrence_step(&d, q).unwrap();
            let (acc, rej) = enumerate(&d, q);
            let pass: f64 = acc.iter().sum();
            assert!((step.p_pass - pass).abs() < 1e-12);
            let rej_mass: f64 = rej.iter().sum();
            for k in 0..4 {
                assert!((step.accepted.probs()[k] - acc[k] / pass).abs() < 1e-12);
                assert!((step.rejected.unwrap().probs()[k] - rej[k] / rej_mass).abs() < 1e-12);
            }
        }
    }
}

/// Pushes all 256 four-pair errors through the ZZZZ and XXXX circuits.
fn four_pair_oracle(d: &PauliDist4) -> [[f64; 16]; 4] {
    let p = d.probs();
    let mut out = [[0.0; 16]; 4];
    for idx in 0..256usize {
        let ls: [PauliLabel; 4] = std::array::from_fn(|i| PauliLabel::ALL[(idx >> (2 * i)) & 3]);
        let w: f64 = ls.iter().map(|l| p[l.index()]).product();
        let [(x1, z1), (x2, z2), (x3, z3), (x4, z4)] = ls.map(bits);
        let r = (x1 ^ x3, z1 ^ z4);
        let t = (x2 ^ x3, z2 ^ z4);
        let b1 = x1 ^ x2 ^ x3 ^ x4;
        let b2 = z1 ^ z2 ^ z3 ^ z4;
        out[(2 * b1 + b2) as usize][4 * label(r) + label(t)] += w;
    }
    out
}

#[test]
fn four_pair_distribution_matches_circuit_enumeration() {
    for d in [make_depolarizing(0.3).unwrap(), PauliDist4::new([0.55, 0.2, 0.05, 0.2]).unwrap()] {
        let oracle = four_pair_oracle(&d);
        for (k, (b1, b2)) in [(false, false), (false, true), (true, false), (true, true)].into_iter().enumerate() {
            let mass: f64 = oracle[k].iter().sum();
            let (m, t) = aepp_joint_distribution(&d, b1, b2);
            assert!((m - mass).abs() < 1e-12);
            let t = t.unwrap();
            for j in 0..16 {
                assert!((t.probs()[j] - oracle[k][j] / mass).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn fallback_matches_circuit_enumeration() {
    let d = make_depolarizing(0.3).unwrap();
    let (acc, _) = enumerate(&d, PauliLabel::Z);
    let pass: f64 = acc.iter().sum();
    let f = aepp_zz_fallback(&d).probs();
    for k in 0..4 {
        assert!((f[k] - acc[k] / pass).abs() < 1e-12);
    }
}

// ---- PPT by the defining sign sum ----

fn n11(s: &BellString) -> usize {
    (0..s.len()).filter(|&i| s.get(i).bits() == (true, true)).count()
}

#[test]
fn ppt_sums_match_definition_on_three_pairs() {
    let n = 3;
    let strings = all_strings(n);
    let raw: Vec<f64> = (0..strings.len()).map(|i| ((i * 37 + 11) % 17) as f64 + 0.5).collect();
    let total: f64 = raw.iter().sum();
    let a = BellDiagDist::new(n, raw.iter().map(|x| x / total).collect()).unwrap();
    let fast = partial_transpose_diagonal(&a);
    for m in &strings {
        let slow: f64 = strings
            .iter()
            .map(|s| {
                let sign = if n11(&s.xor(m).unwrap()).is_multiple_of(2) { 1.0 } else { -1.0 };
                sign * a.weight(s)
            })
            .sum();
        assert!((fast[m.index()] - slow).abs() < 1e-12);
    }
    assert!(ppt_bell_diagonal(&BellDiagDist::uniform(3).unwrap()).unwrap());
}

#[test]
fn ppt_capacity_limit() {
    let a = BellDiagDist::uniform(9).unwrap();
    assert!(matches!(ppt_bell_diagonal(&a), Err(distill::DistillError::Capacity(_))));
}

// ---- interpolation protocol ----

#[test]
fn even_set_is_commutant_of_zz() {
    let zz: BellString = "ZZ".parse().unwrap();
    for a in PauliLabel::ALL {
        for b in PauliLabel::ALL {
            let split = partition_even_odd(&TwoPairDist::delta(a, b));
            let s = BellString::from_labels(&[a, b]).unwrap();
            let even = commutation_sign(&s, &zz).unwrap() == 1;
            assert_eq!(split.p_even == 1.0, even, "{a}{b}");
            assert_eq!(split.p_odd == 1.0, !even, "{a}{b}");
        }
    }
}

fn heap_permutations(k: usize, v: &mut [usize; 4], out: &mut Vec<[usize; 4]>) {
    if k == 1 {
        out.push(*v);
        return;
    }
    for i in 0..k {
        heap_permutations(k - 1, v, out);
        if k.is_multiple_of(2) {
            v.swap(i, k - 1);
        } else {
            v.swap(0, k - 1);
        }
    }
}

#[test]
fn permutation_search_matches_brute_force() {
    let d = PauliDist4::new([0.6, 0.25, 0.1, 0.05]).unwrap();
    let mut perms = Vec::new();
    heap_permutations(4, &mut [0, 1, 2, 3], &mut perms);
    assert_eq!(perms.len(), 24);
    let p = d.probs();
    let brute = perms
        .iter()
        .map(|s| vv_yield_iid(&PauliDist4::new([p[s[0]], p[s[1]], p[s[2]], p[s[3]]]).unwrap()))
        .fold(f64::NEG_INFINITY, f64::max);
    let (best, perm) = vv_best_over_permutations(&d);
    assert_eq!(best, brute);
    assert_eq!(vv_yield_iid(&d.permuted(&perm)), best);
}

#[test]
fn fallback_survivor_matches_four_pair_enumeration() {
    let d = PauliDist4::new([0.62, 0.1, 0.08, 0.2]).unwrap();
    let p = d.probs();
    let mut survivors = [[0.0; 4]; 2];
    for idx in 0..256usize {
        let ls: [PauliLabel; 4] = std::array::from_fn(|i| PauliLabel::ALL[(idx >> (2 * i)) & 3]);
        let w: f64 = ls.iter().map(|l| p[l.index()]).product();
        let [(x1, z1), (x2, z2), (x3, z3), (x4, z4)] = ls.map(bits);
        if x1 ^ x2 ^ x3 ^ x4 == 0 {
            continue;
        }
        let b2p = x1 ^ x2;
        let kept = if b2p == 0 { (x1, z1 ^ z2) } else { (x3, z3 ^ z4) };
        survivors[b2p as usize][label(kept)] += w;
    }
    let expect = aepp_zz_fallback(&d).probs();
    let m0: f64 = survivors[0].iter().sum();
    let m1: f64 = survivors[1].iter().sum();
    assert!((m0 - m1).abs() < 1e-15);
    for k in 0..4 {
        assert!((survivors[0][k] / m0 - expect[k]).abs() < 1e-12);
        assert!((survivors[1][k] / m1 - expect[k]).abs() < 1e-12);
    }
}
