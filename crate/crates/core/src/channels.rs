//! Pauli channel families, Bell-diagonal states and the operations that act on
//! them: bilateral rotations, label permutations, and PPT tests.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{domain, DistillError, Result};
use crate::pauli::{BellString, PauliLabel, ProbVec};

/// Eigenvalues of a partial transpose are treated as nonnegative down to this.
pub const PPT_TOL: f64 = 1e-12;

/// Error probabilities `[p_I, p_X, p_Y, p_Z]` of a single-qubit Pauli channel,
/// equivalently the Bell-diagonal state obtained by sending half a Bell pair through it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 4]", into = "[f64; 4]")]
pub struct PauliDist4([f64; 4]);

impl PauliDist4 {
    pub fn new(p: [f64; 4]) -> Result<Self> {
        ProbVec::new(p.to_vec())?;
        Ok(Self(p))
    }

    pub fn renormalize(p: [f64; 4]) -> Result<Self> {
        let v = ProbVec::renormalize(p.to_vec())?;
        let s = v.as_slice();
        Ok(Self([s[0], s[1], s[2], s[3]]))
    }

    pub fn from_slice(p: &[f64]) -> Result<Self> {
        let arr: [f64; 4] = p
            .try_into()
            .map_err(|_| DistillError::Contract(format!("expected 4 probabilities, got {}", p.len())))?;
        Self::new(arr)
    }

    pub(crate) fn from_array_unchecked(p: [f64; 4]) -> Self {
        Self(p)
    }

    pub fn identity() -> Self {
        Self([1.0, 0.0, 0.0, 0.0])
    }

    #[inline]
    pub fn probs(&self) -> [f64; 4] {
        self.0
    }

    #[inline]
    pub fn get(&self, label: PauliLabel) -> f64 {
        self.0[label.index()]
    }

    #[inline]
    pub fn fidelity(&self) -> f64 {
        self.0[0]
    }

    pub fn entropy(&self) -> f64 {
        crate::pauli::entropy_bits(&self.0)
    }

    pub fn to_probvec(&self) -> ProbVec {
        ProbVec::from_vec_unchecked(self.0.to_vec())
    }

    pub fn permuted(&self, perm: &Perm4) -> Self {
        Self(perm.apply(&self.0))
    }

    pub fn max_abs_diff(&self, other: &PauliDist4) -> f64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

impl TryFrom<[f64; 4]> for PauliDist4 {
    type Error = DistillError;

    fn try_from(p: [f64; 4]) -> Result<Self> {
        PauliDist4::new(p)
    }
}

impl From<PauliDist4> for [f64; 4] {
    fn from(d: PauliDist4) -> Self {
        d.0
    }
}

fn check_unit(name: &str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(domain(format!("{name} = {p} outside [0, 1]")));
    }
    Ok(())
}

/// `[1-p, p/3, p/3, p/3]`.
pub fn make_depolarizing(p: f64) -> Result<PauliDist4> {
    check_unit("depolarizing p", p)?;
    let e = p / 3.0;
    Ok(PauliDist4([1.0 - p, e, e, e]))
}

/// `[1-p, p/2, 0, p/2]`.
pub fn make_xz(p: f64) -> Result<PauliDist4> {
    check_unit("XZ p", p)?;
    Ok(PauliDist4([1.0 - p, p / 2.0, 0.0, p / 2.0]))
}

pub fn entanglement_fidelity(d: &PauliDist4) -> f64 {
    d.fidelity()
}

/// A relabeling of the four Pauli labels: `apply(v)[i] = v[self.0[i]]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Perm4(pub [u8; 4]);

impl Perm4 {
    pub const IDENTITY: Perm4 = Perm4([0, 1, 2, 3]);

    pub fn apply(&self, v: &[f64; 4]) -> [f64; 4] {
        [v[self.0[0] as usize], v[self.0[1] as usize], v[self.0[2] as usize], v[self.0[3] as usize]]
    }

    /// `a.then(b)` applies `a` first and `b` second.
    pub fn then(&self, next: &Perm4) -> Perm4 {
        let mut out = [0u8; 4];
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.0[next.0[i] as usize];
        }
        Perm4(out)
    }

    pub fn all() -> Vec<Perm4> {
        let mut out = Vec::with_capacity(24);
        for a in 0..4u8 {
            for b in 0..4u8 {
                for c in 0..4u8 {
                    for d in 0..4u8 {
                        let p = [a, b, c, d];
                        if (0..4).all(|i| p[i + 1..].iter().all(|&q| q != p[i])) {
                            out.push(Perm4(p));
                        }
                    }
                }
            }
        }
        out
    }

    /// Permutation induced by the bilateral rotation `B_Q`: the error `P` becomes
    /// `R_Q P R_Q^T`, so `I<->X` for `B_x`, `X<->Z` for `B_y`, `I<->Z` for `B_z`.
    pub fn bilateral(q: PauliLabel) -> Result<Perm4> {
        match q {
            PauliLabel::I => Err(domain("bilateral rotation axis must be X, Y or Z")),
            PauliLabel::X => Ok(Perm4([1, 0, 2, 3])),
            PauliLabel::Y => Ok(Perm4([0, 3, 2, 1])),
            PauliLabel::Z => Ok(Perm4([3, 1, 2, 0])),
        }
    }

    /// Permutation induced by Bob applying the Pauli `sigma`: error `P` becomes `sigma P`.
    pub fn local_pauli(sigma: PauliLabel) -> Perm4 {
        let mut out = [0u8; 4];
        for (i, o) in out.iter_mut().enumerate() {
            *o = sigma.product(PauliLabel::ALL[i]).index() as u8;
        }
        Perm4(out)
    }
}

/// Which relabelings an optimizer may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum PermutationGroup {
    /// All 24 permutations of `[p_I, p_X, p_Y, p_Z]`.
    #[default]
    Symmetric,
    /// Only the group generated by the three bilateral rotations.
    BilateralRotations,
}

impl PermutationGroup {
    pub fn elements(self) -> Vec<Perm4> {
        match self {
            PermutationGroup::Symmetric => Perm4::all(),
            PermutationGroup::BilateralRotations => {
                let gens: Vec<Perm4> =
                    PauliLabel::CHECKS.iter().map(|&q| Perm4::bilateral(q).unwrap()).collect();
                generated_group(&gens)
            }
        }
    }
}

/// Closure of a set of generators under composition, starting from the identity.
pub fn generated_group(generators: &[Perm4]) -> Vec<Perm4> {
    let mut seen: HashSet<Perm4> = HashSet::from([Perm4::IDENTITY]);
    let mut order = vec![Perm4::IDENTITY];
    let mut frontier = vec![Perm4::IDENTITY];
    while let Some(p) = frontier.pop() {
        for g in generators {
            let q = p.then(g);
            if seen.insert(q) {
                order.push(q);
                frontier.push(q);
            }
        }
    }
    order
}

pub fn bilateral_rotate(d: &PauliDist4, q: PauliLabel) -> Result<PauliDist4> {
    Ok(d.permuted(&Perm4::bilateral(q)?))
}

/// Distinct distributions reachable by relabeling `d` (all 24 permutations).
pub fn reachable_permutations(d: &PauliDist4) -> Vec<PauliDist4> {
    reachable_permutations_in(d, PermutationGroup::Symmetric)
}

pub fn reachable_permutations_in(d: &PauliDist4, group: PermutationGroup) -> Vec<PauliDist4> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for perm in group.elements() {
        let v = d.permuted(&perm);
        if seen.insert(v.0.map(f64::to_bits)) {
            out.push(v);
        }
    }
    out
}

/// Closed-form eigenvalues of the partial transpose of the one-pair Bell-diagonal state,
/// `q1 +- q4` and `q2 +- q3`.
pub fn partial_transpose_eigenvalues(d: &PauliDist4) -> [f64; 4] {
    let [pi, px, py, pz] = d.0;
    let q1 = (pi + pz) / 2.0;
    let q2 = (px + py) / 2.0;
    let q3 = (pi - pz) / 2.0;
    let q4 = (px - py) / 2.0;
    [q1 + q4, q1 - q4, q2 + q3, q2 - q3]
}

pub fn ppt_one_pair(d: &PauliDist4) -> bool {
    partial_transpose_eigenvalues(d).iter().all(|&e| e >= -PPT_TOL)
}

/// Joint error distribution over two pairs, indexed `4 * Q1 + Q2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct TwoPairDist([f64; 16]);

impl TwoPairDist {
    pub fn new(q: [f64; 16]) -> Result<Self> {
        ProbVec::new(q.to_vec())?;
        Ok(Self(q))
    }

    pub fn renormalize(q: [f64; 16]) -> Result<Self> {
        let v = ProbVec::renormalize(q.to_vec())?;
        let mut out = [0.0; 16];
        out.copy_from_slice(v.as_slice());
        Ok(Self(out))
    }

    pub(crate) fn from_array_unchecked(q: [f64; 16]) -> Self {
        Self(q)
    }

    /// Point mass on one pair of labels.
    pub fn delta(q1: PauliLabel, q2: PauliLabel) -> Self {
        let mut q = [0.0; 16];
        q[4 * q1.index() + q2.index()] = 1.0;
        Self(q)
    }

    /// Independent errors `a (x) b`.
    pub fn product(a: &PauliDist4, b: &PauliDist4) -> Self {
        let mut q = [0.0; 16];
        for i in 0..4 {
            for j in 0..4 {
                q[4 * i + j] = a.0[i] * b.0[j];
            }
        }
        Self(q)
    }

    pub fn iid(d: &PauliDist4) -> Self {
        Self::product(d, d)
    }

    #[inline]
    pub fn get(&self, q1: PauliLabel, q2: PauliLabel) -> f64 {
        self.0[4 * q1.index() + q2.index()]
    }

    pub fn probs(&self) -> &[f64; 16] {
        &self.0
    }

    /// Exchange the roles of the two pairs.
    pub fn swapped(&self) -> Self {
        let mut q = [0.0; 16];
        for i in 0..4 {
            for j in 0..4 {
                q[4 * j + i] = self.0[4 * i + j];
            }
        }
        Self(q)
    }

    pub fn is_swap_invariant(&self, tol: f64) -> bool {
        let s = self.swapped();
        self.0.iter().zip(s.0.iter()).all(|(a, b)| (a - b).abs() <= tol)
    }

    pub fn entropy(&self) -> f64 {
        crate::pauli::entropy_bits(&self.0)
    }

    pub fn to_bell_diag(&self) -> BellDiagDist {
        BellDiagDist { n: 2, alpha: self.0.to_vec() }
    }
}

impl TryFrom<Vec<f64>> for TwoPairDist {
    type Error = DistillError;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        let arr: [f64; 16] = v
            .try_into()
            .map_err(|v: Vec<f64>| DistillError::Contract(format!("expected 16 probabilities, got {}", v.len())))?;
        TwoPairDist::new(arr)
    }
}

impl From<TwoPairDist> for Vec<f64> {
    fn from(t: TwoPairDist) -> Self {
        t.0.to_vec()
    }
}

/// Bell-diagonal state on `n` pairs: weights over the `4^n` Bell strings in
/// [`BellString::index`] order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BellDiagDist {
    n: usize,
    alpha: Vec<f64>,
}

impl BellDiagDist {
    /// Largest pair count accepted by [`ppt_bell_diagonal`].
    pub const MAX_PPT_PAIRS: usize = 8;

    pub fn new(n: usize, alpha: Vec<f64>) -> Result<Self> {
        if n == 0 || n > 16 {
            return Err(domain(format!("pair count {n} outside 1..=16")));
        }
        if alpha.len() != 1usize << (2 * n) {
            return Err(DistillError::Contract(format!(
                "{} weights supplied for {n} pairs (need {})",
                alpha.len(),
                1usize << (2 * n)
            )));
        }
        ProbVec::new(alpha.clone())?;
        Ok(Self { n, alpha })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        let len = 1usize << (2 * n);
        Self::new(n, vec![1.0 / len as f64; len])
    }

    pub fn from_pauli(d: &PauliDist4) -> Self {
        Self { n: 1, alpha: d.0.to_vec() }
    }

    pub fn pairs(&self) -> usize {
        self.n
    }

    pub fn weights(&self) -> &[f64] {
        &self.alpha
    }

    pub fn weight(&self, s: &BellString) -> f64 {
        self.alpha[s.index()]
    }
}

/// Values `sum_s alpha_s (-1)^{N_11(s xor m)}` for every `m`, indexed like the weights.
///
/// The sign kernel factorizes over pairs, so this is a separable 4x4 transform
/// applied along each pair axis.
pub fn partial_transpose_diagonal(a: &BellDiagDist) -> Vec<f64> {
    // kernel[m][s] = -1 iff s xor m is the Y label
    let mut kernel = [[0.0f64; 4]; 4];
    for (m, row) in kernel.iter_mut().enumerate() {
        for (s, k) in row.iter_mut().enumerate() {
            let l = PauliLabel::ALL[m].product(PauliLabel::ALL[s]);
            *k = if l == PauliLabel::Y { -1.0 } else { 1.0 };
        }
    }
    let mut v = a.alpha.clone();
    let len = v.len();
    let mut stride = 1;
    for _ in 0..a.n {
        let block = stride * 4;
        for base in (0..len).step_by(block) {
            for off in 0..stride {
                let idx = |d: usize| base + off + d * stride;
                let x = [v[idx(0)], v[idx(1)], v[idx(2)], v[idx(3)]];
                for (m, row) in kernel.iter().enumerate() {
                    v[idx(m)] = row.iter().zip(x.iter()).map(|(k, xv)| k * xv).sum();
                }
            }
        }
        stride = block;
    }
    v
}

pub fn ppt_bell_diagonal(a: &BellDiagDist) -> Result<bool> {
    if a.n > BellDiagDist::MAX_PPT_PAIRS {
        return Err(DistillError::Capacity(format!(
            "PPT test enumerates 4^n weights; n = {} exceeds {}",
            a.n,
            BellDiagDist::MAX_PPT_PAIRS
        )));
    }
    Ok(partial_transpose_diagonal(a).iter().all(|&v| v >= -PPT_TOL))
}

/// Amplitude damping channel with decay probability `gamma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ADChannel {
    gamma: f64,
}

impl ADChannel {
    pub fn new(gamma: f64) -> Result<Self> {
        check_unit("gamma", gamma)?;
        Ok(Self { gamma })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Kraus operators `A0 = diag(1, sqrt(1-g))`, `A1 = sqrt(g) |0><1|`, row-major.
    pub fn kraus(&self) -> [[[f64; 2]; 2]; 2] {
        let g = self.gamma;
        [[[1.0, 0.0], [0.0, (1.0 - g).sqrt()]], [[0.0, g.sqrt()], [0.0, 0.0]]]
    }
}

pub(crate) fn check_probability(name: &str, p: f64) -> Result<()> {
    check_unit(name, p)
}
