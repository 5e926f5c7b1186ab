//! Symplectic Pauli algebra and the entropy utilities every protocol leans on.
//!
//! Single-qubit labels are always ordered `I < X < Y < Z`, and every 4-vector
//! or 16-table in the crate is indexed in that order. A label carries the
//! symplectic bits `(x, z)` of `X^x Z^z`, which for a Bell pair is the same
//! as naming the Bell state `|B_{x,z}>`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{contract, domain, DistillError, Result};

/// Tolerance on `|sum - 1|` accepted when constructing a probability vector.
pub const PROB_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PauliLabel {
    I,
    X,
    Y,
    Z,
}

impl PauliLabel {
    pub const ALL: [PauliLabel; 4] = [PauliLabel::I, PauliLabel::X, PauliLabel::Y, PauliLabel::Z];
    /// The three non-identity checks, in index order.
    pub const CHECKS: [PauliLabel; 3] = [PauliLabel::X, PauliLabel::Y, PauliLabel::Z];

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    /// Symplectic bits `(x, z)`.
    #[inline]
    pub fn bits(self) -> (bool, bool) {
        match self {
            PauliLabel::I => (false, false),
            PauliLabel::X => (true, false),
            PauliLabel::Y => (true, true),
            PauliLabel::Z => (false, true),
        }
    }

    #[inline]
    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => PauliLabel::I,
            (true, false) => PauliLabel::X,
            (true, true) => PauliLabel::Y,
            (false, true) => PauliLabel::Z,
        }
    }

    /// Product up to phase.
    #[inline]
    pub fn product(self, other: PauliLabel) -> PauliLabel {
        let (a, b) = self.bits();
        let (c, d) = other.bits();
        PauliLabel::from_bits(a ^ c, b ^ d)
    }

    pub fn as_char(self) -> char {
        match self {
            PauliLabel::I => 'I',
            PauliLabel::X => 'X',
            PauliLabel::Y => 'Y',
            PauliLabel::Z => 'Z',
        }
    }
}

impl fmt::Display for PauliLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

impl TryFrom<char> for PauliLabel {
    type Error = DistillError;

    fn try_from(c: char) -> Result<Self> {
        match c.to_ascii_uppercase() {
            'I' => Ok(PauliLabel::I),
            'X' => Ok(PauliLabel::X),
            'Y' => Ok(PauliLabel::Y),
            'Z' => Ok(PauliLabel::Z),
            other => Err(domain(format!("unknown Pauli label '{other}'"))),
        }
    }
}

impl FromStr for PauliLabel {
    type Err = DistillError;

    fn from_str(s: &str) -> Result<Self> {
        let mut chars = s.trim().chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) => PauliLabel::try_from(c),
            _ => Err(domain(format!("expected a single Pauli label, got '{s}'"))),
        }
    }
}

/// Symplectic string over `n` pairs: bit `i` of `x`/`z` belongs to pair `i`.
///
/// Doubles as an `n`-qubit Pauli string (up to phase) and as the label of the
/// `n`-pair Bell state `|B_s>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BellString {
    n: usize,
    x: u64,
    z: u64,
}

impl BellString {
    pub const MAX_PAIRS: usize = 64;

    pub fn identity(n: usize) -> Result<Self> {
        if n == 0 || n > Self::MAX_PAIRS {
            return Err(domain(format!("pair count {n} outside 1..={}", Self::MAX_PAIRS)));
        }
        Ok(Self { n, x: 0, z: 0 })
    }

    pub fn from_pairs(pairs: &[(bool, bool)]) -> Result<Self> {
        let mut s = Self::identity(pairs.len())?;
        for (i, &(x, z)) in pairs.iter().enumerate() {
            s.set(i, PauliLabel::from_bits(x, z));
        }
        Ok(s)
    }

    pub fn from_labels(labels: &[PauliLabel]) -> Result<Self> {
        let mut s = Self::identity(labels.len())?;
        for (i, &l) in labels.iter().enumerate() {
            s.set(i, l);
        }
        Ok(s)
    }

    /// Inverse of [`BellString::index`]: pair 0 is the most significant base-4 digit.
    pub fn from_index(n: usize, mut index: usize) -> Result<Self> {
        let mut s = Self::identity(n)?;
        for i in (0..n).rev() {
            s.set(i, PauliLabel::ALL[index & 3]);
            index >>= 2;
        }
        Ok(s)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> PauliLabel {
        PauliLabel::from_bits((self.x >> i) & 1 == 1, (self.z >> i) & 1 == 1)
    }

    pub fn set(&mut self, i: usize, label: PauliLabel) {
        assert!(i < self.n, "pair index {i} out of range for length {}", self.n);
        let (x, z) = label.bits();
        self.x = (self.x & !(1 << i)) | ((x as u64) << i);
        self.z = (self.z & !(1 << i)) | ((z as u64) << i);
    }

    pub fn labels(&self) -> Vec<PauliLabel> {
        (0..self.n).map(|i| self.get(i)).collect()
    }

    /// Position in the `4^n` table with label order `I,X,Y,Z` per pair.
    pub fn index(&self) -> usize {
        (0..self.n).fold(0, |acc, i| acc * 4 + self.get(i).index())
    }

    pub fn xor(&self, other: &BellString) -> Result<BellString> {
        check_len(self, other)?;
        Ok(BellString { n: self.n, x: self.x ^ other.x, z: self.z ^ other.z })
    }

    /// Number of pairs in the `|B_11>` state (label `Y`).
    pub fn count_y(&self) -> u32 {
        (self.x & self.z).count_ones()
    }
}

impl fmt::Display for BellString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            write!(f, "{}", self.get(i))?;
        }
        Ok(())
    }
}

impl FromStr for BellString {
    type Err = DistillError;

    fn from_str(s: &str) -> Result<Self> {
        let labels = s.trim().chars().map(PauliLabel::try_from).collect::<Result<Vec<_>>>()?;
        BellString::from_labels(&labels)
    }
}

fn check_len(s: &BellString, t: &BellString) -> Result<()> {
    if s.n != t.n {
        return Err(contract(format!("length mismatch: {} vs {}", s.n, t.n)));
    }
    Ok(())
}

/// Symplectic inner product: 0 when the strings commute, 1 when they anticommute.
pub fn symplectic_commutes(s: &BellString, t: &BellString) -> Result<u8> {
    check_len(s, t)?;
    let parity = ((s.x & t.z) ^ (s.z & t.x)).count_ones() & 1;
    Ok(parity as u8)
}

/// `+1` if the Pauli strings commute, `-1` otherwise.
pub fn commutation_sign(p: &BellString, q: &BellString) -> Result<i8> {
    Ok(if symplectic_commutes(p, q)? == 0 { 1 } else { -1 })
}

/// Nonnegative weights over a finite label set summing to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct ProbVec(Vec<f64>);

impl ProbVec {
    /// Rejects negative or non-finite entries and sums farther than [`PROB_TOL`] from 1.
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        validate_weights(&entries)?;
        let sum: f64 = entries.iter().sum();
        if (sum - 1.0).abs() > PROB_TOL {
            return Err(contract(format!("probabilities sum to {sum}, not 1")));
        }
        Ok(Self(entries))
    }

    /// Scales nonnegative weights to unit mass.
    pub fn renormalize(entries: Vec<f64>) -> Result<Self> {
        validate_weights(&entries)?;
        let sum: f64 = entries.iter().sum();
        if sum <= 0.0 {
            return Err(contract("cannot renormalize zero total mass"));
        }
        Ok(Self(entries.into_iter().map(|p| p / sum).collect()))
    }

    pub(crate) fn from_vec_unchecked(entries: Vec<f64>) -> Self {
        Self(entries)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entropy(&self) -> f64 {
        entropy_bits(&self.0)
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

impl TryFrom<Vec<f64>> for ProbVec {
    type Error = DistillError;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        ProbVec::new(v)
    }
}

impl From<ProbVec> for Vec<f64> {
    fn from(p: ProbVec) -> Self {
        p.0
    }
}

pub(crate) fn validate_weights(entries: &[f64]) -> Result<()> {
    if let Some((i, p)) = entries.iter().enumerate().find(|(_, p)| !p.is_finite() || **p < 0.0) {
        return Err(contract(format!("entry {i} is {p}; probabilities must be finite and nonnegative")));
    }
    Ok(())
}

/// `-x log2 x`, exactly zero at `x = 0`.
#[inline]
pub(crate) fn neg_xlog2x(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        -x * x.log2()
    }
}

#[inline]
pub(crate) fn entropy_bits(p: &[f64]) -> f64 {
    p.iter().map(|&x| neg_xlog2x(x)).sum()
}

/// Binary entropy without domain checks, for internally produced ratios.
#[inline]
pub(crate) fn hb(x: f64) -> f64 {
    neg_xlog2x(x) + neg_xlog2x(1.0 - x)
}

/// Shannon entropy in bits of a distribution; `0 log 0 = 0`.
pub fn shannon_entropy(p: &[f64]) -> Result<f64> {
    validate_weights(p)?;
    Ok(entropy_bits(p))
}

pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(domain(format!("binary entropy argument {x} outside [0, 1]")));
    }
    Ok(hb(x))
}

/// Entropy of `p0 * A (+) (1 - p0) * B` for orthogonal blocks with entropies `S0`, `S1`.
pub fn entropy_of_direct_sum(p0: f64, s0: f64, s1: f64) -> Result<f64> {
    if s0 < 0.0 || s1 < 0.0 {
        return Err(domain("block entropies must be nonnegative"));
    }
    let h = binary_entropy(p0)?;
    Ok(p0 * s0 + (1.0 - p0) * s1 + h)
}

/// `-x log2 x - y log2 y + (x+y) log2(x+y)`, the entropy lost by merging two outcomes.
pub fn grouping_gain(x: f64, y: f64) -> Result<f64> {
    if x < 0.0 || y < 0.0 {
        return Err(domain("grouping arguments must be nonnegative"));
    }
    Ok(neg_xlog2x(x) + neg_xlog2x(y) - neg_xlog2x(x + y))
}

/// `cd(a^2+b^2) - ab(c^2+d^2)`; nonnegative whenever `a >= c >= d >= b`.
pub fn amgm_ratio_gap(a: f64, b: f64, c: f64, d: f64) -> f64 {
    c * d * (a * a + b * b) - a * b * (c * c + d * d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(s: &str) -> BellString {
        s.parse().unwrap()
    }

    #[test]
    fn label_bits_round_trip() {
        for l in PauliLabel::ALL {
            let (x, z) = l.bits();
            assert_eq!(PauliLabel::from_bits(x, z), l);
            assert_eq!(PauliLabel::from_index(l.index()), Some(l));
        }
        assert_eq!(PauliLabel::X.product(PauliLabel::Z), PauliLabel::Y);
    }

    #[test]
    fn commutation_examples() {
        assert_eq!(symplectic_commutes(&ps("X"), &ps("Z")).unwrap(), 1);
        for p in ["I", "X", "Y", "Z", "XZ", "YYZI"] {
            assert_eq!(symplectic_commutes(&ps(p), &ps(p)).unwrap(), 0);
        }
        assert_eq!(symplectic_commutes(&ps("XZ"), &ps("ZZ")).unwrap(), 1);
        assert_eq!(commutation_sign(&ps("Y"), &ps("Y")).unwrap(), 1);
        assert_eq!(commutation_sign(&ps("X"), &ps("Y")).unwrap(), -1);
        assert_eq!(commutation_sign(&ps("ZZZZ"), &ps("XIIX")).unwrap(), 1);
    }

    #[test]
    fn length_mismatch_is_contract_error() {
        let err = symplectic_commutes(&ps("X"), &ps("XZ")).unwrap_err();
        assert!(matches!(err, DistillError::Contract(_)));
        assert!(commutation_sign(&ps("XX"), &ps("X")).is_err());
    }

    #[test]
    fn index_round_trip() {
        for n in 1..=3 {
            for idx in 0..4usize.pow(n as u32) {
                let s = BellString::from_index(n, idx).unwrap();
                assert_eq!(s.index(), idx);
            }
        }
        assert_eq!(ps("XZ").index(), 4 + 3);
        assert_eq!(ps("YIY").count_y(), 2);
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(shannon_entropy(&[1.0, 0.0, 0.0, 0.0]).unwrap(), 0.0);
        assert_eq!(shannon_entropy(&[0.25; 4]).unwrap(), 2.0);
        assert!(shannon_entropy(&[0.5, -0.1, 0.6]).is_err());
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert!(binary_entropy(1.5).is_err());
        assert!(binary_entropy(-0.01).is_err());
        for x in [0.01, 0.1, 0.3, 0.77] {
            assert!((binary_entropy(x).unwrap() - binary_entropy(1.0 - x).unwrap()).abs() < 1e-15);
        }
    }

    #[test]
    fn direct_sum_examples() {
        assert_eq!(entropy_of_direct_sum(1.0, 0.7, 3.0).unwrap(), 0.7);
        assert_eq!(entropy_of_direct_sum(0.5, 1.0, 1.0).unwrap(), 2.0);
        assert!(entropy_of_direct_sum(1.2, 0.0, 0.0).is_err());
        assert!(entropy_of_direct_sum(0.5, -1.0, 0.0).is_err());
    }

    #[test]
    fn probvec_validation() {
        assert!(ProbVec::new(vec![0.5, 0.5]).is_ok());
        assert!(ProbVec::new(vec![0.5, 0.5 + 1e-11]).is_err());
        assert!(ProbVec::new(vec![1.5, -0.5]).is_err());
        let r = ProbVec::renormalize(vec![1.0, 3.0]).unwrap();
        assert_eq!(r.as_slice(), &[0.25, 0.75]);
        assert!(ProbVec::renormalize(vec![0.0, 0.0]).is_err());
    }

    #[test]
    fn grouping_boundary() {
        assert_eq!(grouping_gain(0.0, 0.0).unwrap(), 0.0);
        assert_eq!(grouping_gain(0.3, 0.0).unwrap(), 0.0);
        assert!((grouping_gain(0.25, 0.25).unwrap() - 0.5).abs() < 1e-15);
    }
}
