//! Yields of two-way entanglement distillation over amplitude damping and
//! Pauli channels.
//!
//! Pauli errors on Bell pairs are handled in the symplectic picture: a label
//! `I, X, Y, Z` is a bit pair `(x, z)`, a string of them is a Bell string, and
//! every check circuit acts on strings as an affine bit map. On top of that
//! sit closed-form channel maps for recurrence, the hashing interpolation
//! protocol and the four-pair cascade, an optimizer combining them, and a
//! Monte-Carlo cross-check of every analytic distribution.

pub mod ad;
pub mod aepp;
pub mod channels;
pub mod combined;
pub mod curve;
pub mod error;
pub mod mc;
pub mod pauli;
pub mod recurrence;
pub mod validate;
pub mod vv;

pub use channels::{PauliDist4, Perm4, PermutationGroup, TwoPairDist};
pub use error::{DistillError, Result};
pub use pauli::{BellString, PauliLabel, ProbVec};
