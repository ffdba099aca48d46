//! Eigenvalue counting near an energy for dense Hermitian matrices.
//!
//! The crate answers one family of questions: *how many eigenvalues of a
//! Hermitian matrix lie within `eps` of an energy `E`, and what does that
//! force elsewhere?* Around that core it provides:
//!
//! * **Counting and certificates** ([`eigen`], [`witness`]) — strict-interval
//!   eigenvalue counts, and searches for index-pair *witnesses*: small
//!   principal blocks of `A^{-1}` whose product dominates `(K/eps)^2`, which
//!   certifies a lower bound on the count without touching the full
//!   spectrum.
//! * **Shift-and-invert reduction** ([`reduction`]) — replace `B1 + B2` by
//!   the norm-bounded `(B1-a)^{-1} + (B2+a)^{-1}` with an integer shift `a`,
//!   with explicit two-sided count comparisons, plus the count-stability and
//!   determinant-dichotomy checks that make the comparison usable.
//! * **Random block Hamiltonians** ([`models`]) — scalar, block, and
//!   particle-hole-symmetric site disorder on finite graphs, with exact
//!   single-site regularity measures (interval lengths, annulus areas).
//! * **Monte Carlo drivers** ([`wegner`]) — reproducible estimates of
//!   count-probability and small-determinant events with Wilson intervals
//!   and log-log scaling fits.
//!
//! Determinism is a contract, not an accident: every random draw flows from
//! counter-based streams keyed by `(master seed, trial, site)` ([`rng`]),
//! and all aggregation is order-fixed, so identical seeds give byte-identical
//! reports at any thread count.

pub mod config;
pub mod eigen;
pub mod error;
pub mod lu;
pub mod matrix;
pub mod models;
pub mod reduction;
pub mod rng;
pub mod schur;
pub mod synth;
pub mod verify;
pub mod wegner;
pub mod witness;

pub use error::{Error, Result};
pub use matrix::{ComplexMatrix, HermitianMatrix, IndexSet, MatrixDocument};
