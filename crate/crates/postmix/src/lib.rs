//! Exact analysis of bit-flip errors in postselected CNOT gadgets.
//!
//! The crate tracks the full joint distribution of X-type (bit-flip) errors
//! across the wires of small stabilizer circuits built from noisy CNOT
//! gates, conditions those distributions on postselected measurement
//! outcomes, and certifies when a correlated output distribution is no worse
//! than independent noise: a mixture of product distributions with bounded
//! per-wire rates.
//!
//! Main layers, bottom up:
//!
//! * [`pattern`] / [`dist`] — error patterns as bitmasks over up to 24
//!   wires, and dense distributions over them (floats or exact rationals,
//!   via the [`scalar::Scalar`] abstraction).
//! * [`transform`] — fast superset-lattice zeta/Möbius transforms, the
//!   O(n·2ⁿ) workhorse behind everything else.
//! * [`mixing`] — decomposition of a distribution into a signed combination
//!   of bounded product "vertices", hull-membership certificates, and the
//!   minimal uniform rate admitting a nonnegative mixture.
//! * [`quotient`] — folding four-wire output distributions modulo the
//!   logical-error symmetry and embedding the folded classes back as
//!   distributions amenable to the mixing analysis.
//! * [`gadget`] — circuit-level error propagation: noisy CNOT pairs,
//!   teleported CNOTs, postselected checks; exact conditional output
//!   distributions and a Monte Carlo sampler over the same semantics.
//! * [`oracle`] — independent cross-checks: a rational linear-algebra
//!   solver for the mixing decomposition and a brute-force state-vector
//!   simulator for the circuits.
//! * [`threshold`] — the level-to-level noise-rate map induced by the
//!   postselected gadget and the numerical threshold estimate below which
//!   iterated rates contract doubly exponentially.

pub mod dist;
pub mod error;
pub mod mixing;
pub mod oracle;
pub mod pattern;
pub mod quotient;
pub mod scalar;
pub mod transform;

pub use dist::{ErrorDistribution, ProductParams};
pub use error::Error;
pub use mixing::{
    check_hull_membership, check_hull_membership_refined, min_uniform_parameter,
    mixing_coefficients, reconstruct, vertex_distribution, HullVerdict, MixtureDecomposition,
};
pub use pattern::ErrorPattern;
pub use quotient::{
    embed_distribution, fold_distribution, lift_decomposition, verify_embedding_properties,
    QuotientClass, QuotientDistribution,
};
pub use scalar::{Rational, Scalar};
