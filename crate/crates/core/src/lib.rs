//! Exact analysis of transformation semigroups generated by edge colorings of
//! regular out-degree digraphs.
//!
//! The crate builds the induced action of functions on `ℓ`-subsets (the
//! subset hierarchy), generates the semigroup of a color system, extracts its
//! kernel with Rees coordinates, computes the idempotent limit measure of the
//! random walk on the semigroup and the invariant fields derived from it, and
//! classifies two-color systems whose kernel has rank `n - 1`.
//!
//! All computations are exact over [`Rational`]; floating point appears only
//! in [`projection::abel_numeric`].

pub mod analysis;
pub mod classify;
pub mod error;
pub mod fields;
pub mod hierarchy;
pub mod kernel;
pub mod matrix;
pub mod measure;
pub mod projection;
pub mod rational;
pub mod semigroup;
pub mod subset;
pub mod transformation;

pub use analysis::Analysis;
pub use error::{Error, Result};
pub use matrix::Matrix;
pub use rational::Rational;
pub use semigroup::{ColorSystem, SemigroupTable};
pub use subset::SubsetIndex;
pub use transformation::Transformation;
