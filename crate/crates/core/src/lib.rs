//! Exact computer algebra for rational algebraic K-theory of connective ring
//! spectra.
//!
//! The crate computes Hochschild homology of free graded-commutative
//! Q-algebras together with Connes' B-operator, its kernel, image and de Rham
//! homology, and assembles the resulting Poincaré series of K-theory spectra
//! such as `K(ku)`, `K(KU)` and `K(MU)`. Every scalar is an arbitrary
//! precision rational; there is no floating point anywhere.
//!
//! Module map:
//!
//! - [`series`]: truncated power series and rational functions in `t`.
//! - [`linalg`]: exact matrices, fraction-free rank, nullspaces.
//! - [`galg`]: free graded-commutative algebras, Koszul signs, derivations.
//! - [`hochschild`]: closed-form HH models and the B-operator as matrices.
//! - [`bar_oracle`]: brute-force normalized Hochschild complex, used to
//!   cross-check [`hochschild`].
//! - [`kassembly`]: spectrum descriptors, K-theory series assembly and the
//!   verification suite.

pub mod bar_oracle;
pub mod galg;
pub mod hochschild;
pub mod kassembly;
pub mod linalg;
pub mod series;

pub use galg::{AlgebraSpec, FreeGradedAlgebra, Generator, Monomial};
pub use hochschild::HHModel;
pub use kassembly::{Preset, SpectrumDescriptor};
pub use series::{RationalFunction, TruncatedSeries};

/// Exact scalar used throughout the crate.
pub type Rational = num_rational::BigRational;

pub(crate) fn rational_from_i64(n: i64) -> Rational {
    Rational::from_integer(n.into())
}
