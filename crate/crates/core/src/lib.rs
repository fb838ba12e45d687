//! Chain algebras of finite distributive lattices.
//!
//! A poset `P` determines the distributive lattice `L = J(P)` of its order
//! ideals. Every maximal chain of `L` gives a squarefree monomial in the
//! interior elements of `L`; the algebra these monomials generate is the
//! chain algebra. This crate builds those objects and checks their structure
//! exactly:
//!
//! * [`poset`], [`lattice`]: posets, width, Birkhoff lattices, grid embeddings.
//! * [`chains`]: maximal chains, the equal-rank exchange graph, Krull
//!   dimension, and the lattice of chains of a planar lattice.
//! * [`sorting`]: the sorting operator on monomial pairs and Hibi relations.
//! * [`toric`]: fibers, minimal generators and Buchberger certification of
//!   the defining toric ideal.
//! * [`hilbert`]: Hilbert series of planar chain algebras from standard
//!   Young tableaux of the cell shape.
//! * [`nonplanar`]: induced-cycle witnesses of high-degree minimal generators.
//! * [`corpus`]: all small posets up to isomorphism and the invariant battery.
//!
//! Counting and rank routines are generic over the scalar type (see
//! [`scalar`]); the aliases below fix the arbitrary-precision defaults.

pub mod budget;
pub mod chains;
pub mod corpus;
pub mod error;
pub mod hilbert;
pub mod lattice;
pub mod linalg;
pub mod monomial;
pub mod nonplanar;
pub mod poset;
pub mod scalar;
pub mod sorting;
pub mod toric;

pub use budget::Budgets;
pub use error::{Error, Result};
pub use lattice::{DistLattice, GridEmbedding};
pub use monomial::Monomial;
pub use poset::{parse_poset, ChainDecomposition, Poset};

/// Hilbert series with arbitrary-precision coefficients.
pub type HilbertSeries = hilbert::Series<num_bigint::BigUint>;
/// Hilbert series with machine-word coefficients; overflow is an error.
pub type HilbertSeriesU64 = hilbert::Series<u64>;
/// Ascent distribution with arbitrary-precision counts.
pub type AscentCounts = Vec<num_bigint::BigUint>;
/// Default exact ring for fraction-free elimination.
pub type ExactInteger = num_bigint::BigInt;
