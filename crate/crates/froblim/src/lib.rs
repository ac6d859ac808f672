//! Exact computation of Frobenius pushforward decompositions over twisted
//! group algebras B*G in prime characteristic.
//!
//! The crate builds the graded polynomial ring B over F_q, closes a finite
//! group G of graded automorphisms, forms Q-graded B*G-lattices and their
//! Frobenius pushforwards, and decomposes the pushforwards into
//! indecomposables with exact-rational bookkeeping in the Grothendieck
//! group modulo degree shifts. On top of that sit normalized Frobenius
//! sequences and their limits, generalized F-signature estimates,
//! Hilbert-Kunz multiplicities of invariant rings, and an independent
//! conic-class verification track for two-dimensional affine semigroup
//! cones.
//!
//! Everything is exact: field arithmetic in F_q, polynomial arithmetic,
//! linear algebra, and rational coefficients. No floating point enters any
//! computation; decimal renderings exist only in CSV output and are
//! flagged approximate there.
//!
//! The `examples/` directory is the front door: each example is a runnable
//! walkthrough of one capability. A thin `froblim` binary drives complete
//! scenario files (see `scenarios/`) and emits canonical JSON and CSV
//! reports.

pub mod conic;
pub mod error;
pub mod fdalg;
pub mod fdmod;
pub mod field;
pub mod groebner;
pub mod group;
pub mod hk;
pub mod hom;
pub mod invar;
pub mod krull;
pub mod lattice;
pub mod limits;
pub mod linalg;
pub mod peel;
pub mod poly;
pub mod report;
pub mod repdecomp;
pub mod runner;
pub mod scenario;
pub mod theta;
pub mod unipoly;

pub use error::{Error, Result};
pub use field::FieldSpec;
pub use poly::{Mono, Poly, RingSpec};
